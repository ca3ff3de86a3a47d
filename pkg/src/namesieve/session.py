"""Interactive selection state: decisions, presentation order, export.

A session records accept/reject verdicts per cluster plus an action log.
Log entries carry a logical sequence number rather than wall-clock time so
that identical decision sequences (from the terminal dialog or the web UI)
produce byte-identical session files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .clusters import min_distance_between
from .ingest import render_export
from .records import Corpus

SESSION_SCHEMA_VERSION = 1

UNDECIDED = "undecided"
ACCEPTED = "accepted"
REJECTED = "rejected"
VERDICTS = (ACCEPTED, REJECTED, UNDECIDED)

MODES = ("by_citations", "by_size", "by_distance_to_selected")
DEFAULT_CUTOFF = 3.0

# printed wherever a distance-to-selected is undefined (nothing accepted yet)
NO_SELECTION_SENTINEL = "******"


@dataclass
class SelectionSession:
    corpus_hash: str
    corpus_name: str = ""
    decisions: dict = field(default_factory=dict)
    presentation_mode: str = "by_citations"
    cutoff: float = DEFAULT_CUTOFF
    log: list = field(default_factory=list)

    def __post_init__(self):
        if self.cutoff <= 0:
            raise ValueError("cutoff must be positive")
        if self.presentation_mode not in MODES:
            raise ValueError(f"unknown presentation mode {self.presentation_mode!r}")

    @classmethod
    def fresh(cls, corpus: Corpus, clusters, name: str = "") -> "SelectionSession":
        return cls(
            corpus_hash=corpus.content_hash(),
            corpus_name=name or corpus.query_name,
            decisions={c.id: UNDECIDED for c in clusters},
        )

    # -- queries ------------------------------------------------------------

    def status(self, cluster_id: int) -> str:
        self._check_id(cluster_id)
        return self.decisions[cluster_id]

    def ids_with(self, status: str) -> list:
        return sorted(cid for cid, s in self.decisions.items() if s == status)

    def accepted_record_ids(self, clusters) -> set:
        by_id = {c.id: c for c in clusters}
        out = set()
        for cid in self.ids_with(ACCEPTED):
            out |= by_id[cid].member_ids
        return out

    def _check_id(self, cluster_id: int) -> None:
        if cluster_id not in self.decisions:
            raise KeyError(f"unknown cluster id {cluster_id}")

    def _append_log(self, action: str, **params) -> None:
        entry = {"seq": len(self.log), "action": action}
        entry.update(params)
        self.log.append(entry)


def distances_to_selected(session: SelectionSession, clusters, matrix) -> dict:
    """Single-linkage closed distance from each cluster to the accepted set.

    Infinite for every cluster while nothing is accepted (shown as the
    ****** sentinel); zero for accepted clusters themselves.
    """
    selected = session.accepted_record_ids(clusters)
    out = {}
    for cluster in clusters:
        if not selected:
            out[cluster.id] = math.inf
        else:
            out[cluster.id] = min_distance_between(cluster.member_ids, selected, matrix)
    return out


def presentation_order(session: SelectionSession, clusters, matrix) -> list:
    """Cluster ids in the order the current mode presents them."""
    if session.presentation_mode == "by_citations":
        ranked = sorted(clusters, key=lambda c: c.id)
    elif session.presentation_mode == "by_size":
        ranked = sorted(clusters, key=lambda c: (-c.paper_count, c.id))
    else:
        dist = distances_to_selected(session, clusters, matrix)
        ranked = sorted(clusters, key=lambda c: (dist[c.id], c.id))
    return [c.id for c in ranked]


def next_cluster(session: SelectionSession, clusters, matrix, skip=frozenset()):
    """First undecided cluster id under the current presentation mode, or
    None when every cluster is decided (or skipped this pass)."""
    for cid in presentation_order(session, clusters, matrix):
        if session.decisions[cid] == UNDECIDED and cid not in skip:
            return cid
    return None


def decide(session: SelectionSession, cluster_id: int, verdict: str) -> None:
    """Record a verdict. Any transition is allowed; undecided is the undo."""
    session._check_id(cluster_id)
    if verdict not in VERDICTS:
        raise ValueError(f"unknown verdict {verdict!r}")
    session.decisions[cluster_id] = verdict
    session._append_log("decide", cluster=cluster_id, verdict=verdict)


def decide_all_remaining(session: SelectionSession, verdict: str) -> int:
    """Apply one verdict to every undecided cluster (the all / none verbs)."""
    if verdict not in (ACCEPTED, REJECTED):
        raise ValueError(f"bulk verdict must be accepted or rejected, got {verdict!r}")
    remaining = session.ids_with(UNDECIDED)
    for cid in remaining:
        session.decisions[cid] = verdict
    session._append_log("decide_all", verdict=verdict, count=len(remaining))
    return len(remaining)


def set_mode(session: SelectionSession, mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown presentation mode {mode!r}")
    session.presentation_mode = mode
    session._append_log("mode", mode=mode)


def set_cutoff(session: SelectionSession, cutoff: float) -> None:
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    session.cutoff = float(cutoff)
    session._append_log("cutoff", cutoff=float(cutoff))


def count_beyond_cutoff(session: SelectionSession, clusters, matrix,
                        cutoff: float = None) -> int:
    """How many undecided clusters sit beyond the cutoff (preview; no state
    change). Requires at least one accepted cluster."""
    if not session.ids_with(ACCEPTED):
        raise ValueError("no accepted clusters: distance to selected is undefined")
    cutoff = session.cutoff if cutoff is None else cutoff
    dist = distances_to_selected(session, clusters, matrix)
    return sum(1 for cid in session.ids_with(UNDECIDED) if dist[cid] > cutoff)


def auto_reject_beyond_cutoff(session: SelectionSession, clusters, matrix) -> int:
    """Reject every undecided cluster farther than the cutoff from the
    accepted set. Returns the number rejected."""
    if not session.ids_with(ACCEPTED):
        raise ValueError("no accepted clusters: distance to selected is undefined")
    dist = distances_to_selected(session, clusters, matrix)
    rejected = [cid for cid in session.ids_with(UNDECIDED)
                if dist[cid] > session.cutoff]
    for cid in rejected:
        session.decisions[cid] = REJECTED
    session._append_log("auto_reject", count=len(rejected))
    return len(rejected)


# -- export ------------------------------------------------------------------

def h_index(citations) -> int:
    ranked = sorted(citations, reverse=True)
    h = 0
    for rank, cites in enumerate(ranked, start=1):
        if cites >= rank:
            h = rank
        else:
            break
    return h


def selection_summary(records) -> dict:
    citations = [rec.citations for rec in records]
    years = [y for y in (rec.year_int() for rec in records) if y is not None]
    total = sum(citations)
    return {
        "papers": len(records),
        "citations": total,
        "citations_per_paper": total / len(records) if records else 0.0,
        "year_min": min(years) if years else None,
        "year_max": max(years) if years else None,
        "h_index": h_index(citations),
    }


def export_selection(session: SelectionSession, corpus: Corpus, clusters):
    """Accepted records in source order plus their merit summary.

    Returns (records, summary, export_text); export_text is a filtered
    export in the corpus's own format, usable downstream.
    """
    accepted = session.accepted_record_ids(clusters)
    if not accepted:
        raise ValueError("nothing accepted: select at least one cluster first")
    records = [rec for rec in corpus.records if rec.id in accepted]
    summary = selection_summary(records)
    text = render_export(corpus, record_ids=accepted)
    return records, summary, text


# -- persistence ---------------------------------------------------------------

def session_to_dict(session: SelectionSession) -> dict:
    return {
        "version": SESSION_SCHEMA_VERSION,
        "corpus_hash": session.corpus_hash,
        "corpus_name": session.corpus_name,
        "presentation_mode": session.presentation_mode,
        "cutoff": session.cutoff,
        "decisions": {str(cid): status
                      for cid, status in sorted(session.decisions.items())},
        "log": session.log,
    }


def save_session(session: SelectionSession, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(session_to_dict(session), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_session(path, corpus_hash: str = None) -> SelectionSession:
    """Load a saved session; refuses files written against another corpus."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    version = data.get("version")
    if version != SESSION_SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported session version {version!r}")
    if corpus_hash is not None and data["corpus_hash"] != corpus_hash:
        raise ValueError(
            f"{path}: session was recorded against a different corpus "
            f"(hash {data['corpus_hash'][:12]}..., expected {corpus_hash[:12]}...)"
        )
    return SelectionSession(
        corpus_hash=data["corpus_hash"],
        corpus_name=data.get("corpus_name", ""),
        decisions={int(cid): status for cid, status in data["decisions"].items()},
        presentation_mode=data["presentation_mode"],
        cutoff=data["cutoff"],
        log=data["log"],
    )


def replay(log, corpus: Corpus, clusters, matrix) -> SelectionSession:
    """Rebuild a session by applying a recorded action log to a fresh state.

    On the same corpus this reproduces the final state exactly (auto_reject
    recomputes its rejections from the replayed state).
    """
    session = SelectionSession.fresh(corpus, clusters)
    for entry in log:
        action = entry["action"]
        if action == "decide":
            decide(session, entry["cluster"], entry["verdict"])
        elif action == "decide_all":
            decide_all_remaining(session, entry["verdict"])
        elif action == "mode":
            set_mode(session, entry["mode"])
        elif action == "cutoff":
            set_cutoff(session, entry["cutoff"])
        elif action == "auto_reject":
            auto_reject_beyond_cutoff(session, clusters, matrix)
        else:
            raise ValueError(f"unknown log action {action!r}")
    return session
