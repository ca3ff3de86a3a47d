"""Terminal front-end: interactive selection dialog plus batch subcommands.

Subcommands:
  filter   interactive group-by-group selection dialog, scriptable via stdin
  merit    summary indicators and filtered export for a saved session
  cluster  batch clustering: print the group table and exit
  bench    generate a synthetic corpus, cluster it, report quality metrics
  serve    expose the corpus and one session over HTTP for the web UI
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .clusters import build_clusters
from .coincidence import DEFAULT_FIELD_SIZES, FIELDS, FieldModel
from .distance import LAYERS, build_matrix, close_distances, matrix_csv
from .ingest import (STOPWORDS, ParseError, load_stopwords, parse_export,
                     parse_export_file, render_export)
from .session import (ACCEPTED, MODES, NO_SELECTION_SENTINEL, REJECTED,
                      UNDECIDED, SelectionSession, decide,
                      decide_all_remaining, distances_to_selected,
                      export_selection, load_session, next_cluster,
                      save_session, set_cutoff, set_mode)
from .synth import GeneratorParams, evaluate, generate

# ---------------------------------------------------------------------------
# Dialog format contract. All interactive output is built from these
# constants; field widths are fixed so transcripts are byte-stable and the
# golden test can compare them literally.

HEADER_FMT = "Found {papers:6d} papers in {groups:5d} groups"
GROUP_ROW_FMT = "group, papers, citations ={id:4d}{papers:6d}{citations:8d}"
GROUP_HEADER_FMT = ("Group {id:4d} has {papers:6d} papers and {citations:7d} "
                    "citations in period {period}")
DISTANCE_LINE_FMT = "Distance to selected groups is {distance}   A sample paper is"
DISTANCE_NUM_FMT = "{distance:6.2f}"
TITLE_LINE_FMT = " Title: {title}"
AUTHORS_LINE_FMT = " Authors:  {authors}"
SOURCE_LINE_FMT = " Source:  {source}"
ADDRESS_LINE_PREFIX = " Address words: "
ADDRESS_CONTINUATION = "   "
PROMPT = " Select this group? (y|n|u|all|none|p|c|d|(number)|help): "
PAPERS_PER_PAGE = 3

HELP_TEXT = """\
 y        accept this group (its papers are the query author's)
 n        reject this group
 u        leave this group undecided and move on (it reappears next run)
 all      accept every remaining undecided group
 none     reject every remaining undecided group
 p        show more papers from this group
 c        change the presentation order
 d        show distances from each remaining group to the selected set
 (number) jump to that group
 help     show this message"""

MERIT_FMT = """\
Papers           {papers:6d}
Citations        {citations:6d}
Citations/paper  {cpp:9.2f}
Period           {period}
h-index          {h:6d}"""


# ---------------------------------------------------------------------------
# Shared option handling

def _add_model_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="PATH",
                        help="JSON field-model config (universe sizes)")
    parser.add_argument("--n-docs", type=float, metavar="LOG10",
                        help="override the log10 document-universe size")
    parser.add_argument("--field-size", action="append", default=[],
                        metavar="FIELD=LOG10",
                        help="override one field's log10 universe size "
                             "(repeatable)")


def _add_corpus_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("files", nargs="+", metavar="FILE",
                        help="exported publication files")
    parser.add_argument("--format", choices=("auto", "tagged", "tsv"),
                        default="auto", help="input format (default: auto)")
    parser.add_argument("--query-name", metavar="NAME",
                        help="author name searched for (default: inferred)")
    parser.add_argument("--stopwords", metavar="PATH",
                        help="file with one title stopword per line")
    parser.add_argument("--include-query-name", action="store_true",
                        help="count the query name itself as an author "
                             "coincidence")


def _add_matrix_dump_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dump-matrix", metavar="PATH",
                        help="write the distance matrix as CSV")
    parser.add_argument("--matrix-layer", choices=LAYERS, default="closed",
                        help="which matrix layer to dump (default: closed)")


def build_model(args) -> FieldModel:
    model = FieldModel.from_file(args.config) if args.config else FieldModel()
    sizes = dict(model.field_sizes)
    for item in args.field_size:
        name, eq, value = item.partition("=")
        if not eq or name not in FIELDS:
            known = ", ".join(FIELDS)
            raise ValueError(f"--field-size expects FIELD=LOG10 with FIELD "
                             f"one of: {known} (got {item!r})")
        sizes[name] = float(value)
    n_docs = model.log10_n_docs if args.n_docs is None else args.n_docs
    return FieldModel(log10_n_docs=n_docs, field_sizes=sizes)


def load_corpus(args):
    stopwords = load_stopwords(args.stopwords) if args.stopwords else STOPWORDS
    corpora = [parse_export_file(path, fmt=args.format,
                                 query_name=args.query_name,
                                 stopwords=stopwords)
               for path in args.files]
    if len(corpora) == 1:
        return corpora[0]
    # merge by replaying all record blocks under the first file's framing
    first = corpora[0]
    for other in corpora[1:]:
        if other.source_format != first.source_format:
            raise ParseError("cannot mix tagged and TSV input files")
    lines = list(first.header_lines)
    for corpus in corpora:
        for record in corpus.records:
            lines.extend(record.raw)
    lines.extend(first.trailer_lines)
    data = ("\n".join(lines) + "\n").encode("utf-8")
    return parse_export(data, fmt=first.source_format,
                        query_name=args.query_name, stopwords=stopwords)


def build_pipeline(args):
    corpus = load_corpus(args)
    model = build_model(args)
    matrix = close_distances(build_matrix(
        corpus, model, include_query_name=args.include_query_name))
    clusters = build_clusters(matrix, corpus)
    return corpus, matrix, clusters


def _maybe_dump_matrix(args, matrix) -> None:
    if getattr(args, "dump_matrix", None):
        Path(args.dump_matrix).write_text(
            matrix_csv(matrix, layer=args.matrix_layer), encoding="utf-8")


# ---------------------------------------------------------------------------
# Display helpers

def _format_distance(value: float) -> str:
    if math.isinf(value):
        return NO_SELECTION_SENTINEL
    return DISTANCE_NUM_FMT.format(distance=value)


def _source_display(record) -> str:
    disp = record.display
    parts = [disp.get("source", "")]
    if disp.get("year"):
        parts.append(f" ({disp['year']})")
    if disp.get("volume"):
        parts.append(f" {disp['volume']}")
    if disp.get("page_start"):
        pages = disp["page_start"]
        if disp.get("page_end"):
            pages = f"{pages}:{disp['page_end']}"
        parts.append(f", {pages}")
    return "".join(parts)


def _address_word_lines(record) -> list:
    lines = []
    for block_no, block in enumerate(record.display.get("addresses", [])):
        seen, words = set(), []
        for word in block.upper().replace(",", " ").replace(";", " ").split():
            if word not in seen:
                seen.add(word)
                words.append(word)
        prefix = ADDRESS_LINE_PREFIX if block_no == 0 else ADDRESS_CONTINUATION
        lines.append(prefix + " ".join(words))
    if not lines:
        lines.append(ADDRESS_LINE_PREFIX.rstrip())
    return lines


def _print_paper(record, out) -> None:
    disp = record.display
    authors = "; ".join(disp.get("authors", []))
    if authors:
        authors += ";"
    print(TITLE_LINE_FMT.format(title=disp.get("title", "")), file=out)
    print(AUTHORS_LINE_FMT.format(authors=authors), file=out)
    print(SOURCE_LINE_FMT.format(source=_source_display(record)), file=out)


def _print_group_table(clusters, n_records, out) -> None:
    print(HEADER_FMT.format(papers=n_records, groups=len(clusters)), file=out)
    for cluster in clusters:
        print(GROUP_ROW_FMT.format(id=cluster.id, papers=cluster.paper_count,
                                   citations=cluster.total_citations),
              file=out)


def _print_group_block(cluster, corpus, distance, out) -> None:
    print(GROUP_HEADER_FMT.format(id=cluster.id, papers=cluster.paper_count,
                                  citations=cluster.total_citations,
                                  period=cluster.period), file=out)
    print(DISTANCE_LINE_FMT.format(distance=_format_distance(distance)),
          file=out)
    representative = corpus.records[cluster.representative_id]
    _print_paper(representative, out)
    for line in _address_word_lines(representative):
        print(line, file=out)


def _ranked_members(cluster, corpus) -> list:
    def key(rec_id):
        rec = corpus.records[rec_id]
        year = rec.year_int()
        return (-rec.citations, year if year is not None else math.inf, rec_id)
    return sorted(cluster.member_ids, key=key)


# ---------------------------------------------------------------------------
# filter: the interactive dialog

def _default_session_path(args) -> Path:
    if args.session:
        return Path(args.session)
    return Path(args.files[0] + ".session.json")


def _open_session(args, corpus, clusters) -> SelectionSession:
    path = _default_session_path(args)
    if path.exists():
        session = load_session(path, corpus_hash=corpus.content_hash())
        missing = set(c.id for c in clusters) - set(session.decisions)
        if missing:
            raise ValueError(f"{path}: session lacks clusters {sorted(missing)}")
        return session
    return SelectionSession.fresh(corpus, clusters,
                                  name=corpus.query_name or "")


def cmd_filter(args) -> int:
    out = sys.stdout
    corpus, matrix, clusters = build_pipeline(args)
    _maybe_dump_matrix(args, matrix)
    session = _open_session(args, corpus, clusters)
    if args.cutoff is not None and args.cutoff != session.cutoff:
        set_cutoff(session, args.cutoff)

    by_id = {c.id: c for c in clusters}
    _print_group_table(clusters, len(corpus), out)

    skipped = set()
    pages = {}
    current = next_cluster(session, clusters, matrix, skip=frozenset(skipped))
    show_block = True
    try:
        while current is not None:
            cluster = by_id[current]
            if show_block:
                dist = distances_to_selected(session, clusters, matrix)
                print(file=out)
                _print_group_block(cluster, corpus, dist[current], out)
            show_block = True
            try:
                answer = input(PROMPT).strip()
            except EOFError:
                print(file=out)
                break
            print(answer, file=out)

            if answer in ("y", "n"):
                verdict = ACCEPTED if answer == "y" else REJECTED
                decide(session, current, verdict)
                current = next_cluster(session, clusters, matrix,
                                       skip=frozenset(skipped))
            elif answer == "u":
                skipped.add(current)
                current = next_cluster(session, clusters, matrix,
                                       skip=frozenset(skipped))
            elif answer in ("all", "none"):
                verdict = ACCEPTED if answer == "all" else REJECTED
                count = decide_all_remaining(session, verdict)
                print(f" {count} groups marked {verdict}", file=out)
                current = None
            elif answer == "p":
                others = [rec_id for rec_id in _ranked_members(cluster, corpus)
                          if rec_id != cluster.representative_id]
                start = pages.get(current, 0) * PAPERS_PER_PAGE
                chunk = others[start:start + PAPERS_PER_PAGE]
                if not chunk:
                    print(" No more papers in this group.", file=out)
                else:
                    pages[current] = pages.get(current, 0) + 1
                    for rec_id in chunk:
                        _print_paper(corpus.records[rec_id], out)
                show_block = False
            elif answer == "c":
                mode = MODES[(MODES.index(session.presentation_mode) + 1)
                             % len(MODES)]
                set_mode(session, mode)
                print(f" Presentation order is now {mode}", file=out)
                current = next_cluster(session, clusters, matrix,
                                       skip=frozenset(skipped))
            elif answer == "d":
                dist = distances_to_selected(session, clusters, matrix)
                undecided = [cid for cid in sorted(dist)
                             if session.decisions[cid] == UNDECIDED]
                undecided.sort(key=lambda cid: (dist[cid], cid))
                print(" group  distance", file=out)
                for cid in undecided:
                    print(f" {cid:5d}  {_format_distance(dist[cid])}",
                          file=out)
                show_block = False
            elif answer == "help":
                print(HELP_TEXT, file=out)
                show_block = False
            elif answer.isdigit():
                target = int(answer)
                if target in by_id:
                    current = target
                    skipped.discard(target)
                else:
                    print(f" No group {target}", file=out)
                    show_block = False
            elif answer == "":
                show_block = False
            else:
                print(f" Unknown option {answer!r} (type help for the list)",
                      file=out)
                show_block = False
    except KeyboardInterrupt:
        print(file=out)

    accepted = session.ids_with(ACCEPTED)
    print(file=out)
    if accepted:
        records, summary, _ = export_selection(session, corpus, clusters)
        print(f"Selected {len(accepted):5d} groups with "
              f"{summary['papers']:6d} papers and "
              f"{summary['citations']:8d} citations", file=out)
    else:
        print("No groups selected", file=out)
    path = _default_session_path(args)
    save_session(session, path)
    print(f"Session saved to {path}", file=out)
    return 0


# ---------------------------------------------------------------------------
# merit: indicators for a saved selection

def cmd_merit(args) -> int:
    corpus, matrix, clusters = build_pipeline(args)
    session_path = Path(args.session)
    session = load_session(session_path, corpus_hash=corpus.content_hash())
    records, summary, export_text = export_selection(session, corpus, clusters)
    period = "????-????"
    if summary["year_min"] is not None:
        period = f"{summary['year_min']}-{summary['year_max']}"
    print(MERIT_FMT.format(papers=summary["papers"],
                           citations=summary["citations"],
                           cpp=summary["citations_per_paper"],
                           period=period,
                           h=summary["h_index"]))
    export_path = session_path.with_suffix(".export.txt")
    export_path.write_text(export_text, encoding="utf-8")
    print(f"Filtered export written to {export_path}")
    return 0


# ---------------------------------------------------------------------------
# cluster: batch group table

def cmd_cluster(args) -> int:
    corpus, matrix, clusters = build_pipeline(args)
    _maybe_dump_matrix(args, matrix)
    _print_group_table(clusters, len(corpus), sys.stdout)
    return 0


# ---------------------------------------------------------------------------
# bench: synthetic corpus generation and quality metrics

def cmd_bench(args) -> int:
    params = GeneratorParams(
        n_authors=args.authors,
        papers_per_author=(args.papers[0], args.papers[1]),
        move_probability=args.move_probability,
        bridge_paper=not args.no_bridge,
        email_rate=args.email_rate,
        query_name=args.bench_query_name,
        seed=args.seed,
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    corpus, truth = generate(params)
    tsv = render_export(corpus)
    model = FieldModel()
    matrix = close_distances(build_matrix(corpus, model))
    clusters = build_clusters(matrix, corpus)
    metrics = evaluate(clusters, truth)
    metrics.update(n_records=len(corpus), n_clusters=len(clusters),
                   n_authors=params.n_authors)

    (out_dir / "corpus.tsv").write_text(tsv, encoding="utf-8")
    truth_lines = ["record_id,author_id"]
    truth_lines += [f"{rid},{aid}" for rid, aid in sorted(truth.items())]
    (out_dir / "truth.csv").write_text("\n".join(truth_lines) + "\n",
                                       encoding="utf-8")
    keys = sorted(metrics)
    csv = ",".join(keys) + "\n" + ",".join(str(metrics[k]) for k in keys) + "\n"
    (out_dir / "metrics.csv").write_text(csv, encoding="utf-8")

    for key in keys:
        print(f"{key} = {metrics[key]}")
    print(f"Wrote corpus.tsv, truth.csv, metrics.csv to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# serve: HTTP facade for the web UI

def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    corpus, matrix, clusters = build_pipeline(args)
    session_path = _default_session_path(args)
    static_dir = args.static
    if static_dir is None and Path("frontend/dist").is_dir():
        static_dir = "frontend/dist"
    app = create_app(corpus, matrix, clusters, session_path=session_path,
                     static_dir=static_dir)
    print(f"Serving {len(corpus)} records in {len(clusters)} groups "
          f"on http://{args.host}:{args.port}")
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="namesieve",
        description="Cluster publication records that share an author name "
                    "and drive the selection of the real author's papers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_filter = sub.add_parser("filter", help="interactive selection dialog")
    _add_corpus_options(p_filter)
    _add_model_options(p_filter)
    _add_matrix_dump_options(p_filter)
    p_filter.add_argument("--session", metavar="PATH",
                          help="session file (default: FILE.session.json)")
    p_filter.add_argument("--cutoff", type=float,
                          help="distance beyond which groups may be "
                               "auto-rejected (stored in the session)")
    p_filter.set_defaults(func=cmd_filter)

    p_merit = sub.add_parser("merit", help="indicators for a saved selection")
    _add_corpus_options(p_merit)
    _add_model_options(p_merit)
    p_merit.add_argument("--session", metavar="PATH", required=True,
                         help="session file written by the filter dialog")
    p_merit.set_defaults(func=cmd_merit)

    p_cluster = sub.add_parser("cluster", help="print the group table")
    _add_corpus_options(p_cluster)
    _add_model_options(p_cluster)
    _add_matrix_dump_options(p_cluster)
    p_cluster.set_defaults(func=cmd_cluster)

    p_bench = sub.add_parser("bench", help="synthetic corpus benchmark")
    p_bench.add_argument("--authors", type=int, default=5)
    p_bench.add_argument("--papers", type=int, nargs=2, default=(20, 20),
                         metavar=("LO", "HI"))
    p_bench.add_argument("--move-probability", type=float, default=0.5)
    p_bench.add_argument("--no-bridge", action="store_true",
                         help="suppress the bridging paper after a move")
    p_bench.add_argument("--email-rate", type=float, default=0.6)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--query-name", dest="bench_query_name",
                         default="Garcia, M")
    p_bench.add_argument("--out", default="bench_out", metavar="DIR")
    p_bench.set_defaults(func=cmd_bench)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    _add_corpus_options(p_serve)
    _add_model_options(p_serve)
    p_serve.add_argument("--session", metavar="PATH",
                         help="session file (default: FILE.session.json)")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8720)
    p_serve.add_argument("--static", metavar="DIR",
                         help="directory of web UI files to serve at / "
                              "(default: frontend/dist when present)")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, OSError) as exc:
        print(f"namesieve: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"namesieve: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
