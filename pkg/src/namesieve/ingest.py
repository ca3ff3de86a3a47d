"""Parse exported bibliographic record files into normalized word sets.

Two input formats are supported:

* tagged: two-letter tags at line start, continuation lines indented by
  three spaces, records terminated by ``ER``, file terminated by ``EF``
  (the tag table below is the single source of truth);
* tsv: header row with canonical column names, one record per row,
  multi-value cells separated by ``; ``.

Normalization keeps one instance of each word per field, folds case and
diacritics, and stores the original lines for round-trip export.
"""

from __future__ import annotations

import re
import unicodedata
import warnings
from collections import Counter

from .records import Corpus, PublicationRecord

# --------------------------------------------------------------------------
# Tagged format definition (single source of truth, mirrored in README)

TAG_FIELDS = {
    "AU": "authors",        # author list; entries split on ";" or "/"
    "TI": "title",
    "SO": "source",         # full source title (display; journal fallback)
    "JI": "source_abbrev",  # abbreviated source title -> journal token
    "DE": "keywords_author",
    "ID": "keywords_plus",
    "C1": "addresses",      # one address block per tag line
    "EM": "email",
    "SC": "subject",        # subject categories -> research fields
    "PY": "year",
    "TC": "times_cited",
    "VL": "volume",         # display only
    "BP": "page_start",     # display only
    "EP": "page_end",       # display only
}

HEADER_TAGS = ("FN", "VR")
RECORD_END_TAG = "ER"
FILE_END_TAG = "EF"
CONTINUATION_PREFIX = "   "

# Continuation lines under these fields are new list entries (one author or
# address per line); under every other field they continue wrapped text.
LIST_CONTINUATION_FIELDS = ("authors", "addresses")

_TAG_LINE_RE = re.compile(r"^([A-Z][A-Z0-9])( (.*))?$")

# TSV column names (canonical export header)
TSV_COLUMNS = (
    "authors", "title", "source", "keywords", "addresses",
    "email", "subject", "year", "times_cited",
)
# optional extras consumed for display only
TSV_OPTIONAL_COLUMNS = ("volume", "page_start", "page_end")

# Built-in stopword list for title words: articles, prepositions and
# conjunctions only. Override with a one-word-per-line file via
# tokenize options / the CLI --stopwords flag.
STOPWORDS = frozenset("""
    a an the
    and or but nor so yet if because while when where whereas
    of in on at to for with by from as into onto upon about above below
    under over between among through during before after against within
    without across behind beyond near since until toward towards via per
    off out up down than that
""".split())


class ParseError(ValueError):
    """Raised on malformed export files; the message names the line."""


# --------------------------------------------------------------------------
# Normalization helpers

def strip_diacritics(text: str) -> str:
    decomposed = unicodedata.normalize("NFKD", text)
    return "".join(ch for ch in decomposed if not unicodedata.combining(ch))


def _split_hyphen_chunk(chunk: str) -> list:
    """Hyphenated all-letter compounds split into their parts; anything with
    digits fuses instead ("E-28049" -> "e28049"), so codes stay one token."""
    parts = [p for p in chunk.split("-") if p]
    if not parts:
        return []
    if all(p.isalpha() for p in parts):
        return parts
    return ["".join(parts)]


def _words(text: str) -> list:
    text = strip_diacritics(text).lower()
    out = []
    for chunk in re.split(r"[^0-9a-z\-]+", text):
        if not chunk:
            continue
        out.extend(_split_hyphen_chunk(chunk))
    return out


def normalize_author_name(name: str) -> str:
    """Canonical one-token form of an author name: "surname_initials".

    "SanchezPortal, D" -> "sanchezportal_d"; names given without a comma
    treat a trailing all-capitals word as the initials ("Soler JM").
    Already-normalized tokens pass through unchanged.
    """
    name = strip_diacritics(name).strip()
    surname, initials = name, ""
    if "," in name:
        surname, _, initials = name.partition(",")
    else:
        tokens = name.split()
        if len(tokens) >= 2 and re.fullmatch(r"[A-Z.\-]+", tokens[-1]):
            surname, initials = " ".join(tokens[:-1]), tokens[-1]
    surname = re.sub(r"[^a-z0-9_]", "", surname.lower())
    initials = re.sub(r"[^a-z0-9]", "", initials.lower())
    if surname and initials:
        return f"{surname}_{initials}"
    return surname or initials


def _split_multi(text: str) -> list:
    return [part for part in re.split(r"[;/]", text) if part.strip()]


def tokenize_field(raw_text: str, field_kind: str, stopwords=STOPWORDS) -> set:
    """Normalize one field's raw text into its deduplicated word set."""
    if not raw_text or not raw_text.strip():
        return set()

    if field_kind == "authors":
        tokens = (normalize_author_name(part) for part in _split_multi(raw_text))
        return {t for t in tokens if t}

    if field_kind == "emails":
        tokens = (t.strip().strip(".,;").lower()
                  for t in re.split(r"[;,\s/]+", raw_text))
        return {t for t in tokens if t}

    if field_kind == "journal":
        words = _words(raw_text)
        return {"_".join(words)} if words else set()

    if field_kind == "year":
        match = re.search(r"\d{4}", raw_text)
        if match:
            return {match.group()}
        token = re.sub(r"\s+", "", raw_text)
        return {token} if token else set()

    words = _words(raw_text)
    if field_kind == "title_words":
        return {w for w in words if w not in stopwords}
    if field_kind == "address_words":
        # postal codes (all-digit tokens) and one-character fragments carry
        # no author signal
        return {w for w in words if len(w) >= 2 and not w.isdigit()}
    if field_kind in ("keywords", "research_fields"):
        return set(words)
    raise ValueError(f"unknown field kind {field_kind!r}")


def load_stopwords(path) -> frozenset:
    """One lowercase word per line; blank lines and # comments ignored."""
    words = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.append(word)
    return frozenset(words)


# --------------------------------------------------------------------------
# Record assembly (shared by both formats)

def _build_record(rec_id: int, values: dict, raw_lines: list,
                  stopwords, line_no_of=None) -> PublicationRecord:
    """values: mapping of logical tag name -> list of raw strings."""
    def joined(name):
        return "; ".join(values.get(name, []))

    title_text = " ".join(values.get("title", []))
    citations = 0
    if values.get("times_cited"):
        cited_text = values["times_cited"][0].strip()
        try:
            citations = int(cited_text)
        except ValueError:
            where = f" at line {line_no_of('times_cited')}" if line_no_of else ""
            raise ParseError(
                f"record {rec_id}: times-cited value {cited_text!r} is not an "
                f"integer{where}"
            ) from None
    if citations < 0:
        citations = 0

    journal_text = joined("source_abbrev") or joined("source")
    keyword_text = joined("keywords_author")
    if values.get("keywords_plus"):
        keyword_text = "; ".join(filter(None, [keyword_text, joined("keywords_plus")]))

    record = PublicationRecord(
        id=rec_id,
        authors=tokenize_field(joined("authors"), "authors"),
        emails=tokenize_field(joined("email"), "emails"),
        address_words=tokenize_field(joined("addresses"), "address_words"),
        title_words=tokenize_field(title_text, "title_words", stopwords),
        keywords=tokenize_field(keyword_text, "keywords"),
        research_fields=tokenize_field(joined("subject"), "research_fields"),
        journal=tokenize_field(journal_text, "journal"),
        year=tokenize_field(joined("year"), "year"),
        citations=citations,
        raw=list(raw_lines),
        display={
            "title": title_text,
            "authors": [a.strip() for part in values.get("authors", [])
                        for a in _split_multi(part)],
            "source": (values.get("source_abbrev") or values.get("source") or [""])[0],
            "addresses": list(values.get("addresses", [])),
            "year": (values.get("year") or [""])[0].strip(),
            "volume": (values.get("volume") or [""])[0].strip(),
            "page_start": (values.get("page_start") or [""])[0].strip(),
            "page_end": (values.get("page_end") or [""])[0].strip(),
        },
    )
    return record


def _decode(data: bytes) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError:
        return data.decode("latin-1")


def _parse_tagged(text: str, stopwords) -> tuple:
    lines = text.splitlines()
    header_lines, trailer_lines, records = [], [], []
    values, raw_lines, tag_lines = {}, [], {}
    last_tag = None
    start_line = None
    seen_record = False
    ended = False

    def flush():
        nonlocal values, raw_lines, tag_lines, last_tag, start_line
        rec = _build_record(
            len(records), values, raw_lines, stopwords,
            line_no_of=lambda name: tag_lines.get(name),
        )
        records.append(rec)
        values, raw_lines, tag_lines = {}, [], {}
        last_tag, start_line = None, None

    for line_no, line in enumerate(lines, start=1):
        if ended:
            trailer_lines.append(line)
            continue
        if not line.strip():
            if start_line is not None:
                raw_lines.append(line)
            continue
        if line.startswith(CONTINUATION_PREFIX):
            if start_line is None or last_tag is None:
                raise ParseError(f"line {line_no}: continuation line outside a record")
            if last_tag in LIST_CONTINUATION_FIELDS:
                values[last_tag].append(line.strip())
            else:
                values[last_tag][-1] += " " + line.strip()
            raw_lines.append(line)
            continue
        match = _TAG_LINE_RE.match(line)
        if not match:
            raise ParseError(f"line {line_no}: expected a two-letter tag line, got {line!r}")
        tag, _, value = match.groups()
        value = value or ""
        if tag == FILE_END_TAG:
            if start_line is not None:
                raise ParseError(
                    f"line {line_no}: file terminator inside the record "
                    f"starting at line {start_line} (missing {RECORD_END_TAG})"
                )
            ended = True
            trailer_lines.append(line)
            continue
        if tag in HEADER_TAGS and not seen_record and start_line is None:
            header_lines.append(line)
            continue
        if tag == RECORD_END_TAG:
            if start_line is None:
                raise ParseError(f"line {line_no}: end-of-record tag with no open record")
            raw_lines.append(line)
            flush()
            seen_record = True
            continue
        if start_line is None:
            start_line = line_no
        raw_lines.append(line)
        name = TAG_FIELDS.get(tag)
        if name is None:
            # unknown tags are preserved in raw but carry no fields
            last_tag = None
            continue
        values.setdefault(name, []).append(value)
        tag_lines.setdefault(name, line_no)
        last_tag = name

    if start_line is not None:
        raise ParseError(
            f"record starting at line {start_line} not terminated by "
            f"{RECORD_END_TAG} before end of file"
        )
    return records, header_lines, trailer_lines


def _parse_tsv(text: str, stopwords) -> tuple:
    lines = text.splitlines()
    if not lines:
        return [], [], []
    header = lines[0]
    columns = [c.strip().lower() for c in header.split("\t")]
    known = set(TSV_COLUMNS) | set(TSV_OPTIONAL_COLUMNS)
    missing = [name for name in TSV_COLUMNS if name not in columns]
    if missing:
        raise ParseError(
            f"line 1: TSV header lacks required columns: {', '.join(missing)}")
    col_of = {name: idx for idx, name in enumerate(columns) if name in known}

    # TSV cell name -> logical tag name used by _build_record
    cell_names = {
        "authors": "authors", "title": "title", "source": "source_abbrev",
        "keywords": "keywords_author", "addresses": "addresses",
        "email": "email", "subject": "subject", "year": "year",
        "times_cited": "times_cited", "volume": "volume",
        "page_start": "page_start", "page_end": "page_end",
    }

    records = []
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        cells = line.split("\t")
        if len(cells) != len(columns):
            raise ParseError(
                f"line {line_no}: expected {len(columns)} tab-separated "
                f"cells, got {len(cells)}")
        values = {}
        for column, idx in col_of.items():
            if idx < len(cells) and cells[idx].strip():
                name = cell_names[column]
                if column in ("addresses", "keywords"):
                    values[name] = [p.strip() for p in cells[idx].split("; ") if p.strip()]
                else:
                    values[name] = [cells[idx].strip()]
        rec = _build_record(len(records), values, [line], stopwords,
                            line_no_of=lambda name, n=line_no: n)
        records.append(rec)
    return records, [header], []


def detect_format(data: bytes) -> str:
    """tagged when the first nonblank line opens with a known two-letter tag,
    tsv when it looks like a tab-separated header row."""
    text = _decode(data[:4096])
    for line in text.splitlines():
        if not line.strip():
            continue
        if "\t" in line:
            return "tsv"
        match = _TAG_LINE_RE.match(line)
        if match and (match.group(1) in TAG_FIELDS
                      or match.group(1) in HEADER_TAGS
                      or match.group(1) in (RECORD_END_TAG, FILE_END_TAG)):
            return "tagged"
        break
    return "tsv" if "\t" in text else "tagged"


def parse_export(data: bytes, fmt: str = "auto", query_name: str = None,
                 stopwords=STOPWORDS) -> Corpus:
    """Parse one exported file into a Corpus.

    The query name (the author-name token every record is expected to carry)
    is taken from `query_name` when given, otherwise inferred as the most
    common author token. Records missing it are kept with a warning, since
    export tools include every marked record.
    """
    if fmt not in ("auto", "tagged", "tsv"):
        raise ValueError(f"unknown format {fmt!r}")
    if fmt == "auto":
        fmt = detect_format(data)
    text = _decode(data)
    if fmt == "tagged":
        records, header_lines, trailer_lines = _parse_tagged(text, stopwords)
    else:
        records, header_lines, trailer_lines = _parse_tsv(text, stopwords)

    if query_name:
        query_token = normalize_author_name(query_name)
    else:
        counts = Counter(token for rec in records for token in rec.authors)
        query_token = ""
        if counts:
            top = max(counts.values())
            query_token = min(t for t, c in counts.items() if c == top)

    corpus = Corpus(records=records, query_name=query_token,
                    source_format=fmt, header_lines=header_lines,
                    trailer_lines=trailer_lines)
    if query_token:
        for rec in records:
            if query_token not in rec.authors:
                warnings.warn(
                    f"record {rec.id} does not contain the query name "
                    f"{query_token!r}; kept anyway"
                )
    return corpus


def parse_export_file(path, fmt: str = "auto", query_name: str = None,
                      stopwords=STOPWORDS) -> Corpus:
    with open(path, "rb") as fh:
        return parse_export(fh.read(), fmt=fmt, query_name=query_name,
                            stopwords=stopwords)


# --------------------------------------------------------------------------
# Export (round-trip and filtered selections)

def render_export(corpus: Corpus, record_ids=None) -> str:
    """Reassemble an export file from stored raw lines.

    With record_ids given, only those records are emitted (in source order);
    headers and trailers are preserved so the output stays loadable by the
    same parser and by downstream tools.
    """
    if record_ids is None:
        wanted = None
    else:
        wanted = set(record_ids)
    lines = list(corpus.header_lines)
    for rec in corpus.records:
        if wanted is None or rec.id in wanted:
            lines.extend(rec.raw)
    lines.extend(corpus.trailer_lines)
    return "\n".join(lines) + "\n" if lines else ""
