"""Parsing, tokenization and round-trip rendering."""

import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from namesieve.ingest import (STOPWORDS, ParseError, detect_format,
                              load_stopwords, normalize_author_name,
                              parse_export, render_export, strip_diacritics,
                              tokenize_field)

# -- tokenization ---------------------------------------------------------------

def test_author_tokens():
    got = tokenize_field("Sanchez-Portal, D; Ordejon, P; Artacho, E; Soler, JM",
                         "authors")
    assert got == {"sanchezportal_d", "ordejon_p", "artacho_e", "soler_jm"}


def test_author_name_normalization():
    assert normalize_author_name("García-López, J M") == "garcialopez_jm"
    assert normalize_author_name("SOLER JM") == "soler_jm"
    # idempotent: normalizing a token returns the token
    assert normalize_author_name("garcialopez_jm") == "garcialopez_jm"


def test_author_duplicates_collapse():
    got = tokenize_field("Soler, JM; Soler, J M; SOLER JM", "authors")
    assert got == {"soler_jm"}


def test_title_words_drop_stopwords_keep_very():
    got = tokenize_field(
        "Density-functional method for very large systems with LCAO basis sets",
        "title_words")
    assert got == {"density", "functional", "method", "very", "large",
                   "systems", "lcao", "basis", "sets"}
    assert "for" not in got and "with" not in got


def test_custom_stopwords(tmp_path):
    path = tmp_path / "stop.txt"
    path.write_text("very\nlarge\n", encoding="utf-8")
    stops = load_stopwords(path)
    got = tokenize_field("A very large system", "title_words", stopwords=stops)
    assert got == {"a", "system"}


def test_address_words():
    got = tokenize_field(
        "Univ Autonoma Madrid, Dept Fis Mat Condensada, E-28049 Madrid, Spain",
        "address_words")
    assert got == {"univ", "autonoma", "madrid", "dept", "fis", "mat",
                   "condensada", "e28049", "spain"}


def test_address_drops_bare_postal_codes_and_single_chars():
    got = tokenize_field("CNRS UMR 5798, F-33405 Talence, France 9 X au",
                         "address_words")
    assert got == {"cnrs", "umr", "f33405", "talence", "france", "au"}


def test_hyphen_rule_splits_words_fuses_codes():
    title = tokenize_field("Density-functional study", "title_words")
    assert {"density", "functional"} <= title
    addr = tokenize_field("E-28049", "address_words")
    assert addr == {"e28049"}


def test_journal_is_single_token():
    assert tokenize_field("J. Solid State Magn.", "journal") == {"j_solid_state_magn"}
    assert tokenize_field("Int. J. Quantum Chem.", "journal") == {"int_j_quantum_chem"}


def test_keywords_are_word_level():
    got = tokenize_field("spin dynamics; cuprate lattices", "keywords")
    assert got == {"spin", "dynamics", "cuprate", "lattices"}


def test_emails_lowercased_whole():
    got = tokenize_field("M.Garcia@uam.es; x@Y.z", "emails")
    assert got == {"m.garcia@uam.es", "x@y.z"}


def test_year_token():
    assert tokenize_field(" 1994 ", "year") == {"1994"}
    assert tokenize_field("", "year") == set()


def test_strip_diacritics():
    assert strip_diacritics("Gómez-Herrero") == "Gomez-Herrero"
    assert strip_diacritics("Ångström") == "Angstrom"


def test_unknown_field_kind():
    with pytest.raises(ValueError):
        tokenize_field("x", "not_a_field")


_WORD = st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789", min_size=1,
                max_size=10)


@given(st.lists(_WORD, min_size=0, max_size=8))
@settings(max_examples=100, deadline=None)
def test_word_tokenization_idempotent(words):
    first = tokenize_field(" ".join(words), "keywords")
    again = tokenize_field(" ".join(sorted(first)), "keywords")
    assert again == first


@given(st.lists(_WORD, min_size=1, max_size=5))
@settings(max_examples=100, deadline=None)
def test_author_tokenization_idempotent(words):
    first = tokenize_field("; ".join(words), "authors")
    again = tokenize_field("; ".join(sorted(first)), "authors")
    assert again == first


# -- tagged parsing --------------------------------------------------------------

def test_garcia_fixture_parses(garcia_corpus):
    assert len(garcia_corpus) == 12
    assert garcia_corpus.query_name == "garcia_m"
    assert garcia_corpus.source_format == "tagged"
    rec = garcia_corpus.records[0]
    assert rec.citations == 57
    assert rec.year_int() == 1994
    assert rec.display["authors"] == ["Garcia, M", "Lopez, R", "Fernandez, TK"]
    assert len(rec.display["addresses"]) == 2
    assert "lopez_r" in rec.authors
    assert "antiferromagnetism" in rec.keywords  # ID merged into keywords


def test_round_trip_is_byte_identical(garcia_corpus, data_dir):
    original = (data_dir / "garcia.txt").read_text(encoding="utf-8")
    assert render_export(garcia_corpus) == original


def test_filtered_render_contains_only_selected(garcia_corpus):
    text = render_export(garcia_corpus, record_ids={0, 2})
    reparsed = parse_export(text.encode("utf-8"))
    assert len(reparsed) == 2
    assert reparsed.records[0].raw == garcia_corpus.records[0].raw
    assert reparsed.records[1].raw == garcia_corpus.records[2].raw


def test_explicit_query_name_overrides_inference(data_dir):
    with pytest.warns(UserWarning, match="query name"):
        corpus = parse_export((data_dir / "garcia.txt").read_bytes(),
                              query_name="Lopez, R")
    assert corpus.query_name == "lopez_r"


def test_missing_query_name_warns():
    text = ("AU Garcia, M\nTI One\nPY 1999\nTC 0\nER\n"
            "AU Garcia, M\nTI Two\nPY 2000\nTC 1\nER\n"
            "AU Smith, Q\nTI Three\nPY 2001\nTC 2\nER\n")
    with pytest.warns(UserWarning, match="query name"):
        corpus = parse_export(text.encode("utf-8"))
    assert corpus.query_name == "garcia_m"
    assert len(corpus) == 3  # the stray record is kept


def test_empty_input():
    corpus = parse_export(b"")
    assert len(corpus) == 0
    assert render_export(corpus) == ""


def test_record_without_address_parses():
    text = "AU Garcia, M\nTI Short note\nPY 1999\nTC 0\nER\n"
    corpus = parse_export(text.encode("utf-8"))
    assert corpus.records[0].address_words == set()
    assert corpus.records[0].emails == set()


def test_latin1_fallback():
    text = "AU García, M\nTI Study\nPY 1999\nTC 0\nER\n"
    corpus = parse_export(text.encode("latin-1"))
    assert "garcia_m" in corpus.records[0].authors


def test_multiline_title_joins_with_space():
    text = ("AU Garcia, M\nTI A very long title that\n"
            "   continues on the next line\nPY 1999\nTC 0\nER\n")
    corpus = parse_export(text.encode("utf-8"))
    assert corpus.records[0].display["title"] == (
        "A very long title that continues on the next line")


def test_continuation_lists_authors_and_addresses():
    text = ("AU Garcia, M\n   Lopez, R\n"
            "C1 Univ Madrid, Spain\n   Univ Oviedo, Spain\n"
            "TI X\nPY 1999\nTC 0\nER\n")
    corpus = parse_export(text.encode("utf-8"))
    rec = corpus.records[0]
    assert rec.display["authors"] == ["Garcia, M", "Lopez, R"]
    assert rec.display["addresses"] == ["Univ Madrid, Spain", "Univ Oviedo, Spain"]


@pytest.mark.parametrize("text,fragment", [
    ("   orphan continuation\n", "line 1"),
    ("AU Garcia, M\nTI X\nTC not_a_number\nER\n", "line 3"),
    ("AU Garcia, M\nTI X\nTC 1\n", "not terminated"),
    ("AU Garcia, M\nEF\n", "line 2"),
    ("this is not a tag line\n", "line 1"),
    ("ER\n", "no open record"),
])
def test_malformed_tagged_inputs_name_the_line(text, fragment):
    with pytest.raises(ParseError, match=fragment):
        parse_export(text.encode("utf-8"), fmt="tagged")


def test_unknown_tags_preserved_in_raw():
    text = "AU Garcia, M\nTI X\nZZ mystery\nPY 1999\nTC 0\nER\n"
    corpus = parse_export(text.encode("utf-8"))
    assert "ZZ mystery" in corpus.records[0].raw
    assert render_export(corpus) == text


# -- TSV parsing -----------------------------------------------------------------

TSV_TEXT = (
    "authors\ttitle\tsource\tkeywords\taddresses\temail\tsubject\tyear\ttimes_cited\n"
    "Garcia, M; Lopez, R\tSpin study\tJ. Magn.\tspin; order\t"
    "Univ Madrid, Spain\tm@uam.es\tPhysics\t1994\t12\n"
    "Garcia, M\tBeetle notes\tBol. Entomol.\tbeetles\t"
    "Museo Madrid, Spain\t\tZoology\t1993\t2\n"
)


def test_tsv_parses():
    corpus = parse_export(TSV_TEXT.encode("utf-8"))
    assert corpus.source_format == "tsv"
    assert len(corpus) == 2
    assert corpus.query_name == "garcia_m"
    rec = corpus.records[0]
    assert rec.citations == 12
    assert rec.journal == {"j_magn"}
    assert rec.keywords == {"spin", "order"}
    assert rec.year_int() == 1994


def test_tsv_round_trip():
    corpus = parse_export(TSV_TEXT.encode("utf-8"))
    assert render_export(corpus) == TSV_TEXT


def test_tsv_missing_column_fails():
    bad = "authors\ttitle\nGarcia, M\tX\n"
    with pytest.raises(ParseError):
        parse_export(bad.encode("utf-8"), fmt="tsv")


def test_tsv_wrong_cell_count_names_line():
    bad = TSV_TEXT + "only_one_cell\n"
    with pytest.raises(ParseError, match="line 4"):
        parse_export(bad.encode("utf-8"), fmt="tsv")


def test_format_detection():
    assert detect_format(TSV_TEXT.encode("utf-8")) == "tsv"
    assert detect_format(b"FN X\nAU A\nER\nEF\n") == "tagged"
    with pytest.raises(ValueError):
        parse_export(b"", fmt="nonsense")


def test_content_hash_tracks_records(garcia_corpus):
    h1 = garcia_corpus.content_hash()
    corpus2 = parse_export(render_export(garcia_corpus).encode("utf-8"))
    assert corpus2.content_hash() == h1
    subset = parse_export(
        render_export(garcia_corpus, record_ids={0}).encode("utf-8"))
    assert subset.content_hash() != h1
