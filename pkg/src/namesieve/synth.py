"""Synthetic corpora with known author ground truth, plus quality metrics.

Real exports cannot be shipped, so benchmarks run on generated ones: each
synthetic author gets a stable coauthor pool, institution address, topical
vocabulary and career span, and papers sample from those pools. Authors can
change affiliation and topic mid-career; the first paper after a move keeps
the old topic and coauthors under the new address (the bridging-paper
situation the distance closure exists for).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .ingest import parse_export

TSV_HEADER = "authors\ttitle\tsource\tkeywords\taddresses\temail\tsubject\tyear\ttimes_cited"


@dataclass
class GeneratorParams:
    n_authors: int = 5
    papers_per_author: tuple = (20, 20)
    coauthor_pool: int = 12
    coauthors_per_paper: tuple = (1, 4)
    surname_space: int = 50000
    address_words_per_author: int = 6
    address_vocab: int = 5000
    title_vocab_per_author: int = 40
    title_vocab: int = 2000
    title_words_per_paper: tuple = (6, 10)
    keyword_vocab_per_author: int = 15
    keyword_vocab: int = 800
    keywords_per_paper: tuple = (3, 6)
    research_field_vocab: int = 40
    research_fields_per_author: int = 2
    journal_vocab: int = 300
    journals_per_author: int = 4
    year_start: int = 1975
    year_end: int = 2006
    career_span: tuple = (8, 25)
    move_probability: float = 0.5
    bridge_paper: bool = True
    email_rate: float = 0.6
    query_name: str = "Garcia, M"
    seed: int = 0

    def __post_init__(self):
        counts = (self.n_authors, self.coauthor_pool, self.surname_space,
                  self.address_words_per_author, self.address_vocab,
                  self.title_vocab_per_author, self.title_vocab,
                  self.keyword_vocab_per_author, self.keyword_vocab,
                  self.research_field_vocab, self.research_fields_per_author,
                  self.journal_vocab, self.journals_per_author)
        if any(c < 1 for c in counts):
            raise ValueError("all generator counts must be >= 1")
        for rate in (self.move_probability, self.email_rate):
            if not 0.0 <= rate <= 1.0:
                raise ValueError("rates must be within [0, 1]")
        for lo, hi in (self.papers_per_author, self.coauthors_per_paper,
                       self.title_words_per_paper, self.keywords_per_paper,
                       self.career_span):
            if lo < 1 or hi < lo:
                raise ValueError("ranges must satisfy 1 <= lo <= hi")


@dataclass
class _Topic:
    title_vocab: list
    keyword_vocab: list
    fields: list
    journals: list


@dataclass
class _AuthorProfile:
    phase_pools: list        # coauthor display names per phase
    addresses: list          # one display block per phase
    emails: list             # one address per phase
    topics: list             # one _Topic per phase
    year_first: int
    year_last: int
    move_year: int = None    # first year of phase 1, None when no move


def _sample_distinct(rng: random.Random, space: int, count: int) -> list:
    return rng.sample(range(space), min(count, space))


def _draw_topic(rng: random.Random, params: GeneratorParams) -> _Topic:
    return _Topic(
        title_vocab=[f"T{w:04d}" for w in
                     _sample_distinct(rng, params.title_vocab,
                                      params.title_vocab_per_author)],
        keyword_vocab=[f"K{w:04d}" for w in
                       _sample_distinct(rng, params.keyword_vocab,
                                        params.keyword_vocab_per_author)],
        fields=[f"F{w:03d}" for w in
                _sample_distinct(rng, params.research_field_vocab,
                                 params.research_fields_per_author)],
        journals=[f"J{w:03d}" for w in
                  _sample_distinct(rng, params.journal_vocab,
                                   params.journals_per_author)],
    )


def _author_profile(params: GeneratorParams, author: int) -> _AuthorProfile:
    rng = random.Random(f"{params.seed}:author:{author}")
    coauthors = []
    for idx in _sample_distinct(rng, params.surname_space, params.coauthor_pool):
        initial = chr(ord("A") + rng.randrange(26))
        coauthors.append(f"C{idx:05d}, {initial}")

    span = rng.randint(*params.career_span)
    last_start = max(params.year_start, params.year_end - span)
    year_first = rng.randint(params.year_start, last_start)
    year_last = min(year_first + span, params.year_end)

    moves = rng.random() < params.move_probability
    n_phases = 2 if moves and year_last - year_first >= 4 else 1
    move_year = None
    if n_phases == 2:
        move_year = rng.randint(year_first + 2, year_last - 1)

    addresses, emails = [], []
    for phase in range(n_phases):
        words = [f"W{w:04d}" for w in
                 _sample_distinct(rng, params.address_vocab,
                                  params.address_words_per_author)]
        addresses.append("Univ " + " ".join(words))
        emails.append(f"a{author}.p{phase}@{words[0].lower()}.edu")

    if n_phases == 2:
        # the move also changes collaborators (small overlap) and topic
        cut = max(1, (len(coauthors) * 2) // 3)
        phase_pools = [coauthors[:cut], coauthors[len(coauthors) - cut:]]
    else:
        phase_pools = [coauthors]
    topics = [_draw_topic(rng, params) for _ in range(n_phases)]

    return _AuthorProfile(
        phase_pools=phase_pools,
        addresses=addresses,
        emails=emails,
        topics=topics,
        year_first=year_first,
        year_last=year_last,
        move_year=move_year,
    )


def _author_rows(params: GeneratorParams, author: int) -> list:
    rng = random.Random(f"{params.seed}:papers:{author}")
    profile = _author_profile(params, author)
    n_papers = rng.randint(*params.papers_per_author)
    years = sorted(rng.randint(profile.year_first, profile.year_last)
                   for _ in range(n_papers))

    rows = []
    bridged = False
    for year in years:
        phase = 0
        if profile.move_year is not None and year >= profile.move_year:
            phase = 1
        pool = profile.phase_pools[phase]
        topic = profile.topics[phase]
        if phase == 1 and not bridged and params.bridge_paper:
            # pending work: new address and email, old field and collaborators
            pool = profile.phase_pools[0]
            topic = profile.topics[0]
            bridged = True
        n_co = rng.randint(*params.coauthors_per_paper)
        coauthors = rng.sample(pool, min(n_co, len(pool)))
        title = " ".join(rng.sample(topic.title_vocab,
                                    rng.randint(*params.title_words_per_paper)))
        keywords = "; ".join(rng.sample(topic.keyword_vocab,
                                        rng.randint(*params.keywords_per_paper)))
        n_fields = rng.randint(1, len(topic.fields))
        fields = "; ".join(rng.sample(topic.fields, n_fields))
        journal = rng.choice(topic.journals)
        email = profile.emails[phase] if rng.random() < params.email_rate else ""
        citations = max(0, int(rng.lognormvariate(1.2, 1.6)) - 1)
        cells = (
            "; ".join([params.query_name] + coauthors),
            title,
            journal,
            keywords,
            profile.addresses[phase],
            email,
            fields,
            str(year),
            str(citations),
        )
        rows.append("\t".join(cells))
    return rows


def generate_tsv(params: GeneratorParams) -> tuple:
    """The corpus as TSV text plus the author id of every data row."""
    tagged_rows = []
    for author in range(params.n_authors):
        tagged_rows.extend((author, row) for row in _author_rows(params, author))
    rng = random.Random(f"{params.seed}:shuffle")
    rng.shuffle(tagged_rows)
    text = "\n".join([TSV_HEADER] + [row for _, row in tagged_rows]) + "\n"
    return text, [author for author, _ in tagged_rows]


def generate(params: GeneratorParams) -> tuple:
    """A parsed Corpus plus the ground-truth map record id -> author id."""
    text, authors = generate_tsv(params)
    corpus = parse_export(text.encode("utf-8"), fmt="tsv",
                          query_name=params.query_name)
    truth = {rec.id: authors[rec.id] for rec in corpus.records}
    return corpus, truth


def evaluate(clusters, truth: dict) -> dict:
    """Clustering quality against ground truth.

    purity: fraction of records whose cluster's majority author is their own.
    false_positive_pairs: same-cluster pairs with different authors.
    false_negative_pairs: same-author pairs split across clusters.
    split_rate: relative cluster surplus over the true author count.
    """
    seen = []
    for cluster in clusters:
        seen.extend(cluster.member_ids)
    if sorted(seen) != sorted(truth):
        raise ValueError("clusters do not partition the ground-truth records")

    majority_hits = 0
    false_positive_pairs = 0
    pure_pairs_by_author = {}
    for cluster in clusters:
        counts = {}
        for rec_id in cluster.member_ids:
            counts[truth[rec_id]] = counts.get(truth[rec_id], 0) + 1
        majority_hits += max(counts.values())
        size = cluster.paper_count
        same = sum(c * (c - 1) // 2 for c in counts.values())
        false_positive_pairs += size * (size - 1) // 2 - same
        for author, c in counts.items():
            pure_pairs_by_author[author] = (
                pure_pairs_by_author.get(author, 0) + c * (c - 1) // 2)

    author_sizes = {}
    for author in truth.values():
        author_sizes[author] = author_sizes.get(author, 0) + 1
    false_negative_pairs = sum(
        n * (n - 1) // 2 - pure_pairs_by_author.get(author, 0)
        for author, n in author_sizes.items())

    n_authors = len(author_sizes)
    surplus = len(clusters) - n_authors
    return {
        "purity": majority_hits / len(truth) if truth else 1.0,
        "false_positive_pairs": false_positive_pairs,
        "false_negative_pairs": false_negative_pairs,
        "split_rate": surplus / n_authors if surplus > 0 else 0.0,
    }
