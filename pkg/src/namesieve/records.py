"""Core record and corpus types shared by every stage of the pipeline."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field


@dataclass
class PublicationRecord:
    """One parsed document record.

    Field values are deduplicated word sets (one instance of each word per
    field). `raw` keeps the original source lines verbatim so a selection can
    be re-exported byte-for-byte, and `display` keeps the pre-normalization
    strings the interactive views print.
    """

    id: int
    authors: set = field(default_factory=set)
    emails: set = field(default_factory=set)
    address_words: set = field(default_factory=set)
    title_words: set = field(default_factory=set)
    keywords: set = field(default_factory=set)
    research_fields: set = field(default_factory=set)
    journal: set = field(default_factory=set)
    year: set = field(default_factory=set)
    citations: int = 0
    raw: list = field(default_factory=list)
    display: dict = field(default_factory=dict)

    def year_int(self):
        """Publication year as an int, or None when absent."""
        if not self.year:
            return None
        token = next(iter(self.year))
        try:
            return int(token)
        except ValueError:
            return None


@dataclass
class Corpus:
    """An ordered set of records that share one queried author name."""

    records: list
    query_name: str
    source_format: str = "tagged"
    header_lines: list = field(default_factory=list)
    trailer_lines: list = field(default_factory=list)

    def __len__(self):
        return len(self.records)

    def content_hash(self) -> str:
        """Stable identity of the parsed content (raw lines, LF-joined)."""
        digest = hashlib.sha256()
        for record in self.records:
            for line in record.raw:
                digest.update(line.encode("utf-8"))
                digest.update(b"\n")
            digest.update(b"\x00")
        return digest.hexdigest()
