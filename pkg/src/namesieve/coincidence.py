"""Coincidence probabilities between record fields.

Two records that share words in a field are scored by the probability that
two random draws from that field's value universe would share at least as
many. The universe sizes are deliberately small (they approximate the
probability of the *most frequent* value, not the count of distinct values)
and all arithmetic stays in the log10 domain.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

LN10 = math.log(10.0)

# Canonical field identifiers. They double as PublicationRecord attribute
# names, so the distance layer can iterate this tuple directly.
FIELDS = (
    "authors",
    "emails",
    "address_words",
    "title_words",
    "keywords",
    "research_fields",
    "journal",
    "year",
)

# Default log10 universe sizes per field.
DEFAULT_FIELD_SIZES = {
    "authors": 4.0,
    "emails": 6.0,
    "address_words": 2.0,
    "title_words": 2.0,
    "keywords": 3.0,
    "research_fields": 2.0,
    "journal": 2.0,
    "year": 1.0,
}

DEFAULT_LOG10_N_DOCS = 8.0


@dataclass
class FieldModel:
    """Assumed value-universe sizes (log10) plus the document-universe size."""

    log10_n_docs: float = DEFAULT_LOG10_N_DOCS
    field_sizes: dict = field(default_factory=lambda: dict(DEFAULT_FIELD_SIZES))

    def __post_init__(self):
        if self.log10_n_docs <= 0:
            raise ValueError("log10_n_docs must be positive")
        unknown = set(self.field_sizes) - set(FIELDS)
        if unknown:
            raise ValueError(f"unknown field names: {sorted(unknown)}")
        for name in FIELDS:
            size = self.field_sizes.setdefault(name, DEFAULT_FIELD_SIZES[name])
            if size <= 0:
                raise ValueError(f"field size for {name!r} must be positive")
            if round(10.0 ** size) < 2:
                raise ValueError(f"field universe for {name!r} smaller than 2")

    def n_values(self, field_name: str) -> int:
        return round(10.0 ** self.field_sizes[field_name])

    @property
    def n_docs(self) -> int:
        return round(10.0 ** self.log10_n_docs)

    @classmethod
    def from_file(cls, path) -> "FieldModel":
        """Load sizes from a JSON config: {"n_docs": 8.0, "authors": 4.0, ...}.

        Missing keys keep their defaults.
        """
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError(f"{path}: field model config must be a JSON object")
        log10_n_docs = float(data.pop("n_docs", DEFAULT_LOG10_N_DOCS))
        sizes = dict(DEFAULT_FIELD_SIZES)
        for key, value in data.items():
            if key not in FIELDS:
                raise ValueError(f"{path}: unknown field name {key!r}")
            sizes[key] = float(value)
        return cls(log10_n_docs=log10_n_docs, field_sizes=sizes)


def _validate(n_common: int, n_i: int, n_j: int, n_values: int) -> None:
    for name, value in (("n_common", n_common), ("n_i", n_i),
                        ("n_j", n_j), ("n_values", n_values)):
        if value != int(value) or value < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    if n_values < 1:
        raise ValueError("n_values must be at least 1")
    if n_i > n_values or n_j > n_values:
        raise ValueError(
            f"draw sizes ({n_i}, {n_j}) exceed the universe size {n_values}; "
            "clamp before calling"
        )
    if n_common > min(n_i, n_j):
        raise ValueError(
            f"n_common={n_common} exceeds min(n_i, n_j)={min(n_i, n_j)}"
        )


def log_p_exact(n_common: int, n_i: int, n_j: int, n_values: int) -> float:
    """log10 probability that two independent draws of n_i and n_j distinct
    values from a universe of n_values share exactly n_common of them.

    Evaluated as a product of bounded ratios, never by forming factorials,
    so it stays accurate for universes up to 1e8 and beyond. Returns -inf
    for overlap counts below the combinatorial minimum.
    """
    _validate(n_common, n_i, n_j, n_values)
    # symmetric in (n_i, n_j); fix the roles so swapped calls are bit-equal
    a, b = (n_i, n_j) if n_i >= n_j else (n_j, n_i)
    k = n_common
    if k < a + b - n_values:
        return float("-inf")

    total = 0.0
    for t in range(k):                      # log10 C(a, k)
        total += math.log10((a - t) / (k - t))
    for t in range(k):                      # log10 of b!/(b-k)!
        total += math.log10(b - t)
    for t in range(b - k):                  # paired numerator/denominator terms
        total += math.log1p(-a / (n_values - t)) / LN10
    for t in range(b - k, b):               # remaining denominator terms
        total -= math.log10(n_values - t)
    return total


def log_p_tail(n_common: int, n_i: int, n_j: int, n_values: int) -> float:
    """log10 probability of sharing at least n_common values.

    Summed upward from n_common (the small-term direction), which avoids the
    cancellation a complement form would hit in deep tails.
    """
    _validate(n_common, n_i, n_j, n_values)
    if n_common <= 0:
        return 0.0
    terms = [log_p_exact(n, n_i, n_j, n_values)
             for n in range(n_common, min(n_i, n_j) + 1)]
    terms = [t for t in terms if t != float("-inf")]
    if not terms:
        return float("-inf")
    peak = max(terms)
    acc = sum(10.0 ** (t - peak) for t in terms)
    # summing the whole support can land a rounding hair above certainty
    return min(0.0, peak + math.log10(acc))


def field_coincidence(words_i, words_j, field_name: str, model: FieldModel) -> float:
    """log10 probability of the observed word overlap in one field.

    Word counts are clamped to the assumed universe size first (address
    blocks can exceed the deliberately small table values). Empty fields
    carry no evidence and score 0.
    """
    if not words_i or not words_j:
        return 0.0
    n = model.n_values(field_name)
    n_i = min(len(words_i), n)
    n_j = min(len(words_j), n)
    n_common = min(len(set(words_i) & set(words_j)), n_i, n_j)
    return log_p_tail(n_common, n_i, n_j, n)
