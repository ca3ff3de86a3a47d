"""Pairwise distances between records and their shortest-path closure.

The raw distance of a pair is the document-universe size minus the combined
coincidence surprise, in log10 units: zero coincidences score the maximum
(log10 of the document count), overwhelming coincidences go negative.
Clamping at zero turns the matrix into edge weights; the closure lets two
career phases of one author connect through bridging papers.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .coincidence import FIELDS, FieldModel, field_coincidence
from .records import Corpus, PublicationRecord

LAYERS = ("raw", "clamped", "closed")


@dataclass
class DistanceMatrix:
    """Symmetric distance layers over one corpus (indexes = record ids)."""

    n: int
    raw: np.ndarray
    clamped: np.ndarray
    closed: np.ndarray = None

    def layer(self, name: str) -> np.ndarray:
        if name not in LAYERS:
            raise ValueError(f"unknown layer {name!r}")
        value = getattr(self, name)
        if value is None:
            raise ValueError(f"layer {name!r} not computed yet")
        return value


def pair_distance(rec_i: PublicationRecord, rec_j: PublicationRecord,
                  model: FieldModel, exclude_author: str = None) -> float:
    """Raw distance of one record pair (log10 units).

    exclude_author drops the shared query name from both author sets: it
    coincides by construction for every pair in the corpus and would only
    shift all distances by a constant.
    """
    total = model.log10_n_docs
    for field_name in FIELDS:
        words_i = getattr(rec_i, field_name)
        words_j = getattr(rec_j, field_name)
        if field_name == "authors" and exclude_author:
            words_i = words_i - {exclude_author}
            words_j = words_j - {exclude_author}
        total += field_coincidence(words_i, words_j, field_name, model)
    return total


def build_matrix(corpus: Corpus, model: FieldModel,
                 include_query_name: bool = False) -> DistanceMatrix:
    """Raw and clamped layers for every record pair.

    The upper triangle is computed and mirrored, so symmetry is exact. The
    clamped diagonal is forced to zero: a paper is at distance zero from
    itself even when its raw self-distance is positive (near-empty records).
    """
    if not corpus.records:
        raise ValueError("corpus is empty")
    exclude = None if include_query_name else corpus.query_name
    n = len(corpus.records)
    raw = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            d = pair_distance(corpus.records[i], corpus.records[j], model,
                              exclude_author=exclude)
            raw[i, j] = d
            raw[j, i] = d
    clamped = np.maximum(raw, 0.0)
    np.fill_diagonal(clamped, 0.0)
    return DistanceMatrix(n=n, raw=raw, clamped=clamped)


def relax_once(weights: np.ndarray) -> np.ndarray:
    """One full relaxation pass: d_ij -> min over k of w_ik + w_kj.

    k ranges over every record including i and j themselves, so a pass can
    never increase an entry (the diagonal is zero).
    """
    return np.minimum.reduce(weights[:, :, None] + weights[None, :, :], axis=1)


def close_distances(matrix: DistanceMatrix) -> DistanceMatrix:
    """Fill the closed layer: the fixed point of the relaxation, i.e.
    all-pairs shortest paths over the clamped weights (Floyd-Warshall)."""
    d = matrix.clamped.copy()
    for k in range(matrix.n):
        np.minimum(d, d[:, k, None] + d[None, k, :], out=d)
    matrix.closed = d
    return matrix


def matrix_csv(matrix: DistanceMatrix, layer: str = "raw") -> str:
    """CSV dump with record ids as row and column headers."""
    values = matrix.layer(layer)
    out = io.StringIO()
    ids = list(range(matrix.n))
    out.write("id," + ",".join(str(i) for i in ids) + "\n")
    for i in ids:
        row = ",".join(format(values[i, j], ".6f") for j in ids)
        out.write(f"{i},{row}\n")
    return out.getvalue()
