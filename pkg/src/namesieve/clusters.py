"""Zero-distance clusters and their presentation data."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .distance import DistanceMatrix
from .records import Corpus

DEFAULT_TOL = 1e-9


@dataclass
class Cluster:
    """A connected component at (closed) distance zero: the candidate set of
    papers belonging to one author."""

    id: int
    member_ids: set
    paper_count: int
    total_citations: int
    year_min: int = None
    year_max: int = None
    representative_id: int = None

    @property
    def period(self) -> str:
        if self.year_min is None:
            return "????-????"
        return f"{self.year_min}-{self.year_max}"


class _UnionFind:
    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, u):
        while self.parent[u] != u:
            self.parent[u] = self.parent[self.parent[u]]
            u = self.parent[u]
        return u

    def union(self, u, v):
        ru, rv = self.find(u), self.find(v)
        if ru != rv:
            self.parent[max(ru, rv)] = min(ru, rv)


def _representative(member_ids, corpus: Corpus) -> int:
    """Most cited member; ties broken by earliest year, then lowest id.
    Members without a year sort after any dated member."""
    def key(rec_id):
        rec = corpus.records[rec_id]
        year = rec.year_int()
        return (-rec.citations, year if year is not None else math.inf, rec_id)
    return min(member_ids, key=key)


def pick_representative(cluster: Cluster, corpus: Corpus) -> int:
    """Record shown as the cluster's sample paper."""
    if not cluster.member_ids:
        raise ValueError("empty cluster")
    return _representative(cluster.member_ids, corpus)


def build_clusters(matrix: DistanceMatrix, corpus: Corpus,
                   tol: float = DEFAULT_TOL) -> list:
    """Connected components of the closed-distance-below-tol graph.

    Ordered by total citations descending, then paper count descending, then
    smallest member id; cluster ids are 1-based in that order.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    closed = matrix.layer("closed")
    n = matrix.n
    uf = _UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if closed[i, j] <= tol:
                uf.union(i, j)

    groups = {}
    for i in range(n):
        groups.setdefault(uf.find(i), set()).add(i)

    clusters = []
    for members in groups.values():
        years = [y for y in (corpus.records[i].year_int() for i in members)
                 if y is not None]
        clusters.append(Cluster(
            id=0,
            member_ids=members,
            paper_count=len(members),
            total_citations=sum(corpus.records[i].citations for i in members),
            year_min=min(years) if years else None,
            year_max=max(years) if years else None,
            representative_id=_representative(members, corpus),
        ))
    clusters.sort(key=lambda c: (-c.total_citations, -c.paper_count,
                                 min(c.member_ids)))
    for rank, cluster in enumerate(clusters, start=1):
        cluster.id = rank
    return clusters


def cluster_distance(a: Cluster, b: Cluster, matrix: DistanceMatrix) -> float:
    """Single linkage: minimum closed distance over member pairs."""
    return min_distance_between(a.member_ids, b.member_ids, matrix)


def min_distance_between(ids_a, ids_b, matrix: DistanceMatrix) -> float:
    closed = matrix.layer("closed")
    return min(closed[i, j] for i in ids_a for j in ids_b)
