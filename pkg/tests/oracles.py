"""Independent reference implementations used only by the test suite.

Everything here is deliberately written by the dumbest correct method
available (exact rationals, exhaustive enumeration, Monte Carlo) and never
shares code with the package under test.
"""

from fractions import Fraction
from itertools import combinations

import mpmath
import numpy as np


def falling(a: int, m: int) -> int:
    """a * (a-1) * ... * (a-m+1), exactly."""
    out = 1
    for t in range(m):
        out *= a - t
    return out


def comb_exact(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    num = falling(n, k)
    den = falling(k, k)
    return num // den


def overlap_pmf_fraction(k: int, n_i: int, n_j: int, n_values: int) -> Fraction:
    """Exact probability that two independent draws (n_i and n_j items,
    without replacement, from n_values) share exactly k items."""
    num = comb_exact(n_i, k) * comb_exact(n_values - n_i, n_j - k)
    den = comb_exact(n_values, n_j)
    return Fraction(num, den)


def overlap_tail_fraction(k: int, n_i: int, n_j: int, n_values: int) -> Fraction:
    total = Fraction(0)
    for n in range(k, min(n_i, n_j) + 1):
        total += overlap_pmf_fraction(n, n_i, n_j, n_values)
    return total


def log10_fraction(frac: Fraction, dps: int = 50) -> float:
    """log10 of an exact rational, evaluated at high precision."""
    if frac == 0:
        return float("-inf")
    with mpmath.workdps(dps):
        return float(mpmath.log10(mpmath.mpf(frac.numerator) / mpmath.mpf(frac.denominator)))


def overlap_tail_by_enumeration(k: int, n_i: int, n_j: int, n_values: int) -> Fraction:
    """Tail probability by enumerating every second draw against a fixed
    first draw (valid by exchangeability). Only usable for small C(N, n_j)."""
    first = set(range(n_i))
    hits = 0
    total = 0
    for second in combinations(range(n_values), n_j):
        total += 1
        if len(first.intersection(second)) >= k:
            hits += 1
    return Fraction(hits, total)


def sample_overlap_counts(rng: np.random.Generator, n_i: int, n_j: int,
                          n_values: int, draws: int) -> np.ndarray:
    """Monte Carlo: overlap sizes of `draws` independent draw pairs.

    The first draw is fixed to {0..n_i-1} (exchangeability again); the second
    is the first n_j slots of a random permutation.
    """
    keys = rng.random((draws, n_values))
    picks = np.argpartition(keys, n_j - 1, axis=1)[:, :n_j]
    return (picks < n_i).sum(axis=1)


def min_path_bruteforce(weights: np.ndarray, max_len: int) -> np.ndarray:
    """All-pairs minimum path weight by exhaustive simple-path enumeration.

    weights: symmetric nonnegative matrix over a complete graph, zero diagonal.
    max_len: maximum number of edges per path.
    """
    n = weights.shape[0]
    best = weights.astype(float).copy()
    np.fill_diagonal(best, 0.0)

    def walk(start: int, here: int, used: set, acc: float, edges: int) -> None:
        if edges == max_len:
            return
        for nxt in range(n):
            if nxt in used:
                continue
            nacc = acc + weights[here, nxt]
            if nacc < best[start, nxt]:
                best[start, nxt] = nacc
            # weights are nonnegative, so once the partial sum exceeds every
            # current bound for this start row no extension can improve it
            if nacc <= best[start].max():
                used.add(nxt)
                walk(start, nxt, used, nacc, edges + 1)
                used.discard(nxt)

    for s in range(n):
        walk(s, s, {s}, 0.0, 0)
    return best


def h_index_by_definition(citations: list) -> int:
    """Largest h with at least h papers having >= h citations each."""
    best = 0
    for h in range(len(citations) + 1):
        if sum(1 for c in citations if c >= h) >= h:
            best = h
    return best
