"""Systematic scalar MDS codes with Vandermonde parity columns.

The parity column for evaluation point xi is (1, xi, xi^2, ..., xi^(k-1));
a geometric column scales consistently under prefix truncation, which is
what lets one final code serve every final codeword after conversion.

Point search scans tuples of distinct nonzero field elements in
lexicographic order and keeps the first one whose systematic code is MDS,
so the artifact is reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence

import numpy as np

from .errors import PointSearchError
from .field import GF256

# Search results per (k, max_r, poly); tuples are immutable, reuse is safe.
_SEARCH_CACHE: dict[tuple[int, int, int], tuple[int, ...]] = {}


@dataclass(frozen=True)
class ScalarCode:
    """An [n, k] code with generator [I | P] over GF(2^8)."""

    n: int
    k: int
    generator: np.ndarray  # k x n uint8


def parity_vector(t_index: int, k: int, points: Sequence[int], field: GF256) -> np.ndarray:
    """Column of k entries (xi_t^0, ..., xi_t^(k-1)) for 1-based parity index t."""
    if not 1 <= t_index <= len(points):
        raise ValueError(f"parity index {t_index} out of range [1, {len(points)}]")
    xi = points[t_index - 1]
    return np.array([field.pow(xi, j) for j in range(k)], dtype=np.uint8)


def build_systematic_code(n: int, k: int, points: Sequence[int], field: GF256) -> ScalarCode:
    """Assemble the [n, k] systematic code whose parity block is Vandermonde."""
    if not 1 <= k <= n:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    if len(points) != n - k:
        raise ValueError(f"expected {n - k} evaluation points, got {len(points)}")
    g = np.zeros((k, n), dtype=np.uint8)
    g[:, :k] = np.eye(k, dtype=np.uint8)
    for t in range(1, n - k + 1):
        g[:, k + t - 1] = parity_vector(t, k, points, field)
    return ScalarCode(n=n, k=k, generator=g)


def verify_mds_scalar(code: ScalarCode, field: GF256) -> bool:
    """Exhaustively check that every k-subset of generator columns has rank k."""
    for cols in combinations(range(code.n), code.k):
        if field.rank(code.generator[:, cols]) != code.k:
            return False
    return True


def check_prefix_scaling(points: Sequence[int], kf: int, lam: int, field: GF256) -> bool:
    """Check h_t[1..kf] == xi_t^(-(i-1)kf) * h_t[(i-1)kf+1 .. i*kf] for all t, i."""
    k = lam * kf
    for t in range(1, len(points) + 1):
        h = parity_vector(t, k, points, field)
        head = h[:kf]
        for i in range(1, lam + 1):
            factor = field.pow(points[t - 1], -(i - 1) * kf)
            scaled = field.mul_arrays(np.uint8(factor), h[(i - 1) * kf: i * kf])
            if not np.array_equal(head, scaled):
                return False
    return True


def _det_nonzero(rows: list[list[int]], field: GF256) -> bool:
    """Destructive nonsingularity test on a small list-of-lists matrix."""
    n = len(rows)
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c]), None)
        if piv is None:
            return False
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
        inv = field.inv(rows[c][c])
        for r in range(c + 1, n):
            if rows[r][c]:
                f = field.mul(rows[r][c], inv)
                for cc in range(c, n):
                    rows[r][cc] ^= field.mul(f, rows[c][cc])
    return True


def _extension_superregular(cols: list[list[int]], new: list[int], k: int, field: GF256) -> bool:
    """True iff every square submatrix of [cols | new] touching `new` is nonsingular.

    [I | P] is MDS exactly when every square submatrix of P is nonsingular, so
    checking only the submatrices that involve the new column extends an
    already-certified prefix.
    """
    r_prev = len(cols)
    for s in range(1, r_prev + 2):
        if s > k:
            break
        for row_idx in combinations(range(k), s):
            for col_idx in combinations(range(r_prev), s - 1):
                m = [[cols[c][r] for c in col_idx] + [new[r]] for r in row_idx]
                if not _det_nonzero(m, field):
                    return False
    return True


def mds_point_tuples(k: int, max_r: int, field: GF256) -> Iterator[tuple[int, ...]]:
    """Yield point tuples making [k + max_r, k] MDS, in lexicographic order."""
    points: list[int] = []
    cols: list[list[int]] = []
    used = bytearray(256)

    def extend() -> Iterator[tuple[int, ...]]:
        depth = len(points)
        for xi in range(1, 256):
            if used[xi]:
                continue
            col = [field.pow(xi, j) for j in range(k)]
            if not _extension_superregular(cols, col, k, field):
                continue
            points.append(xi)
            cols.append(col)
            used[xi] = 1
            if depth + 1 == max_r:
                yield tuple(points)
            else:
                yield from extend()
            points.pop()
            cols.pop()
            used[xi] = 0

    return extend()


def search_points(n: int, k: int, max_r: int, field: GF256) -> tuple[int, ...]:
    """First point tuple (lexicographic scan) whose [k + max_r, k] code is MDS.

    Certifying max_r parities at once also certifies every [k + r', k] prefix
    with r' <= max_r, and (by truncating the columns to their first kF rows)
    the final codes built from the same points.
    """
    if max_r < n - k:
        raise ValueError(f"max_r={max_r} must cover the n-k={n - k} parities")
    if k < 1 or n < k:
        raise ValueError(f"need n >= k >= 1, got n={n}, k={k}")
    if max_r == 0:
        return ()
    key = (k, max_r, field.poly)
    if key not in _SEARCH_CACHE:
        found = next(mds_point_tuples(k, max_r, field), None)
        if found is None:
            raise PointSearchError(
                f"no MDS point tuple of size {max_r} for k={k} over GF(256), poly={field.poly:#x}"
            )
        _SEARCH_CACHE[key] = found
    return _SEARCH_CACHE[key]
