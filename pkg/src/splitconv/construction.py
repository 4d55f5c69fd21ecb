"""Initial and final vector codes for split conversion, both parameter cases.

Conventions used throughout (all 1-based, matching the algebra):

* instance indices l run over [alpha]; each symbol stores alpha subsymbols;
* block coordinates (l1, l2) slice the instances into blocks of rf columns
  (plus, when ri > rf, a tail block of ri - rf columns);
* the logical permutation for final codeword i sends instance l to
  ((l1 - i) mod lam) * rf + l2, i.e. block b of the parity carries codeword
  b's content for its first block, so a single download pattern (skip block
  one of every data symbol) serves every codeword;
* SPLIT_DOWN piggybacks carry tail-block content into early instances of the
  high parities.  The piggyback is scaled by (xi_t / xi_l2)^((l1-1)*kf) so
  that the leftover lump after conversion lands in the tail of the final
  parity with a scaling that is the same for every final codeword.  Without
  that factor the lam outputs would not share one final code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from .basecode import parity_vector, search_points
from .errors import ConstructionInvariantError, NoSavingsError, NotSplitRegimeError
from .field import GF256

SPLIT_DOWN = "SPLIT_DOWN"  # ri > rf: alpha = (lam-1)*rf + ri
SPLIT_UP = "SPLIT_UP"      # ri <= rf: alpha = lam*rf


@dataclass(frozen=True)
class ConversionParams:
    """Derived quantities for one (nI, kI) -> (nF, kF) split conversion."""

    ni: int
    ki: int
    nf: int
    kf: int
    lam: int
    ri: int
    rf: int
    alpha: int
    beta1: int
    beta2: int
    case: str

    @property
    def max_parity(self) -> int:
        return max(self.ri, self.rf)

    def to_json_dict(self) -> dict:
        return {
            "ni": self.ni, "ki": self.ki, "nf": self.nf, "kf": self.kf,
            "lambda_f": self.lam, "ri": self.ri, "rf": self.rf,
            "alpha": self.alpha, "beta1": self.beta1, "beta2": self.beta2,
            "case": self.case,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "ConversionParams":
        params = derive_params(d["ni"], d["ki"], d["nf"], d["kf"])
        canon = params.to_json_dict()
        stale = {k: (v, canon[k]) for k, v in d.items() if k in canon and canon[k] != v}
        if stale:
            raise ValueError(f"parameter file disagrees with derived values: {stale}")
        return params

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def derive_params(ni: int, ki: int, nf: int, kf: int) -> ConversionParams:
    """Validate the split regime and derive lam, alpha and the download sizes."""
    for name, v in (("ni", ni), ("ki", ki), ("nf", nf), ("kf", kf)):
        if v <= 0:
            raise NotSplitRegimeError(f"{name} must be positive, got {v}")
    if ni <= ki:
        raise NotSplitRegimeError(f"initial code needs nI > kI, got nI={ni}, kI={ki}")
    if nf <= kf:
        raise NotSplitRegimeError(f"final code needs nF > kF, got nF={nf}, kF={kf}")
    if ki % kf != 0:
        raise NotSplitRegimeError(f"kI={ki} is not an integer multiple of kF={kf}")
    lam = ki // kf
    if lam < 2:
        raise NotSplitRegimeError(f"split factor must be >= 2, got {lam}")
    ri = ni - ki
    rf = nf - kf
    if rf >= kf:
        raise NoSavingsError(
            f"rF={rf} >= kF={kf}: the default approach is already bandwidth-optimal here"
        )
    if ri > rf:
        case = SPLIT_DOWN
        alpha = (lam - 1) * rf + ri
        beta1 = (lam - 1) * rf
    else:
        case = SPLIT_UP
        alpha = lam * rf
        beta1 = lam * rf - ri
    return ConversionParams(
        ni=ni, ki=ki, nf=nf, kf=kf, lam=lam, ri=ri, rf=rf,
        alpha=alpha, beta1=beta1, beta2=lam * rf, case=case,
    )


def block_coords(l: int, params: ConversionParams) -> tuple[int, int]:
    """Map instance l to its (block, offset) pair, both 1-based."""
    if not 1 <= l <= params.alpha:
        raise ValueError(f"instance {l} out of range [1, {params.alpha}]")
    if params.case == SPLIT_DOWN and l > params.lam * params.rf:
        return params.lam + 1, l - params.lam * params.rf
    return (l - 1) // params.rf + 1, (l - 1) % params.rf + 1


def permuted_instance(l: int, i: int, params: ConversionParams) -> int:
    """Instance index carrying final codeword i's content at parity instance l."""
    if not 1 <= i <= params.lam:
        raise ValueError(f"final codeword index {i} out of range [1, {params.lam}]")
    l1, l2 = block_coords(l, params)
    if l1 > params.lam:
        raise ValueError(f"instance {l} lies in the unpermuted tail block")
    return ((l1 - i) % params.lam) * params.rf + l2


def projection_vector(i: int, t: int, l: int, params: ConversionParams,
                      points: Sequence[int], field: GF256) -> np.ndarray:
    """Base-code parity t applied to codeword i's data at instance l.

    Returns the column p over all alpha*kI message coordinates; its kF
    nonzero entries sit at stride alpha inside codeword i's coordinate block.
    """
    if not 1 <= i <= params.lam:
        raise ValueError(f"final codeword index {i} out of range [1, {params.lam}]")
    if not 1 <= t <= params.max_parity:
        raise ValueError(f"parity index {t} out of range [1, {params.max_parity}]")
    if not 1 <= l <= params.alpha:
        raise ValueError(f"instance {l} out of range [1, {params.alpha}]")
    h = parity_vector(t, params.ki, points, field)
    vec = np.zeros(params.alpha * params.ki, dtype=np.uint8)
    base = (i - 1) * params.kf * params.alpha
    for j in range(1, params.kf + 1):
        vec[base + (j - 1) * params.alpha + (l - 1)] = h[(i - 1) * params.kf + j - 1]
    return vec


def initial_encoding_vector(t: int, l: int, params: ConversionParams,
                            points: Sequence[int], field: GF256) -> np.ndarray:
    """Encoding vector q^I for instance l of initial parity t."""
    if not 1 <= t <= params.ri:
        raise ValueError(f"initial parity index {t} out of range [1, {params.ri}]")
    l1, l2 = block_coords(l, params)
    vec = np.zeros(params.alpha * params.ki, dtype=np.uint8)
    if params.case == SPLIT_DOWN:
        if l1 <= params.lam:
            for i in range(1, params.lam + 1):
                vec ^= projection_vector(i, t, permuted_instance(l, i, params), params, points, field)
            if t > params.rf:
                pb = projection_vector(l1, l2, (params.lam - 1) * params.rf + t, params, points, field)
                coeff = field.pow(field.div(points[t - 1], points[l2 - 1]), (l1 - 1) * params.kf)
                vec ^= field.mul_arrays(np.uint8(coeff), pb)
        else:
            for i in range(1, params.lam + 1):
                vec ^= projection_vector(i, t, l, params, points, field)
    else:
        for i in range(1, params.lam + 1):
            vec ^= projection_vector(i, t, permuted_instance(l, i, params), params, points, field)
        if l2 > params.ri:
            vec ^= projection_vector(l1, l2, t, params, points, field)
    return vec


def final_encoding_vector(i: int, t: int, l: int, params: ConversionParams,
                          points: Sequence[int], field: GF256) -> np.ndarray:
    """Encoding vector q^F(i) for instance l of final parity t, in global coordinates."""
    if not 1 <= t <= params.rf:
        raise ValueError(f"final parity index {t} out of range [1, {params.rf}]")
    l1, l2 = block_coords(l, params)
    scale = field.pow(points[t - 1], -(i - 1) * params.kf)
    vec = field.mul_arrays(np.uint8(scale), projection_vector(i, t, l, params, points, field))
    if params.case == SPLIT_DOWN and l1 > params.lam:
        # Tail instances also carry the lump the piggyback could not shed:
        # parity rf+l2 content at instance t, under its own scaling factor.
        big_t = params.rf + l2
        scale_big = field.pow(points[big_t - 1], -(i - 1) * params.kf)
        vec ^= field.mul_arrays(np.uint8(scale_big),
                                projection_vector(i, big_t, t, params, points, field))
    return vec


@dataclass(frozen=True)
class VectorCode:
    """An [n, k, alpha] linear vector code given by its alpha*k x alpha*n generator.

    Column (s-1)*alpha + (l-1) encodes subsymbol l of symbol s; the first k
    symbols are systematic.
    """

    n: int
    k: int
    alpha: int
    field_poly: int
    generator: np.ndarray

    def column(self, s: int, l: int) -> np.ndarray:
        if not (1 <= s <= self.n and 1 <= l <= self.alpha):
            raise ValueError(f"symbol/instance ({s}, {l}) out of range")
        return self.generator[:, (s - 1) * self.alpha + (l - 1)]

    def to_json(self) -> str:
        cols = [
            [self.column(s, l).tolist() for l in range(1, self.alpha + 1)]
            for s in range(1, self.n + 1)
        ]
        return json.dumps(
            {"n": self.n, "k": self.k, "alpha": self.alpha,
             "field_poly": self.field_poly, "columns": cols},
            indent=2,
        )

    @staticmethod
    def from_json(text: str) -> "VectorCode":
        d = json.loads(text)
        n, k, alpha = d["n"], d["k"], d["alpha"]
        gen = np.zeros((alpha * k, alpha * n), dtype=np.uint8)
        for s in range(n):
            for l in range(alpha):
                gen[:, s * alpha + l] = np.array(d["columns"][s][l], dtype=np.uint8)
        return VectorCode(n=n, k=k, alpha=alpha, field_poly=d["field_poly"], generator=gen)


def _systematic_block(k: int, alpha: int) -> np.ndarray:
    return np.eye(alpha * k, dtype=np.uint8)


def build_initial_code(params: ConversionParams, points: Sequence[int],
                       field: GF256) -> VectorCode:
    """The [nI, kI, alpha] initial code: systematic data plus piggybacked parities."""
    if len(points) < params.max_parity:
        raise ValueError(f"need {params.max_parity} evaluation points, got {len(points)}")
    dim = params.alpha * params.ki
    gen = np.zeros((dim, params.alpha * params.ni), dtype=np.uint8)
    gen[:, :dim] = _systematic_block(params.ki, params.alpha)
    for t in range(1, params.ri + 1):
        for l in range(1, params.alpha + 1):
            col = (params.ki + t - 1) * params.alpha + (l - 1)
            gen[:, col] = initial_encoding_vector(t, l, params, points, field)
    return VectorCode(n=params.ni, k=params.ki, alpha=params.alpha,
                      field_poly=field.poly, generator=gen)


def build_final_code(params: ConversionParams, points: Sequence[int],
                     field: GF256) -> VectorCode:
    """The single [nF, kF, alpha] final code shared by all lam final codewords.

    Built from codeword 1's encoding vectors restricted to its own message
    coordinates; equality of the restriction across every i is asserted,
    since that is exactly what makes the code shared.
    """
    kfa = params.kf * params.alpha
    dim_global = params.alpha * params.ki
    gen = np.zeros((kfa, params.alpha * params.nf), dtype=np.uint8)
    gen[:, :kfa] = _systematic_block(params.kf, params.alpha)
    for t in range(1, params.rf + 1):
        for l in range(1, params.alpha + 1):
            ref = None
            for i in range(1, params.lam + 1):
                full = final_encoding_vector(i, t, l, params, points, field)
                lo = (i - 1) * kfa
                local = full[lo: lo + kfa]
                outside = np.delete(np.arange(dim_global), np.arange(lo, lo + kfa))
                if np.any(full[outside]):
                    raise ConstructionInvariantError(
                        f"final vector (i={i}, t={t}, l={l}) has support outside codeword {i}"
                    )
                if ref is None:
                    ref = local
                elif not np.array_equal(ref, local):
                    raise ConstructionInvariantError(
                        f"final codes disagree between i=1 and i={i} at (t={t}, l={l})"
                    )
            gen[:, (params.kf + t - 1) * params.alpha + (l - 1)] = ref
    return VectorCode(n=params.nf, k=params.kf, alpha=params.alpha,
                      field_poly=field.poly, generator=gen)


def verify_mds_vector(code: VectorCode, field: GF256) -> bool:
    """Exhaustively check invertibility of every k-subset of symbols."""
    dim = code.alpha * code.k
    for subset in combinations(range(1, code.n + 1), code.k):
        cols = np.concatenate(
            [np.arange((s - 1) * code.alpha, s * code.alpha) for s in subset]
        )
        if field.rank(code.generator[:, cols]) != dim:
            return False
    return True


def find_code_pair(params: ConversionParams, field: GF256,
                   points: Sequence[int] | None = None,
                   vector_verify: bool = False,
                   max_attempts: int = 8) -> tuple[tuple[int, ...], VectorCode, VectorCode]:
    """Search points (unless given) and build the initial/final code pair.

    With vector_verify=True the pair is checked with verify_mds_vector and
    the search advances to the next point tuple on failure; the piggyback
    structure preserves MDS-ness of the base code, so in practice the first
    tuple is the one returned.
    """
    if points is not None:
        pts = tuple(points)
        return pts, build_initial_code(params, pts, field), build_final_code(params, pts, field)
    if not vector_verify:
        pts = search_points(params.ni, params.ki, params.max_parity, field)
        return pts, build_initial_code(params, pts, field), build_final_code(params, pts, field)
    from .basecode import mds_point_tuples

    for attempt, pts in enumerate(mds_point_tuples(params.ki, params.max_parity, field)):
        if attempt >= max_attempts:
            break
        initial = build_initial_code(params, pts, field)
        final = build_final_code(params, pts, field)
        if verify_mds_vector(initial, field) and verify_mds_vector(final, field):
            return pts, initial, final
    raise ConstructionInvariantError(
        f"no MDS vector-code pair within {max_attempts} point tuples"
    )
