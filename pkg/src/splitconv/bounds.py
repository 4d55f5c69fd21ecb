"""Closed-form read-bandwidth baselines and lower bounds, plus a grid oracle.

Every quantity here is a rational multiple of the subpacketization alpha and
is kept as an exact Fraction (per unit alpha), so tightness comparisons
against the constructions are exact.  The curve sampler works with rational
parameter ratios directly; all formulas are homogeneous of degree one in
(kf, ri, rf), which is what makes the plotted ratios independent of kf.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

from .errors import BoundRegionError, NoSavingsError


@dataclass(frozen=True)
class BoundInputs:
    """Code-shape inputs to the bound formulas."""

    lam: int
    kf: int
    ri: int
    rf: int

    def __post_init__(self):
        if self.lam < 2:
            raise ValueError(f"split factor must be >= 2, got {self.lam}")
        for name in ("kf", "ri", "rf"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class BetaAssignment:
    """Per-symbol download amounts as fractions of alpha."""

    beta1: Fraction
    beta2: Fraction

    def __post_init__(self):
        if not 0 <= self.beta1 <= 1 or not 0 <= self.beta2 <= 1:
            raise ValueError("betas must lie in [0, alpha]")


def gamma_r_of(b: BoundInputs, betas: BetaAssignment) -> Fraction:
    """Read bandwidth lam*kf*beta1 + ri*beta2, per unit alpha."""
    return b.lam * b.kf * betas.beta1 + b.ri * betas.beta2


# ----------------------------------------------------------------------
# rational cores (arguments may be Fractions; results are per unit alpha)
# ----------------------------------------------------------------------

def _default(lam, kf) -> Fraction:
    return Fraction(lam) * kf


def _access_optimal(lam, kf, ri, rf) -> Fraction:
    if ri >= rf:
        return Fraction(lam - 1) * kf + rf
    return _default(lam, kf)


def _loose(lam, kf, ri, rf) -> Fraction:
    if ri <= lam * rf:
        penalty = max(Fraction(kf, 1) / rf - 1, Fraction(0))
        return Fraction(lam) * kf - ri * penalty
    return Fraction(lam) * min(rf, kf)


def _tight(lam, kf, ri, rf) -> Fraction:
    return Fraction(lam) * rf * ((lam - 1) * kf + ri) / ((lam - 1) * rf + ri)


def _applicable(lam, kf, ri, rf) -> Fraction:
    return _tight(lam, kf, ri, rf) if ri >= rf else _loose(lam, kf, ri, rf)


# ----------------------------------------------------------------------
# public closed forms
# ----------------------------------------------------------------------

def gamma_read_default(b: BoundInputs) -> Fraction:
    """Read everything and re-encode: lam*kf per alpha."""
    return _default(b.lam, b.kf)


def gamma_read_access_optimal(b: BoundInputs) -> Fraction:
    """Best possible when minimizing accessed symbols instead of bandwidth."""
    return _access_optimal(b.lam, b.kf, b.ri, b.rf)


def bound_loose(b: BoundInputs) -> Fraction:
    """Flow-cut lower bound (no conjecture)."""
    return _loose(b.lam, b.kf, b.ri, b.rf)


def bound_tight(b: BoundInputs) -> Fraction:
    """Conjecture-assisted lower bound; valid for ri >= rf and rf <= kf."""
    if b.ri < b.rf or b.rf > b.kf:
        raise BoundRegionError(
            f"tight bound needs ri >= rf and rf <= kf (got ri={b.ri}, rf={b.rf}, kf={b.kf}); "
            "use bound_loose"
        )
    return _tight(b.lam, b.kf, b.ri, b.rf)


def applicable_bound(b: BoundInputs) -> Fraction:
    """The binding lower bound: tight where it applies, loose elsewhere."""
    return _applicable(b.lam, b.kf, b.ri, b.rf)


def savings_possible(b: BoundInputs) -> bool:
    """False exactly in the rf >= kf region where default is optimal."""
    return b.rf < b.kf


def optimal_betas(b: BoundInputs, assume_conjecture: bool) -> BetaAssignment:
    """Closed-form minimizers of the read bandwidth under the cut constraint.

    Without the conjecture only the flow cut binds: retired symbols give the
    better bang for the buck, so beta2 saturates first.  With the conjecture
    and ri >= rf, the downloads balance at the construction's values.
    """
    if b.rf >= b.kf:
        raise NoSavingsError(f"rF={b.rf} >= kF={b.kf}: any betas are optimal (use default)")
    if assume_conjecture and b.ri >= b.rf:
        d = (b.lam - 1) * b.rf + b.ri
        return BetaAssignment(Fraction((b.lam - 1) * b.rf, d), Fraction(b.lam * b.rf, d))
    beta1 = max(1 - Fraction(b.ri, b.lam * b.rf), Fraction(0))
    beta2 = min(Fraction(1), Fraction(b.lam * b.rf, b.ri))
    return BetaAssignment(beta1, beta2)


def grid_search_betas(b: BoundInputs, assume_conjecture: bool, steps: int) -> BetaAssignment:
    """Grid minimizer of the read bandwidth over (beta1, beta2) in [0, alpha]^2.

    Scans all beta1 grid values; for each, the cheapest feasible beta2 is the
    smallest grid value satisfying the flow-cut constraint (and, in
    conjecture mode, below the conjecture cap).  Since the objective is
    strictly increasing in beta2 this reproduces the full two-dimensional
    scan, ties going to smaller beta1 then smaller beta2.  Integer
    arithmetic throughout: constraints are scaled by `steps`.
    """
    if steps < 100:
        raise ValueError(f"steps must be >= 100, got {steps}")
    m = min(b.rf, b.kf)
    best = None  # (gamma_scaled, i1, i2)
    for i1 in range(steps + 1):
        need = b.lam * m * (steps - i1)
        i2 = max(0, -(-need // b.ri))  # ceil division
        if assume_conjecture:
            cap = (b.lam * i1) // (b.lam - 1)
            if i2 > cap:
                continue
        if i2 > steps:
            continue
        gamma = b.lam * b.kf * i1 + b.ri * i2
        if best is None or gamma < best[0]:
            best = (gamma, i1, i2)
    assert best is not None  # (steps, steps) is always feasible
    return BetaAssignment(Fraction(best[1], steps), Fraction(best[2], steps))


# ----------------------------------------------------------------------
# figure-2 style curves
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    """Read-bandwidth ratios (vs. default) at one rf/ri sample."""

    rf_over_ri: Fraction
    rel_default: Fraction
    rel_access: Fraction
    rel_bound: Fraction
    achievable: bool


def curve(lam: int, ri_over_ki: Fraction, samples: int,
          example_kf: int | None = None) -> list[CurvePoint]:
    """Sample the relative-bandwidth curves over rf/ri in (0, ki/(lam*ri)].

    Normalizing ki = 1 gives kf = 1/lam, ri = ri_over_ki, rf = x*ri; all
    ratios come out exact because the formulas are homogeneous in alpha and
    degree-one in the remaining parameters.  With example_kf set, points
    where (ri, rf) land on integers for that kf (with 1 <= rf < kf) are
    flagged as achievable by the constructions.
    """
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    rho = Fraction(ri_over_ki)
    if rho <= 0:
        raise ValueError("ri/ki must be positive")
    kf = Fraction(1, lam)
    ri = rho
    x_max = 1 / (lam * rho)
    out = []
    for s in range(1, samples + 1):
        x = x_max * Fraction(s, samples)
        rf = x * ri
        default = _default(lam, kf)
        rel_access = _access_optimal(lam, kf, ri, rf) / default
        rel_bound = _applicable(lam, kf, ri, rf) / default
        achievable = False
        if example_kf is not None:
            ki_int = lam * example_kf
            ri_int = rho * ki_int
            rf_int = x * ri_int
            achievable = (
                ri_int.denominator == 1 and rf_int.denominator == 1
                and 1 <= rf_int <= example_kf - 1
            )
        out.append(CurvePoint(rf_over_ri=x, rel_default=Fraction(1),
                              rel_access=rel_access, rel_bound=rel_bound,
                              achievable=achievable))
    return out


CSV_HEADER = ["rf_over_ri", "rel_default", "rel_access_opt", "rel_bound", "achievable"]


def write_curve_csv(points: Iterable[CurvePoint], fp: TextIO) -> None:
    """Delimited form of the curve: ratios with six fractional digits."""
    w = csv.writer(fp, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for p in points:
        w.writerow([
            f"{float(p.rf_over_ri):.6f}",
            f"{float(p.rel_default):.6f}",
            f"{float(p.rel_access):.6f}",
            f"{float(p.rel_bound):.6f}",
            int(p.achievable),
        ])


def curve_json_dict(points: Sequence[CurvePoint]) -> list[dict]:
    """Exact-rational form of the curve for the JSON output mode."""
    return [
        {
            "rf_over_ri": str(p.rf_over_ri),
            "rel_default": str(p.rel_default),
            "rel_access_opt": str(p.rel_access),
            "rel_bound": str(p.rel_bound),
            "achievable": p.achievable,
        }
        for p in points
    ]
