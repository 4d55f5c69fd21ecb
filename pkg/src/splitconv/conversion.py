"""Encoding, decoding, and the bandwidth-accounted split conversion.

The converter never touches the initial codeword directly: a transfer
buffer is populated from the download plan up front, and every later read
goes through it.  Reading a subsymbol the plan does not cover raises, so
the reported download count is enforced by construction rather than by
bookkeeping.  Unchanged symbols are reused in place in the outputs (no
copy); reads of their planned subsymbols during parity synthesis still
count, since they cross node boundaries in the transfer model.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import bounds as bnd
from .basecode import parity_vector
from .construction import (
    SPLIT_DOWN,
    ConversionParams,
    VectorCode,
    build_final_code,
)
from .errors import FormatError, PlanViolationError
from .field import GF256

MAGIC = b"CVTC"
VERSION = 0x01


@dataclass
class Codeword:
    """n symbols of alpha subsymbols each, plus enough header info to ship it."""

    symbols: list[np.ndarray]
    k: int
    field_poly: int

    @property
    def n(self) -> int:
        return len(self.symbols)

    @property
    def alpha(self) -> int:
        return len(self.symbols[0])

    def subsymbol(self, s: int, l: int) -> int:
        """Subsymbol l of symbol s, 1-based."""
        return int(self.symbols[s - 1][l - 1])


def encode(code: VectorCode, message, field: GF256) -> Codeword:
    """Multiply the message row vector by the generator and slice into symbols."""
    m = np.asarray(message, dtype=np.uint8)
    if m.ndim != 1 or m.shape[0] != code.alpha * code.k:
        raise ValueError(f"message must have length {code.alpha * code.k}")
    c = field.vec_mat(m, code.generator)
    symbols = [c[s * code.alpha:(s + 1) * code.alpha].copy() for s in range(code.n)]
    return Codeword(symbols=symbols, k=code.k, field_poly=code.field_poly)


def decode(code: VectorCode, available, field: GF256) -> np.ndarray:
    """Recover the message from exactly k distinct symbols.

    `available` is a sequence of (symbol_index, subsymbols) pairs with
    1-based symbol indices.  Singularity here would mean the code is not
    MDS; it surfaces as SingularMatrixError.
    """
    pairs = list(available)
    if len(pairs) != code.k:
        raise ValueError(f"need exactly {code.k} symbols, got {len(pairs)}")
    indices = [s for s, _ in pairs]
    if len(set(indices)) != code.k or not all(1 <= s <= code.n for s in indices):
        raise ValueError("symbol indices must be distinct and within [1, n]")
    cols = np.concatenate(
        [np.arange((s - 1) * code.alpha, s * code.alpha) for s in indices]
    )
    sub = code.generator[:, cols]
    rhs = np.concatenate([np.asarray(v, dtype=np.uint8) for _, v in pairs])
    if rhs.shape[0] != code.alpha * code.k:
        raise ValueError("each symbol must supply alpha subsymbols")
    return field.solve_linear(sub.T, rhs)


# ----------------------------------------------------------------------
# download plan
# ----------------------------------------------------------------------

ROLE_UNCHANGED = "unchanged"
ROLE_RETIRED = "retired"


@dataclass(frozen=True)
class SymbolPlan:
    role: str
    codeword: int | None  # owning final codeword for unchanged symbols
    instances: tuple[int, ...]


@dataclass(frozen=True)
class DownloadPlan:
    symbols: dict[int, SymbolPlan]  # keyed by 1-based initial symbol index

    def download_total(self) -> int:
        return sum(len(p.instances) for p in self.symbols.values())


def make_download_plan(params: ConversionParams) -> DownloadPlan:
    """Which subsymbols conversion may transfer from each initial symbol.

    Every data symbol skips its first block (the permutation routes that
    content through the retired parities), so the plan is the same for all
    of them; retired symbols ship their first lam*rf instances (SPLIT_DOWN)
    or everything (SPLIT_UP).
    """
    if params.case == SPLIT_DOWN:
        unchanged = tuple(range(params.rf + 1, params.lam * params.rf + 1))
        retired = tuple(range(1, params.lam * params.rf + 1))
    else:
        unchanged = tuple(
            l for l in range(1, params.alpha + 1)
            if (l - 1) % params.rf + 1 > params.ri or l > params.rf
        )
        retired = tuple(range(1, params.alpha + 1))
    assert len(unchanged) == params.beta1 and len(retired) == params.beta2
    plan = {}
    for s in range(1, params.ki + 1):
        plan[s] = SymbolPlan(ROLE_UNCHANGED, (s - 1) // params.kf + 1, unchanged)
    for t in range(1, params.ri + 1):
        plan[params.ki + t] = SymbolPlan(ROLE_RETIRED, None, retired)
    return DownloadPlan(symbols=plan)


class _Transfer:
    """Materialized downloads; the only window the converter has on the input."""

    def __init__(self, cw: Codeword, plan: DownloadPlan):
        self._cells = {
            (s, l): cw.subsymbol(s, l)
            for s, sp in plan.symbols.items()
            for l in sp.instances
        }
        self.count = len(self._cells)

    def get(self, s: int, l: int) -> int:
        try:
            return self._cells[(s, l)]
        except KeyError:
            raise PlanViolationError(
                f"subsymbol ({s}, {l}) is outside the download plan"
            ) from None


# ----------------------------------------------------------------------
# bandwidth report
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class BandwidthReport:
    """Measured transfer counts next to the closed forms and baselines."""

    downloaded_subsymbols: int
    written_subsymbols: int
    gamma_r: int
    gamma_w: int
    gamma: int
    baseline_default: int
    baseline_access_optimal: int
    bound_loose: Fraction
    bound_tight: Fraction

    def to_json_dict(self) -> dict:
        def num(x):
            if isinstance(x, Fraction):
                return int(x) if x.denominator == 1 else str(x)
            return x

        return {
            "downloaded_subsymbols": self.downloaded_subsymbols,
            "written_subsymbols": self.written_subsymbols,
            "gamma_r": self.gamma_r,
            "gamma_w": self.gamma_w,
            "gamma": self.gamma,
            "baseline_default": self.baseline_default,
            "baseline_access_optimal": self.baseline_access_optimal,
            "bound_loose": num(self.bound_loose),
            "bound_tight": num(self.bound_tight),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)


def _report(params: ConversionParams, downloaded: int, written: int) -> BandwidthReport:
    b = bnd.BoundInputs(lam=params.lam, kf=params.kf, ri=params.ri, rf=params.rf)
    alpha = params.alpha
    return BandwidthReport(
        downloaded_subsymbols=downloaded,
        written_subsymbols=written,
        gamma_r=downloaded,
        gamma_w=written,
        gamma=downloaded + written,
        baseline_default=int(bnd.gamma_read_default(b) * alpha),
        baseline_access_optimal=int(bnd.gamma_read_access_optimal(b) * alpha),
        bound_loose=bnd.bound_loose(b) * alpha,
        bound_tight=bnd.applicable_bound(b) * alpha,
    )


# ----------------------------------------------------------------------
# conversion procedures
# ----------------------------------------------------------------------

def _check_input(initial: Codeword, params: ConversionParams, field: GF256) -> None:
    if initial.n != params.ni or initial.alpha != params.alpha or initial.k != params.ki:
        raise ValueError(
            f"codeword shape (n={initial.n}, k={initial.k}, alpha={initial.alpha}) "
            f"does not match params (nI={params.ni}, kI={params.ki}, alpha={params.alpha})"
        )
    if initial.field_poly != field.poly:
        raise ValueError(
            f"codeword field {initial.field_poly:#x} differs from {field.poly:#x}"
        )


def convert(initial: Codeword, params: ConversionParams, points, field: GF256
            ) -> tuple[list[Codeword], BandwidthReport]:
    """Split one initial codeword into lam final codewords of the shared final code.

    Downloads exactly beta1 subsymbols per unchanged symbol and beta2 per
    retired symbol; data symbols move into the outputs untouched.  Order of
    work per final codeword: interference subtraction on the projection
    parities, then piggyback recovery, then synthesis of the remaining
    parity subsymbols from downloaded data.
    """
    _check_input(initial, params, field)
    plan = make_download_plan(params)
    tx = _Transfer(initial, plan)
    hs = {
        t: [int(v) for v in parity_vector(t, params.ki, points, field)]
        for t in range(1, params.max_parity + 1)
    }

    finals = []
    for i in range(1, params.lam + 1):
        parity = np.zeros((params.rf, params.alpha), dtype=np.uint8)
        if params.case == SPLIT_DOWN:
            _synthesize_down(parity, i, params, points, field, tx, hs)
        else:
            _synthesize_up(parity, i, params, points, field, tx, hs)
        data = [initial.symbols[(i - 1) * params.kf + j] for j in range(params.kf)]
        finals.append(Codeword(symbols=data + list(parity), k=params.kf,
                               field_poly=field.poly))

    written = params.lam * params.rf * params.alpha
    report = _report(params, tx.count, written)
    assert report.gamma_r == params.lam * params.kf * params.beta1 + params.ri * params.beta2
    return finals, report


def _interference(i: int, offset: int, h: list[int], params: ConversionParams,
                  field: GF256, tx: _Transfer, include_self: bool) -> int:
    """Sum of other codewords' base-parity content folded into a parity instance.

    The parity instance lives in block i at the given offset; codeword i2's
    share sits at instance ((i - i2) mod lam)*rf + offset of its own data.
    """
    acc = 0
    for i2 in range(1, params.lam + 1):
        if i2 == i and not include_self:
            continue
        inst = ((i - i2) % params.lam) * params.rf + offset
        base = (i2 - 1) * params.kf
        for j in range(1, params.kf + 1):
            acc ^= field.mul(h[base + j - 1], tx.get(base + j, inst))
    return acc


def _synthesize_down(parity: np.ndarray, i: int, params: ConversionParams,
                     points, field: GF256, tx: _Transfer, hs) -> None:
    a = (i - 1) * params.kf
    lam, rf, ki = params.lam, params.rf, params.ki
    # 1. projection parities: block-one instances come from the retired
    #    symbols with the other codewords' downloads subtracted.
    for t in range(1, rf + 1):
        scale = field.pow(points[t - 1], -a)
        for o in range(1, rf + 1):
            raw = tx.get(ki + t, (i - 1) * rf + o)
            val = raw ^ _interference(i, o, hs[t], params, field, tx, include_self=False)
            parity[t - 1][o - 1] = field.mul(scale, val)
    # 2. piggyback recovery: the cleaned lump is exactly the tail subsymbol.
    for jj in range(1, params.ri - rf + 1):
        big_t = rf + jj
        scale_big = field.pow(points[big_t - 1], -a)
        for t in range(1, rf + 1):
            raw = tx.get(ki + big_t, (i - 1) * rf + t)
            val = raw ^ _interference(i, t, hs[big_t], params, field, tx, include_self=False)
            parity[t - 1][lam * rf + jj - 1] = field.mul(scale_big, val)
    # 3. remaining instances directly from the codeword's own downloads.
    for t in range(1, rf + 1):
        scale = field.pow(points[t - 1], -a)
        h = hs[t]
        for l in range(rf + 1, lam * rf + 1):
            acc = 0
            for j in range(1, params.kf + 1):
                s = (i - 1) * params.kf + j
                acc ^= field.mul(h[s - 1], tx.get(s, l))
            parity[t - 1][l - 1] = field.mul(scale, acc)


def _synthesize_up(parity: np.ndarray, i: int, params: ConversionParams,
                   points, field: GF256, tx: _Transfer, hs) -> None:
    a = (i - 1) * params.kf
    lam, rf, ri, ki = params.lam, params.rf, params.ri, params.ki
    # 1. projection parities t <= ri at the withheld block-one offsets.
    for t in range(1, ri + 1):
        scale = field.pow(points[t - 1], -a)
        for o in range(1, ri + 1):
            raw = tx.get(ki + t, (i - 1) * rf + o)
            val = raw ^ _interference(i, o, hs[t], params, field, tx, include_self=False)
            parity[t - 1][o - 1] = field.mul(scale, val)
    # 2. piggybacked parities t > ri at those offsets: subtract the full sum
    #    (all of it is downloaded) to expose the piggyback.
    for t in range(ri + 1, rf + 1):
        scale = field.pow(points[t - 1], -a)
        for o in range(1, ri + 1):
            raw = tx.get(ki + o, (i - 1) * rf + t)
            val = raw ^ _interference(i, t, hs[o], params, field, tx, include_self=True)
            parity[t - 1][o - 1] = field.mul(scale, val)
    # 3. everything else directly from the codeword's own downloads.
    for t in range(1, rf + 1):
        scale = field.pow(points[t - 1], -a)
        h = hs[t]
        for l in range(1, params.alpha + 1):
            l2 = (l - 1) % rf + 1
            if l2 <= ri and l <= rf:
                continue  # withheld block-one offsets, produced above
            acc = 0
            for j in range(1, params.kf + 1):
                s = (i - 1) * params.kf + j
                acc ^= field.mul(h[s - 1], tx.get(s, l))
            parity[t - 1][l - 1] = field.mul(scale, acc)


def convert_default(initial: Codeword, params: ConversionParams, points, field: GF256
                    ) -> tuple[list[Codeword], BandwidthReport]:
    """Baseline conversion: read all data subsymbols and re-encode."""
    _check_input(initial, params, field)
    final_code = build_final_code(params, points, field)
    finals = []
    for i in range(1, params.lam + 1):
        m_i = np.concatenate(
            [initial.symbols[(i - 1) * params.kf + j] for j in range(params.kf)]
        )
        finals.append(encode(final_code, m_i, field))
    downloaded = params.lam * params.kf * params.alpha
    written = params.lam * params.rf * params.alpha
    return finals, _report(params, downloaded, written)


# ----------------------------------------------------------------------
# codeword wire format
# ----------------------------------------------------------------------

def pack_codeword(cw: Codeword) -> bytes:
    """Serialize: magic, version, poly (2B BE), n, k, alpha (2B BE each), payload."""
    head = MAGIC + bytes([VERSION]) + cw.field_poly.to_bytes(2, "big")
    head += cw.n.to_bytes(2, "big") + cw.k.to_bytes(2, "big") + cw.alpha.to_bytes(2, "big")
    return head + b"".join(bytes(sym.tolist()) for sym in cw.symbols)


def unpack_codeword(data: bytes) -> Codeword:
    if len(data) < 13:
        raise FormatError("codeword file truncated before header end")
    if data[:4] != MAGIC:
        raise FormatError(f"bad magic {data[:4]!r}, expected {MAGIC!r}")
    if data[4] != VERSION:
        raise FormatError(f"unsupported version {data[4]}")
    poly = int.from_bytes(data[5:7], "big")
    n = int.from_bytes(data[7:9], "big")
    k = int.from_bytes(data[9:11], "big")
    alpha = int.from_bytes(data[11:13], "big")
    payload = data[13:]
    if n <= 0 or alpha <= 0 or not 0 < k <= n:
        raise FormatError(f"implausible dimensions n={n}, k={k}, alpha={alpha}")
    if len(payload) != n * alpha:
        raise FormatError(f"payload has {len(payload)} bytes, expected {n * alpha}")
    symbols = [
        np.frombuffer(payload[s * alpha:(s + 1) * alpha], dtype=np.uint8).copy()
        for s in range(n)
    ]
    return Codeword(symbols=symbols, k=k, field_poly=poly)
