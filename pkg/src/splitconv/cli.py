"""Command-line surface: parameter derivation, point search, encode/convert/
decode on files, verification, bound tables, and curve reports.

Exit codes: 0 success, 1 verification failure, 2 not-split-regime,
3 no-savings region, 4 I/O or format error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import flowgraph as flow
from .construction import (
    ConversionParams,
    build_final_code,
    build_initial_code,
    derive_params,
    verify_mds_vector,
)
from .conversion import (
    convert,
    decode,
    encode,
    pack_codeword,
    unpack_codeword,
)
from .errors import (
    ConstructionInvariantError,
    FormatError,
    NoSavingsError,
    NotSplitRegimeError,
)
from .field import DEFAULT_POLY, GF256

_FIELDS: dict[int, GF256] = {}


def _field(poly: int) -> GF256:
    if poly not in _FIELDS:
        _FIELDS[poly] = GF256(poly)
    return _FIELDS[poly]


def _poly_arg(text: str) -> int:
    return int(text, 0)


def _load_params(path: str) -> ConversionParams:
    try:
        data = json.loads(Path(path).read_text())
        return ConversionParams.from_json_dict(data)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (NotSplitRegimeError, NoSavingsError)):
            raise
        raise FormatError(f"bad params file {path}: {exc}") from exc


def _load_points(path: str, need: int = 0, strict: bool = True) -> tuple[int, ...]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"bad points file {path}: {exc}") from exc
    if not isinstance(data, list) or not all(isinstance(v, int) for v in data):
        raise FormatError(f"points file {path} must be a JSON array of integers")
    pts = tuple(data)
    if len(pts) < need:
        raise FormatError(f"points file {path} has {len(pts)} points, need {need}")
    if any(not 1 <= v <= 255 for v in pts):
        raise FormatError("evaluation points must be nonzero bytes")
    if strict and len(set(pts)) != len(pts):
        raise FormatError("evaluation points must be pairwise distinct")
    return pts


def _fraction_arg(text: str) -> Fraction:
    return Fraction(text)


def _num(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


# ----------------------------------------------------------------------
# subcommands
# ----------------------------------------------------------------------

def cmd_params(args) -> int:
    params = derive_params(args.ni, args.ki, args.nf, args.kf)
    print(params.to_json())
    return 0


def cmd_search_points(args) -> int:
    from .basecode import search_points

    field = _field(args.poly)
    max_r = args.max_r
    points = search_points(args.ki + max_r, args.ki, max_r, field)
    text = json.dumps(list(points))
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def cmd_encode(args) -> int:
    field = _field(args.poly)
    params = _load_params(args.params_file)
    points = _load_points(args.points_file, need=params.max_parity)
    raw = Path(args.infile).read_bytes()
    size = params.alpha * params.ki
    if len(raw) > size:
        raise FormatError(f"message has {len(raw)} bytes, limit is {size}")
    message = np.frombuffer(raw.ljust(size, b"\x00"), dtype=np.uint8)
    code = build_initial_code(params, points, field)
    cw = encode(code, message, field)
    Path(args.out).write_bytes(pack_codeword(cw))
    Path(str(args.out) + ".meta.json").write_text(
        json.dumps({"message_length": len(raw)}) + "\n"
    )
    return 0


def cmd_convert(args) -> int:
    field = _field(args.poly)
    params = _load_params(args.params_file)
    points = _load_points(args.points_file, need=params.max_parity)
    initial = unpack_codeword(Path(args.infile).read_bytes())
    if (initial.n, initial.k, initial.alpha, initial.field_poly) != (
        params.ni, params.ki, params.alpha, field.poly,
    ):
        raise FormatError(
            f"input codeword header (n={initial.n}, k={initial.k}, "
            f"alpha={initial.alpha}, poly={initial.field_poly:#x}) does not match parameters"
        )
    finals, report = convert(initial, params, points, field)
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for i, cw in enumerate(finals, start=1):
        (outdir / f"final_{i}.cvtc").write_bytes(pack_codeword(cw))
    text = report.to_json()
    if args.report:
        Path(args.report).write_text(text + "\n")
    print(text)
    return 0


def cmd_decode(args) -> int:
    field = _field(args.poly)
    params = _load_params(args.params_file)
    points = _load_points(args.points_file, need=params.max_parity)
    cw = unpack_codeword(Path(args.infile).read_bytes())
    if args.code == "final":
        code = build_final_code(params, points, field)
    else:
        code = build_initial_code(params, points, field)
    if (cw.n, cw.k, cw.alpha, cw.field_poly) != (code.n, code.k, code.alpha, field.poly):
        raise FormatError("codeword header does not match the selected code")
    if args.symbols:
        idx = [int(v) for v in args.symbols.split(",")]
    else:
        idx = list(range(1, code.k + 1))
    available = [(s, cw.symbols[s - 1]) for s in idx]
    message = decode(code, available, field)
    out = bytes(message.tolist())
    if args.length is not None:
        out = out[: args.length]
    Path(args.out).write_bytes(out)
    return 0


def cmd_verify(args) -> int:
    field = _field(args.poly)
    params = _load_params(args.params_file)
    if args.points_file:
        points = _load_points(args.points_file, need=params.max_parity, strict=False)
    else:
        from .basecode import search_points

        points = search_points(params.ni, params.ki, params.max_parity, field)

    checks = []

    def record(name: str, ok: bool, detail) -> None:
        checks.append({"name": name, "pass": bool(ok), "detail": detail})

    initial = build_initial_code(params, points, field)
    try:
        final = build_final_code(params, points, field)
    except ConstructionInvariantError as exc:
        record("final_code_construction", False, str(exc))
        print(json.dumps({"pass": False, "checks": checks}, indent=2))
        return 1

    record("initial_mds", verify_mds_vector(initial, field),
           f"all {params.ni} choose {params.ki} symbol subsets decodable")
    record("final_mds", verify_mds_vector(final, field),
           f"all {params.nf} choose {params.kf} symbol subsets decodable")

    rng = np.random.default_rng(args.seed)
    ok_convert = True
    report = None
    for _ in range(args.trials):
        message = rng.integers(0, 256, size=params.alpha * params.ki, dtype=np.uint8)
        cw = encode(initial, message, field)
        finals, report = convert(cw, params, points, field)
        for i, fcw in enumerate(finals, start=1):
            lo = (i - 1) * params.kf * params.alpha
            expected = encode(final, message[lo: lo + params.kf * params.alpha], field)
            if any(not np.array_equal(a, b)
                   for a, b in zip(fcw.symbols, expected.symbols)):
                ok_convert = False
    record("conversion_roundtrip", ok_convert,
           f"{args.trials} random messages, outputs equal direct final encodings")

    assert report is not None
    expected_gr = params.lam * params.kf * params.beta1 + params.ri * params.beta2
    ok_bw = (report.gamma_r == expected_gr == report.downloaded_subsymbols
             and report.gamma_w == params.lam * params.rf * params.alpha)
    record("bandwidth_accounting", ok_bw,
           {"gamma_r": report.gamma_r, "gamma_w": report.gamma_w,
            "expected_gamma_r": expected_gr})

    ok_opt = Fraction(report.gamma_r) == report.bound_tight
    record("bandwidth_optimality", ok_opt,
           {"gamma_r": report.gamma_r, "bound": _num(report.bound_tight)})

    b = bnd.BoundInputs(lam=params.lam, kf=params.kf, ri=params.ri, rf=params.rf)
    betas = bnd.BetaAssignment(Fraction(params.beta1, params.alpha),
                               Fraction(params.beta2, params.alpha))
    res = flow.check_feasibility(b, betas)
    record("flow_feasibility", res.feasible,
           {"worst_flow": str(res.worst_flow * params.alpha),
            "required": params.alpha * params.ki})

    overall = all(c["pass"] for c in checks)
    print(json.dumps({"pass": overall, "params": params.to_json_dict(),
                      "checks": checks}, indent=2))
    return 0 if overall else 1


def cmd_bounds(args) -> int:
    points = bnd.curve(args.lf, args.ri_over_ki, args.samples,
                       example_kf=args.example_kf)
    out = Path(args.out)
    with out.open("w") as fp:
        bnd.write_curve_csv(points, fp)
    if args.json:
        out.with_suffix(".json").write_text(
            json.dumps(bnd.curve_json_dict(points), indent=2) + "\n"
        )
    if not args.no_plot:
        from .plotting import render_curve_figure

        render_curve_figure(points, out.with_suffix(".png"), args.lf,
                            args.ri_over_ki, args.example_kf)
    return 0


def cmd_bounds_table(args) -> int:
    params = _load_params(args.params_file)
    b = bnd.BoundInputs(lam=params.lam, kf=params.kf, ri=params.ri, rf=params.rf)
    alpha = params.alpha
    rows = [
        ("default", bnd.gamma_read_default(b)),
        ("access-optimal", bnd.gamma_read_access_optimal(b)),
        ("this-paper", bnd.applicable_bound(b)),
    ]
    print(f"read conversion bandwidth for (nI={params.ni}, kI={params.ki}) "
          f"-> (nF={params.nf}, kF={params.kf}), alpha={alpha}")
    print(f"{'approach':<16}{'per-alpha':<14}{'at-alpha':<10}")
    for name, per_alpha in rows:
        print(f"{name:<16}{str(_num(per_alpha)):<14}{str(_num(per_alpha * alpha)):<10}")
    return 0


def cmd_flow_check(args) -> int:
    params = _load_params(args.params_file)
    b = bnd.BoundInputs(lam=params.lam, kf=params.kf, ri=params.ri, rf=params.rf)
    alpha = params.alpha
    betas = bnd.BetaAssignment(Fraction(args.beta1) / alpha, Fraction(args.beta2) / alpha)
    res = flow.check_feasibility(b, betas)
    cut = flow.lemma_cut_value(b, betas) * alpha
    payload = {
        "feasible": res.feasible,
        "worst_flow": _num(res.worst_flow * alpha),
        "worst_collectors": {"new_symbols_per_codeword": list(res.worst_new_counts)},
        "lemma_cut_value": _num(cut),
        "required_flow": params.alpha * params.ki,
    }
    print(json.dumps(payload, indent=2))
    return 0


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitconv",
        description="Bandwidth-efficient MDS code conversion in the split regime",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="derive split-conversion parameters as JSON")
    p.add_argument("--ni", type=int, required=True)
    p.add_argument("--ki", type=int, required=True)
    p.add_argument("--nf", type=int, required=True)
    p.add_argument("--kf", type=int, required=True)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("search-points", help="search Vandermonde evaluation points")
    p.add_argument("--ki", type=int, required=True)
    p.add_argument("--max-r", type=int, required=True)
    p.add_argument("--poly", type=_poly_arg, default=DEFAULT_POLY)
    p.add_argument("--out")
    p.set_defaults(func=cmd_search_points)

    p = sub.add_parser("encode", help="encode message bytes into an initial codeword")
    p.add_argument("--params-file", required=True)
    p.add_argument("--points-file", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--poly", type=_poly_arg, default=DEFAULT_POLY)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("convert", help="split one initial codeword into final codewords")
    p.add_argument("--params-file", required=True)
    p.add_argument("--points-file", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--report")
    p.add_argument("--poly", type=_poly_arg, default=DEFAULT_POLY)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("decode", help="decode a codeword file back to message bytes")
    p.add_argument("--params-file", required=True)
    p.add_argument("--points-file", required=True)
    p.add_argument("--code", choices=["initial", "final"], default="final")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--symbols", help="comma-separated 1-based symbol subset")
    p.add_argument("--length", type=int, help="trim the recovered message")
    p.add_argument("--poly", type=_poly_arg, default=DEFAULT_POLY)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", help="run the MDS/conversion/bandwidth/flow checks")
    p.add_argument("--params-file", required=True)
    p.add_argument("--points-file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--poly", type=_poly_arg, default=DEFAULT_POLY)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="emit the relative-bandwidth curve CSV and figure")
    p.add_argument("--lf", type=int, required=True)
    p.add_argument("--ri-over-ki", type=_fraction_arg, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--out", required=True)
    p.add_argument("--example-kf", type=int, default=8)
    p.add_argument("--json", action="store_true",
                   help="also write exact rationals next to the CSV")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("bounds-table", help="print the read-bandwidth comparison table")
    p.add_argument("--params-file", required=True)
    p.set_defaults(func=cmd_bounds_table)

    p = sub.add_parser("flow-check", help="max-flow feasibility for given betas")
    p.add_argument("--params-file", required=True)
    p.add_argument("--beta1", type=_fraction_arg, required=True)
    p.add_argument("--beta2", type=_fraction_arg, required=True)
    p.set_defaults(func=cmd_flow_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotSplitRegimeError as exc:
        print(f"NOT_SPLIT_REGIME: {exc}", file=sys.stderr)
        return 2
    except NoSavingsError as exc:
        print(f"NO_SAVINGS_REGION: {exc}", file=sys.stderr)
        return 3
    except (FormatError, OSError, ValueError) as exc:
        print(f"FORMAT_ERROR: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
