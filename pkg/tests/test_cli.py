"""CLI subcommands driven in-process: files, exit codes, determinism."""

import json

from splitconv.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write_params(tmp_path, capsys, ni=11, ki=8, nf=6, kf=4):
    code, out, _ = run(capsys, "params", "--ni", str(ni), "--ki", str(ki),
                       "--nf", str(nf), "--kf", str(kf))
    assert code == 0
    path = tmp_path / "params.json"
    path.write_text(out)
    return path, json.loads(out)


def write_points(tmp_path, capsys, ki=8, max_r=3):
    path = tmp_path / "points.json"
    code, _, _ = run(capsys, "search-points", "--ki", str(ki), "--max-r", str(max_r),
                     "--out", str(path))
    assert code == 0
    return path


def test_params_json(tmp_path, capsys):
    _, d = write_params(tmp_path, capsys)
    assert d["alpha"] == 5 and d["beta1"] == 2 and d["beta2"] == 4
    assert d["case"] == "SPLIT_DOWN" and d["lambda_f"] == 2


def test_params_exit_codes(capsys):
    code, _, err = run(capsys, "params", "--ni", "11", "--ki", "9", "--nf", "6", "--kf", "4")
    assert code == 2 and err.startswith("NOT_SPLIT_REGIME")
    code, _, err = run(capsys, "params", "--ni", "10", "--ki", "4", "--nf", "7", "--kf", "2")
    assert code == 3 and err.startswith("NO_SAVINGS_REGION")


def test_encode_convert_decode_roundtrip(tmp_path, capsys):
    params_path, params = write_params(tmp_path, capsys)
    points_path = write_points(tmp_path, capsys)
    message = bytes(range(37))
    (tmp_path / "msg.bin").write_bytes(message)

    code, _, _ = run(capsys, "encode", "--params-file", str(params_path),
                     "--points-file", str(points_path),
                     "--in", str(tmp_path / "msg.bin"), "--out", str(tmp_path / "initial.cvtc"))
    assert code == 0
    meta = json.loads((tmp_path / "initial.cvtc.meta.json").read_text())
    assert meta["message_length"] == 37

    code, out, _ = run(capsys, "convert", "--params-file", str(params_path),
                       "--points-file", str(points_path),
                       "--in", str(tmp_path / "initial.cvtc"),
                       "--out-dir", str(tmp_path / "out"),
                       "--report", str(tmp_path / "report.json"))
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["gamma_r"] == 28 and report["gamma_w"] == 20
    assert report["baseline_default"] == 40

    padded = message.ljust(40, b"\x00")
    for i in (1, 2):
        out_msg = tmp_path / f"m{i}.bin"
        code, _, _ = run(capsys, "decode", "--params-file", str(params_path),
                         "--points-file", str(points_path),
                         "--in", str(tmp_path / "out" / f"final_{i}.cvtc"),
                         "--out", str(out_msg))
        assert code == 0
        assert out_msg.read_bytes() == padded[(i - 1) * 20: i * 20]


def test_decode_from_parity_subset(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys)
    points_path = write_points(tmp_path, capsys)
    (tmp_path / "msg.bin").write_bytes(bytes(40))
    run(capsys, "encode", "--params-file", str(params_path), "--points-file", str(points_path),
        "--in", str(tmp_path / "msg.bin"), "--out", str(tmp_path / "i.cvtc"))
    run(capsys, "convert", "--params-file", str(params_path), "--points-file", str(points_path),
        "--in", str(tmp_path / "i.cvtc"), "--out-dir", str(tmp_path / "o"))
    code, _, _ = run(capsys, "decode", "--params-file", str(params_path),
                     "--points-file", str(points_path),
                     "--in", str(tmp_path / "o" / "final_2.cvtc"),
                     "--out", str(tmp_path / "m.bin"), "--symbols", "2,3,5,6")
    assert code == 0
    assert (tmp_path / "m.bin").read_bytes() == bytes(20)


def test_convert_rejects_bad_file(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys)
    points_path = write_points(tmp_path, capsys)
    bad = tmp_path / "bad.cvtc"
    bad.write_bytes(b"CVTC\x01trunc")
    code, _, err = run(capsys, "convert", "--params-file", str(params_path),
                       "--points-file", str(points_path),
                       "--in", str(bad), "--out-dir", str(tmp_path / "o"))
    assert code == 4 and err.startswith("FORMAT_ERROR")
    code, _, _ = run(capsys, "convert", "--params-file", str(params_path),
                     "--points-file", str(points_path),
                     "--in", str(tmp_path / "missing.cvtc"), "--out-dir", str(tmp_path / "o"))
    assert code == 4


def test_verify_passes(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys, 9, 8, 6, 4)
    code, out, _ = run(capsys, "verify", "--params-file", str(params_path),
                       "--seed", "1", "--trials", "5")
    assert code == 0
    detail = json.loads(out)
    assert detail["pass"] and all(c["pass"] for c in detail["checks"])
    # rI <= rF: measured gamma_r equals the loose bound (optimality)
    opt = next(c for c in detail["checks"] if c["name"] == "bandwidth_optimality")
    assert opt["detail"]["gamma_r"] == 28 == opt["detail"]["bound"]


def test_verify_detects_corrupted_points(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys)
    bad_points = tmp_path / "pts.json"
    bad_points.write_text("[7, 7, 7]")
    code, out, _ = run(capsys, "verify", "--params-file", str(params_path),
                       "--points-file", str(bad_points), "--seed", "0", "--trials", "2")
    assert code == 1
    detail = json.loads(out)
    mds = next(c for c in detail["checks"] if c["name"] == "initial_mds")
    assert not mds["pass"]


def test_bounds_csv_and_figure(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code, _, _ = run(capsys, "bounds", "--lf", "2", "--ri-over-ki", "0.375",
                     "--samples", "100", "--out", str(out), "--json")
    assert code == 0
    lines = out.read_text().strip().split("\n")
    assert lines[0] == "rf_over_ri,rel_default,rel_access_opt,rel_bound,achievable"
    assert len(lines) == 101
    rows = [line.split(",") for line in lines[1:]]
    assert all(r[1] == "1.000000" for r in rows)
    assert rows[-1][3] == "1.000000"
    # monotone nonincreasing toward small rf/ri in the ri >= rf region
    tight = [float(r[3]) for r in rows if float(r[0]) <= 1.0]
    assert all(a <= b + 1e-12 for a, b in zip(tight, tight[1:]))
    assert (tmp_path / "curve.png").exists()
    assert json.loads((tmp_path / "curve.json").read_text())


def test_bounds_table(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys)
    code, out, _ = run(capsys, "bounds-table", "--params-file", str(params_path))
    assert code == 0
    lines = out.strip().split("\n")
    assert any(line.startswith("default") and line.split()[-1] == "40" for line in lines)
    assert any(line.startswith("access-optimal") and line.split()[-1] == "30" for line in lines)
    assert any(line.startswith("this-paper") and line.split()[-1] == "28" for line in lines)


def test_flow_check(tmp_path, capsys):
    params_path, _ = write_params(tmp_path, capsys)
    code, out, _ = run(capsys, "flow-check", "--params-file", str(params_path),
                       "--beta1", "2", "--beta2", "4")
    assert code == 0
    d = json.loads(out)
    assert d["feasible"] and d["worst_flow"] == 40 and d["required_flow"] == 40
    code, out, _ = run(capsys, "flow-check", "--params-file", str(params_path),
                       "--beta1", "1", "--beta2", "4")
    assert code == 0
    d = json.loads(out)
    assert not d["feasible"] and d["lemma_cut_value"] == 36
    code, out, _ = run(capsys, "flow-check", "--params-file", str(params_path),
                       "--beta1", "5", "--beta2", "5")
    assert code == 0 and json.loads(out)["feasible"]


def test_deterministic_outputs(tmp_path, capsys):
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "params", "--ni", "11", "--ki", "8", "--nf", "6", "--kf", "4")
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
    csvs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        run(capsys, "bounds", "--lf", "3", "--ri-over-ki", "1/4", "--samples", "40",
            "--out", str(path), "--no-plot")
        csvs.append(path.read_bytes())
    assert csvs[0] == csvs[1]
