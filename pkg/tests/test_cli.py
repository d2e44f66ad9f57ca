import csv
import hashlib
import io
import json

import pytest

from vicsim.cli import EXIT_PARAMS, EXIT_VALIDATION, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def read_csv(text):
    return list(csv.reader(io.StringIO(text)))


def test_steady_csv_and_json(capsys):
    code, out, _ = run(capsys, "steady", "--omega", "0.5")
    assert code == 0
    rows = {r[0]: r for r in read_csv(out)[1:]}
    assert float(rows["rho11"][1]) == pytest.approx(2 / 9)
    assert "rho12" not in rows
    code, out, _ = run(capsys, "steady", "--omega", "0.5", "--delta", "0.5", "--format", "json")
    report = json.loads(out)
    assert report["analytic_numeric_max_deviation"] <= 1e-10
    assert report["trace"] == pytest.approx(1.0)


def test_eigs(capsys):
    code, out, _ = run(capsys, "eigs", "--omega", "3", "--delta", "0")
    rows = read_csv(out)
    assert rows[0] == ["re", "im"] and len(rows) == 9
    assert float(rows[1][0]) == pytest.approx(-0.375, abs=1e-5)
    assert float(rows[1][1]) == pytest.approx(5.99870, abs=1e-5)


def test_eigs_units_follow_gamma0(capsys):
    _, a, _ = run(capsys, "eigs", "--omega", "3")
    _, b, _ = run(capsys, "eigs", "--omega", "3", "--gamma0", "2")
    for ra, rb in zip(read_csv(a)[1:], read_csv(b)[1:]):
        assert float(ra[1]) == pytest.approx(float(rb[1]), abs=1e-12)


def test_table1_exit_code(capsys):
    code, out, err = run(capsys, "table1")
    assert code == 0
    assert "NO-MATCH" in out and "UNEXPECTED" not in err


def test_table1_exit_code_on_mismatch(capsys, monkeypatch):
    from vicsim import reproduce

    shifted = {k: v + 1e-3 for k, v in reproduce.TABLE_I.items()}
    monkeypatch.setattr(reproduce, "TABLE_I", shifted)
    code, _, _ = run(capsys, "table1")
    assert code == EXIT_VALIDATION


def test_corr_header(capsys):
    code, out, _ = run(capsys, "corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.1", "--normalized")
    rows = read_csv(out)
    assert rows[0] == ["tau", "G2_vic", "G2_novic", "g2_vic", "g2_novic"]
    assert len(rows) == 12
    _, out, _ = run(capsys, "corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.1", "--vic", "off")
    assert read_csv(out)[0] == ["tau", "G2_novic"]


def test_corr_json(capsys):
    code, out, _ = run(capsys, "corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.5", "--format", "json")
    report = json.loads(out)
    assert report["asymptotes"]["limit_ratio"] == 2.0
    assert report["series"]["tau"] == [0.0, 0.5, 1.0]


def test_corr_physical_units(capsys):
    _, reduced, _ = run(capsys, "corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.5")
    _, phys, _ = run(capsys, "corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.5", "--no-reduced-units")
    r, p = read_csv(reduced), read_csv(phys)
    assert float(p[2][1]) == pytest.approx(float(r[2][1]) / 36)


@pytest.mark.parametrize(
    "argv",
    [
        ["corr", "--omega", "0", "--normalized"],
        ["steady", "--gamma0", "0"],
        ["fig", "9"],
        ["corr", "--omega", "0.5", "--tmax", "1", "--dt", "0.3"],
        ["sweep", "--omegas", "-1", "--deltas", "0"],
        ["steady", "--q", "2"],
    ],
)
def test_parameter_errors(capsys, argv):
    code = None
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    capsys.readouterr()
    assert code == EXIT_PARAMS


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "p.json"
    cfg.write_text(json.dumps({"gamma0": 1, "rabi_re": 3.0, "rabi_im": 0, "detuning": 0, "vic": 1}))
    _, from_cfg, _ = run(capsys, "eigs", "--config", str(cfg))
    _, from_flags, _ = run(capsys, "eigs", "--omega", "3")
    assert from_cfg == from_flags
    _, override, _ = run(capsys, "eigs", "--config", str(cfg), "--omega", "0.5", "--delta", "0.5")
    assert float(read_csv(override)[1][1]) == pytest.approx(1.10904, abs=1e-5)


def test_dump_generator(capsys):
    _, out, _ = run(capsys, "dump-generator", "--omega", "0.5", "--dim", "8")
    rows = read_csv(out)
    assert rows[0] == ["row", "col", "re", "im"]
    entries = {(int(r[0]), int(r[1])): complex(float(r[2]), float(r[3])) for r in rows[1:]}
    assert entries[(1, 1)] == pytest.approx(-0.5)
    assert sum(v for (r, c), v in entries.items() if r == c).real == pytest.approx(-2.0)
    _, on, _ = run(capsys, "dump-generator", "--omega", "0.5", "--q", "1")
    _, off, _ = run(capsys, "dump-generator", "--omega", "0.5", "--q", "0")
    assert len(read_csv(on)) == len(read_csv(off)) + 2


def test_fig_out_dir_manifest(tmp_path, capsys):
    code, _, err = run(capsys, "fig", "4", "--out-dir", str(tmp_path))
    assert code == 0 and "manifest" in err
    manifest = json.loads((tmp_path / "fig4_manifest.json").read_text())
    (entry,) = manifest["outputs"]
    body = (tmp_path / entry["file"]).read_bytes()
    assert hashlib.sha256(body).hexdigest() == entry["sha256"]
    assert manifest["params"][0]["rabi_re"] == 3.0
    assert manifest["eigensolver"] == {"block8": "eig"}
    assert "ode_local_tol" in manifest["tolerances"]
    assert manifest["settings"] == {"dt": 0.02, "tmax": 20.0}


def test_rerun_is_byte_identical(tmp_path, capsys):
    run(capsys, "sweep", "--omegas", "0.5,3", "--deltas", "0,0.5", "--out-dir", str(tmp_path / "a"))
    run(capsys, "sweep", "--omegas", "0.5,3", "--deltas", "0,0.5", "--workers", "3", "--out-dir", str(tmp_path / "b"))
    assert (tmp_path / "a" / "sweep.csv").read_bytes() == (tmp_path / "b" / "sweep.csv").read_bytes()


def test_every_csv_in_exactly_one_manifest(tmp_path, capsys):
    for argv in (["table1"], ["steady", "--omega", "1"], ["eigs", "--omega", "1"], ["corr", "--omega", "1", "--tmax", "2"]):
        run(capsys, *argv, "--out-dir", str(tmp_path))
    listed = []
    for path in tmp_path.glob("*_manifest.json"):
        listed += [o["file"] for o in json.loads(path.read_text())["outputs"]]
    csvs = sorted(p.name for p in tmp_path.glob("*.csv"))
    assert sorted(f for f in listed if f.endswith(".csv")) == csvs
    assert len(listed) == len(set(listed))
