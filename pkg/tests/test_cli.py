import csv
import json

import numpy as np
import pytest

from fsrlab import cli
from fsrlab import experiments as ex


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# -- config parsing --

def test_parse_config_types():
    cfg = ex.parse_config(["method=rsr", "N=512", "n-shot=2000", "L=2.0",
                           "seeds=3,4", "statevector=true", "x=0.1,0.9"])
    assert cfg.method == "rsr"
    assert cfg.N == 512 and cfg.n_shot == 2000 and cfg.L == 2.0
    assert cfg.seeds == (3, 4) and cfg.statevector is True
    assert cfg.x == (0.1, 0.9)


def test_parse_config_rejects_garbage():
    with pytest.raises(ex.ConfigError):
        ex.parse_config(["no_such_key=1"])
    with pytest.raises(ex.ConfigError):
        ex.parse_config(["N"])
    with pytest.raises(ex.ConfigError):
        ex.parse_config(["N=hello"])
    with pytest.raises(ex.ConfigError):
        ex.parse_config(["statevector=maybe"])


def test_load_config_with_comments(tmp_path):
    p = tmp_path / "exp.cfg"
    p.write_text("# comment line\nmethod=fsr-adaptive\nN=256  # trailing\n\nmargin=4\n")
    cfg = ex.load_config(str(p))
    assert cfg.method == "fsr-adaptive" and cfg.N == 256 and cfg.margin == 4


def test_validate_errors():
    for pairs in (["method=nope"], ["N=100"], ["M=2048", "N=1024"],
                  ["function=custom"], ["seeds="], ["function=f9"],
                  ["n-iter=0"]):
        with pytest.raises(ex.ConfigError):
            ex.parse_config(pairs).validate()


def test_resolved_materializes_shot_split():
    cfg = ex.parse_config(["n-shot=5000"]).resolved()
    assert cfg.n_shot1 == 5000 and cfg.n_shot2 == 5000
    cfg2 = ex.parse_config(["n-shot=5000", "n-shot1=100"]).resolved()
    assert cfg2.n_shot1 == 100 and cfg2.n_shot2 == 5000


# -- running --

def test_run_smoke_adaptive():
    cfg = ex.parse_config(["method=fsr-adaptive", "function=f1", "N=256",
                           "n-shot=10000", "seeds=0"])
    records = ex.run(cfg)
    assert len(records) == 1
    row = records[0].row()
    assert float(row["rmse"]) > 0
    assert row["adaptive_M"] != ""
    assert tuple(row.keys()) == ex.CSV_COLUMNS


def test_run_all_methods_smoke():
    for method, extra in [("rsr", []), ("rsr-post", ["cutoff=16"]),
                          ("fsr", ["M=16"]), ("fsr-adaptive", []),
                          ("fqfsr-exact", ["x=0.25"]),
                          ("fqfsr-approx", ["M=16", "x=0.25"])]:
        cfg = ex.parse_config([f"method={method}", "N=64", "n-shot=2000",
                               "seeds=0", *extra])
        (rec,) = ex.run(cfg)
        assert np.isfinite(rec.rmse)


def test_run_2d_methods():
    for method in ("rsr", "fsr", "fsr-adaptive"):
        cfg = ex.parse_config([f"method={method}", "function=f4", "N=16",
                               "M=8", "n-shot=5000", "seeds=0"])
        (rec,) = ex.run(cfg)
        assert np.isfinite(rec.rmse)
    with pytest.raises(ex.ConfigError):
        ex.run(ex.parse_config(["method=rsr-post", "function=f4", "N=16",
                                "M=8", "seeds=0"]))


def test_run_deterministic():
    cfg = ex.parse_config(["method=fsr", "M=16", "N=256", "n-shot=4000",
                           "seeds=0,1"])
    rows_a = [r.row() for r in ex.run(cfg)]
    rows_b = [r.row() for r in ex.run(cfg)]
    for a, b in zip(rows_a, rows_b):
        assert {k: v for k, v in a.items() if k != "wall_ms"} == \
               {k: v for k, v in b.items() if k != "wall_ms"}


def test_fqfsr_statevector_exact_at_grid_points():
    cfg = ex.parse_config(["method=fqfsr-exact", "function=f1", "N=256",
                           "seeds=0", "statevector=1"])
    (rec,) = ex.run(cfg)
    assert rec.rmse <= 1e-10


# -- sweeps --

def test_sweep_m_slope_statevector():
    cfg = ex.parse_config(["method=fsr", "function=f1", "N=512",
                           "seeds=0", "statevector=1"])
    records, slope = ex.sweep(cfg, "M", [8, 16, 32, 64, 128])
    assert len(records) == 5
    assert -1.7 <= slope <= -1.3


def test_sweep_too_few_values_warns():
    cfg = ex.parse_config(["method=fsr", "M=8", "N=64", "statevector=1",
                           "seeds=0"])
    with pytest.warns(UserWarning, match="slope"):
        _, slope = ex.sweep(cfg, "M", [8, 16])
    assert slope is None


def test_sweep_validation():
    cfg = ex.parse_config(["method=fsr", "N=64", "M=8", "seeds=0"])
    with pytest.raises(ex.ConfigError):
        ex.sweep(cfg, "cutoff", [8, 16, 32])
    with pytest.raises(ex.ConfigError):
        ex.sweep(cfg, "M", [32, 16, 8])


# -- serialization --

def test_write_records_byte_identical(tmp_path):
    cfg = ex.parse_config(["method=fsr", "M=8", "N=64", "statevector=1",
                           "seeds=0,1", f"out={tmp_path}/a"])
    p1 = ex.write_records(ex.run(cfg), cfg.out, cfg)
    first = open(p1, "rb").read()
    cfg2 = ex.parse_config([f"out={tmp_path}/b"], base=cfg)
    p2 = ex.write_records(ex.run(cfg2), cfg2.out, cfg2)
    second = open(p2, "rb").read()
    # wall_ms is the only nondeterministic column; compare with it stripped
    strip = lambda blob: [",".join(line.split(",")[:-1])
                          for line in blob.decode().splitlines()]
    assert strip(first) == strip(second)


def test_write_records_sidecar_and_points(tmp_path):
    cfg = ex.parse_config(["method=fsr", "M=8", "N=64", "statevector=1",
                           "seeds=0", f"out={tmp_path}/run1"])
    path = ex.write_records(ex.run(cfg), cfg.out, cfg, slope=-1.5,
                            dump_points=True)
    rows = read_csv(path)
    assert len(rows) == 1 and rows[0]["schema_version"] == "1"
    sidecar = json.load(open(str(tmp_path / "run1.config.json")))
    assert sidecar["slope"] == -1.5
    assert sidecar["config"]["n_shot1"] == sidecar["config"]["n_shot"]
    pts = read_csv(str(tmp_path / "run1.points.csv"))
    assert len(pts) == 64
    assert tuple(pts[0].keys()) == ex.POINTS_COLUMNS
    x0 = float(pts[0]["x"])
    assert x0 == 0.0 and float(pts[0]["truth"]) == 0.25


def test_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("FSRLAB_OUT_DIR", str(tmp_path))
    cfg = ex.parse_config(["method=rsr", "N=64", "n-shot=100", "seeds=0",
                           "out=envtest"])
    path = ex.write_records(ex.run(cfg), cfg.out, cfg)
    assert path == str(tmp_path / "envtest.csv")


# -- aggregation --

def test_render_data_aggregates(tmp_path):
    cfg = ex.parse_config(["method=fsr", "M=8", "N=64", "seeds=0,1,2",
                           "n-shot=2000", f"out={tmp_path}/raw"])
    records, _ = ex.sweep(cfg, "M", [4, 8, 16])
    raw = ex.write_records(records, cfg.out, cfg)
    out = ex.render_data(raw, str(tmp_path / "agg.csv"))
    rows = read_csv(out)
    assert len(rows) == 3
    assert all(row["n_seeds"] == "3" for row in rows)
    # mean matches a hand recomputation from the raw rows
    raw_rows = [r for r in read_csv(raw) if r["axis_value"] == "4"]
    assert float(rows[0]["mean_rmse"]) == pytest.approx(
        np.mean([float(r["rmse"]) for r in raw_rows]))


def test_render_data_single_seed_zero_std(tmp_path):
    cfg = ex.parse_config(["method=rsr", "N=64", "seeds=7", "n-shot=500",
                           f"out={tmp_path}/one"])
    raw = ex.write_records(ex.run(cfg), cfg.out, cfg)
    rows = read_csv(ex.render_data(raw, str(tmp_path / "oneagg.csv")))
    assert float(rows[0]["std_rmse"]) == 0.0


def test_render_data_empty_error(tmp_path):
    p = tmp_path / "empty.csv"
    p.write_text(",".join(ex.CSV_COLUMNS) + "\n")
    with pytest.raises(ex.ConfigError):
        ex.render_data(str(p), str(tmp_path / "out.csv"))


# -- CLI entry point --

def test_cli_run_and_render(tmp_path, capsys):
    rc = cli.main(["run", "--method", "fsr", "--M", "8", "--N", "64",
                   "--statevector", "--seeds", "0",
                   "--out", str(tmp_path / "cli1")])
    assert rc == 0
    path = capsys.readouterr().out.strip()
    assert path.endswith("cli1.csv") and read_csv(path)
    rc = cli.main(["render-data", "--in", path,
                   "--out", str(tmp_path / "cli1_agg.csv")])
    assert rc == 0


def test_cli_sweep_prints_slope(tmp_path, capsys):
    rc = cli.main(["sweep", "--method", "fsr", "--function", "f1", "--N", "256",
                   "--statevector", "--seeds", "0", "--axis", "M",
                   "--values", "8,16,32,64",
                   "--out", str(tmp_path / "sw")])
    assert rc == 0
    out = capsys.readouterr().out
    assert "slope" in out
    slope = float(out.strip().split()[-1])
    assert -1.7 <= slope <= -1.3


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["run", "--method", "bogus", "--out",
                     str(tmp_path / "x")]) == 2
    # register too large for the simulator cap
    assert cli.main(["run", "--method", "rsr", "--N", str(2 ** 25),
                     "--n-shot", "1", "--seeds", "0",
                     "--out", str(tmp_path / "y")]) == 3
    assert cli.main(["render-data", "--in", str(tmp_path / "missing.csv"),
                     "--out", str(tmp_path / "z.csv")]) == 2


def test_cli_config_file_with_overrides(tmp_path, capsys):
    cfgfile = tmp_path / "base.cfg"
    cfgfile.write_text("method=fsr\nM=8\nN=64\nstatevector=1\nseeds=0\n")
    rc = cli.main(["run", "--config", str(cfgfile), "--N", "128",
                   "--out", str(tmp_path / "ov")])
    assert rc == 0
    rows = read_csv(capsys.readouterr().out.strip())
    assert rows[0]["N"] == "128" and rows[0]["M"] == "8"
