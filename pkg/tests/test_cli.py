import json
import math

import numpy as np
import pytest

from partgauss.cli import main
from partgauss.dist import PerturbedGaussianParams
from partgauss.pathio import read_samples_csv, read_samples_pgsp, read_segment
from partgauss.stats import test_nu_samples as nu_samples


def test_sample_is_reproducible(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["sample", "--k", "3", "--seed", "7", "--n", "200", "--out", str(a)]) == 0
    assert main(["sample", "--k", "3", "--seed", "7", "--n", "200", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert read_samples_csv(a).shape == (200, 3)


def test_sample_offset_continues_stream(tmp_path):
    main(["sample", "--seed", "7", "--n", "10", "--out", str(tmp_path / "a.pgsp")])
    main(["sample", "--seed", "7", "--n", "5", "--offset", "5", "--out", str(tmp_path / "b.pgsp")])
    _, a = read_samples_pgsp(tmp_path / "a.pgsp")
    _, b = read_samples_pgsp(tmp_path / "b.pgsp")
    np.testing.assert_array_equal(a[5:], b)


def test_sample_large_passes_sampler_check(tmp_path):
    out = tmp_path / "big.pgsp"
    assert main(["sample", "--k", "3", "--seed", "1", "--n", "1e6", "--out", str(out)]) == 0
    header, x = read_samples_pgsp(out)
    assert x.shape == (1_000_000, 3) and header.root_seed == 1
    assert nu_samples(PerturbedGaussianParams(3), x, acceptance_tol=None).passed


def test_simulate_overlap_and_variance(tmp_path):
    a, b = tmp_path / "a.pgsp", tmp_path / "b.pgsp"
    assert main(["simulate", "--seed", "3", "--len", "1000", "--offset", "-500", "--out", str(a)]) == 0
    assert main(["simulate", "--seed", "3", "--len", "1000000", "--out", str(b)]) == 0
    sa, sb = read_segment(a), read_segment(b)
    np.testing.assert_array_equal(sa.values[500:], sb.values[:500])
    assert abs(sb.values.var() - 3) < 0.05


@pytest.mark.parametrize("argv", [
    ["sample", "--k", "1", "--n", "5", "--out", "x.csv"],
    ["sample", "--n", "0", "--out", "x.csv"],
    ["exact", "--indices", "1,a", "--t", "1,1"],
    ["exact", "--indices", "2,1", "--t", "1,1"],
    ["exact", "--indices", "1,2", "--t", "1"],
    ["exact", "--indices", "1,2"],
    ["exact", "--indices", "1,3", "--t", "1,1", "--method", "block"],
    ["exact", "--k", "3", "--indices", "0,1", "--orders", "3,3"],
    ["verify", "--seed", "-1"],
    ["bogus"],
])
def test_usage_errors_exit_2(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_io_error_exits_3(tmp_path):
    bad = tmp_path / "missing" / "x.csv"
    assert main(["sample", "--n", "5", "--out", str(bad)]) == 3
    assert main(["simulate", "--len", "5", "--out", str(bad)]) == 3


def test_exact_outputs(capsys):
    assert main(["exact", "--k", "3", "--indices", "1,2,3", "--t", "1,1,1"]) == 0
    out = capsys.readouterr().out.split()
    assert float(out[0]) == pytest.approx(0.0111089965382423, abs=1e-14)
    assert main(["exact", "--k", "3", "--indices", "1,2,3", "--t", "1,1,1", "--method", "block"]) == 0
    assert capsys.readouterr().out.split()[0] == out[0]
    assert main(["exact", "--k", "2", "--indices", "0,1", "--orders", "1,1"]) == 0
    assert float(capsys.readouterr().out) == pytest.approx(0.125, abs=1e-15)
    assert main(["exact", "--k", "3", "--indices", "5", "--t", "0.8"]) == 0
    assert float(capsys.readouterr().out.split()[0]) == pytest.approx(math.exp(-0.96), abs=1e-14)


def test_exact_json(tmp_path):
    out = tmp_path / "e.json"
    assert main(["exact", "--k", "3", "--indices", "0,1", "--t", "1,0", "--json", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["cf"][0] == pytest.approx(math.exp(-1.5)) and d["cf"][1] == 0.0


def test_verify_small_budget_passes(tmp_path):
    out = tmp_path / "v.jsonl"
    code = main(["verify", "--k", "3", "--seed", "1", "--n", "20000", "--len", "200000", "--json", str(out)])
    rows = [json.loads(line) for line in out.read_text().splitlines()]
    assert code == 0, [r["name"] for r in rows if r["verdict"] == "fail"]
    names = {r["name"] for r in rows}
    assert {"exact_moments", "nu_sampler", "gaussian_marginals", "nongaussian_window", "ergodic_kprod"} <= names
    assert all(set(r) >= {"name", "statistic", "threshold", "n", "se", "verdict", "config"} for r in rows)


def test_verify_mutant_fails(capsys):
    code = main(["verify", "--k", "3", "--seed", "1", "--perturbation-sign", "-1", "--no-exact"])
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert code == 1
    failed = {r["name"] for r in rows if r["verdict"] == "fail"}
    assert "nongaussian_window" in failed
