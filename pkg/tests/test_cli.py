"""CLI tests: commands, exit codes, and file outputs."""

import json

import pytest

from fairpay.cli import main


def run(args):
    return main([str(a) for a in args])


def test_gen_geometric(tmp_path, capsys):
    out = tmp_path / "geo.json"
    assert run(["gen", "geometric", "--m", 3, "--T", 3, "--out", out]) == 0
    data = json.loads(out.read_text())
    assert data["n"] == 7
    assert "n=7" in capsys.readouterr().out


def test_gen_tight2(tmp_path):
    out = tmp_path / "t2.json"
    assert run(["gen", "tight2", "--beta", 3, "--epsilon", "1e-6", "--out", out]) == 0
    assert json.loads(out.read_text())["n"] == 2


def test_gen_random_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["gen", "random-additive", "--n", 10, "--seed", 7, "--out", a]) == 0
    assert run(["gen", "random-additive", "--n", 10, "--seed", 7, "--out", b]) == 0
    assert a.read_text() == b.read_text()


def test_gen_random_requires_seed(tmp_path, capsys):
    assert run(["gen", "random-additive", "--n", 5, "--out", tmp_path / "x.json"]) == 2
    assert "seed" in capsys.readouterr().err


def test_gen_bad_params_exit_2(tmp_path, capsys):
    code = run(["gen", "lemma8", "--n", 100, "--M", 14, "--epsilon", "0.1",
                "--delta", "0.5", "--out", tmp_path / "x.json"])
    assert code == 2
    assert "n > M" in capsys.readouterr().err


def _gen_geo(tmp_path, m=2, T=2):
    path = tmp_path / "geo.json"
    assert run(["gen", "geometric", "--m", m, "--T", T, "--out", path]) == 0
    return path


def test_solve_unconstrained(tmp_path, capsys):
    inst = _gen_geo(tmp_path)
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "unconstrained",
                "--method", "brute", "--out", out]) == 0
    data = json.loads(out.read_text())
    assert data["utility"] == pytest.approx(0.5)
    assert data["set"] == [0, 1, 2]
    assert data["timing_ms"] >= 0


def test_solve_nd(tmp_path):
    inst = _gen_geo(tmp_path)
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "nd", "--method", "brute",
                "--out", out]) == 0
    assert json.loads(out.read_text())["utility"] == pytest.approx(0.375)


def test_solve_tight2_beta_nd(tmp_path):
    inst = tmp_path / "t.json"
    run(["gen", "tight2", "--beta", 3, "--epsilon", "1e-6", "--out", inst])
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "beta-nd", "--beta", 3,
                "--method", "two-agent", "--out", out]) == 0
    assert json.loads(out.read_text())["utility"] == pytest.approx(0.25, abs=1e-6)


def test_solve_delta_is_n_power(tmp_path):
    inst = _gen_geo(tmp_path, m=3, T=3)
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "beta-nd", "--delta", "0.5",
                "--method", "brute", "--out", out]) == 0
    assert json.loads(out.read_text())["spec"]["beta"] == pytest.approx(7**0.5)


def test_solve_beta_and_delta_conflict(tmp_path):
    inst = _gen_geo(tmp_path)
    with pytest.raises(SystemExit) as exc:
        run(["solve", "--in", inst, "--mode", "beta-nd", "--beta", 2,
             "--delta", "0.5", "--method", "brute", "--out", tmp_path / "r.json"])
    assert exc.value.code == 2


def test_solve_beta_nd_without_beta(tmp_path, capsys):
    inst = _gen_geo(tmp_path)
    assert run(["solve", "--in", inst, "--mode", "beta-nd", "--method", "brute",
                "--out", tmp_path / "r.json"]) == 2


def test_solve_oversized_brute_exit_2(tmp_path, capsys):
    inst = tmp_path / "big.json"
    run(["gen", "lemma9", "--n", 1000, "--epsilon", "1e-6", "--out", inst])
    assert run(["solve", "--in", inst, "--mode", "nd", "--method", "brute",
                "--out", tmp_path / "r.json"]) == 2
    assert "symmetric or partition" in capsys.readouterr().err


def test_solve_symmetric_method_large_n(tmp_path):
    inst = tmp_path / "big.json"
    run(["gen", "lemma9", "--n", 10000, "--epsilon", "1e-6", "--out", inst])
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "beta-nd", "--delta", "1.0",
                "--method", "symmetric", "--out", out]) == 0
    data = json.loads(out.read_text())
    assert data["method"] == "symmetric"
    assert len(data["set"]) in (10_000 // 2 + 1, 10_000 // 2 + 2)


def test_solve_degenerate_exit_3(tmp_path):
    inst = tmp_path / "dead.json"
    # costs above the singleton values: nothing is worth incentivizing
    inst.write_text(json.dumps({
        "version": "1", "n": 2, "costs": [0.9, 0.9],
        "reward": {"kind": "additive", "weights": [0.4, 0.4]},
        "metadata": {},
    }))
    assert run(["solve", "--in", inst, "--mode", "nd", "--method", "brute",
                "--out", tmp_path / "r.json"]) == 3


def test_check_structure_pass(tmp_path, capsys):
    inst = tmp_path / "cov.json"
    run(["gen", "random-coverage", "--n", 6, "--seed", 3, "--out", inst])
    assert run(["check", "structure", "--in", inst]) == 0
    assert "pass" in capsys.readouterr().out


def test_check_structure_fail_with_witness(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "version": "1", "n": 2, "costs": [0.1, 0.1],
        "reward": {"kind": "explicit", "n": 2, "table": [0.0, 0.2, 0.2, 0.6]},
        "metadata": {},
    }))
    assert run(["check", "structure", "--in", bad]) == 1
    out = capsys.readouterr().out
    assert "submodular" in out and "witness" in out


def test_check_structure_sample_requires_seed(tmp_path, capsys):
    inst = tmp_path / "big.json"
    run(["gen", "lemma9", "--n", 1000, "--epsilon", "1e-6", "--out", inst])
    assert run(["check", "structure", "--in", inst, "--sample", 50]) == 2
    assert run(["check", "structure", "--in", inst, "--sample", 50, "--seed", 1]) == 0


def test_check_equilibrium_on_solver_output(tmp_path, capsys):
    inst = _gen_geo(tmp_path)
    res = tmp_path / "r.json"
    run(["solve", "--in", inst, "--mode", "nd", "--method", "brute", "--out", res])
    assert run(["check", "equilibrium", "--in", inst, "--result", res]) == 0


def test_check_equilibrium_detects_violation(tmp_path, capsys):
    inst = _gen_geo(tmp_path)
    res = tmp_path / "r.json"
    run(["solve", "--in", inst, "--mode", "nd", "--method", "brute", "--out", res])
    data = json.loads(res.read_text())
    data["payments"] = [0.0] * 3  # zero payments cannot hold the set together
    res.write_text(json.dumps(data))
    assert run(["check", "equilibrium", "--in", inst, "--result", res]) == 1
    assert "prefers shirking" in capsys.readouterr().out


def test_check_equilibrium_needs_result(tmp_path):
    inst = _gen_geo(tmp_path)
    assert run(["check", "equilibrium", "--in", inst]) == 2


def test_check_parse_error_exit_2(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(["check", "structure", "--in", broken]) == 2


def test_sweep_command(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text(
        "family = tight2\nepsilon = 1e-6\ngrid = beta\nvalues = 1, 3, 8\n"
        "method_opt = two-agent\nmethod_nd = two-agent\n"
    )
    out = tmp_path / "sweep.csv"
    assert run(["sweep", "--config", cfg, "--out", out]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 4
    assert "0 failures" in capsys.readouterr().out


def test_sweep_empty_grid_exit_2(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("family = tight2\ngrid = beta\nvalues =\n")
    assert run(["sweep", "--config", cfg, "--out", tmp_path / "s.csv"]) == 2


def test_sweep_random_family_requires_seed(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("family = random-additive\ngrid = n\nvalues = 4, 6\n")
    assert run(["sweep", "--config", cfg, "--out", tmp_path / "s.csv"]) == 2
    assert "seed" in capsys.readouterr().err
    cfg.write_text("family = random-additive\ngrid = n\nvalues = 4, 6\nseed = 3\n")
    assert run(["sweep", "--config", cfg, "--out", tmp_path / "s.csv"]) == 0


def test_sweep_partial_failure_exit_1(tmp_path, capsys):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("family = geometric\nT = 3\ngrid = m\nvalues = 2, 0, 3\n")
    out = tmp_path / "s.csv"
    assert run(["sweep", "--config", cfg, "--out", out]) == 1
    assert "1 failures" in capsys.readouterr().out


def test_bound_command(capsys):
    assert run(["bound", "--beta", 3]) == 0
    assert "1.5" in capsys.readouterr().out
    assert run(["bound", "--n", 100, "--delta", "0.5"]) == 0
    out = capsys.readouterr().out
    assert "7" in out and "3" in out
    assert run(["bound"]) == 2


def test_workers_env_default(tmp_path, monkeypatch):
    monkeypatch.setenv("FAIRPAY_WORKERS", "3")
    inst = _gen_geo(tmp_path, m=3, T=3)
    out = tmp_path / "r.json"
    assert run(["solve", "--in", inst, "--mode", "nd", "--method", "brute",
                "--out", out]) == 0
    assert json.loads(out.read_text())["utility"] == pytest.approx(4.0 / 9.0)
