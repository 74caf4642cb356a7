import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pauli_lab import exp_cli
from pauli_lab.exp_cli import (
    CSV_HEADER,
    ExperimentConfig,
    ExperimentRecord,
    InfeasibleCell,
    UsageError,
    derive_seed,
    emit_csv,
    fit_scaling,
    main,
    read_config_file,
    records_to_csv,
    run_bounds,
    run_scaling,
    run_trial,
)
from pauli_lab.state_sim import StateOracle


def synthetic(ns, copies_of_n, task="mixed", model="qml"):
    return [ExperimentRecord(task, model, n, 0, 0, copies_of_n(n), True) for n in ns]


class TestConfig:
    @pytest.mark.parametrize("change", [
        {"n_min": 5, "n_max": 4}, {"trials": 0}, {"epsilon": 0.0}, {"epsilon": 1.5},
        {"delta": 1.0}, {"task": "dense"}, {"model": "qqml"}, {"signs": "minus"},
        {"model": "rcml", "signs": "both"},
    ])
    def test_invalid(self, change):
        with pytest.raises(UsageError):
            replace(ExperimentConfig(), **change).validate()

    def test_config_file(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("# sweep\nmodel = cml\n\ntask=product   # trailing\nseed = 7\nn-max = 9\nepsilon = 0.25\n")
        values = read_config_file(path)
        assert values == {"model": "cml", "task": "product", "master_seed": 7, "n_max": 9, "epsilon": 0.25}
        path.write_text("n_max = 9\nmodel = cml\nepsilon = 0.25\ntask = product\nseed = 7\n")
        assert read_config_file(path) == values

    @pytest.mark.parametrize("text", ["bogus = 1\n", "trials = many\n", "just words\n"])
    def test_bad_config_file(self, tmp_path, text):
        path = tmp_path / "bad.cfg"
        path.write_text(text)
        with pytest.raises(UsageError):
            read_config_file(path)


class TestSeeds:
    def test_stable_value(self):
        # pinned so that a changed derivation is noticed
        import hashlib
        digest = hashlib.blake2b(b"7|mixed|qml|3|11", digest_size=8).digest()
        assert derive_seed(7, "mixed", "qml", 3, 11) == int.from_bytes(digest, "big") & (2**63 - 1)

    @given(st.integers(0, 2**40), st.integers(1, 64), st.integers(0, 10**6))
    def test_range_and_sensitivity(self, master, n, trial):
        s = derive_seed(master, "product", "cml", n, trial)
        assert 0 <= s < 2**63
        assert s != derive_seed(master, "product", "cml", n, trial + 1)
        assert s != derive_seed(master, "product", "rcml", n, trial)


class TestRunScaling:
    def test_mixed_qml_all_succeed(self):
        cfg = ExperimentConfig(task="mixed", model="qml", n_min=1, n_max=4, trials=10)
        records = run_scaling(cfg)
        assert len(records) == 40
        assert all(r.success for r in records)
        assert [(r.n, r.trial) for r in records] == [(n, t) for n in range(1, 5) for t in range(10)]

    def test_signs_both(self):
        cfg = ExperimentConfig(task="mixed", model="qml", n_min=2, n_max=3, trials=20, signs="both")
        assert all(r.success for r in run_scaling(cfg))

    @pytest.mark.parametrize("task,model", [("product", "qml"), ("product", "cml"), ("product", "rcml"),
                                            ("mixed", "cml")])
    def test_other_cells_succeed(self, task, model):
        cfg = ExperimentConfig(task=task, model=model, n_min=2, n_max=3, trials=4)
        records = run_scaling(cfg)
        assert len(records) == 8 and all(r.success for r in records)
        if (task, model) == ("mixed", "cml"):
            assert all(0 <= r.worst_case_error < 0.5 for r in records)
        else:
            assert all(r.worst_case_error is None for r in records)

    def test_restricted_false_accepts_within_delta(self):
        # K = 9 at n = 2, delta = 0.05: a wrong candidate survives with
        # probability 2**-9, so at most 14/512 of runs fail
        cfg = ExperimentConfig(task="mixed", model="rcml", n_min=2, n_max=2, trials=400)
        fails = sum(not r.success for r in run_scaling(cfg))
        assert fails / 400 <= 14 / 512 + 3 * math.sqrt(0.05 / 400)

    def test_infeasible_cell(self):
        cfg = ExperimentConfig(task="mixed", model="rcml", n_min=12, n_max=12, trials=1)
        with pytest.raises(InfeasibleCell, match="infeasible"):
            run_scaling(cfg)

    def test_trial_independence(self):
        cfg = ExperimentConfig(task="product", model="cml", n_min=3, n_max=3, trials=30)
        records = {r.trial: r for r in run_scaling(cfg)}
        for t in np.random.default_rng(0).permutation(30)[:10]:
            assert run_trial(cfg, 3, int(t)) == records[int(t)]

    def test_jobs_do_not_change_results(self):
        cfg = ExperimentConfig(task="product", model="qml", n_min=2, n_max=4, trials=30)
        assert run_scaling(cfg) == run_scaling(replace(cfg, jobs=2))

    @pytest.mark.parametrize("task,model", [("mixed", "qml"), ("mixed", "cml"), ("mixed", "rcml"),
                                            ("product", "qml"), ("product", "cml"), ("product", "rcml")])
    def test_copy_ledger_audit(self, monkeypatch, task, model):
        # recount copies at every sampler entry point, independently of the ledger
        seen = {"copies": 0}
        orig = {name: getattr(StateOracle, name) for name in (
            "measure_pauli", "measure_letter", "measure_axes", "bell_pair", "bell_batch",
            "clifford_snapshot", "charge")}

        def wrap(name, cost):
            def inner(self, *args):
                out = orig[name](self, *args)
                seen["copies"] += cost(args, out)
                return out
            return inner

        one = lambda args, out: 1  # noqa: E731
        monkeypatch.setattr(StateOracle, "measure_pauli", wrap("measure_pauli", one))
        monkeypatch.setattr(StateOracle, "measure_letter", wrap("measure_letter", one))
        monkeypatch.setattr(StateOracle, "measure_axes", wrap("measure_axes", one))
        monkeypatch.setattr(StateOracle, "bell_pair", wrap("bell_pair", lambda a, o: 2))
        monkeypatch.setattr(StateOracle, "bell_batch", wrap("bell_batch", lambda a, o: 2 * a[0]))
        monkeypatch.setattr(StateOracle, "clifford_snapshot", wrap("clifford_snapshot", one))
        monkeypatch.setattr(StateOracle, "charge", wrap("charge", lambda a, o: a[0]))
        cfg = ExperimentConfig(task=task, model=model, n_min=2, n_max=2, trials=1)
        for t in range(3):
            seen["copies"] = 0
            rec = run_trial(cfg, 2, t)
            assert rec.copies == seen["copies"] > 0


class TestFits:
    def test_exponential(self):
        fit = fit_scaling(synthetic(range(2, 9), lambda n: 4**n))[("mixed", "qml")]
        assert fit.slope_log2 == pytest.approx(2.0, abs=1e-9)
        assert fit.r2_log2 == pytest.approx(1.0, abs=1e-12)
        assert fit.best == "exponential"

    def test_linear(self):
        fit = fit_scaling(synthetic(range(2, 9), lambda n: 6 * n))[("mixed", "qml")]
        assert fit.slope_linear == pytest.approx(6.0, abs=1e-9)
        assert fit.r2_linear == pytest.approx(1.0, abs=1e-12)
        assert fit.best == "linear"

    def test_logarithmic(self):
        fit = fit_scaling(synthetic([2, 4, 8, 16, 32], lambda n: 3 * round(math.log2(n)) + 5))[("mixed", "qml")]
        assert fit.slope_logn == pytest.approx(3.0, abs=1e-9)
        assert fit.best == "log"

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            fit_scaling(synthetic([2, 3], lambda n: n))
        with pytest.raises(ValueError):
            fit_scaling([])

    def test_groups(self):
        recs = synthetic(range(1, 5), lambda n: 2**n) + synthetic(range(1, 5), lambda n: n, model="cml")
        assert set(fit_scaling(recs)) == {("mixed", "qml"), ("mixed", "cml")}


class TestCsv:
    def test_empty(self, tmp_path):
        path = emit_csv([], tmp_path / "e.csv")
        assert path.read_bytes() == (",".join(CSV_HEADER) + "\n").encode()

    def test_two_records(self, tmp_path):
        recs = [ExperimentRecord("mixed", "cml", 3, 1, 9, 40, False, 0.75),
                ExperimentRecord("mixed", "cml", 2, 0, 8, 12, True, 0.125)]
        data = emit_csv(recs, tmp_path / "two.csv").read_bytes()
        lines = data.decode().split("\n")
        assert lines[-1] == "" and len(lines) == 4
        assert lines[1] == "mixed,cml,2,0,8,12,true,0.125"
        assert lines[2] == "mixed,cml,3,1,9,40,false,0.75"
        assert b"\r" not in data and all(line == line.rstrip() for line in lines)

    def test_identification_rows_leave_error_empty(self):
        row = ExperimentRecord("product", "qml", 1, 0, 1, 3, True).row()
        assert row[-1] == ""

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(OSError, match="missing"):
            emit_csv([], tmp_path / "missing" / "x.csv")

    def test_byte_identical_reruns(self, tmp_path):
        cfg = ExperimentConfig(task="mixed", model="cml", n_min=2, n_max=3, trials=5, master_seed=11)
        a = emit_csv(run_scaling(cfg), tmp_path / "a.csv").read_bytes()
        b = emit_csv(run_scaling(cfg), tmp_path / "b.csv").read_bytes()
        assert a == b
        c = emit_csv(run_scaling(replace(cfg, master_seed=12)), tmp_path / "c.csv").read_bytes()
        assert a != c


class TestBounds:
    def test_holevo_single_qubit(self):
        rows = run_bounds("holevo", {"n": 1, "steps": 1})
        first = rows[0]
        assert first.value == pytest.approx(math.log(2), abs=1e-12)
        assert first.passed

    @pytest.mark.parametrize("selector", sorted(exp_cli.BOUNDS_SELECTORS))
    def test_every_selector_passes(self, selector):
        params = {"trials": 200} if selector in ("appendix-d", "packing-erm", "point-function") else {}
        rows = run_bounds(selector, params)
        assert rows and all(r.passed for r in rows), [r for r in rows if not r.passed]

    def test_unknown(self):
        with pytest.raises(UsageError):
            run_bounds("nope")


class TestMain:
    def test_scaling_to_stdout(self, capsys):
        code = main(["scaling", "--task", "mixed", "--model", "qml", "--n-min", "2", "--n-max", "4",
                     "--trials", "3", "--seed", "7", "--fit"])
        out, err = capsys.readouterr()
        assert code == 0
        assert out.splitlines()[0] == ",".join(CSV_HEADER)
        assert len(out.splitlines()) == 10
        assert "log2 slope" in err

    def test_scaling_with_config_and_override(self, tmp_path, capsys):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("task = product\nmodel = rcml\nn_min = 1\nn_max = 1\ntrials = 4\n")
        out_path = tmp_path / "o.csv"
        assert main(["scaling", "--config", str(cfg), "--trials", "2", "--out", str(out_path)]) == 0
        lines = out_path.read_text().splitlines()
        assert len(lines) == 3 and lines[1].startswith("product,rcml,1,0,")

    def test_scaling_failure_exit_code(self, monkeypatch, capsys):
        real = exp_cli.run_trial

        def flaky(cfg, n, trial):
            return replace(real(cfg, n, trial), success=trial != 0)

        monkeypatch.setattr(exp_cli, "run_trial", flaky)
        assert main(["scaling", "--task", "product", "--model", "qml", "--n-min", "1", "--n-max", "1",
                     "--trials", "2"]) == 1

    @pytest.mark.parametrize("argv", [
        ["bounds", "--check", "nope"],
        ["scaling", "--model", "rcml", "--n-min", "12", "--n-max", "12"],
        ["scaling", "--trials", "0"],
        ["scaling", "--model", "quantum"],
        ["predict", "--state", "mixed:XZ"],
        ["predict", "--state", "mixed:+XZ", "--targets", "XYZ"],
        ["frobnicate"],
        [],
    ])
    def test_usage_errors(self, argv, capsys):
        assert main(argv) == 2
        assert "lab: error" in capsys.readouterr().err

    def test_bounds_output(self, capsys):
        assert main(["bounds", "--check", "holevo", "--n", "1", "--steps", "1"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "check,params,value,bound,pass"
        assert out[1].endswith(",true")

    def test_bounds_failure_exit_code(self, monkeypatch, capsys):
        bad = exp_cli.CheckRow("fake", "", 1.0, 0.0, False)
        monkeypatch.setitem(exp_cli.BOUNDS_SELECTORS, "tv", lambda p, rng: [bad])
        assert main(["bounds", "--check", "tv"]) == 1

    def test_predict(self, capsys):
        assert main(["predict", "--state", "product:Z+,X-", "--targets", "ZI,IX,XX", "--seed", "3"]) == 0
        out, err = capsys.readouterr()
        lines = out.splitlines()
        assert lines[0] == "pauli,abs_estimate,sign,estimate" and len(lines) == 4
        assert "worst-case error" in err
