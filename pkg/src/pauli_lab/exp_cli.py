"""
Seeded experiment harness and the ``lab`` command line.

``lab scaling`` runs learners over a range of qubit counts and writes one CSV
row per trial, ``lab bounds`` runs the exact checks of :mod:`bounds_lab`,
and ``lab predict`` runs the Bell-sampling predictor on a named state.

Exit codes: 0 on success, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import bounds_lab as bl
from .classical_ml import (
    SHADOW_MAX_QUBITS,
    cml_product_strategy,
    restricted_exhaustive_mixed,
    restricted_product_strategy,
    shadow_copies_to_identify,
)
from .pauli_core import PauliString, encode_index, enumerate_paulis
from .quantum_ml import identify_by_bell_sampling, predict_paulis, product_state_strategy
from .state_sim import (
    PRODUCT_LABELS,
    PauliMixedState,
    StabilizerProductState,
    StateOracle,
    parse_state,
)

__all__ = [
    "ExperimentConfig",
    "ExperimentRecord",
    "ScalingFit",
    "CheckRow",
    "InfeasibleCell",
    "derive_seed",
    "estimated_copies",
    "run_trial",
    "run_scaling",
    "fit_scaling",
    "emit_csv",
    "records_to_csv",
    "read_config_file",
    "run_bounds",
    "BOUNDS_SELECTORS",
    "main",
]

TASKS = ("mixed", "product")
MODELS = ("qml", "cml", "rcml")
CSV_HEADER = ("task", "model", "n", "trial", "seed", "copies", "success", "worst_case_error")
DEFAULT_COPY_CAP = 1_000_000


class InfeasibleCell(ValueError):
    """A (task, model, n) cell whose expected cost exceeds the copy cap."""


class UsageError(ValueError):
    """Bad configuration or arguments; maps to exit code 2."""


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of one scaling sweep.

    ``signs`` is ``"plus"`` for (I + P)/2**n states or ``"both"`` to draw
    the sign uniformly. ``copy_cap`` bounds the expected copies of a single
    trial; cells above it are rejected before any work is done.
    """

    task: str = "mixed"
    model: str = "qml"
    n_min: int = 2
    n_max: int = 6
    n_step: int = 1
    trials: int = 10
    epsilon: float = 0.3
    delta: float = 0.05
    master_seed: int = 0
    output: str | None = None
    signs: str = "plus"
    copy_cap: float = DEFAULT_COPY_CAP
    jobs: int = 1

    def validate(self) -> "ExperimentConfig":
        if self.task not in TASKS:
            raise UsageError(f"task must be one of {TASKS}, got {self.task!r}")
        if self.model not in MODELS:
            raise UsageError(f"model must be one of {MODELS}, got {self.model!r}")
        if not 1 <= self.n_min <= self.n_max:
            raise UsageError(f"need 1 <= n_min <= n_max, got {self.n_min}..{self.n_max}")
        if self.n_step < 1:
            raise UsageError("n_step must be positive")
        if self.trials < 1:
            raise UsageError("trials must be positive")
        if not 0 < self.epsilon <= 1:
            raise UsageError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise UsageError(f"delta must lie in (0, 1), got {self.delta}")
        if self.signs not in ("plus", "both"):
            raise UsageError("signs must be 'plus' or 'both'")
        if self.signs == "both" and self.task == "mixed" and self.model == "rcml":
            raise UsageError("the restricted exhaustive search assumes (I + P)/2^n; use signs = plus")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")
        return self

    @property
    def n_values(self) -> list[int]:
        return list(range(self.n_min, self.n_max + 1, self.n_step))


@dataclass(frozen=True)
class ExperimentRecord:
    """One trial. ``worst_case_error`` is None for identification runs."""

    task: str
    model: str
    n: int
    trial: int
    seed: int
    copies: int
    success: bool
    worst_case_error: float | None = None

    def row(self) -> list[str]:
        err = "" if self.worst_case_error is None else repr(float(self.worst_case_error))
        return [self.task, self.model, str(self.n), str(self.trial), str(self.seed),
                str(self.copies), "true" if self.success else "false", err]


def derive_seed(master_seed: int, task: str, model: str, n: int, trial: int) -> int:
    """
    Stable 63-bit seed from the cell coordinates.

    BLAKE2b over ``"master|task|model|n|trial"``, first 8 bytes big-endian,
    top bit cleared. Any single trial can be re-run in isolation.
    """
    key = f"{master_seed}|{task}|{model}|{n}|{trial}".encode()
    digest = hashlib.blake2b(key, digest_size=8).digest()
    return int.from_bytes(digest, "big") & ((1 << 63) - 1)


def estimated_copies(task: str, model: str, n: int) -> float:
    """Rough expected copies of one trial, used only by the cost guard."""
    if task == "mixed":
        if model == "qml":
            return 4 * n + 2
        if model == "cml":
            if n > SHADOW_MAX_QUBITS:
                return math.inf
            return 12 * n * 2.0**n + 100
        return 2 * 4.0**n
    if model == "qml":
        return 2 * (3 * math.log2(max(n, 2)) + 2) + 1
    if model == "cml":
        return 3 * (math.log2(max(n, 2)) + 4)
    return 10 * n


def _sample_state(cfg: ExperimentConfig, n: int, rng: np.random.Generator):
    if cfg.task == "mixed":
        idx = int(rng.integers(1, 1 << (2 * n)))
        sign = 1 if cfg.signs == "plus" else int(rng.choice((-1, 1)))
        return PauliMixedState(PauliString.from_index(n, idx), sign)
    picks = rng.integers(0, len(PRODUCT_LABELS), size=n)
    return StabilizerProductState(tuple(PRODUCT_LABELS[i] for i in picks))


def run_trial(cfg: ExperimentConfig, n: int, trial: int) -> ExperimentRecord:
    """Draw a hidden state and run one learner on it, all from the trial seed."""
    seed = derive_seed(cfg.master_seed, cfg.task, cfg.model, n, trial)
    rng = np.random.default_rng(seed)
    state = _sample_state(cfg, n, rng)
    oracle = StateOracle(state, rng)
    err = None
    if cfg.task == "mixed":
        if cfg.model == "qml":
            pauli, _ = identify_by_bell_sampling(oracle)
            # Bell data cannot see the sign; one extra copy reads it when unknown
            found_sign = 1 if cfg.signs == "plus" else oracle.measure_pauli(pauli)
            success = pauli == state.pauli and found_sign == state.sign
        elif cfg.model == "cml":
            _, err = shadow_copies_to_identify(state, rng, delta=cfg.delta, oracle=oracle)
            success = err < 0.5
        else:
            success = restricted_exhaustive_mixed(state, cfg.delta, rng, oracle=oracle).success
    else:
        if cfg.model == "qml":
            labels, _ = product_state_strategy(state, rng, oracle=oracle)
            success = labels == state.labels
        elif cfg.model == "cml":
            success = cml_product_strategy(state, rng, oracle=oracle).success
        else:
            success = restricted_product_strategy(state, rng, oracle=oracle).success
    return ExperimentRecord(cfg.task, cfg.model, n, trial, seed, oracle.copies, bool(success), err)


def _check_cells(cfg: ExperimentConfig) -> None:
    for n in cfg.n_values:
        est = estimated_copies(cfg.task, cfg.model, n)
        if est > cfg.copy_cap:
            raise InfeasibleCell(
                f"infeasible cell {cfg.task}/{cfg.model} at n={n}: about {est:.3g} copies per "
                f"trial exceeds the cap of {cfg.copy_cap:.3g}"
            )


def _run_block(args):
    cfg, n, trials = args
    return [run_trial(cfg, n, t) for t in trials]


def run_scaling(cfg: ExperimentConfig) -> list[ExperimentRecord]:
    """
    All trials of a sweep, ordered by (n, trial).

    Every trial seeds its own generator, so the records do not depend on
    ``jobs`` or on the order in which trials are executed.
    """
    cfg.validate()
    _check_cells(cfg)
    blocks = [(cfg, n, range(t, min(t + 25, cfg.trials))) for n in cfg.n_values
              for t in range(0, cfg.trials, 25)]
    if cfg.jobs == 1:
        parts = map(_run_block, blocks)
        records = [r for part in parts for r in part]
    else:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            records = [r for part in pool.map(_run_block, blocks) for r in part]
    return sorted(records, key=lambda r: (r.n, r.trial))


# fits ------------------------------------------------------------------

@dataclass(frozen=True)
class ScalingFit:
    """
    Least-squares fits of mean copies against n.

    ``slope_log2`` is the slope of log2(mean copies) vs n (exponential
    model), ``slope_logn`` the slope of mean copies vs log2(n) and
    ``slope_linear`` the slope of mean copies vs n.
    """

    task: str
    model: str
    n_values: tuple[int, ...]
    mean_copies: tuple[float, ...]
    slope_log2: float
    r2_log2: float
    slope_logn: float
    r2_logn: float
    slope_linear: float
    r2_linear: float

    @property
    def best(self) -> str:
        scores = {"exponential": self.r2_log2, "log": self.r2_logn, "linear": self.r2_linear}
        return max(scores, key=scores.get)


def _linfit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, icept = np.polyfit(x, y, 1)
    resid = y - (slope * x + icept)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else 1.0 - float((resid**2).sum()) / ss_tot
    return float(slope), r2


def fit_scaling(records: Iterable[ExperimentRecord]) -> dict[tuple[str, str], ScalingFit]:
    """Per-(task, model) fits; needs at least three distinct n per group."""
    groups: dict[tuple[str, str], dict[int, list[int]]] = {}
    for r in records:
        groups.setdefault((r.task, r.model), {}).setdefault(r.n, []).append(r.copies)
    if not groups:
        raise ValueError("no records to fit")
    out = {}
    for key, by_n in groups.items():
        if len(by_n) < 3:
            raise ValueError(f"{key[0]}/{key[1]}: need at least 3 distinct n values, got {len(by_n)}")
        ns = np.array(sorted(by_n), dtype=float)
        means = np.array([np.mean(by_n[int(n)]) for n in ns])
        s_exp, r_exp = _linfit(ns, np.log2(means))
        s_log, r_log = _linfit(np.log2(ns), means)
        s_lin, r_lin = _linfit(ns, means)
        out[key] = ScalingFit(key[0], key[1], tuple(int(n) for n in ns), tuple(means.tolist()),
                              s_exp, r_exp, s_log, r_log, s_lin, r_lin)
    return out


# CSV ---------------------------------------------------------------------

def records_to_csv(records: Iterable[ExperimentRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in sorted(records, key=lambda r: (r.n, r.trial)):
        w.writerow(r.row())
    return buf.getvalue()


def emit_csv(records: Iterable[ExperimentRecord], path) -> Path:
    """Write records as UTF-8 CSV with LF line endings, ordered by (n, trial)."""
    path = Path(path)
    text = records_to_csv(records)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return path


# config files --------------------------------------------------------------

_CONFIG_KEYS = {f.name: f.type for f in fields(ExperimentConfig)}
_CONFIG_ALIASES = {"seed": "master_seed", "out": "output"}


def read_config_file(path) -> dict:
    """
    Parse ``key = value`` lines; ``#`` starts a comment, blank lines are
    ignored and the order of keys does not matter.
    """
    out = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key = key.strip()
        key = _CONFIG_ALIASES.get(key, key).replace("-", "_")
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _coerce(key, value.strip(), f"{path}:{lineno}")
    return out


def _coerce(key: str, value: str, where: str):
    kind = _CONFIG_KEYS[key]
    try:
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
    except ValueError:
        raise UsageError(f"{where}: bad value {value!r} for {key}") from None
    return value


# bounds checks ----------------------------------------------------------

@dataclass(frozen=True)
class CheckRow:
    check: str
    params: str
    value: float
    bound: float
    passed: bool

    def row(self) -> list[str]:
        return [self.check, self.params, f"{self.value:.10g}", f"{self.bound:.10g}",
                "true" if self.passed else "false"]


def _params(**kw) -> str:
    return ";".join(f"{k}={v}" for k, v in kw.items())


def _random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def _bounds_pauli_moments(p, rng):
    rows = []
    for n in range(1, p.get("n", 3) + 1):
        for i in range(p.get("trials", 20)):
            f, s = bl.pauli_moment_check(n, _random_state(n, rng))
            want = (1 + 1 / ((1 << n) + 1)) / 4**n
            ok = abs(f - 1 / 2**n) <= 1e-10 and abs(s - want) <= 1e-10
            rows.append(CheckRow("pauli-moments", _params(n=n, state=i), s, want, ok))
    return rows


def _bounds_tv(p, rng):
    n = p.get("n", 2)
    rows = []
    tv = bl.tv_distance_adaptive(bl.computational_basis_strategy(n, 1), n, 1)
    rows.append(CheckRow("tv", _params(n=n, N=1, strategy="computational"), tv,
                         bl.tv_bound(n, 1), tv <= bl.tv_bound(n, 1)))
    for i in range(p.get("trials", 20)):
        steps = 1 + i % p.get("steps", 3)
        strat = bl.random_adaptive_strategy(n, steps, rng)
        tv = bl.tv_distance_adaptive(strat, n, steps)
        rows.append(CheckRow("tv", _params(n=n, N=steps, strategy=f"random{i}"), tv,
                             bl.tv_bound(n, steps), tv <= bl.tv_bound(n, steps)))
    return rows


def _bounds_holevo(p, rng):
    rows = []
    for n in range(1, p.get("n", 2) + 1):
        for steps in range(1, p.get("steps", 4) + 1):
            if (1 << (n * steps)) > 4096:
                continue
            chi = bl.holevo_chi(bl.pauli_codebook_ensemble(n, steps))
            bound = steps * math.log(2)
            ok = chi <= bound + 1e-9
            rows.append(CheckRow("holevo", _params(n=n, N=steps, unit="nats"), chi, bound, ok))
            rows.append(CheckRow("holevo", _params(n=n, N=steps, unit="bits"),
                                 chi / math.log(2), float(steps), ok))
    return rows


def _bounds_mutual_info(p, rng):
    rows = []
    for eps in np.round(np.arange(0.0, 0.331, 0.01), 2):
        info = bl.per_query_mutual_info(float(eps))
        rows.append(CheckRow("mutual-info", _params(eps=f"{eps:.2f}", unit="bits"), info,
                             3 * eps, info <= 3 * eps + 1e-12))
    return rows


def _bounds_point_function(p, rng):
    rows = []
    trials = p.get("trials", 2000)
    for m in (6, 8, 10):
        k = (1 << m) // 4
        rate = bl.point_function_experiment(m, k, trials, rng)
        exact = bl.point_function_success(m, k)
        sigma = math.sqrt(exact * (1 - exact) / trials)
        ok = abs(rate - exact) <= 3 * sigma and rate <= 0.5
        rows.append(CheckRow("point-function", _params(m=m, k=k, closed_form=f"{exact:.6f}"),
                             rate, 0.5, ok))
    return rows


def _bounds_union(p, rng):
    rows = []
    for i in range(p.get("trials", 200)):
        dim = int(rng.choice((2, 4, 8, 16)))
        m = int(rng.integers(1, 6))
        eps = float(rng.uniform(0.001, 0.04))
        proj, rho = bl.random_union_bound_instance(rng, dim, m, eps)
        success, bound, e = bl.quantum_union_bound_check(proj, rho)
        rows.append(CheckRow("union-bound", _params(dim=dim, M=m, eps=f"{e:.4f}"), success,
                             bound, success >= bound - 1e-12))
    return rows


def _bounds_appendix_d(p, rng):
    rows = []
    eps = p.get("epsilon", 0.03)
    for n in (1, 2, 4, 8, 16, 32):
        for e in (0.0, eps, 0.3):
            a = int(rng.integers(0, 1 << n))
            label, q = bl.appendix_d_quantum_trial(bl.AppendixDClass(n, e, a), rng)
            rows.append(CheckRow("appendix-d-quantum", _params(n=n, eps=e), q, 1,
                                 label == a and q == 1))
    budgets = {}
    for n in p.get("n_list", (4, 8, 16)):
        budgets[n] = bl.appendix_d_classical_budget(n, eps, rng, trials=p.get("trials", 400))
        rows.append(CheckRow("appendix-d-budget", _params(n=n, eps=eps), budgets[n], 0, True))
    ns = sorted(budgets)
    for lo, hi in zip(ns, ns[1:]):
        ratio = budgets[hi] / budgets[lo]
        rows.append(CheckRow("appendix-d-ratio", _params(n=f"{lo}->{hi}"), ratio, 2.4,
                             1.6 <= ratio <= 2.4))
    return rows


def _bounds_packing_erm(p, rng):
    n, eps, delta = p.get("n", 6), p.get("epsilon", 0.02), p.get("delta", 0.1)
    trials = p.get("trials", 500)
    net = bl.greedy_packing_net(bl.AppendixDClass(n, eps).table(), "uniform", eps)
    samples = math.ceil(38 * math.log(4 * len(net) / delta) / eps)
    errs = np.array([bl.erm_trial(net, n, eps, samples, rng) for _ in range(trials)])
    freq = float(np.mean(errs < 12 * eps))
    return [
        CheckRow("packing-net", _params(n=n, eps=eps), len(net), 1 << n,
                 len(net) == 1 << n and net.is_valid()),
        CheckRow("packing-erm", _params(n=n, eps=eps, delta=delta, N=samples), freq,
                 1 - delta, freq >= 1 - delta),
    ]


BOUNDS_SELECTORS = {
    "pauli-moments": _bounds_pauli_moments,
    "tv": _bounds_tv,
    "holevo": _bounds_holevo,
    "mutual-info": _bounds_mutual_info,
    "point-function": _bounds_point_function,
    "union-bound": _bounds_union,
    "appendix-d": _bounds_appendix_d,
    "packing-erm": _bounds_packing_erm,
}


def run_bounds(selector: str, params: dict | None = None) -> list[CheckRow]:
    """Run one family of exact checks; ``params`` may set n, steps, trials, seed, epsilon."""
    if selector not in BOUNDS_SELECTORS:
        raise UsageError(f"unknown check {selector!r}; choose from {', '.join(BOUNDS_SELECTORS)}")
    params = dict(params or {})
    rng = np.random.default_rng(params.pop("seed", 0))
    return BOUNDS_SELECTORS[selector](params, rng)


# command line ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="lab", description="Pauli-learning experiments and exact bound checks.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sc = sub.add_parser("scaling", help="copy counts of a learner over a range of n")
    sc.add_argument("--config", help="key = value file; flags override it")
    sc.add_argument("--task", choices=TASKS)
    sc.add_argument("--model", choices=MODELS)
    sc.add_argument("--n-min", type=int)
    sc.add_argument("--n-max", type=int)
    sc.add_argument("--n-step", type=int)
    sc.add_argument("--trials", type=int)
    sc.add_argument("--epsilon", type=float)
    sc.add_argument("--delta", type=float)
    sc.add_argument("--seed", type=int, dest="master_seed")
    sc.add_argument("--signs", choices=("plus", "both"))
    sc.add_argument("--copy-cap", type=float)
    sc.add_argument("--jobs", type=int)
    sc.add_argument("--out", dest="output", help="CSV path (default: stdout)")
    sc.add_argument("--fit", action="store_true", help="print scaling fits to stderr")

    bd = sub.add_parser("bounds", help="exact checks of the information-theoretic lemmas")
    bd.add_argument("--check", required=True)
    bd.add_argument("--n", type=int)
    bd.add_argument("--steps", type=int)
    bd.add_argument("--trials", type=int)
    bd.add_argument("--epsilon", type=float)
    bd.add_argument("--seed", type=int)

    pr = sub.add_parser("predict", help="predict Pauli expectations of a named state")
    pr.add_argument("--state", required=True, help="e.g. mixed:+XZ or product:Z+,X-")
    pr.add_argument("--targets", default="all", help="'all' or comma-separated strings like XZ,YI")
    pr.add_argument("--epsilon", type=float, default=0.3)
    pr.add_argument("--delta", type=float, default=0.05)
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--out", help="CSV path (default: stdout)")
    return ap


def _cmd_scaling(args) -> int:
    values = read_config_file(args.config) if args.config else {}
    for key in _CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    cfg = replace(ExperimentConfig(), **values).validate()
    records = run_scaling(cfg)
    if cfg.output:
        emit_csv(records, cfg.output)
    else:
        sys.stdout.write(records_to_csv(records))
    if args.fit:
        for n in cfg.n_values:
            copies = [r.copies for r in records if r.n == n]
            print(f"n={n}: mean copies {np.mean(copies):.3f} over {len(copies)} trials", file=sys.stderr)
        try:
            fits = fit_scaling(records)
        except ValueError as exc:
            print(f"no fit: {exc}", file=sys.stderr)
            fits = {}
        for (task, model), fit in fits.items():
            print(f"{task}/{model}: log2 slope {fit.slope_log2:.3f} (R2 {fit.r2_log2:.3f}), "
                  f"log n slope {fit.slope_logn:.3f} (R2 {fit.r2_logn:.3f}), "
                  f"linear slope {fit.slope_linear:.3f} (R2 {fit.r2_linear:.3f}), best {fit.best}",
                  file=sys.stderr)
    return 0 if all(r.success for r in records) else 1


def _cmd_bounds(args) -> int:
    params = {k: getattr(args, k) for k in ("n", "steps", "trials", "epsilon", "seed")
              if getattr(args, k) is not None}
    rows = run_bounds(args.check, params)
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["check", "params", "value", "bound", "pass"])
    for r in rows:
        w.writerow(r.row())
    return 0 if all(r.passed for r in rows) else 1


def _cmd_predict(args) -> int:
    try:
        state = parse_state(args.state)
        if args.targets == "all":
            targets = list(enumerate_paulis(state.n))
        else:
            targets = [encode_index(t.strip()) for t in args.targets.split(",")]
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if any(t.n != state.n for t in targets):
        raise UsageError("targets must act on as many qubits as the state")
    rng = np.random.default_rng(args.seed)
    report = predict_paulis(state, targets, args.epsilon, args.delta, rng)
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)
    err = report.worst_case_error(state)
    print(f"copies {report.total_copies} (Bell {report.copies_used[0]}, sign {report.copies_used[1]}), "
          f"worst-case error {err:.4f}", file=sys.stderr)
    return 0 if err <= args.epsilon else 1


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command == "scaling":
            return _cmd_scaling(args)
        if args.command == "bounds":
            return _cmd_bounds(args)
        return _cmd_predict(args)
    except (UsageError, InfeasibleCell) as exc:
        print(f"lab: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
