"""Batch front-end: JSON experiment configs, named scenarios, CSV/JSON reports.

Every scenario prints one ``CHECK <name> PASS|FAIL value=<v> bound=<b>`` line
per verification, writes ``report.json`` (and scenario-specific CSV files)
into the output directory, and exits 0 when all checks pass, 2 on any
verification failure, 1 on input errors.  Outputs contain no timestamps and
all randomness is drawn from the seeded generator, so identical
(config, seed) pairs reproduce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from .collisions import CollisionConfig, run_trajectory
from .errors import QCollideError
from .lindblad import eigenoperator_dissipator, rates, steady_state
from .presets import (
    DEFAULT_BETA,
    maximally_mixed,
    qubit_collision,
    qubit_couplings,
    qubit_hamiltonian,
    qutrit_ancilla_collision,
    three_level_collision,
    three_level_state,
    random_gapped_probs,
)
from .rng import SplitMix64
from .series import PerturbedState, coherence_series, entropy_series, relative_entropy_series
from .states import (
    AncillaSpec,
    DensityMatrix,
    relative_entropy,
    relative_entropy_of_coherence,
    ergotropy_exact,
    thermal_state,
    von_neumann_entropy,
)
from .verify import (
    entropic_identity_residuals,
    generator_for,
    halving_ratios,
    loglog_slope,
    random_collision_suite,
    stroboscopic_deviation,
)
from .presets import random_basis, random_zero_diagonal, random_traceless_hermitian
from .linalg import dag

SCENARIOS = ("qubit-demo", "converge", "bound-check", "oracle-check", "multibath", "custom")

POSITIVITY_BOUND = -1e-9
WORK_BOUND = 1e-9
SLOPE_WINDOW = (0.4, 0.7)
HALVING_WINDOW = (2.4, 3.2)
SERIES_WINDOW = (6.0, 10.0)
COHERENT_BOUND_SCALE = -200.0
IDENTITY_TAUS = (5e-4, 2.5e-4, 1.25e-4, 6.25e-5)
SERIES_EPS = (2e-2, 1e-2, 5e-3, 2.5e-3)


class ConfigError(Exception):
    """Base class for configuration problems (exit code 1)."""


class ParseError(ConfigError):
    pass


class SchemaError(ConfigError):
    pass


class ValidationError(ConfigError):
    pass


_MATRIX_KEYS = ("H_S", "H_A", "V", "chi")
_SCALAR_KEYS = {
    "beta": float,
    "lambda": float,
    "g": float,
    "omega": float,
    "tau": float,
    "t_final": float,
    "dt": float,
    "n_steps": int,
    "seed": int,
}
_LIST_OK = {"H_A", "V", "chi", "beta", "lambda", "g", "tau"}
_ALLOWED_KEYS = {"scenario", "output_dir", *_MATRIX_KEYS, *_SCALAR_KEYS}


@dataclass
class ExperimentConfig:
    """Validated scenario configuration with per-species lists normalized."""

    scenario: str
    h_system: np.ndarray | None
    h_ancillas: list[np.ndarray] | None
    interactions: list[np.ndarray] | None
    coherences: list[np.ndarray] | None
    betas: list[float] | None
    lams: list[float] | None
    gs: list[float] | None
    taus: list[float] | None
    omega: float | None
    t_final: float | None
    dt: float | None
    n_steps: int | None
    seed: int | None
    output_dir: str


def _parse_matrix(key: str, raw: Any) -> np.ndarray:
    if not isinstance(raw, list) or not raw:
        raise SchemaError(f"{key}: expected a nested array of [re, im] pairs")
    dim = len(raw)
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != dim:
            raise SchemaError(f"{key}: row {i} is not a length-{dim} list")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                raise SchemaError(f"{key}: entry ({i},{j}) is not an [re, im] pair")
            out[i, j] = complex(cell[0], cell[1])
    return out


def _as_list(raw: Any) -> list[Any]:
    if isinstance(raw, list) and raw and isinstance(raw[0], list):
        # list of matrices vs single matrix: a matrix is a list of rows of pairs
        first = raw[0]
        if first and isinstance(first[0], list) and first[0] and isinstance(first[0][0], list):
            return raw  # list of matrices
        return [raw]
    if isinstance(raw, list):
        return raw
    return [raw]


def _hermitian_gate(key: str, m: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    if float(np.max(np.abs(m - m.conj().T))) > 1e-10 * scale:
        raise ValidationError(f"{key}: matrix is not Hermitian")
    return 0.5 * (m + m.conj().T)


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a JSON experiment configuration (strict schema)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise SchemaError("top level must be a JSON object")
    unknown = sorted(set(raw) - _ALLOWED_KEYS)
    if unknown:
        raise SchemaError(f"unknown key {unknown[0]!r}")
    scenario = raw.get("scenario")
    if scenario not in SCENARIOS:
        raise SchemaError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")

    def scalar_list(key: str) -> list[float] | None:
        if key not in raw:
            return None
        values = raw[key] if isinstance(raw[key], list) else [raw[key]]
        if key != "tau" and isinstance(raw[key], list) and key not in _LIST_OK:
            raise SchemaError(f"{key}: lists are not allowed")
        kind = _SCALAR_KEYS[key]
        out = []
        for v in values:
            if isinstance(v, bool) or not isinstance(v, (int, float)):
                raise SchemaError(f"{key}: expected a number, got {v!r}")
            if kind is int and int(v) != v:
                raise SchemaError(f"{key}: expected an integer, got {v!r}")
            out.append(kind(v))
        return out

    def scalar(key: str) -> float | int | None:
        if key not in raw:
            return None
        if isinstance(raw[key], list):
            raise SchemaError(f"{key}: a single number is required")
        return scalar_list(key)[0]

    def matrices(key: str) -> list[np.ndarray] | None:
        if key not in raw:
            return None
        if key == "H_S":
            return [_hermitian_gate(key, _parse_matrix(key, raw[key]))]
        return [
            _hermitian_gate(key, _parse_matrix(key, m)) for m in _as_list(raw[key])
        ]

    taus = scalar_list("tau")
    if taus is not None and len(taus) > 1 and scenario not in ("converge", "multibath"):
        raise ValidationError("tau: a list is only meaningful for converge/multibath")
    for key in ("beta", "lambda", "g"):
        if isinstance(raw.get(key), list) and scenario != "multibath":
            raise ValidationError(f"{key}: per-species lists are only meaningful for multibath")

    h_s = matrices("H_S")
    cfg = ExperimentConfig(
        scenario=scenario,
        h_system=h_s[0] if h_s else None,
        h_ancillas=matrices("H_A"),
        interactions=matrices("V"),
        coherences=matrices("chi"),
        betas=scalar_list("beta"),
        lams=scalar_list("lambda"),
        gs=scalar_list("g"),
        taus=taus,
        omega=scalar("omega"),
        t_final=scalar("t_final"),
        dt=scalar("dt"),
        n_steps=scalar("n_steps"),
        seed=scalar("seed"),
        output_dir=str(raw.get("output_dir", ".")),
    )
    if cfg.scenario in ("bound-check", "oracle-check") and cfg.seed is None:
        raise ValidationError("seed: required for randomized scenarios")
    if cfg.scenario == "custom":
        for key, value in (("H_S", cfg.h_system), ("H_A", cfg.h_ancillas),
                           ("V", cfg.interactions), ("chi", cfg.coherences)):
            if value is None:
                raise ValidationError(f"{key}: required for the custom scenario")
    return cfg


@dataclass(frozen=True)
class Check:
    """One verification outcome destined for stdout and report.json."""

    name: str
    value: float
    bound: object
    passed: bool


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _bound_text(bound: object) -> str:
    if isinstance(bound, (list, tuple)):
        return "[" + ",".join(repr(float(b)) for b in bound) + "]"
    return repr(float(bound))


def _window_checks(name: str, ratios: list[float], window: tuple[float, float]) -> list[Check]:
    lo, hi = window
    return [
        Check(f"{name}_ratio_min", min(ratios), lo, min(ratios) >= lo),
        Check(f"{name}_ratio_max", max(ratios), hi, max(ratios) <= hi),
    ]


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def _write_trajectory_csv(path: Path, record, gen, h_system, collision_cfg) -> None:
    header = (
        "step,t,E_S,Q_A_cum,W_cum,W_C_cum,Q_inc_cum,Sigma_cum,I_cum,Srel_cum,"
        "C_anc_before,C_anc_after,S_system,Pi_rate"
    )
    lines = [header]
    for step, cum in zip(record.steps, record.cumulative):
        state = step.state
        pi_rate = rates(gen, state, h_system).entropy_production_rate
        row = [
            str(step.index),
            _fmt(step.time),
            _fmt(state.expectation(h_system)),
            _fmt(cum.heat_ancilla),
            _fmt(cum.work),
            _fmt(cum.coherent_work),
            _fmt(cum.incoherent_heat),
            _fmt(cum.entropy_production),
            _fmt(cum.mutual_info),
            _fmt(cum.rel_entropy_ancilla),
            _fmt(step.ledger.coherence_before),
            _fmt(step.ledger.coherence_after),
            _fmt(von_neumann_entropy(state)),
            _fmt(pi_rate),
        ]
        lines.append(",".join(row))
    _write(path, "\n".join(lines) + "\n")


def _trajectory_checks(record, h_scale: float) -> list[Check]:
    if record.steps:
        min_sigma = min(s.ledger.entropy_production for s in record.steps)
        min_mutual = min(s.ledger.mutual_info for s in record.steps)
        min_rel = min(s.ledger.rel_entropy_ancilla for s in record.steps)
        max_work = max(abs(s.ledger.work) for s in record.steps) / h_scale
    else:
        min_sigma = min_mutual = min_rel = max_work = 0.0
    return [
        Check("entropy_production_min", min_sigma, POSITIVITY_BOUND, min_sigma >= POSITIVITY_BOUND),
        Check("mutual_info_min", min_mutual, POSITIVITY_BOUND, min_mutual >= POSITIVITY_BOUND),
        Check("ancilla_rel_entropy_min", min_rel, POSITIVITY_BOUND, min_rel >= POSITIVITY_BOUND),
        Check("work_scaled_max", max_work, WORK_BOUND, max_work <= WORK_BOUND),
    ]


def _h_scale(cfg: CollisionConfig) -> float:
    return float(
        np.max(np.abs(np.linalg.eigvalsh(cfg.h_system)))
        + np.max(np.abs(np.linalg.eigvalsh(cfg.ancilla.h_ancilla)))
    )


def _scenario_qubit_demo(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    omega = cfg.omega or 1.0
    g = cfg.gs[0] if cfg.gs else 1.0
    beta = cfg.betas[0] if cfg.betas else DEFAULT_BETA
    lam = cfg.lams[0] if cfg.lams else 0.3
    tau = cfg.taus[0] if cfg.taus else 1e-2
    n_steps = cfg.n_steps if cfg.n_steps is not None else 200
    collision = qubit_collision(omega=omega, g=g, beta=beta, lam=lam, tau=tau)
    record = run_trajectory(maximally_mixed(2), [collision], n_steps, schedule="single")
    gen = generator_for([collision])
    _write_trajectory_csv(out_dir / "trajectory.csv", record, gen, collision.h_system, collision)
    return _trajectory_checks(record, _h_scale(collision))


def _scenario_custom(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    beta = cfg.betas[0] if cfg.betas else 1.0
    lam = cfg.lams[0] if cfg.lams else 0.0
    tau = cfg.taus[0] if cfg.taus else 1e-2
    n_steps = cfg.n_steps if cfg.n_steps is not None else 100
    try:
        spec = AncillaSpec(
            h_ancilla=cfg.h_ancillas[0], beta=beta, chi=cfg.coherences[0], lam=lam, tau=tau
        )
        collision = CollisionConfig(cfg.h_system, cfg.interactions[0], spec)
    except (QCollideError, ValueError) as exc:
        raise ValidationError(str(exc)) from exc
    record = run_trajectory(maximally_mixed(collision.dim_system), [collision], n_steps)
    gen = generator_for([collision])
    _write_trajectory_csv(out_dir / "trajectory.csv", record, gen, collision.h_system, collision)
    return _trajectory_checks(record, _h_scale(collision))


def _scenario_converge(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    taus = cfg.taus or [4e-2, 1e-2, 2.5e-3]
    lam = cfg.lams[0] if cfg.lams else 0.3
    t_final = cfg.t_final if cfg.t_final is not None else 2.0
    data = stroboscopic_deviation(
        lambda tau: [qutrit_ancilla_collision(lam=lam, tau=tau)],
        maximally_mixed(2),
        taus,
        t_final,
    )
    _write(
        out_dir / "convergence.csv",
        "tau,max_trace_distance\n"
        + "".join(f"{_fmt(tau)},{_fmt(dist)}\n" for tau, dist in data),
    )
    slope = loglog_slope([t for t, _ in data], [d for _, d in data])
    lo, hi = SLOPE_WINDOW
    return [Check("slope", slope, list(SLOPE_WINDOW), lo <= slope <= hi)]


def _scenario_bound_check(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    count = cfg.n_steps if cfg.n_steps is not None else 1000
    summary, samples = random_collision_suite(cfg.seed, count, eigenoperator=True)
    lines = ["index,d_S,d_A,tau,Sigma,I,Srel,work_scaled,coherent_bound_scaled"]
    for s in samples:
        lines.append(
            f"{s.index},{s.dim_system},{s.dim_ancilla},{_fmt(s.tau)},"
            f"{_fmt(s.entropy_production)},{_fmt(s.mutual_info)},"
            f"{_fmt(s.rel_entropy_ancilla)},{_fmt(s.work_scaled)},"
            f"{_fmt(s.coherent_bound_scaled)}"
        )
    _write(out_dir / "samples.csv", "\n".join(lines) + "\n")
    return [
        Check(
            "ancilla_rel_entropy_min",
            summary.min_rel_entropy,
            POSITIVITY_BOUND,
            summary.min_rel_entropy >= POSITIVITY_BOUND,
        ),
        Check(
            "entropy_production_min",
            summary.min_entropy_production,
            POSITIVITY_BOUND,
            summary.min_entropy_production >= POSITIVITY_BOUND,
        ),
        Check(
            "mutual_info_min",
            summary.min_mutual_info,
            POSITIVITY_BOUND,
            summary.min_mutual_info >= POSITIVITY_BOUND,
        ),
        Check(
            "work_scaled_max",
            summary.max_abs_work_scaled,
            WORK_BOUND,
            summary.max_abs_work_scaled <= WORK_BOUND,
        ),
        Check(
            "coherent_bound_scaled_min",
            summary.min_coherent_bound_scaled,
            COHERENT_BOUND_SCALE,
            summary.min_coherent_bound_scaled >= COHERENT_BOUND_SCALE,
        ),
    ]


def _series_instance_residuals(rng: SplitMix64, dim: int, eps_list) -> dict[str, list[float]]:
    probs = random_gapped_probs(rng, dim, min_gap=0.12)
    basis = random_basis(rng, dim)
    rho0 = DensityMatrix((basis * probs) @ dag(basis))
    sigma = random_traceless_hermitian(rng, dim)
    mu = random_traceless_hermitian(rng, dim)
    chi = random_zero_diagonal(rng, basis)
    h_ref = (basis * np.arange(1.0, dim + 1.0)) @ dag(basis)
    out: dict[str, list[float]] = {"entropy": [], "coherence": [], "relative_entropy": []}
    for eps in eps_list:
        exact_s = von_neumann_entropy(DensityMatrix(rho0.matrix + eps * sigma))
        out["entropy"].append(
            abs(exact_s - entropy_series(PerturbedState(rho0=rho0, direction=sigma, epsilon=eps)))
        )
        exact_c = relative_entropy_of_coherence(DensityMatrix(rho0.matrix + eps * chi), h_ref)
        out["coherence"].append(
            abs(exact_c - coherence_series(PerturbedState(rho0=rho0, direction=chi, epsilon=eps)))
        )
        exact_kl = relative_entropy(
            DensityMatrix(rho0.matrix + eps * mu), DensityMatrix(rho0.matrix + eps * sigma)
        )
        out["relative_entropy"].append(
            abs(exact_kl - relative_entropy_series(rho0, sigma, mu, eps))
        )
    return out


def ergotropy_ratio_deviations(eps_list=(1e-1, 1e-2, 1e-3)) -> list[float]:
    """|ergotropy / (T * coherence) - 1| for the qubit fixture at each amplitude."""
    deviations = []
    for eps in eps_list:
        spec = AncillaSpec(
            h_ancilla=qubit_hamiltonian(1.0),
            beta=DEFAULT_BETA,
            chi=np.array([[0, 1], [1, 0]], dtype=complex),
            lam=eps,
            tau=1.0,
        )
        rho = DensityMatrix(thermal_state(spec.h_ancilla, spec.beta).matrix + eps * spec.chi)
        exact = ergotropy_exact(rho, spec.h_ancilla)
        coherence = relative_entropy_of_coherence(rho, spec.h_ancilla)
        deviations.append(abs(exact / (coherence / spec.beta) - 1.0))
    return deviations


def _scenario_oracle_check(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    checks: list[Check] = []
    # Finite-duration identity residual orders on the two-channel fixture.
    residuals = entropic_identity_residuals(
        lambda tau: three_level_collision(tau), three_level_state(), IDENTITY_TAUS
    )
    checks += _window_checks("identity_mutual_info", halving_ratios(residuals.mutual_info), HALVING_WINDOW)
    checks += _window_checks("identity_rel_entropy", halving_ratios(residuals.rel_entropy), HALVING_WINDOW)
    checks += _window_checks("first_law", halving_ratios(residuals.first_law), HALVING_WINDOW)
    sigma_ratio = min(halving_ratios(residuals.entropy_production))
    checks.append(
        Check("entropy_production_ratio_min", sigma_ratio, HALVING_WINDOW[0], sigma_ratio >= HALVING_WINDOW[0])
    )
    # Series residual orders on seeded random instances.
    rng = SplitMix64(cfg.seed)
    families: dict[str, list[float]] = {"entropy": [], "coherence": [], "relative_entropy": []}
    for dim in (2, 3):
        res = _series_instance_residuals(rng, dim, SERIES_EPS)
        for name in ("entropy", "relative_entropy"):
            families[name] += halving_ratios(res[name])
        if dim == 3:
            families["coherence"] += halving_ratios(res["coherence"])
    for name, ratios in families.items():
        checks += _window_checks(f"{name}_series", ratios, SERIES_WINDOW)
    # Ergotropy-to-coherence ratio.
    deviations = ergotropy_ratio_deviations()
    worst_rise = max(deviations[i + 1] - deviations[i] for i in range(len(deviations) - 1))
    checks.append(Check("ergotropy_deviation_monotone", worst_rise, 0.0, worst_rise <= 0.0))
    checks.append(Check("ergotropy_deviation_mid", deviations[1], 5e-2, deviations[1] <= 5e-2))
    return checks


def _scenario_multibath(cfg: ExperimentConfig, out_dir: Path) -> list[Check]:
    taus = cfg.taus or [4e-2, 1e-2, 2.5e-3]
    t_final = cfg.t_final if cfg.t_final is not None else 2.0
    betas = cfg.betas or [DEFAULT_BETA, 0.5 * DEFAULT_BETA]
    gs = cfg.gs or [1.0, 0.8]
    lams = cfg.lams or [0.3, 0.25]

    def build(tau: float) -> list[CollisionConfig]:
        return [
            qubit_collision(g=gs[0], beta=betas[0], lam=lams[0], tau=tau, label="A"),
            qutrit_ancilla_collision(g=gs[1], beta=betas[1], lam=lams[1], tau=tau, label="B"),
        ]

    data = stroboscopic_deviation(build, maximally_mixed(2), taus, t_final)
    _write(
        out_dir / "convergence.csv",
        "tau,max_trace_distance\n"
        + "".join(f"{_fmt(tau)},{_fmt(dist)}\n" for tau, dist in data),
    )
    slope = loglog_slope([t for t, _ in data], [d for _, d in data])
    lo, hi = SLOPE_WINDOW
    checks = [Check("slope", slope, list(SLOPE_WINDOW), lo <= slope <= hi)]

    # Two thermal qubit baths: stationary excited population from the jump rates.
    pair = [
        qubit_collision(g=gs[0], beta=betas[0], lam=0.0, tau=taus[-1], label="A"),
        qubit_collision(g=gs[1], beta=betas[1], lam=0.0, tau=taus[-1], label="B"),
    ]
    gen = generator_for(pair)
    stationary = steady_state(gen)
    up = down = 0.0
    for collision, g, beta in zip(pair, gs, betas):
        jump_rates, _ = eigenoperator_dissipator(
            qubit_couplings(g=g), collision.ancilla.h_ancilla, beta, h_system=collision.h_system
        )
        up += jump_rates[0].gamma_plus
        down += jump_rates[0].gamma_minus
    predicted = up / (up + down)
    error = abs(float(stationary.matrix[0, 0].real) - predicted)
    checks.append(Check("steady_state_population_error", error, 1e-8, error <= 1e-8))
    return checks


_SCENARIO_RUNNERS = {
    "qubit-demo": _scenario_qubit_demo,
    "converge": _scenario_converge,
    "bound-check": _scenario_bound_check,
    "oracle-check": _scenario_oracle_check,
    "multibath": _scenario_multibath,
    "custom": _scenario_custom,
}


def run_scenario(cfg: ExperimentConfig, out_dir: str | Path | None = None) -> int:
    """Execute a scenario, emit CHECK lines and report.json, return exit code."""
    target = Path(out_dir) if out_dir is not None else Path(cfg.output_dir)
    checks = _SCENARIO_RUNNERS[cfg.scenario](cfg, target)
    for check in checks:
        state = "PASS" if check.passed else "FAIL"
        print(f"CHECK {check.name} {state} value={check.value!r} bound={_bound_text(check.bound)}")
    report = {
        "scenario": cfg.scenario,
        "seed": cfg.seed,
        "checks": [
            {"name": c.name, "value": float(c.value), "bound": c.bound, "pass": c.passed}
            for c in checks
        ],
    }
    _write(target / "report.json", json.dumps(report, indent=2) + "\n")
    return 0 if all(c.passed for c in checks) else 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="qcollide",
        description="Collisional open-system thermodynamics: scenarios and verification suites.",
    )
    parser.add_argument("--version", action="version", version=f"qcollide {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run_parser = sub.add_parser("run", help="run a scenario from a JSON config")
    run_parser.add_argument("--config", required=True, help="path to the JSON config")
    run_parser.add_argument("--out", default=None, help="output directory (overrides config)")
    validate_parser = sub.add_parser("validate", help="validate a JSON config and exit")
    validate_parser.add_argument("--config", required=True, help="path to the JSON config")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.command == "validate":
            print(f"OK scenario={cfg.scenario}")
            return 0
        return run_scenario(cfg, out_dir=args.out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (QCollideError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
