"""Command-line interface: protocol runs, decay sweeps, validation, figure data.

Config files are JSON with sections ``layout``, ``schedule``, ``decay``,
``integrator`` and ``protocol``; every key has a default matching the
reference double-swap / dark-state settings, and command-line flags override
the file.  CSV output uses the fixed column order

    tau,n_a1,n_b,n_a2,G1,G2,theta,n_dark,fidelity

with 9 significant digits, so identical configurations produce bit-identical
files (the pipeline has no randomness).

Exit codes: 0 success, 2 configuration error, 3 integration failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import dynamics, metrics, microscopic, oracle, protocols
from .dynamics import (
    ConstantPulse,
    DecayRates,
    GaussianPulsePair,
    IntegrationError,
    IntegratorOptions,
    PiecewiseSwapPulse,
)
from .fockspace import ModeLayout

CSV_HEADER = "tau,n_a1,n_b,n_a2,G1,G2,theta,n_dark,fidelity"

EXIT_CONFIG = 2
EXIT_INTEGRATION = 3


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


DEFAULT_CONFIG = {
    "layout": {"dims": None},  # None -> per-initial default (666 / 888 coherent)
    "schedule": None,  # None -> protocol default
    "decay": {"kappa1": 0.003, "gamma_s": 0.01, "kappa2": 0.1},
    "integrator": {"dt_max": 1e-3, "rel_tol": 1e-8, "abs_tol": 1e-10, "method": "rk4"},
    "protocol": {
        "kind": "double-swap",
        "initial": "fock1",
        "alpha": 1.0,
        "window": None,  # None -> protocol default
        "phase_correction": True,
        "samples": 601,
    },
}


def _merge(base: dict, override: dict, path="") -> dict:
    out = dict(base)
    for key, val in override.items():
        if key not in base:
            raise ConfigError(f"unknown config key {path}{key!r}")
        if isinstance(base[key], dict) and isinstance(val, dict):
            out[key] = _merge(base[key], val, f"{path}{key}.")
        else:
            out[key] = val
    return out


def load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(DEFAULT_CONFIG))
    if path is None:
        return cfg
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        user = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(user, dict):
        raise ConfigError(f"config file {path}: top level must be an object")
    return _merge(cfg, user)


def _schedule_from_config(entry):
    try:
        shape = entry["shape"]
        if shape == "constant":
            return ConstantPulse(g1=entry["g1"], g2=entry["g2"]), None
        if shape == "piecewise-swap":
            sched, window = protocols.double_swap_schedule(entry["g1"], entry["g2"])
            return sched, window
        if shape == "gaussian-pair":
            keys = ("a1", "c1", "w1", "a2", "c2", "w2")
            return (
                GaussianPulsePair(**{k: entry[k] for k in keys}),
                protocols.DARK_WINDOW,
            )
    except KeyError as exc:
        raise ConfigError(f"schedule section missing field {exc.args[0]!r}") from exc
    except ValueError as exc:
        raise ConfigError(f"schedule: {exc}") from exc
    raise ConfigError(f"unknown schedule shape {entry.get('shape')!r}")


def build_protocol(cfg: dict) -> tuple[protocols.ProtocolSpec, ModeLayout, IntegratorOptions, int]:
    proto = cfg["protocol"]
    kind = proto["kind"]
    initial = proto["initial"]
    try:
        decay = DecayRates(**cfg["decay"])
        options = IntegratorOptions(**cfg["integrator"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc

    if cfg["schedule"] is not None:
        schedule, window = _schedule_from_config(cfg["schedule"])
    elif kind == "double-swap":
        schedule, window = protocols.double_swap_schedule(1.0, 1.0)
    elif kind == "dark-state":
        schedule, window = protocols.dark_state_schedule(), protocols.DARK_WINDOW
    else:
        raise ConfigError(f"unknown protocol kind {kind!r}")
    if proto["window"] is not None:
        window = tuple(proto["window"])
    if window is None:
        raise ConfigError("constant schedules need an explicit protocol.window")

    try:
        spec = protocols.ProtocolSpec(
            kind=kind,
            schedule=schedule,
            window=window,
            initial_kind=initial,
            decay=decay,
            alpha=proto["alpha"],
            phase_correction=proto["phase_correction"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    dims = cfg["layout"]["dims"]
    try:
        layout = ModeLayout(tuple(dims)) if dims else protocols.default_layout(initial)
    except ValueError as exc:
        raise ConfigError(f"layout: {exc}") from exc
    samples = int(proto["samples"])
    if samples < 2:
        raise ConfigError("protocol.samples must be >= 2")
    return spec, layout, options, samples


# ---------------------------------------------------------------------------
# output


def write_csv(path: Path, result: dynamics.SimResult):
    cols = np.column_stack(
        [
            result.times,
            result.n_a1,
            result.n_b,
            result.n_a2,
            result.g1,
            result.g2,
            result.theta,
            result.n_dark,
            result.fidelity,
        ]
    )
    lines = [CSV_HEADER]
    for row in cols:
        lines.append(",".join(f"{v:.9g}" for v in row))
    path.write_text("\n".join(lines) + "\n")


def _print_summary(result: dynamics.SimResult, unit_scale_mhz: float | None):
    print(f"peak fidelity {result.peak_fidelity:.6f} at tau = {result.peak_tau:.6g} (1/G)")
    if unit_scale_mhz is not None:
        # tau is in units of 1/G with G = 2 pi x unit_scale MHz
        t_us = result.peak_tau / (2.0 * math.pi * unit_scale_mhz)
        print(
            f"physical units: G = 2 pi x {unit_scale_mhz:g} MHz, "
            f"peak at t = {t_us:.6g} us"
        )


# ---------------------------------------------------------------------------
# subcommands


def _apply_overrides(cfg: dict, args) -> dict:
    if args.protocol:
        cfg["protocol"]["kind"] = args.protocol
    if args.initial:
        cfg["protocol"]["initial"] = args.initial
    if args.alpha is not None:
        cfg["protocol"]["alpha"] = args.alpha
    if args.samples is not None:
        cfg["protocol"]["samples"] = args.samples
    if args.lossless:
        cfg["decay"] = {"kappa1": 0.0, "gamma_s": 0.0, "kappa2": 0.0}
    if args.lossy_defaults:
        cfg["decay"] = {"kappa1": 0.003, "gamma_s": 0.01, "kappa2": 0.1}
    if args.dt is not None:
        cfg["integrator"]["dt_max"] = args.dt
    return cfg


def cmd_run(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    spec, layout, options, samples = build_protocol(cfg)
    result = protocols.run_protocol(spec, layout, options, samples)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    out_file = out_dir / f"{spec.kind}_{spec.initial_kind}.csv"
    write_csv(out_file, result)
    _print_summary(result, args.unit_scale)
    print(f"wrote {out_file}")
    return 0


def cmd_sweep(args) -> int:
    cfg = _apply_overrides(load_config(args.config), args)
    if args.parameter != "gamma_s":
        raise ConfigError(f"only gamma_s sweeps are supported, got {args.parameter!r}")
    if args.values is not None:
        try:
            values = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"bad sweep values {args.values!r}") from exc
    else:
        values = list(protocols.GAMMA_SWEEP_DEFAULTS)
    if not values:
        raise ConfigError("empty sweep value list")
    if any(v < 0 for v in values):
        raise ConfigError("sweep values must be >= 0")

    spec, layout, options, samples = build_protocol(cfg)
    results = protocols.sweep_spin_decay(spec, values, layout, options, samples)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = ["gamma_s,peak_fidelity,peak_tau"]
    for g, res in zip(values, results):
        f = out_dir / f"gamma_s_{g:g}.csv"
        write_csv(f, res)
        summary.append(f"{g:.9g},{res.peak_fidelity:.9g},{res.peak_tau:.9g}")
        print(f"gamma_s = {g:g}: peak fidelity {res.peak_fidelity:.6f} -> {f}")
    (out_dir / "summary.csv").write_text("\n".join(summary) + "\n")
    print(f"wrote {out_dir / 'summary.csv'}")
    return 0


def cmd_figure_data(args) -> int:
    """Regenerate the CSV inputs for the reference figures (occupation/fidelity
    panels for both protocols and the spin-decay sweep)."""
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    lossless = DecayRates()
    lossy = dynamics.LOSSY_DEFAULTS
    for kind in ("double-swap", "dark-state"):
        if kind == "double-swap":
            schedule, window = protocols.double_swap_schedule(1.0, 1.0)
        else:
            schedule, window = protocols.dark_state_schedule(), protocols.DARK_WINDOW
        for initial in ("fock1", "superposition", "coherent"):
            for decay, label in ((lossless, "lossless"), (lossy, "lossy")):
                spec = protocols.ProtocolSpec(
                    kind=kind,
                    schedule=schedule,
                    window=window,
                    initial_kind=initial,
                    decay=decay,
                )
                res = protocols.run_protocol(spec)
                f = out_dir / f"{kind}_{initial}_{label}.csv"
                write_csv(f, res)
                print(f"{kind} {initial} {label}: peak {res.peak_fidelity:.4f} -> {f}")
    # sweep panel
    schedule, window = protocols.dark_state_schedule(), protocols.DARK_WINDOW
    spec = protocols.ProtocolSpec(
        kind="dark-state",
        schedule=schedule,
        window=window,
        initial_kind="superposition",
        decay=lossy,
    )
    results = protocols.sweep_spin_decay(spec)
    summary = ["gamma_s,peak_fidelity,peak_tau"]
    for g, res in zip(protocols.GAMMA_SWEEP_DEFAULTS, results):
        f = out_dir / f"sweep_gamma_s_{g:g}.csv"
        write_csv(f, res)
        summary.append(f"{g:.9g},{res.peak_fidelity:.9g},{res.peak_tau:.9g}")
    (out_dir / "sweep_summary.csv").write_text("\n".join(summary) + "\n")
    print(f"wrote figure data to {out_dir}")
    return 0


# ---------------------------------------------------------------------------
# validation suite


def _check_oracle_equivalence(options):
    # constant swap segment vs the vectorized-Liouvillian exponential; small
    # dimensions keep the dense matrix exponential cheap
    lay3 = ModeLayout((3, 3, 3))
    init3, _ = protocols.initial_states("fock1", lay3)
    seg1 = ConstantPulse(1.0, 0.0)
    out = []
    for decay, label in ((DecayRates(), "lossless"), (dynamics.LOSSY_DEFAULTS, "lossy")):
        res = dynamics.evolve(
            init3, seg1, decay, (0.0, math.pi / 2), options, sample_count=2
        )
        h = dynamics.hamiltonian_at(0.0, seg1, lay3)
        ref = oracle.liouvillian_exponential_evolve(init3, h, decay, math.pi / 2)
        dev = float(np.max(np.abs(res.final_state.rho - ref.rho)))
        out.append((f"oracle equivalence ({label})", dev <= 1e-7, f"max dev {dev:.2e}"))
    return out


def _check_coherent_moments(options):
    # first moments of a damped coherent transfer vs the classical amplitude ODE
    from scipy.integrate import solve_ivp

    from . import fockspace

    lay6 = ModeLayout((6, 6, 6))
    alpha = 0.4
    v, _tail = fockspace.coherent_state(alpha, 6)
    init = fockspace.product_state(
        [v, fockspace.vacuum_state(6), fockspace.vacuum_state(6)], lay6
    )
    decay = dynamics.LOSSY_DEFAULTS
    res = dynamics.evolve(
        init, ConstantPulse(1.0, 0.7), decay, (0.0, 2.0), options, sample_count=21
    )
    sol = solve_ivp(
        lambda t, y: oracle.classical_amplitudes_rhs(y, 1.0, 0.7, decay),
        (0.0, 2.0),
        np.array([alpha, 0, 0], complex),
        t_eval=res.times,
        rtol=1e-11,
        atol=1e-13,
    )
    gen = dynamics.build_generators(lay6, decay)
    means = [np.trace(a.toarray() @ res.final_state.rho) for a in gen.a_ops]
    dev = float(np.max(np.abs(np.array(means) - sol.y[:, -1])))
    return [("coherent first moments", dev <= 1e-6, f"max dev {dev:.2e}")]


def _check_conservation(options):
    layout = ModeLayout((4, 4, 4))
    swap, _ = protocols.double_swap_schedule(1.0, 1.0)
    initial, _target = protocols.initial_states("fock1", layout)
    res = dynamics.evolve(
        initial, swap, DecayRates(), (0.0, math.pi), options, sample_count=41
    )
    excitation = res.n_a1 + res.n_b + res.n_a2
    exc_dev = float(np.max(np.abs(excitation - excitation[0])))
    purity = float(np.real(np.trace(res.final_state.rho @ res.final_state.rho)))
    pur_dev = abs(purity - 1.0)
    return [
        ("excitation conservation", exc_dev <= 1e-7, f"max dev {exc_dev:.2e}"),
        ("purity conservation", pur_dev <= 1e-7, f"final purity dev {pur_dev:.2e}"),
    ]


def _check_convergence(dt):
    # step-halving stability of the peak fidelity
    layout = ModeLayout((4, 4, 4))
    swap, _ = protocols.double_swap_schedule(1.0, 1.0)
    spec = protocols.ProtocolSpec(
        "double-swap", swap, (0.0, math.pi), "fock1", dynamics.LOSSY_DEFAULTS
    )
    # sample only the endpoint so dt is not capped by the sampling grid
    r1 = protocols.run_protocol(spec, layout, IntegratorOptions(dt_max=dt), 2)
    r2 = protocols.run_protocol(spec, layout, IntegratorOptions(dt_max=dt / 2), 2)
    conv = abs(r1.fidelity[-1] - r2.fidelity[-1])
    return [("step-halving convergence", conv <= 1e-7, f"endpoint shift {conv:.2e}")]


def _check_effective_couplings():
    cfg = microscopic.MicroConfig(
        n_spins=1,
        g1=10.0,
        g2=500.0,
        omega1=20.0,
        omega2=200.0,
        delta1=200.0,
        delta2=1e5,
    )
    g1, g2 = microscopic.effective_couplings(cfg)
    ok = g1 == 1.0 and g2 == 1.0
    return [("effective couplings", ok, f"G1 = {g1:g}, G2 = {g2:g}")]


def _check_holstein_primakoff():
    hp_dev = 0.0
    for n_spins in (4, 8, 12):
        for n in range(n_spins):
            exact = microscopic.dicke_ladder_matrix_element(n_spins, n)
            approx = math.sqrt(n_spins) * math.sqrt(n + 1)
            hp_dev = max(
                hp_dev,
                abs(
                    (1.0 - exact / approx)
                    - microscopic.holstein_primakoff_error(n_spins, n)
                ),
            )
    return [("Holstein-Primakoff error", hp_dev <= 1e-12, f"max dev {hp_dev:.2e}")]


def _check_adiabatic():
    report = microscopic.adiabatic_elimination_check()
    ok = 1.5 <= report.exponent <= 2.5
    return [
        (
            "adiabatic elimination scaling",
            ok,
            f"exponent {report.exponent:.2f}, deviations {report.deviations[0]:.2e}/"
            f"{report.deviations[1]:.2e}",
        )
    ]


def cmd_validate(args) -> int:
    options = IntegratorOptions(dt_max=args.dt)
    groups = [
        ("oracle equivalence", lambda: _check_oracle_equivalence(options)),
        ("coherent first moments", lambda: _check_coherent_moments(options)),
        ("conservation laws", lambda: _check_conservation(options)),
        ("step-halving convergence", lambda: _check_convergence(args.dt)),
    ]
    if not args.quick:
        groups += [
            ("effective couplings", _check_effective_couplings),
            ("Holstein-Primakoff error", _check_holstein_primakoff),
            ("adiabatic elimination scaling", _check_adiabatic),
        ]
    failures = 0
    for group_name, run in groups:
        try:
            rows = run()
        except IntegrationError as exc:
            rows = [(group_name, False, f"integration failure: {exc}")]
        for name, passed, detail in rows:
            if not passed:
                failures += 1
            print(f"{'PASS' if passed else 'FAIL'}  {name:34s} {detail}")
    print(f"{failures} failure(s)" if failures else "all checks passed")
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modeswap",
        description="Microwave-optical state transfer simulator (dimensionless units of G)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file")
        p.add_argument("--protocol", choices=["double-swap", "dark-state"])
        p.add_argument("--initial", choices=["fock1", "superposition", "coherent"])
        p.add_argument("--alpha", type=float, help="coherent state amplitude")
        p.add_argument("--samples", type=int, help="number of sample points")
        p.add_argument("--lossless", action="store_true", help="zero all decay rates")
        p.add_argument(
            "--lossy-defaults",
            action="store_true",
            help="kappa1=0.003, gamma_s=0.01, kappa2=0.1 (units of G)",
        )
        p.add_argument("--dt", type=float, help="fixed integrator step (1/G)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument(
            "--unit-scale",
            type=float,
            metavar="MHZ",
            help="report physical units taking G = 2 pi x MHZ MHz",
        )

    p_run = sub.add_parser("run", help="run one protocol and write a CSV")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep the spin decay rate")
    common(p_sweep)
    p_sweep.add_argument("--parameter", default="gamma_s")
    p_sweep.add_argument("--values", help="comma-separated rates (units of G)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="run the self-check suite")
    p_val.add_argument("--quick", action="store_true", help="skip microscopic checks")
    p_val.add_argument("--dt", type=float, default=1e-3)
    p_val.set_defaults(func=cmd_validate)

    p_fig = sub.add_parser("figure-data", help="write CSVs for all reference figures")
    p_fig.add_argument("--out", default="figure-data")
    p_fig.set_defaults(func=cmd_figure_data)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
