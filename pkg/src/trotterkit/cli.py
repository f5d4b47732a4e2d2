"""Command-line interface.

Subcommands:

* ``inspect``: term counts, 1-norms, exact ground energy, recommended step.
* ``error``: one exact Trotter-error evaluation (heff or acf route).
* ``estimates``: the full estimate panel (eps2, PT, alpha, bounds, f, g),
  or pairwise R^2 correlations over a directory of panel JSONs.
* ``sweep`` / ``sample`` / ``random-props`` / ``bisect``: ensemble
  experiments driven by a JSON config file.

Exit codes: 0 success, 1 numeric/convergence failure, 2 input error.
Every file-producing command writes a run manifest next to its output.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .dense import BranchCutError, DimensionError, ground_state, trotter_time_step
from .ensembles import (
    BracketError,
    ConvergenceError,
    ExperimentConfig,
    PreparedSystem,
    angle_sweep,
    bisect_error_free_basis,
    format_float,
    load_system,
    prepare_system,
    random_propagator_ensemble,
    records_to_csv,
    sample_error_distribution,
    single_basis_e0_trotter,
    sweep_to_csv,
)
from .fermions import build_fermion_hamiltonian, one_norm, term_count
from .integrals import FcidumpError, parse_fcidump, to_spin_orbitals
from .metrics import (
    acf_offset,
    alpha_bound,
    delta_e0_acf,
    delta_e0_heff,
    delta_e_pt,
    epsilon_2,
    fidelity_error,
    lambda_squared_bound,
    pearson_r2,
    wavefunction_difference,
)
from .paulis import jordan_wigner, pauli_one_norm
from .propagators import OrderingSpec, build_term_sequence, pauli_terms, trotter_propagator

EXIT_OK = 0
EXIT_NUMERIC = 1
EXIT_INPUT = 2

CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "system": {"type": "string"},
        "representation": {"enum": ["fermionic", "qubit"]},
        "ordering": {"enum": ["magnitude", "index"]},
        "normalization": {"type": "boolean"},
        "t": {"type": ["number", "null"]},
        "samples": {"type": "integer", "minimum": 1},
        "eta": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer"},
        "mode": {"enum": ["random-basis", "random-ordering"]},
        "count": {"type": "integer", "minimum": 1},
        "prune": {"type": "number", "minimum": 0},
        "pair": {
            "type": "array", "items": {"type": "integer", "minimum": 0},
            "minItems": 2, "maxItems": 2,
        },
        "grid_points": {"type": "integer", "minimum": 1},
        "theta_lo": {"type": "number"},
        "theta_hi": {"type": "number"},
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "output": {"type": "string"},
    },
    "required": ["system", "output"],
    "additionalProperties": False,
}


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_manifest(output: Path, config_text: str, input_text: str, seed: int,
                   elapsed: float, outputs: list[str]) -> Path:
    """Run manifest with a platform-stable hash over (config, input, seed)."""
    config_hash = _sha256(config_text)
    input_hash = _sha256(input_text)
    manifest_hash = _sha256(json.dumps([config_hash, input_hash, seed]))
    payload = {
        "tool_version": __version__,
        "config_hash": config_hash,
        "input_hash": input_hash,
        "seed": seed,
        "elapsed_seconds": elapsed,
        "outputs": outputs,
        "manifest_hash": manifest_hash,
    }
    path = output.with_suffix(output.suffix + ".manifest.json")
    path.write_text(json.dumps(payload, indent=2) + "\n")
    return path


def load_config(path: str) -> tuple[ExperimentConfig, str]:
    import jsonschema

    text = _read_text(path)
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FcidumpError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(raw, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValueError(f"config schema violation at {exc.json_path}: {exc.message}") from exc
    if "pair" in raw:
        raw["pair"] = tuple(raw["pair"])
    return ExperimentConfig(**raw), text


def _prepared(config: ExperimentConfig) -> tuple[PreparedSystem, str]:
    input_text = _read_text(config.system)
    ints = to_spin_orbitals(parse_fcidump(input_text))
    prep = prepare_system(ints, normalization=config.normalization,
                          t=config.t, prune=config.prune)
    return prep, input_text


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_inspect(args) -> int:
    ints = to_spin_orbitals(parse_fcidump(_read_text(args.fcidump)))
    term_list = build_fermion_hamiltonian(ints, prune=args.prune)
    psum = jordan_wigner(term_list)
    gamma_q = len(psum) - (1 if (0, 0) in psum.terms else 0)
    h = term_list.to_matrix()
    e0_total, _ = ground_state(h)
    e0_active = e0_total - term_list.constant
    report = {
        "n_spin_orbitals": ints.n_spin,
        "n_spatial_orbitals": ints.n_spatial,
        "gamma_fermionic": term_count(term_list),
        "gamma_qubit": gamma_q,
        "lambda_fermionic": one_norm(term_list),
        "lambda_qubit": pauli_one_norm(psum),
        "core_energy": ints.core_energy,
        "e0_active": e0_active,
        "e0_total": e0_total,
        "t_physical": trotter_time_step(e0_active),
        "t_normalized": 0.95 * math.pi,
    }
    print(json.dumps(report, indent=2))
    return EXIT_OK


def _single_run_setup(args):
    input_text = _read_text(args.fcidump)
    ints = to_spin_orbitals(parse_fcidump(input_text))
    prep = prepare_system(ints, normalization=args.normalize, t=args.t, prune=args.prune)
    ordering = OrderingSpec(args.order)
    terms, constant = build_term_sequence(
        ints, args.rep, ordering, prune=args.prune, scale=prep.scale, shift=prep.shift
    )
    h = prep.reference_matrix()
    return prep, terms, constant, h


def cmd_error(args) -> int:
    if args.t is not None and args.t <= 0:
        print("error: nonpositive time step", file=sys.stderr)
        return EXIT_INPUT
    prep, terms, constant, h = _single_run_setup(args)
    n = prep.ints.n_spin
    metadata = {
        "representation": args.rep,
        "ordering": args.order,
        "normalized": args.normalize,
        "system": args.fcidump,
    }
    if args.method == "heff":
        u = trotter_propagator(terms, prep.t, n, constant)
        report = delta_e0_heff(u, h, prep.t, **metadata)
    else:
        report = delta_e0_acf(h, terms, prep.t, n, constant, eps=args.eps, **metadata)
    print(report.to_json())
    return EXIT_OK


def cmd_estimates(args) -> int:
    if args.correlate:
        return _correlate(args)
    if args.fcidump is None:
        print("error: an FCIDUMP path is required unless --correlate is given",
              file=sys.stderr)
        return EXIT_INPUT
    prep, terms, constant, h = _single_run_setup(args)
    n = prep.ints.n_spin
    t = prep.t
    evals, evecs = np.linalg.eigh(h)
    psi0 = evecs[:, 0]
    u = trotter_propagator(terms, t, n, constant)
    exact = delta_e0_heff(u, h, t)
    eps2 = epsilon_2(terms, psi0, n)
    pt = delta_e_pt(terms, evals, evecs, t, n)
    alpha = alpha_bound(terms, n, t)
    f_val = fidelity_error(h, terms, t, n, constant)
    panel = {
        "system": args.fcidump,
        "representation": args.rep,
        "ordering": args.order,
        "t": t,
        "delta_e0": exact.delta_e0,
        "abs_delta_e0": abs(exact.delta_e0),
        "epsilon_2": eps2,
        "epsilon_2_t2": eps2 * t * t,
        "delta_e_pt_abs_first": pt.value_abs_first,
        "delta_e_pt_abs_last": pt.value_abs_last,
        "alpha": alpha.alpha,
        "alpha_energy_bound": alpha.energy_bound,
        "alpha_propagator_bound": alpha.propagator_bound,
        "alpha_prime": lambda_squared_bound(terms),
        "lambda_1norm": float(sum(abs(term.weight) for term in terms)),
        "gamma": len(terms),
        "fidelity_f_real": f_val.real,
        "fidelity_f_imag": f_val.imag,
        "abs_f": abs(f_val),
        "infidelity_abs_1_minus_f": abs(1.0 - f_val),
        "acf_offset_g": acf_offset(h, terms, t, n, constant),
        "wavefunction_difference": wavefunction_difference(h, terms, t, n, constant),
    }
    text = json.dumps(panel, indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return EXIT_OK


def _correlate(args) -> int:
    directory = Path(args.correlate)
    panels = []
    for path in sorted(directory.glob("*.json")):
        if path.name.endswith(".manifest.json"):
            continue
        panels.append(json.loads(path.read_text()))
    if len(panels) < 2:
        print("error: need at least two panel JSONs to correlate", file=sys.stderr)
        return EXIT_INPUT
    numeric_cols = sorted(
        k for k, v in panels[0].items()
        if isinstance(v, (int, float)) and all(isinstance(p.get(k), (int, float)) for p in panels)
    )
    table = {}
    for i, col_a in enumerate(numeric_cols):
        for col_b in numeric_cols[i:]:
            x = np.array([p[col_a] for p in panels], dtype=float)
            y = np.array([p[col_b] for p in panels], dtype=float)
            try:
                table[f"{col_a}~{col_b}"] = pearson_r2(x, y)
            except ValueError:
                continue
    print(json.dumps({"n_panels": len(panels), "r_squared": table}, indent=2))
    return EXIT_OK


def _run_experiment(args, runner) -> int:
    config, config_text = load_config(args.config)
    prep, input_text = _prepared(config)
    started = time.time()
    outputs = runner(config, prep)
    elapsed = time.time() - started
    manifest = write_manifest(
        Path(config.output), config_text, input_text, config.seed, elapsed, outputs
    )
    print(json.dumps({"outputs": outputs, "manifest": str(manifest)}, indent=2))
    return EXIT_OK


def cmd_sweep(args) -> int:
    def runner(config: ExperimentConfig, prep: PreparedSystem) -> list[str]:
        grid = np.linspace(0.0, 2.0 * math.pi, config.grid_points, endpoint=False)
        rows = angle_sweep(prep, config.pair, grid,
                           OrderingSpec(config.ordering), config.representation)
        out = Path(config.output)
        out.write_text(sweep_to_csv(rows))
        summary = {
            "rows": len(rows),
            "all_positive_delta_combined": bool(
                all(r["delta_e0_combined"] > 0 for r in rows)
            ),
        }
        summary_path = out.with_suffix(".summary.json")
        summary_path.write_text(json.dumps(summary, indent=2) + "\n")
        return [str(out), str(summary_path)]

    return _run_experiment(args, runner)


def cmd_sample(args) -> int:
    def runner(config: ExperimentConfig, prep: PreparedSystem) -> list[str]:
        result = sample_error_distribution(prep, config, workers=args.threads)
        out = Path(config.output)
        out.write_text(records_to_csv(result.records))
        summary_path = out.with_suffix(".summary.json")
        summary_path.write_text(json.dumps(result.summary, indent=2) + "\n")
        return [str(out), str(summary_path)]

    return _run_experiment(args, runner)


def cmd_random_props(args) -> int:
    def runner(config: ExperimentConfig, prep: PreparedSystem) -> list[str]:
        result = random_propagator_ensemble(prep, config, workers=args.threads)
        out = Path(config.output)
        out.write_text(records_to_csv(result.records))
        summary_path = out.with_suffix(".summary.json")
        summary_path.write_text(json.dumps(result.summary, indent=2) + "\n")
        return [str(out), str(summary_path)]

    return _run_experiment(args, runner)


def cmd_bisect(args) -> int:
    def runner(config: ExperimentConfig, prep: PreparedSystem) -> list[str]:
        theta, delta, iterations = bisect_error_free_basis(
            prep, config.pair, config.theta_lo, config.theta_hi, config.tol,
            ordering=OrderingSpec(config.ordering),
            representation=config.representation,
        )
        out = Path(config.output)
        out.write_text(json.dumps({
            "theta_star": theta,
            "delta_e0": delta,
            "iterations": iterations,
        }, indent=2) + "\n")
        return [str(out)]

    return _run_experiment(args, runner)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trotterkit",
        description="Trotter-error analysis for second-quantized Hamiltonians",
    )
    parser.add_argument("--version", action="version", version=f"trotterkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_single_run_flags(p):
        p.add_argument("fcidump", help="FCIDUMP path, or '-' for stdin")
        p.add_argument("--rep", choices=("fermionic", "qubit"), default="fermionic")
        p.add_argument("--order", choices=("magnitude", "index"), default="magnitude")
        p.add_argument("--t", type=float, default=None,
                       help="time step (default: 0.95*pi normalized / 0.95*pi/|E0|)")
        p.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
        p.add_argument("--prune", type=float, default=1e-8)

    p_inspect = sub.add_parser("inspect", help="term counts, 1-norms, E0, recommended t")
    p_inspect.add_argument("fcidump")
    p_inspect.add_argument("--prune", type=float, default=1e-8)
    p_inspect.set_defaults(func=cmd_inspect)

    p_error = sub.add_parser("error", help="single exact Trotter-error run")
    add_single_run_flags(p_error)
    p_error.add_argument("--method", choices=("heff", "acf"), default="heff")
    p_error.add_argument("--eps", type=float, default=1e-5, help="acf precision target")
    p_error.set_defaults(func=cmd_error)

    p_est = sub.add_parser("estimates", help="estimate panel or R^2 correlations")
    p_est.add_argument("fcidump", nargs="?", default=None,
                       help="FCIDUMP path, or '-' for stdin (omit with --correlate)")
    p_est.add_argument("--rep", choices=("fermionic", "qubit"), default="fermionic")
    p_est.add_argument("--order", choices=("magnitude", "index"), default="magnitude")
    p_est.add_argument("--t", type=float, default=None)
    p_est.add_argument("--normalize", action=argparse.BooleanOptionalAction, default=True)
    p_est.add_argument("--prune", type=float, default=1e-8)
    p_est.add_argument("--out", default=None, help="also write the panel JSON here")
    p_est.add_argument("--correlate", default=None, metavar="DIR",
                       help="correlate panel JSONs in DIR instead of running")
    p_est.set_defaults(func=cmd_estimates)

    for name, func in (
        ("sweep", cmd_sweep),
        ("sample", cmd_sample),
        ("random-props", cmd_random_props),
        ("bisect", cmd_bisect),
    ):
        p = sub.add_parser(name, help=f"{name} experiment from a JSON config")
        p.add_argument("config", help="ExperimentConfig JSON path")
        p.add_argument("--threads", type=int, default=1)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BranchCutError, BracketError, ConvergenceError, DimensionError,
            np.linalg.LinAlgError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FcidumpError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
