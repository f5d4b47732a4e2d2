"""Angle sweeps, error distributions, random propagator ensembles, bisection.

All experiments run on spectrum-normalized Hamiltonians (spectra in
``[-1, 0]``, step ``t = 0.95*pi``) unless normalization is switched off.
Randomness is drawn from PCG64 with per-sample substreams seeded as
``(seed, sample_index)``, so parallel and sequential execution produce
identical output and reruns are byte-stable.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dense import SpectrumWindow, normalize_spectrum
from .fermions import DEFAULT_PRUNE, FermionTermList, build_fermion_hamiltonian
from .givens import GivensVector, sample_random_basis, transform_integrals
from .integrals import SpinOrbitalIntegrals, parse_fcidump, to_spin_orbitals
from .propagators import (
    OrderingSpec,
    PropagatorSpec,
    build_term_sequence,
    eta_basis_propagator,
    order_terms,
    random_permutation,
    trotter_propagator,
)

T_NORMALIZED = 0.95 * math.pi


@dataclass(frozen=True)
class ExperimentConfig:
    """Reproducible description of one ensemble experiment."""

    system: str  # FCIDUMP path
    representation: str = "fermionic"
    ordering: str = "index"  # ordering mode for fixed-ordering experiments
    normalization: bool = True
    t: float | None = None  # None => 0.95*pi normalized (or 0.95*pi/|E0|)
    samples: int = 1
    eta: int = 1
    seed: int = 0
    mode: str = "random-basis"  # random-basis | random-ordering
    count: int = 1  # propagators per random-propagator ensemble
    prune: float = DEFAULT_PRUNE
    pair: tuple[int, int] = (0, 1)
    grid_points: int = 360
    theta_lo: float = 0.0
    theta_hi: float = math.pi
    tol: float = 1e-8
    output: str | None = None

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")
        if self.representation not in ("fermionic", "qubit"):
            raise ValueError(f"unknown representation {self.representation!r}")
        if self.mode not in ("random-basis", "random-ordering"):
            raise ValueError(f"unknown sampling mode {self.mode!r}")


@dataclass(frozen=True)
class PreparedSystem:
    """Integrals plus normalization data shared by all samples of a run."""

    ints: SpinOrbitalIntegrals
    window: SpectrumWindow | None
    t: float
    prune: float

    @property
    def scale(self) -> float:
        return 1.0 if self.window is None else 1.0 / self.window.width

    @property
    def shift(self) -> float:
        return 0.0 if self.window is None else -self.window.e_max / self.window.width

    def term_list(self, theta: GivensVector | None = None) -> FermionTermList:
        ints = self.ints if theta is None or theta.is_zero() else transform_integrals(self.ints, theta)
        return build_fermion_hamiltonian(ints, prune=self.prune).scaled(self.scale, self.shift)

    def reference_matrix(self) -> np.ndarray:
        return self.term_list().to_matrix()


def prepare_system(
    ints: SpinOrbitalIntegrals,
    normalization: bool = True,
    t: float | None = None,
    prune: float = DEFAULT_PRUNE,
) -> PreparedSystem:
    """Diagonalize once for the spectrum window and the default time step.

    The window is basis-independent (the spectrum is invariant under
    orbital transformations), so it is computed once from the reference
    basis and reused for every sampled basis.
    """
    h_full = build_fermion_hamiltonian(ints, prune=prune).to_matrix()
    if normalization:
        _, window = normalize_spectrum(h_full)
        step = T_NORMALIZED if t is None else t
        return PreparedSystem(ints, window, step, prune)
    if t is None:
        constant = ints.core_energy
        e0_active = float(np.linalg.eigvalsh(h_full)[0]) - constant
        t = 0.95 * math.pi / abs(e0_active)
    return PreparedSystem(ints, None, t, prune)


def load_system(path: str, **kwargs) -> PreparedSystem:
    with open(path) as fh:
        data = parse_fcidump(fh.read())
    return prepare_system(to_spin_orbitals(data), **kwargs)


def _e0_trotter(u: np.ndarray, t: float) -> float:
    """Ground energy of the effective Hamiltonian (no eigenvectors needed).

    Eigenvalues of a normal matrix are perfectly conditioned, so the
    general eigensolver is safe here and cheaper than a Schur pass.
    """
    lams = np.linalg.eigvals(u)
    return float(np.min(-np.angle(lams) / t))


def single_basis_e0_trotter(
    prep: PreparedSystem,
    theta: GivensVector | None,
    ordering: OrderingSpec,
    representation: str = "fermionic",
    t: float | None = None,
) -> float:
    """E0 of the effective Hamiltonian for one fixed-basis Trotter product."""
    t = prep.t if t is None else t
    ints = prep.ints if theta is None or theta.is_zero() else transform_integrals(prep.ints, theta)
    terms, constant = build_term_sequence(
        ints, representation, ordering, prune=prep.prune, scale=prep.scale, shift=prep.shift
    )
    u = trotter_propagator(terms, t, prep.ints.n_spin, constant)
    return _e0_trotter(u, t)


# ---------------------------------------------------------------------------
# angle sweep (eta = 2)
# ---------------------------------------------------------------------------

def angle_sweep(
    prep: PreparedSystem,
    pair: tuple[int, int] = (0, 1),
    grid: np.ndarray | None = None,
    ordering: OrderingSpec | None = None,
    representation: str = "fermionic",
) -> list[dict]:
    """Two-constituent sweep: basis 1 fixed at zero, basis 2 swept over angles.

    Returns one row per angle with the combined eta=2 energy and both
    constituent energies (constituents evolve t/2).
    """
    ordering = ordering or OrderingSpec("index")
    grid = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False) if grid is None else grid
    m = prep.ints.n_spatial
    t = prep.t
    e0_exact = float(np.linalg.eigvalsh(prep.reference_matrix())[0])

    e_first = single_basis_e0_trotter(prep, None, ordering, representation, t=t / 2)
    rows = []
    for th in np.asarray(grid, dtype=float):
        theta2 = GivensVector.single_pair(m, pair, float(th))
        spec = PropagatorSpec(
            representation=representation,
            ordering=ordering,
            t=t,
            eta=2,
            bases=(GivensVector.zero(m), theta2),
            prune=prep.prune,
            scale=prep.scale,
            shift=prep.shift,
        )
        u_combined = eta_basis_propagator(prep.ints, spec)
        e_combined = _e0_trotter(u_combined, t)
        e_second = single_basis_e0_trotter(prep, theta2, ordering, representation, t=t / 2)
        rows.append(
            {
                "theta": float(th),
                "e0_exact": e0_exact,
                "e0_constituent_1": e_first,
                "e0_constituent_2": e_second,
                "e0_combined": e_combined,
                "delta_e0_combined": e_combined - e0_exact,
            }
        )
    return rows


# ---------------------------------------------------------------------------
# error distributions over random bases / orderings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnsembleResult:
    """Per-sample records plus distribution summary."""

    records: list[dict]
    summary: dict

    def to_json(self) -> str:
        return json.dumps({"summary": self.summary, "records": self.records}, indent=2)


def _summary(deltas: list[float]) -> dict:
    arr = np.asarray(deltas)
    return {
        "samples": int(arr.size),
        "mean_delta_e0": float(arr.mean()),
        "min_delta_e0": float(arr.min()),
        "max_delta_e0": float(arr.max()),
        "fraction_negative": float(np.mean(arr < 0.0)),
    }


def _distribution_sample(args) -> dict:
    prep, config, e0_exact, index = args
    rng = np.random.default_rng([config.seed, index])
    m = prep.ints.n_spatial
    if config.mode == "random-basis":
        theta = sample_random_basis(rng, m)
        ordering = OrderingSpec(config.ordering)
        e0_trot = single_basis_e0_trotter(prep, theta, ordering, config.representation)
        descriptor = {"theta": list(theta.angles)}
    else:
        terms, constant = build_term_sequence(
            prep.ints, config.representation, OrderingSpec("index"),
            prune=prep.prune, scale=prep.scale, shift=prep.shift,
        )
        perm = random_permutation(rng, len(terms))
        ordered = order_terms(terms, OrderingSpec("explicit", permutation=perm))
        u = trotter_propagator(ordered, prep.t, prep.ints.n_spin, constant)
        e0_trot = _e0_trotter(u, prep.t)
        descriptor = {"sigma": list(perm)}
    return {
        "index": index,
        **descriptor,
        "e0_trotter": e0_trot,
        "delta_e0": e0_trot - e0_exact,
    }


def sample_error_distribution(
    prep: PreparedSystem, config: ExperimentConfig, workers: int = 1
) -> EnsembleResult:
    """Seeded distribution of E0_Trotter over random bases or orderings."""
    e0_exact = float(np.linalg.eigvalsh(prep.reference_matrix())[0])
    tasks = [(prep, config, e0_exact, i) for i in range(config.samples)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_distribution_sample, tasks, chunksize=8))
    else:
        records = [_distribution_sample(task) for task in tasks]
    records.sort(key=lambda r: r["index"])
    return EnsembleResult(records, _summary([r["delta_e0"] for r in records]))


# ---------------------------------------------------------------------------
# random eta-propagator ensembles
# ---------------------------------------------------------------------------

def _random_propagator_sample(args) -> dict:
    prep, config, e0_exact, index = args
    rng = np.random.default_rng([config.seed, index])
    m = prep.ints.n_spatial
    n_spin = prep.ints.n_spin
    t = prep.t
    ordering = OrderingSpec(config.ordering)

    constituent_deltas = []
    if config.mode == "random-basis":
        bases = tuple(sample_random_basis(rng, m) for _ in range(config.eta))
        spec = PropagatorSpec(
            representation=config.representation, ordering=ordering, t=t, eta=config.eta,
            bases=bases, prune=prep.prune, scale=prep.scale, shift=prep.shift,
        )
        u = eta_basis_propagator(prep.ints, spec)
        for theta in bases:
            e_n = single_basis_e0_trotter(
                prep, theta, ordering, config.representation, t=t / config.eta
            )
            constituent_deltas.append(e_n - e0_exact)
        descriptor = {"thetas": [list(b.angles) for b in bases]}
    else:
        terms, constant = build_term_sequence(
            prep.ints, config.representation, OrderingSpec("index"),
            prune=prep.prune, scale=prep.scale, shift=prep.shift,
        )
        dim = 1 << n_spin
        u = np.eye(dim, dtype=complex)
        sigmas = []
        for _ in range(config.eta):
            perm = random_permutation(rng, len(terms))
            sigmas.append(perm)
            ordered = order_terms(terms, OrderingSpec("explicit", permutation=perm))
            u_n = trotter_propagator(ordered, t / config.eta, n_spin, constant)
            constituent_deltas.append(_e0_trotter(u_n, t / config.eta) - e0_exact)
            u = u_n @ u
        descriptor = {"sigmas": [list(s) for s in sigmas]}

    e0_combined = _e0_trotter(u, t)
    abs_con = np.abs(np.asarray(constituent_deltas))
    return {
        "index": index,
        **descriptor,
        "e0_trotter": e0_combined,
        "delta_e0": e0_combined - e0_exact,
        "constituent_abs_max": float(abs_con.max()),
        "constituent_abs_mean": float(abs_con.mean()),
        "constituent_abs_min": float(abs_con.min()),
    }


def random_propagator_ensemble(
    prep: PreparedSystem, config: ExperimentConfig, workers: int = 1
) -> EnsembleResult:
    """Ensemble of eta-step randomized propagators with constituent statistics."""
    e0_exact = float(np.linalg.eigvalsh(prep.reference_matrix())[0])
    tasks = [(prep, config, e0_exact, i) for i in range(config.count)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_random_propagator_sample, tasks, chunksize=1))
    else:
        records = [_random_propagator_sample(task) for task in tasks]
    records.sort(key=lambda r: r["index"])
    deltas = [r["delta_e0"] for r in records]
    summary = _summary(deltas)
    summary["magnification_fraction"] = float(
        np.mean([abs(r["delta_e0"]) > r["constituent_abs_mean"] for r in records])
    )
    return EnsembleResult(records, summary)


# ---------------------------------------------------------------------------
# bisection for an error-free basis
# ---------------------------------------------------------------------------

class BracketError(ValueError):
    """The endpoints do not bracket a sign change."""


class ConvergenceError(RuntimeError):
    """Bisection hit the iteration cap; carries the best angle found."""

    def __init__(self, message: str, best_theta: float, best_delta: float):
        super().__init__(message)
        self.best_theta = best_theta
        self.best_delta = best_delta


def bisect_error_free_basis(
    prep: PreparedSystem,
    pair: tuple[int, int],
    theta_lo: float,
    theta_hi: float,
    tol: float = 1e-8,
    max_iter: int = 200,
    ordering: OrderingSpec | None = None,
    representation: str = "fermionic",
) -> tuple[float, float, int]:
    """Bisect the single-angle path to a basis with vanishing Trotter error.

    Returns ``(theta_star, delta_e0(theta_star), iterations)``.
    """
    ordering = ordering or OrderingSpec("index")
    m = prep.ints.n_spatial
    e0_exact = float(np.linalg.eigvalsh(prep.reference_matrix())[0])

    def delta(th: float) -> float:
        theta = GivensVector.single_pair(m, pair, th)
        return single_basis_e0_trotter(prep, theta, ordering, representation) - e0_exact

    f_lo, f_hi = delta(theta_lo), delta(theta_hi)
    if math.copysign(1.0, f_lo) == math.copysign(1.0, f_hi):
        raise BracketError(
            f"no sign change on [{theta_lo}, {theta_hi}]: "
            f"delta_e0 = {f_lo:.3e} and {f_hi:.3e}"
        )
    best_theta, best_delta = (theta_lo, f_lo) if abs(f_lo) < abs(f_hi) else (theta_hi, f_hi)
    for iteration in range(1, max_iter + 1):
        mid = 0.5 * (theta_lo + theta_hi)
        f_mid = delta(mid)
        if abs(f_mid) < abs(best_delta):
            best_theta, best_delta = mid, f_mid
        if abs(f_mid) < tol:
            return mid, f_mid, iteration
        if math.copysign(1.0, f_mid) == math.copysign(1.0, f_lo):
            theta_lo, f_lo = mid, f_mid
        else:
            theta_hi, f_hi = mid, f_mid
    raise ConvergenceError(
        f"bisection did not reach |delta_e0| < {tol} in {max_iter} iterations",
        best_theta, best_delta,
    )


# ---------------------------------------------------------------------------
# CSV output
# ---------------------------------------------------------------------------

def format_float(x: float) -> str:
    return format(float(x), ".17g")


def records_to_csv(records: list[dict]) -> str:
    """Render ensemble records as CSV, full double precision, stable order."""
    if not records:
        return ""
    lines = []
    header: list[str] = []
    for key in records[0]:
        if key in ("theta", "thetas", "sigma", "sigmas"):
            if key == "theta":
                header.extend(f"theta_{i}" for i in range(len(records[0]["theta"])))
            else:
                header.append(key)
        else:
            header.append(key)
    lines.append(",".join(header))
    for rec in records:
        cells = []
        for key in records[0]:
            value = rec[key]
            if key == "theta":
                cells.extend(format_float(v) for v in value)
            elif key == "thetas":
                cells.append('"' + ";".join(",".join(format_float(v) for v in b) for b in value) + '"')
            elif key == "sigma":
                cells.append("-".join(str(int(v)) for v in value))
            elif key == "sigmas":
                cells.append('"' + ";".join("-".join(str(int(v)) for v in s) for s in value) + '"')
            elif isinstance(value, float):
                cells.append(format_float(value))
            else:
                cells.append(str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def sweep_to_csv(rows: list[dict]) -> str:
    if not rows:
        return ""
    header = list(rows[0])
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            format_float(v) if isinstance(v, float) else str(v) for v in row.values()
        ))
    return "\n".join(lines) + "\n"
