"""End-to-end runs: noisy ZNE pipeline, parameter optimization, scans, reports.

One evaluation of the pipeline at fixed parameters means: build the ansatz
circuit, lower it to native gates, fold it at each requested level, collect
per-setting shot histograms with a fresh noise trajectory per shot, invert
readout confusion, form the energy with binomial errors, and extrapolate the
(r, energy) series to r = 0.  With ``shots = 0`` every sampling stage is
replaced by exact expectation values on the ideal statevector, and the
pipeline reproduces the analytic ansatz energy.

Seed discipline: each (fold level, measurement basis) pair gets an
independent child seed derived as SeedSequence([seed, m, basis_index]), so
runs replay bit-exactly and are insensitive to evaluation order.

The parameter search is Nelder-Mead.  Shot noise makes the objective
stochastic, so the simplex re-evaluates all vertices after a shrink step
(stale low values otherwise pin the simplex) and the returned optimum is the
best value actually observed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .ansatz import (
    AngleConvention,
    HypersphericalParams,
    RESOLVED_CONVENTION,
    build_ansatz_circuit,
    energy_expectation_exact,
    optimal_parameters,
)
from .circuits import NativeCircuit
from .compiler import optimize_native, transpile
from .estimator import (
    ZnePoint,
    ZneResult,
    ZneSeries,
    basis_rotation_circuit,
    energy_estimate,
    measurement_settings,
    richardson_extrapolate,
    spam_correct,
    term_expectation,
)
from .hamiltonian import (
    DEFAULT_HBAR_OMEGA,
    DEFAULT_V0,
    EftConfig,
    OscillatorHamiltonian,
    PauliHamiltonian,
    build_oscillator_hamiltonian,
    exact_ground_energy,
    jordan_wigner,
)
from .refdata import EXACT_BINDING_ENERGY, PLATFORM_RESULTS
from .simulator import (
    DEFAULT_SHOTS,
    FoldSpec,
    NoiseModel,
    Statevector,
    fold_circuit,
    run_ideal,
    sample_shots_noisy,
    zero_state,
)


class ConcaveFitError(RuntimeError):
    """Quadratic landscape fit came out concave; no minimum to report."""


@dataclass
class RunConfig:
    """Everything needed to replay a pipeline run bit-exactly."""

    n_states: int
    lambdas: tuple[float, ...] | None = None  # None -> optimize
    shots: int = DEFAULT_SHOTS                # 0 -> exact expectations
    fold_levels: tuple[int, ...] = (0, 1, 2, 3)
    noise: NoiseModel | None = None
    seed: int = 0
    fit: str = "linear"
    weighted: bool = True
    per_term: bool = False
    convention: AngleConvention = RESOLVED_CONVENTION
    hbar_omega: float = DEFAULT_HBAR_OMEGA
    v0: float = DEFAULT_V0
    max_evals: int = 200

    def __post_init__(self):
        if self.n_states < 2:
            raise ValueError("pipeline runs need n_states >= 2")
        if not self.fold_levels or any(m < 0 for m in self.fold_levels):
            raise ValueError("fold levels must be a non-empty list of m >= 0")
        if self.shots < 0:
            raise ValueError("shots must be >= 0 (0 selects exact mode)")
        if self.noise is None:
            self.noise = NoiseModel.ion_defaults(self.n_states)

    def eft(self) -> EftConfig:
        return EftConfig(self.n_states, self.hbar_omega, self.v0)


@dataclass
class EvalRecord:
    """Trace of one objective evaluation: parameters, series, intercept."""

    lambdas: tuple[float, ...]
    series: list[tuple[int, float, float]]
    intercept: float
    intercept_sigma: float


@dataclass
class VqeRunResult:
    params: HypersphericalParams
    zne: ZneResult
    trace: list[EvalRecord]
    converged: bool = True


def _child_seed(seed: int, m: int, basis_index: int) -> int:
    return int(np.random.SeedSequence([seed, m, basis_index]).generate_state(1)[0])


def _exact_word_expectation(state: Statevector, word: str) -> float:
    amps = state.amplitudes.reshape((2,) * state.n_qubits)
    mats = {
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]]),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    t = amps
    for q, letter in enumerate(word):
        if letter == "I":
            continue
        t = np.moveaxis(np.moveaxis(t, q, -1) @ mats[letter].T, -1, q)
    return float(np.real(np.vdot(amps, t)))


def prepared_native_circuit(cfg: RunConfig, params: HypersphericalParams) -> NativeCircuit:
    logical = build_ansatz_circuit(cfg.n_states, params, cfg.convention)
    return optimize_native(transpile(logical))


def zne_energy(cfg: RunConfig, params: HypersphericalParams,
               h: OscillatorHamiltonian | None = None,
               pauli: PauliHamiltonian | None = None,
               count_records: list[dict] | None = None) -> tuple[ZneSeries, ZneResult]:
    """Full extrapolated energy estimate at fixed parameters.

    Pass a list as `count_records` to capture one record per (r, setting)
    with the raw histogram and its derived seed.
    """
    if h is None:
        h = build_oscillator_hamiltonian(cfg.eft())
    if pauli is None:
        pauli = jordan_wigner(h)
    native = prepared_native_circuit(cfg, params)

    if cfg.shots == 0:
        state = run_ideal(native, zero_state(cfg.n_states))
        energy = pauli.identity_coefficient + sum(
            c * _exact_word_expectation(state, w)
            for c, w in pauli.terms if set(w) != {"I"}
        )
        points = [ZnePoint(2 * m + 1, energy, 0.0) for m in sorted(set(cfg.fold_levels))]
        series = ZneSeries(points)
        if len(points) == 1:
            return series, ZneResult(energy, 0.0, 0.0, cfg.fit, weighted=False)
        return series, richardson_extrapolate(series, cfg.fit, cfg.weighted)

    settings = measurement_settings(pauli)
    points = []
    per_term_series: dict[str, list[tuple[int, float, float]]] = {}
    for m in sorted(set(cfg.fold_levels)):
        folded = fold_circuit(native, FoldSpec(m))
        histograms = {}
        for bidx, setting in enumerate(settings):
            rotations = basis_rotation_circuit(setting.basis, cfg.n_states)
            child = _child_seed(cfg.seed, m, bidx)
            counts = sample_shots_noisy(folded, rotations, cfg.shots, cfg.noise, child)
            if count_records is not None:
                count_records.append({
                    "lambdas": list(params.lambdas), "r": 2 * m + 1,
                    "setting": setting.basis, "shots": cfg.shots,
                    "seed": child, "counts": dict(counts),
                })
            if cfg.noise.readout:
                counts = spam_correct(counts, cfg.noise.readout)
            histograms[setting.basis] = counts
        energy, sigma = energy_estimate(pauli, histograms)
        points.append(ZnePoint(2 * m + 1, energy, sigma))
        if cfg.per_term:
            for setting in settings:
                for coeff, word in setting.terms:
                    mean, tsig = term_expectation(histograms[setting.basis], word)
                    per_term_series.setdefault(word, []).append((2 * m + 1, mean, tsig))
    series = ZneSeries(points)

    if cfg.per_term:
        return series, _per_term_result(cfg, pauli, per_term_series)
    return series, richardson_extrapolate(series, cfg.fit, cfg.weighted)


def _per_term_result(cfg: RunConfig, pauli: PauliHamiltonian,
                     per_term: dict[str, list[tuple[int, float, float]]]) -> ZneResult:
    """Extrapolate each Hamiltonian term separately, then recombine."""
    energy = pauli.identity_coefficient
    variance = 0.0
    slope = 0.0
    for coeff, word in pauli.terms:
        if word not in per_term:
            continue
        pts = ZneSeries([ZnePoint(r, v, s) for r, v, s in per_term[word]])
        res = richardson_extrapolate(pts, cfg.fit, cfg.weighted)
        energy += coeff * res.intercept
        variance += (coeff * res.intercept_sigma) ** 2
        slope += coeff * res.slope
    return ZneResult(energy, math.sqrt(variance), slope, cfg.fit, weighted=cfg.weighted)


def nelder_mead(f, x0: np.ndarray, step: float = 0.3, max_evals: int = 200,
                ftol: float = 1e-8, stochastic: bool = False):
    """Compact Nelder-Mead with resample-on-shrink for stochastic objectives.

    Tracks and returns the best (x, f) ever observed rather than trusting the
    final simplex, which matters when evaluations are noisy.  The budget is
    soft: an in-flight simplex update may overshoot `max_evals` by a few
    calls.  Returns (x_best, f_best, n_evals, converged).
    """
    n = len(x0)
    evals = 0
    best = [None, math.inf]

    def call(x):
        nonlocal evals
        evals += 1
        v = f(np.asarray(x, dtype=float))
        if v < best[1]:
            best[0], best[1] = np.array(x, dtype=float), v
        return v

    simplex = [np.array(x0, dtype=float)]
    for i in range(n):
        p = np.array(x0, dtype=float)
        p[i] += step
        simplex.append(p)
    fvals = [call(p) for p in simplex]

    converged = False
    while evals < max_evals:
        order = np.argsort(fvals)
        simplex = [simplex[i] for i in order]
        fvals = [fvals[i] for i in order]
        if abs(fvals[-1] - fvals[0]) < ftol:
            converged = True
            break
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = call(xr)
        if fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = call(xe)
            simplex[-1], fvals[-1] = (xe, fe) if fe < fr else (xr, fr)
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = call(xc)
            if fc < fvals[-1]:
                simplex[-1], fvals[-1] = xc, fc
            else:
                # shrink toward the best vertex; with a noisy objective the
                # retained vertex values are stale, so resample everything
                simplex = [simplex[0]] + [simplex[0] + 0.5 * (p - simplex[0]) for p in simplex[1:]]
                if stochastic:
                    fvals = [call(p) for p in simplex]
                else:
                    fvals = [fvals[0]] + [call(p) for p in simplex[1:]]
    return best[0], best[1], evals, converged


def vqe_run(cfg: RunConfig) -> VqeRunResult:
    """Evaluate or optimize the extrapolated energy, with a full trace."""
    h = build_oscillator_hamiltonian(cfg.eft())
    pauli = jordan_wigner(h)
    trace: list[EvalRecord] = []

    def evaluate(lambdas) -> ZneResult:
        params = HypersphericalParams(tuple(float(v) for v in lambdas))
        series, result = zne_energy(cfg, params, h, pauli)
        trace.append(EvalRecord(params.lambdas,
                                [(p.r, p.value, p.sigma) for p in series.points],
                                result.intercept, result.intercept_sigma))
        return result

    if cfg.lambdas is not None:
        result = evaluate(cfg.lambdas)
        return VqeRunResult(HypersphericalParams(tuple(cfg.lambdas)), result, trace)

    # start from the analytic optimum; in exact mode this converges in a few
    # steps, in noisy mode it keeps the search in the physical basin
    start, _ = optimal_parameters(h, cfg.convention)
    x0 = np.array(start.lambdas)

    def objective(x):
        return evaluate(x).intercept

    x_best, _, evals, converged = nelder_mead(
        objective, x0, step=0.25, max_evals=cfg.max_evals,
        ftol=1e-8 if cfg.shots == 0 else 1e-4, stochastic=cfg.shots > 0)
    result = evaluate(x_best)
    return VqeRunResult(HypersphericalParams(tuple(float(v) for v in x_best)),
                        result, trace, converged=converged)


@dataclass(frozen=True)
class ScanSpec:
    """Vary one parameter over a value list, holding the others fixed."""

    index: int
    values: tuple[float, ...]
    fixed: tuple[float, ...]

    def __post_init__(self):
        if not 0 <= self.index < len(self.fixed):
            raise ValueError(f"varied index {self.index} out of range for {len(self.fixed)} parameters")
        if not self.values:
            raise ValueError("empty value list")

    def row_params(self, value: float) -> tuple[float, ...]:
        lam = list(self.fixed)
        lam[self.index] = value
        return tuple(lam)


@dataclass
class ScanRow:
    lambdas: tuple[float, ...]
    zne: ZneResult
    theory: float


def landscape_scan(cfg: RunConfig, spec: ScanSpec) -> list[ScanRow]:
    """One full pipeline run per value; theory column from the exact ansatz."""
    if len(spec.fixed) != cfg.n_states - 1:
        raise ValueError("scan parameter count does not match n_states")
    h = build_oscillator_hamiltonian(cfg.eft())
    pauli = jordan_wigner(h)
    rows = []
    for i, value in enumerate(spec.values):
        lambdas = spec.row_params(value)
        params = HypersphericalParams(lambdas)
        # distinct, replayable shot streams per row (104729 tags the scan stream)
        row_cfg = replace(cfg, lambdas=lambdas, seed=_child_seed(cfg.seed, 104729, i))
        _, result = zne_energy(row_cfg, params, h, pauli)
        rows.append(ScanRow(lambdas, result,
                            energy_expectation_exact(params, h, cfg.convention)))
    return rows


def fit_quadratic_minimum(points, weighted: bool = True) -> tuple[float, float, float]:
    """Weighted parabola fit; returns (min location, min energy, energy sigma).

    Raises ConcaveFitError when the leading coefficient comes out
    non-positive.
    """
    pts = list(points)
    if len(pts) < 3:
        raise ValueError(f"quadratic fit needs at least 3 points, got {len(pts)}")
    x = np.array([p[0] for p in pts], dtype=float)
    y = np.array([p[1] for p in pts], dtype=float)
    s = np.array([p[2] for p in pts], dtype=float)
    use_weights = weighted and np.all(s > 0)
    if len(pts) == 3:
        v = np.vander(x, 3)
        coef = np.linalg.solve(v, y)
        vinv = np.linalg.inv(v)
        cov = vinv @ np.diag(np.where(s > 0, s, 0.0) ** 2) @ vinv.T
    elif use_weights:
        coef, cov = np.polyfit(x, y, 2, w=1.0 / s, cov="unscaled")
    else:
        coef, cov = np.polyfit(x, y, 2, cov=True)
    a, b, c = (float(t) for t in coef)
    if a <= 0:
        raise ConcaveFitError(f"leading coefficient {a} is not positive")
    location = -b / (2 * a)
    energy = c - b * b / (4 * a)
    grad = np.array([b * b / (4 * a * a), -b / (2 * a), 1.0])
    sigma = float(np.sqrt(max(0.0, grad @ cov @ grad)))
    return location, energy, sigma


@dataclass
class ConvergenceReport:
    """Energy-versus-basis-size summary with literature reference points."""

    rows: list[dict]
    uccs_exact: dict[int, float]
    platform_results: dict
    exact_binding_energy: float
    missing: list[int]

    def csv_rows(self) -> list[tuple[str, int, float, float]]:
        out = [("this-work", r["n_states"], r["energy"], r["sigma"]) for r in self.rows]
        for platform, entries in self.platform_results.items():
            for n, e, s in entries:
                out.append((platform, n, e, s))
        for n, e in sorted(self.uccs_exact.items()):
            out.append(("uccs-exact", n, e, 0.0))
        return out


def convergence_report(results: dict[int, tuple[float, float]],
                       hbar_omega: float = DEFAULT_HBAR_OMEGA,
                       v0: float = DEFAULT_V0) -> ConvergenceReport:
    """Cross-N summary table; absent basis sizes are flagged, not fatal."""
    if not results:
        raise ValueError("need at least one result")
    rows = [{"n_states": n, "energy": e, "sigma": s}
            for n, (e, s) in sorted(results.items())]
    uccs = {
        n: exact_ground_energy(build_oscillator_hamiltonian(EftConfig(n, hbar_omega, v0)))
        for n in (2, 3, 4)
    }
    missing = [n for n in (2, 3, 4) if n not in results]
    return ConvergenceReport(rows, uccs, dict(PLATFORM_RESULTS),
                             EXACT_BINDING_ENERGY, missing)
