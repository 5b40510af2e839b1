"""From shot histograms to energies: grouping, SPAM inversion, extrapolation.

The qubit Hamiltonians produced here contain only Z words, adjacent XX pairs
and adjacent YY pairs, so three measurement settings (all-Z, all-X, all-Y)
cover every term with qubit-wise commuting groups.  Per-term means carry
binomial uncertainties sigma = sqrt((1 - mean^2)/shots); setting results are
combined as independent (settings use disjoint shot budgets, cross-setting
covariance is ignored).

Readout is corrected by applying the tensor-product inverse of the per-qubit
confusion matrices to the empirical distribution.  The resulting
quasi-probabilities may be slightly negative and are propagated as-is:
clipping would bias the expectations.

Zero-noise extrapolation fits measured values against the noise parameter r
(weighted least squares, weights 1/sigma^2) and reports the r = 0 intercept
with the standard error from the fit covariance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuits import Gate, NativeCircuit
from .hamiltonian import PauliHamiltonian

BASIS_LABELS = ("z", "x", "y")


@dataclass(frozen=True)
class MeasurementSetting:
    """One measurement basis and the Hamiltonian terms it covers."""

    basis: str
    terms: tuple[tuple[float, str], ...]


@dataclass
class ZnePoint:
    r: int
    value: float
    sigma: float


@dataclass
class ZneSeries:
    points: list[ZnePoint] = field(default_factory=list)

    def __post_init__(self):
        rs = [p.r for p in self.points]
        if len(set(rs)) != len(rs):
            raise ValueError("duplicate r values in series")
        if any(p.r % 2 == 0 or p.r < 1 for p in self.points):
            raise ValueError("noise parameters r must be odd positive integers")


@dataclass
class ZneResult:
    intercept: float
    intercept_sigma: float
    slope: float
    kind: str
    weighted: bool = True


def _word_basis(word: str) -> str | None:
    letters = set(word) - {"I"}
    if not letters:
        return None
    if letters == {"Z"}:
        return "z"
    if letters == {"X"}:
        return "x"
    if letters == {"Y"}:
        return "y"
    return None


def measurement_settings(h: PauliHamiltonian) -> list[MeasurementSetting]:
    """Group all non-identity terms into the three single-basis settings.

    Raises if a term mixes Pauli axes; that cannot happen for Hamiltonians
    produced by the adjacent-hopping qubit mapping.
    """
    grouped: dict[str, list[tuple[float, str]]] = {b: [] for b in BASIS_LABELS}
    for coeff, word in h.terms:
        basis = _word_basis(word)
        if basis is None:
            if set(word) == {"I"}:
                continue
            raise ValueError(f"term {word!r} is not measurable in a single X/Y/Z basis")
        grouped[basis].append((coeff, word))
    return [
        MeasurementSetting(b, tuple(grouped[b])) for b in BASIS_LABELS if grouped[b]
    ]


def basis_rotation_circuit(basis: str, n_qubits: int) -> NativeCircuit:
    """Pre-measurement rotations mapping the given basis onto Z."""
    circ = NativeCircuit(n_qubits)
    if basis == "z":
        return circ
    if basis == "x":
        # RY(-pi/2)^dag Z RY(-pi/2) = X
        circ.gates = [Gate("ry", (q,), -math.pi / 2) for q in range(n_qubits)]
        return circ
    if basis == "y":
        circ.gates = [Gate("rx", (q,), math.pi / 2) for q in range(n_qubits)]
        return circ
    raise ValueError(f"unknown basis {basis!r}")


def term_expectation(counts: dict[str, float], word: str) -> tuple[float, float]:
    """Parity estimate of one Pauli word from a (quasi-)histogram.

    Returns (mean, sigma) with the binomial sigma sqrt((1 - mean^2)/shots).
    The histogram must come from the setting that covers the word.
    """
    if not counts:
        raise ValueError("empty histogram")
    support = [q for q, letter in enumerate(word) if letter != "I"]
    total = float(sum(counts.values()))
    if total <= 0:
        raise ValueError("histogram has no weight")
    if not support:
        return 1.0, 0.0
    acc = 0.0
    for bits, c in counts.items():
        parity = sum(int(bits[q]) for q in support) % 2
        acc += (-1.0 if parity else 1.0) * c
    mean = acc / total
    sigma = math.sqrt(max(0.0, 1.0 - mean * mean) / total)
    return mean, sigma


def apply_confusion(dist: dict[str, float], confusion) -> dict[str, float]:
    """Push a distribution through per-qubit confusion matrices (true -> observed)."""
    return _apply_per_qubit(dist, [np.asarray(m, dtype=float) for m in confusion])


def spam_correct(counts: dict[str, float], confusion) -> dict[str, float]:
    """Invert per-qubit readout confusion on an empirical histogram.

    Output is a quasi-histogram with the same total weight; small negative
    entries are kept.
    """
    mats = []
    for m in confusion:
        m = np.asarray(m, dtype=float)
        if abs(np.linalg.det(m)) < 1e-12:
            raise ValueError("singular confusion matrix")
        mats.append(np.linalg.inv(m))
    return _apply_per_qubit(counts, mats)


def _apply_per_qubit(counts: dict[str, float], mats: list[np.ndarray]) -> dict[str, float]:
    if not counts:
        raise ValueError("empty histogram")
    n = len(next(iter(counts)))
    if len(mats) != n:
        raise ValueError(f"need {n} per-qubit matrices, got {len(mats)}")
    t = np.zeros((2,) * n)
    for bits, c in counts.items():
        t[tuple(int(b) for b in bits)] += c
    for q in range(n):
        # contract axis q: out[..., j] = sum_i t[..., i] * m[i, j]
        t = np.moveaxis(np.moveaxis(t, q, -1) @ mats[q], -1, q)
    flat = t.reshape(-1)
    out = {}
    for idx, val in enumerate(flat):
        if val != 0.0:
            out[format(idx, f"0{n}b")] = float(val)
    return out


def energy_estimate(h: PauliHamiltonian,
                    histograms: dict[str, dict[str, float]]) -> tuple[float, float]:
    """Combine per-setting histograms into <H> with its statistical sigma."""
    settings = measurement_settings(h)
    energy = h.identity_coefficient
    variance = 0.0
    for setting in settings:
        if setting.basis not in histograms:
            raise KeyError(f"missing histogram for the {setting.basis!r} setting")
        counts = histograms[setting.basis]
        for coeff, word in setting.terms:
            mean, sigma = term_expectation(counts, word)
            energy += coeff * mean
            variance += (coeff * sigma) ** 2
    return energy, math.sqrt(variance)


def richardson_extrapolate(series: ZneSeries, kind: str = "linear",
                           weighted: bool = True) -> ZneResult:
    """Weighted polynomial fit of value against r, evaluated at r = 0.

    Falls back to an unweighted fit (flagged in the result) when any sigma
    is non-positive.
    """
    if kind not in ("linear", "quadratic"):
        raise ValueError(f"unknown fit kind {kind!r}")
    deg = 1 if kind == "linear" else 2
    pts = series.points
    if len(pts) < deg + 1:
        raise ValueError(f"{kind} fit needs at least {deg + 1} points, got {len(pts)}")
    r = np.array([p.r for p in pts], dtype=float)
    y = np.array([p.value for p in pts])
    s = np.array([p.sigma for p in pts])
    use_weights = weighted and np.all(s > 0)
    if len(pts) == deg + 1:
        # exactly determined: polyfit cannot produce a covariance estimate,
        # so propagate the point sigmas through the Vandermonde solve
        v = np.vander(r, deg + 1)
        coef = np.linalg.solve(v, y)
        vinv = np.linalg.inv(v)
        cov = vinv @ np.diag(np.where(s > 0, s, 0.0) ** 2) @ vinv.T
    elif use_weights:
        coef, cov = np.polyfit(r, y, deg, w=1.0 / s, cov="unscaled")
    else:
        coef, cov = np.polyfit(r, y, deg, cov=True)
    intercept = float(coef[-1])
    slope = float(coef[-2])
    sigma = float(np.sqrt(max(0.0, cov[-1, -1])))
    return ZneResult(intercept, sigma, slope, kind, weighted=bool(use_weights))
