"""Capacities of the spin-star dephasing channel.

Every capacity depends on the model only through ``r = |Pi_N|/Z``:

* classical capacity ``C = 1`` (the computational basis is untouched),
* quantum capacity ``Q = 1 - h((1 + r)/2)`` with ``h`` the binary entropy,
* entanglement-assisted ``C_E = 1 + Q`` and ``Q_E = C_E / 2``,
* limited-entanglement ``C_E^lim(theta)`` for the four-state Bell-like
  ensemble with angle ``theta`` in ``[0, pi/4]``.

The ``*_from_ratio`` functions are the primitives; the ``(model, t)``
wrappers evaluate the coherence factor first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError
from .model import (
    BELL_PHI,
    KrausSet,
    ModelSpec,
    apply_channel,
    apply_channel_to_reference,
    coherence_factor,
    joint_state,
)
from .numerics import Spectrum, binary_entropy, matrix_entropy, von_neumann_entropy

QUARTER_PI = math.pi / 4.0
ANGLE_ATOL = 1e-12
RATIO_ATOL = 1e-12
CLAMP_ATOL = 1e-12


def _clamp(x: float, lo: float, hi: float) -> float:
    """Clip roundoff-sized excursions; larger ones are real errors."""
    if x < lo - CLAMP_ATOL or x > hi + CLAMP_ATOL:
        raise ArithmeticError(f"value {x!r} outside [{lo}, {hi}] beyond roundoff")
    return min(max(x, lo), hi)


def _check_ratio(ratio_abs: float) -> float:
    if not (-RATIO_ATOL <= ratio_abs <= 1.0 + RATIO_ATOL):
        raise ArithmeticError(f"|Pi_N|/Z = {ratio_abs!r} outside [0, 1]")
    return min(max(float(ratio_abs), 0.0), 1.0)


def _check_theta(theta: float) -> float:
    if not (-ANGLE_ATOL <= theta <= QUARTER_PI + ANGLE_ATOL):
        raise DomainError(f"theta = {theta!r} outside [0, pi/4]")
    return min(max(float(theta), 0.0), QUARTER_PI)


def classical_capacity() -> float:
    """Bits per use; a dephasing channel sends its preferred basis noiselessly."""
    return 1.0


def chi_eigenvalues(cf) -> Spectrum:
    """Spectrum ``[(1+r)/2, (1-r)/2, 0, 0]`` of the system-reference state.

    Accepts a :class:`~spinstar.model.CoherenceFactor` or a bare ratio.
    """
    r = _check_ratio(getattr(cf, "ratio_abs", cf))
    return Spectrum((0.5 * (1.0 + r), 0.5 * (1.0 - r), 0.0, 0.0))


def quantum_capacity_from_ratio(ratio_abs: float) -> float:
    chi = chi_eigenvalues(ratio_abs)
    return _clamp(1.0 - von_neumann_entropy(chi), 0.0, 1.0)


def quantum_capacity(m: ModelSpec, t: float) -> float:
    """Quantum capacity Q(t) in qubits per channel use."""
    return quantum_capacity_from_ratio(coherence_factor(m, t).ratio_abs)


def entanglement_assisted_classical(m: ModelSpec, t: float) -> float:
    """C_E = 1 + Q, bits per use."""
    return 1.0 + quantum_capacity(m, t)


def entanglement_assisted_quantum(m: ModelSpec, t: float) -> float:
    """Q_E = C_E / 2, qubits per use."""
    return 0.5 * entanglement_assisted_classical(m, t)


def omega_eigenvalues(ratio_abs: float, theta: float) -> Spectrum:
    """Spectrum of the channel output on ``cos(theta)|00> + sin(theta)|11>``."""
    r = _check_ratio(ratio_abs)
    theta = _check_theta(theta)
    off = math.sin(2.0 * theta) * r
    radius = min(math.sqrt(off * off + math.cos(2.0 * theta) ** 2), 1.0)
    return Spectrum((0.5 * (1.0 + radius), 0.5 * (1.0 - radius), 0.0, 0.0))


def entanglement_cost(theta: float) -> float:
    """Ebits per use consumed by the ensemble at angle ``theta``."""
    theta = _check_theta(theta)
    return binary_entropy(math.cos(theta) ** 2)


def limited_entanglement_capacity_from_ratio(ratio_abs: float, theta: float) -> float:
    theta = _check_theta(theta)
    value = entanglement_cost(theta) + 1.0 - von_neumann_entropy(omega_eigenvalues(ratio_abs, theta))
    return _clamp(value, 1.0, 2.0)


def limited_entanglement_capacity(m: ModelSpec, t: float, theta: float) -> float:
    """Classical capacity assisted by the entanglement of the theta-ensemble."""
    return limited_entanglement_capacity_from_ratio(coherence_factor(m, t).ratio_abs, theta)


def theta_from_budget(p_ebits: float, tol: float = 1e-12) -> float:
    """Angle whose entanglement cost equals ``p_ebits``; budgets above 1 saturate at pi/4."""
    if not math.isfinite(p_ebits) or p_ebits < 0:
        raise DomainError(f"entanglement budget must be non-negative, got {p_ebits!r}")
    if p_ebits >= 1.0:
        return QUARTER_PI
    lo, hi = 0.0, QUARTER_PI
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if entanglement_cost(mid) < p_ebits:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class AppendixTerms:
    term1: float
    term2: float
    term3: float

    @property
    def total(self) -> float:
        return self.term1 + self.term2 - self.term3


def _check_angles(*angles: float) -> None:
    for a in angles:
        _check_theta(a)


def ensemble_probabilities(x1: float, x2: float) -> np.ndarray:
    c1, s1 = math.cos(x1) ** 2, math.sin(x1) ** 2
    c2, s2 = math.cos(x2) ** 2, math.sin(x2) ** 2
    return np.array([c1 * c2, s1 * c2, c1 * s2, s1 * s2])


def appendix_terms_from_ratio(ratio_abs: float, theta: float, x1: float, x2: float) -> AppendixTerms:
    """The three mutual-information terms for the weighted four-state ensemble.

    ``term1`` is the mean input entropy, ``term2`` the entropy of the
    averaged output and ``term3`` the mean entropy of the joint outputs;
    the capacity candidate is ``term1 + term2 - term3``.
    """
    _check_angles(theta, x1, x2)
    probs = ensemble_probabilities(x1, x2)
    cost = entanglement_cost(theta)
    term1 = math.fsum(probs * cost)
    c, s = math.cos(theta) ** 2, math.sin(theta) ** 2
    upsilon1 = c * math.cos(x1) ** 2 + s * math.sin(x1) ** 2
    term2 = binary_entropy(upsilon1)
    joint = von_neumann_entropy(omega_eigenvalues(ratio_abs, theta))
    term3 = math.fsum(probs * joint)
    return AppendixTerms(term1, term2, term3)


def appendix_cross_check(m: ModelSpec, t: float, theta: float, x1: float, x2: float) -> AppendixTerms:
    return appendix_terms_from_ratio(coherence_factor(m, t).ratio_abs, theta, x1, x2)


def ansatz_states(theta: float) -> np.ndarray:
    """The four shared two-qubit states as rows, basis order |00>,|01>,|10>,|11>."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array(
        [
            [c, 0.0, 0.0, s],
            [s, 0.0, 0.0, -c],
            [0.0, c, s, 0.0],
            [0.0, s, -c, 0.0],
        ]
    )


def _reduced_first(psi: np.ndarray) -> np.ndarray:
    a = psi.reshape(2, 2)
    return a @ a.conj().T


def appendix_terms_numeric(k: KrausSet, theta: float, x1: float, x2: float) -> AppendixTerms:
    """Oracle for :func:`appendix_terms_from_ratio` using explicit matrices.

    Builds every input state, pushes it through the Kraus operators and takes
    entropies with the Jacobi eigensolver.
    """
    _check_angles(theta, x1, x2)
    probs = ensemble_probabilities(x1, x2)
    states = ansatz_states(theta)
    inputs = [_reduced_first(psi) for psi in states]
    term1 = math.fsum(p * matrix_entropy(rho) for p, rho in zip(probs, inputs))
    mixture = sum(p * rho for p, rho in zip(probs, inputs))
    term2 = matrix_entropy(apply_channel(k, mixture))
    term3 = math.fsum(
        p * matrix_entropy(apply_channel_to_reference(k, psi)) for p, psi in zip(probs, states)
    )
    return AppendixTerms(term1, term2, term3)


def quantum_capacity_numeric(m: ModelSpec, t: float, k: KrausSet | None = None) -> float:
    """``S[E(I/2)] - S[rho_SR]`` computed entirely from explicit matrices."""
    if k is None:
        rho_sr = joint_state(m, t)
        out = np.eye(2) / 2
    else:
        rho_sr = apply_channel_to_reference(k, BELL_PHI)
        out = apply_channel(k, np.eye(2) / 2)
    return matrix_entropy(out) - matrix_entropy(rho_sr)


@dataclass(frozen=True)
class CapacityPoint:
    t: float
    ratio_abs: float
    q: float
    c_e: float
    q_e: float
    c_classical: float = 1.0
    c_e_lim: tuple[tuple[float, float], ...] = field(default=())

    def as_row(self) -> dict[str, float]:
        row = {
            "t": self.t,
            "ratio_abs": self.ratio_abs,
            "Q": self.q,
            "C_E": self.c_e,
            "Q_E": self.q_e,
            "C": self.c_classical,
        }
        for theta, value in self.c_e_lim:
            row[f"C_E_lim@{theta:.12g}"] = value
        return row


def capacity_point_from_ratio(t: float, ratio_abs: float, thetas: Sequence[float] = ()) -> CapacityPoint:
    q = quantum_capacity_from_ratio(ratio_abs)
    c_e = 1.0 + q
    lim = tuple((float(th), limited_entanglement_capacity_from_ratio(ratio_abs, th)) for th in thetas)
    return CapacityPoint(float(t), float(ratio_abs), q, c_e, 0.5 * c_e, classical_capacity(), lim)


def capacity_point(m: ModelSpec, t: float, thetas: Sequence[float] = ()) -> CapacityPoint:
    return capacity_point_from_ratio(t, coherence_factor(m, t).ratio_abs, thetas)


def quantum_capacity_curve(ratios) -> np.ndarray:
    """Vectorised Q over an array of ratios; matches :func:`quantum_capacity_from_ratio`."""
    r = np.clip(np.asarray(ratios, dtype=float), 0.0, 1.0)
    hi = 0.5 * (1.0 + r)
    lo = 0.5 * (1.0 - r)
    with np.errstate(divide="ignore", invalid="ignore"):
        ent = -np.where(hi > 1e-15, hi * np.log2(hi), 0.0) - np.where(lo > 1e-15, lo * np.log2(lo), 0.0)
    return np.clip(1.0 - np.maximum(ent, 0.0), 0.0, 1.0)
