"""Oracle suite: every closed-form result checked against an independent route."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import capacities as cap
from .ensembles import equal_coupling_coherence, recurrence_period
from .errors import ResourceError
from .model import (
    MAX_ENUMERATION_N,
    ModelSpec,
    apply_channel,
    coherence_factor,
    coherence_factor_bruteforce,
    joint_state_bruteforce,
    kraus_set,
    partition_function,
    partition_function_bruteforce,
)
from .numerics import eigenvalues_hermitian, jacobi_eigh


# absolute resolution of Pi/Z from the literal sum at N = 20
ENUMERATION_ATOL = 1e-15


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    seconds: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28} max_err={self.max_error:.3e}  tol={self.tolerance:.0e}  ({self.seconds:.2f}s)"


def _random_model(rng: np.random.Generator, n: int) -> ModelSpec:
    return ModelSpec(
        tuple(rng.uniform(-1, 1, n)),
        tuple(rng.uniform(-1, 1, n)),
        alpha=1.0,
        beta=float(rng.choice([0.0, 1.0, 10.0])),
    )


def check_eigensolver(rng, max_n):
    err = 0.0
    for _ in range(200):
        a, d = rng.normal(size=2)
        b = complex(*rng.normal(size=2))
        m = np.array([[a, b], [b.conjugate(), d]])
        mean, rad = 0.5 * (a + d), math.sqrt(0.25 * (a - d) ** 2 + abs(b) ** 2)
        got = eigenvalues_hermitian(m).eigenvalues
        err = max(err, abs(got[0] - (mean + rad)), abs(got[1] - (mean - rad)))
    for _ in range(50):
        x = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        x = x + x.conj().T
        w, v = jacobi_eigh(x)
        err = max(err, np.linalg.norm(x - v @ np.diag(w) @ v.conj().T) / np.linalg.norm(x))
    return err


def check_partition_function(rng, max_n):
    err = 0.0
    for n in range(1, max_n + 1):
        m = _random_model(rng, n)
        z = partition_function(m)
        err = max(err, abs(z - partition_function_bruteforce(m)) / z)
    return err


def check_product_vs_enumeration(rng, max_n):
    err = 0.0
    for n in range(1, max_n + 1):
        m = _random_model(rng, n)
        for t in rng.uniform(0, 3, 10):
            a = coherence_factor(m, t)
            b = coherence_factor_bruteforce(m, t)
            # relative error, except where |Pi| << Z puts the literal sum below its resolution
            bound = abs(a.normalized) + ENUMERATION_ATOL / 1e-12
            err = max(err, abs(a.normalized - b.normalized) / bound)
    return err


def check_kraus_completeness(rng, max_n):
    err = 0.0
    for n in range(1, min(max_n, 12) + 1):
        k = kraus_set(_random_model(rng, n), rng.uniform(0, 3))
        err = max(err, abs(k.weights.sum() - 1.0), k.completeness_residual())
    return err


def check_channel_action(rng, max_n):
    err = 0.0
    for n in range(1, min(max_n, 12) + 1):
        m = _random_model(rng, n)
        t = rng.uniform(0, 3)
        k = kraus_set(m, t)
        ratio = coherence_factor(m, t).ratio_abs
        p = rng.uniform()
        c = math.sqrt(p * (1 - p)) * np.exp(1j * rng.uniform(0, 2 * math.pi))
        rho = np.array([[p, c], [np.conj(c), 1 - p]])
        out = apply_channel(k, rho).matrix
        err = max(
            err,
            abs(out[0, 0] - p),
            abs(out[1, 1] - (1 - p)),
            abs(abs(out[0, 1]) - abs(c) * ratio),
            abs(abs(k.decay_factor()) - ratio),
        )
    return err


def check_joint_spectrum(rng, max_n):
    err = 0.0
    for n in range(1, max_n + 1):
        m = _random_model(rng, n)
        t = rng.uniform(0, 3)
        numeric = eigenvalues_hermitian(joint_state_bruteforce(m, t)).eigenvalues
        analytic = cap.chi_eigenvalues(coherence_factor(m, t)).eigenvalues
        err = max(err, max(abs(x - y) for x, y in zip(numeric, analytic)))
    return err


def check_capacity_identities(rng, max_n):
    err = 0.0
    for n in range(1, max_n + 1):
        m = _random_model(rng, n)
        t = rng.uniform(0, 3)
        q = cap.quantum_capacity(m, t)
        ce = cap.entanglement_assisted_classical(m, t)
        qe = cap.entanglement_assisted_quantum(m, t)
        q_numeric = cap.quantum_capacity_numeric(m, t, kraus_set(m, t))
        err = max(err, abs(ce - 1 - q), abs(qe - ce / 2), abs(q - q_numeric))
        err = max(err, abs(cap.classical_capacity() - 1.0))
    return err


def check_limited_endpoints(rng, max_n):
    err = 0.0
    grid = np.linspace(0, cap.QUARTER_PI, 65)
    for _ in range(20):
        m = _random_model(rng, int(rng.integers(1, max_n + 1)))
        t = rng.uniform(0, 3)
        vals = [cap.limited_entanglement_capacity(m, t, th) for th in grid]
        err = max(
            err,
            abs(vals[0] - 1.0),
            abs(vals[-1] - cap.entanglement_assisted_classical(m, t)),
            max(0.0, -float(np.min(np.diff(vals)))),
        )
    return err


def check_appendix(rng, max_n):
    err = 0.0
    xs = np.linspace(0, cap.QUARTER_PI, 33)
    for _ in range(20):
        m = _random_model(rng, int(rng.integers(1, max_n + 1)))
        t, theta = rng.uniform(0, 3), rng.uniform(0, cap.QUARTER_PI)
        ratio = coherence_factor(m, t).ratio_abs
        terms = [[cap.appendix_terms_from_ratio(ratio, theta, a, b) for b in xs] for a in xs]
        totals = np.array([[tr.total for tr in row] for row in terms])
        t1 = np.array([[tr.term1 for tr in row] for row in terms])
        t3 = np.array([[tr.term3 for tr in row] for row in terms])
        best = totals[-1, -1]
        err = max(
            err,
            max(0.0, float(totals.max() - best)),
            float(np.ptp(t1)),
            float(np.ptp(t3)),
            abs(best - cap.limited_entanglement_capacity_from_ratio(ratio, theta)),
        )
        k = kraus_set(m, t)
        x1, x2 = rng.uniform(0, cap.QUARTER_PI, 2)
        a = cap.appendix_terms_from_ratio(ratio, theta, x1, x2)
        b = cap.appendix_terms_numeric(k, theta, x1, x2)
        err = max(err, abs(a.term1 - b.term1), abs(a.term2 - b.term2), abs(a.term3 - b.term3))
    return err


def check_equal_coupling(rng, max_n):
    err = 0.0
    for n in range(1, max_n + 1):
        beta = float(rng.choice([0.0, 1.0, 10.0]))
        m = ModelSpec.equal(n, 1.0, 1.0, alpha=1.0, beta=beta)
        period = recurrence_period(1.0, 1.0)
        for t in rng.uniform(0, 3, 5):
            closed = equal_coupling_coherence(n, 1.0, 1.0, 1.0, beta, t)
            general = coherence_factor(m, t)
            brute = coherence_factor_bruteforce(m, t)
            # relative against the product path; the literal sum only resolves Pi/Z to ~1e-16 absolute
            rel = abs(np.expm1((general.log_abs_pi - closed.log_abs_pi) + 1j * (general.phase - closed.phase)))
            err = max(
                err,
                rel,
                abs(closed.normalized - brute.normalized),
                abs(cap.quantum_capacity(m, t) - cap.quantum_capacity(m, t + period)),
            )
    return err


CHECKS: list[tuple[str, Callable, float]] = [
    ("eigensolver", check_eigensolver, 1e-11),
    ("partition_function", check_partition_function, 1e-12),
    ("product_vs_enumeration", check_product_vs_enumeration, 1e-12),
    ("kraus_completeness", check_kraus_completeness, 1e-12),
    ("channel_action", check_channel_action, 1e-12),
    ("joint_state_spectrum", check_joint_spectrum, 1e-10),
    ("capacity_identities", check_capacity_identities, 1e-10),
    ("limited_entanglement", check_limited_endpoints, 1e-12),
    ("appendix_argmax", check_appendix, 1e-12),
    ("equal_coupling_periodicity", check_equal_coupling, 1e-10),
]


def run_verify(max_n: int, seed: int = 0) -> list[CheckResult]:
    """Run every oracle check on baths of up to ``max_n`` spins."""
    if max_n > MAX_ENUMERATION_N:
        raise ResourceError(
            f"verify enumerates 2**N bath states; max_n={max_n} exceeds the limit of {MAX_ENUMERATION_N}"
        )
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    results = []
    for i, (name, fn, tol) in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        start = time.perf_counter()
        err = float(fn(rng, max_n))
        results.append(CheckResult(name, err, tol, time.perf_counter() - start))
    return results
