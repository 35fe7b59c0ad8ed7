"""Random-bath averages and the equal-coupling limits.

Random baths draw ``g_n`` and ``Omega_n`` uniformly from ``[-1, 1]``. Each
sample owns a Philox stream keyed by ``(seed, sample_index)``, so the set of
models, and therefore every average, is independent of how samples are
scheduled across workers.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .capacities import (
    chi_eigenvalues,
    limited_entanglement_capacity_from_ratio,
    quantum_capacity_curve,
    quantum_capacity_from_ratio,
)
from .errors import ConfigError, DomainError
from .model import CoherenceFactor, ModelSpec, coherence_factor, ratio_abs_curve
from .numerics import von_neumann_entropy

SEED_MASK = (1 << 64) - 1


def sample_stream(seed: int, index: int) -> np.random.Generator:
    """Counter-keyed generator for sample ``index`` of a run seeded with ``seed``."""
    seq = np.random.SeedSequence([int(seed) & SEED_MASK, int(index)])
    return np.random.Generator(np.random.Philox(seq))


def sample_random_model(
    n: int, alpha: float, beta: float, rng: np.random.Generator | int, omega0: float = 0.0
) -> ModelSpec:
    """Bath of ``n`` spins with i.i.d. uniform couplings and frequencies on [-1, 1]."""
    if n < 1:
        raise DomainError("n must be at least 1")
    if not isinstance(rng, np.random.Generator):
        rng = sample_stream(rng, 0)
    g = rng.uniform(-1.0, 1.0, size=n)
    om = rng.uniform(-1.0, 1.0, size=n)
    return ModelSpec(tuple(g), tuple(om), alpha=alpha, beta=beta, omega0=omega0)


@dataclass(frozen=True)
class EnsembleConfig:
    n_bath: int
    n_samples: int
    seed: int
    beta: float
    alpha: float
    time_grid: tuple[float, ...]
    omega0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "time_grid", tuple(float(t) for t in self.time_grid))
        if self.n_bath < 1:
            raise ConfigError("n_bath must be at least 1")
        if self.n_samples < 1:
            raise ConfigError("n_samples must be at least 1")
        if len(self.time_grid) == 0 or np.any(np.diff(self.time_grid) <= 0):
            raise ConfigError("time_grid must be non-empty and strictly increasing")

    def model(self, index: int) -> ModelSpec:
        return sample_random_model(
            self.n_bath, self.alpha, self.beta, sample_stream(self.seed, index), self.omega0
        )


@dataclass(frozen=True)
class EnsembleResult:
    time_grid: np.ndarray
    mean_ratio: np.ndarray
    mean_q: np.ndarray
    mean_ce: np.ndarray
    mean_qe: np.ndarray
    seed_used: int
    mean_ce_lim: dict[float, np.ndarray] = field(default_factory=dict)
    per_sample_q: np.ndarray | None = None


def _sample_curves(cfg: EnsembleConfig, index: int, thetas: Sequence[float]):
    ratio = ratio_abs_curve(cfg.model(index), cfg.time_grid)
    q = quantum_capacity_curve(ratio)
    lim = [
        np.array([limited_entanglement_capacity_from_ratio(r, th) for r in ratio])
        for th in thetas
    ]
    return ratio, q, lim


def ensemble_average(
    cfg: EnsembleConfig,
    workers: int = 1,
    thetas: Sequence[float] = (),
    keep_samples: bool = False,
) -> EnsembleResult:
    """Pointwise mean of capacity curves over ``cfg.n_samples`` random baths.

    Capacities are averaged, not coherence factors. Results are gathered by
    sample index before reduction, so ``workers`` never changes the output.
    """
    indices = range(cfg.n_samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda i: _sample_curves(cfg, i, thetas), indices))
    else:
        results = [_sample_curves(cfg, i, thetas) for i in indices]

    ratios = np.stack([r[0] for r in results])
    qs = np.stack([r[1] for r in results])
    ces = 1.0 + qs
    lim = {
        float(th): np.stack([r[2][j] for r in results]).mean(axis=0)
        for j, th in enumerate(thetas)
    }
    return EnsembleResult(
        time_grid=np.asarray(cfg.time_grid),
        mean_ratio=ratios.mean(axis=0),
        mean_q=qs.mean(axis=0),
        mean_ce=ces.mean(axis=0),
        mean_qe=(0.5 * ces).mean(axis=0),
        seed_used=int(cfg.seed),
        mean_ce_lim=lim,
        per_sample_q=qs if keep_samples else None,
    )


def equal_coupling_coherence(
    n: int, g: float, omega: float, alpha: float, beta: float, t: float
) -> CoherenceFactor:
    """Closed form ``Pi_N = (2 cosh f)^N`` with ``f = beta*Omega/2 + 2i*alpha*t*g``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    a = 0.5 * beta * omega
    b = 2.0 * alpha * t * g
    log_cosh_a = abs(a) + math.log1p(math.exp(-2.0 * abs(a))) - math.log(2.0)
    log_z = n * (math.log(2.0) + log_cosh_a)
    # |2 cosh f|^2 = 4 (cos^2 b cosh^2 a + sin^2 b sinh^2 a)
    inner = math.cos(b) ** 2 + (math.sin(b) * math.tanh(a)) ** 2
    if inner == 0.0:
        log_abs = -math.inf
        ratio = 0.0
    else:
        log_abs = log_z + 0.5 * n * math.log(inner)
        ratio = min(inner ** (0.5 * n), 1.0)
    phase = math.remainder(n * math.atan2(math.tanh(a) * math.sin(b), math.cos(b)), 2.0 * math.pi)
    return CoherenceFactor(log_abs, phase, log_z, ratio)


def recurrence_period(g: float, alpha: float) -> float:
    """Period ``pi / (2 alpha g)`` of the equal-coupling coherence."""
    if g == 0:
        raise DomainError("g = 0 means no dephasing at all; there is no recurrence period")
    if alpha <= 0:
        raise DomainError("alpha must be positive")
    return math.pi / (2.0 * alpha * abs(g))


def low_temperature_saturation_check(
    n: int, g: float, omega: float, alpha: float, beta_large: float, time_grid
) -> float:
    """Smallest quantum capacity over ``time_grid`` for the equal-coupling bath."""
    return min(
        quantum_capacity_from_ratio(equal_coupling_coherence(n, g, omega, alpha, beta_large, t).ratio_abs)
        for t in time_grid
    )


def short_time_flatness_check(m: ModelSpec, epsilons: Sequence[float]) -> list[tuple[float, float]]:
    """Capacity deficits ``1 - Q(eps)`` at short times.

    The deficit is taken directly as the entropy of the joint state, which
    avoids the cancellation in ``1 - Q`` when ``Q`` is close to one.
    """
    out = []
    for eps in epsilons:
        r = coherence_factor(m, eps).ratio_abs
        out.append((float(eps), von_neumann_entropy(chi_eigenvalues(r))))
    return out
