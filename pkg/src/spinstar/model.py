"""The Ising spin-star dephasing channel.

A central qubit couples to ``N`` non-interacting bath spins through
``alpha * sz (x) sum_n g_n sz_n``; the bath starts in its Gibbs state with
level splittings ``Omega_n``. The reduced dynamics is a dephasing channel
whose Kraus operators are diagonal in the computational basis, so the only
quantity that matters for capacities is the complex coherence factor

    Pi_N(t) = prod_n 2 cosh(beta*Omega_n/2 + 2i*alpha*t*g_n),

normalised by the partition function ``Z = prod_n 2 cosh(beta*Omega_n/2)``.

Two independent routes are provided: closed-form products accumulated in the
log domain (usable at N = 100 and beyond), and literal enumeration of all
``2**N`` bath configurations (N <= 20) that serves as an oracle.

The system frequency ``omega0`` is kept on :class:`ModelSpec` for
completeness; it drops out in the interaction picture and never enters any
capacity.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ResourceError
from .numerics import DENSITY_ATOL, HermitianOperator

MAX_ENUMERATION_N = 20
# log of the largest float we are willing to exponentiate
_LOG_SAFE = 700.0


@dataclass(frozen=True)
class ModelSpec:
    """Physical parameters of one spin-star channel.

    ``strict=True`` rejects couplings and frequencies outside ``[-1, 1]``;
    otherwise such values only trigger a warning.
    """

    couplings: tuple[float, ...]
    frequencies: tuple[float, ...]
    alpha: float = 1.0
    beta: float = 1.0
    omega0: float = 0.0
    strict: bool = field(default=False, compare=False)

    def __post_init__(self):
        g = tuple(float(x) for x in np.atleast_1d(self.couplings))
        om = tuple(float(x) for x in np.atleast_1d(self.frequencies))
        object.__setattr__(self, "couplings", g)
        object.__setattr__(self, "frequencies", om)
        if len(g) == 0:
            raise DomainError("a spin star needs at least one bath spin")
        if len(g) != len(om):
            raise DomainError(
                f"{len(g)} couplings but {len(om)} frequencies; lengths must match"
            )
        values = g + om + (self.alpha, self.beta, self.omega0)
        if not all(math.isfinite(v) for v in values):
            raise DomainError("model parameters must be finite")
        if not self.alpha > 0:
            raise DomainError(f"alpha must be positive, got {self.alpha!r}")
        if self.beta < 0:
            raise DomainError(f"beta must be non-negative, got {self.beta!r}")
        out_of_range = [v for v in g + om + (self.omega0,) if abs(v) > 1.0]
        if out_of_range:
            msg = f"couplings/frequencies outside [-1, 1]: {out_of_range[:4]}"
            if self.strict:
                raise DomainError(msg)
            warnings.warn(msg, stacklevel=3)

    @classmethod
    def equal(cls, n: int, g: float, omega: float, **kw) -> "ModelSpec":
        """Model with identical couplings and frequencies for all ``n`` spins."""
        if n < 1:
            raise DomainError("n must be at least 1")
        return cls((g,) * n, (omega,) * n, **kw)

    @property
    def n_bath(self) -> int:
        return len(self.couplings)

    @property
    def g(self) -> np.ndarray:
        return np.asarray(self.couplings)

    @property
    def omega(self) -> np.ndarray:
        return np.asarray(self.frequencies)

    def half_beta_omega(self) -> np.ndarray:
        return 0.5 * self.beta * self.omega

    def thermal_bias(self) -> np.ndarray:
        """Per-spin ``tanh(-beta*Omega_n/2)``, the thermal mean of ``sz_n``."""
        return np.tanh(-self.half_beta_omega())

    def global_phase_shift(self) -> float:
        """``sum_n g_n * tanh(-beta*Omega_n/2)``: the trace shift inside E~_i."""
        return float(np.dot(self.g, self.thermal_bias()))


@dataclass(frozen=True)
class CoherenceFactor:
    """Pi_N(t) and Z, stored in log form so large baths cannot overflow."""

    log_abs_pi: float
    phase: float
    log_z: float
    ratio_abs: float

    @property
    def z(self) -> float:
        if self.log_z > _LOG_SAFE:
            raise OverflowError(f"Z = exp({self.log_z}) is not representable")
        return math.exp(self.log_z)

    @property
    def pi_n(self) -> complex:
        if self.log_abs_pi > _LOG_SAFE:
            raise OverflowError(f"|Pi_N| = exp({self.log_abs_pi}) is not representable")
        return complex(math.exp(self.log_abs_pi) * np.exp(1j * self.phase))

    @property
    def normalized(self) -> complex:
        """Pi_N / Z, always representable."""
        return complex(self.ratio_abs * np.exp(1j * self.phase))


def _log_cosh(x):
    ax = np.abs(x)
    return ax + np.log1p(np.exp(-2.0 * ax)) - math.log(2.0)


def _sech(x):
    e = np.exp(-np.abs(x))
    return 2.0 * e / (1.0 + e * e)


def log_partition_function(m: ModelSpec) -> float:
    """``log Z`` with ``Z = prod_n 2 cosh(beta*Omega_n/2)``."""
    a = m.half_beta_omega()
    return float(np.sum(_log_cosh(a)) + m.n_bath * math.log(2.0))


def partition_function(m: ModelSpec) -> float:
    """Bath partition function; raises OverflowError when not representable."""
    log_z = log_partition_function(m)
    if log_z > _LOG_SAFE:
        raise OverflowError(f"Z = exp({log_z}) is not representable; use log_partition_function")
    return math.exp(log_z)


def _log_ratio(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sum over spins of ``log |cosh(a + ib)| - log cosh(a)``, along the last axis."""
    # |cosh(a + ib)|^2 / cosh(a)^2 = 1 - sin(b)^2 sech(a)^2 = tanh(a)^2 + cos(b)^2 sech(a)^2
    sech = _sech(a)
    loss = (np.sin(b) * sech) ** 2
    with np.errstate(divide="ignore"):
        small = np.log1p(-np.minimum(loss, 0.5))
        large = np.log(np.tanh(a) ** 2 + (np.cos(b) * sech) ** 2)
    return 0.5 * np.sum(np.where(loss < 0.5, small, large), axis=-1)


def ratio_abs_curve(m: ModelSpec, times) -> np.ndarray:
    """|Pi_N(t)|/Z on an array of times, vectorised over ``times``."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    a = m.half_beta_omega()[None, :]
    b = 2.0 * m.alpha * t[:, None] * m.g[None, :]
    return np.minimum(np.exp(_log_ratio(a, b)), 1.0)


def coherence_factor(m: ModelSpec, t: float) -> CoherenceFactor:
    """Product-form coherence factor at time ``t``."""
    if t < 0:
        raise DomainError("time must be non-negative")
    a = m.half_beta_omega()
    b = 2.0 * m.alpha * t * m.g
    # same (1, N) reduction as ratio_abs_curve so both agree bit for bit
    log_ratio = float(_log_ratio(a[None, :], b[None, :])[0])
    log_z = log_partition_function(m)
    # arg cosh(a + ib) = atan2(sinh a sin b, cosh a cos b)
    phase = float(np.sum(np.arctan2(np.tanh(a) * np.sin(b), np.cos(b))))
    phase = math.remainder(phase, 2.0 * math.pi)
    ratio = min(float(np.exp(log_ratio)), 1.0)
    return CoherenceFactor(log_z + log_ratio, phase, log_z, ratio)


def _bath_signs(n: int) -> np.ndarray:
    """(-1)**i_n for every bath configuration i in [0, 2**n), shape (2**n, n)."""
    idx = np.arange(2**n, dtype=np.int64)[:, None]
    bits = (idx >> np.arange(n - 1, -1, -1, dtype=np.int64)[None, :]) & 1
    return (1 - 2 * bits).astype(np.int8)


def _check_enumerable(m: ModelSpec) -> None:
    if m.n_bath > MAX_ENUMERATION_N:
        raise ResourceError(
            f"enumeration over 2**{m.n_bath} bath states refused (limit N={MAX_ENUMERATION_N})"
        )


def partition_function_bruteforce(m: ModelSpec) -> float:
    """Literal ``sum_i exp(-beta*E_i)`` over all bath configurations."""
    _check_enumerable(m)
    energies = _bath_signs(m.n_bath) @ (0.5 * m.omega)
    return math.fsum(np.exp(-m.beta * energies))


def coherence_factor_bruteforce(m: ModelSpec, t: float) -> CoherenceFactor:
    """Coherence factor from the literal sum over all ``2**N`` bath states.

    Oracle for :func:`coherence_factor`; shares no code with it. Terms are
    accumulated in extended precision because the sum cancels down to
    ``|Pi_N| << Z`` at late times.
    """
    _check_enumerable(m)
    signs = _bath_signs(m.n_bath).astype(np.longdouble)
    weights = signs @ m.half_beta_omega().astype(np.longdouble)
    phases = signs @ (2.0 * m.alpha * t * m.g).astype(np.longdouble)
    # shift by the largest exponent; restored in log form below
    w_min = weights.min()
    mag = np.exp(-(weights - w_min))
    re = np.sum(mag * np.cos(phases))
    im = -np.sum(mag * np.sin(phases))
    z = np.sum(mag)
    abs_pi = np.hypot(re, im)
    log_z = float(np.log(z) - w_min)
    log_abs = float(np.log(abs_pi) - w_min) if abs_pi > 0 else -math.inf
    ratio = min(float(abs_pi / z), 1.0)
    return CoherenceFactor(log_abs, float(np.arctan2(im, re)), log_z, ratio)


@dataclass(frozen=True)
class KrausSet:
    """Diagonal Kraus operators ``sqrt(l_i) exp(-i*alpha*t*E~_i*sz)``."""

    weights: np.ndarray
    phase_energies: np.ndarray
    alpha_t: float

    def __len__(self):
        return len(self.weights)

    def matrices(self) -> np.ndarray:
        """All operators as an array of shape (2**N, 2, 2)."""
        ph = np.exp(-1j * self.alpha_t * self.phase_energies)
        k = np.zeros((len(self.weights), 2, 2), dtype=complex)
        amp = np.sqrt(self.weights)
        k[:, 0, 0] = amp * ph
        k[:, 1, 1] = amp * np.conj(ph)
        return k

    def completeness_residual(self) -> float:
        """Frobenius norm of ``sum K^H K - I``."""
        k = self.matrices()
        total = np.einsum("kji,kjl->il", k.conj(), k)
        return float(np.linalg.norm(total - np.eye(2)))

    def decay_factor(self) -> complex:
        """Multiplier of the off-diagonal element: ``sum_i l_i exp(-2i*alpha*t*E~_i)``."""
        ph = -2.0 * self.alpha_t * self.phase_energies
        re = math.fsum(self.weights * np.cos(ph))
        im = math.fsum(self.weights * np.sin(ph))
        return complex(re, im)


def kraus_set(m: ModelSpec, t: float) -> KrausSet:
    """Enumerate the ``2**N`` Kraus operators at time ``t``."""
    _check_enumerable(m)
    signs = _bath_signs(m.n_bath)
    energies = signs @ (0.5 * m.omega)
    boltz = np.exp(-m.beta * (energies - energies.min()))
    weights = boltz / math.fsum(boltz)
    phase_energies = (signs - m.thermal_bias()[None, :]) @ m.g
    return KrausSet(weights, phase_energies, m.alpha * t)


def _as_density(rho, dim: int) -> np.ndarray:
    op = rho if isinstance(rho, HermitianOperator) else HermitianOperator(rho)
    if op.dim != dim:
        raise DomainError(f"expected a {dim}x{dim} density matrix, got {op.dim}x{op.dim}")
    if not op.is_density_matrix():
        raise DomainError("input is not a valid density matrix")
    return op.matrix


def _kraus_sum(ks: np.ndarray, r: np.ndarray) -> HermitianOperator:
    # compensated sum over operators keeps populations exact to roundoff for 2**20 terms
    terms = np.einsum("kij,jl,kml->kim", ks, r, ks.conj())
    dim = r.shape[0]
    out = np.empty((dim, dim), dtype=complex)
    for i in range(dim):
        for j in range(dim):
            col = terms[:, i, j]
            out[i, j] = complex(math.fsum(col.real), math.fsum(col.imag))
    return HermitianOperator(0.5 * (out + out.conj().T))


def apply_channel(k: KrausSet, rho) -> HermitianOperator:
    """``sum_i K_i rho K_i^H`` for a single-qubit density matrix."""
    return _kraus_sum(k.matrices(), _as_density(rho, 2))


def apply_channel_to_reference(k: KrausSet, psi) -> HermitianOperator:
    """``(E (x) I)(|psi><psi|)`` for a two-qubit pure state, channel on qubit 1."""
    v = np.asarray(psi, dtype=complex).reshape(4)
    v = v / np.linalg.norm(v)
    proj = np.outer(v, v.conj())
    ks = np.einsum("kij,ab->kiajb", k.matrices(), np.eye(2)).reshape(len(k), 4, 4)
    return _kraus_sum(ks, proj)


BELL_PHI = np.array([1.0, 0.0, 0.0, 1.0]) / math.sqrt(2.0)


def joint_state(m: ModelSpec, t: float) -> HermitianOperator:
    """System-reference state ``(E (x) I)(|Phi><Phi|)`` from the product form.

    The off-diagonal carries ``Pi_N/Z`` times the global phase
    ``exp(2i*alpha*t*sum_n g_n tanh(-beta*Omega_n/2))`` contributed by the
    trace shift in the Kraus phase energies; its modulus is unaffected.
    """
    cf = coherence_factor(m, t)
    shift = np.exp(2j * m.alpha * t * m.global_phase_shift())
    d = cf.normalized * shift
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 0.5
    rho[0, 3] = 0.5 * d
    rho[3, 0] = 0.5 * np.conj(d)
    return HermitianOperator(rho)


def joint_state_bruteforce(m: ModelSpec, t: float) -> HermitianOperator:
    """Same state built by summing every Kraus operator explicitly."""
    return apply_channel_to_reference(kraus_set(m, t), BELL_PHI)


__all__ = [
    "BELL_PHI",
    "CoherenceFactor",
    "DENSITY_ATOL",
    "KrausSet",
    "MAX_ENUMERATION_N",
    "ModelSpec",
    "apply_channel",
    "apply_channel_to_reference",
    "coherence_factor",
    "coherence_factor_bruteforce",
    "joint_state",
    "joint_state_bruteforce",
    "kraus_set",
    "log_partition_function",
    "partition_function",
    "partition_function_bruteforce",
    "ratio_abs_curve",
]
