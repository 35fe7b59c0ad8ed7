"""Small dense Hermitian matrices, a Jacobi eigensolver and entropies in bits.

Matrices here are at most 4x4, so the eigensolver is a plain cyclic complex
Jacobi iteration rather than a LAPACK call. It backs the brute-force oracle
path; the analytic capacity formulas never go through it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError, StructuralError

HERMITIAN_ATOL = 1e-12
DENSITY_ATOL = 1e-10
# eigenvalues at or below this are treated as exact zeros in entropies
ZERO_CUTOFF = 1e-15
JACOBI_RTOL = 1e-14
JACOBI_MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianOperator:
    """Dense Hermitian matrix of dimension 2 or 4."""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in (2, 4):
            raise StructuralError(f"expected a 2x2 or 4x4 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise StructuralError("matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_ATOL:
            raise StructuralError("matrix is not Hermitian within 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def __getitem__(self, idx):
        return self.matrix[idx]

    def is_density_matrix(self, atol: float = DENSITY_ATOL) -> bool:
        if abs(self.trace() - 1.0) > atol:
            return False
        return bool(np.min(np.linalg.eigvalsh(self.matrix)) >= -atol)


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted in descending order."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(sorted((float(v) for v in self.eigenvalues), reverse=True))
        if not all(np.isfinite(vals)):
            raise DomainError("spectrum contains non-finite values")
        object.__setattr__(self, "eigenvalues", vals)

    def __len__(self):
        return len(self.eigenvalues)

    def __iter__(self):
        return iter(self.eigenvalues)

    def __getitem__(self, i):
        return self.eigenvalues[i]

    def check_density(self, atol: float = DENSITY_ATOL) -> None:
        """Raise DomainError unless the values form a probability vector."""
        vals = np.asarray(self.eigenvalues)
        if np.any(vals < -atol) or np.any(vals > 1.0 + atol):
            raise DomainError(f"eigenvalues outside [0, 1]: {self.eigenvalues}")
        if abs(vals.sum() - 1.0) > atol:
            raise DomainError(f"eigenvalues sum to {vals.sum()!r}, not 1")


def _jacobi_rotation(a: np.ndarray, p: int, q: int) -> np.ndarray:
    """Unitary that zeroes a[p, q] when applied as V^H a V."""
    n = a.shape[0]
    apq = a[p, q]
    r = abs(apq)
    phase = apq / r
    # diag(1, conj(phase)) makes the pivot real, then a real rotation kills it
    phi = (a[q, q].real - a[p, p].real) / (2.0 * r)
    if abs(phi) > 1e150:
        t = 0.5 / phi
    else:
        t = (1.0 if phi >= 0 else -1.0) / (abs(phi) + np.sqrt(phi * phi + 1.0))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    v = np.eye(n, dtype=complex)
    v[p, p] = c
    v[p, q] = s
    v[q, p] = -s * np.conj(phase)
    v[q, q] = c * np.conj(phase)
    return v


def jacobi_eigh(m: HermitianOperator | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi diagonalisation of a small Hermitian matrix.

    Returns ``(values, vectors)`` with eigenvalues sorted descending and
    eigenvectors as columns, so that ``m = V diag(values) V^H``.
    """
    if not isinstance(m, HermitianOperator):
        m = HermitianOperator(m)
    a = m.matrix.copy()
    n = a.shape[0]
    norm = np.linalg.norm(a)
    vecs = np.eye(n, dtype=complex)
    if norm == 0.0:
        return np.zeros(n), vecs
    tol = JACOBI_RTOL * norm
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) <= 1e-3 * tol / n:
                    a[p, q] = a[q, p] = 0.0
                    continue
                v = _jacobi_rotation(a, p, q)
                a = v.conj().T @ a @ v
                a[p, q] = a[q, p] = 0.0
                vecs = vecs @ v
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    values = np.diag(a).real + 0.0
    order = np.argsort(values)[::-1]
    return values[order], vecs[:, order]


def eigenvalues_hermitian(m: HermitianOperator | np.ndarray) -> Spectrum:
    """All eigenvalues of a 2x2 or 4x4 Hermitian operator, descending."""
    values, _ = jacobi_eigh(m)
    return Spectrum(tuple(values))


def _entropy_bits(values: Iterable[float]) -> float:
    total = 0.0
    for lam in values:
        if lam < -DENSITY_ATOL:
            raise DomainError(f"negative eigenvalue {lam!r} in entropy")
        if lam <= ZERO_CUTOFF:
            continue
        total -= lam * np.log2(lam)
    return max(total, 0.0)


def von_neumann_entropy(s: Spectrum | Sequence[float]) -> float:
    """Entropy -sum(l log2 l) of a density-matrix spectrum, in bits."""
    if not isinstance(s, Spectrum):
        s = Spectrum(tuple(s))
    s.check_density()
    return float(_entropy_bits(s.eigenvalues))


def binary_entropy(p: float) -> float:
    """Shannon entropy of the distribution (p, 1 - p), in bits."""
    if not np.isfinite(p) or p < -HERMITIAN_ATOL or p > 1.0 + HERMITIAN_ATOL:
        raise DomainError(f"probability {p!r} outside [0, 1]")
    p = min(max(float(p), 0.0), 1.0)
    return float(_entropy_bits((p, 1.0 - p)))


def matrix_entropy(m: HermitianOperator | np.ndarray) -> float:
    """Von Neumann entropy of a density matrix via the Jacobi eigensolver."""
    return von_neumann_entropy(eigenvalues_hermitian(m))
