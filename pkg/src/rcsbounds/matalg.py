"""Hermitian matrix kernel for d x d complex matrices, d <= 16.

Provides the small set of algebra primitives everything else is built on:
adjoints, Hermitian parts, a cyclic complex Jacobi eigensolver, positive
square roots, absolute values, spectral bounds, the Loewner order, and a
normality check.  All matrices are numpy arrays of dtype complex128; all
norms are Frobenius norms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "SpectralDecomposition",
    "KernelError",
    "DimMismatchError",
    "NotHermitianError",
    "NotPositiveError",
    "NoConvergenceError",
    "as_element",
    "adjoint",
    "re_part",
    "frobenius",
    "hermiticity_defect",
    "eig_hermitian",
    "sqrt_psd",
    "abs_element",
    "spectrum_bounds",
    "loewner_leq",
    "is_normal",
]

MAX_DIM = 16

# Off-diagonal Frobenius mass threshold for Jacobi convergence, relative
# to the Frobenius norm of the input, and the hard sweep cap.
JACOBI_REL_TARGET = 1e-14
JACOBI_MAX_SWEEPS = 60


class KernelError(Exception):
    """Base class for matrix-kernel failures."""


class DimMismatchError(KernelError):
    """Operands have incompatible or unsupported dimensions."""


class NotHermitianError(KernelError):
    """Input is not Hermitian within tolerance."""


class NotPositiveError(KernelError):
    """Input has an eigenvalue below the negativity band."""


class NoConvergenceError(KernelError):
    """Jacobi iteration failed to converge within the sweep cap."""


@dataclass(frozen=True)
class Tolerance:
    """Relative/absolute tolerance pair used across the toolkit.

    A comparison at scale s uses the band atol + rtol * s; verdicts treat
    margins at or above -band as passing.
    """

    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self) -> None:
        if self.rtol < 0 or self.atol < 0:
            raise ValueError("tolerances must be nonnegative")

    def band(self, scale: float) -> float:
        return self.atol + self.rtol * scale


DEFAULT_TOL = Tolerance()


def as_element(a) -> np.ndarray:
    """Coerce to a finite square complex128 matrix and validate its shape."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimMismatchError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[0] > MAX_DIM:
        raise DimMismatchError(
            f"dimension {m.shape[0]} outside supported range 1..{MAX_DIM}"
        )
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return as_element(a).conj().T.copy()


def re_part(a) -> np.ndarray:
    """Hermitian part (a + a*) / 2.  Output is exactly Hermitian."""
    m = as_element(a)
    return (m + m.conj().T) / 2.0


def frobenius(a) -> float:
    """Frobenius norm."""
    return float(np.linalg.norm(np.asarray(a, dtype=np.complex128)))


def hermiticity_defect(a) -> float:
    """Frobenius distance ||a - a*||_F from the Hermitian matrices."""
    m = as_element(a)
    return float(np.linalg.norm(m - m.conj().T))


def _require_hermitian(a: np.ndarray, tol: Tolerance, who: str) -> np.ndarray:
    defect = float(np.linalg.norm(a - a.conj().T))
    if defect > tol.band(frobenius(a)):
        raise NotHermitianError(
            f"{who}: input is not Hermitian (defect {defect:.3e})"
        )
    # Symmetrize so downstream arithmetic sees an exactly Hermitian matrix.
    return (a + a.conj().T) / 2.0


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (real, ascending) and a unitary matrix of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _jacobi_rotate(h: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Two-sided unitary rotation zeroing the (p, q) entry of Hermitian h.

    Updates h <- J* h J and v <- v J in place, where J is the identity
    outside rows/columns p, q and equals

        [[c, -s], [s * conj(u), c * conj(u)]]

    on them, with c^2 + s^2 = 1 real and u the phase of h[p, q].
    """
    beta = h[p, q]
    ab = abs(beta)
    if ab == 0.0:
        h[q, p] = 0.0
        return
    alpha = h[p, p].real
    gamma = h[q, q].real
    phase = beta / ab
    phase_c = phase.conjugate()

    tau = (alpha - gamma) / (2.0 * ab)
    if abs(tau) > 1e150:
        t = 1.0 / (2.0 * tau)
    elif tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = 1.0 / (tau - math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    s = t * c

    cp = h[:, p].copy()
    cq = h[:, q].copy()
    h[:, p] = c * cp + (s * phase_c) * cq
    h[:, q] = -s * cp + (c * phase_c) * cq
    rp = h[p, :].copy()
    rq = h[q, :].copy()
    h[p, :] = c * rp + (s * phase) * rq
    h[q, :] = -s * rp + (c * phase) * rq
    # The transformed 2x2 block is known in closed form; writing it back
    # directly keeps the pivot exactly zero and the diagonal exactly real.
    h[p, p] = alpha + t * ab
    h[q, q] = gamma - t * ab
    h[p, q] = 0.0
    h[q, p] = 0.0

    vp = v[:, p].copy()
    vq = v[:, q].copy()
    v[:, p] = c * vp + (s * phase_c) * vq
    v[:, q] = -s * vp + (c * phase_c) * vq


def _off_diagonal_norm(h: np.ndarray) -> float:
    d = h.shape[0]
    mask = ~np.eye(d, dtype=bool)
    return float(np.linalg.norm(h[mask]))


def eig_hermitian(
    a,
    tol: Tolerance = DEFAULT_TOL,
    max_sweeps: int = JACOBI_MAX_SWEEPS,
) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi.

    Sweeps every off-diagonal pivot (p, q) in row-cyclic order with
    two-sided unitary rotations until the off-diagonal Frobenius mass
    drops to JACOBI_REL_TARGET times the Frobenius norm of the input.

    Parameters
    ----------
    a : array_like
        Hermitian matrix (within tol; symmetrized before iterating).
    tol : Tolerance
        Band for the Hermiticity precondition.
    max_sweeps : int
        Hard cap on full sweeps; NoConvergenceError beyond it.

    Returns
    -------
    SpectralDecomposition
        Real eigenvalues in ascending order and unitary eigenvectors.
    """
    m = as_element(a)
    h = _require_hermitian(m, tol, "eig_hermitian")
    d = h.shape[0]
    if d == 1:
        return SpectralDecomposition(
            eigenvalues=np.array([h[0, 0].real]),
            eigenvectors=np.eye(1, dtype=np.complex128),
        )
    h = h.copy()
    v = np.eye(d, dtype=np.complex128)
    target = JACOBI_REL_TARGET * frobenius(h)
    sweeps = 0
    while _off_diagonal_norm(h) > target:
        if sweeps >= max_sweeps:
            raise NoConvergenceError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {_off_diagonal_norm(h):.3e}, target {target:.3e})"
            )
        for p in range(d - 1):
            for q in range(p + 1, d):
                _jacobi_rotate(h, v, p, q)
        sweeps += 1
    lam = np.real(np.diag(h)).copy()
    order = np.argsort(lam, kind="stable")
    return SpectralDecomposition(
        eigenvalues=lam[order],
        eigenvectors=np.ascontiguousarray(v[:, order]),
    )


def sqrt_psd(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Positive semidefinite square root.

    Eigenvalues in [-band, 0), band = atol + rtol * max|eigenvalue|, are
    clamped to zero; anything below the band raises NotPositiveError.
    """
    dec = eig_hermitian(a, tol)
    lam = dec.eigenvalues
    scale = float(np.max(np.abs(lam))) if lam.size else 0.0
    band = tol.band(scale)
    if lam[0] < -band:
        raise NotPositiveError(
            f"matrix has eigenvalue {lam[0]:.6e} below -{band:.3e}"
        )
    clamped = np.where(lam < 0.0, 0.0, lam)
    v = dec.eigenvectors
    root = (v * np.sqrt(clamped)) @ v.conj().T
    return (root + root.conj().T) / 2.0


def abs_element(a, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Absolute value |a| = (a* a)^(1/2) for an arbitrary square matrix."""
    m = as_element(a)
    return sqrt_psd(m.conj().T @ m, tol)


def spectrum_bounds(a, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix."""
    dec = eig_hermitian(a, tol)
    return float(dec.eigenvalues[0]), float(dec.eigenvalues[-1])


def loewner_leq(a, b, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Test a <= b in the Loewner order.

    Returns (verdict, margin) with margin = min eig(b - a).  The verdict
    is margin >= -(atol + rtol * scale), scale = max(||a||_F, ||b||_F, 1).
    """
    ma = as_element(a)
    mb = as_element(b)
    if ma.shape != mb.shape:
        raise DimMismatchError(f"shape mismatch {ma.shape} vs {mb.shape}")
    ma = _require_hermitian(ma, tol, "loewner_leq lhs")
    mb = _require_hermitian(mb, tol, "loewner_leq rhs")
    diff = mb - ma
    dec = eig_hermitian(diff, tol)
    margin = float(dec.eigenvalues[0])
    scale = max(frobenius(ma), frobenius(mb), 1.0)
    return margin >= -tol.band(scale), margin


def is_normal(a, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Check a* a = a a* and report the Frobenius deviation."""
    m = as_element(a)
    dev = float(np.linalg.norm(m.conj().T @ m - m @ m.conj().T))
    scale = frobenius(m) ** 2
    return dev <= tol.atol + tol.rtol * scale, dev
