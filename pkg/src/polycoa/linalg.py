"""Dense complex linear algebra on top of the kernel backends.

Everything here is a pure function; matrices are plain complex128 arrays or
the wrapper types from ``polycoa.qtypes``. The eigensolver is a self-contained
cyclic Jacobi iteration (see ``polycoa.kernels``), adequate for the small
dense matrices this package works with.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .qtypes import HERM_ATOL, DensityMatrix, Ket

# Eigenvalues of nominally PSD matrices may dip below zero by numerical noise;
# anything above this clamp is treated as zero, anything below is an error.
EIG_CLAMP = -1e-10
# Eigenvalues above this threshold count toward a matrix's numerical rank.
RANK_TOL = 1e-12
# Inner-matrix eigenvalues below this (scaled) floor are float noise on exact
# zeros; fidelity_spectrum treats them as zero before taking square roots.
SPECTRUM_FLOOR = 1e-13
_OFF_TOL = 1e-12
_MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Jacobi sweep cap reached before the off-diagonal norm target."""


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in descending order with matching orthonormal columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _matrix(x) -> np.ndarray:
    m = np.ascontiguousarray(getattr(x, "entries", x), dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def _jacobi(work: np.ndarray, compute_vectors: bool):
    off_tol = _OFF_TOL * max(1.0, float(np.linalg.norm(work)))
    w, v, sweeps, ok = kernels.jacobi_eigh(work, compute_vectors, off_tol, _MAX_SWEEPS)
    if not ok:
        raise ConvergenceError(
            f"Jacobi iteration did not converge within {_MAX_SWEEPS} sweeps"
        )
    return w, v


def hermitian_eigensystem(H, tol: float = HERM_ATOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations."""
    m = _matrix(H)
    if m.size and not np.isfinite(m.view(np.float64)).all():
        raise ValueError("matrix entries must be finite")
    dev = float(np.abs(m - m.conj().T).max()) if m.size else 0.0
    if dev > tol:
        raise ValueError(f"matrix is not Hermitian: max deviation {dev:.3e}")
    work = 0.5 * (m + m.conj().T)
    w, v = _jacobi(work, compute_vectors=True)
    order = np.argsort(-w, kind="stable")
    return EigenSystem(w[order], v[:, order])


def psd_sqrt(M) -> np.ndarray:
    """Hermitian square root of a PSD matrix (eigenvalues clamped at zero)."""
    root, _ = psd_sqrt_with_rank(M)
    return root


def psd_sqrt_with_rank(M, rank_tol: float = RANK_TOL):
    """Hermitian square root plus the count of eigenvalues above ``rank_tol``.

    The rank lets fidelity callers truncate spurious spectrum entries, see
    fidelity_spectrum.
    """
    es = hermitian_eigensystem(M)
    w = es.eigenvalues
    if w.size and w[-1] < EIG_CLAMP:
        raise ValueError(f"matrix is not PSD: smallest eigenvalue {w[-1]:.3e}")
    root = (es.eigenvectors * np.sqrt(np.clip(w, 0.0, None))) @ es.eigenvectors.conj().T
    return 0.5 * (root + root.conj().T), int(np.count_nonzero(w > rank_tol))


def fidelity_spectrum(root_rho: np.ndarray, sigma, max_rank=None) -> np.ndarray:
    """Descending square roots of the eigenvalues of sqrt(rho) sigma sqrt(rho),
    given a precomputed sqrt(rho). Their sum is the fidelity; the individual
    values also feed the two-qubit concurrence formula.

    ``max_rank`` zeroes all but the top values. rank(sqrt(rho) sigma
    sqrt(rho)) <= min(rank rho, rank sigma), so callers who know the ranks can
    discard the spurious eigenvalues, whose square roots otherwise inject
    O(sqrt(eps)) noise on rank-deficient inputs.

    Eigenvalues below SPECTRUM_FLOOR (relative to the largest, at least
    absolute for unit-scale inputs) are treated as exact zeros for the same
    reason: forming the inner product leaves O(d * eps) noise on structural
    zeros that the rank bound cannot see, and the square root would otherwise
    turn each into ~1e-8 of garbage.
    """
    s = _matrix(sigma)
    inner = root_rho @ s @ root_rho
    inner = 0.5 * (inner + inner.conj().T)
    w, _ = _jacobi(inner, compute_vectors=False)
    if w.size and w.min() < EIG_CLAMP:
        raise ValueError(f"fidelity argument is not PSD: eigenvalue {w.min():.3e}")
    lam = np.sqrt(np.clip(w, 0.0, None))
    lam[::-1].sort()
    if max_rank is not None and 0 <= max_rank < lam.size:
        lam[max_rank:] = 0.0
    if lam.size:
        floor = math.sqrt(SPECTRUM_FLOOR * max(1.0, lam[0] * lam[0]))
        lam[lam < floor] = 0.0
    return lam


def fidelity_from_root(root_rho: np.ndarray, sigma, max_rank=None) -> float:
    """Fidelity given a precomputed sqrt(rho); lets callers amortize the root."""
    return float(fidelity_spectrum(root_rho, sigma, max_rank).sum())


def fidelity(rho, sigma) -> float:
    """tr sqrt(sqrt(rho) sigma sqrt(rho)); sigma may be subnormalized."""
    r = _matrix(rho)
    s = _matrix(sigma)
    if r.shape != s.shape:
        raise ValueError(f"dimension mismatch: {r.shape} vs {s.shape}")
    return fidelity_from_root(psd_sqrt(r), s)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out all subsystems not in ``keep``; result follows keep order."""
    dims = rho.dims
    n = len(dims)
    keep = [int(k) for k in keep]
    if not keep:
        raise ValueError("keep must name at least one subsystem")
    if len(set(keep)) != len(keep):
        raise ValueError(f"keep has duplicates: {keep}")
    if any(k < 0 or k >= n for k in keep):
        raise ValueError(f"keep {keep} out of range for {n} subsystems")
    keep_set = set(keep)
    t = rho.entries.reshape(dims + dims)
    bra = [i + n if i in keep_set else i for i in range(n)]
    out = [k for k in keep] + [k + n for k in keep]
    sub = np.einsum(t, list(range(n)) + bra, out)
    d = math.prod(dims[k] for k in keep)
    return DensityMatrix(
        tuple(dims[k] for k in keep), sub.reshape(d, d), normalized=rho.normalized
    )


def conjugate_entrywise(rho: DensityMatrix) -> DensityMatrix:
    """Entrywise complex conjugate in the fixed computational basis."""
    return DensityMatrix(rho.dims, rho.entries.conj(), normalized=rho.normalized)


def bilinear_form_value(psi: Ket, A) -> complex:
    """The basis-dependent form sum_xy conj(a_x) A_xy conj(a_y) = <psi|A|psi*>."""
    a = _matrix(A)
    if a.shape[0] != psi.dim:
        raise ValueError(f"operator side {a.shape[0]} does not match ket dim {psi.dim}")
    ca = psi.amplitudes.conj()
    return complex(ca @ a @ ca)


def tensor_product(A, B) -> np.ndarray:
    """Kronecker product; the left factor is the most significant subsystem."""
    return np.kron(np.asarray(A, dtype=np.complex128), np.asarray(B, dtype=np.complex128))
