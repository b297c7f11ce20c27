"""Reference implementations of the numerical kernels.

Same algorithms, same arithmetic as the compiled extension in
``polycoa.kernels._core``. Used as the import-time fallback when the extension
is unavailable (or forced via POLYCOA_PURE_KERNELS=1) and as the comparison
target for benchmarks and cross-backend tests.
"""
from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"


def _off_norm(a: np.ndarray) -> float:
    # Summed directly over off-diagonal entries; subtracting the diagonal
    # norm from the total would cancel catastrophically near convergence.
    sq = a.real**2 + a.imag**2
    np.fill_diagonal(sq, 0.0)
    return math.sqrt(float(sq.sum()))


def jacobi_eigh(h, compute_vectors=True, off_tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi diagonalization of a complex Hermitian matrix.

    Sweeps (p, q) pairs in lexicographic order, annihilating each off-diagonal
    element with a phased plane rotation, until the off-diagonal Frobenius norm
    drops below ``off_tol`` or ``max_sweeps`` is exhausted.

    Returns ``(w, v, sweeps, converged)``: the diagonal in its final (unsorted)
    order, the accumulated rotations as eigenvector columns (``None`` when
    ``compute_vectors`` is false), sweeps used, and the convergence flag.
    """
    a = np.array(h, dtype=np.complex128, order="C")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128) if compute_vectors else None
    if n < 2:
        return np.diag(a).real.copy(), v, 0, True
    # Elements below this cannot stall convergence: a full sweep of skips
    # leaves the off-diagonal norm at most off_tol/10.
    skip = off_tol / (10.0 * n)
    sweeps = 0
    converged = _off_norm(a) < off_tol
    while not converged and sweeps < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                hpq = a[p, q]
                ah = abs(hpq)
                if ah <= skip:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                u = hpq / ah
                tau = (app - aqq) / (2.0 * ah)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = (1.0 if tau > 0.0 else -1.0) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                su = (t * c) * u
                suc = su.conjugate()
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                new_p = c * rp + su * rq
                new_q = c * rq - suc * rp
                a[p, :] = new_p
                a[q, :] = new_q
                a[:, p] = new_p.conj()
                a[:, q] = new_q.conj()
                a[p, p] = app + t * ah
                a[q, q] = aqq - t * ah
                a[p, q] = 0.0
                a[q, p] = 0.0
                if compute_vectors:
                    vp = v[:, p].copy()
                    vq = v[:, q].copy()
                    v[:, p] = c * vp + suc * vq
                    v[:, q] = c * vq - su * vp
        sweeps += 1
        converged = _off_norm(a) < off_tol
    return np.diag(a).real.copy(), v, sweeps, converged


def concurrence_each(members, d1, d2):
    """Homogeneous pure-state concurrence of each row of ``members``.

    Row i is a (possibly subnormalized) ket on a d1 x d2 bipartite space; the
    value is 2*sqrt(sum of squared magnitudes of all 2x2 minors of its
    coefficient matrix), which scales with the squared norm of the row.
    """
    m = np.asarray(members, dtype=np.complex128).reshape(-1, d1, d2)
    i, j = np.triu_indices(d1, k=1)
    k, l = np.triu_indices(d2, k=1)
    if i.size == 0 or k.size == 0:
        return np.zeros(m.shape[0])
    minors = (
        m[:, i[:, None], k[None, :]] * m[:, j[:, None], l[None, :]]
        - m[:, i[:, None], l[None, :]] * m[:, j[:, None], k[None, :]]
    )
    return 2.0 * np.sqrt((minors.real ** 2 + minors.imag ** 2).sum(axis=(1, 2)))
