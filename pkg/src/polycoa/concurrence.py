"""Concurrence quantities and the fidelity-sum upper bound on assisted
entanglement.

The central object is ``tau_a``: for a bipartite density matrix it sums the
fidelities F[rho, rho~_mn] over all pairs of local two-level subspaces, where
rho~_mn is the conjugated state flipped inside those subspaces. The sum upper
bounds the concurrence of assistance; on two qubits the single term is the
exact closed form.

Pair conventions are zero-based throughout: a local dimension d contributes
the d(d-1)/2 pairs (i, j) with 0 <= i < j < d, ordered lexicographically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .linalg import fidelity_from_root, fidelity_spectrum, psd_sqrt_with_rank
from .qtypes import DensityMatrix, Ket
from .states import bipartition_ket


@dataclass(frozen=True)
class PairIndexSpace:
    """Ordered two-level subspaces of a single d-dimensional system."""

    d: int
    pairs: tuple

    @property
    def count(self) -> int:
        return len(self.pairs)


@lru_cache(maxsize=None)
def pair_space(d: int) -> PairIndexSpace:
    d = int(d)
    if d < 2:
        raise ValueError(f"local dimension must be >= 2, got {d}")
    pairs = tuple((i, j) for i in range(d) for j in range(i + 1, d))
    return PairIndexSpace(d, pairs)


def _check_pair(d: int, pair) -> tuple:
    i, j = (int(x) for x in pair)
    if not 0 <= i < j < d:
        raise ValueError(f"invalid pair {pair!r} for dimension {d}")
    return i, j


def generator_L(d: int, pair) -> np.ndarray:
    """The antisymmetric flip -|i><j| + |j><i| on the (i, j) subspace."""
    i, j = _check_pair(int(d), pair)
    L = np.zeros((d, d), dtype=np.complex128)
    L[i, j] = -1.0
    L[j, i] = 1.0
    return L


def _require_normalized(state, what: str) -> None:
    if not state.normalized:
        raise ValueError(f"{what} requires a normalized input")


def _require_bipartite(state, what: str) -> None:
    if len(state.dims) != 2:
        raise ValueError(
            f"{what} needs an explicit two-group split, got dims {state.dims}"
        )


def pure_concurrence(psi: Ket, cut=(0,)) -> float:
    """sqrt(2 (1 - tr rho_A^2)) across the cut, rho_A the first group."""
    _require_normalized(psi, "pure_concurrence")
    b = bipartition_ket(psi, cut)
    a = b.amplitudes.reshape(b.dims)
    red = a @ a.conj().T
    purity = float(np.einsum("ij,ji->", red, red).real)
    return math.sqrt(max(0.0, 2.0 * (1.0 - purity)))


def pure_concurrence_coefficients(psi: Ket, cut=(0,)) -> float:
    """Coefficient route to the same value: 2 sqrt(sum of squared 2x2 minors
    of the amplitude matrix). Degree-2 homogeneous, so subnormalized kets are
    allowed; on a weight-p member it returns p times the member concurrence."""
    b = bipartition_ket(psi, cut)
    row = np.ascontiguousarray(b.amplitudes.reshape(1, b.dim))
    return float(np.asarray(kernels.concurrence_each(row, b.dims[0], b.dims[1]))[0])


def subspace_term(psi: Ket, m, n) -> float:
    """|<psi| L_A^m x L_B^n |psi*>|^2 = 4 |a_ik a_jl - a_il a_jk|^2."""
    _require_bipartite(psi, "subspace_term")
    d1, d2 = psi.dims
    i, j = _check_pair(d1, m)
    k, l = _check_pair(d2, n)
    a = psi.amplitudes.reshape(d1, d2)
    minor = a[i, k] * a[j, l] - a[i, l] * a[j, k]
    return 4.0 * float(minor.real**2 + minor.imag**2)


def _pair_block(i: int, j: int, k: int, l: int, d2: int):
    return [i * d2 + k, i * d2 + l, j * d2 + k, j * d2 + l]


def rho_tilde(rho: DensityMatrix, m, n) -> DensityMatrix:
    """(L_A^m x L_B^n) conj(rho) (L_A^m x L_B^n): the conjugated state flipped
    inside the chosen two-level subspaces. Subnormalized in general."""
    _require_bipartite(rho, "rho_tilde")
    d1, d2 = rho.dims
    K = np.kron(generator_L(d1, m), generator_L(d2, n))
    tilde = K @ rho.entries.conj() @ K
    return DensityMatrix(rho.dims, 0.5 * (tilde + tilde.conj().T), normalized=False)


@dataclass(frozen=True)
class TauReport:
    """Fidelity terms F[rho, rho~_mn] on the (m, n) pair grid and their sum."""

    dims: tuple
    terms: np.ndarray
    tau: float

    def to_json(self) -> dict:
        return {
            "d1": self.dims[0],
            "d2": self.dims[1],
            "terms": self.terms.tolist(),
            "tau": self.tau,
        }


def tau_a(rho: DensityMatrix) -> TauReport:
    """Upper bound on the concurrence of assistance of a bipartite state.

    Flatten multipartite states to an explicit two-group split first (see
    bipartition_dm). The square root of rho is computed once and shared by
    all pair terms; terms whose two-level block of rho vanishes identically
    contribute exactly zero without touching the eigensolver.
    """
    _require_bipartite(rho, "tau_a")
    _require_normalized(rho, "tau_a")
    d1, d2 = rho.dims
    space_a, space_b = pair_space(d1), pair_space(d2)
    root, rank = psd_sqrt_with_rank(rho)
    # Each rho~ is K rho* K with rank(K) = 4, so every fidelity spectrum has
    # at most min(rank rho, 4) genuine entries; the rest are noise.
    spectrum_rank = min(rank, 4)
    entries = rho.entries
    terms = np.zeros((space_a.count, space_b.count))
    total = 0.0
    for mi, (i, j) in enumerate(space_a.pairs):
        for ni, (k, l) in enumerate(space_b.pairs):
            sub = _pair_block(i, j, k, l, d2)
            if not entries[np.ix_(sub, sub)].any():
                continue
            K = np.kron(generator_L(d1, (i, j)), generator_L(d2, (k, l)))
            tilde = K @ entries.conj() @ K
            f = fidelity_from_root(root, 0.5 * (tilde + tilde.conj().T), spectrum_rank)
            terms[mi, ni] = f
            total += f
    return TauReport((d1, d2), terms, total)


def two_qubit_coa(rho: DensityMatrix) -> float:
    """Exact concurrence of assistance of a two-qubit state: the single
    fidelity term F[rho, rho~]."""
    if rho.dims != (2, 2):
        raise ValueError(f"two_qubit_coa needs dims (2, 2), got {rho.dims}")
    return tau_a(rho).tau


def wootters_concurrence(rho: DensityMatrix) -> float:
    """Two-qubit concurrence max(0, l1 - l2 - l3 - l4) with l_i the descending
    square roots of the eigenvalues of rho rho~."""
    if rho.dims != (2, 2):
        raise ValueError(f"wootters_concurrence needs dims (2, 2), got {rho.dims}")
    _require_normalized(rho, "wootters_concurrence")
    tilde = rho_tilde(rho, (0, 1), (0, 1))
    root, rank = psd_sqrt_with_rank(rho)
    # rho rho~ has at most rank(rho) nonzero eigenvalues; truncating keeps
    # sqrt(eps) noise out of the subtracted tail for rank-deficient states.
    lam = fidelity_spectrum(root, tilde, rank)
    return max(0.0, float(2.0 * lam[0] - lam.sum()))


def tau_a_pure_cut(psi: Ket, cut=(0,)) -> float:
    """Left-hand side of the polygamy inequality for pure states: the plain
    concurrence across the cut."""
    return pure_concurrence(psi, cut)


@dataclass(frozen=True)
class PureStateGap:
    """Pure-state comparison of the term-wise fidelity sum against the
    concurrence across the same cut. For a pure state each fidelity term is
    |<psi| L x L |psi*>|, so tau_sum is an l1 norm of the minor vector while
    the concurrence is the l2 norm; tau_sum >= concurrence always, with
    equality only when at most one minor is nonzero."""

    tau_sum: float
    concurrence: float

    @property
    def gap(self) -> float:
        return self.tau_sum - self.concurrence


def pure_state_tau_gap(psi: Ket, cut=(0,)) -> PureStateGap:
    _require_normalized(psi, "pure_state_tau_gap")
    b = bipartition_ket(psi, cut)
    d1, d2 = b.dims
    a = b.amplitudes.reshape(d1, d2)
    total = 0.0
    for i, j in pair_space(d1).pairs:
        for k, l in pair_space(d2).pairs:
            minor = a[i, k] * a[j, l] - a[i, l] * a[j, k]
            total += 2.0 * abs(minor)
    return PureStateGap(total, pure_concurrence(psi, cut))
