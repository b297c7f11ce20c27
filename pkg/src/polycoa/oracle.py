"""Brute-force lower bound on the concurrence of assistance.

The search walks the space of pure-state decompositions directly: an N x r
isometry applied to the scaled eigenbasis of rho enumerates every size-N
decomposition, so the average concurrence of any visited ensemble is a valid
lower bound on the assisted concurrence. Random restarts plus small unitary
perturbation moves (keep if improved) refine it. The result is documented as
a lower bound only; no optimality claim is made beyond two qubits, where the
closed form exists to compare against.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .concurrence import tau_a
from .linalg import hermitian_eigensystem
from .qtypes import DensityMatrix, Ensemble, Ket
from .states import RANK_TOL, bipartition_dm, default_ensemble_size

STEP_INIT = 0.05
STEP_FAIL_LIMIT = 50
CONV_WINDOW = 200
CONV_IMPROVEMENT = 1e-6


@dataclass(frozen=True)
class OracleResult:
    best_average: float
    best_ensemble: Ensemble
    iterations_used: int
    converged: bool


def _flatten(rho: DensityMatrix, cut) -> DensityMatrix:
    if cut is not None:
        rho = bipartition_dm(rho, cut)
    if len(rho.dims) != 2:
        raise ValueError(
            f"oracle needs a bipartite state (pass cut to flatten), got dims {rho.dims}"
        )
    if not rho.normalized:
        raise ValueError("oracle requires a normalized state")
    return rho


def _expm_skew(k: np.ndarray, scale: float) -> np.ndarray:
    """exp(scale * k) for skew-Hermitian k, via the eigensystem of -i k."""
    es = hermitian_eigensystem(-1j * k)
    phases = np.exp(1j * scale * es.eigenvalues)
    return (es.eigenvectors * phases) @ es.eigenvectors.conj().T


def optimize_coa_lower_bound(
    rho: DensityMatrix,
    cut=None,
    ensemble_size=None,
    budget: int = 2000,
    seed=0,
    observer=None,
) -> OracleResult:
    """Best average ensemble concurrence found within an iteration budget.

    Restart k draws all its randomness from a generator keyed on
    (seed, restart index), and runs until its best value improves by less
    than CONV_IMPROVEMENT over CONV_WINDOW iterations or the shared budget
    runs out; remaining budget rolls into the next restart. Because restart
    streams never depend on the budget, enlarging the budget can only extend
    the search, never change what an earlier restart did. ``observer``, when
    given, receives every evaluated average (test instrumentation).
    """
    rho = _flatten(rho, cut)
    budget = int(budget)
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    d1, d2 = rho.dims
    es = hermitian_eigensystem(rho)
    rank = int(np.count_nonzero(es.eigenvalues > RANK_TOL))
    basis = es.eigenvectors[:, :rank] * np.sqrt(
        np.clip(es.eigenvalues[:rank], 0.0, None)
    )
    n_members = default_ensemble_size(rank) if ensemble_size is None else int(ensemble_size)
    if n_members < rank:
        raise ValueError(f"ensemble_size {n_members} below rank {rank}")

    def evaluate(w):
        members = w.conj() @ basis.T
        avg = float(np.asarray(kernels.concurrence_each(members, d1, d2)).sum())
        if observer is not None:
            observer(avg)
        return avg, members

    if rank == 1:
        # A pure state has a single decomposition up to phases; nothing to search.
        w = np.zeros((n_members, 1), dtype=np.complex128)
        w[0, 0] = 1.0
        avg, members = evaluate(w)
        return OracleResult(avg, _as_ensemble(rho.dims, members), 0, True)

    best_avg = -np.inf
    best_members = None
    best_converged = False
    used = 0
    restart = 0
    while used < budget:
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(restart,)))
        g = rng.standard_normal((n_members, rank)) + 1j * rng.standard_normal(
            (n_members, rank)
        )
        w, _ = np.linalg.qr(g)
        cur_avg, cur_members = evaluate(w)
        used += 1
        top_avg, top_members = cur_avg, cur_members
        trail = [top_avg]
        step = STEP_INIT
        fails = 0
        converged = False
        while used < budget:
            g = rng.standard_normal((n_members, n_members)) + 1j * rng.standard_normal(
                (n_members, n_members)
            )
            skew = 0.5 * (g - g.conj().T)
            cand, _ = np.linalg.qr(_expm_skew(skew, step) @ w)
            cand_avg, cand_members = evaluate(cand)
            used += 1
            if cand_avg > cur_avg:
                w, cur_avg = cand, cand_avg
                fails = 0
                if cand_avg > top_avg:
                    top_avg, top_members = cand_avg, cand_members
            else:
                fails += 1
                if fails >= STEP_FAIL_LIMIT:
                    step *= 0.5
                    fails = 0
            trail.append(top_avg)
            if len(trail) > CONV_WINDOW and top_avg - trail[-1 - CONV_WINDOW] < CONV_IMPROVEMENT:
                converged = True
                break
        if top_avg > best_avg:
            best_avg = top_avg
            best_members = top_members
            best_converged = converged
        restart += 1
    return OracleResult(
        best_avg, _as_ensemble(rho.dims, best_members), used, best_converged
    )


def _as_ensemble(dims, members: np.ndarray) -> Ensemble:
    return Ensemble(
        tuple(Ket(dims, members[i], normalized=False) for i in range(members.shape[0]))
    )


def bound_consistency_check(rho: DensityMatrix, cut=None, budget: int = 2000, seed=0) -> float:
    """Signed gap tau_a - oracle average; nonnegative when the bound holds
    (oracle suboptimality only widens it)."""
    flat = _flatten(rho, cut)
    result = optimize_coa_lower_bound(flat, None, None, budget, seed)
    return tau_a(flat).tau - result.best_average
