"""State construction: basis kets, Haar samples, W-class and GHZ families.

All generators take an explicit seed (int, SeedSequence, or Generator) and
never touch global RNG state, so parallel sweeps stay reproducible with
per-task seeds.
"""
from __future__ import annotations

import json
import math

import numpy as np

from .linalg import RANK_TOL
from .qtypes import NORM_ATOL, DensityMatrix, Ensemble, Ket, _check_dims

ISOMETRY_ATOL = 1e-8


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def basis_ket(dims, indices) -> Ket:
    """Computational-basis ket |i1 i2 ... in> (subsystem 1 most significant)."""
    dims = tuple(int(d) for d in dims)
    _check_dims(dims)
    indices = tuple(int(i) for i in indices)
    if len(indices) != len(dims):
        raise ValueError(f"{len(indices)} indices for {len(dims)} subsystems")
    if any(i < 0 or i >= d for i, d in zip(indices, dims)):
        raise ValueError(f"indices {indices} out of range for dims {dims}")
    flat = 0
    for i, d in zip(indices, dims):
        flat = flat * d + i
    amps = np.zeros(math.prod(dims), dtype=np.complex128)
    amps[flat] = 1.0
    return Ket(dims, amps)


def haar_random_pure(dims, seed) -> Ket:
    """Haar-random normalized ket: complex Gaussian vector, normalized."""
    dims = tuple(int(d) for d in dims)
    _check_dims(dims)
    rng = _rng(seed)
    n = math.prod(dims)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return Ket(dims, z / np.linalg.norm(z))


def random_mixed_state(dims, rank, seed) -> DensityMatrix:
    """Mixed state from tracing a rank-sized ancilla off a Haar-random ket."""
    dims = tuple(int(d) for d in dims)
    _check_dims(dims)
    d = math.prod(dims)
    rank = int(rank)
    if not 1 <= rank <= d:
        raise ValueError(f"rank {rank} out of range [1, {d}]")
    rng = _rng(seed)
    z = rng.standard_normal(d * rank) + 1j * rng.standard_normal(d * rank)
    z /= np.linalg.norm(z)
    m = z.reshape(d, rank)
    rho = m @ m.conj().T
    return DensityMatrix(dims, 0.5 * (rho + rho.conj().T))


def w_class_state(amplitudes) -> Ket:
    """n-qubit ket a_1|10..0> + a_2|010..0> + ... + a_n|0..01>."""
    a = np.asarray(amplitudes, dtype=np.complex128)
    if a.ndim != 1 or a.size < 2:
        raise ValueError("need a flat list of at least 2 amplitudes")
    nrm2 = float(np.sum(np.abs(a) ** 2))
    if abs(nrm2 - 1.0) > NORM_ATOL:
        raise ValueError(f"amplitudes not normalized: sum of squares {nrm2!r}")
    n = a.size
    amps = np.zeros(2**n, dtype=np.complex128)
    for k in range(n):
        amps[1 << (n - 1 - k)] = a[k]
    return Ket((2,) * n, amps)


def ghz_state(n: int, d: int = 2) -> Ket:
    """(1/sqrt(d)) sum_j |j>^{tensor n}."""
    n, d = int(n), int(d)
    if n < 2 or d < 2:
        raise ValueError(f"need n >= 2 and d >= 2, got n={n}, d={d}")
    amps = np.zeros(d**n, dtype=np.complex128)
    step = (d**n - 1) // (d - 1)
    amps[:: step] = 1.0 / math.sqrt(d)
    return Ket((d,) * n, amps)


def ensemble_from_isometry(rho: DensityMatrix, W) -> Ensemble:
    """Pure-state decomposition of rho selected by an N x r isometry W.

    The rows of W index ensemble members, the columns index the eigenvectors
    of rho with eigenvalue above RANK_TOL; member i is
    sum_j conj(W[i, j]) sqrt(lambda_j) |v_j>, so any W with W^dag W = I
    reconstructs rho exactly.
    """
    from .linalg import hermitian_eigensystem

    w = np.ascontiguousarray(W, dtype=np.complex128)
    es = hermitian_eigensystem(rho)
    r = int(np.count_nonzero(es.eigenvalues > RANK_TOL))
    if r == 0:
        raise ValueError("density matrix has no eigenvalue above rank tolerance")
    if w.ndim != 2 or w.shape[1] != r or w.shape[0] < r:
        raise ValueError(
            f"isometry must be N x {r} with N >= {r}, got shape {w.shape}"
        )
    gram = w.conj().T @ w
    dev = float(np.abs(gram - np.eye(r)).max())
    if dev > ISOMETRY_ATOL:
        raise ValueError(f"columns not orthonormal: max Gram deviation {dev:.3e}")
    scaled = es.eigenvectors[:, :r] * np.sqrt(es.eigenvalues[:r])
    members = w.conj() @ scaled.T
    return Ensemble(tuple(
        Ket(rho.dims, members[i], normalized=False) for i in range(w.shape[0])
    ))


def default_ensemble_size(rank: int) -> int:
    """Ensemble cardinality used when the caller does not pin one: rank+2
    capped at rank**2 (a rank-1 state needs only itself)."""
    rank = int(rank)
    return max(rank, min(rank + 2, rank * rank))


def bipartition_ket(psi: Ket, cut) -> Ket:
    """Regroup a multipartite ket into two factors: ``cut`` lists the
    subsystems of the first factor (kept in the given order), the rest form
    the second factor in ascending order."""
    cut, rest = _split(len(psi.dims), cut)
    dims = psi.dims
    perm = cut + rest
    t = psi.amplitudes.reshape(dims).transpose(perm)
    d1 = math.prod(dims[k] for k in cut)
    d2 = math.prod(dims[k] for k in rest)
    return Ket((d1, d2), t.reshape(d1 * d2), normalized=psi.normalized)


def bipartition_dm(rho: DensityMatrix, cut) -> DensityMatrix:
    """Density-matrix analogue of bipartition_ket."""
    cut, rest = _split(len(rho.dims), cut)
    dims = rho.dims
    n = len(dims)
    perm = cut + rest
    t = rho.entries.reshape(dims + dims).transpose(perm + [p + n for p in perm])
    d1 = math.prod(dims[k] for k in cut)
    d2 = math.prod(dims[k] for k in rest)
    d = d1 * d2
    return DensityMatrix((d1, d2), t.reshape(d, d), normalized=rho.normalized)


def _split(n: int, cut):
    cut = [int(k) for k in cut]
    if not cut or len(set(cut)) != len(cut):
        raise ValueError(f"cut must be nonempty without duplicates: {cut}")
    if any(k < 0 or k >= n for k in cut):
        raise ValueError(f"cut {cut} out of range for {n} subsystems")
    rest = [k for k in range(n) if k not in set(cut)]
    if not rest:
        raise ValueError("cut must leave at least one subsystem on the other side")
    return cut, rest


# -- serialization ------------------------------------------------------------
# Shared wire format: kets are {dims, re, im} with flat coefficient lists,
# density matrices the same with nested rows. The normalized flag is inferred
# on load from the actual norm or trace.


def ket_to_json(psi: Ket) -> dict:
    return {
        "dims": list(psi.dims),
        "re": psi.amplitudes.real.tolist(),
        "im": psi.amplitudes.imag.tolist(),
    }


def ket_from_json(obj: dict) -> Ket:
    amps = np.asarray(obj["re"], dtype=np.float64) + 1j * np.asarray(
        obj["im"], dtype=np.float64
    )
    if amps.ndim != 1:
        raise ValueError("ket coefficients must be flat lists")
    normalized = abs(float(np.vdot(amps, amps).real) - 1.0) <= NORM_ATOL
    return Ket(tuple(int(d) for d in obj["dims"]), amps, normalized=normalized)


def dm_to_json(rho: DensityMatrix) -> dict:
    return {
        "dims": list(rho.dims),
        "re": rho.entries.real.tolist(),
        "im": rho.entries.imag.tolist(),
    }


def dm_from_json(obj: dict) -> DensityMatrix:
    entries = np.asarray(obj["re"], dtype=np.float64) + 1j * np.asarray(
        obj["im"], dtype=np.float64
    )
    if entries.ndim != 2:
        raise ValueError("density-matrix coefficients must be nested lists")
    normalized = abs(float(np.trace(entries).real) - 1.0) <= 1e-10
    return DensityMatrix(tuple(int(d) for d in obj["dims"]), entries, normalized=normalized)


def load_state(path):
    """Read a ket or density matrix from a JSON file, keyed on re shape."""
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    for key in ("dims", "re", "im"):
        if key not in obj:
            raise ValueError(f"state file missing field {key!r}")
    first = obj["re"][0] if obj["re"] else 0.0
    if isinstance(first, list):
        return dm_from_json(obj)
    return ket_from_json(obj)


def save_state(path, state) -> None:
    if isinstance(state, Ket):
        obj = ket_to_json(state)
    elif isinstance(state, DensityMatrix):
        obj = dm_to_json(state)
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh)
        fh.write("\n")
