"""Value types shared across the package: kets, density matrices, ensembles.

All carry a tuple of subsystem dimensions and a read-only complex array.
Composite indexing is mixed-radix with subsystem 1 as the most significant
digit, i.e. plain C-order reshapes of the flat arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

NORM_ATOL = 1e-10
HERM_ATOL = 1e-9
TRACE_ATOL = 1e-10


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("dims must name at least one subsystem")
    if any(d < 2 for d in dims):
        raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
    return dims


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.complex128, order="C")
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class Ket:
    """Pure state vector on a multipartite space.

    ``normalized=False`` marks subnormalized kets (ensemble members, projected
    states); those carry their weight in the squared norm.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = _frozen(np.asarray(self.amplitudes).reshape(-1))
        if amps.size != math.prod(dims):
            raise ValueError(
                f"amplitude length {amps.size} does not match dims {dims}"
            )
        if not np.isfinite(amps.view(np.float64)).all():
            raise ValueError("amplitudes must be finite")
        if self.normalized:
            norm_sq = float((amps.real ** 2 + amps.imag ** 2).sum())
            if abs(norm_sq - 1.0) > NORM_ATOL:
                raise ValueError(f"ket marked normalized has norm^2 = {norm_sq!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def norm_squared(self) -> float:
        a = self.amplitudes
        return float((a.real ** 2 + a.imag ** 2).sum())

    def as_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem (read-only view)."""
        return self.amplitudes.reshape(self.dims)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(
            self.dims,
            np.outer(self.amplitudes, self.amplitudes.conj()),
            normalized=self.normalized,
        )


@dataclass(frozen=True)
class DensityMatrix:
    """Mixed state on a multipartite space; may be subnormalized (trace <= 1)."""

    dims: tuple[int, ...]
    entries: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        dims = _check_dims(self.dims)
        m = _frozen(np.asarray(self.entries))
        d = math.prod(dims)
        if m.shape != (d, d):
            raise ValueError(f"entries shape {m.shape} does not match dims {dims}")
        if not np.isfinite(m.view(np.float64)).all():
            raise ValueError("entries must be finite")
        herm_dev = float(np.abs(m - m.conj().T).max())
        if herm_dev > HERM_ATOL:
            raise ValueError(f"matrix is not Hermitian: max deviation {herm_dev:.3e}")
        tr = float(np.trace(m).real)
        if self.normalized:
            if abs(tr - 1.0) > TRACE_ATOL:
                raise ValueError(f"matrix marked normalized has trace {tr!r}")
        elif tr < -TRACE_ATOL or tr > 1.0 + TRACE_ATOL:
            raise ValueError(f"subnormalized matrix must have trace in [0, 1], got {tr!r}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


@dataclass(frozen=True)
class Ensemble:
    """Pure-state decomposition: subnormalized kets with sum |xi><xi| = rho."""

    members: tuple[Ket, ...]

    def __post_init__(self):
        members = tuple(self.members)
        if not members:
            raise ValueError("ensemble needs at least one member")
        dims = members[0].dims
        if any(m.dims != dims for m in members):
            raise ValueError("all ensemble members must share the same dims")
        object.__setattr__(self, "members", members)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.members[0].dims

    @property
    def weights(self) -> np.ndarray:
        return np.array([m.norm_squared for m in self.members])

    def density(self) -> np.ndarray:
        """Sum of member projectors as a plain array."""
        out = np.zeros((self.members[0].dim,) * 2, dtype=np.complex128)
        for m in self.members:
            out += np.outer(m.amplitudes, m.amplitudes.conj())
        return out
