"""Polygamy inequality reports and the subspace-decomposition diagnostic.

A report compares, for one focus subsystem, the squared concurrence across
the focus-vs-rest cut against the sum of squared pairwise assisted-
entanglement values. Slack is signed and never clamped: a negative value is
a counterexample to the inequality and must surface, not vanish.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .concurrence import pair_space, pure_concurrence, tau_a, tau_a_pure_cut, two_qubit_coa
from .linalg import partial_trace
from .qtypes import Ket

MODE_MULTIQUBIT = "multi-qubit-coa"
MODE_GENERAL = "general-tau"

# Columns common to every report row; per-partner squared terms follow,
# header-declared as rhs_term_1..rhs_term_{n-1}.
CSV_FIXED_FIELDS = (
    "state_id",
    "mode",
    "n",
    "dims",
    "focus",
    "lhs_sq",
    "rhs_sq_sum",
    "slack",
)

DIAGNOSTIC_TUPLE_CAP = 10**6


def format_float(x: float) -> str:
    """Shortest round-trip decimal form used in every CSV cell."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class PolygamyReport:
    mode: str
    dims: tuple
    focus: int
    lhs_squared: float
    rhs_terms: tuple

    @property
    def rhs_squared_sum(self) -> float:
        return math.fsum(self.rhs_terms)

    @property
    def slack(self) -> float:
        return self.rhs_squared_sum - self.lhs_squared

    def csv_row(self, state_id: str) -> list:
        return [
            state_id,
            self.mode,
            str(len(self.dims)),
            "x".join(str(d) for d in self.dims),
            str(self.focus),
            format_float(self.lhs_squared),
            format_float(self.rhs_squared_sum),
            format_float(self.slack),
        ] + [format_float(t) for t in self.rhs_terms]


def csv_header(num_partners: int) -> list:
    return list(CSV_FIXED_FIELDS) + [
        f"rhs_term_{k}" for k in range(1, int(num_partners) + 1)
    ]


def _check_focus(psi: Ket, focus: int, min_parts: int) -> int:
    n = len(psi.dims)
    if n < min_parts:
        raise ValueError(f"need at least {min_parts} subsystems, got {n}")
    focus = int(focus)
    if not 0 <= focus < n:
        raise ValueError(f"focus {focus} out of range for {n} subsystems")
    if not psi.normalized:
        raise ValueError("polygamy reports require a normalized ket")
    return focus


def polygamy_report_general(psi: Ket, focus: int) -> PolygamyReport:
    """Squared cut concurrence vs the sum of squared pairwise fidelity-sum
    bounds, one term per partner subsystem in ascending index order."""
    focus = _check_focus(psi, focus, 3)
    lhs = tau_a_pure_cut(psi, (focus,)) ** 2
    dm = psi.density_matrix()
    terms = []
    for k in range(len(psi.dims)):
        if k == focus:
            continue
        pair = partial_trace(dm, [focus, k])
        terms.append(tau_a(pair).tau ** 2)
    return PolygamyReport(MODE_GENERAL, psi.dims, focus, lhs, tuple(terms))


def polygamy_report_multiqubit(psi: Ket, focus: int) -> PolygamyReport:
    """All-qubit variant using the exact two-qubit concurrence of assistance
    for each partner term."""
    if any(d != 2 for d in psi.dims):
        raise ValueError(f"multiqubit mode needs all dims 2, got {psi.dims}")
    focus = _check_focus(psi, focus, 2)
    lhs = pure_concurrence(psi, (focus,)) ** 2
    dm = psi.density_matrix()
    terms = []
    for k in range(len(psi.dims)):
        if k == focus:
            continue
        pair = partial_trace(dm, [focus, k])
        terms.append(two_qubit_coa(pair) ** 2)
    return PolygamyReport(MODE_MULTIQUBIT, psi.dims, focus, lhs, tuple(terms))


def subspace_sum_diagnostic(psi: Ket, focus: int):
    """Compare the squared cut concurrence against the sum of squared
    concurrences of all two-level-box projections of the state.

    Boxes are chosen by one pair per subsystem: pair m1 on the focus and an
    (n-1)-tuple M of pairs on the partners. Each projection is left
    subnormalized and its concurrence taken in homogeneous form across the
    focus-vs-rest cut. Returns (cut_concurrence_sq, subspace_sum_sq). The sum
    can only over-count: boxes that agree on a partner pair share minors, so
    sum >= cut holds while equality is specific to all-qubit inputs.
    """
    focus = _check_focus(psi, focus, 3)
    dims = psi.dims
    n = len(dims)
    spaces = [pair_space(d).pairs for d in dims]
    tuple_count = math.prod(len(p) for p in spaces)
    if tuple_count > DIAGNOSTIC_TUPLE_CAP:
        raise ValueError(
            f"{tuple_count} pair tuples exceed the {DIAGNOSTIC_TUPLE_CAP} cap"
        )
    t = psi.amplitudes.reshape(dims)
    order = [focus] + [k for k in range(n) if k != focus]
    rest_dim = 2 ** (n - 1)
    total = 0.0
    for combo in itertools.product(*spaces):
        sel = [list(pair) for pair in combo]
        box = t[np.ix_(*sel)].transpose(order).reshape(1, 2 * rest_dim)
        c = float(np.asarray(kernels.concurrence_each(box, 2, rest_dim))[0])
        total += c * c
    cut = pure_concurrence(psi, (focus,))
    return cut * cut, total
