"""Polygamy report and subspace-diagnostic behavior."""
import math

import numpy as np
import pytest

import polycoa as pc
import polycoa.polygamy as pg
from polycoa.polygamy import (
    CSV_FIXED_FIELDS,
    MODE_GENERAL,
    MODE_MULTIQUBIT,
    PolygamyReport,
    csv_header,
    format_float,
    polygamy_report_general,
    polygamy_report_multiqubit,
    subspace_sum_diagnostic,
)


def _random_w(rng, n):
    a = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    a /= np.linalg.norm(a)
    return pc.w_class_state(a), a


class TestMultiqubitReport:
    def test_w_state_known_values(self):
        # equal-amplitude W on 3 qubits: lhs 8/9, each partner term 4/9
        psi = pc.w_class_state(np.ones(3) / math.sqrt(3))
        rep = polygamy_report_multiqubit(psi, 0)
        assert rep.mode == MODE_MULTIQUBIT
        assert rep.dims == (2, 2, 2)
        assert abs(rep.lhs_squared - 8 / 9) < 1e-12
        assert len(rep.rhs_terms) == 2
        for t in rep.rhs_terms:
            assert abs(t - 4 / 9) < 1e-12
        assert abs(rep.slack) < 1e-12

    def test_w_class_closed_form_terms(self):
        rng = np.random.default_rng(91)
        psi, a = _random_w(rng, 5)
        rep = polygamy_report_multiqubit(psi, 0)
        p0 = abs(a[0]) ** 2
        assert abs(rep.lhs_squared - 4 * p0 * (1 - p0)) < 1e-12
        for k in range(1, 5):
            assert abs(rep.rhs_terms[k - 1] - 4 * p0 * abs(a[k]) ** 2) < 1e-12

    def test_w_class_saturates(self):
        rng = np.random.default_rng(92)
        for trial in range(24):
            n = 3 + trial % 4
            psi, _ = _random_w(rng, n)
            rep = polygamy_report_multiqubit(psi, trial % n)
            assert abs(rep.slack) < 1e-12

    def test_ghz_has_unit_slack(self):
        rep = polygamy_report_multiqubit(pc.ghz_state(3), 0)
        assert abs(rep.lhs_squared - 1.0) < 1e-12
        assert abs(rep.rhs_squared_sum - 2.0) < 1e-12
        assert abs(rep.slack - 1.0) < 1e-12

    def test_product_state_all_zero(self):
        rep = polygamy_report_multiqubit(pc.basis_ket([2, 2, 2], [0, 1, 0]), 1)
        assert rep.lhs_squared == 0.0
        assert rep.rhs_terms == (0.0, 0.0)
        assert rep.slack == 0.0

    def test_two_qubits_allowed(self):
        # n = 2 degenerates to lhs = rhs term by construction
        psi = pc.haar_random_pure([2, 2], 5)
        rep = polygamy_report_multiqubit(psi, 0)
        assert len(rep.rhs_terms) == 1
        assert rep.slack >= -1e-10

    def test_rejects_qudits(self):
        with pytest.raises(ValueError, match="dims 2"):
            polygamy_report_multiqubit(pc.haar_random_pure([2, 3], 0), 0)


class TestGeneralReport:
    def test_needs_three_parts(self):
        with pytest.raises(ValueError, match="at least 3"):
            polygamy_report_general(pc.haar_random_pure([2, 2], 0), 0)

    def test_focus_range_checked(self):
        psi = pc.haar_random_pure([2, 2, 2], 1)
        with pytest.raises(ValueError, match="focus"):
            polygamy_report_general(psi, 3)
        with pytest.raises(ValueError, match="focus"):
            polygamy_report_general(psi, -1)

    def test_requires_normalized(self):
        psi = pc.Ket([2, 2, 2], np.array([0.5] + [0.0] * 7), normalized=False)
        with pytest.raises(ValueError, match="normalized"):
            polygamy_report_general(psi, 0)

    def test_agrees_with_multiqubit_on_qubits(self):
        rng = np.random.default_rng(93)
        for _ in range(10):
            psi = pc.haar_random_pure([2, 2, 2], rng)
            g = polygamy_report_general(psi, 1)
            m = polygamy_report_multiqubit(psi, 1)
            assert abs(g.lhs_squared - m.lhs_squared) < 1e-10
            for x, y in zip(g.rhs_terms, m.rhs_terms):
                assert abs(x - y) < 1e-10
            assert abs(g.slack - m.slack) < 1e-10

    def test_mixed_dims_nonnegative_slack(self):
        rng = np.random.default_rng(94)
        for dims in ([2, 3, 2], [3, 2, 4], [2, 2, 3]):
            for _ in range(4):
                psi = pc.haar_random_pure(dims, rng)
                rep = polygamy_report_general(psi, 0)
                assert rep.mode == MODE_GENERAL
                assert rep.slack >= -1e-9

    def test_partner_order_is_ascending(self):
        # focus in the middle: term 0 belongs to subsystem 0, term 1 to 2;
        # a state entangling the focus only with subsystem 2 shows it.
        pair = pc.haar_random_pure([2, 2], 17)
        amps = np.kron(np.array([1.0, 0.0]), pair.amplitudes)  # |0>_0 x psi_12
        psi = pc.Ket([2, 2, 2], amps)
        rep = polygamy_report_general(psi, 1)
        assert rep.rhs_terms[0] < 1e-12
        assert rep.rhs_terms[1] > 0.01


class TestReportObject:
    def test_sum_and_slack_properties(self):
        rep = PolygamyReport(MODE_GENERAL, (2, 2, 2), 0, 0.25, (0.125, 0.25))
        assert rep.rhs_squared_sum == 0.375
        assert rep.slack == 0.125

    def test_csv_row_layout(self):
        rep = PolygamyReport(MODE_MULTIQUBIT, (2, 2, 2, 2), 1, 0.5, (0.25, 0.0, 0.5))
        row = rep.csv_row("s007")
        header = csv_header(3)
        assert len(row) == len(header) == len(CSV_FIXED_FIELDS) + 3
        assert header[:8] == list(CSV_FIXED_FIELDS)
        assert header[8:] == ["rhs_term_1", "rhs_term_2", "rhs_term_3"]
        assert row[0] == "s007"
        assert row[1] == MODE_MULTIQUBIT
        assert row[2] == "4"
        assert row[3] == "2x2x2x2"
        assert row[4] == "1"
        assert float(row[5]) == 0.5
        assert float(row[6]) == 0.75
        assert float(row[7]) == 0.25

    def test_float_format_round_trips(self):
        for x in (1 / 3, 2 / 3, 1e-17, 0.1 + 0.2, math.pi):
            assert float(format_float(x)) == x

    def test_rows_hold_shortest_repr(self):
        rep = PolygamyReport(MODE_GENERAL, (3, 3, 3), 2, 1 / 3, (1 / 7,))
        row = rep.csv_row("x")
        assert float(row[5]) == 1 / 3
        assert float(row[8]) == 1 / 7


class TestSubspaceDiagnostic:
    def test_qubits_reproduce_cut_exactly(self):
        rng = np.random.default_rng(95)
        for n in (3, 4, 5):
            psi = pc.haar_random_pure([2] * n, rng)
            cut_sq, total = subspace_sum_diagnostic(psi, n // 2)
            assert abs(cut_sq - total) < 1e-12

    def test_qutrits_overcount(self):
        rng = np.random.default_rng(96)
        for _ in range(5):
            psi = pc.haar_random_pure([3, 3, 3], rng)
            cut_sq, total = subspace_sum_diagnostic(psi, 0)
            assert total >= cut_sq - 1e-12

    def test_ghz_qutrit_saturates(self):
        # sparse support: every two-level box is itself a GHZ pair, so the
        # box sum reproduces the cut even above qubits
        cut_sq, total = subspace_sum_diagnostic(pc.ghz_state(3, 3), 0)
        assert abs(total - cut_sq) < 1e-12

    def test_generic_qutrit_overcount_is_strict(self):
        psi = pc.haar_random_pure([3, 3, 3], 96)
        cut_sq, total = subspace_sum_diagnostic(psi, 0)
        assert total > cut_sq + 0.1

    def test_product_state_zero(self):
        cut_sq, total = subspace_sum_diagnostic(pc.basis_ket([3, 2, 3], [2, 0, 1]), 0)
        assert cut_sq == 0.0
        assert total == 0.0

    def test_tuple_cap_enforced(self):
        # dims [5]*7 has 10^7 pair tuples, over the 10^6 cap
        psi = pc.basis_ket([5] * 7, [0] * 7)
        with pytest.raises(ValueError, match="cap"):
            subspace_sum_diagnostic(psi, 0)

    def test_focus_checked(self):
        psi = pc.haar_random_pure([2, 2, 2], 3)
        with pytest.raises(ValueError, match="focus"):
            subspace_sum_diagnostic(psi, 5)
        with pytest.raises(ValueError, match="at least 3"):
            subspace_sum_diagnostic(pc.haar_random_pure([2, 2], 3), 0)
