import cmath
import math

import numpy as np
import pytest

from oracles import a_closed_form
from ramsum._numerics import QuadratureError
from ramsum.arith import SumParams, cohen_sum, sigma_at
from ramsum.bartz import (
    PoleProximityError,
    a_series,
    a_series_double_sum,
    a_series_statement_form,
    evaluate_decomposition,
    functional_equation_check,
    functional_equation_residual,
    residue_probe,
    varpi1,
    varpi1_continued,
    varpi2,
    varpi3,
    varpi3_tail_bound,
    varpi_continued,
    varpi_zero_sum,
)
from ramsum.config import TruncationConfig

P1 = SumParams(1, 1)
P12 = SumParams(12, 1)


class TestZeroSum:
    def test_empty(self, table):
        assert varpi_zero_sum(1 + 1j, P1, table, 0) == 0

    def test_requires_upper_half_plane(self, table):
        with pytest.raises(ValueError):
            varpi_zero_sum(1 - 0.5j, P1, table, 10)

    def test_count_beyond_table(self, table):
        with pytest.raises(ValueError):
            varpi_zero_sum(1 + 1j, P1, table, 101)

    def test_first_zero_dominates_high_up(self, table):
        z = 5j
        one = varpi_zero_sum(z, P1, table, 1)
        full = varpi_zero_sum(z, P1, table, 100)
        gamma2 = table.ordinates[1]
        assert abs(one - full) < 10 * math.exp(-5 * gamma2)

    def test_conjugate_symmetry(self, table):
        # the lower-half analogue over conj(rho) at conj(z) is the conjugate
        z = 1.3 + 0.7j
        rho = table.rho(100)
        w = sigma_at(rho.conj(), P12, 1.0) / np.conj(table.dzeta(100))
        lower = np.sum(w * np.exp(rho.conj() * z.conjugate()))
        assert abs(lower - np.conj(varpi_zero_sum(z, P12, table, 100))) < 1e-15

    def test_vectorized(self, table):
        zs = np.array([1 + 1j, 2 + 0.5j])
        out = varpi_zero_sum(zs, P1, table, 50)
        assert out[1] == varpi_zero_sum(2 + 0.5j, P1, table, 50)


class TestVarpi1:
    def test_bound_high_up(self):
        z = 1 + 5j
        # sup |1/zeta(-1/2 + it)| < 5, |sigma_{3/2}| <= n^{beta+3/2}
        assert abs(varpi1(z, P1)) <= 5 * math.exp(-z.real / 2) / z.imag

    def test_step_halving(self):
        assert abs(varpi1(1 + 1j, P12, step=0.25) - varpi1(1 + 1j, P12, step=0.125)) < 1e-8

    def test_grows_towards_real_axis_within_bound(self):
        values = [abs(varpi1(1 + 1j * y, P1)) for y in (0.4, 0.2, 0.1, 0.05)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(v < 5 * math.exp(-0.5) / y for v, y in zip(values, (0.4, 0.2, 0.1, 0.05)))

    def test_explicit_cut_too_short(self):
        with pytest.raises(QuadratureError):
            varpi1(1 + 0.5j, P1, t_cut=2.0)

    def test_requires_upper_half_plane(self):
        with pytest.raises(ValueError):
            varpi1(1.0, P1)


class TestVarpi2:
    def test_real_at_real_z(self):
        value = varpi2(0, P1)
        assert value.imag == 0
        assert math.isfinite(value.real)

    def test_step_halving(self):
        assert abs(varpi2(1 + 1j, P12, step=0.125) - varpi2(1 + 1j, P12, step=0.0625)) < 1e-8


class TestVarpi3:
    def test_single_term(self):
        z = 0.7 + 0.3j
        assert varpi3(z, P1, 1) == pytest.approx(-cmath.exp(1.5 * z) / z, abs=1e-15)

    def test_dominant_term_near_log_two(self):
        z = math.log(2) + 1e-6
        expected = cmath.exp(1.5 * z) * 2**-1.5 / (z - math.log(2))
        assert varpi3(z, P1, 100) == pytest.approx(expected, rel=1e-4)

    def test_pole_proximity(self):
        with pytest.raises(PoleProximityError):
            varpi3(math.log(3) + 1e-12, P1, 10)

    def test_tail_bound_covers_truncation(self):
        z = 2 + 0.5j
        diff = abs(varpi3(z, P12, 20000) - varpi3(z, P12, 2000))
        assert diff < varpi3_tail_bound(z, P12, 2000)


class TestDecomposition:
    @pytest.mark.parametrize("z", [1 + 0.5j, 2 + 1j, 0.5 + 2j])
    def test_identity(self, table, z):
        ev = evaluate_decomposition(z, P12, table)
        assert abs(ev.decomposition_residual) < 1e-3

    def test_residual_definition(self, table):
        ev = evaluate_decomposition(1 + 0.5j, P1, table)
        assert ev.decomposition_residual == 2j * math.pi * ev.varpi_zero_sum - (ev.varpi1 + ev.varpi2 + ev.varpi3)


class TestContinuation:
    def test_continued_line_integral_matches_original(self):
        for z in (1 + 0.5j, 2 + 1.5j):
            assert abs(varpi1_continued(z, P12) - varpi1(z, P12)) < 1e-7

    def test_continuation_matches_zero_sum(self, table):
        z = 1.5 + 0.8j
        assert abs(varpi_continued(z, P1) - varpi_zero_sum(z, P1, table, 100)) < 1e-4

    def test_strip_limit(self):
        with pytest.raises(ValueError):
            varpi_continued(1 + 3.5j, P1)


class TestASeries:
    def test_decays(self):
        # leading behaviour (2 pi)^2 sigma_3(12) e^{-2z} / zeta(3)
        z = 25.0
        limit = (2 * math.pi) ** 2 * 2044 / 1.2020569031595942
        assert a_series(z, P12).real * math.exp(2 * z) == pytest.approx(limit, rel=1e-9)

    def test_real_for_real_z(self):
        assert a_series(1.5, P12).imag == 0

    @pytest.mark.parametrize("z, params", [(3, P1), (2 + 0.5j, P1), (2 + 1j, P12)])
    def test_double_sum_oracle(self, z, params):
        assert abs(a_series(z, params) - a_series_double_sum(z, params, Q=10**4, kmax=40)) < 1e-4

    @pytest.mark.parametrize("z, n", [(3, 1), (1 + 1j, 1), (2.5 + 0.5j, 12)])
    def test_closed_form_oracle(self, z, n):
        ref = a_closed_form(z, n, 1)
        assert abs(a_series(z, SumParams(n, 1)) - ref) < 1e-4 * max(1.0, abs(ref))

    def test_truncated_matches_full(self):
        assert a_series(2 + 1j, P12, kmax=60) == pytest.approx(a_series(2 + 1j, P12), rel=1e-12)

    def test_forms_differ(self):
        assert abs(a_series_statement_form(2 + 1j, P1) - a_series(2 + 1j, P1)) > 0.1


class TestFunctionalEquation:
    @pytest.mark.parametrize("z", [3 + 1j, 1 + 0.5j])
    def test_residual_small(self, table, z):
        assert abs(functional_equation_residual(z, P12, table)) < 1e-3

    def test_more_zeros_reduce_residual(self, table):
        z = 2 + 0.05j
        r25 = abs(functional_equation_residual(z, P1, table, TruncationConfig(zero_pairs=25)))
        r100 = abs(functional_equation_residual(z, P1, table, TruncationConfig(zero_pairs=100)))
        assert r100 < r25

    def test_statement_form_fails(self, table):
        check = functional_equation_check(2 + 1j, P1, table)
        assert abs(check.residual_derived) < 1e-3 < abs(check.residual_stated)

    def test_requires_strip(self, table):
        with pytest.raises(ValueError):
            functional_equation_residual(2 - 1j, P1, table)


class TestResidue:
    @pytest.mark.parametrize("q", [1, 2, 3])
    def test_matches_cohen_sum(self, q):
        expected = -cohen_sum(q, P1) / (2j * math.pi)
        assert abs(residue_probe(q, P1) - expected) < 1e-4 * abs(expected)

    def test_no_pole_where_coefficient_vanishes(self):
        with pytest.raises(ValueError, match="not a pole"):
            residue_probe(4, P1)

    def test_eps_range(self):
        with pytest.raises(ValueError):
            residue_probe(2, P1, eps=0.1)

    def test_neighbouring_pole(self):
        # log 9999 and log 10000 are 1e-4 apart; c_9999(1) = 0 but c_10001(1) != 0
        with pytest.raises(ValueError, match="reaches"):
            residue_probe(10001, P1, eps=5e-3, cfg=TruncationConfig(q_cutoff=10002))
