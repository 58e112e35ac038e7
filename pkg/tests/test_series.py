import math

import mpmath
import numpy as np
import pytest

from oracles import mobius_brute
from ramsum.arith import SumParams
from ramsum.series import (
    NearZetaZeroError,
    convergence_sweep,
    convergence_sweep_mp,
    dirichlet_partial,
    dirichlet_target,
    fit_growth_exponent,
    growth_exponent,
    mangoldt_series_check,
    windowed_rms,
)


class TestDirichletPartial:
    def test_first_term(self):
        assert dirichlet_partial(2.5 + 1j, SumParams(24, 2), 1) == 1

    def test_inverse_zeta_two(self):
        partial = dirichlet_partial(2, SumParams(1, 1), 10**5)
        assert partial == pytest.approx(6 / math.pi**2, abs=1e-5)

    def test_against_mobius_brute_force(self):
        direct = math.fsum(mobius_brute(q) / q**3 for q in range(1, 2001))
        assert dirichlet_partial(3, SumParams(1, 1), 2000).real == pytest.approx(direct, abs=1e-15)

    @pytest.mark.parametrize("s0, n, beta", [(1.5, 24, 2), (2 + 1j, 72, 3), (2, 12, 1)])
    def test_power_form_limit(self, s0, n, beta):
        # sum c_q / q^{beta s0} -> sigma_{1-s0}(n) / zeta(beta s0)
        divs = [d for d in range(1, n + 1) if n % d**beta == 0]
        with mpmath.workdps(30):
            s0m = mpmath.mpc(complex(s0).real, complex(s0).imag)
            ref = complex(mpmath.fsum(mpmath.mpf(d) ** (beta * (1 - s0m)) for d in divs)
                          / mpmath.zeta(beta * s0m))
        assert abs(dirichlet_partial(beta * s0, SumParams(n, beta), 10**5) - ref) < 1e-3

    def test_rejects_zero_cutoff(self):
        with pytest.raises(ValueError):
            dirichlet_partial(2, SumParams(1, 1), 0)


class TestDirichletTarget:
    @pytest.mark.parametrize("n, beta", [(24, 1), (24, 2), (1, 1)])
    def test_zero_at_one(self, n, beta):
        assert dirichlet_target(1, SumParams(n, beta)) == 0

    def test_sigma_zero_over_zeta(self):
        # squares dividing 24: 1 and 4, so sigma_0^(2)(24) = 2
        assert dirichlet_target(2, SumParams(24, 2)) == pytest.approx(2 / (math.pi**2 / 6), rel=1e-12)

    def test_near_zeta_zero(self, table):
        with pytest.raises(NearZetaZeroError):
            dirichlet_target(complex(0.5, table.ordinates[0]), SumParams(1, 1))


class TestConvergenceSweep:
    def test_aligned_fields(self):
        diag = convergence_sweep(2, SumParams(24, 2), [10, 100, 1000])
        assert len(diag.partials) == len(diag.residuals) == 3
        assert all(r >= 0 for r in diag.residuals)
        assert diag.partials[-1] == pytest.approx(dirichlet_partial(2, SumParams(24, 2), 1000), abs=1e-15)

    @pytest.mark.parametrize("s, beta", [(2, 2), (3, 3)])
    def test_residual_tends_to_zero(self, s, beta):
        diag = convergence_sweep(s, SumParams(24, beta), [10, 100, 1000])
        assert diag.residuals[2] < diag.residuals[0]

    def test_line_one_oscillates_towards_zero(self):
        diag = convergence_sweep(1, SumParams(24, 1), list(range(1, 1001)))
        assert windowed_rms(diag.partials, 500, 1000) < windowed_rms(diag.partials, 1, 500)

    def test_rejects_unsorted_cutoffs(self):
        with pytest.raises(ValueError):
            convergence_sweep(2, SumParams(1, 1), [100, 10])

    def test_extended_precision_agrees(self):
        float_diag = convergence_sweep(1.5, SumParams(24, 1), [100, 1000])
        mp_diag = convergence_sweep_mp(1.5, SumParams(24, 1), [100, 1000])
        assert np.allclose(float_diag.residuals, mp_diag.residuals, rtol=1e-9)

    def test_extended_precision_resolves_tiny_residuals(self):
        diag = convergence_sweep_mp(6, SumParams(24, 3), [1000, 10000])
        assert 0 < diag.residuals[1] < diag.residuals[0] < 1e-15


class TestMangoldtSeries:
    def test_classical(self):
        partial, target = mangoldt_series_check(2, 1, 1, 10**5)
        assert target == pytest.approx(-float(mpmath.zeta(2, derivative=1)) / (math.pi**2 / 6), abs=1e-12)
        assert abs(partial - target) < 1e-3

    def test_generalized(self):
        partial, target = mangoldt_series_check(3, 4, 2, 10**5)
        assert abs(partial - target) < 1e-3

    def test_first_term_vanishes(self):
        partial, _ = mangoldt_series_check(2, 6, 1, 1)
        assert partial == 0

    def test_requires_half_plane(self):
        with pytest.raises(ValueError):
            mangoldt_series_check(1, 1, 1, 100)


class TestGrowth:
    def test_mertens_exponent(self):
        assert 0 < growth_exponent(SumParams(1, 1), 10**5) < 1

    def test_n24(self):
        assert growth_exponent(SumParams(24, 1), 10**5) < 1

    def test_vanishing_tail_flag(self):
        values = np.zeros(1025)
        values[1:5] = [1, 2, 1, 0]
        assert math.isnan(fit_growth_exponent(values))

    def test_rejects_small_range(self):
        with pytest.raises(ValueError):
            growth_exponent(SumParams(1, 1), 50)

    def test_recovers_known_power(self):
        x = np.arange(0, 2**14 + 1, dtype=float)
        assert fit_growth_exponent(x**0.75) == pytest.approx(0.75, abs=1e-9)
