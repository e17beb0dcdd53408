"""Torus quadrature: grids, convergence contract, expectations, nabla."""

import numpy as np
import pytest

from ellselberg import (
    BalancingMode,
    DomainError,
    Nomes,
    NonConvergenceError,
    ParameterSet,
    QuadratureGrid,
    c_constant,
    default_budget,
    expectation,
    j_closed,
    nabla_expectation,
    nabla_quad,
    phi_test_function,
    psi,
    psi_tilde,
    torus_integrate,
)
from ellselberg.quadrature import MIN_POINTS, _nabla_pointwise

NM = Nomes(0.05, 0.12)
T = 0.45
A5 = [0.63, 0.58 * np.exp(0.7j), -0.61, 0.64 * np.exp(-1.1j), 0.55]


def rel(a, b):
    a, b = complex(a), complex(b)
    d = max(abs(a), abs(b))
    return abs(a - b) / d if d > 1e-12 else abs(a - b)


class TestGrid:
    def test_nodes_on_unit_circle(self):
        grid = QuadratureGrid(2, 8, 0.25).nodes()
        assert len(grid) == 2
        for axis in grid:
            assert axis.shape == (64,)
            assert np.allclose(np.abs(axis), 1.0)

    def test_minimum_size(self):
        with pytest.raises(DomainError):
            QuadratureGrid(1, 2, 0.0)

    def test_default_budget_decreases_with_rank(self):
        assert default_budget(1) >= default_budget(2) >= default_budget(3)


class TestTorusIntegrate:
    def test_constant(self):
        res = torus_integrate(lambda z: np.ones_like(z[0]), 1, 1e-12)
        assert res.value == pytest.approx(1.0)
        assert res.converged
        assert res.N_used == MIN_POINTS * 2

    def test_monomial_integrates_to_zero(self):
        res = torus_integrate(lambda z: z[0] ** 3, 1, 1e-13)
        assert abs(res.value) < 1e-15

    def test_geometric_kernel(self):
        # 1 / ((1 - u z)(1 - u/z)) integrates to 1/(1 - u^2)
        res = torus_integrate(
            lambda z: 1.0 / ((1 - 0.5 * z[0]) * (1 - 0.5 / z[0])), 1, 1e-13
        )
        assert rel(res.value, 4.0 / 3.0) < 1e-13

    def test_history_tracks_ladder(self):
        res = torus_integrate(lambda z: 1.0 / (1 - 0.5 * z[0]), 1, 1e-13)
        ns = [n for n, _ in res.history]
        assert ns == sorted(ns)
        assert res.history[-1][0] == res.N_used
        assert res.history[-1][1] == res.err_est

    def test_non_convergence_carries_estimates(self):
        f = lambda z: 1.0 / ((1 - 0.96 * z[0]) * (1 - 0.96 / z[0]))
        with pytest.raises(NonConvergenceError) as exc_info:
            torus_integrate(f, 1, 1e-14, budget=32)
        coarse, fine = exc_info.value.estimates
        assert fine > 0 and coarse > 0

    def test_budget_floor(self):
        with pytest.raises(DomainError):
            torus_integrate(lambda z: z[0], 1, 1e-10, budget=8)

    def test_err_est_is_absolute_difference(self):
        res = torus_integrate(lambda z: 1.0 / (1 - 0.5 * z[0]), 1, 1e-13)
        assert res.err_est <= 1e-13

    @pytest.mark.parametrize("offset", [0.0, 0.37])
    def test_offset_independence(self, offset):
        ps = ParameterSet.solved(1, T, A5, NM, BalancingMode.PQ)
        res = torus_integrate(lambda z: psi(z, ps, NM), 1, 1e-10, offset=offset)
        rhs = c_constant(1, NM, T) * j_closed(ps, NM)
        assert rel(res.value, rhs) < 1e-10

    def test_exponential_convergence(self):
        # error drops at least 10x per doubling until roundoff
        ps = ParameterSet.solved(1, T, A5, NM, BalancingMode.PQ)
        values = {}
        for N in (32, 64, 128, 256):
            grid = QuadratureGrid(1, N, 0.0).nodes()
            values[N] = complex(np.mean(psi(grid, ps, NM)))
        e32 = abs(values[32] - values[64])
        e64 = abs(values[64] - values[128])
        e128 = abs(values[128] - values[256])
        floor = 1e-13 * abs(values[256])
        assert e32 >= 10 * e64 or e64 <= floor
        assert e64 >= 10 * e128 or e128 <= floor


class TestExpectation:
    def test_unit_phi_alias(self):
        ps = ParameterSet.solved(1, T, A5, NM, BalancingMode.PQ)
        sub = ps.with_entry(6, NM.p * ps.a[5])
        lhs = expectation(None, ps, NM, 1e-10).value
        rhs = torus_integrate(lambda z: psi(z, sub, NM), 1, 1e-10).value
        assert rel(lhs, rhs) < 1e-12


def one_set(n):
    if n == 1:
        return ParameterSet.solved(1, T, A5, Nomes(0.05, 0.12), BalancingMode.ONE), Nomes(0.05, 0.12)
    a5b = [0.66, 0.63 * np.exp(0.9j), -0.645, 0.67 * np.exp(-0.5j), 0.62]
    return ParameterSet.solved(2, 0.5, a5b, Nomes(0.02, 0.12), BalancingMode.ONE), Nomes(0.02, 0.12)


class TestNabla:
    def test_fused_matches_literal_n1(self):
        ps, nm = one_set(1)
        z = [complex(np.exp(0.91j))]
        g, href = _nabla_pointwise(1, 1, z, ps, nm, None, want_reference=True)
        h = phi_test_function(1, 1, ps, nm, z) * psi_tilde(z, ps, nm)
        zq = [nm.q * z[0]]
        hq = phi_test_function(1, 1, ps, nm, zq) * psi_tilde(zq, ps, nm)
        assert rel(g, h - hq) < 1e-12
        assert rel(href, abs(h)) < 1e-12

    @pytest.mark.parametrize("r,i", [(1, 1), (1, 2), (2, 1), (2, 2)])
    def test_fused_matches_literal_n2(self, r, i):
        ps, nm = one_set(2)
        rng = np.random.default_rng(3)
        z = [complex(np.exp(2j * np.pi * rng.random())) for _ in range(2)]
        g, _ = _nabla_pointwise(r, i, z, ps, nm, None, want_reference=True)
        h = phi_test_function(r, i, ps, nm, z) * psi_tilde(z, ps, nm)
        zq = list(z)
        zq[i - 1] = nm.q * zq[i - 1]
        hq = phi_test_function(r, i, ps, nm, zq) * psi_tilde(zq, ps, nm)
        assert rel(g, h - hq) < 1e-12

    def test_vanishing_n1(self):
        ps, nm = one_set(1)
        res, ref = nabla_quad(1, 1, ps, nm, 1e-10)
        assert abs(res.value) < 1e-10 * ref

    def test_expectation_wrapper(self):
        ps, nm = one_set(1)
        val = nabla_expectation(1, 1, ps, nm, 1e-9)
        assert isinstance(val, complex)

    def test_index_validation(self):
        ps, nm = one_set(1)
        with pytest.raises(DomainError):
            nabla_quad(2, 1, ps, nm, 1e-8)
        with pytest.raises(DomainError):
            nabla_quad(1, 2, ps, nm, 1e-8)

    def test_requires_nonzero_p(self):
        nm0 = Nomes(0.0, 0.12)
        ps = ParameterSet.solved(1, T, A5, nm0, BalancingMode.ONE)
        with pytest.raises(DomainError):
            nabla_quad(1, 1, ps, nm0, 1e-8)

    def test_collision_grid_is_finite(self):
        # offset 0 puts z = 1 (and z_i = z_j) on the grid; the kernels carry
        # exact zeros there instead of infinities
        ps, nm = one_set(2)
        grid = QuadratureGrid(2, 16, 0.0).nodes()
        assert np.all(np.isfinite(psi_tilde(grid, ps, nm)))
        g, _ = _nabla_pointwise(1, 1, grid, ps, nm, None)
        assert np.all(np.isfinite(g))
