"""Torus quadrature: product trapezoid rule, expectations, and nabla images.

The rule is the equal-weight mean over the product grid
z_i = exp(2 pi i (k_i + offset)/N), which integrates periodic analytic
functions against the measure (2 pi i)^-n dz_1...dz_n/(z_1...z_n) with
spectral accuracy.  N doubles from 16 until |I_N - I_{N/2}| meets the
tolerance or the per-circle budget is exhausted.

Means are taken with numpy's fixed pairwise reduction over a fixed node
ordering, so a given (N, offset, parameters) always reproduces the same
bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError
from .integrand import (
    _gamma_pm2,
    _gamma_pm2_recip,
    _gamma_pm_recip,
    _z_list,
    psi_tilde,
)
from .invariants import ParameterSet, fundamental_invariant
from .qseries import Nomes, TruncationPolicy, elliptic_gamma, elliptic_gamma_recip, gamma_pm

MIN_POINTS = 16


def default_budget(n: int) -> int:
    """Per-circle point cap: 512 for n=1, 256 for n=2, 64 beyond."""
    return {1: 512, 2: 256}.get(n, 64)


@dataclass(frozen=True)
class QuadratureGrid:
    """Product grid on the n-torus with N points per circle."""

    n: int
    N: int
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("grid dimension must be >= 1")
        if self.N < 4:
            raise DomainError("need at least 4 points per circle")
        if not 0 <= self.offset < 1:
            raise DomainError("offset must lie in [0, 1)")

    def nodes(self) -> list[np.ndarray]:
        """The flattened product grid as n arrays of length N^n."""
        idx = np.indices((self.N,) * self.n).reshape(self.n, -1)
        arr = np.exp(2j * np.pi * (idx + self.offset) / self.N)
        return [arr[i] for i in range(self.n)]


@dataclass(frozen=True)
class QuadResult:
    """Outcome of a refinement ladder.

    ``history`` records (N, |I_N - I_{N/2}|) for every completed doubling;
    ``converged`` implies the final entry met the requested tolerance.
    """

    value: complex
    err_est: float
    N_used: int
    converged: bool
    history: tuple = ()


def _ladder(f, n, tol, budget, offset):
    prev = None
    history = []
    value = None
    err = np.inf
    N = MIN_POINTS
    while N <= budget:
        grid = QuadratureGrid(n, N, offset)
        vals = np.asarray(f(grid.nodes()))
        value = complex(np.mean(vals))
        if prev is not None:
            err = abs(value - prev)
            history.append((N, err))
            if err <= tol:
                return QuadResult(value, err, N, True, tuple(history))
        prev = value
        N *= 2
    return QuadResult(
        value if value is not None else 0j,
        float(err),
        N // 2,
        False,
        tuple(history),
    )


def torus_integrate(
    f,
    n: int,
    tol: float,
    budget: int | None = None,
    offset: float = 0.0,
) -> QuadResult:
    """Integrate f over the n-torus against the normalized measure.

    f receives the grid as a list of n equal-length coordinate arrays and
    must return the elementwise values.  Raises NonConvergenceError when
    the budget is exhausted with err_est still above tol.
    """
    if budget is None:
        budget = default_budget(n)
    if budget < MIN_POINTS:
        raise DomainError(f"budget {budget} below the minimum grid {MIN_POINTS}")
    res = _ladder(f, n, tol, budget, offset)
    if not res.converged:
        coarse = res.history[-2][1] if len(res.history) >= 2 else np.inf
        raise NonConvergenceError(
            f"quadrature stalled at N={res.N_used}: err_est={res.err_est:.3e} > tol={tol:.3e}",
            estimates=(float(coarse), float(res.err_est)),
        )
    return res


def expectation(
    phi,
    params: ParameterSet,
    nomes: Nomes,
    tol: float,
    budget: int | None = None,
    offset: float = 0.0,
    policy: TruncationPolicy | None = None,
) -> QuadResult:
    """<phi> = integral of phi(z) Psi~(z) over the torus; phi=None means 1."""

    def f(z):
        w = psi_tilde(z, params, nomes, policy)
        return w if phi is None else phi(z) * w

    return torus_integrate(f, params.n, tol, budget, offset)


def _s_factor(w, params, nomes, policy):
    """Single-variable Psi~ factor: Gamma(p a6 w^+-1) prod Gamma(a_m w^+-1) / Gamma(w^+-2)."""
    out = gamma_pm(nomes.p * params.a[5], w, nomes, policy)
    for am in params.a[:5]:
        out = out * gamma_pm(am, w, nomes, policy)
    out = out * elliptic_gamma_recip(w**2, nomes, policy)
    out = out * elliptic_gamma_recip(w**-2, nomes, policy)
    return out


def _x_factor(u, v, t, nomes, policy):
    """Coupling Gamma(t u^+-1 v^+-1) / Gamma(u^+-1 v^+-1)."""
    return _gamma_pm2(t, u, v, nomes, policy) * _gamma_pm2_recip(1.0, u, v, nomes, policy)


def _s_phi(w, params, nomes, policy):
    """Fused single-variable factor of phi_{r,i} Psi~ in the shifted coordinate.

    Combines F_i^-(w) with the w-factor of Psi~ through
    theta(u; p) Gamma(u; p, q) = Gamma(q u; p, q), leaving only Gamma
    evaluations that stay clear of torus collision points:

      w^2 (-a_6/w) Gamma(p a_6 w) Gamma(p q a_6 / w)
        * prod_{m<=5} Gamma(a_m w) Gamma(q a_m / w) / [Gamma(w^2) Gamma(q/w^2)]
    """
    p, q = nomes.p, nomes.q
    a6 = params.a[5]
    out = (
        w**2
        * (-a6 / w)
        * elliptic_gamma(p * a6 * w, nomes, policy)
        * elliptic_gamma(p * q * a6 / w, nomes, policy)
    )
    for am in params.a[:5]:
        out = out * elliptic_gamma(am * w, nomes, policy)
        out = out * elliptic_gamma(q * am / w, nomes, policy)
    out = out * elliptic_gamma_recip(w**2, nomes, policy)
    out = out * elliptic_gamma_recip(q / w**2, nomes, policy)
    return out


def _x_phi(u, v, t, nomes, policy):
    """Fused coupling of phi_{r,i} Psi~ between the shifted u and a spectator v:

    Gamma(t u v^+-1) Gamma(q t v^+-1 / u) / [Gamma(u v^+-1) Gamma(q v^+-1 / u)].
    """
    q = nomes.q
    out = gamma_pm(t * u, v, nomes, policy) * gamma_pm(q * t / u, v, nomes, policy)
    out = out * _gamma_pm_recip(u, v, nomes, policy)
    out = out * _gamma_pm_recip(q / u, v, nomes, policy)
    return out


def _nabla_pointwise(r, i, z, params, nomes, policy, want_reference=False):
    """G(z) = H(z) - H(z | z_i -> q z_i) for H = phi_{r,i} Psi~, fused form.

    Returns (G, |H|) when want_reference is set, else (G, None).
    """
    n = params.n
    zs = _z_list(z, n)
    a1, a6, t = params.a[0], params.a[5], params.t
    rest = [zs[j] for j in range(n) if j != i - 1]
    common = fundamental_invariant(r - 1, a1, a6, rest, t, nomes.p, policy)
    for w in rest:
        common = common * _s_factor(w, params, nomes, policy)
    for j in range(len(rest)):
        for k in range(j + 1, len(rest)):
            common = common * _x_factor(rest[j], rest[k], t, nomes, policy)

    def term(w):
        out = _s_phi(w, params, nomes, policy)
        for v in rest:
            out = out * _x_phi(w, v, t, nomes, policy)
        return out

    zi = zs[i - 1]
    t_plain = term(zi)
    g = common * (t_plain - term(nomes.q * zi))
    if want_reference:
        return g, np.abs(common * t_plain)
    return g, None


def nabla_quad(
    r: int,
    i: int,
    params: ParameterSet,
    nomes: Nomes,
    tol: float,
    budget: int | None = None,
    offset: float = 0.0,
    policy: TruncationPolicy | None = None,
) -> tuple[QuadResult, float]:
    """Quadrature of the nabla image of phi_{r,i} plus a magnitude reference.

    tol is relative to the reference scale <|phi Psi~|>, estimated on a
    coarse grid first; the returned reference is recomputed on the final
    grid.  The value is expected to vanish up to quadrature error.
    """
    n = params.n
    if not 1 <= r <= n:
        raise DomainError(f"need 1 <= r <= n, got r={r}")
    if not 1 <= i <= n:
        raise DomainError(f"need 1 <= i <= n, got i={i}")
    if nomes.p == 0:
        raise DomainError("the fused nabla image needs p != 0")
    if budget is None:
        budget = default_budget(n)

    coarse = QuadratureGrid(n, MIN_POINTS, offset).nodes()
    _, href = _nabla_pointwise(r, i, coarse, params, nomes, policy, want_reference=True)
    scale = float(np.mean(href))
    if scale == 0.0:
        scale = 1.0

    def f(z):
        g, _ = _nabla_pointwise(r, i, z, params, nomes, policy)
        return g

    res = torus_integrate(f, n, tol * scale, budget, offset)
    final = QuadratureGrid(n, res.N_used, offset).nodes()
    _, href = _nabla_pointwise(r, i, final, params, nomes, policy, want_reference=True)
    return res, float(np.mean(href))


def nabla_expectation(
    r: int,
    i: int,
    params: ParameterSet,
    nomes: Nomes,
    tol: float,
    budget: int | None = None,
) -> complex:
    """<nabla_{q,z_i} phi_{r,i}>; vanishes for parameters in the safe box."""
    res, _ = nabla_quad(r, i, params, nomes, tol, budget)
    return res.value
