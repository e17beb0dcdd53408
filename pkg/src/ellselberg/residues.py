"""Residue corrections, pinch limits, and the analytically continued n=1 integral.

The kernel's z_1-poles sit on the orbits p^mu q^nu a_m (inward) and their
reciprocals (outward).  When one parameter crosses the unit circle, the
contour picks up the residue pair at z = a and z = 1/a; when a_1 a_2 -> 1
two orbits pinch the contour and the simple factor (1 - a_1 a_2) Gamma(a_1 a_2)
tends to 1/((p;p)_inf (q;q)_inf), which reduces rank n to n-1.
"""

from __future__ import annotations

from .errors import DomainError
from .integrand import psi
from .invariants import ParameterSet
from .qseries import (
    Nomes,
    TruncationPolicy,
    elliptic_gamma,
    gamma_pm,
    qpoch_inf,
)
from .quadrature import default_budget, torus_integrate

# |a| closer to the unit circle than this leaves the quadrature no room.
TORUS_CLEARANCE = 1e-3


def _euler_pair(nomes: Nomes, policy) -> complex:
    return qpoch_inf(nomes.p, nomes.p, policy) * qpoch_inf(nomes.q, nomes.q, policy)


def residue_gamma_pm(a, nomes: Nomes, policy: TruncationPolicy | None = None) -> complex:
    """Residue of Gamma(a z^{+-1}) dz/z at z = a: Gamma(a^2)/((p;p)(q;q)).

    The companion residue at z = a^{-1} is the negation of this value.
    """
    return elliptic_gamma(a * a, nomes, policy) / _euler_pair(nomes, policy)


def continued_integral_n1(
    params: ParameterSet,
    nomes: Nomes,
    tol: float,
    budget: int | None = None,
    offset: float = 0.0,
    policy: TruncationPolicy | None = None,
) -> complex:
    """Holomorphic continuation of the n=1 torus integral of Psi.

    With every parameter inside the unit disk this is the plain integral.
    When exactly one parameter a sits in 1 < |a| < |q|^(-1/2), the contour
    keeps the pole orbit of a inside and its reciprocal orbit outside, which
    adds the residue pair

        2 prod_{m != a} Gamma(a_m a^{+-1}) / ((p;p)(q;q) Gamma(a^-2)).
    """
    if params.n != 1:
        raise DomainError("the continued integral is implemented for n = 1")
    outside = [m for m, v in enumerate(params.a) if abs(v) > 1]
    if len(outside) > 1:
        raise DomainError("at most one parameter may leave the unit disk")
    for v in params.a:
        if abs(abs(v) - 1.0) < TORUS_CLEARANCE:
            raise DomainError(
                f"parameter {v} within {TORUS_CLEARANCE} of the unit circle"
            )
    if budget is None:
        budget = default_budget(1)
    value = torus_integrate(
        lambda z: psi(z, params, nomes, policy), 1, tol, budget, offset
    ).value
    if outside:
        a = params.a[outside[0]]
        if abs(a) >= abs(nomes.q) ** -0.5:
            raise DomainError(
                f"|a|={abs(a):.4f} outside the continuation window "
                f"(1, |q|^-1/2 = {abs(nomes.q) ** -0.5:.4f})"
            )
        corr = 2.0 + 0.0j
        for m, v in enumerate(params.a):
            if m != outside[0]:
                corr *= gamma_pm(v, a, nomes, policy)
        corr /= _euler_pair(nomes, policy) * elliptic_gamma(a**-2, nomes, policy)
        value += corr
    return value


def lim_pinch_J(
    params: ParameterSet, nomes: Nomes, policy: TruncationPolicy | None = None
) -> complex:
    """lim (1 - a_1 a_2) J_n as a_2 -> 1/a_1, in closed form.

    Requires a_2 = a_1^(-1) exactly and the residual balancing
    a_3 a_4 a_5 a_6 t^(2n-2) = p q, under which the i = n layer of the
    pairs within {a_3..a_6} cancels by reflection:

        prod_{i=1}^{n-1} Gamma(t^i) / ((p;p)(q;q))
        * prod_{i=1}^n prod_{m=3}^6 Gamma(a_1^{+-1} a_m t^(i-1))
        * prod_{i=1}^{n-1} prod_{3<=j<k<=6} Gamma(a_j a_k t^(i-1)).
    """
    a, t, n = params.a, params.t, params.n
    if abs(a[0] * a[1] - 1.0) > 1e-12 * abs(a[0] * a[1]):
        raise DomainError("pinch limit needs a_2 = 1/a_1 exactly")
    residual = a[2] * a[3] * a[4] * a[5] * t ** (2 * n - 2)
    if abs(residual - nomes.pq) > 1e-12 * max(abs(nomes.pq), 1.0):
        raise DomainError("pinch limit needs a_3 a_4 a_5 a_6 t^(2n-2) = p q")
    out = 1.0 / _euler_pair(nomes, policy)
    for i in range(1, n):
        out *= elliptic_gamma(t**i, nomes, policy)
    for i in range(1, n + 1):
        ti = t ** (i - 1)
        for m in range(2, 6):
            out *= gamma_pm(a[m] * ti, a[0], nomes, policy)
    for i in range(1, n):
        ti = t ** (i - 1)
        for j in range(2, 6):
            for k in range(j + 1, 6):
                out *= elliptic_gamma(a[j] * a[k] * ti, nomes, policy)
    return out


def richardson_limit(f, eps_coarse: float = 1e-3, eps_fine: float = 1e-4) -> complex:
    """Two-point Richardson extrapolation of f(eps) -> f(0) for simple poles.

    The pinched quantities behave as L + C eps + O(eps^2), so the linear
    elimination (eps_coarse f(eps_fine) - eps_fine f(eps_coarse)) /
    (eps_coarse - eps_fine) recovers L to O(eps_coarse eps_fine).
    """
    f_coarse = complex(f(eps_coarse))
    f_fine = complex(f(eps_fine))
    return (eps_coarse * f_fine - eps_fine * f_coarse) / (eps_coarse - eps_fine)


def cn_recurrence_check(
    n: int, t, nomes: Nomes, policy: TruncationPolicy | None = None
) -> float:
    """Relative defect of c_n = c_{n-1} 2n Gamma(t^n) / (Gamma(t) (p;p)(q;q))."""
    from .integrand import c_constant

    if n < 1:
        raise DomainError("n must be >= 1")
    cn = c_constant(n, nomes, t, policy)
    prev = c_constant(n - 1, nomes, t, policy)
    step = (
        prev
        * 2
        * n
        * elliptic_gamma(t**n, nomes, policy)
        / (elliptic_gamma(t, nomes, policy) * _euler_pair(nomes, policy))
    )
    return abs(cn - step) / abs(cn)
