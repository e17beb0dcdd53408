"""Infinite q-products, theta functions, and the elliptic gamma function.

Conventions (0 <= |p|, |q| < 1 throughout):

    (u; q)_inf        = prod_{k >= 0} (1 - q^k u)
    (u; p, q)_inf     = prod_{mu, nu >= 0} (1 - p^mu q^nu u)
    theta(u; p)       = (u; p)_inf * (p/u; p)_inf
    Gamma(u; p, q)    = (p q / u; p, q)_inf / (u; p, q)_inf

All evaluators accept a complex scalar or a numpy array of complex values for
``u`` (elementwise semantics) and share one truncation rule: a factor
(1 - p^mu q^nu u) is included iff |p^mu q^nu u| >= tau with
tau = tail_tol / (expected retained term count), and the analytic bound on
sum |p^mu q^nu u| over the excluded indices is available via
:func:`product_tail_bound`.  Products are evaluated in a fixed (mu outer,
nu inner) order, so results are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PoleProximityError, TruncationError

# Relative distance below which an argument counts as sitting on a pole.
POLE_TOL = 1e-12


@dataclass(frozen=True)
class Nomes:
    """The pair of elliptic nomes (p, q) with |p| < 1 and |q| < 1.

    Either nome may be exactly zero (trigonometric/degenerate limits).
    """

    p: complex
    q: complex

    def __post_init__(self):
        if abs(self.p) >= 1 or abs(self.q) >= 1:
            raise DomainError(
                f"nomes must satisfy |p| < 1 and |q| < 1, got |p|={abs(self.p)}, |q|={abs(self.q)}"
            )

    @property
    def pq(self) -> complex:
        return self.p * self.q


@dataclass(frozen=True)
class TruncationPolicy:
    """Controls how infinite products are truncated.

    ``tail_tol``: target bound for the neglected tail sum |p^mu q^nu u|.
    ``max_terms``: cap on the retained index range per nome direction.
    """

    tail_tol: float = 1e-13
    max_terms: int = 512

    def __post_init__(self):
        if self.tail_tol <= 0:
            raise DomainError("tail_tol must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be at least 1")


DEFAULT_POLICY = TruncationPolicy()


def _coerce(u):
    """Return (array view of u, was_scalar flag)."""
    arr = np.asarray(u, dtype=complex)
    return arr, arr.ndim == 0


def _row_len(base: float, q_abs: float, tau: float, max_terms: int) -> int:
    """Number of retained nu indices for one mu row: |base| * q_abs^nu >= tau."""
    if base < tau:
        return 0
    if q_abs == 0.0:
        return 1
    n = int(math.floor(math.log(tau / base) / math.log(q_abs))) + 1
    return min(max(n, 1), max_terms + 1)


def _plan(p_abs: float, q_abs: float, u_max: float, policy: TruncationPolicy):
    """Retained index ranges for the double product, plus the tail bound.

    Returns (rows, tail) where rows[mu] is the retained nu count for that mu
    and tail bounds sum |p^mu q^nu| * u_max over all excluded indices.
    Raises TruncationError when the policy's max_terms cannot certify
    tail < tail_tol.
    """
    if u_max == 0.0:
        return [], 0.0
    tau = policy.tail_tol
    for _ in range(6):
        # Estimated retained count at this tau, then the final tau per the
        # tail_tol / count rule.
        est = 0
        mu = 0
        base = u_max
        while base >= tau and mu <= policy.max_terms:
            est += _row_len(base, q_abs, tau, policy.max_terms)
            if p_abs == 0.0:
                break
            base *= p_abs
            mu += 1
        tau_eff = policy.tail_tol / max(est, 1)

        rows = []
        base = u_max
        while base >= tau_eff:
            rows.append(_row_len(base, q_abs, tau_eff, policy.max_terms))
            if p_abs == 0.0:
                break
            base *= p_abs
        over = len(rows) > policy.max_terms or (rows and rows[0] > policy.max_terms)
        if over:
            rows = rows[: policy.max_terms]
            rows = [min(k, policy.max_terms) for k in rows]
        tail = _tail_bound(rows, p_abs, q_abs, u_max)
        if over:
            raise TruncationError(
                f"cannot certify tail < {policy.tail_tol} within max_terms={policy.max_terms}",
                achieved_bound=tail,
            )
        if tail < policy.tail_tol:
            return rows, tail
        tau = tau_eff / 16.0
    raise TruncationError(
        f"tail bound refinement did not converge (last bound {tail})",
        achieved_bound=tail,
    )


def _tail_bound(rows, p_abs: float, q_abs: float, u_max: float) -> float:
    """Analytic bound for sum |p^mu q^nu| * u_max over excluded (mu, nu)."""
    geo_q = 1.0 / (1.0 - q_abs)
    tail = 0.0
    base = u_max
    for k in rows:
        if q_abs > 0.0:
            tail += base * q_abs**k * geo_q
        base *= p_abs
    # Rows entirely excluded (mu >= len(rows)).
    if p_abs > 0.0:
        tail += u_max * p_abs ** len(rows) / (1.0 - p_abs) * geo_q
    elif not rows:
        tail += u_max * geo_q
    return tail


def _prod_scalar(u: complex, p: complex, q: complex, rows) -> complex:
    acc = 1.0 + 0.0j
    pm = 1.0 + 0.0j
    for k in rows:
        c = pm
        for _ in range(k):
            acc *= 1.0 - c * u
            c *= q
        pm *= p
    return acc


def _prod_array(u: np.ndarray, p: complex, q: complex, rows) -> np.ndarray:
    acc = np.ones(u.shape, dtype=complex)
    pm = 1.0 + 0.0j
    for k in rows:
        c = pm
        for _ in range(k):
            acc *= 1.0 - c * u
            c *= q
        pm *= p
    return acc


def qpoch_inf(u, q: complex, policy: TruncationPolicy | None = None):
    """Single infinite q-Pochhammer product (u; q)_inf.

    Truncated so the certified bound on the neglected tail sum_{k>K} |q^k u|
    stays below the policy's tail_tol.
    """
    policy = policy or DEFAULT_POLICY
    if abs(q) >= 1:
        raise DomainError(f"qpoch_inf requires |q| < 1, got {abs(q)}")
    arr, scalar = _coerce(u)
    u_max = float(np.max(np.abs(arr))) if arr.size else 0.0
    rows, _ = _plan(0.0, abs(q), u_max, policy)
    k = rows[0] if rows else 0
    if scalar:
        return _prod_scalar(complex(arr), 0.0, q, [k] if k else [])
    return _prod_array(arr, 0.0, q, [k] if k else [])


def double_poch_inf(u, nomes: Nomes, policy: TruncationPolicy | None = None):
    """Double infinite product (u; p, q)_inf = prod_{mu,nu>=0} (1 - p^mu q^nu u)."""
    policy = policy or DEFAULT_POLICY
    arr, scalar = _coerce(u)
    u_max = float(np.max(np.abs(arr))) if arr.size else 0.0
    rows, _ = _plan(abs(nomes.p), abs(nomes.q), u_max, policy)
    if scalar:
        return _prod_scalar(complex(arr), nomes.p, nomes.q, rows)
    return _prod_array(arr, nomes.p, nomes.q, rows)


def product_tail_bound(u, nomes: Nomes, policy: TruncationPolicy | None = None) -> float:
    """Certified analytic bound on the tail neglected by double_poch_inf at u."""
    policy = policy or DEFAULT_POLICY
    arr, _ = _coerce(u)
    u_max = float(np.max(np.abs(arr))) if arr.size else 0.0
    _, tail = _plan(abs(nomes.p), abs(nomes.q), u_max, policy)
    return tail


def theta(u, p: complex, policy: TruncationPolicy | None = None):
    """Multiplicative theta function theta(u; p) = (u; p)_inf (p/u; p)_inf.

    Degenerates to 1 - u at p = 0.  Requires u != 0.
    """
    policy = policy or DEFAULT_POLICY
    arr, scalar = _coerce(u)
    if np.any(arr == 0):
        raise DomainError("theta(u; p) requires u != 0")
    val = qpoch_inf(arr, p, policy) * qpoch_inf(p / arr, p, policy)
    return complex(val) if scalar else val


def _pole_scan(arr: np.ndarray, p: complex, q: complex, rows, what: str):
    """Raise PoleProximityError if any element of arr has p^mu q^nu * arr near 1."""
    if not arr.size:
        return
    mags = np.abs(arr)
    lo = float(np.min(mags))
    hi = float(np.max(mags))
    pm = 1.0 + 0.0j
    for mu, k in enumerate(rows):
        c = pm
        for nu in range(k):
            ca = abs(c)
            if ca * hi >= 1.0 - 1e-9 and (lo == 0.0 or ca * lo <= 1.0 + 1e-9):
                d = np.abs(1.0 - c * arr)
                j = int(np.argmin(d))
                if d.flat[j] < POLE_TOL:
                    bad = complex(arr.flat[j])
                    raise PoleProximityError(
                        f"{what}: argument {bad} within {POLE_TOL} (relative) of pole "
                        f"p^-{mu} q^-{nu}",
                        u=bad,
                        mu=mu,
                        nu=nu,
                    )
            c *= q
        pm *= p


def elliptic_gamma(u, nomes: Nomes, policy: TruncationPolicy | None = None):
    """Elliptic gamma function Gamma(u; p, q) = (pq/u; p, q)_inf / (u; p, q)_inf.

    Poles sit at u = p^-mu q^-nu (mu, nu >= 0); arguments within POLE_TOL
    (relative) of a pole raise PoleProximityError.  At p = 0 this degenerates
    to 1 / (u; q)_inf.
    """
    policy = policy or DEFAULT_POLICY
    arr, scalar = _coerce(u)
    pq = nomes.pq
    if np.any(arr == 0):
        if pq != 0:
            raise DomainError("elliptic_gamma requires u != 0 unless p*q = 0")
        # Gamma(0; p, q) with pq = 0 is 1/(0; .)_inf = 1; avoid 0/0 in pq/u.
        num_arg = np.zeros_like(arr)
        nz = arr != 0
        num_arg[nz] = pq / arr[nz]
    else:
        num_arg = pq / arr
    u_max = float(np.max(np.abs(arr))) if arr.size else 0.0
    rows, _ = _plan(abs(nomes.p), abs(nomes.q), u_max, policy)
    _pole_scan(np.atleast_1d(arr), nomes.p, nomes.q, rows, "elliptic_gamma")
    if scalar:
        den = _prod_scalar(complex(arr), nomes.p, nomes.q, rows)
    else:
        den = _prod_array(arr, nomes.p, nomes.q, rows)
    num = double_poch_inf(num_arg, nomes, policy)
    return num / den


def elliptic_gamma_recip(u, nomes: Nomes, policy: TruncationPolicy | None = None):
    """1 / Gamma(u; p, q), safe at the poles of Gamma (where it is simply 0).

    Raises PoleProximityError only near the zeros of Gamma, i.e. near
    u = p^(mu+1) q^(nu+1), which are the poles of the reciprocal.
    """
    policy = policy or DEFAULT_POLICY
    arr, scalar = _coerce(u)
    if np.any(arr == 0):
        raise DomainError("elliptic_gamma_recip requires u != 0")
    num_arg = nomes.pq / arr
    n_max = float(np.max(np.abs(num_arg))) if num_arg.size else 0.0
    rows_n, _ = _plan(abs(nomes.p), abs(nomes.q), n_max, policy)
    _pole_scan(np.atleast_1d(num_arg), nomes.p, nomes.q, rows_n, "elliptic_gamma_recip")
    if scalar:
        num = _prod_scalar(complex(num_arg), nomes.p, nomes.q, rows_n)
    else:
        num = _prod_array(num_arg, nomes.p, nomes.q, rows_n)
    den = double_poch_inf(arr, nomes, policy)
    return den / num


def theta_pm(a: complex, z, p: complex, policy: TruncationPolicy | None = None):
    """Double-sign theta product theta(a z^{+-1}; p) = theta(az; p) theta(a/z; p)."""
    return theta(a * z, p, policy) * theta(a / z, p, policy)


def gamma_pm(a: complex, z, nomes: Nomes, policy: TruncationPolicy | None = None):
    """Double-sign gamma product Gamma(a z^{+-1}) = Gamma(az) Gamma(a/z)."""
    return elliptic_gamma(a * z, nomes, policy) * elliptic_gamma(a / z, nomes, policy)


def theta_pm2(a: complex, zj, zk, p: complex, policy: TruncationPolicy | None = None):
    """Four-sign theta product theta(a zj^{+-1} zk^{+-1}; p)."""
    return theta_pm(a * zj, zk, p, policy) * theta_pm(a / zj, zk, p, policy)


def gamma_pm2(a: complex, zj, zk, nomes: Nomes, policy: TruncationPolicy | None = None):
    """Four-sign gamma product Gamma(a zj^{+-1} zk^{+-1}; p, q)."""
    return gamma_pm(a * zj, zk, nomes, policy) * gamma_pm(a / zj, zk, nomes, policy)
