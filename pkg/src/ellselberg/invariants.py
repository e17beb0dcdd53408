"""Parameter bookkeeping and the fundamental W(BC_n)-invariant theta families.

The six-parameter family (a_1, ..., a_6) with coupling t and nomes (p, q)
supports three balancing conventions for the product a_1 ... a_6 t^(2n-2):

    PQ  -> p q      (evaluation-formula normalization)
    P   -> p        (shifted-kernel normalization)
    ONE -> 1        (recurrence normalization)

One designated entry (``solved_index``, by default the sixth) is solved from
the others so the product meets the target.

The invariant family E_r(a, b; z), 0 <= r <= n, is the theta-function sum

    E_r = sum over {i_1<...<i_r} disjoint-union {j_1<...<j_(n-r)} = {1..n} of
      prod_k theta(b t^(i_k-k) z_(i_k)^{+-1}) / theta(b t^(i_k-k) (a t^(k-1))^{+-1})
    * prod_l theta(a t^(j_l-l) z_(j_l)^{+-1}) / theta(a t^(j_l-l) (b t^(l-1))^{+-1})

with all thetas at nome p.  E_0 and E_n collapse to single products, closed
forms of which are exposed separately.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from .errors import DegenerateParameterError, DomainError
from .qseries import Nomes, TruncationPolicy, theta, theta_pm

# Below this magnitude a denominator theta counts as degenerate.
THETA_FLOOR = 1e-14

BALANCE_RTOL = 1e-14


class BalancingMode(Enum):
    """Target for the product a_1 ... a_6 t^(2n-2)."""

    PQ = "pq"
    P = "p"
    ONE = "one"


@dataclass(frozen=True)
class ParameterSet:
    """Six coupled parameters with their coupling t and balancing convention.

    ``balancing_mode`` may be None for off-shell intermediates (e.g. a single
    parameter multiplied by q while checking shift ratios); whenever a mode is
    set, :meth:`validate` enforces the product constraint to 1e-14 relative.
    The solved entry may be exactly 0 only in the PQ mode with p q = 0
    (trigonometric degeneration, where the solved parameter's limit is 0).
    """

    n: int
    t: complex
    a: tuple[complex, complex, complex, complex, complex, complex]
    balancing_mode: BalancingMode | None = None
    solved_index: int = 6

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("n must be a positive integer")
        if not (0 < abs(self.t) < 1):
            raise DomainError(f"|t| must lie in (0, 1), got {abs(self.t)}")
        if len(self.a) != 6:
            raise DomainError("exactly six parameters a_1..a_6 are required")
        if not 1 <= self.solved_index <= 6:
            raise DomainError("solved_index must be in 1..6")
        object.__setattr__(self, "a", tuple(complex(v) for v in self.a))
        object.__setattr__(self, "t", complex(self.t))

    def balancing_product(self) -> complex:
        prod = 1.0 + 0.0j
        for v in self.a:
            prod *= v
        return prod * self.t ** (2 * self.n - 2)

    def target(self, nomes: Nomes) -> complex:
        if self.balancing_mode is BalancingMode.PQ:
            return nomes.pq
        if self.balancing_mode is BalancingMode.P:
            return nomes.p
        if self.balancing_mode is BalancingMode.ONE:
            return 1.0 + 0.0j
        raise DomainError("parameter set carries no balancing mode")

    def balancing_residual(self, nomes: Nomes) -> float:
        """|product - target|, relative to |target| when the target is nonzero."""
        tgt = self.target(nomes)
        diff = abs(self.balancing_product() - tgt)
        return diff / abs(tgt) if tgt != 0 else diff

    def validate(self, nomes: Nomes) -> "ParameterSet":
        zero_ok = (
            self.balancing_mode is BalancingMode.PQ
            and nomes.pq == 0
            and self.solved_index is not None
        )
        for m, v in enumerate(self.a, start=1):
            if v == 0 and not (zero_ok and m == self.solved_index):
                raise DomainError(f"a_{m} must be nonzero")
        if self.balancing_mode is not None:
            res = self.balancing_residual(nomes)
            if res > BALANCE_RTOL:
                raise DomainError(
                    f"balancing residual {res:.3e} exceeds {BALANCE_RTOL} for mode "
                    f"{self.balancing_mode.value}"
                )
        return self

    @classmethod
    def solved(
        cls,
        n: int,
        t: complex,
        a_free,
        nomes: Nomes,
        mode: BalancingMode,
        solved_index: int = 6,
    ) -> "ParameterSet":
        """Build a balanced set by solving the ``solved_index`` entry."""
        a_free = [complex(v) for v in a_free]
        if len(a_free) != 5:
            raise DomainError("five free parameters are required")
        if mode is BalancingMode.PQ:
            tgt = nomes.pq
        elif mode is BalancingMode.P:
            tgt = nomes.p
        else:
            tgt = 1.0 + 0.0j
        denom = complex(t) ** (2 * n - 2)
        for v in a_free:
            denom *= v
        if denom == 0:
            raise DomainError("free parameters must be nonzero")
        solved_val = tgt / denom
        a = list(a_free)
        a.insert(solved_index - 1, solved_val)
        return cls(n=n, t=t, a=tuple(a), balancing_mode=mode, solved_index=solved_index).validate(
            nomes
        )

    def shifted_pair(self, k: int, factor: complex) -> "ParameterSet":
        """Multiply a_k by factor and the solved entry by 1/factor (stays on-shell)."""
        if k == self.solved_index:
            raise DomainError("k must differ from solved_index")
        a = list(self.a)
        a[k - 1] *= factor
        a[self.solved_index - 1] /= factor
        return replace(self, a=tuple(a))

    def with_entry(self, m: int, value: complex) -> "ParameterSet":
        """Replace a_m, dropping the balancing mode (off-shell variant)."""
        a = list(self.a)
        a[m - 1] = complex(value)
        return replace(self, a=tuple(a), balancing_mode=None)

    def resolved(self, nomes: Nomes, mode: BalancingMode | None = None) -> "ParameterSet":
        """Re-solve the solved entry for the (possibly new) mode's target."""
        mode = mode or self.balancing_mode
        if mode is None:
            raise DomainError("cannot re-solve without a balancing mode")
        free = [v for m, v in enumerate(self.a, start=1) if m != self.solved_index]
        return ParameterSet.solved(self.n, self.t, free, nomes, mode, self.solved_index)


def complementary_index_pairs(n: int, r: int):
    """All pairs (I, J) of increasing index tuples with I ∪ J = {1..n}, |I| = r."""
    if not 0 <= r <= n:
        raise DomainError(f"need 0 <= r <= n, got r={r}, n={n}")
    out = []
    universe = range(1, n + 1)
    for comb in itertools.combinations(universe, r):
        rest = tuple(j for j in universe if j not in comb)
        out.append((comb, rest))
    assert len(out) == math.comb(n, r)
    return out


def _theta_pm_checked(c: complex, w: complex, p: complex, policy, label: str) -> complex:
    val = theta_pm(c, w, p, policy)
    if abs(val) < THETA_FLOOR:
        raise DegenerateParameterError(f"theta({label}) vanishes (|value| = {abs(val):.3e})")
    return val


def fundamental_invariant(
    r: int,
    a: complex,
    b: complex,
    z,
    t: complex,
    p: complex,
    policy: TruncationPolicy | None = None,
):
    """E_r(a, b; z): the r-th fundamental invariant in n = len(z) variables.

    ``z`` is a sequence of n values (or n arrays of equal shape for
    elementwise evaluation).  The sum runs over the binomial(n, r)
    complementary index pairs.
    """
    zs = [np.asarray(w, dtype=complex) if not np.isscalar(w) else complex(w) for w in z]
    n = len(zs)
    total = None
    for idx_i, idx_j in complementary_index_pairs(n, r):
        term = 1.0 + 0.0j
        for k, ik in enumerate(idx_i, start=1):
            c = b * t ** (ik - k)
            den = _theta_pm_checked(c, a * t ** (k - 1), p, policy, f"b t^{ik - k} (a t^{k - 1})^(+-1)")
            term = term * theta_pm(c, zs[ik - 1], p, policy) / den
        for l, jl in enumerate(idx_j, start=1):
            c = a * t ** (jl - l)
            den = _theta_pm_checked(c, b * t ** (l - 1), p, policy, f"a t^{jl - l} (b t^{l - 1})^(+-1)")
            term = term * theta_pm(c, zs[jl - 1], p, policy) / den
        total = term if total is None else total + term
    return total


def e0_closed(a: complex, b: complex, z, t: complex, p: complex,
              policy: TruncationPolicy | None = None):
    """Closed form E_0(a, b; z) = prod_i theta(a z_i^{+-1}) / theta(a (b t^(i-1))^{+-1})."""
    out = 1.0 + 0.0j
    for i, w in enumerate(z, start=1):
        den = _theta_pm_checked(a, b * t ** (i - 1), p, policy, f"a (b t^{i - 1})^(+-1)")
        out = out * theta_pm(a, w if np.isscalar(w) else np.asarray(w, dtype=complex), p, policy) / den
    return out


def en_closed(a: complex, b: complex, z, t: complex, p: complex,
              policy: TruncationPolicy | None = None):
    """Closed form E_n(a, b; z) = prod_i theta(b z_i^{+-1}) / theta(b (a t^(i-1))^{+-1})."""
    return e0_closed(b, a, z, t, p, policy)


def coefficient_c(
    r: int,
    params: ParameterSet,
    nomes: Nomes,
    policy: TruncationPolicy | None = None,
) -> complex:
    """Proportionality coefficient C_r in <E_r> = C_r <E_(r-1)>, 1 <= r <= n.

    Only defined under the ONE balancing (a_1 ... a_6 t^(2n-2) = 1).
    """
    if params.balancing_mode is not BalancingMode.ONE:
        raise DomainError("coefficient_c requires the ONE balancing mode")
    if not 1 <= r <= params.n:
        raise DomainError(f"need 1 <= r <= n, got r={r}")
    n, t, p = params.n, params.t, nomes.p
    a1, a6 = params.a[0], params.a[5]

    def th(u, _label):
        return theta(u, p, policy)

    def th_den(u, label):
        val = theta(u, p, policy)
        if abs(val) < THETA_FLOOR:
            raise DegenerateParameterError(f"theta({label}) vanishes in C_{r}")
        return val

    num = (
        a1**2
        * t ** (2 * r - 2)
        * th(t ** (n - r + 1), "t^(n-r+1)")
        * th(a6 / a1 * t ** (n - r + 1), "a6/a1 t^(n-r+1)")
        * th(a1 / a6 * t ** (2 * r - n), "a1/a6 t^(2r-n)")
    )
    den = (
        a6**2
        * t ** (2 * n - 2 * r)
        * th_den(t**r, "t^r")
        * th_den(a6 / a1 * t ** (n - 2 * r + 2), "a6/a1 t^(n-2r+2)")
        * th_den(a1 / a6 * t**r, "a1/a6 t^r")
    )
    out = -num / den
    for m in range(2, 6):
        am = params.a[m - 1]
        out *= th(am * a6 * t ** (n - r), f"a_{m} a6 t^(n-r)") / th_den(
            am * a1 * t ** (r - 1), f"a_{m} a1 t^(r-1)"
        )
    return out


def _f_minus(i: int, params: ParameterSet, nomes: Nomes, z, policy=None):
    """F_i^-(z): the single-sign theta kernel used by the phi test functions.

    F_i^-(z) = [prod_m theta(a_m z_i^-1; p)] / (z_i^-2 theta(z_i^-2; p))
               * prod_{j != i} theta(t z_i^-1 z_j^{+-1}; p) / theta(z_i^-1 z_j^{+-1}; p)

    Not defined at z_i^2 = 1 or z_i = z_j^{+-1} (simple poles; the companion
    kernel's zeros cancel them only in fused evaluation).
    """
    p, t = nomes.p, params.t
    zi = z[i - 1]
    zi = complex(zi) if np.isscalar(zi) else np.asarray(zi, dtype=complex)
    inv = 1.0 / zi
    out = 1.0 + 0.0j
    for am in params.a:
        out = out * theta(am * inv, p, policy)
    out = out / (inv**2 * theta(inv**2, p, policy))
    for j in range(1, params.n + 1):
        if j == i:
            continue
        zj = z[j - 1]
        zj = complex(zj) if np.isscalar(zj) else np.asarray(zj, dtype=complex)
        out = out * theta_pm(t * inv, zj, p, policy) / theta_pm(inv, zj, p, policy)
    return out


def phi_test_function(
    r: int,
    i: int,
    params: ParameterSet,
    nomes: Nomes,
    z,
    policy: TruncationPolicy | None = None,
):
    """phi_(r,i)(z) = F_i^-(z) * E_(r-1)^(n-1)(a_1, a_6; z with z_i omitted).

    For n = 1 the invariant factor is empty and phi = F_1^-.
    """
    if not 1 <= r <= params.n:
        raise DomainError(f"need 1 <= r <= n, got r={r}")
    if not 1 <= i <= params.n:
        raise DomainError(f"need 1 <= i <= n, got i={i}")
    out = _f_minus(i, params, nomes, z, policy)
    if params.n > 1:
        rest = [z[j] for j in range(params.n) if j != i - 1]
        out = out * fundamental_invariant(
            r - 1, params.a[0], params.a[5], rest, params.t, nomes.p, policy
        )
    return out


def boundary_expectation_ratio(
    params: ParameterSet, nomes: Nomes, policy: TruncationPolicy | None = None
) -> complex:
    """Closed form of <E_n>/<E_0> under the ONE balancing:

    prod_{i=1}^n [ a_1^3 theta(a_6 a_1^-1 t^(i-1); p)
                 / (a_6^3 theta(a_1 a_6^-1 t^(i-1); p)) ]
               * prod_{m=2}^5 theta(a_m a_6 t^(i-1); p) / theta(a_m a_1 t^(i-1); p).

    Equals the telescoped product of coefficient_c over r = 1..n.
    """
    if params.balancing_mode is not BalancingMode.ONE:
        raise DomainError("boundary ratio is stated under the ONE balancing")
    a, t, p = params.a, params.t, nomes.p
    a1, a6 = a[0], a[5]

    def th_den(u, label):
        val = theta(u, p, policy)
        if abs(val) < THETA_FLOOR:
            raise DegenerateParameterError(f"theta({label}) vanishes in boundary ratio")
        return val

    out = 1.0 + 0.0j
    for i in range(1, params.n + 1):
        ti = t ** (i - 1)
        out *= (a1**3 * theta(a6 / a1 * ti, p, policy)) / (
            a6**3 * th_den(a1 / a6 * ti, "a1/a6 t^(i-1)")
        )
        for m in range(2, 6):
            out *= theta(a[m - 1] * a6 * ti, p, policy)
            out /= th_den(a[m - 1] * a1 * ti, "a_m a1 t^(i-1)")
    return out
