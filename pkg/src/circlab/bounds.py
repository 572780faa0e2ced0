"""Closed-form incidence bounds and the staged exponent schedules."""

from dataclasses import dataclass, field
from math import log

from gmpy2 import mpq

from .engine import K32_C
from .errors import FormulaDomain, OutOfRange
from .rational import as_q

BOUNDS = ("Thm1.1", "Thm1.2", "Thm1.3", "UnitNoEps", "KST", "MilnorThom", "Warren")


@dataclass(frozen=True)
class BoundParams:
    m: int = 0
    n: int = 0
    q: int = None
    eps: object = field(default_factory=lambda: mpq(1, 100))
    A: object = 2
    k: int = 2
    t: int = 0
    dim: int = 3

    def __post_init__(self):
        object.__setattr__(self, "eps", as_q(self.eps))
        object.__setattr__(self, "A", as_q(self.A))
        if self.q is None:
            object.__setattr__(self, "q", self.n)
        if self.m < 0 or self.n < 0:
            raise FormulaDomain("m and n must be nonnegative")
        if self.q > self.n:
            raise FormulaDomain("q must not exceed n")
        if self.eps <= 0:
            raise FormulaDomain("eps must be positive")
        if self.A <= 1:
            raise FormulaDomain("A must exceed 1")


def _pw(x, e):
    return float(x) ** float(e)


def eval_bound(which, params, constant=1):
    """Value of a named bound.  Integer-valued bounds (MilnorThom, Warren)
    are exact ints; the rest are floats since their exponents are fractional."""
    p = params
    m, n, q, eps = p.m, p.n, p.q, p.eps
    if which == "Thm1.1":
        val = (
            _pw(m, mpq(3, 7) + eps) * _pw(n, mpq(6, 7))
            + _pw(m, mpq(2, 3) + eps) * _pw(n, mpq(1, 2)) * _pw(q, mpq(1, 6))
            + _pw(m, mpq(6, 11) + eps) * _pw(n, mpq(15, 22)) * _pw(q, mpq(3, 22))
            + m + n
        )
    elif which == "Thm1.2":
        if not m * m < n ** 3:
            raise FormulaDomain("requires m < n^(3/2)")
        lg = log(m) if m > 1 else 0.0
        core = (
            _pw(m, mpq(3, 7)) * _pw(n, mpq(6, 7))
            + _pw(m, mpq(2, 3)) * _pw(n, mpq(1, 2)) * _pw(q, mpq(1, 6))
            + _pw(m, mpq(6, 11)) * _pw(n, mpq(15, 22)) * _pw(q, mpq(3, 22)) * lg ** (2 / 11)
            + m + n
        )
        val = float(p.A) ** staging(m, n).a_exponent * core
    elif which == "Thm1.3":
        val = (
            _pw(m, mpq(5, 11) + eps) * _pw(n, mpq(9, 11))
            + _pw(m, mpq(2, 3) + eps) * _pw(n, mpq(1, 2)) * _pw(q, mpq(1, 6))
            + m + n
        )
    elif which == "UnitNoEps":
        if not m * m < n ** 3:
            raise FormulaDomain("requires m < n^(3/2)")
        core = (
            _pw(m, mpq(5, 11)) * _pw(n, mpq(9, 11))
            + _pw(m, mpq(2, 3)) * _pw(n, mpq(1, 2)) * _pw(q, mpq(1, 6))
            + m + n
        )
        val = float(p.A) ** unit_staging(m, n).a_exponent * core
    elif which == "KST":
        val = K32_C * (_pw(n, mpq(2, 3)) * m + n)
    elif which == "MilnorThom":
        if p.k < 1 or p.dim < 1:
            raise FormulaDomain("k and dim must be positive")
        return constant * p.k * (2 * p.k - 1) ** (p.dim - 1)
    elif which == "Warren":
        if p.k < 0 or p.dim < 1:
            raise FormulaDomain("k must be nonnegative and dim positive")
        return constant * (2 * p.k) ** p.dim
    else:
        raise FormulaDomain(f"unknown bound {which!r}")
    return constant * val


# ---------------------------------------------------------------------------
# staging


@dataclass(frozen=True)
class Staging:
    j: int
    alphas: tuple
    a_exponent: int


def alpha(j):
    """3/2 - 7/(4j+6)."""
    return mpq(3, 2) - mpq(7, 4 * j + 6)


def unit_alpha(j):
    """3/2 - 11/(10+6j)."""
    return mpq(3, 2) - mpq(11, 10 + 6 * j)


def _below(m, n, a):
    """m <= n^a for rational a, decided with integers."""
    p, q = int(a.numerator), int(a.denominator)
    if p < 0:
        return m ** q * n ** (-p) <= 1
    return m ** q <= n ** p


def _stage(m, n, alpha_fn):
    if m < 1 or n < 2:
        raise OutOfRange("need m >= 1 and n >= 2")
    if m * m >= n ** 3:
        raise OutOfRange("staging covers only m < n^(3/2)")
    # alpha_fn increases in j: gallop, then bisect on the exact test
    hi = 0
    while not _below(m, n, alpha_fn(hi)):
        hi = 2 * hi + 1
    lo = -1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _below(m, n, alpha_fn(mid)):
            hi = mid
        else:
            lo = mid
    j = hi
    return Staging(j, tuple(alpha_fn(i) for i in range(j + 1)), j + 1)


def staging(m, n):
    """Smallest j with m <= n^alpha_j, the exponents so far, and j + 1."""
    return _stage(m, n, alpha)


def unit_staging(m, n):
    """Unit-circle schedule starting from alpha_0 = 2/5."""
    return _stage(m, n, unit_alpha)


def alpha_recurrence(j):
    """alpha_j by iterating (9 + a) / (13 - 4a) from 1/3."""
    a = mpq(1, 3)
    for _ in range(j):
        a = (9 + a) / (13 - 4 * a)
    return a


def unit_alpha_recurrence(j):
    """alpha_j by iterating (27 + 4a) / (4 (10 - 3a)) from 2/5."""
    a = mpq(2, 5)
    for _ in range(j):
        a = (27 + 4 * a) / (4 * (10 - 3 * a))
    return a


def rich_point_bound(n, k, q=1, unit=False):
    """Bound on the number of points on at least k circles (constant 1)."""
    if k < 2:
        raise FormulaDomain("k must be at least 2")
    n15 = _pw(n, mpq(3, 2))
    if unit:
        return n15 / _pw(k, mpq(11, 6)) + n15 * _pw(q, mpq(1, 2)) / k ** 3 + n / k
    return (
        n15 / _pw(k, mpq(7, 4))
        + n15 * _pw(q, mpq(1, 2)) / k ** 3
        + n15 * _pw(q, mpq(3, 10)) / _pw(k, mpq(11, 5))
        + n / k
    )
