"""Dense univariate polynomials over Q as coefficient lists, lowest degree first.

The zero polynomial is the empty list.  Sturm sequences, exact real-root
counting and rational root isolation live here; ``poly.MultiPoly`` converts
to and from this form for univariate work.
"""

from math import gcd as igcd

import flint
from gmpy2 import mpq

from .errors import ZeroPolynomial
from .rational import as_q, sign

def _fq(p):
    return flint.fmpq_poly([flint.fmpq(int(c.numerator), int(c.denominator)) for c in map(mpq, p)])


def _from_fq(p):
    return [mpq(int(c.p), int(c.q)) for c in p.coeffs()]


def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def qpoly(coeffs):
    return trim(as_q(c) for c in coeffs)


def degree(p):
    return len(p) - 1


def add(a, b):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return trim(out)


def sub(a, b):
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = out[i] - c
    return trim(out)


def scale(a, c):
    if c == 0:
        return []
    return [x * c for x in a]


def mul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return trim(out)


def evaluate(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def deriv(p):
    return trim(i * p[i] for i in range(1, len(p)))


def divmod_(a, b):
    b = trim(b)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    q, r = divmod(_fq(a), _fq(b))
    return _from_fq(q), _from_fq(r)


def rem(a, b):
    return divmod_(a, b)[1]


def monic(p):
    if not p:
        return []
    lc = mpq(p[-1])
    return [mpq(c) / lc for c in p]


def gcd(a, b):
    a, b = trim(a), trim(b)
    if not a and not b:
        return []
    return monic(_from_fq(_fq(a).gcd(_fq(b))))


def exact_quotient(a, b):
    q, r = divmod_(a, b)
    if r:
        raise ArithmeticError("inexact univariate division")
    return q


def squarefree(p):
    p = trim(p)
    if len(p) <= 2:
        return p
    g = gcd(p, deriv(p))
    if len(g) <= 1:
        return p
    return exact_quotient(p, g)


def primitive_int(p):
    """Positive rational multiple of p with coprime integer coefficients."""
    p = trim(p)
    if not p:
        return []
    den = 1
    for c in p:
        d = int(mpq(c).denominator)
        den = den * d // igcd(den, d)
    ints = [int(mpq(c) * den) for c in p]
    g = 0
    for v in ints:
        g = igcd(g, v)
    return [v // g for v in ints]


def _chain(p):
    """Sturm sequence as primitive flint integer polynomials.

    Every element is scaled by a positive constant to strip content, which
    leaves all sign variation counts unchanged.
    """
    a = _fq(p).numer()
    a = a / a.content() if a.content() != 0 else a
    chain = [a]
    b = a.derivative()
    if b.is_zero():
        return chain
    b = b / b.content()
    chain.append(b)
    while True:
        _, r = divmod(flint.fmpq_poly(a), flint.fmpq_poly(b))
        if r.is_zero():
            break
        r = -r.numer()
        r = r / r.content()
        chain.append(r)
        a, b = b, r
    return chain


def sturm_chain(p):
    """Sturm sequence p, p', -rem(p0, p1), ... until the remainder vanishes,
    with content stripped from each element."""
    p = qpoly(p)
    if not p:
        raise ZeroPolynomial("Sturm chain of the zero polynomial")
    return [[mpq(int(c)) for c in row.coeffs()] for row in _chain(p)]


class _Counter:
    """Sign-variation evaluator on the gcd-reduced chain of a polynomial."""

    __slots__ = ("rows", "poly", "lead")

    def __init__(self, p):
        chain = _chain(qpoly(p))
        last = chain[-1]
        if last.degree() > 0:
            chain = [_zdiv(c, last) for c in chain]
        self.rows = [[int(c) for c in row.coeffs()] for row in chain]
        self.poly = self.rows[0]
        # (sign of leading coeff, degree parity) for the infinite ends
        self.lead = [(_sgn(r[-1]), (len(r) - 1) % 2) for r in self.rows]

    def variations(self, x):
        """Sign variations at rational x; x may be -inf or +inf as strings."""
        if x == "-inf" or x == "+inf":
            neg = x == "-inf"
            signs = [(-s if neg and odd else s) for s, odd in self.lead if s]
        else:
            x = mpq(x)
            num, den = int(x.numerator), int(x.denominator)
            signs = []
            for row in self.rows:
                s = _eval_sign(row, num, den)
                if s:
                    signs.append(s)
        return sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])

    def count(self, a, b):
        return self.variations(a) - self.variations(b)

    def variations_sqrt(self, r, neg=False):
        """Sign variations at s = +-sqrt(r) for rational r > 0, exactly."""
        signs = []
        for row in self.rows:
            s = _sign_at_sqrt(row, mpq(r), neg)
            if s:
                signs.append(s)
        return sum(1 for i in range(1, len(signs)) if signs[i] != signs[i - 1])

    def is_root(self, x):
        x = mpq(x)
        return _eval_sign(self.poly, int(x.numerator), int(x.denominator)) == 0


def _eval_sign(row, num, den):
    """Sign of sum c_i num^i den^(n-i), i.e. of p(num/den) for den > 0."""
    acc = 0
    dp = 1
    for c in reversed(row):
        acc = acc * num + c * dp
        dp *= den
    return (acc > 0) - (acc < 0)


def _sign_at_sqrt(p, r, neg):
    # p(s) = E + O*s with s = +-sqrt(r)
    ev, od = mpq(0), mpq(0)
    rk = mpq(1)
    for k in range(0, len(p), 2):
        ev += p[k] * rk
        if k + 1 < len(p):
            od += p[k + 1] * rk
        rk *= r
    se = _sgn(ev)
    so = _sgn(od) * (-1 if neg else 1)
    if so == 0 or se == so:
        return se
    if se == 0:
        return so
    lhs, rhs = ev * ev, od * od * r
    return se if lhs > rhs else (so if lhs < rhs else 0)


def _sgn(v):
    return (v > 0) - (v < 0)


def _zdiv(a, b):
    q, r = divmod(flint.fmpq_poly(a), flint.fmpq_poly(b))
    if not r.is_zero():
        raise ArithmeticError("inexact division in Sturm chain")
    q = q.numer()
    return q / q.content()


def sturm_count(p, a="-inf", b="+inf"):
    """Number of distinct real roots of p in (a, b]; a, b rational or infinite."""
    p = qpoly(p)
    if not p:
        raise ZeroPolynomial("root count of the zero polynomial")
    if a not in ("-inf", "+inf") and b not in ("-inf", "+inf") and as_q(a) >= as_q(b):
        raise ValueError("require a < b")
    if len(p) == 1:
        return 0
    return _Counter(p).count(_norm(a), _norm(b))


def _norm(x):
    if x in ("-inf", "+inf"):
        return x
    if x == float("-inf"):
        return "-inf"
    if x == float("inf"):
        return "+inf"
    return as_q(x)


def root_bound(p):
    """Cauchy bound: every real root has |x| < bound (a power of two)."""
    lc = abs(mpq(p[-1]))
    m = max((abs(mpq(c)) / lc for c in p[:-1]), default=mpq(0))
    b = mpq(1)
    while b <= 1 + m:
        b *= 2
    return b


class Root:
    """An isolated real root: either exact (lo == hi) or inside the open (lo, hi)."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        self.lo = lo
        self.hi = hi

    @property
    def exact(self):
        return self.lo == self.hi

    def __repr__(self):
        return f"Root({self.lo}, {self.hi})"


def isolate_roots(p, lo=None, hi=None, counter=None):
    """Isolate the distinct real roots of p inside the half-open (lo, hi].

    Returns Root objects sorted left to right.  Omitted bounds default to
    the Cauchy bound.  Exact rational roots hit during bisection are returned
    with lo == hi.
    """
    p = qpoly(p)
    if not p:
        raise ZeroPolynomial("root isolation of the zero polynomial")
    if len(p) == 1:
        return []
    cnt = counter or _Counter(p)
    if lo is None or hi is None:
        bnd = root_bound(p)
        lo = -bnd if lo is None else mpq(lo)
        hi = bnd if hi is None else mpq(hi)
    lo, hi = mpq(lo), mpq(hi)
    out = []
    stack = [(lo, hi, cnt.count(lo, hi))]
    while stack:
        a, b, n = stack.pop()
        if n == 0:
            continue
        if n == 1:
            if cnt.is_root(b):
                out.append(Root(b, b))
            else:
                out.append(Root(a, b))
            continue
        mid = (a + b) / 2
        left = cnt.count(a, mid)
        stack.append((mid, b, n - left))
        stack.append((a, mid, left))
    out.sort(key=lambda r: r.lo)
    return out


def refine(root, counter, upper=None, lower=None):
    """Shrink a non-exact root's interval until hi < upper and lo > lower."""
    while not root.exact and (
        (upper is not None and root.hi >= upper) or (lower is not None and root.lo <= lower)
    ):
        mid = (root.lo + root.hi) / 2
        if counter.is_root(mid):
            root.lo = root.hi = mid
            break
        if counter.count(root.lo, mid) == 1:
            root.hi = mid
        else:
            root.lo = mid
    return root


def bisect_step(root, counter):
    if root.exact:
        return root
    mid = (root.lo + root.hi) / 2
    if counter.is_root(mid):
        root.lo = root.hi = mid
    elif counter.count(root.lo, mid) == 1:
        root.hi = mid
    else:
        root.lo = mid
    return root


def counter_for(p):
    return _Counter(qpoly(p))


def rational_roots(p):
    """All rational roots of p (distinct), via flint factorisation over Q."""
    import flint
    p = qpoly(p)
    if len(p) <= 1:
        return []
    fp = flint.fmpq_poly([flint.fmpq(int(c.numerator), int(c.denominator)) for c in p])
    roots = []
    for fac, _mult in fp.factor()[1]:
        if fac.degree() == 1:
            c0, c1 = fac[0], fac[1]
            r = -c0 / c1
            roots.append(mpq(int(r.p), int(r.q)))
    return sorted(roots)
