"""Sparse multivariate polynomials with exact rational coefficients."""

import heapq
from math import gcd as igcd

from gmpy2 import mpq

from . import upoly
from .errors import (
    DegenerateInput,
    DimensionMismatch,
    OrderOutOfRange,
    ZeroDivisor,
    ZeroPolynomial,
)
from .rational import as_q, q_str

XYZ = ("x", "y", "z")
ST = ("s", "t")
_MPQ = type(mpq(0))


def _grlex(e):
    return (sum(e), e)


class MultiPoly:
    """Polynomial as a map from exponent tuples to nonzero mpq coefficients.

    ``vars`` fixes the variable order.  Arithmetic requires both operands to
    share the same variable tuple; use :meth:`embed` to move between them.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, terms=None, vars=XYZ):
        self.vars = tuple(vars)
        n = len(self.vars)
        clean = {}
        if terms:
            for e, c in terms.items():
                c = c if type(c) is _MPQ else as_q(c)
                if c:
                    e = tuple(e)
                    if len(e) != n:
                        raise DimensionMismatch(f"exponent {e} does not match variables {self.vars}")
                    clean[e] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms, vars):
        p = cls.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c, vars=XYZ):
        vars = tuple(vars)
        return cls({(0,) * len(vars): c}, vars)

    @classmethod
    def gen(cls, name, vars=XYZ):
        vars = tuple(vars)
        i = vars.index(name)
        e = [0] * len(vars)
        e[i] = 1
        return cls({tuple(e): 1}, vars)

    @classmethod
    def gens(cls, vars=XYZ):
        return tuple(cls.gen(v, vars) for v in vars)

    @classmethod
    def from_univariate(cls, coeffs, var="t", vars=None):
        vars = tuple(vars) if vars else (var,)
        i = vars.index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            e = [0] * len(vars)
            e[i] = k
            terms[tuple(e)] = c
        return cls(terms, vars)

    # basic queries ----------------------------------------------------
    @property
    def nvars(self):
        return len(self.vars)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var):
        i = self._index(var)
        return max((e[i] for e in self.terms), default=-1)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, mpq(0))

    def _index(self, var):
        if isinstance(var, int):
            return var
        return self.vars.index(var)

    def leading(self, order="grlex"):
        key = _grlex if order == "grlex" else None
        e = max(self.terms, key=key)
        return e, self.terms[e]

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.vars != self.vars:
                raise DimensionMismatch(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return MultiPoly.const(as_q(other), self.vars)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v = v + c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return MultiPoly._raw(out, self.vars)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({e: -c for e, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = as_q(other)
            if not c:
                return MultiPoly._raw({}, self.vars)
            return MultiPoly._raw({e: v * c for e, v in self.terms.items()}, self.vars)
        other = self._coerce(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e)
                out[e] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly._raw({e: c for e, c in out.items() if c}, self.vars)

    __rmul__ = __mul__

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative exponent")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            q = exact_div(self, c)
            if q is None:
                raise ArithmeticError("inexact polynomial division")
            return q
        c = as_q(c)
        if not c:
            raise ZeroDivisor("division by zero")
        return self * (1 / c)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.vars == other.vars and self.terms == other.terms
        try:
            c = as_q(other)
        except TypeError:
            return NotImplemented
        return self == MultiPoly.const(c, self.vars)

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # evaluation and calculus -----------------------------------------
    def eval(self, point):
        point = [as_q(v) for v in point]
        if len(point) != self.nvars:
            raise DimensionMismatch(f"point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        powers = [{} for _ in point]
        acc = mpq(0)
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    pw = cache.get(k)
                    if pw is None:
                        pw = point[i] ** k
                        cache[k] = pw
                    term = term * pw
            acc += term
        return acc

    __call__ = eval

    def diff(self, var):
        i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                e2 = list(e)
                e2[i] = k - 1
                out[tuple(e2)] = c * k
        return MultiPoly._raw(out, self.vars)

    def gradient(self):
        return tuple(self.diff(i) for i in range(self.nvars))

    def compose(self, values, vars=None):
        """Substitute ``values[i]`` (MultiPoly or scalar) for variable i."""
        if len(values) != self.nvars:
            raise DimensionMismatch("compose needs one value per variable")
        if vars is None:
            vars = next((v.vars for v in values if isinstance(v, MultiPoly)), self.vars)
        vars = tuple(vars)
        vals = [v if isinstance(v, MultiPoly) else MultiPoly.const(v, vars) for v in values]
        caches = [{0: MultiPoly.const(1, vars), 1: v} for v in vals]

        def power(i, k):
            cache = caches[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * vals[i]
            return cache[k]

        acc = {}
        for e, c in self.terms.items():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = power(i, k) if term is None else term * power(i, k)
            if term is None:
                term = caches[0][0]
            for e2, c2 in term.terms.items():
                v = acc.get(e2, 0) + c * c2
                acc[e2] = v
        return MultiPoly(acc, vars)

    def subs(self, var, value):
        """Substitute one variable, keeping the variable tuple."""
        i = self._index(var)
        values = [MultiPoly.gen(v, self.vars) for v in self.vars]
        values[i] = value if isinstance(value, MultiPoly) else MultiPoly.const(value, self.vars)
        return self.compose(values, self.vars)

    def embed(self, new_vars):
        """Same polynomial over a variable tuple containing all used variables."""
        new_vars = tuple(new_vars)
        idx = []
        for j, v in enumerate(self.vars):
            if v in new_vars:
                idx.append(new_vars.index(v))
            else:
                idx.append(None)
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * len(new_vars)
            for j, k in enumerate(e):
                if k:
                    if idx[j] is None:
                        raise DimensionMismatch(f"variable {self.vars[j]} missing from {new_vars}")
                    e2[idx[j]] = k
            out[tuple(e2)] = c
        return MultiPoly._raw(out, new_vars)

    # univariate views -------------------------------------------------
    def coeffs_in(self, var):
        """Coefficient polynomials of self viewed in ``var`` (index = power)."""
        i = self._index(var)
        buckets = {}
        for e, c in self.terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            buckets.setdefault(k, {})[e2] = c
        if not buckets:
            return []
        top = max(buckets)
        return [MultiPoly._raw(buckets.get(k, {}), self.vars) for k in range(top + 1)]

    def to_univariate(self, var=None):
        """Coefficient list (lowest first) when only ``var`` occurs."""
        if var is None:
            used = {j for e in self.terms for j, k in enumerate(e) if k}
            if len(used) > 1:
                raise DimensionMismatch("polynomial is not univariate")
            i = used.pop() if used else 0
        else:
            i = self._index(var)
        out = {}
        for e, c in self.terms.items():
            if any(k for j, k in enumerate(e) if j != i):
                raise DimensionMismatch("polynomial is not univariate")
            out[e[i]] = c
        if not out:
            return []
        return upoly.trim(out.get(k, mpq(0)) for k in range(max(out) + 1))

    # normalisation ----------------------------------------------------
    def primitive(self):
        """Positive-or-negative rational multiple with coprime integer
        coefficients and positive leading coefficient (grlex)."""
        if not self.terms:
            return self
        den = 1
        for c in self.terms.values():
            d = int(c.denominator)
            den = den * d // igcd(den, d)
        g = 0
        for c in self.terms.values():
            g = igcd(g, int(c * den))
        _, lc = self.leading()
        s = 1 if lc > 0 else -1
        factor = mpq(s * den, g)
        return self * factor

    def monic(self):
        if not self.terms:
            return self
        return self * (1 / self.leading()[1])

    # text format ------------------------------------------------------
    def to_text(self, header=True):
        lines = []
        if header:
            lines.append("# vars " + " ".join(self.vars))
        for e in sorted(self.terms, key=_grlex, reverse=True):
            lines.append(" ".join([q_str(self.terms[e])] + [str(k) for k in e]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text, vars=None):
        found_vars = None
        terms = {}
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if parts and parts[0] == "vars":
                    found_vars = tuple(parts[1:])
                continue
            parts = line.split()
            e = tuple(int(k) for k in parts[1:])
            terms[e] = terms.get(e, 0) + as_q(parts[0])
        vars = tuple(vars or found_vars or XYZ[: len(next(iter(terms), XYZ))])
        return cls(terms, vars)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=_grlex, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.vars, e) if k
            )
            if not mono:
                parts.append(q_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{q_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # flint bridge -----------------------------------------------------
    def to_flint(self, ctx):
        import flint
        return ctx.from_dict(
            {e: flint.fmpq(int(c.numerator), int(c.denominator)) for e, c in self.terms.items()}
        )

    @classmethod
    def from_flint(cls, p, vars):
        return cls({tuple(int(k) for k in e): mpq(int(c.p), int(c.q)) for e, c in p.to_dict().items()}, vars)


# ---------------------------------------------------------------------------
# division


def _divide(f, g, order, exact):
    """Multivariate division of f by the single divisor g.

    Returns (quotient, remainder).  With ``exact`` set, returns None as soon
    as a term that cannot be reduced appears.
    """
    if g.is_zero():
        raise ZeroDivisor("division by the zero polynomial")
    if f.vars != g.vars:
        raise DimensionMismatch("variable mismatch")
    graded = order == "grlex"

    # heap items are negated keys so the largest monomial pops first;
    # for grlex the key is (total degree,) + exponents
    def item(e):
        neg = tuple(-a for a in e)
        return (-sum(e),) + neg if graded else neg

    def expo(it):
        return tuple(-a for a in (it[1:] if graded else it))

    eg = max(g.terms, key=_grlex if graded else None)
    cg = g.terms[eg]
    gterms = [(e, c) for e, c in g.terms.items() if e != eg]
    r = dict(f.terms)
    heap = [item(e) for e in r]
    heapq.heapify(heap)
    quo = {}
    rem = {}
    while heap:
        e = expo(heapq.heappop(heap))
        c = r.pop(e, None)
        if c is None:
            continue
        if all(a >= b for a, b in zip(e, eg)):
            m = tuple(a - b for a, b in zip(e, eg))
            factor = c / cg
            quo[m] = factor
            for e2, c2 in gterms:
                t = tuple(a + b for a, b in zip(m, e2))
                v = r.get(t)
                if v is None:
                    r[t] = -factor * c2
                    heapq.heappush(heap, item(t))
                else:
                    v = v - factor * c2
                    if v:
                        r[t] = v
                    else:
                        del r[t]
        else:
            if exact:
                return None
            rem[e] = c
    return MultiPoly(quo, f.vars), MultiPoly(rem, f.vars)


def exact_div(f, g):
    """Quotient h with f = g*h, or None when g does not divide f."""
    res = _divide(f, g, "lex", exact=True)
    if res is None:
        return None
    return res[0]


def divides(g, f):
    """True iff g divides f exactly."""
    if g.is_zero():
        raise ZeroDivisor("divisibility test by the zero polynomial")
    return exact_div(f, g) is not None


def reduce_mod(f, g, order="grlex"):
    """Remainder of f on division by g in the given monomial order."""
    return _divide(f, g, order, exact=False)[1]


# ---------------------------------------------------------------------------
# gcd and square-free parts


def _as_poly_in(f, i):
    return f.coeffs_in(i)


def _content_in(f, i):
    g = None
    for c in f.coeffs_in(i):
        if c.is_zero():
            continue
        g = c if g is None else gcd(g, c)
        if g.is_constant():
            return MultiPoly.const(1, f.vars)
    return g if g is not None else MultiPoly.const(1, f.vars)


def _from_coeffs(coeffs, i, vars):
    out = {}
    for k, c in enumerate(coeffs):
        for e, v in c.terms.items():
            e2 = e[:i] + (k,) + e[i + 1:]
            out[e2] = v
    return MultiPoly._raw(out, vars)


def _prem(a, b, i):
    """Pseudo-remainder of a by b in variable i (coefficient-list form)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [c * lb for c in a]
        for j, bc in enumerate(b):
            a[j + shift] = a[j + shift] - la * bc
        while a and a[-1].is_zero():
            a.pop()
    return a


def gcd(f, g):
    """Greatest common divisor, normalised by :meth:`MultiPoly.primitive`."""
    if f.vars != g.vars:
        raise DimensionMismatch("variable mismatch")
    if f.is_zero():
        return g.primitive()
    if g.is_zero():
        return f.primitive()
    if f.is_constant() or g.is_constant():
        return MultiPoly.const(1, f.vars)
    n = f.nvars
    i = next(j for j in range(n) if f.degree_in(j) > 0 or g.degree_in(j) > 0)
    if f.degree_in(i) == 0:
        return gcd(f, _content_in(g, i))
    if g.degree_in(i) == 0:
        return gcd(_content_in(f, i), g)
    cf, cg = _content_in(f, i), _content_in(g, i)
    pf, pg = exact_div(f, cf), exact_div(g, cg)
    c = gcd(cf, cg)
    a, b = pf.coeffs_in(i), pg.coeffs_in(i)
    if len(a) < len(b):
        a, b = b, a
    while len(b) > 1:
        r = _prem(a, b, i)
        if not r:
            a, b = b, []
            break
        rp = _from_coeffs(r, i, f.vars)
        rp = exact_div(rp, _content_in(rp, i)).primitive()
        a, b = b, rp.coeffs_in(i)
    if b:
        h = MultiPoly.const(1, f.vars)
    else:
        h = _from_coeffs(a, i, f.vars)
        h = exact_div(h, _content_in(h, i))
    return (c * h).primitive()


def square_free_part(f):
    if f.is_zero():
        raise ZeroPolynomial("square-free part of the zero polynomial")
    g = f
    for i in range(f.nvars):
        d = f.diff(i)
        if not d.is_zero():
            g = gcd(g, d)
            if g.is_constant():
                return f.primitive()
    return exact_div(f, g).primitive()


def factor_kind(g):
    """Classify a factor as 'constant', 'plane', 'sphere' or 'other' by its
    coefficient pattern (trivariate input)."""
    d = g.degree()
    if d <= 0:
        return "constant"
    if d == 1:
        return "plane"
    if d == 2 and g.nvars == 3:
        sq = [(2, 0, 0), (0, 2, 0), (0, 0, 2)]
        c = g.terms.get(sq[0])
        if c and all(g.terms.get(e) == c for e in sq):
            if all(e in sq or sum(e) < 2 for e in g.terms):
                # sphere iff the completed-square radius is positive
                lin = [g.terms.get(e, 0) / c for e in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
                k = g.constant_term() / c
                if sum(v * v for v in lin) / 4 - k > 0:
                    return "sphere"
    return "other"


# ---------------------------------------------------------------------------
# resultants


def bareiss_det(matrix, exact, zero, one):
    """Fraction-free determinant; ``exact(a, b)`` must divide exactly."""
    m = [list(row) for row in matrix]
    n = len(m)
    if n == 0:
        return one
    sgn = 1
    prev = one
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sgn = -sgn
                    break
            else:
                return zero
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            for j in range(k + 1, n):
                m[i][j] = exact(pivot * m[i][j] - mik * m[k][j], prev)
            m[i][k] = zero
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sgn > 0 else -det


def expansion_det(matrix, zero, one):
    """Division-free determinant by Laplace expansion with memoised minors.

    Cost is O(n 2^n) ring multiplications, which beats fraction-free
    elimination for the small Sylvester matrices of large polynomials.
    """
    n = len(matrix)
    memo = {}

    def det(cols):
        row = n - len(cols)
        if row == n:
            return one
        got = memo.get(cols)
        if got is not None:
            return got
        acc = zero
        for idx, c in enumerate(cols):
            e = matrix[row][c]
            if e == 0:
                continue
            term = e * det(cols[:idx] + cols[idx + 1:])
            acc = acc + term if idx % 2 == 0 else acc - term
        memo[cols] = acc
        return acc

    return det(tuple(range(n)))


def sylvester_matrix(a, b, zero):
    """Sylvester matrix of coefficient lists a, b (lowest degree first)."""
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    rows = []
    for k in range(db):
        row = [zero] * size
        for j, c in enumerate(reversed(a)):
            row[k + j] = c
        rows.append(row)
    for k in range(da):
        row = [zero] * size
        for j, c in enumerate(reversed(b)):
            row[k + j] = c
        rows.append(row)
    return rows


def _mp_exact(a, b):
    if b.is_constant():
        return a * (1 / b.constant_term())
    q = exact_div(a, b)
    if q is None:
        raise ArithmeticError("Bareiss step was not exact")
    return q


def sylvester_resultant(f, g, var):
    """Resultant of f and g with respect to ``var`` via a Bareiss determinant."""
    if f.is_zero() or g.is_zero():
        raise DegenerateInput("resultant with the zero polynomial")
    a, b = f.coeffs_in(var), g.coeffs_in(var)
    if len(a) < 2 or len(b) < 2:
        raise DegenerateInput(f"both inputs need positive degree in {var}")
    zero = MultiPoly({}, f.vars)
    one = MultiPoly.const(1, f.vars)
    return bareiss_det(sylvester_matrix(a, b, zero), _mp_exact, zero, one)


# ---------------------------------------------------------------------------
# derivatives and charts


def directional_derivative(f, k):
    """The k-th derivative of f along a symbolic direction (v1, ..., vn)."""
    d = f.degree()
    if k < 1 or k > d:
        raise OrderOutOfRange(f"order {k} outside 1..{d}")
    vnames = tuple(f"v{i + 1}" for i in range(f.nvars))
    big = f.vars + vnames
    h = f.embed(big)
    vs = [MultiPoly.gen(v, big) for v in vnames]
    for _ in range(k):
        acc = MultiPoly({}, big)
        for i in range(f.nvars):
            di = h.diff(i)
            if not di.is_zero():
                acc = acc + vs[i] * di
        h = acc
    return h


def restrict_to_chart(f, chart):
    """g(s, t) = f(origin + s*u + t*w)."""
    s, t = MultiPoly.gens(ST)
    values = [
        MultiPoly.const(o, ST) + s * ui + t * wi
        for o, ui, wi in zip(chart.origin, chart.u, chart.w)
    ]
    return f.compose(values, ST)


def sturm_chain(f):
    """Sturm chain of a univariate MultiPoly as coefficient lists."""
    return upoly.sturm_chain(f.to_univariate() if isinstance(f, MultiPoly) else f)


def sturm_count(f, a="-inf", b="+inf"):
    """Distinct real roots of a univariate polynomial in (a, b]."""
    coeffs = f.to_univariate() if isinstance(f, MultiPoly) else f
    if not upoly.trim(coeffs):
        raise ZeroPolynomial("root count of the zero polynomial")
    return upoly.sturm_count(coeffs, a, b)
