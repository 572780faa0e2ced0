"""Polynomial partitioning by iterated discrete ham-sandwich bisection.

Each stage lifts the current classes to the monomials of degree <= d and
looks for a coefficient vector whose sign pattern splits every class in
half.  The search is numeric (a damped Gauss-Newton iteration on the
median constraints); the answer is rounded to a rational polynomial and its
signs are re-checked exactly, so the guarantee never rests on floating point.
"""

import json
from dataclasses import dataclass, field
from math import ceil, comb, log2

import numpy as np
from gmpy2 import mpq

from .errors import BisectionFailed, BudgetTooSmall
from .poly import XYZ, MultiPoly, factor_kind

# max over r in 2..4096 of (schedule degree with one escalation per stage)
# / r^(1/3) is 7.952 at r = 2049; see scripts/calibrate_cdeg.py
C_DEG = 8.0

_ROUND_BITS = 40
MAX_ESCALATION = 4


def monomial_exponents(d):
    """Exponent triples of total degree <= d, graded."""
    out = []
    for tot in range(d + 1):
        for a in range(tot, -1, -1):
            for b in range(tot - a, -1, -1):
                out.append((a, b, tot - a - b))
    return out


def schedule_degree(num_sets):
    """Smallest d with binom(d+3, 3) - 1 >= num_sets (at least 1)."""
    d = 1
    while comb(d + 3, 3) - 1 < num_sets:
        d += 1
    return d


def stage_budget(j):
    return schedule_degree(2 ** j)


def schedule_total(r, escalation=0):
    stages = ceil(log2(r)) if r > 1 else 0
    return sum(stage_budget(j) + escalation for j in range(stages))


# ---------------------------------------------------------------------------
# exact evaluation helpers


class _IntPoints:
    """Points as integer numerators with a per-point positive denominator."""

    def __init__(self, points):
        self.nums = []
        self.dens = []
        for p in points:
            den = 1
            for c in p:
                d = int(c.denominator)
                den = den * d // _gcd(den, d)
            self.nums.append(tuple(int(c * den) for c in p))
            self.dens.append(den)

    def signs(self, poly_int, d, idx):
        """Exact signs of an integer-coefficient polynomial of degree <= d."""
        terms = list(poly_int.items())
        out = []
        for i in idx:
            X, Y, Z = self.nums[i]
            D = self.dens[i]
            xp, yp, zp, dp = [1], [1], [1], [1]
            for _ in range(d):
                xp.append(xp[-1] * X)
                yp.append(yp[-1] * Y)
                zp.append(zp[-1] * Z)
                dp.append(dp[-1] * D)
            acc = 0
            for (a, b, c), coef in terms:
                acc += coef * xp[a] * yp[b] * zp[c] * dp[d - a - b - c]
            out.append((acc > 0) - (acc < 0))
        return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _int_coeffs(poly):
    """Integer coefficient map of a positive multiple of a trivariate poly."""
    return {e: int(c) for e, c in poly.primitive().terms.items()}


# ---------------------------------------------------------------------------
# numeric search


def _lift(P, exps):
    cols = [np.prod(P ** np.array(e, dtype=float), axis=1) for e in exps]
    return np.stack(cols, axis=1)


def _residuals(L, c, w):
    J, T, bad = [], [], 0
    for Li in L:
        v = Li @ c
        n = len(v)
        h = -(-n // 2)
        o = np.argsort(v)
        a, b = n - h - 1, h
        lo = v[o[a]] if a >= 0 else -np.inf
        hi = v[o[b]] if b < n else np.inf
        if not (lo < 0 < hi):
            bad += 1
        s = v.std() + 1e-12
        ww = int(w * np.sqrt(n))
        a = max(a, 0)
        b = min(b, n - 1)
        win = o[max(0, a - ww): b + ww + 1]
        T.append(0.5 * (v[o[a]] + v[o[b]]) / s)
        J.append(Li[win].mean(0) / s)
    return np.array(J), np.array(T), bad


def _lm_search(L, dim, rng, iters=200):
    c = rng.normal(size=dim)
    c /= np.linalg.norm(c)
    mu, w = 1e-3, 0.5
    J, T, bad = _residuals(L, c, w)
    for _ in range(iters):
        if bad == 0:
            return c
        JJ = J @ J.T
        reg = mu * (np.trace(JJ) / len(T) + 1e-12)
        try:
            delta = J.T @ np.linalg.solve(JJ + reg * np.eye(len(T)), T)
        except np.linalg.LinAlgError:
            return None
        c2 = c - delta
        nrm = np.linalg.norm(c2)
        if not np.isfinite(nrm) or nrm == 0:
            return None
        c2 /= nrm
        J2, T2, bad2 = _residuals(L, c2, w)
        if T2 @ T2 < T @ T or bad2 < bad:
            c, J, T, bad = c2, J2, T2, bad2
            mu = max(mu / 3, 1e-6)
        else:
            mu *= 4
            if mu > 1e3:
                break
        w *= 0.95
    return c if bad == 0 else None


# ---------------------------------------------------------------------------
# bisection


class _Frame:
    """Rational affine normalisation y = (x - center) / scale of a point set."""

    def __init__(self, points):
        arr = np.array([[float(c) for c in p] for p in points], dtype=float)
        ctr = arr.mean(axis=0)
        self.center = [mpq(float(np.round(v * 2 ** 20) / 2 ** 20)) for v in ctr]
        dev = np.abs(arr - np.array([float(v) for v in self.center])).max()
        scale = 1
        while scale < dev:
            scale *= 2
        while scale / 2 >= dev and scale > 2.0 ** -30:
            scale /= 2
        self.scale = mpq(scale)
        self.arr = (arr - np.array([float(v) for v in self.center])) / float(self.scale)

    def to_poly(self, exps, coef_int):
        """MultiPoly in x for sum coef_int[e] * y^e."""
        x, y, z = MultiPoly.gens(XYZ)
        ys = [(x - self.center[0]) * (1 / self.scale),
              (y - self.center[1]) * (1 / self.scale),
              (z - self.center[2]) * (1 / self.scale)]
        g = MultiPoly({e: c for e, c in zip(exps, coef_int) if c}, XYZ)
        return g.compose(ys, XYZ).primitive()


def _balanced(signs_by_set):
    for sg in signs_by_set:
        n = len(sg)
        h = -(-n // 2)
        if sum(1 for s in sg if s > 0) > h or sum(1 for s in sg if s < 0) > h:
            return False
    return True


def _bisect_exact(points, index_sets, degree, seed, restarts=12, ip=None, frame=None):
    """Search for a verified bisector; returns (MultiPoly, sign map) or None."""
    exps = monomial_exponents(degree)
    frame = frame or _Frame(points)
    ip = ip or _IntPoints(points)
    sets = [s for s in index_sets if len(s) >= 2]
    if not sets:
        return MultiPoly.const(1), {}
    used = sorted({i for s in sets for i in s})
    A = _lift(frame.arr[used], exps)
    U, S, Vt = np.linalg.svd(A, full_matrices=False)
    keep = S > S[0] * 1e-10
    rank = int(keep.sum())
    if rank - 1 < len(sets):
        raise BudgetTooSmall(
            f"lift rank {rank} cannot bisect {len(sets)} sets at degree {degree}"
        )
    B = Vt[keep].T / S[keep]
    L = [_lift(frame.arr[list(s)], exps) @ B for s in sets]
    for attempt in range(restarts):
        rng = np.random.default_rng([seed & 0xFFFFFFFF, degree, attempt])
        c = _lm_search(L, rank, rng)
        if c is None:
            continue
        coef = B @ c
        coef = coef / np.abs(coef).max()
        coef_int = [int(v) for v in np.round(coef * 2 ** _ROUND_BITS)]
        if not any(coef_int):
            continue
        g = frame.to_poly(exps, coef_int)
        gi = _int_coeffs(g)
        signs = {}
        checked = []
        for s in sets:
            sg = ip.signs(gi, degree, s)
            checked.append(sg)
            for i, v in zip(s, sg):
                signs[i] = v
        if _balanced(checked):
            return g, signs
    return None


def bisecting_polynomial(point_sets, degree_budget, seed=0):
    """A polynomial of degree <= budget splitting every set in half.

    ``point_sets`` is a list of lists of Point3.  At most ceil(|S|/2) points
    of each set S end up on either open side of the zero set.
    """
    sets = [list(s) for s in point_sets]
    if not sets:
        return MultiPoly.const(1)
    if comb(degree_budget + 3, 3) - 1 < len(sets):
        raise BudgetTooSmall(
            f"degree {degree_budget} lifts to {comb(degree_budget + 3, 3) - 1} dims, "
            f"need {len(sets)}"
        )
    flat = []
    index_sets = []
    for s in sets:
        idx = []
        for p in s:
            idx.append(len(flat))
            flat.append(tuple(p))
        index_sets.append(idx)
    res = _bisect_exact(flat, index_sets, degree_budget, seed)
    if res is None:
        raise BisectionFailed(f"no verified bisector found at degree {degree_budget}")
    return res[0]


# ---------------------------------------------------------------------------
# partitions


@dataclass
class Partition:
    factors: list
    degrees: list
    r: int
    m: int
    cell_index: dict
    seed: int = 0
    sign_vectors: list = field(default_factory=list, repr=False)
    _product: object = field(default=None, repr=False)

    @property
    def product(self):
        if self._product is None:
            f = MultiPoly.const(1)
            for g in self.factors:
                f = f * g
            self._product = f
        return self._product

    @property
    def degree(self):
        return sum(self.degrees)

    @property
    def cell_bound(self):
        return -(-self.m // self.r)

    def zero_free_cells(self):
        return {k: v for k, v in self.cell_index.items() if 0 not in k}

    def p0(self):
        return sorted(i for k, v in self.cell_index.items() if 0 in k for i in v)

    def factor_kinds(self):
        return [factor_kind(g) for g in self.factors]

    def to_obj(self):
        return {
            "r": self.r,
            "m": self.m,
            "seed": self.seed,
            "degrees": self.degrees,
            "factors": [g.to_text(header=False).strip().splitlines() for g in self.factors],
            "factor_kinds": self.factor_kinds(),
            "cells": [
                {"sign": "".join("+" if s > 0 else "-" if s < 0 else "0" for s in k), "size": len(v)}
                for k, v in sorted(self.cell_index.items())
            ],
        }

    def to_json(self):
        return json.dumps(self.to_obj(), separators=(",", ":"))


def _index_cells(sign_vectors):
    cells = {}
    for i, sv in enumerate(sign_vectors):
        cells.setdefault(tuple(sv), []).append(i)
    return cells


def partition_from_factors(points, factors, r):
    """Index points by the exact sign vector of a given factor list."""
    pts = [tuple(p) for p in points]
    ip = _IntPoints(pts)
    svs = [[] for _ in pts]
    degrees = []
    for g in factors:
        d = g.degree()
        degrees.append(d)
        sg = ip.signs(_int_coeffs(g), max(d, 0), range(len(pts)))
        for i, v in enumerate(sg):
            svs[i].append(v)
    return Partition(list(factors), degrees, r, len(pts), _index_cells(svs), 0, [tuple(s) for s in svs])


def build_partition(points, r, seed=0):
    """An r-partitioning polynomial for distinct points, as a product of bisectors."""
    pts = [tuple(p) for p in points]
    m = len(pts)
    if r < 1 or r > max(m, 1):
        raise ValueError(f"need 1 <= r <= m (r={r}, m={m})")
    if len(set(pts)) != m:
        raise ValueError("build_partition requires distinct points")
    stages = ceil(log2(r)) if r > 1 else 0
    frame = _Frame(pts) if m else None
    ip = _IntPoints(pts)
    svs = [[] for _ in pts]
    classes = [list(range(m))]
    factors, degrees = [], []
    for j in range(stages):
        live = [c for c in classes if len(c) >= 2]
        if not live:
            break
        d0 = schedule_degree(len(live))
        result = None
        last_error = None
        for extra in range(MAX_ESCALATION + 1):
            d = d0 + extra
            try:
                result = _bisect_exact(pts, live, d, seed + 7919 * j, ip=ip, frame=frame)
            except BudgetTooSmall as exc:
                last_error = exc
                continue
            if result is not None:
                break
        if result is None:
            raise BisectionFailed(
                f"stage {j}: no verified bisector up to degree {d0 + MAX_ESCALATION}"
                + (f" ({last_error})" if last_error else "")
            )
        g, _ = result
        dg = g.degree()
        factors.append(g)
        degrees.append(dg)
        gi = _int_coeffs(g)
        signs = ip.signs(gi, dg, range(m))
        for i, v in enumerate(signs):
            svs[i].append(v)
        new = []
        for c in classes:
            pos = [i for i in c if signs[i] > 0]
            neg = [i for i in c if signs[i] < 0]
            if pos:
                new.append(pos)
            if neg:
                new.append(neg)
        classes = new
    # stages skipped early contribute no factor; every vector has len(factors)
    part = Partition(factors, degrees, r, m, _index_cells(svs), seed, [tuple(s) for s in svs])
    return part


@dataclass
class PartitionStats:
    degree: int
    factors: int
    nonempty_cells: int
    max_cell: int
    cell_bound: int
    p0_size: int
    warren_bound: int

    def as_dict(self):
        return dict(self.__dict__)


def partition_stats(part):
    cells = part.zero_free_cells()
    deg = part.degree
    st = PartitionStats(
        degree=deg,
        factors=len(part.factors),
        nonempty_cells=len(cells),
        max_cell=max((len(v) for v in cells.values()), default=0),
        cell_bound=part.cell_bound,
        p0_size=len(part.p0()),
        warren_bound=(2 * deg) ** 3 if deg else 1,
    )
    if st.nonempty_cells > st.warren_bound:
        raise AssertionError(
            f"{st.nonempty_cells} sign cells exceed the (2 deg f)^3 = {st.warren_bound} bound"
        )
    return st
