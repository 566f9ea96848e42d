"""Certified maximisation of low-dimensional polynomials.

The workhorse is a best-first interval branch-and-bound.  Besides plain
subdivision it uses one trick that makes tight enclosures cheap: when the
interval enclosure of a partial derivative has a fixed sign on a box, the
maximum over the box sits on one face, and that face is substituted
*exactly* into the polynomial.  Once every variable is pinned this way the
box maximum is a rational number evaluated without rounding.

The region Omega = {0 <= x <= 1, 0 <= y <= 1 - x^2} is handled through the
exact pullback y = (1 - x^2) t, which maps the unit square onto Omega.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional

import numpy as np

from .interval import Interval, eval_tree, horner_tree
from .polycore import ONE, MultiPoly, x as X, y as Y

DEFAULT_EPS = 1e-9
DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


class Inconclusive(RuntimeError):
    pass


@dataclass(frozen=True)
class Region:
    """Axis box plus polynomial constraints g >= 0.

    ``pullback`` optionally maps the region exactly onto a parameter box:
    a dict of variable -> MultiPoly over the parameter box ``param_box``.
    """

    box: tuple  # ((var, lo, hi), ...)
    constraints: tuple = ()
    pullback: Optional[tuple] = None  # ((var, MultiPoly), ...)
    param_box: Optional[tuple] = None
    name: str = "region"

    @property
    def variables(self) -> tuple:
        return tuple(v for v, _, _ in self.box)

    def contains(self, point: Mapping) -> bool:
        for v, lo, hi in self.box:
            if not lo <= point[v] <= hi:
                return False
        return all(g.eval(point) >= 0 for g in self.constraints)

    def strictly_contains(self, point: Mapping) -> bool:
        for v, lo, hi in self.box:
            if not lo < point[v] < hi:
                return False
        return all(g.eval(point) > 0 for g in self.constraints)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "box": {v: [str(lo), str(hi)] for v, lo, hi in self.box},
            "constraints": [f"{g} >= 0" for g in self.constraints],
        }


def box_region(name: str = "box", **bounds) -> Region:
    box = tuple((v, Fraction(lo), Fraction(hi)) for v, (lo, hi) in bounds.items())
    return Region(box=box, name=name)


def omega() -> Region:
    return Region(
        box=(("x", Fraction(0), Fraction(1)), ("y", Fraction(0), Fraction(1))),
        constraints=(X, ONE - X, Y, ONE - X * X - Y),
        pullback=(("y", (ONE - X * X) * Y),),
        param_box=(("x", Fraction(0), Fraction(1)), ("y", Fraction(0), Fraction(1))),
        name="Omega",
    )


OMEGA = omega()


@dataclass
class CertifiedBound:
    lb: Fraction
    ub: float
    witness: dict
    nodes: int
    eps: float
    status: str = "ok"  # ok | budget | target
    history: list = field(default_factory=list)

    @property
    def gap(self) -> float:
        return float(Fraction(self.ub) - self.lb)

    def to_json(self) -> dict:
        return {
            "lb": _q(self.lb),
            "ub": repr(self.ub),
            "ub_exact": _q(Fraction(self.ub)),
            "gap": self.gap,
            "witness": {k: _q(v) for k, v in self.witness.items()},
            "nodes": self.nodes,
            "eps": self.eps,
            "status": self.status,
        }


def _q(v: Fraction) -> str:
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


class _Compiled:
    """Horner trees for a polynomial and its monomial-factored partials."""

    def __init__(self, poly: MultiPoly, variables: tuple):
        self.poly = poly
        self.free = tuple(v for v in variables if poly.degree(v) > 0)
        self.tree = horner_tree(poly, variables)
        self.grads = {}
        for v in self.free:
            d = poly.diff(v)
            g = d.monomial_gcd()
            self.grads[v] = (g, horner_tree(d.divide_monomial(g), variables))


def _monomial_enclosure(exps: tuple, variables: tuple, ivals: list) -> Interval:
    from .polycore import _var_index

    acc = Interval(1.0)
    for v, iv in zip(variables, ivals):
        e = exps[_var_index(v)]
        if e:
            acc = acc * iv ** e
    return acc


class _BranchAndBound:
    def __init__(self, poly, variables, constraints, eps, budget, target=None):
        self.variables = tuple(variables)
        self.constraints = [(g, horner_tree(g, self.variables)) for g in constraints]
        self.eps = eps
        self.budget = budget
        self.target = target
        self.cache: dict = {}
        self.root = poly
        self.lb: Optional[Fraction] = None
        self.witness: Optional[dict] = None
        self.nodes = 0
        self.counter = itertools.count()

    def compiled(self, poly) -> _Compiled:
        c = self.cache.get(poly)
        if c is None:
            c = _Compiled(poly, self.variables)
            if len(self.cache) > 50_000:
                self.cache.clear()
            self.cache[poly] = c
        return c

    def ivals(self, box: dict) -> list:
        return [Interval.hull(*box[v]) for v in self.variables]

    def feasible_exact(self, point: dict) -> bool:
        return all(g.eval(point) >= 0 for g, _ in self.constraints)

    def offer(self, value: Fraction, point: dict):
        if self.lb is None or value > self.lb:
            self.lb = value
            self.witness = dict(point)

    def evaluate(self, poly, box: dict, parent_hi: float):
        """Return None (discarded) or (hi, poly, box) for an open box."""
        self.nodes += 1
        iv = self.ivals(box)
        inside = True
        for _, tree in self.constraints:
            enc = eval_tree(tree, iv)
            if enc.hi < 0:
                return None
            if enc.lo < 0:
                inside = False
        comp = self.compiled(poly)
        # pin variables whose partial derivative has a fixed sign
        while inside and comp.free:
            pinned = {}
            for v in comp.free:
                gexps, gtree = comp.grads[v]
                enc = _monomial_enclosure(gexps, self.variables, iv) * eval_tree(gtree, iv)
                if enc.lo >= 0:
                    pinned[v] = box[v][1]
                elif enc.hi <= 0:
                    pinned[v] = box[v][0]
            if not pinned:
                break
            poly = poly.subs(pinned)
            box = dict(box)
            for v, val in pinned.items():
                box[v] = (val, val)
            iv = self.ivals(box)
            comp = self.compiled(poly)
        if not comp.free:
            point = {v: box[v][0] for v in self.variables}
            value = poly.constant_term()
            if self.feasible_exact(point):
                self.offer(value, point)
                return None
        elif inside and max(box[v][1] - box[v][0] for v in comp.free) <= CORNER_WIDTH:
            corner = corner_maximum(poly, {v: box[v] for v in comp.free})
            if corner is not None:
                point = {v: box[v][0] for v in self.variables}
                point.update(corner[1])
                self.offer(corner[0], point)
                return None
        enc = eval_tree(comp.tree, iv) if comp.free else Interval.from_rational(poly.constant_term())
        hi = min(enc.hi, parent_hi)
        mid = {v: (box[v][0] + box[v][1]) / 2 for v in self.variables}
        if self.feasible_exact(mid):
            self.offer(poly.eval(mid), mid)
        if self.lb is not None and hi <= self.lb:
            return None
        return hi, poly, box

    def run(self, box: dict) -> CertifiedBound:
        heap = []
        first = self.evaluate(self.root, box, float("inf"))
        if first is not None:
            heapq.heappush(heap, self._key(first))
        status = "ok"
        ub = None
        history = []
        while heap:
            neg_hi, _, _, (hi, poly, bx) = heap[0]
            lb = self.lb
            if self.target is not None and (hi <= self.target or (lb is not None and lb > self.target)):
                status = "target"
                ub = hi
                break
            if lb is not None and hi - float(lb) <= self.eps and Fraction(hi) - lb <= Fraction(self.eps):
                ub = hi
                break
            if self.nodes >= self.budget:
                status = "budget"
                ub = hi
                break
            heapq.heappop(heap)
            if len(history) < 10_000:
                history.append((hi, lb))
            comp = self.compiled(poly)
            axes = comp.free or tuple(w for w in self.variables if bx[w][1] > bx[w][0])
            if not axes:
                continue
            v = max(axes, key=lambda w: bx[w][1] - bx[w][0])
            lo_, hi_ = bx[v]
            mid = (lo_ + hi_) / 2
            for part in ((lo_, mid), (mid, hi_)):
                child = dict(bx)
                child[v] = part
                res = self.evaluate(poly, child, hi)
                if res is not None:
                    heapq.heappush(heap, self._key(res))
        if self.lb is None:
            raise Inconclusive("region has no feasible sample point")
        lb_up = Interval.from_rational(self.lb).hi
        ub = lb_up if ub is None else max(ub, lb_up)
        return CertifiedBound(self.lb, ub, self.witness, self.nodes, self.eps, status, history)

    def _key(self, res):
        hi, poly, box = res
        corner = tuple(float(box[v][0]) for v in self.variables)
        return (-hi, corner, next(self.counter), res)


CORNER_WIDTH = Fraction(1, 8)


def dominated(q: MultiPoly, widths: dict) -> bool:
    """True if q <= 0 whenever 0 <= s_v <= widths[v], for q with no constant term.

    Each positive monomial c s^e is absorbed by a negative monomial d s^f with
    f <= e, using s^e <= w^(e-f) s^f.  Succeeds when every negative
    coefficient survives all absorptions.
    """
    from .polycore import VARIABLES

    w = [Fraction(widths.get(v, 0)) for v in VARIABLES]
    neg = {e: -c for e, c in q.items() if c < 0}
    pos = sorted(((e, c) for e, c in q.items() if c > 0), key=lambda t: sum(t[0]))
    for e, c in pos:
        best = None
        for f, room in neg.items():
            if all(a >= b for a, b in zip(e, f)):
                cost = c
                for wi, a, b in zip(w, e, f):
                    if a > b:
                        cost *= wi ** (a - b)
                slack = room - cost
                if best is None or slack > best[1]:
                    best = (f, slack)
        if best is None or best[1] < 0:
            return False
        neg[best[0]] = best[1]
    return True


def corner_maximum(poly: MultiPoly, box: dict):
    """Exact box maximum when it provably sits at a corner, else None.

    The corner with the largest exact value is taken as origin; the polynomial
    is re-expanded there in coordinates pointing into the box and the
    dominance test shows nothing in the box exceeds the corner value.
    """
    names = list(box)
    corners = []
    for picks in itertools.product((0, 1), repeat=len(names)):
        pt = {v: box[v][k] for v, k in zip(names, picks)}
        corners.append((poly.eval(pt), pt))
    value = max(val for val, _ in corners)
    widths = {v: box[v][1] - box[v][0] for v in names}
    for val, pt in corners:
        if val != value:
            continue
        shift = {}
        for v in names:
            lo, hi = box[v]
            shift[v] = (MultiPoly.var(v) + lo) if pt[v] == lo else (MultiPoly.const(hi) - MultiPoly.var(v))
        if dominated(poly.subs(shift) - value, widths):
            return value, pt
    return None


def certify_max(h: MultiPoly, region: Region = OMEGA, eps: float = DEFAULT_EPS,
                budget: int = DEFAULT_BUDGET, *, use_pullback: bool = True,
                target: Optional[float] = None) -> CertifiedBound:
    """Rigorous enclosure [lb, ub] of max h over the region.

    ``lb`` is an exact value at a feasible witness; ``ub`` a float upper bound.
    The search stops once ub - lb <= eps (status ``ok``), when the node budget
    runs out (status ``budget``), or when ``target`` is decided either way.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    variables = region.variables
    if use_pullback and region.pullback:
        pulled = h.subs(dict(region.pullback))
        box = {v: (lo, hi) for v, lo, hi in region.param_box}
        bnb = _BranchAndBound(pulled, variables, (), eps, budget, target)
        res = bnb.run(box)
        res.witness = _push_forward(region, res.witness)
        return res
    box = {v: (lo, hi) for v, lo, hi in region.box}
    bnb = _BranchAndBound(h, variables, region.constraints, eps, budget, target)
    return bnb.run(box)


def _push_forward(region: Region, point: dict) -> dict:
    out = dict(point)
    for v, expr in region.pullback:
        out[v] = expr.eval(point)
    return out


@dataclass
class NonnegCertificate:
    ok: bool
    status: str  # certified | refuted | inconclusive
    bound: CertifiedBound

    def to_json(self) -> dict:
        return {"ok": self.ok, "status": self.status, "max_of_negation": self.bound.to_json()}


def certify_nonneg(p: MultiPoly, region: Region = OMEGA, eps: float = DEFAULT_EPS,
                   budget: int = DEFAULT_BUDGET) -> NonnegCertificate:
    """Certify min p >= 0 on the region via max(-p) <= 0."""
    bound = certify_max(-p, region, eps, budget, target=0.0)
    if bound.ub <= 0:
        return NonnegCertificate(True, "certified", bound)
    if bound.lb > 0:
        return NonnegCertificate(False, "refuted", bound)
    return NonnegCertificate(False, "inconclusive", bound)


# ---------------------------------------------------------------------------
# interior critical points


@dataclass
class CriticalPoint:
    x: float
    y: float
    value: float
    enclosure: tuple  # ((xlo, xhi), (ylo, yhi))
    kind: str = "interior"  # interior | boundary
    exact: Optional[tuple] = None

    def to_json(self) -> dict:
        out = {"x": self.x, "y": self.y, "value": self.value, "kind": self.kind,
               "enclosure": [list(self.enclosure[0]), list(self.enclosure[1])]}
        if self.exact is not None:
            out["exact"] = [_q(self.exact[0]), _q(self.exact[1])]
        return out


@dataclass
class CriticalSet:
    interior: list
    boundary: list
    inconclusive: list
    nodes: int

    def to_json(self) -> dict:
        return {
            "interior": [p.to_json() for p in self.interior],
            "boundary": [p.to_json() for p in self.boundary],
            "inconclusive": [[list(b[0]), list(b[1])] for b in self.inconclusive],
            "nodes": self.nodes,
        }


class _Gradient:
    def __init__(self, h: MultiPoly, u: str, v: str):
        self.u, self.v = u, v
        order = (u, v)
        self.h = h
        self.fu, self.fv = h.diff(u), h.diff(v)
        self.trees = [horner_tree(p, order) for p in (self.fu, self.fv)]
        self.jac = [[horner_tree(self.fu.diff(u), order), horner_tree(self.fu.diff(v), order)],
                    [horner_tree(self.fv.diff(u), order), horner_tree(self.fv.diff(v), order)]]
        self.hpoly = h

    def f(self, box):
        return [eval_tree(t, box) for t in self.trees]

    def J(self, box):
        return [[eval_tree(t, box) for t in row] for row in self.jac]

    def point_f(self, p):
        return np.array([float(self.fu.eval({self.u: p[0], self.v: p[1]})),
                         float(self.fv.eval({self.u: p[0], self.v: p[1]}))])

    def point_J(self, p):
        return np.array([[eval_tree(t, [Interval(p[0]), Interval(p[1])]).mid for t in row]
                         for row in self.jac])


def _krawczyk(grad: _Gradient, box: list):
    """Krawczyk operator K(X); returns (K, Y) or (None, None) when J(m) is singular."""
    m = [b.mid for b in box]
    Jm = grad.point_J(m)
    try:
        Yinv = np.linalg.inv(Jm)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(Yinv)):
        return None
    fm = grad.f([Interval(m[0]), Interval(m[1])])
    JX = grad.J(box)
    out = []
    for i in range(2):
        yf = Interval(Yinv[i, 0]) * fm[0] + Interval(Yinv[i, 1]) * fm[1]
        acc = Interval(m[i]) - yf
        for j in range(2):
            # (I - Y J(X))_{ij}
            yj = Interval(Yinv[i, 0]) * JX[0][j] + Interval(Yinv[i, 1]) * JX[1][j]
            entry = (Interval(1.0) if i == j else Interval(0.0)) - yj
            acc = acc + entry * (box[j] - m[j])
        out.append(acc)
    return out


def _strictly_inside(inner, outer) -> bool:
    return all(o.lo < i.lo and i.hi < o.hi for i, o in zip(inner, outer))


def _inflate(box, factor=0.1, absolute=1e-13):
    return [Interval(b.lo - factor * b.width - absolute, b.hi + factor * b.width + absolute) for b in box]


def find_critical_points(h: MultiPoly, region: Region = OMEGA, tol: float = 1e-10,
                         budget: int = 200_000, min_width: float = 1e-9) -> CriticalSet:
    """Enumerate zeros of the gradient of a bivariate polynomial near the region.

    Zeros are isolated by interval subdivision over the region's bounding box
    (slightly enlarged so that zeros on the boundary are not on the search
    frame), verified unique with the Krawczyk test, refined by Newton and
    classified as interior or boundary.  Boxes that can be neither excluded
    nor verified down to ``min_width`` come back as inconclusive.
    """
    u, v = region.variables
    grad = _Gradient(h, u, v)
    bounds = {var: (float(lo), float(hi)) for var, lo, hi in region.box}
    # asymmetric margins keep simple rationals like 0, 1/2, 1 off the bisection grid
    start = [Interval(bounds[w][0] - 1 / 64, bounds[w][1] + 3 / 64) for w in (u, v)]
    cons = [(g, horner_tree(g, (u, v))) for g in region.constraints]
    stack = [start]
    verified = []
    inconclusive = []
    nodes = 0
    while stack:
        box = stack.pop()
        nodes += 1
        if nodes > budget:
            inconclusive.append(box)
            inconclusive.extend(stack)
            break
        if any(eval_tree(t, box).hi < 0 for _, t in cons):
            continue
        fx, fy = grad.f(box)
        if not (fx.contains_zero() and fy.contains_zero()):
            continue
        K = _krawczyk(grad, box)
        if K is not None:
            if _strictly_inside(K, box):
                verified.append(K)
                continue
            cut = [k.intersect(b) for k, b in zip(K, box)]
            if any(c is None for c in cut):
                continue
            if max(c.width for c in cut) < 0.5 * max(b.width for b in box):
                stack.append(cut)
                continue
            box = cut
        width = max(b.width for b in box)
        if width < 1e-3:
            wide = _inflate(box)
            Kw = _krawczyk(grad, wide)
            if Kw is not None and _strictly_inside(Kw, wide):
                verified.append(Kw)
                continue
        if width < min_width:
            inconclusive.append(box)
            continue
        i = 0 if box[0].width >= box[1].width else 1
        mid = box[i].mid
        left = list(box)
        right = list(box)
        left[i] = Interval(box[i].lo, mid)
        right[i] = Interval(mid, box[i].hi)
        stack.extend([right, left])

    roots = []
    for K in verified:
        p = _newton(grad, np.array([K[0].mid, K[1].mid]), K, tol)
        if any(np.hypot(*(p - q[0])) < max(1e-9, 10 * tol) for q in roots):
            continue
        roots.append((p, K))

    interior, boundary = [], []
    for p, K in sorted(roots, key=lambda r: (r[0][0], r[0][1])):
        tight = _tighten(grad, p, K)
        encs = [eval_tree(t, tight) for _, t in cons]
        value = float(h.eval({u: float(p[0]), v: float(p[1])}))
        enclosure = ((tight[0].lo, tight[0].hi), (tight[1].lo, tight[1].hi))
        if all(e.lo > 0 for e in encs):
            interior.append(CriticalPoint(float(p[0]), float(p[1]), value, enclosure))
            continue
        if any(e.hi < 0 for e in encs):
            continue
        exact = _exact_root(grad, p)
        if exact is None:
            inconclusive.append(tight)
            continue
        pt = {u: exact[0], v: exact[1]}
        if region.strictly_contains(pt):
            interior.append(CriticalPoint(float(p[0]), float(p[1]), value, enclosure, "interior", exact))
        elif region.contains(pt):
            boundary.append(CriticalPoint(float(p[0]), float(p[1]), value, enclosure, "boundary", exact))
    inconclusive = [((b[0].lo, b[0].hi), (b[1].lo, b[1].hi)) for b in inconclusive]
    return CriticalSet(interior, boundary, inconclusive, nodes)


def critical_points(h: MultiPoly, region: Region = OMEGA, tol: float = 1e-10) -> list:
    """Certified interior critical points, ordered by x."""
    return find_critical_points(h, region, tol).interior


def _newton(grad: _Gradient, p, K, tol):
    lo = np.array([K[0].lo, K[1].lo])
    hi = np.array([K[0].hi, K[1].hi])
    for _ in range(60):
        J = grad.point_J(p)
        try:
            step = np.linalg.solve(J, grad.point_f(p))
        except np.linalg.LinAlgError:
            break
        p = np.clip(p - step, lo, hi)
        if np.max(np.abs(step)) < tol * 1e-2:
            break
    return p


def _tighten(grad, p, K):
    for r in (1e-13, 1e-11, 1e-9, 1e-7):
        box = [Interval(p[i] - r * (1 + abs(p[i])), p[i] + r * (1 + abs(p[i]))) for i in range(2)]
        Kt = _krawczyk(grad, box)
        if Kt is not None and _strictly_inside(Kt, box):
            return Kt
    return K


def _exact_root(grad: _Gradient, p, max_den: int = 10 ** 6):
    q = (Fraction(float(p[0])).limit_denominator(max_den), Fraction(float(p[1])).limit_denominator(max_den))
    pt = {grad.u: q[0], grad.v: q[1]}
    if grad.fu.eval(pt) == 0 and grad.fv.eval(pt) == 0:
        return q
    return None


# ---------------------------------------------------------------------------
# edge profiles


@dataclass
class EdgeProfile:
    label: str
    poly: MultiPoly
    variable: Optional[str]
    bound: CertifiedBound
    checks: list  # [(name, passed, detail)]

    def to_json(self) -> dict:
        return {
            "edge": self.label,
            "restriction": str(self.poly),
            "variable": self.variable,
            "max": self.bound.to_json(),
            "checks": [{"name": n, "status": "pass" if ok else "fail", "detail": d}
                       for n, ok, d in self.checks],
        }


def restrict_to_edges(h: MultiPoly) -> list:
    """(label, restricted poly, free variable, 1-D region) for the four edges of Omega."""
    z, one = Fraction(0), Fraction(1)
    return [
        ("x=0", h.subs({"x": 0}), "y", box_region("x=0", y=(z, one))),
        ("x=1", h.subs({"x": 1, "y": 0}), None, box_region("x=1", x=(one, one), y=(z, z))),
        ("y=0", h.subs({"y": 0}), "x", box_region("y=0", x=(z, one))),
        ("y=1-x^2", h.subs({"y": ONE - X * X}), "x", box_region("y=1-x^2", x=(z, one))),
    ]


def edge_profiles(spec, eps: float = DEFAULT_EPS) -> list:
    from .decomp import builtin_decomposition
    from .reference import EDGE_CLAIMS

    d = builtin_decomposition(spec)
    claims = EDGE_CLAIMS[spec.name]
    out = []
    for label, poly, var, region in restrict_to_edges(d.majorant):
        bound = certify_max(poly, region, eps)
        checks = []
        for claim in claims.get(label, ()):
            checks.append(claim.check(poly, bound))
        out.append(EdgeProfile(label, poly, var, bound, checks))
    return out
