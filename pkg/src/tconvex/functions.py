"""Extended-real functions on group subsets and every convexity notion:
the four inequality kinds, level sets, the two convolutions, transport,
the quasiconvex envelope, parameter intervals and epigraph/graph lifts."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .endos import Endo, complement
from .groups import CYCLIC, GroupSpec, Element, GroupError
from .rationals import (
    NEG_INF,
    ExtValue,
    ext_add,
    ext_le,
    ext_max,
    ext_min,
    ext_scale,
    format_ext,
    parse_ext,
)
from .report import EXHAUSTIVE, SAMPLED, Report
from .sets import GroundSet, finite_set, is_T_convex

QUASICONVEX = "quasiconvex"
WRIGHT = "wright"
TTCONVEX = "ttconvex"
WRIGHT_AFFINE = "wright_affine"
TT_AFFINE = "tt_affine"

KINDS = (QUASICONVEX, WRIGHT, TTCONVEX, WRIGHT_AFFINE, TT_AFFINE)


class FnError(ValueError):
    pass


@dataclass(frozen=True)
class TableFn:
    domain: GroundSet
    values: tuple  # aligned with domain.elements

    def __post_init__(self):
        if not self.domain.is_finite:
            raise FnError("table functions need an explicit finite domain")
        if len(self.values) != len(self.domain.elements):
            raise FnError("value count must match the domain size")

    @property
    def group(self):
        return self.domain.group

    def value_map(self):
        return dict(zip(self.domain.elements, self.values))

    def __call__(self, x: Element) -> ExtValue:
        try:
            idx = self.domain.elements.index(x)
        except ValueError:
            raise FnError(f"{x} outside the function domain")
        return self.values[idx]

    def is_finite_valued(self) -> bool:
        return all(v is not NEG_INF for v in self.values)


@dataclass(frozen=True)
class QuadraticFn:
    """x^T Q x + b^T x + c on a ground-set domain (Q symmetric)."""

    domain: GroundSet
    q: tuple
    b: tuple
    c: Fraction

    def __post_init__(self):
        if self.q != linalg.transpose(self.q):
            raise FnError("Q must be symmetric")

    @property
    def group(self):
        return self.domain.group

    def __call__(self, x: Element) -> ExtValue:
        v = tuple(Fraction(cc) for cc in x.coords)
        qv = linalg.mat_vec(self.q, v)
        return (
            sum((a * b for a, b in zip(v, qv)), Fraction(0))
            + sum((a * b for a, b in zip(self.b, v)), Fraction(0))
            + self.c
        )

    def is_finite_valued(self) -> bool:
        return True


def table_fn(domain: GroundSet, values) -> TableFn:
    return TableFn(
        domain, tuple(v if v is NEG_INF else Fraction(v) for v in values)
    )


def table_from_callable(domain: GroundSet, fn) -> TableFn:
    return TableFn(domain, tuple(fn(x) for x in domain.elements))


@dataclass(frozen=True)
class ConvexPair:
    endo: Endo
    t: Fraction

    def __post_init__(self):
        t = Fraction(self.t)
        if not (0 <= t <= 1):
            raise FnError("t must lie in [0, 1]")
        object.__setattr__(self, "t", t)


@dataclass(frozen=True)
class Interval:
    """A closed rational subinterval of [0,1], possibly empty."""

    empty: bool
    lower: Fraction = Fraction(0)
    upper: Fraction = Fraction(1)

    def __post_init__(self):
        if not self.empty and self.lower > self.upper:
            raise FnError("nonempty interval needs lower <= upper")

    @staticmethod
    def full():
        return Interval(False, Fraction(0), Fraction(1))

    @staticmethod
    def none():
        return Interval(True)

    def contains(self, t) -> bool:
        return not self.empty and self.lower <= Fraction(t) <= self.upper

    def intersect_lower(self, bound: Fraction) -> "Interval":
        if self.empty:
            return self
        lo = max(self.lower, bound)
        if lo > self.upper:
            return Interval.none()
        return Interval(False, lo, self.upper)

    def intersect_upper(self, bound: Fraction) -> "Interval":
        if self.empty:
            return self
        hi = min(self.upper, bound)
        if self.lower > hi:
            return Interval.none()
        return Interval(False, self.lower, hi)

    def intersect_point(self, t: Fraction) -> "Interval":
        if self.empty or not (self.lower <= t <= self.upper):
            return Interval.none()
        return Interval(False, t, t)


# -- the inequality checker ------------------------------------------------


def _violates(kind, t, fx, fy, fz1, fz2):
    """Whether a pair violates the inequality; returns (lhs, rhs) or None."""
    if kind == QUASICONVEX:
        lhs, rhs = fz1, ext_max(fx, fy)
        bad = not ext_le(lhs, rhs)
    elif kind == WRIGHT:
        lhs, rhs = ext_add(fz1, fz2), ext_add(fx, fy)
        bad = not ext_le(lhs, rhs)
    elif kind == TTCONVEX:
        lhs = fz1
        rhs = ext_add(ext_scale(t, fx), ext_scale(1 - t, fy))
        bad = not ext_le(lhs, rhs)
    elif kind == WRIGHT_AFFINE:
        lhs, rhs = ext_add(fz1, fz2), ext_add(fx, fy)
        bad = lhs is not rhs if (lhs is NEG_INF or rhs is NEG_INF) else lhs != rhs
    elif kind == TT_AFFINE:
        lhs = fz1
        rhs = ext_add(ext_scale(t, fx), ext_scale(1 - t, fy))
        bad = lhs is not rhs if (lhs is NEG_INF or rhs is NEG_INF) else lhs != rhs
    else:
        raise FnError(f"unknown inequality kind {kind!r}")
    return (lhs, rhs) if bad else None


def check_inequality(
    kind: str,
    f,
    pair: ConvexPair,
    probes: int = 1000,
    seed: int = 0,
) -> Report:
    """Check one convexity inequality; exhaustive over table domains,
    sampled over quadratic (box) domains.  The domain must be T-convex."""
    t_endo = pair.endo
    g = f.group
    conv = is_T_convex(f.domain, t_endo, probes=probes, seed=seed)
    if not conv.verdict:
        raise FnError(f"domain is not T-convex: witness {conv.witness}")
    it = complement(t_endo)
    needs_mirror = kind in (WRIGHT, WRIGHT_AFFINE)

    def eval_pair(x, y):
        z1 = g.add(t_endo.apply(x), it.apply(y))
        fz2 = None
        if needs_mirror:
            z2 = g.add(it.apply(x), t_endo.apply(y))
            fz2 = f(z2)
        return _violates(kind, pair.t, f(x), f(y), f(z1), fz2), z1

    if isinstance(f, TableFn):
        for x in f.domain.elements:
            for y in f.domain.elements:
                bad, z1 = eval_pair(x, y)
                if bad:
                    return Report(
                        f"check:{kind}", False, EXHAUSTIVE,
                        witness=_ineq_witness(x, y, z1, bad),
                    )
        return Report(f"check:{kind}", True, EXHAUSTIVE)
    rng = random.Random(seed)
    for _ in range(probes):
        x = f.domain.sample(rng)
        y = f.domain.sample(rng)
        bad, z1 = eval_pair(x, y)
        if bad:
            return Report(
                f"check:{kind}", False, SAMPLED, witness=_ineq_witness(x, y, z1, bad)
            )
    return Report(f"check:{kind}", True, SAMPLED)


def _ineq_witness(x, y, z, sides):
    return {
        "x": list(map(str, x.coords)),
        "y": list(map(str, y.coords)),
        "z": list(map(str, z.coords)),
        "lhs": format_ext(sides[0]),
        "rhs": format_ext(sides[1]),
    }


# -- level sets and characteristic functions -------------------------------


def level_set(f: TableFn, c: ExtValue) -> GroundSet:
    """{x in D : f(x) <= c}; monotone in c."""
    members = [x for x, v in zip(f.domain.elements, f.values) if ext_le(v, c)]
    return finite_set(f.group, members)


def neg_char_fn(s: GroundSet, ambient: GroundSet) -> TableFn:
    """-1 on S, 0 off S (order-isomorphic to the negated characteristic
    function; preserves all max-inequalities)."""
    if not ambient.is_finite:
        raise FnError("ambient domain must be explicit finite")
    for x in s.elements:
        if x not in ambient:
            raise FnError("S must be a subset of the ambient domain")
    inside = set(s.elements)
    return table_fn(
        ambient,
        [Fraction(-1) if x in inside else Fraction(0) for x in ambient.elements],
    )


# -- convolutions ----------------------------------------------------------


def _conv(f: TableFn, g_fn: TableFn, combine):
    if f.group != g_fn.group:
        raise FnError("convolution needs functions on the same group")
    grp = f.group
    acc = {}
    for u, fu in zip(f.domain.elements, f.values):
        for v, gv in zip(g_fn.domain.elements, g_fn.values):
            z = grp.add(u, v)
            val = combine(fu, gv)
            acc[z] = val if z not in acc else ext_min(acc[z], val)
    domain = finite_set(grp, acc.keys())
    return table_fn(domain, [acc[z] for z in domain.elements])


def diamond_conv(f: TableFn, g_fn: TableFn) -> TableFn:
    """(f<>g)(x) = inf{max(f(u), g(v)) : u+v = x} on the sumset."""
    return _conv(f, g_fn, ext_max)


def inf_conv(f: TableFn, g_fn: TableFn) -> TableFn:
    """(f*g)(x) = inf{f(u)+g(v) : u+v = x}; -inf absorbs."""
    return _conv(f, g_fn, ext_add)


# -- transport -------------------------------------------------------------


def transport(f: TableFn, a: Endo, direction: str) -> TableFn:
    """Pullback f.A on A^{-1}(D), or pushforward with fiberwise infimum
    on A(D)."""
    grp = f.group
    if direction == "pullback":
        members = []
        if grp.family == CYCLIC:
            domain_set = set(f.domain.elements)
            members = [x for x in grp.elements() if a.apply(x) in domain_set]
        else:
            if linalg.det(a.matrix) == 0:
                raise FnError("pullback on infinite carriers needs invertible A")
            inv = linalg.mat_inv(a.matrix)
            for d in f.domain.elements:
                try:
                    z = grp.reduce(linalg.mat_vec(inv, d.coords))
                except GroupError:
                    continue
                members.append(z)
        if not members:
            raise FnError("empty pullback domain")
        domain = finite_set(grp, members)
        return table_fn(domain, [f(a.apply(x)) for x in domain.elements])
    if direction == "pushforward":
        acc = {}
        for u, fu in zip(f.domain.elements, f.values):
            z = a.apply(u)
            acc[z] = fu if z not in acc else ext_min(acc[z], fu)
        domain = finite_set(grp, acc.keys())
        return table_fn(domain, [acc[z] for z in domain.elements])
    raise FnError(f"unknown transport direction {direction!r}")


# -- quasiconvex envelope --------------------------------------------------


def qconv_envelope(f: TableFn, ts) -> TableFn:
    """Largest quasiconvex (w.r.t. every endo in ts) minorant of f.

    Monotone lowering to a fixed point; values stay in the original value
    lattice, so the iteration terminates.
    """
    grp = f.group
    elems = f.domain.elements
    index = {e: i for i, e in enumerate(elems)}
    combos = []  # (iz, ix, iy)
    for t in ts:
        rep = is_T_convex(f.domain, t)
        if not rep.verdict:
            raise FnError(f"domain not T-convex for {t}: {rep.witness}")
        it = complement(t)
        for x in elems:
            tx = t.apply(x)
            for y in elems:
                z = grp.add(tx, it.apply(y))
                combos.append((index[z], index[x], index[y]))
    vals = list(f.values)
    changed = True
    while changed:
        changed = False
        for iz, ix, iy in combos:
            cap = ext_max(vals[ix], vals[iy])
            if not ext_le(vals[iz], cap):
                vals[iz] = cap
                changed = True
    return table_fn(f.domain, vals)


# -- parameter intervals ---------------------------------------------------


def convexity_interval(
    f, t_endo: Endo, mode: str = "convex", probes: int = 1000, seed: int = 0
) -> Interval:
    """The closed interval of t making f (T,t)-convex (or -affine),
    as the intersection of per-pair half-line constraints in t."""
    if mode not in ("convex", "affine"):
        raise FnError(f"unknown interval mode {mode!r}")
    if isinstance(f, TableFn):
        has_inf = any(v is NEG_INF for v in f.values)
        if has_inf:
            if all(v is NEG_INF for v in f.values):
                return Interval.full()
            raise FnError("mixed -inf/finite values make the interval ill defined")
        pairs = itertools.product(f.domain.elements, repeat=2)
    else:
        rng = random.Random(seed)
        pairs = (
            (f.domain.sample(rng), f.domain.sample(rng)) for _ in range(probes)
        )
    grp = f.group
    conv = is_T_convex(f.domain, t_endo, probes=probes, seed=seed)
    if not conv.verdict:
        return Interval.none()
    it = complement(t_endo)
    interval = Interval.full()
    for x, y in pairs:
        fx, fy = f(x), f(y)
        fz = f(grp.add(t_endo.apply(x), it.apply(y)))
        # fz <= t*fx + (1-t)*fy  <=>  t*(fx - fy) >= fz - fy
        if fx == fy:
            if mode == "convex":
                if fz > fy:
                    return Interval.none()
            else:
                if fz != fy:
                    return Interval.none()
        else:
            bound = (fz - fy) / (fx - fy)
            if mode == "affine":
                interval = interval.intersect_point(bound)
            elif fx > fy:
                interval = interval.intersect_lower(bound)
            else:
                interval = interval.intersect_upper(bound)
        if interval.empty:
            return interval
    return interval


# -- epigraph / graph lifts ------------------------------------------------


def lift_check(
    f: TableFn,
    pair: ConvexPair,
    mode: str = "epigraph",
    value_step: Fraction = Fraction(1),
    grid_layers: int = 4,
) -> Report:
    """Check (T,t)-convexity of the lifted set over a bounded value grid
    and cross-validate against the direct inequality check."""
    if not f.is_finite_valued():
        raise FnError("lift check needs finite values")
    value_step = Fraction(value_step)
    if value_step <= 0:
        raise FnError("value grid step must be positive")
    grp = f.group
    t_endo, t = pair.endo, pair.t
    it = complement(t_endo)
    if mode == "epigraph":
        points = [
            (x, f(x) + i * value_step)
            for x in f.domain.elements
            for i in range(grid_layers + 1)
        ]
        direct_kind = TTCONVEX
    elif mode == "graph":
        points = [(x, f(x)) for x in f.domain.elements]
        direct_kind = TT_AFFINE
    else:
        raise FnError(f"unknown lift mode {mode!r}")
    witness = None
    for (x, u) in points:
        for (y, v) in points:
            zx = grp.add(t_endo.apply(x), it.apply(y))
            zu = t * u + (1 - t) * v
            if mode == "epigraph":
                ok = ext_le(f(zx), zu)
            else:
                ok = f(zx) == zu
            if not ok:
                witness = {
                    "lifted_x": [list(map(str, x.coords)), format_ext(u)],
                    "lifted_y": [list(map(str, y.coords)), format_ext(v)],
                    "combo_value": format_ext(zu),
                }
                break
        if witness:
            break
    direct = check_inequality(direct_kind, f, pair)
    agree = direct.verdict == (witness is None)
    return Report(
        f"lift:{mode}",
        witness is None,
        EXHAUSTIVE,
        witness=witness,
        details={"direct_verdict": direct.verdict, "equivalence_agrees": agree},
    )


# -- pointwise combinators -------------------------------------------------


def pointwise(op: str, fns, scalar=None) -> TableFn:
    if not fns:
        raise FnError("need at least one function")
    domain = fns[0].domain
    for fn in fns[1:]:
        if fn.domain.elements != domain.elements:
            raise FnError("pointwise operations need a common domain")
    cols = list(zip(*(fn.values for fn in fns)))
    if op == "sup":
        vals = [max(col, key=_ext_sort_key) for col in cols]
    elif op == "inf":
        vals = [min(col, key=_ext_sort_key) for col in cols]
    elif op == "limit":
        vals = list(fns[-1].values)
    elif op == "add":
        vals = [_ext_sum(col) for col in cols]
    elif op == "scale":
        if scalar is None or Fraction(scalar) < 0:
            raise FnError("scale needs a nonnegative scalar")
        vals = [ext_scale(Fraction(scalar), v) for v in fns[0].values]
    elif op == "shift":
        if scalar is None:
            raise FnError("shift needs a scalar")
        vals = [ext_add(v, Fraction(scalar)) for v in fns[0].values]
    else:
        raise FnError(f"unknown pointwise op {op!r}")
    return table_fn(domain, vals)


def _ext_sort_key(v):
    return (0, 0) if v is NEG_INF else (1, v)


def _ext_sum(col):
    acc = Fraction(0)
    for v in col:
        acc = ext_add(acc, v)
    return acc


# -- serialization ---------------------------------------------------------


def serialize_fn(f) -> dict:
    from .rationals import format_rational
    from .sets import serialize_ground_set

    if isinstance(f, TableFn):
        return {
            "kind": "table",
            "domain": serialize_ground_set(f.domain),
            "values": [format_ext(v) for v in f.values],
        }
    return {
        "kind": "quadratic",
        "domain": serialize_ground_set(f.domain),
        "Q": [[format_rational(e) for e in row] for row in f.q],
        "b": [format_rational(e) for e in f.b],
        "c": format_rational(f.c),
    }


def deserialize_fn(g: GroupSpec, data: dict):
    from .rationals import parse_rational
    from .sets import deserialize_ground_set

    domain = deserialize_ground_set(g, data["domain"])
    if data["kind"] == "table":
        return table_fn(domain, [parse_ext(v) for v in data["values"]])
    if data["kind"] == "quadratic":
        return QuadraticFn(
            domain,
            tuple(tuple(parse_rational(e) for e in row) for row in data["Q"]),
            tuple(parse_rational(e) for e in data["b"]),
            parse_rational(data["c"]),
        )
    raise FnError(f"unknown function kind {data['kind']!r}")
