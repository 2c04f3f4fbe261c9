"""T-convexity and n-convexity of sets, the convexity semigroup of a set,
Radstrom cancellation with hypothesis audit, and T-internality."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .endos import Endo, binary_map, complement, compose, identity_endo, validate_endo, zero_endo
from .groups import CYCLIC, NADIC, GroupSpec, Element, GroupError, mu_d
from .rationals import format_rational, parse_rational
from .report import EXHAUSTIVE, FAILED, SAMPLED, VERIFIED, Report

FINITE = "finite"
BOX = "box"

DEFAULT_PAIR_BUDGET = 1000
DEFAULT_FIXPOINT_BUDGET = 10**4
DEFAULT_ENDO_CAP = 10**4
SUMSET_CAP = 10**5


class SetError(ValueError):
    pass


@dataclass(frozen=True)
class GroundSet:
    group: GroupSpec = field(repr=False)
    kind: str
    elements: tuple = ()  # finite representation, deduplicated + sorted
    lower: tuple = ()  # box corners (nadic only)
    upper: tuple = ()

    def __post_init__(self):
        if self.kind == FINITE:
            elems = tuple(sorted(set(self.elements), key=lambda e: e.coords))
            object.__setattr__(self, "elements", elems)
        elif self.kind == BOX:
            if self.group.family != NADIC:
                raise SetError("box sets are supported on N-adic modules only")
            lo = tuple(Fraction(c) for c in self.lower)
            hi = tuple(Fraction(c) for c in self.upper)
            if len(lo) != self.group.rank or len(hi) != self.group.rank:
                raise SetError("box corners must match the group rank")
            if any(a > b for a, b in zip(lo, hi)):
                raise SetError("box lower corner must not exceed the upper corner")
            object.__setattr__(self, "lower", lo)
            object.__setattr__(self, "upper", hi)
        else:
            raise SetError(f"unknown ground-set kind {self.kind!r}")

    @property
    def is_finite(self) -> bool:
        return self.kind == FINITE

    def __contains__(self, x: Element) -> bool:
        if x.group != self.group:
            return False
        if self.kind == FINITE:
            return x in set(self.elements)
        return all(a <= c <= b for a, c, b in zip(self.lower, x.coords, self.upper))

    def contains(self, x: Element) -> bool:
        return self.__contains__(x)

    def sample(self, rng: random.Random, exp_cap: int = 6) -> Element:
        """A uniform-ish member: box corners refined to base^-exp_cap grid."""
        g = self.group
        if self.kind == FINITE:
            return rng.choice(self.elements)
        coords = []
        for lo, hi in zip(self.lower, self.upper):
            exp = rng.randint(0, exp_cap)
            denom = g.base**exp
            kmin = (lo * denom).__ceil__()
            kmax = (hi * denom).__floor__()
            coords.append(Fraction(rng.randint(kmin, kmax), denom))
        return g.reduce(coords)


def finite_set(group: GroupSpec, elements) -> GroundSet:
    return GroundSet(group, FINITE, elements=tuple(elements))


def box_set(group: GroupSpec, lower, upper) -> GroundSet:
    return GroundSet(group, BOX, lower=tuple(lower), upper=tuple(upper))


def whole_group_set(group: GroupSpec) -> GroundSet:
    return finite_set(group, group.elements())


@dataclass
class EndoSet:
    members: list
    provenance: dict = field(default_factory=dict)  # key -> derivation string
    truncated: bool = False

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def keys(self):
        return {t.key() for t in self.members}

    def contains(self, t: Endo) -> bool:
        return t.key() in self.keys()


# -- convexity checks ------------------------------------------------------


def is_T_convex(
    d: GroundSet, t: Endo, probes: int = DEFAULT_PAIR_BUDGET, seed: int = 0
) -> Report:
    """T(x) + (I-T)(y) stays in D for all pairs; exhaustive on finite D,
    sampled on boxes."""
    g = d.group
    it = complement(t)
    if d.is_finite:
        for x in d.elements:
            tx = t.apply(x)
            for y in d.elements:
                z = g.add(tx, it.apply(y))
                if z not in d:
                    return Report(
                        "is_T_convex",
                        False,
                        EXHAUSTIVE,
                        witness=_pair_witness(x, y, z),
                    )
        return Report("is_T_convex", True, EXHAUSTIVE)
    rng = random.Random(seed)
    for _ in range(probes):
        x = d.sample(rng)
        y = d.sample(rng)
        z = g.add(t.apply(x), it.apply(y))
        if z not in d:
            return Report("is_T_convex", False, SAMPLED, witness=_pair_witness(x, y, z))
    return Report("is_T_convex", True, SAMPLED)


def _pair_witness(x, y, z):
    return {"x": list(map(str, x.coords)), "y": list(map(str, y.coords)),
            "z": list(map(str, z.coords))}


def is_n_convex(a: GroundSet, n: int, sumset_cap: int = SUMSET_CAP) -> Report:
    """{n*x : x in A} equals the n-fold sumset of A."""
    if n < 1:
        raise SetError("n must be positive")
    g = a.group
    if not a.is_finite:
        # boxes are n-convex for every n: both sides equal the scaled box
        return Report("is_n_convex", True, EXHAUSTIVE,
                      details={"route": "box closed form"})
    dil = {g.scalar_mul(n, x) for x in a.elements}
    sumset = {g.zero()}
    for _ in range(n):
        new = set()
        for s in sumset:
            for x in a.elements:
                new.add(g.add(s, x))
                if len(new) > sumset_cap:
                    raise SetError("sumset size cap exceeded")
        sumset = new
    if dil == sumset:
        return Report("is_n_convex", True, EXHAUSTIVE)
    diff = sumset - dil
    if diff:
        w = next(iter(diff))
        side = "sumset minus dilation"
    else:
        w = next(iter(dil - sumset))
        side = "dilation minus sumset"
    return Report("is_n_convex", False, EXHAUSTIVE,
                  witness={"element": list(map(str, w.coords)), "side": side})


def valid_endo_matrices(g: GroupSpec, cap: int = DEFAULT_ENDO_CAP):
    """All valid endo matrices of a cyclic product (entries reduced)."""
    if g.family != CYCLIC:
        raise SetError("endo enumeration needs a finite cyclic product")
    choices = []
    for i, m_i in enumerate(g.moduli):
        for j, m_j in enumerate(g.moduli):
            step = m_i // math.gcd(m_i, m_j)
            choices.append(range(0, m_i, step))
    count = 1
    for c in choices:
        count *= len(c)
        if count > cap:
            raise SetError(f"endo count exceeds cap {cap}")
    r = g.rank
    for flat in itertools.product(*choices):
        yield tuple(tuple(flat[i * r + j] for j in range(r)) for i in range(r))


def enumerate_TD(d: GroundSet, cap: int = DEFAULT_ENDO_CAP) -> EndoSet:
    """Exactly the valid endomorphisms T making D T-convex (exhaustive)."""
    g = d.group
    members = []
    prov = {}
    for matrix in valid_endo_matrices(g, cap):
        t = validate_endo(g, matrix)
        if is_T_convex(d, t).verdict:
            members.append(t)
            prov[t.key()] = "seed"
    return EndoSet(members, prov)


def closure_generate(g: GroupSpec, seed_endos, budget: int = 256) -> EndoSet:
    """Least set containing the seeds and {0, I} closed under composition,
    complement and (T,S) -> T.S + (I-T).(I-S), truncated at budget."""
    members = {}
    prov = {}

    def register(t: Endo, how: str) -> bool:
        k = t.key()
        if k in members:
            return False
        members[k] = t
        prov[k] = how
        return True

    register(zero_endo(g), "zero")
    register(identity_endo(g), "identity")
    for t in seed_endos:
        register(t, "seed")
    truncated = False
    frontier = True
    while frontier and not truncated:
        frontier = False
        snapshot = list(members.values())
        for t in snapshot:
            if register(complement(t), f"complement({prov[t.key()]})"):
                frontier = True
            if len(members) >= budget:
                truncated = True
                break
        if truncated:
            break
        for t in snapshot:
            for s in snapshot:
                if register(compose(t, s), f"compose({prov[t.key()]},{prov[s.key()]})"):
                    frontier = True
                if register(
                    binary_map(t, s), f"binmap({prov[t.key()]},{prov[s.key()]})"
                ):
                    frontier = True
                if len(members) >= budget:
                    truncated = True
                    break
            if truncated:
                break
    return EndoSet(list(members.values()), prov, truncated=truncated)


# -- Radstrom cancellation -------------------------------------------------


def radstrom_check(a: GroundSet, b: GroundSet, c: GroundSet, n0: int) -> Report:
    """Audit the cancellation hypotheses, test A+C <= B+C, and when both
    pass assert the conclusion A <= B (a violation is a theorem alarm)."""
    g = a.group
    if not a.is_finite or not c.is_finite or not c.elements:
        raise SetError("A and C must be explicit finite, C nonempty")
    audit = []
    try:
        mu = mu_d(g, n0, mode="exact" if g.metric.kind == "abs" else "enumerated")
        audit.append((f"mu_d({n0}) > 1", VERIFIED if mu > 1 else FAILED))
    except GroupError:
        audit.append((f"mu_d({n0}) > 1", FAILED))
        mu = None
    audit.append(("B closed", VERIFIED))  # both representations are closed
    nrep = is_n_convex(b, n0)
    audit.append((f"B {n0}-convex", VERIFIED if nrep.verdict else FAILED))
    audit.append(("C bounded nonempty", VERIFIED))
    rep = Report("radstrom_check", True, EXHAUSTIVE, audit=audit)
    if any(status == FAILED for _, status in audit):
        rep.verdict = False
        rep.details["conclusion_asserted"] = False
        return rep
    # A + C subset of B + C ?
    def in_b_plus_c(x):
        return any(g.sub(x, ce) in b for ce in c.elements)

    for ae in a.elements:
        for ce in c.elements:
            s = g.add(ae, ce)
            if not in_b_plus_c(s):
                rep.details["conclusion_asserted"] = False
                rep.details["premise"] = "A+C not contained in B+C"
                rep.witness = {"sum": list(map(str, s.coords))}
                return rep
    rep.details["conclusion_asserted"] = True
    for ae in a.elements:
        if ae not in b:
            rep.verdict = False
            rep.witness = {
                "alarm": "cancellation conclusion violated",
                "element": list(map(str, ae.coords)),
            }
            return rep
    return rep


# -- T-internality ---------------------------------------------------------


def internal_points(
    d: GroundSet, t: Endo, p: Element, budget: int = DEFAULT_FIXPOINT_BUDGET
):
    """Run the absorbing-set recursion from {p}; returns a verdict string
    plus the stabilized set when proper."""
    if p not in d:
        raise SetError("p must lie in D")
    if not d.is_finite:
        return "inconclusive", None
    g = d.group
    it = complement(t)
    e = {p}
    inserts = 0
    changed = True
    pairs = [
        (x, y, g.add(t.apply(x), it.apply(y)))
        for x in d.elements
        for y in d.elements
    ]
    while changed:
        changed = False
        for x, y, z in pairs:
            if z in e:
                for w in (x, y):
                    if w not in e:
                        e.add(w)
                        inserts += 1
                        changed = True
                        if inserts > budget:
                            return "inconclusive", None
    if len(e) == len(d.elements):
        return "internal", None
    return "not-internal", finite_set(g, e)


# -- serialization ---------------------------------------------------------


def serialize_ground_set(s: GroundSet) -> dict:
    if s.is_finite:
        return {
            "kind": "finite",
            "elements": [[format_rational(Fraction(c)) for c in e.coords]
                         for e in s.elements],
        }
    return {
        "kind": "box",
        "lower": [format_rational(c) for c in s.lower],
        "upper": [format_rational(c) for c in s.upper],
    }


def deserialize_ground_set(g: GroupSpec, data: dict) -> GroundSet:
    if data["kind"] == "finite":
        elems = [g.reduce([parse_rational(c) for c in row]) for row in data["elements"]]
        return finite_set(g, elems)
    if data["kind"] == "box":
        return box_set(
            g,
            [parse_rational(c) for c in data["lower"]],
            [parse_rational(c) for c in data["upper"]],
        )
    raise SetError(f"unknown ground-set kind {data['kind']!r}")
