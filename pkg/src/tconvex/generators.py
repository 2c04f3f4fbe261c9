"""Seeded random instance generators for groups, endomorphisms, ground
sets, function tables and convexity pairs.

All randomness flows through an explicit ``random.Random`` so identical
seeds reproduce identical instances byte for byte.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from .endos import Endo, serialize_endo, validate_endo
from .functions import ConvexPair, TableFn, serialize_fn, table_fn
from .groups import (
    CYCLIC,
    DISCRETE,
    LEE,
    GroupSpec,
    cyclic_group,
    lattice_group,
    nadic_group,
    serialize_group,
)
from .rationals import NEG_INF
from .sets import GroundSet, box_set, finite_set, serialize_ground_set, whole_group_set

DEFAULT_CAPS = {
    "max_order": 30,
    "max_rank": 2,
    "entry_bound": 2,
    "probes": 1000,
    "cases": 100,
    "max_denominator": 12,
    "chain_length": 4,
}


def with_defaults(caps: dict | None) -> dict:
    out = dict(DEFAULT_CAPS)
    if caps:
        out.update(caps)
    return out


def gen_cyclic_group(rng: random.Random, max_order: int, max_rank: int = 2) -> GroupSpec:
    """A random cyclic product of order <= max_order."""
    rank = rng.randint(1, max_rank)
    while True:
        moduli = [rng.randint(2, max(2, max_order)) for _ in range(rank)]
        if math.prod(moduli) <= max_order:
            break
        rank = 1
    kind = rng.choice([LEE, LEE, DISCRETE])
    weights = [rng.choice([Fraction(1), Fraction(1), Fraction(1, 2), Fraction(2)])
               for _ in range(len(moduli))]
    return cyclic_group(*moduli, kind=kind, weights=weights)


def gen_group(rng: random.Random, caps: dict) -> GroupSpec:
    family = rng.choice(["cyclic", "cyclic", "lattice", "nadic"])
    if family == "cyclic":
        return gen_cyclic_group(rng, caps["max_order"], caps["max_rank"])
    rank = rng.randint(1, caps["max_rank"])
    if family == "lattice":
        return lattice_group(rank)
    base = rng.choice([2, 3, 6, 10])
    return nadic_group(base, rank)


def gen_endo(rng: random.Random, g: GroupSpec, entry_bound: int = 2) -> Endo:
    """A random valid endomorphism (always passes validate_endo)."""
    r = g.rank
    if g.family == CYCLIC:
        matrix = []
        for i, m_i in enumerate(g.moduli):
            row = []
            for j, m_j in enumerate(g.moduli):
                step = m_i // math.gcd(m_i, m_j)
                row.append(rng.randrange(0, m_i, step))
            matrix.append(row)
        return validate_endo(g, matrix)
    entries = []
    for _ in range(r):
        row = []
        for _ in range(r):
            val = Fraction(rng.randint(-entry_bound, entry_bound))
            if g.family == "nadic" and rng.random() < 0.3:
                val = val / g.base
            row.append(val)
        entries.append(row)
    return validate_endo(g, entries)


def gen_set(rng: random.Random, g: GroupSpec, caps: dict) -> GroundSet:
    if g.family == CYCLIC:
        elems = list(g.elements())
        size = rng.randint(1, len(elems))
        return finite_set(g, rng.sample(elems, size))
    if g.family == "nadic":
        lo = [Fraction(0) for _ in range(g.rank)]
        hi = [Fraction(rng.randint(1, 2)) for _ in range(g.rank)]
        return box_set(g, lo, hi)
    pts = {g.reduce([rng.randint(-3, 3) for _ in range(g.rank)]) for _ in range(6)}
    return finite_set(g, pts)


VALUE_PALETTE = (NEG_INF, Fraction(0), Fraction(1), Fraction(2))


def gen_fn(
    rng: random.Random,
    domain: GroundSet,
    palette=VALUE_PALETTE,
    allow_neg_inf: bool = True,
) -> TableFn:
    pool = palette if allow_neg_inf else tuple(v for v in palette if v is not NEG_INF)
    return table_fn(domain, [rng.choice(pool) for _ in domain.elements])


def gen_chain(rng: random.Random, domain: GroundSet, length: int = 4):
    """A pointwise-nonincreasing chain of finite-valued tables."""
    base = gen_fn(rng, domain, allow_neg_inf=False)
    chain = [base]
    for _ in range(length - 1):
        prev = chain[-1]
        vals = [v - rng.choice([Fraction(0), Fraction(1)]) for v in prev.values]
        chain.append(table_fn(domain, vals))
    return chain


def gen_t(rng: random.Random, max_denominator: int = 12, interior: bool = False) -> Fraction:
    q = rng.randint(2 if interior else 1, max_denominator)
    p = rng.randint(1, q - 1) if interior else rng.randint(0, q)
    return Fraction(p, q)


def gen_pair(rng: random.Random, g: GroupSpec, caps: dict) -> ConvexPair:
    return ConvexPair(gen_endo(rng, g, caps["entry_bound"]), gen_t(rng, caps["max_denominator"]))


def generate_instance(kind: str, seed: int, caps: dict | None = None) -> dict:
    """Deterministic serialized instance for the CLI."""
    caps = with_defaults(caps)
    rng = random.Random(seed)
    g = gen_group(rng, caps)
    if kind == "group":
        return serialize_group(g)
    if kind == "endo":
        return {"group": serialize_group(g), "endo": serialize_endo(gen_endo(rng, g, caps["entry_bound"]))}
    if kind == "set":
        return {"group": serialize_group(g), "set": serialize_ground_set(gen_set(rng, g, caps))}
    if kind == "fn":
        if g.family != CYCLIC:
            g = gen_cyclic_group(rng, caps["max_order"], caps["max_rank"])
        domain = whole_group_set(g)
        if caps.get("chain"):
            chain = gen_chain(rng, domain, caps["chain_length"])
            return {"group": serialize_group(g), "chain": [serialize_fn(f) for f in chain]}
        return {"group": serialize_group(g), "fn": serialize_fn(gen_fn(rng, domain))}
    if kind == "pair":
        from .rationals import format_rational

        p = gen_pair(rng, g, caps)
        return {
            "group": serialize_group(g),
            "endo": serialize_endo(p.endo),
            "t": format_rational(p.t),
        }
    raise ValueError(f"unknown instance kind {kind!r}")
