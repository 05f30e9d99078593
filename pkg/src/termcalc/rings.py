"""Commutative rings with identity, as pluggable operation tables.

Three concrete carriers are provided: arbitrary-precision integers,
residues mod m (reduced representatives in [0, m)), and exact rationals.
Elements must support ``==``; all arithmetic is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable


@dataclass(frozen=True)
class Ring:
    name: str
    zero: Any
    one: Any
    add: Callable[[Any, Any], Any]
    mul: Callable[[Any, Any], Any]
    neg: Callable[[Any], Any]
    parse: Callable[[str], Any]
    fmt: Callable[[Any], str]
    sample: Callable[[random.Random], Any]

    def sub(self, a, b):
        return self.add(a, self.neg(b))


def integers() -> Ring:
    return Ring(
        name="Z",
        zero=0,
        one=1,
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        parse=int,
        fmt=str,
        sample=lambda rng: rng.randint(-9, 9),
    )


def residues(m: int) -> Ring:
    if m < 2:
        raise ValueError("modulus must be at least 2")
    return Ring(
        name=f"Zm:{m}",
        zero=0,
        one=1 % m,
        add=lambda a, b: (a + b) % m,
        mul=lambda a, b: (a * b) % m,
        neg=lambda a: (-a) % m,
        parse=lambda s: int(s) % m,
        fmt=str,
        sample=lambda rng: rng.randrange(m),
    )


def rationals() -> Ring:
    return Ring(
        name="Q",
        zero=Fraction(0),
        one=Fraction(1),
        add=lambda a, b: a + b,
        mul=lambda a, b: a * b,
        neg=lambda a: -a,
        parse=Fraction,
        fmt=lambda q: str(q),
        sample=lambda rng: Fraction(rng.randint(-9, 9), rng.randint(1, 9)),
    )


def ring_from_name(name: str) -> Ring:
    """Resolve a CLI-style ring name: Z, Zm:<m> or Q."""
    if name == "Z":
        return integers()
    if name == "Q":
        return rationals()
    if name.startswith("Zm:"):
        return residues(int(name[3:]))
    raise ValueError(f"unknown ring {name!r} (expected Z, Zm:<m> or Q)")


@dataclass
class LawFailure:
    law: str
    values: tuple


@dataclass
class LawReport:
    checked: int
    failures: list[LawFailure]

    @property
    def ok(self) -> bool:
        return not self.failures


def ring_axiom_suite(ring: Ring, samples: int, rng: random.Random,
                     sample: Callable[[random.Random], Any] | None = None) -> LawReport:
    """Check the eight ring axiom families on random element triples.

    Counterexamples are collected in the report instead of raised, so a
    deliberately broken operation table can be inspected.  `sample`
    overrides the ring's own element sampler (used to run the same suite
    over polynomial carriers).
    """
    draw = sample or ring.sample
    failures: list[LawFailure] = []

    def check(law, ok, values):
        if not ok:
            failures.append(LawFailure(law, values))

    check("zero_ne_one", ring.zero != ring.one, (ring.zero, ring.one))
    for _ in range(samples):
        a, b, c = draw(rng), draw(rng), draw(rng)
        check("add_commutative", ring.add(a, b) == ring.add(b, a), (a, b))
        check("add_associative",
              ring.add(a, ring.add(b, c)) == ring.add(ring.add(a, b), c), (a, b, c))
        check("mul_commutative", ring.mul(a, b) == ring.mul(b, a), (a, b))
        check("mul_associative",
              ring.mul(a, ring.mul(b, c)) == ring.mul(ring.mul(a, b), c), (a, b, c))
        check("add_neutral", ring.add(ring.zero, a) == a, (a,))
        check("mul_neutral", ring.mul(ring.one, a) == a, (a,))
        check("add_inverse", ring.add(a, ring.neg(a)) == ring.zero, (a,))
        check("distributive",
              ring.mul(a, ring.add(b, c)) == ring.add(ring.mul(a, b), ring.mul(a, c)),
              (a, b, c))
    return LawReport(checked=samples, failures=failures)


def mul_by_zero_law(ring: Ring, samples: int, rng: random.Random,
                    sample: Callable[[random.Random], Any] | None = None) -> LawReport:
    """r multiplied by the additive neutral element is that neutral element."""
    draw = sample or ring.sample
    failures = []
    for _ in range(samples):
        a = draw(rng)
        if ring.mul(a, ring.zero) != ring.zero:
            failures.append(LawFailure("mul_by_zero", (a,)))
    return LawReport(checked=samples, failures=failures)
