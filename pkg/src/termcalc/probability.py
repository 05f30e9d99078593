"""Finite weighted probability spaces with exact rational arithmetic.

A space is a finite outcome set with Fraction weights summing to one;
events are bitmasks over the outcome enumeration and form the powerset
Boolean algebra.  Everything here is exact: independence checks compare
rationals for equality, never approximately.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from . import boolean_terms as B
from . import terms as T


class NotDisjoint(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"events {i} and {j} overlap")
        self.pair = (i, j)


class PreconditionViolated(ValueError):
    pass


Event = int


@dataclass(frozen=True)
class Space:
    """Finite outcome set with exact weights; labels are optional (synthetic
    ``o<i>`` names are used when omitted, to keep huge uniform spaces cheap)."""
    size: int
    weights: tuple[Fraction, ...] | None = None
    labels: tuple[str, ...] | None = None
    uniform: Fraction | None = field(init=False, default=None)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError("a space needs at least one outcome")
        if self.weights is None:
            object.__setattr__(self, "uniform", Fraction(1, self.size))
            return
        if len(self.weights) != self.size:
            raise ValueError("one weight per outcome")
        if any(w < 0 or w > 1 for w in self.weights):
            raise ValueError("weights must lie in [0,1]")
        if sum(self.weights) != 1:
            raise ValueError("weights must sum to exactly 1")
        first = self.weights[0]
        if all(w == first for w in self.weights):
            object.__setattr__(self, "uniform", first)

    @property
    def full(self) -> Event:
        return (1 << self.size) - 1

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else f"o{i}"

    def algebra(self) -> B.BoolAlgebra:
        return B.mask_algebra(self.size)

    def event(self, indices: Iterable[int]) -> Event:
        mask = 0
        for i in indices:
            if not 0 <= i < self.size:
                raise ValueError(f"outcome index {i} out of range")
            mask |= 1 << i
        return mask

    def pr(self, a: Event) -> Fraction:
        if a < 0 or a > self.full:
            raise ValueError("event is not a subset of the outcome set")
        if self.uniform is not None:
            return a.bit_count() * self.uniform
        total = Fraction(0)
        m = a
        while m:
            low = m & -m
            total += self.weights[low.bit_length() - 1]
            m ^= low
        return total


def space_from_json(data: dict) -> tuple[Space, dict[str, Event]]:
    """Load {"outcomes": [...], "weights": ["1/8", ...], "events": {...}}."""
    outcomes = tuple(data["outcomes"])
    weights = tuple(Fraction(w) for w in data["weights"])
    space = Space(len(outcomes), weights, outcomes)
    events = {name: space.event(ix) for name, ix in data.get("events", {}).items()}
    return space, events


def meet_all(space: Space, events: Sequence[Event], picks: Iterable[int]) -> Event:
    """Intersection over the picked indices; the empty meet is the full set."""
    out = space.full
    for i in picks:
        out &= events[i]
    return out


@dataclass
class DisjointSumReport:
    ok: bool
    total: Fraction | None = None
    parts: list[Fraction] | None = None


def disjoint_sum_check(space: Space, events: Sequence[Event]) -> DisjointSumReport:
    """Verify pairwise disjointness, then the exact additivity of the join."""
    for i, j in combinations(range(len(events)), 2):
        if events[i] & events[j]:
            raise NotDisjoint(i, j)
    union = 0
    for a in events:
        union |= a
    parts = [space.pr(a) for a in events]
    return DisjointSumReport(space.pr(union) == sum(parts, Fraction(0)),
                             space.pr(union), parts)


@dataclass
class IndependenceResult:
    independent: bool
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def tuples_independent(space: Space, left: Sequence[Event],
                       right: Sequence[Event]) -> IndependenceResult:
    """Check the factorization Pr(meet(X) ∧ meet(Y)) = Pr(meet(X))·Pr(meet(Y))
    for every pair of index subsets X, Y (the empty meet is the full space)."""
    left_meets = _subset_meets(space, left)
    right_meets = _subset_meets(space, right)
    for xs, a in left_meets.items():
        pa = space.pr(a)
        for ys, b in right_meets.items():
            if space.pr(a & b) != pa * space.pr(b):
                return IndependenceResult(False, (xs, ys))
    return IndependenceResult(True)


def _subset_meets(space: Space, events: Sequence[Event]) -> dict[tuple[int, ...], Event]:
    out: dict[tuple[int, ...], Event] = {(): space.full}
    for mask in range(1, 1 << len(events)):
        low = mask & -mask
        i = low.bit_length() - 1
        prev = out[_indices(mask ^ low)]
        out[_indices(mask)] = prev & events[i]
    return out


def _indices(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


@dataclass
class ComplementReport:
    ok: bool
    patterns_checked: int
    exhaustive: bool
    failure: tuple | None = None


def complement_closure_check(space: Space, left: Sequence[Event],
                             right: Sequence[Event], samples: int = 128,
                             rng=None) -> ComplementReport:
    """Replacing any selection of the events by their complements must
    preserve independence.  All 2^(k+l) selections are tried when there are
    at most 1024; otherwise `samples` random selections."""
    base = tuples_independent(space, left, right)
    if not base.independent:
        raise PreconditionViolated(f"input tuples are not independent: {base.witness}")
    k, l = len(left), len(right)
    total = 1 << (k + l)
    exhaustive = total <= 1024
    if exhaustive:
        patterns = range(total)
    else:
        if rng is None:
            raise ValueError("rng required for sampled mode")
        patterns = (rng.randrange(total) for _ in range(samples))
    checked = 0
    for pat in patterns:
        checked += 1
        flipped_left = [space.full ^ a if (pat >> i) & 1 else a
                        for i, a in enumerate(left)]
        flipped_right = [space.full ^ a if (pat >> (k + i)) & 1 else a
                         for i, a in enumerate(right)]
        res = tuples_independent(space, flipped_left, flipped_right)
        if not res.independent:
            return ComplementReport(False, checked, exhaustive, (pat, res.witness))
    return ComplementReport(True, checked, exhaustive)


@dataclass
class BitReport:
    """Outcome of the independence theorem check on one instance, plus the
    intermediate identities of its proof pipeline."""
    product_ok: bool
    pr_joint: Fraction
    pr_left: Fraction
    pr_right: Fraction
    dnf_left_ok: bool
    dnf_right_ok: bool
    conjunction_ok: bool
    disjoint_ok: bool
    sum_ok: bool
    factorization_ok: bool
    marginals_ok: bool

    @property
    def ok(self) -> bool:
        return all((self.product_ok, self.dnf_left_ok, self.dnf_right_ok,
                    self.conjunction_ok, self.disjoint_ok, self.sum_ok,
                    self.factorization_ok, self.marginals_ok))


def bit_check(space: Space, t: T.Term, u: T.Term,
              left: Sequence[Event], right: Sequence[Event]) -> BitReport:
    """Verify that events built by two Boolean terms from independent event
    tuples are independent, replaying the constructive argument: normalize
    both terms to DNF, shift the right term's variables, conjoin the DNFs,
    and check the disjoint-sum and per-monomial factorization identities."""
    if len(left) != len(right):
        raise PreconditionViolated("left and right tuples must have equal length")
    n = len(left)
    pre = tuples_independent(space, left, right)
    if not pre.independent:
        raise PreconditionViolated(f"input tuples are not independent: {pre.witness}")
    alg = space.algebra()
    a = B.evaluate(t, alg, left)
    b = B.evaluate(u, alg, right)
    pr_a, pr_b = space.pr(a), space.pr(b)
    product_ok = space.pr(a & b) == pr_a * pr_b

    dnf_t, _ = B.to_dnf(t, n)
    dnf_u, _ = B.to_dnf(u, n)
    dnf_left_ok = B.evaluate(dnf_t.term(), alg, left) == a
    dnf_right_ok = B.evaluate(dnf_u.term(), alg, right) == b

    both = list(left) + list(right)
    shifted = dnf_u.shift(n)
    wedge = B.conjoin(dnf_t.with_width(2 * n), shifted)
    conjunction_ok = B.evaluate(wedge.term(), alg, both) == (a & b)

    pieces = []
    factorization_ok = True
    for mu in dnf_t.monomials:
        e_mu = B.evaluate(mu.term(), alg, left)
        for nu in dnf_u.monomials:
            e_nu = B.evaluate(nu.term(), alg, right)
            piece = e_mu & e_nu
            pieces.append(piece)
            if space.pr(piece) != space.pr(e_mu) * space.pr(e_nu):
                factorization_ok = False
    disjoint_ok = all((pieces[i] & pieces[j]) == 0
                      for i, j in combinations(range(len(pieces)), 2))
    sum_ok = sum((space.pr(p) for p in pieces), Fraction(0)) == space.pr(a & b)
    marg_left = sum((space.pr(B.evaluate(mu.term(), alg, left))
                     for mu in dnf_t.monomials), Fraction(0))
    marg_right = sum((space.pr(B.evaluate(nu.term(), alg, right))
                      for nu in dnf_u.monomials), Fraction(0))
    marginals_ok = marg_left == pr_a and marg_right == pr_b

    return BitReport(product_ok, space.pr(a & b), pr_a, pr_b,
                     dnf_left_ok, dnf_right_ok, conjunction_ok,
                     disjoint_ok, sum_ok, factorization_ok, marginals_ok)


def generated_subalgebra(space: Space, gens: Sequence[Event],
                         cap: int = 1 << 20) -> list[Event]:
    """All events expressible from the generators with meets, joins and
    complements: unions of the atoms of the partition the generators induce."""
    signature: dict[tuple[int, ...], Event] = {}
    for i in range(space.size):
        sig = tuple((a >> i) & 1 for a in gens)
        signature[sig] = signature.get(sig, 0) | (1 << i)
    atoms = list(signature.values())
    if 1 << len(atoms) > cap:
        raise ValueError(f"subalgebra would have 2^{len(atoms)} events")
    out = []
    for mask in range(1 << len(atoms)):
        e = 0
        for i, atom in enumerate(atoms):
            if (mask >> i) & 1:
                e |= atom
        out.append(e)
    return sorted(set(out))
