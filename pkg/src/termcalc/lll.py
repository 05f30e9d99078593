"""Uniform two-coloring spaces of hypergraphs and the independence facts
behind the local-lemma argument.

For a hypergraph on n vertices the space has all 2^n colorings, each of
weight 2^-n.  The monochromatic-edge events are built from the per-vertex
color events by a Boolean term, which lets the independence of an edge
event from the events of disjoint edges be verified through the general
term machinery rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from . import boolean_terms as B
from . import terms as T
from .probability import (Event, PreconditionViolated, Space, bit_check,
                          tuples_independent)


class UnknownVertex(ValueError):
    pass


class UnknownEdge(ValueError):
    pass


class VerticesOverlap(ValueError):
    pass


# rational bracket around Euler's number, wide enough for any desk-scale
# comparison e(d+1) vs 2^(k-1)
_E_LO = Fraction(271828182845904523, 10 ** 17)
_E_HI = Fraction(271828182845904524, 10 ** 17)

RED, BLUE = "r", "b"


@dataclass(frozen=True)
class Hypergraph:
    vertices: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self):
        if self.vertices < 1:
            raise ValueError("need at least one vertex")
        for f in self.edges:
            if not f:
                raise ValueError("edges must be nonempty")
            if not all(0 <= v < self.vertices for v in f):
                raise UnknownVertex(f"edge {sorted(f)} leaves the vertex set")

    @classmethod
    def from_json(cls, data: dict) -> "Hypergraph":
        return cls(data["vertices"], tuple(frozenset(e) for e in data["edges"]))

    def min_edge_size(self) -> int:
        return min(len(f) for f in self.edges)

    def max_neighbors(self) -> int:
        return max(sum(1 for g in self.edges if g is not f and f & g)
                   for f in self.edges)


def coloring_space(vertices: int) -> Space:
    """All maps from the vertex set to {r, b}, uniformly weighted; the
    coloring with index m colors vertex v blue iff bit v of m is set."""
    return Space(1 << vertices)


def coloring_of(index: int, vertices: int) -> str:
    return "".join(BLUE if (index >> v) & 1 else RED for v in range(vertices))


def event_vertex_color(space: Space, vertices: int, v: int, c: str) -> Event:
    """The colorings assigning color c to vertex v."""
    if not 0 <= v < vertices:
        raise UnknownVertex(f"vertex {v} out of range")
    if c not in (RED, BLUE):
        raise ValueError(f"color must be {RED!r} or {BLUE!r}")
    block = 1 << v
    period = block << 1
    # 2^v zeros then 2^v ones, repeated across all 2^n colorings
    unit = ((1 << block) - 1) << block
    reps = ((1 << space.size) - 1) // ((1 << period) - 1)
    blue = unit * reps
    return blue if c == BLUE else space.full ^ blue


def monochromatic_term(size: int) -> T.Term:
    """Boolean term over x1..x_size expressing 'all generators hold or none
    does'; applied to per-vertex red events it is the monochromatic event."""
    all_red = _meet([T.Var(i) for i in range(1, size + 1)])
    all_blue = _meet([T.Unary(B.NOT, T.Var(i)) for i in range(1, size + 1)])
    return T.Binary(B.OR, all_red, all_blue)


def _meet(parts):
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = T.Binary(B.AND, p, out)
    return out


def event_monochromatic(space: Space, h: Hypergraph, f: frozenset[int]) -> Event:
    if f not in h.edges:
        raise UnknownEdge(f"edge {sorted(f)} not in the hypergraph")
    all_red = space.full
    all_blue = space.full
    for v in sorted(f):
        all_red &= event_vertex_color(space, h.vertices, v, RED)
        all_blue &= event_vertex_color(space, h.vertices, v, BLUE)
    return all_red | all_blue


@dataclass
class CountingIdentity:
    left_constraints: tuple
    right_constraints: tuple
    joint: int
    left: int
    right: int

    @property
    def ok(self) -> bool:
        return self.joint == self.left * self.right


@dataclass
class BlockReport:
    independent: bool
    witness: tuple | None
    identities: list[CountingIdentity]

    @property
    def ok(self) -> bool:
        return self.independent and all(i.ok for i in self.identities)


def verify_block_independence(space: Space, vertices: int,
                              xs: Sequence[int], ys: Sequence[int]) -> BlockReport:
    """The color events of two disjoint vertex sets are independent tuples;
    the report carries the constrained-coloring counting identity behind
    each subset pair."""
    xs, ys = list(xs), list(ys)
    if set(xs) & set(ys):
        raise VerticesOverlap(f"vertex sets share {sorted(set(xs) & set(ys))}")
    left_pairs = [(v, c) for v in xs for c in (RED, BLUE)]
    right_pairs = [(v, c) for v in ys for c in (RED, BLUE)]
    left = [event_vertex_color(space, vertices, v, c) for v, c in left_pairs]
    right = [event_vertex_color(space, vertices, v, c) for v, c in right_pairs]
    res = tuples_independent(space, left, right)

    identities = []
    for k in range(1 << len(left_pairs)):
        u = [left_pairs[i] for i in range(len(left_pairs)) if (k >> i) & 1]
        for m in range(1 << len(right_pairs)):
            w = [right_pairs[i] for i in range(len(right_pairs)) if (m >> i) & 1]
            identities.append(CountingIdentity(
                tuple(u), tuple(w),
                _count_partial(u + w, len(xs) + len(ys)),
                _count_partial(u, len(xs)), _count_partial(w, len(ys))))
    return BlockReport(res.independent, res.witness, identities)


def _count_partial(constraints, domain: int) -> int:
    """Number of colorings of a domain-sized vertex set satisfying all
    (vertex, color) requirements: 0 on a clash, else one free binary choice
    per unconstrained vertex."""
    fixed: dict[int, str] = {}
    for v, c in constraints:
        if fixed.get(v, c) != c:
            return 0
        fixed[v] = c
    return 1 << (domain - len(fixed))


@dataclass
class EdgePairReport:
    edge: tuple
    other: tuple
    disjoint: bool
    pr_joint: Fraction
    pr_product: Fraction
    bit_ok: bool | None

    @property
    def factored(self) -> bool:
        return self.pr_joint == self.pr_product


@dataclass
class LllReport:
    edge_probabilities: dict[tuple, Fraction]
    tuple_independence_ok: bool
    pair_reports: list[EdgePairReport]
    condition_holds: bool
    condition_text: str
    proper_coloring: str | None
    searched: bool

    @property
    def ok(self) -> bool:
        pairs = all(r.bit_ok and r.factored for r in self.pair_reports if r.disjoint)
        found = (not self.condition_holds) or (not self.searched) or \
            self.proper_coloring is not None
        return self.tuple_independence_ok and pairs and found


def verify_lll_hypothesis(h: Hypergraph, exhaustive: bool = True,
                          search_cap: int = 20) -> LllReport:
    """For every edge, verify that its monochromatic event is independent of
    the tuple of monochromatic events of vertex-disjoint edges, and report
    the local-lemma side condition together with a proper coloring found by
    exhaustive search when the instance is small enough."""
    space = coloring_space(h.vertices)
    edge_events = {f: event_monochromatic(space, h, f) for f in h.edges}
    probs = {tuple(sorted(f)): space.pr(a) for f, a in edge_events.items()}

    tuple_ok = True
    for f in h.edges:
        others = [g for g in h.edges if not (f & g) and g is not f]
        if not others:
            continue
        if len(others) > 16:
            others = others[:16]
        # single event vs tuple: subsets of the right side only
        a = edge_events[f]
        for m in range(1 << len(others)):
            meet = space.full
            for i, g in enumerate(others):
                if (m >> i) & 1:
                    meet &= edge_events[g]
            if space.pr(a & meet) != space.pr(a) * space.pr(meet):
                tuple_ok = False

    pair_reports = []
    for f, g in combinations(h.edges, 2):
        disjoint = not (f & g)
        pr_joint = space.pr(edge_events[f] & edge_events[g])
        pr_product = space.pr(edge_events[f]) * space.pr(edge_events[g])
        bit_ok = None
        if disjoint:
            bit_ok = _pair_bit_check(space, h, f, g)
        pair_reports.append(EdgePairReport(tuple(sorted(f)), tuple(sorted(g)),
                                           disjoint, pr_joint, pr_product, bit_ok))

    k = h.min_edge_size()
    d = h.max_neighbors() if len(h.edges) > 1 else 0
    bound = Fraction(2) ** (k - 1)
    holds = _E_HI * (d + 1) <= bound
    ambiguous = (not holds) and _E_LO * (d + 1) <= bound
    text = f"e·(d+1) {'<=' if holds else '>'} 2^(k-1) with k={k}, d={d}" + \
        (" (within rounding of e)" if ambiguous else "")

    coloring = None
    searched = exhaustive and h.vertices <= search_cap
    if searched:
        masks = [sum(1 << v for v in f) for f in h.edges]
        for m in range(1 << h.vertices):
            if all(m & fm != 0 and m & fm != fm for fm in masks):
                coloring = coloring_of(m, h.vertices)
                break

    return LllReport(probs, tuple_ok, pair_reports, holds, text, coloring, searched)


def _pair_bit_check(space: Space, h: Hypergraph, f, g) -> bool:
    """Run the term-level independence theorem on a disjoint edge pair,
    padding the shorter generator tuple with the full space."""
    n = max(len(f), len(g))
    left = [event_vertex_color(space, h.vertices, v, RED) for v in sorted(f)]
    right = [event_vertex_color(space, h.vertices, v, RED) for v in sorted(g)]
    left += [space.full] * (n - len(left))
    right += [space.full] * (n - len(right))
    try:
        report = bit_check(space, monochromatic_term(len(f)),
                           monochromatic_term(len(g)), left, right)
    except PreconditionViolated:
        return False
    return report.ok
