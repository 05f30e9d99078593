"""Shared generators and oracles for the test suite.

Random term generators bound the fully distributed size of what they
produce so that normalization stays at desk scale; the bound caps the
number of expanded summands, not the term depth.
"""

import random

import pytest

from termcalc import boolean_terms as B
from termcalc import ring_terms as R
from termcalc import terms as T
from termcalc.rewriting import Step
from termcalc.rings import integers, rationals, residues


def expansion_size(t, plus, times):
    """Number of summands the term expands to under full distribution."""
    if isinstance(t, T.Binary):
        a = expansion_size(t.left, plus, times)
        b = expansion_size(t.right, plus, times)
        return a + b if t.symbol == plus else a * b
    if isinstance(t, T.Unary):
        return expansion_size(t.child, plus, times) + 1
    return 1


def random_ring_term(rng, ring, pool, max_depth=6, n_vars=6, cap=64):
    def gen(d):
        if d == 0 or rng.random() < 0.3:
            roll = rng.random()
            if roll < 0.55:
                return T.Var(rng.randint(1, n_vars))
            if roll < 0.7:
                return R.ZERO if rng.random() < 0.5 else R.ONE
            return R.constant(ring, rng.choice(pool))
        op = R.PLUS if rng.random() < 0.55 else R.TIMES
        return T.Binary(op, gen(d - 1), gen(d - 1))

    for _ in range(60):
        t = gen(max_depth)
        if expansion_size(t, R.PLUS, R.TIMES) <= cap:
            return t
    return T.Var(rng.randint(1, n_vars))


def random_bool_term(rng, max_depth=5, n_vars=3, cap=64, const_rate=0.2):
    def gen(d):
        if d == 0 or rng.random() < 0.3:
            if rng.random() < const_rate:
                return B.ZERO if rng.random() < 0.5 else B.ONE
            return T.Var(rng.randint(1, n_vars))
        roll = rng.random()
        if roll < 0.25:
            return T.Unary(B.NOT, gen(d - 1))
        return T.Binary(B.OR if roll < 0.625 else B.AND, gen(d - 1), gen(d - 1))

    for _ in range(60):
        t = gen(max_depth)
        if expansion_size(t, B.OR, B.AND) <= cap:
            return t
    return T.Var(rng.randint(1, n_vars))


def element_pool(ring, size=8):
    """A fixed pool of distinct ring elements for constant symbols."""
    seen = []
    for k in range(-size, 4 * size):
        r = ring.parse(str(k))
        if r not in seen:
            seen.append(r)
        if len(seen) == size:
            break
    return seen


def ring_moves(t, ring, rng=None, include_reverse=False):
    """Every applicable rule instance on t: all forward redexes, plus (when
    asked) reverse instances with randomly constructed bindings."""
    moves = []
    for pos, v in T.subterms(t):
        for rule in R.ET_RULES:
            if R._rewrite_forward(rule, v, ring) is not None:
                moves.append(Step(rule, pos, True, {}))
        if not include_reverse:
            continue
        for rule in ("ET-1", "ET0", "ET3", "ET4", "ET5", "ET6",
                     "ET7", "ET8", "ET9"):
            if R._rewrite_reverse(rule, v, ring, {}) is not None:
                moves.append(Step(rule, pos, False, {}))
        value = R.constant_value(ring, v)
        if value is not None:
            r = ring.sample(rng)
            moves.append(Step("ET1", pos, False, {"r": r, "s": ring.sub(value, r)}))
            if value == ring.zero or value == ring.one:
                pass
        if v == R.ZERO:
            u = T.Var(rng.randint(1, 4))
            moves.append(Step("ET10", pos, False, {"u": u}))
    return moves


def bool_moves(t):
    """All forward BT redexes on t."""
    moves = []
    for pos, v in T.subterms(t):
        for rule in B.BT_RULES:
            if B._bt_forward(rule, v) is not None:
                moves.append(Step(rule, pos, True, {}))
    return moves


def all_bool_terms(max_nodes, n_vars=3):
    """Every Boolean term with at most max_nodes tree nodes over the first
    n_vars variables and both constants."""
    atoms = [T.Var(i) for i in range(1, n_vars + 1)] + [B.ZERO, B.ONE]
    by_size = {1: atoms}
    for s in range(2, max_nodes + 1):
        items = [T.Unary(B.NOT, t) for t in by_size[s - 1]]
        for a in range(1, s - 1):
            for left in by_size[a]:
                for right in by_size[s - 1 - a]:
                    items.append(T.Binary(B.OR, left, right))
                    items.append(T.Binary(B.AND, left, right))
        by_size[s] = items
    out = []
    for s in range(1, max_nodes + 1):
        out.extend(by_size[s])
    return out


def dnf_truth_table(dnf):
    """Truth table of a structured DNF, from the fact that a full-support
    monomial is satisfied by exactly one assignment."""
    rows = [0] * (1 << dnf.width)
    for m in dnf.monomials:
        idx = 0
        for var, neg in zip(m.vars, m.negated):
            if not neg:
                idx |= 1 << (var - 1)
        rows[idx] = 1
    return tuple(rows)


@pytest.fixture
def rng():
    return random.Random(20250809)


@pytest.fixture(params=["Z", "Zm:2", "Zm:6", "Q"])
def any_ring(request):
    from termcalc.rings import ring_from_name
    return ring_from_name(request.param)
