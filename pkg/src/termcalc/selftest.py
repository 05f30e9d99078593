"""Bundled invariant suites, runnable from the CLI and the service.

Each suite is a scaled-down version of the corresponding property test:
ring axioms on the concrete carriers and on sparse polynomials, soundness
of every rewrite rule against the semantic oracle, DNF against the truth
table, and the independence theorem on random weighted spaces.
"""

from __future__ import annotations

import random
from fractions import Fraction

from . import boolean_terms as B
from . import ring_terms as R
from . import terms as T
from .polynomials import Poly
from .probability import Space, bit_check, tuples_independent
from .rings import integers, rationals, residues, ring_axiom_suite


def random_ring_term(rng: random.Random, ring, max_depth=4, n_vars=4) -> T.Term:
    if max_depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.55:
            return T.Var(rng.randint(1, n_vars))
        if roll < 0.7:
            return R.ZERO if rng.random() < 0.5 else R.ONE
        return R.constant(ring, ring.sample(rng))
    op = R.PLUS if rng.random() < 0.6 else R.TIMES
    return T.Binary(op, random_ring_term(rng, ring, max_depth - 1, n_vars),
                    random_ring_term(rng, ring, max_depth - 1, n_vars))


def random_bool_term(rng: random.Random, max_depth=4, n_vars=3) -> T.Term:
    if max_depth == 0 or rng.random() < 0.3:
        roll = rng.random()
        if roll < 0.7:
            return T.Var(rng.randint(1, n_vars))
        return B.ZERO if rng.random() < 0.5 else B.ONE
    roll = rng.random()
    if roll < 0.25:
        return T.Unary(B.NOT, random_bool_term(rng, max_depth - 1, n_vars))
    op = B.OR if roll < 0.625 else B.AND
    return T.Binary(op, random_bool_term(rng, max_depth - 1, n_vars),
                    random_bool_term(rng, max_depth - 1, n_vars))


def random_poly(rng: random.Random, ring, max_terms=5, max_exp=4) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        width = rng.randint(0, 3)
        exp = tuple(rng.randint(0, max_exp) for _ in range(width))
        while exp and exp[-1] == 0:
            exp = exp[:-1]
        terms[exp] = ring.sample(rng)
    return Poly(ring, terms)


def random_space(rng: random.Random, size: int) -> Space:
    raw = [rng.randint(1, 8) for _ in range(size)]
    total = sum(raw)
    return Space(size, tuple(Fraction(r, total) for r in raw))


def product_space(rng: random.Random, left_bits: int, right_bits: int):
    """A product of two independently weighted coordinate blocks, plus the
    coordinate events of each block (independent by construction)."""
    left_px = [Fraction(rng.randint(1, 7), 8) for _ in range(left_bits)]
    right_px = [Fraction(rng.randint(1, 7), 8) for _ in range(right_bits)]
    bits = left_bits + right_bits
    weights = []
    for m in range(1 << bits):
        w = Fraction(1)
        for i, p in enumerate(left_px + right_px):
            w *= p if (m >> i) & 1 else 1 - p
        weights.append(w)
    space = Space(1 << bits, tuple(weights))
    left = [space.event([m for m in range(1 << bits) if (m >> i) & 1])
            for i in range(left_bits)]
    right = [space.event([m for m in range(1 << bits) if (m >> (left_bits + i)) & 1])
             for i in range(right_bits)]
    return space, left, right


def run(seed: int = 0, samples: int = 200) -> tuple[bool, list[str]]:
    rng = random.Random(seed)
    lines = []
    ok = True

    def report(name, passed, detail=""):
        nonlocal ok
        ok = ok and passed
        lines.append(f"{'PASS' if passed else 'FAIL'} {name}{' ' + detail if detail else ''}")

    for ring in (integers(), residues(2), residues(6), rationals()):
        rep = ring_axiom_suite(ring, samples, rng)
        report(f"ring axioms on {ring.name}", rep.ok)

    zz = integers()
    rep = ring_axiom_suite(zz, max(20, samples // 4), rng,
                           sample=lambda r: random_poly(r, zz))
    report("ring axioms on sparse polynomials over Z", rep.ok)

    bad = 0
    for _ in range(samples):
        ring = rng.choice((integers(), residues(2), residues(6)))
        t = random_ring_term(rng, ring)
        moves = _valid_ring_moves(t, ring)
        if not moves:
            continue
        step = rng.choice(moves)
        after = R.apply_rule(t, step, ring)
        if R.expand(t, ring) != R.expand(after, ring):
            bad += 1
    report("rewrite-rule soundness (ring)", bad == 0, f"{bad} violations")

    bad = 0
    for _ in range(samples):
        t = random_bool_term(rng)
        n = max(T.variables_of(t), default=1)
        dnf, cert = B.to_dnf(t, n)
        if B.truth_table(t, n) != B.truth_table(dnf.term(), n):
            bad += 1
        if not B.verify(cert).ok:
            bad += 1
    report("DNF against the truth table", bad == 0, f"{bad} violations")

    bad = 0
    for _ in range(max(10, samples // 10)):
        space, left, right = product_space(rng, 2, 2)
        if not tuples_independent(space, left, right).independent:
            bad += 1
            continue
        t = random_bool_term(rng, max_depth=3, n_vars=2)
        u = random_bool_term(rng, max_depth=3, n_vars=2)
        if not bit_check(space, t, u, left, right).ok:
            bad += 1
    report("independence theorem on product spaces", bad == 0, f"{bad} violations")

    return ok, lines


def _valid_ring_moves(t, ring):
    moves = []
    for pos, v in T.subterms(t):
        for rule in R.ET_RULES:
            from .rewriting import Step
            if R._rewrite_forward(rule, v, ring) is not None:
                moves.append(Step(rule, pos, True, {}))
    return moves
