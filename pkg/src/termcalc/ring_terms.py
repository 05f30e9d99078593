"""Ring terms: the twelve rewrite rules ET-1..ET10, certified equivalence,
expansion into sparse polynomials, and reduction to a canonical sum of
monomials.

Two notions of sameness live here.  Semantic: two terms are equivalent
when they expand to the same sparse polynomial.  Syntactic: one term can
be rewritten into the other by a chain of the elementary rules.  The two
coincide; `equivalence_certificate` decides the semantic side and then
constructs an explicit replayable chain witnessing the syntactic side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Iterator

from . import terms as T
from .polynomials import Poly, exp_add, grlex_key, strip_zeros
from .rewriting import (Certificate, RedexMismatch, ReplayResult, Rewriter,
                        Step, comb_sort, concat, distribute, replay,
                        reverse_certificate)
from .rings import Ring

PLUS = "+"
TIMES = "·"
ZERO = T.Const("0")
ONE = T.Const("1")

_CONST_RE = re.compile(r"c\{[^{}]+\}")

ET_RULES = ("ET-1", "ET0", "ET1", "ET2", "ET3", "ET4", "ET5", "ET6",
            "ET7", "ET8", "ET9", "ET10")


def signature(ring: Ring) -> T.Signature:
    """The term signature of a ring: binary + and ·, nullary 0 and 1, and
    one nullary constant c{r} per ring element (canonicalized on read)."""
    return T.Signature(
        arity={PLUS: 2, TIMES: 2, "0": 0, "1": 0},
        aliases={"*": TIMES},
        constant_pattern=_CONST_RE,
        canonical_constant=lambda s: constant(ring, ring.parse(s[2:-1])).symbol,
    )


def constant(ring: Ring, r: Any) -> T.Const:
    return T.Const("c{%s}" % ring.fmt(r))


def constant_value(ring: Ring, t: T.Term):
    """The ring element a c{...} constant denotes, or None."""
    if isinstance(t, T.Const) and t.symbol.startswith("c{") and t.symbol.endswith("}"):
        return ring.parse(t.symbol[2:-1])
    return None


def parse(word: str, ring: Ring) -> T.Term:
    return T.parse(word, signature(ring))


# -- evaluation ------------------------------------------------------------

def evaluate(t: T.Term, args, *, plus, times, zero, one, const) -> Any:
    """Structural evaluation of a ring term in any algebra providing the
    two binary operations, the two distinguished elements, and a constant
    interpretation."""
    if isinstance(t, T.Var):
        if t.index > len(args):
            raise T.MissingArgument(f"no argument for x{t.index}")
        return args[t.index - 1]
    if isinstance(t, T.Const):
        if t.symbol == "0":
            return zero
        if t.symbol == "1":
            return one
        return const(t)
    if isinstance(t, T.Binary):
        a = evaluate(t.left, args, plus=plus, times=times, zero=zero, one=one, const=const)
        b = evaluate(t.right, args, plus=plus, times=times, zero=zero, one=one, const=const)
        if t.symbol == PLUS:
            return plus(a, b)
        if t.symbol == TIMES:
            return times(a, b)
    raise T.NotATerm(f"not a ring term node: {t!r}")


def eval_in_ring(t: T.Term, ring: Ring, args=()) -> Any:
    return evaluate(t, args,
                    plus=ring.add, times=ring.mul, zero=ring.zero, one=ring.one,
                    const=lambda c: constant_value(ring, c))


def expand(t: T.Term, ring: Ring) -> Poly:
    """Expand a ring term into its sparse polynomial (unbounded flavor),
    sending x_i to the degree-one monomial in x_i and c{r} to the constant
    polynomial of r."""
    n = max(T.variables_of(t), default=0)
    args = [Poly.variable(ring, i) for i in range(1, n + 1)]
    return evaluate(t, args,
                    plus=Poly.add, times=Poly.mul,
                    zero=Poly.zero(ring), one=Poly.one(ring),
                    const=lambda c: Poly.constant(ring, constant_value(ring, c)))


def equivalent(t: T.Term, u: T.Term, ring: Ring) -> bool:
    """Semantic equivalence: equal polynomial expansions."""
    return expand(t, ring) == expand(u, ring)


# -- elementary transformations --------------------------------------------

def _etimes(a, b):
    return T.Binary(TIMES, a, b)


def _eplus(a, b):
    return T.Binary(PLUS, a, b)


def _rewrite_forward(rule: str, v: T.Term, ring: Ring):
    """Replacement subterm for the rule read left to right, or None."""
    if rule == "ET-1":
        return constant(ring, ring.zero) if v == ZERO else None
    if rule == "ET0":
        return constant(ring, ring.one) if v == ONE else None
    if rule in ("ET1", "ET2"):
        op = PLUS if rule == "ET1" else TIMES
        if isinstance(v, T.Binary) and v.symbol == op:
            r = constant_value(ring, v.left)
            s = constant_value(ring, v.right)
            if r is not None and s is not None:
                fold = ring.add(r, s) if rule == "ET1" else ring.mul(r, s)
                return constant(ring, fold)
        return None
    if rule == "ET3":
        if isinstance(v, T.Binary) and v.symbol == PLUS and v.left == ZERO:
            return v.right
        return None
    if rule == "ET4":
        if isinstance(v, T.Binary) and v.symbol == TIMES and v.left == ONE:
            return v.right
        return None
    if rule in ("ET5", "ET6"):
        op = PLUS if rule == "ET5" else TIMES
        if isinstance(v, T.Binary) and v.symbol == op:
            return T.Binary(op, v.right, v.left)
        return None
    if rule in ("ET7", "ET8"):
        op = PLUS if rule == "ET7" else TIMES
        if isinstance(v, T.Binary) and v.symbol == op and \
                isinstance(v.right, T.Binary) and v.right.symbol == op:
            return T.Binary(op, T.Binary(op, v.left, v.right.left), v.right.right)
        return None
    if rule == "ET9":
        if isinstance(v, T.Binary) and v.symbol == TIMES and \
                isinstance(v.right, T.Binary) and v.right.symbol == PLUS:
            return _eplus(_etimes(v.left, v.right.left), _etimes(v.left, v.right.right))
        return None
    if rule == "ET10":
        if isinstance(v, T.Binary) and v.symbol == TIMES and v.left == ZERO:
            return ZERO
        return None
    raise RedexMismatch(f"unknown rule {rule!r}")


def _rewrite_reverse(rule: str, v: T.Term, ring: Ring, args: dict):
    if rule == "ET-1":
        r = constant_value(ring, v)
        return ZERO if r is not None and r == ring.zero else None
    if rule == "ET0":
        r = constant_value(ring, v)
        return ONE if r is not None and r == ring.one else None
    if rule in ("ET1", "ET2"):
        t = constant_value(ring, v)
        if t is None or "r" not in args or "s" not in args:
            return None
        r, s = args["r"], args["s"]
        fold = ring.add(r, s) if rule == "ET1" else ring.mul(r, s)
        if fold != t:
            return None
        op = PLUS if rule == "ET1" else TIMES
        return T.Binary(op, constant(ring, r), constant(ring, s))
    if rule == "ET3":
        return _eplus(ZERO, v)
    if rule == "ET4":
        return _etimes(ONE, v)
    if rule in ("ET5", "ET6"):
        return _rewrite_forward(rule, v, ring)
    if rule in ("ET7", "ET8"):
        op = PLUS if rule == "ET7" else TIMES
        if isinstance(v, T.Binary) and v.symbol == op and \
                isinstance(v.left, T.Binary) and v.left.symbol == op:
            return T.Binary(op, v.left.left, T.Binary(op, v.left.right, v.right))
        return None
    if rule == "ET9":
        if isinstance(v, T.Binary) and v.symbol == PLUS and \
                isinstance(v.left, T.Binary) and v.left.symbol == TIMES and \
                isinstance(v.right, T.Binary) and v.right.symbol == TIMES and \
                v.left.left == v.right.left:
            return _etimes(v.left.left, _eplus(v.left.right, v.right.right))
        return None
    if rule == "ET10":
        if v == ZERO and "u" in args:
            return _etimes(ZERO, args["u"])
        return None
    raise RedexMismatch(f"unknown rule {rule!r}")


def apply_rule(t: T.Term, step: Step, ring: Ring) -> T.Term:
    """Apply one elementary transformation at the step's position; raises
    RedexMismatch when the pattern does not fit."""
    v = T.subterm_at(t, step.pos)
    if step.forward:
        new = _rewrite_forward(step.rule, v, ring)
    else:
        new = _rewrite_reverse(step.rule, v, ring, dict(step.args))
    if new is None:
        direction = "forward" if step.forward else "reverse"
        raise RedexMismatch(
            f"{step.rule} ({direction}) does not match {T.serialize(v)} at {list(step.pos)}")
    return T.replace_at(t, step.pos, new)


def _reverse_args(step: Step, redex: T.Term) -> dict:
    if step.rule in ("ET1", "ET2"):
        return {"r": redex.left, "s": redex.right}
    if step.rule == "ET10":
        return {"u": redex.right}
    return {}


def _reverse_args_values(ring: Ring):
    def fn(step: Step, redex: T.Term) -> dict:
        out = _reverse_args(step, redex)
        if "r" in out:
            out["r"] = constant_value(ring, out["r"])
            out["s"] = constant_value(ring, out["s"])
        return out
    return fn


def verify(cert: Certificate, ring: Ring) -> ReplayResult:
    return replay(cert, lambda t, s: apply_rule(t, s, ring))


def reverse(cert: Certificate, ring: Ring) -> Certificate:
    return reverse_certificate(cert, lambda t, s: apply_rule(t, s, ring),
                               _reverse_args_values(ring))


# -- normal form -----------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """A term of the shape sum of (c{r}·monomial) with nonzero coefficients
    and pairwise distinct monomial exponent types, together with the sparse
    polynomial it denotes."""
    term: T.Term
    parts: tuple[tuple[Any, T.Term], ...]
    polynomial: Poly


def monomial_exponents(mu: T.Term) -> tuple[int, ...]:
    """Exponent vector of a product-of-variables term (1 for the empty
    product), trailing zeros stripped."""
    if mu == ONE:
        return ()
    counts: dict[int, int] = {}
    for _, node in T.subterms(mu):
        if isinstance(node, T.Var):
            counts[node.index] = counts.get(node.index, 0) + 1
        elif not (isinstance(node, T.Binary) and node.symbol == TIMES):
            raise T.NotATerm(f"not a monomial node: {T.serialize(node)}")
    width = max(counts)
    return tuple(counts.get(i, 0) for i in range(1, width + 1))


def monomial_term(exp: tuple[int, ...]) -> T.Term:
    """The canonical monomial of a type: right-nested product of variables
    with nondecreasing indices; the empty type gives 1."""
    factors = [T.Var(i + 1) for i, e in enumerate(exp) for _ in range(e)]
    if not factors:
        return ONE
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = _etimes(f, out)
    return out


def standard_term(poly: Poly) -> T.Term:
    """The canonical sum-of-monomials term denoting a polynomial: summands
    ordered by graded-lex type, right-nested; 0 for the zero polynomial."""
    items = poly.to_unbounded().items_sorted()
    if not items:
        return ZERO
    ring = poly.ring
    leaves = [_etimes(constant(ring, c), monomial_term(e)) for e, c in items]
    out = leaves[-1]
    for leaf in reversed(leaves[:-1]):
        out = _eplus(leaf, out)
    return out


def parse_normal_form(t: T.Term, ring: Ring) -> NormalForm:
    """Read a term as a normal form, validating its shape: nonzero
    coefficients and pairwise distinct monomial types."""
    if t == ZERO:
        return NormalForm(t, (), Poly.zero(ring))
    parts = []
    coeffs: dict[tuple[int, ...], Any] = {}
    for leaf in _sum_leaves(t):
        if not (isinstance(leaf, T.Binary) and leaf.symbol == TIMES):
            raise T.NotATerm(f"summand {T.serialize(leaf)} is not (c·monomial)")
        r = constant_value(ring, leaf.left)
        if r is None or r == ring.zero:
            raise T.NotATerm(f"bad coefficient in {T.serialize(leaf)}")
        exp = monomial_exponents(leaf.right)
        if exp in coeffs:
            raise T.NotATerm(f"duplicate monomial type {exp}")
        coeffs[exp] = r
        parts.append((r, leaf.right))
    return NormalForm(t, tuple(parts), Poly(ring, coeffs))


def _sum_leaves(t: T.Term) -> list[T.Term]:
    out = []
    stack = [t]
    while stack:
        node = stack.pop()
        if isinstance(node, T.Binary) and node.symbol == PLUS:
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _is_sum(t: T.Term) -> bool:
    return isinstance(t, T.Binary) and t.symbol == PLUS


def _is_times(t: T.Term) -> bool:
    return isinstance(t, T.Binary) and t.symbol == TIMES


def normalize(t: T.Term, ring: Ring) -> tuple[NormalForm, Certificate]:
    """Reduce a term to the canonical normal form, returning the full
    certificate of elementary transformations.

    Phases: distribute products over sums (deepest redex first); rewrite
    every summand into coefficient-times-standard-monomial shape; sort the
    summands by monomial type, folding equal types together; erase
    zero-coefficient summands.
    """
    rw = Rewriter(t, lambda cur, s: apply_rule(cur, s, ring))
    if t != ZERO:
        distribute(rw, PLUS, TIMES, "ET6", "ET9")
        for pos in _summand_positions(rw.term):
            _standardize_product(rw, pos, ring)
        _combine_sum(rw, ring)
    form = parse_normal_form(rw.term, ring)
    return form, rw.certificate()


def _summand_positions(t: T.Term) -> list[T.Position]:
    out = []
    stack: list[tuple[T.Position, T.Term]] = [((), t)]
    while stack:
        pos, node = stack.pop()
        if _is_sum(node):
            stack.append((pos + (2,), node.right))
            stack.append((pos + (1,), node.left))
        else:
            out.append(pos)
    return out


def _wrap_constant(rw: Rewriter, pos: T.Position) -> None:
    # c  ->  (1·c)  ->  (c·1)
    rw.do("ET4", pos, forward=False)
    rw.do("ET6", pos)


def _standardize_product(rw: Rewriter, pos: T.Position, ring: Ring) -> None:
    """Rewrite the product tree at pos into (c{r}·mu) with mu the canonical
    monomial of its type (mu = 1 for a constant summand)."""
    v = T.subterm_at(rw.term, pos)
    if isinstance(v, T.Var):
        rw.do("ET4", pos, forward=False)   # x -> (1·x)
        rw.do("ET0", pos + (1,))           # 1 -> c{1}
        return
    if v == ZERO:
        rw.do("ET-1", pos)
        _wrap_constant(rw, pos)
        return
    if v == ONE:
        rw.do("ET0", pos)
        _wrap_constant(rw, pos)
        return
    if constant_value(ring, v) is not None:
        _wrap_constant(rw, pos)
        return
    if not _is_times(v):
        raise T.NotATerm(f"unexpected summand {T.serialize(v)}")
    _standardize_product(rw, pos + (1,), ring)
    _standardize_product(rw, pos + (2,), ring)
    # ((c{a}·m1)·(c{b}·m2)) -> (c{ab}·(m1·m2))
    rw.do("ET8", pos)
    rw.do("ET6", pos + (1,))
    rw.do("ET8", pos + (1,))
    rw.do("ET2", pos + (1, 1))
    rw.do("ET8", pos, forward=False)
    prod = T.subterm_at(rw.term, pos + (2,))
    if prod.left == ONE:
        rw.do("ET4", pos + (2,))
    elif prod.right == ONE:
        rw.do("ET6", pos + (2,))
        rw.do("ET4", pos + (2,))
    else:
        _sort_monomial(rw, pos + (2,))


def _sort_monomial(rw: Rewriter, pos: T.Position) -> None:
    comb_sort(rw, pos, TIMES, "ET6", "ET8",
              is_leaf=lambda n: isinstance(n, T.Var),
              key=lambda n: n.index)


def _summand_exp(leaf: T.Term) -> tuple[int, ...]:
    return monomial_exponents(leaf.right)


def _combine_sum(rw: Rewriter, ring: Ring) -> None:
    """Sort the comb of (c·mu) summands by graded-lex type, then sweep once
    merging equal-type neighbors and erasing zero-coefficient summands."""
    if _is_sum(rw.term):
        pad = max(len(_summand_exp(leaf)) for leaf in _sum_leaves(rw.term))
        comb_sort(rw, (), PLUS, "ET5", "ET7",
                  is_leaf=lambda n: not _is_sum(n),
                  key=lambda n: grlex_key(_summand_exp(n), pad))
    pos: T.Position = ()
    while True:
        v = T.subterm_at(rw.term, pos)
        if not _is_sum(v):
            if constant_value(ring, v.left) == ring.zero:
                if pos == ():
                    rw.do("ET-1", (1,), forward=False)
                    rw.do("ET10", ())
                else:
                    # trailing zero summand: swap it leftwards and drop
                    parent = pos[:-1]
                    rw.do("ET5", parent)
                    _drop_zero_summand(rw, parent)
            break
        first = v.left
        if _is_sum(v.right):
            second = v.right.left
            if _summand_exp(first) == _summand_exp(second):
                rw.do("ET7", pos)
                _merge_pair(rw, pos + (1,), ring)
                continue
            if constant_value(ring, first.left) == ring.zero:
                _drop_zero_summand(rw, pos)
                continue
            pos = pos + (2,)
        else:
            if _summand_exp(first) == _summand_exp(v.right):
                _merge_pair(rw, pos, ring)
                continue
            if constant_value(ring, first.left) == ring.zero:
                _drop_zero_summand(rw, pos)
                continue
            pos = pos + (2,)


def _merge_pair(rw: Rewriter, pos: T.Position, ring: Ring) -> None:
    # ((c{a}·mu)+(c{b}·mu)) -> (c{a+b}·mu)
    rw.do("ET6", pos + (1,))
    rw.do("ET6", pos + (2,))
    rw.do("ET9", pos, forward=False)
    rw.do("ET1", pos + (2,))
    rw.do("ET6", pos)


def _drop_zero_summand(rw: Rewriter, pos: T.Position) -> None:
    # ((c{0}·mu)+rest) -> rest
    rw.do("ET-1", pos + (1, 1), forward=False)
    rw.do("ET10", pos + (1,))
    rw.do("ET3", pos)


# -- the decision procedure --------------------------------------------------

def bridge(a: T.Term, b: T.Term, ring: Ring) -> Certificate:
    """Certificate between two normal-form terms with the same polynomial,
    using only the reordering rules ET5/ET6/ET7/ET8."""
    fa = parse_normal_form(a, ring)
    fb = parse_normal_form(b, ring)
    if fa.polynomial != fb.polynomial:
        raise RedexMismatch("normal forms carry different polynomials")
    return concat(_reorder_to_canonical(a, ring),
                  reverse(_reorder_to_canonical(b, ring), ring))


def _reorder_to_canonical(t: T.Term, ring: Ring) -> Certificate:
    rw = Rewriter(t, lambda cur, s: apply_rule(cur, s, ring))
    if t != ZERO:
        for pos in _summand_positions(rw.term):
            mu = T.subterm_at(rw.term, pos + (2,))
            if mu != ONE and not isinstance(mu, T.Var):
                _sort_monomial(rw, pos + (2,))
        if _is_sum(rw.term):
            pad = max(len(_summand_exp(leaf)) for leaf in _sum_leaves(rw.term))
            comb_sort(rw, (), PLUS, "ET5", "ET7",
                      is_leaf=lambda n: not _is_sum(n),
                      key=lambda n: grlex_key(_summand_exp(n), pad))
    return rw.certificate()


def equivalence_certificate(t: T.Term, u: T.Term, ring: Ring) -> Certificate | None:
    """A replayable chain from t to u when the two terms expand to the same
    polynomial; None otherwise."""
    if not equivalent(t, u, ring):
        return None
    form_t, cert_t = normalize(t, ring)
    form_u, cert_u = normalize(u, ring)
    mid = concat(cert_t, bridge(form_t.term, form_u.term, ring)) \
        if form_t.term != form_u.term else cert_t
    return concat(mid, reverse(cert_u, ring))


# -- counting --------------------------------------------------------------

def sum_arrangements(n: int) -> Iterator[T.Term]:
    """All terms that sum x1..xn, each variable exactly once: every leaf
    permutation under every binary bracketing."""
    def shapes(vars_: tuple[int, ...]) -> Iterator[T.Term]:
        if len(vars_) == 1:
            yield T.Var(vars_[0])
            return
        for i in range(1, len(vars_)):
            for left in shapes(vars_[:i]):
                for right in shapes(vars_[i:]):
                    yield _eplus(left, right)

    for perm in permutations(range(1, n + 1)):
        yield from shapes(perm)


def count_sum_arrangements(n: int) -> int:
    """Number of distinct sums of x1..xn, by enumeration."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return sum(1 for _ in sum_arrangements(n))


# -- certificate JSON --------------------------------------------------------

def step_to_json(step: Step, ring: Ring | None) -> dict:
    data = {"rule": step.rule, "pos": list(step.pos),
            "dir": "fwd" if step.forward else "rev"}
    if step.args:
        args = {}
        for k, v in step.args.items():
            if isinstance(v, T.Term):
                args[k] = {"term": T.serialize(v)}
            else:
                args[k] = {"elem": ring.fmt(v)}
        data["args"] = args
    return data


def step_from_json(data: dict, ring: Ring | None, sig: T.Signature) -> Step:
    args = {}
    for k, v in data.get("args", {}).items():
        if "term" in v:
            args[k] = T.parse(v["term"], sig)
        else:
            args[k] = ring.parse(v["elem"])
    return Step(data["rule"], tuple(data["pos"]), data["dir"] == "fwd", args)


def certificate_to_json(cert: Certificate, ring: Ring) -> dict:
    return {
        "kind": "ring",
        "ring": ring.name,
        "source": T.serialize(cert.source),
        "target": T.serialize(cert.target),
        "steps": [step_to_json(s, ring) for s in cert.steps],
    }


def certificate_from_json(data: dict, ring: Ring) -> Certificate:
    sig = signature(ring)
    return Certificate(
        source=T.parse(data["source"], sig),
        target=T.parse(data["target"], sig),
        steps=tuple(step_from_json(s, ring, sig) for s in data["steps"]),
    )
