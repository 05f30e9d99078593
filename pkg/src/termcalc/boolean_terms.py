"""Boolean terms over join, meet, complement and the two constants: the
nineteen rewrite rules BT1..BT19, evaluation in arbitrary Boolean
algebras, and certified reduction to disjunctive normal form.

The DNF of width n is a disjunction of full-support monomials (one
literal per variable of [n]) with pairwise distinct sign patterns; the
empty disjunction is the constant 0.  The normalizer emits a certificate
of literal rule applications from the input to the canonical DNF term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator

from . import terms as T
from .rewriting import (Certificate, RedexMismatch, ReplayResult, Rewriter,
                        Step, comb_sort, distribute, replay,
                        reverse_certificate)

OR = "∨"
AND = "∧"
NOT = "¬"
ZERO = T.Const("0")
ONE = T.Const("1")

BT_RULES = tuple(f"BT{i}" for i in range(1, 20))

SIGNATURE = T.Signature(
    arity={OR: 2, AND: 2, NOT: 1, "0": 0, "1": 0},
    aliases={"|": OR, "&": AND, "!": NOT},
)


def parse(word: str) -> T.Term:
    return T.parse(word, SIGNATURE)


def _or(a, b):
    return T.Binary(OR, a, b)


def _and(a, b):
    return T.Binary(AND, a, b)


def _not(a):
    return T.Unary(NOT, a)


def _is_or(t):
    return isinstance(t, T.Binary) and t.symbol == OR


def _is_and(t):
    return isinstance(t, T.Binary) and t.symbol == AND


def is_literal(t: T.Term) -> bool:
    return isinstance(t, T.Var) or (isinstance(t, T.Unary) and t.symbol == NOT
                                    and isinstance(t.child, T.Var))


def literal_key(t: T.Term) -> tuple[int, int]:
    """(variable index, 0 positive / 1 negated)."""
    if isinstance(t, T.Var):
        return (t.index, 0)
    return (t.child.index, 1)


# -- evaluation --------------------------------------------------------------

@dataclass(frozen=True)
class BoolAlgebra:
    join: Callable[[Any, Any], Any]
    meet: Callable[[Any, Any], Any]
    comp: Callable[[Any], Any]
    zero: Any
    one: Any


BITS = BoolAlgebra(join=lambda a, b: a | b, meet=lambda a, b: a & b,
                   comp=lambda a: 1 - a, zero=0, one=1)


def mask_algebra(size: int) -> BoolAlgebra:
    """Powerset algebra of a size-element set, events as bitmasks."""
    full = (1 << size) - 1
    return BoolAlgebra(join=lambda a, b: a | b, meet=lambda a, b: a & b,
                       comp=lambda a: full ^ a, zero=0, one=full)


def set_algebra(universe: frozenset) -> BoolAlgebra:
    return BoolAlgebra(join=lambda a, b: a | b, meet=lambda a, b: a & b,
                       comp=lambda a: universe - a, zero=frozenset(), one=universe)


def evaluate(t: T.Term, alg: BoolAlgebra, args) -> Any:
    if isinstance(t, T.Var):
        if t.index > len(args):
            raise T.MissingArgument(f"no argument for x{t.index}")
        return args[t.index - 1]
    if t == ZERO:
        return alg.zero
    if t == ONE:
        return alg.one
    if isinstance(t, T.Unary) and t.symbol == NOT:
        return alg.comp(evaluate(t.child, alg, args))
    if isinstance(t, T.Binary):
        a = evaluate(t.left, alg, args)
        b = evaluate(t.right, alg, args)
        if t.symbol == OR:
            return alg.join(a, b)
        if t.symbol == AND:
            return alg.meet(a, b)
    raise T.NotATerm(f"not a Boolean term node: {t!r}")


def truth_table(t: T.Term, n: int) -> tuple[int, ...]:
    """Values over all 2^n 0/1 assignments; assignment bits are read with
    x1 as the least significant bit."""
    rows = []
    for m in range(1 << n):
        args = [(m >> i) & 1 for i in range(n)]
        rows.append(evaluate(t, BITS, args))
    return tuple(rows)


def shift_variables(t: T.Term, offset: int) -> T.Term:
    """Rename every x_i to x_{i+offset}."""
    if isinstance(t, T.Var):
        return T.Var(t.index + offset)
    kids = T.children(t)
    if not kids:
        return t
    return T.with_children(t, tuple(shift_variables(c, offset) for c in kids))


# -- the nineteen transformations --------------------------------------------

def _bt_forward(rule: str, v: T.Term):
    if rule == "BT1":
        return ZERO if _is_and(v) and v.left == ZERO else None
    if rule == "BT2":
        return v.right if _is_or(v) and v.left == ZERO else None
    if rule == "BT3":
        return v.right if _is_and(v) and v.left == ONE else None
    if rule == "BT4":
        return ONE if _is_or(v) and v.left == ONE else None
    if rule == "BT5":
        return ZERO if _is_and(v) and v.right == _not(v.left) else None
    if rule == "BT6":
        return ONE if _is_or(v) and v.right == _not(v.left) else None
    if rule in ("BT7", "BT8"):
        op = OR if rule == "BT7" else AND
        if isinstance(v, T.Binary) and v.symbol == op:
            return T.Binary(op, v.right, v.left)
        return None
    if rule in ("BT9", "BT10"):
        op = OR if rule == "BT9" else AND
        if isinstance(v, T.Binary) and v.symbol == op and \
                isinstance(v.right, T.Binary) and v.right.symbol == op:
            return T.Binary(op, T.Binary(op, v.left, v.right.left), v.right.right)
        return None
    if rule == "BT11":
        return v.left if _is_or(v) and v.left == v.right else None
    if rule == "BT12":
        return v.left if _is_and(v) and v.left == v.right else None
    if rule == "BT13":
        if _is_or(v) and _is_and(v.right):
            return _and(_or(v.left, v.right.left), _or(v.left, v.right.right))
        return None
    if rule == "BT14":
        if _is_and(v) and _is_or(v.right):
            return _or(_and(v.left, v.right.left), _and(v.left, v.right.right))
        return None
    if rule == "BT15":
        if _is_or(v) and _is_and(v.right) and v.right.left == v.left:
            return v.left
        return None
    if rule == "BT16":
        if _is_and(v) and _is_or(v.right) and v.right.left == v.left:
            return v.left
        return None
    if rule == "BT17":
        if isinstance(v, T.Unary) and v.symbol == NOT and \
                isinstance(v.child, T.Unary) and v.child.symbol == NOT:
            return v.child.child
        return None
    if rule == "BT18":
        if isinstance(v, T.Unary) and v.symbol == NOT and _is_or(v.child):
            return _and(_not(v.child.left), _not(v.child.right))
        return None
    if rule == "BT19":
        if isinstance(v, T.Unary) and v.symbol == NOT and _is_and(v.child):
            return _or(_not(v.child.left), _not(v.child.right))
        return None
    raise RedexMismatch(f"unknown rule {rule!r}")


def _bt_reverse(rule: str, v: T.Term, args: dict):
    if rule == "BT1":
        return _and(ZERO, args["u"]) if v == ZERO and "u" in args else None
    if rule == "BT2":
        return _or(ZERO, v)
    if rule == "BT3":
        return _and(ONE, v)
    if rule == "BT4":
        return _or(ONE, args["u"]) if v == ONE and "u" in args else None
    if rule == "BT5":
        return _and(args["u"], _not(args["u"])) if v == ZERO and "u" in args else None
    if rule == "BT6":
        return _or(args["u"], _not(args["u"])) if v == ONE and "u" in args else None
    if rule in ("BT7", "BT8"):
        return _bt_forward(rule, v)
    if rule in ("BT9", "BT10"):
        op = OR if rule == "BT9" else AND
        if isinstance(v, T.Binary) and v.symbol == op and \
                isinstance(v.left, T.Binary) and v.left.symbol == op:
            return T.Binary(op, v.left.left, T.Binary(op, v.left.right, v.right))
        return None
    if rule == "BT11":
        return _or(v, v)
    if rule == "BT12":
        return _and(v, v)
    if rule == "BT13":
        if _is_and(v) and _is_or(v.left) and _is_or(v.right) and \
                v.left.left == v.right.left:
            return _or(v.left.left, _and(v.left.right, v.right.right))
        return None
    if rule == "BT14":
        if _is_or(v) and _is_and(v.left) and _is_and(v.right) and \
                v.left.left == v.right.left:
            return _and(v.left.left, _or(v.left.right, v.right.right))
        return None
    if rule == "BT15":
        return _or(v, _and(v, args["u'"])) if "u'" in args else None
    if rule == "BT16":
        return _and(v, _or(v, args["u'"])) if "u'" in args else None
    if rule == "BT17":
        return _not(_not(v))
    if rule == "BT18":
        if _is_and(v) and isinstance(v.left, T.Unary) and isinstance(v.right, T.Unary):
            return _not(_or(v.left.child, v.right.child))
        return None
    if rule == "BT19":
        if _is_or(v) and isinstance(v.left, T.Unary) and isinstance(v.right, T.Unary):
            return _not(_and(v.left.child, v.right.child))
        return None
    raise RedexMismatch(f"unknown rule {rule!r}")


def apply_rule(t: T.Term, step: Step) -> T.Term:
    v = T.subterm_at(t, step.pos)
    if step.forward:
        new = _bt_forward(step.rule, v)
    else:
        new = _bt_reverse(step.rule, v, dict(step.args))
    if new is None:
        direction = "forward" if step.forward else "reverse"
        raise RedexMismatch(
            f"{step.rule} ({direction}) does not match {T.serialize(v)} at {list(step.pos)}")
    return T.replace_at(t, step.pos, new)


def _reverse_args(step: Step, redex: T.Term) -> dict:
    if step.rule in ("BT1", "BT4"):
        return {"u": redex.right}
    if step.rule in ("BT5", "BT6"):
        return {"u": redex.left}
    if step.rule in ("BT15", "BT16"):
        return {"u'": redex.right.right}
    return {}


def verify(cert: Certificate) -> ReplayResult:
    return replay(cert, apply_rule)


def reverse(cert: Certificate) -> Certificate:
    return reverse_certificate(cert, apply_rule, _reverse_args)


# -- DNF -----------------------------------------------------------------------

class WidthMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Monomial:
    """A conjunction of literals: sorted variable indices and the matching
    negation bits (0 positive, 1 negated).  Empty support denotes 1."""
    vars: tuple[int, ...]
    negated: tuple[int, ...]

    def __post_init__(self):
        if tuple(sorted(set(self.vars))) != self.vars or len(self.vars) != len(self.negated):
            raise ValueError("monomial support must be sorted, distinct, aligned")

    def term(self) -> T.Term:
        if not self.vars:
            return ONE
        lits = [_not(T.Var(i)) if neg else T.Var(i)
                for i, neg in zip(self.vars, self.negated)]
        out = lits[-1]
        for lit in reversed(lits[:-1]):
            out = _and(lit, out)
        return out

    def key(self) -> int:
        """Negation bits read as a binary number, first variable most
        significant."""
        k = 0
        for b in self.negated:
            k = (k << 1) | b
        return k


@dataclass(frozen=True)
class Dnf:
    """Disjunction of same-support monomials with pairwise distinct sign
    patterns, kept sorted by pattern; the empty disjunction is 0."""
    width: int
    support: tuple[int, ...]
    monomials: tuple[Monomial, ...]

    def __post_init__(self):
        keys = [m.key() for m in self.monomials]
        if sorted(set(keys)) != keys:
            raise ValueError("monomials must be sorted with distinct patterns")
        for m in self.monomials:
            if m.vars != self.support:
                raise ValueError("all monomials must share the support")

    def term(self) -> T.Term:
        if not self.monomials:
            return ZERO
        parts = [m.term() for m in self.monomials]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = _or(p, out)
        return out

    def shift(self, offset: int) -> "Dnf":
        return Dnf(self.width + offset,
                   tuple(v + offset for v in self.support),
                   tuple(Monomial(tuple(v + offset for v in m.vars), m.negated)
                         for m in self.monomials))

    def with_width(self, width: int) -> "Dnf":
        if width < self.width:
            raise WidthMismatch(f"cannot shrink width {self.width} to {width}")
        return Dnf(width, self.support, self.monomials)


def conjoin(p: Dnf, q: Dnf) -> Dnf:
    """DNF of (p ∧ q): pairwise monomial conjunction, contradictions
    dropped, duplicate patterns folded."""
    if p.width != q.width:
        raise WidthMismatch(f"width {p.width} vs {q.width}")
    support = tuple(sorted(set(p.support) | set(q.support)))
    seen: dict[tuple[int, ...], Monomial] = {}
    for mu in p.monomials:
        signs_mu = dict(zip(mu.vars, mu.negated))
        for nu in q.monomials:
            signs = dict(signs_mu)
            clash = False
            for v, b in zip(nu.vars, nu.negated):
                if signs.get(v, b) != b:
                    clash = True
                    break
                signs[v] = b
            if clash:
                continue
            m = Monomial(support, tuple(signs[v] for v in support))
            seen[m.negated] = m
    monos = sorted(seen.values(), key=Monomial.key)
    return Dnf(p.width, support, tuple(monos))


def parse_dnf(t: T.Term, width: int) -> Dnf:
    """Read a canonical DNF term back into its structured form."""
    support = tuple(range(1, width + 1))
    if t == ZERO:
        return Dnf(width, support, ())
    monos = []
    for leaf in _or_leaves(t):
        lits = _and_leaves(leaf)
        vars_, negs = [], []
        for lit in lits:
            if not is_literal(lit):
                raise T.NotATerm(f"not a literal: {T.serialize(lit)}")
            i, b = literal_key(lit)
            vars_.append(i)
            negs.append(b)
        monos.append(Monomial(tuple(vars_), tuple(negs)))
    return Dnf(width, support, tuple(monos))


def _or_leaves(t):
    out, stack = [], [t]
    while stack:
        node = stack.pop()
        if _is_or(node):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def _and_leaves(t):
    out, stack = [], [t]
    while stack:
        node = stack.pop()
        if _is_and(node):
            stack.append(node.right)
            stack.append(node.left)
        else:
            out.append(node)
    return out


def to_dnf(t: T.Term, width: int | None = None) -> tuple[Dnf, Certificate]:
    """Reduce a Boolean term to its canonical width-n DNF with a replayable
    certificate.

    Phases: push complements down to variables (BT17/BT18/BT19, plus the
    two-step chains eliminating complements of constants); eliminate
    constants (BT1..BT4); distribute meets over joins (BT8/BT14); per
    disjunct, sort literals, fold duplicates and kill contradictions;
    extend every monomial to full support; drop duplicate sign patterns.
    """
    n = width if width is not None else max(T.variables_of(t), default=1)
    if n < 1:
        raise WidthMismatch("width must be >= 1")
    if max(T.variables_of(t), default=0) > n:
        raise WidthMismatch(f"term uses variables beyond x{n}")
    rw = Rewriter(t, apply_rule)
    _push_complements(rw)
    _eliminate_constants(rw)
    if rw.term == ONE:
        rw.do("BT6", (), forward=False, u=T.Var(1))   # 1 -> (x1∨¬(x1))
    if rw.term != ZERO:
        distribute(rw, OR, AND, "BT8", "BT14")
        _canonicalize_disjuncts(rw)
    if rw.term != ZERO:
        _extend_supports(rw, n)
        _fold_duplicates(rw)
    return parse_dnf(rw.term, n), rw.certificate()


def _complement_positions(t):
    """Positions of complements applied to non-variables, deepest first."""
    best, best_depth = None, -1
    for pos, v in T.subterms(t):
        if isinstance(v, T.Unary) and v.symbol == NOT and not isinstance(v.child, T.Var):
            d = T.depth(v)
            if d > best_depth:
                best, best_depth = pos, d
    return best


def _push_complements(rw: Rewriter) -> None:
    while True:
        pos = _complement_positions(rw.term)
        if pos is None:
            return
        v = T.subterm_at(rw.term, pos)
        inner = v.child
        if isinstance(inner, T.Unary):
            rw.do("BT17", pos)
        elif _is_or(inner):
            rw.do("BT18", pos)
        elif _is_and(inner):
            rw.do("BT19", pos)
        elif inner == ZERO:
            rw.do("BT2", pos, forward=False)   # ¬(0) -> (0∨¬(0))
            rw.do("BT6", pos)                  # -> 1
        elif inner == ONE:
            rw.do("BT3", pos, forward=False)   # ¬(1) -> (1∧¬(1))
            rw.do("BT5", pos)                  # -> 0
        else:
            raise T.NotATerm(f"cannot push complement at {T.serialize(v)}")


def _eliminate_constants(rw: Rewriter) -> None:
    while True:
        found = None
        for pos, v in T.subterms(rw.term):
            if isinstance(v, T.Binary) and (v.left in (ZERO, ONE) or
                                            v.right in (ZERO, ONE)):
                found = (pos, v)
                break
        if found is None:
            return
        pos, v = found
        if v.left not in (ZERO, ONE):
            rw.do("BT7" if v.symbol == OR else "BT8", pos)
            v = T.subterm_at(rw.term, pos)
        if v.symbol == AND:
            rw.do("BT1" if v.left == ZERO else "BT3", pos)
        else:
            rw.do("BT2" if v.left == ZERO else "BT4", pos)


def _disjunct_positions(t) -> list[T.Position]:
    out = []
    stack: list[tuple[T.Position, T.Term]] = [((), t)]
    while stack:
        pos, node = stack.pop()
        if _is_or(node):
            stack.append((pos + (2,), node.right))
            stack.append((pos + (1,), node.left))
        else:
            out.append(pos)
    return out


def _sort_conjunct(rw: Rewriter, pos: T.Position) -> None:
    comb_sort(rw, pos, AND, "BT8", "BT10", is_leaf=is_literal, key=literal_key)


def _canonicalize_disjuncts(rw: Rewriter) -> None:
    for pos in _disjunct_positions(rw.term):
        _sort_conjunct(rw, pos)
        _sweep_conjunct(rw, pos)
    _drop_zero_disjuncts(rw)


def _sweep_conjunct(rw: Rewriter, root: T.Position) -> None:
    """In a sorted literal comb, fold duplicate neighbors (BT12) and collapse
    complementary neighbors to 0 (BT5, then BT1 up to the disjunct root)."""
    pos = root
    while True:
        v = T.subterm_at(rw.term, pos)
        if is_literal(v):
            return
        a = v.left
        b = v.right if is_literal(v.right) else v.right.left
        ka, kb = literal_key(a), literal_key(b)
        if ka[0] != kb[0]:
            if is_literal(v.right):
                return
            pos = pos + (2,)
            continue
        if is_literal(v.right):
            pair = pos
        else:
            rw.do("BT10", pos)                # pair the neighbors up
            pair = pos + (1,)
        if ka == kb:
            rw.do("BT12", pair)
            if pair == pos:
                return                        # comb ended in (l∧l) -> l
            continue
        rw.do("BT5", pair)                    # (x∧¬(x)) -> 0
        if pair != pos:
            rw.do("BT1", pos)
        while pos != root:                    # ancestors are (literal∧0)
            pos = pos[:-1]
            rw.do("BT8", pos)
            rw.do("BT1", pos)
        return


def _drop_zero_disjuncts(rw: Rewriter) -> None:
    while True:
        if rw.term == ZERO:
            return
        found = None
        for pos, v in T.subterms(rw.term):
            if _is_or(v) and (v.left == ZERO or v.right == ZERO):
                found = (pos, v)
                break
        if found is None:
            return
        pos, v = found
        if v.left != ZERO:
            rw.do("BT7", pos)
        rw.do("BT2", pos)


def _monomial_signs(t: T.Term) -> dict[int, int]:
    return dict(literal_key(lit) for lit in _and_leaves(t))


def _extend_supports(rw: Rewriter, n: int) -> None:
    """Widen every monomial to full support by splitting on a missing
    variable: mu -> (1∧mu) -> ((xj∨¬(xj))∧mu) -> ((mu∧xj)∨(mu∧¬(xj))).
    Duplicates are folded after every round to keep the disjunction from
    growing past the 2^n distinct patterns."""
    while True:
        targets = []
        for pos in _disjunct_positions(rw.term):
            signs = _monomial_signs(T.subterm_at(rw.term, pos))
            missing = [j for j in range(1, n + 1) if j not in signs]
            if missing:
                targets.append((pos, missing[0]))
        if not targets:
            return
        for pos, j in targets:
            rw.do("BT3", pos, forward=False)
            rw.do("BT6", pos + (1,), forward=False, u=T.Var(j))
            rw.do("BT8", pos)
            rw.do("BT14", pos)
            _sort_conjunct(rw, pos + (1,))
            _sort_conjunct(rw, pos + (2,))
        _fold_duplicates(rw)


def _monomial_key(leaf: T.Term) -> tuple:
    """Sorted (variable, sign) pairs; on full-support monomials this orders
    by the sign pattern read as a binary number, first variable first."""
    return tuple(sorted(_monomial_signs(leaf).items()))


def _fold_duplicates(rw: Rewriter) -> None:
    """Sort the disjunct comb by monomial key and fold equal neighbors
    (identical terms, since literal order is canonical) with BT9/BT11."""
    if _is_or(rw.term):
        comb_sort(rw, (), OR, "BT7", "BT9",
                  is_leaf=lambda t: not _is_or(t), key=_monomial_key)
    pos: T.Position = ()
    while True:
        v = T.subterm_at(rw.term, pos)
        if not _is_or(v):
            return
        if _is_or(v.right):
            if v.left == v.right.left:
                rw.do("BT9", pos)
                rw.do("BT11", pos + (1,))
                continue
            pos = pos + (2,)
        else:
            if v.left == v.right:
                rw.do("BT11", pos)
            return


# -- certificate JSON ----------------------------------------------------------

def step_to_json(step: Step) -> dict:
    data = {"rule": step.rule, "pos": list(step.pos),
            "dir": "fwd" if step.forward else "rev"}
    if step.args:
        data["args"] = {k: {"term": T.serialize(v)} for k, v in step.args.items()}
    return data


def certificate_to_json(cert: Certificate) -> dict:
    return {
        "kind": "bool",
        "source": T.serialize(cert.source),
        "target": T.serialize(cert.target),
        "steps": [step_to_json(s) for s in cert.steps],
    }


def certificate_from_json(data: dict) -> Certificate:
    def step(d):
        args = {k: T.parse(v["term"], SIGNATURE) for k, v in d.get("args", {}).items()}
        return Step(d["rule"], tuple(d["pos"]), d["dir"] == "fwd", args)

    return Certificate(
        source=T.parse(data["source"], SIGNATURE),
        target=T.parse(data["target"], SIGNATURE),
        steps=tuple(step(s) for s in data["steps"]),
    )
