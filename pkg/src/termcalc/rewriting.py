"""Shared machinery for certified rewriting.

A certificate is a replayable list of steps; each step names a rule, the
position of the redex, the direction, and (only where the reverse
direction cannot be inferred from the redex) extra bindings.  Certificates
are verified by sequential replay, never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Mapping

from . import terms as T


class RedexMismatch(T.TermError):
    """The rule's pattern does not match the subterm at the position."""


@dataclass(frozen=True)
class Step:
    rule: str
    pos: T.Position
    forward: bool = True
    args: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class Certificate:
    source: T.Term
    target: T.Term
    steps: tuple[Step, ...]


@dataclass
class ReplayResult:
    ok: bool
    failed_step: int | None = None
    reason: str | None = None
    final: T.Term | None = None


ApplyFn = Callable[[T.Term, Step], T.Term]


def replay(cert: Certificate, apply: ApplyFn) -> ReplayResult:
    cur = cert.source
    for i, step in enumerate(cert.steps):
        try:
            cur = apply(cur, step)
        except T.TermError as exc:
            return ReplayResult(False, i, str(exc))
    if cur != cert.target:
        return ReplayResult(False, len(cert.steps),
                            f"replay ends at {T.serialize(cur)}, not the target", cur)
    return ReplayResult(True, final=cur)


class Rewriter:
    """Builds a certificate while keeping the current term in sync; every
    recorded step has already been applied, so the chain replays by
    construction."""

    def __init__(self, term: T.Term, apply: ApplyFn):
        self.source = term
        self.term = term
        self.apply = apply
        self.steps: list[Step] = []

    def do(self, rule: str, pos: T.Position, forward: bool = True, **args) -> None:
        step = Step(rule, tuple(pos), forward, args)
        self.term = self.apply(self.term, step)
        self.steps.append(step)

    def certificate(self) -> Certificate:
        return Certificate(self.source, self.term, tuple(self.steps))


def reverse_certificate(cert: Certificate, apply: ApplyFn,
                        reverse_args: Callable[[Step, T.Term], dict]) -> Certificate:
    """Certificate for target -> source.  `reverse_args` supplies, given a
    forward step and the redex it consumed, the bindings its reversal
    needs (empty for rules whose reverse is inferable)."""
    states = [cert.source]
    for step in cert.steps:
        states.append(apply(states[-1], step))
    if states[-1] != cert.target:
        raise RedexMismatch("certificate does not reach its target")
    out = []
    for step, before in zip(reversed(cert.steps), reversed(states[:-1])):
        args = {}
        if step.forward:
            args = reverse_args(step, T.subterm_at(before, step.pos))
        out.append(Step(step.rule, step.pos, not step.forward, args))
    return Certificate(cert.target, cert.source, tuple(out))


def concat(first: Certificate, second: Certificate) -> Certificate:
    if first.target != second.source:
        raise RedexMismatch("certificates do not compose")
    return Certificate(first.source, second.target, first.steps + second.steps)


# -- generic rewriting strategies ----------------------------------------

def _expansion_weight(t: T.Term, plus: str, times: str) -> int:
    """Multiplicative size measure: additions add, multiplications multiply,
    everything else counts 2.  Strictly decreases under one distribution."""
    if isinstance(t, T.Binary):
        if t.symbol == plus:
            return _expansion_weight(t.left, plus, times) + \
                _expansion_weight(t.right, plus, times) + 1
        if t.symbol == times:
            return _expansion_weight(t.left, plus, times) * \
                _expansion_weight(t.right, plus, times)
    return 2


def distribute(rw: Rewriter, plus: str, times: str,
               swap_rule: str, dist_rule: str) -> None:
    """Eliminate every product with an additive factor, deepest redex first
    (leftmost position among the deepest).  Descent is asserted on the pair
    (expansion weight, pending-swap flag), lexicographically."""

    def is_plus(t):
        return isinstance(t, T.Binary) and t.symbol == plus

    def deepest_redex(term):
        # one post-order pass computing depths; preorder tie-break falls out
        # of taking strict improvements only
        best_pos, best_depth, best_node = None, -1, None

        def walk(node, pos):
            nonlocal best_pos, best_depth, best_node
            kids = T.children(node)
            d = 1 + max((walk(c, pos + (i + 1,)) for i, c in enumerate(kids)),
                        default=-1) if kids else 0
            if isinstance(node, T.Binary) and node.symbol == times and \
                    (is_plus(node.left) or is_plus(node.right)) and d > best_depth:
                best_pos, best_depth, best_node = pos, d, node
            return d

        walk(term, ())
        return best_pos, best_node

    while True:
        pos, v = deepest_redex(rw.term)
        if pos is None:
            return
        before = _expansion_weight(rw.term, plus, times)
        if not is_plus(v.right):
            rw.do(swap_rule, pos)
        rw.do(dist_rule, pos)
        after = _expansion_weight(rw.term, plus, times)
        if after >= before:
            raise AssertionError("distribution failed to decrease the measure")


_LEAF, _NODE = 0, 1


def comb_sort(rw: Rewriter, pos: T.Position, op: str,
              swap_rule: str, assoc_rule: str,
              is_leaf: Callable[[T.Term], bool],
              key: Callable[[T.Term], Any]) -> None:
    """Rewrite the op-tree at pos into a right-nested comb whose leaves are
    in nondecreasing key order, using only the commutativity and
    associativity rules of the operation.

    The sort is driven by a mutable mirror of the tree carrying each
    subtree's minimum key, so the term itself is never rescanned; every
    emitted rule application updates the mirror in lockstep.
    """
    top = T.subterm_at(rw.term, pos)
    if is_leaf(top):
        return
    mirror = _build_mirror(top, is_leaf, key)
    # work stack: state 0 sorts the node, state 1 resumes once its left
    # child is a sorted comb (rotate that comb's first leaf to the top)
    stack = [(tuple(pos), mirror, 0)]
    while stack:
        at, m, state = stack.pop()
        if state == 1:
            left, right = m[2], m[3]
            rw.do(assoc_rule, at, forward=False)
            rest = [_NODE, min(left[3][1], right[1]), left[3], right]
            m[2], m[3] = left[2], rest
            stack.append((at + (2,), rest, 0))
            continue
        if m[0] == _LEAF:
            continue
        low = m[1]
        left, right = m[2], m[3]
        if left[0] == _LEAF and left[1] == low:
            stack.append((at + (2,), right, 0))
            continue
        if right[0] == _LEAF and right[1] == low:
            rw.do(swap_rule, at)
            m[2], m[3] = right, left
            stack.append((at + (2,), left, 0))
            continue
        if left[1] != low:
            rw.do(swap_rule, at)
            m[2], m[3] = right, left
            left = m[2]
        stack.append((at, m, 1))
        stack.append((at + (1,), left, 0))


def _build_mirror(t: T.Term, is_leaf, key):
    """Mirror node: [tag, min_key, left, right] or [tag, key] for leaves."""
    results: list[list] = []
    stack = [(t, False)]
    while stack:
        node, expanded = stack.pop()
        if is_leaf(node):
            results.append([_LEAF, key(node)])
        elif not expanded:
            stack.append((node, True))
            stack.append((node.right, False))
            stack.append((node.left, False))
        else:
            right = results.pop()
            left = results.pop()
            results.append([_NODE, min(left[1], right[1]), left, right])
    return results[0]
