"""Sparse multivariate polynomials as finite maps from exponent vectors
to nonzero ring elements.

Two key flavors exist: fixed width n (every key is a length-n tuple) and
the unbounded flavor (keys are tuples whose last entry is nonzero; the
empty tuple is the constant key).  Only nonzero coefficients are stored,
which makes the representation canonical: two polynomials are equal iff
their maps are equal.
"""

from __future__ import annotations

from typing import Any, Iterable, Mapping

from .rings import Ring


class FlavorMismatch(ValueError):
    pass


class RingMismatch(ValueError):
    pass


Exponents = tuple[int, ...]


def strip_zeros(v: Iterable[int]) -> Exponents:
    out = tuple(v)
    while out and out[-1] == 0:
        out = out[:-1]
    return out


def exp_add(k: Exponents, l: Exponents, width: int | None = None) -> Exponents:
    """Componentwise sum; in the unbounded flavor the shorter vector is
    zero-extended, which preserves the nonzero-last-entry invariant."""
    if width is not None:
        if len(k) != width or len(l) != width:
            raise FlavorMismatch(f"expected width {width}, got {len(k)} and {len(l)}")
        return tuple(a + b for a, b in zip(k, l))
    if len(k) > len(l):
        k, l = l, k
    return tuple(a + b for a, b in zip(k, l)) + l[len(k):]


def grlex_key(exp: Exponents, pad: int) -> tuple:
    return (sum(exp), exp + (0,) * (pad - len(exp)))


class Poly:
    """A standard polynomial over a ring.  width=None is the unbounded
    flavor; otherwise all keys have exactly `width` entries."""

    __slots__ = ("ring", "width", "terms")

    def __init__(self, ring: Ring, terms: Mapping[Exponents, Any] | Iterable = (),
                 width: int | None = None):
        items = terms.items() if isinstance(terms, Mapping) else terms
        clean: dict[Exponents, Any] = {}
        for exp, coef in items:
            exp = tuple(exp)
            if width is None:
                if exp and exp[-1] == 0:
                    raise FlavorMismatch(f"trailing zero in key {exp}")
            elif len(exp) != width:
                raise FlavorMismatch(f"key {exp} does not have width {width}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            if coef == ring.zero:
                continue
            if exp in clean:
                raise ValueError(f"duplicate key {exp}")
            clean[exp] = coef
        self.ring = ring
        self.width = width
        self.terms = clean

    # -- constructors ----------------------------------------------------
    @classmethod
    def zero(cls, ring: Ring, width: int | None = None) -> "Poly":
        return cls(ring, {}, width)

    @classmethod
    def one(cls, ring: Ring, width: int | None = None) -> "Poly":
        return cls.constant(ring, ring.one, width)

    @classmethod
    def constant(cls, ring: Ring, r: Any, width: int | None = None) -> "Poly":
        key = () if width is None else (0,) * width
        return cls(ring, {key: r}, width)

    @classmethod
    def variable(cls, ring: Ring, i: int, width: int | None = None) -> "Poly":
        if i < 1:
            raise ValueError("variable index must be >= 1")
        if width is None:
            key = (0,) * (i - 1) + (1,)
        else:
            if i > width:
                raise FlavorMismatch(f"variable x{i} exceeds width {width}")
            key = tuple(1 if j == i - 1 else 0 for j in range(width))
        return cls(ring, {key: ring.one}, width)

    # -- ring structure ---------------------------------------------------
    def _compat(self, other: "Poly") -> None:
        if self.ring.name != other.ring.name:
            raise RingMismatch(f"{self.ring.name} vs {other.ring.name}")
        if self.width != other.width:
            raise FlavorMismatch(f"width {self.width} vs {other.width}")

    def add(self, other: "Poly") -> "Poly":
        self._compat(other)
        ring = self.ring
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            if exp in out:
                s = ring.add(out[exp], coef)
                if s == ring.zero:
                    del out[exp]
                else:
                    out[exp] = s
            else:
                out[exp] = coef
        return Poly(ring, out, self.width)

    def mul(self, other: "Poly") -> "Poly":
        self._compat(other)
        ring = self.ring
        out: dict[Exponents, Any] = {}
        for k, a in self.terms.items():
            for l, b in other.terms.items():
                exp = exp_add(k, l, self.width)
                prod = ring.mul(a, b)
                if exp in out:
                    s = ring.add(out[exp], prod)
                    if s == ring.zero:
                        del out[exp]
                    else:
                        out[exp] = s
                elif prod != ring.zero:
                    out[exp] = prod
        return Poly(ring, out, self.width)

    def neg(self) -> "Poly":
        return Poly(self.ring, {e: self.ring.neg(c) for e, c in self.terms.items()},
                    self.width)

    __add__ = add
    __mul__ = mul
    __neg__ = neg

    def __eq__(self, other) -> bool:
        return (isinstance(other, Poly) and self.ring.name == other.ring.name
                and self.width == other.width and self.terms == other.terms)

    def __hash__(self) -> int:
        return hash((self.ring.name, self.width, frozenset(self.terms.items())))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"Poly({self.ring.name}, {self.render()!r})"

    # -- flavor bridge ----------------------------------------------------
    def to_unbounded(self) -> "Poly":
        if self.width is None:
            return self
        return Poly(self.ring, {strip_zeros(e): c for e, c in self.terms.items()}, None)

    def with_width(self, width: int) -> "Poly":
        pad = {tuple(e) + (0,) * (width - len(e)): c for e, c in self.terms.items()}
        if any(len(e) > width for e in self.terms):
            raise FlavorMismatch(f"a key exceeds width {width}")
        return Poly(self.ring, pad, width)

    # -- presentation -----------------------------------------------------
    def items_sorted(self) -> list[tuple[Exponents, Any]]:
        pad = self.width if self.width is not None else \
            max((len(e) for e in self.terms), default=0)
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0], pad))

    def render(self) -> str:
        """Human form in the usual sum-of-monomials style, e.g.
        ``3 - x2^2 + x1·x3^3``; the zero polynomial prints as ``0``."""
        if not self.terms:
            return "0"
        ring = self.ring
        pieces = []
        for exp, coef in self.items_sorted():
            mono = "·".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}"
                for i, e in enumerate(exp) if e != 0
            )
            text = ring.fmt(coef)
            negative = text.startswith("-")
            if negative:
                text = text[1:]
            if mono:
                body = mono if text == "1" else f"{text}·{mono}"
            else:
                body = text
            if not pieces:
                pieces.append(("-" if negative else "") + body)
            else:
                pieces.append(("- " if negative else "+ ") + body)
        return " ".join(pieces)

    def to_json(self) -> dict:
        data = {
            "flavor": "inf" if self.width is None else "fixed",
            "terms": [{"exp": list(e), "coef": self.ring.fmt(c)}
                      for e, c in self.items_sorted()],
        }
        if self.width is not None:
            data["width"] = self.width
        return data

    @classmethod
    def from_json(cls, ring: Ring, data: dict) -> "Poly":
        width = data.get("width") if data.get("flavor") == "fixed" else None
        return cls(ring, {tuple(t["exp"]): ring.parse(t["coef"]) for t in data["terms"]},
                   width)
