"""Truncated Hahn series over a prime field, with exact rational exponents.

A series is a finite sum ``Σ c_e · t^e`` with coefficients in the field of
``p`` elements and strictly increasing rational exponents, together with an
optional *precision*: a rational ``π`` meaning the series is only known below
``t^π`` (an ``O(t^π)`` tail).  ``precision = None`` means the series is exact.
All arithmetic tracks precision pessimistically, so a term is present in a
result only when the inputs determine it.

The valuation of a series is the exponent of its lowest term when one is
known, and otherwise only a lower bound (the precision); :func:`HahnSeries.valuation`
returns a :class:`Value` or an :class:`AtLeast` accordingly.  Frobenius and
p-th roots act on exponents by ``e ↦ p·e`` and ``e ↦ e/p`` since the prime
field is fixed by ``x ↦ x^p``.

:class:`BaseField` packages the ambient coefficient data for the solvers: the
characteristic, a rank-one value group of allowed exponents, and a label for
which concrete field the run models (the perfect hull of a rational function
field or Laurent series field in characteristic ``p`` — computationally
identical at this scale — or a generic truncated Hahn field).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Union

from .errors import (
    InvalidCharacteristicError,
    PrecisionError,
    SpecFileError,
)
from .groups import OrderedGroup, Slot, is_prime, parse_rational

Term = tuple[Fraction, int]


def _min_prec(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _add_prec(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None or b is None:
        return None
    return a + b


@dataclass(frozen=True)
class Value:
    """An exactly known valuation."""

    value: Fraction


@dataclass(frozen=True)
class AtLeast:
    """A valuation only known to be at least ``bound``; ``bound = None`` means
    the series is exactly zero (valuation plus infinity)."""

    bound: Optional[Fraction]


@dataclass(frozen=True)
class HahnSeries:
    """A truncated Hahn series over the field of ``p`` elements."""

    p: int
    terms: tuple[Term, ...]
    precision: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidCharacteristicError(f"{self.p} is not prime")
        precision = None if self.precision is None else parse_rational(self.precision)
        collected: dict[Fraction, int] = {}
        for exp, coeff in self.terms:
            e = parse_rational(exp)
            c = int(coeff) % self.p
            if c == 0:
                continue
            if precision is not None and e >= precision:
                continue
            if e in collected:
                raise SpecFileError(f"duplicate exponent {e} in series terms")
            collected[e] = c
        object.__setattr__(self, "terms", tuple(sorted(collected.items())))
        object.__setattr__(self, "precision", precision)

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def make(p: int, terms, precision: Optional[Fraction] = None) -> "HahnSeries":
        """Build from any iterable of (exponent, coefficient) pairs or a dict."""
        if isinstance(terms, dict):
            terms = terms.items()
        return HahnSeries(p, tuple((parse_rational(e), c) for e, c in terms), precision)

    @staticmethod
    def _raw(p: int, terms: tuple, precision: Optional[Fraction]) -> "HahnSeries":
        """Internal fast constructor for arithmetic results whose terms are
        already canonical: sorted, duplicate-free, nonzero coefficients reduced
        mod p, every exponent below the precision bound."""
        series = object.__new__(HahnSeries)
        object.__setattr__(series, "p", p)
        object.__setattr__(series, "terms", terms)
        object.__setattr__(series, "precision", precision)
        return series

    @staticmethod
    def zero(p: int) -> "HahnSeries":
        return HahnSeries(p, ())

    @staticmethod
    def one(p: int) -> "HahnSeries":
        return HahnSeries(p, ((Fraction(0), 1),))

    @staticmethod
    def monomial(p: int, exponent, coeff: int = 1,
                 precision: Optional[Fraction] = None) -> "HahnSeries":
        return HahnSeries(p, ((parse_rational(exponent), coeff),), precision)

    # -- structure -------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.precision is None

    @property
    def is_exact_zero(self) -> bool:
        return not self.terms and self.precision is None

    def leading(self) -> Optional[Term]:
        """Lowest (exponent, coefficient) pair, or None when no term is known."""
        return self.terms[0] if self.terms else None

    def valuation(self) -> Union[Value, AtLeast]:
        if self.terms:
            return Value(self.terms[0][0])
        return AtLeast(self.precision)

    def exact_valuation(self) -> Fraction:
        """The valuation as a rational, raising when it is not pinned down."""
        if not self.terms:
            raise PrecisionError(
                "valuation is not determined: no terms below the precision bound"
            )
        return self.terms[0][0]

    def coefficient(self, exponent) -> int:
        e = parse_rational(exponent)
        for exp, coeff in self.terms:
            if exp == e:
                return coeff
        return 0

    def _known_floor(self) -> Optional[Fraction]:
        """Lower bound for the valuation used in product precision: the least
        term exponent, else the precision itself (None meaning plus infinity)."""
        return self.terms[0][0] if self.terms else self.precision

    def _same_field(self, other: "HahnSeries") -> None:
        if self.p != other.p:
            raise InvalidCharacteristicError(
                f"cannot combine series over different prime fields ({self.p} vs {other.p})"
            )

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other: "HahnSeries") -> "HahnSeries":
        if not isinstance(other, HahnSeries):
            return NotImplemented
        self._same_field(other)
        precision = _min_prec(self.precision, other.precision)
        # both term tuples are sorted and canonical: merge without hashing
        p = self.p
        left, right = self.terms, other.terms
        merged: list[Term] = []
        i = j = 0
        while i < len(left) and j < len(right):
            e1, c1 = left[i]
            e2, c2 = right[j]
            if e1 < e2:
                merged.append(left[i])
                i += 1
            elif e2 < e1:
                merged.append(right[j])
                j += 1
            else:
                c = (c1 + c2) % p
                if c:
                    merged.append((e1, c))
                i += 1
                j += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        if precision is not None:
            merged = [term for term in merged if term[0] < precision]
        return HahnSeries._raw(p, tuple(merged), precision)

    def __neg__(self) -> "HahnSeries":
        return HahnSeries._raw(
            self.p,
            tuple((e, self.p - c) for e, c in self.terms),
            self.precision,
        )

    def __sub__(self, other: "HahnSeries") -> "HahnSeries":
        if not isinstance(other, HahnSeries):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "HahnSeries":
        if isinstance(other, int):
            return HahnSeries.make(
                self.p, [(e, c * other) for e, c in self.terms], self.precision
            )
        if not isinstance(other, HahnSeries):
            return NotImplemented
        self._same_field(other)
        if self.is_exact_zero or other.is_exact_zero:
            return HahnSeries.zero(self.p)
        precision = _min_prec(
            _add_prec(self.precision, other._known_floor()),
            _add_prec(other.precision, self._known_floor()),
        )
        # accumulate over integer exponents (a common denominator of both
        # factors): rational keys are much more expensive to hash and add
        shared = 1
        for e, _ in self.terms:
            shared = lcm(shared, e.denominator)
        for e, _ in other.terms:
            shared = lcm(shared, e.denominator)
        left = [(e.numerator * (shared // e.denominator), c) for e, c in self.terms]
        right = [(e.numerator * (shared // e.denominator), c) for e, c in other.terms]
        cutoff = None if precision is None else precision * shared
        p = self.p
        acc: dict[int, int] = {}
        get = acc.get
        for e1, c1 in left:
            for e2, c2 in right:
                e = e1 + e2
                acc[e] = get(e, 0) + c1 * c2
        terms = tuple(
            (Fraction(e, shared), c % p)
            for e, c in sorted(acc.items())
            if c % p and (cutoff is None or e < cutoff)
        )
        return HahnSeries._raw(p, terms, precision)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "HahnSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("series powers need a nonnegative integer exponent")
        result = HahnSeries.one(self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def invert(self) -> "HahnSeries":
        """Multiplicative inverse via a geometric expansion off the leading
        monomial.  Exact inputs must be monomials (anything longer has an
        infinite exact inverse); truncated inputs lose ``2·v`` of precision
        where ``v`` is the leading exponent."""
        if not self.terms:
            raise PrecisionError("cannot invert a series with no determined terms")
        e0, c0 = self.terms[0]
        lead_inv = HahnSeries.monomial(self.p, -e0, pow(c0, -1, self.p))
        tail = self * lead_inv  # 1 + u with v(u) > 0
        u = tail - HahnSeries.one(self.p)
        if u.is_exact_zero:
            return lead_inv
        if u.is_exact:
            raise PrecisionError(
                "exact inverse of a multi-term series is not finitely representable; truncate first"
            )
        geo = HahnSeries.one(self.p)
        power = HahnSeries.one(self.p)
        while True:
            power = (power * (-u)).truncate(u.precision)
            if not power.terms:
                break
            geo = geo + power
        geo = HahnSeries(self.p, geo.terms, u.precision)
        return geo * lead_inv

    def frobenius(self) -> "HahnSeries":
        """The p-power map: exponents scale by ``p``, coefficients are fixed."""
        precision = None if self.precision is None else self.precision * self.p
        return HahnSeries.make(self.p, [(e * self.p, c) for e, c in self.terms], precision)

    def pth_root(self) -> "HahnSeries":
        """Inverse of Frobenius: exponents divide by ``p``."""
        precision = None if self.precision is None else self.precision / self.p
        return HahnSeries.make(self.p, [(e / self.p, c) for e, c in self.terms], precision)

    def truncate(self, bound) -> "HahnSeries":
        """Forget everything at or above ``t^bound``."""
        b = parse_rational(bound)
        return HahnSeries.make(self.p, self.terms, _min_prec(self.precision, b))

    # -- presentation ----------------------------------------------------------

    def __str__(self) -> str:
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            else:
                head = "" if c == 1 else f"{c}*"
                parts.append(f"{head}t^{e}")
        if self.precision is not None:
            parts.append(f"O(t^{self.precision})")
        return " + ".join(parts) if parts else "0"


def artin_schreier_map(x: HahnSeries) -> HahnSeries:
    """The additive map ``x ↦ x^p − x`` whose cokernel the degree-p equations
    live in."""
    return x.frobenius() - x


_TERM_RE = re.compile(r"^(?:(\d+)\s*\*?\s*)?t(?:\^(-?\d+(?:/\d+)?))?$")
_BIG_O_RE = re.compile(r"^O\(\s*t\^(-?\d+(?:/\d+)?)\s*\)$")


def series_from_literal(p: int, text: str) -> HahnSeries:
    """Parse an additive series literal.

    Grammar: terms joined by ``+``; each term is ``t^R``, ``c*t^R`` (the ``*``
    optional), a bare nonnegative integer constant, or a tail ``O(t^R)``, with
    ``R`` a rational like ``-1/2``.  A bare ``t`` means ``t^1``.
    """
    terms: dict[Fraction, int] = {}
    precision: Optional[Fraction] = None
    body = text.strip()
    if body in ("0", ""):
        return HahnSeries.zero(p)
    for raw in body.split("+"):
        part = raw.strip()
        if not part:
            raise SpecFileError(f"empty term in series literal {text!r}")
        m = _BIG_O_RE.match(part)
        if m:
            precision = _min_prec(precision, parse_rational(m.group(1)))
            continue
        m = _TERM_RE.match(part)
        if m:
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = parse_rational(m.group(2)) if m.group(2) else Fraction(1)
        else:
            try:
                coeff, exp = int(part), Fraction(0)
            except ValueError:
                raise SpecFileError(f"cannot parse series term {part!r}") from None
        terms[exp] = (terms.get(exp, 0) + coeff) % p
    return HahnSeries.make(p, terms, precision)


_FIELD_KINDS = (
    "perfect_hull_rational_function",
    "perfect_hull_laurent",
    "truncated_hahn",
)


@dataclass(frozen=True)
class BaseField:
    """Ambient data for a rank-one ground field of characteristic ``p``: which
    concrete field the run models, and the group of allowed exponents."""

    kind: str
    p: int
    group: OrderedGroup

    def __post_init__(self) -> None:
        if self.kind not in _FIELD_KINDS:
            raise SpecFileError(
                f"unknown base field kind {self.kind!r}; expected one of {_FIELD_KINDS}"
            )
        if not is_prime(self.p):
            raise InvalidCharacteristicError(f"{self.p} is not prime")
        if self.group.rank != 1:
            raise SpecFileError("base fields carry a rank-one exponent group")

    @staticmethod
    def make(kind: str, p: int, group: Optional[OrderedGroup] = None) -> "BaseField":
        if group is None:
            if kind == "truncated_hahn":
                group = OrderedGroup((Slot((Fraction(1),), divisible_all=True),))
            else:
                group = OrderedGroup((Slot((Fraction(1),), frozenset({p})),))
        return BaseField(kind, p, group)

    def contains_exponent(self, exponent) -> bool:
        return self.group.slots[0].contains(parse_rational(exponent))

    def monomial(self, exponent, coeff: int = 1) -> HahnSeries:
        return HahnSeries.monomial(self.p, exponent, coeff)

    def series(self, text: str) -> HahnSeries:
        parsed = series_from_literal(self.p, text)
        for exponent, _ in parsed.terms:
            if not self.contains_exponent(exponent):
                raise SpecFileError(
                    f"exponent {exponent} is outside the value group "
                    f"{self.group.describe()} of this base field"
                )
        return parsed

    def to_json(self) -> dict:
        return {"kind": self.kind, "group": self.group.describe()}

    @staticmethod
    def from_json(data, p: int) -> "BaseField":
        if not isinstance(data, dict):
            raise SpecFileError("base field description must be an object")
        kind = data.get("kind")
        if not isinstance(kind, str):
            raise SpecFileError('base field needs a "kind" string')
        group = None
        if "group" in data:
            from .groups import group_from_json

            group = group_from_json(data["group"])
        return BaseField.make(kind, p, group)
