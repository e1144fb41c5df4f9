"""Arithmetic in a degree-p equation extension, over truncated coefficients.

Elements of the extension generated by a root ``θ`` of ``X^p − X = a`` are
stored on the power basis ``1, θ, …, θ^{p−1}`` with :class:`~defectlab.series.HahnSeries`
coefficients.  Multiplication reduces with ``θ^p = θ + a``; the order-p
automorphism acts by ``θ ↦ θ + j``.  The trace form is diagonal in this basis:
``Tr(θ^i) = 0`` for ``i < p−1`` and ``Tr(θ^{p−1}) = −1``, so the trace of an
element is the negative of its top coefficient; :meth:`ExtensionElement.conjugate_trace`
recomputes it as the orbit sum as a safety check.

Valuations of extension elements are computed through the Taylor expansion at
an approximation step ``c`` of the root: writing ``x = Σ_i d_i (θ−c)^i`` (an
exact polynomial identity via Hasse–Schmidt coefficients, valid in any
characteristic) and knowing ``v(θ−c)`` exactly, ``v(x)`` is the minimum of
``v(d_i) + i·v(θ−c)`` whenever that minimum is attained by a single term and
no precision-limited coefficient could undercut it.  Any step deep enough to
separate the terms certifies the value; steps are tried deepest first and all
successful steps are required to agree.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional, Sequence

from .errors import (
    CoherenceError,
    IndeterminateValuationError,
    InvalidCharacteristicError,
)
from .series import AtLeast, HahnSeries, Value


@dataclass(frozen=True)
class ExtensionElement:
    """An element ``Σ coeffs[i]·θ^i`` of a degree-p equation extension.

    ``extension`` only needs two attributes: the prime ``p`` and the equation
    right-hand side ``rhs`` (the series ``a``)."""

    extension: object
    coeffs: tuple[HahnSeries, ...]

    def __post_init__(self) -> None:
        p = self.extension.p
        coeffs = tuple(self.coeffs)
        if len(coeffs) > p:
            raise ValueError(f"at most {p} basis coefficients expected")
        coeffs = coeffs + tuple(HahnSeries.zero(p) for _ in range(p - len(coeffs)))
        for c in coeffs:
            if c.p != p:
                raise InvalidCharacteristicError(
                    "coefficient characteristic differs from the extension's"
                )
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def constant(extension, series: HahnSeries) -> "ExtensionElement":
        return ExtensionElement(extension, (series,))

    @staticmethod
    def theta(extension) -> "ExtensionElement":
        p = extension.p
        return ExtensionElement(extension, (HahnSeries.zero(p), HahnSeries.one(p)))

    @staticmethod
    def zero(extension) -> "ExtensionElement":
        return ExtensionElement(extension, ())

    # -- structure -------------------------------------------------------------

    @property
    def p(self) -> int:
        return self.extension.p

    @property
    def is_exact_zero(self) -> bool:
        return all(c.is_exact_zero for c in self.coeffs)

    @property
    def in_base_field(self) -> bool:
        """Whether every θ-coefficient is exactly zero."""
        return all(c.is_exact_zero for c in self.coeffs[1:])

    def _same_extension(self, other: "ExtensionElement") -> None:
        if self.extension is not other.extension and self.extension != other.extension:
            raise InvalidCharacteristicError("elements live in different extensions")

    # -- linear arithmetic -------------------------------------------------------

    def __add__(self, other: "ExtensionElement") -> "ExtensionElement":
        if not isinstance(other, ExtensionElement):
            return NotImplemented
        self._same_extension(other)
        return ExtensionElement(
            self.extension, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "ExtensionElement":
        return ExtensionElement(self.extension, tuple(-c for c in self.coeffs))

    def __sub__(self, other: "ExtensionElement") -> "ExtensionElement":
        if not isinstance(other, ExtensionElement):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "ExtensionElement":
        if isinstance(other, (int, HahnSeries)):
            return ExtensionElement(self.extension, tuple(c * other for c in self.coeffs))
        if not isinstance(other, ExtensionElement):
            return NotImplemented
        self._same_extension(other)
        p = self.p
        raw = [HahnSeries.zero(p) for _ in range(2 * p - 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_exact_zero:
                continue
            for j, b in enumerate(other.coeffs):
                if b.is_exact_zero:
                    continue
                raw[i + j] = raw[i + j] + a * b
        # reduce with θ^p = θ + a, highest degree first
        rhs = self.extension.rhs
        for d in range(2 * p - 2, p - 1, -1):
            top = raw[d]
            if top.is_exact_zero:
                continue
            raw[d] = HahnSeries.zero(p)
            raw[d - p + 1] = raw[d - p + 1] + top
            raw[d - p] = raw[d - p] + top * rhs
        return ExtensionElement(self.extension, tuple(raw[:p]))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExtensionElement":
        if not isinstance(n, int) or n < 0:
            raise ValueError("powers need a nonnegative integer exponent")
        result = ExtensionElement.constant(self.extension, HahnSeries.one(self.p))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- Galois action and trace ---------------------------------------------------

    def galois(self, power: int = 1) -> "ExtensionElement":
        """Image under the automorphism sending ``θ`` to ``θ + power``."""
        p = self.p
        j = power % p
        if j == 0:
            return self
        out = [HahnSeries.zero(p) for _ in range(p)]
        for i, coeff in enumerate(self.coeffs):
            if coeff.is_exact_zero:
                continue
            scale = 1
            for m in range(i, -1, -1):
                out[m] = out[m] + coeff * ((comb(i, m) * scale) % p)
                scale = (scale * j) % p
        return ExtensionElement(self.extension, tuple(out))

    def trace(self) -> HahnSeries:
        """Trace to the base field: ``−coeffs[p−1]`` by the power-sum table."""
        return self.coeffs[self.p - 1] * (self.p - 1)

    def conjugate_trace(self) -> HahnSeries:
        """Trace recomputed as the sum over the automorphism orbit; checks that
        the θ-components cancel and that the result matches :meth:`trace`."""
        total = ExtensionElement.zero(self.extension)
        for j in range(self.p):
            total = total + self.galois(j)
        for c in total.coeffs[1:]:
            if c.terms:
                raise CoherenceError("orbit sum has a nonzero θ-component")
        if (total.coeffs[0] - self.trace()).terms:
            raise CoherenceError("orbit-sum trace disagrees with the table trace")
        return total.coeffs[0]

    # -- valuations via Taylor expansion -------------------------------------------

    def taylor_coefficients(self, center: HahnSeries) -> tuple[HahnSeries, ...]:
        """Coefficients ``d_i`` with ``x = Σ d_i (θ − center)^i`` exactly:
        ``d_i = Σ_{m≥i} C(m,i)·coeffs[m]·center^{m−i}``."""
        p = self.p
        powers = [HahnSeries.one(p)]
        for _ in range(p - 1):
            powers.append(powers[-1] * center)
        out = []
        for i in range(p):
            acc = HahnSeries.zero(p)
            for m in range(i, p):
                acc = acc + self.coeffs[m] * (comb(m, i) % p) * powers[m - i]
            out.append(acc)
        return tuple(out)


def taylor_valuation(
    element: ExtensionElement,
    steps: Sequence[tuple[HahnSeries, Fraction]],
) -> Optional[Fraction]:
    """Valuation of an extension element from root-approximation steps.

    ``steps`` is a sequence of ``(c, v(θ−c))`` pairs, shallowest first.  Returns
    the exact valuation, or None for the exactly-zero element.  Raises
    :class:`IndeterminateValuationError` when no step separates the Taylor
    terms well enough to certify the minimum."""
    if element.is_exact_zero:
        return None
    results: list[Fraction] = []
    for center, beta in reversed(list(steps)):
        candidates: list[Fraction] = []
        bounds: list[Fraction] = []
        for i, coeff in enumerate(element.taylor_coefficients(center)):
            val = coeff.valuation()
            if isinstance(val, Value):
                candidates.append(val.value + i * beta)
            elif val.bound is not None:
                bounds.append(val.bound + i * beta)
        if not candidates:
            continue
        lowest = min(candidates)
        if candidates.count(lowest) > 1:
            continue
        if any(b <= lowest for b in bounds):
            continue
        results.append(lowest)
    if not results:
        raise IndeterminateValuationError(
            "no approximation step separates the Taylor terms of this element"
        )
    if any(r != results[0] for r in results):
        raise CoherenceError("different approximation steps certify different valuations")
    return results[0]
