"""Final and initial segments of an ordered group, and segment-valued ideals.

A final segment of a group of rank ``k`` is stored as an *extended boundary
key*: a ``(k+1)``-tuple of tagged entries — minus infinity, a finite rational,
or plus infinity per position — compared lexicographically against the
element's coordinates (padded with a trailing zero).  An element belongs to a
final segment when its padded coordinate tuple is strictly greater than the
key, and to an initial segment when it is strictly smaller.  This single
representation covers every cut this package needs:

* ``{γ ≥ β}`` and ``{γ > β}`` for a boundary ``β`` in the group or its
  divisible hull (full-rank keys, closed vs. open encoded by the pad entry);
* ``{γ > H_j}`` for a convex subgroup ``H_j`` (zero prefix of length ``j``);
* shifted-coset cuts ``{γ : prefix_j(γ) > prefix_j(β)}`` written ``>β+Hj``
  (respectively ``>=β+Hj`` for the upward closure of the coset).

Keys are canonicalized on construction: the first coordinate that falls
outside its slot truncates the key, discrete-slot cuts are closed at the
nearest slot element, and dense-slot cuts without a least (resp. greatest)
member stay open.  Canonical keys are unique per segment, so equality and
inclusion of segments reduce to tuple comparisons, and scaling and shifting
act entrywise on keys.

Ideals of the valuation ring are final segments of the positive cone; powers,
idempotency, prime detection, and the scale-invariance classification used to
recognize independent-defect jumps all live here.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import (
    CoherenceError,
    EmptySegmentError,
    GroupMismatchError,
    InvalidSegmentError,
    MalformedElementError,
    SpecFileError,
    UnrepresentableCutError,
)
from .groups import (
    ConvexSubgroup,
    GroupElement,
    OrderedGroup,
    Slot,
    coerce_element,
    parse_rational,
)

Entry = tuple[int, Fraction]
Key = tuple[Entry, ...]

NEG: Entry = (-1, Fraction(0))
POS: Entry = (1, Fraction(0))


def _fin(q) -> Entry:
    return (0, parse_rational(q))


def _extend(element: GroupElement) -> Key:
    return tuple((0, c) for c in element.coords) + ((0, Fraction(0)),)


def _hull_coords(group: OrderedGroup, point) -> tuple[Fraction, ...]:
    """Coordinates of a point of the divisible hull: a group element, a
    coordinate sequence, or a single rational in rank one.  Coordinates are
    not required to lie in the slots."""
    if isinstance(point, GroupElement):
        if point.group != group:
            raise GroupMismatchError("point belongs to a different group")
        return point.coords
    if isinstance(point, (list, tuple)):
        coords = tuple(parse_rational(c) for c in point)
    else:
        coords = (parse_rational(point),)
    if len(coords) != group.rank:
        raise MalformedElementError(
            f"expected {group.rank} coordinates, got {len(coords)}"
        )
    return coords


def _negate_entry(entry: Entry) -> Entry:
    sign, q = entry
    return (-sign, -q)


def _canonical_key(group: OrderedGroup, key: Key, final: bool) -> Key:
    """Reduce an arbitrary extended boundary key to the unique canonical key
    describing the same segment.  Raises ``UnrepresentableCutError`` when the
    key describes the whole group."""
    k = group.rank
    if len(key) != k + 1:
        raise MalformedElementError(f"key must have {k + 1} entries")
    prefix: list[Fraction] = []
    form: Optional[str] = None
    for i, (sign, q) in enumerate(key):
        if i < k and sign == 0:
            prefix.append(q)
            if group.slots[i].contains(q):
                continue
            form = "foreign"
            break
        if i == k and sign == 0:
            sign = (-1 if q < 0 else 1)
        if final:
            form = "closed" if sign < 0 else "open"
        else:
            form = "closed" if sign > 0 else "open"
        break
    assert form is not None
    if form == "foreign":
        slot = group.slots[len(prefix) - 1]
        if slot.is_dense:
            form = "open"
        else:
            prefix[-1] = slot.next_above(prefix[-1]) if final else slot.prev_below(prefix[-1])
            form = "closed"
    elif form == "open" and prefix:
        slot = group.slots[len(prefix) - 1]
        if not slot.is_dense:
            prefix[-1] = slot.next_above(prefix[-1]) if final else slot.prev_below(prefix[-1])
            form = "closed"
    if form == "closed" and not prefix:
        raise UnrepresentableCutError("the whole group is not a representable segment")
    if final:
        tail = NEG if form == "closed" else POS
    else:
        tail = POS if form == "closed" else NEG
    return tuple((0, c) for c in prefix) + (tail,) * (k + 1 - len(prefix))


def _decode(key: Key, final: bool) -> tuple[str, int, tuple[Fraction, ...]]:
    """Split a canonical key into (form, level, boundary prefix)."""
    prefix: list[Fraction] = []
    for sign, q in key:
        if sign == 0:
            prefix.append(q)
            continue
        if final:
            form = "closed" if sign < 0 else "open"
        else:
            form = "closed" if sign > 0 else "open"
        return form, len(prefix), tuple(prefix)
    raise AssertionError("canonical keys always end with a signed tail")


def _render_point(coords: Sequence[Fraction]) -> str:
    if len(coords) == 1:
        return str(coords[0])
    return "(" + ",".join(str(c) for c in coords) + ")"


_COSET_RE = re.compile(r"^(?:(.+)\+)?H(\d+)$")


def _parse_point_text(text: str) -> tuple[Fraction, ...]:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
        parts = [p for p in (s.strip() for s in body.split(",")) if p]
        if not parts:
            raise SpecFileError(f"empty coordinate tuple in segment literal {text!r}")
        return tuple(parse_rational(p) for p in parts)
    return (parse_rational(body),)


def _parse_literal(group: OrderedGroup, text: str, final: bool):
    """Shared parser for segment literals.

    Final segments: ``empty``, ``>=β``, ``>β``, ``>Hj``, ``>β+Hj``, ``>=β+Hj``.
    Initial segments mirror these with ``<`` and ``<=``.  A boundary ``β`` is a
    rational (rank one) or a tuple ``(r1,...,rj)``; for coset forms it may have
    length ``j`` or full rank (extra coordinates are ignored, since only the
    first ``j`` matter).  Boundaries may lie in the divisible hull.
    """
    raw = text.strip()
    if raw == "empty":
        level, prefix, closed = 0, (), False
    else:
        ops = (">=", ">") if final else ("<=", "<")
        if raw.startswith(ops[0]):
            closed, rest = True, raw[len(ops[0]):].strip()
        elif raw.startswith(ops[1]):
            closed, rest = False, raw[len(ops[1]):].strip()
        else:
            side = "final" if final else "initial"
            raise SpecFileError(f"cannot parse {side} segment literal {text!r}")
        m = _COSET_RE.match(rest)
        if m:
            point_text = (m.group(1) or "").strip()
            level_text = m.group(2)
        else:
            point_text, level_text = rest, None
        if level_text is not None:
            level = int(level_text)
            if level > group.rank:
                raise SpecFileError(
                    f"H{level} does not exist in a rank-{group.rank} group"
                )
            if point_text:
                point = _parse_point_text(point_text)
                if len(point) < level:
                    raise SpecFileError(
                        f"boundary {point_text!r} has fewer than {level} coordinates"
                    )
                prefix = point[:level]
            else:
                prefix = (Fraction(0),) * level
        else:
            point = _parse_point_text(point_text)
            if len(point) == 1 and group.rank != 1:
                raise SpecFileError(
                    f"boundary {point_text!r} needs {group.rank} coordinates"
                )
            if len(point) != group.rank:
                raise SpecFileError(
                    f"boundary {point_text!r} has {len(point)} coordinates, expected {group.rank}"
                )
            level, prefix = group.rank, point
    k = group.rank
    if final:
        tail = NEG if closed else POS
    else:
        tail = POS if closed else NEG
    key = tuple((0, c) for c in prefix) + (tail,) * (k + 1 - level)
    return key


@dataclass(frozen=True)
class FinalSegment:
    """An upward-closed subset of an ordered group, canonical on construction."""

    group: OrderedGroup
    key: Key

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", _canonical_key(self.group, tuple(self.key), final=True))

    # -- membership and shape ------------------------------------------------

    def contains(self, element) -> bool:
        el = coerce_element(self.group, element)
        return _extend(el) > self.key

    @property
    def is_empty(self) -> bool:
        return self.key[0] == POS

    @property
    def is_positive(self) -> bool:
        """Whether the segment lies inside the strictly positive cone."""
        return self.key >= positive_cone(self.group).key

    def decompose(self) -> tuple[str, int, tuple[Fraction, ...]]:
        """Canonical (form, level, boundary) triple; form is "open" or "closed"."""
        return _decode(self.key, final=True)

    def min_element(self) -> Optional[GroupElement]:
        """The least member, when one exists (full-rank closed cuts only)."""
        form, level, prefix = self.decompose()
        if form == "closed" and level == self.group.rank:
            return GroupElement(self.group, prefix)
        return None

    # -- segment calculus ----------------------------------------------------

    def _same_group(self, other) -> None:
        if self.group != other.group:
            raise GroupMismatchError("segments belong to different groups")

    def is_subset(self, other: "FinalSegment") -> bool:
        self._same_group(other)
        return self.key >= other.key

    def complement(self) -> "InitialSegment":
        """The initial segment of everything outside this final segment."""
        return InitialSegment(self.group, self.key)

    def negate(self) -> "InitialSegment":
        """Pointwise negation ``{-γ : γ ∈ S}``, an initial segment."""
        return InitialSegment(self.group, tuple(_negate_entry(e) for e in self.key))

    def shift(self, point) -> "FinalSegment":
        """Translate by a point of the group or its divisible hull."""
        coords = _hull_coords(self.group, point)
        key = tuple(
            (0, q + coords[i]) if sign == 0 and i < self.group.rank else (sign, q)
            for i, (sign, q) in enumerate(self.key)
        )
        return FinalSegment(self.group, key)

    def scale(self, multiplier: int) -> "FinalSegment":
        """Upward closure of ``{m·γ : γ ∈ S}`` for a positive integer ``m``.

        For an ideal's value set this is exactly the value set of the m-th
        ideal power, since the least of m summands bounds their mean."""
        if not isinstance(multiplier, int) or multiplier < 1:
            raise ValueError("scale multiplier must be a positive integer")
        key = tuple((sign, q * multiplier) for sign, q in self.key)
        return FinalSegment(self.group, key)

    def restrict_positive(self) -> "FinalSegment":
        """Intersection with the strictly positive cone."""
        return FinalSegment(self.group, max(self.key, positive_cone(self.group).key))

    # -- presentation ----------------------------------------------------------

    def to_literal(self) -> str:
        form, level, prefix = self.decompose()
        if level == 0:
            return "empty"
        op = ">=" if form == "closed" else ">"
        if level == self.group.rank:
            return f"{op}{_render_point(prefix)}"
        if form == "open" and all(c == 0 for c in prefix):
            return f">H{level}"
        return f"{op}{_render_point(prefix)}+H{level}"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"FinalSegment({self.group.describe()}, {self.to_literal()!r})"

    @staticmethod
    def from_literal(group: OrderedGroup, text: str) -> "FinalSegment":
        return FinalSegment(group, _parse_literal(group, text, final=True))


@dataclass(frozen=True)
class InitialSegment:
    """A downward-closed subset of an ordered group, canonical on construction."""

    group: OrderedGroup
    key: Key

    def __post_init__(self) -> None:
        object.__setattr__(self, "key", _canonical_key(self.group, tuple(self.key), final=False))

    def contains(self, element) -> bool:
        el = coerce_element(self.group, element)
        return _extend(el) < self.key

    @property
    def is_empty(self) -> bool:
        return self.key[0] == NEG

    def decompose(self) -> tuple[str, int, tuple[Fraction, ...]]:
        return _decode(self.key, final=False)

    def max_element(self) -> Optional[GroupElement]:
        form, level, prefix = self.decompose()
        if form == "closed" and level == self.group.rank:
            return GroupElement(self.group, prefix)
        return None

    def _same_group(self, other) -> None:
        if self.group != other.group:
            raise GroupMismatchError("segments belong to different groups")

    def is_subset(self, other: "InitialSegment") -> bool:
        self._same_group(other)
        return self.key <= other.key

    def complement(self) -> FinalSegment:
        return FinalSegment(self.group, self.key)

    def negate(self) -> FinalSegment:
        return FinalSegment(self.group, tuple(_negate_entry(e) for e in self.key))

    def shift(self, point) -> "InitialSegment":
        coords = _hull_coords(self.group, point)
        key = tuple(
            (0, q + coords[i]) if sign == 0 and i < self.group.rank else (sign, q)
            for i, (sign, q) in enumerate(self.key)
        )
        return InitialSegment(self.group, key)

    def scale(self, multiplier: int) -> "InitialSegment":
        """Downward closure of ``{m·γ : γ ∈ S}`` for a positive integer ``m``."""
        if not isinstance(multiplier, int) or multiplier < 1:
            raise ValueError("scale multiplier must be a positive integer")
        key = tuple((sign, q * multiplier) for sign, q in self.key)
        return InitialSegment(self.group, key)

    def to_literal(self) -> str:
        form, level, prefix = self.decompose()
        if level == 0:
            return "empty"
        op = "<=" if form == "closed" else "<"
        if level == self.group.rank:
            return f"{op}{_render_point(prefix)}"
        if form == "open" and all(c == 0 for c in prefix):
            return f"<H{level}"
        return f"{op}{_render_point(prefix)}+H{level}"

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"InitialSegment({self.group.describe()}, {self.to_literal()!r})"

    @staticmethod
    def from_literal(group: OrderedGroup, text: str) -> "InitialSegment":
        return InitialSegment(group, _parse_literal(group, text, final=False))


# -- constructors -------------------------------------------------------------


def final_above(group: OrderedGroup, point, strict: bool = True) -> FinalSegment:
    """``{γ > point}`` (or ``≥`` when not strict) for a hull point."""
    coords = _hull_coords(group, point)
    key = tuple((0, c) for c in coords) + ((POS if strict else NEG),)
    return FinalSegment(group, key)


def initial_below(group: OrderedGroup, point, strict: bool = True) -> InitialSegment:
    """``{γ < point}`` (or ``≤`` when not strict) for a hull point."""
    coords = _hull_coords(group, point)
    key = tuple((0, c) for c in coords) + ((NEG if strict else POS),)
    return InitialSegment(group, key)


def above_subgroup(group: OrderedGroup, level: int) -> FinalSegment:
    """``{γ : γ > h for every h ∈ H_level}``."""
    if not 0 <= level <= group.rank:
        raise MalformedElementError(f"no convex subgroup H{level} in rank {group.rank}")
    key = ((0, Fraction(0)),) * level + (POS,) * (group.rank + 1 - level)
    return FinalSegment(group, key)


def below_subgroup(group: OrderedGroup, level: int) -> InitialSegment:
    """``{γ : γ < h for every h ∈ H_level}``."""
    if not 0 <= level <= group.rank:
        raise MalformedElementError(f"no convex subgroup H{level} in rank {group.rank}")
    key = ((0, Fraction(0)),) * level + (NEG,) * (group.rank + 1 - level)
    return InitialSegment(group, key)


def positive_cone(group: OrderedGroup) -> FinalSegment:
    return above_subgroup(group, group.rank)


def empty_final(group: OrderedGroup) -> FinalSegment:
    return FinalSegment(group, (POS,) * (group.rank + 1))


def empty_initial(group: OrderedGroup) -> InitialSegment:
    return InitialSegment(group, (NEG,) * (group.rank + 1))


def upward_closure(group: OrderedGroup, elements: Iterable) -> FinalSegment:
    """Smallest final segment containing the given group elements."""
    best: Optional[GroupElement] = None
    for value in elements:
        el = coerce_element(group, value)
        if best is None or el < best:
            best = el
    if best is None:
        return empty_final(group)
    return final_above(group, best, strict=False)


def downward_closure(group: OrderedGroup, elements: Iterable) -> InitialSegment:
    """Smallest initial segment containing the given group elements."""
    best: Optional[GroupElement] = None
    for value in elements:
        el = coerce_element(group, value)
        if best is None or el > best:
            best = el
    if best is None:
        return empty_initial(group)
    return initial_below(group, best, strict=False)


# -- witness search -----------------------------------------------------------


def _slot_element_between(slot: Slot, lo: Entry, hi: Entry) -> Optional[Fraction]:
    """A slot element strictly inside the open interval (lo, hi), if any."""
    if lo >= hi or lo[0] > 0 or hi[0] < 0:
        return None
    g = slot.generator_gcd
    if lo[0] < 0 and hi[0] > 0:
        return Fraction(0)
    if lo[0] < 0:
        return g * (math.ceil(hi[1] / g) - 1)
    if hi[0] > 0:
        return g * (math.floor(lo[1] / g) + 1)
    a, b = lo[1], hi[1]
    if a >= b:
        return None
    if not slot.is_dense:
        x = slot.next_above(a)
        return x if x < b else None
    if slot.divisible_all:
        return (a + b) / 2
    p = min(slot.divisibility)
    step = g
    while step >= b - a:
        step /= p
    return step * (math.floor(a / step) + 1)


def _fill(group: OrderedGroup, coords: list[Fraction]) -> GroupElement:
    coords = coords + [Fraction(0)] * (group.rank - len(coords))
    return GroupElement(group, tuple(coords))


def _resolve_single(
    group: OrderedGroup, key: Key, side: str, index: int, coords: list[Fraction]
) -> Optional[GroupElement]:
    """Finish a witness that is still tied with one key only.

    ``side == "low"`` requires the padded coordinates to end up strictly above
    ``key``; ``side == "high"`` requires them to end up at or below ``key``."""
    if index == group.rank:
        zero = (0, Fraction(0))
        ok = zero > key[index] if side == "low" else zero <= key[index]
        return _fill(group, coords) if ok else None
    sign, q = key[index]
    slot = group.slots[index]
    if side == "low":
        if sign > 0:
            return None
        pick = Fraction(0) if sign < 0 else _slot_element_between(slot, (0, q), POS)
    else:
        if sign < 0:
            return None
        pick = Fraction(0) if sign > 0 else _slot_element_between(slot, NEG, (0, q))
    assert pick is not None
    return _fill(group, coords + [pick])


def _witness(group: OrderedGroup, low: Key, high: Key, index: int = 0,
             coords: Optional[list[Fraction]] = None) -> Optional[GroupElement]:
    """An element whose padded coordinates are strictly above ``low`` and at
    or below ``high``, or None when no such element exists."""
    coords = coords or []
    if index == group.rank:
        zero = (0, Fraction(0))
        if zero > low[index] and zero <= high[index]:
            return _fill(group, coords)
        return None
    L, H = low[index], high[index]
    slot = group.slots[index]
    inside = _slot_element_between(slot, L, H)
    if inside is not None:
        return _fill(group, coords + [inside])
    if L[0] == 0 and slot.contains(L[1]) and (0, L[1]) < H:
        out = _resolve_single(group, low, "low", index + 1, coords + [L[1]])
        if out is not None:
            return out
    if H[0] == 0 and slot.contains(H[1]) and (0, H[1]) > L:
        out = _resolve_single(group, high, "high", index + 1, coords + [H[1]])
        if out is not None:
            return out
    if L == H and L[0] == 0 and slot.contains(L[1]):
        return _witness(group, low, high, index + 1, coords + [L[1]])
    return None


def element_in_difference(larger: FinalSegment, smaller: FinalSegment) -> Optional[GroupElement]:
    """A group element in ``larger`` but not in ``smaller``, or None.

    Cross-checks the search against the canonical-key inclusion test: a
    witness exists exactly when ``larger ⊄ smaller``."""
    larger._same_group(smaller)
    witness = _witness(larger.group, larger.key, smaller.key)
    if (witness is None) != larger.is_subset(smaller):
        raise CoherenceError(
            "witness search disagrees with canonical inclusion test"
        )
    if witness is not None:
        if not larger.contains(witness) or smaller.contains(witness):
            raise CoherenceError("witness fails its defining membership tests")
    return witness


def element_in(segment: FinalSegment) -> Optional[GroupElement]:
    """Some member of the final segment, or None when it is empty."""
    return element_in_difference(segment, empty_final(segment.group))


# -- ideals -------------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    """An ideal of the valuation ring, identified with its value set: a final
    segment of the strictly positive cone.  The empty segment is the zero
    ideal."""

    segment: FinalSegment

    def __post_init__(self) -> None:
        if not self.segment.is_empty and not self.segment.is_positive:
            raise InvalidSegmentError(
                "an ideal's value set must lie in the strictly positive cone"
            )

    @property
    def group(self) -> OrderedGroup:
        return self.segment.group

    @property
    def is_zero(self) -> bool:
        return self.segment.is_empty

    def contains_value(self, element) -> bool:
        return self.segment.contains(element)

    def power(self, exponent: int) -> "Ideal":
        """Value set of the ideal raised to a positive integer power."""
        if not isinstance(exponent, int) or exponent < 1:
            raise ValueError("ideal powers need a positive integer exponent")
        return Ideal(self.segment.scale(exponent))

    def to_literal(self) -> str:
        return self.segment.to_literal()

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Ideal({self.group.describe()}, {self.to_literal()!r})"


def ideal_generated_by(group: OrderedGroup, values: Iterable) -> Ideal:
    """The ideal generated by ring elements with the given values."""
    return Ideal(upward_closure(group, values))


def ideal_power(ideal: Ideal, exponent: int) -> Ideal:
    return ideal.power(exponent)


def is_idempotent(ideal: Ideal, exponent: int) -> bool:
    """Whether ``I^exponent = I``."""
    return ideal.power(exponent) == ideal


def prime_subgroup(ideal: Ideal) -> Optional[ConvexSubgroup]:
    """The convex subgroup ``H`` with value set ``{γ > H}`` when the ideal is
    prime, else None.  The zero ideal is prime with ``H`` the whole group."""
    group = ideal.group
    if ideal.is_zero:
        return ConvexSubgroup(group, 0)
    form, level, prefix = ideal.segment.decompose()
    if form == "open" and all(c == 0 for c in prefix):
        return ConvexSubgroup(group, level)
    if form == "closed" and level >= 1:
        slot = group.slots[level - 1]
        if (
            not slot.is_dense
            and all(c == 0 for c in prefix[:-1])
            and prefix[-1] == slot.generator_gcd
        ):
            return ConvexSubgroup(group, level)
    return None


# -- scale-invariance classification -------------------------------------------


@dataclass(frozen=True)
class ScaleInvariance:
    """Outcome of testing a positive final segment ``S`` against the upward
    closure of ``m·S``.  When they coincide, ``S = {γ > subgroup}`` for a
    strongly convex subgroup, and conversely."""

    matches: bool
    multiplier: int
    scaled: FinalSegment
    subgroup: Optional[ConvexSubgroup]


def scale_invariant_shape(segment: FinalSegment, multiplier: int) -> ScaleInvariance:
    """Classify a final segment of the positive cone by scale invariance.

    Requires a nonempty segment inside the strictly positive cone.  Returns
    whether the upward closure of ``multiplier·S`` equals ``S``; on a match the
    segment is exactly the set of elements above a strongly convex subgroup,
    which is returned.  The match is independent of the multiplier, and this
    is asserted across small multipliers as a safety check."""
    if not isinstance(multiplier, int) or multiplier < 2:
        raise ValueError("scale-invariance needs an integer multiplier >= 2")
    if segment.is_empty:
        raise EmptySegmentError("cannot classify the empty segment")
    if not segment.is_positive:
        raise InvalidSegmentError(
            "classification needs a segment of strictly positive values"
        )
    scaled = segment.scale(multiplier)
    matches = scaled == segment
    subgroup: Optional[ConvexSubgroup] = None
    if matches:
        form, level, prefix = segment.decompose()
        if form != "open" or any(c != 0 for c in prefix):
            raise CoherenceError(
                "scale-invariant segment is not of above-subgroup shape"
            )
        subgroup = ConvexSubgroup(segment.group, level)
    for n in range(2, 8):
        if (segment.scale(n) == segment) != matches:
            raise CoherenceError(
                "scale invariance differs between multipliers, which should be impossible"
            )
    return ScaleInvariance(matches=matches, multiplier=multiplier, scaled=scaled, subgroup=subgroup)
