"""Brute-force oracles, independent of the package's canonical-form algebra.

Everything here works from first definitions: group membership is trial
division on denominators, segment membership is a lexicographic comparison
against an explicit boundary description, and existential witnesses are found
by enumerating explicit candidate grids.  None of it consults the package's
segment keys or canonicalizer, so agreement between these oracles and the
library is meaningful evidence rather than a tautology.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Iterable, Optional

# Spec tuples describe positive final segments:
#   ("gt", coords)    — { γ : γ >  coords }  (lexicographic)
#   ("ge", coords)    — { γ : γ >= coords }
#   ("aboveH", level) — { γ : γ[:level] > (0,…,0) }  (above a convex subgroup)
SegmentSpec = tuple

# Sampled segment members are drawn from grids no finer than SAMPLE_EXPONENT;
# witness candidate grids go all the way to WITNESS_EXPONENT.  The gap matters:
# a sampled member α sits at least gcd/2^6 above an open boundary, so a witness
# interval (boundary, α/m] with m ≤ 7 has length above gcd/2^9 and therefore
# contains a point of the 2^-12 (or 3^-12) tower grid.
SAMPLE_EXPONENT = 6
WITNESS_EXPONENT = 12
FAR_NEGATIVE = Fraction(-1024)


@dataclass(frozen=True)
class SlotDesc:
    """One lexicographic factor: the subgroup gcd·Z[1/p : p ∈ primes] of Q,
    or all of Q when ``divisible_all``."""

    gcd: Fraction
    primes: frozenset[int]
    divisible_all: bool = False

    def contains(self, value: Fraction) -> bool:
        if self.divisible_all:
            return True
        reduced = Fraction(value) / self.gcd
        denominator = reduced.denominator
        for prime in sorted(self.primes):
            while denominator % prime == 0:
                denominator //= prime
        return denominator == 1

    def tower_base(self) -> Optional[int]:
        """Prime whose power tower generates arbitrarily fine grid points."""
        if self.divisible_all:
            return 2
        if self.primes:
            return min(self.primes)
        return None


GroupDesc = tuple[SlotDesc, ...]


def _slot(gcd="1", primes=(), everything=False) -> SlotDesc:
    return SlotDesc(Fraction(gcd), frozenset(primes), everything)


TEST_GROUPS: dict[str, GroupDesc] = {
    "Z": (_slot(),),
    "Z[1/2]": (_slot(primes=(2,)),),
    "Z[1/3]": (_slot(primes=(3,)),),
    "Q": (_slot(everything=True),),
    "QxZ": (_slot(everything=True), _slot()),
    "QxZ[1/2]": (_slot(everything=True), _slot(primes=(2,))),
}


def group_contains(desc: GroupDesc, coords: tuple[Fraction, ...]) -> bool:
    return len(coords) == len(desc) and all(
        slot.contains(c) for slot, c in zip(desc, coords)
    )


# -- independent segment membership ---------------------------------------------------


def spec_contains(spec: SegmentSpec, coords: tuple[Fraction, ...]) -> bool:
    kind = spec[0]
    if kind == "gt":
        return tuple(coords) > tuple(spec[1])
    if kind == "ge":
        return tuple(coords) >= tuple(spec[1])
    if kind == "aboveH":
        level = spec[1]
        return tuple(coords[:level]) > (Fraction(0),) * level
    raise ValueError(f"unknown spec {spec!r}")


def spec_boundary(spec: SegmentSpec, rank: int) -> tuple[Fraction, ...]:
    """A reference point at or just inside the lower edge of the segment."""
    if spec[0] in ("gt", "ge"):
        return tuple(spec[1])
    return (Fraction(0),) * rank


# -- grids -----------------------------------------------------------------------------


def slot_tower(slot: SlotDesc, exponent: int = WITNESS_EXPONENT) -> list[int]:
    base = slot.tower_base()
    if base is None:
        return [1]
    return [base**k for k in range(exponent + 1)]


def slot_box(slot: SlotDesc, numerators: int = 8, depth: int = 3) -> list[Fraction]:
    """Sorted sample of the slot within a small symmetric box."""
    values = set()
    for d in slot_tower(slot, depth):
        for n in range(-numerators, numerators + 1):
            q = slot.gcd * Fraction(n, d)
            if slot.contains(q):
                values.add(q)
    return sorted(values)


def group_box(desc: GroupDesc, numerators: int = 8, depth: int = 3) -> list[tuple]:
    per_slot = [slot_box(slot, numerators, depth) for slot in desc]
    if len(per_slot) == 1:
        return [(q,) for q in per_slot[0]]
    trimmed = [
        coords if len(coords) <= 13 else coords[::2] for coords in per_slot
    ]
    return [tuple(c) for c in product(*trimmed)]


def _floors_near(value: Fraction, slot: SlotDesc) -> list[Fraction]:
    """Slot elements at or just below ``value`` on every tower grid."""
    out = []
    for d in slot_tower(slot):
        step = slot.gcd / d
        floored = (value / step).__floor__() * step
        if slot.contains(floored):
            out.append(floored)
            out.append(floored - step)
    if slot.contains(value):
        out.append(value)
    return out


def _bumps_above(
    value: Fraction, slot: SlotDesc, exponent: int = WITNESS_EXPONENT
) -> list[Fraction]:
    """Slot elements at or just above ``value`` on tower grids of the given depth."""
    out = []
    for d in slot_tower(slot, exponent):
        step = slot.gcd / d
        ceiled = -((-value / step).__floor__()) * step
        if slot.contains(ceiled):
            out.append(ceiled)
            out.append(ceiled + step)
    if slot.contains(value):
        out.append(value)
    return out


def witness_exists(
    desc: GroupDesc,
    spec: SegmentSpec,
    multiplier: int,
    alpha: tuple[Fraction, ...],
) -> bool:
    """Whether some β in the segment has multiplier·β ≤ alpha (lexicographic).

    Candidates per coordinate: exact and floored versions of alpha/multiplier,
    the boundary coordinate and bumps just above it, and a far-negative filler
    for coordinates after a strict lexicographic drop.
    """
    rank = len(desc)
    boundary = spec_boundary(spec, rank)
    pools: list[list[Fraction]] = []
    for i, slot in enumerate(desc):
        share = alpha[i] / multiplier
        pool = set()
        pool.update(_floors_near(share, slot))
        pool.update(_bumps_above(boundary[i], slot))
        filler = FAR_NEGATIVE * slot.gcd
        if slot.contains(filler):
            pool.add(filler)
        pool.add(Fraction(0) * slot.gcd)
        pools.append(sorted(pool))
    target = tuple(alpha)
    for beta in product(*pools):
        if not spec_contains(spec, beta):
            continue
        scaled = tuple(multiplier * b for b in beta)
        if scaled <= target:
            return True
    return False


def sample_members(
    desc: GroupDesc, spec: SegmentSpec, numerators: int = 6, depth: int = 3
) -> list[tuple[Fraction, ...]]:
    """Members of the segment in a box, plus boundary-hugging specials."""
    rank = len(desc)
    members = [
        coords for coords in group_box(desc, numerators, depth)
        if spec_contains(spec, coords)
    ]
    boundary = spec_boundary(spec, rank)
    specials: list[tuple[Fraction, ...]] = []
    if spec_contains(spec, boundary):
        specials.append(boundary)
    for i, slot in enumerate(desc):
        for bump in _bumps_above(boundary[i], slot, SAMPLE_EXPONENT):
            candidate = boundary[:i] + (bump,) + boundary[i + 1 :]
            if spec_contains(spec, candidate):
                specials.append(candidate)
            deep = tuple(
                c if j <= i else FAR_NEGATIVE * desc[j].gcd
                for j, c in enumerate(candidate)
            )
            if group_contains(desc, deep) and spec_contains(spec, deep):
                specials.append(deep)
    return members + specials


def oracle_scale_invariant(
    desc: GroupDesc, spec: SegmentSpec, multiplier: int
) -> bool:
    """Brute-force verdict for Σ = (multiplier·Σ)↑: every sampled member must
    admit a witness β ∈ Σ with multiplier·β ≤ α."""
    return all(
        witness_exists(desc, spec, multiplier, alpha)
        for alpha in sample_members(desc, spec)
    )


def oracle_power_member(
    desc: GroupDesc,
    spec: SegmentSpec,
    multiplier: int,
    alpha: tuple[Fraction, ...],
) -> bool:
    """Brute-force membership of alpha in the multiplier-th power of the ideal
    whose value set is the segment: a sum of ``multiplier`` members lies at or
    below alpha exactly when a single member β has multiplier·β ≤ alpha
    (replace every summand by the least one)."""
    return witness_exists(desc, spec, multiplier, alpha)


def sums_of_members(
    desc: GroupDesc, spec: SegmentSpec, multiplier: int, count: int, rng
) -> Iterable[tuple[Fraction, ...]]:
    """Random sums of ``multiplier`` sampled members — sound members of the
    ideal power by definition."""
    members = sample_members(desc, spec)
    for _ in range(count):
        picks = [rng.choice(members) for _ in range(multiplier)]
        yield tuple(sum(cs) for cs in zip(*picks))
