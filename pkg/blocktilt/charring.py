"""
Depth-truncated formal characters.

A series is anchored at a top weight; its keys are root-lattice offsets ``beta``
(simple-root coefficient tuples) and the term at ``beta`` is ``e^(anchor - beta)``.
Only offsets of height at most ``depth`` are kept, and every product is taken
over the positive roots of one finite level, so truncations are exact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import ScopeTooSmall, TypeMismatch
from .lie_data import (
    LieType,
    Offset,
    Weight,
    check_level,
    from_offset,
    height,
    offset_add,
    positive_roots,
    root_lattice_coords,
    to_offset,
)


@dataclass(frozen=True)
class CharacterSeries:
    lie_type: LieType
    anchor: Weight
    depth: int
    level: int
    coeffs: Dict[Offset, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean = {k: v for k, v in self.coeffs.items() if v and height(k) <= self.depth}
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, beta: Offset) -> int:
        return self.coeffs.get(tuple(beta), 0)

    def weight_of(self, beta: Offset) -> Weight:
        return self.anchor - from_offset(self.lie_type, beta)

    def terms(self) -> List[Tuple[Offset, Weight, int]]:
        """Terms sorted by height of the offset, then lexicographically."""
        keys = sorted(self.coeffs, key=lambda b: (height(b), b))
        return [(b, self.weight_of(b), self.coeffs[b]) for b in keys]

    def same_terms(self, other: "CharacterSeries") -> bool:
        return (
            self.lie_type is other.lie_type
            and self.anchor == other.anchor
            and self.coeffs == other.coeffs
        )


@dataclass(frozen=True)
class DenominatorSeries(CharacterSeries):
    """A series anchored at the zero weight."""

    @classmethod
    def build(
        cls, t: LieType, depth: int, level: int, coeffs: Dict[Offset, int]
    ) -> "DenominatorSeries":
        return cls(t, Weight.zero(t), depth, level, coeffs)


def _root_offsets(t: LieType, level: int, depth: int) -> List[Offset]:
    out = []
    for alpha in positive_roots(t, level):
        beta = to_offset(root_lattice_coords(alpha.as_weight()) or {})
        if height(beta) <= depth:
            out.append(beta)
    return out


def _fits(beta: Offset, bound: Optional[Offset]) -> bool:
    if bound is None:
        return True
    if len(beta) > len(bound):
        return False
    return all(b <= c for b, c in zip(beta, bound))


def partition_table(
    roots: Iterable[Offset], depth: int, bound: Optional[Offset] = None
) -> Dict[Offset, int]:
    """
    Number of multisets of ``roots`` summing to each offset of height ``<= depth``
    (optionally only offsets below ``bound`` componentwise).
    """
    layers: List[Dict[Offset, int]] = [dict() for _ in range(depth + 1)]
    layers[0][()] = 1
    for r in roots:
        h = height(r)
        if h < 1:
            continue
        for ht in range(0, depth - h + 1):
            for key, count in list(layers[ht].items()):
                target = offset_add(key, r)
                if not _fits(target, bound):
                    continue
                bucket = layers[ht + h]
                bucket[target] = bucket.get(target, 0) + count
    table: Dict[Offset, int] = {}
    for layer in layers:
        table.update(layer)
    return table


def kostant_partition(beta: Offset, t: LieType, level: int) -> int:
    check_level(t, level)
    beta = tuple(beta)
    while beta and beta[-1] == 0:
        beta = beta[:-1]
    if any(x < 0 for x in beta):
        return 0
    d = height(beta)
    return partition_table(_root_offsets(t, level, d), d, bound=beta).get(beta, 0)


def _check_window(t: LieType, support: int, level: int, depth: int) -> None:
    if depth < 0:
        raise ScopeTooSmall(f"depth must be >= 0, got {depth}")
    if level < t.min_level or level < support:
        raise ScopeTooSmall(f"level {level} below support {support} (type {t.value})")


def verma_character(lam: Weight, depth: int, level: int) -> CharacterSeries:
    """
    Truncated ``ch Delta(lam)`` over the positive roots at ``level``. Coefficients agree with
    the direct limit only for offsets supported at ``level``; ``level >= support + depth``
    makes the whole window exact.
    """
    t = lam.lie_type
    _check_window(t, lam.support, level, depth)
    table = partition_table(_root_offsets(t, level, depth), depth)
    return CharacterSeries(t, lam, depth, level, table)


def denominator_q(t: LieType, depth: int, level: int) -> DenominatorSeries:
    """
    Truncation of the product of ``(e^0 - e^-alpha)`` over the positive roots at ``level``.
    Exact for offsets supported at ``level``, so for the whole window once ``level >= depth``.
    """
    _check_window(t, 0, level, depth)
    series: Dict[Offset, int] = {(): 1}
    for r in _root_offsets(t, level, depth):
        h = height(r)
        nxt = dict(series)
        for key, c in series.items():
            if height(key) + h <= depth:
                target = offset_add(key, r)
                nxt[target] = nxt.get(target, 0) - c
        series = {k: v for k, v in nxt.items() if v}
    return DenominatorSeries.build(t, depth, level, series)


def mul(c1: CharacterSeries, c2: CharacterSeries, depth: int) -> CharacterSeries:
    if c1.lie_type is not c2.lie_type:
        raise TypeMismatch(f"{c1.lie_type.value} series vs {c2.lie_type.value} series")
    depth = min(depth, c1.depth, c2.depth)
    out: Dict[Offset, int] = {}
    for a, x in c1.coeffs.items():
        ha = height(a)
        for b, y in c2.coeffs.items():
            if ha + height(b) > depth:
                continue
            k = offset_add(a, b)
            out[k] = out.get(k, 0) + x * y
    return CharacterSeries(c1.lie_type, c1.anchor + c2.anchor, depth, max(c1.level, c2.level), out)


def standard_multiplicities(ch: CharacterSeries) -> Dict[Offset, int]:
    """``{M : Delta(anchor - beta)}`` for every offset in the window, read off ``ch * q``."""
    q = denominator_q(ch.lie_type, ch.depth, ch.level)
    return dict(mul(ch, q, ch.depth).coeffs)


def synthesize(
    anchor: Weight, mults: Mapping[Offset, int], depth: int, level: int
) -> CharacterSeries:
    """``sum_beta mults[beta] * ch Delta(anchor - beta)``, truncated."""
    t = anchor.lie_type
    _check_window(t, anchor.support, level, depth)
    table = partition_table(_root_offsets(t, level, depth), depth)
    out: Dict[Offset, int] = {}
    for beta, m in mults.items():
        hb = height(beta)
        if not m or hb > depth:
            continue
        for gamma, p in table.items():
            if hb + height(gamma) > depth:
                continue
            k = offset_add(tuple(beta), gamma)
            out[k] = out.get(k, 0) + m * p
    return CharacterSeries(t, anchor, depth, level, out)


def dual(ch: CharacterSeries) -> CharacterSeries:
    """The duality on O fixes characters."""
    return CharacterSeries(ch.lie_type, ch.anchor, ch.depth, ch.level, dict(ch.coeffs))


def branch_verma(lam: Weight, n: int, depth: int, ambient_level: int) -> Dict[Weight, int]:
    """
    Restriction of ``Delta(lam)`` from the ambient level to level ``n``: the multiplicity of
    the level-``n`` Verma module of highest weight ``lam - beta`` is the number of ways to
    write ``beta`` with positive roots outside level ``n``.
    """
    t = lam.lie_type
    check_level(t, n)
    if ambient_level < n:
        raise ScopeTooSmall(f"ambient level {ambient_level} below branching level {n}")
    _check_window(t, lam.support, ambient_level, depth)
    inner = set(_root_offsets(t, n, depth))
    complement = [r for r in _root_offsets(t, ambient_level, depth) if r not in inner]
    table = partition_table(complement, depth)
    return {lam - from_offset(t, beta): count for beta, count in table.items() if count}
