"""
Multiplicities in regular integral blocks.

Every block computation runs on the integral components at a finite level ``n``: each
component is a standard classical system in the coordinates ``u = sign * (lam + rho)``.
With ``xi`` antidominant, ``lam = x . xi`` and ``mu = y . xi``:

* ``{D(lam) : Delta(mu)} = P_{y,x}(1)``
* ``[Delta(lam) : L(mu)] = P_{w0 x, w0 y}(1)``
* ``ch L(lam) = sum_{y <= x} (-1)^(l(x) - l(y)) P_{y,x}(1) ch Delta(y . xi)``

with KL polynomials taken in the product of the component groups.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .charring import CharacterSeries, synthesize
from .errors import (
    DifferentBlocks,
    NotComparable,
    NotInRootLattice,
    ScopeTooSmall,
    SingularBlockUnsupported,
    TypeMismatch,
)
from .kl import KLCache, Word, check_guardrail, kl_at_one
from .lie_data import (
    LieType,
    Offset,
    Weight,
    height,
    offset_add,
    offset_level,
    offset_of,
    pair,
    positive_roots,
    root_lattice_coords,
    shifted,
    simple_roots,
    to_offset,
    unshifted,
)
from .utils import log
from .weyl import (
    Component,
    CoxeterDescriptor,
    SignedPerm,
    act,
    ambient_element,
    block_members,
    coxeter_isomorphic,
    dot,
    dot_stabilizer,
    facet_scope,
    integral_subsystem,
    reflection,
    same_block,
    same_facet,
)


@dataclass(frozen=True)
class MultiplicityReport:
    value: int
    stabilization_level: int
    same_block: bool
    regular: bool
    descriptor: str
    xi: Weight
    x_word: Word
    y_word: Word
    level_values: Dict[int, int] = field(default_factory=dict)
    verified: Optional[bool] = None

    @property
    def costandard_value(self) -> int:
        """``{D(lam) : nabla(mu)}``; tilting modules are self-dual."""
        return self.value


@dataclass(frozen=True)
class TranslationVerdict:
    admissible: bool
    reasons: Tuple[Tuple[str, bool], ...]
    dominant_rep: Optional[Weight] = None
    dominant_level: Optional[int] = None


@dataclass(frozen=True)
class WeightClassification:
    integral: bool
    dominant_integral: bool
    nonintegral: bool
    almost_nonintegral: bool
    restricted: bool
    scope_level: int

    def flags(self) -> Dict[str, bool]:
        return {
            "integral": self.integral,
            "dominant_integral": self.dominant_integral,
            "nonintegral": self.nonintegral,
            "almost_nonintegral": self.almost_nonintegral,
            "restricted": self.restricted,
        }


@dataclass(frozen=True)
class EquivalenceHint:
    descriptor: str
    descriptor_prime: str
    matching: Tuple[Tuple[str, str], ...]
    stabilizers_match: bool


def _check_types(lam: Weight, mu: Weight) -> None:
    if lam.lie_type is not mu.lie_type:
        raise TypeMismatch(f"{lam.lie_type.value} vs {mu.lie_type.value}")


def n0(lam: Weight, mu: Weight) -> int:
    _check_types(lam, mu)
    beta = offset_of(lam - mu)
    if beta is None:
        raise NotInRootLattice(f"{lam} - {mu} is not in the root lattice")
    if not beta:
        return 1
    return offset_level(lam.lie_type, beta)


def _truncate(lam: Weight, level: int) -> Weight:
    return Weight.of(lam.lie_type, lam.values(level))


def _with_head(lam: Weight, v: List[Fraction]) -> Weight:
    """``lam`` with coordinates ``1..len(v)`` replaced by ``v - rho``."""
    head = dict(unshifted(lam.lie_type, v).coords)
    tail = {i: x for i, x in lam.coords if i > len(v)}
    return Weight.from_map(lam.lie_type, {**head, **tail})


@dataclass(frozen=True)
class _BlockData:
    level: int
    components: Tuple[Component, ...]
    descriptor: CoxeterDescriptor
    xi: Weight
    x: Tuple[SignedPerm, ...]
    y: Tuple[SignedPerm, ...]

    def word(self, elems: Tuple[SignedPerm, ...]) -> Word:
        out: List[int] = []
        offset = 0
        for comp, g in zip(self.components, elems):
            out.extend(offset + r for r in comp.group.reduced_word(g))
            offset += comp.rank
        return tuple(out)

    def times_longest(self, elems: Tuple[SignedPerm, ...]) -> Tuple[SignedPerm, ...]:
        return tuple(c.group.mul(c.group.longest(), g) for c, g in zip(self.components, elems))


def _locate(lam: Weight, mu: Weight, level: int) -> _BlockData:
    """Antidominant ``xi`` and ``x, y`` with ``lam = x . xi``, ``mu = y . xi`` at ``level``."""
    t = lam.lie_type
    sub = integral_subsystem(_truncate(lam, level), level)
    comps = sorted(sub.components, key=lambda c: (c.letter.value, c.rank, min(c.indices)))
    v_lam, v_mu = shifted(lam, level), shifted(mu, level)
    xs, ys = [], []
    for comp in comps:
        u0, gx = comp.group.antidominant(comp.coords(v_lam))
        u0_mu, gy = comp.group.antidominant(comp.coords(v_mu))
        if u0 != u0_mu:
            raise DifferentBlocks(f"{lam} and {mu} are not linked at level {level}")
        for r in range(1, comp.group.rank + 1):
            if comp.group.simple_pairing(u0, r) == 0:
                raise SingularBlockUnsupported(
                    f"{lam} lies on a wall of its integral Weyl group at level {level}"
                )
        v_lam = comp.write_back(v_lam, u0)
        v_mu = comp.write_back(v_mu, u0_mu)
        xs.append(gx)
        ys.append(gy)
    if v_lam != v_mu:
        raise DifferentBlocks(f"{lam} and {mu} are not linked at level {level}")
    descriptor = CoxeterDescriptor(tuple((c.letter.value, c.rank) for c in comps), t.value)
    return _BlockData(level, tuple(comps), descriptor, _with_head(lam, v_lam), tuple(xs), tuple(ys))


def _comparable(lam: Weight, mu: Weight) -> None:
    _check_types(lam, mu)
    if not same_block(lam, mu):
        raise DifferentBlocks(f"{lam} and {mu} lie in different blocks")
    coeffs = root_lattice_coords(lam - mu) or {}
    if any(c < 0 for c in coeffs.values()):
        raise NotComparable(f"{mu} is not below {lam}")
    walls = dot_stabilizer(lam, facet_scope(lam))
    if walls:
        names = ", ".join(str(alpha) for alpha in walls)
        raise SingularBlockUnsupported(f"{lam} is dot-singular (walls: {names})")


def _block_data(lam: Weight, mu: Weight, level: Optional[int]) -> _BlockData:
    start = max(n0(lam, mu), lam.lie_type.min_level)
    if level is not None:
        if level < start:
            raise ScopeTooSmall(f"level {level} below n0 = {start}")
        return _locate(lam, mu, level)
    top = max(start, lam.support, mu.support)
    for n in range(start, top + 1):
        try:
            return _locate(lam, mu, n)
        except DifferentBlocks:
            continue
    raise DifferentBlocks(f"{lam} and {mu} are not linked at any level up to {top}")


def _tilting_value(data: _BlockData, cache: KLCache) -> int:
    check_guardrail(data.descriptor, cache.max_group_order)
    return kl_at_one(data.word(data.y), data.word(data.x), data.descriptor, cache)


def _composition_value(data: _BlockData, cache: KLCache) -> int:
    check_guardrail(data.descriptor, cache.max_group_order)
    x0, y0 = data.times_longest(data.x), data.times_longest(data.y)
    return kl_at_one(data.word(x0), data.word(y0), data.descriptor, cache)


def _report(
    data: _BlockData, value: int, level_values: Dict[int, int], verified: Optional[bool]
) -> MultiplicityReport:
    return MultiplicityReport(
        value=value,
        stabilization_level=data.level,
        same_block=True,
        regular=True,
        descriptor=str(data.descriptor),
        xi=data.xi,
        x_word=data.word(data.x),
        y_word=data.word(data.y),
        level_values=level_values,
        verified=verified,
    )


def _run(lam, mu, cache, level, verify, evaluate) -> MultiplicityReport:
    _comparable(lam, mu)
    data = _block_data(lam, mu, level)
    value = evaluate(data, cache)
    level_values = {data.level: value}
    verified = None
    if verify:
        for extra in (data.level + 1, data.level + 2):
            level_values[extra] = evaluate(_locate(lam, mu, extra), cache)
        verified = len(set(level_values.values())) == 1
        outcome = "ok" if verified else "MISMATCH"
        log(f"stabilization check for ({lam}; {mu}): {level_values} -> {outcome}")
    return _report(data, value, level_values, verified)


def verma_in_tilting(
    lam: Weight,
    mu: Weight,
    cache: KLCache,
    level: Optional[int] = None,
    verify: bool = False,
) -> MultiplicityReport:
    """``{D(lam) : Delta(mu)}``, equal to ``{D(lam) : nabla(mu)}``."""
    return _run(lam, mu, cache, level, verify, _tilting_value)


def verma_composition_mult(
    lam: Weight,
    mu: Weight,
    cache: KLCache,
    level: Optional[int] = None,
    verify: bool = False,
) -> MultiplicityReport:
    """``[Delta(lam) : L(mu)]``."""
    return _run(lam, mu, cache, level, verify, _composition_value)


def projective_verma_mult(lam: Weight, mu: Weight, cache: KLCache) -> MultiplicityReport:
    """``{P(lam) : Delta(mu)} = [Delta(mu) : L(lam)]``."""
    return verma_composition_mult(mu, lam, cache)


def reciprocity_check(lam: Weight, mu: Weight, cache: KLCache) -> bool:
    report = verma_in_tilting(lam, mu, cache)
    data = _locate(lam, mu, report.stabilization_level)
    w0 = ambient_element(
        lam.lie_type, [(c, c.group.longest()) for c in data.components]
    )
    # {P(w0.lam) : Delta(w0.mu)} = [Delta(w0.mu) : L(w0.lam)]
    mirrored = _locate(dot(w0, mu), dot(w0, lam), data.level)
    other = _composition_value(mirrored, cache)
    if other != report.value:
        log(f"reciprocity mismatch for ({lam}; {mu}): {report.value} vs {other}")
    return other == report.value


def _default_level(lam: Weight, depth: int) -> int:
    return max(lam.support + depth + 1, lam.lie_type.min_level)


def linked_below(lam: Weight, depth: int, level: int) -> Dict[Offset, Weight]:
    """
    Weights reachable from ``lam`` by downward dot-reflections in integral roots at
    ``level``, keyed by offset, within the height window.
    """
    t = lam.lie_type
    if level < lam.support:
        raise ScopeTooSmall(f"level {level} below support {lam.support}")
    roots = [
        (alpha, to_offset(root_lattice_coords(alpha.as_weight()) or {}))
        for alpha in positive_roots(t, level)
    ]
    found: Dict[Offset, Weight] = {(): lam}
    queue = deque([((), lam)])
    while queue:
        beta, mu = queue.popleft()
        v = shifted(mu, level)
        for alpha, a_off in roots:
            k = pair(v, alpha)
            if k <= 0 or k.denominator != 1:
                continue
            step = tuple(int(k) * c for c in a_off)
            nxt = offset_add(beta, step)
            if height(nxt) > depth or nxt in found:
                continue
            found[nxt] = mu - alpha.as_weight().scale(k)
            queue.append((nxt, found[nxt]))
    return found


def tilting_standard_multiplicities(
    lam: Weight, depth: int, cache: KLCache, level: Optional[int] = None
) -> Dict[Offset, int]:
    level = level or _default_level(lam, depth)
    out = {}
    for beta, mu in linked_below(lam, depth, level).items():
        value = verma_in_tilting(lam, mu, cache).value
        if value:
            out[beta] = value
    return out


def tilting_character(
    lam: Weight, depth: int, cache: KLCache, level: Optional[int] = None
) -> CharacterSeries:
    level = level or _default_level(lam, depth)
    return synthesize(lam, tilting_standard_multiplicities(lam, depth, cache, level), depth, level)


def simple_character(
    lam: Weight, depth: int, cache: KLCache, level: Optional[int] = None
) -> CharacterSeries:
    level = level or _default_level(lam, depth)
    mults: Dict[Offset, int] = {}
    for beta, mu in linked_below(lam, depth, level).items():
        report = verma_in_tilting(lam, mu, cache)
        if report.value:
            sign = -1 if (len(report.x_word) - len(report.y_word)) % 2 else 1
            mults[beta] = sign * report.value
    return synthesize(lam, mults, depth, level)


def classify_weight(lam: Weight, scope_level: int) -> WeightClassification:
    """
    Flags over all positive roots of the direct limit. Beyond the support every root pairs
    like a root of the zero weight, so level ``support + 2`` sees every pairing class.
    """
    t = lam.lie_type
    level = max(scope_level, lam.support) + 2
    coords = dict(lam.coords)
    pairings = [pair(coords, alpha) for alpha in positive_roots(t, level)]
    integral = all(p.denominator == 1 for p in pairings)
    return WeightClassification(
        integral=integral,
        dominant_integral=integral and all(p >= 0 for p in pairings),
        nonintegral=all(p.denominator != 1 for p in pairings),
        # tail roots pair to zero, so infinitely many pairings are integral
        almost_nonintegral=False,
        restricted=True,
        scope_level=level,
    )


def integrability_check(ch: CharacterSeries, level: int) -> Tuple[bool, List[Weight]]:
    """Whether the truncated support is stable under the simple reflections at ``level``."""
    t = ch.lie_type
    support = {ch.weight_of(beta) for beta in ch.coeffs}
    skipped: List[Weight] = []
    for w in support:
        for alpha in simple_roots(t, level):
            image = act(reflection(alpha), w)
            if image in support:
                continue
            beta = offset_of(ch.anchor - image)
            if beta is None or any(c < 0 for c in beta):
                return False, skipped
            if height(beta) > ch.depth:
                skipped.append(image)
                continue
            return False, skipped
    return True, skipped


def is_integrable_character(ch: CharacterSeries, level: int) -> bool:
    return integrability_check(ch, level)[0]


def dominant_in_orbit(delta: Weight) -> Tuple[Weight, int]:
    """The dominant element of ``W_n delta`` with ``n`` the smallest level covering ``delta``."""
    t = delta.lie_type
    n = max(delta.support, t.min_level)
    vals = delta.values(n)
    if t is LieType.A:
        return Weight.of(t, sorted(vals, reverse=True)), n
    mags = sorted(abs(x) for x in vals)
    if t is LieType.D and mags[0] != 0 and sum(1 for x in vals if x < 0) % 2:
        mags[0] = -mags[0]
    return Weight.of(t, mags), n


def translation_check(lam: Weight, mu: Weight) -> TranslationVerdict:
    reasons: List[Tuple[str, bool]] = []
    if lam.lie_type is not mu.lie_type:
        return TranslationVerdict(False, (("same_type", False),))
    compatible = root_lattice_coords(lam - mu) is not None
    reasons.append(("compatible", compatible))
    level = facet_scope(lam, mu)
    positive = integral_subsystem(lam, level).positive
    same_subsystem = positive == integral_subsystem(mu, level).positive
    reasons.append(("same_integral_subsystem", same_subsystem))
    facet = same_subsystem and same_facet(lam, mu)
    reasons.append(("same_facet", facet))
    admissible = compatible and same_subsystem and facet
    if not admissible:
        return TranslationVerdict(False, tuple(reasons))
    nu, n = dominant_in_orbit(lam - mu)
    return TranslationVerdict(True, tuple(reasons), nu, n)


def _stabilizer_gens(comp: Component, u0: List[Fraction]) -> Tuple[int, ...]:
    return tuple(r for r in range(1, comp.group.rank + 1) if comp.group.simple_pairing(u0, r) == 0)


def _stabilizer_order(comp: Component, u0: List[Fraction]) -> int:
    return comp.group.order // len(comp.group.orbit(u0))


def block_equivalence_hint(lam: Weight, lam_prime: Weight) -> Optional[EquivalenceHint]:
    if lam.lie_type is lam_prime.lie_type:
        level = level_prime = facet_scope(lam, lam_prime)
    else:
        level, level_prime = facet_scope(lam), facet_scope(lam_prime)
    sub = integral_subsystem(lam, level)
    sub_prime = integral_subsystem(lam_prime, level_prime)
    if not coxeter_isomorphic(sub.descriptor, sub_prime.descriptor):
        return None

    def ordered(weight: Weight, scope: int):
        v = shifted(weight, scope)
        out = []
        for comp in integral_subsystem(weight, scope).components:
            u0, _ = comp.group.antidominant(comp.coords(v))
            key = CoxeterDescriptor(((comp.letter.value, comp.rank),)).normalized().components
            out.append((key, comp, u0))
        out.sort(key=lambda item: (item[0], min(item[1].indices)))
        return out

    left, right = ordered(lam, level), ordered(lam_prime, level_prime)
    matching = []
    stabilizers_match = len(left) == len(right)
    for (key_a, a, ua), (key_b, b, ub) in zip(left, right):
        matching.append((f"{a.describe()}@{list(a.indices)}", f"{b.describe()}@{list(b.indices)}"))
        if a.letter is b.letter and a.rank == b.rank:
            same = _stabilizer_gens(a, ua) == _stabilizer_gens(b, ub)
        else:
            same = _stabilizer_order(a, ua) == _stabilizer_order(b, ub)
        stabilizers_match = stabilizers_match and same
    return EquivalenceHint(
        str(sub.descriptor), str(sub_prime.descriptor), tuple(matching), stabilizers_match
    )


def block_weights(lam: Weight, level: int) -> List[Tuple[Weight, Optional[Offset]]]:
    """Members of the finite block at ``level`` with their offset below ``lam``, or ``None``."""
    out = []
    for mu in block_members(lam, level):
        beta = offset_of(lam - mu)
        out.append((mu, beta if beta is not None and all(c >= 0 for c in beta) else None))
    return out

