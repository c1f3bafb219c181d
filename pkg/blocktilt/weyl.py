"""
Weyl groups of the classical direct limits as finitely supported signed permutations.

A signed permutation is stored as a tuple ``g`` with ``g[a - 1] = s * b`` meaning
``g(e_a) = s * e_b``. The same encoding serves the ambient :class:`WeylElement`
(indices are ambient coordinates) and the finite :class:`StandardGroup`
(indices are the coordinates of one standard component).

Everything that depends on a weight works with the shifted coordinates
``v = lam + rho``: the dot action is the linear action on ``v``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import ceil, factorial
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .errors import IllegalLevel, NotIntegral, ParseError, ScopeTooSmall, TypeMismatch
from .lie_data import (
    LieType,
    Root,
    Weight,
    check_level,
    height,
    pair,
    positive_roots,
    rho_coord,
    root_lattice_coords,
    shifted,
    simple_roots,
    unshifted,
)

SignedPerm = Tuple[int, ...]


def _apply(g: SignedPerm, vec: Sequence) -> list:
    out = list(vec)
    for a, img in enumerate(g, start=1):
        b = abs(img)
        out[b - 1] = vec[a - 1] if img > 0 else -vec[a - 1]
    return out


def _compose(g: SignedPerm, h: SignedPerm) -> SignedPerm:
    """``g * h`` (apply ``h`` first); both must have the same size."""
    out = []
    for img in h:
        b = abs(img)
        gb = g[b - 1]
        out.append(gb if img > 0 else -gb)
    return tuple(out)


def _invert(g: SignedPerm) -> SignedPerm:
    out = [0] * len(g)
    for a, img in enumerate(g, start=1):
        out[abs(img) - 1] = a if img > 0 else -a
    return tuple(out)


def _pad(g: SignedPerm, size: int) -> SignedPerm:
    return tuple(g) + tuple(range(len(g) + 1, size + 1))


def _is_positive_vector(letter: LieType, vec: Dict[int, int]) -> bool:
    nonzero = sorted(k for k, c in vec.items() if c)
    if letter is LieType.A:
        return vec[nonzero[0]] > 0
    return vec[nonzero[-1]] > 0


def _image(g: SignedPerm, vec: Dict[int, int]) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for a, c in vec.items():
        if a <= len(g):
            img = g[a - 1]
            b, s = abs(img), (1 if img > 0 else -1)
        else:
            b, s = a, 1
        out[b] = out.get(b, 0) + s * c
    return out


@dataclass(frozen=True)
class WeylElement:
    """A finitely supported signed permutation: ``w(e_i) = -e_perm(i)`` if ``i in signs``."""

    lie_type: LieType
    perm: Tuple[int, ...] = ()
    signs: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        perm = tuple(self.perm)
        signs = frozenset(self.signs)
        size = max([len(perm)] + list(signs)) if (perm or signs) else 0
        perm = _pad(perm, size)
        if sorted(perm) != list(range(1, size + 1)):
            raise ValueError(f"not a permutation: {perm}")
        if self.lie_type is LieType.A and signs:
            raise ValueError("type A elements carry no sign changes")
        if self.lie_type is LieType.D and len(signs) % 2:
            raise ValueError("type D elements flip an even number of signs")
        while size and perm[size - 1] == size and size not in signs:
            size -= 1
        object.__setattr__(self, "perm", perm[:size])
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls, t: LieType) -> "WeylElement":
        return cls(t)

    @classmethod
    def from_signed(cls, t: LieType, g: SignedPerm) -> "WeylElement":
        return cls(t, tuple(abs(x) for x in g), frozenset(a for a, x in enumerate(g, 1) if x < 0))

    @property
    def size(self) -> int:
        return len(self.perm)

    def signed(self, size: Optional[int] = None) -> SignedPerm:
        n = max(self.size, size or 0)
        perm = _pad(self.perm, n)
        return tuple(-p if a in self.signs else p for a, p in enumerate(perm, start=1))

    def _check(self, other_type: LieType) -> None:
        if other_type is not self.lie_type:
            raise TypeMismatch(f"{self.lie_type.value} element vs {other_type.value}")

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        self._check(other.lie_type)
        n = max(self.size, other.size)
        return WeylElement.from_signed(self.lie_type, _compose(self.signed(n), other.signed(n)))

    def inverse(self) -> "WeylElement":
        return WeylElement.from_signed(self.lie_type, _invert(self.signed()))

    def apply(self, vec: Sequence) -> list:
        """Act on a 1-based coordinate list at least as long as the element's support."""
        return _apply(self.signed(len(vec)), vec)

    def length(self) -> int:
        level = max(self.size, self.lie_type.min_level)
        g = self.signed(level)
        return sum(
            1
            for alpha in positive_roots(self.lie_type, level)
            if not _is_positive_vector(self.lie_type, _image(g, alpha.vector()))
        )


def reflection(alpha: Root) -> WeylElement:
    t = alpha.lie_type
    if alpha.shape in {"short", "long"}:
        return WeylElement(t, (), frozenset({alpha.i}))
    n = max(alpha.i, alpha.j)
    perm = list(range(1, n + 1))
    perm[alpha.i - 1], perm[alpha.j - 1] = alpha.j, alpha.i
    signs = frozenset({alpha.i, alpha.j}) if alpha.shape == "sum" else frozenset()
    return WeylElement(t, tuple(perm), signs)


def act(w: WeylElement, lam: Weight) -> Weight:
    w._check(lam.lie_type)
    level = max(w.size, lam.support)
    return Weight.of(lam.lie_type, w.apply(lam.values(level)))


def dot(w: WeylElement, lam: Weight) -> Weight:
    w._check(lam.lie_type)
    t = lam.lie_type
    level = max(w.size, lam.support, t.min_level)
    return unshifted(t, w.apply(shifted(lam, level)))


def _orbit_key(t: LieType, v: List[Fraction]) -> tuple:
    if t is LieType.A:
        return (tuple(sorted(v)),)
    key = (tuple(sorted(abs(x) for x in v)),)
    if t is LieType.D and all(x != 0 for x in v):
        key += (sum(1 for x in v if x < 0) % 2,)
    return key


def same_block(lam: Weight, mu: Weight) -> bool:
    if lam.lie_type is not mu.lie_type:
        raise TypeMismatch(f"{lam.lie_type.value} vs {mu.lie_type.value}")
    if root_lattice_coords(lam - mu) is None:
        return False
    t = lam.lie_type
    level = max(lam.support, mu.support, t.min_level)
    return _orbit_key(t, shifted(lam, level)) == _orbit_key(t, shifted(mu, level))


def group_order(letter: LieType, k: int) -> int:
    if letter is LieType.A:
        return factorial(k)
    if letter is LieType.D:
        return 2 ** (k - 1) * factorial(k)
    return 2**k * factorial(k)


class StandardGroup:
    """
    The Weyl group of a standard classical root system on ``k`` coordinates, in the
    same orientation as :mod:`blocktilt.lie_data` (type A acts on ``k`` coordinates
    and has rank ``k - 1``).
    """

    def __init__(self, letter: LieType, k: int) -> None:
        if k < 1 or (letter is LieType.D and k < 2):
            raise IllegalLevel(f"no standard {letter.value} group on {k} coordinates")
        self.letter = letter
        self.k = k
        self.simple = simple_roots(letter, k) if k >= letter.min_level else []
        self.rank = len(self.simple)
        self.generators: List[SignedPerm] = [
            reflection(alpha).signed(k) for alpha in self.simple
        ]
        self._positive = [alpha.vector() for alpha in positive_roots(letter, k)]

    @property
    def identity(self) -> SignedPerm:
        return tuple(range(1, self.k + 1))

    @property
    def order(self) -> int:
        return group_order(self.letter, self.k)

    def mul(self, g: SignedPerm, h: SignedPerm) -> SignedPerm:
        return _compose(g, h)

    def inverse(self, g: SignedPerm) -> SignedPerm:
        return _invert(g)

    def act(self, g: SignedPerm, u: Sequence) -> list:
        return _apply(g, u)

    def length(self, g: SignedPerm) -> int:
        return sum(
            1 for vec in self._positive if not _is_positive_vector(self.letter, _image(g, vec))
        )

    def is_left_descent(self, g: SignedPerm, r: int) -> bool:
        """Whether ``l(s_r g) < l(g)``, i.e. ``g^-1`` sends ``alpha_r`` negative."""
        return not _is_positive_vector(self.letter, _image(_invert(g), self.simple[r - 1].vector()))

    def left(self, r: int, g: SignedPerm) -> SignedPerm:
        return _compose(self.generators[r - 1], g)

    def right(self, g: SignedPerm, r: int) -> SignedPerm:
        return _compose(g, self.generators[r - 1])

    def from_word(self, word: Iterable[int]) -> SignedPerm:
        g = self.identity
        for r in word:
            if not 1 <= r <= self.rank:
                raise IllegalLevel(f"generator {r} outside 1..{self.rank}")
            g = self.right(g, r)
        return g

    def reduced_word(self, g: SignedPerm) -> Tuple[int, ...]:
        """The lexicographically least reduced word of ``g``."""
        word = []
        while True:
            for r in range(1, self.rank + 1):
                if self.is_left_descent(g, r):
                    word.append(r)
                    g = self.left(r, g)
                    break
            else:
                return tuple(word)

    def longest(self) -> SignedPerm:
        k = self.k
        if self.letter is LieType.A:
            return tuple(range(k, 0, -1))
        if self.letter is LieType.D and k % 2:
            return (1,) + tuple(-a for a in range(2, k + 1))
        return tuple(-a for a in range(1, k + 1))

    def elements(self) -> List[SignedPerm]:
        """All elements, breadth-first from the identity (so sorted by length)."""
        seen = {self.identity}
        order = [self.identity]
        queue = deque(order)
        while queue:
            g = queue.popleft()
            for r in range(1, self.rank + 1):
                h = self.right(g, r)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    queue.append(h)
        return order

    def simple_pairing(self, u: Sequence, r: int) -> Fraction:
        return pair(list(u), self.simple[r - 1])

    def antidominant(self, u: Sequence) -> Tuple[list, SignedPerm]:
        """
        Return ``(u0, g)`` with ``u0`` antidominant and ``g(u0) = u``, ``g`` of minimal
        length. Reflects across walls with a positive pairing until none is left.
        """
        u = list(u)
        word = []
        while True:
            for r in range(1, self.rank + 1):
                if self.simple_pairing(u, r) > 0:
                    u = _apply(self.generators[r - 1], u)
                    word.append(r)
                    break
            else:
                return u, self.from_word(word)

    def orbit(self, u: Sequence) -> List[tuple]:
        start = tuple(u)
        seen = {start}
        order = [start]
        queue = deque(order)
        while queue:
            x = queue.popleft()
            for g in self.generators:
                y = tuple(_apply(g, x))
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    queue.append(y)
        return order


@dataclass(frozen=True)
class Component:
    """
    One irreducible piece of an integral root subsystem, realized in standard
    coordinates ``u_a = signs[a] * v[indices[a]]``.
    """

    letter: LieType
    indices: Tuple[int, ...]
    signs: Tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.indices) - 1 if self.letter is LieType.A else len(self.indices)

    @property
    def trivial(self) -> bool:
        k = len(self.indices)
        return (self.letter is LieType.A and k < 2) or (self.letter is LieType.D and k < 2)

    @cached_property
    def group(self) -> StandardGroup:
        return StandardGroup(self.letter, len(self.indices))

    def coords(self, v: Sequence[Fraction]) -> List[Fraction]:
        return [s * v[i - 1] for i, s in zip(self.indices, self.signs)]

    def write_back(self, v: Sequence[Fraction], u: Sequence[Fraction]) -> List[Fraction]:
        out = list(v)
        for i, s, x in zip(self.indices, self.signs, u):
            out[i - 1] = s * x
        return out

    def ambient_root(self, t: LieType, alpha: Root) -> Root:
        vec: Dict[int, int] = {}
        for a, c in alpha.vector().items():
            vec[self.indices[a - 1]] = c * self.signs[a - 1]
        return _root_from_vector(t, vec)

    def ambient_signed(self, g: SignedPerm) -> Dict[int, int]:
        """Ambient images ``{p_a: +-p_b}`` of a component element."""
        out = {}
        for a, img in enumerate(g, start=1):
            b = abs(img)
            s = (1 if img > 0 else -1) * self.signs[a - 1] * self.signs[b - 1]
            out[self.indices[a - 1]] = s * self.indices[b - 1]
        return out

    def describe(self) -> str:
        return f"{self.letter.value}{self.rank}"


def _root_from_vector(t: LieType, vec: Dict[int, int]) -> Root:
    items = sorted((k, c) for k, c in vec.items() if c)
    if len(items) == 1:
        (k, c), = items
        return Root(t, "long" if abs(c) == 2 else "short", k)
    (p, cp), (q, cq) = items
    if cp == cq:
        return Root(t, "sum", q, p)
    return Root(t, "diff", p, q) if cp > 0 else Root(t, "diff", q, p)


def ambient_element(t: LieType, parts: Iterable[Tuple[Component, SignedPerm]]) -> WeylElement:
    images: Dict[int, int] = {}
    for comp, g in parts:
        images.update(comp.ambient_signed(g))
    size = max(images) if images else 0
    signed = tuple(images.get(a, a) for a in range(1, size + 1))
    return WeylElement.from_signed(t, signed)


_NORMAL = {"C": "B"}


@dataclass(frozen=True)
class CoxeterDescriptor:
    """
    Finite components as ``(letter, rank)`` pairs, plus the infinite tail's letter.

    Components keep the order they were given in; it fixes the generator alphabet of
    words over the product. :meth:`normalized` sorts.
    """

    components: Tuple[Tuple[str, int], ...] = ()
    tail: Optional[str] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "components", tuple(self.components))

    def normalized(self) -> "CoxeterDescriptor":
        out: List[Tuple[str, int]] = []
        for letter, rank in self.components:
            letter = _NORMAL.get(letter, letter)
            if rank == 0 or (letter == "D" and rank == 1):
                continue
            if letter == "B" and rank == 1:
                out.append(("A", 1))
            elif letter == "D" and rank == 2:
                out.extend([("A", 1), ("A", 1)])
            elif letter == "D" and rank == 3:
                out.append(("A", 3))
            else:
                out.append((letter, rank))
        tail = _NORMAL.get(self.tail, self.tail) if self.tail else None
        return CoxeterDescriptor(tuple(sorted(out)), tail)

    @property
    def key(self) -> str:
        """Cache key of the finite part (the tail never enters a KL computation)."""
        return "x".join(f"{letter}{rank}" for letter, rank in self.components) or "A0"

    def __str__(self) -> str:
        return self.key + (f"+{self.tail}_inf" if self.tail else "")

    @classmethod
    def parse(cls, text: str) -> "CoxeterDescriptor":
        body, _, tail = text.strip().partition("+")
        comps = []
        for part in body.split("x"):
            part = part.strip()
            if not part:
                continue
            letter, digits = part[0].upper(), part[1:]
            if letter not in "ABCD" or not digits.isdigit():
                raise ParseError(f"cannot parse descriptor component {part!r}")
            comps.append((letter, int(digits)))
        tail_letter = tail.replace("_inf", "").strip().upper() or None
        return cls(tuple(comps), tail_letter)


def coxeter_isomorphic(d1: CoxeterDescriptor, d2: CoxeterDescriptor) -> bool:
    return d1.normalized() == d2.normalized()


@dataclass(frozen=True)
class IntegralSubsystem:
    positive: Tuple[Root, ...]
    simple: Tuple[Root, ...]
    descriptor: CoxeterDescriptor
    components: Tuple[Component, ...]
    scope_level: int


def _residue(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def _components(lam: Weight, scope_level: int) -> List[Component]:
    t = lam.lie_type
    vals = lam.values(scope_level)
    if t is LieType.A:
        classes: Dict[Fraction, List[int]] = {}
        for i, x in enumerate(vals, start=1):
            classes.setdefault(_residue(x), []).append(i)
        comps = [Component(LieType.A, tuple(idx), (1,) * len(idx)) for idx in classes.values()]
    else:
        classes2: Dict[Fraction, List[int]] = {}
        for i, x in enumerate(vals, start=1):
            r = _residue(x)
            classes2.setdefault(min(r, _residue(-x)), []).append(i)
        comps = []
        for key, idx in classes2.items():
            if key == 0:
                comps.append(Component(t, tuple(idx), (1,) * len(idx)))
            elif key == Fraction(1, 2):
                letter = LieType.D if t in {LieType.C, LieType.D} else LieType.B
                comps.append(Component(letter, tuple(idx), (1,) * len(idx)))
            else:
                front = sorted((i for i in idx if _residue(vals[i - 1]) == key), reverse=True)
                back = sorted(i for i in idx if _residue(vals[i - 1]) != key)
                comps.append(
                    Component(
                        LieType.A,
                        tuple(front) + tuple(back),
                        (1,) * len(front) + (-1,) * len(back),
                    )
                )
    comps = [c for c in comps if not c.trivial]
    comps.sort(key=lambda c: min(c.indices))
    return comps


def _check_scope(lam: Weight, scope_level: int) -> None:
    if scope_level < lam.support or scope_level < lam.lie_type.min_level:
        raise ScopeTooSmall(
            f"scope level {scope_level} below support {lam.support} of {lam}"
        )


def integral_subsystem(lam: Weight, scope_level: int) -> IntegralSubsystem:
    _check_scope(lam, scope_level)
    t = lam.lie_type
    comps = _components(lam, scope_level)
    coords = dict(lam.coords)
    positive = tuple(
        alpha for alpha in positive_roots(t, scope_level) if pair(coords, alpha).denominator == 1
    )
    simple = tuple(
        comp.ambient_root(t, alpha) for comp in comps for alpha in comp.group.simple
    )
    descriptor = CoxeterDescriptor(
        tuple(sorted((c.letter.value, c.rank) for c in comps)), t.value
    )
    return IntegralSubsystem(positive, simple, descriptor, tuple(comps), scope_level)


def natural_reduction(lam: Weight, scope_level: int) -> List[Tuple[Component, Weight]]:
    """``lam^natural``: one standard-coordinate weight per integral component."""
    v = shifted(lam, scope_level)
    out = []
    for comp in integral_subsystem(lam, scope_level).components:
        u = comp.coords(v)
        values = [x - rho_coord(comp.letter, a) for a, x in enumerate(u, 1)]
        out.append((comp, Weight.of(comp.letter, values)))
    return out


_SIGN = {1: "+", 0: "0", -1: "-"}


@dataclass(frozen=True)
class FacetSignature:
    scope_level: int
    signature: Tuple[Tuple[Root, str], ...]

    def as_dict(self) -> Dict[Root, str]:
        return dict(self.signature)

    def counts(self) -> Dict[str, int]:
        out = {"+": 0, "0": 0, "-": 0}
        for _, s in self.signature:
            out[s] += 1
        return out


def facet_signature(lam: Weight, scope_level: int) -> FacetSignature:
    sub = integral_subsystem(lam, scope_level)
    v = shifted(lam, scope_level)
    sig = []
    for alpha in sub.positive:
        x = pair(v, alpha)
        sig.append((alpha, _SIGN[(x > 0) - (x < 0)]))
    return FacetSignature(scope_level, tuple(sig))


def facet_scope(*weights: Weight) -> int:
    """
    A level beyond which every positive root pairs positively with each ``lam + rho``:
    past both the supports and the magnitudes of the shifted coordinates.
    """
    t = weights[0].lie_type
    level = max([w.support for w in weights] + [t.min_level])
    bound = 0
    for w in weights:
        for x in shifted(w, level):
            bound = max(bound, ceil(abs(x)))
    return max(level, bound) + 2


def same_facet(lam: Weight, mu: Weight) -> bool:
    if lam.lie_type is not mu.lie_type:
        return False
    level = facet_scope(lam, mu)
    a = integral_subsystem(lam, level)
    b = integral_subsystem(mu, level)
    if a.positive != b.positive:
        return False
    return facet_signature(lam, level) == facet_signature(mu, level)


def full_component(t: LieType, level: int) -> Component:
    check_level(t, level)
    return Component(t, tuple(range(1, level + 1)), (1,) * level)


def antidominant_representative(lam: Weight, level: int) -> Tuple[Weight, WeylElement]:
    t = lam.lie_type
    _check_scope(lam, level)
    v = shifted(lam, level)
    for alpha in positive_roots(t, level):
        if pair(v, alpha).denominator != 1:
            raise NotIntegral(f"{lam} pairs non-integrally with {alpha}")
    comp = full_component(t, level)
    u0, g = comp.group.antidominant(comp.coords(v))
    xi = unshifted(t, comp.write_back(v, u0))
    return xi, ambient_element(t, [(comp, g)])


def dot_stabilizer(lam: Weight, level: int) -> List[Root]:
    t = lam.lie_type
    v = shifted(lam, max(level, lam.support))
    return [alpha for alpha in positive_roots(t, level) if pair(v, alpha) == 0]


def longest_element(t: LieType, level: int) -> WeylElement:
    comp = full_component(t, level)
    return ambient_element(t, [(comp, comp.group.longest())])


def block_members(lam: Weight, level: int) -> List[Weight]:
    """The finite dot orbit ``W_level[lam] . lam``, highest members first."""
    t = lam.lie_type
    sub = integral_subsystem(lam, level)
    v = shifted(lam, level)
    vectors = [v]
    for comp in sub.components:
        orbit = comp.group.orbit(comp.coords(v))
        vectors = [comp.write_back(x, u) for x in vectors for u in orbit]
    members = {unshifted(t, x) for x in vectors}
    xi, _ = antidominant_in_subsystem(lam, level)

    def key(m: Weight):
        coeffs = root_lattice_coords(m - xi) or {}
        return (-height(coeffs), str(m))

    return sorted(members, key=key)


def antidominant_in_subsystem(
    lam: Weight, level: int
) -> Tuple[Weight, List[Tuple[Component, SignedPerm]]]:
    """Antidominant weight of ``W_level[lam] . lam``; per component, ``g`` with ``g . xi = lam``."""
    t = lam.lie_type
    sub = integral_subsystem(lam, level)
    v = shifted(lam, level)
    parts = []
    for comp in sub.components:
        u0, g = comp.group.antidominant(comp.coords(v))
        v = comp.write_back(v, u0)
        parts.append((comp, g))
    return unshifted(t, v), parts
