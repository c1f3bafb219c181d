"""
Root data for the four classical direct limits, truncated at a finite level.

Conventions (fixed for the whole package):

* type A is gl-style: weights are coordinate vectors, positive roots are
  ``e_i - e_j`` with ``i < j``;
* types B, C, D use the tail-growing Dynkin Borel: positive roots are
  ``e_j +- e_i`` with ``j > i`` plus the short roots ``e_i`` (B) or the long
  roots ``2e_i`` (C).

With these orientations one rho serves every level::

    A: rho_i = -i      B: rho_i = i - 1/2      C: rho_i = i      D: rho_i = i - 1

Simple roots at level n are a prefix of the simple roots at level n + 1, so a
root-lattice element is written as a tuple of simple-root coefficients that
does not depend on the level it was computed at.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import IllegalLevel, ShapeMismatch, TypeMismatch

# simple-root coefficients, trailing zeros stripped
Offset = Tuple[int, ...]


class LieType(Enum):
    A = "A"
    B = "B"
    C = "C"
    D = "D"

    @property
    def min_level(self) -> int:
        return 2 if self is LieType.D else 1


def check_level(t: LieType, level: int) -> None:
    if level < t.min_level:
        raise IllegalLevel(f"type {t.value} needs level >= {t.min_level}, got {level}")


def rho_coord(t: LieType, i: int) -> Fraction:
    if t is LieType.A:
        return Fraction(-i)
    if t is LieType.B:
        return Fraction(2 * i - 1, 2)
    if t is LieType.C:
        return Fraction(i)
    return Fraction(i - 1)


@dataclass(frozen=True)
class Weight:
    lie_type: LieType
    # (index, value) pairs, sorted by index, zero values dropped
    coords: Tuple[Tuple[int, Fraction], ...] = ()

    def __post_init__(self) -> None:
        clean = tuple(sorted((int(i), Fraction(v)) for i, v in self.coords if v != 0))
        for i, _ in clean:
            if i < 1:
                raise ValueError(f"weight index must be >= 1, got {i}")
        if len({i for i, _ in clean}) != len(clean):
            raise ValueError("duplicate weight index")
        object.__setattr__(self, "coords", clean)

    @classmethod
    def of(cls, t: LieType, values: Iterable) -> "Weight":
        """Positional constructor: ``values[0]`` is the coordinate at index 1."""
        return cls(t, tuple((i, Fraction(v)) for i, v in enumerate(values, start=1)))

    @classmethod
    def from_map(cls, t: LieType, values: Mapping[int, object]) -> "Weight":
        return cls(t, tuple((i, Fraction(v)) for i, v in values.items()))

    @classmethod
    def zero(cls, t: LieType) -> "Weight":
        return cls(t)

    def __getitem__(self, index: int) -> Fraction:
        for i, v in self.coords:
            if i == index:
                return v
        return Fraction(0)

    @property
    def support(self) -> int:
        """Largest index carrying a nonzero coordinate (0 for the zero weight)."""
        return self.coords[-1][0] if self.coords else 0

    def values(self, level: int) -> List[Fraction]:
        data = dict(self.coords)
        return [data.get(i, Fraction(0)) for i in range(1, level + 1)]

    def _check(self, other: "Weight") -> None:
        if self.lie_type is not other.lie_type:
            raise TypeMismatch(f"{self.lie_type.value} vs {other.lie_type.value}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        data: Dict[int, Fraction] = dict(self.coords)
        for i, v in other.coords:
            data[i] = data.get(i, Fraction(0)) + v
        return Weight.from_map(self.lie_type, data)

    def __neg__(self) -> "Weight":
        return Weight(self.lie_type, tuple((i, -v) for i, v in self.coords))

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def scale(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(self.lie_type, tuple((i, c * v) for i, v in self.coords))

    def __str__(self) -> str:
        return ",".join(str(v) for v in self.values(self.support)) or "0"


def shifted(lam: Weight, level: int) -> List[Fraction]:
    """Coordinates of ``lam + rho`` at indices ``1..level``."""
    t = lam.lie_type
    return [v + rho_coord(t, i) for i, v in enumerate(lam.values(level), start=1)]


def unshifted(t: LieType, v: List[Fraction]) -> Weight:
    """Inverse of :func:`shifted` (indices beyond ``len(v)`` are left at zero)."""
    return Weight.of(t, [x - rho_coord(t, i) for i, x in enumerate(v, start=1)])


_SHAPES = {
    LieType.A: {"diff"},
    LieType.B: {"diff", "sum", "short"},
    LieType.C: {"diff", "sum", "long"},
    LieType.D: {"diff", "sum"},
}


@dataclass(frozen=True)
class Root:
    """
    ``diff``: e_i - e_j; ``sum``: e_i + e_j (stored with i > j); ``short``: e_i;
    ``long``: 2e_i.
    """

    lie_type: LieType
    shape: str
    i: int
    j: int = 0

    def __post_init__(self) -> None:
        if self.shape not in {"diff", "sum", "short", "long"}:
            raise ShapeMismatch(f"unknown root shape {self.shape!r}")
        if self.i < 1:
            raise ShapeMismatch("root index must be >= 1")
        if self.shape in {"diff", "sum"}:
            if self.j < 1 or self.i == self.j:
                raise ShapeMismatch(f"root needs two distinct indices, got {self.i}, {self.j}")
            if self.shape == "sum" and self.i < self.j:
                i, j = self.j, self.i
                object.__setattr__(self, "i", i)
                object.__setattr__(self, "j", j)
        elif self.j:
            raise ShapeMismatch(f"{self.shape} root takes one index")

    def vector(self) -> Dict[int, int]:
        if self.shape == "diff":
            return {self.i: 1, self.j: -1}
        if self.shape == "sum":
            return {self.i: 1, self.j: 1}
        if self.shape == "short":
            return {self.i: 1}
        return {self.i: 2}

    def coroot(self) -> Dict[int, Fraction]:
        if self.shape == "short":
            return {self.i: Fraction(2)}
        if self.shape == "long":
            return {self.i: Fraction(1)}
        return {k: Fraction(c) for k, c in self.vector().items()}

    def as_weight(self) -> Weight:
        return Weight.from_map(self.lie_type, self.vector())

    @property
    def top(self) -> int:
        return max(self.i, self.j)

    def __str__(self) -> str:
        if self.shape == "diff":
            return f"e{self.i}-e{self.j}"
        if self.shape == "sum":
            return f"e{self.i}+e{self.j}"
        if self.shape == "short":
            return f"e{self.i}"
        return f"2e{self.i}"


def parse_root(t: LieType, text: str) -> Root:
    s = text.replace(" ", "")
    try:
        if s.startswith("2e"):
            return Root(t, "long", int(s[2:]))
        if "-" in s[1:]:
            a, b = s.split("-", 1)
            return Root(t, "diff", int(a.lstrip("e")), int(b.lstrip("e")))
        if "+" in s:
            a, b = s.split("+", 1)
            return Root(t, "sum", int(a.lstrip("e")), int(b.lstrip("e")))
        return Root(t, "short", int(s.lstrip("e")))
    except ValueError:
        raise ShapeMismatch(f"cannot parse root {text!r}") from None


def check_shape(t: LieType, alpha: Root) -> None:
    if alpha.shape not in _SHAPES[t]:
        raise ShapeMismatch(f"root {alpha} is not a type {t.value} root")


def pair(values: Mapping[int, Fraction] | List[Fraction], alpha: Root) -> Fraction:
    """Coroot pairing against a coordinate source (dict by index, or 1-based list)."""
    total = Fraction(0)
    for k, c in alpha.coroot().items():
        if isinstance(values, list):
            x = values[k - 1] if k <= len(values) else Fraction(0)
        else:
            x = values.get(k, Fraction(0))
        total += c * x
    return total


def coroot_pairing(lam: Weight, alpha: Root) -> Fraction:
    check_shape(lam.lie_type, alpha)
    return pair(dict(lam.coords), alpha)


def rho_pairing(t: LieType, alpha: Root) -> Fraction:
    check_shape(t, alpha)
    return sum((c * rho_coord(t, k) for k, c in alpha.coroot().items()), Fraction(0))


def simple_roots(t: LieType, level: int) -> List[Root]:
    check_level(t, level)
    if t is LieType.A:
        return [Root(t, "diff", i, i + 1) for i in range(1, level)]
    first = {
        LieType.B: Root(t, "short", 1),
        LieType.C: Root(t, "long", 1),
        LieType.D: Root(t, "sum", 2, 1),
    }[t]
    return [first] + [Root(t, "diff", i + 1, i) for i in range(1, level)]


def _raw_positive_roots(t: LieType, level: int) -> List[Root]:
    roots: List[Root] = []
    if t is LieType.A:
        for i in range(1, level + 1):
            for j in range(i + 1, level + 1):
                roots.append(Root(t, "diff", i, j))
        return roots
    for j in range(1, level + 1):
        if t is LieType.B:
            roots.append(Root(t, "short", j))
        elif t is LieType.C:
            roots.append(Root(t, "long", j))
        for i in range(1, j):
            roots.append(Root(t, "diff", j, i))
            roots.append(Root(t, "sum", j, i))
    return roots


def positive_roots(t: LieType, level: int) -> List[Root]:
    check_level(t, level)
    keyed = []
    for alpha in _raw_positive_roots(t, level):
        coeffs = root_lattice_coords(alpha.as_weight())
        assert coeffs is not None
        low = min(alpha.i, alpha.j or alpha.i)
        keyed.append(((height(coeffs), alpha.top, low, alpha.shape), alpha))
    keyed.sort(key=lambda item: item[0])
    return [alpha for _, alpha in keyed]


def _as_int(x: Fraction) -> Optional[int]:
    return int(x) if x.denominator == 1 else None


def root_lattice_coords(delta: Weight) -> Optional[Dict[int, int]]:
    """
    Coefficients of ``delta`` over the simple roots of its minimal enclosing level,
    or ``None`` when ``delta`` is outside the root lattice. Zero coefficients are omitted.
    """
    t = delta.lie_type
    m = delta.support
    if m == 0:
        return {}
    m = max(m, t.min_level)
    d = delta.values(m)
    coeffs: Dict[int, Fraction] = {}
    if t is LieType.A:
        running = Fraction(0)
        for k in range(1, m + 1):
            running += d[k - 1]
            coeffs[k] = running
        if coeffs.pop(m) != 0:
            return None
    else:
        suffix = [Fraction(0)] * (m + 2)
        for k in range(m, 0, -1):
            suffix[k] = suffix[k + 1] + d[k - 1]
        for k in range(2, m + 1):
            coeffs[k] = suffix[k]
        if t is LieType.B:
            coeffs[1] = suffix[1]
        elif t is LieType.C:
            coeffs[1] = suffix[1] / 2
        else:
            coeffs[1] = suffix[1] / 2
            coeffs[2] = (suffix[2] - d[0]) / 2
    out: Dict[int, int] = {}
    for k, c in coeffs.items():
        ci = _as_int(c)
        if ci is None:
            return None
        if ci:
            out[k] = ci
    return out


def height(coeffs: Mapping[int, int] | Offset) -> int:
    if isinstance(coeffs, tuple):
        return sum(coeffs)
    return sum(coeffs.values())


def to_offset(coeffs: Mapping[int, int]) -> Offset:
    if not coeffs:
        return ()
    top = max(k for k, c in coeffs.items() if c) if any(coeffs.values()) else 0
    return tuple(coeffs.get(k, 0) for k in range(1, top + 1))


def offset_of(delta: Weight) -> Optional[Offset]:
    coeffs = root_lattice_coords(delta)
    return None if coeffs is None else to_offset(coeffs)


def from_offset(t: LieType, beta: Offset) -> Weight:
    """Reconstruct ``sum_k beta[k] * alpha_k`` as a weight."""
    if not beta:
        return Weight.zero(t)
    level = max(len(beta), t.min_level)
    if t is LieType.A:
        level = len(beta) + 1
    total: Dict[int, Fraction] = {}
    for alpha, c in zip(simple_roots(t, level), beta):
        for k, x in alpha.vector().items():
            total[k] = total.get(k, Fraction(0)) + c * x
    return Weight.from_map(t, total)


def offset_add(a: Offset, b: Offset) -> Offset:
    n = max(len(a), len(b))
    out = [(a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def offset_level(t: LieType, beta: Offset) -> int:
    """Smallest level whose simple roots contain the support of ``beta``."""
    if not beta:
        return t.min_level
    return max(len(beta) + (1 if t is LieType.A else 0), t.min_level)
