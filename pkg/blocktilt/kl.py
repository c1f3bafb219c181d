"""
Bruhat order and Kazhdan-Lusztig polynomials on finite classical Weyl groups and their
products.

Elements of a product group are tuples of component signed permutations. Words use the
concatenated alphabet of the descriptor: the generators of the first component are
``1..r1``, those of the second ``r1+1..r1+r2`` and so on. Canonical words are the
lexicographically least reduced words, which for a product is the concatenation of the
componentwise ones.

Two recursions are implemented. The main one runs on mu-coefficients with left descents.
The second one solves the bar-invariance equation against R-polynomials, evaluating
``x`` in decreasing length; it is used to cross-check the first.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import ToolConfig
from .errors import BlocktiltError, CacheIOError, OutOfScope, ParseError, ScaleGuardrail
from .lie_data import LieType
from .utils import load_records, log, save_records
from .weyl import CoxeterDescriptor, SignedPerm, StandardGroup, WeylElement, group_order

Poly = Tuple[int, ...]
Word = Tuple[int, ...]

# Coefficient arrays use dtype=object so entries stay Python ints of any size.
_ZERO = np.zeros(0, dtype=object)
_ONE = np.ones(1, dtype=object)
_Q_MINUS_ONE = np.array([-1, 1], dtype=object)


def _arr(coeffs: Sequence[int] | np.ndarray) -> np.ndarray:
    a = np.array(list(coeffs), dtype=object)
    nz = np.flatnonzero(a != 0)
    return a[: nz[-1] + 1] if nz.size else _ZERO


def _padd(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros(max(len(a), len(b)), dtype=object)
    out[: len(a)] += a
    out[: len(b)] += b
    return _arr(out)


def _pmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if not len(a) or not len(b):
        return _ZERO
    return _arr(np.convolve(a, b))


def _pshift(a: np.ndarray, k: int, c: int = 1) -> np.ndarray:
    """``c * q^k * a``"""
    if not len(a):
        return _ZERO
    return _arr(np.concatenate([np.zeros(k, dtype=object), c * a]))


def _as_poly(a: np.ndarray) -> Poly:
    return tuple(int(c) for c in a)


@dataclass(frozen=True)
class KLPolynomial:
    coeffs: Poly = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _as_poly(_arr(self.coeffs)))

    @classmethod
    def one(cls) -> "KLPolynomial":
        return cls((1,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def at_one(self) -> int:
        return sum(self.coeffs)

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __mul__(self, other: "KLPolynomial") -> "KLPolynomial":
        return KLPolynomial(_pmul(_arr(self.coeffs), _arr(other.coeffs)))

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            else:
                parts.append(f"{c}{mono}")
        return "+".join(parts).replace("+-", "-")


def component_size(letter: str, rank: int) -> int:
    """Number of coordinates of the standard realization of a component."""
    return rank + 1 if letter == "A" else rank


def check_guardrail(descriptor: CoxeterDescriptor, max_group_order: int) -> None:
    for letter, rank in descriptor.components:
        if rank == 0:
            continue
        order = group_order(LieType(letter), component_size(letter, rank))
        if order > max_group_order:
            log(f"rejected {letter}{rank}: group order {order} exceeds {max_group_order}")
            raise ScaleGuardrail(
                f"component {letter}{rank} has order {order} > max_group_order {max_group_order}"
            )


class ComponentKL:
    """Memoized Bruhat order, KL and R polynomials for one standard group."""

    def __init__(self, group: StandardGroup) -> None:
        self.group = group
        self._by_length: Optional[List[List[SignedPerm]]] = None
        self._length: Dict[SignedPerm, int] = {}
        self._bruhat: Dict[Tuple[SignedPerm, SignedPerm], bool] = {}
        self._p: Dict[Tuple[SignedPerm, SignedPerm], np.ndarray] = {}
        self._r: Dict[Tuple[SignedPerm, SignedPerm], np.ndarray] = {}
        self._p_via_r: Dict[SignedPerm, Dict[SignedPerm, np.ndarray]] = {}

    def length(self, g: SignedPerm) -> int:
        if g not in self._length:
            self._length[g] = self.group.length(g)
        return self._length[g]

    def by_length(self) -> List[List[SignedPerm]]:
        if self._by_length is None:
            layers: List[List[SignedPerm]] = []
            for g in self.group.elements():
                ell = self.length(g)
                while len(layers) <= ell:
                    layers.append([])
                layers[ell].append(g)
            self._by_length = layers
        return self._by_length

    def first_left_descent(self, g: SignedPerm) -> Optional[int]:
        for r in range(1, self.group.rank + 1):
            if self.group.is_left_descent(g, r):
                return r
        return None

    def bruhat_leq(self, x: SignedPerm, y: SignedPerm) -> bool:
        key = (x, y)
        if key in self._bruhat:
            return self._bruhat[key]
        if x == y:
            result = True
        elif self.length(x) >= self.length(y):
            result = False
        else:
            s = self.first_left_descent(y)
            sy = self.group.left(s, y)
            if self.group.is_left_descent(x, s):
                result = self.bruhat_leq(self.group.left(s, x), sy)
            else:
                result = self.bruhat_leq(x, sy)
        self._bruhat[key] = result
        return result

    def mu(self, z: SignedPerm, v: SignedPerm) -> int:
        d = self.length(v) - self.length(z)
        if d % 2 == 0:
            return 0
        p = self._p_array(z, v)
        k = (d - 1) // 2
        return int(p[k]) if k < len(p) else 0

    def p(self, x: SignedPerm, y: SignedPerm) -> Poly:
        return _as_poly(self._p_array(x, y))

    def r(self, x: SignedPerm, w: SignedPerm) -> Poly:
        return _as_poly(self._r_array(x, w))

    def _p_array(self, x: SignedPerm, y: SignedPerm) -> np.ndarray:
        key = (x, y)
        if key in self._p:
            return self._p[key]
        if not self.bruhat_leq(x, y):
            result = _ZERO
        elif x == y:
            result = _ONE
        else:
            g = self.group
            s = self.first_left_descent(y)
            if g.is_left_descent(x, s):
                result = self._p_array(g.left(s, x), y)
            else:
                v = g.left(s, y)
                result = _padd(_pshift(self._p_array(g.left(s, x), v), 1), self._p_array(x, v))
                lx, ly, lv = self.length(x), self.length(y), self.length(v)
                layers = self.by_length()
                for ell in range(lx, lv):
                    for z in layers[ell]:
                        if not g.is_left_descent(z, s) or not self.bruhat_leq(z, v):
                            continue
                        if not self.bruhat_leq(x, z):
                            continue
                        m = self.mu(z, v)
                        if m:
                            shift = (ly - ell) // 2
                            result = _padd(result, _pshift(self._p_array(x, z), shift, -m))
        self._p[key] = result
        return result

    def _r_array(self, x: SignedPerm, w: SignedPerm) -> np.ndarray:
        key = (x, w)
        if key in self._r:
            return self._r[key]
        if not self.bruhat_leq(x, w):
            result = _ZERO
        elif x == w:
            result = _ONE
        else:
            g = self.group
            s = self.first_left_descent(w)
            sw = g.left(s, w)
            sx = g.left(s, x)
            if g.is_left_descent(x, s):
                result = self._r_array(sx, sw)
            else:
                # R_{x,w} = (q - 1) R_{x,sw} + q R_{sx,sw}
                result = _padd(
                    _pmul(_Q_MINUS_ONE, self._r_array(x, sw)), _pshift(self._r_array(sx, sw), 1)
                )
        self._r[key] = result
        return result

    def p_via_r(self, x: SignedPerm, y: SignedPerm) -> Poly:
        """Second formulation: ``q^d P(1/q) - P = sum_{x<z<=y} R_{x,z} P_{z,y}``."""
        if y not in self._p_via_r:
            self._p_via_r[y] = self._column_via_r(y)
        return _as_poly(self._p_via_r[y].get(x, _ZERO))

    def _column_via_r(self, y: SignedPerm) -> Dict[SignedPerm, np.ndarray]:
        ly = self.length(y)
        layers = self.by_length()
        column: Dict[SignedPerm, np.ndarray] = {y: _ONE}
        below: List[SignedPerm] = [y]
        for ell in range(ly - 1, -1, -1):
            for x in layers[ell]:
                if not self.bruhat_leq(x, y):
                    continue
                total = _ZERO
                for z in below:
                    if self.bruhat_leq(x, z):
                        total = _padd(total, _pmul(self._r_array(x, z), column[z]))
                half = (ly - ell - 1) // 2
                column[x] = _arr(-total[: half + 1])
            below.extend(g for g in layers[ell] if g in column)
        return column


WordLike = Union[WeylElement, Sequence[int], str]


def parse_word(text: str) -> Word:
    text = text.strip()
    if not text or text in {"e", "1_W"}:
        return ()
    try:
        return tuple(int(tok) for tok in text.replace(",", " ").split())
    except ValueError:
        raise ParseError(f"cannot parse word {text!r}") from None


def format_word(word: Sequence[int]) -> str:
    return " ".join(str(r) for r in word) or "e"


class CoxeterScope:
    """The product group of a descriptor, with its concatenated generator alphabet."""

    def __init__(self, descriptor: CoxeterDescriptor, cache: "KLCache") -> None:
        check_guardrail(descriptor, cache.max_group_order)
        self.descriptor = descriptor
        self.parts: List[Tuple[str, int, ComponentKL]] = [
            (letter, rank, cache.engine(letter, rank))
            for letter, rank in descriptor.components
            if rank > 0
        ]
        self.rank = sum(rank for _, rank, _ in self.parts)

    def split_word(self, word: Sequence[int]) -> List[Word]:
        out: List[List[int]] = [[] for _ in self.parts]
        for r in word:
            if not 1 <= r <= self.rank:
                raise OutOfScope(f"generator {r} outside 1..{self.rank} of {self.descriptor}")
            offset = 0
            for idx, (_, rank, _) in enumerate(self.parts):
                if r <= offset + rank:
                    out[idx].append(r - offset)
                    break
                offset += rank
        return [tuple(w) for w in out]

    def element(self, x: WordLike) -> Tuple[SignedPerm, ...]:
        if isinstance(x, WeylElement):
            if len(self.parts) != 1:
                raise OutOfScope(f"a single ambient element cannot live in {self.descriptor}")
            letter, _, engine = self.parts[0]
            if x.lie_type.value != letter or x.size > engine.group.k:
                raise OutOfScope(f"element moves indices outside {self.descriptor}")
            return (x.signed(engine.group.k),)
        word = parse_word(x) if isinstance(x, str) else tuple(x)
        pieces = self.split_word(word)
        return tuple(engine.group.from_word(w) for (_, _, engine), w in zip(self.parts, pieces))


def bruhat_leq(x: WordLike, y: WordLike, scope: CoxeterDescriptor, cache: "KLCache") -> bool:
    sc = CoxeterScope(scope, cache)
    xs, ys = sc.element(x), sc.element(y)
    return all(engine.bruhat_leq(a, b) for (_, _, engine), a, b in zip(sc.parts, xs, ys))


def kl_polynomial(
    x: WordLike, y: WordLike, scope: CoxeterDescriptor, cache: "KLCache"
) -> KLPolynomial:
    sc = CoxeterScope(scope, cache)
    xs, ys = sc.element(x), sc.element(y)
    result = KLPolynomial.one()
    for (letter, rank, engine), a, b in zip(sc.parts, xs, ys):
        result = result * cache.lookup(letter, rank, engine, a, b)
        if result.is_zero:
            break
    return result


def kl_at_one(x: WordLike, y: WordLike, scope: CoxeterDescriptor, cache: "KLCache") -> int:
    return kl_polynomial(x, y, scope, cache).at_one()


CacheKey = Tuple[str, Word, Word]


class KLCache:
    """
    Component-level KL polynomials keyed by ``(descriptor, x_word, y_word)``. Readers may share
    a cache; writes are expected from a single process.
    """

    def __init__(
        self,
        path: Optional[str] = None,
        key: str = "blocktilt:kl-cache",
        max_group_order: int = 1_000_000,
        spot_checks: int = 0,
    ) -> None:
        self.origin = path
        self.key = key
        self.max_group_order = max_group_order
        self.spot_checks = spot_checks
        self.entries: Dict[CacheKey, KLPolynomial] = {}
        self.dirty = False
        self._engines: Dict[Tuple[str, int], ComponentKL] = {}

    @classmethod
    def from_config(cls, config: ToolConfig) -> "KLCache":
        return cls(config.cache_path, config.cache_key, config.max_group_order, config.spot_checks)

    def engine(self, letter: str, rank: int) -> ComponentKL:
        key = (letter, rank)
        if key not in self._engines:
            group = StandardGroup(LieType(letter), component_size(letter, rank))
            self._engines[key] = ComponentKL(group)
        return self._engines[key]

    def lookup(
        self, letter: str, rank: int, engine: ComponentKL, x: SignedPerm, y: SignedPerm
    ) -> KLPolynomial:
        group = engine.group
        key = (f"{letter}{rank}", group.reduced_word(x), group.reduced_word(y))
        hit = self.entries.get(key)
        if hit is not None:
            return hit
        poly = KLPolynomial(engine.p(x, y))
        self.entries[key] = poly
        self.dirty = True
        return poly

    def recompute(self, key: CacheKey) -> KLPolynomial:
        desc = CoxeterDescriptor.parse(key[0])
        if len(desc.components) != 1:
            raise ParseError(f"cache descriptor {key[0]!r} is not a single component")
        letter, rank = desc.components[0]
        engine = self.engine(letter, rank)
        x, y = engine.group.from_word(key[1]), engine.group.from_word(key[2])
        return KLPolynomial(engine.p(x, y))

    def records(self) -> List[Dict]:
        rows = [
            {
                "descriptor": d,
                "x_word": format_word(x),
                "y_word": format_word(y),
                "coeffs": list(p.coeffs),
            }
            for (d, x, y), p in self.entries.items()
        ]
        rows.sort(key=lambda r: (r["descriptor"], r["x_word"], r["y_word"]))
        return rows

    def load(self) -> "KLCache":
        if self.origin is None:
            return self
        records = load_records(self.origin, self.key)
        for record in records:
            try:
                key = (
                    str(record["descriptor"]),
                    parse_word(str(record["x_word"])),
                    parse_word(str(record["y_word"])),
                )
                poly = KLPolynomial(tuple(int(c) for c in record["coeffs"]))
            except (KeyError, TypeError, ValueError, ParseError) as exc:
                raise CacheIOError(f"{self.origin}: malformed cache record {record!r}") from exc
            self.entries[key] = poly
        log(f"KL cache loaded from {self.origin}: {len(self.entries)} entries")
        self._spot_check()
        return self

    def _spot_check(self) -> None:
        keys = sorted(self.entries)[: self.spot_checks]
        for key in keys:
            try:
                fresh = self.recompute(key)
            except BlocktiltError as exc:
                raise CacheIOError(f"cache entry {key} cannot be recomputed: {exc}") from exc
            if fresh != self.entries[key]:
                raise CacheIOError(f"cache entry {key} disagrees with recomputation")
        if keys:
            log(f"KL cache spot check passed ({len(keys)} entries)")

    def save(self) -> bool:
        if self.origin is None or not self.dirty:
            return False
        save_records(self.origin, self.key, self.records())
        self.dirty = False
        log(f"KL cache saved to {self.origin}: {len(self.entries)} entries")
        return True
