"""Positive braids over a (twisted) Weyl group in right Deligne-Garside form.

A braid is ``delta * b_{w_m} ... b_{w_1}`` with every twist moved to the far
left (``delta b_x = b_{delta x delta^-1} delta``) and the untwisted factors in
right normal form: whenever ``l(w_{j+1} s) < l(w_{j+1})`` for a simple ``s``,
also ``l(s w_j) < l(w_j)``.  The rightmost factor ``w_1`` is the DG factor.

Factors are stored right to left (``_factors[0]`` is ``w_1``); ``dgn`` and
rendering go left to right.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .root_system import RootSystem
from .weyl import (Twist, WeylElement, identity, simple_reflection, trivial_twist,
                   twist_element)


class EmptyBraidError(ValueError):
    pass


def _repair(w2: WeylElement, w1: WeylElement) -> tuple[WeylElement, WeylElement, bool]:
    """Push right descents of w2 into w1 until the pair is in normal form."""
    rank = w1.sys.rank
    changed = False
    while True:
        for i in range(rank):
            if w2.right_descent(i) and not w1.left_descent(i):
                s = simple_reflection(w1.sys, i)
                w2, w1 = w2 * s, s * w1
                changed = True
                break
        else:
            return w2, w1, changed


def _normalize(factors_rl: list[WeylElement]) -> tuple[WeylElement, ...]:
    f = list(factors_rl)
    changed = True
    while changed:
        changed = False
        for k in range(len(f) - 1):
            f[k + 1], f[k], c = _repair(f[k + 1], f[k])
            changed |= c
    return tuple(x for x in f if x.length)


def _conj_by_twist(x: WeylElement, t: Twist) -> WeylElement:
    """t^-1 x t for an untwisted x."""
    if t == trivial_twist(x.sys):
        return x
    d = twist_element(x.sys, t)
    return d.inverse() * x * d


@dataclass(frozen=True)
class PositiveBraid:
    sys: RootSystem
    twist: Twist
    _factors: tuple[WeylElement, ...]

    @classmethod
    def from_elements(cls, sys: RootSystem, elems: Sequence[WeylElement]) -> "PositiveBraid":
        """The braid b_{e_1} b_{e_2} ... (leftmost first), twists moved left."""
        tw = trivial_twist(sys)
        untw: list[WeylElement] = []  # left to right
        for e in elems:
            if not e.is_untwisted:
                untw = [_conj_by_twist(y, e.twist) for y in untw]
                tw = tuple(tw[i] for i in e.twist)
            untw.append(e.untwisted)
        return cls(sys, tw, _normalize(list(reversed(untw))))

    @classmethod
    def from_word(cls, sys: RootSystem, word: Iterable[int]) -> "PositiveBraid":
        return cls.from_elements(sys, [simple_reflection(sys, i - 1) for i in word])

    def __mul__(self, other: "PositiveBraid") -> "PositiveBraid":
        # (D1 F1)(D2 F2) = D1 D2 (D2^-1 F1 D2) F2
        moved = [_conj_by_twist(x, other.twist) for x in self._factors]
        tw = tuple(self.twist[i] for i in other.twist)
        return PositiveBraid(self.sys, tw, _normalize(list(other._factors) + moved))

    def __pow__(self, d: int) -> "PositiveBraid":
        return braid_pow(self, d)

    @property
    def is_empty(self) -> bool:
        return not self._factors

    @property
    def length(self) -> int:
        return sum(x.length for x in self._factors)

    @property
    def factors(self) -> tuple[WeylElement, ...]:
        """Normal-form factors, leftmost first."""
        return tuple(reversed(self._factors))

    @property
    def factors_right_to_left(self) -> tuple[WeylElement, ...]:
        return self._factors

    def is_normal(self) -> bool:
        f = self._factors
        return all(is_normal_pair(f[k + 1], f[k]) for k in range(len(f) - 1))

    def render(self) -> str:
        body = "".join(f"[{x.word_string()}]" for x in self.factors) or "[]"
        if self.twist != trivial_twist(self.sys):
            body = f"<{' '.join(str(i + 1) for i in self.twist)}>" + body
        return body

    def to_json(self) -> dict:
        return {"twist": list(self.twist), "factors": [list(x.word) for x in self.factors]}


def is_normal_pair(w2: WeylElement, w1: WeylElement) -> bool:
    return all(w1.left_descent(i) for i in range(w1.sys.rank) if w2.right_descent(i))


def braid_of(w: WeylElement) -> PositiveBraid:
    return PositiveBraid.from_elements(w.sys, [w])


def braid_mul(b1: PositiveBraid, b2: PositiveBraid) -> PositiveBraid:
    return b1 * b2


def braid_pow(b: PositiveBraid, d: int) -> PositiveBraid:
    if d < 0:
        raise ValueError("positive braids have no inverses")
    out = PositiveBraid(b.sys, trivial_twist(b.sys), ())
    for _ in range(d):
        out = out * b
    return out


def dg_factor(b: PositiveBraid) -> WeylElement:
    if b.is_empty:
        raise EmptyBraidError("the empty braid has no DG factor")
    return b._factors[0]


def dg_complement(b: PositiveBraid) -> PositiveBraid:
    if b.is_empty:
        raise EmptyBraidError("the empty braid has no DG factor")
    return PositiveBraid(b.sys, b.twist, b._factors[1:])


def dgn(b: PositiveBraid) -> list[WeylElement]:
    return list(b.factors)


@lru_cache(maxsize=1 << 16)
def power(w: WeylElement, d: int) -> PositiveBraid:
    """Normal form of b_w^d, built incrementally and cached."""
    if d == 0:
        return PositiveBraid(w.sys, trivial_twist(w.sys), ())
    return power(w, d - 1) * braid_of(w)


def dg_of_power(w: WeylElement, d: int) -> WeylElement:
    """DG(b_w^d), with the identity for the empty braid."""
    b = power(w, d)
    return identity(w.sys) if b.is_empty else dg_factor(b)


def stabilization_exponent(w: WeylElement) -> int:
    nonstable = w.sys.positive_mask & ~w.stable_roots
    return bin(nonstable).count("1") - w.length + 1


def dg_stabilized(w: WeylElement) -> WeylElement:
    return dg_of_power(w, stabilization_exponent(w))
