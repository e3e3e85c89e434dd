"""The cross_w and Cross_w operators and the nimble/crossing-pair predicates.

``cross_w(beta)`` collects the positive roots among ``w(beta + b_1 + ... + b_m)``
with every ``b_i`` in ``R_w``: the closure of ``{beta}`` under adding members
of ``R_w``, then pushed forward by ``w``.  ``Cross_w(N)`` is the coarser
version built from ray combinations of two roots.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .braid import PositiveBraid, dg_of_power
from .root_system import RootSet, RootSystemError, iter_bits
from .weyl import WeylElement, twist_element


class CrossingPairError(ValueError):
    def __init__(self, failed: list[str]):
        super().__init__("not a crossing pair: " + ", ".join(failed))
        self.failed = failed


def _closure(w: WeylElement, beta: int) -> RootSet:
    sys = w.sys
    table = sys.sum_table
    rw = list(iter_bits(w.inversion_set))
    seen = 1 << beta
    frontier = [beta]
    while frontier:
        nxt = []
        for g in frontier:
            row = table[g]
            for d in rw:
                k = row[d]
                if k >= 0 and not seen >> k & 1:
                    seen |= 1 << k
                    nxt.append(k)
        frontier = nxt
    return seen


@lru_cache(maxsize=1 << 15)
def _cross_table(w: WeylElement) -> tuple[RootSet, ...]:
    pos = w.sys.positive_mask
    return tuple(w.apply(_closure(w, b)) & pos for b in range(w.sys.P))


def cross_root(w: WeylElement, beta: int) -> RootSet:
    if not 0 <= beta < w.sys.P:
        raise RootSystemError("cross_root needs a positive root")
    return _cross_table(w)[beta]


def cross_set(w: WeylElement, n: RootSet) -> RootSet:
    if n & ~w.sys.positive_mask:
        raise RootSystemError("cross_set needs a set of positive roots")
    table = _cross_table(w)
    out = 0
    for b in iter_bits(n):
        out |= table[b]
    return out


def cross_iter(w: WeylElement, n: RootSet, d: int) -> RootSet:
    for _ in range(d):
        if not n:
            break
        n = cross_set(w, n)
    return n


def cross_braid(b: PositiveBraid, n: RootSet) -> RootSet:
    for x in b.factors_right_to_left:
        n = cross_set(x, n)
    if b.twist != tuple(range(b.sys.rank)):
        n = twist_element(b.sys, b.twist).apply(n)
    return n


def _check_cross_input(w: WeylElement, n: RootSet) -> None:
    sys = w.sys
    problems = []
    if n & ~sys.positive_mask:
        problems.append("N must consist of positive roots")
    if w.inversion_set & ~n:
        problems.append("N must contain R_w")
    if not sys.is_convex(n):
        problems.append("N must be convex")
    if problems:
        raise RootSystemError("; ".join(problems))


def _big_cross_step(w: WeylElement, n: RootSet) -> RootSet:
    sys = w.sys
    total = n
    rw = list(iter_bits(w.inversion_set))
    for b in iter_bits(n):
        for g in rw:
            total |= sys.ray_combinations(b, g)
    return w.apply(total) & sys.positive_mask


def big_cross_set(w: WeylElement, n: RootSet) -> RootSet:
    """w(N u (N + R_w)) intersected with R_+."""
    _check_cross_input(w, n)
    return _big_cross_step(w, n)


def big_cross_iter(w: WeylElement, n: RootSet, d: int) -> RootSet:
    """d-fold iterate; the hypotheses are checked on the initial set only."""
    if d == 0:
        return n
    _check_cross_input(w, n)
    for _ in range(d):
        if not n:
            break
        n = _big_cross_step(w, n)
    return n


def is_nimble(w: WeylElement, n: RootSet) -> bool:
    sys = w.sys
    allowed = sys.positive_mask & ~w.stable_roots
    rw = w.inversion_set
    return (n & ~allowed == 0 and rw & ~n == 0
            and w.apply(n & ~rw) & ~n == 0 and sys.is_convex(n))


@dataclass(frozen=True)
class CrossingPair:
    w: WeylElement
    nimble_set: RootSet
    leavener: RootSet
    slicing: bool


def crossing_pair_failures(w: WeylElement, n: RootSet, l: RootSet) -> list[str]:
    sys = w.sys
    rw = w.inversion_set
    failed = []
    if not is_nimble(w, n):
        failed.append("N nimble")
    if not sys.is_convex(l):
        failed.append("L convex")
    if n & l:
        failed.append("N and L disjoint")
    if w.apply(l) != l:
        failed.append("w(L) = L")
    if sys.negate(l) != l:
        failed.append("L = -L")
    if rw & l or not sys.is_convex(rw | l):
        failed.append("R_w u L convex")
    if not sys.is_convex(n | l):
        failed.append("N u L convex")
    return failed


def is_crossing_pair(w: WeylElement, n: RootSet, l: RootSet = 0) -> CrossingPair:
    failed = crossing_pair_failures(w, n, l)
    if failed:
        raise CrossingPairError(failed)
    return CrossingPair(w, n, l, w.sys.positive_mask & ~(n | l) == 0)


def is_slicing(w: WeylElement, n: RootSet, l: RootSet = 0) -> bool:
    try:
        return is_crossing_pair(w, n, l).slicing
    except CrossingPairError:
        return False


def crossing_exponent(w: WeylElement, n: RootSet) -> int:
    return bin(n).count("1") - w.length + 1


def crossing_condition(w: WeylElement, n: RootSet) -> bool:
    if not is_nimble(w, n):
        raise RootSystemError("the crossing condition needs a nimble set")
    return cross_iter(w, n, crossing_exponent(w, n)) == 0


def main_lemma_ii_check(w: WeylElement, w2: WeylElement, d: int) -> tuple[bool, bool, bool]:
    c = cross_iter(w, w2.inversion_set, d)
    return (w2.weak_leq(dg_of_power(w, d)), c == 0, c & w.sys.simple_mask == 0)


def braid_equation_check(w: WeylElement) -> bool:
    if not w.is_convex:
        return False
    n = w.sys.positive_mask & ~w.stable_roots
    return cross_iter(w, n, crossing_exponent(w, n)) == 0
