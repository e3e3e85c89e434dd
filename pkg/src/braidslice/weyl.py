"""Elements of (possibly twisted) Weyl groups as signed permutations of roots.

An element ``w = delta * x`` is stored as its action on the root index space
together with the diagram twist ``delta``; the reduced word of the untwisted
part ``x`` is computed on demand.  Words are 1-based, as in the usual
``s1 s2 s3`` notation.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .linalg import det
from .root_system import RootSet, RootSystem, RootSystemError, iter_bits

Twist = tuple[int, ...]

MAX_GROUP_ORDER = 1152


class GroupTooLargeError(RuntimeError):
    pass


def trivial_twist(sys: RootSystem) -> Twist:
    return tuple(range(sys.rank))


def check_twist(sys: RootSystem, twist: Sequence[int]) -> Twist:
    t = tuple(twist)
    if sorted(t) != list(range(sys.rank)):
        raise RootSystemError(f"twist {t} is not a permutation of the simple roots")
    for i in range(sys.rank):
        for j in range(sys.rank):
            if sys.cartan[t[i]][t[j]] != sys.cartan[i][j]:
                raise RootSystemError(f"twist {t} does not preserve the Cartan matrix")
    return t


def named_twist(sys: RootSystem, name: str | None) -> Twist:
    """'none' or 'flip' (the nontrivial diagram automorphism of A_n, D_n or E6)."""
    n = sys.rank
    if name in (None, "", "none", "id"):
        return trivial_twist(sys)
    if name == "flip":
        if sys.kind == "A":
            return check_twist(sys, [n - 1 - i for i in range(n)])
        if sys.kind == "D":
            return check_twist(sys, list(range(n - 2)) + [n - 1, n - 2])
        if sys.kind == "E" and n == 6:
            return check_twist(sys, [5, 1, 4, 3, 2, 0])
    raise RootSystemError(f"unknown twist {name!r} for {sys.label}")


def _twist_perm(sys: RootSystem, twist: Twist) -> tuple[int, ...]:
    out = []
    for r in sys.roots:
        img = [0] * sys.rank
        for i, c in enumerate(r):
            img[twist[i]] = c
        out.append(sys.index[tuple(img)])
    return tuple(out)


@dataclass(frozen=True, eq=False)
class WeylElement:
    sys: RootSystem
    twist: Twist
    perm: tuple[int, ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, WeylElement) and self.sys is other.sys
                and self.perm == other.perm and self.twist == other.twist)

    def __hash__(self) -> int:
        return hash(self.perm)

    def __repr__(self) -> str:
        tw = "" if self.is_untwisted else f"twist={self.twist}, "
        return f"WeylElement({self.sys.label}, {tw}word={list(self.word)})"

    # group structure -----------------------------------------------------
    def __mul__(self, other: "WeylElement") -> "WeylElement":
        p = self.perm
        return WeylElement(self.sys, tuple(self.twist[i] for i in other.twist),
                           tuple(p[k] for k in other.perm))

    def inverse(self) -> "WeylElement":
        inv = [0] * len(self.perm)
        for k, v in enumerate(self.perm):
            inv[v] = k
        tw = [0] * len(self.twist)
        for k, v in enumerate(self.twist):
            tw[v] = k
        return WeylElement(self.sys, tuple(tw), tuple(inv))

    def __pow__(self, k: int) -> "WeylElement":
        if k < 0:
            return self.inverse() ** (-k)
        out = identity(self.sys, trivial_twist(self.sys))
        for _ in range(k):
            out = out * self
        return out

    @property
    def is_untwisted(self) -> bool:
        return self.twist == tuple(range(self.sys.rank))

    @cached_property
    def untwisted(self) -> "WeylElement":
        """x with self = delta * x."""
        if self.is_untwisted:
            return self
        d = twist_element(self.sys, self.twist)
        return d.inverse() * self

    # action ----------------------------------------------------------------
    def __call__(self, i: int) -> int:
        return self.perm[i]

    def apply(self, mask: RootSet) -> RootSet:
        out = 0
        p = self.perm
        for i in iter_bits(mask):
            out |= 1 << p[i]
        return out

    def matrix(self) -> list[list[int]]:
        """Matrix on the simple-root basis: column j holds w(alpha_j)."""
        cols = [self.sys.roots[self.perm[s]] for s in self.sys.simple]
        return [[cols[j][i] for j in range(self.sys.rank)] for i in range(self.sys.rank)]

    # lengths and words -----------------------------------------------------
    @cached_property
    def inversion_set(self) -> RootSet:
        P = self.sys.P
        return sum(1 << i for i in range(P) if self.perm[i] >= P)

    @cached_property
    def length(self) -> int:
        return bin(self.inversion_set).count("1")

    def right_descent(self, i: int) -> bool:
        """l(w s_i) < l(w), for 0-based i."""
        return self.perm[self.sys.simple[i]] >= self.sys.P

    def left_descent(self, i: int) -> bool:
        """l(s_i w) < l(w), for 0-based i."""
        return self.perm.index(self.sys.simple[i]) >= self.sys.P

    @cached_property
    def word(self) -> tuple[int, ...]:
        """A reduced word (1-based) of the untwisted part."""
        x = self.untwisted
        letters: list[int] = []
        while x.length:
            i = next(i for i in range(self.sys.rank) if x.right_descent(i))
            letters.append(i + 1)
            x = x * simple_reflection(self.sys, i)
        return tuple(reversed(letters))

    def word_string(self) -> str:
        return " ".join(map(str, self.word))

    @cached_property
    def order(self) -> int:
        k, x = 1, self
        e = identity(self.sys)
        while x != e:
            x = x * self
            k += 1
        return k

    # root subsets ----------------------------------------------------------
    @cached_property
    def fixed_roots(self) -> RootSet:
        return sum(1 << i for i, v in enumerate(self.perm) if v == i)

    @cached_property
    def stable_roots(self) -> RootSet:
        """Roots whose whole w-orbit keeps one sign (working definition)."""
        P = self.sys.P
        seen = 0
        out = 0
        for i in range(2 * P):
            if seen >> i & 1:
                continue
            orbit = [i]
            j = self.perm[i]
            while j != i:
                orbit.append(j)
                j = self.perm[j]
            m = sum(1 << k for k in orbit)
            seen |= m
            if all(k < P for k in orbit) or all(k >= P for k in orbit):
                out |= m
        return out

    @cached_property
    def is_elliptic(self) -> bool:
        m = self.matrix()
        n = self.sys.rank
        return det([[Fraction(int(i == j) - m[i][j]) for j in range(n)] for i in range(n)]) != 0

    @cached_property
    def is_convex(self) -> bool:
        return self.sys.is_convex(self.sys.positive_mask & ~self.stable_roots)

    def weak_leq(self, other: "WeylElement") -> bool:
        """R_self contained in R_other."""
        return self.inversion_set & ~other.inversion_set == 0

    def to_json(self) -> dict:
        return {
            "word": list(self.word),
            "twist": list(self.twist),
            "length": self.length,
            "inversions": self.sys.format_set(self.inversion_set),
        }


def identity(sys: RootSystem, twist: Twist | None = None) -> WeylElement:
    """The identity, or the bare diagram automorphism when a twist is given."""
    if twist is not None and tuple(twist) != trivial_twist(sys):
        return twist_element(sys, twist)
    return WeylElement(sys, trivial_twist(sys), tuple(range(2 * sys.P)))


def simple_reflection(sys: RootSystem, i: int) -> WeylElement:
    """s_{i+1} (0-based index)."""
    return _SIMPLE.setdefault((id(sys), i), WeylElement(sys, trivial_twist(sys), sys.reflections[i]))


_SIMPLE: dict[tuple[int, int], WeylElement] = {}


def twist_element(sys: RootSystem, twist: Sequence[int]) -> WeylElement:
    t = check_twist(sys, twist)
    return WeylElement(sys, t, _twist_perm(sys, t))


def weyl_from_word(sys: RootSystem, indices: Iterable[int], twist: Sequence[int] | None = None) -> WeylElement:
    """delta * s_{i1} ... s_{ik}, indices 1-based."""
    out = identity(sys)
    for i in indices:
        if not 1 <= i <= sys.rank:
            raise RootSystemError(f"simple index {i} out of range 1..{sys.rank}")
        out = out * simple_reflection(sys, i - 1)
    if twist is not None and tuple(twist) != trivial_twist(sys):
        out = twist_element(sys, twist) * out
    return out


def parse_word(text: str) -> list[int]:
    text = text.strip()
    if text in ("", "e", "id"):
        return []
    parts = text.replace(",", " ").split()
    if len(parts) == 1 and len(parts[0]) > 1:
        return [int(c) for c in parts[0]]
    return [int(p) for p in parts]


def longest_element(sys: RootSystem) -> WeylElement:
    w = identity(sys)
    while w.length < sys.P:
        i = next(i for i in range(sys.rank) if not w.right_descent(i))
        w = w * simple_reflection(sys, i)
    return w


def elements(sys: RootSystem, twists: Sequence[Twist] = (), limit: int | None = MAX_GROUP_ORDER) -> list[WeylElement]:
    """All elements of W (times the given twists), by breadth-first search."""
    gens = [simple_reflection(sys, i) for i in range(sys.rank)]
    start = identity(sys)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x * g
            if y not in seen:
                seen.add(y)
                order.append(y)
                queue.append(y)
                if limit is not None and len(seen) > limit:
                    raise GroupTooLargeError(
                        f"W({sys.label}) has more than {limit} elements; raise the limit explicitly")
    out = list(order)
    for t in twists:
        if tuple(t) == trivial_twist(sys):
            continue
        d = twist_element(sys, t)
        out.extend(d * x for x in order)
    return out


def iter_elements(sys: RootSystem, **kw) -> Iterator[WeylElement]:
    yield from elements(sys, **kw)
