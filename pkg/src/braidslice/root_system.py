"""Crystallographic root systems of types A-G.

Roots are integer coefficient vectors over the simple roots, numbered as in
Bourbaki (so ``B_n`` has its short simple root last).  Every root gets an
index once, at construction: positive roots ``0..P-1`` sorted by height,
and the negative of root ``i`` is ``i + P``.  Sets of roots are plain ``int``
bitmasks over this index space.
"""
from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

Root = tuple[int, ...]
RootSet = int


class RootSystemError(ValueError):
    pass


def _chain(n: int, lengths: Sequence[int], bonds: dict[tuple[int, int], int]) -> list[list[int]]:
    """Symmetrized Gram matrix (doubled, so entries are integers)."""
    g = [[0] * n for _ in range(n)]
    for i, ell in enumerate(lengths):
        g[i][i] = ell
    for (i, j), v in bonds.items():
        g[i][j] = g[j][i] = v
    return g


def _gram(kind: str, n: int) -> list[list[int]]:
    line = {(i, i + 1): -1 for i in range(n - 1)}
    if kind == "A" and n >= 1:
        return _chain(n, [2] * n, line)
    if kind == "B" and n >= 2:
        return _chain(n, [2] * (n - 1) + [1], line)
    if kind == "C" and n >= 2:
        bonds = {(i, i + 1): -1 for i in range(n - 2)}
        bonds[(n - 2, n - 1)] = -2
        return _chain(n, [2] * (n - 1) + [4], bonds)
    if kind == "D" and n >= 3:
        bonds = {(i, i + 1): -1 for i in range(n - 2)}
        bonds[(n - 3, n - 1)] = -1
        return _chain(n, [2] * n, bonds)
    if kind == "E" and n in (6, 7, 8):
        bonds = {(0, 2): -1, (1, 3): -1}
        bonds.update({(i, i + 1): -1 for i in range(2, n - 1)})
        return _chain(n, [2] * n, bonds)
    if kind == "F" and n == 4:
        return _chain(4, [4, 4, 2, 2], {(0, 1): -2, (1, 2): -2, (2, 3): -1})
    if kind == "G" and n == 2:
        return _chain(2, [2, 6], {(0, 1): -3})
    raise RootSystemError(f"unsupported root system {kind}{n}")


def parse_label(label: str) -> tuple[str, int]:
    label = label.strip()
    if len(label) < 2 or not label[0].isalpha() or not label[1:].isdigit():
        raise RootSystemError(f"cannot parse root system label {label!r}")
    return label[0].upper(), int(label[1:])


class RootSystem:
    """An immutable root system with its index, sum and ray tables."""

    def __init__(self, kind: str, rank: int):
        self.kind = kind
        self.rank = rank
        gram = _gram(kind, rank)
        self.gram: tuple[tuple[int, ...], ...] = tuple(map(tuple, gram))
        # cartan[i][j] = <alpha_j, alpha_i^vee>, so s_i(alpha_j) = alpha_j - cartan[i][j] alpha_i
        self.cartan: tuple[tuple[int, ...], ...] = tuple(
            tuple(2 * gram[i][j] // gram[i][i] for j in range(rank)) for i in range(rank)
        )
        pos = self._enumerate_positive()
        self.positive_roots: tuple[Root, ...] = tuple(pos)
        self.P = len(pos)
        self.roots: tuple[Root, ...] = self.positive_roots + tuple(tuple(-c for c in r) for r in pos)
        self.index: dict[Root, int] = {r: i for i, r in enumerate(self.roots)}
        self.simple: tuple[int, ...] = tuple(self.index[self.unit(i)] for i in range(rank))
        self.positive_mask: RootSet = (1 << self.P) - 1
        self.all_mask: RootSet = (1 << (2 * self.P)) - 1
        self.simple_mask: RootSet = sum(1 << i for i in self.simple)
        self.reflections: tuple[tuple[int, ...], ...] = tuple(
            tuple(self.index[self.reflect(i, r)] for r in self.roots) for i in range(rank)
        )
        self._ray_cache: dict[tuple[int, int], RootSet] = {}

    # construction helpers -------------------------------------------------
    def unit(self, i: int) -> Root:
        return tuple(int(j == i) for j in range(self.rank))

    def pairing(self, i: int, root: Root) -> int:
        """<root, alpha_i^vee>."""
        return sum(c * self.cartan[i][j] for j, c in enumerate(root))

    def reflect(self, i: int, root: Root) -> Root:
        k = self.pairing(i, root)
        return tuple(c - k * (j == i) for j, c in enumerate(root))

    def _enumerate_positive(self) -> list[Root]:
        found = {self.unit(i) for i in range(self.rank)}
        frontier = list(found)
        while frontier:
            nxt = []
            for r in frontier:
                for i in range(self.rank):
                    s = self.reflect(i, r)
                    if all(c >= 0 for c in s) and s not in found:
                        found.add(s)
                        nxt.append(s)
            frontier = nxt
        return sorted(found, key=lambda r: (sum(r), tuple(-c for c in r)))

    # basic queries ---------------------------------------------------------
    @property
    def label(self) -> str:
        return f"{self.kind}{self.rank}"

    def __repr__(self) -> str:
        return f"RootSystem({self.label})"

    def __reduce__(self):
        return (build_root_system, (self.kind, self.rank))

    def inner(self, a: Root, b: Root) -> Fraction:
        """Symmetrized inner product, normalised so short roots of B/F have length 1."""
        s = sum(x * self.gram[i][j] * y for i, x in enumerate(a) for j, y in enumerate(b))
        return Fraction(s, 2 if self.kind == "F" else 1)

    def height(self, i: int) -> int:
        return sum(self.roots[i])

    def is_positive(self, i: int) -> bool:
        return i < self.P

    def neg(self, i: int) -> int:
        return i + self.P if i < self.P else i - self.P

    def root_index(self, root: Root | Sequence[int]) -> int:
        try:
            return self.index[tuple(root)]
        except KeyError:
            raise RootSystemError(f"{tuple(root)} is not a root of {self.label}") from None

    def roots_of(self, mask: RootSet) -> list[int]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def mask_of(self, indices: Iterable[int]) -> RootSet:
        m = 0
        for i in indices:
            m |= 1 << i
        return m

    def negate(self, mask: RootSet) -> RootSet:
        P = self.P
        low = mask & self.positive_mask
        return (low << P) | (mask >> P)

    # notation --------------------------------------------------------------
    def name(self, i: int) -> str:
        """Digit-multiset notation: a1233 is a1 + a2 + 2 a3; negatives get a minus."""
        r = self.roots[i]
        sign = "" if i < self.P else "-"
        digits = "".join(str(j + 1) * abs(c) for j, c in enumerate(r))
        return f"{sign}a{digits}"

    def parse_root(self, text: str) -> int:
        t = text.strip()
        sign = 1
        if t.startswith("-"):
            sign, t = -1, t[1:]
        if t.startswith(("a", "α")):
            t = t[1:]
        if not t.isdigit():
            raise RootSystemError(f"cannot parse root {text!r}")
        coeffs = [0] * self.rank
        for ch in t:
            k = int(ch) - 1
            if not 0 <= k < self.rank:
                raise RootSystemError(f"simple index {ch} out of range in {text!r}")
            coeffs[k] += sign
        return self.root_index(coeffs)

    def format_set(self, mask: RootSet) -> list[str]:
        return [self.name(i) for i in self.roots_of(mask)]

    def parse_set(self, text: str) -> RootSet:
        t = text.strip()
        if t in ("R+", "R_+", "positive"):
            return self.positive_mask
        if t in ("", "{}", "empty"):
            return 0
        t = t.strip("{}")
        return self.mask_of(self.parse_root(x) for x in t.replace(",", " ").split())

    # root arithmetic -------------------------------------------------------
    def root_sum(self, i: int, j: int) -> int | None:
        s = tuple(a + b for a, b in zip(self.roots[i], self.roots[j]))
        return self.index.get(s)

    @cached_property
    def sum_table(self) -> tuple[tuple[int, ...], ...]:
        """sum_table[i][j] is the index of root_i + root_j, or -1."""
        return tuple(
            tuple(-1 if (k := self.root_sum(i, j)) is None else k for j in range(2 * self.P))
            for i in range(2 * self.P)
        )

    def ray_combinations(self, i: int, j: int) -> RootSet:
        """Roots c0*root_i + c1*root_j with c0, c1 > 0, other than the inputs."""
        key = (i, j) if i <= j else (j, i)
        hit = self._ray_cache.get(key)
        if hit is None:
            hit = self._compute_rays(*key)
            self._ray_cache[key] = hit
        return hit

    def _compute_rays(self, i: int, j: int) -> RootSet:
        b, g = self.roots[i], self.roots[j]
        n = self.rank
        minor = next(((p, q) for p in range(n) for q in range(p + 1, n)
                      if b[p] * g[q] - b[q] * g[p] != 0), None)
        if minor is None:
            # collinear inputs only produce multiples of themselves, and a
            # reduced system has no roots other than +-beta on that line
            return 0
        p, q = minor
        dt = b[p] * g[q] - b[q] * g[p]
        out = 0
        for k, r in enumerate(self.roots):
            c0 = Fraction(r[p] * g[q] - r[q] * g[p], dt)
            c1 = Fraction(b[p] * r[q] - b[q] * r[p], dt)
            if c0 > 0 and c1 > 0 and all(c0 * x + c1 * y == z for x, y, z in zip(b, g, r)):
                out |= 1 << k
        return out

    def is_convex(self, mask: RootSet) -> bool:
        """Closed under root sums: beta, gamma in S and beta + gamma a root imply it is in S.

        By summing sequences this is closure under every positive integer
        combination that is a root, which is what makes U_S a group.
        """
        members = self.roots_of(mask)
        table = self.sum_table
        for a_pos, a in enumerate(members):
            row = table[a]
            for b in members[a_pos + 1:]:
                k = row[b]
                if k >= 0 and not mask >> k & 1:
                    return False
        return True

    def is_ray_convex(self, mask: RootSet) -> bool:
        """Closed under roots c0*beta + c1*gamma with real c0, c1 > 0 (a stronger condition)."""
        members = self.roots_of(mask)
        for a_pos, a in enumerate(members):
            for b in members[a_pos + 1:]:
                if self.ray_combinations(a, b) & ~mask:
                    return False
        return True

    def summing_sequence(self, roots: Sequence[int], start: int | None = None) -> list[int]:
        """Order (and, for mixed signs, thin out) roots so every partial sum is a root.

        With ``start`` the inputs must all be positive and the sequence begins
        there; then no deletions are needed.
        """
        total = tuple(sum(col) for col in zip(*(self.roots[i] for i in roots)))
        if self.index.get(total) is None:
            raise RootSystemError("the roots do not sum to a root")
        if start is not None:
            if any(not self.is_positive(i) for i in roots):
                raise RootSystemError("a start root requires positive inputs")
            if start not in roots:
                raise RootSystemError("start root is not among the inputs")
            rest = list(roots)
            rest.remove(start)
            seq = self._extend([start], self.roots[start], rest)
            if seq is None:
                raise RootSystemError("no summing sequence with the requested start")
            return seq
        return self._peel(list(roots), total)

    def _extend(self, seq: list[int], partial: Root, rest: list[int]) -> list[int] | None:
        if not rest:
            return seq
        tried = set()
        for k, r in enumerate(rest):
            if r in tried:
                continue
            tried.add(r)
            nxt = tuple(a + b for a, b in zip(partial, self.roots[r]))
            if nxt in self.index:
                out = self._extend(seq + [r], nxt, rest[:k] + rest[k + 1:])
                if out is not None:
                    return out
        return None

    def _peel(self, roots: list[int], total: Root) -> list[int]:
        # some member pairs positively with the total root, so removing it leaves a root or zero
        if len(roots) == 1:
            return roots
        for k, r in enumerate(roots):
            if self.inner(self.roots[r], total) > 0:
                rest_total = tuple(a - b for a, b in zip(total, self.roots[r]))
                if not any(rest_total):
                    return [r]
                rest = roots[:k] + roots[k + 1:]
                if self.index.get(rest_total) is not None:
                    return self._peel(rest, rest_total) + [r]
        raise RootSystemError("no summing sequence found")


_CACHE: dict[tuple[str, int], RootSystem] = {}


def build_root_system(kind: str, rank: int | None = None) -> RootSystem:
    """Return the (cached, shared) root system of the given type and rank.

    ``build_root_system("B3")`` and ``build_root_system("B", 3)`` are the same.
    """
    if rank is None:
        kind, rank = parse_label(kind)
    kind = kind.upper()
    if rank < 1:
        raise RootSystemError("rank must be at least 1")
    key = (kind, rank)
    if key not in _CACHE:
        _CACHE[key] = RootSystem(kind, rank)
    return _CACHE[key]


def iter_bits(mask: RootSet) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low
