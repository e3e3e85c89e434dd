"""Exact SL_n realisation of the cross-section map.

Roots of ``A_{n-1}`` correspond to matrix units: ``a_{i..j}`` is ``E[i-1][j]``
and its negative the transpose position.  For a closed set of positive
roots ``S`` the group ``U_S`` is exactly ``I + span{E_b : b in S}``, which
makes every factorisation below a linear solve over Q.

The map is ``psi(n, g) = n^-1 g n`` from ``N x wLN_w`` onto ``N w L N_w``; its
inverse iterates the factorisation ``x = m * (w l n_w)`` in the way the
orbit construction on ``d``-tuples prescribes.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import linalg as la
from .cross import (CrossingPair, crossing_condition, crossing_exponent,
                    is_crossing_pair)
from .linalg import Matrix
from .root_system import RootSet, RootSystem, build_root_system, iter_bits
from .weyl import WeylElement, weyl_from_word

TORUS_CHOICES = ("identity", "fixed", "full")


class MembershipError(ValueError):
    pass


class CrossingConditionError(ValueError):
    pass


# matrices ------------------------------------------------------------------

def position(sys: RootSystem, beta: int) -> tuple[int, int]:
    """Matrix unit position of a root of A_{n-1}."""
    c = sys.roots[beta]
    nz = [k for k, x in enumerate(c) if x]
    i, j = nz[0], nz[-1] + 1
    return (i, j) if beta < sys.P else (j, i)


def root_at(sys: RootSystem, i: int, j: int) -> int:
    lo, hi = min(i, j), max(i, j)
    coeffs = [int(lo <= k < hi) for k in range(sys.rank)]
    b = sys.index[tuple(coeffs)]
    return b if i < j else sys.neg(b)


def unit(n: int, i: int, j: int, c: Fraction | int = 1) -> Matrix:
    return tuple(tuple(Fraction(c) if (r, s) == (i, j) else Fraction(0) for s in range(n)) for r in range(n))


def check_group_element(m: Sequence[Sequence]) -> Matrix:
    m = la.as_matrix(m)
    if la.det(m) != 1:
        raise MembershipError("matrix does not have determinant 1")
    return m


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return la.matmul_all(a, b, la.inverse(a), la.inverse(b))


def support(sys: RootSystem, m: Matrix) -> RootSet:
    """Roots whose matrix position carries a nonzero off-diagonal entry."""
    n = len(m)
    out = 0
    for i in range(n):
        for j in range(n):
            if i != j and m[i][j]:
                out |= 1 << root_at(sys, i, j)
    return out


def is_unipotent_on(sys: RootSystem, m: Matrix, roots: RootSet) -> bool:
    n = len(m)
    diag_ok = all(m[i][i] == 1 for i in range(n))
    return diag_ok and support(sys, m) & ~roots == 0


def factorize_unipotent(sys: RootSystem, u: Matrix, root_order: Sequence[int]) -> dict[int, Fraction]:
    """Coordinates with u = prod p_b(c_b) in the given order.

    Works height by height: an entry at height h is its own coordinate plus
    a polynomial in coordinates of strictly lower height.
    """
    n = len(u)
    order = list(root_order)
    signs = {b < sys.P for b in order}
    if len(signs) > 1:
        raise MembershipError("root order mixes positive and negative roots")
    coords = {b: Fraction(0) for b in order}
    height = {b: abs(sys.height(b)) for b in order}

    def product() -> Matrix:
        out = la.identity(n)
        for b in order:
            if coords[b]:
                i, j = position(sys, b)
                out = la.matmul(out, la.add(la.identity(n), unit(n, i, j, coords[b])))
        return out

    for h in sorted(set(height.values())):
        current = product()
        for b in order:
            if height[b] == h:
                i, j = position(sys, b)
                coords[b] = u[i][j] - current[i][j]
    if product() != la.as_matrix(u):
        raise MembershipError("element is not a product of the given root subgroups")
    return coords


# contexts -------------------------------------------------------------------

def standard_lift(sys: RootSystem, w: WeylElement) -> Matrix:
    """Product of p_a(1) p_-a(-1) p_a(1) along a reduced word."""
    n = sys.rank + 1
    out = la.identity(n)
    for i in w.word:
        k = i - 1
        s = la.identity(n)
        rows = [list(r) for r in s]
        rows[k][k] = rows[k + 1][k + 1] = Fraction(0)
        rows[k][k + 1] = Fraction(1)
        rows[k + 1][k] = Fraction(-1)
        out = la.matmul(out, la.as_matrix(rows))
    return out


def lift_permutation(lift: Matrix) -> list[int]:
    """sigma with lift e_j = +-e_{sigma(j)}; raises unless lift is monomial."""
    n = len(lift)
    sigma = []
    for j in range(n):
        rows = [i for i in range(n) if lift[i][j]]
        if len(rows) != 1:
            raise MembershipError("lift is not a monomial matrix")
        sigma.append(rows[0])
    if sorted(sigma) != list(range(n)):
        raise MembershipError("lift is not a monomial matrix")
    return sigma


def validate_lift(sys: RootSystem, w: WeylElement, lift: Matrix) -> None:
    """Check det 1 and lift N_b lift^-1 = N_{w(b)} for every root b."""
    check_group_element(lift)
    sigma = lift_permutation(lift)
    for b in range(2 * sys.P):
        i, j = position(sys, b)
        if root_at(sys, sigma[i], sigma[j]) != w(b):
            raise MembershipError(f"lift does not conjugate the root space of {sys.name(b)} to w({sys.name(b)})")


def parse_pair(w: WeylElement, pair: str | tuple[RootSet, RootSet]) -> tuple[RootSet, RootSet]:
    sys = w.sys
    if isinstance(pair, tuple):
        return pair
    if pair == "full":
        return sys.positive_mask, 0
    if pair == "firm":
        return sys.positive_mask & ~w.fixed_roots, w.fixed_roots
    if pair == "stable":
        return sys.positive_mask & ~w.stable_roots, 0
    if pair == "inversion":
        return w.inversion_set, 0
    raise ValueError(f"unknown pair {pair!r}")


@dataclass(frozen=True)
class OrbitPoint:
    """Canonical representative (m', s_d, ..., s_1) with s_i in wLN_w."""
    head: Matrix
    slices: tuple[Matrix, ...]


@dataclass(frozen=True)
class Factorisation:
    m: Matrix        # in N
    s: Matrix        # in wLN_w
    l: Matrix        # the L-component
    n_w: Matrix      # in N_w


@dataclass(frozen=True, eq=False)
class SliceContext:
    sys: RootSystem
    w: WeylElement
    pair: CrossingPair
    lift: Matrix
    torus: str = "identity"
    d: int | None = None
    lift_inv: Matrix = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.sys.kind != "A":
            raise ValueError("matrix realisations are only provided in type A")
        if self.torus not in TORUS_CHOICES:
            raise ValueError(f"torus must be one of {TORUS_CHOICES}")
        validate_lift(self.sys, self.w, self.lift)
        object.__setattr__(self, "lift_inv", la.inverse(self.lift))
        if self.pair.leavener and self.torus == "fixed":
            raise ValueError("a leavener with root subgroups needs torus 'identity' or 'full'")
        if self.d is None:
            object.__setattr__(self, "d", crossing_exponent(self.w, self.pair.nimble_set))

    @classmethod
    def build(cls, n: int, word: Sequence[int], pair: str | tuple[RootSet, RootSet] = "full",
              torus: str = "identity", lift: Sequence[Sequence] | None = None,
              d: int | None = None) -> "SliceContext":
        sys = build_root_system("A", n - 1)
        w = weyl_from_word(sys, word)
        nset, lset = parse_pair(w, pair)
        cp = is_crossing_pair(w, nset, lset)
        m = standard_lift(sys, w) if lift is None else la.as_matrix(lift)
        return cls(sys, w, cp, m, torus, d)

    # basic data -----------------------------------------------------------
    @property
    def n(self) -> int:
        return self.sys.rank + 1

    @property
    def nset(self) -> RootSet:
        return self.pair.nimble_set

    @property
    def lset(self) -> RootSet:
        return self.pair.leavener

    @cached_property
    def sigma(self) -> list[int]:
        return lift_permutation(self.lift)

    @cached_property
    def blocks(self) -> list[list[int]]:
        """Index blocks of the Levi subgroup spanned by the leavener."""
        n = self.n
        parent = list(range(n))

        def find(a: int) -> int:
            while parent[a] != a:
                a = parent[a]
            return a
        for b in iter_bits(self.lset):
            i, j = position(self.sys, b)
            parent[find(i)] = find(j)
        groups: dict[int, list[int]] = {}
        for i in range(n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def crossing_holds(self) -> bool:
        return crossing_condition(self.w, self.nset)

    def root_subgroup(self, beta: int, c: Fraction | int) -> Matrix:
        i, j = position(self.sys, beta)
        return la.add(la.identity(self.n), unit(self.n, i, j, c))

    # torus ----------------------------------------------------------------
    def torus_orbits(self) -> list[list[int]]:
        seen, out = set(), []
        for i in range(self.n):
            if i in seen:
                continue
            orb, j = [], i
            while j not in seen:
                seen.add(j)
                orb.append(j)
                j = self.sigma[j]
            out.append(orb)
        return out

    def in_torus(self, diag: Sequence[Fraction]) -> bool:
        prod = Fraction(1)
        for x in diag:
            prod *= x
        if prod != 1 and not self.lset:
            return False
        if self.torus == "full":
            return True
        if self.torus == "identity":
            return all(x == 1 for x in diag)
        return all(diag[self.sigma[i]] == diag[i] for i in range(self.n))

    def in_levi(self, l: Matrix) -> bool:
        blocks = self.blocks
        where = {i: k for k, b in enumerate(blocks) for i in b}
        n = self.n
        if any(l[i][j] for i in range(n) for j in range(n) if where[i] != where[j]):
            return False
        dets = [la.det([[l[i][j] for j in b] for i in b]) for b in blocks]
        prod = Fraction(1)
        for x in dets:
            prod *= x
        if prod != 1:
            return False
        if self.torus == "full":
            return all(x != 0 for x in dets)
        return all(x == 1 for x in dets)

    def random_torus(self, rng: random.Random) -> Matrix:
        n = self.n
        vals = [Fraction(1)] * n
        if self.torus == "full":
            for i in range(n - 1):
                vals[i] = _rand_nonzero(rng)
            prod = Fraction(1)
            for x in vals[:-1]:
                prod *= x
            vals[-1] = 1 / prod
        elif self.torus == "fixed":
            orbits = self.torus_orbits()
            *free, last = orbits
            rs = [_rand_nonzero(rng) for _ in free]
            # t_last^k = prod t_j^{-k_j}; take t_j = r_j^k to stay rational
            k = len(last)
            inv = Fraction(1)
            for orb, r in zip(free, rs):
                for i in orb:
                    vals[i] = r ** k
                inv /= r ** len(orb)
            for i in last:
                vals[i] = inv
        return tuple(tuple(vals[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))

    # membership -----------------------------------------------------------
    def in_N(self, u: Matrix) -> bool:
        return is_unipotent_on(self.sys, u, self.nset)

    def random_N(self, rng: random.Random, roots: RootSet | None = None) -> Matrix:
        roots = self.nset if roots is None else roots
        out = [list(r) for r in la.identity(self.n)]
        for b in iter_bits(roots):
            i, j = position(self.sys, b)
            out[i][j] = _rand(rng)
        return la.as_matrix(out)

    def random_slice(self, rng: random.Random) -> Matrix:
        """A random point w * t * n_w of the slice (L = torus part only)."""
        t = self.random_torus(rng)
        n_w = self.random_N(rng, self.w.inversion_set)
        return la.matmul_all(self.lift, t, n_w)

    def split_slice(self, g: Matrix) -> tuple[Matrix, Matrix] | None:
        """(l, n_w) with g = lift l n_w, or None if g is not in wLN_w."""
        y = la.matmul(self.lift_inv, g)
        n = self.n
        allowed = self.w.inversion_set | self.lset
        for i in range(n):
            for j in range(n):
                if i != j and y[i][j] and not allowed >> root_at(self.sys, i, j) & 1:
                    return None
        lmask = self.lset
        l = la.as_matrix([[y[i][j] if i == j or (lmask >> root_at(self.sys, i, j) & 1) else 0
                           for j in range(n)] for i in range(n)])
        if la.det(l) == 0:
            return None
        n_w = la.matmul(la.inverse(l), y)
        if not is_unipotent_on(self.sys, n_w, self.w.inversion_set):
            return None
        ok = self.in_levi(l) if self.lset else self.in_torus([l[i][i] for i in range(n)])
        return (l, n_w) if ok else None

    def in_slice(self, g: Matrix) -> bool:
        return self.split_slice(g) is not None

    def factor(self, x: Matrix) -> Factorisation:
        """x = m * s with m in N and s in wLN_w."""
        n = self.n
        sys = self.sys
        roots = list(iter_bits(self.nset))
        base = la.matmul(self.lift_inv, x)
        allowed = self.w.inversion_set | self.lset
        cols = []
        for b in roots:
            i, j = position(sys, b)
            # lift^-1 E_ij x has row lift_inv[:, i] times row j of x
            cols.append([[self.lift_inv[r][i] * x[j][c] for c in range(n)] for r in range(n)])
        eqs, rhs = [], []
        for r in range(n):
            for c in range(n):
                if r != c and not allowed >> root_at(sys, r, c) & 1:
                    eqs.append([col[r][c] for col in cols])
                    rhs.append(-base[r][c])
        if roots:
            a = la.solve(eqs, rhs)
            if a is None:
                raise MembershipError("element is not in N w L N_w")
        else:
            if any(rhs):
                raise MembershipError("element is not in N w L N_w")
            a = ()
        v = [list(r) for r in la.identity(n)]
        for b, c in zip(roots, a):
            i, j = position(sys, b)
            v[i][j] = c
        v = la.as_matrix(v)
        s = la.matmul(v, x)
        parts = self.split_slice(s)
        if parts is None:
            raise MembershipError("element is not in N w L N_w")
        return Factorisation(la.inverse(v), s, *parts)

    def in_double_coset(self, x: Matrix) -> bool:
        try:
            self.factor(x)
        except MembershipError:
            return False
        return True

    # the cross-section map ----------------------------------------------
    def psi(self, n: Matrix, g: Matrix) -> Matrix:
        if not self.in_N(n):
            raise MembershipError("n is not in N")
        if not self.in_slice(g):
            raise MembershipError("g is not in the slice wLN_w")
        return la.matmul_all(la.inverse(n), g, n)

    def canonical_form(self, gs: Sequence[Matrix]) -> OrbitPoint:
        """Canonical representative of [g_d, ..., g_1] (gs listed leftmost first)."""
        gs = list(gs)
        slices: list[Matrix] = []
        m = la.identity(self.n)
        for k, g in enumerate(reversed(gs)):
            f = self.factor(la.matmul(g, m) if k else g)
            slices.append(f.s)
            m = f.m
        return OrbitPoint(m, tuple(reversed(slices)))

    def cross_group(self, gs: Sequence[Matrix]) -> Matrix:
        return self.canonical_form(gs).head

    def psi_inverse(self, g_tilde: Matrix, d: int | None = None) -> tuple[Matrix, Matrix]:
        if d is None:
            if not self.crossing_holds():
                raise CrossingConditionError(
                    f"cross^{self.d} of N is nonempty for {self.w!r}; the inverse is not defined")
            d = self.d
        head = self.cross_group([g_tilde] * d)
        n = la.inverse(head)
        g = la.matmul_all(n, g_tilde, head)
        if not self.in_slice(g):
            raise CrossingConditionError("conjugated element left the slice; crossing fails for this d")
        return n, g

    # transversality ------------------------------------------------------
    def _root_space(self, mask: RootSet) -> list[Matrix]:
        return [unit(self.n, *position(self.sys, b)) for b in iter_bits(mask)]

    def torus_lie(self) -> list[Matrix]:
        """Basis of l cap t."""
        n = self.n
        h = [la.add(unit(n, i, i), unit(n, i + 1, i + 1), -1) for i in range(n - 1)]
        if self.torus == "full" or self.lset:
            blocks = self.blocks if self.torus != "full" else [[i] for i in range(n)]
            if self.torus == "full":
                return h
            # traceless within each block
            out = []
            for b in blocks:
                out += [la.add(unit(n, b[k], b[k]), unit(n, b[k + 1], b[k + 1]), -1) for k in range(len(b) - 1)]
            return out
        if self.torus == "identity":
            return []
        # t^w: diagonal, constant on sigma-orbits, trace zero
        orbits = self.torus_orbits()
        vecs = []
        for orb in orbits:
            vecs.append([Fraction(int(i in orb)) for i in range(n)])
        out = []
        coeff_space = la.kernel([[Fraction(len(o)) for o in orbits]], len(orbits))
        for c in coeff_space:
            diag = [sum(ci * v[i] for ci, v in zip(c, vecs)) for i in range(n)]
            out.append(tuple(tuple(diag[i] if i == j else Fraction(0) for j in range(n)) for i in range(n)))
        return out

    def torus_complement(self) -> list[Matrix]:
        """t'_w: the trace-form orthogonal complement of l cap t in t."""
        n = self.n
        lt = [[m[i][i] for i in range(n)] for m in self.torus_lie()]
        rows = lt + [[Fraction(1)] * n]
        return [tuple(tuple(v[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))
                for v in la.kernel(rows, n)]

    def _span_rank(self, mats: list[Matrix]) -> int:
        return la.rank([[x for row in m for x in row] for m in mats])

    def _ad_image(self, m: Matrix) -> list[Matrix]:
        n = self.n
        minv = la.inverse(m)
        basis = [unit(n, i, j) for i in range(n) for j in range(n) if i != j]
        basis += [la.add(unit(n, i, i), unit(n, i + 1, i + 1), -1) for i in range(n - 1)]
        return [la.add(x, la.matmul_all(minv, x, m), -1) for x in basis]

    def differential_rank(self, m: Matrix) -> int:
        """Rank of (x, l) -> (id - Ad_m) x + l with l in l + n_w."""
        if not self.in_slice(m):
            raise MembershipError("point is not in the slice")
        lie_l = self.torus_lie() + self._root_space(self.lset)
        return self._span_rank(self._ad_image(m) + lie_l + self._root_space(self.w.inversion_set))

    def transversality_rank(self, m: Matrix) -> int:
        """Rank of (id - Ad_m)(g) + t'_w + l + n_w + nbar_{w^-1}."""
        if not self.in_slice(m):
            raise MembershipError("point is not in the slice")
        extra = (self.torus_complement() + self.torus_lie() + self._root_space(self.lset)
                 + self._root_space(self.w.inversion_set)
                 + self._root_space(self.sys.negate(self.w.inverse().inversion_set)))
        return self._span_rank(self._ad_image(m) + extra)


def _rand(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


def _rand_nonzero(rng: random.Random) -> Fraction:
    while True:
        x = _rand(rng)
        if x:
            return x


def root_subgroup(ctx: SliceContext, beta: int, c: Fraction | int) -> Matrix:
    return ctx.root_subgroup(beta, c)


def psi(ctx: SliceContext, n: Matrix, g: Matrix) -> Matrix:
    return ctx.psi(n, g)


def psi_inverse(ctx: SliceContext, g_tilde: Matrix, d: int | None = None) -> tuple[Matrix, Matrix]:
    return ctx.psi_inverse(g_tilde, d)


def transversality_rank(ctx: SliceContext, m: Matrix) -> int:
    return ctx.transversality_rank(m)


# worked examples ---------------------------------------------------------------

SPALTENSTEIN_WORD = (1, 2, 3, 4, 5, 3, 4, 1, 2)


def spaltenstein_lift() -> Matrix:
    return la.as_matrix([
        [0, 0, 0, 0, 0, 1],
        [0, 0, -1, 0, 0, 0],
        [1, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, -1, 0],
        [0, -1, 0, 0, 0, 0],
        [0, 0, 0, 1, 0, 0],
    ])


def spaltenstein_pair(s: Fraction | int, t: Fraction | int) -> tuple[Matrix, Matrix]:
    s, t = Fraction(s), Fraction(t)
    ti = 1 / t
    n = la.as_matrix([
        [1, 0, 0, 0, 0, 0],
        [0, 1, 0, -s * t, 0, -s],
        [0, 0, 1, s, 0, s * ti],
        [0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1],
    ])
    g = la.as_matrix([
        [0, 0, 0, 0, 0, 1],
        [0, 0, -1, 0, 0, 0],
        [1, 0, ti, 0, 0, 0],
        [0, 0, 0, 0, -1, 0],
        [0, -1, -t, 0, 0, 0],
        [0, 0, 0, 1, t, ti],
    ])
    return n, g


def spaltenstein_context() -> SliceContext:
    return SliceContext.build(6, SPALTENSTEIN_WORD, "full", "identity", lift=spaltenstein_lift())


def spaltenstein_witness(s: Fraction | int, t: Fraction | int, ctx: SliceContext | None = None) -> bool:
    """n in N_+, g in wN_w and n^-1 g n in wN_w: two preimages of one point."""
    if Fraction(t) == 0:
        raise ValueError("t must be nonzero")
    ctx = ctx or spaltenstein_context()
    n, g = spaltenstein_pair(Fraction(s), Fraction(t))
    if not ctx.in_N(n) or not ctx.in_slice(g):
        return False
    return ctx.in_slice(ctx.psi(n, g))


def sl3_longest_context() -> SliceContext:
    lift = [[0, 0, 1], [0, -1, 0], [1, 0, 0]]
    return SliceContext.build(3, (1, 2, 1), "firm", "fixed", lift=lift)


def sl3_closed_form(n1, n2, n12, t, x1, x2, x12) -> Matrix:
    """Conjugate n^-1 g n for the SL3 longest element, written out entrywise."""
    n1, n2, n12, t, x1, x2, x12 = map(Fraction, (n1, n2, n12, t, x1, x2, x12))
    ti2 = 1 / t ** 2
    a = n1 * n2 - n12
    return la.as_matrix([
        [a * t, n1 * ti2 + a * (n1 * t + x1),
         n1 * n2 * ti2 + a * (n12 * t + x12 + n2 * x1) + t - n1 * x2],
        [-n2 * t, -ti2 - n1 * n2 * t - n2 * x1,
         x2 - ti2 * n2 * (1 + t ** 2 * (n12 * t + n2 * x1 + x12))],
        [t, x1 + n1 * t, n12 * t + n2 * x1 + x12],
    ])


def sl3_closed_form_inputs(n1, n2, n12, t, x1, x2, x12) -> tuple[Matrix, Matrix]:
    n = la.as_matrix([[1, n1, n12], [0, 1, n2], [0, 0, 1]])
    t = Fraction(t)
    g = la.as_matrix([[0, 0, t], [0, -1 / t ** 2, x2], [t, x1, x12]])
    return n, g


def companion_family(coeffs: Sequence[Fraction]) -> Matrix:
    """Frobenius companion matrix with (-1)^rk in the corner."""
    r = len(coeffs)
    n = r + 1
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(r):
        rows[i][i + 1] = Fraction(1)
    rows[r][0] = Fraction((-1) ** r)
    for k, c in enumerate(coeffs):
        rows[r][k + 1] = Fraction(c)
    return la.as_matrix(rows)


def coxeter_word(rank: int) -> tuple[int, ...]:
    """s_rk ... s_1."""
    return tuple(range(rank, 0, -1))
