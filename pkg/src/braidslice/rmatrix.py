"""Factorisable r-matrices on sl_n from Belavin-Drinfeld data.

Everything lives in the basis ``e_b = E_ij``, ``f_b = E_ji`` (one pair per
positive root) followed by ``h_k = E_kk - E_k+1,k+1``.  Tensors in g(x)g are
dicts keyed by pairs of basis indices; the trace form is the invariant
pairing, so ``d_b = 1`` throughout.  A tensor ``x (x) y`` acts on covectors
by ``xi -> xi(x) y``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import linalg as la
from .chevalley import position, root_at, standard_lift
from .linalg import Matrix
from .root_system import RootSystem, build_root_system
from .weyl import WeylElement, weyl_from_word

Vector = dict[int, Fraction]
Tensor = dict[tuple[int, int], Fraction]
Tensor3 = dict[tuple[int, int, int], Fraction]


class TripleError(ValueError):
    pass


class TorusConstraintError(ValueError):
    def __init__(self, failed: list[str]):
        super().__init__("r0 violates the torus constraint: " + "; ".join(failed))
        self.failed = failed


class LSpecError(ValueError):
    pass


# Lie algebra data --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class LieData:
    n: int

    @cached_property
    def sys(self) -> RootSystem:
        return build_root_system("A", self.n - 1)

    @property
    def P(self) -> int:
        return self.sys.P

    @property
    def rank(self) -> int:
        return self.n - 1

    @property
    def dim(self) -> int:
        return 2 * self.P + self.rank

    def e(self, b: int) -> int:
        return b

    def f(self, b: int) -> int:
        return self.P + b

    def h(self, k: int) -> int:
        return 2 * self.P + k

    def is_torus(self, a: int) -> bool:
        return a >= 2 * self.P

    @cached_property
    def basis(self) -> list[Matrix]:
        n = self.n
        out = []
        for b in range(self.P):
            i, j = position(self.sys, b)
            out.append(_unit(n, i, j))
        for b in range(self.P):
            i, j = position(self.sys, b)
            out.append(_unit(n, j, i))
        for k in range(self.rank):
            out.append(la.add(_unit(n, k, k), _unit(n, k + 1, k + 1), -1))
        return out

    def name(self, a: int) -> str:
        if a < self.P:
            return "e_" + self.sys.name(a)
        if a < 2 * self.P:
            return "f_" + self.sys.name(a - self.P)
        return f"h{a - 2 * self.P + 1}"

    def coords(self, m: Matrix) -> Vector:
        """Coordinates of a traceless matrix."""
        n = self.n
        if sum(m[i][i] for i in range(n)) != 0:
            raise ValueError("matrix is not traceless")
        out: Vector = {}
        for i in range(n):
            for j in range(n):
                if i != j and m[i][j]:
                    # negative roots are indexed b + P, matching f_b
                    out[root_at(self.sys, i, j)] = Fraction(m[i][j])
        run = Fraction(0)
        for k in range(self.rank):
            run += m[k][k]
            if run:
                out[self.h(k)] = run
        return out

    def matrix(self, v: Mapping[int, Fraction]) -> Matrix:
        out = la.zeros(self.n)
        for a, c in v.items():
            out = la.add(out, self.basis[a], c)
        return out

    @lru_cache(maxsize=None)
    def bracket_basis(self, a: int, b: int) -> tuple[tuple[int, Fraction], ...]:
        x, y = self.basis[a], self.basis[b]
        m = la.add(la.matmul(x, y), la.matmul(y, x), -1)
        return tuple(sorted(self.coords(m).items()))

    def bracket(self, u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Vector:
        out: Vector = {}
        for a, x in u.items():
            for b, y in v.items():
                for c, z in self.bracket_basis(a, b):
                    _acc(out, c, x * y * z)
        return out

    @cached_property
    def form(self) -> list[list[Fraction]]:
        """Trace form on the basis."""
        B = self.basis
        return [[_trace(la.matmul(x, y)) for y in B] for x in B]

    @cached_property
    def coweights(self) -> list[Vector]:
        """Dual basis to the simple roots inside the Cartan subalgebra."""
        n = self.n
        out = []
        for i in range(self.rank):
            d = [Fraction(int(k <= i)) - Fraction(i + 1, n) for k in range(n)]
            out.append(self.coords(_diag(d)))
        return out

    def simple_root_value(self, k: int, t: Mapping[int, Fraction]) -> Fraction:
        """alpha_k evaluated on a Cartan element given in h-coordinates."""
        m = self.matrix(t)
        return m[k][k] - m[k + 1][k + 1]

    def casimir(self) -> Tensor:
        out: Tensor = {}
        for b in range(self.P):
            out[(self.e(b), self.f(b))] = Fraction(1)
            out[(self.f(b), self.e(b))] = Fraction(1)
        _tensor_add(out, self.casimir_torus())
        return out

    def casimir_torus(self) -> Tensor:
        """c_t = sum_i w_i (x) h_i."""
        out: Tensor = {}
        for i, om in enumerate(self.coweights):
            for a, c in om.items():
                _acc(out, (a, self.h(i)), c)
        return out

    def jacobi_holds(self) -> bool:
        rng = range(self.dim)
        for a, b, c in product(rng, rng, rng):
            x, y, z = {a: Fraction(1)}, {b: Fraction(1)}, {c: Fraction(1)}
            s = self.bracket(x, self.bracket(y, z))
            _vec_add(s, self.bracket(y, self.bracket(z, x)))
            _vec_add(s, self.bracket(z, self.bracket(x, y)))
            if any(s.values()):
                return False
        return True


@lru_cache(maxsize=None)
def sl(n: int) -> LieData:
    if n < 2:
        raise ValueError("sl_n needs n >= 2")
    return LieData(n)


def parse_algebra(label: str) -> LieData:
    label = label.strip().lower()
    if not label.startswith("sl") or not label[2:].isdigit():
        raise ValueError(f"unknown algebra {label!r}; expected sl<n>")
    return sl(int(label[2:]))


# Belavin-Drinfeld triples ---------------------------------------------------

@dataclass(frozen=True)
class BDTriple:
    """tau: T0 -> T1 on 0-based simple root indices."""
    tau: tuple[tuple[int, int], ...] = ()

    @property
    def t0(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.tau)

    @property
    def t1(self) -> tuple[int, ...]:
        return tuple(b for _, b in self.tau)

    @property
    def mapping(self) -> dict[int, int]:
        return dict(self.tau)

    @classmethod
    def parse(cls, text: str) -> "BDTriple":
        """'1>2, 3>4' with 1-based indices; '' for the empty triple."""
        pairs = []
        for chunk in text.replace(";", ",").split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            a, _, b = chunk.partition(">")
            pairs.append((int(a) - 1, int(b) - 1))
        return cls(tuple(sorted(pairs)))

    def render(self) -> str:
        return ", ".join(f"{a + 1}>{b + 1}" for a, b in self.tau)


def validate_triple(lie: LieData, triple: BDTriple) -> None:
    sys = lie.sys
    t0, t1 = triple.t0, triple.t1
    r = lie.rank
    if any(not 0 <= x < r for x in t0 + t1):
        raise TripleError("simple root index out of range")
    if len(set(t0)) != len(t0) or len(set(t1)) != len(t1):
        raise TripleError("tau is not a bijection")
    tau = triple.mapping
    for a in t0:
        for b in t0:
            if sys.gram[tau[a]][tau[b]] != sys.gram[a][b]:
                raise TripleError(f"tau does not preserve the pairing of alpha{a + 1}, alpha{b + 1}")
    for a in t0:
        seen, x = set(), a
        while x in tau:
            if x in seen:
                raise TripleError(f"tau is not nilpotent at alpha{a + 1}")
            seen.add(x)
            x = tau[x]


def _tau_root(lie: LieData, triple: BDTriple, beta: int) -> int | None:
    """tau extended to positive roots in the span of T0, else None."""
    sys = lie.sys
    tau = triple.mapping
    c = sys.roots[beta]
    if any(x and k not in tau for k, x in enumerate(c)):
        return None
    image = [0] * lie.rank
    for k, x in enumerate(c):
        if x:
            image[tau[k]] += x
    return sys.index.get(tuple(image))


def _theta(lie: LieData, triple: BDTriple, beta: int) -> tuple[int, Fraction]:
    """theta(E_beta) = sign * E_tau(beta), with theta the algebra map extending tau."""
    sys = lie.sys
    target = _tau_root(lie, triple, beta)
    if target is None:
        raise ValueError("root is not in the span of T0")
    if sys.height(beta) == 1:
        return target, Fraction(1)
    # split beta = alpha + gamma with alpha simple and recurse through the bracket
    for k in range(lie.rank):
        g = _difference(sys, beta, sys.simple[k])
        if g is None:
            continue
        sb = dict(lie.bracket_basis(lie.e(sys.simple[k]), lie.e(g)))
        coeff = sb.get(lie.e(beta), Fraction(0))
        if not coeff:
            continue
        ta, sa = _theta(lie, triple, sys.simple[k])
        tg, sg = _theta(lie, triple, g)
        img = dict(lie.bracket_basis(lie.e(ta), lie.e(tg)))
        return target, img[lie.e(target)] * sa * sg / coeff
    raise AssertionError("no decomposition found")


def _difference(sys: RootSystem, beta: int, alpha: int) -> int | None:
    c = tuple(x - y for x, y in zip(sys.roots[beta], sys.roots[alpha]))
    b = sys.index.get(c)
    return b if b is not None and b < sys.P else None


def triple_order(lie: LieData, triple: BDTriple) -> list[tuple[int, int, int, Fraction]]:
    """All (beta, beta', m, sign) with beta' = tau^m(beta), m >= 1."""
    out = []
    for b in range(lie.P):
        cur, sign, m = b, Fraction(1), 0
        while True:
            nxt = _tau_root(lie, triple, cur)
            if nxt is None:
                break
            _, s = _theta(lie, triple, cur)
            cur, sign, m = nxt, sign * s, m + 1
            out.append((b, cur, m, sign))
    return out


# torus part --------------------------------------------------------------------

def torus_tensor(lie: LieData, a: Sequence[Sequence[Fraction]]) -> Tensor:
    """sum A_ij h_i (x) h_j."""
    out: Tensor = {}
    for i in range(lie.rank):
        for j in range(lie.rank):
            if a[i][j]:
                out[(lie.h(i), lie.h(j))] = Fraction(a[i][j])
    return out


def torus_matrix(lie: LieData, t: Tensor) -> list[list[Fraction]]:
    r = lie.rank
    out = [[Fraction(0)] * r for _ in range(r)]
    for (a, b), c in t.items():
        if not (lie.is_torus(a) and lie.is_torus(b)):
            raise ValueError("tensor has a non-torus component")
        out[a - 2 * lie.P][b - 2 * lie.P] += c
    return out


def operator_of(lie: LieData, t: Tensor) -> list[list[Fraction]]:
    """Matrix (in h-coordinates, columns = images of h_k) of x -> (<x,.> (x) 1) t."""
    r = lie.rank
    A = torus_matrix(lie, t)
    G = [[lie.form[lie.h(i)][lie.h(j)] for j in range(r)] for i in range(r)]
    # R(h_k) = sum_ij A_ij (h_k, h_i) h_j
    return [[sum(G[k][i] * A[i][j] for i in range(r)) for k in range(r)] for j in range(r)]


def tensor_of_operator(lie: LieData, op: Sequence[Sequence[Fraction]]) -> Tensor:
    """Inverse of operator_of: sum_k w_k (x) R(h_k)."""
    out: Tensor = {}
    for k, om in enumerate(lie.coweights):
        for a, c in om.items():
            for j in range(lie.rank):
                if op[j][k]:
                    _acc(out, (a, lie.h(j)), c * Fraction(op[j][k]))
    return out


def torus_constraint_failures(lie: LieData, triple: BDTriple, r0: Tensor) -> list[str]:
    x = dict(r0)
    _tensor_add(x, lie.casimir_torus())
    tau = triple.mapping
    failed = []
    for k in triple.t0:
        left: Vector = {}
        for (a, b), c in x.items():
            ta = lie.simple_root_value(tau[k], {a: Fraction(1)})
            if ta:
                _acc(left, b, c * ta)
            tb = lie.simple_root_value(k, {b: Fraction(1)})
            if tb:
                _acc(left, a, c * tb)
        if any(left.values()):
            failed.append(f"alpha{k + 1} -> alpha{tau[k] + 1}")
    if any(c + r0.get((b, a), 0) for (a, b), c in r0.items()):
        failed.append("r0 is not skew")
    return failed


def solve_r0(lie: LieData, triple: BDTriple) -> tuple[Tensor, list[Tensor]]:
    """A particular r0 and a basis of the directions of the torsor."""
    r = lie.rank
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]

    def skew(vals: Sequence[Fraction]) -> Tensor:
        a = [[Fraction(0)] * r for _ in range(r)]
        for (i, j), v in zip(pairs, vals):
            a[i][j], a[j][i] = v, -v
        return torus_tensor(lie, a)

    def residual(vals: Sequence[Fraction]) -> list[Fraction]:
        x = skew(vals)
        _tensor_add(x, lie.casimir_torus())
        tau = triple.mapping
        out = []
        for k in triple.t0:
            left = [Fraction(0)] * lie.dim
            for (a, b), c in x.items():
                left[b] += c * lie.simple_root_value(tau[k], {a: Fraction(1)})
                left[a] += c * lie.simple_root_value(k, {b: Fraction(1)})
            out += left
        return out

    zero = residual([Fraction(0)] * len(pairs))
    rows = [[Fraction(0)] * len(pairs) for _ in zero]
    for p in range(len(pairs)):
        unit_vals = [Fraction(int(q == p)) for q in range(len(pairs))]
        col = residual(unit_vals)
        for i, (c, z) in enumerate(zip(col, zero)):
            rows[i][p] = c - z
    rhs = [-z for z in zero]
    if not pairs:
        if any(rhs):
            raise TorusConstraintError(["no skew r0 exists for this triple"])
        return {}, []
    sol = la.solve_any(rows, rhs)
    if sol is None:
        raise TorusConstraintError(["no skew r0 exists for this triple"])
    kernel = la.kernel(rows, len(pairs))
    return skew(sol), [skew(k) for k in kernel]


# r-matrices ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RMatrixData:
    lie: LieData
    triple: BDTriple
    r0: Tensor
    r_plus: Tensor
    r_minus: Tensor

    @property
    def r(self) -> Tensor:
        out = dict(self.r_plus)
        _tensor_add(out, self.r_minus)
        return _clean(out)

    @property
    def c(self) -> Tensor:
        out = dict(self.r_plus)
        _tensor_add(out, self.r_minus, -1)
        return _clean(out)

    def apply(self, t: Tensor, xi: Mapping[int, Fraction]) -> Vector:
        out: Vector = {}
        for (a, b), c in t.items():
            x = xi.get(a)
            if x:
                _acc(out, b, c * x)
        return _clean(out)

    def r_plus_map(self, xi: Mapping[int, Fraction]) -> Vector:
        return self.apply(self.r_plus, xi)

    def r_minus_map(self, xi: Mapping[int, Fraction]) -> Vector:
        return self.apply(self.r_minus, xi)


def build_rmatrix(lie: LieData, triple: BDTriple = BDTriple(), r0: Tensor | Sequence[Sequence] | None = None) -> RMatrixData:
    validate_triple(lie, triple)
    if r0 is None:
        r0, _ = solve_r0(lie, triple)
    elif not isinstance(r0, dict):
        r0 = tensor_of_operator(lie, r0)
    r0 = _clean(dict(r0))
    failed = torus_constraint_failures(lie, triple, r0)
    if failed:
        raise TorusConstraintError(failed)
    half = Fraction(1, 2)
    ct = lie.casimir_torus()
    plus: Tensor = {}
    minus: Tensor = {}
    _tensor_add(plus, r0, half)
    _tensor_add(plus, ct, half)
    _tensor_add(minus, r0, half)
    _tensor_add(minus, ct, -half)
    for b in range(lie.P):
        _acc(plus, (lie.f(b), lie.e(b)), Fraction(1))
        _acc(minus, (lie.e(b), lie.f(b)), Fraction(-1))
    for b, b2, _, sign in triple_order(lie, triple):
        wedge = {(lie.f(b), lie.e(b2)): sign, (lie.e(b2), lie.f(b)): -sign}
        _tensor_add(plus, wedge)
        _tensor_add(minus, wedge)
    return RMatrixData(lie, triple, r0, _clean(plus), _clean(minus))


def cybe(lie: LieData, r: Tensor) -> Tensor3:
    """[r12, r13] + [r12, r23] + [r13, r23]."""
    out: Tensor3 = {}
    items = list(r.items())
    for (i, j), a in items:
        for (k, l), b in items:
            ab = a * b
            for c, z in lie.bracket_basis(i, k):
                _acc(out, (c, j, l), ab * z)
            for c, z in lie.bracket_basis(j, k):
                _acc(out, (i, c, l), ab * z)
            for c, z in lie.bracket_basis(j, l):
                _acc(out, (i, k, c), ab * z)
    return _clean(out)


def mcybe_residual(data: RMatrixData) -> Tensor3:
    out = cybe(data.lie, data.r)
    for key, v in cybe(data.lie, data.c).items():
        _acc(out, key, v)
    return _clean(out)


def mcybe_check(data: RMatrixData) -> bool:
    return not mcybe_residual(data)


def corrupt(data: RMatrixData, key: tuple[int, int] | None = None) -> RMatrixData:
    """Flip the sign of one root term of r_+ (a negative control)."""
    key = key or (data.lie.f(0), data.lie.e(0))
    plus = dict(data.r_plus)
    plus[key] = -plus[key]
    return RMatrixData(data.lie, data.triple, data.r0, plus, data.r_minus)


# dual side ---------------------------------------------------------------------

def dual_embedding(data: RMatrixData, covector: Mapping[int, Fraction]) -> tuple[Vector, Vector]:
    """iota(xi) = (r_+ xi, r_- xi); covectors are in the basis dual to the basis."""
    xi = {a: Fraction(c) for a, c in covector.items()}
    return data.r_plus_map(xi), data.r_minus_map(xi)


def cobracket_dual(data: RMatrixData, xi: Mapping[int, Fraction], eta: Mapping[int, Fraction]) -> Vector:
    """[xi, eta](x) = (xi (x) eta)(delta x) with delta x = (ad_x (x) 1 + 1 (x) ad_x) r."""
    lie = data.lie
    r = data.r
    out: Vector = {}
    for x in range(lie.dim):
        total = Fraction(0)
        for (a, b), c in r.items():
            for d, z in lie.bracket_basis(x, a):
                total += c * z * xi.get(d, 0) * eta.get(b, 0)
            for d, z in lie.bracket_basis(x, b):
                total += c * z * xi.get(a, 0) * eta.get(d, 0)
        if total:
            out[x] = total
    return out


def homomorphism_failures(data: RMatrixData) -> list[tuple[int, int]]:
    """Basis pairs where r_+[xi, eta] != [r_+ xi, r_+ eta] (and likewise for r_-).

    The dual bracket is taken with a factor 1/2, which is what makes r_+ a
    homomorphism when r_+ - r_- is the Casimir.
    """
    lie = data.lie
    bad = []
    for a in range(lie.dim):
        for b in range(a + 1, lie.dim):
            xi, eta = {a: Fraction(1)}, {b: Fraction(1)}
            br = {k: v / 2 for k, v in cobracket_dual(data, xi, eta).items()}
            for m in (data.r_plus_map, data.r_minus_map):
                lhs = m(br)
                rhs = lie.bracket(m(xi), m(eta))
                if _clean(lhs) != _clean(rhs):
                    bad.append((a, b))
                    break
    return bad


def annihilator_identity(data: RMatrixData) -> bool:
    """<y, r_+ x> = -<r_- y, x> on all basis pairs, and ann(im r_+) = ker r_-."""
    lie = data.lie
    dim = lie.dim
    for a in range(dim):
        for b in range(dim):
            if data.r_plus.get((a, b), 0) != -data.r_minus.get((b, a), 0):
                return False
    plus_rows = [[data.r_plus.get((a, b), Fraction(0)) for b in range(dim)] for a in range(dim)]
    minus_rows = [[data.r_minus.get((a, b), Fraction(0)) for b in range(dim)] for a in range(dim)]
    image_plus = la.row_space(plus_rows)
    ann = la.kernel(image_plus, dim) if image_plus else [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    ker_minus = la.kernel(la.transpose(minus_rows), dim)
    return la.rank(ann) == la.rank(ker_minus) == la.rank(ann + ker_minus)


def coisotropic_closure(data: RMatrixData, w: WeylElement) -> bool:
    """iota of the annihilator of n_w is closed under the bracket of g + g."""
    lie = data.lie
    keep = [a for a in range(lie.dim) if not (a < lie.P and w.inversion_set >> a & 1)]
    images = [dual_embedding(data, {a: Fraction(1)}) for a in keep]
    return _pairs_closed(lie, images)


def _pairs_closed(lie: LieData, images: list[tuple[Vector, Vector]]) -> bool:
    dim = lie.dim

    def flat(p: tuple[Vector, Vector]) -> list[Fraction]:
        return [p[0].get(i, Fraction(0)) for i in range(dim)] + [p[1].get(i, Fraction(0)) for i in range(dim)]
    span = [flat(p) for p in images]
    base = la.rank(span)
    for i, p in enumerate(images):
        for q in images[i + 1:]:
            br = (lie.bracket(p[0], q[0]), lie.bracket(p[1], q[1]))
            if la.rank(span + [flat(br)]) != base:
                return False
    return True


def coisotropy_hypothesis(lie: LieData, triple: BDTriple, w: WeylElement) -> bool:
    """T0 and T1 avoid R_w (the roots they span do)."""
    sys = lie.sys
    simple_in = {k for k in triple.t0 + triple.t1}
    for b in range(sys.P):
        if w.inversion_set >> b & 1:
            support = {k for k, x in enumerate(sys.roots[b]) if x}
            if support <= simple_in:
                return False
    return True


# Cayley transform and the reduction criterion ------------------------------------

def weyl_torus_action(lie: LieData, w: WeylElement) -> list[list[Fraction]]:
    """w on h-coordinates via t -> lift t lift^-1."""
    lift = standard_lift(lie.sys, w)
    inv = la.inverse(lift)
    cols = []
    for k in range(lie.rank):
        img = lie.coords(la.matmul_all(lift, lie.basis[lie.h(k)], inv))
        cols.append([img.get(lie.h(j), Fraction(0)) for j in range(lie.rank)])
    return la.transpose(cols)


def _torus_gram(lie: LieData) -> list[list[Fraction]]:
    r = lie.rank
    return [[lie.form[lie.h(i)][lie.h(j)] for j in range(r)] for i in range(r)]


def fixed_torus(lie: LieData, w: WeylElement) -> list[list[Fraction]]:
    """Basis (h-coordinate vectors) of t^w."""
    W = weyl_torus_action(lie, w)
    r = lie.rank
    return la.kernel(la.add(W, la.identity(r), -1), r)


def moved_torus(lie: LieData, w: WeylElement) -> list[list[Fraction]]:
    """Basis of t_w, the orthogonal complement of t^w."""
    G = _torus_gram(lie)
    fixed = fixed_torus(lie, w)
    return la.kernel([list(la.matmul([v], G)[0]) for v in fixed], lie.rank) if fixed else \
        [[Fraction(int(i == j)) for j in range(lie.rank)] for i in range(lie.rank)]


def cayley_r0(lie: LieData, w: WeylElement) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(basis of t_w, matrix of (1+w)(1-w)^-1 in that basis)."""
    basis = moved_torus(lie, w)
    if not basis:
        return [], []
    coords = _restrict(weyl_torus_action(lie, w), basis)
    k = len(basis)
    one = la.identity(k)
    cay = la.matmul(la.add(one, coords), la.inverse(la.add(one, coords, -1)))
    return basis, [list(row) for row in cay]


def _restrict(op: Matrix, basis: list[list[Fraction]]) -> list[list[Fraction]]:
    """Matrix of op on the invariant subspace spanned by basis (columns = images)."""
    cols = []
    for v in basis:
        img = [sum(op[i][j] * v[j] for j in range(len(v))) for i in range(len(v))]
        c = la.solve(la.transpose(basis), img)
        if c is None:
            raise ValueError("subspace is not invariant")
        cols.append(list(c))
    return la.transpose(cols)


def cayley_operator(lie: LieData, w: WeylElement) -> list[list[Fraction]]:
    """The skew operator on t equal to the Cayley transform on t_w and 0 on t^w."""
    r = lie.rank
    basis, cay = cayley_r0(lie, w)
    fixed = fixed_torus(lie, w)
    full = la.transpose(fixed + basis)
    k0 = len(fixed)
    block = [[Fraction(0)] * r for _ in range(r)]
    for i in range(len(basis)):
        for j in range(len(basis)):
            block[k0 + i][k0 + j] = Fraction(cay[i][j])
    return [list(x) for x in la.matmul_all(full, block, la.inverse(full))] if r else []


def is_skew(lie: LieData, op: Sequence[Sequence[Fraction]]) -> bool:
    G = _torus_gram(lie)
    M = la.matmul(la.transpose(la.as_matrix(op)), G)
    N = la.matmul(G, la.as_matrix(op))
    return la.add(M, N) == la.zeros(lie.rank)


@dataclass(frozen=True)
class ReductionReport:
    conditions: dict[str, bool]
    by_conditions: bool
    by_image: bool

    @property
    def agree(self) -> bool:
        return self.by_conditions == self.by_image

    @property
    def value(self) -> bool:
        return self.by_conditions


def parse_l_spec(lie: LieData, w: WeylElement, spec: str | list[list[Fraction]]) -> list[list[Fraction]]:
    """'fixed' (t^w), 'zero', or explicit h-coordinate vectors spanning l cap t."""
    if spec == "fixed":
        return fixed_torus(lie, w)
    if spec == "zero":
        return []
    if isinstance(spec, str):
        raise LSpecError(f"unknown L spec {spec!r}")
    vecs = [[Fraction(x) for x in v] for v in spec]
    if any(len(v) != lie.rank for v in vecs):
        raise LSpecError("L spec vectors have the wrong length")
    return la.row_space(vecs) if vecs else []


def reduction_criterion(lie: LieData, w: WeylElement, l_spec: str | list[list[Fraction]],
                        r0: Sequence[Sequence[Fraction]]) -> ReductionReport:
    """Evaluate the torus conditions (a)-(c) and the image containment directly."""
    r = lie.rank
    R = la.as_matrix(r0) if r else ()
    if r and not is_skew(lie, R):
        raise ValueError("r0 is not skew for the trace form")
    fixed = fixed_torus(lie, w)
    lt = parse_l_spec(lie, w, l_spec)
    if lt and la.rank(fixed + lt) != len(fixed):
        raise LSpecError("l cap t must lie inside t^w")
    cond_a = len(lt) == len(fixed)
    cond_b = all(la.rank(fixed + [list(_apply(R, v))]) == len(fixed) for v in fixed)
    moved, cay = cayley_r0(lie, w)
    cond_c = True
    for i, v in enumerate(moved):
        want = [sum(moved[j][k] * cay[j][i] for j in range(len(moved))) for k in range(r)]
        if list(_apply(R, v)) != want:
            cond_c = False
    conditions = {"a: l cap t = t^w": cond_a, "b: r0 preserves t^w": cond_b,
                  "c: r0 is the Cayley transform on t_w": cond_c}
    # direct route: image of 1/2 [(w-1) r0 + (w+1)] must lie in l cap t
    W = weyl_torus_action(lie, w)
    one = la.identity(r)
    M = la.add(la.matmul(la.add(W, one, -1), R), la.add(W, one)) if r else ()
    image = la.row_space(la.transpose(M)) if r else []
    by_image = la.rank(lt + image) == len(lt) if image else True
    return ReductionReport(conditions, all(conditions.values()), by_image)


def _apply(op: Matrix, v: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(sum(op[i][j] * v[j] for j in range(len(v))) for i in range(len(op)))


# Semenov-Tian-Shansky bivector ------------------------------------------------------

def adjoint(lie: LieData, g: Matrix) -> list[Vector]:
    """Right adjoint action x -> g^-1 x g on basis vectors."""
    gi = la.inverse(g)
    return [lie.coords(la.matmul_all(gi, x, g)) for x in lie.basis]


def _apply_pair(lie: LieData, t: Tensor, left: list[Vector] | None, right: list[Vector] | None) -> Tensor:
    out: Tensor = {}
    for (a, b), c in t.items():
        la_ = left[a] if left is not None else {a: Fraction(1)}
        rb = right[b] if right is not None else {b: Fraction(1)}
        for x, u in la_.items():
            for y, v in rb.items():
                _acc(out, (x, y), c * u * v)
    return out


def sts_bivector(lie: LieData, data: RMatrixData, g: Matrix) -> Tensor:
    """((Ad_g - 1) (x) Ad_g) r_+ - ((Ad_g - 1) (x) 1) r_-, left trivialised."""
    g = la.as_matrix(g)
    ad = adjoint(lie, g)
    ad_minus = [_sub(v, {a: Fraction(1)}) for a, v in enumerate(ad)]
    out = _apply_pair(lie, data.r_plus, ad_minus, ad)
    _tensor_add(out, _apply_pair(lie, data.r_minus, ad_minus, None), -1)
    return _clean(out)


def sts_torus_component(lie: LieData, g: Matrix) -> Tensor:
    """((Ad_g - 1) (x) (Ad_g + 1)) (c_t / 2)."""
    ad = adjoint(lie, la.as_matrix(g))
    minus = [_sub(v, {a: Fraction(1)}) for a, v in enumerate(ad)]
    plus = [_sub(v, {a: Fraction(-1)}) for a, v in enumerate(ad)]
    half = {k: v / 2 for k, v in lie.casimir_torus().items()}
    return _clean(_apply_pair(lie, half, minus, plus))


def unit_tensor_entries(lie: LieData, t: Tensor) -> dict[tuple[int, int, int, int], Fraction]:
    """Coefficients of t on E_ij (x) E_kl."""
    out: dict[tuple[int, int, int, int], Fraction] = {}
    for (a, b), c in t.items():
        x, y = lie.basis[a], lie.basis[b]
        n = lie.n
        for i, j, k, l in product(range(n), repeat=4):
            v = x[i][j] * y[k][l]
            if v:
                key = (i, j, k, l)
                out[key] = out.get(key, Fraction(0)) + c * v
    return {k: v for k, v in out.items() if v}


def is_integral(entries: Mapping[object, Fraction], inverted: Sequence[int] = ()) -> bool:
    """All denominators are products of the primes in ``inverted``."""
    for v in entries.values():
        d = Fraction(v).denominator
        for p in inverted:
            while d % p == 0:
                d //= p
        if d != 1:
            return False
    return True


def is_skew_tensor(t: Tensor) -> bool:
    return all(c + t.get((b, a), 0) == 0 for (a, b), c in t.items())


def covector_datum(g: Matrix, t: Matrix) -> tuple[Matrix, Fraction]:
    """(R_g t - L_g t, derivative of the lower-left coordinate along t^g)."""
    g, t = la.as_matrix(g), la.as_matrix(t)
    diff = la.add(la.matmul(t, g), la.matmul(g, t), -1)
    return diff, diff[len(g) - 1][0]


def sl2_sts_example() -> tuple[Matrix, Fraction]:
    sys = build_root_system("A", 1)
    lift = standard_lift(sys, weyl_from_word(sys, (1,)))
    g = la.matmul(lift, la.as_matrix([[1, 1], [0, 1]]))
    return covector_datum(g, la.as_matrix([[1, 0], [0, -1]]))


# small helpers ---------------------------------------------------------------------

def _unit(n: int, i: int, j: int) -> Matrix:
    return tuple(tuple(Fraction(int((r, s) == (i, j))) for s in range(n)) for r in range(n))


def _diag(d: Sequence[Fraction]) -> Matrix:
    n = len(d)
    return tuple(tuple(Fraction(d[i]) if i == j else Fraction(0) for j in range(n)) for i in range(n))


def _trace(m: Matrix) -> Fraction:
    return sum((m[i][i] for i in range(len(m))), Fraction(0))


def _acc(d: dict, k, v) -> None:
    if v:
        s = d.get(k, 0) + v
        if s:
            d[k] = s
        else:
            d.pop(k, None)


def _vec_add(u: Vector, v: Mapping[int, Fraction], scale: Fraction | int = 1) -> None:
    for k, x in v.items():
        _acc(u, k, x * scale)


def _sub(u: Mapping[int, Fraction], v: Mapping[int, Fraction]) -> Vector:
    out = dict(u)
    _vec_add(out, v, -1)
    return out


def _tensor_add(t: dict, s: Mapping, scale: Fraction | int = 1) -> None:
    for k, x in s.items():
        _acc(t, k, x * scale)


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def tensor_from_items(items: Iterable[tuple[tuple[int, int], Fraction]]) -> Tensor:
    out: Tensor = {}
    for k, v in items:
        _acc(out, k, Fraction(v))
    return out
