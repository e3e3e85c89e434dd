"""Registry of worked examples with their expected outcomes.

Each record computes a value and compares it with a reference value.  When
the two disagree the record keeps the reference value as ``expected`` and
fails; ``note`` explains the disagreement.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

from .braid import dg_factor, dg_of_power, dg_stabilized, dgn, power
from .chevalley import (SliceContext, companion_family, coxeter_word,
                        sl3_closed_form, sl3_closed_form_inputs, sl3_longest_context,
                        spaltenstein_context, spaltenstein_lift, spaltenstein_witness,
                        standard_lift, validate_lift)
from .cross import (CrossingPairError, braid_equation_check, crossing_condition, cross_iter,
                    cross_root, cross_set, is_crossing_pair, is_nimble, main_lemma_ii_check)
from .rmatrix import BDTriple, build_rmatrix, dual_embedding, sl, sl2_sts_example
from .root_system import build_root_system
from .weyl import elements, longest_element, parse_word, weyl_from_word


@dataclass
class ExampleRecord:
    id: str
    description: str
    expected: Any
    compute: Callable[[random.Random], Any] = field(repr=False)
    note: str = ""
    status: str = "not run"
    computed: Any = None

    def run(self, seed: int = 0) -> dict:
        try:
            self.computed = self.compute(random.Random(seed))
            self.status = "pass" if self.computed == self.expected else "fail"
        except Exception as exc:  # reported, not raised
            self.computed = f"error: {exc}"
            self.status = "fail"
        out = {"id": self.id, "description": self.description, "status": self.status,
               "expected": self.expected, "computed": self.computed}
        if self.note:
            out["note"] = self.note
        return out


def _w(label: str, word: str):
    sys = build_root_system(label)
    return sys, weyl_from_word(sys, parse_word(word))


def _names(sys, mask) -> list[str]:
    return sorted(sys.format_set(mask))


def _words(ws) -> list[str]:
    return [w.word_string() for w in ws]


# individual checks ------------------------------------------------------------

def _b3_length(rng):
    return _w("B3", "12312")[1].length


def _a3_weak(rng):
    sys, y = _w("A3", "321")
    return y.weak_leq(longest_element(sys))


def _b2_fixed(rng):
    sys, w = _w("B2", "2")
    return _names(sys, w.fixed_roots & sys.positive_mask)


def _b3_convex(rng):
    return _w("B3", "12312")[1].is_convex


def _a3_elliptic_convex(rng):
    w = _w("A3", "321")[1]
    return [w.is_elliptic, w.is_convex]


def _a6_normal(rng):
    w = _w("A6", "2 3 4 5 6 1 2 3 4 5 3 2")[1]
    return all(power(w, i).is_normal() and list(power(w, i).factors) == [w] * i for i in range(1, 6))


def _b3_dgn(rng):
    w = _w("B3", "12312")[1]
    return all(dgn(power(w, d)) == [w] * d for d in range(1, 7))


def _a3_dg_cube(rng):
    sys, w = _w("A3", "321")
    return dg_factor(power(w, 3)) == longest_element(sys)


def _b3_dg_square(rng):
    sys, w = _w("B3", "2321")
    return dg_factor(power(w, 2)).word_string() == (longest_element(sys) * weyl_from_word(sys, [3])).word_string()


A5_WORD = "1 2 3 4 5 3 4 1 2"
A5_MIDDLE = "4 5 1 2 3 4 3 1 2"


def _a5_dgn(rng):
    sys, w = _w("A5", A5_WORD)
    s5 = weyl_from_word(sys, [5])
    mid = weyl_from_word(sys, parse_word(A5_MIDDLE))
    return all(dgn(power(w, i + 2)) == [w * s5] + [mid] * i + [s5 * w] for i in range(5))


def _b3_inverse_dgn(rng):
    sys, w = _w("B3", "12312")
    wi = w.inverse()
    s1 = weyl_from_word(sys, [1])
    return {d: dgn(power(wi, d)) == [wi * s1] + [wi] * (d - 2) + [s1 * wi] for d in range(2, 7)}


def _a3_stabilized(rng):
    sys, w = _w("A3", "321")
    return dg_stabilized(w) == longest_element(sys)


def _b3_stabilized(rng):
    w = _w("B3", "12312")[1]
    return dg_stabilized(w) == w


def _b2_cross(rng):
    sys, w = _w("B2", "2")
    got = cross_root(w, sys.parse_root("a1"))
    return [_names(sys, got & sys.simple_mask), sys.parse_root("a1") == w(sys.parse_root("a122"))]


def _b2_s1s2_cross(rng):
    sys, w = _w("B2", "12")
    return _names(sys, cross_root(w, sys.parse_root("a1")))


def _a3_cross(rng):
    sys, w = _w("A3", "13")
    got = cross_root(w, sys.parse_root("a2"))
    return [_names(sys, got & sys.simple_mask), _names(sys, got)]


def _a5_cross(rng):
    sys, w = _w("A5", A5_WORD)
    return {d: _names(sys, cross_iter(w, sys.positive_mask, d)) for d in range(2, 11)}


def _b3_cross(rng):
    sys, w = _w("B3", "12312")
    return _names(sys, cross_set(w, sys.parse_set("a1233")))


def _b3_nimble(rng):
    sys, w = _w("B3", "12312")
    return is_nimble(w, w.inversion_set | sys.parse_set("a1233"))


def _a3_not_nimble(rng):
    sys, w = _w("A3", "321")
    s2w = weyl_from_word(sys, [2]) * w
    return [is_nimble(w, s2w.inversion_set), sys.name(w(sys.parse_root("a3")))]


def _convex_elements(label: str):
    sys = build_root_system(label)
    return [w for w in elements(sys) if w.is_convex]


def _stable_pairs(rng):
    bad = []
    for label in ("B2", "A3", "B3", "G2"):
        sys = build_root_system(label)
        for w in _convex_elements(label):
            try:
                is_crossing_pair(w, sys.positive_mask & ~w.stable_roots, 0)
            except CrossingPairError:
                bad.append(f"{label}:{w.word_string()}")
    return bad


def _dg_pairs(rng):
    bad = []
    for label in ("B2", "A3", "B3", "G2"):
        for w in _convex_elements(label):
            for d in range(1, 5):
                try:
                    is_crossing_pair(w, dg_of_power(w, d).inversion_set, 0)
                except CrossingPairError:
                    bad.append(f"{label}:{w.word_string()}:{d}")
    return bad


def _b3_crossing(rng):
    sys, w = _w("B3", "12312")
    return crossing_condition(w, w.inversion_set | sys.parse_set("a1233"))


def _a5_crossing(rng):
    sys, w = _w("A5", A5_WORD)
    return crossing_condition(w, sys.positive_mask)


def _a5_lemma(rng):
    sys, w = _w("A5", A5_WORD)
    s5w = weyl_from_word(sys, [5]) * w
    return [list(main_lemma_ii_check(w, longest_element(sys), 12)), list(main_lemma_ii_check(w, s5w, 12))]


def _braid_eq(label: str, word: str):
    return lambda rng: braid_equation_check(_w(label, word)[1])


def _a1_lift(rng):
    sys, w = _w("A1", "1")
    return [list(map(int, r)) for r in standard_lift(sys, w)]


def _sl3_lift(rng):
    ctx = sl3_longest_context()
    validate_lift(ctx.sys, ctx.w, ctx.lift)
    return [list(map(int, r)) for r in ctx.lift]


def _sl6_lift(rng):
    ctx = spaltenstein_context()
    validate_lift(ctx.sys, ctx.w, ctx.lift)
    return ctx.lift == spaltenstein_lift()


def _sl3_closed(rng):
    ctx = sl3_longest_context()
    ok = 0
    for _ in range(50):
        vals = [_rand(rng) for _ in range(7)]
        vals[3] = _rand_nonzero(rng)
        n, g = sl3_closed_form_inputs(*vals)
        ok += ctx.psi(n, g) == sl3_closed_form(*vals)
    return ok


def _companion(rng):
    out = []
    for n in (2, 3, 4, 5):
        ctx = SliceContext.build(n, coxeter_word(n - 1))
        for _ in range(5):
            g = ctx.random_slice(rng)
            coeffs = list(g[n - 1][1:])
            out.append(g == companion_family(coeffs) and ctx.in_slice(companion_family(coeffs)))
    return all(out)


def _spaltenstein_unit(rng):
    return spaltenstein_witness(1, 1)


def _sl2_sts(rng):
    diff, value = sl2_sts_example()
    return [[[int(x) for x in row] for row in diff], int(value)]


def _dual_trivial(rng):
    lie = sl(3)
    data = build_rmatrix(lie, BDTriple())
    ok = True
    for b in range(lie.P):
        plus, minus = dual_embedding(data, {lie.e(b): Fraction(1)})
        ok &= plus == {} and minus == {lie.f(b): Fraction(-1)}
    return ok


def _survey_row(rng):
    from .survey import survey_convex
    rows = survey_convex("A", 3)
    row = next(r for r in rows if r["w"] == "3 2 1")
    return [row["convex"], row["dg_stabilized"] == longest_element(build_root_system("A3")).word_string()]


def _rand(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


def _rand_nonzero(rng: random.Random) -> Fraction:
    while True:
        x = _rand(rng)
        if x:
            return x


A5_STABLE = ["a23", "a2345", "a3", "a345", "a5"]

RECORDS: list[ExampleRecord] = [
    ExampleRecord("b3-word-length", "B3, w = 12312 has length 5", 5, _b3_length),
    ExampleRecord("a3-coxeter-below-longest", "A3: 321 lies below the longest element", True, _a3_weak),
    ExampleRecord("b2-s2-fixed-roots", "B2, w = s2 fixes exactly a12 among positive roots", ["a12"], _b2_fixed),
    ExampleRecord("b3-12312-convex", "B3, w = 12312 is convex", True, _b3_convex),
    ExampleRecord("a3-coxeter-elliptic-convex", "A3, w = 321 is elliptic and convex", [True, True],
                  _a3_elliptic_convex),
    ExampleRecord("a6-powers-normal", "A6 Coxeter 2345612345 32: b_w^i is normal for i <= 5", True, _a6_normal),
    ExampleRecord("b3-powers-normal", "B3, w = 12312: DGN(b_w^d) = b_w^d for d <= 6", True, _b3_dgn),
    ExampleRecord("a3-dg-cube", "A3, w = 321: DG(b_w^3) is the longest element", True, _a3_dg_cube),
    ExampleRecord("b3-dg-square", "B3, w = 2321: DG(b_w^2) = w_0 s3", True, _b3_dg_square),
    ExampleRecord("a5-dgn-powers", "A5: DGN(b_w^(i+2)) = [w s5][451234312]^i[s5 w] for i = 0..4", True, _a5_dgn),
    ExampleRecord("b3-inverse-dgn", "B3, w = 12312: DGN(b_{w^-1}^d) = [w^-1 s1][w^-1]^(d-2)[s1 w^-1]",
                  {d: True for d in range(2, 7)}, _b3_inverse_dgn,
                  note="fails for d >= 3: the middle factors are w, not w^-1; see the decisions ledger"),
    ExampleRecord("a3-dg-stabilized", "A3, w = 321 stabilises at the longest element", True, _a3_stabilized),
    ExampleRecord("b3-dg-stabilized", "B3, w = 12312 stabilises at w", True, _b3_stabilized),
    ExampleRecord("b2-s2-cross-simple", "B2, w = s2: the only simple root in cross(a1) is a1 = w(a122)",
                  [["a1"], True], _b2_cross),
    ExampleRecord("b2-s1s2-cross", "B2, w = s1 s2: cross(a1) = {a122, a2}", ["a122", "a2"], _b2_s1s2_cross),
    ExampleRecord("a3-s1s3-cross-simple", "A3, w = s1 s3: the only simple root in cross(a2) is a2",
                  [["a2"], ["a12", "a123", "a2", "a23"]], _a3_cross),
    ExampleRecord("a5-spaltenstein-cross", "A5 Spaltenstein element: cross^d(R+) stabilises for d >= 2",
                  {d: A5_STABLE for d in range(2, 11)}, _a5_cross),
    ExampleRecord("b3-cross-a1233", "B3, w = 12312: cross({a1233}) = {a233}", ["a233"], _b3_cross),
    ExampleRecord("b3-nimble", "B3, w = 12312: R_w u {a1233} is nimble", True, _b3_nimble),
    ExampleRecord("a3-not-nimble", "A3, w = 321: R_{s2 w} is not nimble since w(a3) = a2", [False, "a2"],
                  _a3_not_nimble),
    ExampleRecord("stable-complement-pairs", "convex w in B2, A3, B3, G2: (R+ \\ R_st, {}) is a crossing pair",
                  [], _stable_pairs),
    ExampleRecord("dg-inversion-pairs", "convex w in B2, A3, B3, G2: (R_DG(b_w^d), {}) is a crossing pair",
                  [], _dg_pairs),
    ExampleRecord("b3-crossing-condition", "B3, w = 12312, N = R_w u {a1233}: crossing condition holds",
                  True, _b3_crossing),
    ExampleRecord("a5-crossing-fails", "A5 Spaltenstein element, N = R+: crossing condition fails",
                  False, _a5_crossing),
    ExampleRecord("a5-main-lemma-s5w", "A5 Spaltenstein element: DG(b_w^d) = s5 w, which is not w_0",
                  [[False, False, False], [True, True, True]], _a5_lemma,
                  note="the three tests are false against w_0 and true against s5 w"),
    ExampleRecord("b3-braid-equation", "B3, w = 12312: braid equation check", False, _braid_eq("B3", "12312"),
                  note="the DG factor stabilises at w, not at the longest element, so the check is false"),
    ExampleRecord("a5-braid-equation", "A5 Spaltenstein element: braid equation check is false", False,
                  _braid_eq("A5", A5_WORD)),
    ExampleRecord("a6-braid-equation", "A6 Coxeter element: braid equation check is false", False,
                  _braid_eq("A6", "2 3 4 5 6 1 2 3 4 5 3 2")),
    ExampleRecord("sl2-coxeter-lift", "SL2 standard lift of s1", [[0, 1], [-1, 0]], _a1_lift),
    ExampleRecord("sl3-longest-lift", "SL3 antidiagonal lift of the longest element validates",
                  [[0, 0, 1], [0, -1, 0], [1, 0, 0]], _sl3_lift),
    ExampleRecord("sl6-spaltenstein-lift", "SL6 signed permutation lift of the A5 element validates", True,
                  _sl6_lift),
    ExampleRecord("sl3-closed-form", "SL3 longest element: psi matches the closed-form conjugate", 50,
                  _sl3_closed),
    ExampleRecord("companion-slices", "Coxeter slices in SL2..SL5 are companion matrices", True, _companion),
    ExampleRecord("sl6-spaltenstein-witness", "Spaltenstein pair at (s, t) = (1, 1)", True, _spaltenstein_unit),
    ExampleRecord("sl2-sts-covector", "SL2: R_g t - L_g t = [[0,2],[2,0]] and dc^g(t) = 2",
                  [[[0, 2], [2, 0]], 2], _sl2_sts),
    ExampleRecord("dual-embedding-trivial", "sl3 empty triple: iota(e*_b) = -(0, f_b)", True, _dual_trivial),
    ExampleRecord("a3-survey-coxeter", "A3 survey marks 321 convex with stabilised DG factor w_0",
                  [True, True], _survey_row),
]

BY_ID = {r.id: r for r in RECORDS}


def run_example(example_id: str, seed: int = 0) -> dict:
    if example_id not in BY_ID:
        raise KeyError(f"unknown example id {example_id!r}")
    return BY_ID[example_id].run(seed)


def run_all(seed: int = 0) -> list[dict]:
    return [r.run(seed) for r in RECORDS]
