import random
from functools import lru_cache

import pytest

from braidslice.braid import PositiveBraid, dg_of_power, dg_stabilized, power
from braidslice.cross import (CrossingPairError, big_cross_iter, big_cross_set, braid_equation_check, cross_braid,
                              cross_iter, cross_root, cross_set, crossing_condition, is_crossing_pair, is_nimble,
                              is_slicing, main_lemma_ii_check)
from braidslice.root_system import RootSystemError, build_root_system, iter_bits
from braidslice.weyl import elements, identity, longest_element, parse_word, weyl_from_word

SMALL = ("A1", "A2", "B2", "G2", "A3", "B3", "C3")
A5_WORD = "1 2 3 4 5 3 4 1 2"


def W(label, word):
    return weyl_from_word(build_root_system(label), parse_word(word))


def names(sys, mask):
    return sorted(sys.format_set(mask))


def _in_cone(sys, vec, gens):
    """Is vec a nonnegative integer combination of the root vectors gens?"""
    @lru_cache(maxsize=None)
    def go(v, start):
        if not any(v):
            return True
        for k in range(start, len(gens)):
            u = tuple(a - b for a, b in zip(v, gens[k]))
            if min(u) >= 0 and go(u, k):
                return True
        return False
    return go(tuple(vec), 0)


def cross_root_oracle(w, beta):
    # roots beta + sum n_i b_i (b_i in R_w, n_i >= 0), then w, then positive part
    sys = w.sys
    gens = [sys.roots[b] for b in iter_bits(w.inversion_set)]
    out = 0
    for k in range(sys.P):
        diff = [a - b for a, b in zip(sys.roots[k], sys.roots[beta])]
        if min(diff) >= 0 and _in_cone(sys, diff, gens):
            img = w(k)
            if sys.is_positive(img):
                out |= 1 << img
    return out


def test_worked_cross_examples():
    sys, w = build_root_system("B2"), W("B2", "2")
    a1 = sys.parse_root("a1")
    got = cross_root(w, a1)
    assert got >> a1 & 1 and names(sys, got & sys.simple_mask) == ["a1"]
    assert w(sys.parse_root("a122")) == a1
    assert names(sys, cross_root(W("B2", "12"), a1)) == ["a122", "a2"]
    a3 = build_root_system("A3")
    got = cross_root(W("A3", "13"), a3.parse_root("a2"))
    assert names(a3, got) == ["a12", "a123", "a2", "a23"]
    assert names(a3, got & a3.simple_mask) == ["a2"]


def test_b3_cross_of_non_simple_root():
    sys, w = build_root_system("B3"), W("B3", "12312")
    beta = sys.parse_root("a1233")
    assert not (w.inversion_set | w.fixed_roots) >> beta & 1
    assert names(sys, cross_root(w, beta)) == ["a233"]
    assert w(beta) == sys.parse_root("a233") and w.inversion_set >> w(beta) & 1


@pytest.mark.parametrize("label", ["B2", "G2", "A3", "B3", "C3"])
def test_cross_root_matches_cone_oracle(label):
    sys = build_root_system(label)
    for w in elements(sys):
        for b in range(sys.P):
            assert cross_root(w, b) == cross_root_oracle(w, b)


def test_cross_rejects_negative_roots():
    sys, w = build_root_system("B2"), W("B2", "2")
    with pytest.raises(RootSystemError):
        cross_root(w, sys.neg(0))
    with pytest.raises(RootSystemError):
        cross_set(w, sys.all_mask)


def test_cross_set_and_iterates():
    sys, w = build_root_system("A3"), W("A3", "321")
    n = sys.parse_set("a1, a23")
    assert cross_iter(w, n, 0) == n
    assert cross_set(w, n) == cross_root(w, sys.parse_root("a1")) | cross_root(w, sys.parse_root("a23"))
    assert cross_iter(w, n, 2) == cross_set(w, cross_set(w, n))
    assert cross_set(w, 0) == 0


@pytest.mark.parametrize("label", ["A2", "B2", "A3", "B3"])
def test_cross_braid_independent_of_decomposition(label):
    sys = build_root_system(label)
    rng = random.Random(17)
    elems = elements(sys)
    for _ in range(40):
        w = rng.choice(elems)
        n = rng.randrange(1 << sys.P)
        assert cross_braid(PositiveBraid.from_elements(sys, [w]), n) == cross_set(w, n)
        d = rng.randint(1, 4)
        assert cross_braid(power(w, d), n) == cross_iter(w, n, d)
        # letter by letter along a random word, applying the rightmost letter first
        word = [rng.randint(1, sys.rank) for _ in range(rng.randint(1, 8))]
        m = n
        for i in reversed(word):
            m = cross_set(weyl_from_word(sys, [i]), m)
        assert cross_braid(PositiveBraid.from_word(sys, word), n) == m


def test_big_cross_preconditions_and_m0_term():
    sys, w = build_root_system("B3"), W("B3", "12312")
    with pytest.raises(RootSystemError):
        big_cross_set(w, sys.parse_set("a1"))
    with pytest.raises(RootSystemError):
        big_cross_set(w, sys.parse_set("a1, a2") | w.inversion_set)
    n = w.inversion_set | sys.parse_set("a1233")
    big = big_cross_set(w, n)
    assert w.apply(n) & sys.positive_mask & ~big == 0
    assert big_cross_iter(w, n, 0) == n


def test_nimble_examples():
    sys, w = build_root_system("B3"), W("B3", "12312")
    assert is_nimble(w, w.inversion_set | sys.parse_set("a1233"))
    a3, c = build_root_system("A3"), W("A3", "321")
    s2w = weyl_from_word(a3, [2]) * c
    assert not is_nimble(c, s2w.inversion_set)
    assert c(a3.parse_root("a3")) == a3.parse_root("a2")
    assert not s2w.inversion_set >> a3.parse_root("a2") & 1
    for label in SMALL:
        for x in elements(build_root_system(label)):
            assert is_nimble(x, x.inversion_set)


@pytest.mark.parametrize("label", SMALL)
def test_convex_elements_and_nimble_complement(label):
    sys = build_root_system(label)
    for w in elements(sys):
        comp = sys.positive_mask & ~w.stable_roots
        assert is_nimble(w, comp) == w.is_convex


@pytest.mark.parametrize("label", ["B2", "A3", "B3", "G2"])
def test_crossing_pairs_from_convex_elements(label):
    sys = build_root_system(label)
    for w in elements(sys):
        if not w.is_convex:
            continue
        pair = is_crossing_pair(w, sys.positive_mask & ~w.stable_roots, 0)
        assert pair.slicing == (w.stable_roots & sys.positive_mask == 0)
        for d in range(1, 6):
            is_crossing_pair(w, dg_of_power(w, d).inversion_set, 0)


def test_crossing_pair_rejection_b2():
    sys, w = build_root_system("B2"), W("B2", "2")
    fixed = w.fixed_roots
    assert names(sys, w.inversion_set) == ["a2"] and names(sys, fixed & sys.positive_mask) == ["a12"]
    n = sys.positive_mask & ~fixed
    with pytest.raises(CrossingPairError) as err:
        is_crossing_pair(w, n, fixed)
    assert "R_w u L convex" in err.value.failed
    assert sys.root_sum(sys.parse_root("a2"), sys.parse_root("a12")) == sys.parse_root("a122")
    assert not is_slicing(w, n, fixed)


def test_b2_nonsimple_reflection():
    sys = build_root_system("B2")
    for word in ("121", "212"):
        w = W("B2", word)
        assert w.inversion_set | (w.fixed_roots & sys.positive_mask) == sys.positive_mask
        assert w.inversion_set & w.fixed_roots == 0


def test_crossing_condition_examples():
    sys, w = build_root_system("B3"), W("B3", "12312")
    assert crossing_condition(w, w.inversion_set | sys.parse_set("a1233"))
    a5, sp = build_root_system("A5"), W("A5", A5_WORD)
    assert not crossing_condition(sp, a5.positive_mask)
    with pytest.raises(RootSystemError):
        crossing_condition(W("A3", "321"), W("A3", "2321").inversion_set)
    for label in SMALL:
        for x in elements(build_root_system(label)):
            assert crossing_condition(x, x.inversion_set)


def test_main_lemma_examples():
    for label in ("B2", "A3"):
        sys = build_root_system(label)
        for w in elements(sys):
            assert main_lemma_ii_check(w, identity(sys), 3) == (True, True, True)
    a5, w = build_root_system("A5"), W("A5", A5_WORD)
    s5w = weyl_from_word(a5, [5]) * w
    assert main_lemma_ii_check(w, longest_element(a5), 12) == (False, False, False)
    # DG(b_w^d) = s5 w for d >= 2, so s5 w itself is below it
    assert dg_of_power(w, 12) == s5w
    assert main_lemma_ii_check(w, s5w, 12) == (True, True, True)


def test_braid_equation_examples():
    assert not braid_equation_check(W("A5", A5_WORD))
    assert not braid_equation_check(W("A6", "2 3 4 5 6 1 2 3 4 5 3 2"))
    assert braid_equation_check(W("A3", "321"))


def test_b3_braid_equation_follows_from_dg():
    # elliptic, so no stable roots; b_w^d is already normal, so DG(b_w^d) = w != w0
    sys, w = build_root_system("B3"), W("B3", "12312")
    assert w.is_elliptic and w.stable_roots == 0
    assert dg_stabilized(w) == w != longest_element(sys)
    assert not braid_equation_check(w)


@pytest.mark.parametrize("label", SMALL)
def test_braid_equation_is_dg_saturation(label):
    sys = build_root_system(label)
    for w in elements(sys):
        comp = sys.positive_mask & ~w.stable_roots
        expected = w.is_convex and dg_stabilized(w).inversion_set == comp
        assert braid_equation_check(w) == expected


@pytest.mark.parametrize("label", SMALL)
def test_monotone_iterates_and_stabilization(label):
    sys = build_root_system(label)
    elems = elements(sys)
    for w in elems:
        for y in elems:
            n = y.inversion_set
            if not is_nimble(w, n):
                continue
            seq = [cross_iter(w, n, d) for d in range(0, sys.P + 2)]
            assert seq[1] & ~n == 0
            assert all(seq[d + 1] & ~seq[d] == 0 for d in range(len(seq) - 1))
            # constant from d = |N| - l(w) + 1 on
            k = bin(n).count("1") - w.length + 1
            assert all(s == seq[k] for s in seq[k:])


def test_stabilization_index_is_sharp():
    # N = {a1}, w = s1: cross^0 = N but cross^1 is already empty
    sys = build_root_system("A1")
    w = weyl_from_word(sys, [1])
    n = w.inversion_set
    assert bin(n).count("1") - w.length == 0
    assert cross_iter(w, n, 0) == n and cross_iter(w, n, 1) == 0


@pytest.mark.parametrize("label", SMALL)
def test_main_lemma_i_simple_roots(label):
    sys = build_root_system(label)
    for w in elements(sys):
        for a in sys.simple:
            if not w.inversion_set >> a & 1:
                assert cross_root(w, a) & sys.simple_mask


@pytest.mark.parametrize("label", ["A4", "B4", "D4", "A5", "C4"])
def test_main_lemma_i_random_higher_rank(label):
    sys = build_root_system(label)
    rng = random.Random(23)
    for _ in range(60):
        w = weyl_from_word(sys, [rng.randint(1, sys.rank) for _ in range(rng.randint(0, 15))])
        for a in sys.simple:
            if not w.inversion_set >> a & 1:
                assert cross_root(w, a) & sys.simple_mask


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3", "B3", "C3"])
def test_single_step_convexity(label):
    sys = build_root_system(label)
    sum_closed = [m for m in range(1 << sys.P) if sys.is_convex(m)]
    for w in elements(sys):
        for n in sum_closed:
            if w.inversion_set & ~n:
                continue
            assert sys.is_convex(cross_set(w, n))
            if sys.is_ray_convex(n):
                assert sys.is_ray_convex(cross_set(w, n))
                assert sys.is_ray_convex(big_cross_set(w, n))


def test_big_cross_needs_ray_convex_input():
    # N is closed under sums but not under ray combinations, and Cross_w(N) is not even sum-closed
    sys, w = build_root_system("B3"), W("B3", "1")
    n = sys.parse_set("a1, a3, a12233")
    assert sys.is_convex(n) and not sys.is_ray_convex(n)
    out = big_cross_set(w, n)
    assert names(sys, out) == ["a12233", "a23", "a3"]
    assert sys.root_sum(sys.parse_root("a3"), sys.parse_root("a23")) == sys.parse_root("a233")
    assert not sys.is_convex(out)


@pytest.mark.parametrize("label", SMALL)
def test_inverse_symmetry(label):
    sys = build_root_system(label)
    elems = elements(sys)
    for w in elems:
        wi = w.inverse()
        for y in elems:
            n = y.inversion_set
            if not (is_nimble(w, n) and wi.inversion_set & ~n == 0):
                continue
            assert is_nimble(wi, n)
            for d in range(7):
                assert (cross_iter(w, n, d) == 0) == (cross_iter(wi, n, d) == 0)


@pytest.mark.parametrize("label", SMALL)
def test_dg_conjugate_convexity(label):
    sys = build_root_system(label)
    for w in elements(sys):
        if not w.is_convex:
            continue
        for d in range(1, 7):
            x = dg_of_power(w, d)
            assert (x * w * x.inverse()).is_convex


@pytest.mark.parametrize("label", SMALL)
def test_vanish_iff_on_nimble_inversion_sets(label):
    sys = build_root_system(label)
    elems = elements(sys)
    for w in elems:
        for y in elems:
            n = y.inversion_set
            if is_nimble(w, n):
                for d in range(7):
                    assert (cross_iter(w, n, d) == 0) == (big_cross_iter(w, n, d) == 0)


# worked examples whose stated data disagree with the computation -----------------

def test_b3_3121_inversions_and_stable_roots():
    # the reference sets swap R_w and the stable roots; l(w) = 4 forces |R_w| = 4
    sys, w = build_root_system("B3"), W("B3", "3121")
    assert w.length == 4
    assert names(sys, w.inversion_set) == ["a1", "a12", "a123", "a2"]
    assert names(sys, w.stable_roots & sys.positive_mask) == ["a23"]
    sums = {sys.root_sum(a, b) for a in iter_bits(w.inversion_set) for b in iter_bits(w.stable_roots & sys.positive_mask)}
    outside = {k for k in sums if k is not None and not w.inversion_set >> k & 1}
    assert [sys.name(k) for k in outside] == ["a12233"]


def test_b3_3231_union_is_not_convex():
    sys, w = build_root_system("B3"), W("B3", "3231")
    assert w.fixed_roots == 0
    n = w.inversion_set | w.inverse().inversion_set
    assert names(sys, sys.positive_mask & ~n) == ["a12", "a12233", "a2"]
    assert sys.root_sum(sys.parse_root("a23"), sys.parse_root("a123")) == sys.parse_root("a12233")
    assert not sys.is_convex(n) and not is_nimble(w, n)


def test_b3_1231_sequence():
    sys, w = build_root_system("B3"), W("B3", "1231")
    w0 = longest_element(sys)
    stated = (w0 * weyl_from_word(sys, [2, 1])).inversion_set
    assert not is_nimble(w, stated) and w.inversion_set & ~stated
    # with v = w0 s1 s2 the displayed sequence appears verbatim, but R_v meets the fixed root a23
    n = (w0 * weyl_from_word(sys, [1, 2])).inversion_set
    seq = [names(sys, cross_iter(w, n, d)) for d in range(1, 5)]
    assert seq == [["a23", "a233", "a3"], ["a23", "a3"], ["a23", "a3"], ["a23", "a3"]]
    assert n & w.fixed_roots and not is_nimble(w, n)


def test_b3_2321_dg_square_and_gap():
    sys, w = build_root_system("B3"), W("B3", "2321")
    w2 = weyl_from_word(sys, [2, 1]) * w
    dg = dg_of_power(w, 2)
    assert dg == longest_element(sys) * weyl_from_word(sys, [3])
    assert w.weak_leq(w2) and w2.weak_leq(dg) and w2 != dg and w2 != w
    gap = sys.positive_mask & ~(w2.inversion_set | w.fixed_roots)
    assert names(sys, gap) == ["a23", "a233"]


def test_a6_converse_fails():
    # the slice map is an isomorphism for this element, yet the crossing equation never holds
    sys, w = build_root_system("A6"), W("A6", "2 3 4 5 6 1 2 3 4 5 3 2")
    comp = sys.positive_mask & ~w.stable_roots
    assert all(cross_iter(w, comp, d) for d in range(1, 12))
    assert not braid_equation_check(w)
