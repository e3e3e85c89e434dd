from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from braidslice.root_system import RootSystemError, build_root_system, iter_bits
from braidslice.weyl import elements

COUNTS = {
    "A1": 1, "A2": 3, "A3": 6, "A5": 15, "B2": 4, "B3": 9, "B4": 16, "C3": 9, "C4": 16,
    "D4": 12, "D5": 20, "E6": 36, "E7": 63, "E8": 120, "F4": 24, "G2": 6,
}


@pytest.mark.parametrize("label,count", sorted(COUNTS.items()))
def test_positive_root_counts(label, count):
    assert build_root_system(label).P == count


def test_classical_formulas():
    for n in range(1, 7):
        assert build_root_system("A", n).P == n * (n + 1) // 2
    for n in range(2, 6):
        assert build_root_system("B", n).P == n * n
        assert build_root_system("C", n).P == n * n
    for n in range(4, 7):
        assert build_root_system("D", n).P == n * (n - 1)


def test_g2_highest_root():
    sys = build_root_system("G2")
    top = max(sys.positive_roots, key=sum)
    assert sum(top) == 5 and sorted(top) == [2, 3]


@pytest.mark.parametrize("label", ["A3", "B3", "C3", "G2", "D4", "F4"])
def test_reflections_permute_roots(label):
    sys = build_root_system(label)
    for i in range(sys.rank):
        perm = sys.reflections[i]
        assert sorted(perm) == list(range(2 * sys.P))
        assert all(perm[perm[k]] == k for k in range(2 * sys.P))
        # s_i sends alpha_i to its negative and permutes the other positive roots
        assert perm[sys.simple[i]] == sys.neg(sys.simple[i])
        others = [k for k in range(sys.P) if k != sys.simple[i]]
        assert all(sys.is_positive(perm[k]) for k in others)


def test_roots_have_constant_sign():
    for label in ("B4", "G2", "E6"):
        sys = build_root_system(label)
        for r in sys.roots:
            assert all(c >= 0 for c in r) or all(c <= 0 for c in r)


def test_unsupported_labels():
    with pytest.raises(RootSystemError):
        build_root_system("X", 3)
    with pytest.raises(RootSystemError):
        build_root_system("A", 0)
    with pytest.raises(RootSystemError):
        build_root_system("G", 3)
    with pytest.raises(RootSystemError):
        build_root_system("nonsense")


def test_root_sum_examples():
    sys = build_root_system("B2")
    r = sys.parse_root
    assert sys.root_sum(r("a1"), r("a2")) == r("a12")
    assert sys.root_sum(r("a1"), r("a122")) is None
    for k in range(2 * sys.P):
        assert sys.root_sum(k, sys.neg(k)) is None


def _rays_brute(sys, i, j, bound=4):
    # positive rational c0, c1 with numerators and denominators up to bound; inputs excluded
    b, g = sys.roots[i], sys.roots[j]
    out = set()
    vals = {Fraction(p, q) for p in range(1, bound + 1) for q in range(1, bound + 1)}
    for c0 in vals:
        for c1 in vals:
            v = tuple(c0 * x + c1 * y for x, y in zip(b, g))
            if all(x.denominator == 1 for x in v):
                k = sys.index.get(tuple(int(x) for x in v))
                if k is not None:
                    out.add(k)
    return out - {i, j}


def test_ray_combinations_examples():
    sys = build_root_system("B2")
    r = sys.parse_root
    assert set(sys.format_set(sys.ray_combinations(r("a1"), r("a2")))) == {"a12", "a122"}
    assert sys.format_set(sys.ray_combinations(r("a2"), r("a12"))) == ["a122"]
    for label in ("A3", "D4"):
        s = build_root_system(label)
        assert all(s.ray_combinations(k, k) == 0 for k in range(2 * s.P))


@pytest.mark.parametrize("label", ["B2", "G2", "A3", "B3"])
def test_ray_combinations_match_scan(label):
    sys = build_root_system(label)
    for i, j in combinations(range(2 * sys.P), 2):
        assert set(iter_bits(sys.ray_combinations(i, j))) == _rays_brute(sys, i, j)


def test_is_convex_examples():
    sys = build_root_system("B2")
    assert not sys.is_convex(sys.parse_set("a1, a2"))
    assert sys.is_convex(0) and sys.is_convex(sys.positive_mask)


@pytest.mark.parametrize("label", ["B3", "A3", "G2", "C3"])
def test_inversion_sets_convex(label):
    sys = build_root_system(label)
    for w in elements(sys):
        assert sys.is_convex(w.inversion_set)
        assert sys.is_ray_convex(w.inversion_set)


def test_sum_closure_weaker_than_ray_closure():
    # in G2, a1 + a11122 is not a root, but (a1 + a11122)/2 = a1112 is
    sys = build_root_system("G2")
    s = sys.parse_set("a1, a11122")
    assert sys.is_convex(s) and not sys.is_ray_convex(s)
    assert all(sys.is_convex(m) for m in range(1 << sys.P) if sys.is_ray_convex(m))


def _partial_sums_ok(sys, seq):
    acc = [0] * sys.rank
    for k in seq:
        acc = [a + b for a, b in zip(acc, sys.roots[k])]
        if tuple(acc) not in sys.index:
            return False
    return True


def test_summing_sequence_examples():
    sys = build_root_system("B2")
    r = sys.parse_root
    assert sys.summing_sequence([r("a2"), r("a1")], start=r("a1")) == [r("a1"), r("a2")]
    a3 = build_root_system("A3")
    seq = a3.summing_sequence([a3.parse_root(x) for x in ("a1", "a3", "a2")], start=a3.parse_root("a2"))
    assert seq[0] == a3.parse_root("a2") and _partial_sums_ok(a3, seq)
    assert sys.summing_sequence([r("a12")]) == [r("a12")]
    with pytest.raises(RootSystemError):
        sys.summing_sequence([r("a1"), r("a1")])


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["B3", "C3", "A4", "G2", "D4"]), st.data())
def test_summing_sequence_exists_for_positive_decompositions(label, data):
    sys = build_root_system(label)
    target = data.draw(st.sampled_from(sys.positive_roots))
    # split the target into simple roots, then merge random neighbours that sum to roots
    parts = [sys.simple[i] for i, c in enumerate(target) for _ in range(c)]
    start = data.draw(st.sampled_from(parts))
    seq = sys.summing_sequence(parts, start=start)
    assert seq[0] == start and sorted(seq) == sorted(parts) and _partial_sums_ok(sys, seq)


def test_summing_sequence_mixed_signs_exhaustive_b2():
    sys = build_root_system("B2")
    for k in range(1, 4):
        for combo in combinations(range(2 * sys.P), k):
            total = tuple(sum(c) for c in zip(*(sys.roots[i] for i in combo)))
            if total not in sys.index:
                continue
            seq = sys.summing_sequence(list(combo))
            assert set(seq) <= set(combo) and _partial_sums_ok(sys, seq)
            assert tuple(sum(c) for c in zip(*(sys.roots[i] for i in seq))) == total


def test_summing_sequence_start_must_be_member():
    sys = build_root_system("A3")
    with pytest.raises(RootSystemError):
        sys.summing_sequence([sys.parse_root("a1"), sys.parse_root("a2")], start=sys.parse_root("a3"))


def test_names_round_trip():
    for label in ("B3", "G2", "E6"):
        sys = build_root_system(label)
        for k in range(2 * sys.P):
            assert sys.parse_root(sys.name(k)) == k
        mask = sys.positive_mask & 0b1011011
        assert sys.parse_set(", ".join(sys.format_set(mask))) == mask


def test_set_operations_closed():
    sys = build_root_system("B3")
    s = sys.parse_set("a1, a12, a233")
    assert sys.negate(sys.negate(s)) == s
    assert sys.negate(s) & sys.positive_mask == 0
    assert sys.mask_of(sys.roots_of(s)) == s
