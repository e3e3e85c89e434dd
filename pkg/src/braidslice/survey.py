"""Whole-group tables and crossing-pair searches."""
from __future__ import annotations

import random

from .braid import dg_of_power, stabilization_exponent
from .cross import (CrossingPairError, braid_equation_check, crossing_condition,
                    crossing_pair_failures, is_nimble)
from .root_system import RootSet, build_root_system
from .weyl import GroupTooLargeError, MAX_GROUP_ORDER, WeylElement, elements, iter_elements


def survey_row(w: WeylElement, d_max: int | None = None) -> dict:
    d = stabilization_exponent(w)
    capped = d_max is not None and d > d_max
    dg = dg_of_power(w, d_max if capped else d)
    return {
        "w": w.word_string(),
        "length": w.length,
        "elliptic": w.is_elliptic,
        "convex": w.is_convex,
        "braid_equation": braid_equation_check(w),
        "dg_stabilized": dg.word_string(),
        "dg_exponent": d_max if capped else d,
        "capped": capped,
    }


def survey_convex(kind: str, rank: int, d_max: int | None = None, sample: int | None = None,
                  seed: int = 0, limit: int = MAX_GROUP_ORDER) -> list[dict]:
    """One row per group element (or per sampled element when sample is set)."""
    sys = build_root_system(kind, rank)
    if sample is None:
        if rank > 5:
            raise GroupTooLargeError("exhaustive surveys are limited to rank <= 5; pass a sample size")
        group = elements(sys, limit=limit)
    else:
        group = _sample(sys, sample, seed)
    rows = [survey_row(w, d_max) for w in group]
    rows.sort(key=lambda r: (r["length"], r["w"]))
    return rows


def _sample(sys, count: int, seed: int) -> list[WeylElement]:
    """Random reduced words; duplicates removed."""
    from .weyl import weyl_from_word
    rng = random.Random(seed)
    seen: dict[tuple, WeylElement] = {}
    for _ in range(count):
        k = rng.randint(0, 3 * sys.P // max(sys.rank, 1) + sys.rank)
        w = weyl_from_word(sys, [rng.randint(1, sys.rank) for _ in range(k)])
        seen.setdefault(w.perm, w)
    return list(seen.values())


def nimble_inversion_sets(w: WeylElement, limit: int = MAX_GROUP_ORDER) -> list[WeylElement]:
    """Elements y with R_y nimble for w."""
    return [y for y in iter_elements(w.sys, limit=limit) if is_nimble(w, y.inversion_set)]


def candidate_leaveners(w: WeylElement) -> list[RootSet]:
    out = [0]
    fixed = w.fixed_roots
    if fixed:
        out.append(fixed)
    stable = w.stable_roots
    if stable and stable != fixed:
        out.append(stable)
    return out


def find_crossing_pairs(w: WeylElement, limit: int = MAX_GROUP_ORDER) -> list[dict]:
    """Crossing pairs (R_y, L) for L among {}, R^w and R_st^w, with slicing and crossing flags."""
    sys = w.sys
    rows = []
    for y in nimble_inversion_sets(w, limit):
        n = y.inversion_set
        for l in candidate_leaveners(w):
            if crossing_pair_failures(w, n, l):
                continue
            rows.append({
                "y": y.word_string(),
                "N": sys.format_set(n),
                "L": sys.format_set(l),
                "slicing": (n | l) & sys.positive_mask == sys.positive_mask,
                "crossing": crossing_condition(w, n),
            })
    return rows


__all__ = ["survey_convex", "survey_row", "find_crossing_pairs", "nimble_inversion_sets",
           "CrossingPairError"]
