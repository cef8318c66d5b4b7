import math
from fractions import Fraction

import numpy as np
import pytest

from bdgmaps.bdg import to_map, to_rooted_map
from bdgmaps.enumeration import (
    dump_jsonl,
    enumerate_mobiles,
    enumerate_trees,
    exact_conditional_law,
    hat_vertex,
    reroot_law_check,
)
from bdgmaps.errors import InvalidInput


def rooted_quadrangulations(n):
    # independent closed form: 2 * 3^n * Catalan(n) / (n + 2)
    return 2 * 3**n * math.comb(2 * n, n) // ((n + 1) * (n + 2))


def rooted_2k_angulations(kappa, n):
    # 2 N(kappa)^n / (((kappa-1) n + 2)((kappa-1) n + 1)) * binom(kappa n, n)
    Nk = math.comb(2 * kappa - 1, kappa - 1)
    return Fraction(2 * Nk**n * math.comb(kappa * n, n), ((kappa - 1) * n + 2) * ((kappa - 1) * n + 1))


def test_closed_forms_agree():
    for n in range(1, 8):
        assert rooted_2k_angulations(2, n) == rooted_quadrangulations(n)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_quadrangulation_counts(n):
    mobs = enumerate_mobiles(2, n, well_labelled=True)
    assert len(mobs) == rooted_quadrangulations(n)
    codes = {to_rooted_map(m).canonical_code() for m in mobs}
    assert len(codes) == len(mobs)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_hexangulation_counts(n):
    mobs = enumerate_mobiles(3, n, well_labelled=True)
    assert len(mobs) == rooted_2k_angulations(3, n)
    assert len({to_rooted_map(m).canonical_code() for m in mobs}) == len(mobs)


def test_small_examples():
    assert len(enumerate_mobiles(2, 1, True)) == 2
    assert len(enumerate_mobiles(2, 1, False)) == 3
    with pytest.raises(InvalidInput):
        enumerate_mobiles(2, 5, True)


def test_trees_count():
    # two-type trees with n type-1 vertices of one child: Catalan-like count of plane trees with n edges
    for n in range(1, 6):
        assert sum(1 for _ in enumerate_trees(2, n)) == math.comb(2 * n, n) // (n + 1)


def test_exact_law_examples():
    law = exact_conditional_law(2, 1, "size")
    assert len(law) == 3 and all(p == Fraction(1, 3) for _, p in law)
    pos = exact_conditional_law(2, 1, "size_and_positive")
    assert [p for _, p in pos] == [Fraction(1, 2)] * 2
    codes = {to_rooted_map(m).canonical_code() for m, _ in pos}
    assert len(codes) == 2
    for kappa, n in [(2, 3), (3, 2)]:
        for cond in ("size", "size_and_positive"):
            assert sum(p for _, p in exact_conditional_law(kappa, n, cond)) == 1


@pytest.mark.parametrize("kappa,n", [(2, 3), (2, 4), (3, 2)])
def test_rooted_law_is_uniform(kappa, n):
    law = exact_conditional_law(kappa, n, "size_and_positive")
    assert len({p for _, p in law}) == 1


def test_rooted_pointed_counts():
    # pointed maps: each rooted map is counted once per vertex, and P^n is uniform over
    # (mobile, shift) pairs, i.e. 2 * #rooted pointed maps = #mobiles * ... checked via V
    for n in (1, 2, 3):
        mobs = enumerate_mobiles(2, n, well_labelled=False)
        assert len(mobs) == 3 ** n * math.comb(2 * n, n) // (n + 1)
        codes = {to_map(m).canonical_code() for m in mobs}
        assert len(codes) == len(mobs)
        # each rooted quadrangulation has n + 2 vertices; the root orientation doubles
        assert 2 * len(mobs) == rooted_quadrangulations(n) * (n + 2)


def test_hat_vertex():
    assert hat_vertex((1, 1)) == (1, 1)
    assert hat_vertex((1, 2, 3, 4)) == (1, 4, 3, 2)


def test_reroot_law_11():
    r = reroot_law_check((1, 1), kappa=2, max_vertices=9)
    assert r.tv == 0
    assert r.mass_v0 == r.mass_v0_hat
    assert r.covered >= 0.99


@pytest.mark.parametrize("v0,kappa,size", [((1, 1, 1, 1), 2, 11), ((1, 2, 1, 1), 3, 10)])
def test_reroot_law_deeper(v0, kappa, size):
    r = reroot_law_check(v0, kappa=kappa, max_vertices=size)
    assert r.tv == 0 and not r.mismatches
    assert r.mass_v0 == r.mass_v0_hat > 0


@pytest.mark.parametrize("v0,kappa,size", [((1, 1), 2, 9), ((1, 1, 1, 1), 2, 9), ((1, 2, 1, 1), 3, 8)])
def test_reroot_law_spatial(v0, kappa, size):
    r = reroot_law_check(v0, kappa=kappa, max_vertices=size, spatial=True)
    assert r.tv == 0 and not r.mismatches


def test_reroot_rejects_odd_word():
    with pytest.raises(InvalidInput):
        reroot_law_check((1,), 2, 5)


def test_dump_jsonl(tmp_path):
    f = tmp_path / "m.jsonl"
    assert dump_jsonl(exact_conditional_law(2, 2, "size"), f) == 18
    assert len(f.read_text().splitlines()) == 18
