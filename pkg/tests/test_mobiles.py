import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bdgmaps.errors import InvalidInput
from bdgmaps.mobiles import (
    Mobile,
    enumerate_A,
    in_A,
    min_label_excluding_root,
    phi_j,
    reroot_labels,
    reverse,
    sample_nu1,
    shift_positive,
    validate_mobile,
)
from bdgmaps.sampling import attach_labels
from bdgmaps.stats import chi_square_gof
from bdgmaps.trees import PlaneTree
from bdgmaps.weights import N

from conftest import random_mobile, random_tree, seeds

PATH = PlaneTree([1, 1, 0])


def brute_A(k):
    """Integer vectors with x_0 = x_{k+1} = 0 and every step >= -1, by exhaustive search."""
    out = []
    for x in itertools.product(range(-k, k + 1), repeat=k):
        full = (0,) + x + (0,)
        if all(b >= a - 1 for a, b in zip(full, full[1:])):
            out.append(x)
    return sorted(out)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5])
def test_A_matches_brute_force(k):
    A = sorted(map(tuple, enumerate_A(k).tolist()))
    assert A == brute_A(k)
    assert len(A) == N(k + 1)


def test_A_small_examples():
    assert sorted(enumerate_A(1)[:, 0].tolist()) == [-1, 0, 1]
    assert len(enumerate_A(2)) == 10
    assert in_A([1, 0]) and not in_A([2, 0]) and not in_A([0, 2])


def test_phi_examples():
    assert phi_j([0, 0, 0], 3).tolist() == [0, 0, 0]
    assert phi_j([1, 0], 1).tolist() == [-1, -1]
    with pytest.raises(InvalidInput):
        phi_j([1, 0], 3)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_phi_permutes_A(k):
    A = set(map(tuple, enumerate_A(k).tolist()))
    for j in range(1, k + 1):
        img = {tuple(phi_j(x, j).tolist()) for x in A}
        assert img == A
        # and it is a bijection, not just onto
        assert len(img) == len(A)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_reverse_negate_permutes_A(k):
    A = set(map(tuple, enumerate_A(k).tolist()))
    assert {tuple(reverse(x).tolist()) for x in A} == {tuple((-np.asarray(x)).tolist()) for x in A}
    for j in range(1, k + 1):
        # reversal conjugates phi_j to phi_{k-j+1}
        for x in A:
            lhs = phi_j(reverse(x), j)
            rhs = reverse(phi_j(np.asarray(x), k - j + 1))
            assert lhs.tolist() == rhs.tolist()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_reversed_law_phi_invariant(k):
    # nu tilde (reversal image of the uniform law) is uniform on reverse(A_k) and phi_j maps it to itself
    R = {tuple(reverse(x).tolist()) for x in enumerate_A(k)}
    for j in range(1, k + 1):
        assert {tuple(phi_j(np.asarray(x), j).tolist()) for x in R} == R


def test_sample_nu1_support(rng):
    x = sample_nu1(3, rng, size=2000)
    assert x.shape == (2000, 3)
    assert all(in_A(r) for r in x)
    assert set(sample_nu1(1, rng, size=500)[:, 0].tolist()) == {-1, 0, 1}


@pytest.mark.parametrize("k", [1, 2, 3])
def test_sample_nu1_uniform(k, rng):
    A = [tuple(a) for a in enumerate_A(k).tolist()]
    x = sample_nu1(k, rng, size=200_000)
    idx = {a: i for i, a in enumerate(A)}
    counts = np.bincount([idx[tuple(r)] for r in x.tolist()], minlength=len(A))
    _, p = chi_square_gof(counts, np.ones(len(A)))
    assert p > 1e-3


def test_validate_examples():
    ok = validate_mobile(PATH, [1, 1, 2])
    assert ok.ok and ok.well_labelled
    bad = validate_mobile(PATH, [1, 2, 2])
    assert not bad.ok and bad.condition == "a" and bad.vertex == 1
    jump = validate_mobile(PATH, [1, 1, -1])
    assert not jump.ok and jump.condition == "b"
    with pytest.raises(InvalidInput):
        Mobile(PATH, [1, 1, -1])


def test_shift_positive_examples():
    m = Mobile(PATH, [1, 1, 2])
    assert shift_positive(m) == m
    assert shift_positive(Mobile(PATH, [1, 1, 0])).labels.tolist() == [2, 2, 1]


def test_reroot_labels_examples():
    m = Mobile(PATH, [1, 1, 2])
    assert reroot_labels(m, 0).labels.tolist() == [0, 0, 1]
    r = reroot_labels(m, 2)
    assert r.labels[0] == 0
    assert r.tree == PATH


def test_min_label_excluding_root():
    assert min_label_excluding_root(Mobile(PlaneTree([0]), [5])) == math.inf
    assert min_label_excluding_root(Mobile(PATH, [1, 1, 2])) == 2
    assert min_label_excluding_root(Mobile(PATH, [1, 1, 0])) == 0


@settings(max_examples=30, deadline=None)
@given(seed=seeds, n=st.integers(1, 200), kappa=st.sampled_from([2, 3, 4]))
def test_attached_labels_are_mobiles(seed, n, kappa):
    t = random_tree(seed, n, kappa)
    m = attach_labels(t, 1, np.random.default_rng(seed))
    assert validate_mobile(t, m.labels).ok
    s = shift_positive(m)
    assert validate_mobile(t, s.labels).ok and s.labels.min() == 1
    even = np.flatnonzero(t.depth % 2 == 0)
    v = int(even[seed % even.size])
    # re-rooting flips cyclic orders along the spine, so only condition (a) survives in general
    r = reroot_labels(m, v)
    t1 = np.flatnonzero(r.tree.type1)
    assert np.array_equal(r.labels[t1], r.labels[r.tree.parent[t1]])
    assert r.labels[0] == 0


@settings(max_examples=20, deadline=None)
@given(seed=seeds)
def test_json_roundtrip(seed):
    m = random_mobile(seed, 15)
    assert Mobile.from_json(m.to_json()) == m
