import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bdgmaps import _kernels as K
from bdgmaps.enumeration import exact_conditional_law
from bdgmaps.errors import AttemptAbandoned, BudgetExhausted, InvalidInput
from bdgmaps.mobiles import validate_mobile
from bdgmaps.rng import STREAM_TEST, make_rng
from bdgmaps.sampling import (
    OffspringTables,
    SamplerConfig,
    alias_table,
    attach_labels,
    estimate_constants,
    exact_size_tree,
    sample_conditioned,
    sample_gw,
)
from bdgmaps.stats import chi_square_gof
from bdgmaps.trees import PlaneTree
from bdgmaps.weights import kappa_params

from conftest import seeds


def test_alias_table(rng):
    pmf = np.array([0.1, 0.0, 0.6, 0.3])
    prob, alias = alias_table(pmf)
    draws = np.array([K.alias_draw(rng, prob, alias) for _ in range(60_000)])
    counts = np.bincount(draws, minlength=4)
    assert counts[1] == 0
    _, p = chi_square_gof(counts[[0, 2, 3]], pmf[[0, 2, 3]])
    assert p > 1e-3


def test_single_vertex_probability(params2, rng):
    tab = OffspringTables.from_params(params2)
    trials = 10**6
    hist = K.gw_type1_counts(rng, tab.p, tab.prob, tab.alias, trials, 4)
    # mu0(0) = 1/2, and P(#T^1 = 1) = 1/4 * 1 * 1/2 = 1/8
    assert abs(hist[0] / trials - 0.5) < 0.002
    assert abs(hist[1] / trials - 0.125) < 0.002


def test_sample_gw_basic(params2, rng):
    sizes = Counter()
    for _ in range(4000):
        try:
            t = sample_gw(params2.mu0_param, params2.mu1_pmf, rng, cap=10**5)
        except AttemptAbandoned:
            sizes["cap"] += 1
            continue
        assert t.alternates()
        sizes[len(t) == 1] += 1
    # P(#T > 10^5) is of order 10^{-5/2}
    assert sizes["cap"] < 40
    assert abs(sizes[True] / 4000 - 0.5) < 0.04


def test_sample_gw_cap(params2):
    gen = make_rng(3, STREAM_TEST)
    with pytest.raises(AttemptAbandoned):
        for _ in range(1000):
            sample_gw(params2.mu0_param, params2.mu1_pmf, gen, cap=3)


def test_attach_labels_path(rng):
    t = PlaneTree([1, 1, 0])
    c = Counter(int(attach_labels(t, 1, rng).labels[2]) for _ in range(30_000))
    assert set(c) == {0, 1, 2}
    _, p = chi_square_gof([c[0], c[1], c[2]], [1, 1, 1])
    assert p > 1e-3
    assert attach_labels(PlaneTree([0]), 7, rng).labels.tolist() == [7]


def _chi_square_vs_exact(kappa, n, condition, method, draws, seed):
    law = exact_conditional_law(kappa, n, condition)
    index = {m.key(): i for i, (m, _) in enumerate(law)}
    cfg = SamplerConfig(size_n=n, condition=condition, method=method)
    params = kappa_params(kappa)
    tab = OffspringTables.from_params(params)
    gen = make_rng(seed, STREAM_TEST)
    counts = np.zeros(len(law))
    for _ in range(draws):
        m, _ = sample_conditioned(cfg, params, gen, tab)
        counts[index[m.key()]] += 1
    return chi_square_gof(counts, [float(p) for _, p in law])


@pytest.mark.parametrize("method", ["exact", "rejection"])
@pytest.mark.parametrize("condition", ["size", "size_and_positive"])
@pytest.mark.parametrize("kappa,n", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_sampler_matches_exact_law(kappa, n, condition, method):
    _, p = _chi_square_vs_exact(kappa, n, condition, method, 6000, 100 * kappa + n)
    assert p > 1e-3


def test_sampler_matches_exact_law_n3():
    _, p = _chi_square_vs_exact(2, 3, "size_and_positive", "exact", 20_000, 77)
    assert p > 1e-3


def test_n1_rooted_two_mobiles(params2):
    gen = make_rng(5, STREAM_TEST)
    cfg = SamplerConfig(size_n=1)
    c = Counter(int(sample_conditioned(cfg, params2, gen)[0].labels[2]) for _ in range(4000))
    assert set(c) == {1, 2}
    assert abs(c[1] / 4000 - 0.5) < 0.04


@settings(max_examples=20, deadline=None)
@given(seed=seeds, n=st.integers(1, 120), kappa=st.sampled_from([2, 3]))
def test_exact_size_tree_properties(seed, n, kappa):
    tab = OffspringTables.from_params(kappa_params(kappa))
    t = exact_size_tree(tab, n, make_rng(seed, STREAM_TEST))
    assert t.n_type1 == n and t.alternates()
    assert np.all(t.children[t.type1] == kappa - 1)


@settings(max_examples=15, deadline=None)
@given(seed=seeds, n=st.integers(1, 80))
def test_positive_samples(seed, n, ):
    params = kappa_params(2)
    m, st_ = sample_conditioned(SamplerConfig(size_n=n), params, make_rng(seed, STREAM_TEST))
    chk = validate_mobile(m.tree, m.labels)
    assert chk.ok and chk.well_labelled
    assert m.labels[0] == 1 and m.n_faces == n
    assert st_.accepted == 1 and st_.attempts >= 1


def test_determinism(params3):
    cfg = SamplerConfig(size_n=50)
    a, _ = sample_conditioned(cfg, params3, make_rng(9, STREAM_TEST))
    b, _ = sample_conditioned(cfg, params3, make_rng(9, STREAM_TEST))
    c, _ = sample_conditioned(cfg, params3, make_rng(10, STREAM_TEST))
    assert a == b and a != c


def test_budget_exhausted(params2):
    cfg = SamplerConfig(size_n=400, max_attempts=1)
    with pytest.raises(BudgetExhausted) as ei:
        for s in range(50):
            sample_conditioned(cfg, params2, make_rng(s, STREAM_TEST))
    assert ei.value.stats["attempts"] == 1


def test_config_validation():
    with pytest.raises(InvalidInput):
        SamplerConfig(size_n=0)
    with pytest.raises(InvalidInput):
        SamplerConfig(condition="bogus")
    with pytest.raises(InvalidInput):
        SamplerConfig(method="bogus")


def test_root_one_child(params2):
    gen = make_rng(1, STREAM_TEST)
    for _ in range(200):
        m, _ = sample_conditioned(SamplerConfig(condition="root_one_child"), params2, gen)
        assert m.tree.children[0] == 1


def test_estimate_constants_small(params2):
    rows = estimate_constants(params2, [5, 10], 200_000, make_rng(2, STREAM_TEST), pos_trials=20_000)
    # exact: P(#T^1 = n) = Cat(n) / 2^{2n+1} and P^n(U > 0) = 2 / (n + 2) for quadrangulations
    for r in rows:
        exact = math.comb(2 * r.n, r.n) / (r.n + 1) / 2 ** (2 * r.n + 1)
        assert abs(r.scaled_size_prob - r.n**1.5 * exact) < 4 * r.scaled_size_se
        assert abs(r.scaled_pos_prob - 2 * r.n / (r.n + 2)) < 4 * r.scaled_pos_se
    with pytest.raises(InvalidInput):
        estimate_constants(params2, [10, 5], 10)
