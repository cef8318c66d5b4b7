import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bdgmaps.weights import (
    Classification,
    N,
    WeightSequence,
    derive_offspring,
    eval_f,
    kappa_params,
    kappa_weights,
    load_weights,
    solve_and_classify,
)


def test_N_values():
    assert [N(k) for k in range(1, 6)] == [1, 3, 10, 35, 126]


def test_eval_f_examples():
    q = WeightSequence({2: Fraction(1, 12)})
    assert eval_f(q, 2.0) == pytest.approx(0.5, abs=1e-15)
    assert eval_f(q, 0.0) == 0.0
    q3 = WeightSequence({3: Fraction(2, 135)})
    # f(x) = (4/27) x^2, f'(x) = (8/27) x
    assert eval_f(q3, 1.5, 1) == pytest.approx(4 / 9, rel=1e-14)
    assert eval_f(q3, 1.5, 2) == pytest.approx(8 / 27, rel=1e-14)


def test_eval_f_rejects_bad_input():
    q = kappa_weights(2)
    with pytest.raises(ValueError):
        eval_f(q, -1.0)
    with pytest.raises(ValueError):
        eval_f(q, 1.0, 3)


def test_kappa_weights_values():
    assert kappa_weights(2).weights == {2: pytest.approx(1 / 12)}
    assert kappa_weights(3).weights == {3: pytest.approx(2 / 135)}
    with pytest.raises(ValueError):
        kappa_weights(1)


def test_solve_kappa2():
    p = kappa_params(2)
    assert p.classification is Classification.REGULAR_CRITICAL
    assert p.Z == pytest.approx(2.0, abs=1e-9)
    assert p.rho == pytest.approx(2.0, abs=1e-7)
    assert p.scale_D == pytest.approx((8 / 9) ** 0.25, abs=1e-8)


def test_solve_kappa3():
    p = kappa_params(3)
    assert p.Z == pytest.approx(1.5, abs=1e-9)
    assert p.rho == pytest.approx(3.0, abs=1e-7)
    assert p.scale_D == pytest.approx((8 / 3) ** 0.25, abs=1e-8)


@pytest.mark.parametrize("kappa", [2, 3, 4, 5, 6])
def test_kappa_family(kappa):
    # Z = kappa/(kappa-1), rho = kappa, mu0 geometric(1/kappa), mu1 = delta_{kappa-1}
    p = kappa_params(kappa)
    assert p.is_critical
    assert p.Z == pytest.approx(kappa / (kappa - 1), rel=1e-8)
    assert p.rho == pytest.approx(kappa, rel=1e-6)
    assert p.scale_D == pytest.approx((4 * kappa * (kappa - 1) / 9) ** 0.25, rel=1e-6)
    mu0, mu1 = derive_offspring(p)
    assert mu0 == pytest.approx(1 / kappa, rel=1e-9)
    assert np.argmax(mu1) == kappa - 1 and mu1[kappa - 1] == pytest.approx(1.0)
    assert p.m0 * p.m1 == pytest.approx(1.0, rel=1e-7)
    assert p.mu0_pmf(60).sum() == pytest.approx(1.0, abs=1e-10)


def test_inadmissible():
    p = solve_and_classify(WeightSequence({2: 1.0}))
    assert p.classification is Classification.INADMISSIBLE
    with pytest.raises(ValueError):
        derive_offspring(p)


def test_subcritical():
    p = solve_and_classify(WeightSequence({2: 1 / 24}))
    assert p.classification is Classification.SUBCRITICAL
    assert eval_f(p.q, p.Z) == pytest.approx(1 - 1 / p.Z, abs=1e-10)
    assert p.tangency < 1


def test_validation():
    with pytest.raises(ValueError):
        WeightSequence({1: 0.3})
    with pytest.raises(ValueError):
        WeightSequence({2: -1.0})
    with pytest.raises(ValueError):
        WeightSequence({0: 1.0, 2: 0.1})


def test_load_weights_roundtrip(tmp_path):
    f = tmp_path / "q.json"
    f.write_text('{"weights": {"2": "1/12"}}')
    assert load_weights(f).weights == kappa_weights(2).weights
    assert load_weights('{"weights": {"3": "2/135"}}').weights == kappa_weights(3).weights


@settings(max_examples=60, deadline=None)
@given(q2=st.one_of(st.just(0.0), st.floats(1e-4, 0.2)), q3=st.one_of(st.just(0.0), st.floats(1e-5, 0.05)),
       q4=st.one_of(st.just(0.0), st.floats(1e-6, 0.01)))
def test_solver_properties(q2, q3, q4):
    if q2 + q3 + q4 == 0:
        return
    p = solve_and_classify(WeightSequence({2: q2, 3: q3, 4: q4}))
    if p.classification is Classification.INADMISSIBLE:
        # no root: g(x) = f(x) - 1 + 1/x stays positive on a scan
        xs = np.linspace(1.0001, 50, 4000)
        g = [eval_f(p.q, x) - 1 + 1 / x for x in xs]
        assert min(g) > -1e-9
        return
    assert eval_f(p.q, p.Z) == pytest.approx(1 - 1 / p.Z, abs=1e-9)
    assert p.tangency <= 1 + 1e-7
    assert p.mu1_pmf.sum() == pytest.approx(1.0, abs=1e-12)
    assert math.isfinite(p.rho)
