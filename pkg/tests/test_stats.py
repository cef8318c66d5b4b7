import math

import numpy as np
import pytest

from bdgmaps.rng import STREAM_TEST, make_rng
from bdgmaps.stats import chi_square_gof, ks_two_sample, mean_se, pooled_z


def test_ks_identical_and_shifted():
    g = make_rng(0, STREAM_TEST)
    x, y = g.normal(size=2000), g.normal(size=2000)
    r = ks_two_sample(x, y, permutations=199, rng=g)
    assert r.statistic < 0.06 and r.pvalue > 0.01
    s = ks_two_sample(x, y + 1.0, permutations=99, rng=g)
    assert s.statistic > 0.3 and s.pvalue == pytest.approx(0.01)
    assert math.isnan(ks_two_sample(x, y).pvalue)


def test_chi_square():
    stat, p = chi_square_gof([100, 100, 100], [1, 1, 1])
    assert stat == 0 and p == pytest.approx(1.0)
    _, p = chi_square_gof([300, 0, 0], [1, 1, 1])
    assert p < 1e-10


def test_mean_se_and_z():
    m, s = mean_se([1.0, 2.0, 3.0])
    assert m == 2.0 and s == pytest.approx(1 / math.sqrt(3))
    assert pooled_z(1.0, 0.3, 0.0, 0.4) == pytest.approx(2.0)
