import numpy as np
import pytest
from hypothesis import strategies as st

from bdgmaps.rng import STREAM_TEST, make_rng
from bdgmaps.sampling import OffspringTables, SamplerConfig, exact_size_tree, sample_conditioned
from bdgmaps.weights import kappa_params


@pytest.fixture
def rng():
    return make_rng(12345, STREAM_TEST)


@pytest.fixture(scope="session")
def params2():
    return kappa_params(2)


@pytest.fixture(scope="session")
def params3():
    return kappa_params(3)


def random_tree(seed, n, kappa=2):
    tab = OffspringTables.from_params(kappa_params(kappa))
    return exact_size_tree(tab, n, make_rng(seed, STREAM_TEST))


def random_mobile(seed, n, kappa=2, condition="size_and_positive"):
    cfg = SamplerConfig(size_n=n, condition=condition)
    mob, _ = sample_conditioned(cfg, kappa_params(kappa), make_rng(seed, STREAM_TEST))
    return mob


seeds = st.integers(min_value=0, max_value=2**32 - 1)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.REPORT:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.REPORT):
        terminalreporter.write_line(mod.REPORT[k])
