import itertools

import numpy as np
import pytest

from costgreedy.costs import ModularCost
from costgreedy.instance import Instance
from costgreedy.utilities import ModularUtility, VersionSpaceUtility
from costgreedy.verify import gen_counterexample_thm2, gen_counterexample_thm3


def make_instance(utility, cost, budget, name="t"):
    n, m = utility.n_items, utility.n_states
    return Instance(tuple(f"x{i + 1}" for i in range(n)), tuple(str(y) for y in range(m)),
                    utility, cost, budget, name)


def modular_instance(w, costs, budget):
    return make_instance(ModularUtility(np.asarray(w, dtype=float)), ModularCost(costs), budget)


def vsr_instance(hypotheses, costs, budget, prior=None, n_states=2):
    hyps = [tuple(h) for h in hypotheses]
    prior = prior if prior is not None else [1.0 / len(hyps)] * len(hyps)
    return make_instance(VersionSpaceUtility(hyps, prior, n_states), ModularCost(costs), budget)


def all_labelings(n, m=2):
    return list(itertools.product(range(m), repeat=n))


@pytest.fixture
def cheap_trap():
    return gen_counterexample_thm2(10)


@pytest.fixture
def unit_chain():
    return gen_counterexample_thm3(10)


# -- acceptance report ---------------------------------------------------------------


def pytest_configure(config):
    config.acceptance_lines = []


@pytest.fixture
def acceptance_log(request):
    return request.config.acceptance_lines


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
