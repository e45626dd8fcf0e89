import os
import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from xsq.groups import direct_product, parse_standard, subgroup_closure  # noqa: E402

settings.register_profile(
    "xsq", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("xsq")


def G(spec):
    return parse_standard(spec)


def sub(group, *gens):
    return subgroup_closure(group, gens)


def group_axioms_hold(g) -> bool:
    """Exhaustive associativity, identity and inverse check on a table."""
    t = g.table.astype(np.int64)
    idx = np.arange(g.order)
    ok_assoc = (t[t] == t[:, t]).all()  # t[t[x,y],z] == t[x,t[y,z]]
    e = g.identity
    ok_id = (t[e] == idx).all() and (t[:, e] == idx).all()
    ok_inv = (t[idx, g.inverse] == e).all() and (t[g.inverse, idx] == e).all()
    return bool(ok_assoc and ok_id and ok_inv)


@pytest.fixture(scope="session")
def S3():
    return G("symmetric 3")


@pytest.fixture(scope="session")
def D4():
    return G("dihedral 4")


@pytest.fixture(scope="session")
def Q8():
    return G("quaternion8")


def product(a, b):
    return direct_product(a, b).group


# one verdict line per acceptance criterion, echoed after the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
