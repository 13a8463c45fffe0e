import random

import pytest

from flatsphere import exact_linalg as xl
from flatsphere.manifold import Block, connected_sum

X = (1,) * 8 + (3,)


def random_unimodular(n, rng, steps=None, mult=1):
    """Product of random elementary matrices and a signed permutation."""
    u = [list(r) for r in xl.identity(n)]
    if n == 0:
        return ()
    for _ in range(steps if steps is not None else 2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        k = rng.choice([k for k in range(-mult, mult + 1) if k])
        for r in range(n):
            u[r][j] += k * u[r][i]
    perm = list(range(n))
    rng.shuffle(perm)
    signs = [rng.choice((1, -1)) for _ in range(n)]
    u = [[signs[c] * u[r][perm[c]] for c in range(n)] for r in range(n)]
    m = xl.as_matrix(u)
    assert abs(xl.det(m)) == 1
    return m


@pytest.fixture
def rng():
    return random.Random(20261014)


@pytest.fixture(scope="session")
def m():
    return connected_sum([Block.CP2] * 8 + [Block.CP2_bar])


@pytest.fixture(scope="session")
def m_fake():
    return connected_sum([Block.CP2] * 8 + [Block.StarCP2_bar])


@pytest.fixture(scope="session")
def m_plus():
    return connected_sum([Block.CP2] * 9 + [Block.CP2_bar])


@pytest.fixture(scope="session")
def e8_sum():
    return connected_sum([Block.E8_manifold, Block.CP2_bar])


def random_unimodular_form(rng, max_rank=6, max_entry=3):
    """Random unimodular Gram matrix: a congruence of a sum of <+-1> and H."""
    from flatsphere.lattice import IntegralForm

    while True:
        n = rng.randint(1, max_rank)
        blocks = []
        size = 0
        while size < n:
            if n - size >= 2 and rng.random() < 0.3:
                blocks.append(((0, 1), (1, 0)))
                size += 2
            else:
                blocks.append(((rng.choice((1, -1)),),))
                size += 1
        g = xl.block_diag(*blocks)
        u = random_unimodular(n, rng, steps=rng.randint(0, n + 1))
        h = xl.congruence(g, u)
        if max(abs(v) for r in h for v in r) <= max_entry:
            return IntegralForm(h)


# -- acceptance reporting ------------------------------------------------------

import time

SESSION_START = time.perf_counter()
_ACCEPTANCE = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    label = item.get_closest_marker("criterion")
    if label is None:
        return
    name = label.args[0]
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        _ACCEPTANCE[name] = _ACCEPTANCE.get(name, True) and rep.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion label")


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda s: s.split()[0]):
        terminalreporter.write_line(f"{name}: {'PASS' if _ACCEPTANCE[name] else 'FAIL'}")
