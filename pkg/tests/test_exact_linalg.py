import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from flatsphere import exact_linalg as xl
from flatsphere.errors import InputError
from flatsphere.lattice import E8_GRAM

from conftest import random_unimodular


def cofactor_det(m):
    if not m:
        return 1
    if len(m) == 1:
        return m[0][0]
    total = 0
    for j, a in enumerate(m[0]):
        if a:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * a * cofactor_det(minor)
    return total


small_square = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_det_examples():
    assert xl.det(xl.identity(5)) == 1
    assert xl.det(xl.diagonal([1] * 8 + [-1])) == -1
    assert cofactor_det(E8_GRAM) == 1
    assert xl.det(E8_GRAM) == 1
    assert xl.det(()) == 1


def test_det_rejects_non_square():
    with pytest.raises(InputError):
        xl.det(((1, 2),))


@given(small_square)
def test_det_matches_cofactor_expansion(rows):
    m = xl.as_matrix(rows)
    assert xl.det(m) == cofactor_det(m)


@given(small_square, small_square)
def test_det_multiplicative(a, b):
    n = min(len(a), len(b))
    a = xl.as_matrix([r[:n] for r in a[:n]])
    b = xl.as_matrix([r[:n] for r in b[:n]])
    assert xl.det(xl.matmul(a, b)) == xl.det(a) * xl.det(b)


def test_det_is_exact_for_huge_entries():
    big = 10**40
    m = ((big, 1), (1, big))
    assert xl.det(m) == big * big - 1


def test_non_integer_entries_rejected():
    with pytest.raises(InputError):
        xl.as_matrix([[1.5]])


def _in_span(basis, v, bound=6):
    cols = xl.columns(basis)
    for coeffs in itertools.product(range(-bound, bound + 1), repeat=len(cols)):
        w = tuple(sum(c * col[i] for c, col in zip(coeffs, cols)) for i in range(len(v)))
        if w == tuple(v):
            return True
    return False


def test_kernel_examples():
    k = xl.integer_kernel(((2, 4),))
    assert xl.columns(k) == [(2, -1)]
    # saturation: every integer kernel vector with |coords| <= 4 is in the span
    for v in itertools.product(range(-4, 5), repeat=2):
        if 2 * v[0] + 4 * v[1] == 0:
            assert _in_span(k, v)
    assert xl.columns(xl.integer_kernel(xl.identity(3))) == []
    assert len(xl.columns(xl.integer_kernel(((0, 0),)))) == 2


def test_kernel_random_2x4_saturated(rng):
    for _ in range(25):
        m = xl.as_matrix([[rng.randint(-3, 3) for _ in range(4)] for _ in range(2)])
        k = xl.integer_kernel(m)
        cols = xl.columns(k)
        for c in cols:
            assert xl.matvec(m, c) == (0, 0)
        for v in itertools.product(range(-2, 3), repeat=4):
            if xl.matvec(m, v) == (0, 0):
                assert xl.solve_integer(k, v) is not None


def test_kernel_is_deterministic_hnf():
    m = ((1, 1, 1, -3),)
    k1 = xl.integer_kernel(m)
    k2 = xl.integer_kernel(m)
    assert k1 == k2
    rows = xl.transpose(k1)
    assert xl.hermite_rows(rows, 4) == rows


def test_signature_examples():
    assert xl.signature_triple(xl.diagonal([1] * 8 + [-1])) == (8, 1, 0)
    assert xl.signature_triple(E8_GRAM) == (8, 0, 0)
    assert xl.signature_triple(((0, 1), (1, 0))) == (1, 1, 0)
    assert xl.signature_triple(((0, 0), (0, 0))) == (0, 0, 2)
    assert xl.signature_triple(((1, 1), (1, 1))) == (1, 0, 1)
    with pytest.raises(InputError):
        xl.signature_triple(((1, 2), (0, 1)))


def test_e8_leading_minors_positive():
    minors = [xl.det(tuple(r[:k] for r in E8_GRAM[:k])) for k in range(1, 9)]
    assert all(d > 0 for d in minors)


def test_signature_shear_with_cancelling_diagonal():
    # zero pivot whose partner has -2 on the diagonal; a plain shear would cancel
    g = ((0, 1, 0), (1, -2, 0), (0, 0, 3))
    assert xl.signature_triple(g) == (2, 1, 0)


def test_signature_congruence_invariant(rng):
    for _ in range(60):
        n = rng.randint(1, 6)
        a = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        g = xl.as_matrix([[a[i][j] + a[j][i] for j in range(n)] for i in range(n)])
        u = random_unimodular(n, rng)
        assert xl.signature_triple(xl.congruence(g, u)) == xl.signature_triple(g)


def test_inverse_unimodular(rng):
    for _ in range(20):
        u = random_unimodular(5, rng)
        assert xl.matmul(u, xl.inverse_unimodular(u)) == xl.identity(5)
    with pytest.raises(InputError):
        xl.inverse_unimodular(((2, 0), (0, 1)))


def test_solve_integer():
    basis = xl.from_columns([(1, 0, 1), (0, 2, 0)], 3)
    assert xl.solve_integer(basis, (3, 4, 3)) == (3, 2)
    assert xl.solve_integer(basis, (0, 1, 0)) is None
    assert xl.solve_integer(basis, (1, 0, 0)) is None
