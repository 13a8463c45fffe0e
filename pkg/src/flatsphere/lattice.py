"""Integral symmetric bilinear forms and operations on their classes."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from . import exact_linalg as xl
from .errors import InputError, InternalError, PreconditionError
from .exact_linalg import Matrix, Vector

ClassVector = Vector

# Chain 1-2-...-7 with node 8 attached to node 5 (1-indexed).
E8_EDGES = tuple((i, i + 1) for i in range(6)) + ((4, 7),)


def _e8_gram() -> Matrix:
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in E8_EDGES:
        g[i][j] = g[j][i] = -1
    return xl.as_matrix(g)


E8_GRAM = _e8_gram()


@dataclass(frozen=True)
class IntegralForm:
    """Symmetric integer Gram matrix in a fixed basis, optionally labelled."""

    gram: Matrix
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        g = xl.as_matrix(self.gram)
        if not xl.is_symmetric(g):
            raise InputError("Gram matrix must be square and symmetric")
        object.__setattr__(self, "gram", g)
        if self.labels is not None:
            if len(self.labels) != len(g):
                raise InputError("one label per basis vector required")
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def signature_triple(self) -> tuple[int, int, int]:
        return xl.signature_triple(self.gram)

    @property
    def signature(self) -> int:
        p, q, _ = self.signature_triple
        return p - q

    @cached_property
    def det(self) -> int:
        return xl.det(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    @property
    def parity(self) -> str:
        return "even" if self.is_even else "odd"

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    @property
    def is_definite(self) -> bool:
        p, q, z = self.signature_triple
        return self.rank > 0 and z == 0 and (p == 0 or q == 0)

    @property
    def definite_sign(self) -> int:
        """+1 for positive definite, -1 for negative definite, 0 otherwise."""
        if not self.is_definite:
            return 0
        return 1 if self.signature > 0 else -1

    def inner(self, v: Sequence[int], w: Sequence[int]) -> int:
        return inner(self, v, w)

    def norm(self, v: Sequence[int]) -> int:
        return inner(self, v, v)

    def restrict(self, basis: Matrix) -> IntegralForm:
        """Form induced on the sublattice spanned by the columns of ``basis``."""
        return IntegralForm(xl.congruence(self.gram, basis))

    def negate(self) -> IntegralForm:
        return IntegralForm(tuple(tuple(-x for x in row) for row in self.gram), self.labels)

    def basis_vector(self, i: int) -> ClassVector:
        return tuple(int(i == j) for j in range(self.rank))

    def __repr__(self):
        return f"IntegralForm(rank={self.rank}, sigma={self.signature}, {self.parity})"


def standard_form(kind: str) -> IntegralForm:
    """One of ``one_plus``, ``one_minus``, ``hyperbolic``, ``e8``, ``e8_neg``."""
    if kind == "one_plus":
        return IntegralForm(((1,),))
    if kind == "one_minus":
        return IntegralForm(((-1,),))
    if kind == "hyperbolic":
        return IntegralForm(((0, 1), (1, 0)))
    if kind == "e8":
        return IntegralForm(E8_GRAM)
    if kind == "e8_neg":
        return IntegralForm(E8_GRAM).negate()
    raise InputError(f"unknown standard form {kind!r}")


def zero_form() -> IntegralForm:
    return IntegralForm(())


def diagonal_form(entries: Sequence[int]) -> IntegralForm:
    return IntegralForm(xl.diagonal(list(entries)))


def direct_sum(*forms: IntegralForm) -> IntegralForm:
    labels = None
    if forms and all(f.labels is not None for f in forms):
        labels = tuple(lab for f in forms for lab in f.labels)
    return IntegralForm(xl.block_diag(*(f.gram for f in forms)), labels)


def _check_class(f: IntegralForm, v: Sequence[int]) -> ClassVector:
    v = xl.as_vector(v)
    if len(v) != f.rank:
        raise InputError(f"class of length {len(v)} in a rank-{f.rank} form")
    return v


def inner(f: IntegralForm, v: Sequence[int], w: Sequence[int]) -> int:
    v = _check_class(f, v)
    w = _check_class(f, w)
    return sum(vi * gij * wj for vi, row in zip(v, f.gram) if vi for gij, wj in zip(row, w))


def pairings(f: IntegralForm, x: Sequence[int]) -> Vector:
    """The row ``x^T G``: pairings of ``x`` with every basis vector."""
    x = _check_class(f, x)
    return xl.matvec(f.gram, x)


def parity(f: IntegralForm) -> str:
    return f.parity


def is_unimodular(f: IntegralForm) -> bool:
    return f.is_unimodular


def characteristic_violations(f: IntegralForm, x: Sequence[int]) -> list[int]:
    """Indices ``i`` with ``x.e_i != e_i.e_i (mod 2)``."""
    c = pairings(f, x)
    return [i for i in range(f.rank) if (c[i] - f.gram[i][i]) % 2]


def is_characteristic(f: IntegralForm, x: Sequence[int]) -> bool:
    # x.y = y.y mod 2 is additive in y, so basis vectors suffice
    return not characteristic_violations(f, x)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def dual_witness(f: IntegralForm, x: Sequence[int]) -> ClassVector | None:
    """A class ``g`` with ``x.g = 1``, or None when no such class exists.

    A basis vector (or its negative) is preferred when one works; otherwise
    the coefficients come from an iterated extended gcd.
    """
    c = pairings(f, x)
    for i, ci in enumerate(c):
        if abs(ci) == 1:
            return tuple(ci if j == i else 0 for j in range(f.rank))
    g = 0
    coeffs = [0] * f.rank
    for i, ci in enumerate(c):
        if ci == 0:
            continue
        d, s, t = _ext_gcd(g, ci)
        coeffs = [s * k for k in coeffs]
        coeffs[i] = t
        g = d
    if g < 0:
        g = -g
        coeffs = [-k for k in coeffs]
    if g != 1:
        return None
    w = tuple(coeffs)
    if inner(f, x, w) != 1:
        raise InternalError("extended gcd produced a bad dual witness")
    return w


def dual_sphere_exists(f: IntegralForm, x: Sequence[int]) -> bool:
    return dual_witness(f, x) is not None


def complement_basis(f: IntegralForm, x: Sequence[int]) -> Matrix:
    """Columns spanning the saturated lattice ``{y : x.y = 0}``."""
    x = _check_class(f, x)
    if not any(x):
        raise PreconditionError("orthogonal complement of the zero class is not taken")
    c = pairings(f, x)
    if not any(c):
        raise PreconditionError("class lies in the radical of a degenerate form")
    return xl.integer_kernel((c,))


def orthogonal_complement(f: IntegralForm, x: Sequence[int]) -> tuple[IntegralForm, Matrix]:
    basis = complement_basis(f, x)
    return f.restrict(basis), basis


def split_off_unit(f: IntegralForm, x: Sequence[int]):
    """Certificate ``f -> <x.x> + x^perp`` for a class of square +-1.

    The returned ``IsometryCert`` maps coordinates in ``f`` to coordinates in
    the split form, whose first basis vector is ``x`` and whose remaining
    basis vectors are the canonical complement basis.
    """
    from .isometry import IsometryCert

    x = _check_class(f, x)
    if not f.is_unimodular:
        raise PreconditionError("split_off_unit needs a unimodular form")
    s = f.norm(x)
    if s not in (1, -1):
        raise PreconditionError(f"can only split off a class of square +-1, got {s}")
    comp, basis = orthogonal_complement(f, x)
    cols = [x] + xl.columns(basis)
    p = xl.from_columns(cols, f.rank)
    if abs(xl.det(p)) != 1:
        raise InternalError("[x | complement] is not unimodular")
    target = direct_sum(IntegralForm(((s,),)), comp)
    return IsometryCert(f, target, xl.inverse_unimodular(p))
