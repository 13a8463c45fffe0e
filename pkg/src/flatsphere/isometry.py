"""Isometries of unimodular forms with verified change-of-basis certificates.

Definite forms are handled by exhaustive backtracking over short vectors, so
"no isometry" answers are definitive.  Indefinite forms are classified by
rank, signature and parity; explicit certificates for them are produced by
greedy splitting with backtracking and may be unavailable within budget.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from . import exact_linalg as xl
from .errors import (
    CertificateUnavailable,
    InputError,
    InternalError,
    PreconditionError,
    ResourceExhausted,
)
from .exact_linalg import Matrix, Vector
from .lattice import (
    E8_GRAM,
    IntegralForm,
    complement_basis,
    diagonal_form,
    direct_sum,
    dual_witness,
    standard_form,
)

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class IsometryCert:
    """Unimodular ``U`` with ``U^T G_target U = G_source``.

    ``U`` sends source coordinates to target coordinates.  Both identities
    are checked on construction; a certificate that exists is valid.
    """

    source: IntegralForm
    target: IntegralForm
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", xl.as_matrix(self.matrix))
        self.verify()

    def verify(self) -> None:
        n, m = self.source.rank, self.target.rank
        u = self.matrix
        if n != m or xl.shape(u) != (n, n) and n:
            raise InternalError(f"certificate shape {xl.shape(u)} for ranks {n}, {m}")
        if abs(xl.det(u)) != 1:
            raise InternalError("certificate matrix is not unimodular")
        if xl.congruence(self.target.gram, u) != self.source.gram:
            raise InternalError("certificate does not carry the target form to the source form")

    def apply(self, v: Sequence[int]) -> Vector:
        return xl.matvec(self.matrix, v) if self.matrix else ()

    def inverse(self) -> IsometryCert:
        return IsometryCert(self.target, self.source, xl.inverse_unimodular(self.matrix))

    def then(self, other: IsometryCert) -> IsometryCert:
        """Compose ``self: A -> B`` with ``other: B -> C``."""
        if other.source.gram != self.target.gram:
            raise InputError("certificates do not compose")
        return IsometryCert(self.source, other.target, xl.matmul(other.matrix, self.matrix))

    @classmethod
    def identity(cls, f: IntegralForm) -> IsometryCert:
        return cls(f, f, xl.identity(f.rank))


class _Budget:
    def __init__(self, nodes: int):
        self.left = nodes
        self.limit = nodes

    def tick(self, n: int = 1) -> None:
        self.left -= n
        if self.left < 0:
            raise ResourceExhausted(f"search exceeded its budget of {self.limit} nodes")


def _budget(b) -> _Budget:
    if isinstance(b, _Budget):
        return b
    return _Budget(DEFAULT_NODE_BUDGET if b is None else b)


# -- short vectors -----------------------------------------------------------


def _require_definite(f: IntegralForm, what: str) -> int:
    sign = f.definite_sign
    if sign == 0:
        raise PreconditionError(f"{what} needs a definite form, got {f!r}")
    return sign


@lru_cache(maxsize=256)
def _fincke_pohst(gram: Matrix, t: int) -> tuple[Vector, ...]:
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for l in range(k, n):
                q[k][l] -= q[k][i] * q[i][l]
    found = []
    x = [0] * n

    def rec(i: int, budget: Fraction):
        if i < 0:
            if budget == 0:
                found.append(tuple(x))
            return
        c = -sum(q[i][j] * x[j] for j in range(i + 1, n))
        d = q[i][i]
        r = math.isqrt(int(budget / d)) + 1
        lo, hi = math.floor(c) - r, math.ceil(c) + r
        for v in range(lo, hi + 1):
            used = d * (v - c) ** 2
            if used <= budget:
                x[i] = v
                rec(i - 1, budget - used)
        x[i] = 0

    rec(n - 1, Fraction(t))
    return tuple(sorted(found))


def enumerate_norm_vectors(f: IntegralForm, t: int) -> list[Vector]:
    """Every ``v`` with ``v.v = t`` in a definite form, in lexicographic order."""
    sign = _require_definite(f, "norm-vector enumeration")
    if t * sign < 0:
        return []
    g = f.gram if sign > 0 else f.negate().gram
    return list(_fincke_pohst(g, abs(t)))


def reduce_definite(f: IntegralForm) -> tuple[Matrix, IntegralForm]:
    """Pairwise size reduction of a definite form.

    Repeatedly replaces ``b_i`` by ``b_i - k b_j`` while that shortens it.
    Returns the new basis (as columns in ``f`` coordinates) and the reduced
    form.  Not an LLL reduction, only a cheap preconditioner for searches.
    """
    sign = _require_definite(f, "reduction")
    n = f.rank
    g = [[sign * x for x in row] for row in f.gram]
    basis = [list(r) for r in xl.identity(n)]  # rows = basis vectors
    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                gij, gjj = g[i][j], g[j][j]
                k = (2 * gij + gjj) // (2 * gjj)  # nearest integer to gij / gjj
                if k and 2 * abs(gij) > gjj:
                    # b_i <- b_i - k b_j
                    basis[i] = [a - k * b for a, b in zip(basis[i], basis[j])]
                    gii = g[i][i] - 2 * k * gij + k * k * gjj
                    for t in range(n):
                        g[i][t] -= k * g[j][t]
                    g[i][i] = gii
                    for t in range(n):
                        g[t][i] = g[i][t]
                    changed = True
    order = sorted(range(n), key=lambda i: (g[i][i], i))
    r = xl.from_columns([basis[i] for i in order], n)
    reduced = f.restrict(r)
    return r, reduced


# -- definite isometries -----------------------------------------------------


def _quick_invariants(f: IntegralForm):
    return f.rank, f.signature_triple, f.parity, f.det


def _search(a: IntegralForm, b: IntegralForm, budget: _Budget) -> Iterator[Matrix]:
    """Yield every ``W`` (columns = images of a's basis) with ``W^T B W = A``."""
    n = a.rank
    if n == 0:
        yield ()
        return
    ga, gb = a.gram, b.gram
    cands = {}
    for i in range(n):
        t = ga[i][i]
        if t not in cands:
            cands[t] = [(w, xl.matvec(gb, w)) for w in enumerate_norm_vectors(b, t)]
    images: list[tuple[Vector, Vector]] = []

    def rec(i: int):
        if i == n:
            yield xl.from_columns([w for w, _ in images], n)
            return
        row = ga[i]
        for w, bw in cands[row[i]]:
            budget.tick()
            if all(sum(p * q for p, q in zip(bwj, w)) == row[j] for j, (_, bwj) in enumerate(images)):
                images.append((w, bw))
                yield from rec(i + 1)
                images.pop()

    yield from rec(0)


def iter_isometries(a: IntegralForm, b: IntegralForm, budget=None) -> Iterator[IsometryCert]:
    """Every isometry ``a -> b`` between definite forms, deterministically ordered."""
    budget = _budget(budget)
    _require_definite(a, "isometric_definite")
    _require_definite(b, "isometric_definite")
    if _quick_invariants(a) != _quick_invariants(b):
        return
    ra, a_red = reduce_definite(a)
    rb, b_red = reduce_definite(b)
    ra_inv = xl.inverse_unimodular(ra) if a.rank else ()
    for w in _search(a_red, b_red, budget):
        u = xl.matmul(xl.matmul(rb, w), ra_inv) if a.rank else ()
        yield IsometryCert(a, b, u)


def _trace(f: IntegralForm) -> int:
    return sum(abs(f.gram[i][i]) for i in range(f.rank))


def isometric_definite(a: IntegralForm, b: IntegralForm, budget=None) -> IsometryCert | None:
    """First isometry ``a -> b`` found by exhaustive search, or None.

    The search maps the basis of whichever side has the smaller reduced
    trace, since fewer and shorter candidate vectors keep the tree small.
    """
    budget = _budget(budget)
    _require_definite(a, "isometric_definite")
    _require_definite(b, "isometric_definite")
    if _quick_invariants(a) != _quick_invariants(b):
        return None
    if _trace(reduce_definite(b)[1]) < _trace(reduce_definite(a)[1]):
        cert = next(iter_isometries(b, a, budget), None)
        return cert.inverse() if cert is not None else None
    return next(iter_isometries(a, b, budget), None)


def _positive_representatives(vectors):
    out = []
    for v in vectors:
        lead = next(x for x in v if x)
        if lead > 0:
            out.append(v)
    return out


def _unit_chain(f: IntegralForm, budget: _Budget) -> list[Vector] | None:
    """Pairwise orthogonal unit vectors spanning ``f``, or None."""
    n = f.rank
    eps = f.definite_sign

    def rec(basis: Matrix, form: IntegralForm) -> list[Vector] | None:
        if form.rank == 0:
            return []
        units = enumerate_norm_vectors(form, eps)
        # v and -v have the same complement
        for v in _positive_representatives(units):
            budget.tick()
            amb = xl.matvec(basis, v)
            if form.rank == 1:
                return [amb]
            k = complement_basis(form, v)
            sub_basis = xl.matmul(basis, k)
            rest = rec(sub_basis, form.restrict(k))
            if rest is not None:
                return [amb] + rest
        return None

    return rec(xl.identity(n), f)


def is_diagonalizable_definite(f: IntegralForm, budget=None) -> tuple[bool, IsometryCert | None]:
    """Decide whether a definite unimodular form is ``n<+-1>``.

    Returns ``(True, cert to n<eps>)`` or ``(False, None)``.  Backtracks over
    every unit vector choice, so a False answer is definitive.
    """
    budget = _budget(budget)
    if f.rank and not f.is_definite:
        raise PreconditionError("diagonalizability test needs a definite form")
    if not f.is_unimodular:
        raise PreconditionError("diagonalizability test needs a unimodular form")
    if f.rank == 0:
        return True, IsometryCert.identity(f)
    if f.is_even:
        return False, None
    units = _unit_chain(f, budget)
    if units is None:
        return False, None
    p = xl.from_columns(units, f.rank)
    target = diagonal_form([f.definite_sign] * f.rank)
    return True, IsometryCert(f, target, xl.inverse_unimodular(p))


# -- indefinite classification ----------------------------------------------


@dataclass(frozen=True)
class CanonicalDesc:
    """Canonical description of a unimodular form.

    ``kind`` is one of ``zero``, ``odd_indefinite``, ``even_indefinite`` or
    ``definite``.  ``e8_copies`` is signed: negative values mean copies of
    ``-E8``.  Definite forms keep their Gram matrix, since they are only
    classified up to the definite isometry search.
    """

    kind: str
    rank: int
    signature: int
    parity: str
    n_plus: int = 0
    n_minus: int = 0
    e8_copies: int = 0
    hyperbolic: int = 0
    gram: Matrix | None = None

    def model(self) -> IntegralForm:
        if self.kind == "zero":
            return IntegralForm(())
        if self.kind == "odd_indefinite":
            return diagonal_form([1] * self.n_plus + [-1] * self.n_minus)
        if self.kind == "even_indefinite":
            e8 = standard_form("e8" if self.e8_copies >= 0 else "e8_neg")
            parts = [e8] * abs(self.e8_copies) + [standard_form("hyperbolic")] * self.hyperbolic
            return direct_sum(*parts)
        return IntegralForm(self.gram)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "rank": self.rank, "signature": self.signature, "parity": self.parity}
        if self.kind == "odd_indefinite":
            d.update(n_plus=self.n_plus, n_minus=self.n_minus)
        elif self.kind == "even_indefinite":
            d.update(e8_copies=self.e8_copies, hyperbolic=self.hyperbolic)
        elif self.kind == "definite":
            d.update(gram=[list(r) for r in self.gram])
        return d

    def __str__(self):
        if self.kind == "zero":
            return "0 (rank 0)"
        if self.kind == "odd_indefinite":
            return f"{self.n_plus}<1> + {self.n_minus}<-1>"
        if self.kind == "even_indefinite":
            parts = []
            if self.e8_copies:
                parts.append(f"{abs(self.e8_copies)}{'E8' if self.e8_copies > 0 else '(-E8)'}")
            if self.hyperbolic:
                parts.append(f"{self.hyperbolic}H")
            return " + ".join(parts)
        return f"definite {self.parity} form of rank {self.rank}, signature {self.signature}"


def classify_unimodular(f: IntegralForm) -> CanonicalDesc:
    p, q, z = f.signature_triple
    if z or not f.is_unimodular:
        raise PreconditionError("classification needs a nondegenerate unimodular form")
    base = dict(rank=f.rank, signature=p - q, parity=f.parity, n_plus=p, n_minus=q)
    if f.rank == 0:
        return CanonicalDesc("zero", **base)
    if p == 0 or q == 0:
        return CanonicalDesc("definite", gram=f.gram, **base)
    if not f.is_even:
        return CanonicalDesc("odd_indefinite", **base)
    sig = p - q
    if sig % 8:
        raise InternalError(f"even unimodular form with signature {sig} not divisible by 8")
    a = sig // 8
    return CanonicalDesc("even_indefinite", e8_copies=a, hyperbolic=(f.rank - 8 * abs(a)) // 2, **base)


def _box(rank: int, radius: int) -> Iterator[Vector]:
    """Nonzero integer vectors with entries in ``[-radius, radius]``,
    ordered by L1 norm and then lexicographically (positive entries first)."""
    rng = sorted(range(-radius, radius + 1), key=lambda v: (abs(v), -v))
    vecs = [v for v in itertools.product(rng, repeat=rank) if any(v)]
    vecs.sort(key=lambda v: sum(map(abs, v)))
    return iter(vecs)


def _candidate_vectors(form: IntegralForm, norms: set[int], budget: _Budget) -> Iterator[Vector]:
    seen = set()
    radii = [1] + ([2] if form.rank <= 6 else [])
    for r in radii:
        for v in _box(form.rank, r):
            budget.tick()
            if v in seen:
                continue
            seen.add(v)
            if form.norm(v) in norms:
                yield v


def _odd_indefinite_units(f: IntegralForm, budget: _Budget) -> list[Vector] | None:
    def rec(basis: Matrix, form: IntegralForm, depth: int) -> list[Vector] | None:
        if form.rank == 0:
            return []
        if form.is_definite:
            units = _unit_chain(form, budget) if not form.is_even else None
            if units is None:
                return None
            return [xl.matvec(basis, v) for v in units]
        if form.is_even:
            return None
        for v in _candidate_vectors(form, {1, -1}, budget):
            if next(x for x in v if x) < 0:
                continue
            k = complement_basis(form, v)
            sub = form.restrict(k)
            if sub.rank and sub.is_even and not sub.is_definite:
                continue
            if sub.is_definite and sub.is_even:
                continue
            rest = rec(xl.matmul(basis, k), sub, depth + 1)
            if rest is not None:
                return [xl.matvec(basis, v)] + rest
        return None

    return rec(xl.identity(f.rank), f, 0)


def _even_indefinite_frame(f: IntegralForm, desc: CanonicalDesc, budget: _Budget) -> list[Vector] | None:
    """Columns, in ``f`` coordinates, of a basis realising ``desc.model()``."""
    e8_cols: list[Vector] = []
    h_cols: list[Vector] = []
    basis = xl.identity(f.rank)
    form = f
    while form.rank and not form.is_definite:
        found = None
        for v in _candidate_vectors(form, {0}, budget):
            if math.gcd(*v) != 1:
                continue
            w = dual_witness(form, v)
            if w is None:
                continue
            half = form.norm(w) // 2
            w = tuple(a - half * b for a, b in zip(w, v))
            found = (v, w)
            break
        if found is None:
            return None
        v, w = found
        h_cols += [xl.matvec(basis, v), xl.matvec(basis, w)]
        # complement of the hyperbolic pair
        k = xl.integer_kernel((xl.matvec(form.gram, v), xl.matvec(form.gram, w)))
        basis = xl.matmul(basis, k)
        form = f.restrict(basis)
    if form.rank:
        e8 = standard_form("e8" if desc.e8_copies > 0 else "e8_neg")
        e8_part = direct_sum(*[e8] * abs(desc.e8_copies))
        cert = isometric_definite(form, e8_part, budget)
        if cert is None:
            return None
        inv = cert.inverse().matrix  # model coordinates -> form coordinates
        e8_cols = [xl.matvec(basis, c) for c in xl.columns(inv)]
    if len(h_cols) // 2 != desc.hyperbolic:
        return None
    return e8_cols + h_cols


def canonical_certificate(f: IntegralForm, budget=None) -> IsometryCert | None:
    """Best-effort certificate from ``f`` to ``classify_unimodular(f).model()``.

    Always succeeds for definite and rank-0 forms (the model is ``f``
    itself); for indefinite forms returns None when the greedy splitting
    search finds no frame.
    """
    budget = _budget(budget)
    desc = classify_unimodular(f)
    model = desc.model()
    if desc.kind in ("zero", "definite"):
        return IsometryCert.identity(f)
    if f.gram == model.gram:
        return IsometryCert.identity(f)
    if desc.kind == "odd_indefinite":
        units = _odd_indefinite_units(f, budget)
        if units is None:
            return None
        units = [u for u in units if f.norm(u) == 1] + [u for u in units if f.norm(u) == -1]
        cols = units
    else:
        cols = _even_indefinite_frame(f, desc, budget)
        if cols is None:
            return None
    p = xl.from_columns(cols, f.rank)
    return IsometryCert(f, model, xl.inverse_unimodular(p))


def isometric(a: IntegralForm, b: IntegralForm, budget=None) -> IsometryCert | None:
    """Isometry between unimodular forms.

    Returns None when the forms are not isometric.  Raises
    ``CertificateUnavailable`` when classification says they are isometric
    but no explicit certificate was found.
    """
    budget = _budget(budget)
    if a.gram == b.gram:
        return IsometryCert.identity(a)
    da, db = classify_unimodular(a), classify_unimodular(b)
    if da.kind == "definite" and db.kind == "definite":
        return isometric_definite(a, b, budget)
    if da.kind != db.kind or da.to_dict() != db.to_dict():
        return None
    ca = canonical_certificate(a, budget)
    cb = canonical_certificate(b, budget)
    if ca is None or cb is None:
        raise CertificateUnavailable(
            f"forms are isometric ({da}) but no explicit certificate was constructed", da
        )
    return ca.then(cb.inverse())


def isometry_pinned(
    a: IntegralForm, va: Sequence[int], b: IntegralForm, vb: Sequence[int], budget=None
) -> IsometryCert | None:
    """Isometry ``U: a -> b`` with ``U va = vb`` for classes of square +-1.

    Both sides are split as ``<+-1> + complement``; the complements are
    matched by ``isometric`` and the pieces reassembled.  None means the
    complements are not isometric, so no such isometry exists.
    """
    from .lattice import split_off_unit

    budget = _budget(budget)
    va, vb = xl.as_vector(va), xl.as_vector(vb)
    sa, sb = a.norm(va), b.norm(vb)
    if sa not in (1, -1) or sb not in (1, -1):
        raise PreconditionError("isometry_pinned only pins classes of square +-1")
    if sa != sb:
        raise PreconditionError(f"pinned classes have different squares {sa} and {sb}")
    split_a = split_off_unit(a, va)
    split_b = split_off_unit(b, vb)
    ca = IntegralForm(tuple(r[1:] for r in split_a.target.gram[1:]))
    cb = IntegralForm(tuple(r[1:] for r in split_b.target.gram[1:]))
    if ca.rank != cb.rank:
        return None
    comp = isometric(ca, cb, budget)
    if comp is None:
        return None
    middle = IsometryCert(split_a.target, split_b.target, xl.block_diag(((1,),), comp.matrix))
    cert = split_a.then(middle).then(split_b.inverse())
    if cert.apply(va) != vb:
        raise InternalError("pinned certificate does not send the pinned class to its target")
    return cert


E8_FORM = IntegralForm(E8_GRAM)
