"""Embedding decisions for second-homology classes.

Topologically flat embeddings are decided with the Kervaire-Milnor
invariant, a Z/2 obstruction for s-characteristic spheres that have an
algebraically dual sphere, using the closed formula

    km(x) = (x.x - sigma(M)) / 8 + KS(M)   (mod 2).

An immersed sphere with a dual sphere is homotopic to a flat embedding
exactly when km vanishes.  Smooth embeddings of square +-1 classes are only
ever obstructed (never certified) by blowing down and testing the
complement against Rokhlin's and Donaldson's theorems.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import exact_linalg as xl
from .errors import InputError, InternalError, NoDualSphereError, PreconditionError
from .isometry import IsometryCert
from .lattice import (
    ClassVector,
    IntegralForm,
    characteristic_violations,
    dual_witness,
    inner,
    split_off_unit,
)
from .manifold import BLOCK_TABLE, Block, Manifold4, Obstruction, connected_sum, donaldson_fires, rokhlin_fires


@dataclass(frozen=True)
class KmValue:
    """Either the trivial group (``bit is None``) or an element of Z/2."""

    bit: int | None

    @property
    def trivial_group(self) -> bool:
        return self.bit is None

    @property
    def vanishes(self) -> bool:
        return self.bit in (None, 0)

    def __str__(self):
        return "trivial" if self.bit is None else str(self.bit)


TRIVIAL = KmValue(None)


@dataclass(frozen=True)
class EmbedVerdict:
    embeddable: bool
    km: KmValue
    s_characteristic: bool
    dual_witness: ClassVector | None
    s_char_witness: ClassVector | None
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class SmoothObstructionReport:
    blow_down_form: IntegralForm
    fired: tuple[Obstruction, ...]
    certificate: IsometryCert = field(repr=False)

    @property
    def conclusive(self) -> bool:
        return bool(self.fired)


def _check(m: Manifold4, x: Sequence[int]) -> ClassVector:
    x = xl.as_vector(x)
    if len(x) != m.rank:
        raise InputError(f"class of length {len(x)} in a manifold with b2 = {m.rank}")
    return x


def _violation_witness(f: IntegralForm, x: ClassVector, bad: list[int]) -> ClassVector:
    # Prefer y = e_i + e_j with x.y = 1: it violates the congruence and is a
    # dual sphere at the same time.
    n = f.rank
    for i in range(n):
        for j in range(i + 1, n):
            y = tuple(int(k in (i, j)) for k in range(n))
            xy = inner(f, x, y)
            if xy == 1 and (xy - f.norm(y)) % 2:
                return y
    return f.basis_vector(bad[0])


def s_characteristic_witness(m: Manifold4, x: Sequence[int]) -> ClassVector | None:
    """A class violating ``x.y = y.y (mod 2)``, or None if ``x`` is s-characteristic.

    Every class of a simply connected 4-manifold is spherical, so
    s-characteristic is the same as characteristic here.
    """
    x = _check(m, x)
    bad = characteristic_violations(m.form, x)
    if not bad:
        return None
    return _violation_witness(m.form, x, bad)


def is_s_characteristic(m: Manifold4, x: Sequence[int]) -> bool:
    return s_characteristic_witness(m, x) is None


def _stong_bit(m: Manifold4, x: ClassVector) -> int:
    d = m.form.norm(x) - m.signature
    if d % 8:
        raise InternalError(f"characteristic class with x.x - sigma = {d}, not divisible by 8")
    return (d // 8 + m.ks) % 2


def kervaire_milnor(m: Manifold4, x: Sequence[int], *, require_dual_sphere: bool = False) -> KmValue:
    """km of (an immersed sphere representing) ``x``.

    The closed formula only needs ``x`` to be s-characteristic, which is how
    km of summands such as ``3`` in ``-CP2`` is evaluated.  The dual sphere
    matters for translating km into an embedding verdict; pass
    ``require_dual_sphere=True`` to refuse classes without one.
    """
    x = _check(m, x)
    if require_dual_sphere and dual_witness(m.form, x) is None:
        raise NoDualSphereError("class has no algebraically dual sphere; km is undefined")
    if not is_s_characteristic(m, x):
        return TRIVIAL
    return KmValue(_stong_bit(m, x))


def decide_topological_embedding(m: Manifold4, x: Sequence[int]) -> EmbedVerdict:
    """Is ``x`` represented by a topologically flat embedded sphere?"""
    x = _check(m, x)
    dual = dual_witness(m.form, x)
    if dual is None:
        raise NoDualSphereError(
            "class has no algebraically dual sphere, so the km criterion does not apply"
        )
    witness = s_characteristic_witness(m, x)
    notes = []
    if witness is None:
        km = KmValue(_stong_bit(m, x))
        notes.append(f"s-characteristic; km = (x.x - sigma)/8 + KS = {km} mod 2")
    else:
        km = TRIVIAL
        notes.append("not s-characteristic; km lives in the trivial group")
    return EmbedVerdict(
        embeddable=km.vanishes,
        km=km,
        s_characteristic=witness is None,
        dual_witness=dual,
        s_char_witness=witness,
        notes=tuple(notes),
    )


def smooth_embedding_obstructions(m: Manifold4, x: Sequence[int], budget=None) -> SmoothObstructionReport:
    """Blow down along ``x`` (square +-1) and test the complement."""
    x = _check(m, x)
    s = m.form.norm(x)
    if s not in (1, -1):
        raise PreconditionError(f"blow-down needs self-intersection +-1, got {s}")
    cert = split_off_unit(m.form, x)
    comp = IntegralForm(tuple(r[1:] for r in cert.target.gram[1:]))
    fired = []
    if rokhlin_fires(comp):
        fired.append(Obstruction.Rokhlin)
    if donaldson_fires(comp, budget):
        fired.append(Obstruction.Donaldson)
    return SmoothObstructionReport(comp, tuple(fired), cert)


def km_sum_crosscheck(blocks: Sequence[Block], parts: Sequence[Sequence[int]], table=BLOCK_TABLE) -> int:
    """Sum of per-block km bits of a class given block by block.

    Zero parts contribute nothing; every other part must be s-characteristic
    inside its own block, otherwise additivity is unavailable.
    """
    if len(blocks) != len(parts):
        raise InputError("one part per block required")
    total = 0
    for block, part in zip(blocks, parts):
        piece = connected_sum([block], table)
        part = _check(piece, part)
        if not any(part):
            continue
        if not is_s_characteristic(piece, part):
            raise PreconditionError(f"part {part} is not s-characteristic in {block.token}")
        km = kervaire_milnor(piece, part)
        total += km.bit
    return total % 2


def blow_down_route(m: Manifold4, x: Sequence[int]) -> tuple[bool, IsometryCert]:
    """Decide flat embeddability of a square +-1 class by classification.

    A flat sphere ``x`` with ``x.x = +-1`` splits ``M`` as ``X # (+-CP2)``
    with ``x`` the generator of the second summand, and ``X`` has form
    ``x^perp`` and the same KS.  Conversely, by Freedman, such ``X`` exists
    exactly when ``(x^perp, KS)`` passes the spin constraint, and then the
    homeomorphism carries ``x`` to a smoothly embedded generator.  Returns
    the verdict and the certificate sending ``x`` to that generator.
    """
    x = _check(m, x)
    s = m.form.norm(x)
    if s not in (1, -1):
        raise PreconditionError(f"blow-down needs self-intersection +-1, got {s}")
    cert = split_off_unit(m.form, x)
    comp = IntegralForm(tuple(r[1:] for r in cert.target.gram[1:]))
    try:
        Manifold4.unsafe_model(comp, m.ks)
    except PreconditionError:
        return False, cert
    return True, cert
