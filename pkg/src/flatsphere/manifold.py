"""Simply connected closed topological 4-manifolds as (form, KS) pairs.

By Freedman's classification such a manifold is determined up to
homeomorphism by its intersection form and its Kirby-Siebenmann invariant,
so that pair is the whole model.  Manifolds built by connected sum also
remember their blocks, which fixes how class coordinates are laid out.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import InputError, InternalError, PreconditionError
from .isometry import DEFAULT_NODE_BUDGET, IsometryCert, is_diagonalizable_definite, isometric
from .lattice import IntegralForm, direct_sum, standard_form, zero_form


class Block(enum.Enum):
    CP2 = "CP2"
    CP2_bar = "-CP2"
    StarCP2 = "*CP2"
    StarCP2_bar = "-*CP2"
    E8_manifold = "E8"
    E8_bar_manifold = "-E8"
    S2xS2 = "S2xS2"
    S4 = "S4"

    @property
    def token(self) -> str:
        return self.value


# (form kind, KS); E8 manifolds are spin of signature +-8, so KS = 1
BLOCK_TABLE: Mapping[Block, tuple[str | None, int]] = {
    Block.CP2: ("one_plus", 0),
    Block.CP2_bar: ("one_minus", 0),
    Block.StarCP2: ("one_plus", 1),
    Block.StarCP2_bar: ("one_minus", 1),
    Block.E8_manifold: ("e8", 1),
    Block.E8_bar_manifold: ("e8_neg", 1),
    Block.S2xS2: ("hyperbolic", 0),
    Block.S4: (None, 0),
}


def block_form(block: Block, table: Mapping[Block, tuple[str | None, int]] = BLOCK_TABLE) -> IntegralForm:
    kind = table[block][0]
    return zero_form() if kind is None else standard_form(kind)


def _check_spin(form: IntegralForm, ks: int) -> None:
    if form.rank and form.is_even:
        sig = form.signature
        if sig % 8:
            raise InternalError(f"even unimodular form with signature {sig}")
        if ks != (sig // 8) % 2:
            raise PreconditionError(
                f"spin manifold with signature {sig} must have KS = {(sig // 8) % 2}, got {ks}"
            )
    elif form.rank == 0 and ks:
        raise PreconditionError("a homotopy 4-sphere has KS = 0")


@dataclass(frozen=True)
class Manifold4:
    form: IntegralForm
    ks: int
    blocks: tuple[Block, ...] | None = None

    def __post_init__(self):
        if self.ks not in (0, 1):
            raise InputError("KS is a bit")
        if not self.form.is_unimodular:
            raise PreconditionError("intersection form of a closed manifold must be unimodular")
        _check_spin(self.form, self.ks)

    @classmethod
    def unsafe_model(cls, form: IntegralForm, ks: int) -> Manifold4:
        """A (form, KS) pair not built from the block table.

        Still subject to unimodularity and the spin constraint.
        """
        return cls(form, ks)

    @property
    def rank(self) -> int:
        return self.form.rank

    @property
    def signature(self) -> int:
        return self.form.signature

    def block_offsets(self) -> list[tuple[Block, int, int]]:
        """``(block, start, stop)`` coordinate slices, one per block."""
        if self.blocks is None:
            raise InputError("manifold was not built as a connected sum")
        out, pos = [], 0
        for b in self.blocks:
            r = block_form(b).rank
            out.append((b, pos, pos + r))
            pos += r
        return out

    def describe(self) -> str:
        if self.blocks is None:
            return f"model(rank {self.rank}, KS {self.ks})"
        return " # ".join(b.token for b in self.blocks) if self.blocks else "S4"


def connected_sum(
    blocks: Sequence[Block], table: Mapping[Block, tuple[str | None, int]] = BLOCK_TABLE
) -> Manifold4:
    forms = [block_form(b, table) for b in blocks]
    form = direct_sum(*forms) if forms else zero_form()
    ks = sum(table[b][1] for b in blocks) % 2
    return Manifold4(form, ks, tuple(blocks))


def homeomorphic(m: Manifold4, n: Manifold4, budget=None) -> IsometryCert | None:
    """Form isometry realising a homeomorphism ``m -> n``, or None.

    Raises ``CertificateUnavailable`` if the invariants agree but the
    indefinite certificate search comes up empty.
    """
    if m.ks != n.ks or m.rank != n.rank:
        return None
    return isometric(m.form, n.form, DEFAULT_NODE_BUDGET if budget is None else budget)


class Obstruction(str, enum.Enum):
    KS_nonzero = "KS_nonzero"
    Rokhlin = "Rokhlin"
    Donaldson = "Donaldson"


def rokhlin_fires(form: IntegralForm) -> bool:
    return form.rank > 0 and form.is_even and form.signature % 16 != 0


def donaldson_fires(form: IntegralForm, budget=None) -> bool:
    return form.is_definite and not is_diagonalizable_definite(form, budget)[0]


def smooth_existence_obstructions(m: Manifold4, budget=None) -> list[Obstruction]:
    """Obstructions to a smooth structure.  Empty means inconclusive."""
    fired = []
    if m.ks:
        fired.append(Obstruction.KS_nonzero)
    if rokhlin_fires(m.form):
        fired.append(Obstruction.Rokhlin)
    if donaldson_fires(m.form, budget):
        fired.append(Obstruction.Donaldson)
    return fired
