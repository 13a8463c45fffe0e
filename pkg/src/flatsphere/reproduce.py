"""Fixed reproduction suite for the three embedding theorems and the
blow-down remark about ``x = (1,...,1,3)`` in ``8CP2 # -CP2``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from . import exact_linalg as xl
from .embedding import (
    decide_topological_embedding,
    kervaire_milnor,
    km_sum_crosscheck,
    s_characteristic_witness,
    smooth_embedding_obstructions,
)
from .errors import FlatSphereError
from .isometry import isometry_pinned
from .lattice import E8_GRAM, complement_basis
from .manifold import BLOCK_TABLE, Block, Obstruction, connected_sum, homeomorphic

X = (1,) * 8 + (3,)
Z = (1, 1) + (0,) * 8


def e8_frame_in_complement() -> list[tuple[int, ...]]:
    """Basis of ``x^perp`` in ``8<1> + <-1>`` with Gram matrix exactly E8.

    ``f_j = e_{j+1} - e_j`` for j = 1..7 and ``f_8 = -(e_6 + e_7 + e_8 + e_9)``.
    The variant ``e_9 - e_6 - e_7 - e_8`` has the same Gram matrix but pairs
    to -6 with x; it is orthogonal to (1,...,1,-3) instead.
    """
    frame = []
    for j in range(7):
        v = [0] * 9
        v[j + 1], v[j] = 1, -1
        frame.append(tuple(v))
    frame.append((0, 0, 0, 0, 0, -1, -1, -1, -1))
    return frame


SUITE_NAMES = ("Thm1", "Thm2", "Thm3", "Remark", "km(y)=1", "km(y')=1", "km(x')=0")


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str


def _run(name: str, fn: Callable[[], str]) -> Check:
    try:
        return Check(name, True, fn())
    except AssertionError as exc:
        return Check(name, False, str(exc) or "assertion failed")
    except FlatSphereError as exc:
        return Check(name, False, f"{type(exc).__name__}: {exc}")


def run_suite(table: Mapping[Block, tuple[str | None, int]] = BLOCK_TABLE) -> list[Check]:
    cp2, bar, star_bar, star = Block.CP2, Block.CP2_bar, Block.StarCP2_bar, Block.StarCP2
    try:
        m = connected_sum([cp2] * 8 + [bar], table)
        m_fake = connected_sum([cp2] * 8 + [star_bar], table)
        e8_sum = connected_sum([Block.E8_manifold, bar], table)
        m_plus = connected_sum([cp2] * 9 + [bar], table)
    except FlatSphereError as exc:
        return [Check(name, False, f"block table rejected: {exc}") for name in SUITE_NAMES]
    x0 = (0,) + X

    def thm1():
        v = decide_topological_embedding(m, X)
        assert not v.embeddable and v.km.bit == 1, f"verdict {v.embeddable}, km {v.km}"
        assert m.ks == 0 and e8_sum.ks == 1, f"KS {m.ks} vs {e8_sum.ks}"
        assert homeomorphic(m, e8_sum) is None, "M should not be homeomorphic to E8 # -CP2"
        return "km(x) = 1, not flatly embeddable; KS(M)=0, KS(E8#-CP2)=1"

    def thm2():
        v = decide_topological_embedding(m_fake, X)
        assert v.embeddable and v.km.bit == 0, f"verdict {v.embeddable}, km {v.km}"
        target = (0,) * 8 + (1,)
        cert = isometry_pinned(m_fake.form, X, e8_sum.form, target)
        assert cert is not None, "no pinned isometry x' -> (0,1)"
        cert.verify()
        assert cert.apply(X) == target
        assert m_fake.ks == e8_sum.ks == 1, f"KS {m_fake.ks} vs {e8_sum.ks}"
        assert homeomorphic(m_fake, e8_sum) is not None, "M' should be homeomorphic to E8 # -CP2"
        return "km(x') = 0; pinned isometry x' -> (0,1) verified; M' = E8 # -CP2"

    def thm3():
        w = s_characteristic_witness(m_plus, x0)
        assert w == Z, f"witness {w}"
        assert m_plus.form.norm(Z) == 2 and m_plus.form.inner(Z, x0) == 1
        v = decide_topological_embedding(m_plus, x0)
        assert v.embeddable and v.km.trivial_group, f"verdict {v.embeddable}, km {v.km}"
        rep = smooth_embedding_obstructions(m_plus, x0)
        assert Obstruction.Donaldson in rep.fired, f"fired {rep.fired}"
        return "(0,x) not s-characteristic via z; km trivial; Donaldson fires on E8+<1>"

    def remark():
        frame = e8_frame_in_complement()
        basis = complement_basis(m.form, X)
        coords = [xl.solve_integer(basis, f) for f in frame]
        assert all(c is not None for c in coords), "frame is not inside x^perp"
        assert abs(xl.det(xl.from_columns(coords, 8))) == 1, "frame does not span x^perp"
        gram = m.form.restrict(xl.from_columns(frame, 9)).gram
        assert gram == E8_GRAM, "frame Gram matrix differs from E8"
        rep = smooth_embedding_obstructions(m, X)
        comp = rep.blow_down_form
        assert comp.is_even and comp.signature == 8
        assert Obstruction.Rokhlin in rep.fired, f"fired {rep.fired}"
        return "x^perp has Gram E8 in the f-frame; even, sigma 8; Rokhlin fires"

    def km_y():
        k = kervaire_milnor(connected_sum([bar], table), (3,))
        assert k.bit == 1, f"km = {k}"
        return "(-9 - (-1))/8 + 0 = -1 = 1 mod 2"

    def km_y_star():
        k = kervaire_milnor(connected_sum([star], table), (1,))
        assert k.bit == 1, f"km = {k}"
        return "(1 - 1)/8 + 1 = 1"

    def km_x_fake():
        direct = kervaire_milnor(m_fake, X)
        blocks = [star] + [cp2] * 7 + [bar]
        parts = [(1,)] * 8 + [(3,)]
        summed = km_sum_crosscheck(blocks, parts, table)
        assembled = kervaire_milnor(connected_sum(blocks, table), X)
        assert direct.bit == 0 and summed == 0 and assembled.bit == 0, (
            f"direct {direct}, summed {summed}, assembled {assembled}"
        )
        return "direct formula 0; block sum 1 + 0 + 1 = 0"

    fns = (thm1, thm2, thm3, remark, km_y, km_y_star, km_x_fake)
    return [_run(name, fn) for name, fn in zip(SUITE_NAMES, fns)]
