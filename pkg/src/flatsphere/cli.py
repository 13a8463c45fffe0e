"""Command line interface.

Manifolds are written as connected sums of blocks, e.g. ``8xCP2 # -CP2``;
classes as comma separated coordinates in block order.  Exit codes:
0 for any verdict, 2 for input errors, 3 for failed preconditions,
4 for exhausted search budgets.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Mapping

from .embedding import decide_topological_embedding, smooth_embedding_obstructions
from .errors import CertificateUnavailable, FlatSphereError, InputError
from .isometry import classify_unimodular, is_diagonalizable_definite, isometric_definite
from .lattice import E8_GRAM, IntegralForm, orthogonal_complement
from .manifold import BLOCK_TABLE, Block, Manifold4, connected_sum, homeomorphic
from .reproduce import run_suite

_TOKENS = {b.token: b for b in Block}
_MULT = re.compile(r"^(\d+)\s*x\s*(\S+)$")


def parse_manifold(text: str, table: Mapping = BLOCK_TABLE) -> Manifold4:
    """Parse ``8xCP2 # -*CP2`` style connected sums (case-sensitive)."""
    blocks = []
    for raw in text.split("#"):
        tok = raw.strip()
        if not tok:
            raise InputError(f"empty block in {text!r}")
        count = 1
        m = _MULT.match(tok)
        if m and m.group(2) in _TOKENS:
            count, tok = int(m.group(1)), m.group(2)
        if tok not in _TOKENS:
            raise InputError(f"unknown block {tok!r}; expected one of {', '.join(_TOKENS)}")
        blocks += [_TOKENS[tok]] * count
    return connected_sum(blocks, table)


def parse_class(text: str, m: Manifold4) -> tuple[int, ...]:
    text = text.strip()
    try:
        coords = tuple(int(t) for t in text.split(",")) if text else ()
    except ValueError:
        raise InputError(f"class must be comma separated integers, got {text!r}") from None
    if len(coords) != m.rank:
        raise InputError(f"class has {len(coords)} coordinates but b2 = {m.rank}")
    return coords


def _matrix(m) -> list[list[int]]:
    return [list(r) for r in m]


def embed_topological_report(manifold: str, cls: str) -> dict:
    m = parse_manifold(manifold)
    x = parse_class(cls, m)
    v = decide_topological_embedding(m, x)
    return {
        "manifold": manifold,
        "class": list(x),
        "s_characteristic": v.s_characteristic,
        "km": str(v.km),
        "embeddable": v.embeddable,
        "dual_witness": list(v.dual_witness),
        "s_char_witness": None if v.s_char_witness is None else list(v.s_char_witness),
    }


def embed_smooth_report(manifold: str, cls: str) -> dict:
    m = parse_manifold(manifold)
    x = parse_class(cls, m)
    rep = smooth_embedding_obstructions(m, x)
    return {
        "complement": classify_unimodular(rep.blow_down_form).to_dict(),
        "fired": [o.value for o in rep.fired],
        "conclusive": rep.conclusive,
    }


def homeo_report(a: str, b: str) -> dict:
    ma, mb = parse_manifold(a), parse_manifold(b)
    out = {"manifold_a": a, "manifold_b": b, "ks_a": ma.ks, "ks_b": mb.ks}
    try:
        cert = homeomorphic(ma, mb)
    except CertificateUnavailable:
        out.update(homeomorphic=True, certificate=None)
        return out
    out["homeomorphic"] = cert is not None
    out["certificate"] = None if cert is None else _matrix(cert.matrix)
    return out


def complement_report(manifold: str, cls: str) -> dict:
    m = parse_manifold(manifold)
    x = parse_class(cls, m)
    comp, basis = orthogonal_complement(m.form, x)
    out = {
        "manifold": manifold,
        "class": list(x),
        "basis": _matrix(basis),
        "gram": _matrix(comp.gram),
        "description": None,
        "isometric_to_e8": None,
        "e8_certificate": None,
        "diagonalizable": None,
    }
    if comp.is_unimodular:
        out["description"] = classify_unimodular(comp).to_dict()
    if comp.is_definite and comp.is_unimodular:
        out["diagonalizable"] = is_diagonalizable_definite(comp)[0]
        if comp.rank == 8:
            e8 = IntegralForm(E8_GRAM if comp.signature > 0 else tuple(tuple(-v for v in r) for r in E8_GRAM))
            cert = isometric_definite(comp, e8)
            out["isometric_to_e8"] = cert is not None
            out["e8_certificate"] = None if cert is None else _matrix(cert.matrix)
    return out


def _fmt_matrix(m) -> str:
    if not m:
        return "  []"
    w = max(len(str(v)) for r in m for v in r)
    return "\n".join("  [" + " ".join(str(v).rjust(w) for v in r) + "]" for r in m)


def _text_embed_topological(r: dict) -> str:
    lines = [
        f"manifold: {r['manifold']}",
        f"class: ({','.join(map(str, r['class']))})",
        f"s-characteristic: {'yes' if r['s_characteristic'] else 'no'}",
    ]
    if r["s_char_witness"] is not None:
        lines.append(f"  violating class: {tuple(r['s_char_witness'])}")
    lines.append(f"algebraically dual sphere: {tuple(r['dual_witness'])}")
    lines.append(f"km: {r['km']}" + ("  (trivial group)" if r["km"] == "trivial" else "  (in Z/2)"))
    verdict = "topologically flat embedded sphere exists" if r["embeddable"] else "NO topologically flat embedded sphere"
    lines.append(f"verdict: {verdict}")
    return "\n".join(lines)


def _desc_str(d: dict) -> str:
    if d["kind"] == "odd_indefinite":
        return f"{d['n_plus']}<1> + {d['n_minus']}<-1>"
    if d["kind"] == "even_indefinite":
        return f"{d['e8_copies']} E8 + {d['hyperbolic']} H"
    if d["kind"] == "zero":
        return "rank 0"
    return f"definite {d['parity']}, rank {d['rank']}, signature {d['signature']}"


def _text_embed_smooth(r: dict) -> str:
    lines = [f"blow-down complement: {_desc_str(r['complement'])}"]
    if r["fired"]:
        lines.append("obstructions fired: " + ", ".join(r["fired"]))
        lines.append("verdict: no smoothly embedded sphere")
    else:
        lines.append("obstructions fired: none")
        lines.append("verdict: inconclusive")
    return "\n".join(lines)


def _text_homeo(r: dict) -> str:
    lines = [f"KS({r['manifold_a']}) = {r['ks_a']}", f"KS({r['manifold_b']}) = {r['ks_b']}"]
    if not r["homeomorphic"]:
        lines.append("not homeomorphic")
    else:
        lines.append("homeomorphic")
        if r["certificate"] is None:
            lines.append("certificate: not constructed (forms isometric by classification)")
        else:
            lines.append("form isometry (source -> target coordinates):")
            lines.append(_fmt_matrix(r["certificate"]))
    return "\n".join(lines)


def _text_complement(r: dict) -> str:
    lines = ["complement Gram matrix:", _fmt_matrix(r["gram"])]
    if r["description"] is not None:
        lines.append(f"canonical description: {_desc_str(r['description'])}")
    if r["diagonalizable"] is not None:
        lines.append(f"diagonalizable: {'yes' if r['diagonalizable'] else 'no'}")
    if r["isometric_to_e8"] is not None:
        lines.append("isometric to E8" if r["isometric_to_e8"] else "not isometric to E8")
        if r["e8_certificate"] is not None:
            lines.append(_fmt_matrix(r["e8_certificate"]))
    return "\n".join(lines)


def run_paper(table: Mapping = BLOCK_TABLE, out=None) -> int:
    out = out or sys.stdout
    checks = run_suite(table)
    for c in checks:
        print(f"{c.name} {'PASS' if c.passed else 'FAIL'}  {c.detail}", file=out)
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="flatsphere",
        description="Embedded spheres in simply connected 4-manifolds from intersection forms.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def with_class(name, help):
        s = sub.add_parser(name, help=help)
        s.add_argument("manifold", help="connected sum, e.g. '8xCP2 # -CP2'")
        s.add_argument("cls", metavar="class", help="coordinates, e.g. '1,1,1,1,1,1,1,1,3'")
        s.add_argument("--json", action="store_true")
        return s

    with_class("embed-topological", "decide topologically flat embeddability")
    with_class("embed-smooth", "blow-down obstructions to a smooth embedding")
    with_class("complement", "orthogonal complement of a class")
    h = sub.add_parser("homeo", help="decide homeomorphism of two manifolds")
    h.add_argument("manifold_a")
    h.add_argument("manifold_b")
    h.add_argument("--json", action="store_true")
    sub.add_parser("paper", help="reproduce the three theorems and the remark")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "paper":
        return run_paper()
    handlers = {
        "embed-topological": (lambda: embed_topological_report(args.manifold, args.cls), _text_embed_topological),
        "embed-smooth": (lambda: embed_smooth_report(args.manifold, args.cls), _text_embed_smooth),
        "complement": (lambda: complement_report(args.manifold, args.cls), _text_complement),
        "homeo": (lambda: homeo_report(args.manifold_a, args.manifold_b), _text_homeo),
    }
    build, render = handlers[args.command]
    try:
        report = build()
    except FlatSphereError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        print(render(report))
    return 0


if __name__ == "__main__":
    sys.exit(main())
