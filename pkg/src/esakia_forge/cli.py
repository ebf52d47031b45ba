"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (its class name goes to
stderr), 2 when a size cap is exceeded.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import formats
from .birkhoff import eval_formula, refutation, upsets
from .config import ENV_CAP, default_config, get_config, set_config
from .errors import EsakiaError, SizeLimitExceeded, UnknownSubcommand, UsageError
from .formulas import godel_chain_oracle, parse, to_text, variables
from .inquisitive import (is_regularly_generated, m_complex, regular_elements)
from .modes import VarietyMode
from .poset import FinitePoset, MonotoneMap, free_dl_dual, is_antichain
from .suites import SUITES, run_suite
from .universal import n_universal_model, stability_table
from .varieties import boolean_step, godel_coproduct, lc_free
from .vietoris import build_complex, product_complex, pullback_complex

COMMANDS = ("poset", "complex", "variety", "coproduct-godel", "product", "pullback",
            "universal", "stability", "inquisitive", "regular", "free", "eval",
            "oracle", "check")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        if "invalid choice" in message and "command" in message:
            raise UnknownSubcommand(message)
        raise UsageError(message)


class _Output:
    """Where results go: ``--out`` or stdout."""

    def __init__(self, out: str | None):
        self.out = out

    def write(self, text: str) -> None:
        if self.out:
            Path(self.out).write_text(text)
        else:
            sys.stdout.write(text)


def _emit_arg(p: argparse.ArgumentParser, default: str = "json") -> None:
    p.add_argument("--emit", choices=("json", "dot"), default=default,
                   help=f"output format (default {default})")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", help="write the result to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="esakia-forge",
                  description="Finite step-by-step constructions of free Heyting "
                              "algebras and their duals.",
                  epilog=f"The environment variable {ENV_CAP} overrides the subset "
                         f"search cap (default {default_config().search_cap}).")
    top.add_argument("--search-cap", type=int, help="subset search node cap")
    top.add_argument("--layer-cap", type=int, help="largest layer size allowed")
    top.add_argument("--valuation-cap", type=int, help="most valuations swept")
    sub = top.add_subparsers(dest="command", required=True, metavar="command",
                             parser_class=_Parser)

    p = sub.add_parser("poset", help="normalise a poset file and report its upsets")
    p.add_argument("--poset", required=True, help="JSON poset")
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("complex", help="iterated step layers")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    b = csub.add_parser("build", help="build layers 0..depth")
    b.add_argument("--poset", required=True, help="JSON poset")
    b.add_argument("--witness", action="append", default=None,
                   help="'terminal' or a JSON map out of the poset; repeatable")
    b.add_argument("--depth", type=int, required=True)
    b.add_argument("--mode", choices=[m.value for m in VarietyMode], default="ha")
    _emit_arg(b)
    _common(b)

    p = sub.add_parser("variety", help="restricted steps")
    vsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = vsub.add_parser("step", help="first restricted layer: stage 1 for bool, "
                                     "stage 2 for kc and lc")
    v.add_argument("--mode", choices=("bool", "kc", "lc"), required=True)
    v.add_argument("--poset", required=True, help="JSON poset")
    _emit_arg(v)
    _common(v)

    p = sub.add_parser("coproduct-godel", help="dual of the coproduct of two Gödel "
                                               "algebras given by prelinear posets")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("product", help="complex over a product with both projections")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--depth", type=int, default=1)
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("pullback", help="complex over the pullback of two p-morphisms")
    p.add_argument("--left", required=True, help="JSON map into the common codomain")
    p.add_argument("--right", required=True, help="JSON map into the common codomain")
    p.add_argument("--depth", type=int, default=1)
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("universal", help="stable part of a layer over 2^n")
    p.add_argument("--gens", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("stability", help="prestable and stable flags per layer")
    p.add_argument("--poset", required=True)
    p.add_argument("--depth", type=int, required=True)
    _common(p)

    p = sub.add_parser("inquisitive", help="M-complex over a discrete set")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--depth", type=int, default=1)
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("regular", help="regular upsets and regular generation")
    p.add_argument("--poset", required=True)
    _common(p)

    p = sub.add_parser("free", help="dual of a free algebra on n generators")
    p.add_argument("--logic", choices=("ipc", "lc"), required=True)
    p.add_argument("--gens", type=int, required=True)
    p.add_argument("--depth", type=int, default=2,
                   help="layer to report for ipc (lc always stops at layer 2)")
    _emit_arg(p)
    _common(p)

    p = sub.add_parser("eval", help="evaluate a formula on a frame")
    p.add_argument("--frame", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--valuation", help="JSON object of name lists; without it the "
                                       "formula is checked under every valuation")
    _common(p)

    p = sub.add_parser("oracle", help="independent reference computations")
    osub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    o = osub.add_parser("godel", help="free Gödel algebra inside products of chains")
    o.add_argument("--vars", type=int, required=True)
    o.add_argument("--max-chain", type=int, default=None)
    _common(o)

    p = sub.add_parser("check", help="run a reproducibility suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), required=True)
    p.add_argument("--max-size", type=int, default=None,
                   help="largest base size for suites that sweep posets")
    _common(p)
    return top


# -- handlers -----------------------------------------------------------------------------

def _poset(path: str) -> FinitePoset:
    obj, base_dir = formats.read_json_file(path)
    return formats.poset_from_json(obj, base_dir)


def _map(path: str) -> MonotoneMap:
    obj, base_dir = formats.read_json_file(path)
    return formats.map_from_json(obj, base_dir)


def _complex_text(c, emit: str, extra: dict | None = None) -> str:
    if emit == "dot":
        return formats.emit_complex_dot(c)
    return formats.emit_json({**formats.complex_dict(c), **(extra or {})})


def _poset_text(P: FinitePoset, emit: str, extra: dict, labels=None) -> str:
    if emit == "dot":
        return formats.emit_dot(P, labels=labels)
    return formats.emit_json({"poset": formats.poset_dict(P), **extra})


def cmd_poset(a) -> str:
    P = _poset(a.poset)
    return _poset_text(P, a.emit, {"kind": "poset", "size": len(P),
                                   "upsets": len(upsets(P)),
                                   "antichain": is_antichain(P)})


def cmd_complex(a) -> str:
    P = _poset(a.poset)
    specs = a.witness or ["terminal"]
    ws = [MonotoneMap.terminal(P) if s == "terminal" else _map(s) for s in specs]
    if any(w.domain != P for w in ws):
        from .errors import IncompatibleMaps
        raise IncompatibleMaps("every witness must start at the given poset")
    return _complex_text(build_complex(P, ws, a.depth, a.mode), a.emit)


def cmd_variety(a) -> str:
    P = _poset(a.poset)
    if a.mode == "bool":
        layer = boolean_step(P)
    else:
        layer = build_complex(P, None, 2, a.mode)[2]
    labels = {i: layer.label(i) for i in range(len(layer))}
    if a.emit == "dot":
        return formats.emit_dot(layer.poset, f"{a.mode} step", labels)
    return formats.emit_json({"kind": "variety-step", "mode": a.mode,
                              "layer": formats.layer_dict(layer)})


def cmd_coproduct(a) -> str:
    free = godel_coproduct(_poset(a.left), _poset(a.right))
    return _poset_text(free.poset, a.emit,
                       {"kind": "godel-coproduct", "upsets": len(upsets(free.poset)),
                        "sizes": list(free.complex.sizes()),
                        "layer": formats.layer_dict(free.layer)})


def _projected_text(pc, emit: str, kind: str) -> str:
    extra = {"kind": kind,
             "left": [formats.map_dict(m) for m in pc.left],
             "right": [formats.map_dict(m) for m in pc.right]}
    return _complex_text(pc.complex, emit, extra)


def cmd_product(a) -> str:
    return _projected_text(product_complex(_poset(a.left), _poset(a.right), a.depth),
                           a.emit, "product-complex")


def cmd_pullback(a) -> str:
    return _projected_text(pullback_complex(_map(a.left), _map(a.right), a.depth),
                           a.emit, "pullback-complex")


def cmd_universal(a) -> str:
    um = n_universal_model(a.gens, a.depth)
    return _poset_text(um.poset, a.emit, {"kind": "universal-model", "gens": a.gens,
                                          "depth": a.depth, "size": len(um.poset)})


def cmd_stability(a) -> str:
    c = build_complex(_poset(a.poset), None, a.depth)
    t = stability_table(c)

    def flags(row):
        return [None if v is None else bool(v) for v in row]

    layers = [{"index": i, "elements": list(c[i].poset.elements),
               "prestable": flags(t.prestable[i]), "stable": flags(t.stable[i])}
              for i in range(c.depth + 1)]
    return formats.emit_json({"kind": "stability", "known_through": t.known_through,
                              "layers": layers})


def cmd_inquisitive(a) -> str:
    X = FinitePoset.antichain(a.size, [chr(ord("a") + i) for i in range(a.size)]
                              if a.size <= 26 else None)
    mc = m_complex(X, a.depth)
    return _complex_text(mc.complex, a.emit, {"kind": "m-complex", "size": a.size})


def cmd_regular(a) -> str:
    P = _poset(a.poset)
    regs = regular_elements(P)
    return formats.emit_json({
        "kind": "regular", "poset": formats.poset_dict(P),
        "regular": [formats.mask_names(P, U) for U in regs],
        "upsets": len(upsets(P)), "regularly_generated": is_regularly_generated(P)})


def cmd_free(a) -> str:
    base, gens = free_dl_dual(a.gens)
    if a.logic == "lc":
        free = lc_free(base)
        layer, c = free.layer, free.complex
    else:
        c = build_complex(base, None, a.depth)
        layer = c[a.depth]
    extra = {"kind": "free", "logic": a.logic, "gens": a.gens, "layer": layer.index,
             "sizes": list(c.sizes()), "upsets": len(upsets(layer.poset))}
    return _poset_text(layer.poset, a.emit, extra)


def cmd_eval(a) -> str:
    P = _poset(a.frame)
    phi = parse(a.formula)
    out = {"kind": "eval", "formula": to_text(phi)}
    if a.valuation:
        obj, base_dir = formats.read_json_file(a.valuation)
        v = formats.valuation_from_json(P, obj, base_dir)
        val = eval_formula(phi, v)
        out.update(value=formats.mask_names(P, val), holds=val == P.full)
    else:
        bad = refutation(P, phi)
        out["valid"] = bad is None
        if bad is not None:
            out["refutation"] = {k: formats.mask_names(P, U)
                                 for k, U in sorted(bad.assignment.items())}
    out["variables"] = sorted(variables(phi))
    return formats.emit_json(out)


def cmd_oracle(a) -> str:
    o = godel_chain_oracle(a.vars, a.max_chain)
    return formats.emit_json({"kind": "godel-chain-oracle", "vars": a.vars,
                              "components": len(o.components), "count": o.count})


def cmd_check(a) -> tuple[str, int]:
    names = list(SUITES) if a.suite == "all" else [a.suite]
    parts, status = [], 0
    for name in names:
        rep = run_suite(name, a.max_size)
        parts.append(rep.text())
        status = status or (0 if rep.passed else 1)
    return "".join(parts), status


HANDLERS = {"poset": cmd_poset, "complex": cmd_complex, "variety": cmd_variety,
            "coproduct-godel": cmd_coproduct, "product": cmd_product,
            "pullback": cmd_pullback, "universal": cmd_universal,
            "stability": cmd_stability, "inquisitive": cmd_inquisitive,
            "regular": cmd_regular, "free": cmd_free, "eval": cmd_eval,
            "oracle": cmd_oracle, "check": cmd_check}


def dispatch(argv: Sequence[str] | None = None) -> int:
    before = get_config()
    try:
        a = build_parser().parse_args(argv)
        set_config(before.with_overrides(search_cap=a.search_cap, layer_cap=a.layer_cap,
                                         valuation_cap=a.valuation_cap))
        result = HANDLERS[a.command](a)
        text, status = result if isinstance(result, tuple) else (result, 0)
        _Output(getattr(a, "out", None)).write(text)
        return status
    except SizeLimitExceeded as exc:
        print(f"SizeLimitExceeded: {exc}", file=sys.stderr)
        return 2
    except (EsakiaError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    finally:
        set_config(before)


def main() -> None:
    sys.exit(dispatch())
