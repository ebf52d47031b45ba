"""Reading posets, maps and valuations from JSON; writing JSON and Hasse DOT.

Output is deterministic: keys are sorted, subsets are written as sorted name
lists and nodes keep their index order.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Mapping

from .birkhoff import Valuation
from .errors import ParseError
from .poset import FinitePoset, MonotoneMap, hasse_edges, iter_bits
from .vietoris import Complex, Layer

SCHEMA = "esakia-forge/1"
LABEL_DEPTH = 3     # nested-set labels are written for layers up to this index


# -- reading -------------------------------------------------------------------------

def _load(ref: Any, base_dir: Path | None) -> Any:
    if isinstance(ref, (dict, list)):
        return ref
    if isinstance(ref, (str, Path)):
        path = Path(ref)
        if base_dir is not None and not path.is_absolute():
            path = base_dir / path
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: {exc.msg}", exc.pos) from None
    raise ParseError(f"expected an object or a file name, got {type(ref).__name__}")


def poset_from_json(obj: Any, base_dir: Path | None = None) -> FinitePoset:
    """``{"name": ..., "elements": [...], "leq": [[a, b], ...]}``.

    Elements are reindexed in name order; the relation is closed reflexively
    and transitively.
    """
    obj = _load(obj, base_dir)
    if not isinstance(obj, dict) or "elements" not in obj:
        raise ParseError("poset object needs an 'elements' list")
    elements = [str(e) for e in obj["elements"]]
    pairs = []
    for pair in obj.get("leq", []):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ParseError(f"bad leq entry {pair!r}")
        pairs.append((str(pair[0]), str(pair[1])))
    return FinitePoset.from_relation(elements, pairs, name=obj.get("name"), sort=True)


def map_from_json(obj: Any, base_dir: Path | None = None) -> MonotoneMap:
    """``{"domain": poset-ref, "codomain": poset-ref, "map": {a: b}}``."""
    obj = _load(obj, base_dir)
    for key in ("domain", "codomain", "map"):
        if key not in obj:
            raise ParseError(f"map object needs '{key}'")
    dom = poset_from_json(obj["domain"], base_dir)
    cod = poset_from_json(obj["codomain"], base_dir)
    return MonotoneMap.from_names(dom, cod, {str(k): str(v) for k, v in obj["map"].items()})


def valuation_from_json(frame: FinitePoset, obj: Any,
                        base_dir: Path | None = None) -> Valuation:
    """``{"p": ["a", "b"], ...}``: each variable names the points where it holds."""
    obj = _load(obj, base_dir)
    if not isinstance(obj, dict):
        raise ParseError("valuation must be an object of name lists")
    return Valuation.from_names(frame, {str(k): [str(x) for x in v] for k, v in obj.items()})


def read_json_file(path: str | Path) -> tuple[Any, Path]:
    path = Path(path)
    return _load(path, None), path.parent


# -- JSON shapes ---------------------------------------------------------------------

def poset_dict(P: FinitePoset) -> dict:
    E = P.elements
    return {"name": P.name, "elements": list(E),
            "leq": [[E[i], E[j]] for i, j in hasse_edges(P)]}


def map_dict(f: MonotoneMap) -> dict:
    return {e: f.codomain.elements[v] for e, v in zip(f.domain.elements, f.assignment)}


def mask_names(P: FinitePoset, mask: int) -> list[str]:
    return sorted(P.elements[i] for i in iter_bits(mask))


def layer_dict(layer: Layer) -> dict:
    out = {"index": layer.index, "size": len(layer), "poset": poset_dict(layer.poset)}
    if layer.previous is not None:
        below = layer.previous.poset
        names = layer.poset.elements
        out["provenance"] = {names[i]: mask_names(below, m)
                             for i, m in enumerate(layer.provenance)}
        out["root"] = map_dict(layer.root)
        if layer.index <= LABEL_DEPTH:
            out["labels"] = {names[i]: layer.label(i) for i in range(len(layer))}
    else:
        out["witnesses"] = [{"codomain": poset_dict(w.codomain), "map": map_dict(w)}
                            for w in layer.witnesses]
    return out


def complex_dict(c: Complex) -> dict:
    return {"kind": "complex", "mode": c.mode.value, "sizes": list(c.sizes()),
            "layers": [layer_dict(layer) for layer in c.layers]}


def emit_json(obj: Mapping) -> str:
    doc = {"schema": SCHEMA, **obj}
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# -- DOT -----------------------------------------------------------------------------

def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_dot(P: FinitePoset, title: str | None = None,
             labels: Mapping[int, str] | None = None) -> str:
    """Hasse diagram, bottom to top, one rank per level; node ``n<i>`` is
    element ``i``."""
    lines = [f"digraph {_quote(title or P.name or 'poset')} {{", "  rankdir=BT;",
             "  node [shape=box];"]
    for i, e in enumerate(P.elements):
        text = labels[i] if labels and i in labels else e
        lines.append(f"  n{i} [label={_quote(text)}];")
    by_level: dict[int, list[int]] = {}
    for i, lvl in enumerate(P.levels()):
        by_level.setdefault(lvl, []).append(i)
    for lvl in sorted(by_level):
        nodes = " ".join(f"n{i};" for i in by_level[lvl])
        lines.append(f"  {{ rank=same; {nodes} }}")
    for i, j in hasse_edges(P):
        lines.append(f"  n{i} -> n{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_complex_dot(c: Complex) -> str:
    parts = []
    for layer in c.layers:
        labels = ({i: layer.label(i) for i in range(len(layer))}
                  if layer.index <= LABEL_DEPTH else None)
        parts.append(emit_dot(layer.poset, f"layer {layer.index}", labels))
    return "".join(parts)
