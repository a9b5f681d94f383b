"""JSON round-tripping and DOT/TikZ diagram export.

All output is deterministic for a fixed input: arrow lists are sorted
lexicographically, node and edge order in diagrams is fixed, and nothing
depends on hash order.  Model-structure JSON omits identity arrows on
write and implies them on read.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .core import ArrowSet, FiniteLattice, from_leq_pairs, make_chain, make_product
from .model import ModelStructure, bifibrant_objects
from .transfer import TransferSystem


def lattice_to_json(l: FiniteLattice) -> dict:
    return l.spec


def lattice_from_json(data: dict) -> FiniteLattice:
    kind = data.get("kind")
    if kind == "chain":
        return make_chain(int(data["n"]))
    if kind == "product":
        factors = [lattice_from_json(f) for f in data["factors"]]
        if not factors:
            raise ValueError("product needs at least one factor")
        out = factors[0]
        for f in factors[1:]:
            out = make_product(out, f)
        return out
    if kind == "explicit":
        pairs = [tuple(p) for p in data["leq"]]
        return from_leq_pairs(int(data["size"]), pairs)
    raise ValueError(f"unknown lattice kind {kind!r}")


def _sorted_pairs(arrows) -> list[list[int]]:
    return [list(a) for a in sorted(arrows)]


def transfer_to_json(t: TransferSystem) -> dict:
    return {
        "lattice": lattice_to_json(t.lattice),
        "rel": _sorted_pairs(t.rel.pairs()),
    }


def transfer_from_json(data: dict) -> TransferSystem:
    l = lattice_from_json(data["lattice"])
    rel = ArrowSet.from_pairs(l, [tuple(p) for p in data["rel"]],
                              include_identities=True)
    return TransferSystem(l, rel)


def model_to_json(m: ModelStructure) -> dict:
    return {
        "lattice": lattice_to_json(m.lattice),
        "weq": _sorted_pairs(m.w.nonidentity_pairs()),
        "cof": _sorted_pairs(m.c.nonidentity_pairs()),
        "fib": _sorted_pairs(m.f.nonidentity_pairs()),
    }


def model_from_json(data: dict) -> ModelStructure:
    l = lattice_from_json(data["lattice"])
    def cls(key: str) -> ArrowSet:
        return ArrowSet.from_pairs(l, [tuple(p) for p in data[key]],
                                   include_identities=True)
    return ModelStructure(l, cls("weq"), cls("cof"), cls("fib"))


def dumps(data: dict) -> str:
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class ExportConfig:
    """Rendering options for diagram export."""

    fmt: str = "dot"  # dot | tikz | json
    weq_color: str = "orange"
    bifibrant_color: str = "blue"
    name: str = "structure"


def transfer_to_dot(t: TransferSystem, name: str = "transfer") -> str:
    lines = [f"digraph {name} {{"]
    for x in range(t.lattice.size):
        lines.append(f"  {x};")
    for (x, y) in sorted(t.pairs()):
        lines.append(f"  {x} -> {y};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def model_to_dot(m: ModelStructure, config: Optional[ExportConfig] = None) -> str:
    """One structure as a digraph: weak equivalences highlighted, bifibrant
    objects emphasized, cofibration/fibration markers on edge heads/tails."""
    cfg = config or ExportConfig()
    bif = set(bifibrant_objects(m))
    lines = [f"digraph {cfg.name} {{"]
    for x in range(m.lattice.size):
        if x in bif:
            lines.append(
                f'  {x} [color={cfg.bifibrant_color}, penwidth=2, fontsize=16];')
        else:
            lines.append(f"  {x};")
    for (x, y) in sorted(m.lattice.arrows):
        if x == y:
            continue
        attrs = []
        if (x, y) in m.w:
            attrs.append(f"color={cfg.weq_color}")
        marks = ""
        if (x, y) in m.c:
            marks += "c"
        if (x, y) in m.f:
            marks += "f"
        if marks:
            attrs.append(f'label="{marks}"')
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {x} -> {y}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def model_to_tikz(m: ModelStructure, config: Optional[ExportConfig] = None) -> str:
    cfg = config or ExportConfig()
    bif = set(bifibrant_objects(m))
    lines = ["\\begin{tikzpicture}"]
    for x in range(m.lattice.size):
        style = f"fill={cfg.bifibrant_color}!30" if x in bif else "fill=black!10"
        lines.append(
            f"  \\node[circle, draw, {style}] (n{x}) at ({x}, 0) {{{x}}};")
    for (x, y) in sorted(m.lattice.arrows):
        if x == y:
            continue
        opts = []
        if (x, y) in m.w:
            opts.append(cfg.weq_color)
        if (x, y) in m.c:
            opts.append("dashed")
        if (x, y) in m.f:
            opts.append("double" if (x, y) in m.c else "thick")
        bend = "bend left" if y - x > 1 else ""
        opt = ", ".join(o for o in [bend] + opts if o)
        lines.append(f"  \\draw[->, {opt}] (n{x}) to (n{y});")
    lines.append("\\end{tikzpicture}")
    return "\n".join(lines) + "\n"


def export_model(m: ModelStructure, config: Optional[ExportConfig] = None) -> str:
    cfg = config or ExportConfig()
    if cfg.fmt == "dot":
        return model_to_dot(m, cfg)
    if cfg.fmt == "tikz":
        return model_to_tikz(m, cfg)
    if cfg.fmt == "json":
        return dumps(model_to_json(m)) + "\n"
    raise ValueError(f"unknown export format {cfg.fmt!r}")


def graph_to_dot(edges, node_count: int, name: str = "localizations",
                 labels: bool = True) -> str:
    lines = [f"digraph {name} {{"]
    for i in range(node_count):
        lines.append(f"  s{i};")
    for e in edges:
        if labels:
            src, label, dst = e
            lines.append(f'  s{src} -> s{dst} [label="{label}"];')
        else:
            src, dst = e
            lines.append(f"  s{src} -> s{dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
