"""Config file parsing and emission, plus DOT export.

The config grammar (YAML):

    vertices:
      - {id: 1, proximate_to: []}
      - {id: 2, proximate_to: [1]}
    arrows:
      - {id: p, attach: 3, weight: 7}
    marks: [4]
    group:
      order: 14
      generators:
        - vertices: {2: 4, 4: 2}
          arrows: {p: q, q: p}
    mode: curve        # optional; inferred from marks/arrows when absent

Vertex ids must be 1..n in creation order.
"""

from __future__ import annotations

from typing import Optional

import yaml

from .errors import ConfigError, NoTargets
from .resolution import Arrow, BlowUpGraph, SymmetrySpec, validate_action
from .zeta import ValuationTargets, multiplicity_vectors, targets_from

__all__ = ["parse_config", "emit_config", "emit_dot"]


def parse_config(text: str):
    """-> (BlowUpGraph, SymmetrySpec, ValuationTargets), or a positioned error."""
    try:
        doc = yaml.safe_load(text)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark
        raise ConfigError(
            f"syntax error: {exc.problem}",
            line=None if mark is None else mark.line + 1,
            column=None if mark is None else mark.column + 1,
        )
    if not isinstance(doc, dict):
        raise ConfigError("config must be a mapping")
    unknown = set(doc) - {"vertices", "arrows", "marks", "group", "mode"}
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)}")

    vertices = doc.get("vertices")
    if not isinstance(vertices, list) or not vertices:
        raise ConfigError("'vertices' must be a non-empty list")
    prox_by_id = {}
    for entry in vertices:
        if not isinstance(entry, dict) or "id" not in entry:
            raise ConfigError(f"vertex entry {entry!r} needs an 'id'")
        vid = entry["id"]
        if not isinstance(vid, int) or vid in prox_by_id:
            raise ConfigError(f"bad or duplicate vertex id {vid!r}")
        p = entry.get("proximate_to", [])
        if not isinstance(p, list) or not all(isinstance(x, int) for x in p):
            raise ConfigError(f"vertex {vid}: 'proximate_to' must be a list of ids")
        prox_by_id[vid] = p
    n = len(prox_by_id)
    if sorted(prox_by_id) != list(range(1, n + 1)):
        raise ConfigError("vertex ids must be 1..n in creation order")
    prox = [frozenset(prox_by_id[v]) for v in range(1, n + 1)]

    arrows = []
    for entry in doc.get("arrows") or []:
        if not isinstance(entry, dict) or "id" not in entry or "attach" not in entry:
            raise ConfigError(f"arrow entry {entry!r} needs 'id' and 'attach'")
        arrows.append(Arrow(str(entry["id"]), int(entry["attach"]), int(entry.get("weight", 1))))
    marks = [int(m) for m in (doc.get("marks") or [])]
    if not arrows and not marks:
        raise NoTargets("config defines neither arrows nor marks")

    group = doc.get("group") or {}
    order = int(group.get("order", 1))
    generators = []
    for gen in group.get("generators") or []:
        vmap = {int(k): int(v) for k, v in (gen.get("vertices") or {}).items()}
        amap = {str(k): str(v) for k, v in (gen.get("arrows") or {}).items()}
        generators.append((vmap, amap))
    sym = SymmetrySpec(order, tuple(generators))

    graph = BlowUpGraph(prox, tuple(arrows), tuple(marks))
    validate_action(graph, sym)
    mode = doc.get("mode")
    if mode is not None and mode not in ("divisorial", "curve"):
        raise ConfigError(f"mode must be 'divisorial' or 'curve', got {mode!r}")
    targets = targets_from(graph, sym, mode)
    return graph, sym, targets


def emit_config(graph: BlowUpGraph, sym: SymmetrySpec, mode: Optional[str] = None) -> str:
    """Deterministic config text; parse(emit(parse(x))) == parse(x)."""
    lines = ["vertices:"]
    for v in range(1, graph.n + 1):
        p = sorted(graph.prox[v - 1])
        lines.append(f"  - {{id: {v}, proximate_to: [{', '.join(map(str, p))}]}}")
    if graph.arrows:
        lines.append("arrows:")
        for a in sorted(graph.arrows, key=lambda a: a.id):
            lines.append(f"  - {{id: {a.id}, attach: {a.attach}, weight: {a.weight}}}")
    if graph.marks:
        lines.append(f"marks: [{', '.join(map(str, graph.marks))}]")
    lines.append("group:")
    lines.append(f"  order: {sym.order}")
    if sym.generators:
        lines.append("  generators:")
        for vmap, amap in sym.generators:
            vbody = ", ".join(f"{k}: {v}" for k, v in sorted(vmap.items()))
            lines.append(f"    - vertices: {{{vbody}}}")
            if amap:
                abody = ", ".join(f"{k}: {v}" for k, v in sorted(amap.items()))
                lines.append(f"      arrows: {{{abody}}}")
    if mode is not None:
        lines.append(f"mode: {mode}")
    return "\n".join(lines) + "\n"


def emit_dot(graph: BlowUpGraph, sym: SymmetrySpec, targets: Optional[ValuationTargets] = None) -> str:
    """Deterministic DOT rendering: vertices in age order labeled
    age | chi | M-vector, arrows as labeled arrowhead nodes, orbit
    membership as a color class index."""
    tables = validate_action(graph, sym)
    table = None
    if targets is not None:
        table = multiplicity_vectors(graph, sym, targets)
    palette = ["black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan4"]
    lines = ["graph zeta {", "  node [shape=circle];"]
    for v in range(1, graph.n + 1):
        orbit = tables.vertex_orbit_of[v]
        mvec = "" if table is None else " | M=(" + ",".join(map(str, table[v])) + ")"
        label = f"age={graph.age(v)} | chi={graph.euler(v)}{mvec}"
        shape = "doublecircle" if v in graph.marks else "circle"
        color = palette[orbit % len(palette)]
        lines.append(
            f'  v{v} [label="{label}", shape={shape}, color={color}, orbit={orbit}];'
        )
    for i, j in sorted(graph.edges):
        lines.append(f"  v{i} -- v{j};")
    for a in sorted(graph.arrows, key=lambda a: a.id):
        orbit = tables.arrow_orbit_of[a.id]
        color = palette[orbit % len(palette)]
        lines.append(
            f'  arrow_{a.id} [label="{a.id} (w={a.weight})", shape=rarrow, color={color}, orbit={orbit}];'
        )
        lines.append(f"  v{a.attach} -- arrow_{a.id};")
    lines.append("}")
    return "\n".join(lines) + "\n"
