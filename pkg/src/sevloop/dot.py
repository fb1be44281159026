"""Graphviz rendering of recorded exploration trees.

One node per engine invocation, labeled with its program point and
min-interpretation; annotation marks render as one +/-/. character per
store atom. Infeasible leaves are double-circled; subsumption and loop
closure draw dashed edges to the covering node.
"""

from __future__ import annotations

from .engine import Engine, NodeRecord


def _esc(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _render(records: list[NodeRecord], name: str) -> str:
    lines = [f"digraph {name} {{", "  node [fontname=monospace];"]
    ids = {r.node_id for r in records}
    for r in records:
        label = f"{r.point}"
        if r.min_pretty:
            label += f"\\n{_esc(r.min_pretty)}"
        if r.marks:
            label += f"\\n[{r.marks}]"
        shape = ""
        if r.status in ("infeasible", "spurious-error"):
            shape = ", shape=doublecircle"
        elif r.status == "unsafe":
            shape = ", shape=doubleoctagon"
        elif r.status == "terminal":
            shape = ", shape=box"
        lines.append(f'  n{r.node_id} [label="{label}"{shape}];')
    for r in records:
        if r.parent_id is not None and r.parent_id in ids:
            lines.append(f"  n{r.parent_id} -> n{r.node_id};")
        if r.subsumed_by is not None and r.subsumed_by in ids:
            lines.append(f"  n{r.node_id} -> n{r.subsumed_by} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(engine: Engine, per_restart: bool = False) -> str:
    """Render the final live tree or, with per_restart, one digraph per
    traversal snapshot (pre-restart snapshots first, final tree last)."""
    if not engine.cfg.record_tree:
        raise ValueError("engine ran without tree recording enabled")
    if per_restart and len(engine.tree.snapshots) > 1:
        parts = [_render(snap, f"traversal{i}")
                 for i, snap in enumerate(engine.tree.snapshots)]
        return "\n".join(parts)
    return _render(engine.tree.live(), "exploration")
