"""SVG rendering of scenes and solution traces."""
from __future__ import annotations

from html import escape
from pathlib import Path
from string import Template
from typing import List, Optional, Sequence

from ..core.geometry import Point2
from ..core.models import Instance
from ..core.world import build_grid
from ..errors import IOFailure
from ..plan import Plan

SCALE = 60.0
MARGIN = 30.0

SCENE_TEMPLATE = Template(
    """<svg xmlns="http://www.w3.org/2000/svg" width="$width" height="$height" viewBox="0 0 $width $height">
<title>$title</title>
<defs>
<marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto">
<path d="M0,0 L10,5 L0,10 z" fill="#444"/>
</marker>
</defs>
<style>
.workspace { fill: #fafafa; stroke: #222; stroke-width: 2; }
.open-side { stroke: #fafafa; stroke-width: 3; }
.grid { fill: #bbb; }
.start { fill: #4a7bd0; stroke: #1f3f7a; }
.goal { fill: none; stroke: #d05a4a; stroke-dasharray: 5,4; stroke-width: 2; }
.transit { fill: none; stroke: #999; stroke-width: 1.5; }
.transfer { fill: none; stroke: #2a9d5b; stroke-width: 2; }
.move { stroke: #444; stroke-width: 1.5; marker-end: url(#arrow); }
.buffer .move { stroke-dasharray: 3,3; }
text { font-family: sans-serif; font-size: 12px; }
</style>
$workspace
$grid
$goals
$starts
$actions
</svg>
"""
)


class _Canvas:
    def __init__(self, instance: Instance) -> None:
        area = instance.world.workspace
        self.x0 = area.min.x
        self.y1 = area.max.y
        staging_drop = max(area.min.y - instance.world.staging_point.y, 0.0)
        self.width = area.width * SCALE + 2 * MARGIN
        self.height = (area.height + staging_drop) * SCALE + 2 * MARGIN

    def x(self, value: float) -> float:
        return MARGIN + (value - self.x0) * SCALE

    def y(self, value: float) -> float:
        return MARGIN + (self.y1 - value) * SCALE

    def point(self, p: Point2) -> str:
        return f"{self.x(p.x):.2f},{self.y(p.y):.2f}"


def _polyline(canvas: _Canvas, points: Sequence[Point2], css: str) -> str:
    coords = " ".join(canvas.point(p) for p in points)
    return f'<polyline class="{css}" points="{coords}"/>'


def render_svg(instance: Instance, plan: Optional[Plan] = None, path: str | Path | None = None) -> str:
    """Draw the workspace, grid, starts, goals and, when given, every plan action in order."""

    world = instance.world
    canvas = _Canvas(instance)
    area = world.workspace
    radius = world.object_radius * SCALE
    workspace = "\n".join(
        [
            f'<rect class="workspace" x="{canvas.x(area.min.x):.2f}" y="{canvas.y(area.max.y):.2f}" '
            f'width="{area.width * SCALE:.2f}" height="{area.height * SCALE:.2f}"/>',
            f'<line class="open-side" x1="{canvas.x(area.min.x):.2f}" y1="{canvas.y(area.min.y):.2f}" '
            f'x2="{canvas.x(area.max.x):.2f}" y2="{canvas.y(area.min.y):.2f}"/>',
        ]
    )
    grid = "\n".join(
        f'<circle class="grid" cx="{canvas.x(p.x):.2f}" cy="{canvas.y(p.y):.2f}" r="2"/>'
        for p in build_grid(world)
    )
    goals: List[str] = []
    starts: List[str] = []
    for obj in instance.objects:
        label = escape(obj)
        goal, start = instance.goal[obj], instance.start[obj]
        goals.append(
            f'<circle class="goal" cx="{canvas.x(goal.x):.2f}" cy="{canvas.y(goal.y):.2f}" r="{radius:.2f}"/>'
            f'<text x="{canvas.x(goal.x):.2f}" y="{canvas.y(goal.y) + 4:.2f}" text-anchor="middle">{label}</text>'
        )
        starts.append(
            f'<circle class="start" cx="{canvas.x(start.x):.2f}" cy="{canvas.y(start.y):.2f}" r="{radius:.2f}"/>'
            f'<text x="{canvas.x(start.x):.2f}" y="{canvas.y(start.y) + 4:.2f}" text-anchor="middle" '
            f'fill="#fff">{label}</text>'
        )
    actions: List[str] = []
    for step, action in enumerate(plan.actions if plan else (), start=1):
        middle = Point2((action.source.x + action.target.x) / 2, (action.source.y + action.target.y) / 2)
        actions.append(
            f'<g class="action {escape(action.kind)}" data-step="{step}" data-object="{escape(action.object)}">'
            + _polyline(canvas, action.transit.waypoints, "transit")
            + _polyline(canvas, action.transfer.waypoints, "transfer")
            + f'<line class="move" x1="{canvas.x(action.source.x):.2f}" y1="{canvas.y(action.source.y):.2f}" '
            f'x2="{canvas.x(action.target.x):.2f}" y2="{canvas.y(action.target.y):.2f}"/>'
            + f'<text x="{canvas.x(middle.x):.2f}" y="{canvas.y(middle.y) - 6:.2f}">{step}</text>'
            + "</g>"
        )
    svg = SCENE_TEMPLATE.substitute(
        width=f"{canvas.width:.0f}",
        height=f"{canvas.height:.0f}",
        title=escape(instance.instance_id or "scene"),
        workspace=workspace,
        grid=grid,
        goals="\n".join(goals),
        starts="\n".join(starts),
        actions="\n".join(actions),
    )
    if path is not None:
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(svg, encoding="utf-8")
        except OSError as exc:
            raise IOFailure(f"cannot write {target}: {exc}") from exc
    return svg


__all__ = ["render_svg"]
