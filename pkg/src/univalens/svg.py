"""Self-contained SVG rendering of polar meshes mapped by a function.

Output is byte-for-byte deterministic: coordinates are written with a
fixed number of decimals and curves keep their construction order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import EvaluationError, UnivalensError

SAMPLES_PER_CURVE = 512
RING_STROKE = "#1f4e79"
RAY_STROKE = "#b03a2e"


@dataclass(frozen=True)
class Curve:
    points: np.ndarray  # complex
    stroke: str
    stroke_width: float
    kind: str  # "ring" or "ray"
    parameter: float  # radius of a ring, angle of a ray


@dataclass
class SvgScene:
    width: int
    height: int
    curves: list = field(default_factory=list)
    viewbox: tuple = (0.0, 0.0, 1.0, 1.0)  # x, y, w, h in plot coordinates
    title: str = ""

    def fit(self, pad: float = 0.05) -> "SvgScene":
        pts = np.concatenate([c.points for c in self.curves])
        if not np.all(np.isfinite(pts)):
            raise UnivalensError("scene contains non-finite points")
        x0, x1 = pts.real.min(), pts.real.max()
        y0, y1 = (-pts.imag).min(), (-pts.imag).max()
        span = max(x1 - x0, y1 - y0, 1e-12)
        cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
        half = span * (0.5 + pad)
        self.viewbox = (cx - half, cy - half, 2 * half, 2 * half)
        return self


def mesh_parameters(rings: int, rays: int):
    if rings < 1 or rays < 1:
        raise ValueError("rings and rays must be at least 1")
    radii = [j / (rings + 1) for j in range(1, rings + 1)]
    angles = [2 * np.pi * k / rays for k in range(rays)]
    return radii, angles


def mapped_mesh(fn, rings: int, rays: int, samples: int = SAMPLES_PER_CURVE, title: str = "",
                width: int = 480, height: int = 480) -> SvgScene:
    """Images under ``fn`` of ``rings`` circles r = j/(rings+1) and ``rays`` radial segments.

    Rays run from 0 to the outermost ring.
    """
    radii, angles = mesh_parameters(rings, rays)
    theta = 2 * np.pi * np.arange(samples + 1) / samples
    stroke_width = 0.004
    curves = []
    for r in radii:
        curves.append(_mapped(fn, r * np.exp(1j * theta), RING_STROKE, stroke_width, "ring", r))
    s = np.linspace(0.0, radii[-1], samples)
    for a in angles:
        curves.append(_mapped(fn, s * np.exp(1j * a), RAY_STROKE, stroke_width, "ray", a))
    scene = SvgScene(width, height, curves, title=title).fit()
    scale = scene.viewbox[2] / 480
    for i, c in enumerate(scene.curves):
        scene.curves[i] = Curve(c.points, c.stroke, 1.2 * scale, c.kind, c.parameter)
    return scene


def _mapped(fn, z, stroke, width, kind, parameter) -> Curve:
    try:
        w = np.asarray(fn(z), dtype=complex)
    except UnivalensError as exc:
        raise EvaluationError(f"evaluating {kind} {parameter:.6g} failed: {exc}") from exc
    if not np.all(np.isfinite(w)):
        raise EvaluationError(f"non-finite image on {kind} {parameter:.6g}")
    return Curve(w, stroke, width, kind, parameter)


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _polyline(c: Curve) -> str:
    coords = " ".join(f"{_fmt(p.real)},{_fmt(-p.imag)}" for p in c.points)
    return (
        f'<polyline fill="none" stroke="{c.stroke}" stroke-width="{_fmt(c.stroke_width)}" '
        f'data-kind="{c.kind}" data-parameter="{_fmt(c.parameter)}" points="{coords}"/>'
    )


def _inner(scene: SvgScene, x: float = 0, y: float = 0) -> list[str]:
    vb = " ".join(_fmt(v) for v in scene.viewbox)
    lines = [f'<svg x="{x}" y="{y}" width="{scene.width}" height="{scene.height}" viewBox="{vb}">']
    if scene.title:
        lines.append(f"<title>{scene.title}</title>")
    lines.extend(_polyline(c) for c in scene.curves)
    lines.append("</svg>")
    return lines


def to_svg(*scenes: SvgScene) -> str:
    """Serialize one or more scenes placed side by side."""
    width = sum(s.width for s in scenes)
    height = max(s.height for s in scenes)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    x = 0
    for s in scenes:
        out.extend(_inner(s, x, 0))
        x += s.width
    out.append("</svg>")
    return "\n".join(out) + "\n"
