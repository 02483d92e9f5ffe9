"""Geometry exporters: OFF meshes, SVG drawings, CSV point clouds.

These render verified regions for external tooling; the geometry itself stays
exact until the final decimal formatting (17 significant digits).  Output
ordering is deterministic: cells in region order, vertices sorted
lexicographically, facet rings oriented outward.
"""

from __future__ import annotations

import math
import random
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ParameterError
from .polytopes import ConvexCell, Region
from .rational import Rat, Vec, affine_rank, as_rat

_PALETTE = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
]


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _facet_rings(cell: ConvexCell) -> List[List[int]]:
    """Ordered outward-facing vertex rings for each facet of a 3D cell."""
    verts = cell.vertices
    coords = np.array([v.to_floats() for v in verts])
    rings = []
    seen = set()
    for h in cell.halfspaces:
        idx = [i for i, v in enumerate(verts) if h.slack(v) == 0]
        if len(idx) < 3 or tuple(idx) in seen:
            continue
        if affine_rank([verts[i] for i in idx]) != 2:
            continue
        seen.add(tuple(idx))
        normal = np.array(h.normal, dtype=float)
        normal /= np.linalg.norm(normal)
        center = coords[idx].mean(axis=0)
        # planar basis orthogonal to the facet normal
        helper = np.array([1.0, 0.0, 0.0])
        if abs(normal[0]) > 0.9:
            helper = np.array([0.0, 1.0, 0.0])
        u = np.cross(normal, helper)
        u /= np.linalg.norm(u)
        w = np.cross(normal, u)
        angles = [
            math.atan2(float((coords[i] - center) @ w), float((coords[i] - center) @ u))
            for i in idx
        ]
        ring = [i for _, i in sorted(zip(angles, idx))]
        # orient counterclockwise as seen from outside (Newell normal test)
        nx = np.zeros(3)
        for a, b in zip(ring, ring[1:] + ring[:1]):
            nx += np.cross(coords[a], coords[b])
        if float(nx @ normal) < 0:
            ring.reverse()
        rings.append(ring)
    return rings


def export_off(region: Region) -> str:
    """OFF mesh with one component per cell (dimension 2 or 3).

    Planar regions are embedded at z = 0 with a single face per cell.
    """
    if region.dim not in (2, 3):
        raise ParameterError("OFF export supports dimensions 2 and 3 only")
    all_coords: List[Tuple[float, ...]] = []
    faces: List[List[int]] = []
    for cell in region.cells:
        base = len(all_coords)
        verts = cell.vertices
        if region.dim == 2:
            all_coords.extend(v.to_floats() + (0.0,) for v in verts)
            ring = _convex_ring_2d(verts)
            faces.append([base + i for i in ring])
        else:
            all_coords.extend(v.to_floats() for v in verts)
            for ring in _facet_rings(cell):
                faces.append([base + i for i in ring])
    lines = ["OFF", f"{len(all_coords)} {len(faces)} 0"]
    for c in all_coords:
        lines.append(" ".join(_fmt(x) for x in c))
    for f in faces:
        lines.append(str(len(f)) + " " + " ".join(str(i) for i in f))
    return "\n".join(lines) + "\n"


def _convex_ring_2d(verts: Sequence[Vec]) -> List[int]:
    """Counterclockwise ordering of the vertices of a convex planar cell."""
    coords = [v.to_floats() for v in verts]
    cx = sum(c[0] for c in coords) / len(coords)
    cy = sum(c[1] for c in coords) / len(coords)
    angles = [math.atan2(c[1] - cy, c[0] - cx) for c in coords]
    return [i for _, i in sorted(zip(angles, range(len(verts))))]


def parse_slice(spec: str, dim: int) -> Tuple[int, Rat]:
    """Parse a slice spec like "x3=0" into (axis index, level)."""
    try:
        left, right = spec.split("=")
        if not left.strip().startswith("x"):
            raise ValueError("expected xI=c")
        axis = int(left.strip()[1:]) - 1
        level = as_rat(right.strip())
    except (ValueError, IndexError) as exc:
        raise ParameterError(f"bad slice spec {spec!r}; expected e.g. 'x3=0'") from exc
    if not (0 <= axis < dim):
        raise ParameterError(f"slice axis x{axis + 1} outside dimension {dim}")
    return axis, level


def slice_cell(cell: ConvexCell, axis: int, level: Rat) -> Optional[List[Vec]]:
    """Exact cross-section polygon of a 3D cell with the plane x_axis = level.

    Returns the section's vertices projected to the remaining coordinates
    (in convex ring order), or None when the section has empty area.
    """
    verts = cell.vertices
    slacks = [v[axis] - level for v in verts]
    active = cell._active_sets()
    n = cell.dim
    pts = {}
    for i, v in enumerate(verts):
        if slacks[i] == 0:
            pts[v.entries] = v
    for i in range(len(verts)):
        if slacks[i] <= 0:
            continue
        for j in range(len(verts)):
            if slacks[j] >= 0:
                continue
            if len(active[i] & active[j]) < n - 1:
                continue
            t = slacks[i] / (slacks[i] - slacks[j])
            p = verts[i] + t * (verts[j] - verts[i])
            pts[p.entries] = p
    section = [
        Vec(tuple(x for k, x in enumerate(p.entries) if k != axis))
        for p in pts.values()
    ]
    uniq = {p.entries: p for p in section}
    section = list(uniq.values())
    if len(section) < 3 or affine_rank(section) < 2:
        return None
    ring = _convex_ring_2d(section)
    return [section[i] for i in ring]


def export_svg(
    region: Region, slice_spec: Optional[str] = None, size: int = 640
) -> str:
    """SVG rendering of a planar region, or of a slice of a 3D region."""
    if region.dim == 2:
        polys = []
        for cell in region.cells:
            ring = _convex_ring_2d(cell.vertices)
            polys.append([cell.vertices[i] for i in ring])
    elif region.dim == 3:
        if not slice_spec:
            raise ParameterError("SVG export of a 3D region needs a slice like x3=0")
        axis, level = parse_slice(slice_spec, 3)
        polys = []
        for cell in region.cells:
            poly = slice_cell(cell, axis, level)
            if poly is not None:
                polys.append(poly)
    else:
        raise ParameterError("SVG export supports dimension 2 (or sliced 3D) only")

    if not polys:
        # empty drawing: slice plane missed the region
        return (
            '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 1 1">'
            "<!-- empty section --></svg>\n"
        )
    xs = [float(p[0]) for poly in polys for p in poly]
    ys = [float(p[1]) for poly in polys for p in poly]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    scale = size / max(x1 - x0, y1 - y0)
    stroke = max(x1 - x0, y1 - y0) / 400
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{math.ceil((y1 - y0) * scale)}" '
        f'viewBox="{_fmt(x0)} {_fmt(-y1)} {_fmt(x1 - x0)} {_fmt(y1 - y0)}">'
    ]
    for i, poly in enumerate(polys):
        pts = " ".join(f"{_fmt(float(p[0]))},{_fmt(-float(p[1]))}" for p in poly)
        color = _PALETTE[i % len(_PALETTE)]
        out.append(
            f'<polygon points="{pts}" fill="{color}" fill-opacity="0.75" '
            f'stroke="#222" stroke-width="{_fmt(stroke)}"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def export_csv(region: Region, samples: int = 20_000, seed: int = 42) -> str:
    """Membership point cloud over the bounding box, for external plotting.

    Float-precision sampling (this is a plotting artifact, not a verifier);
    columns are the coordinates plus the index of the containing cell.
    """
    n = region.dim
    lo, hi = region.bounding_box()
    lo_f = np.array(lo.to_floats())
    width = np.array([(hi[i] - lo[i]) for i in range(n)], dtype=float)
    rng = random.Random(seed)
    pts = np.array(
        [[rng.random() for _ in range(n)] for _ in range(samples)], dtype=float
    )
    pts = lo_f[None, :] + pts * width[None, :]
    normals = [
        np.array([h.normal for h in c.halfspaces], dtype=float) for c in region.cells
    ]
    offsets = [
        np.array([float(h.offset) for h in c.halfspaces], dtype=float)
        for c in region.cells
    ]
    owner = -np.ones(samples, dtype=int)
    for ci in range(len(region.cells)):
        margins = offsets[ci][None, :] - pts @ normals[ci].T
        inside = margins.min(axis=1) >= 0
        owner[inside & (owner < 0)] = ci
    lines = [",".join([f"x{i + 1}" for i in range(n)] + ["cell"])]
    for row, ci in zip(pts, owner):
        if ci >= 0:
            lines.append(",".join(_fmt(float(x)) for x in row) + f",{ci}")
    return "\n".join(lines) + "\n"


def export_region(
    region: Region,
    fmt: str,
    slice_spec: Optional[str] = None,
    samples: int = 20_000,
    seed: int = 42,
) -> str:
    if fmt == "off":
        return export_off(region)
    if fmt == "svg":
        return export_svg(region, slice_spec)
    if fmt == "csv":
        return export_csv(region, samples=samples, seed=seed)
    raise ParameterError(f"unknown export format {fmt!r}")
