"""Feasible wrench-set geometry under symmetric torque limits.

Two feasible-force constructions are provided for a prescribed moment of
zero: the direction-sweep scaling method (scale a chosen inverse's unit-
wrench torque solution until the first actuator saturates) and the exact
set, the image of the torque box under the statics map (a centrally
symmetric zonotope in (fx, fy, mz)) sliced by the constant-moment plane.

The scaling sweep is data-parallel over directions; all functions here are
pure and safe to call concurrently against one shared state.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull

from .errors import DimensionMismatch, EmptyIntersection, ZeroTorque
from .linalg import mp_pinv, weighted_pinv
from .rrr import ManipulatorState, forward_force
from .synthesis import (
    EQUILIBRATING,
    MANIPULATING,
    MIN_NORM,
    equilibrating_weighting,
    manipulating_weighting,
)

#: Weld tolerance for coincident vertices (absolute, task-space units).
WELD_TOL = 1e-9

#: Default direction count for figure-quality polygons (0.5 degree steps).
DEFAULT_DIRS = 720


@dataclass(frozen=True)
class TorqueBox:
    """Symmetric actuator limits ``{tau : ||tau||_inf <= tau_max}``."""

    tau_max: float

    def __post_init__(self):
        if not self.tau_max > 0:
            raise ValueError("tau_max must be positive")


@dataclass(frozen=True)
class WrenchZonotope:
    """Image of the torque box: generators, hull vertices, facet planes.

    ``equations`` rows are qhull half-spaces ``(n, d)`` with ``n . x + d <= 0``
    inside; the set is centrally symmetric about the origin.
    """

    generators: np.ndarray  # (3, m): column i = tau_max * column i of the map
    vertices: np.ndarray  # (V, 3) hull vertices
    equations: np.ndarray  # (F, 4) facet half-spaces
    simplices: np.ndarray  # (F, 3) triangle indices into ``vertices``

    def signed_distances(self, points) -> np.ndarray:
        """Max half-space violation per point; <= 0 means inside the hull."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return (pts @ self.equations[:, :3].T + self.equations[:, 3]).max(axis=1)

    @property
    def moment_extent(self) -> float:
        """Largest |mz| attainable, the support in the moment direction."""
        return float(np.abs(self.generators[2]).sum())


@dataclass(frozen=True)
class ForcePolygon:
    """Convex feasible-force polygon at one prescribed moment.

    Vertices are counter-clockwise and the polygon is closed implicitly
    (last vertex connects to the first).
    """

    vertices: np.ndarray  # (N, 2)
    mz: float = 0.0

    def __post_init__(self):
        verts = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if verts.shape[0] < 3 or verts.shape[1] != 2:
            raise DimensionMismatch("a polygon needs at least 3 planar vertices")
        object.__setattr__(self, "vertices", verts)

    def signed_distances(self, points) -> np.ndarray:
        """Min distance to the edge lines; positive inside a CCW polygon."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        v = self.vertices
        edges = np.roll(v, -1, axis=0) - v
        lengths = np.linalg.norm(edges, axis=1)
        rel = pts[:, None, :] - v[None, :, :]
        cross = edges[None, :, 0] * rel[:, :, 1] - edges[None, :, 1] * rel[:, :, 0]
        return (cross / lengths).min(axis=1)

    def contains(self, points, tol: float = 0.0) -> np.ndarray:
        return self.signed_distances(points) >= -tol

    def boundary_radius(self, angle: float) -> float:
        """Distance from the origin to the boundary along ``angle``.

        The origin must be interior (true for any feasible set under
        symmetric torque limits).
        """
        d = np.array([np.cos(angle), np.sin(angle)])
        v = self.vertices
        w = np.roll(v, -1, axis=0)
        best = np.inf
        for a, b in zip(v, w):
            e = b - a
            den = d[0] * e[1] - d[1] * e[0]
            if abs(den) < 1e-15:
                continue
            t = (a[0] * e[1] - a[1] * e[0]) / den  # ray parameter
            s = (a[0] * d[1] - a[1] * d[0]) / den  # edge parameter
            if t > 0 and -1e-12 <= s <= 1 + 1e-12:
                best = min(best, t)
        if not np.isfinite(best):
            raise ValueError("ray does not cross the polygon boundary")
        return float(best)


def scaling_factor(tau_hat, box: TorqueBox) -> float:
    """Largest multiple of ``tau_hat`` that keeps every joint within limits."""
    tau_hat = np.asarray(tau_hat, dtype=float).ravel()
    peak = np.abs(tau_hat).max()
    if peak <= 0.0:
        raise ZeroTorque("cannot scale a zero torque vector")
    return float(box.tau_max / peak)


def _inverse_for(state: ManipulatorState, choice: str, virt):
    A = state.wrench_map
    if choice == MIN_NORM:
        return mp_pinv(A)
    if choice == EQUILIBRATING:
        return weighted_pinv(A, equilibrating_weighting(state))
    if choice == MANIPULATING:
        if virt is None:
            raise ValueError("the manipulating inverse needs a virtual distribution")
        return weighted_pinv(A, manipulating_weighting(state, virt))
    raise ValueError(f"unknown inverse choice {choice!r}")


def polygon_scaling_method(
    state: ManipulatorState,
    box: TorqueBox,
    mz: float = 0.0,
    n_dirs: int = DEFAULT_DIRS,
    inverse_choice: str = MIN_NORM,
    virt=None,
) -> ForcePolygon:
    """Direction sweep of the scaling-factor capacity estimate.

    For each direction the unit wrench ``(cos t, sin t, 0)`` is resolved with
    the chosen inverse, scaled to the first saturated actuator, and mapped
    forward; the polygon joins the swept force points.  Only a prescribed
    moment of zero is supported: how the unit wrench should carry a nonzero
    moment through the scaling is not well defined.
    """
    if mz != 0.0:
        raise ValueError("the scaling method is defined for a prescribed moment of zero")
    if n_dirs < 3:
        raise ValueError("need at least 3 directions")
    inv = _inverse_for(state, inverse_choice, virt)
    verts = []
    for k in range(n_dirs):
        t = 2.0 * np.pi * k / n_dirs
        unit = np.array([np.cos(t), np.sin(t), 0.0])
        tau_hat = inv @ unit
        try:
            s = scaling_factor(tau_hat, box)
        except ZeroTorque:  # cannot happen for a full-rank map
            warnings.warn(f"direction {t:.4f} rad maps to zero torques; skipped")
            continue
        verts.append(forward_force(state, s * tau_hat)[:2])
    return ForcePolygon(np.array(verts), mz=mz)


def zonotope_from_generators(generators) -> WrenchZonotope:
    """Zonotope ``{sum c_i g_i : |c_i| <= 1}`` from 3-D generator columns.

    A rank-1 generator set degenerates to the segment between its two
    endpoints (no facets); rank 2 is rejected.
    """
    generators = np.atleast_2d(np.asarray(generators, dtype=float))
    if generators.shape[0] != 3:
        raise DimensionMismatch("generators must be stacked as 3 x m columns")
    m = generators.shape[1]
    signs = np.array(
        [[1.0 if (i >> b) & 1 else -1.0 for b in range(m)] for i in range(2**m)]
    )
    points = signs @ generators.T
    rank = np.linalg.matrix_rank(generators, tol=1e-12)
    if rank == 1:
        # extreme point along the common line: align every generator with g_1
        end = generators @ np.sign(generators.T @ generators[:, 0])
        return WrenchZonotope(
            generators=generators,
            vertices=np.vstack([end, -end]),
            equations=np.empty((0, 4)),
            simplices=np.empty((0, 3), dtype=int),
        )
    if rank == 2:
        raise ValueError("rank-2 generator sets (flat zonotopes) are not supported")
    hull = ConvexHull(points)
    vertices = points[hull.vertices]
    # remap simplices into the reduced vertex array
    index_of = {int(p): i for i, p in enumerate(hull.vertices)}
    simplices = np.array([[index_of[int(p)] for p in s] for s in hull.simplices])
    return WrenchZonotope(
        generators=generators,
        vertices=vertices,
        equations=hull.equations.copy(),
        simplices=simplices,
    )


def feasible_zonotope(state: ManipulatorState, box: TorqueBox) -> WrenchZonotope:
    """Exact feasible wrench set: hull of the mapped torque-box vertices."""
    return zonotope_from_generators(box.tau_max * state.wrench_map)


def slice_zonotope(zono: WrenchZonotope, mz: float) -> ForcePolygon:
    """Constant-moment cross-section of the zonotope, as a force polygon.

    Clips every hull triangle against the plane ``third coordinate = mz`` and
    takes the planar convex hull of the crossing points, welded to
    ``WELD_TOL``.  Raises ``EmptyIntersection`` when the plane misses the set
    or only grazes it.
    """
    crossings: list[np.ndarray] = []
    verts = zono.vertices
    for tri in zono.simplices:
        p = verts[tri]
        z = p[:, 2] - mz
        for i in range(3):
            a, b = p[i], p[(i + 1) % 3]
            za, zb = z[i], z[(i + 1) % 3]
            if za == 0.0:
                crossings.append(a[:2])
            if (za < 0 < zb) or (zb < 0 < za):
                t = za / (za - zb)
                crossings.append((a + t * (b - a))[:2])
    if not crossings:
        raise EmptyIntersection(f"plane mz={mz} does not intersect the feasible set")
    pts = np.array(crossings)
    # weld coincident crossings so qhull sees clean input
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    keep = [pts[0]]
    for q in pts[1:]:
        if np.abs(q - keep[-1]).max() > WELD_TOL:
            keep.append(q)
    pts = np.array(keep)
    if pts.shape[0] < 3:
        raise EmptyIntersection(f"plane mz={mz} only grazes the feasible set")
    try:
        hull = ConvexHull(pts)
    except Exception as exc:  # degenerate (collinear) section
        raise EmptyIntersection(f"plane mz={mz} yields a degenerate section") from exc
    ordered = pts[hull.vertices]  # qhull returns CCW order in 2-D
    return ForcePolygon(ordered, mz=mz)


@dataclass(frozen=True)
class PolygonIntersections:
    """Boundary-boundary crossing points of two convex polygons.

    ``shared_boundary`` is set when some edges overlap collinearly (e.g.
    identical polygons), in which case isolated crossing points are not a
    meaningful description of the intersection.
    """

    points: np.ndarray  # (M, 2)
    shared_boundary: bool = False

    def __len__(self) -> int:
        return int(self.points.shape[0])


def polygon_intersections(
    p1: ForcePolygon, p2: ForcePolygon, dedup_tol: float = 1e-6
) -> PolygonIntersections:
    """Intersect the boundaries of two polygons at the same moment level."""
    if p1.mz != p2.mz:
        raise ValueError("polygons lie on different moment planes")
    a = p1.vertices
    b = p2.vertices
    a2 = np.roll(a, -1, axis=0)
    b2 = np.roll(b, -1, axis=0)
    ea = a2 - a
    eb = b2 - b
    found: list[np.ndarray] = []
    shared = False
    scale = max(np.abs(a).max(), np.abs(b).max(), 1.0)
    for i in range(a.shape[0]):
        d1 = ea[i]
        # cross products of edge i against every edge of p2 at once
        den = d1[0] * eb[:, 1] - d1[1] * eb[:, 0]
        rel = b - a[i]
        t_num = rel[:, 0] * eb[:, 1] - rel[:, 1] * eb[:, 0]
        s_num = rel[:, 0] * d1[1] - rel[:, 1] * d1[0]
        parallel = np.abs(den) < 1e-14 * scale * scale
        if np.any(parallel):
            # collinear overlap check: p2 edge start on the line of edge i
            offline = np.abs(t_num[parallel]) > 1e-12 * scale * scale
            if not np.all(offline):
                shared = True
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(parallel, np.nan, t_num / den)
            s = np.where(parallel, np.nan, s_num / den)
        hit = (~parallel) & (t >= -1e-12) & (t <= 1 + 1e-12) & (s >= -1e-12) & (s <= 1 + 1e-12)
        for j in np.nonzero(hit)[0]:
            found.append(a[i] + t[j] * d1)
    points: list[np.ndarray] = []
    for p in found:
        if not any(np.linalg.norm(p - q) <= dedup_tol for q in points):
            points.append(p)
    pts = np.array(points) if points else np.empty((0, 2))
    return PolygonIntersections(points=pts, shared_boundary=shared)


# ---------------------------------------------------------------------------
# Exports
# ---------------------------------------------------------------------------

def polygon_to_csv(polygon: ForcePolygon) -> str:
    """CSV text, one vertex per line under an ``fx,fy`` header."""
    lines = ["fx,fy"]
    lines += [f"{x!r},{y!r}" for x, y in polygon.vertices.tolist()]
    return "\n".join(lines) + "\n"


def zonotope_to_off(zono: WrenchZonotope) -> str:
    """OFF mesh of the hull (triangular faces, outward orientation)."""
    verts = zono.vertices
    lines = ["OFF", f"{len(verts)} {len(zono.simplices)} 0"]
    lines += [f"{x!r} {y!r} {z!r}" for x, y, z in verts.tolist()]
    for tri, eq in zip(zono.simplices, zono.equations):
        i, j, k = (int(t) for t in tri)
        n = np.cross(verts[j] - verts[i], verts[k] - verts[i])
        if n @ eq[:3] < 0:  # flip to match the outward facet normal
            j, k = k, j
        lines.append(f"3 {i} {j} {k}")
    return "\n".join(lines) + "\n"


_SVG_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


def polygons_to_svg(layers: dict[str, ForcePolygon], size: int = 640) -> str:
    """Standalone SVG overlaying the polygons, one labelled layer per method.

    Axes pass through the origin with end labels in newtons; a legend names
    each layer with its stroke color.  Output is deterministic text.
    """
    if not layers:
        raise ValueError("nothing to draw")
    allv = np.vstack([p.vertices for p in layers.values()])
    span = float(np.abs(allv).max()) * 1.1
    if span == 0:
        span = 1.0
    half = size / 2.0
    scale = half / span

    def to_px(xy):
        return half + xy[0] * scale, half - xy[1] * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<g id="axes" stroke="#999" stroke-width="1">'
        f'<line x1="0" y1="{half}" x2="{size}" y2="{half}"/>'
        f'<line x1="{half}" y1="0" x2="{half}" y2="{size}"/></g>',
        f'<text x="{size - 8}" y="{half - 6}" text-anchor="end" font-size="12">'
        f"fx = {span:.3g} N</text>",
        f'<text x="{half + 6}" y="12" font-size="12">fy = {span:.3g} N</text>',
    ]
    for idx, (name, poly) in enumerate(layers.items()):
        color = _SVG_COLORS[idx % len(_SVG_COLORS)]
        coords = " ".join("{:.3f},{:.3f}".format(*to_px(v)) for v in poly.vertices)
        out.append(
            f'<g id="{name}"><polygon points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="1.5"/></g>'
        )
        y = 20 + 16 * idx
        out.append(
            f'<line x1="10" y1="{y - 4}" x2="30" y2="{y - 4}" stroke="{color}" '
            f'stroke-width="3"/><text x="36" y="{y}" font-size="12">{name}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
