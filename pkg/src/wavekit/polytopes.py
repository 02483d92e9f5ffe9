"""Exact convex polytope arithmetic.

Cells are bounded convex polytopes carried in H-representation (halfspaces
with primitive integer normals and rational offsets) with exact vertex sets
cached alongside.  Cells produced by the constructors in this module keep
their vertices synchronized through every operation (affine images, cuts,
intersections), so emptiness and full-dimensionality reduce to exact affine
rank; cells parsed from H-representations alone fall back on vertex
enumeration and rational LP.

Degenerate (lower-dimensional) pieces are dropped throughout: every tiling
statement this package decides holds up to null sets, so faces never matter.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import lp
from .errors import (
    ComplexityGuardError,
    ParameterError,
    SingularMatrixError,
    UnboundedCellError,
)
from .rational import (
    Mat,
    Rat,
    RatLike,
    Vec,
    affine_rank,
    as_rat,
    check_dimension,
    det_of_rows,
    rank,
    solve_int_system,
)

FACET_CAP = 24


@dataclass(frozen=True, order=True)
class HalfSpace:
    """Constraint normal . x <= offset with a primitive integer normal.

    The canonical scaling (integer normal with gcd 1) makes halfspaces
    hashable, deduplicatable, and gives the deterministic lexicographic
    facet order used by the decomposition routines.
    """

    normal: Tuple[int, ...]
    offset: Rat

    @classmethod
    def make(cls, normal: Sequence[RatLike], offset: RatLike) -> "HalfSpace":
        norm = [as_rat(x) for x in normal]
        if all(x == 0 for x in norm):
            raise ParameterError("halfspace normal must be nonzero")
        scale = math.lcm(*(x.denominator for x in norm))
        ints = [int(x * scale) for x in norm]
        g = math.gcd(*ints)
        return cls(tuple(i // g for i in ints), as_rat(offset) * scale / g)

    @property
    def dim(self) -> int:
        return len(self.normal)

    def slack(self, x: Vec) -> Rat:
        """offset - normal . x; nonnegative exactly on the closed halfspace."""
        return self.offset - sum(
            (a * b for a, b in zip(self.normal, x.entries)), Fraction(0)
        )

    def flip(self) -> "HalfSpace":
        return HalfSpace(tuple(-a for a in self.normal), -self.offset)

    def transform(self, m_inv: Mat, shift: Vec) -> "HalfSpace":
        """Image of the halfspace under x -> M x + shift, given M^-1."""
        new_normal = m_inv.T @ Vec.of(self.normal)
        new_offset = self.offset + new_normal.dot(shift)
        return HalfSpace.make(new_normal.entries, new_offset)

    def translate(self, v: Vec) -> "HalfSpace":
        return HalfSpace(
            self.normal,
            self.offset
            + sum((a * b for a, b in zip(self.normal, v.entries)), Fraction(0)),
        )


class ConvexCell:
    """Bounded convex polytope: halfspaces plus a lazily cached vertex set."""

    __slots__ = ("halfspaces", "_vertices", "_bbox", "_volume", "_active")

    def __init__(
        self,
        halfspaces: Iterable[HalfSpace],
        vertices: Optional[Sequence[Vec]] = None,
    ):
        seen: Dict[HalfSpace, None] = {}
        for h in halfspaces:
            seen.setdefault(h, None)
        self.halfspaces: Tuple[HalfSpace, ...] = tuple(seen)
        if not self.halfspaces:
            raise ParameterError("a cell needs at least one halfspace")
        check_dimension(self.dim)
        self._vertices = (
            tuple(sorted(vertices, key=lambda v: v.entries))
            if vertices is not None
            else None
        )
        self._bbox = None
        self._volume = None
        self._active = None

    # -- construction -----------------------------------------------------

    @classmethod
    def from_halfspaces(cls, halfspaces: Iterable[HalfSpace]) -> "ConvexCell":
        return cls(halfspaces)

    @classmethod
    def from_box(cls, lo: Vec, hi: Vec) -> "ConvexCell":
        n = lo.dim
        if any(l >= h for l, h in zip(lo, hi)):
            raise ParameterError("box must have positive extent in every axis")
        hs = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            hs.append(HalfSpace(tuple(e), hi[i]))
            hs.append(HalfSpace(tuple(-x for x in e), -lo[i]))
        corners = [
            Vec(tuple(hi[i] if (mask >> i) & 1 else lo[i] for i in range(n)))
            for mask in range(1 << n)
        ]
        return cls(hs, corners)

    # -- basic queries ----------------------------------------------------

    @property
    def dim(self) -> int:
        return self.halfspaces[0].dim

    @property
    def vertices(self) -> Tuple[Vec, ...]:
        if self._vertices is None:
            self._vertices = tuple(enumerate_vertices(self))
        return self._vertices

    def has_cached_vertices(self) -> bool:
        return self._vertices is not None

    def contains(self, x: Vec) -> bool:
        """Closed-cell membership."""
        return all(h.slack(x) >= 0 for h in self.halfspaces)

    def on_boundary(self, x: Vec) -> bool:
        return self.contains(x) and any(h.slack(x) == 0 for h in self.halfspaces)

    def bounding_box(self) -> Tuple[Vec, Vec]:
        if self._bbox is None:
            verts = self.vertices
            if not verts:
                raise UnboundedCellError("empty cell has no bounding box")
            n = self.dim
            lo = Vec(tuple(min(v[i] for v in verts) for i in range(n)))
            hi = Vec(tuple(max(v[i] for v in verts) for i in range(n)))
            self._bbox = (lo, hi)
        return self._bbox

    def interior_empty(self) -> bool:
        """True when the cell has no interior point.

        Decided from the exact vertex set when one is cached, otherwise by
        the slack-maximizing rational LP (see :func:`interior_empty`).
        """
        if self._vertices is not None:
            return (
                len(self._vertices) <= self.dim
                or affine_rank(self._vertices) < self.dim
            )
        eps, _ = interior_slack(self)
        return eps <= 0

    def interior_point(self) -> Vec:
        """An exact interior point (vertex average) of a full-dimensional cell."""
        verts = self.vertices
        if not verts or self.interior_empty():
            raise ParameterError("cell has empty interior")
        k = Fraction(1, len(verts))
        acc = Vec.zero(self.dim)
        for v in verts:
            acc = acc + k * v
        return acc

    def volume(self) -> Rat:
        if self._volume is None:
            self._volume = cell_volume(self)
        return self._volume

    def same_point_set(self, other: "ConvexCell") -> bool:
        return self.vertices == other.vertices

    # -- geometry operations ----------------------------------------------

    def _active_sets(self) -> Tuple[frozenset, ...]:
        if self._active is None:
            self._active = tuple(
                frozenset(
                    i for i, h in enumerate(self.halfspaces) if h.slack(v) == 0
                )
                for v in self.vertices
            )
        return self._active

    def cut(self, h: HalfSpace) -> Optional["ConvexCell"]:
        """Intersect with one halfspace, maintaining exact vertices.

        Returns None when the result is empty or lower-dimensional.  New
        vertices arise only on edges crossing the cutting hyperplane; edge
        candidates are over-approximated from shared active sets and then
        rank-filtered, which is exact for simple and non-simple cells alike.
        """
        verts = self.vertices
        slacks = [h.slack(v) for v in verts]
        if not verts:
            return None
        if min(slacks) >= 0:
            if h in self.halfspaces:
                return self
            cell = ConvexCell(self.halfspaces + (h,), verts)
            return None if cell.interior_empty() else cell
        if max(slacks) <= 0:
            return None
        n = self.dim
        active = self._active_sets()
        keep = [v for v, s in zip(verts, slacks) if s >= 0]
        candidates: Dict[tuple, Vec] = {}
        inside = [i for i, s in enumerate(slacks) if s > 0]
        outside = [j for j, s in enumerate(slacks) if s < 0]
        for i in inside:
            for j in outside:
                if len(active[i] & active[j]) < n - 1:
                    continue
                t = slacks[i] / (slacks[i] - slacks[j])
                p = verts[i] + t * (verts[j] - verts[i])
                candidates.setdefault(p.entries, p)
        new_hs = self.halfspaces if h in self.halfspaces else self.halfspaces + (h,)
        new_verts = list(keep)
        for p in candidates.values():
            act = [hh.normal for hh in new_hs if hh.slack(p) == 0]
            if rank(act) == n:
                new_verts.append(p)
        uniq = {v.entries: v for v in new_verts}
        new_verts = list(uniq.values())
        if len(new_verts) <= n or affine_rank(new_verts) < n:
            return None
        return ConvexCell(new_hs, new_verts)

    def intersect(self, other: "ConvexCell") -> Optional["ConvexCell"]:
        """Full-dimensional intersection, or None when it has empty interior."""
        cell: Optional[ConvexCell] = self
        for h in other.halfspaces:
            cell = cell.cut(h)
            if cell is None:
                return None
        return cell

    def affine_image(self, m: Mat, shift: Optional[Vec] = None) -> "ConvexCell":
        """Exact image under x -> M x + shift (M invertible)."""
        shift = shift if shift is not None else Vec.zero(self.dim)
        m_inv = m.inverse()
        hs = [h.transform(m_inv, shift) for h in self.halfspaces]
        verts = None
        if self._vertices is not None:
            verts = [(m @ v) + shift for v in self._vertices]
        return ConvexCell(hs, verts)

    def translate(self, v: Vec) -> "ConvexCell":
        hs = [h.translate(v) for h in self.halfspaces]
        verts = None
        if self._vertices is not None:
            verts = [w + v for w in self._vertices]
        return ConvexCell(hs, verts)

    def is_bounded(self) -> bool:
        """Exact boundedness of the H-representation (2n rational LPs)."""
        n = self.dim
        A = [[Fraction(a) for a in h.normal] for h in self.halfspaces]
        b = [h.offset for h in self.halfspaces]
        for i in range(n):
            for sign in (1, -1):
                c = [Fraction(0)] * n
                c[i] = Fraction(sign)
                if lp.lp_maximize(c, A, b).status == lp.UNBOUNDED:
                    return False
        return True

    def __repr__(self) -> str:
        nv = len(self._vertices) if self._vertices is not None else "?"
        return f"ConvexCell(dim={self.dim}, facets={len(self.halfspaces)}, vertices={nv})"


@dataclass(frozen=True)
class Parallelotope:
    """Affine image of the unit cube: base point plus generator columns."""

    base: Vec
    generators: Mat

    def __post_init__(self):
        check_dimension(self.generators.n)
        if self.generators.det() == 0:
            raise SingularMatrixError("parallelotope generators are degenerate")

    @classmethod
    def spanned_by(cls, v: Vec) -> "Parallelotope":
        """Parallelotope spanned by v and its cyclic coordinate shifts."""
        cols = [v]
        for _ in range(v.dim - 1):
            cols.append(cols[-1].cyclic_shift())
        return cls(Vec.zero(v.dim), Mat.from_columns(cols))

    @property
    def dim(self) -> int:
        return self.generators.n

    def far_corner(self) -> Vec:
        return self.base + (self.generators @ Vec.ones(self.dim))

    def corners(self) -> List[Vec]:
        n = self.dim
        cols = [self.generators.col(j) for j in range(n)]
        out = []
        for mask in range(1 << n):
            p = self.base
            for j in range(n):
                if (mask >> j) & 1:
                    p = p + cols[j]
            out.append(p)
        return out

    def translate(self, v: Vec) -> "Parallelotope":
        return Parallelotope(self.base + v, self.generators)

    def scale(self, c: RatLike) -> "Parallelotope":
        """Scale about the origin (not about the base point)."""
        c = as_rat(c)
        return Parallelotope(c * self.base, c * self.generators)

    def image(self, m: Mat, shift: Optional[Vec] = None) -> "Parallelotope":
        shift = shift if shift is not None else Vec.zero(self.dim)
        return Parallelotope((m @ self.base) + shift, m @ self.generators)

    def volume(self) -> Rat:
        return abs(self.generators.det())

    def as_cell(self) -> ConvexCell:
        """H-representation via the inverse generator rows; 2n facets, 2^n vertices."""
        g_inv = self.generators.inverse()
        hs = []
        for i in range(self.dim):
            row = g_inv.row(i)
            level = row.dot(self.base)
            hs.append(HalfSpace.make(row.entries, level + 1))
            hs.append(HalfSpace.make((-row).entries, -level))
        return ConvexCell(hs, self.corners())

    def contains(self, x: Vec) -> bool:
        u = self.generators.inverse() @ (x - self.base)
        return all(0 <= ui <= 1 for ui in u)


class Region:
    """Finite union of pairwise interior-disjoint convex cells."""

    def __init__(
        self,
        cells: Sequence[ConvexCell],
        frame: Optional[Parallelotope] = None,
        metadata: Optional[dict] = None,
    ):
        if not cells:
            raise ParameterError("a region needs at least one cell")
        dims = {c.dim for c in cells}
        if len(dims) != 1:
            raise ParameterError("all cells must share one dimension")
        self.cells: Tuple[ConvexCell, ...] = tuple(cells)
        self.frame = frame
        self.metadata = dict(metadata or {})

    @property
    def dim(self) -> int:
        return self.cells[0].dim

    def volume(self) -> Rat:
        return sum((c.volume() for c in self.cells), Fraction(0))

    def contains_point(self, x: Vec) -> bool:
        return any(c.contains(x) for c in self.cells)

    def bounding_box(self) -> Tuple[Vec, Vec]:
        boxes = [c.bounding_box() for c in self.cells]
        n = self.dim
        lo = Vec(tuple(min(b[0][i] for b in boxes) for i in range(n)))
        hi = Vec(tuple(max(b[1][i] for b in boxes) for i in range(n)))
        return lo, hi

    def translate(self, v: Vec) -> "Region":
        frame = self.frame.translate(v) if self.frame else None
        return Region([c.translate(v) for c in self.cells], frame, self.metadata)

    def affine_image(self, m: Mat, shift: Optional[Vec] = None) -> "Region":
        frame = self.frame.image(m, shift) if self.frame else None
        return Region(
            [c.affine_image(m, shift) for c in self.cells], frame, self.metadata
        )

    def subtract_convex(self, hole: ConvexCell) -> "Region":
        cells = []
        for c in self.cells:
            cells.extend(subtract_convex(c, hole))
        return Region(cells, self.frame, self.metadata)

    def with_metadata(self, **kwargs) -> "Region":
        md = dict(self.metadata)
        md.update(kwargs)
        return Region(self.cells, self.frame, md)

    def validate(self) -> None:
        """Check the region invariants; raises on violation.

        Intended for regions parsed from external H-representations: each
        cell must be bounded and full-dimensional and the cells pairwise
        interior-disjoint.
        """
        for i, c in enumerate(self.cells):
            if not c.is_bounded():
                raise UnboundedCellError(f"cell {i} is unbounded")
            if c.interior_empty():
                raise ParameterError(f"cell {i} is lower-dimensional")
        for i in range(len(self.cells)):
            for j in range(i + 1, len(self.cells)):
                inter = self.cells[i].intersect(self.cells[j])
                if inter is not None:
                    raise ParameterError(f"cells {i} and {j} overlap")

    def __repr__(self) -> str:
        return f"Region(dim={self.dim}, cells={len(self.cells)})"


@dataclass(frozen=True)
class Lattice:
    """Full-rank lattice spanned by the columns of a basis matrix."""

    basis: Mat

    def __post_init__(self):
        if self.basis.det() == 0:
            raise SingularMatrixError("lattice basis is singular")

    @staticmethod
    def integer(n: int) -> "Lattice":
        return Lattice(Mat.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.n

    def covolume(self) -> Rat:
        return abs(self.basis.det())

    def vectors_in_box(
        self, lo: Vec, hi: Vec, strict: bool = False
    ) -> List[Tuple[Vec, Vec]]:
        """All (z, basis@z) with the lattice vector inside [lo, hi].

        ``strict`` restricts to the open box.  Candidate integer coefficients
        come from the exact preimage of the box corners under the basis.
        """
        n = self.dim
        inv = self.basis.inverse()
        corners = [
            Vec(tuple(hi[i] if (mask >> i) & 1 else lo[i] for i in range(n)))
            for mask in range(1 << n)
        ]
        pre = [inv @ c for c in corners]
        z_lo = [math.ceil(min(p[i] for p in pre)) for i in range(n)]
        z_hi = [math.floor(max(p[i] for p in pre)) for i in range(n)]
        out = []
        for zt in itertools.product(
            *(range(z_lo[i], z_hi[i] + 1) for i in range(n))
        ):
            z = Vec.of(zt)
            x = self.basis @ z
            ok = all(
                (lo[i] < x[i] < hi[i]) if strict else (lo[i] <= x[i] <= hi[i])
                for i in range(n)
            )
            if ok:
                out.append((z, x))
        return out


# -- module-level operations ------------------------------------------------


def parallelotope_of(v: Vec) -> Parallelotope:
    """Parallelotope spanned by v and its cyclic shifts, based at the origin."""
    return Parallelotope.spanned_by(v)


def cell_from_parallelotope(p: Parallelotope) -> ConvexCell:
    return p.as_cell()


def affine_image(cell: ConvexCell, m: Mat, shift: Optional[Vec] = None) -> ConvexCell:
    return cell.affine_image(m, shift)


def intersect(c1: ConvexCell, c2: ConvexCell) -> Optional[ConvexCell]:
    return c1.intersect(c2)


def interior_slack(cell: ConvexCell) -> Tuple[Rat, Optional[Vec]]:
    """Solve max eps s.t. normal.x + eps <= offset over all halfspaces.

    The optimum is positive exactly when the cell has an interior point; the
    maximizer is returned as an exact witness.  Raises UnboundedCellError for
    H-representations with unbounded slack (malformed cells).
    """
    n = cell.dim
    A = []
    b = []
    for h in cell.halfspaces:
        A.append([Fraction(a) for a in h.normal] + [Fraction(1)])
        b.append(h.offset)
    c = [Fraction(0)] * n + [Fraction(1)]
    res = lp.lp_maximize(c, A, b)
    if res.status == lp.UNBOUNDED:
        raise UnboundedCellError("interior LP unbounded; cell is malformed")
    if res.status != lp.OPTIMAL:
        raise UnboundedCellError(f"interior LP failed: {res.status}")
    return res.value, Vec(tuple(res.x[:n]))


def interior_empty(cell: ConvexCell) -> bool:
    return cell.interior_empty()


def enumerate_vertices(
    cell: ConvexCell, facet_cap: int = FACET_CAP
) -> List[Vec]:
    """All vertices of a bounded cell by exact n-subset solving.

    Every n-subset of facet hyperplanes is solved with integer-determinant
    Cramer elimination; solutions satisfying every constraint are kept and
    deduplicated.  Guarded by the facet cap since the subset count is
    combinatorial.
    """
    hs = cell.halfspaces
    n = cell.dim
    if len(hs) > facet_cap:
        raise ComplexityGuardError(
            f"{len(hs)} facets exceeds the enumeration cap {facet_cap}"
        )
    normals = [h.normal for h in hs]
    offsets = [h.offset for h in hs]
    found: Dict[tuple, Vec] = {}
    for idx in itertools.combinations(range(len(hs)), n):
        x = solve_int_system([normals[i] for i in idx], [offsets[i] for i in idx])
        if x is None or x.entries in found:
            continue
        if all(h.slack(x) >= 0 for h in hs):
            found[x.entries] = x
    return sorted(found.values(), key=lambda v: v.entries)


def cell_volume(cell: ConvexCell) -> Rat:
    """Exact volume by fanning facet triangulations from a base vertex.

    Facets (and recursively their faces) are read off the halfspace
    incidence structure; each face is triangulated by a fan from its
    lexicographically smallest vertex, and each resulting boundary simplex
    is coned to the cell's base vertex.  Lower-dimensional cells get 0.
    """
    verts = cell.vertices
    n = cell.dim
    if len(verts) <= n or affine_rank(verts) < n:
        return Fraction(0)
    base = verts[0]
    total = Fraction(0)
    seen_facets = set()
    for h in cell.halfspaces:
        facet = tuple(v for v in verts if h.slack(v) == 0)
        if len(facet) < n or facet in seen_facets:
            continue
        seen_facets.add(facet)
        if base in facet or affine_rank(facet) != n - 1:
            continue
        for simplex in _triangulate_face(cell, facet, n - 1):
            rows = [tuple(p - base) for p in simplex]
            total += abs(det_of_rows(rows))
    return total / math.factorial(n)


def _triangulate_face(
    cell: ConvexCell, face: Tuple[Vec, ...], k: int
) -> List[Tuple[Vec, ...]]:
    """Triangulate a k-face (vertices sorted) into k-simplices, exactly."""
    if len(face) == k + 1:
        return [face]
    u0 = face[0]
    subfaces: Dict[tuple, Tuple[Vec, ...]] = {}
    for h in cell.halfspaces:
        sub = tuple(v for v in face if h.slack(v) == 0)
        if len(sub) < k or len(sub) == len(face) or u0 in sub:
            continue
        key = tuple(v.entries for v in sub)
        if key in subfaces:
            continue
        if affine_rank(sub) != k - 1:
            continue
        subfaces[key] = sub
    out = []
    for sub in subfaces.values():
        for t in _triangulate_face(cell, sub, k - 1):
            out.append((u0,) + t)
    return out


def subtract_convex(cell: ConvexCell, hole: ConvexCell) -> List[ConvexCell]:
    """Decompose cell minus hole into interior-disjoint cells.

    Sequential cuts in the canonical (lexicographic) order of the hole's
    facets: piece i lies outside facet i and inside facets 1..i-1.  Cells
    not meeting the hole's interior pass through unchanged; empty and
    degenerate pieces are dropped.
    """
    if cell.intersect(hole) is None:
        return [cell]
    pieces: List[ConvexCell] = []
    running: Optional[ConvexCell] = cell
    for f in sorted(hole.halfspaces):
        piece = running.cut(f.flip())
        if piece is not None:
            pieces.append(piece)
        running = running.cut(f)
        if running is None:
            break
    return pieces


def region_subtract_convex(region: Region, hole: ConvexCell) -> Region:
    return region.subtract_convex(hole)


def region_volume(region: Region) -> Rat:
    return region.volume()


def region_contains_point(region: Region, x: Vec) -> bool:
    return region.contains_point(x)


def region_bounding_box(region: Region) -> Tuple[Vec, Vec]:
    return region.bounding_box()


def boxes_overlap_interior(
    b1: Tuple[Vec, Vec], b2: Tuple[Vec, Vec], shift: Optional[Vec] = None
) -> bool:
    """Strict per-axis overlap of two bounding boxes (b2 optionally shifted)."""
    lo1, hi1 = b1
    lo2, hi2 = b2
    n = lo1.dim
    if shift is None:
        return all(max(lo1[i], lo2[i]) < min(hi1[i], hi2[i]) for i in range(n))
    return all(
        max(lo1[i], lo2[i] + shift[i]) < min(hi1[i], hi2[i] + shift[i])
        for i in range(n)
    )


def cells_interior_disjoint(
    c1: ConvexCell, c2: ConvexCell
) -> Tuple[bool, Optional[Vec]]:
    """Interior-disjointness with an exact interior witness on overlap."""
    if not boxes_overlap_interior(c1.bounding_box(), c2.bounding_box()):
        return True, None
    inter = c1.intersect(c2)
    if inter is None:
        return True, None
    return False, inter.interior_point()


def regions_interior_disjoint(
    r1: Region, r2: Region
) -> Tuple[bool, Optional[Vec]]:
    """True when every cell pair has interior-empty intersection."""
    for c1 in r1.cells:
        for c2 in r2.cells:
            ok, witness = cells_interior_disjoint(c1, c2)
            if not ok:
                return False, witness
    return True, None
