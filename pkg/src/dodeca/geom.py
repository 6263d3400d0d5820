"""Exact planar primitives over Q[sqrt(3)].

Points, lines, affine maps and open polygonal regions (bounded simple
polygons, and unbounded convex regions represented as a vertex chain with
an entry and an exit ray).  All predicates are exact sign computations in
the field; no tolerances appear anywhere.

Open-set semantics: a Region denotes the open set; its boundary is shared
with neighbouring regions and is excluded from classification hits.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .field import ONE, QS3, ZERO, pair_sign, qs3_parse

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"


class Point:
    """Exact point (or vector) with QS3 coordinates."""

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = x if isinstance(x, QS3) else QS3(x)
        self.y = y if isinstance(y, QS3) else QS3(y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point":
        return Point(-self.x, -self.y)

    def scaled(self, k) -> "Point":
        return Point(self.x * k, self.y * k)

    def dot(self, other: "Point") -> QS3:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Point") -> QS3:
        return self.x * other.y - self.y * other.x

    def cross_sign(self, other: "Point") -> int:
        """Exact sign of the cross product, on raw integers."""
        ax, ay, bx, by = self.x, self.y, other.x, other.y
        a1 = ax.p * by.p + 3 * ax.q * by.q
        b1 = ax.p * by.q + ax.q * by.p
        d1 = ax.r * by.r
        a2 = ay.p * bx.p + 3 * ay.q * bx.q
        b2 = ay.p * bx.q + ay.q * bx.p
        d2 = ay.r * bx.r
        return pair_sign(a1 * d2 - a2 * d1, b1 * d2 - b2 * d1)

    def norm2(self) -> QS3:
        return self.x * self.x + self.y * self.y

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        return hash((self.x, self.y))

    def key(self):
        return (self.x.key(), self.y.key())

    def literal(self) -> str:
        return f"{self.x.literal()},{self.y.literal()}"

    def __repr__(self):
        return f"Point({self.x}, {self.y})"

    @staticmethod
    def parse(text: str) -> "Point":
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"bad point literal: {text!r}")
        return Point(qs3_parse(parts[0]), qs3_parse(parts[1]))


def primitive_dir(d: Point) -> Point:
    """Canonical representative of a ray direction (positive scaling)."""
    if d.x.is_zero() and d.y.is_zero():
        raise ValueError("zero direction")
    lead = d.x if not d.x.is_zero() else d.y
    return d.scaled(ONE / abs(lead))


class Line:
    """Line {p : nx*x + ny*y = c}.  Oriented: eval() > 0 is the left side."""

    __slots__ = ("nx", "ny", "c")

    def __init__(self, nx: QS3, ny: QS3, c: QS3):
        if nx.is_zero() and ny.is_zero():
            raise ValueError("degenerate line")
        self.nx = nx
        self.ny = ny
        self.c = c

    @staticmethod
    def through(a: Point, b: Point) -> "Line":
        """Line through a and b, positive side to the left of a -> b."""
        nx = a.y - b.y
        ny = b.x - a.x
        return Line(nx, ny, nx * a.x + ny * a.y)

    def eval(self, p: Point) -> QS3:
        return self.nx * p.x + self.ny * p.y - self.c

    def side(self, p: Point) -> int:
        """Exact sign of eval(p), on raw integers (no field allocations)."""
        nx, ny, c = self.nx, self.ny, self.c
        px, py = p.x, p.y
        a1 = nx.p * px.p + 3 * nx.q * px.q
        b1 = nx.p * px.q + nx.q * px.p
        d1 = nx.r * px.r
        a2 = ny.p * py.p + 3 * ny.q * py.q
        b2 = ny.p * py.q + ny.q * py.p
        d2 = ny.r * py.r
        d12 = d1 * d2
        cr = c.r
        return pair_sign(
            (a1 * d2 + a2 * d1) * cr - c.p * d12,
            (b1 * d2 + b2 * d1) * cr - c.q * d12,
        )

    def eval_dir(self, d: Point) -> QS3:
        return self.nx * d.x + self.ny * d.y

    def reversed(self) -> "Line":
        return Line(-self.nx, -self.ny, -self.c)

    def direction(self) -> Point:
        """A direction vector of the line (left side stays on the left)."""
        return Point(self.ny, -self.nx)

    def canonical_key(self):
        """Key identifying the unoriented line."""
        lead = self.nx if not self.nx.is_zero() else self.ny
        inv = ONE / lead
        return ((self.nx * inv).key(), (self.ny * inv).key(), (self.c * inv).key())

    def intersect(self, other: "Line") -> Point:
        det = self.nx * other.ny - self.ny * other.nx
        if det.is_zero():
            raise ValueError("parallel lines")
        x = (self.c * other.ny - other.c * self.ny) / det
        y = (self.nx * other.c - other.nx * self.c) / det
        return Point(x, y)

    def __repr__(self):
        return f"Line({self.nx}, {self.ny}, {self.c})"


class AffMap:
    """Exact affine map x -> M x + t over QS3."""

    __slots__ = ("m00", "m01", "m10", "m11", "tx", "ty")

    def __init__(self, m00, m01, m10, m11, tx, ty):
        self.m00 = m00
        self.m01 = m01
        self.m10 = m10
        self.m11 = m11
        self.tx = tx
        self.ty = ty

    @staticmethod
    def identity() -> "AffMap":
        return AffMap(ONE, ZERO, ZERO, ONE, ZERO, ZERO)

    @staticmethod
    def translation(v: Point) -> "AffMap":
        return AffMap(ONE, ZERO, ZERO, ONE, v.x, v.y)

    @staticmethod
    def rotation(cos_v: QS3, sin_v: QS3, center: Point) -> "AffMap":
        tx = center.x - (cos_v * center.x - sin_v * center.y)
        ty = center.y - (sin_v * center.x + cos_v * center.y)
        return AffMap(cos_v, -sin_v, sin_v, cos_v, tx, ty)

    @staticmethod
    def point_reflection(center: Point) -> "AffMap":
        return AffMap(-ONE, ZERO, ZERO, -ONE, center.x + center.x, center.y + center.y)

    @staticmethod
    def homothety(center: Point, ratio: QS3) -> "AffMap":
        return AffMap(
            ratio,
            ZERO,
            ZERO,
            ratio,
            center.x * (ONE - ratio),
            center.y * (ONE - ratio),
        )

    def apply(self, p: Point) -> Point:
        return Point(
            self.m00 * p.x + self.m01 * p.y + self.tx,
            self.m10 * p.x + self.m11 * p.y + self.ty,
        )

    def apply_vec(self, d: Point) -> Point:
        return Point(self.m00 * d.x + self.m01 * d.y, self.m10 * d.x + self.m11 * d.y)

    def compose(self, inner: "AffMap") -> "AffMap":
        """self o inner."""
        return AffMap(
            self.m00 * inner.m00 + self.m01 * inner.m10,
            self.m00 * inner.m01 + self.m01 * inner.m11,
            self.m10 * inner.m00 + self.m11 * inner.m10,
            self.m10 * inner.m01 + self.m11 * inner.m11,
            self.m00 * inner.tx + self.m01 * inner.ty + self.tx,
            self.m10 * inner.tx + self.m11 * inner.ty + self.ty,
        )

    def det(self) -> QS3:
        return self.m00 * self.m11 - self.m01 * self.m10

    def inverse(self) -> "AffMap":
        d = self.det()
        if d.is_zero():
            raise ValueError("non-invertible affine map")
        i00 = self.m11 / d
        i01 = -self.m01 / d
        i10 = -self.m10 / d
        i11 = self.m00 / d
        return AffMap(
            i00,
            i01,
            i10,
            i11,
            -(i00 * self.tx + i01 * self.ty),
            -(i10 * self.tx + i11 * self.ty),
        )

    def fixed_point(self) -> Point:
        """Solve (I - M) p = t; fails when 1 is an eigenvalue of M."""
        a = ONE - self.m00
        b = -self.m01
        c = -self.m10
        d = ONE - self.m11
        det = a * d - b * c
        if det.is_zero():
            raise ValueError("map has no unique fixed point")
        return Point((self.tx * d - b * self.ty) / det, (a * self.ty - c * self.tx) / det)

    def is_isometry(self) -> bool:
        c0 = self.m00 * self.m00 + self.m10 * self.m10
        c1 = self.m01 * self.m01 + self.m11 * self.m11
        dot = self.m00 * self.m01 + self.m10 * self.m11
        return c0 == ONE and c1 == ONE and dot.is_zero()

    def is_translation(self) -> bool:
        return (
            self.m00 == ONE
            and self.m11 == ONE
            and self.m01.is_zero()
            and self.m10.is_zero()
        )

    def __eq__(self, other):
        if not isinstance(other, AffMap):
            return NotImplemented
        return (
            self.m00 == other.m00
            and self.m01 == other.m01
            and self.m10 == other.m10
            and self.m11 == other.m11
            and self.tx == other.tx
            and self.ty == other.ty
        )

    def __hash__(self):
        return hash(
            (
                self.m00.key(),
                self.m01.key(),
                self.m10.key(),
                self.m11.key(),
                self.tx.key(),
                self.ty.key(),
            )
        )

    def __repr__(self):
        return (
            f"AffMap([[{self.m00}, {self.m01}], [{self.m10}, {self.m11}]], "
            f"t=({self.tx}, {self.ty}))"
        )


def _dedupe_cycle(pts):
    out = []
    for p in pts:
        if not out or p != out[-1]:
            out.append(p)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out


def _strip_collinear_cycle(pts):
    pts = _dedupe_cycle(pts)
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        out = []
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if (b - a).cross(c - b).is_zero():
                changed = True
            else:
                out.append(b)
        pts = out
    return pts


def _cycle_signed_area2(pts) -> QS3:
    total = ZERO
    n = len(pts)
    for i in range(n):
        total = total + pts[i].cross(pts[(i + 1) % n])
    return total


class Region:
    """Open polygonal region: bounded simple polygon or unbounded convex chain.

    Bounded: counter-clockwise vertex cycle, no collinear triples.
    Unbounded: boundary enters from infinity along ``entry_dir`` into
    ``vertices[0]``, walks the chain, and leaves ``vertices[-1]`` along
    ``exit_dir`` (interior on the left).  Unbounded regions must be convex;
    every algorithm in this package only ever produces convex unbounded
    pieces.
    """

    __slots__ = (
        "vertices",
        "entry_dir",
        "exit_dir",
        "_key",
        "_area",
        "_tris",
        "_fbox",
        "_convex",
    )

    def __init__(self, vertices, entry_dir=None, exit_dir=None, _skip_checks=False):
        self.vertices = tuple(vertices)
        self.entry_dir = entry_dir
        self.exit_dir = exit_dir
        self._key = None
        self._area = None
        self._tris = None
        self._fbox = None
        self._convex = None
        if not _skip_checks:
            if (entry_dir is None) != (exit_dir is None):
                raise ValueError("entry/exit rays must be given together")

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def bounded(points) -> "Region":
        pts = _strip_collinear_cycle(list(points))
        if len(pts) < 3:
            raise ValueError("degenerate bounded region")
        if _cycle_signed_area2(pts).sign() < 0:
            pts.reverse()
        return Region(pts, _skip_checks=True)

    @staticmethod
    def unbounded(entry_dir: Point, points, exit_dir: Point) -> "Region":
        entry_dir = primitive_dir(entry_dir)
        exit_dir = primitive_dir(exit_dir)
        pts = []
        for p in points:
            if not pts or p != pts[-1]:
                pts.append(p)
        # merge the entry ray with a collinear first edge
        while len(pts) >= 2:
            d = pts[1] - pts[0]
            if entry_dir.cross(d).is_zero() and entry_dir.dot(d).sign() < 0:
                pts.pop(0)
            else:
                break
        while len(pts) >= 2:
            d = pts[-1] - pts[-2]
            if exit_dir.cross(d).is_zero() and exit_dir.dot(d).sign() > 0:
                pts.pop()
            else:
                break
        # drop interior collinear vertices
        i = 1
        while i + 1 < len(pts):
            if (pts[i] - pts[i - 1]).cross(pts[i + 1] - pts[i]).is_zero():
                pts.pop(i)
            else:
                i += 1
        if not pts:
            raise ValueError("unbounded region needs at least one vertex")
        reg = Region(pts, entry_dir, exit_dir, _skip_checks=True)
        if not reg._supports_all():
            raise ValueError("unbounded region must be convex")
        return reg

    @staticmethod
    def wedge(apex: Point, entry_dir: Point, exit_dir: Point) -> "Region":
        return Region.unbounded(entry_dir, [apex], exit_dir)

    # -- basic queries ----------------------------------------------------------

    @property
    def is_bounded(self) -> bool:
        return self.entry_dir is None

    def boundary_lines(self):
        """Oriented boundary lines, interior on the positive side."""
        pts = self.vertices
        lines = []
        if self.is_bounded:
            n = len(pts)
            for i in range(n):
                lines.append(Line.through(pts[i], pts[(i + 1) % n]))
        else:
            e = self.entry_dir
            lines.append(Line(e.y, -e.x, e.y * pts[0].x - e.x * pts[0].y))
            for i in range(len(pts) - 1):
                lines.append(Line.through(pts[i], pts[i + 1]))
            x = self.exit_dir
            lines.append(Line(-x.y, x.x, -x.y * pts[-1].x + x.x * pts[-1].y))
        # drop duplicated supporting lines (collinear entry ray and edge)
        seen = set()
        out = []
        for ln in lines:
            k = ln.canonical_key()
            if k not in seen:
                seen.add(k)
                out.append(ln)
        return out

    def is_convex(self) -> bool:
        if self._convex is None:
            if not self.is_bounded:
                self._convex = True
            else:
                pts = self.vertices
                n = len(pts)
                self._convex = all(
                    (pts[i] - pts[i - 1]).cross(pts[(i + 1) % n] - pts[i]).sign() > 0
                    for i in range(n)
                )
        return self._convex

    def _supports_all(self) -> bool:
        for ln in self.boundary_lines():
            for p in self.vertices:
                if ln.side(p) < 0:
                    return False
            if not self.is_bounded:
                if ln.eval_dir(self.entry_dir).sign() < 0:
                    return False
                if ln.eval_dir(self.exit_dir).sign() < 0:
                    return False
        return True

    def area2(self) -> QS3:
        """Twice the area (exact)."""
        if not self.is_bounded:
            raise ValueError("area of unbounded region")
        if self._area is None:
            self._area = _cycle_signed_area2(self.vertices)
        return self._area

    def area(self) -> QS3:
        return self.area2() / 2

    def centroid(self) -> Point:
        if not self.is_bounded:
            raise ValueError("centroid of unbounded region")
        pts = self.vertices
        n = len(pts)
        sx = ZERO
        sy = ZERO
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            w = a.cross(b)
            sx = sx + (a.x + b.x) * w
            sy = sy + (a.y + b.y) * w
        denom = self.area2() * 3
        return Point(sx / denom, sy / denom)

    # -- point classification ---------------------------------------------------

    def classify(self, p: Point) -> str:
        if self.is_bounded:
            return self._classify_bounded(p)
        return self._classify_convex_lines(p)

    def _classify_convex_lines(self, p: Point) -> str:
        any_zero = False
        for ln in self.boundary_lines():
            s = ln.side(p)
            if s < 0:
                return EXTERIOR
            if s == 0:
                any_zero = True
        return BOUNDARY if any_zero else INTERIOR

    def _classify_bounded(self, p: Point) -> str:
        pts = self.vertices
        n = len(pts)
        for i in range(n):
            if _on_segment(pts[i], pts[(i + 1) % n], p):
                return BOUNDARY
        if self.is_convex():
            return INTERIOR if all(
                Line.through(pts[i], pts[(i + 1) % n]).side(p) > 0 for i in range(n)
            ) else EXTERIOR
        # even-odd crossing count with an upward vertical ray
        inside = False
        for i in range(n):
            a, b = pts[i], pts[(i + 1) % n]
            ay_gt = (a.y - p.y).sign() > 0
            by_gt = (b.y - p.y).sign() > 0
            if ay_gt != by_gt:
                # x coordinate of the crossing, compared exactly to p.x
                t_num = p.y - a.y
                t_den = b.y - a.y
                xc_minus_px = (a.x - p.x) + (b.x - a.x) * (t_num / t_den)
                if xc_minus_px.sign() > 0:
                    inside = not inside
        return INTERIOR if inside else EXTERIOR

    # -- transforms -------------------------------------------------------------

    def transformed(self, f: AffMap) -> "Region":
        pts = [f.apply(p) for p in self.vertices]
        if f.det().sign() > 0:
            # invertible orientation-preserving maps keep the normal form
            # (orientation, collinearity, ray merging) intact
            if self.is_bounded:
                return Region(pts, _skip_checks=True)
            return Region(
                pts,
                primitive_dir(f.apply_vec(self.entry_dir)),
                primitive_dir(f.apply_vec(self.exit_dir)),
                _skip_checks=True,
            )
        if self.is_bounded:
            pts.reverse()
            return Region.bounded(pts)
        e = f.apply_vec(self.entry_dir)
        x = f.apply_vec(self.exit_dir)
        pts.reverse()
        return Region.unbounded(x, pts, e)

    # -- canonical form -----------------------------------------------------------

    def canonical_key(self):
        if self._key is None:
            vk = tuple(p.key() for p in self.vertices)
            if self.is_bounded:
                n = len(vk)
                best = min(range(n), key=lambda i: vk[i:] + vk[:i])
                self._key = ("B", vk[best:] + vk[:best])
            else:
                self._key = ("U", self.entry_dir.key(), vk, self.exit_dir.key())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Region):
            return NotImplemented
        return self.canonical_key() == other.canonical_key()

    def __hash__(self):
        return hash(self.canonical_key())

    def __repr__(self):
        kind = "bounded" if self.is_bounded else "unbounded"
        return f"Region({kind}, {len(self.vertices)} vertices)"

    # -- misc helpers ----------------------------------------------------------

    def triangles(self):
        """Ear-clipping triangulation (bounded regions), cached."""
        if not self.is_bounded:
            raise ValueError("cannot triangulate unbounded region")
        if self._tris is None:
            self._tris = _triangulate(list(self.vertices))
        return self._tris

    def convex_parts(self):
        """A convex decomposition: the region itself if convex, else triangles."""
        if not self.is_bounded:
            return [self]
        if self.is_convex():
            return [self]
        return [Region.bounded(t) for t in self.triangles()]

    def interior_point(self) -> Point:
        if self.is_bounded:
            if self.is_convex():
                return self.centroid()
            best = max(self.triangles(), key=lambda t: _tri_area2(*t))
            return Point(
                (best[0].x + best[1].x + best[2].x) / 3,
                (best[0].y + best[1].y + best[2].y) / 3,
            )
        # push inward from the chain using both ray directions
        base = self.vertices[0]
        shift = self.entry_dir + self.exit_dir
        for p in self.vertices[1:]:
            shift = shift + (p - base)
        for den in (1 + len(self.vertices), 2, 1, 7, 23):
            cand = base + shift.scaled(Fraction(1, den))
            if self.classify(cand) == INTERIOR:
                return cand
        raise ValueError("failed to find interior point")

    def float_bbox(self):
        """Conservative float bounding box (bounded regions only)."""
        if self._fbox is None:
            xs = [float(p.x) for p in self.vertices]
            ys = [float(p.y) for p in self.vertices]
            pad = 1e-9 * (1.0 + max(abs(v) for v in xs + ys))
            self._fbox = (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)
        return self._fbox


def _on_segment(a: Point, b: Point, p: Point) -> bool:
    d = b - a
    w = p - a
    if not d.cross(w).is_zero():
        return False
    t = d.dot(w)
    return t.sign() >= 0 and (t - d.norm2()).sign() <= 0


def _tri_area2(a: Point, b: Point, c: Point) -> QS3:
    return (b - a).cross(c - a)


def _point_in_closed_tri(a, b, c, p) -> bool:
    s1 = _tri_area2(a, b, p).sign()
    s2 = _tri_area2(b, c, p).sign()
    s3 = _tri_area2(c, a, p).sign()
    return s1 >= 0 and s2 >= 0 and s3 >= 0


def _triangulate(pts):
    tris = []
    idx = list(range(len(pts)))
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > 4 * len(pts) * len(pts):
            raise ValueError("triangulation failed; polygon not simple?")
        n = len(idx)
        clipped = False
        for j in range(n):
            i0, i1, i2 = idx[j - 1], idx[j], idx[(j + 1) % n]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if _tri_area2(a, b, c).sign() <= 0:
                continue
            ok = True
            for k in idx:
                if k in (i0, i1, i2):
                    continue
                if _point_in_closed_tri(a, b, c, pts[k]):
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                idx.pop(j)
                clipped = True
                break
        if not clipped:
            raise ValueError("no ear found; polygon not simple?")
    tris.append((pts[idx[0]], pts[idx[1]], pts[idx[2]]))
    return tris


# -- halfplane clipping -------------------------------------------------------


def _cross_point(a: Point, b: Point, sa: QS3, sb: QS3) -> Point:
    t = sa / (sa - sb)
    return Point(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t)


def clip_convex(region: Region, line: Line, keep: int) -> Region | None:
    """Intersect a convex region with the closed halfplane keep*eval >= 0.

    Returns None when the intersection has empty interior.  Works for both
    bounded and unbounded convex regions; the result is again convex.
    """
    if region.is_bounded:
        return _clip_convex_bounded(region, line, keep)
    return _clip_unbounded(region, line, keep)


def _clip_convex_bounded(region: Region, line: Line, keep: int) -> Region | None:
    pts = region.vertices
    sigs = [line.side(p) * keep for p in pts]
    if all(s >= 0 for s in sigs):
        return region if any(s > 0 for s in sigs) else None
    if all(s <= 0 for s in sigs):
        return None
    out = []
    n = len(pts)
    for i in range(n):
        j = (i + 1) % n
        if sigs[i] >= 0:
            out.append(pts[i])
        if sigs[i] * sigs[j] < 0:
            out.append(
                _cross_point(pts[i], pts[j], line.eval(pts[i]), line.eval(pts[j]))
            )
    try:
        return Region.bounded(out)
    except ValueError:
        return None


def _clip_unbounded(region: Region, line: Line, keep: int) -> Region | None:
    """Clip a convex unbounded region by a halfplane.

    The extended boundary (entry ray, vertex chain, exit ray) meets the cut
    line at most twice, so the kept part is one contiguous walk; crossings
    are inserted in boundary order and the cut line supplies replacement
    rays when an original ray is lost.
    """
    pts = region.vertices
    m = len(pts)
    sigs = [line.side(p) * keep for p in pts]
    ve = line.eval_dir(region.entry_dir)
    vx = line.eval_dir(region.exit_dir)
    se = ve.sign() * keep or sigs[0]
    sx = vx.sign() * keep or sigs[-1]

    all_sigs = [se] + sigs + [sx]
    if all(s >= 0 for s in all_sigs):
        return region if any(s > 0 for s in all_sigs) else None
    if all(s <= 0 for s in all_sigs):
        return None

    # boundary direction along the cut line with the kept side on the left
    d_close = Point(line.ny, -line.nx)
    if keep < 0:
        d_close = -d_close

    chain = []
    if se * sigs[0] < 0:
        t = -line.eval(pts[0]) / ve
        chain.append(pts[0] + region.entry_dir.scaled(t))
    for i in range(m):
        if sigs[i] >= 0:
            chain.append(pts[i])
        if i + 1 < m and sigs[i] * sigs[i + 1] < 0:
            chain.append(
                _cross_point(
                    pts[i], pts[i + 1], line.eval(pts[i]), line.eval(pts[i + 1])
                )
            )
    if sigs[-1] * sx < 0:
        t = -line.eval(pts[-1]) / vx
        chain.append(pts[-1] + region.exit_dir.scaled(t))

    try:
        if se < 0 and sx < 0:
            return Region.bounded(chain)
        entry_dir = region.entry_dir if se >= 0 else -d_close
        exit_dir = region.exit_dir if sx >= 0 else d_close
        return Region.unbounded(entry_dir, chain, exit_dir)
    except ValueError:
        return None


def intersect_convex(a: Region, b_convex: Region) -> Region | None:
    """Intersection of a convex region with another convex region."""
    out = a
    for ln in b_convex.boundary_lines():
        out = clip_convex(out, ln, +1)
        if out is None:
            return None
    return out


# -- generic region splitting --------------------------------------------------


def _clearly_one_sided(region: Region, line: Line) -> bool:
    """Float prefilter: True when the line certainly misses the region.

    Evaluates the line over the region's float bounding box with a wide
    safety margin; anything inconclusive falls through to the exact path.
    Bounded regions only.
    """
    x0, y0, x1, y1 = region.float_bbox()
    fnx, fny, fc = float(line.nx), float(line.ny), float(line.c)
    tx0, tx1 = fnx * x0, fnx * x1
    ty0, ty1 = fny * y0, fny * y1
    lo = min(tx0, tx1) + min(ty0, ty1) - fc
    hi = max(tx0, tx1) + max(ty0, ty1) - fc
    margin = 1e-6 * (1.0 + abs(fc) + max(abs(tx0), abs(tx1)) + max(abs(ty0), abs(ty1)))
    return lo > margin or hi < -margin


def split_region(region: Region, line: Line):
    """Split a region by a line into open subregions.

    Returns one region per connected component per side; their closures
    cover the closure of the input and their areas add up exactly.
    """
    if region.is_bounded and _clearly_one_sided(region, line):
        return [region]
    if not region.is_bounded or region.is_convex():
        pieces = []
        for keep in (+1, -1):
            piece = clip_convex(region, line, keep)
            if piece is not None:
                pieces.append(piece)
        return pieces
    pieces = _side_pieces_bounded(region, line, +1)
    pieces.extend(_side_pieces_bounded(region, line, -1))
    return pieces


def _side_pieces_bounded(region: Region, line: Line, keep: int):
    pts = region.vertices
    n = len(pts)
    sigs = [line.side(p) * keep for p in pts]
    if all(s >= 0 for s in sigs):
        return [region] if any(s > 0 for s in sigs) else []
    if all(s <= 0 for s in sigs):
        return []

    # boundary cycle with crossings inserted
    cyc = []  # (point, sig)
    for i in range(n):
        j = (i + 1) % n
        cyc.append((pts[i], sigs[i]))
        if sigs[i] * sigs[j] < 0:
            cyc.append(
                (
                    _cross_point(
                        pts[i], pts[j], line.eval(pts[i]), line.eval(pts[j])
                    ),
                    0,
                )
            )
    m = len(cyc)

    # maximal arcs with sig >= 0 containing at least one strictly positive node
    start = next(i for i in range(m) if cyc[i][1] < 0)
    order = [(start + k) % m for k in range(1, m + 1)]
    raw_arcs = []
    cur = []
    has_pos = False
    for i in order:
        p, s = cyc[i]
        if s >= 0:
            cur.append((p, s))
            has_pos = has_pos or s > 0
        else:
            if cur and has_pos:
                raw_arcs.append(cur)
            cur = []
            has_pos = False
    if cur and has_pos:
        raw_arcs.append(cur)
    if not raw_arcs:
        return []

    # boundary direction along the cut line with the kept side on the left
    d_close = Point(line.ny, -line.nx)
    if keep < 0:
        d_close = -d_close

    # split arcs at pinch points: an on-line reflex vertex (or an on-line
    # edge traversed against d_close) touches the line from the kept side
    # and disconnects the piece there
    arcs = []
    for arc in raw_arcs:
        cur = [arc[0]]
        for k in range(1, len(arc)):
            p, s = arc[k]
            prev_p, prev_s = arc[k - 1]
            if s == 0 and prev_s == 0:
                if d_close.dot(p - prev_p).sign() < 0:
                    arcs.append(cur)
                    cur = []
            elif s == 0 and 0 < k < len(arc) - 1:
                nxt_p, nxt_s = arc[k + 1]
                if (
                    prev_s > 0
                    and nxt_s > 0
                    and (p - prev_p).cross(nxt_p - p).sign() < 0
                ):
                    cur.append((p, s))
                    arcs.append(cur)
                    cur = []
            cur.append((p, s))
        if cur:
            arcs.append(cur)
    # a sub-arc that kept only on-line nodes borders the other side; drop it
    arcs = [
        [p for p, _ in arc] for arc in arcs if any(s > 0 for _, s in arc)
    ]
    if not arcs:
        return []

    # pair arc endpoints along the cut line: closing edges run in the
    # d_close direction from an arc end to the next arc start; at a pinch
    # (equal position) the start comes first
    taus = {}
    for aid, arc in enumerate(arcs):
        taus[(0, aid)] = d_close.dot(arc[0])  # start port
        taus[(1, aid)] = d_close.dot(arc[-1])  # end port
    ports = sorted(taus.keys(), key=lambda k: (taus[k], k[0]))
    if len(ports) % 2:
        raise ValueError("unbalanced ports in polygon split")
    next_arc = {}
    for i in range(0, len(ports), 2):
        (k1, a1), (k2, a2) = ports[i], ports[i + 1]
        if k1 != 1 or k2 != 0:
            raise ValueError("port alternation failed; polygon not simple?")
        next_arc[a1] = a2

    used = set()
    out = []
    for aid in range(len(arcs)):
        if aid in used:
            continue
        poly = []
        cur_id = aid
        while cur_id not in used:
            used.add(cur_id)
            poly.extend(arcs[cur_id])
            cur_id = next_arc[cur_id]
        try:
            out.append(Region.bounded(poly))
        except ValueError:
            pass
    return out


# -- containment / intersection areas -------------------------------------------


def _clip_poly_halfplane(pts, line: Line, keep: int):
    out = []
    n = len(pts)
    if n == 0:
        return out
    sigs = [line.side(p) * keep for p in pts]
    if all(s >= 0 for s in sigs):
        return list(pts)
    for i in range(n):
        j = (i + 1) % n
        if sigs[i] >= 0:
            out.append(pts[i])
        if sigs[i] * sigs[j] < 0:
            out.append(
                _cross_point(pts[i], pts[j], line.eval(pts[i]), line.eval(pts[j]))
            )
    return out


def intersection_area2(poly: Region, convex: Region) -> QS3:
    """Twice the area of poly ∩ convex (poly bounded, convex convex)."""
    total = ZERO
    for part in poly.convex_parts():
        pts = list(part.vertices)
        for ln in convex.boundary_lines():
            pts = _clip_poly_halfplane(pts, ln, +1)
            if len(pts) < 3:
                pts = []
                break
        if pts:
            total = total + _cycle_signed_area2(pts)
    return total


def overlap_status(poly: Region, target_parts, poly_area2: QS3 | None = None) -> str:
    """Trichotomy of a bounded region against a convex decomposition.

    target_parts: convex regions forming the target (disjoint interiors).
    Returns "inside", "disjoint" or "straddle" comparing exact areas.  A
    conservative float box test short-circuits the common far-away case.
    """
    pb = poly.float_bbox()
    near = [
        part
        for part in target_parts
        if part.is_bounded is False or _boxes_overlap_f(pb, part.float_bbox())
    ]
    if not near:
        return "disjoint"
    if poly_area2 is None:
        poly_area2 = poly.area2()
    acc = ZERO
    for part in near:
        acc = acc + intersection_area2(poly, part)
    s = acc.sign()
    if s == 0:
        return "disjoint"
    if acc == poly_area2:
        return "inside"
    return "straddle"


def _boxes_overlap_f(a, b) -> bool:
    return a[0] <= b[2] and b[0] <= a[2] and a[1] <= b[3] and b[1] <= a[3]


# -- operation-style aliases -----------------------------------------------


def classify_point(region: Region, p: Point) -> str:
    return region.classify(p)


def apply_map(f: AffMap, region: Region) -> Region:
    if f.det().is_zero():
        raise ValueError("non-invertible map applied to region")
    return region.transformed(f)


def region_equal(r1: Region, r2: Region) -> bool:
    return r1 is r2 or r1.canonical_key() == r2.canonical_key()


def area_and_centroid(region: Region):
    return region.area(), region.centroid()


# -- JSON encoding ----------------------------------------------------------------


def region_to_obj(region: Region) -> dict:
    obj = {
        "kind": "bounded" if region.is_bounded else "unbounded",
        "vertices": [[p.x.literal(), p.y.literal()] for p in region.vertices],
    }
    if not region.is_bounded:
        obj["entry_ray"] = [
            region.entry_dir.x.literal(),
            region.entry_dir.y.literal(),
        ]
        obj["exit_ray"] = [region.exit_dir.x.literal(), region.exit_dir.y.literal()]
    return obj


def region_from_obj(obj: dict) -> Region:
    pts = [Point(qs3_parse(x), qs3_parse(y)) for x, y in obj["vertices"]]
    if obj["kind"] == "bounded":
        return Region.bounded(pts)
    e = Point(qs3_parse(obj["entry_ray"][0]), qs3_parse(obj["entry_ray"][1]))
    x = Point(qs3_parse(obj["exit_ray"][0]), qs3_parse(obj["exit_ray"][1]))
    return Region.unbounded(e, pts, x)


def region_to_json(region: Region) -> str:
    return json.dumps(region_to_obj(region), separators=(",", ":"))


def region_from_json(text: str) -> Region:
    return region_from_obj(json.loads(text))
