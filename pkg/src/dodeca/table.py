"""The regular 12-gon table and its outer billiard map.

Gauge: circumradius 2, centre at the origin, vertex A_k at angle 30°*k.
With this gauge every derived point of the construction has coordinates in
Q[sqrt(3)].

Contents:

* ``Table``: the 12-gon, its side lines, the crossing points C_i of
  side lines four apart, the mirrored tables γ^i (the point reflections of
  the table through the C_i), the tangent-sector decomposition of the
  exterior, and the outer billiard map T (central symmetry through the
  supporting vertex) in both directions.

* ``WedgeSystem``: the quotient of T by the table's 12-fold rotational
  symmetry: a 30° wedge with apex A_1 on which T induces a piecewise
  isometry T' with six pieces alpha_1..alpha_6 (five rotations about the
  fixed points O_1..O_5 plus one translation), together with the invariant
  rocket hexagon Z' and the 60-vertex necklace region Z.

The piece maps are *derived* (fold T back into the wedge) rather than
hard-coded, and the construction asserts the expected identities, so a
successful build is itself a consistency check.
"""

from __future__ import annotations

from .errors import DomainError, GraneError, InconclusiveError
from .field import HALF, QS3, SQRT3_HALF, ZERO
from .geom import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    AffMap,
    Line,
    Point,
    Region,
    clip_convex,
    primitive_dir,
)

NUM_SIDES = 12

# rotation by 30 degrees about the origin
_ROT1 = AffMap(SQRT3_HALF, -HALF, HALF, SQRT3_HALF, ZERO, ZERO)

ROT = [AffMap.identity()]
for _ in range(NUM_SIDES - 1):
    ROT.append(_ROT1.compose(ROT[-1]))

# linear part -> rotation index, for recognising composed rotations
_ROT_INDEX = {
    (m.m00.key(), m.m01.key(), m.m10.key(), m.m11.key()): k for k, m in enumerate(ROT)
}


def rotation_index(f: AffMap):
    """Index k with linear part of f equal to rotation by 30°*k, else None."""
    return _ROT_INDEX.get((f.m00.key(), f.m01.key(), f.m10.key(), f.m11.key()))


class Table:
    """The 12-gon table, its exterior sectors and the billiard map T."""

    def __init__(self):
        self.vertices = tuple(ROT[k].apply(Point(QS3(2), ZERO)) for k in range(12))
        self.side_lines = tuple(
            Line.through(self.vertices[i], self.vertices[(i + 1) % 12])
            for i in range(12)
        )
        self.crossings = tuple(
            self.side_lines[(i - 2) % 12].intersect(self.side_lines[(i + 2) % 12])
            for i in range(12)
        )
        self.polygon = Region.bounded(self.vertices)
        self.mirrored = tuple(
            Region.bounded(self.mirror_vertex(i, k) for k in range(12))
            for i in range(12)
        )
        # tangent sector at A_i: cone between A_{i-1}->A_i extended and
        # A_{i+1}->A_i extended; equivalently dir_lo and its 30° rotation
        self._cone_lo = []
        self._cone_hi = []
        for i in range(12):
            d_lo = self.vertices[i - 1] - self.vertices[i]
            d_hi = _ROT1.apply_vec(d_lo)
            assert d_hi == self.vertices[i] - self.vertices[(i + 1) % 12]
            self._cone_lo.append(d_lo)
            self._cone_hi.append(d_hi)

    def mirror_vertex(self, i: int, k: int) -> Point:
        """Vertex A^i_k of the mirrored table γ^i.

        γ^i is the point reflection of the table through C_i; because the
        table is centrally symmetric this is the translation by 2 C_i.  The
        labelling offset is chosen so that the rotation by 30° maps A^i_k
        to A^{i+1}_k and consecutive mirrored tables share the vertex
        A^i_1 = A^{i+1}_6.
        """
        c = self.crossings[i % 12]
        base = self.vertices[(k + i + 3) % 12]
        return Point(base.x + c.x + c.x, base.y + c.y + c.y)

    def classify_exterior(self, p: Point) -> str:
        return self.polygon.classify(p)

    def sector_index(self, p: Point, forward: bool = True) -> int:
        """Index i with p interior to the tangent sector of A_i.

        Raises GraneError when p is on a sector boundary or not strictly
        outside the table.  ``forward=False`` uses the sectors of the
        inverse map (the reflections of the forward sectors through A_i).
        """
        if self.polygon.classify(p) != EXTERIOR:
            raise GraneError("point not strictly outside the table", point=p)
        want = 1 if forward else -1
        boundary_of = None
        for i in range(12):
            v = p - self.vertices[i]
            c1 = self._cone_lo[i].cross(v).sign() * want
            c2 = self._cone_hi[i].cross(v).sign() * want
            if c1 > 0 and c2 < 0:
                return i
            if (c1 == 0 and c2 <= 0) or (c2 == 0 and c1 >= 0):
                boundary_of = i
        raise GraneError("point on a sector boundary", index=boundary_of, point=p)

    def step(self, p: Point, forward: bool = True) -> tuple[Point, int]:
        """One application of T (or T^-1): central symmetry through A_i."""
        i = self.sector_index(p, forward)
        a = self.vertices[i]
        return Point(a.x + a.x - p.x, a.y + a.y - p.y), i


class Itinerary:
    """Symbol sequence of an orbit under the wedge map.

    ``symbols[start_offset]`` is the symbol of the starting point itself;
    earlier entries come from backward steps.  When a boundary is hit the
    itinerary is truncated on that side and ``fwd_fail``/``bwd_fail``
    record how many steps succeeded.
    """

    def __init__(self, symbols, start_offset, fwd_fail=None, bwd_fail=None):
        self.symbols = tuple(symbols)
        self.start_offset = start_offset
        self.fwd_fail = fwd_fail
        self.bwd_fail = bwd_fail

    @property
    def complete(self) -> bool:
        return self.fwd_fail is None and self.bwd_fail is None

    def text(self) -> str:
        return "".join(str(s) for s in self.symbols)

    def __repr__(self):
        return f"Itinerary({self.text()}, start={self.start_offset})"


class WedgeSystem:
    """The induced piecewise isometry T' on the wedge at A_1."""

    def __init__(self, table: Table):
        self.table = table
        A = table.vertices
        self.apex = A[1]
        self.dir_p = primitive_dir(A[1] - A[0])  # along the P-ray, 105°
        self.dir_q = primitive_dir(A[2] - A[1])  # along the Q-ray, 135°
        # wedge bisector: the exact 120° direction; verified below
        self.bisector_dir = primitive_dir(Point(-HALF, SQRT3_HALF))
        b, dp, dq = self.bisector_dir, self.dir_p, self.dir_q
        assert dp.cross(b).sign() > 0 and b.cross(dq).sign() > 0
        assert (dp.dot(b) ** 2) * dq.norm2() == (dq.dot(b) ** 2) * dp.norm2()
        self.wedge = Region.unbounded(self.dir_q, [self.apex], self.dir_p)

        # P_i: ray A_0 A_1 meets ray A_{i+1} A_i; Q_j: ray A_1 A_2 meets
        # ray A_{j+1} A_j.
        p_line = Line.through(A[0], A[1])
        q_line = Line.through(A[1], A[2])
        self.P = {i: p_line.intersect(Line.through(A[i + 1], A[i])) for i in range(1, 6)}
        self.Q = {j: q_line.intersect(Line.through(A[j + 1], A[j])) for j in range(2, 7)}

        mv = table.mirror_vertex
        assert self.P[1] == A[1]
        assert self.Q[2] == A[2]
        assert self.Q[5] == table.crossings[3]
        assert self.P[5] == mv(3, 6)
        assert self.Q[6] == mv(3, 1) == mv(4, 6)
        for i in range(12):
            assert mv(i, 1) == mv((i + 1) % 12, 6)

        P, Q = self.P, self.Q
        self.alpha = {
            1: Region.bounded([P[1], P[2], Q[2]]),
            2: Region.bounded([P[2], P[3], Q[3], Q[2]]),
            3: Region.bounded([P[3], P[4], Q[4], Q[3]]),
            4: Region.bounded([P[4], P[5], Q[5], Q[4]]),
            5: Region.unbounded(self.dir_p, [Q[6], Q[5], P[5]], self.dir_p),
            6: Region.unbounded(self.dir_q, [Q[6]], self.dir_p),
        }

        # splitting lines: the rays A_3 A_2 .. A_7 A_6, oriented apex side > 0
        self.split_lines = []
        for k in range(1, 6):
            ln = Line.through(A[k + 2], A[k + 1])
            if ln.side(self.apex) < 0:
                ln = ln.reversed()
            self.split_lines.append(ln)

        # derive each piece map by folding T back into the wedge
        self.maps = {}
        self.fold_counts = {}
        for i in range(1, 7):
            sample = self.alpha[i].interior_point()
            assert self.piece_index(sample) == i
            j = table.sector_index(sample)
            assert j == i + 1
            image, m = self.fold_into_wedge(
                AffMap.point_reflection(A[j]).apply(sample)
            )
            assert m == (-i) % 12
            f = ROT[m].compose(AffMap.point_reflection(A[j]))
            assert rotation_index(f) == (6 - i) % 12
            assert f.apply(sample) == image
            self.maps[i] = f
            self.fold_counts[i] = m
        assert self.maps[6].is_translation()
        self.translation_vec = Point(self.maps[6].tx, self.maps[6].ty)
        assert self.translation_vec == mv(3, 7) - mv(3, 1)

        self.inv_maps = {i: self.maps[i].inverse() for i in range(1, 7)}
        self.image_alpha = {
            i: self.alpha[i].transformed(self.maps[i]) for i in range(1, 7)
        }
        self.alpha_lines = {i: self.alpha[i].boundary_lines() for i in range(1, 7)}
        self.O = {i: self.maps[i].fixed_point() for i in range(1, 6)}
        for i in range(1, 6):
            assert self.alpha[i].classify(self.O[i]) == INTERIOR
            assert self.bisector_dir.cross(self.O[i] - self.apex).is_zero()

        # invariant rocket hexagon Z' and the 60-vertex necklace region Z
        self.Zp = Region.bounded(
            [A[1], mv(3, 2), mv(3, 3), mv(3, 4), mv(3, 5), mv(3, 6)]
        )
        block = [mv(3, 1), mv(3, 2), mv(3, 3), mv(3, 4), mv(3, 5)]
        chain = []
        for m in range(12):
            rot = ROT[(-m) % 12]
            chain.extend(rot.apply(p) for p in block)
        self.Z = Region.bounded(chain)
        assert len(self.Z.vertices) == 60

        # translation conjugating the wedge dynamics into the alpha_6 copy
        self.H = AffMap.translation(self.Q[6] - self.apex)

    # -- point location --------------------------------------------------------

    def classify_wedge(self, p: Point) -> str:
        return self.wedge.classify(p)

    def piece_index(self, p: Point) -> int:
        """Index i with p in the open piece alpha_i.

        Raises DomainError outside the wedge and GraneError on any piece
        boundary.
        """
        side = self.classify_wedge(p)
        if side == EXTERIOR:
            raise DomainError("point outside the wedge")
        if side == BOUNDARY:
            raise GraneError("point on the wedge boundary", point=p)
        for k, ln in enumerate(self.split_lines, start=1):
            s = ln.side(p)
            if s > 0:
                return k
            if s == 0:
                raise GraneError("point on a piece boundary", index=k, point=p)
        return 6

    def restrict_to_piece(self, region: Region, i: int) -> Region:
        """Intersection of a convex region with the open piece alpha_i."""
        out = region
        for ln in self.alpha_lines[i]:
            out = clip_convex(out, ln, +1)
            if out is None:
                raise GraneError(f"region does not meet alpha_{i}", index=i)
        return out

    def fold_into_wedge(self, q: Point) -> tuple[Point, int]:
        """The unique rotated copy of q interior to the wedge."""
        for m in range(12):
            r = ROT[m].apply(q)
            if self.wedge.classify(r) == INTERIOR:
                return r, m
        raise GraneError("no rotated copy lands inside the wedge", point=q)

    # -- dynamics ----------------------------------------------------------------

    def step(self, p: Point, forward: bool = True) -> tuple[Point, int]:
        """One application of T' (or its inverse); returns (image, symbol)."""
        if forward:
            i = self.piece_index(p)
            return self.maps[i].apply(p), i
        side = self.classify_wedge(p)
        if side == EXTERIOR:
            raise DomainError("point outside the wedge")
        if side == BOUNDARY:
            raise GraneError("point on the wedge boundary", point=p)
        for i in range(1, 7):
            c = self.image_alpha[i].classify(p)
            if c == INTERIOR:
                return self.inv_maps[i].apply(p), i
        raise GraneError("point on a piece-image boundary", point=p)

    def step_via_billiard(self, p: Point) -> tuple[Point, int]:
        """T' computed the long way: one step of T, then fold.

        Serves as an independent oracle for the derived piece maps.
        """
        q, _ = self.table.step(p)
        image, m = self.fold_into_wedge(q)
        return image, m

    def itinerary(self, p: Point, n_fwd: int, n_bwd: int = 0) -> Itinerary:
        symbols = []
        bwd_fail = None
        fwd_fail = None
        q = p
        for k in range(n_bwd):
            try:
                q, sym = self.step(q, forward=False)
            except GraneError:
                bwd_fail = k
                break
            symbols.append(sym)
        symbols.reverse()
        start_offset = len(symbols)
        q = p
        for k in range(n_fwd):
            try:
                sym = self.piece_index(q)
            except GraneError:
                fwd_fail = k
                break
            symbols.append(sym)
            q = self.maps[sym].apply(q)
        return Itinerary(symbols, start_offset, fwd_fail=fwd_fail, bwd_fail=bwd_fail)

    def first_return_to_piece(self, p: Point, piece: int, max_iter: int = 10**6):
        """First forward return of T' to the open piece alpha_piece."""
        q = p
        for n in range(1, max_iter + 1):
            q, _ = self.step(q)
            if self.piece_index(q) == piece:
                return q, n
        raise InconclusiveError(
            f"no return to alpha_{piece} within {max_iter} steps", iterations=max_iter
        )

    def orbit_period(self, p: Point, max_iter: int):
        """Exact least period of p under T' with per-piece visit counts.

        Returns (period, visit_counts) or None when the cap is exhausted.
        """
        q = p
        counts = [0] * 6
        for n in range(1, max_iter + 1):
            q, sym = self.step(q)
            counts[sym - 1] += 1
            if q == p:
                return n, tuple(counts)
        return None


def build_table() -> tuple[Table, WedgeSystem]:
    """Construct the table and its wedge system (exact, deterministic)."""
    table = Table()
    return table, WedgeSystem(table)


def billiard_step(table: Table, p: Point, direction: str = "forward") -> Point:
    """Convenience wrapper for one step of the outer billiard map."""
    return table.step(p, forward=(direction == "forward"))[0]


def induced_step(w: WedgeSystem, p: Point, direction: str = "forward"):
    """Convenience wrapper for one step of the induced wedge map."""
    return w.step(p, forward=(direction == "forward"))


def compute_itinerary(w: WedgeSystem, p: Point, n_fwd: int, n_bwd: int = 0):
    return w.itinerary(p, n_fwd, n_bwd)
