"""PG(2,q) and its affine part AG(2,q): points, lines, incidence, transforms.

Points and lines are indexed 0..q^2+q by the same deterministic order:
homogeneous triples normalized so the first nonzero coordinate is 1,
sorted by the integer encodings of the coordinates.  Index 0 is the point
(0,0,1) and, on the line side, [0,0,1] (the line at infinity z = 0).

A point lies on a line when the dot product of their triples vanishes.
The incidence matrix A has one row per line, one column per point.

Slopes are ints 0..q: a finite slope is the encoding of the field element
d (the line [a,b,c] with b != 0 has slope -a/b), and q itself stands for
the infinite slope of vertical lines [1,0,c].  The line at infinity has
no slope.  Direction points are (1,d,0) for finite d and (0,1,0) for the
infinite slope.  Lines of slope d are indexed by intercept: node b maps
to the line Y = dX + b, and for d = infinity to the line X + b = 0.
"""

from __future__ import annotations

import functools

import numpy as np

from . import linalg
from .gf import field_create

_PLANE_LIMIT = 256  # largest q for which full plane enumeration is supported


class PlaneCtx:
    """Geometry context for PG(2,q).  Use plane_for(p, h) to obtain one."""

    def __init__(self, p: int, h: int):
        self.field = field_create(p, h)
        f = self.field
        if f.q > _PLANE_LIMIT:
            raise ValueError(f"q = {f.q} too large for plane enumeration")
        self.p = p
        self.h = h
        self.q = f.q
        q = self.q
        self.n = q * q + q + 1

        triples = [(0, 0, 1)]
        triples += [(0, 1, e) for e in range(q)]
        triples += [(1, e1, e2) for e1 in range(q) for e2 in range(q)]
        self.triples = np.array(triples, dtype=np.int64)
        self.index = {tuple(t): i for i, t in enumerate(triples)}

        self.A = self._incidence()
        lp = [np.nonzero(self.A[j])[0] for j in range(self.n)]
        self.line_points = np.array(lp, dtype=np.int64)
        pl = [np.nonzero(self.A[:, i])[0] for i in range(self.n)]
        self.point_lines = np.array(pl, dtype=np.int64)

        self._build_slopes()
        self._build_affine()
        self._line_masks = None
        self._code_echelon = None
        self._interp_bw = None
        self._ray_flat = None
        self._pow_table = None

    # -- construction ------------------------------------------------------

    def _incidence(self):
        t = self.triples
        if self.h == 1:
            dots = (t @ t.T) % self.p
        else:
            f = self.field
            dots = f.add_arr(
                f.add_arr(f.mul_arr(t[:, 0:1], t.T[0:1, :]), f.mul_arr(t[:, 1:2], t.T[1:2, :])),
                f.mul_arr(t[:, 2:3], t.T[2:3, :]),
            )
        return (dots == 0).astype(np.int8)

    def _build_slopes(self):
        f = self.field
        q = self.q
        slopes = np.full(self.n, -1, dtype=np.int64)
        for j in range(self.n):
            a, b, c = (int(v) for v in self.triples[j])
            if b != 0:
                slopes[j] = f.neg(f.div(a, b))
            elif a != 0:
                slopes[j] = q
        self.slope_ids = slopes

        by_slope = np.zeros((q + 1, q), dtype=np.int64)
        for d in range(q):
            for b in range(q):
                # Y = dX + b  <=>  dX - Y + bZ = 0
                by_slope[d, b] = self.line_id(d, f.neg(1), b)
        for b in range(q):
            by_slope[q, b] = self.line_id(1, 0, b)  # X + bZ = 0
        self.lines_by_slope = by_slope

        dirs = np.zeros(q + 1, dtype=np.int64)
        for d in range(q):
            dirs[d] = self.point_id(1, d, 0)
        dirs[q] = self.point_id(0, 1, 0)
        self.direction_points = dirs

    def _build_affine(self):
        f = self.field
        q = self.q
        aff = np.zeros((q, q), dtype=np.int64)
        for x in range(q):
            for y in range(q):
                aff[x, y] = self.point_id(x, y, 1)
        self.aff_point = aff
        self.aff_ids = aff.reshape(-1)  # affine index = x*q + y

        sap = np.zeros((q + 1, q, q), dtype=np.int64)
        for d in range(q):
            for b in range(q):
                for x in range(q):
                    sap[d, b, x] = x * q + f.add(f.mul(d, x), b)
        negb = [f.neg(b) for b in range(q)]
        for b in range(q):
            for y in range(q):
                sap[q, b, y] = negb[b] * q + y
        self.slope_aff_points = sap

    # -- basic queries ------------------------------------------------------

    def normalize(self, x, y, z):
        f = self.field
        x, y, z = int(x), int(y), int(z)
        for lead in (x, y, z):
            if lead != 0:
                s = f.inv(lead)
                return (f.mul(x, s), f.mul(y, s), f.mul(z, s))
        raise ValueError("the zero triple has no projective class")

    def point_id(self, x, y, z) -> int:
        return self.index[self.normalize(x, y, z)]

    line_id = point_id  # same triples, same order

    def is_on(self, point_idx: int, line_idx: int) -> bool:
        return bool(self.A[line_idx, point_idx])

    def cross(self, u, v):
        """Projective cross product over F_q (line through two points, etc.)."""
        f = self.field
        a = f.sub(f.mul(u[1], v[2]), f.mul(u[2], v[1]))
        b = f.sub(f.mul(u[2], v[0]), f.mul(u[0], v[2]))
        c = f.sub(f.mul(u[0], v[1]), f.mul(u[1], v[0]))
        return (a, b, c)

    def line_through(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("two distinct points are needed")
        t = self.cross(tuple(int(v) for v in self.triples[i]), tuple(int(v) for v in self.triples[j]))
        return self.index[self.normalize(*t)]

    def meet(self, li: int, lj: int) -> int:
        if li == lj:
            raise ValueError("two distinct lines are needed")
        t = self.cross(tuple(int(v) for v in self.triples[li]), tuple(int(v) for v in self.triples[lj]))
        return self.index[self.normalize(*t)]

    def slope_of(self, line_idx: int) -> int:
        s = int(self.slope_ids[line_idx])
        if s < 0:
            raise ValueError("the line at infinity has no slope")
        return s

    @property
    def line_at_infinity(self) -> int:
        return 0  # [0,0,1] is first in the order

    def line_masks(self):
        """Per-line point-set bitmasks (python ints)."""
        if self._line_masks is None:
            masks = []
            for j in range(self.n):
                m = 0
                for i in self.line_points[j]:
                    m |= 1 << int(i)
                masks.append(m)
            self._line_masks = masks
        return self._line_masks

    def incidence_matrix(self):
        return self.A.copy()

    # -- projective transforms ----------------------------------------------

    def mat_vec(self, m, v):
        f = self.field
        out = []
        for i in range(3):
            acc = 0
            for j in range(3):
                acc = f.add(acc, f.mul(m[i][j], v[j]))
            out.append(acc)
        return tuple(out)

    def mat_mul(self, a, b):
        f = self.field
        return tuple(
            tuple(
                functools.reduce(f.add, (f.mul(a[i][k], b[k][j]) for k in range(3)))
                for j in range(3)
            )
            for i in range(3)
        )

    def det3(self, m):
        f = self.field
        t1 = f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]), f.mul(m[1][2], m[2][1])))
        t2 = f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]), f.mul(m[1][2], m[2][0])))
        t3 = f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]), f.mul(m[1][1], m[2][0])))
        return f.add(f.sub(t1, t2), t3)

    def mat_inv(self, m):
        f = self.field
        d = self.det3(m)
        if d == 0:
            raise ValueError("matrix is singular")
        di = f.inv(d)
        cof = lambda r1, c1, r2, c2: f.sub(f.mul(m[r1][c1], m[r2][c2]), f.mul(m[r1][c2], m[r2][c1]))
        adj = (
            (cof(1, 1, 2, 2), f.neg(cof(0, 1, 2, 2)), cof(0, 1, 1, 2)),
            (f.neg(cof(1, 0, 2, 2)), cof(0, 0, 2, 2), f.neg(cof(0, 0, 1, 2))),
            (cof(1, 0, 2, 1), f.neg(cof(0, 0, 2, 1)), cof(0, 0, 1, 1)),
        )
        return tuple(tuple(f.mul(adj[i][j], di) for j in range(3)) for i in range(3))

    def point_map(self, m):
        """Permutation of point indices induced by the matrix m."""
        perm = np.empty(self.n, dtype=np.int64)
        for i in range(self.n):
            v = self.mat_vec(m, tuple(int(t) for t in self.triples[i]))
            perm[i] = self.index[self.normalize(*v)]
        return perm

    def line_map(self, m):
        """Permutation of line indices induced by m (lines map by inverse-transpose)."""
        minv = self.mat_inv(m)
        perm = np.empty(self.n, dtype=np.int64)
        for j in range(self.n):
            l = tuple(int(t) for t in self.triples[j])
            img = tuple(
                functools.reduce(self.field.add, (self.field.mul(l[i], minv[i][k]) for i in range(3)))
                for k in range(3)
            )
            perm[j] = self.index[self.normalize(*img)]
        return perm

    def transform_taking(self, point_idx: int, line1: int, line2: int):
        """Matrix sending point -> (0,0,1), line1 -> {X=0}, line2 -> {Y=0}.

        The point must be the meet of the two (distinct) lines.
        """
        if line1 == line2:
            raise ValueError("two distinct lines are needed")
        if self.meet(line1, line2) != point_idx:
            raise ValueError("point must be the meet of the two lines")
        pt = tuple(int(v) for v in self.triples[point_idx])
        u = next(tuple(int(v) for v in self.triples[i]) for i in self.line_points[line1] if i != point_idx)
        v = next(tuple(int(v) for v in self.triples[i]) for i in self.line_points[line2] if i != point_idx)
        cols = (v, u, pt)
        m = tuple(tuple(cols[j][i] for j in range(3)) for i in range(3))
        return self.mat_inv(m)

    def random_invertible(self, rng):
        while True:
            m = tuple(tuple(int(rng.integers(0, self.q)) for _ in range(3)) for _ in range(3))
            if self.det3(m) != 0:
                return m

    # -- the code's cached echelon ------------------------------------------

    def code_echelon(self):
        """Echelon form of the incidence matrix over F_p, with pivot columns."""
        if self._code_echelon is None:
            self._code_echelon = linalg.row_echelon(self.A, self.p)
        return self._code_echelon

    def code_dimension(self) -> int:
        return len(self.code_echelon()[1])

    def interpolation_block(self):
        """Block form of the all-nodes univariate interpolation map over F_q.

        Row 0 of the underlying matrix picks the value at node 0, and row
        m >= 1 carries weight -s^(q-1-m) for the value at node s (with the
        convention that s^0 = 1 even at s = 0, affecting only row q-1).
        """
        if self._interp_bw is None:
            f = self.field
            q = self.q
            w = np.zeros((q, q), dtype=np.int64)
            w[0, 0] = 1
            for m in range(1, q):
                for s in range(q):
                    w[m, s] = f.neg(f.pow(s, q - 1 - m))
            self._interp_w = w
            self._interp_bw = linalg.block_matrix(f, w)
        return self._interp_bw

    def ray_flat(self):
        """(q-1, n) flat indices into F_q^3 of the nonzero multiples of each point."""
        if self._ray_flat is None:
            f = self.field
            q = self.q
            out = np.empty((q - 1, self.n), dtype=np.int64)
            for lam in range(1, q):
                scaled = f.mul_arr(np.int64(lam), self.triples) if self.h > 1 else (lam * self.triples) % self.p
                out[lam - 1] = scaled[:, 0] * q * q + scaled[:, 1] * q + scaled[:, 2]
            self._ray_flat = out
        return self._ray_flat

    def power_table(self):
        """pw[s, e] = s**e over F_q for exponents 0..q-1, with 0**0 = 1."""
        if self._pow_table is None:
            f = self.field
            q = self.q
            pw = np.empty((q, q), dtype=np.int64)
            pw[:, 0] = 1
            elems = np.arange(q, dtype=np.int64)
            for e in range(1, q):
                pw[:, e] = f.mul_arr(pw[:, e - 1], elems)
            self._pow_table = pw
        return self._pow_table


@functools.lru_cache(maxsize=None)
def plane_for(p: int, h: int = 1) -> PlaneCtx:
    return PlaneCtx(p, h)
