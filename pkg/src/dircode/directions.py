"""Point multisets in AG(2,q), their direction spectra, and decompositions.

A multiset M assigns a nonnegative multiplicity to each affine point
(x,y); affine index = enc(x)*q + enc(y).  For a slope d (an int 0..q, q
meaning infinity) the spectrum records how often each of the q parallel
lines of that slope meets M, indexed by intercept: node b is the line
Y = dX + b, or X + b = 0 for the infinite slope.

A direction d is special when the line counts leave {floor(|M|/q),
ceil(|M|/q)}, and mod-special when they are not all congruent mod p.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .plane import PlaneCtx


class PointMultiset:
    """Multiset of affine points, stored densely over the q^2 affine indices."""

    def __init__(self, plane: PlaneCtx, mult=None):
        self.plane = plane
        q = plane.q
        if mult is None:
            self.mult = np.zeros(q * q, dtype=np.int64)
        else:
            m = np.asarray(mult, dtype=np.int64).reshape(-1)
            if m.shape != (q * q,):
                raise ValueError("multiplicity vector has the wrong length")
            if (m < 0).any():
                raise ValueError("multiplicities must be nonnegative")
            self.mult = m.copy()

    @classmethod
    def from_pairs(cls, plane, pairs):
        """pairs: iterable of ((x_enc, y_enc), mult)."""
        m = cls(plane)
        q = plane.q
        for (x, y), c in pairs:
            if not (0 <= x < q and 0 <= y < q):
                raise ValueError(f"affine point ({x},{y}) out of range")
            if c < 0:
                raise ValueError("multiplicities must be nonnegative")
            m.mult[x * q + y] += c
        return m

    @classmethod
    def affine_line(cls, plane, slope: int, intercept: int, count: int = 1):
        """count copies of the q affine points of the line (slope, intercept)."""
        m = cls(plane)
        m.mult[plane.slope_aff_points[slope, intercept]] += count
        return m

    @classmethod
    def full_plane(cls, plane, count: int = 1):
        m = cls(plane)
        m.mult[:] = count
        return m

    @property
    def size(self) -> int:
        return int(self.mult.sum())

    def pairs(self):
        q = self.plane.q
        for i in np.nonzero(self.mult)[0]:
            yield (int(i) // q, int(i) % q), int(self.mult[i])

    def copy(self):
        return PointMultiset(self.plane, self.mult)

    def __eq__(self, other):
        return isinstance(other, PointMultiset) and self.plane is other.plane and np.array_equal(self.mult, other.mult)

    def __add__(self, other):
        return PointMultiset(self.plane, self.mult + other.mult)

    def scaled(self, c: int):
        return PointMultiset(self.plane, self.mult * c)

    def transform(self, m):
        """Image under an affine-part-preserving projective matrix.

        The matrix must fix the line at infinity setwise (map affine
        points to affine points); otherwise the image is not a multiset
        of AG(2,q).
        """
        pl = self.plane
        q = pl.q
        out = PointMultiset(pl)
        f = pl.field
        for (x, y), c in self.pairs():
            ix, iy, iz = pl.mat_vec(m, (x, y, 1))
            if iz == 0:
                raise ValueError("transform moves an affine point to infinity")
            s = f.inv(iz)
            out.mult[f.mul(ix, s) * q + f.mul(iy, s)] += c
        return out


@dataclass
class DirectionSpectrum:
    plane: PlaneCtx
    size: int
    counts: np.ndarray  # (q+1, q) int64, [slope, intercept]

    def equidistributed(self, d: int) -> bool:
        lo = self.size // self.plane.q
        hi = lo + (1 if self.size % self.plane.q else 0)
        row = self.counts[d]
        return bool((row >= lo).all() and (row <= hi).all())

    def mod_equidistributed(self, d: int) -> bool:
        row = self.counts[d] % self.plane.p
        return bool((row == row[0]).all())

    def residue(self, d: int):
        """Common line count mod p, or None when d is mod-special."""
        if not self.mod_equidistributed(d):
            return None
        return int(self.counts[d][0] % self.plane.p)

    def special_directions(self):
        return [d for d in range(self.plane.q + 1) if not self.equidistributed(d)]

    def mod_special_directions(self):
        return [d for d in range(self.plane.q + 1) if not self.mod_equidistributed(d)]


def spectrum(m: PointMultiset) -> DirectionSpectrum:
    pl = m.plane
    counts = m.mult[pl.slope_aff_points].sum(axis=2)
    return DirectionSpectrum(pl, m.size, counts)


@dataclass
class ProjectionPoly:
    """Polynomial of degree <= q-1 over F_q interpolating line counts mod p."""

    plane: PlaneCtx
    slope: int
    coeffs: np.ndarray  # (q,) encodings, index = exponent

    @property
    def degree(self) -> int:
        nz = np.nonzero(self.coeffs)[0]
        return int(nz[-1]) if nz.size else -1

    def eval(self, b: int) -> int:
        f = self.plane.field
        acc = 0
        power = 1
        for c in self.coeffs:
            acc = f.add(acc, f.mul(int(c), power))
            power = f.mul(power, b)
        return acc


def projection_poly(m: PointMultiset, d: int) -> ProjectionPoly:
    """Lagrange interpolation (all q nodes) of b -> |M ∩ line(d,b)| mod p."""
    pl = m.plane
    spec_counts = m.mult[pl.slope_aff_points[d]].sum(axis=1) % pl.p
    bw = pl.interpolation_block()
    coeffs = linalg.from_coeff_tensor(
        pl.field, linalg.apply_fq_map(pl.field, bw, linalg.to_coeff_tensor(pl.field, spec_counts), axis=0)
    )
    return ProjectionPoly(pl, d, coeffs)


# ---------------------------------------------------------------------------
# decompositions into unions of lines


def _line_of(pl, d, b) -> int:
    return int(pl.lines_by_slope[d, b])


def decompose_one_direction(m: PointMultiset):
    """|M| = nq with exactly one special direction -> n parallel lines."""
    pl = m.plane
    q = pl.q
    if m.size == 0 or m.size % q:
        raise ValueError("not applicable: size must be a positive multiple of q")
    sp = spectrum(m).special_directions()
    if len(sp) != 1:
        raise ValueError(f"not applicable: expected exactly 1 special direction, found {len(sp)}")
    d = sp[0]
    out = []
    grid = m.mult[pl.slope_aff_points[d]]  # (q lines, q points)
    for b in range(q):
        row = grid[b]
        if (row != row[0]).any():
            raise ValueError("hypothesis violated: a line of the special slope is not constant on M")
        if row[0]:
            out.append((_line_of(pl, d, b), int(row[0])))
    rebuilt = _rebuild(pl, out)
    if rebuilt != m:
        raise ValueError("hypothesis violated: reconstruction mismatch")
    return out


def decompose_two_directions(m: PointMultiset):
    """|M| = nq, special directions exactly (0) and (infinity) -> n lines."""
    pl = m.plane
    q = pl.q
    if m.size == 0 or m.size % q:
        raise ValueError("not applicable: size must be a positive multiple of q")
    sp = spectrum(m).special_directions()
    if sp != [0, q]:
        raise ValueError("not applicable: special directions must be exactly (0) and (infinity)")
    n = m.size // q
    grid = m.mult.reshape(q, q)      # [x, y]
    a_x = grid.sum(axis=1)           # vertical line counts
    b_y = grid.sum(axis=0)           # horizontal line counts
    mu = a_x[:, None] + b_y[None, :] - n
    if (mu % q).any() or (mu < 0).any() or not np.array_equal(mu // q, grid):
        raise ValueError("hypothesis violated: point multiplicities do not split")
    if ((a_x - a_x[0]) % q).any() or ((b_y - b_y[0]) % q).any():
        raise ValueError("hypothesis violated: line counts not constant mod q")
    a = int(a_x[0] % q)
    b = int(b_y[0] % q)
    r_x = (a_x - a) // q
    s_y = (b_y - b) // q
    t = (a + b - n) // (-q) if a + b != n else 0
    if a + b - n != -q * t:
        raise ValueError("hypothesis violated: totals do not balance")
    t1 = min(t, int(r_x.min()))
    t2 = t - t1
    if t2 < 0 or t2 > int(s_y.min()):
        raise ValueError("hypothesis violated: no nonnegative split of the surplus")
    out = []
    f = pl.field
    for x in range(q):
        c = int(r_x[x]) - t1
        if c:
            # the vertical X = x is the slope-infinity line with intercept -x
            out.append((_line_of(pl, q, f.neg(x)), c))
    for y in range(q):
        c = int(s_y[y]) - t2
        if c:
            out.append((_line_of(pl, 0, y), c))
    if _rebuild(pl, out) != m:
        raise ValueError("hypothesis violated: reconstruction mismatch")
    return out


def union_of_lines_decomposition(m: PointMultiset):
    """Iterative per-line-minimum reduction along special directions.

    Succeeds iff the residual after all reductions is empty; a residual
    that is a nonzero multiple of the full plane counts as failure, and
    full-plane components must be stripped by the caller.
    """
    pl = m.plane
    q = pl.q
    residual = m.copy()
    out = {}
    while True:
        sp = spectrum(residual).special_directions()
        if not sp:
            break
        d = sp[0]
        progressed = False
        grid = residual.mult[pl.slope_aff_points[d]]
        mins = grid.min(axis=1)
        for b in range(q):
            c = int(mins[b])
            if c:
                residual.mult[pl.slope_aff_points[d, b]] -= c
                key = _line_of(pl, d, b)
                out[key] = out.get(key, 0) + c
                progressed = True
        if not progressed:
            raise ValueError("not a union of lines")
    if residual.size:
        raise ValueError("not a union of lines")
    result = sorted(out.items())
    if _rebuild(pl, result) != m:
        raise ValueError("not a union of lines")
    return result


def _rebuild(pl, line_mults) -> PointMultiset:
    out = PointMultiset(pl)
    for line_idx, c in line_mults:
        d = int(pl.slope_ids[line_idx])
        if d < 0:
            raise ValueError("the line at infinity has no affine points")
        b = int(np.nonzero(pl.lines_by_slope[d] == line_idx)[0][0])
        out.mult[pl.slope_aff_points[d, b]] += c
    return out


def rebuild_from_lines(pl, line_mults) -> PointMultiset:
    """Public wrapper: multiset union of affine lines given as (line index, count)."""
    return _rebuild(pl, line_mults)


# ---------------------------------------------------------------------------
# weighted blocking sets in PG(2,q)


@dataclass
class BlockingReport:
    n: int
    size: int
    line_counts: np.ndarray
    is_nfold: bool
    essential_points: list
    is_minimal: bool
    redei_lines: list
    residues: set


def blocking_check(pl: PlaneCtx, proj_mult, n: int) -> BlockingReport:
    """Flags for a weighted multiset over the points of PG(2,q)."""
    w = np.asarray(proj_mult, dtype=np.int64)
    if w.shape != (pl.n,) or (w < 0).any():
        raise ValueError("expected a nonnegative vector over the projective points")
    counts = pl.A @ w
    size = int(w.sum())
    is_nfold = bool((counts >= n).all())
    tight_lines = counts == n
    essential = [
        int(i) for i in np.nonzero(w)[0]
        if tight_lines[pl.point_lines[int(i)]].any()
    ]
    is_minimal = is_nfold and len(essential) == int((w > 0).sum())
    redei = [int(j) for j in np.nonzero(size - counts == n * pl.q)[0]]
    return BlockingReport(
        n=n,
        size=size,
        line_counts=counts,
        is_nfold=is_nfold,
        essential_points=essential,
        is_minimal=is_minimal,
        redei_lines=redei,
        residues={int(c % pl.p) for c in counts},
    )


# ---------------------------------------------------------------------------
# named construction: the half-grid with three special directions


def kiss_somlai_set(pl: PlaneCtx) -> PointMultiset:
    """The set {(x,y) : nu(y) < nu(x)} in AG(2,p), p prime."""
    if pl.h != 1:
        raise ValueError("defined for prime fields only")
    p = pl.p
    return PointMultiset.from_pairs(pl, [((x, y), 1) for x in range(p) for y in range(x)])


def four_direction_multiset(pl: PlaneCtx) -> PointMultiset:
    """Multiset in AG(2,p) whose mod-special directions are (0),(1),(-1),(inf)."""
    if pl.h != 1:
        raise ValueError("defined for prime fields only")
    if pl.p <= 3:
        raise ValueError("p too small: need p > 3")
    p = pl.p
    pairs = []
    for x in range(p):
        for y in range(p):
            wraps = x + y >= p
            if x >= y:
                c = x if wraps else (-y) % p
            else:
                c = y if wraps else (-x) % p
            if c:
                pairs.append(((x, y), c))
    return PointMultiset.from_pairs(pl, pairs)


# ---------------------------------------------------------------------------
# additive evaluation of the direction polynomial (three variables)


def redei_additive_eval(m: PointMultiset, t: int, d: int, b: int, skip_check: bool = False) -> int:
    """Evaluate F_M(T,D,B) = sum_M [1-(yT-(Dx+B))^(q-1)] - sum_E r_e [1-(D-eT)^(q-1)].

    E runs over the mod-equidistributed finite directions, r_e their
    common residues.  Requires the infinite direction to be mod-special
    (override with skip_check for experiments).
    """
    pl = m.plane
    f = pl.field
    q = pl.q
    spec = spectrum(m)
    if not skip_check and spec.mod_equidistributed(q):
        raise ValueError("not applicable: the infinite direction must be mod-special")
    acc = 0
    for (x, y), c in m.pairs():
        inner = f.sub(f.mul(y, t), f.add(f.mul(d, x), b))
        term = f.sub(1, f.pow(inner, q - 1))
        acc = f.add(acc, f.mul(c % pl.p, term))
    for e in range(q):
        r = spec.residue(e)
        if r is None:
            continue
        term = f.sub(1, f.pow(f.sub(d, f.mul(e, t)), q - 1))
        acc = f.sub(acc, f.mul(r, term))
    return acc
