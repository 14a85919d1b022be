"""The F_p code spanned by the lines of PG(2,q).

Words live on the point set and are recognised in two independent ways:
by Gaussian elimination against the incidence matrix, and through the
reduced three-variable polynomial attached to the point function (member
if and only if its total degree stays below q).  The polynomial route
also drives everything concurrent: constructing words supported on a
pencil of lines, the rank of a word at a point, and the dimension of the
subspace of words living on n concurrent lines with bounded rank.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools

import numpy as np

from . import linalg
from .plane import PlaneCtx, plane_for


# ---------------------------------------------------------------------------
# words


@dataclasses.dataclass(eq=False)
class Codeword:
    """A function from the points of PG(2,q) into the prime subfield."""

    plane: PlaneCtx
    vec: np.ndarray

    def __post_init__(self):
        self.vec = np.asarray(self.vec, dtype=np.int64) % self.plane.p
        if self.vec.shape != (self.plane.n,):
            raise ValueError(f"expected {self.plane.n} values, got {self.vec.shape}")

    def weight(self) -> int:
        return int(np.count_nonzero(self.vec))

    def support(self):
        return np.flatnonzero(self.vec)

    def is_zero(self) -> bool:
        return not self.vec.any()

    def scaled(self, a: int) -> "Codeword":
        return Codeword(self.plane, (self.vec * (a % self.plane.p)) % self.plane.p)

    def __add__(self, other: "Codeword") -> "Codeword":
        _same_plane(self, other)
        return Codeword(self.plane, self.vec + other.vec)

    def __sub__(self, other: "Codeword") -> "Codeword":
        _same_plane(self, other)
        return Codeword(self.plane, self.vec - other.vec)

    def __neg__(self) -> "Codeword":
        return Codeword(self.plane, -self.vec)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Codeword):
            return NotImplemented
        return self.plane is other.plane and bool(np.array_equal(self.vec, other.vec))


def _same_plane(c1, c2):
    if c1.plane is not c2.plane:
        raise ValueError("words live on different planes")


@dataclasses.dataclass(frozen=True)
class LineCombination:
    """Formal combination: coefficient coeffs[i] on the line lines[i]."""

    plane: PlaneCtx
    lines: tuple
    coeffs: tuple

    def __post_init__(self):
        if len(self.lines) != len(self.coeffs):
            raise ValueError("one coefficient per line is required")
        for l in self.lines:
            if not 0 <= l < self.plane.n:
                raise ValueError(f"line index {l} out of range")


def line_word(pl: PlaneCtx, line_idx: int) -> Codeword:
    """The indicator word of a single line."""
    return Codeword(pl, pl.A[int(line_idx)].copy())


def codeword_from_combination(comb: LineCombination) -> Codeword:
    pl = comb.plane
    vec = np.zeros(pl.n, dtype=np.int64)
    for l, a in zip(comb.lines, comb.coeffs):
        vec += (a % pl.p) * pl.A[int(l)]
    return Codeword(pl, vec)


def dot(c1: Codeword, c2: Codeword) -> int:
    _same_plane(c1, c2)
    return int((c1.vec * c2.vec).sum() % c1.plane.p)


def line_sum_invariance(c: Codeword) -> bool:
    """Whether every line sum of c equals the total sum (true for members)."""
    pl = c.plane
    sums = (pl.A @ c.vec) % pl.p
    return bool((sums == int(c.vec.sum() % pl.p)).all())


# ---------------------------------------------------------------------------
# membership, route one: elimination against the line basis


def membership_linear(c: Codeword) -> bool:
    ech, piv = c.plane.code_echelon()
    return bool(linalg.in_rowspace(ech, piv, c.vec, c.plane.p))


def membership_linear_batch(pl: PlaneCtx, words):
    """Boolean array: row i of words is in the span of the lines."""
    ech, piv = pl.code_echelon()
    return linalg.in_rowspace(ech, piv, np.atleast_2d(words), pl.p)


# ---------------------------------------------------------------------------
# membership, route two: the reduced polynomial


@dataclasses.dataclass(eq=False)
class ReducedPoly3:
    """Polynomial in X, Y, Z with degree at most q-1 in each variable.

    coeffs[i, j, k] is the field encoding of the coefficient of
    X^i Y^j Z^k.  Polynomials produced from point functions carry no
    X^(q-1) Y^(q-1) Z^(q-1) term and every monomial has total degree a
    multiple of q-1.
    """

    plane: PlaneCtx
    coeffs: np.ndarray

    def coeff(self, i: int, j: int, k: int) -> int:
        return int(self.coeffs[i, j, k])

    def terms(self):
        """Sorted list of ((i, j, k), coefficient) over nonzero entries."""
        idx = np.argwhere(self.coeffs)
        return [(tuple(int(v) for v in e), int(self.coeffs[tuple(e)])) for e in idx]

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def total_degree(self) -> int:
        """Largest monomial degree; -1 for the zero polynomial."""
        nz = np.nonzero(self.coeffs)
        if nz[0].size == 0:
            return -1
        return int((nz[0] + nz[1] + nz[2]).max())

    def z_degree(self) -> int:
        nz = np.nonzero(self.coeffs)
        if nz[0].size == 0:
            return -1
        return int(nz[2].max())

    def eval(self, x: int, y: int, z: int) -> int:
        f = self.plane.field
        pw = self.plane.power_table()
        nz = np.nonzero(self.coeffs)
        if nz[0].size == 0:
            return 0
        vals = f.mul_arr(pw[int(x) % f.q, nz[0]], pw[int(y) % f.q, nz[1]])
        vals = f.mul_arr(vals, pw[int(z) % f.q, nz[2]])
        vals = f.mul_arr(vals, self.coeffs[nz])
        return int(f.sum_arr(vals))


def _value_cube(pl: PlaneCtx, words):
    """(m, q, q, q) tensors of word values on all nonzero vectors, zero at 0."""
    words = np.atleast_2d(words)
    q = pl.q
    cube = np.zeros((words.shape[0], q * q * q), dtype=np.int64)
    rf = pl.ray_flat()
    for lam in range(q - 1):
        cube[:, rf[lam]] = words
    return cube.reshape(words.shape[0], q, q, q)


def _coeff_cube(pl: PlaneCtx, cube):
    """Interpolate each value cube and kill the top monomial.

    The correction subtracts a multiple of the product of (1 - V^(q-1))
    over the three variables, which only moves the value at the zero
    vector, so evaluation at nonzero vectors is untouched.
    """
    f = pl.field
    q = pl.q
    bw = pl.interpolation_block()
    digits = linalg.to_coeff_tensor(f, cube)
    for axis in (1, 2, 3):
        digits = linalg.apply_fq_map(f, bw, digits, axis)
    out = linalg.from_coeff_tensor(f, digits)
    top = out[:, q - 1, q - 1, q - 1].copy()
    if top.any():
        for corner in itertools.product((0, q - 1), repeat=3):
            k = sum(1 for e in corner if e)
            delta = top if (3 - k) % 2 == 0 else f.neg_arr(top)
            i, j, l = corner
            out[:, i, j, l] = f.add_arr(out[:, i, j, l], f.neg_arr(delta))
    return out


def reduced_polynomial(c: Codeword) -> ReducedPoly3:
    """The canonical polynomial taking c's value on every nonzero vector."""
    pl = c.plane
    cube = _coeff_cube(pl, _value_cube(pl, c.vec))
    return ReducedPoly3(pl, cube[0])


@functools.lru_cache(maxsize=None)
def _degree_two_slice(pl: PlaneCtx):
    # flat positions of the exponent triples of total degree 2(q-1)
    q = pl.q
    flats = []
    for i in range(q):
        for j in range(q):
            k = 2 * (q - 1) - i - j
            if 0 <= k <= q - 1:
                flats.append((i * q + j) * q + k)
    return np.array(flats, dtype=np.int64)


def membership_dgm(c: Codeword) -> bool:
    """Member exactly when the attached polynomial has total degree < q."""
    return reduced_polynomial(c).total_degree() <= c.plane.q - 1


def membership_dgm_batch(pl: PlaneCtx, words):
    """Boolean array of polynomial-route membership, one entry per row."""
    words = np.atleast_2d(np.asarray(words, dtype=np.int64)) % pl.p
    q = pl.q
    flats = _degree_two_slice(pl)
    out = np.empty(words.shape[0], dtype=bool)
    step = max(1, 2_000_000 // (q * q * q))
    for s in range(0, words.shape[0], step):
        chunk = words[s:s + step]
        cube = _coeff_cube(pl, _value_cube(pl, chunk)).reshape(chunk.shape[0], -1)
        out[s:s + chunk.shape[0]] = ~cube[:, flats].any(axis=1)
    return out


# ---------------------------------------------------------------------------
# words on concurrent lines

# The frame used throughout: the common point is (0,0,1), one covering line
# is x = 0, and the remaining lines are y = d*x for d in a set of slopes.
# Words supported on such a pencil are exactly the evaluations of
#
#     factor * prod over the complementary slopes s of (Y - s X)
#     + constant * (1 - X^(q-1))
#
# with factor homogeneous of degree len(slopes) - 1 (or zero), provided the
# evaluation stays inside the prime subfield.


def _check_slopes(pl, slopes):
    out = [int(d) for d in slopes]
    for d in out:
        if not 0 <= d < pl.q:
            raise ValueError(f"slope {d} out of range")
    if len(set(out)) != len(out):
        raise ValueError("slopes must be distinct")
    return out


def _complement_product(pl, slopes):
    """Coefficients of prod(Y - sX) over slopes NOT listed, by X-degree.

    Entry t multiplies X^t Y^(e-t) where e = q - len(slopes); the product
    is monic in Y.
    """
    f = pl.field
    keep = set(slopes)
    hx = [1]
    for s in range(pl.q):
        if s in keep:
            continue
        nxt = [0] * (len(hx) + 1)
        ms = f.neg(s)
        for t, a in enumerate(hx):
            nxt[t] = f.add(nxt[t], a)
            nxt[t + 1] = f.add(nxt[t + 1], f.mul(a, ms))
        hx = nxt
    return hx


def _eval_on_points(pl, poly):
    """Evaluate a sparse {(i,j,k): coeff} polynomial at all point triples."""
    f = pl.field
    pw = pl.power_table()
    tri = pl.triples
    vals = np.zeros(pl.n, dtype=np.int64)
    for (i, j, k), a in poly.items():
        if a == 0:
            continue
        term = f.mul_arr(pw[tri[:, 0], i], pw[tri[:, 1], j])
        term = f.mul_arr(term, pw[tri[:, 2], k])
        term = f.mul_arr(term, np.int64(a))
        vals = f.add_arr(vals, term)
    return vals


def odd_from_polynomial(pl: PlaneCtx, slopes, factor, constant: int = 0) -> Codeword:
    """Build the word attached to (factor, constant) in the standard frame.

    factor maps exponent triples (i, j, k) to field coefficients and must
    be homogeneous of degree len(slopes) - 1; pass an empty mapping for the
    zero polynomial.  constant is the polynomial's value at the zero vector
    and contributes constant times the indicator of the line x = 0.  The
    result is rejected if any point value falls outside the prime subfield.
    """
    f = pl.field
    q = pl.q
    slopes = _check_slopes(pl, slopes)
    deg = len(slopes) - 1
    constant = int(constant)
    if not 0 <= constant < q:
        raise ValueError(f"constant {constant} out of range")
    for (i, j, k), a in factor.items():
        if not 0 <= int(a) < q:
            raise ValueError(f"coefficient {a} out of range")
        if a and (min(i, j, k) < 0 or i + j + k != deg):
            raise ValueError(f"factor must be homogeneous of degree {deg}")

    hx = _complement_product(pl, slopes)
    e = q - len(slopes)
    poly = {}
    for (i, j, k), a in factor.items():
        if a == 0:
            continue
        for t, ht in enumerate(hx):
            if ht == 0:
                continue
            key = (i + t, j + e - t, k)
            poly[key] = f.add(poly.get(key, 0), f.mul(int(a), ht))
    if constant:
        poly[(0, 0, 0)] = f.add(poly.get((0, 0, 0), 0), constant)
        key = (q - 1, 0, 0)
        poly[key] = f.sub(poly.get(key, 0), constant)

    vals = _eval_on_points(pl, poly)
    if np.any(vals >= pl.p):
        raise ValueError("G does not yield an F_p-valued word")
    word = Codeword(pl, vals)
    assert membership_dgm(word)
    return word


def factor_concurrent(c: Codeword, slopes):
    """Invert odd_from_polynomial: recover (factor, constant) from a word.

    Divides the homogeneous part of the word's polynomial by the product
    over the complementary slopes.  Raises if the word is not a member
    supported on the declared pencil.
    """
    pl = c.plane
    f = pl.field
    q = pl.q
    slopes = _check_slopes(pl, slopes)
    cube = reduced_polynomial(c).coeffs.copy()
    constant = int(cube[0, 0, 0])
    cube[0, 0, 0] = 0
    cube[q - 1, 0, 0] = f.add(int(cube[q - 1, 0, 0]), constant)
    nz = np.nonzero(cube)
    if nz[0].size and not np.all(nz[0] + nz[1] + nz[2] == q - 1):
        raise ValueError("word is not supported on the declared lines")

    hx = _complement_product(pl, slopes)
    e = q - len(slopes)
    factor = {}
    for k in range(q):
        mdeg = q - 1 - k
        fvec = [0] * (mdeg + 1)
        for ydeg in range(mdeg + 1):
            xdeg = mdeg - ydeg
            if xdeg <= q - 1:
                fvec[ydeg] = int(cube[xdeg, ydeg, k])
        if mdeg < e:
            if any(fvec):
                raise ValueError("word is not supported on the declared lines")
            continue
        # long division in Y; the divisor is monic of Y-degree e
        gv = [0] * (mdeg - e + 1)
        for yd in range(mdeg, e - 1, -1):
            coef = fvec[yd]
            if coef == 0:
                continue
            gyd = yd - e
            gv[gyd] = coef
            for t, ht in enumerate(hx):
                fvec[gyd + e - t] = f.sub(fvec[gyd + e - t], f.mul(coef, ht))
        if any(fvec):
            raise ValueError("word is not supported on the declared lines")
        for gyd, a in enumerate(gv):
            if a:
                factor[(mdeg - e - gyd, gyd, k)] = a
    return factor, constant


def example_odd_3(p: int) -> Codeword:
    """Weight-3(p-1) member on the pencil x=0, y=0, x=y through (0,0,1).

    Not a combination of its three covering lines once p is at least 5.
    """
    if p <= 2:
        raise ValueError(f"p = {p} too small for the three-line word")
    pl = plane_for(p, 1)
    vec = np.zeros(pl.n, dtype=np.int64)
    for z in range(1, p):
        vec[pl.point_id(1, 0, z)] = z
        vec[pl.point_id(0, 1, z)] = z
        vec[pl.point_id(1, 1, z)] = (-z) % p
    return Codeword(pl, vec)


def example_odd_4(p: int) -> Codeword:
    """Weight-4(p-1) member on the four lines x=0 and y = d*x, d in {-1,0,1}."""
    if p <= 3:
        raise ValueError(f"p = {p} too small for the four-line word")
    pl = plane_for(p, 1)
    return odd_from_polynomial(pl, [0, 1, p - 1], {(0, 0, 2): 2}, 0)


def common_point(pl: PlaneCtx, lines) -> int:
    """Index of the point on all given lines; error if none or underdetermined."""
    lines = [int(l) for l in lines]
    if len(lines) < 2:
        raise ValueError("at least two lines are needed")
    if len(set(lines)) != len(lines):
        raise ValueError("lines must be distinct")
    pt = pl.meet(lines[0], lines[1])
    for l in lines[2:]:
        if not pl.is_on(pt, l):
            raise ValueError("lines are not concurrent")
    return pt


def is_odd_codeword(c: Codeword, lines) -> bool:
    """Literal test: support inside the pencil, non-constant on every
    punctured line of it.  The word is assumed to be a member."""
    pl = c.plane
    lines = [int(l) for l in lines]
    pt = common_point(pl, lines)
    covered = pl.A[lines].any(axis=0)
    if c.vec[~covered].any():
        return False
    for l in lines:
        pts = pl.line_points[l]
        vals = c.vec[pts[pts != pt]]
        if (vals == vals[0]).all():
            return False
    return True


# ---------------------------------------------------------------------------
# rank at a point


def rank_at(c: Codeword, point_idx: int) -> int:
    """Z-degree of the word's polynomial after moving the point to (0,0,1).

    Independent of the transform used; -1 for the zero word.
    """
    pl = c.plane
    if not c.vec.any():
        return -1
    through = pl.point_lines[int(point_idx)]
    m = pl.transform_taking(int(point_idx), int(through[0]), int(through[1]))
    perm = pl.point_map(m)
    moved = np.zeros_like(c.vec)
    moved[perm] = c.vec
    return reduced_polynomial(Codeword(pl, moved)).z_degree()


def concurrent_subspace_basis(pl: PlaneCtx, point_idx: int, lines, max_rank: int):
    """Basis of the words supported on the pencil with rank at most max_rank.

    Prime order only.  The span has dimension
    (max_rank + 1)(n - 1 - max_rank/2) + 1 for n lines.
    """
    if pl.h != 1:
        raise ValueError("the concurrent subspace construction needs prime order")
    lines = [int(l) for l in lines]
    n = len(lines)
    if len(set(lines)) != len(lines):
        raise ValueError("lines must be distinct")
    point_idx = int(point_idx)
    for l in lines:
        if not pl.is_on(point_idx, l):
            raise ValueError("lines are not concurrent at the point")
    max_rank = int(max_rank)
    if not 0 <= max_rank <= n - 2:
        raise ValueError(f"rank bound {max_rank} out of range 0..{n - 2}")

    m = pl.transform_taking(point_idx, lines[0], lines[1])
    lperm = pl.line_map(m)
    imgs = [int(lperm[l]) for l in lines]
    assert imgs[0] == pl.line_id(1, 0, 0)
    slopes = [pl.slope_of(li) for li in imgs[1:]]
    perm = pl.point_map(m)

    words = []
    deg = n - 2
    for k in range(max_rank + 1):
        for i in range(deg - k + 1):
            w = odd_from_polynomial(pl, slopes, {(i, deg - k - i, k): 1}, 0)
            words.append(Codeword(pl, w.vec[perm]))
    words.append(line_word(pl, lines[0]))
    return words


def reducibility_split(c: Codeword, point_idx: int, lines, max_rank: int) -> bool:
    """Check the two sides of the rank-versus-cover equivalence.

    Left side: rank of c at the point is at most max_rank.  Right side: c
    lies in the span of the subspaces attached to the (max_rank + 2)-line
    subpencils {lines[j]} + lines[n - max_rank - 1:].  Returns whether the
    two sides agree.
    """
    pl = c.plane
    lines = [int(l) for l in lines]
    n = len(lines)
    covered = pl.A[lines].any(axis=0)
    if c.vec[~covered].any():
        raise ValueError("support is not covered by the given lines")
    max_rank = int(max_rank)
    if not 0 <= max_rank <= n - 2:
        raise ValueError(f"rank bound {max_rank} out of range 0..{n - 2}")

    lhs = rank_at(c, point_idx) <= max_rank
    tail = lines[n - max_rank - 1:]
    rows = []
    for j in range(n - max_rank - 1):
        basis = concurrent_subspace_basis(pl, point_idx, [lines[j]] + tail, max_rank)
        rows.extend(w.vec for w in basis)
    ech, piv = linalg.row_echelon(np.array(rows), pl.p)
    rhs = bool(linalg.in_rowspace(ech, piv, c.vec, pl.p))
    return lhs == rhs
