"""The line code: membership routes, polynomials, odd words, rank, subspaces."""

import itertools

import numpy as np
import pytest

from dircode import linalg, planecode as pc
from dircode.plane import plane_for


def all_lines_span(pl, lines):
    """Echelon of the chosen line indicators, for span membership checks."""
    return linalg.row_echelon(pl.A[list(lines)], pl.p)


# ---------------------------------------------------------------------------
# words and combinations


def test_codeword_basics():
    pl = plane_for(5, 1)
    w = pc.line_word(pl, 3)
    assert w.weight() == 6
    assert sorted(w.support()) == sorted(pl.line_points[3])
    assert not w.is_zero()
    assert (w - w).is_zero()
    assert w.scaled(2).weight() == 6
    assert (-w) + w == pc.Codeword(pl, np.zeros(pl.n, dtype=np.int64))
    with pytest.raises(ValueError, match="expected"):
        pc.Codeword(pl, np.zeros(7, dtype=np.int64))
    other = plane_for(3, 1)
    with pytest.raises(ValueError, match="different planes"):
        pc.dot(w, pc.line_word(other, 0))


def test_combination_weights():
    pl = plane_for(5, 1)
    one = pc.codeword_from_combination(pc.LineCombination(pl, (4,), (1,)))
    assert one.weight() == pl.q + 1
    cancel = pc.codeword_from_combination(pc.LineCombination(pl, (4, 4), (1, 4)))
    assert cancel.is_zero()
    # two distinct lines with coefficients 1, 1: the union holds 2q+1 points
    # and the common point carries 2, still nonzero for p > 2
    two = pc.codeword_from_combination(pc.LineCombination(pl, (2, 9), (1, 1)))
    assert two.weight() == 2 * pl.q + 1
    # with coefficients 1, -1 the common point cancels
    diff = pc.codeword_from_combination(pc.LineCombination(pl, (2, 9), (1, 4)))
    assert diff.weight() == 2 * pl.q
    with pytest.raises(ValueError, match="out of range"):
        pc.LineCombination(pl, (pl.n,), (1,))
    with pytest.raises(ValueError, match="per line"):
        pc.LineCombination(pl, (1, 2), (1,))


def test_dot_and_line_sums():
    pl = plane_for(5, 1)
    w = pc.line_word(pl, 7)
    for m in (0, 7, 11):
        assert pc.dot(w, pc.line_word(pl, m)) == 1
    assert pc.line_sum_invariance(w)
    assert pc.line_sum_invariance(pc.example_odd_3(5))
    point = np.zeros(pl.n, dtype=np.int64)
    point[4] = 1
    assert not pc.line_sum_invariance(pc.Codeword(pl, point))


# ---------------------------------------------------------------------------
# membership


def test_membership_generators_and_small_words():
    pl = plane_for(5, 1)
    for l in range(0, pl.n, 6):
        assert pc.membership_linear(pc.line_word(pl, l))
        assert pc.membership_dgm(pc.line_word(pl, l))
    ones = pc.Codeword(pl, np.ones(pl.n, dtype=np.int64))
    assert pc.membership_linear(ones) and pc.membership_dgm(ones)
    point = np.zeros(pl.n, dtype=np.int64)
    point[10] = 1
    single = pc.Codeword(pl, point)
    assert not pc.membership_linear(single)
    assert not pc.membership_dgm(single)


def test_membership_routes_agree_exhaustively_q2():
    pl = plane_for(2, 1)
    words = np.array(list(itertools.product(range(2), repeat=pl.n)), dtype=np.int64)
    lin = pc.membership_linear_batch(pl, words)
    dgm = pc.membership_dgm_batch(pl, words)
    assert (lin == dgm).all()
    assert int(lin.sum()) == 2 ** pl.code_dimension()


@pytest.mark.parametrize("p,h", [(3, 1), (5, 1), (2, 2), (3, 2), (7, 1)])
def test_membership_routes_agree_random(p, h):
    pl = plane_for(p, h)
    rng = np.random.default_rng(1000 * p + h)
    members = (rng.integers(0, p, size=(150, pl.n)) @ pl.A) % p
    noise = rng.integers(0, p, size=(150, pl.n))
    for words in (members, noise):
        lin = pc.membership_linear_batch(pl, words)
        dgm = pc.membership_dgm_batch(pl, words)
        assert (lin == dgm).all()
    assert pc.membership_linear_batch(pl, members).all()
    # the batched polynomial route matches the one-word route
    for row in noise[:8]:
        c = pc.Codeword(pl, row)
        assert pc.membership_dgm(c) == bool(pc.membership_dgm_batch(pl, row)[0])


# ---------------------------------------------------------------------------
# reduced polynomials


def test_polynomial_of_a_line():
    pl = plane_for(5, 1)
    x0 = pc.line_word(pl, pl.line_id(1, 0, 0))
    poly = pc.reduced_polynomial(x0)
    assert poly.terms() == [((0, 0, 0), 1), ((4, 0, 0), 4)]  # 1 - X^4
    assert poly.total_degree() == 4
    assert poly.z_degree() == 0


def test_polynomial_of_zero_and_eval():
    pl = plane_for(3, 2)
    zero = pc.Codeword(pl, np.zeros(pl.n, dtype=np.int64))
    poly = pc.reduced_polynomial(zero)
    assert poly.is_zero()
    assert poly.total_degree() == -1
    assert poly.eval(1, 2, 3) == 0

    rng = np.random.default_rng(5)
    word = pc.Codeword(pl, rng.integers(0, pl.p, size=pl.n))
    poly = pc.reduced_polynomial(word)
    # reproduces the word on every representative and every rescaling of it
    f = pl.field
    for idx in rng.integers(0, pl.n, size=12):
        x, y, z = (int(v) for v in pl.triples[idx])
        lam = int(rng.integers(1, pl.q))
        val = poly.eval(f.mul(lam, x), f.mul(lam, y), f.mul(lam, z))
        assert val == int(word.vec[idx])
    assert poly.eval(0, 0, 0) == poly.coeff(0, 0, 0)


def test_polynomial_degrees_are_multiples_of_q_minus_1():
    pl = plane_for(7, 1)
    rng = np.random.default_rng(11)
    word = pc.Codeword(pl, rng.integers(0, 7, size=pl.n))
    poly = pc.reduced_polynomial(word)
    degs = {i + j + k for (i, j, k), _ in poly.terms()}
    assert degs <= {0, 6, 12}          # never 18: the top term is normalised away
    assert poly.coeff(6, 6, 6) == 0


def test_example_word_polynomial_degree():
    poly = pc.reduced_polynomial(pc.example_odd_3(5))
    assert poly.total_degree() == 4


# ---------------------------------------------------------------------------
# odd words on concurrent lines


def pencil_lines(pl, slopes):
    """Line indices of x = 0 and y = d*x for the given slopes."""
    f = pl.field
    out = [pl.line_id(1, 0, 0)]
    out += [pl.line_id(d, f.neg(1), 0) for d in slopes]
    return out


def test_example_odd_3_values_and_span():
    for p in (5, 7, 11):
        c = pc.example_odd_3(p)
        pl = c.plane
        assert c.weight() == 3 * (p - 1)
        assert pc.membership_linear(c) and pc.membership_dgm(c)
        assert int(c.vec[pl.point_id(1, 0, 2)]) == 2
        assert int(c.vec[pl.point_id(1, 1, 2)]) == p - 2
        ech, piv = all_lines_span(pl, pencil_lines(pl, [0, 1]))
        assert not linalg.in_rowspace(ech, piv, c.vec, p)
    with pytest.raises(ValueError, match="too small"):
        pc.example_odd_3(2)


def test_example_odd_4_values():
    for p in (5, 7, 31):
        c = pc.example_odd_4(p)
        pl = c.plane
        assert c.weight() == 4 * (p - 1)
        assert pc.membership_dgm(c)
        for z in range(1, p):
            assert int(c.vec[pl.point_id(1, 0, z)]) == 2 * z * z % p
            assert int(c.vec[pl.point_id(0, 1, z)]) == 2 * z * z % p
            assert int(c.vec[pl.point_id(1, 1, z)]) == -z * z % p
            assert int(c.vec[pl.point_id(1, p - 1, z)]) == -z * z % p
    with pytest.raises(ValueError, match="too small"):
        pc.example_odd_4(3)


def test_odd_from_polynomial_line_and_validation():
    pl = plane_for(5, 1)
    w = pc.odd_from_polynomial(pl, [0, 2], {}, 1)
    assert w == pc.line_word(pl, pl.line_id(1, 0, 0))
    with pytest.raises(ValueError, match="homogeneous"):
        pc.odd_from_polynomial(pl, [0, 2], {(0, 0, 2): 1}, 0)
    with pytest.raises(ValueError, match="distinct"):
        pc.odd_from_polynomial(pl, [0, 0], {}, 0)
    with pytest.raises(ValueError, match="out of range"):
        pc.odd_from_polynomial(pl, [5], {}, 0)
    with pytest.raises(ValueError, match="out of range"):
        pc.odd_from_polynomial(pl, [0], {(0, 0, 0): 9}, 0)
    with pytest.raises(ValueError, match="out of range"):
        pc.odd_from_polynomial(pl, [0], {}, 7)


def test_odd_from_polynomial_rejects_non_subfield_values():
    pl = plane_for(3, 2)
    # the slope-0 pencil: a linear factor evaluating outside F_3 somewhere
    with pytest.raises(ValueError, match="F_p-valued"):
        pc.odd_from_polynomial(pl, [0, 1], {(1, 0, 0): 3}, 0)


def test_odd_from_polynomial_small_pencils_q9():
    # nothing odd lives on fewer than q/p + 2 = 5 lines at q = 9: every
    # accepted parameter choice lands in the span of the covering lines
    pl = plane_for(3, 2)

    def monos(deg):
        return [(i, j, deg - i - j) for i in range(deg + 1) for j in range(deg + 1 - i)]

    def survey(slopes, draws):
        lines = pencil_lines(pl, slopes)
        span = all_lines_span(pl, lines)
        built = 0
        for factor, constant in draws:
            try:
                w = pc.odd_from_polynomial(pl, slopes, factor, constant)
            except ValueError:
                continue
            built += 1
            assert linalg.in_rowspace(*span, w.vec, pl.p)
            assert not pc.is_odd_codeword(w, lines)
        return built

    # two and three lines: exhaustive over all factors and subfield constants;
    # the accepted count is exactly the size of the span of the lines
    draws1 = [({(0, 0, 0): a}, c0) for a in range(9) for c0 in range(3)]
    assert survey([0], draws1) == 3 ** 2
    draws2 = [({m: a for m, a in zip(monos(1), vals)}, c0)
              for vals in itertools.product(range(9), repeat=3) for c0 in range(3)]
    assert survey([0, 1], draws2) == 3 ** 3

    # four lines: factors recovered from line combinations must build, random
    # factors must never escape the span
    rng = np.random.default_rng(9)
    slopes = [0, 1, 3]
    lines = pencil_lines(pl, slopes)
    seeded = []
    for _ in range(15):
        comb = pc.LineCombination(pl, tuple(lines),
                                  tuple(int(v) for v in rng.integers(0, 3, size=4)))
        seeded.append(pc.factor_concurrent(pc.codeword_from_combination(comb), slopes))
    random_draws = [({m: int(rng.integers(0, 9)) for m in monos(2)}, int(rng.integers(0, 3)))
                    for _ in range(200)]
    assert survey(slopes, seeded + random_draws) >= 15


def test_is_odd_codeword_conditions():
    p = 5
    pl = plane_for(p, 1)
    c3 = pc.example_odd_3(p)
    c4 = pc.example_odd_4(p)
    assert pc.is_odd_codeword(c3, pencil_lines(pl, [0, 1]))
    assert pc.is_odd_codeword(c4, pencil_lines(pl, [0, 1, p - 1]))
    # a bare line is constant off the common point
    w = pc.line_word(pl, pl.line_id(1, 0, 0))
    assert not pc.is_odd_codeword(w, pencil_lines(pl, [0]))
    # support escaping the pencil
    assert not pc.is_odd_codeword(c4, pencil_lines(pl, [0, 1]))
    with pytest.raises(ValueError, match="concurrent"):
        pc.is_odd_codeword(c3, [pl.line_id(1, 0, 0), pl.line_id(0, 1, 0), pl.line_id(1, 1, 1)])
    with pytest.raises(ValueError, match="distinct"):
        pc.is_odd_codeword(c3, [2, 2])
    with pytest.raises(ValueError, match="two lines"):
        pc.is_odd_codeword(c3, [2])


# ---------------------------------------------------------------------------
# factorization: the converse direction


@pytest.mark.parametrize("p", [5, 7])
def test_factorization_round_trip_prime(p):
    pl = plane_for(p, 1)
    rng = np.random.default_rng(p)
    slopes = [0, 1, 3]
    deg = len(slopes) - 1
    monos = [(i, j, k) for i in range(deg + 1) for j in range(deg + 1)
             for k in range(deg + 1) if i + j + k == deg]
    for _ in range(25):
        factor = {m: int(rng.integers(0, p)) for m in monos}
        factor = {m: a for m, a in factor.items() if a}
        constant = int(rng.integers(0, p))
        w = pc.odd_from_polynomial(pl, slopes, factor, constant)
        got_factor, got_constant = pc.factor_concurrent(w, slopes)
        assert got_factor == factor
        assert got_constant == constant
        assert pc.odd_from_polynomial(pl, slopes, got_factor, got_constant) == w


def test_factorization_round_trip_composite():
    pl = plane_for(3, 2)
    slopes = [0, 4, 7]
    lines = pencil_lines(pl, slopes)
    rng = np.random.default_rng(81)
    for _ in range(10):
        comb = pc.LineCombination(pl, tuple(lines),
                                  tuple(int(v) for v in rng.integers(0, 3, size=len(lines))))
        w = pc.codeword_from_combination(comb)
        factor, constant = pc.factor_concurrent(w, slopes)
        assert pc.odd_from_polynomial(pl, slopes, factor, constant) == w


def test_factorization_rejects_wrong_support():
    pl = plane_for(5, 1)
    with pytest.raises(ValueError, match="not supported"):
        pc.factor_concurrent(pc.example_odd_4(5), [0, 1])
    point = np.zeros(pl.n, dtype=np.int64)
    point[3] = 2
    with pytest.raises(ValueError, match="not supported"):
        pc.factor_concurrent(pc.Codeword(pl, point), [0, 1])


# ---------------------------------------------------------------------------
# rank


def test_rank_of_lines_and_examples():
    p = 5
    pl = plane_for(p, 1)
    line = pl.line_id(0, 1, 0)
    w = pc.line_word(pl, line)
    on = int(pl.line_points[line][2])
    assert pc.rank_at(w, on) == 0
    zero = pc.Codeword(pl, np.zeros(pl.n, dtype=np.int64))
    assert pc.rank_at(zero, 0) == -1
    assert pc.rank_at(pc.example_odd_4(p), pl.point_id(0, 0, 1)) == 2
    assert pc.rank_at(pc.example_odd_3(p), pl.point_id(0, 0, 1)) == 1


def test_rank_transform_independence():
    pl = plane_for(5, 1)
    rng = np.random.default_rng(17)
    c = pc.example_odd_4(5)
    pt = pl.point_id(0, 0, 1)
    r = pc.rank_at(c, pt)
    for _ in range(6):
        m = pl.random_invertible(rng)
        perm = pl.point_map(m)
        moved = np.zeros_like(c.vec)
        moved[perm] = c.vec
        assert pc.rank_at(pc.Codeword(pl, moved), int(perm[pt])) == r


def test_rank_of_sum_bounded_by_max():
    pl = plane_for(5, 1)
    rng = np.random.default_rng(23)
    pt = pl.point_id(0, 0, 1)
    lines = pencil_lines(pl, [0, 1, 2])
    basis = pc.concurrent_subspace_basis(pl, pt, lines, 2)
    for _ in range(20):
        a = basis[int(rng.integers(0, len(basis)))]
        b = basis[int(rng.integers(0, len(basis)))]
        ra, rb = pc.rank_at(a, pt), pc.rank_at(b, pt)
        assert pc.rank_at(a + b, pt) <= max(ra, rb)


# ---------------------------------------------------------------------------
# concurrent subspaces


def span_dim(words, p):
    return linalg.rank(np.array([w.vec for w in words]), p)


def test_subspace_dimensions():
    p = 5
    pl = plane_for(p, 1)
    pt = pl.point_id(0, 0, 1)
    lines = pencil_lines(pl, [0, 1, 2, 3])

    basis = pc.concurrent_subspace_basis(pl, pt, lines[:3], 1)
    assert span_dim(basis, p) == len(basis) == 4

    for n in (2, 3, 4, 5):
        pencil = pencil_lines(pl, list(range(n - 1)))
        basis = pc.concurrent_subspace_basis(pl, pt, pencil, n - 2)
        assert span_dim(basis, p) == n * (n - 1) // 2 + 1

    basis = pc.concurrent_subspace_basis(pl, pt, lines[:2], 0)
    assert span_dim(basis, p) == 2
    # every basis word respects the support and rank bounds
    covered = pl.A[lines].any(axis=0)
    for w in pc.concurrent_subspace_basis(pl, pt, lines, 1):
        assert not w.vec[~covered].any()
        assert pc.rank_at(w, pt) <= 1
        assert pc.membership_linear(w)


def test_subspace_dimension_formula_general():
    for p in (5, 7):
        pl = plane_for(p, 1)
        pt = pl.point_id(0, 0, 1)
        for n in (3, 4, 5):
            lines = pencil_lines(pl, list(range(n - 1)))
            for r in range(n - 1):
                basis = pc.concurrent_subspace_basis(pl, pt, lines, r)
                expect = (r + 1) * (2 * n - 2 - r) // 2 + 1
                assert span_dim(basis, p) == expect


def test_subspace_validation():
    pl = plane_for(5, 1)
    pt = pl.point_id(0, 0, 1)
    lines = pencil_lines(pl, [0, 1])
    with pytest.raises(ValueError, match="out of range"):
        pc.concurrent_subspace_basis(pl, pt, lines, 2)
    with pytest.raises(ValueError, match="out of range"):
        pc.concurrent_subspace_basis(pl, pt, lines, -1)
    with pytest.raises(ValueError, match="concurrent"):
        pc.concurrent_subspace_basis(pl, pl.point_id(1, 1, 1), lines, 0)
    with pytest.raises(ValueError, match="distinct"):
        pc.concurrent_subspace_basis(pl, pt, [lines[0], lines[0]], 0)
    with pytest.raises(ValueError, match="prime"):
        pc.concurrent_subspace_basis(plane_for(2, 2), 0, [1, 2], 0)


# ---------------------------------------------------------------------------
# reducibility


def test_reducibility_on_line_combinations():
    p = 5
    pl = plane_for(p, 1)
    pt = pl.point_id(0, 0, 1)
    lines = pencil_lines(pl, [0, 1, 2])
    comb = pc.codeword_from_combination(pc.LineCombination(pl, tuple(lines), (1, 2, 3, 4)))
    assert pc.rank_at(comb, pt) <= 0
    assert pc.reducibility_split(comb, pt, lines, 0)


def test_reducibility_on_example_odd_3():
    for p in (5, 7):
        c = pc.example_odd_3(p)
        pl = c.plane
        pt = pl.point_id(0, 0, 1)
        lines = pencil_lines(pl, [0, 1])
        assert pc.rank_at(c, pt) == 1 > 0
        ech, piv = all_lines_span(pl, lines)
        assert not linalg.in_rowspace(ech, piv, c.vec, p)
        assert pc.reducibility_split(c, pt, lines, 0)


@pytest.mark.parametrize("p", [5, 7])
def test_reducibility_within_rank_one_subspace(p):
    pl = plane_for(p, 1)
    pt = pl.point_id(0, 0, 1)
    lines = pencil_lines(pl, [0, 1, 2, 3])
    basis = pc.concurrent_subspace_basis(pl, pt, lines, 1)
    rng = np.random.default_rng(p * 7)
    for _ in range(50):
        coeffs = rng.integers(0, p, size=len(basis))
        vec = np.zeros(pl.n, dtype=np.int64)
        for a, w in zip(coeffs, basis):
            vec += int(a) * w.vec
        c = pc.Codeword(pl, vec)
        assert pc.rank_at(c, pt) <= 1
        assert pc.reducibility_split(c, pt, lines, 1)


def test_reducibility_validation():
    p = 5
    pl = plane_for(p, 1)
    pt = pl.point_id(0, 0, 1)
    c = pc.example_odd_4(p)
    with pytest.raises(ValueError, match="not covered"):
        pc.reducibility_split(c, pt, pencil_lines(pl, [0, 1]), 0)
    with pytest.raises(ValueError, match="out of range"):
        pc.reducibility_split(c, pt, pencil_lines(pl, [0, 1, p - 1]), 3)
