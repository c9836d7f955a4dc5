from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from deltagl.errors import (
    CharPolyDoesNotSplit,
    DimensionMismatch,
    InsufficientPrecision,
    NotInvertible,
    NotOneUnitMatrix,
    NotRegular,
    NuDivisibleByP,
)
from deltagl.linalg import (
    PMatrix,
    char_poly,
    discriminant,
    hensel_eigen,
    hensel_root_matrix,
    principal_root_matrix,
    random_invertible,
    random_matrix,
    random_one_unit_matrix,
    random_regular_diagonal,
)
from deltagl.padic import PadicContext, PadicScalar

CONTEXTS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)]


def _sign(perm):
    s = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def leibniz_det(ctx, rows):
    """Determinant by the permutation expansion, as an oracle."""
    n = len(rows)
    total = ctx.zero()
    for perm in itertools.permutations(range(n)):
        term = ctx.from_int(_sign(perm))
        for i in range(n):
            term = ctx.mul(term, rows[i][perm[i]])
        total = ctx.add(total, term)
    return total


def leibniz_char_poly(ctx, a: PMatrix):
    """Coefficients of det(s - a), highest first, via sum over principal minors."""
    n = a.n
    out = [ctx.one()]
    for k in range(1, n + 1):
        e = ctx.zero()
        for idx in itertools.combinations(range(n), k):
            minor = [[a.rows[i][j] for j in idx] for i in idx]
            e = ctx.add(e, leibniz_det(ctx, minor))
        out.append(e if k % 2 == 0 else ctx.neg(e))
    return out


@pytest.mark.parametrize("p,f", CONTEXTS)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_det_and_char_poly_match_leibniz(p, f, n):
    ctx = PadicContext(p, f, 8)
    rng = random.Random(p * 100 + f * 10 + n)
    for _ in range(5):
        a = random_matrix(ctx, n, rng)
        assert ctx.eq_raw(a.det().raw, leibniz_det(ctx, a.rows), ctx.N)
        monic = char_poly(a).monic_coeffs()
        for got, want in zip(monic, leibniz_char_poly(ctx, a)):
            assert ctx.eq_raw(got.raw, want, ctx.N)


def test_char_poly_frozen():
    ctx = PadicContext(5, 1, 6)
    cp = char_poly(PMatrix.from_ints(ctx, [[0, 1], [1, 0]]))
    assert [c.signed_coeffs()[0] for c in cp.monic_coeffs()] == [1, 0, -1]
    d = PMatrix.diag(ctx, [1, 2, 4])
    # product of squared differences (1-2)^2 (1-4)^2 (2-4)^2 = 36
    assert discriminant(d).eq_at(ctx.scalar(36), ctx.N)


@pytest.mark.parametrize("p,f", CONTEXTS)
def test_inverse_and_determinant_multiplicativity(p, f):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p + 7 * f)
    for n in (1, 2, 3):
        for _ in range(5):
            a, b = random_invertible(ctx, n, rng), random_invertible(ctx, n, rng)
            one = PMatrix.identity(ctx, n)
            assert (a @ a.inverse()).eq_at(one, ctx.N)
            assert (a.inverse() @ a).eq_at(one, ctx.N)
            assert (a @ b).det().eq_at(a.det() * b.det(), ctx.N)
            assert (a ** -2 @ a @ a).eq_at(one, ctx.N)


def test_singular_matrices():
    ctx = PadicContext(3, 1, 6)
    a = PMatrix.from_ints(ctx, [[1, 2], [2, 4]])
    assert not a.is_invertible()
    with pytest.raises(NotInvertible):
        a.inverse()
    # invertible over Q_3 but not over Z_3
    assert not PMatrix.from_ints(ctx, [[3, 0], [0, 1]]).is_invertible()


def test_dimension_checks():
    ctx = PadicContext(3, 1, 6)
    with pytest.raises(DimensionMismatch):
        PMatrix.identity(ctx, 2) @ PMatrix.identity(ctx, 3)
    with pytest.raises(DimensionMismatch):
        PMatrix.from_json(ctx, [[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        PMatrix(ctx, [[1, 2]])


def test_entrywise_maps():
    ctx = PadicContext(5, 2, 8)
    rng = random.Random(4)
    a = random_matrix(ctx, 2, rng)
    pp = a.p_power()
    for i in range(2):
        for j in range(2):
            assert pp.entry(i, j).eq_at(a.entry(i, j) ** 5, ctx.N)
            assert a.frobenius().entry(i, j).eq_at(a.entry(i, j).frobenius(), ctx.N)
            assert a.delta().entry(i, j).eq_at(a.entry(i, j).delta(), ctx.N - 1)
    b = a.scale(25).div_p(2)
    assert b.prec == ctx.N - 2 and b.eq_at(a, ctx.N - 2)


def test_precision_tracking():
    ctx = PadicContext(3, 1, 8)
    a = PMatrix.identity(ctx, 2).with_prec(5)
    assert (a @ PMatrix.identity(ctx, 2)).prec == 5
    assert a.mul_p(2).prec == 7
    with pytest.raises(InsufficientPrecision):
        a.eq_at(PMatrix.identity(ctx, 2), 6)


# -- roots -------------------------------------------------------------------------


@pytest.mark.parametrize("p,f", CONTEXTS)
@pytest.mark.parametrize("nu", [2, -2, -1])
def test_matrix_root_series_vs_hensel(p, f, nu):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p * nu + f)
    for n in (1, 2, 3):
        U = random_one_unit_matrix(ctx, n, rng)
        R = principal_root_matrix(U, nu)
        assert R.eq_at(hensel_root_matrix(U, nu), ctx.N)
        back = R ** abs(nu)
        assert (back if nu > 0 else back.inverse()).eq_at(U, ctx.N)
        assert R.is_one_unit()


def test_matrix_root_inverse_and_errors():
    ctx = PadicContext(5, 1, 8)
    rng = random.Random(9)
    U = random_one_unit_matrix(ctx, 2, rng)
    assert principal_root_matrix(U, -1).eq_at(U.inverse(), ctx.N)
    with pytest.raises(NotOneUnitMatrix):
        principal_root_matrix(PMatrix.from_ints(ctx, [[2, 0], [0, 1]]), 2)
    with pytest.raises(NuDivisibleByP):
        principal_root_matrix(U, 5)


# -- eigen decomposition -------------------------------------------------------------


@pytest.mark.parametrize("p,f", [(5, 1), (7, 1), (3, 2), (5, 2)])
def test_hensel_eigen_reassembles(p, f):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p + f)
    for n in (2, 3):
        t0 = random_regular_diagonal(ctx, n, rng)
        x0 = random_invertible(ctx, n, rng)
        m = x0.inverse() @ t0 @ x0
        t, x = hensel_eigen(m)
        assert t.is_diagonal()
        assert (x.inverse() @ t @ x).eq_at(m, ctx.N)
        # eigenvalues are returned sorted by residue, so they agree with t0 up to order
        got = sorted(t.rows[i][i] if f == 1 else t.rows[i][i] for i in range(n))
        want = sorted(t0.rows[i][i] for i in range(n))
        assert got == want


def test_hensel_eigen_frozen():
    ctx = PadicContext(5, 1, 6)
    t, _ = hensel_eigen(PMatrix.from_ints(ctx, [[0, 1], [6, 0]]))
    assert [ctx.residue(t.rows[i][i]) for i in range(2)] == [1, 4]


def test_hensel_eigen_domain_errors():
    ctx = PadicContext(3, 1, 6)
    with pytest.raises(NotRegular):
        hensel_eigen(PMatrix.identity(ctx, 2))
    # s^2 + 1 is irreducible mod 3
    with pytest.raises(CharPolyDoesNotSplit):
        hensel_eigen(PMatrix.from_ints(ctx, [[0, -1], [1, 0]]))
    # it splits over F_9
    ctx2 = PadicContext(3, 2, 6)
    t, x = hensel_eigen(PMatrix.from_ints(ctx2, [[0, -1], [1, 0]]))
    assert (x.inverse() @ t @ x).eq_at(PMatrix.from_ints(ctx2, [[0, -1], [1, 0]]), ctx2.N)


# -- JSON and properties ------------------------------------------------------------------


def test_json_round_trip():
    ctx = PadicContext(5, 2, 6)
    rng = random.Random(2)
    a = random_matrix(ctx, 3, rng).with_prec(4)
    b = PMatrix.from_json(ctx, a.to_json())
    assert b.prec == 4 and b.eq_at(a, 4)
    assert PMatrix.from_json(ctx, [[1, 0], [0, 1]]).eq_at(PMatrix.identity(ctx, 2), ctx.N)


entries = st.lists(st.integers(min_value=0, max_value=3**8 - 1), min_size=9, max_size=9)


@settings(max_examples=60, deadline=None)
@given(entries, entries)
def test_ring_axioms_on_matrices(xs, ys):
    ctx = PadicContext(3, 1, 8)
    a = PMatrix.from_ints(ctx, [xs[0:3], xs[3:6], xs[6:9]])
    b = PMatrix.from_ints(ctx, [ys[0:3], ys[3:6], ys[6:9]])
    assert ((a + b) @ a).eq_at(a @ a + b @ a, ctx.N)
    assert (a @ b).T.eq_at(b.T @ a.T, ctx.N)
    assert (a @ b).det().eq_at(a.det() * b.det(), ctx.N)
    assert (a @ b).trace().eq_at((b @ a).trace(), ctx.N)
    cp_ab, cp_ba = char_poly(a @ b), char_poly(b @ a)
    for x, y in zip(cp_ab.P, cp_ba.P):
        assert x.eq_at(y, ctx.N)
    if a.is_invertible():
        assert (a @ a.inverse()).eq_at(PMatrix.identity(ctx, 3), ctx.N)
    assert isinstance(a.entry(0, 0), PadicScalar)
