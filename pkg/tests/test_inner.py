from __future__ import annotations

import itertools
import random

import pytest

from deltagl.errors import DStarStarNotUnit, InsufficientPrecision, NotInvertible
from deltagl.inner import (
    charpoly_lambda,
    charpoly_lift_eval,
    conjugation_lift_eval,
    dstarstar,
    inner_obstruction_witness,
    isospectral_twist_eval,
    p_ij_matrix,
)
from deltagl.linalg import PMatrix, char_poly, hensel_eigen, random_matrix, random_regular_diagonal
from deltagl.padic import PadicContext
from deltagl.sampling import charpoly_domain_sample, regular_sample


def _charpoly_defect(F: PMatrix, a: PMatrix) -> int:
    p = a.ctx.p
    return min((x - y**p).valuation() for x, y in zip(char_poly(F).P, char_poly(a).P))


# -- P_ij and D** ------------------------------------------------------------------------------


@pytest.mark.parametrize("n", [2, 3])
def test_p_ij_against_pointwise_determinants(n):
    # det(s 1_{n,j} - a) with the (j, j) entry of the identity removed, evaluated at integers s
    ctx = PadicContext(5, 1, 8)
    rng = random.Random(n)
    a = random_matrix(ctx, n, rng)
    P = p_ij_matrix(a)
    for j in range(n):
        for s in range(-3, 4):
            m = [[(s if (i == k and i != j) else 0) for k in range(n)] for i in range(n)]
            direct = (PMatrix.from_ints(ctx, m) - a).det()
            total = ctx.scalar(0)
            for i in range(n):
                total = total + P.entry(i, j) * ((-1) ** i * s ** (n - 1 - i))
            assert direct.eq_at(total, ctx.N)
    assert dstarstar(a).eq_at(P.det(), ctx.N)


def test_p_ij_frozen():
    # for a diagonal t, column j is -t_j times the elementary symmetric functions of the other entries
    ctx = PadicContext(7, 1, 6)
    P = p_ij_matrix(PMatrix.diag(ctx, [1, 2, 3]))
    assert P == PMatrix.from_ints(ctx, [[-1, -2, -3], [-5, -8, -9], [-6, -6, -6]])
    assert dstarstar(PMatrix.diag(ctx, [1, 2, 3])).eq_at(ctx.scalar(12), ctx.N)


# -- the characteristic-polynomial lift ------------------------------------------------------------


@pytest.mark.parametrize("p,f", [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)])
@pytest.mark.parametrize("n", [2, 3])
def test_charpoly_lift_preserves_characteristic_polynomial(p, f, n):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p * n + f)
    for _ in range(5):
        a = charpoly_domain_sample(ctx, n, rng)
        lam = charpoly_lambda(a)
        assert lam.is_diagonal() and lam.is_one_unit()
        F = charpoly_lift_eval(a)
        assert F.eq_at(a.p_power() @ lam, ctx.N)
        assert _charpoly_defect(F, a) >= ctx.N - 1
        # inner twists keep the property
        alpha = random_matrix(ctx, n, rng)
        assert _charpoly_defect(isospectral_twist_eval(a, alpha), a) >= ctx.N - 1


def test_lambda_is_unique_by_digit_search():
    # enumerate every diagonal Lambda = 1 mod p at N = 3, p = 3, n = 2
    ctx = PadicContext(3, 1, 3)
    rng = random.Random(0)
    for _ in range(3):
        a = charpoly_domain_sample(ctx, 2, rng)
        target = [y**3 for y in char_poly(a).P]
        hits = []
        for k1, k2 in itertools.product(range(9), repeat=2):
            lam = PMatrix.diag(ctx, [1 + 3 * k1, 1 + 3 * k2])
            P = char_poly(a.p_power() @ lam).P
            if all(x.eq_at(y, ctx.N) for x, y in zip(P, target)):
                hits.append(lam)
        assert len(hits) == 1
        assert hits[0].eq_at(charpoly_lambda(a), ctx.N)


def test_regular_diagonal_stays_diagonal_but_moves():
    # on regular diagonals Phi(t) is diagonal and t^(p) mod p; the trace condition forces
    # trace Phi(t) = (sum t_i)^p, so Phi(t) differs from t^(p) in general
    ctx = PadicContext(7, 1, 8)
    rng = random.Random(1)
    moved = False
    for _ in range(10):
        t = random_regular_diagonal(ctx, 3, rng)
        F = charpoly_lift_eval(t)
        assert F.is_diagonal() and F.eq_at(t.p_power(), 1)
        total = t.trace()
        assert F.trace().eq_at(total**7, ctx.N)
        moved = moved or not F.eq_at(t.p_power(), ctx.N)
    assert moved


def test_lambda_precision_and_domain():
    ctx = PadicContext(5, 1, 8)
    rng = random.Random(2)
    a = charpoly_domain_sample(ctx, 2, rng)
    assert charpoly_lambda(a, 4).eq_at(charpoly_lambda(a), 4)
    with pytest.raises(InsufficientPrecision):
        charpoly_lambda(a, 9)
    with pytest.raises(DStarStarNotUnit):
        charpoly_lambda(PMatrix.identity(ctx, 2))
    with pytest.raises(NotInvertible):
        charpoly_lambda(PMatrix.from_ints(ctx, [[1, 0], [0, 5]]))


# -- the conjugation lift ------------------------------------------------------------------------


def test_conjugation_lift_does_not_depend_on_the_eigenbasis():
    ctx = PadicContext(7, 1, 10)
    rng = random.Random(3)
    for n in (2, 3):
        m = regular_sample(ctx, n, rng)
        t, x = hensel_eigen(m)
        d = PMatrix.diag(ctx, [2, 3, 5][:n])
        base = conjugation_lift_eval(m, (t, x))
        assert base.eq_at(conjugation_lift_eval(m, (t, d @ x)), ctx.N - 1)
        assert base.eq_at(m.p_power(), 1)
        # it maps t to t^(p) on diagonals
        assert conjugation_lift_eval(t).eq_at(t.p_power(), ctx.N - 1)


# -- obstruction witness ----------------------------------------------------------------------------


def test_witness_frozen_value():
    # (ad+bc)^6 - 2^6 (abcd)^3 - (ad-bc)^6 = 729 - 512 - 1 = 216 at (1, 1, 1, 2)
    ctx = PadicContext(3, 1, 10)
    rep = inner_obstruction_witness(ctx, (1, 1, 1, 2))
    assert rep.valuation == 3 and rep.det_defect_valuation == 3
    assert rep.defect.eq_at(ctx.scalar(216), ctx.N)
    assert rep.to_json()["witness"] is True


@pytest.mark.parametrize("p", [3, 5, 7])
def test_witness_two_routes_agree(p):
    ctx = PadicContext(p, 1, 12)
    rng = random.Random(p)
    for _ in range(10):
        pt = [rng.randrange(1, 50) for _ in range(4)]
        if (pt[0] * pt[3] - pt[1] * pt[2]) % p == 0:
            continue
        rep = inner_obstruction_witness(ctx, pt)
        assert rep.valuation == rep.det_defect_valuation
    with pytest.raises(NotInvertible):
        inner_obstruction_witness(ctx, (p, 0, 0, 1))
