from __future__ import annotations

import random

import pytest

from deltagl.errors import InsufficientPrecision, SeedNotInvertible, TooLarge
from deltagl.jet import split_form
from deltagl.lifts import CharPoly, Chern, InnerTwist, SpecialLinear, Standard, random_form
from deltagl.linalg import PMatrix, random_invertible, random_matrix
from deltagl.padic import PadicContext
from deltagl.sampling import charpoly_domain_sample, gl_lie_sample, orthogonal_lie_sample, sl_lie_sample
from deltagl.solver import (
    DeltaLinearProblem,
    audit_prime_integrals,
    enumerate_residue_seeds,
    equation_forms,
    fixed_point_solve,
    solve,
)

CONTEXTS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)]


@pytest.mark.parametrize("p,f", CONTEXTS)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_standard_flow(p, f, n):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p * n + f)
    problem = DeltaLinearProblem(Standard(n), gl_lie_sample(ctx, n, rng).mat)
    seed = random_invertible(ctx, n, rng)
    u = solve(problem, seed)
    assert all(equation_forms(problem, u).values())
    assert u.eq_at(PMatrix(ctx, seed.residue()), 1)
    assert solve(problem, seed) == u


@pytest.mark.parametrize("p,f", CONTEXTS)
def test_chern_flow_keeps_the_form(p, f):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(p + f)
    for n in (2, 3):
        q = split_form(ctx, "orthogonal_even", n) if n % 2 == 0 else random_form(ctx, n, 1, rng)
        problem = DeltaLinearProblem(Chern(q, 1), orthogonal_lie_sample(q, rng).mat)
        u = solve(problem, random_invertible(ctx, n, rng))
        assert all(equation_forms(problem, u).values())
        assert audit_prime_integrals(u, problem, ["Hq"])["Hq"]


def test_special_linear_flow_keeps_the_determinant():
    ctx = PadicContext(5, 2, 10)
    rng = random.Random(3)
    problem = DeltaLinearProblem(SpecialLinear(2), sl_lie_sample(ctx, 2, rng).mat)
    u = solve(problem, random_invertible(ctx, 2, rng))
    audit = audit_prime_integrals(u, problem, ["Det", "Entry"])
    assert audit["Det"]


def test_isospectral_flow_keeps_the_spectrum():
    ctx = PadicContext(7, 1, 10)
    rng = random.Random(4)
    lift = InnerTwist(random_matrix(ctx, 2, rng).with_prec(ctx.N - 1), CharPoly())
    problem = DeltaLinearProblem(lift, PMatrix.zeros(ctx, 2))
    u = solve(problem, charpoly_domain_sample(ctx, 2, rng))
    assert all(equation_forms(problem, u).values())
    audit = audit_prime_integrals(u, problem, ["CharPoly", "Det"])
    assert audit == {"CharPoly": True, "Det": True}


def test_generic_entry_is_not_an_integral():
    ctx = PadicContext(5, 1, 10)
    rng = random.Random(5)
    moved = 0
    for _ in range(5):
        problem = DeltaLinearProblem(Standard(2), gl_lie_sample(ctx, 2, rng).mat)
        u = solve(problem, random_invertible(ctx, 2, rng))
        moved += not audit_prime_integrals(u, problem, ["Entry"])["Entry"]
    assert moved > 0


@pytest.mark.parametrize("p,f", [(3, 1), (5, 2)])
def test_fixed_point_oracle_agrees(p, f):
    ctx = PadicContext(p, f, 10)
    rng = random.Random(6)
    q = random_form(ctx, 2, 1, rng)
    problem = DeltaLinearProblem(Chern(q, 1), orthogonal_lie_sample(q.frobenius(1), rng).mat)
    seed = random_invertible(ctx, 2, rng)
    u, v = solve(problem, seed), fixed_point_solve(problem, seed)
    assert u.eq_at(v, min(u.prec, v.prec))


def test_zero_alpha_from_identity_gives_identity():
    ctx = PadicContext(3, 2, 8)
    problem = DeltaLinearProblem(Standard(2), PMatrix.zeros(ctx, 2))
    assert solve(problem, [[1, 0], [0, 1]]).eq_at(PMatrix.identity(ctx, 2), ctx.N - 1)


def test_residue_seed_enumeration():
    ctx = PadicContext(3, 1, 6)
    problem = DeltaLinearProblem(Standard(2), PMatrix.zeros(ctx, 2))
    # every point of GL_2(F_3) satisfies the first-digit constraint of the standard lift
    assert len(enumerate_residue_seeds(problem, 2)) == 48
    with pytest.raises(TooLarge):
        enumerate_residue_seeds(DeltaLinearProblem(Standard(3), PMatrix.zeros(ctx, 3)), 3)


def test_solver_errors():
    ctx = PadicContext(3, 1, 6)
    problem = DeltaLinearProblem(Standard(2), PMatrix.zeros(ctx, 2))
    with pytest.raises(SeedNotInvertible):
        solve(problem, [[1, 1], [1, 1]])
    with pytest.raises(InsufficientPrecision):
        solve(DeltaLinearProblem(Standard(2), PMatrix.zeros(ctx, 2), prec=2), [[1, 0], [0, 1]])
