"""Solving l-delta u = alpha, i.e. phi(u) = (1 + p alpha) Phi(u), digit by digit."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    CharPolyDoesNotSplit,
    DStarStarNotUnit,
    DomainError,
    InsufficientPrecision,
    LiftDefect,
    NotInvertible,
    NotRegular,
    SeedNotInvertible,
    TooLarge,
)
from .lifts import Lift, christoffel, lift_form, log_derivative, prime_integral_values
from .linalg import PMatrix
from .padic import PadicContext

DOMAIN_ERRORS = (NotRegular, CharPolyDoesNotSplit, DStarStarNotUnit, NotInvertible, DomainError)


@dataclass(frozen=True)
class DeltaLinearProblem:
    """The equation l-delta u = alpha for the lift L; prec defaults to N - 1 digits of u."""

    lift: Lift
    alpha: PMatrix
    prec: Optional[int] = None

    @property
    def ctx(self) -> PadicContext:
        return self.alpha.ctx

    def epsilon(self) -> PMatrix:
        return self.alpha.mul_p(1) + 1

    def twisted(self, u: PMatrix) -> PMatrix:
        """Phi^alpha(u) = eps Phi(u)."""
        return self.epsilon() @ self.lift.evaluate(u)


@dataclass
class SolutionSet:
    solutions: list[PMatrix] = field(default_factory=list)
    seeds: list[tuple] = field(default_factory=list)

    def add(self, seed: tuple, u: PMatrix) -> None:
        self.seeds.append(seed)
        self.solutions.append(u)


def _seed_matrix(ctx: PadicContext, seed) -> PMatrix:
    if isinstance(seed, PMatrix):
        rows = seed.residue()
    else:
        rows = tuple(tuple(ctx.residue(ctx.from_int(x) if isinstance(x, int) else ctx.from_coeffs(x))
                           for x in r) for r in seed)
    u = PMatrix(ctx, rows)
    if not u.is_invertible():
        raise SeedNotInvertible("seed is not invertible over the residue field")
    return u


def solve(problem: DeltaLinearProblem, seed) -> PMatrix:
    """The unique solution of phi(u) = eps Phi(u) reducing to ``seed`` mod p.

    With u = u_k + p^k h the k-th digit obeys phi(h) = c_k mod p, where
    c_k = (eps Phi(u_k) - phi(u_k)) / p^k, because Phi(u_k + p^k h) = Phi(u_k)
    mod p^(k+1).  Hence h is the inverse residue Frobenius of c_k.
    """
    ctx = problem.ctx
    u = _seed_matrix(ctx, seed)
    target = ctx.N - 1 if problem.prec is None else problem.prec
    if target < 3:
        raise InsufficientPrecision("the solver needs a budget of at least 3 digits")
    p = ctx.p
    for k in range(1, target):
        # digit k only needs Phi(u) mod p^(k+1), which depends on u mod p^(k+1)
        rhs = problem.twisted(u.with_prec(k + 1))
        if rhs.prec < k + 1:
            raise InsufficientPrecision(f"lift only known to {rhs.prec} digits")
        c = (rhs - u.frobenius(1)).div_p(k)
        h = PMatrix(ctx, c.residue()).frobenius(-1)
        h = PMatrix(ctx, h.residue())
        u = u + h.scale(p**k)
    u = u.with_prec(target)
    rhs = problem.twisted(u)
    if not u.frobenius(1).eq_at(rhs, min(u.prec, rhs.prec)):
        raise LiftDefect("phi(u) != eps Phi(u) after lifting")
    lhs, rhs = u.delta(), twisted_christoffel(problem, u)
    if not lhs.eq_at(rhs, min(lhs.prec, rhs.prec)):
        raise LiftDefect("delta u != Delta^alpha(u) after lifting")
    return u


def twisted_christoffel(problem: DeltaLinearProblem, u: PMatrix) -> PMatrix:
    """Delta^alpha(u) = alpha Phi(u) + Delta(u)."""
    return problem.alpha @ problem.lift.evaluate(u) + christoffel(problem.lift, u)


def fixed_point_solve(problem: DeltaLinearProblem, seed, iterations: Optional[int] = None) -> PMatrix:
    """Independent oracle: iterate u <- phi^-1(eps Phi(u)), a contraction by a factor p."""
    ctx = problem.ctx
    u = _seed_matrix(ctx, seed)
    steps = ctx.N if iterations is None else iterations
    for _ in range(steps):
        u = problem.twisted(u).frobenius(-1)
    return u


def equation_forms(problem: DeltaLinearProblem, u: PMatrix, prec: Optional[int] = None) -> dict[str, bool]:
    """Check l-delta u = alpha, delta u = Delta^alpha(u) and phi(u) = Phi^alpha(u)."""
    target = problem.ctx.N - 2 if prec is None else prec
    return {
        "log_derivative": log_derivative(problem.lift, u).mat.eq_at(problem.alpha, target),
        "christoffel": u.delta().eq_at(twisted_christoffel(problem, u), target),
        "frobenius": u.frobenius(1).eq_at(problem.twisted(u), target),
    }


def audit_prime_integrals(u: PMatrix, problem: DeltaLinearProblem, integrals: Sequence[str],
                          q: Optional[PMatrix] = None) -> dict[str, bool]:
    """For each named integral (Hq, Det, CharPoly, or Entry for a negative control), is delta(H(u)) = 0?"""
    target = problem.ctx.N - 2
    if q is None:
        q = lift_form(problem.lift)
    out = {}
    for name in integrals:
        if name == "Entry":
            values = [u.entry(0, 0)]
        else:
            values = prime_integral_values(name, u, q)
        out[name] = all(v.delta().valuation() >= target for v in values)
    return out


def enumerate_residue_seeds(problem: DeltaLinearProblem, n: int) -> list[tuple]:
    """Brute force over GL_n(F_p) for tiny instances: seeds whose digit-1 constraint holds."""
    ctx = problem.ctx
    if n > 2 or ctx.p > 5 or ctx.f != 1:
        raise TooLarge("seed enumeration is limited to n <= 2, p <= 5, f = 1")
    seeds = []
    for flat in itertools.product(range(ctx.p), repeat=n * n):
        rows = tuple(tuple(flat[i * n:(i + 1) * n]) for i in range(n))
        u = PMatrix.from_ints(ctx, rows)
        if not u.is_invertible():
            continue
        try:
            rhs = problem.twisted(u)
        except DOMAIN_ERRORS:
            continue
        if u.frobenius(1).eq_at(rhs, 1):
            seeds.append(rows)
    return seeds
