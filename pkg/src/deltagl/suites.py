"""Property suites behind ``deltagl verify``.

Every check draws its own generator from (seed, suite, check, p, f, N, n), so
reports do not depend on scheduling.  A check returns the number of samples it
ran and a list of failures, each carrying enough data to reproduce it.
"""

from __future__ import annotations

import hashlib
import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import comb
from typing import Callable, Optional

from .errors import DeltaGLError, InsufficientPrecision
from .inner import (
    charpoly_lambda,
    charpoly_lift_eval,
    conjugation_lift_eval,
    inner_obstruction_witness,
    isospectral_twist_eval,
)
from .jet import (
    DeltaLieElement,
    FullGL,
    JetPoint,
    Orthogonal,
    SpecialLinearGroup,
    Torus,
    bracket_delta,
    cartan_decompose,
    delta_lie_membership,
    ex_r,
    ghost,
    group_commutator,
    jet_identity,
    jet_inv,
    jet_mul,
    minus_delta_r,
    nabla1,
    plus_delta_r,
    split_form,
    star_delta,
    sub_delta_r,
    tau_involution,
)
from .lifts import (
    CharPoly,
    Chern,
    InnerTwist,
    SpecialLinear,
    Standard,
    b_defect,
    chern_lambda_hensel,
    h_defect,
    hermitian_embed,
    HermitianPoint,
    legendre_eigen_form,
    legendre_matrix,
    log_derivative,
    log_derivative_alt,
    random_form,
    skew_cocycle_rhs,
    sl_cover_point,
    standard_log_derivative,
    verify_sl_cover,
)
from .linalg import (
    PMatrix,
    char_poly,
    hensel_eigen,
    random_invertible,
    random_matrix,
    random_monomial,
    random_permutation,
    random_regular_diagonal,
)
from .padic import (
    PadicContext,
    PadicScalar,
    hensel_root_scalar,
    principal_root_scalar,
    random_one_unit,
    random_scalar,
    teichmuller,
)
from .sampling import (
    charpoly_domain_sample,
    fixed_locus_sample,
    gl_lie_sample,
    normalizer_element,
    orthogonal_lie_sample,
    orthogonal_sample,
    regular_sample,
    sl_lie_sample,
)
from .solver import (
    DeltaLinearProblem,
    audit_prime_integrals,
    equation_forms,
    fixed_point_solve,
    solve,
)

SUITES = ("padic", "jet", "bracket", "outer", "inner", "solver")
MAX_DUMPS = 3

SAMPLING_NOTE = (
    "entries uniform over the digits of W(F_{p^f})/p^N, resampled until the required "
    "unit, regularity or D** condition holds; one-units are 1 + p^r m with m uniform; "
    "points of SO(q) are torus or Weyl elements times root elements, times polar factors; "
    "solver checks use max(1, samples // 5) (lift, alpha, seed) triples; "
    "each check seeds its own generator from sha256(seed, suite, check, p, f, N, n)"
)


@dataclass
class Env:
    """What a check gets: context, matrix size, sample count, generator and fault hook."""

    ctx: PadicContext
    n: int
    samples: int
    rng: random.Random
    fault: Optional[int] = None


class Outcome:
    def __init__(self) -> None:
        self.count = 0
        self.failures: list[dict] = []
        self.skipped: Optional[str] = None
        self.shortfall = 0

    def record(self, ok: bool, **dump) -> None:
        self.count += 1
        if not ok:
            self.failures.append({"index": self.count - 1, **dump})

    def record_valuation(self, valuation: int, target: int, **dump) -> None:
        short = max(0, target - valuation)
        self.shortfall = max(self.shortfall, short)
        self.record(short == 0, valuation=valuation, target=target, **dump)

    def skip(self, reason: str) -> "Outcome":
        self.skipped = reason
        return self


CheckFn = Callable[[Env], Outcome]
REGISTRY: dict[str, list[tuple[str, CheckFn]]] = {s: [] for s in SUITES}


def check(suite: str, name: str):
    def deco(fn: CheckFn) -> CheckFn:
        REGISTRY[suite].append((name, fn))
        return fn

    return deco


def _m(a: PMatrix) -> dict:
    return a.to_json()


def _s(a: PadicScalar) -> dict:
    return a.to_json()


# ---------------------------------------------------------------------------
# padic


def _scalar_pairs(env: Env):
    for _ in range(env.samples):
        yield random_scalar(env.ctx, env.rng), random_scalar(env.ctx, env.rng)


@check("padic", "delta_additive")
def _delta_additive(env: Env) -> Outcome:
    out = Outcome()
    p, N = env.ctx.p, env.ctx.N
    for a, b in _scalar_pairs(env):
        cross = env.ctx.scalar(0)
        for i in range(1, p):
            cross = cross + (a**i) * (b ** (p - i)) * (comb(p, i) // p)
        lhs, rhs = (a + b).delta(), a.delta() + b.delta() - cross
        out.record(lhs.eq_at(rhs, N - 1), a=_s(a), b=_s(b))
    return out


@check("padic", "delta_multiplicative")
def _delta_multiplicative(env: Env) -> Outcome:
    out = Outcome()
    p, N = env.ctx.p, env.ctx.N
    for a, b in _scalar_pairs(env):
        lhs = (a * b).delta()
        rhs = a**p * b.delta() + b**p * a.delta() + (a.delta() * b.delta()).mul_p(1)
        out.record(lhs.eq_at(rhs, N - 1), a=_s(a), b=_s(b))
    return out


@check("padic", "frobenius_ring_automorphism")
def _frobenius(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    for a, b in _scalar_pairs(env):
        ok = (a + b).frobenius().eq_at(a.frobenius() + b.frobenius(), ctx.N)
        ok = ok and (a * b).frobenius().eq_at(a.frobenius() * b.frobenius(), ctx.N)
        ok = ok and a.frobenius(ctx.f).eq_at(a, ctx.N)
        ok = ok and a.frobenius().eq_at(a**ctx.p, 1)
        ok = ok and a.frobenius().frobenius(-1).eq_at(a, ctx.N)
        out.record(ok, a=_s(a), b=_s(b))
    return out


@check("padic", "teichmuller")
def _teichmuller(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    for _ in range(env.samples):
        t = teichmuller(ctx, ctx.residue(random_scalar(ctx, env.rng, unit=True).raw))
        ok = t.delta().eq_at(ctx.scalar(0), ctx.N - 1) and (t**ctx.q).eq_at(t, ctx.N)
        out.record(ok, t=_s(t))
    return out


@check("padic", "unit_inverse")
def _inverse(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    for _ in range(env.samples):
        a = random_scalar(ctx, env.rng, unit=True)
        out.record((a * a.inv()).eq_at(ctx.scalar(1), ctx.N), a=_s(a))
    return out


@check("padic", "principal_roots")
def _roots(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    exps = [nu for nu in (2, -2, 3, -1, 5) if nu % ctx.p]
    for _ in range(env.samples):
        u = random_one_unit(ctx, env.rng)
        nu = env.rng.choice(exps)
        r = principal_root_scalar(u, nu)
        ok = r.eq_at(hensel_root_scalar(u, nu), ctx.N) and (r - 1).valuation() >= 1
        ok = ok and (r ** abs(nu) if nu > 0 else (r ** abs(nu)).inv()).eq_at(u, ctx.N)
        out.record(ok, u=_s(u), nu=nu)
    return out


@check("padic", "exact_division")
def _division(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    for _ in range(env.samples):
        a = random_scalar(ctx, env.rng)
        k = env.rng.randrange(1, ctx.N)
        b = PadicScalar(ctx, ctx.mul_int(a.raw, ctx.p**k), ctx.N)
        q = PMatrix.from_scalars(ctx, [[b]]).div_p(k).entry(0, 0)
        out.record(q.eq_at(a, ctx.N - k) and q.prec == ctx.N - k, a=_s(a), k=k)
    return out


# ---------------------------------------------------------------------------
# jet


def _jet(env: Env) -> JetPoint:
    return JetPoint(random_invertible(env.ctx, env.n, env.rng), random_matrix(env.ctx, env.n, env.rng))


@check("jet", "ghost_homomorphism")
def _ghost_hom(env: Env) -> Outcome:
    out = Outcome()
    for _ in range(env.samples):
        A, B = _jet(env), _jet(env)
        AB = jet_mul(A, B)
        g, ga, gb = ghost(AB), ghost(A), ghost(B)
        ok = g[0].eq_at(ga[0] @ gb[0], g[0].prec) and g[1].eq_at(ga[1] @ gb[1], env.ctx.N)
        gi = ghost(jet_identity(env.ctx, env.n))
        ok = ok and gi[0].is_one_unit() and gi[1].eq_at(PMatrix.identity(env.ctx, env.n), env.ctx.N)
        out.record(ok, a0=_m(A.a0), a1=_m(A.a1), b0=_m(B.a0), b1=_m(B.a1))
    return out


@check("jet", "ghost_injective")
def _ghost_inj(env: Env) -> Outcome:
    out = Outcome()
    for _ in range(env.samples):
        A = _jet(env)
        w0, w1 = ghost(A)
        a1 = (w1 - w0.p_power()).div_p(1)
        out.record(w0.eq_at(A.a0, env.ctx.N) and a1.eq_at(A.a1, env.ctx.N - 1), a0=_m(A.a0), a1=_m(A.a1))
    return out


@check("jet", "jet_group_axioms")
def _jet_group(env: Env) -> Outcome:
    out = Outcome()
    N = env.ctx.N
    one = jet_identity(env.ctx, env.n)
    for _ in range(env.samples):
        A, B, C = _jet(env), _jet(env), _jet(env)
        L, R = jet_mul(jet_mul(A, B), C), jet_mul(A, jet_mul(B, C))
        ok = L.a0.eq_at(R.a0, N) and L.a1.eq_at(R.a1, N - 1)
        I = jet_mul(A, jet_inv(A))
        ok = ok and I.a0.eq_at(one.a0, N) and I.a1.eq_at(one.a1, N - 2)
        out.record(ok, a0=_m(A.a0), a1=_m(A.a1))
    return out


@check("jet", "nabla_multiplicative")
def _nabla(env: Env) -> Outcome:
    out = Outcome()
    N = env.ctx.N
    for _ in range(env.samples):
        a, b = random_invertible(env.ctx, env.n, env.rng), random_invertible(env.ctx, env.n, env.rng)
        lhs, rhs = nabla1(a @ b), jet_mul(nabla1(a), nabla1(b))
        out.record(lhs.a0.eq_at(rhs.a0, N) and lhs.a1.eq_at(rhs.a1, N - 1), a=_m(a), b=_m(b))
    return out


# ---------------------------------------------------------------------------
# bracket


def _order_pairs(env: Env) -> list[tuple[int, int]]:
    top = min(4, env.ctx.N - 2)
    return [(r, s) for r in range(1, top) for s in range(1, top) if r + s <= top]


def _elem(env: Env, order: int) -> DeltaLieElement:
    return gl_lie_sample(env.ctx, env.n, env.rng, order)


def _ordinary_bracket(a: PMatrix, b: PMatrix) -> PMatrix:
    return a @ b - b @ a


@check("bracket", "mod_p_formula")
def _bracket_mod_p(env: Env) -> Outcome:
    out = Outcome()
    pairs = _order_pairs(env)
    for i in range(env.samples):
        r, s = pairs[i % len(pairs)]
        a, b = _elem(env, r), _elem(env, s)
        br = bracket_delta(a, b).mat
        expect = _ordinary_bracket(a.mat.frobenius(s), b.mat.frobenius(r))
        out.record(br.eq_at(expect, 1), r=r, s=s, alpha=_m(a.mat), beta=_m(b.mat))
    return out


@check("bracket", "antisymmetry")
def _bracket_antisym(env: Env) -> Outcome:
    out = Outcome()
    pairs = _order_pairs(env)
    for i in range(env.samples):
        r, s = pairs[i % len(pairs)]
        a, b = _elem(env, r), _elem(env, s)
        total = plus_delta_r(bracket_delta(a, b), bracket_delta(b, a))
        out.record(total.mat.valuation() >= 1, r=r, s=s, alpha=_m(a.mat), beta=_m(b.mat))
    return out


@check("bracket", "jacobi")
def _bracket_jacobi(env: Env) -> Outcome:
    out = Outcome()
    for _ in range(env.samples):
        a, b, c = _elem(env, 1), _elem(env, 1), _elem(env, 1)
        terms = [bracket_delta(bracket_delta(x, y), z) for x, y, z in ((a, b, c), (b, c, a), (c, a, b))]
        total = plus_delta_r(plus_delta_r(terms[0], terms[1]), terms[2])
        out.record(total.mat.valuation() >= 1, alpha=_m(a.mat), beta=_m(b.mat), gamma=_m(c.mat))
    return out


@check("bracket", "linearity")
def _bracket_linear(env: Env) -> Outcome:
    out = Outcome()
    pairs = _order_pairs(env)
    for i in range(env.samples):
        r, s = pairs[i % len(pairs)]
        a, a2, b = _elem(env, r), _elem(env, r), _elem(env, s)
        lhs = bracket_delta(plus_delta_r(a, a2), b).mat
        rhs = bracket_delta(a, b).mat + bracket_delta(a2, b).mat
        lhs2 = bracket_delta(b, plus_delta_r(a, a2)).mat
        rhs2 = bracket_delta(b, a).mat + bracket_delta(b, a2).mat
        out.record(lhs.eq_at(rhs, 1) and lhs2.eq_at(rhs2, 1), r=r, s=s)
    return out


@check("bracket", "ex_commutator")
def _bracket_ex(env: Env) -> Outcome:
    out = Outcome()
    pairs = _order_pairs(env)
    N = env.ctx.N
    for i in range(env.samples):
        r, s = pairs[i % len(pairs)]
        a, b = _elem(env, r), _elem(env, s)
        lhs = ex_r(bracket_delta(a, b))
        rhs = group_commutator(ex_r(a), ex_r(b))
        out.record(lhs.eq_at(rhs, N - (r + s)), r=r, s=s, alpha=_m(a.mat), beta=_m(b.mat))
    return out


@check("bracket", "ex2_star_identity")
def _bracket_ex2(env: Env) -> Outcome:
    out = Outcome()
    N = env.ctx.N
    for _ in range(env.samples):
        a, b = _elem(env, 1), _elem(env, 1)
        lhs = ex_r(bracket_delta(a, b))
        rhs = ex_r(sub_delta_r(star_delta(ex_r(a), b), b))
        out.record(lhs.eq_at(rhs, N - 2), alpha=_m(a.mat), beta=_m(b.mat))
    return out


@check("bracket", "group_law")
def _group_law(env: Env) -> Outcome:
    out = Outcome()
    N = env.ctx.N
    for i in range(env.samples):
        r = 1 + i % 2
        a, b, c = _elem(env, r), _elem(env, r), _elem(env, r)
        L = plus_delta_r(plus_delta_r(a, b), c).mat
        R = plus_delta_r(a, plus_delta_r(b, c)).mat
        z = plus_delta_r(a, minus_delta_r(a)).mat
        out.record(L.eq_at(R, N - r) and z.valuation() >= N - r, r=r, alpha=_m(a.mat))
    return out


def _orthogonal_form(env: Env) -> Optional[Orthogonal]:
    n = env.n
    if n >= 2:
        kind = "symplectic" if n % 2 == 0 and env.rng.random() < 0.5 else (
            "orthogonal_even" if n % 2 == 0 else "orthogonal_odd")
        sign = -1 if kind == "symplectic" else 1
        return Orthogonal(split_form(env.ctx, kind, n), sign)
    return Orthogonal(random_form(env.ctx, 1, 1, env.rng), 1)


@check("bracket", "membership")
def _membership(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, env.n
    for i in range(env.samples):
        r = 1 + i % 2
        S = _orthogonal_form(env)
        a = orthogonal_lie_sample(S.q, env.rng, r)
        ok = delta_lie_membership(S, a) and delta_lie_membership(FullGL(n), a)
        if n % ctx.p:
            ok = ok and delta_lie_membership(SpecialLinearGroup(n), sl_lie_sample(ctx, n, env.rng, r))
        d = PMatrix.diag(ctx, [random_scalar(ctx, env.rng) for _ in range(n)]).with_prec(ctx.N - r)
        ok = ok and delta_lie_membership(Torus(n), DeltaLieElement(d, r))
        out.record(ok, order=r, q=_m(S.q), alpha=_m(a.mat))
    return out


@check("bracket", "bracket_preserves_subalgebra")
def _bracket_functorial(env: Env) -> Outcome:
    out = Outcome()
    pairs = _order_pairs(env)
    ctx, n = env.ctx, env.n
    for i in range(env.samples):
        r, s = pairs[i % len(pairs)]
        S = _orthogonal_form(env)
        a, b = orthogonal_lie_sample(S.q, env.rng, r), orthogonal_lie_sample(S.q, env.rng, s)
        ok = delta_lie_membership(S, bracket_delta(a, b))
        if n % ctx.p:
            c, d = sl_lie_sample(ctx, n, env.rng, r), sl_lie_sample(ctx, n, env.rng, s)
            ok = ok and delta_lie_membership(SpecialLinearGroup(n), bracket_delta(c, d))
        out.record(ok, r=r, s=s, q=_m(S.q), alpha=_m(a.mat), beta=_m(b.mat))
    return out


# ---------------------------------------------------------------------------
# outer


def _forms(env: Env) -> list[tuple[str, PMatrix, int]]:
    """Random symmetric and antisymmetric forms of size n (antisymmetric only for even n), plus split ones."""
    ctx, n = env.ctx, env.n
    out = [("random_symmetric", random_form(ctx, n, 1, env.rng), 1)]
    if n % 2 == 0:
        out.append(("random_antisymmetric", random_form(ctx, n, -1, env.rng), -1))
        out.append(("split_symplectic", split_form(ctx, "symplectic", n), -1))
        out.append(("split_orthogonal", split_form(ctx, "orthogonal_even", n), 1))
    elif n >= 3:
        out.append(("split_orthogonal", split_form(ctx, "orthogonal_odd", n), 1))
    return out


def _chern(env: Env, q: PMatrix, sign: int) -> Chern:
    if env.fault is None:
        return Chern(q, sign)
    E = PMatrix.diag(env.ctx, [1] + [0] * (q.n - 1))
    return Chern(q, sign, fault=(env.fault, E))


def _chern_property(env: Env, defect) -> Outcome:
    out = Outcome()
    forms = _forms(env)
    std = Standard()
    target = env.ctx.N - 1
    for i in range(env.samples):
        label, q, sign = forms[i % len(forms)]
        a = random_invertible(env.ctx, env.n, env.rng)
        v = defect(_chern(env, q, sign), std, q, a)
        out.record_valuation(v, target, form=label, q=_m(q), point=_m(a))
    return out


@check("outer", "chern_h_horizontal")
def _chern_h(env: Env) -> Outcome:
    return _chern_property(env, h_defect)


@check("outer", "chern_b_symmetric")
def _chern_b(env: Env) -> Outcome:
    return _chern_property(env, b_defect)


@check("outer", "chern_lambda_uniqueness")
def _chern_unique(env: Env) -> Outcome:
    out = Outcome()
    forms = _forms(env)
    for i in range(env.samples):
        label, q, sign = forms[i % len(forms)]
        a = random_invertible(env.ctx, env.n, env.rng)
        lam = _chern(env, q, sign).lam(a)
        out.record(lam.eq_at(chern_lambda_hensel(q, a), env.ctx.N - 1), form=label, q=_m(q), point=_m(a))
    return out


def _legendre_symbol(a: int, p: int) -> int:
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@check("outer", "legendre_scalar")
def _legendre_n1(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    p, M = ctx.p, ctx.M
    for a in range(1, p):
        q = PMatrix.from_ints(ctx, [[a]])
        value = legendre_matrix(q).entry(0, 0)
        expect = pow(a, (p - 1) // 2, M) * _legendre_symbol(a, p) % M
        ok = value.eq_at(ctx.scalar(expect), ctx.N - 1)
        ok = ok and Chern(q).evaluate(PMatrix.identity(ctx, 1)).eq_at(PMatrix.from_ints(ctx, [[expect]]), ctx.N - 1)
        out.record(ok, q=a, value=_s(value), expected=str(expect))
    return out


@check("outer", "legendre_eigen_form")
def _legendre_n2(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    tries = 0
    while out.count < env.samples and tries < 20 * env.samples:
        tries += 1
        q = random_form(ctx, 2, 1, env.rng)
        try:
            E = legendre_eigen_form(q)
        except DeltaGLError:
            continue
        out.record(E.eq_at(legendre_matrix(q), ctx.N - 1), q=_m(q))
    return out


@check("outer", "sl2_equals_sp2")
def _sl2(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    q = split_form(ctx, "symplectic", 2)
    for _ in range(env.samples):
        a = random_invertible(ctx, 2, env.rng)
        lhs, rhs = SpecialLinear(2).evaluate(a), _chern(env, q, -1).evaluate(a)
        out.record_valuation(lhs.diff_valuation(rhs), ctx.N - 1, point=_m(a))
    return out


def _split_forms(env: Env) -> list[tuple[PMatrix, int]]:
    ctx, n = env.ctx, env.n
    if n % 2 == 0:
        return [(split_form(ctx, "symplectic", n), -1), (split_form(ctx, "orthogonal_even", n), 1)]
    if n >= 3:
        return [(split_form(ctx, "orthogonal_odd", n), 1)]
    return []


@check("outer", "fixed_locus_coincidence")
def _fixed_locus(env: Env) -> Outcome:
    out = Outcome()
    forms = _split_forms(env)
    if not forms:
        return out.skip("no split form of size 1")
    for i in range(env.samples):
        q, sign = forms[i % len(forms)]
        u = fixed_locus_sample(q, env.rng)
        v = _chern(env, q, sign).evaluate(u).diff_valuation(u.p_power())
        out.record_valuation(v, env.ctx.N - 1, q=_m(q), point=_m(u))
    return out


@check("outer", "cartan_decomposition")
def _cartan(env: Env) -> Outcome:
    out = Outcome()
    forms = _split_forms(env)
    if not forms:
        return out.skip("no split form of size 1")
    N = env.ctx.N
    for i in range(env.samples):
        q, sign = forms[i % len(forms)]
        S = Orthogonal(q, sign)
        a = orthogonal_sample(q, env.rng)
        l0 = standard_log_derivative(a)
        plus, minus = cartan_decompose(S, l0)
        prec = N - 2
        ok = plus_delta_r(plus, minus).mat.eq_at(l0.mat, prec)
        ok = ok and tau_involution(q, plus).mat.eq_at(plus.mat, prec)
        ok = ok and tau_involution(q, minus).mat.eq_at(minus_delta_r(minus).mat, prec)
        again = cartan_decompose(S, plus_delta_r(plus, minus))
        ok = ok and again[0].mat.eq_at(plus.mat, prec) and again[1].mat.eq_at(minus.mat, prec)
        ok = ok and log_derivative(_chern(env, q, sign), a).mat.eq_at(plus.mat, prec)
        out.record(ok, q=_m(q), point=_m(a))
    return out


@check("outer", "normalizer_compatibility")
def _n_compat(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, env.n
    forms = _split_forms(env)
    N = ctx.N
    for i in range(env.samples):
        x = random_invertible(ctx, n, env.rng)
        w = random_monomial(ctx, n, env.rng)
        ok = True
        if forms:
            q, sign = forms[i % len(forms)]
            from .jet import split_kind

            L = _chern(env, q, sign)
            v = normalizer_element(ctx, split_kind(q), n, env.rng)
            ok = L.evaluate(x @ w).eq_at(L.evaluate(x) @ w.p_power(), N - 1)
            ok = ok and L.evaluate(v @ x).eq_at(v.p_power() @ L.evaluate(x), N - 1)
        if n % ctx.p:
            SL = SpecialLinear(n)
            ok = ok and SL.evaluate(x @ w).eq_at(SL.evaluate(x) @ w.p_power(), N - 1)
            ok = ok and SL.evaluate(w @ x).eq_at(w.p_power() @ SL.evaluate(x), N - 1)
        ok = ok and (x @ w).p_power().eq_at(x.p_power() @ w.p_power(), N)
        ok = ok and (w @ x).p_power().eq_at(w.p_power() @ x.p_power(), N)
        out.record(ok, point=_m(x), monomial=_m(w))
    return out


@check("outer", "sl_cover")
def _sl_cover(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, env.n
    if n % ctx.p == 0:
        return out.skip("p divides n")
    for _ in range(env.samples):
        y = random_invertible(ctx, n, env.rng)
        e = random_scalar(ctx, env.rng, unit=True)
        x, t = sl_cover_point(ctx, y, e)
        out.record(verify_sl_cover(x, t), x=_m(x), t=_s(t))
    return out


@check("outer", "log_derivative_cocycle")
def _cocycle(env: Env) -> Outcome:
    out = Outcome()
    forms = _forms(env)
    N = env.ctx.N
    for i in range(env.samples):
        label, q, sign = forms[i % len(forms)]
        L = _chern(env, q, sign)
        a, b = random_invertible(env.ctx, env.n, env.rng), random_invertible(env.ctx, env.n, env.rng)
        ok = log_derivative(L, a).mat.eq_at(log_derivative_alt(L, a).mat, N - 2)
        ok = ok and log_derivative(L, a @ b).mat.eq_at(skew_cocycle_rhs(L, a, b).mat, N - 2)
        out.record(ok, form=label, a=_m(a), b=_m(b))
    return out


@check("outer", "hermitian_centralizer")
def _hermitian(env: Env) -> Outcome:
    """The Chern lift of q = 1 maps the centralizer of [[0,1],[-1,0]] to itself; for r = 1 it has the closed form."""
    out = Outcome()
    ctx = env.ctx
    r = max(1, env.n // 2)
    q = PMatrix.identity(ctx, 2 * r)
    L = Chern(q, 1)
    for _ in range(env.samples):
        while True:
            h = HermitianPoint(random_matrix(ctx, r, env.rng), random_matrix(ctx, r, env.rng))
            z = hermitian_embed(h)
            if z.is_invertible():
                break
        Phi = L.evaluate(z)
        from .lifts import hermitian_project

        try:
            hermitian_project(Phi.with_prec(ctx.N - 1))
            ok = True
        except DeltaGLError:
            ok = False
        if r == 1 and ok:
            a, b = h.a.entry(0, 0), h.b.entry(0, 0)
            p = ctx.p
            ratio = ((a * a + b * b) ** p) * (a ** (2 * p) + b ** (2 * p)).inv()
            if ratio.is_unit():
                K = principal_root_scalar(ratio, 2)
                ok = Phi.entry(0, 0).eq_at(a**p * K, ctx.N - 1) and Phi.entry(0, 1).eq_at(b**p * K, ctx.N - 1)
        out.record(ok, point=_m(z))
    return out


# ---------------------------------------------------------------------------
# inner


def _inner_n(env: Env) -> int:
    return env.n if env.n >= 2 else 2


@check("inner", "charpoly_preserved")
def _cp_preserved(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    for _ in range(env.samples):
        a = charpoly_domain_sample(ctx, n, env.rng)
        F = charpoly_lift_eval(a)
        P, Q = char_poly(F).P, char_poly(a).P
        v = min((x - y**ctx.p).valuation() for x, y in zip(P, Q))
        out.record_valuation(v, ctx.N - 1, point=_m(a))
    return out


@check("inner", "charpoly_lambda_diagonal")
def _cp_diag(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    for _ in range(env.samples):
        a = charpoly_domain_sample(ctx, n, env.rng)
        lam = charpoly_lambda(a)
        F = charpoly_lift_eval(a)
        ok = lam.is_diagonal() and lam.is_one_unit() and F.eq_at(a.p_power(), 1)
        out.record(ok, point=_m(a))
    return out


@check("inner", "charpoly_regular_diagonal")
def _cp_regular_diag(env: Env) -> Outcome:
    """On regular diagonals t the lift stays diagonal and reduces to t^(p); it is not t^(p) itself."""
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    if n >= ctx.q:
        return out.skip("too few residues for a regular diagonal")
    for _ in range(env.samples):
        t = random_regular_diagonal(ctx, n, env.rng)
        F = charpoly_lift_eval(t)
        v = min((x - y**ctx.p).valuation() for x, y in zip(char_poly(F).P, char_poly(t).P))
        ok = F.is_diagonal() and F.eq_at(t.p_power(), 1) and v >= ctx.N - 1
        out.record(ok, point=_m(t))
    return out


@check("inner", "charpoly_permutation_equivariance")
def _cp_equiv(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    for _ in range(env.samples):
        a = charpoly_domain_sample(ctx, n, env.rng)
        w = PMatrix.permutation(ctx, random_permutation(n, env.rng))
        lhs = charpoly_lift_eval(w @ a @ w.inverse())
        rhs = w @ charpoly_lift_eval(a) @ w.inverse()
        out.record(lhs.eq_at(rhs, ctx.N - 1), point=_m(a), w=_m(w))
    return out


@check("inner", "isospectral_twist")
def _cp_twist(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    for _ in range(env.samples):
        a = charpoly_domain_sample(ctx, n, env.rng)
        alpha = random_matrix(ctx, n, env.rng)
        F = isospectral_twist_eval(a, alpha)
        P, Q = char_poly(F).P, char_poly(a).P
        v = min((x - y**ctx.p).valuation() for x, y in zip(P, Q))
        out.record_valuation(v, ctx.N - 1, point=_m(a), alpha=_m(alpha))
    return out


@check("inner", "conjugation_well_defined")
def _conj(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    if n >= ctx.q:
        return out.skip("too few residues for a regular diagonal")
    for _ in range(env.samples):
        m = regular_sample(ctx, n, env.rng)
        t, x = hensel_eigen(m)
        w = PMatrix.permutation(ctx, random_permutation(n, env.rng))
        d = PMatrix.diag(ctx, [random_scalar(ctx, env.rng, unit=True) for _ in range(n)])
        base = conjugation_lift_eval(m, (t, x))
        other = conjugation_lift_eval(m, (w @ t @ w.inverse(), d @ w @ x))
        ok = base.eq_at(other, ctx.N - 1) and base.eq_at(m.p_power(), 1)
        ok = ok and base.eq_at(conjugation_lift_eval(m), ctx.N - 1)
        out.record(ok, point=_m(m))
    return out


@check("inner", "conjugation_differs_from_charpoly")
def _conj_vs_cp(env: Env) -> Outcome:
    """Both lifts agree mod p; at least one sampled regular point separates them mod p^2."""
    out = Outcome()
    ctx, n = env.ctx, _inner_n(env)
    if n >= ctx.q:
        return out.skip("too few residues for a regular diagonal")
    separated = None
    for _ in range(env.samples):
        m = regular_sample(ctx, n, env.rng)
        try:
            F = charpoly_lift_eval(m)
        except DeltaGLError:
            continue
        G = conjugation_lift_eval(m)
        v = F.diff_valuation(G)
        if separated is None and v < ctx.N - 1:
            separated = (m, v)
        out.record(v >= 1, point=_m(m))
    if separated is None and out.count:
        out.failures.append({"index": -1, "reason": "no separating point found"})
    return out


@check("inner", "obstruction_witness")
def _witness(env: Env) -> Outcome:
    out = Outcome()
    ctx = env.ctx
    rep = inner_obstruction_witness(ctx, (1, 1, 1, 2))
    expect = {3: 3}.get(ctx.p)
    ok = rep.valuation == rep.det_defect_valuation
    if expect is not None and ctx.N > expect:
        ok = ok and rep.valuation == expect
    out.record(ok, report=rep.to_json())
    return out


# ---------------------------------------------------------------------------
# solver


def _triples(env: Env) -> int:
    return max(1, env.samples // 5)


def _solver_family(env: Env, family: str) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, env.n
    for _ in range(_triples(env)):
        integrals: list[str] = []
        q = None
        if family == "standard":
            lift = Standard(n)
            alpha = gl_lie_sample(ctx, n, env.rng).mat
            seed = random_invertible(ctx, n, env.rng)
        elif family == "chern":
            q = split_form(ctx, "orthogonal_even", n) if n % 2 == 0 else random_form(ctx, n, 1, env.rng)
            lift = Chern(q, 1)
            alpha = orthogonal_lie_sample(q, env.rng).mat
            seed = random_invertible(ctx, n, env.rng)
            integrals = ["Hq"]
        elif family == "special_linear":
            if n % ctx.p == 0:
                return out.skip("p divides n")
            lift = SpecialLinear(n)
            alpha = sl_lie_sample(ctx, n, env.rng).mat
            seed = random_invertible(ctx, n, env.rng)
            integrals = ["Det"]
        else:
            lift = InnerTwist(random_matrix(ctx, n, env.rng).with_prec(ctx.N - 1), CharPoly())
            alpha = PMatrix.zeros(ctx, n)
            seed = charpoly_domain_sample(ctx, n, env.rng)
            integrals = ["CharPoly", "Det"]
        problem = DeltaLinearProblem(lift, alpha)
        u = solve(problem, seed)
        forms = equation_forms(problem, u)
        audit = audit_prime_integrals(u, problem, integrals, q) if integrals else {}
        again = solve(problem, seed)
        ok = all(forms.values()) and all(audit.values()) and again.eq_at(u, u.prec)
        ok = ok and u.eq_at(PMatrix(ctx, _seed_rows(seed)), 1)
        out.record(ok, family=family, seed=_m(seed), alpha=_m(alpha), forms=forms, integrals=audit)
    return out


def _seed_rows(seed: PMatrix):
    return seed.residue()


@check("solver", "standard_flow")
def _solve_standard(env: Env) -> Outcome:
    return _solver_family(env, "standard")


@check("solver", "chern_flow")
def _solve_chern(env: Env) -> Outcome:
    return _solver_family(env, "chern")


@check("solver", "special_linear_flow")
def _solve_sl(env: Env) -> Outcome:
    return _solver_family(env, "special_linear")


@check("solver", "isospectral_flow")
def _solve_iso(env: Env) -> Outcome:
    return _solver_family(env, "isospectral")


@check("solver", "fixed_point_oracle")
def _solve_oracle(env: Env) -> Outcome:
    out = Outcome()
    ctx, n = env.ctx, env.n
    for _ in range(_triples(env)):
        q = random_form(ctx, n, 1, env.rng)
        problem = DeltaLinearProblem(Chern(q, 1), orthogonal_lie_sample(q.frobenius(1), env.rng).mat)
        seed = random_invertible(ctx, n, env.rng)
        u = solve(problem, seed)
        v = fixed_point_solve(problem, seed)
        out.record(u.eq_at(v, min(u.prec, v.prec)), q=_m(q), seed=_m(seed))
    return out


@check("solver", "entry_negative_control")
def _solve_negative(env: Env) -> Outcome:
    """A generic matrix entry is not a prime integral: some solution must move it."""
    out = Outcome()
    ctx, n = env.ctx, env.n
    moved = False
    for _ in range(_triples(env)):
        problem = DeltaLinearProblem(Standard(n), gl_lie_sample(ctx, n, env.rng).mat)
        u = solve(problem, random_invertible(ctx, n, env.rng))
        moved = moved or not audit_prime_integrals(u, problem, ["Entry"])["Entry"]
        out.count += 1
    if not moved:
        out.failures.append({"index": -1, "reason": "entry integral held on every solution"})
    return out


# ---------------------------------------------------------------------------
# runner


def _derive_rng(seed: int, *key) -> random.Random:
    digest = hashlib.sha256(":".join(str(k) for k in (seed,) + key).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


def _threads() -> int:
    raw = os.environ.get("DELTAGL_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            return 1
    return min(8, os.cpu_count() or 1)


def run_check(suite: str, name: str, fn: CheckFn, ctx: PadicContext, n: int, samples: int,
              seed: int, fault: Optional[int] = None) -> dict:
    env = Env(ctx, n, samples, _derive_rng(seed, suite, name, ctx.p, ctx.f, ctx.N, n), fault)
    try:
        out = fn(env)
    except DeltaGLError as exc:
        return {"suite": suite, "check": name, "passed": False, "samples": 0,
                "error": exc.code, "message": str(exc), "failures": []}
    entry = {
        "suite": suite,
        "check": name,
        "samples": out.count,
        "passed": not out.failures,
        "failures": out.failures[:MAX_DUMPS],
        "failure_count": len(out.failures),
    }
    if out.skipped:
        entry["skipped"] = out.skipped
    if out.shortfall:
        entry["max_shortfall"] = out.shortfall
    return entry


def selected(suite: str) -> list[tuple[str, str, CheckFn]]:
    names = SUITES if suite == "all" else (suite,)
    if any(s not in REGISTRY for s in names):
        raise KeyError(suite)
    return [(s, name, fn) for s in names for name, fn in REGISTRY[s]]


def run_suite(suite: str, ctx: PadicContext, n: int, samples: int, seed: int,
              fault: Optional[int] = None) -> dict:
    """Run every check of ``suite`` (or all suites) and assemble a deterministic report."""
    if fault is not None and not 1 <= fault < ctx.N:
        raise InsufficientPrecision("fault order must lie in [1, N)")
    tasks = selected(suite)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(lambda t: run_check(t[0], t[1], t[2], ctx, n, samples, seed, fault), tasks))
    results.sort(key=lambda r: (SUITES.index(r["suite"]), r["check"]))
    return {
        "header": {
            "suite": suite,
            "seed": seed,
            "samples": samples,
            "n": n,
            "context": ctx.to_json(),
            "fault": fault,
            "sampling": SAMPLING_NOTE,
        },
        "checks": results,
        "passed": all(r["passed"] for r in results),
    }
