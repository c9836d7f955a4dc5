"""Lifts of Frobenius on GL_n, evaluated pointwise.

A lift is described by an immutable value object whose ``evaluate`` method
returns Phi(a) for an invertible matrix a.  Every lift satisfies
Phi(a) = a^(p) mod p; its Christoffel symbol is Delta(a) = (Phi(a) - a^(p)) / p.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .errors import (
    DimensionMismatch,
    DomainError,
    InvalidInput,
    NoSqrtMinusOne,
    NotInCentralizer,
    NotInvertible,
    PDividesN,
    SymmetryMismatch,
)
from .jet import DeltaLieElement, plus_delta_r
from .linalg import PMatrix, char_poly, hensel_roots, hensel_root_matrix, principal_root_matrix
from .padic import PadicContext, PadicScalar, divide_by_p_exact, principal_root_scalar


def _require_invertible(a: PMatrix) -> None:
    if not a.is_invertible():
        raise NotInvertible("point must be invertible")


def _check_form(q: PMatrix, sign: int) -> None:
    if sign not in (1, -1):
        raise SymmetryMismatch("sign must be +1 or -1")
    if not q.T.eq_at(q.scale(sign), q.prec):
        raise SymmetryMismatch(f"q^t != {'+' if sign > 0 else '-'}q")
    if not q.is_invertible():
        raise NotInvertible("q must be invertible")


# ---------------------------------------------------------------------------
# lift variants


@dataclass(frozen=True)
class Standard:
    """Phi(x) = x^(p)."""

    n: Optional[int] = None

    def evaluate(self, a: PMatrix) -> PMatrix:
        _require_invertible(a)
        return a.p_power()


def chern_blocks(q: PMatrix, x: PMatrix) -> tuple[PMatrix, PMatrix]:
    """A = (x^(p))^t phi(q) x^(p) and B = (x^t q x)^(p)."""
    xp = x.p_power()
    A = xp.T @ q.frobenius(1) @ xp
    B = (x.T @ q @ x).p_power()
    return A, B


def chern_lambda(q: PMatrix, x: PMatrix) -> PMatrix:
    """Lambda(x) = (1 + p A^-1 C)^(1/2) with C = (B - A)/p, by the binomial series."""
    A, B = chern_blocks(q, x)
    C = (B - A).div_p(1)
    return principal_root_matrix((A.inverse() @ C).mul_p(1) + 1, 2)


def chern_lambda_hensel(q: PMatrix, x: PMatrix) -> PMatrix:
    """Lambda(x) as the digit-by-digit root of Lambda^2 = A^-1 B with Lambda = 1 mod p."""
    A, B = chern_blocks(q, x)
    return hensel_root_matrix(A.inverse() @ B, 2)


@dataclass(frozen=True)
class Chern:
    """The lift x^(p) Lambda(x) attached to a form q with q^t = sign * q.

    ``fault`` is a test hook: when set, Lambda is multiplied by 1 + p^k E for
    the given (k, E), producing a deliberately wrong lift.
    """

    q: PMatrix
    sign: int = 1
    fault: Optional[tuple[int, PMatrix]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        _check_form(self.q, self.sign)

    @property
    def n(self) -> int:
        return self.q.n

    def lam(self, a: PMatrix) -> PMatrix:
        lam = chern_lambda(self.q, a)
        if self.fault is not None:
            k, E = self.fault
            lam = lam @ (E.mul_p(k) + 1)
        return lam

    def evaluate(self, a: PMatrix) -> PMatrix:
        _require_invertible(a)
        if a.n != self.q.n:
            raise DimensionMismatch("point and form have different sizes")
        return a.p_power() @ self.lam(a)


def sl_lambda(a: PMatrix) -> PadicScalar:
    """lambda(x) = (det(x^(p)) / det(x)^p)^(-1/n), written as (1 + p c)^(-1/n)."""
    ctx = a.ctx
    ratio = a.p_power().det() * (a.det() ** ctx.p).inv()
    c = divide_by_p_exact(ratio - 1, 1)
    return principal_root_scalar(c.mul_p(1) + 1, -a.n)


@dataclass(frozen=True)
class SpecialLinear:
    """Phi(x) = lambda(x) x^(p), defined when p does not divide n."""

    n: int

    def evaluate(self, a: PMatrix) -> PMatrix:
        if a.ctx.p and self.n % a.ctx.p == 0:
            raise PDividesN(f"p = {a.ctx.p} divides n = {self.n}")
        if a.n != self.n:
            raise DimensionMismatch("point has the wrong size")
        _require_invertible(a)
        return a.p_power().scale(sl_lambda(a))


@dataclass(frozen=True)
class HermitianPoint:
    """z = [[a, b], [-b, a]] in the centralizer of [[0, 1], [-1, 0]]."""

    a: PMatrix
    b: PMatrix

    @property
    def r(self) -> int:
        return self.a.n


def q0(ctx: PadicContext, r: int) -> PMatrix:
    from .jet import split_form

    return split_form(ctx, "symplectic", 2 * r)


def _blocks(z: PMatrix) -> tuple[list, list, list, list]:
    r = z.n // 2
    rows = z.rows
    A = [row[:r] for row in rows[:r]]
    B = [row[r:] for row in rows[:r]]
    C = [row[:r] for row in rows[r:]]
    D = [row[r:] for row in rows[r:]]
    return A, B, C, D


def hermitian_embed(h: HermitianPoint) -> PMatrix:
    ctx = h.a.ctx
    r = h.r
    nb = -h.b
    rows = [list(h.a.rows[i]) + list(h.b.rows[i]) for i in range(r)]
    rows += [list(nb.rows[i]) + list(h.a.rows[i]) for i in range(r)]
    return PMatrix(ctx, rows, min(h.a.prec, h.b.prec))


def hermitian_project(z: PMatrix) -> HermitianPoint:
    if z.n % 2:
        raise DimensionMismatch("hermitian points have even size")
    ctx = z.ctx
    A, B, C, D = _blocks(z)
    a, b = PMatrix(ctx, A, z.prec), PMatrix(ctx, B, z.prec)
    if not (PMatrix(ctx, D, z.prec).eq_at(a, z.prec) and PMatrix(ctx, C, z.prec).eq_at(-b, z.prec)):
        raise NotInCentralizer("matrix does not commute with q0")
    return HermitianPoint(a, b)


def sqrt_minus_one(ctx: PadicContext) -> PadicScalar:
    roots = hensel_roots(ctx, [ctx.one(), ctx.zero(), ctx.one()], ctx.N)
    if not roots:
        raise NoSqrtMinusOne(f"-1 is not a square in W(F_{ctx.p}^{ctx.f}); use p = 1 mod 4 or even f")
    return PadicScalar(ctx, roots[0], ctx.N)


def c_map(h: HermitianPoint) -> PMatrix:
    """z^c = a + sqrt(-1) b."""
    i = sqrt_minus_one(h.a.ctx)
    return h.a + h.b.scale(i)


@dataclass(frozen=True)
class Hermitian:
    """The Chern lift of a hermitian form q, restricted to the centralizer of q0."""

    q: PMatrix

    def __post_init__(self) -> None:
        _check_form(self.q, 1)
        hermitian_project(self.q)

    @property
    def n(self) -> int:
        return self.q.n

    def evaluate(self, a: Union[PMatrix, HermitianPoint]) -> PMatrix:
        if isinstance(a, HermitianPoint):
            a = hermitian_embed(a)
        hermitian_project(a)
        return Chern(self.q, 1).evaluate(a)


def _alpha_matrix(alpha: Union[DeltaLieElement, PMatrix]) -> PMatrix:
    return alpha.mat if isinstance(alpha, DeltaLieElement) else alpha


@dataclass(frozen=True)
class Twist:
    """Phi^alpha(x) = (1 + p alpha) Phi(x)."""

    alpha: PMatrix
    base: "Lift"

    def __post_init__(self) -> None:
        if isinstance(self.alpha, DeltaLieElement):
            object.__setattr__(self, "alpha", self.alpha.mat)

    def epsilon(self) -> PMatrix:
        return self.alpha.mul_p(1) + 1

    def evaluate(self, a: PMatrix) -> PMatrix:
        return self.epsilon() @ self.base.evaluate(a)


@dataclass(frozen=True)
class Conjugation:
    """The lift horizontal for conjugation, defined on regular split matrices."""

    def evaluate(self, a: PMatrix) -> PMatrix:
        from .inner import conjugation_lift_eval

        return conjugation_lift_eval(a)


@dataclass(frozen=True)
class CharPoly:
    """The lift preserving characteristic polynomials, a^(p) Lambda(a) with Lambda diagonal."""

    target_prec: Optional[int] = None

    def evaluate(self, a: PMatrix) -> PMatrix:
        from .inner import charpoly_lift_eval

        return charpoly_lift_eval(a, self.target_prec)


@dataclass(frozen=True)
class InnerTwist:
    """x -> eps Phi(x) eps^-1 with eps = 1 + p alpha; preserves characteristic polynomials."""

    alpha: PMatrix
    base: "Lift" = CharPoly()

    def __post_init__(self) -> None:
        if isinstance(self.alpha, DeltaLieElement):
            object.__setattr__(self, "alpha", self.alpha.mat)

    def epsilon(self) -> PMatrix:
        return self.alpha.mul_p(1) + 1

    def evaluate(self, a: PMatrix) -> PMatrix:
        eps = self.epsilon()
        return eps @ self.base.evaluate(a) @ eps.inverse()


Lift = Union[Standard, Chern, SpecialLinear, Hermitian, Twist, Conjugation, CharPoly, InnerTwist]


# ---------------------------------------------------------------------------
# derived quantities


def evaluate(L: Lift, a: PMatrix) -> PMatrix:
    return L.evaluate(a)


def christoffel(L: Lift, a: PMatrix) -> PMatrix:
    """Delta(a) = (Phi(a) - a^(p)) / p."""
    return (L.evaluate(a) - a.p_power()).div_p(1)


def log_derivative(L: Lift, a: PMatrix) -> DeltaLieElement:
    """l-delta a = p^-1 (phi(a) Phi(a)^-1 - 1)."""
    _require_invertible(a)
    Phi = L.evaluate(a)
    return DeltaLieElement((a.frobenius(1) @ Phi.inverse() - 1).div_p(1), 1)


def log_derivative_alt(L: Lift, a: PMatrix) -> DeltaLieElement:
    """The same quantity via (delta a - Delta(a)) (a^(p) + p Delta(a))^-1."""
    _require_invertible(a)
    Phi = L.evaluate(a)
    Delta = (Phi - a.p_power()).div_p(1)
    return DeltaLieElement((a.delta() - Delta) @ Phi.inverse(), 1)


def standard_log_derivative(a: PMatrix) -> DeltaLieElement:
    """delta a (a^(p))^-1."""
    return DeltaLieElement(a.delta() @ a.p_power().inverse(), 1)


def cocycle_defect(L: Lift, a: PMatrix, b: PMatrix) -> DeltaLieElement:
    """{a, b} = p^-1 (Phi(a) Phi(b) Phi(ab)^-1 - 1)."""
    _require_invertible(a)
    _require_invertible(b)
    val = L.evaluate(a) @ L.evaluate(b) @ L.evaluate(a @ b).inverse() - 1
    return DeltaLieElement(val.div_p(1), 1)


def skew_cocycle_rhs(L: Lift, a: PMatrix, b: PMatrix) -> DeltaLieElement:
    """(phi(a) l-delta(b) phi(a)^-1) +_delta l-delta(a) +_delta {a, b}."""
    from .jet import star_delta

    term = star_delta(a, log_derivative(L, b))
    return plus_delta_r(plus_delta_r(term, log_derivative(L, a)), cocycle_defect(L, a, b))


def legendre_matrix(q: PMatrix, sign: int = 1) -> PMatrix:
    """Phi(1) = (1 + p (q^(p))^-1 delta q)^(-1/2) for the Chern lift of q."""
    _check_form(q, sign)
    X = q.p_power().inverse() @ q.delta()
    return principal_root_matrix(X.mul_p(1) + 1, -2)


def legendre_eigen_form(q: PMatrix) -> PMatrix:
    """Phi(1) for a symmetric 2x2 form q = [[a, b], [b, c]] through the eigenvalues of V.

    V = [[c^p da - b^p db, c^p db - b^p dc], [a^p db - b^p da, a^p dc - b^p db]]
    has eigenvalues l = {a, b, c} +- sqrt(D)/2; with phi_l = (1 + p l / (a^p c^p - b^2p))^-1
    the result is U diag(phi_1^(1/2), phi_2^(1/2)) U^-1 for an eigenvector matrix U.
    Requires D to be a unit square.
    """
    from .errors import CharPolyDoesNotSplit, NotRegular

    _check_form(q, 1)
    if q.n != 2:
        raise DimensionMismatch("the eigen form is for 2x2 forms")
    ctx = q.ctx
    a, b, c = q.entry(0, 0), q.entry(0, 1), q.entry(1, 1)
    p = ctx.p
    da, db, dc = a.delta(), b.delta(), c.delta()
    ap, bp, cp = a**p, b**p, c**p
    V = [[cp * da - bp * db, cp * db - bp * dc], [ap * db - bp * da, ap * dc - bp * db]]

    def bracket(x, y, dx, dy):
        return x**p * dy - y**p * dx

    half = ctx.scalar(2).inv()
    ab = bracket(a, b, da, db)
    bc = bracket(b, c, db, dc)
    ac = bracket(a, c, da, dc)
    abc = half * (ap * dc - bp * db * 2 + cp * da)
    D = ac * ac - ab * bc * 4
    if not D.is_unit():
        raise NotRegular("D is not a unit")
    roots = hensel_roots(ctx, [ctx.one(), ctx.zero(), ctx.neg(D.raw)], D.prec)
    if not roots:
        raise CharPolyDoesNotSplit("D is not a square")
    sq = PadicScalar(ctx, roots[0], D.prec)
    det = ap * cp - bp * bp
    cols, diag = [], []
    for lam in (abc + sq * half, abc - sq * half):
        v1, v2 = (V[0][1], lam - V[0][0])
        if not (v1.is_unit() or v2.is_unit()):
            v1, v2 = (lam - V[1][1], V[1][0])
        cols.append((v1, v2))
        diag.append(principal_root_scalar((lam * det.inv()).mul_p(1) + 1, -2))
    U = PMatrix.from_scalars(ctx, [[cols[0][0], cols[1][0]], [cols[0][1], cols[1][1]]])
    return U @ PMatrix.diag(ctx, diag) @ U.inverse()


# ---------------------------------------------------------------------------
# verification predicates


@dataclass
class Report:
    """Per-sample valuation shortfall against a target precision (0 = exact pass)."""

    name: str
    target: int
    shortfalls: list[int] = field(default_factory=list)

    def add(self, valuation: int) -> None:
        self.shortfalls.append(max(0, self.target - valuation))

    @property
    def passed(self) -> bool:
        return all(s == 0 for s in self.shortfalls)

    @property
    def max_shortfall(self) -> int:
        return max(self.shortfalls, default=0)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "target": self.target,
            "samples": len(self.shortfalls),
            "passed": self.passed,
            "max_shortfall": self.max_shortfall,
            "failures": [i for i, s in enumerate(self.shortfalls) if s],
        }


def h_defect(L: Lift, L0: Lift, q: PMatrix, a: PMatrix) -> int:
    """Valuation of Phi(a)^t phi(q) Phi(a) - Phi0(a^t q a)."""
    Phi = L.evaluate(a)
    lhs = Phi.T @ q.frobenius(1) @ Phi
    rhs = L0.evaluate(a.T @ q @ a)
    return lhs.diff_valuation(rhs)


def b_defect(L: Lift, L0: Lift, q: PMatrix, a: PMatrix) -> int:
    """Valuation of Phi0(a)^t phi(q) Phi(a) - Phi(a)^t phi(q) Phi0(a)."""
    Phi, Phi0 = L.evaluate(a), L0.evaluate(a)
    fq = q.frobenius(1)
    return (Phi0.T @ fq @ Phi).diff_valuation(Phi.T @ fq @ Phi0)


def verify_h_horizontal(L: Lift, L0: Lift, q: PMatrix, sign: int, samples: Iterable[PMatrix]) -> Report:
    _check_form(q, sign)
    rep = Report("H-horizontal", q.ctx.N - 1)
    for a in samples:
        rep.add(h_defect(L, L0, q, a))
    return rep


def verify_b_symmetric(L: Lift, L0: Lift, q: PMatrix, sign: int, samples: Iterable[PMatrix]) -> Report:
    _check_form(q, sign)
    rep = Report("B-symmetric", q.ctx.N - 1)
    for a in samples:
        rep.add(b_defect(L, L0, q, a))
    return rep


def lift_form(L: Lift) -> Optional[PMatrix]:
    """The form q underlying a (possibly twisted) Chern or hermitian lift."""
    while isinstance(L, (Twist, InnerTwist)):
        L = L.base
    if isinstance(L, (Chern, Hermitian)):
        return L.q
    return None


def prime_integral_values(kind: str, u: PMatrix, q: Optional[PMatrix] = None) -> list[PadicScalar]:
    if kind == "Hq":
        if q is None:
            raise DomainError("the Hq integral needs a form q")
        H = u.T @ q @ u
        return [H.entry(i, j) for i in range(u.n) for j in range(u.n)]
    if kind == "Det":
        return [u.det()]
    if kind == "CharPoly":
        return list(char_poly(u).P[1:])
    raise InvalidInput(f"unknown prime integral {kind!r}")


def verify_prime_integral(L: Lift, kind: str, u: PMatrix, q: Optional[PMatrix] = None,
                          prec: Optional[int] = None) -> bool:
    """True when delta(H(u)) = 0 for every component of the integral H.

    For Hq the integral is u^t q u, whose entries are delta-constants along
    the flow (for split q this is q times q^-1 u^t q u).
    """
    if not u.is_invertible():
        raise DomainError("u must be invertible")
    if kind == "Hq" and q is None:
        q = lift_form(L)
    target = min(u.ctx.N - 2, u.prec - 1) if prec is None else prec
    for v in prime_integral_values(kind, u, q):
        d = v.delta()
        if d.valuation() < target:
            return False
    return True


# ---------------------------------------------------------------------------
# the cover t^n = det(x)^2 used for the special linear lift


def sl_cover_point(ctx: PadicContext, y: PMatrix, e: PadicScalar) -> tuple[PMatrix, PadicScalar]:
    """A point (x, t) with t^n = det(x)^2: rescale the first column of y so det(x) = e^n."""
    n = y.n
    factor = (e**n) * y.det().inv()
    d = PMatrix.diag(ctx, [factor] + [1] * (n - 1))
    return y @ d, e * e


def sl_cover_lifts(x: PMatrix, t: PadicScalar) -> tuple[tuple[PMatrix, PadicScalar], tuple[PMatrix, PadicScalar]]:
    """(Phi_G(x, t), Phi_G0(x, t)) = ((lambda x^(p), t^p), (x^(p), lambda^-2 t^p))."""
    lam = sl_lambda(x)
    p = x.ctx.p
    return (x.p_power().scale(lam), t**p), (x.p_power(), (lam * lam).inv() * t**p)


def verify_sl_cover(x: PMatrix, t: PadicScalar, prec: Optional[int] = None) -> bool:
    """H- and B-conditions of the special linear lift on its cover, at N - 1 digits."""
    ctx = x.ctx
    n = x.n
    target = ctx.N - 1 if prec is None else prec
    (Px, Pt), (P0x, P0t) = sl_cover_lifts(x, t)
    ok = (P0t**n).eq_at(P0x.det() ** 2, target) and (Pt**n).eq_at(Px.det() ** 2, target)
    # H(x, t) = (t 1_n, t^2): H o Phi_G = Phi_G0 o H
    Hx = PMatrix.identity(ctx, n).scale(t)
    (_, _), (H0x, H0t) = sl_cover_lifts(Hx, t * t)
    ok = ok and H0x.eq_at(PMatrix.identity(ctx, n).scale(Pt), target) and H0t.eq_at(Pt * Pt, target)
    # B(P1, P2) = (t1 x1^-1 x2, t1 t2): symmetric under swapping Phi_G0 and Phi_G
    left = P0x.inverse() @ Px
    right = Px.inverse() @ P0x
    ok = ok and left.scale(P0t).eq_at(right.scale(Pt), target)
    return ok


def random_form(ctx: PadicContext, n: int, sign: int, rng: random.Random) -> PMatrix:
    """A random invertible q with q^t = sign * q."""
    from .linalg import random_matrix

    if sign == -1 and n % 2:
        raise DimensionMismatch("antisymmetric forms need even n")
    while True:
        m = random_matrix(ctx, n, rng)
        q = m + m.T.scale(sign)
        if q.is_invertible():
            return q


# ---------------------------------------------------------------------------
# descriptors


def lift_to_json(L: Lift) -> dict:
    if isinstance(L, Standard):
        return {"kind": "standard"}
    if isinstance(L, Chern):
        return {"kind": "chern", "q": L.q.to_json(), "sign": "+" if L.sign > 0 else "-"}
    if isinstance(L, SpecialLinear):
        return {"kind": "sl", "n": L.n}
    if isinstance(L, Hermitian):
        return {"kind": "hermitian", "q": L.q.to_json(), "sign": "+"}
    if isinstance(L, Twist):
        return {"kind": "twist", "alpha": L.alpha.to_json(), "base": lift_to_json(L.base)}
    if isinstance(L, Conjugation):
        return {"kind": "conjugation"}
    if isinstance(L, CharPoly):
        return {"kind": "charpoly"}
    if isinstance(L, InnerTwist):
        return {"kind": "inner_twist", "alpha": L.alpha.to_json(), "base": lift_to_json(L.base)}
    raise TypeError(f"unknown lift {L!r}")


def _sign(value) -> int:
    if value in (None, "+", 1, "1", "+1"):
        return 1
    if value in ("-", -1, "-1"):
        return -1
    raise InvalidInput(f"bad sign {value!r}")


def lift_from_json(ctx: PadicContext, data: dict, n: Optional[int] = None) -> Lift:
    if not isinstance(data, dict) or "kind" not in data:
        raise InvalidInput("lift descriptor must be an object with a 'kind'")
    kind = data["kind"]
    if kind == "standard":
        return Standard(n)
    if kind == "chern":
        return Chern(PMatrix.from_json(ctx, data["q"]), _sign(data.get("sign")))
    if kind == "sl":
        size = data.get("n", n)
        if size is None:
            raise InvalidInput("sl lift needs n")
        return SpecialLinear(int(size))
    if kind == "hermitian":
        return Hermitian(PMatrix.from_json(ctx, data["q"]))
    if kind == "twist":
        return Twist(PMatrix.from_json(ctx, data["alpha"]), lift_from_json(ctx, data["base"], n))
    if kind == "conjugation":
        return Conjugation()
    if kind == "charpoly":
        return CharPoly()
    if kind == "inner_twist":
        base = lift_from_json(ctx, data["base"], n) if "base" in data else CharPoly()
        return InnerTwist(PMatrix.from_json(ctx, data["alpha"]), base)
    raise InvalidInput(f"unknown lift kind {kind!r}")
