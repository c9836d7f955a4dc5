"""Lifts of Frobenius adapted to conjugation and to characteristic polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import DStarStarNotUnit, InsufficientPrecision, NotInvertible
from .linalg import PMatrix, _berkowitz, hensel_eigen
from .padic import PadicContext, PadicScalar, Raw


# ---------------------------------------------------------------------------
# conjugation-horizontal lift


def conjugation_lift_eval(m: PMatrix, decomposition: Optional[tuple[PMatrix, PMatrix]] = None) -> PMatrix:
    """Phi*(m) = m^(p) B^-1 A, with A = (x^(p))^-1 t^(p) x^(p) and B = m^(p), for m = x^-1 t x."""
    t, x = decomposition if decomposition is not None else hensel_eigen(m)
    xp = x.p_power()
    A = xp.inverse() @ t.p_power() @ xp
    B = (x.inverse() @ t @ x).p_power()
    return m.p_power() @ B.inverse() @ A


# ---------------------------------------------------------------------------
# characteristic-polynomial-horizontal lift


def _minor(rows: tuple, j: int) -> tuple:
    return tuple(tuple(x for k, x in enumerate(r) if k != j) for i, r in enumerate(rows) if i != j)


def partial_char_polys(a: PMatrix) -> list[list[Raw]]:
    """Coefficients (lowest degree first, n of them) of det(s 1_{n,j} - a) for each j.

    1_{n,j} is the identity with its j-th column removed.  By linearity in
    column j, det(s 1_{n,j} - a) = chi_a(s) - s chi_{a_j}(s), where a_j drops
    row and column j; both are computed division-free.
    """
    ctx = a.ctx
    n = a.n
    full = _berkowitz(ctx, a.rows)  # highest degree first, length n + 1
    out = []
    for j in range(n):
        sub = _berkowitz(ctx, _minor(a.rows, j))  # length n
        # chi_a(s) - s chi_sub(s); index by degree
        coeffs = []
        for deg in range(n):
            c_full = full[n - deg]
            c_sub = sub[n - deg] if deg >= 1 else ctx.zero()
            coeffs.append(ctx.sub(c_full, c_sub))
        out.append(coeffs)
    return out


def p_ij_matrix(a: PMatrix) -> PMatrix:
    """P_ij with det(s 1_{n,j} - a) = sum_i (-1)^i P_ij s^(n-1-i)."""
    ctx = a.ctx
    n = a.n
    cols = partial_char_polys(a)
    rows = []
    for i in range(n):
        deg = n - 1 - i
        rows.append([cols[j][deg] if i % 2 == 0 else ctx.neg(cols[j][deg]) for j in range(n)])
    return PMatrix(ctx, rows, a.prec)


def dstarstar(a: PMatrix) -> PadicScalar:
    """D**(a) = det(P_ij(a))."""
    return p_ij_matrix(a).det()


def _monic(ctx: PadicContext, m: PMatrix) -> list[Raw]:
    return _berkowitz(ctx, m.rows)


def charpoly_lambda(a: PMatrix, target_prec: Optional[int] = None) -> PMatrix:
    """Diagonal Lambda = 1 mod p with P_i(a^(p) Lambda) = P_i(a)^p at target_prec digits.

    Stage nu needs the defect modulo p^(nu+2), so Lambda is determined to the
    full precision of a.

    Successive approximation: at stage nu the defect of det(s - a^(p) Lambda_nu)
    against the target polynomial is divisible by p^(nu+1); its quotient U is
    matched mod p by sum_j z_j det(s 1_{n,j} - a^(p)), and
    Lambda_(nu+1) = Lambda_nu - p^(nu+1) diag(z).
    """
    ctx = a.ctx
    n = a.n
    if not a.is_invertible():
        raise NotInvertible("point must be invertible")
    target = a.prec if target_prec is None else target_prec
    if target > a.prec or target < 1:
        raise InsufficientPrecision(f"target precision {target} outside [1, {a.prec}]")
    if not dstarstar(a).is_unit():
        raise DStarStarNotUnit("D**(a) is not a unit")
    M = a.p_power()
    p = ctx.p
    target_poly = [ctx.pow(c, p) for c in _monic(ctx, a)]
    W = partial_char_polys(M)
    K = PMatrix(ctx, [[W[j][k] for j in range(n)] for k in range(n)], a.prec)
    K_inv = K.inverse()
    lam = [ctx.one() for _ in range(n)]
    for nu in range(target - 1):
        cur = _monic(ctx, M @ PMatrix.diag(ctx, lam))
        defect = [ctx.sub(x, y) for x, y in zip(cur, target_poly)]
        # degree k coefficient sits at index n - k
        U = PMatrix.diag(ctx, [defect[n - k] for k in range(n)], a.prec).div_p(nu + 1)
        u_vec = [U.rows[k][k] for k in range(n)]
        z = []
        for j in range(n):
            acc = ctx.zero()
            for k in range(n):
                acc = ctx.add(acc, ctx.mul(K_inv.rows[j][k], u_vec[k]))
            z.append(ctx.residue(acc))
        step = p ** (nu + 1)
        lam = [ctx.sub(l, ctx.mul_int(zj, step)) for l, zj in zip(lam, z)]
    return PMatrix.diag(ctx, lam, target)


def charpoly_lift_eval(a: PMatrix, target_prec: Optional[int] = None) -> PMatrix:
    """Phi**(a) = a^(p) Lambda(a)."""
    lam = charpoly_lambda(a, target_prec)
    return a.p_power() @ lam


def isospectral_twist_eval(a: PMatrix, alphaval: PMatrix, target_prec: Optional[int] = None) -> PMatrix:
    """eps Phi**(a) eps^-1 with eps = 1 + p alphaval."""
    eps = alphaval.mul_p(1) + 1
    return eps @ charpoly_lift_eval(a, target_prec) @ eps.inverse()


# ---------------------------------------------------------------------------
# obstruction witness


@dataclass(frozen=True)
class WitnessReport:
    valuation: Optional[int]  # None when the defect vanishes at working precision
    defect: PadicScalar
    det_defect_valuation: Optional[int]

    @property
    def witnessed(self) -> bool:
        return self.valuation is not None

    def to_json(self) -> dict:
        return {
            "valuation": self.valuation,
            "defect": self.defect.to_json(),
            "det_defect_valuation": self.det_defect_valuation,
            "witness": self.witnessed,
        }


def inner_obstruction_witness(ctx: PadicContext, point: Sequence) -> WitnessReport:
    """v_p of (ad+bc)^(2p) - 2^(2p) (abcd)^p - (ad-bc)^(2p).

    The same valuation is recomputed as v_p(det(B) - det(q)) for q = diag(1, -1)
    and B = (x^-1 q x)^(p), x = [[a, b], [c, d]].
    """
    a, b, c, d = (x if isinstance(x, PadicScalar) else ctx.scalar(int(x)) for x in point)
    p = ctx.p
    det = a * d - b * c
    if not det.is_unit():
        raise NotInvertible("ad - bc must be a unit")
    lhs = (a * d + b * c) ** (2 * p) - ctx.scalar(2 ** (2 * p)) * (a * b * c * d) ** p
    defect = lhs - det ** (2 * p)
    v = defect.valuation()
    x = PMatrix.from_scalars(ctx, [[a, b], [c, d]])
    q = PMatrix.from_ints(ctx, [[1, 0], [0, -1]])
    B = (x.inverse() @ q @ x).p_power()
    dv = (B.det() - q.det()).valuation()
    return WitnessReport(
        valuation=None if v >= defect.prec else v,
        defect=defect,
        det_defect_valuation=None if dv >= ctx.N else dv,
    )
