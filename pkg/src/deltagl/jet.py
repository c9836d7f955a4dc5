"""First jets of GL_n points, the delta-Lie algebra and its bracket, and Cartan splitting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import DimensionMismatch, InsufficientPrecision, NotSplit, OrderMismatch, SymmetryMismatch
from .linalg import PMatrix, principal_root_matrix
from .padic import PadicContext


# ---------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class JetPoint:
    """A pair (a0, a1) with a0 invertible: a point of the first jet group of GL_n."""

    a0: PMatrix
    a1: PMatrix

    @property
    def n(self) -> int:
        return self.a0.n


def jet_identity(ctx: PadicContext, n: int) -> JetPoint:
    return JetPoint(PMatrix.identity(ctx, n), PMatrix.zeros(ctx, n))


def _correction(x: PMatrix, y: PMatrix) -> PMatrix:
    """p^-1 (x^(p) y^(p) - (xy)^(p))."""
    return (x.p_power() @ y.p_power() - (x @ y).p_power()).div_p(1)


def jet_mul(A: JetPoint, B: JetPoint) -> JetPoint:
    a0, a1, b0, b1 = A.a0, A.a1, B.a0, B.a1
    second = a0.p_power() @ b1 + a1 @ b0.p_power() + (a1 @ b1).mul_p(1) + _correction(a0, b0)
    return JetPoint(a0 @ b0, second)


def jet_inv(A: JetPoint) -> JetPoint:
    a0, a1 = A.a0, A.a1
    a0_inv = a0.inverse()
    inner = a1 @ a0_inv.p_power() + (a0.p_power() @ a0_inv.p_power() - 1).div_p(1)
    return JetPoint(a0_inv, -((a0.p_power() + a1.mul_p(1)).inverse() @ inner))


def ghost(A: JetPoint) -> tuple[PMatrix, PMatrix]:
    """Ghost coordinates (a0, a0^(p) + p a1)."""
    return A.a0, A.a0.p_power() + A.a1.mul_p(1)


def nabla1(a: PMatrix) -> JetPoint:
    """The canonical jet (a, delta a)."""
    return JetPoint(a, a.delta())


def sigma(lift, a: PMatrix) -> JetPoint:
    """The jet (a, Delta(a)) attached to a lift of Frobenius."""
    from .lifts import christoffel

    return JetPoint(a, christoffel(lift, a))


# ---------------------------------------------------------------------------
# delta-Lie algebra


@dataclass(frozen=True)
class DeltaLieElement:
    """A matrix together with its order r; group law a + b + p^r ab."""

    mat: PMatrix
    order: int = 1

    @property
    def ctx(self) -> PadicContext:
        return self.mat.ctx

    @property
    def n(self) -> int:
        return self.mat.n

    def unit(self) -> PMatrix:
        """1 + p^r a."""
        return self.mat.mul_p(self.order) + 1

    @classmethod
    def zero(cls, ctx: PadicContext, n: int, order: int = 1) -> "DeltaLieElement":
        return cls(PMatrix.zeros(ctx, n), order)

    @classmethod
    def from_unit(cls, U: PMatrix, order: int = 1) -> "DeltaLieElement":
        """The element a with 1 + p^r a = U (U must be 1 mod p^r)."""
        return cls((U - 1).div_p(order), order)


def _as_element(a: Union[DeltaLieElement, PMatrix], order: int = 1) -> DeltaLieElement:
    return a if isinstance(a, DeltaLieElement) else DeltaLieElement(a, order)


def plus_delta_r(a: DeltaLieElement, b: DeltaLieElement) -> DeltaLieElement:
    if a.order != b.order:
        raise OrderMismatch(f"orders {a.order} and {b.order} differ")
    return DeltaLieElement(a.mat + b.mat + (a.mat @ b.mat).mul_p(a.order), a.order)


def minus_delta_r(a: DeltaLieElement) -> DeltaLieElement:
    """The group inverse -a (1 + p^r a)^-1."""
    return DeltaLieElement(-(a.mat @ a.unit().inverse()), a.order)


def sub_delta_r(a: DeltaLieElement, b: DeltaLieElement) -> DeltaLieElement:
    return plus_delta_r(a, minus_delta_r(b))


def star_delta(a: PMatrix, b: DeltaLieElement) -> DeltaLieElement:
    """Adjoint action phi(a) b phi(a)^-1."""
    fa = a.frobenius(1)
    return DeltaLieElement(fa @ b.mat @ fa.inverse(), b.order)


def bracket_delta(alpha: DeltaLieElement, beta: DeltaLieElement) -> DeltaLieElement:
    r, s = alpha.order, beta.order
    if min(alpha.mat.prec, beta.mat.prec) < r + s + 1:
        raise InsufficientPrecision(f"bracket of orders {r}, {s} needs {r + s + 1} digits")
    A = alpha.mat.frobenius(s).mul_p(r) + 1
    B = beta.mat.frobenius(r).mul_p(s) + 1
    comm = A @ B @ A.inverse() @ B.inverse()
    return DeltaLieElement((comm - 1).div_p(r + s), r + s)


def ex_r(alpha: DeltaLieElement) -> PMatrix:
    """1 + p^r phi^-r(alpha)."""
    r = alpha.order
    return alpha.mat.frobenius(-r).mul_p(r) + 1


def group_commutator(a: PMatrix, b: PMatrix) -> PMatrix:
    return a @ b @ a.inverse() @ b.inverse()


# ---------------------------------------------------------------------------
# subgroups


SPLIT_KINDS = ("symplectic", "orthogonal_even", "orthogonal_odd")


def split_form(ctx: PadicContext, kind: str, n: int) -> PMatrix:
    """The split matrices [[0,1],[-1,0]], [[0,1],[1,0]] (blocks of size r) and [[1,0,0],[0,0,1],[0,1,0]]."""
    if kind == "orthogonal_odd":
        if n % 2 != 1:
            raise DimensionMismatch("odd orthogonal split form needs odd n")
        r, off = (n - 1) // 2, 1
    else:
        if n % 2 != 0 or kind not in SPLIT_KINDS:
            raise DimensionMismatch(f"{kind} split form needs even n")
        r, off = n // 2, 0
    rows = [[0] * n for _ in range(n)]
    if off:
        rows[0][0] = 1
    for i in range(r):
        rows[off + i][off + r + i] = 1
        rows[off + r + i][off + i] = -1 if kind == "symplectic" else 1
    return PMatrix.from_ints(ctx, rows)


def split_kind(q: PMatrix) -> str | None:
    """Which split shape q has, if any."""
    for kind in SPLIT_KINDS:
        try:
            s = split_form(q.ctx, kind, q.n)
        except DimensionMismatch:
            continue
        if s.eq_at(q, q.prec):
            return kind
    return None


@dataclass(frozen=True)
class FullGL:
    n: int


@dataclass(frozen=True)
class SpecialLinearGroup:
    n: int


@dataclass(frozen=True)
class Orthogonal:
    """SO(q) for q^t = sign * q."""

    q: PMatrix
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise SymmetryMismatch("sign must be +1 or -1")
        if not self.q.T.eq_at(self.q.scale(self.sign), self.q.prec):
            raise SymmetryMismatch("q^t != sign * q")
        if not self.q.is_invertible():
            from .errors import NotInvertible

            raise NotInvertible("q must be invertible")

    @property
    def n(self) -> int:
        return self.q.n

    @property
    def split(self) -> str | None:
        return split_kind(self.q)


@dataclass(frozen=True)
class Torus:
    n: int


@dataclass(frozen=True)
class Normalizer:
    n: int


SubgroupSpec = Union[FullGL, SpecialLinearGroup, Orthogonal, Torus, Normalizer]


def membership_defect(S: SubgroupSpec, a: DeltaLieElement) -> PMatrix:
    """p^-r f^(phi^r)(1 + p^r a) for the defining equations f of S (as a matrix)."""
    ctx = a.ctx
    r = a.order
    n = a.n
    U = a.unit()
    if isinstance(S, FullGL):
        return PMatrix.zeros(ctx, n).with_prec(a.mat.prec)
    if isinstance(S, SpecialLinearGroup):
        return PMatrix.diag(ctx, [U.det() - 1]).div_p(r)
    if isinstance(S, Orthogonal):
        Q = S.q.frobenius(r)
        return (U.T @ Q @ U - Q).div_p(r)
    if isinstance(S, (Torus, Normalizer)):
        zero = ctx.zero()
        rows = [[zero if i == j else x for j, x in enumerate(row)] for i, row in enumerate(a.mat.rows)]
        return PMatrix(ctx, rows, a.mat.prec)
    raise TypeError(f"unknown subgroup {S!r}")


def delta_lie_membership(S: SubgroupSpec, a: Union[DeltaLieElement, PMatrix]) -> bool:
    """Evaluate the defining congruence of L^r_delta(S) at the available precision (N - r for exact input)."""
    return membership_defect(S, _as_element(a)).is_zero()


def tau_involution(q: PMatrix, b: DeltaLieElement) -> DeltaLieElement:
    """b -> -_delta(q^-1 b^t q)."""
    return minus_delta_r(DeltaLieElement(q.inverse() @ b.mat.T @ q, b.order))


def cartan_decompose(S: Orthogonal, a: Union[DeltaLieElement, PMatrix]) -> tuple[DeltaLieElement, DeltaLieElement]:
    """Unique splitting a = aplus +_delta aminus with aplus fixed and aminus inverted by tau."""
    if not isinstance(S, Orthogonal) or S.split is None:
        raise NotSplit("Cartan decomposition needs a split form q")
    a = _as_element(a)
    q = S.q
    A = a.unit()
    A_minus_tau = q.inverse() @ A.T @ q
    V = principal_root_matrix(A_minus_tau @ A, 2)
    U = A @ V.inverse()
    return DeltaLieElement.from_unit(U, a.order), DeltaLieElement.from_unit(V, a.order)


def polar_unit(Q: PMatrix, A: PMatrix) -> PMatrix:
    """For A = 1 mod p, the factor U of A = U V with U^t Q U = Q and V^t Q = Q V.

    Works for any invertible Q with Q^t = +-Q; used to sample points of
    L_delta(SO(q)) for non-split q as well.
    """
    V = principal_root_matrix(Q.inverse() @ A.T @ Q @ A, 2)
    return A @ V.inverse()
