"""Random points of the subgroups used by the verification suites.

Entries are drawn uniformly from the digits of W(F_{p^f})/p^N and resampled
until the required unit or regularity condition holds.
"""

from __future__ import annotations

import random

from .errors import DStarStarNotUnit, InvalidInput
from .jet import DeltaLieElement, polar_unit
from .linalg import PMatrix, discriminant, random_invertible, random_matrix, random_one_unit_matrix
from .padic import PadicContext, PadicScalar, principal_root_scalar, random_scalar


def split_rank(kind: str, n: int) -> tuple[int, int]:
    """(r, offset): the hyperbolic pairs are (offset + i, offset + r + i)."""
    if kind == "orthogonal_odd":
        return (n - 1) // 2, 1
    return n // 2, 0


def _unit(ctx: PadicContext, rng: random.Random) -> PadicScalar:
    return random_scalar(ctx, rng, unit=True)


def torus_element(ctx: PadicContext, kind: str, n: int, rng: random.Random) -> PMatrix:
    """diag(d_1, ..., d_r, d_1^-1, ..., d_r^-1), with a leading 1 in the odd case."""
    r, off = split_rank(kind, n)
    d = [_unit(ctx, rng) for _ in range(r)]
    diag = [ctx.scalar(1)] * off + d + [x.inv() for x in d]
    return PMatrix.diag(ctx, diag)


def weyl_element(ctx: PadicContext, kind: str, n: int, rng: random.Random) -> PMatrix:
    """A monomial matrix preserving the split form: a permutation of the pairs and some pair swaps."""
    r, off = split_rank(kind, n)
    perm = list(range(r))
    rng.shuffle(perm)
    rows = [[0] * n for _ in range(n)]
    if off:
        rows[0][0] = 1
    for i in range(r):
        j = perm[i]
        if rng.random() < 0.5:
            rows[off + i][off + j] = 1
            rows[off + r + i][off + r + j] = 1
        else:
            # swap the pair; the symplectic form needs a sign
            rows[off + i][off + r + j] = 1
            rows[off + r + i][off + j] = -1 if kind == "symplectic" else 1
    return PMatrix.from_ints(ctx, rows)


def normalizer_element(ctx: PadicContext, kind: str, n: int, rng: random.Random) -> PMatrix:
    """An element of the normalizer of the diagonal torus in SO(q), q split."""
    return torus_element(ctx, kind, n, rng) @ weyl_element(ctx, kind, n, rng)


def root_elements(ctx: PadicContext, kind: str, n: int, mu: PadicScalar) -> list[PMatrix]:
    """Root-subgroup elements whose entries are single monomials in mu.

    These are exactly the root elements whose entrywise p-th power is again a
    root element (the quadratic entries of the odd orthogonal short roots are
    excluded).
    """
    r, off = split_rank(kind, n)
    one = PMatrix.identity(ctx, n)
    out = []

    def elem(entries):
        m = [list(row) for row in one.rows]
        for (i, j), v in entries:
            m[i][j] = v.raw
        return PMatrix(ctx, m)

    # GL_r inside the Levi: A = 1 + mu E_ij, paired with A^-t = 1 - mu E_ji
    for i in range(r):
        for j in range(r):
            if i != j:
                out.append(elem([((off + i, off + j), mu), ((off + r + j, off + r + i), -mu)]))
    # unipotent radical [[1, S], [0, 1]] and its transpose
    sym = 1 if kind == "symplectic" else -1
    for i in range(r):
        for j in range(i, r):
            if i == j and sym == -1:
                continue
            if i == j:
                out.append(elem([((off + i, off + r + i), mu)]))
                out.append(elem([((off + r + i, off + i), -mu)]))
            else:
                out.append(elem([((off + i, off + r + j), mu), ((off + j, off + r + i), mu * sym)]))
                out.append(elem([((off + r + j, off + i), mu), ((off + r + i, off + j), mu * sym)]))
    return out


def fixed_locus_sample(q: PMatrix, rng: random.Random) -> PMatrix:
    """A point u of SO(q) with u^(p) in SO(phi(q)), for split q: a torus or Weyl element times a root element."""
    from .jet import split_kind

    ctx = q.ctx
    kind = split_kind(q)
    if kind is None:
        raise InvalidInput("fixed-locus sampling needs a split form")
    n = q.n
    base = torus_element(ctx, kind, n, rng) if rng.random() < 0.5 else weyl_element(ctx, kind, n, rng)
    roots = root_elements(ctx, kind, n, random_scalar(ctx, rng))
    if not roots:
        return base
    return base @ rng.choice(roots)


def orthogonal_one_unit(q: PMatrix, rng: random.Random, order: int = 1) -> PMatrix:
    """U = 1 mod p^order with U^t q U = q, as the polar factor of a random one-unit."""
    return polar_unit(q, random_one_unit_matrix(q.ctx, q.n, rng, order))


def orthogonal_sample(q: PMatrix, rng: random.Random) -> PMatrix:
    """A point of SO(q) for split q, not confined to the fixed locus."""
    u = fixed_locus_sample(q, rng) @ orthogonal_one_unit(q, rng)
    return u @ fixed_locus_sample(q, rng)


def orthogonal_lie_sample(q: PMatrix, rng: random.Random, order: int = 1) -> DeltaLieElement:
    """A random element of L^order_delta(SO(q)), i.e. 1 + p^r a preserving phi^r(q)."""
    U = orthogonal_one_unit(q.frobenius(order), rng, order)
    return DeltaLieElement.from_unit(U, order)


def sl_lie_sample(ctx: PadicContext, n: int, rng: random.Random, order: int = 1) -> DeltaLieElement:
    """A random element of L^order_delta(SL_n): eps det(eps)^(-1/n) for a random one-unit eps."""
    if n % ctx.p == 0:
        raise InvalidInput("need p not dividing n")
    eps = random_one_unit_matrix(ctx, n, rng, order)
    U = eps.scale(principal_root_scalar(eps.det(), -n))
    return DeltaLieElement.from_unit(U, order)


def gl_lie_sample(ctx: PadicContext, n: int, rng: random.Random, order: int = 1) -> DeltaLieElement:
    return DeltaLieElement(random_matrix(ctx, n, rng).with_prec(ctx.N - order), order)


def regular_sample(ctx: PadicContext, n: int, rng: random.Random) -> PMatrix:
    """An invertible matrix whose characteristic polynomial splits with distinct residue roots.

    Built as x^-1 t x with t a regular diagonal, which is the domain of the
    conjugation-horizontal lift.
    """
    from .linalg import random_regular_diagonal

    t = random_regular_diagonal(ctx, n, rng)
    x = random_invertible(ctx, n, rng)
    return x.inverse() @ t @ x


def charpoly_domain_sample(ctx: PadicContext, n: int, rng: random.Random, tries: int = 500) -> PMatrix:
    """A random invertible point on which D** is a unit."""
    from .inner import dstarstar

    for _ in range(tries):
        a = random_invertible(ctx, n, rng)
        if dstarstar(a).is_unit():
            return a
    raise DStarStarNotUnit("no point with D** a unit found")


def is_regular(a: PMatrix) -> bool:
    return discriminant(a).is_unit()

