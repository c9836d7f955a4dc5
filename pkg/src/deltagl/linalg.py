"""Square matrices over W(F_{p^f})/p^N.

Entries are raw ring values (see :mod:`deltagl.padic`); a matrix carries a
single precision shared by all of its entries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    CharPolyDoesNotSplit,
    DimensionMismatch,
    InsufficientPrecision,
    InvalidInput,
    NotDivisible,
    NotInvertible,
    NotOneUnitMatrix,
    NotRegular,
    NuDivisibleByP,
)
from .padic import PadicContext, PadicScalar, Raw, binomial_series

Rows = tuple


def _matmul(ctx: PadicContext, A: Rows, B: Rows) -> Rows:
    cols = list(zip(*B))
    dot = ctx.dot
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def _berkowitz(ctx: PadicContext, A: Rows) -> list[Raw]:
    """Coefficients c_0 = 1, c_1, ..., c_n of det(s*1 - A) = sum c_k s^(n-k)."""
    n = len(A)
    one = ctx.one()
    if n == 0:
        return [one]
    dot, neg = ctx.dot, ctx.neg
    C = [one, neg(A[0][0])]
    for r in range(1, n):
        R = A[r][:r]
        lead = [row[:r] for row in A[:r]]
        t = [one, neg(A[r][r])]
        v = [A[i][r] for i in range(r)]
        for k in range(r):
            t.append(neg(dot(R, v)))
            if k < r - 1:
                v = [dot(row, v) for row in lead]
        new = []
        for i in range(r + 2):
            lo, hi = max(0, i - r - 1), min(i, r) + 1
            new.append(dot([t[i - j] for j in range(lo, hi)], C[lo:hi]))
        C = new
    return C


def _det_raw(ctx: PadicContext, A: Rows) -> Raw:
    n = len(A)
    if n == 0:
        return ctx.one()
    rows = [list(r) for r in A]
    det = ctx.one()
    for col in range(n):
        piv = next((i for i in range(col, n) if ctx.is_unit_raw(rows[i][col])), None)
        if piv is None:
            c = _berkowitz(ctx, A)[n]
            return c if n % 2 == 0 else ctx.neg(c)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = ctx.neg(det)
        pv = rows[col][col]
        det = ctx.mul(det, pv)
        inv = ctx.inv(pv)
        for i in range(col + 1, n):
            if rows[i][col] != ctx.zero():
                factor = ctx.mul(rows[i][col], inv)
                rows[i] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(rows[i], rows[col])]
    return det


class PMatrix:
    """An n x n matrix known modulo p^prec."""

    __slots__ = ("ctx", "rows", "prec")

    def __init__(self, ctx: PadicContext, rows: Sequence[Sequence[Raw]], prec: int | None = None):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        self.prec = ctx.N if prec is None else prec
        n = len(self.rows)
        if any(len(r) != n for r in self.rows):
            raise DimensionMismatch("matrix must be square")

    @classmethod
    def _make(cls, ctx: PadicContext, rows: tuple, prec: int) -> "PMatrix":
        """Wrap rows that are already square tuples of reduced raw values."""
        m = object.__new__(cls)
        m.ctx, m.rows, m.prec = ctx, rows, prec
        return m

    # -- constructors ----------------------------------------------------------

    @classmethod
    def identity(cls, ctx: PadicContext, n: int) -> "PMatrix":
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ctx: PadicContext, n: int) -> "PMatrix":
        zero = ctx.zero()
        return cls(ctx, [[zero] * n for _ in range(n)])

    @classmethod
    def from_ints(cls, ctx: PadicContext, rows: Sequence[Sequence[int]], prec: int | None = None) -> "PMatrix":
        return cls(ctx, [[ctx.from_int(x) for x in r] for r in rows], prec)

    @classmethod
    def from_scalars(cls, ctx: PadicContext, rows: Sequence[Sequence[PadicScalar]]) -> "PMatrix":
        prec = min((x.prec for r in rows for x in r), default=ctx.N)
        return cls(ctx, [[x.raw for x in r] for r in rows], prec)

    @classmethod
    def diag(cls, ctx: PadicContext, entries: Sequence[Raw | PadicScalar | int], prec: int | None = None) -> "PMatrix":
        raws = []
        precs = [ctx.N if prec is None else prec]
        for e in entries:
            if isinstance(e, PadicScalar):
                raws.append(e.raw)
                precs.append(e.prec)
            elif isinstance(e, int) and ctx.f > 1:
                raws.append(ctx.from_int(e))
            elif isinstance(e, int):
                raws.append(e % ctx.M)
            else:
                raws.append(e)
        n = len(raws)
        zero = ctx.zero()
        return cls(ctx, [[raws[i] if i == j else zero for j in range(n)] for i in range(n)], min(precs))

    @classmethod
    def permutation(cls, ctx: PadicContext, perm: Sequence[int]) -> "PMatrix":
        """Matrix sending e_j to e_{perm[j]}."""
        n = len(perm)
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if perm[j] == i else zero for j in range(n)] for i in range(n)])

    # -- basic access ----------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rows)

    def entry(self, i: int, j: int) -> PadicScalar:
        return PadicScalar(self.ctx, self.rows[i][j], self.prec)

    def __getitem__(self, ij: tuple[int, int]) -> PadicScalar:
        return self.entry(*ij)

    def _check(self, other: "PMatrix") -> None:
        if other.ctx is not self.ctx and other.ctx != self.ctx:
            from .errors import ContextMismatch

            raise ContextMismatch("matrices from different contexts")
        if other.n != self.n:
            raise DimensionMismatch(f"{self.n} x {self.n} vs {other.n} x {other.n}")

    def _lift_operand(self, other) -> "PMatrix":
        if isinstance(other, PMatrix):
            self._check(other)
            return other
        if isinstance(other, int):
            return PMatrix.identity(self.ctx, self.n).scale(other)
        return NotImplemented  # type: ignore[return-value]

    # -- arithmetic --------------------------------------------------------------

    def __add__(self, other):
        o = self._lift_operand(other)
        if o is NotImplemented:
            return o
        add = self.ctx.add
        rows = tuple(tuple(add(x, y) for x, y in zip(r, s)) for r, s in zip(self.rows, o.rows))
        return PMatrix._make(self.ctx, rows, min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift_operand(other)
        if o is NotImplemented:
            return o
        sub = self.ctx.sub
        rows = tuple(tuple(sub(x, y) for x, y in zip(r, s)) for r, s in zip(self.rows, o.rows))
        return PMatrix._make(self.ctx, rows, min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._lift_operand(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        neg = self.ctx.neg
        return PMatrix(self.ctx, [[neg(x) for x in r] for r in self.rows], self.prec)

    def __matmul__(self, other: "PMatrix") -> "PMatrix":
        if not isinstance(other, PMatrix):
            return NotImplemented
        self._check(other)
        return PMatrix._make(self.ctx, _matmul(self.ctx, self.rows, other.rows), min(self.prec, other.prec))

    def scale(self, c: int | PadicScalar) -> "PMatrix":
        ctx = self.ctx
        if isinstance(c, PadicScalar):
            rows = [[ctx.mul(x, c.raw) for x in r] for r in self.rows]
            return PMatrix(ctx, rows, min(self.prec, c.prec))
        return PMatrix(ctx, [[ctx.mul_int(x, c) for x in r] for r in self.rows], self.prec)

    def mul_p(self, k: int = 1) -> "PMatrix":
        """Multiply by p^k; exact, so k digits of precision are gained (capped at N)."""
        ctx = self.ctx
        pk = ctx.p**k
        return PMatrix(ctx, [[ctx.mul_int(x, pk) for x in r] for r in self.rows], min(ctx.N, self.prec + k))

    def __mul__(self, c):
        if isinstance(c, (int, PadicScalar)):
            return self.scale(c)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "PMatrix":
        if e < 0:
            return self.inverse() ** (-e)
        result = PMatrix.identity(self.ctx, self.n).with_prec(self.prec)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def transpose(self) -> "PMatrix":
        return PMatrix._make(self.ctx, tuple(zip(*self.rows)), self.prec)

    @property
    def T(self) -> "PMatrix":
        return self.transpose()

    def trace(self) -> PadicScalar:
        acc = self.ctx.zero()
        for i in range(self.n):
            acc = self.ctx.add(acc, self.rows[i][i])
        return PadicScalar(self.ctx, acc, self.prec)

    def det(self) -> PadicScalar:
        return PadicScalar(self.ctx, _det_raw(self.ctx, self.rows), self.prec)

    def is_invertible(self) -> bool:
        return self.prec >= 1 and self.ctx.is_unit_raw(_det_raw(self.ctx, self.rows))

    def inverse(self) -> "PMatrix":
        """Gauss-Jordan elimination pivoting on unit entries (row swaps only)."""
        ctx = self.ctx
        n = self.n
        if self.prec < 1:
            raise NotInvertible("no known digits")
        one, zero = ctx.one(), ctx.zero()
        A = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if ctx.is_unit_raw(A[i][col])), None)
            if piv is None:
                raise NotInvertible("determinant is not a unit")
            A[col], A[piv] = A[piv], A[col]
            inv = ctx.inv(A[col][col])
            A[col] = [ctx.mul(x, inv) for x in A[col]]
            for i in range(n):
                if i != col:
                    factor = A[i][col]
                    if factor != zero:
                        A[i] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(A[i], A[col])]
        return PMatrix(ctx, [r[n:] for r in A], self.prec)

    # -- entrywise maps ----------------------------------------------------------

    def map(self, fn) -> "PMatrix":
        return PMatrix(self.ctx, [[fn(x) for x in r] for r in self.rows], self.prec)

    def p_power(self) -> "PMatrix":
        """a^(p): entrywise p-th powers."""
        ctx = self.ctx
        p = ctx.p
        return self.map(lambda x: ctx.pow(x, p))

    def frobenius(self, r: int = 1) -> "PMatrix":
        """phi^r applied entrywise."""
        if self.ctx.f == 1 or r % self.ctx.f == 0:
            return self
        ctx = self.ctx
        return self.map(lambda x: ctx.frob(x, r))

    def div_p(self, k: int = 1) -> "PMatrix":
        """Exact division by p^k, consuming k digits."""
        if k == 0:
            return self
        if self.prec < k + 1:
            raise InsufficientPrecision(f"need {k + 1} digits to divide by p^{k}")
        if self.valuation() < k:
            raise NotDivisible(f"matrix valuation {self.valuation()} < {k}")
        ctx = self.ctx
        return PMatrix(ctx, [[ctx.div_p_raw(x, k) for x in r] for r in self.rows], self.prec - k)

    def delta(self) -> "PMatrix":
        """Entrywise p-derivation (phi(a) - a^(p)) / p."""
        return (self.frobenius(1) - self.p_power()).div_p(1)

    # -- comparisons -------------------------------------------------------------

    def valuation(self) -> int:
        v = self.ctx.valuation_raw
        return min((v(x, self.prec) for r in self.rows for x in r), default=self.prec)

    def is_zero(self) -> bool:
        return self.valuation() >= self.prec

    def diff_valuation(self, other: "PMatrix") -> int:
        """v_p(self - other), capped at the common precision."""
        return (self - other).valuation()

    def eq_at(self, other: "PMatrix", prec: int) -> bool:
        self._check(other)
        if prec > min(self.prec, other.prec):
            raise InsufficientPrecision(f"cannot compare at {prec} digits (have {min(self.prec, other.prec)})")
        eq = self.ctx.eq_raw
        return all(eq(x, y, prec) for r, s in zip(self.rows, other.rows) for x, y in zip(r, s))

    def __eq__(self, other) -> bool:
        if not isinstance(other, PMatrix):
            return NotImplemented
        if other.n != self.n:
            return False
        return self.eq_at(other, min(self.prec, other.prec))

    __hash__ = None  # type: ignore[assignment]

    def is_one_unit(self) -> bool:
        return (self - 1).valuation() >= 1

    def is_diagonal(self) -> bool:
        return all(self.ctx.valuation_raw(x, self.prec) >= self.prec
                   for i, r in enumerate(self.rows) for j, x in enumerate(r) if i != j)

    def is_monomial(self) -> bool:
        """Exactly one nonzero entry in each row and column, and it is a unit."""
        ctx = self.ctx
        support = [[not ctx.eq_raw(x, ctx.zero(), self.prec) for x in r] for r in self.rows]
        if any(sum(r) != 1 for r in support) or any(sum(c) != 1 for c in zip(*support)):
            return False
        return all(ctx.is_unit_raw(x) for r, s in zip(self.rows, support) for x, b in zip(r, s) if b)

    def with_prec(self, prec: int) -> "PMatrix":
        if prec > self.prec:
            raise InsufficientPrecision("cannot raise precision")
        return PMatrix(self.ctx, self.rows, prec)

    def residue(self) -> tuple:
        res = self.ctx.residue
        return tuple(tuple(res(x) for x in r) for r in self.rows)

    def signed(self) -> list[list]:
        """Entries as symmetric representatives (ints for f = 1, lists otherwise)."""
        out = []
        for i in range(self.n):
            row = []
            for j in range(self.n):
                c = self.entry(i, j).signed_coeffs()
                row.append(c[0] if len(c) == 1 else list(c))
            out.append(row)
        return out

    def __repr__(self) -> str:
        return f"PMatrix({self.signed()}, prec={self.prec})"

    # -- serialization -----------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "entries": [[self.entry(i, j).to_json() for j in range(self.n)] for i in range(self.n)],
            "prec": self.prec,
        }

    @classmethod
    def from_json(cls, ctx: PadicContext, data) -> "PMatrix":
        if isinstance(data, list):
            data = {"entries": data}
        if not isinstance(data, dict) or not isinstance(data.get("entries"), list):
            raise InvalidInput("matrix must be {n, entries, prec} or a list of rows")
        entries = data["entries"]
        n = int(data.get("n", len(entries)))
        if len(entries) != n or any(not isinstance(r, list) or len(r) != n for r in entries):
            raise DimensionMismatch(f"expected {n} x {n} entries")
        scal = [[PadicScalar.from_json(ctx, x) for x in r] for r in entries]
        prec = int(data.get("prec", min((x.prec for r in scal for x in r), default=ctx.N)))
        if not 0 <= prec <= ctx.N:
            raise InvalidInput("precision out of range")
        return cls(ctx, [[x.raw for x in r] for r in scal], prec)


# ---------------------------------------------------------------------------
# public functional API


def entrywise_p_power(a: PMatrix) -> PMatrix:
    return a.p_power()


def entrywise_frobenius(a: PMatrix, r: int = 1) -> PMatrix:
    return a.frobenius(r)


@dataclass(frozen=True)
class CharPolyData:
    """P_0 = 1, P_1, ..., P_n with det(s*1 - a) = sum_i (-1)^i P_i s^(n-i), plus the discriminant."""

    P: tuple[PadicScalar, ...]
    discriminant: PadicScalar

    @property
    def n(self) -> int:
        return len(self.P) - 1

    def monic_coeffs(self) -> list[PadicScalar]:
        """Coefficients of det(s*1 - a), highest degree first."""
        return [c if i % 2 == 0 else -c for i, c in enumerate(self.P)]


def _discriminant_raw(ctx: PadicContext, monic: list[Raw]) -> Raw:
    """(-1)^(n(n-1)/2) Res(P, P') via the Sylvester determinant; monic highest first."""
    n = len(monic) - 1
    if n <= 1:
        return ctx.one()
    deriv = [ctx.mul_int(c, n - i) for i, c in enumerate(monic[:-1])]
    size = 2 * n - 1
    zero = ctx.zero()
    rows = []
    for k in range(n - 1):
        rows.append([zero] * k + list(monic) + [zero] * (size - k - n - 1))
    for k in range(n):
        rows.append([zero] * k + deriv + [zero] * (size - k - n))
    res = _det_raw(ctx, tuple(tuple(r) for r in rows))
    return res if (n * (n - 1) // 2) % 2 == 0 else ctx.neg(res)


def char_poly(a: PMatrix) -> CharPolyData:
    ctx = a.ctx
    c = _berkowitz(ctx, a.rows)
    P = tuple(PadicScalar(ctx, x if i % 2 == 0 else ctx.neg(x), a.prec) for i, x in enumerate(c))
    disc = PadicScalar(ctx, _discriminant_raw(ctx, c), a.prec)
    return CharPolyData(P, disc)


def discriminant(a: PMatrix) -> PadicScalar:
    return char_poly(a).discriminant


def principal_root_matrix(U: PMatrix, nu: int) -> PMatrix:
    """The unique nu-th root of U = 1 mod p that is itself = 1 mod p (binomial series)."""
    ctx = U.ctx
    if nu == 0 or nu % ctx.p == 0:
        raise NuDivisibleByP(f"nu = {nu} must be nonzero and prime to p")
    V = U - 1
    if U.prec < 1 or V.valuation() < 1:
        raise NotOneUnitMatrix("principal roots need U = 1 mod p")
    coeffs = binomial_series(ctx.p, ctx.N, Fraction(1, nu), U.prec)
    acc = PMatrix.identity(ctx, U.n).with_prec(U.prec)
    power = acc
    for m in range(1, len(coeffs)):
        power = power @ V
        if power.valuation() >= U.prec:
            break
        acc = acc + power.scale(coeffs[m])
    return acc


def hensel_root_matrix(U: PMatrix, nu: int) -> PMatrix:
    """Digit-by-digit root of X^nu = U with X = 1 mod p; independent of the series."""
    ctx = U.ctx
    p = ctx.p
    if nu == 0 or nu % p == 0:
        raise NuDivisibleByP(f"nu = {nu} must be nonzero and prime to p")
    if U.prec < 1 or not U.is_one_unit():
        raise NotOneUnitMatrix("principal roots need U = 1 mod p")
    nu_inv = pow(nu % p, -1, p)
    X = PMatrix.identity(ctx, U.n).with_prec(U.prec)
    for k in range(1, U.prec):
        defect = (U - X**nu).div_p(k)
        h = PMatrix(ctx, defect.residue(), U.prec)
        X = X + h.scale(nu_inv * p**k)
    return X


# ---------------------------------------------------------------------------
# residue roots and Hensel eigendecomposition


def _eval_poly(ctx: PadicContext, monic: list[Raw], x: Raw) -> Raw:
    acc = ctx.zero()
    for c in monic:
        acc = ctx.add(ctx.mul(acc, x), c)
    return acc


def _eval_deriv(ctx: PadicContext, monic: list[Raw], x: Raw) -> Raw:
    n = len(monic) - 1
    acc = ctx.zero()
    for i, c in enumerate(monic[:-1]):
        acc = ctx.add(ctx.mul(acc, x), ctx.mul_int(c, n - i))
    return acc


def residue_sort_key(ctx: PadicContext, x: Raw) -> tuple[int, ...]:
    return tuple(ctx.coeffs(ctx.residue(x)))


def hensel_roots(ctx: PadicContext, monic: list[Raw], prec: int) -> list[Raw]:
    """All roots of a monic polynomial whose residues are simple roots, lifted to prec digits.

    Roots are sorted by their residues (lexicographic on coefficients).
    """
    roots = []
    for r0 in ctx.residue_elements():
        if ctx.valuation_raw(_eval_poly(ctx, monic, r0), 1) >= 1:
            d = _eval_deriv(ctx, monic, r0)
            if not ctx.is_unit_raw(d):
                continue
            r = r0
            for _ in range(2 * prec.bit_length() + 2):
                val = _eval_poly(ctx, monic, r)
                if ctx.valuation_raw(val, prec) >= prec:
                    break
                r = ctx.sub(r, ctx.mul(val, ctx.inv(_eval_deriv(ctx, monic, r))))
            roots.append(r)
    roots.sort(key=lambda x: residue_sort_key(ctx, x))
    return roots


def _left_kernel_vector(ctx: PadicContext, K: list[list[Raw]], prec: int) -> list[Raw]:
    """A vector v with v K = 0 when K has corank one mod p; one entry of v equals 1."""
    n = len(K)
    A = [list(col) for col in zip(*K)]  # solve K^t v^t = 0
    pivots: list[int] = []
    zero = ctx.zero()
    for step in range(n - 1):
        found = None
        for i in range(step, n):
            for j in range(n):
                if j not in pivots and ctx.is_unit_raw(A[i][j]):
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            raise NotRegular("eigenvalue is not simple")
        i, j = found
        A[step], A[i] = A[i], A[step]
        inv = ctx.inv(A[step][j])
        A[step] = [ctx.mul(x, inv) for x in A[step]]
        for r in range(n):
            if r != step and A[r][j] != zero:
                factor = A[r][j]
                A[r] = [ctx.sub(x, ctx.mul(factor, y)) for x, y in zip(A[r], A[step])]
        pivots.append(j)
    free = next(j for j in range(n) if j not in pivots)
    v = [zero] * n
    v[free] = ctx.one()
    for step, j in enumerate(pivots):
        v[j] = ctx.neg(A[step][free])
    return v


def hensel_eigen(m: PMatrix) -> tuple[PMatrix, PMatrix]:
    """Return (t, x) with t diagonal, x invertible and x^-1 t x = m.

    Requires the discriminant of the characteristic polynomial to be a unit and
    all residue eigenvalues to lie in F_{p^f}.  Rows of x are left eigenvectors.
    """
    ctx = m.ctx
    cp = char_poly(m)
    if not cp.discriminant.is_unit():
        raise NotRegular("discriminant of the characteristic polynomial is not a unit")
    monic = [c.raw for c in cp.monic_coeffs()]
    roots = hensel_roots(ctx, monic, m.prec)
    if len(roots) != m.n:
        raise CharPolyDoesNotSplit(
            f"characteristic polynomial does not split over F_{ctx.p}^{ctx.f}; try a larger f"
        )
    rows = []
    for lam in roots:
        K = [[ctx.sub(x, lam) if i == j else x for j, x in enumerate(r)] for i, r in enumerate(m.rows)]
        rows.append(_left_kernel_vector(ctx, K, m.prec))
    t = PMatrix.diag(ctx, roots, m.prec)
    x = PMatrix(ctx, rows, m.prec)
    return t, x


# ---------------------------------------------------------------------------
# random sampling helpers


def random_matrix(ctx: PadicContext, n: int, rng: random.Random) -> PMatrix:
    return PMatrix(ctx, [[ctx.random_raw(rng) for _ in range(n)] for _ in range(n)])


def random_invertible(ctx: PadicContext, n: int, rng: random.Random) -> PMatrix:
    while True:
        a = random_matrix(ctx, n, rng)
        if a.is_invertible():
            return a


def random_one_unit_matrix(ctx: PadicContext, n: int, rng: random.Random, order: int = 1) -> PMatrix:
    return PMatrix.identity(ctx, n) + random_matrix(ctx, n, rng).scale(ctx.p**order)


def random_permutation(n: int, rng: random.Random) -> list[int]:
    perm = list(range(n))
    rng.shuffle(perm)
    return perm


def random_monomial(ctx: PadicContext, n: int, rng: random.Random) -> PMatrix:
    d = PMatrix.diag(ctx, [ctx.random_raw(rng, unit=True) for _ in range(n)])
    return PMatrix.permutation(ctx, random_permutation(n, rng)) @ d


def random_regular_diagonal(ctx: PadicContext, n: int, rng: random.Random) -> PMatrix:
    """Diagonal matrix with unit entries that are distinct mod p."""
    if n > ctx.q - 1:
        raise InvalidInput("residue field too small for a regular diagonal of units")
    while True:
        entries = [ctx.random_raw(rng, unit=True) for _ in range(n)]
        if len({residue_sort_key(ctx, e) for e in entries}) == n:
            return PMatrix.diag(ctx, entries)
