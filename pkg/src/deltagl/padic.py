"""Truncated arithmetic in W(F_{p^f})/p^N.

Elements of the ring are stored as "raw" values: a plain ``int`` in
``[0, p^N)`` when ``f == 1`` and a length-``f`` tuple of such ints otherwise
(coefficients on the power basis of the generator, lowest degree first).
Raw values are always reduced modulo the working modulus ``p^N``; the known
absolute precision travels separately on :class:`PadicScalar` and
``PMatrix`` so digits beyond it are simply ignored by comparisons.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import (
    ContextMismatch,
    InsufficientPrecision,
    InvalidInput,
    NotAUnit,
    NotDivisible,
    NotOneUnit,
    NuDivisibleByP,
)

Raw = Union[int, tuple]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % k == 0:
            return False
        k += 1
    return True


def int_valuation(x: int, p: int, cap: int) -> int:
    """v_p(x) capped at ``cap`` (x == 0 gives ``cap``)."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# residue polynomials (lists of ints mod p, lowest degree first)


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem_mod_p(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bi) % p
        _trim(a)
    return a


def is_irreducible_mod_p(g: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg(g)/2."""
    g = [x % p for x in g]
    deg = len(_trim(list(g))) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_rem_mod_p(g, list(low) + [1], p):
                return False
    return True


def find_irreducible_mod_p(p: int, f: int) -> list[int]:
    """Smallest monic irreducible polynomial of degree f in lexicographic order."""
    for low in itertools.product(range(p), repeat=f):
        cand = list(reversed(low)) + [1]
        if is_irreducible_mod_p(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


# ---------------------------------------------------------------------------
# binomial coefficients (1/nu choose m) reduced mod p^N


@lru_cache(maxsize=None)
def binomial_series(p: int, N: int, exponent: Fraction, terms: int) -> tuple[int, ...]:
    """Coefficients C(exponent, m) mod p^N for m < terms; exponent must be p-integral."""
    M = p**N
    out = []
    c = Fraction(1)
    for m in range(terms):
        if m:
            c = c * (exponent - (m - 1)) / m
        if c.denominator % p == 0:
            raise NuDivisibleByP(f"binomial coefficient of {exponent} is not p-integral")
        out.append(c.numerator * pow(c.denominator, -1, M) % M)
    return tuple(out)


# ---------------------------------------------------------------------------


class PadicContext:
    """The ring W(F_{p^f})/p^N together with its Frobenius automorphism.

    When no modulus is given, the generator is chosen to be a root of unity
    (Teichmuller normalization), so that Frobenius sends it exactly to its
    p-th power.  A user-supplied modulus only needs to be monic and
    irreducible mod p; the image of the generator is then found by Newton
    iteration on the modulus starting from generator^p.
    """

    def __init__(self, p: int, f: int = 1, N: int = 10, modulus: Sequence[int] | None = None):
        if not (isinstance(p, int) and p > 2 and is_prime(p)):
            raise InvalidInput(f"p must be an odd prime, got {p!r}")
        if f < 1:
            raise InvalidInput("f must be >= 1")
        if N < 2:
            raise InvalidInput("N must be >= 2")
        self.p = p
        self.f = f
        self.N = N
        self.q = p**f
        self.M = p**N
        self._pk = [p**k for k in range(N + 1)]
        if f == 1:
            if modulus is not None and [int(c) for c in modulus] != [0, 1]:
                raise InvalidInput("for f = 1 the modulus must be X")
            self.modulus = (0, 1)
            self.frobenius_image: Raw = 0
            self._frob_cols: list = []
        else:
            if modulus is None:
                modulus = self._teichmuller_modulus()
            modulus = tuple(int(c) % self.M for c in modulus)
            if len(modulus) != f + 1 or modulus[-1] != 1:
                raise InvalidInput("modulus must be monic of degree f")
            if not is_irreducible_mod_p(modulus, p):
                raise InvalidInput("modulus is not irreducible mod p")
            self.modulus = modulus
            self._red = [(-c) % self.M for c in modulus[:-1]]
            self.frobenius_image = self._newton_root(self.pow(self.generator(), p))
            self._build_frobenius_tables()

    # -- construction helpers ------------------------------------------------

    def _teichmuller_modulus(self) -> tuple[int, ...]:
        p, f = self.p, self.f
        tmp = PadicContext.__new__(PadicContext)
        tmp.__dict__.update(self.__dict__)
        g0 = tuple(find_irreducible_mod_p(p, f))
        tmp.modulus = g0
        tmp._red = [(-c) % self.M for c in g0[:-1]]
        tmp.frobenius_image = tmp._newton_root(tmp.pow(tmp.generator(), p))
        tmp._build_frobenius_tables()
        omega = tmp.teichmuller_raw(tmp.generator())
        # expand prod_i (X - phi^i(omega)); coefficients must be constants
        poly: list[Raw] = [tmp.one()]
        for i in range(f):
            root = tmp.neg(tmp.frob(omega, i))
            new = [tmp.zero() for _ in range(len(poly) + 1)]
            for d, c in enumerate(poly):
                new[d] = tmp.add(new[d], tmp.mul(c, root))
                new[d + 1] = tmp.add(new[d + 1], c)
            poly = new
        coeffs = []
        for c in poly:
            if any(c[1:]):
                raise AssertionError("Teichmuller minimal polynomial is not rational")  # pragma: no cover
            coeffs.append(c[0])
        return tuple(coeffs)

    def _newton_root(self, r: Raw) -> Raw:
        g = self.modulus
        dg = [i * g[i] for i in range(1, len(g))]
        for _ in range(2 * self.N.bit_length() + 2):
            val = self._eval_int_poly(g, r)
            if self.valuation_raw(val, self.N) >= self.N:
                return r
            r = self.sub(r, self.mul(val, self.inv(self._eval_int_poly(dg, r))))
        raise AssertionError("Newton iteration for Frobenius image did not converge")  # pragma: no cover

    def _eval_int_poly(self, coeffs: Sequence[int], x: Raw) -> Raw:
        acc = self.zero()
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc

    def _build_frobenius_tables(self) -> None:
        f = self.f
        powers = [self.one()]
        for _ in range(1, f):
            powers.append(self.mul(powers[-1], self.frobenius_image))
        # cols[r][j] = phi^r(X^j)
        cols = [[self.from_int(0) for _ in range(f)] for _ in range(f)]
        cols[0] = [tuple(1 if i == j else 0 for i in range(f)) for j in range(f)]
        if f > 1:
            cols[1] = powers
        for r in range(2, f):
            cols[r] = [self._apply_frob_cols(cols[1], c) for c in cols[r - 1]]
        self._frob_cols = cols

    def _apply_frob_cols(self, cols: list, a: tuple) -> tuple:
        M = self.M
        out = [0] * self.f
        for j, aj in enumerate(a):
            if aj:
                col = cols[j]
                for i in range(self.f):
                    out[i] += aj * col[i]
        return tuple(x % M for x in out)

    # -- raw ring operations ---------------------------------------------------

    def zero(self) -> Raw:
        return 0 if self.f == 1 else (0,) * self.f

    def one(self) -> Raw:
        return 1 if self.f == 1 else (1,) + (0,) * (self.f - 1)

    def generator(self) -> Raw:
        if self.f == 1:
            raise InvalidInput("f = 1 has no generator")
        return (0, 1) + (0,) * (self.f - 2)

    def from_int(self, x: int) -> Raw:
        x %= self.M
        return x if self.f == 1 else (x,) + (0,) * (self.f - 1)

    def from_coeffs(self, coeffs: Sequence[int]) -> Raw:
        if len(coeffs) != self.f:
            raise InvalidInput(f"expected {self.f} coefficients, got {len(coeffs)}")
        if self.f == 1:
            return int(coeffs[0]) % self.M
        return tuple(int(c) % self.M for c in coeffs)

    def coeffs(self, a: Raw) -> tuple[int, ...]:
        return (a,) if self.f == 1 else a

    def add(self, a: Raw, b: Raw) -> Raw:
        if self.f == 1:
            return (a + b) % self.M
        M = self.M
        return tuple((x + y) % M for x, y in zip(a, b))

    def sub(self, a: Raw, b: Raw) -> Raw:
        if self.f == 1:
            return (a - b) % self.M
        M = self.M
        return tuple((x - y) % M for x, y in zip(a, b))

    def neg(self, a: Raw) -> Raw:
        if self.f == 1:
            return (-a) % self.M
        M = self.M
        return tuple((-x) % M for x in a)

    def mul(self, a: Raw, b: Raw) -> Raw:
        if self.f == 1:
            return a * b % self.M
        f = self.f
        if f == 2:
            a0, a1 = a
            b0, b1 = b
            top = a1 * b1
            r0, r1 = self._red
            M = self.M
            return ((a0 * b0 + top * r0) % M, (a0 * b1 + a1 * b0 + top * r1) % M)
        prod = [0] * (2 * f - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        red = self._red
        for d in range(2 * f - 2, f - 1, -1):
            c = prod[d]
            if c:
                base = d - f
                for i in range(f):
                    prod[base + i] += c * red[i]
        M = self.M
        return tuple(x % M for x in prod[:f])

    def dot(self, xs: Sequence[Raw], ys: Sequence[Raw]) -> Raw:
        """sum x_k y_k, reduced once at the end."""
        M = self.M
        f = self.f
        if f == 1:
            return sum(x * y for x, y in zip(xs, ys)) % M
        if f == 2:
            s0 = s1 = s2 = 0
            for (a0, a1), (b0, b1) in zip(xs, ys):
                s0 += a0 * b0
                s1 += a0 * b1 + a1 * b0
                s2 += a1 * b1
            r0, r1 = self._red
            return ((s0 + s2 * r0) % M, (s1 + s2 * r1) % M)
        prod = [0] * (2 * f - 1)
        for a, b in zip(xs, ys):
            for i, ai in enumerate(a):
                if ai:
                    for j, bj in enumerate(b):
                        prod[i + j] += ai * bj
        red = self._red
        for d in range(2 * f - 2, f - 1, -1):
            c = prod[d]
            if c:
                base = d - f
                for i in range(f):
                    prod[base + i] += c * red[i]
        return tuple(x % M for x in prod[:f])

    def mul_int(self, a: Raw, k: int) -> Raw:
        if self.f == 1:
            return a * k % self.M
        M = self.M
        return tuple(x * k % M for x in a)

    def pow(self, a: Raw, e: int) -> Raw:
        if e < 0:
            return self.pow(self.inv(a), -e)
        if self.f == 1:
            return pow(a, e, self.M)
        result = self.one()
        base = a
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def is_unit_raw(self, a: Raw) -> bool:
        p = self.p
        if self.f == 1:
            return a % p != 0
        return any(x % p for x in a)

    def inv(self, a: Raw) -> Raw:
        if not self.is_unit_raw(a):
            raise NotAUnit("element is not a unit")
        if self.f == 1:
            return pow(a, -1, self.M)
        x = self.pow(a, self.q - 2)
        two = self.from_int(2)
        for _ in range(self.N.bit_length() + 1):
            x = self.mul(x, self.sub(two, self.mul(a, x)))
        return x

    def frob(self, a: Raw, r: int = 1) -> Raw:
        if self.f == 1:
            return a
        r %= self.f
        if r == 0:
            return a
        return self._apply_frob_cols(self._frob_cols[r], a)

    def valuation_raw(self, a: Raw, prec: int) -> int:
        pk = self._pk[prec]
        p = self.p
        if self.f == 1:
            return int_valuation(a % pk, p, prec)
        return min(int_valuation(x % pk, p, prec) for x in a)

    def div_p_raw(self, a: Raw, k: int) -> Raw:
        """Divide an element already known to be divisible by p^k."""
        pk = self._pk[k]
        if self.f == 1:
            return a // pk
        return tuple(x // pk for x in a)

    def reduce_raw(self, a: Raw, prec: int) -> Raw:
        pk = self._pk[prec]
        if self.f == 1:
            return a % pk
        return tuple(x % pk for x in a)

    def eq_raw(self, a: Raw, b: Raw, prec: int) -> bool:
        pk = self._pk[prec]
        if self.f == 1:
            return (a - b) % pk == 0
        return all((x - y) % pk == 0 for x, y in zip(a, b))

    def residue(self, a: Raw) -> Raw:
        return self.reduce_raw(a, 1)

    def residue_elements(self) -> list[Raw]:
        """All elements of the residue field F_{p^f}, as raw representatives."""
        if self.f == 1:
            return list(range(self.p))
        return [tuple(c) for c in itertools.product(range(self.p), repeat=self.f)]

    def teichmuller_raw(self, a: Raw) -> Raw:
        if not self.is_unit_raw(a):
            return self.zero()
        return self.pow(a, self.q ** (self.N - 1))

    def random_raw(self, rng: random.Random, unit: bool = False) -> Raw:
        while True:
            if self.f == 1:
                a = rng.randrange(self.M)
            else:
                a = tuple(rng.randrange(self.M) for _ in range(self.f))
            if not unit or self.is_unit_raw(a):
                return a

    # -- misc ----------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PadicContext):
            return NotImplemented
        return (self.p, self.f, self.N, self.modulus) == (other.p, other.f, other.N, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.f, self.N, self.modulus))

    def __repr__(self) -> str:
        return f"PadicContext(p={self.p}, f={self.f}, N={self.N}, modulus={list(self.modulus)})"

    def scalar(self, x: int | Raw, prec: int | None = None) -> "PadicScalar":
        raw = self.from_int(x) if isinstance(x, int) else x
        return PadicScalar(self, raw, self.N if prec is None else prec)

    def to_json(self) -> dict:
        return {"p": self.p, "f": self.f, "N": self.N, "modulus": [str(c) for c in self.modulus]}

    @classmethod
    def from_json(cls, data: dict) -> "PadicContext":
        modulus = data.get("modulus")
        f = int(data.get("f", 1))
        if modulus is not None:
            modulus = [int(c) for c in modulus]
            if f == 1:
                modulus = None
        return cls(int(data["p"]), f, int(data.get("N", 10)), modulus)


class PadicScalar:
    """An element of W(F_{p^f})/p^N known modulo p^prec."""

    __slots__ = ("ctx", "raw", "prec")

    def __init__(self, ctx: PadicContext, raw: Raw, prec: int | None = None):
        self.ctx = ctx
        self.raw = raw
        self.prec = ctx.N if prec is None else prec

    # -- coercion --------------------------------------------------------------

    def _coerce(self, other: object) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch("scalars from different contexts")
            return other
        if isinstance(other, int):
            return PadicScalar(self.ctx, self.ctx.from_int(other), self.ctx.N)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicScalar(self.ctx, self.ctx.add(self.raw, o.raw), min(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicScalar(self.ctx, self.ctx.sub(self.raw, o.raw), min(self.prec, o.prec))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self):
        return PadicScalar(self.ctx, self.ctx.neg(self.raw), self.prec)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PadicScalar(self.ctx, self.ctx.mul(self.raw, o.raw), min(self.prec, o.prec))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return PadicScalar(self.ctx, self.ctx.pow(self.raw, e), self.prec)

    def mul_p(self, k: int = 1) -> "PadicScalar":
        """Multiply by p^k, gaining k digits of precision (capped at N)."""
        ctx = self.ctx
        return PadicScalar(ctx, ctx.mul_int(self.raw, ctx.p**k), min(ctx.N, self.prec + k))

    def inv(self) -> "PadicScalar":
        if not self.is_unit():
            raise NotAUnit("valuation > 0 passed to inv")
        return PadicScalar(self.ctx, self.ctx.inv(self.raw), self.prec)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    # -- queries ---------------------------------------------------------------

    def valuation(self) -> int:
        return self.ctx.valuation_raw(self.raw, self.prec)

    def is_unit(self) -> bool:
        return self.prec >= 1 and self.ctx.is_unit_raw(self.raw)

    def is_zero(self) -> bool:
        return self.valuation() >= self.prec

    def eq_at(self, other, prec: int) -> bool:
        o = self._coerce(other)
        if prec > min(self.prec, o.prec):
            raise InsufficientPrecision(f"cannot compare at {prec} digits")
        return self.ctx.eq_raw(self.raw, o.raw, prec)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.ctx.eq_raw(self.raw, o.raw, min(self.prec, o.prec))

    __hash__ = None  # type: ignore[assignment]

    def with_prec(self, prec: int) -> "PadicScalar":
        if prec > self.prec:
            raise InsufficientPrecision("cannot raise precision")
        return PadicScalar(self.ctx, self.raw, prec)

    def coeffs(self) -> tuple[int, ...]:
        """Canonical representatives of the coefficients in [0, p^prec)."""
        return self.ctx.coeffs(self.ctx.reduce_raw(self.raw, self.prec))

    def signed_coeffs(self) -> tuple[int, ...]:
        pk = self.ctx.p**self.prec
        return tuple(c - pk if c > pk // 2 else c for c in self.coeffs())

    def residue(self) -> Raw:
        return self.ctx.residue(self.raw)

    def __repr__(self) -> str:
        c = self.signed_coeffs()
        body = str(c[0]) if len(c) == 1 else str(list(c))
        return f"{body} + O({self.ctx.p}^{self.prec})"

    # -- maps ----------------------------------------------------------------

    def frobenius(self, r: int = 1) -> "PadicScalar":
        return frobenius(self, r)

    def delta(self) -> "PadicScalar":
        return delta_scalar(self)

    def to_json(self) -> dict:
        return {"coeffs": [str(c) for c in self.coeffs()], "prec": self.prec}

    @classmethod
    def from_json(cls, ctx: PadicContext, data) -> "PadicScalar":
        if isinstance(data, (int, str)):
            return PadicScalar(ctx, ctx.from_int(int(data)), ctx.N)
        if not isinstance(data, dict) or "coeffs" not in data:
            raise InvalidInput("scalar must be an int, a digit string or {coeffs, prec}")
        prec = int(data.get("prec", ctx.N))
        if not 0 <= prec <= ctx.N:
            raise InvalidInput("precision out of range")
        return PadicScalar(ctx, ctx.from_coeffs([int(c) for c in data["coeffs"]]), prec)


# ---------------------------------------------------------------------------
# module-level operations


def frobenius(a: PadicScalar, r: int = 1) -> PadicScalar:
    """Apply phi^r; negative r applies the inverse automorphism."""
    return PadicScalar(a.ctx, a.ctx.frob(a.raw, r), a.prec)


def divide_by_p_exact(a: PadicScalar, k: int) -> PadicScalar:
    if k == 0:
        return a
    if a.prec < k + 1:
        raise InsufficientPrecision(f"need {k + 1} digits to divide by p^{k}")
    if a.valuation() < k:
        raise NotDivisible(f"valuation {a.valuation()} < {k}")
    return PadicScalar(a.ctx, a.ctx.div_p_raw(a.raw, k), a.prec - k)


def delta_scalar(a: PadicScalar) -> PadicScalar:
    if a.prec < 2:
        raise InsufficientPrecision("delta needs at least 2 digits")
    ctx = a.ctx
    num = ctx.sub(ctx.frob(a.raw, 1), ctx.pow(a.raw, ctx.p))
    return divide_by_p_exact(PadicScalar(ctx, num, a.prec), 1)


def teichmuller(ctx: PadicContext, c: int | Raw) -> PadicScalar:
    """Teichmuller representative of the residue class of c."""
    raw = ctx.from_int(c) if isinstance(c, int) else c
    return PadicScalar(ctx, ctx.teichmuller_raw(raw), ctx.N)


def _check_root_args(p: int, nu: int) -> None:
    if nu == 0 or nu % p == 0:
        raise NuDivisibleByP(f"nu = {nu} must be nonzero and prime to p")


def principal_root_scalar(u: PadicScalar, nu: int) -> PadicScalar:
    """The nu-th root of a 1-unit congruent to 1 mod p, via the binomial series."""
    ctx = u.ctx
    _check_root_args(ctx.p, nu)
    v = u - 1
    if u.prec < 1 or v.valuation() < 1:
        raise NotOneUnit("principal roots need u = 1 mod p")
    coeffs = binomial_series(ctx.p, ctx.N, Fraction(1, nu), u.prec)
    acc = ctx.zero()
    power = ctx.one()
    for m, c in enumerate(coeffs):
        if m:
            power = ctx.mul(power, v.raw)
        acc = ctx.add(acc, ctx.mul_int(power, c))
    return PadicScalar(ctx, acc, u.prec)


def hensel_root_scalar(u: PadicScalar, nu: int) -> PadicScalar:
    """Digit-by-digit lift of the residue-1 root of X^nu = u (independent of the series)."""
    ctx = u.ctx
    _check_root_args(ctx.p, nu)
    if u.prec < 1 or (u - 1).valuation() < 1:
        raise NotOneUnit("principal roots need u = 1 mod p")
    p = ctx.p
    nu_inv = pow(nu % p, -1, p)
    x = ctx.one()
    for k in range(1, u.prec):
        defect = ctx.sub(u.raw, ctx.pow(x, nu))
        c = ctx.residue(ctx.div_p_raw(defect, k))
        x = ctx.add(x, ctx.mul_int(c, nu_inv * p**k))
    return PadicScalar(ctx, x, u.prec)


def random_scalar(ctx: PadicContext, rng: random.Random, *, unit: bool = False) -> PadicScalar:
    return PadicScalar(ctx, ctx.random_raw(rng, unit=unit), ctx.N)


def random_one_unit(ctx: PadicContext, rng: random.Random) -> PadicScalar:
    v = ctx.random_raw(rng)
    return PadicScalar(ctx, ctx.add(ctx.one(), ctx.mul_int(v, ctx.p)), ctx.N)


def scalars(ctx: PadicContext, values: Iterable[int]) -> list[PadicScalar]:
    return [ctx.scalar(v) for v in values]
