"""Bounded-precision arithmetic in Q_p.

Every nonzero element is stored as ``p**val * unit`` where ``unit`` is an
integer prime to p known modulo ``p**prec``.  ``prec`` is the relative
precision (number of known p-adic digits) and never exceeds the context's
working precision ``N``.  Zero is a distinguished marker with ``val=None``;
it is treated as exact, so ``x - x`` collapses to it.

Operations that would need digits beyond what is known raise
:class:`PrecisionExhausted` instead of silently returning garbage.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Integral, Rational

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import (
    DivisionByZero,
    DomainViolation,
    PrecisionExhausted,
    ZeroInput,
    ZeroResidue,
)


def _split_p(n: int, p: int) -> tuple[int, int]:
    """Return (k, m) with n = p**k * m and p not dividing m (n != 0)."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def vp_int(n: int, p: int) -> int:
    if n == 0:
        raise ZeroInput("valuation of 0")
    return _split_p(n, p)[0]


@lru_cache(maxsize=None)
def _square_residues(p: int) -> frozenset:
    return frozenset((x * x) % p for x in range(1, p))


def legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if a in _square_residues(p) else -1


class Context:
    """Base field Q_p at working relative precision N."""

    __slots__ = ("p", "N", "q", "modulus", "_zero", "_one", "_teich")

    def __init__(self, p: int, N: int):
        if not isinstance(p, Integral) or not isprime(int(p)) or p < 5:
            raise ValueError(f"p must be a prime >= 5, got {p!r}")
        if N < 1:
            raise ValueError(f"precision must be positive, got {N!r}")
        self.p = int(p)
        self.N = int(N)
        self.q = self.p
        self.modulus = self.p ** self.N
        self._zero = PadicNumber(self, None, 0, self.N)
        self._one = PadicNumber(self, 0, 1, self.N)
        self._teich = {}

    def __repr__(self) -> str:
        return f"Context(p={self.p}, N={self.N})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Context) and (self.p, self.N) == (other.p, other.N)

    def __hash__(self) -> int:
        return hash((self.p, self.N))

    def __call__(self, value, prec: int | None = None) -> "PadicNumber":
        return self.element(value, prec)

    def element(self, value, prec: int | None = None) -> "PadicNumber":
        """Coerce an int, Fraction or PadicNumber into this context."""
        if isinstance(value, PadicNumber):
            if value.ctx is not self and value.ctx != self:
                raise ValueError("context mismatch")
            return value
        if isinstance(value, str):
            value = Fraction(value)
        if not isinstance(value, Rational):
            raise TypeError(f"cannot coerce {type(value).__name__} to a p-adic number")
        value = Fraction(value)
        prec = self.N if prec is None else min(prec, self.N)
        if value == 0:
            return self._zero
        p = self.p
        kn, n = _split_p(value.numerator, p)
        kd, d = _split_p(value.denominator, p)
        mod = p ** prec
        return PadicNumber(self, kn - kd, (n * pow(d, -1, mod)) % mod, prec)

    @property
    def zero(self) -> "PadicNumber":
        return self._zero

    @property
    def one(self) -> "PadicNumber":
        return self._one

    @property
    def uniformizer(self) -> "PadicNumber":
        return PadicNumber(self, 1, 1, self.N)

    def power_of_p(self, k: int) -> "PadicNumber":
        return PadicNumber(self, k, 1, self.N)

    def teichmuller(self, r: int) -> "PadicNumber":
        return teichmuller(self, r)

    def nonsquare_unit(self) -> int:
        """Smallest positive quadratic nonresidue mod p."""
        return _smallest_nonresidue(self.p)


@lru_cache(maxsize=None)
def _smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if legendre(r, p) == -1:
            return r
    raise AssertionError("no nonresidue")  # unreachable for odd p


class PadicNumber:
    """An element p**val * unit of Q_p with relative precision prec."""

    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx: Context, val: int | None, unit: int, prec: int):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return self.val is None

    @property
    def valuation(self):
        return float("inf") if self.val is None else self.val

    @property
    def abs_prec(self):
        """Absolute precision: the element is known modulo p**abs_prec."""
        return float("inf") if self.val is None else self.val + self.prec

    def residue(self) -> int:
        """Unit part modulo p (the leading digit)."""
        if self.val is None:
            raise ZeroInput("residue of zero")
        return self.unit % self.ctx.p

    def lift(self, k: int) -> int:
        """Integer in [0, p**k) congruent to self; requires val >= 0."""
        p = self.ctx.p
        if self.val is None:
            return 0
        if self.val < 0:
            raise DomainViolation("element is not integral")
        if self.val >= k:
            return 0
        if self.val + self.prec < k:
            raise PrecisionExhausted(
                f"need {k} digits, only {self.val + self.prec} known")
        mod = p ** k
        return (p ** self.val * self.unit) % mod

    def fractional(self) -> Fraction:
        """The p-adic fractional part {x} in [0, 1) as an exact rational."""
        if self.val is None or self.val >= 0:
            return Fraction(0)
        p = self.ctx.p
        depth = -self.val
        if self.prec < depth:
            raise PrecisionExhausted("fractional part needs more digits")
        mod = p ** depth
        return Fraction(self.unit % mod, mod)

    def to_fraction(self) -> Fraction:
        """A rational representative, with the unit taken in (-p^prec/2, p^prec/2]."""
        if self.val is None:
            return Fraction(0)
        mod = self.ctx.p ** self.prec
        u = self.unit % mod
        if u > mod // 2:
            u -= mod
        return Fraction(u) * Fraction(self.ctx.p) ** self.val

    def __repr__(self) -> str:
        if self.val is None:
            return "PadicNumber(0)"
        return f"PadicNumber(val={self.val}, unit={self.unit}, prec={self.prec}, p={self.ctx.p})"

    # -- coercion -------------------------------------------------------------
    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return self.ctx.element(other)
        return NotImplemented

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "PadicNumber":
        if self.val is None:
            return self
        mod = self.ctx.p ** self.prec
        return PadicNumber(self.ctx, self.val, (-self.unit) % mod, self.prec)

    def __add__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.val is None:
            return other
        if other.val is None:
            return self
        p = self.ctx.p
        m = min(self.val, other.val)
        a_abs = min(self.val + self.prec, other.val + other.prec)
        width = a_abs - m
        mod = p ** width
        s = (self.unit * p ** (self.val - m) + other.unit * p ** (other.val - m)) % mod
        if s == 0:
            return self.ctx.zero
        k = 0
        while s % p == 0:
            s //= p
            k += 1
        prec = width - k
        return PadicNumber(self.ctx, m + k, s % (p ** prec), prec)

    __radd__ = __add__

    def __sub__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.val is None or other.val is None:
            return self.ctx.zero
        prec = min(self.prec, other.prec)
        mod = self.ctx.p ** prec
        return PadicNumber(self.ctx, self.val + other.val, (self.unit * other.unit) % mod, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.val is None:
            raise DivisionByZero("inverse of zero")
        mod = self.ctx.p ** self.prec
        return PadicNumber(self.ctx, -self.val, pow(self.unit, -1, mod), self.prec)

    def __truediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int) -> "PadicNumber":
        if n < 0:
            return self.inverse() ** (-n)
        if self.val is None:
            return self.ctx.one if n == 0 else self
        mod = self.ctx.p ** self.prec
        return PadicNumber(self.ctx, self.val * n, pow(self.unit, n, mod), self.prec)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return (self - other).val is None

    __hash__ = None

    def truncate(self, prec: int) -> "PadicNumber":
        """Drop relative precision to at most ``prec`` digits."""
        if self.val is None or prec >= self.prec:
            return self
        if prec < 1:
            raise PrecisionExhausted("cannot keep fewer than one digit")
        return PadicNumber(self.ctx, self.val, self.unit % self.ctx.p ** prec, prec)

    def unit_part(self) -> "PadicNumber":
        """x / p**v(x)."""
        if self.val is None:
            raise ZeroInput("unit part of zero")
        return PadicNumber(self.ctx, 0, self.unit, self.prec)

    def sqrt(self) -> "PadicNumber":
        """A square root; raises DomainViolation for nonsquares."""
        if self.val is None:
            return self
        if not is_square(self):
            raise DomainViolation("not a square")
        p = self.ctx.p
        mod = p ** self.prec
        root = sqrt_mod(self.unit % mod, mod)
        return PadicNumber(self.ctx, self.val // 2, root % mod, self.prec)


# -- square classes and the Hilbert symbol ---------------------------------------

def is_square(x: PadicNumber) -> bool:
    if x.is_zero():
        raise ZeroInput("is_square of zero")
    return x.val % 2 == 0 and legendre(x.unit, x.ctx.p) == 1


def hilbert_symbol(a: PadicNumber, b: PadicNumber) -> int:
    """(a, b)_p for odd p."""
    if a.is_zero() or b.is_zero():
        raise ZeroInput("Hilbert symbol of zero")
    p = a.ctx.p
    alpha, beta = a.val, b.val
    sign = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    if beta % 2:
        sign *= legendre(a.unit, p)
    if alpha % 2:
        sign *= legendre(b.unit, p)
    return sign


# -- Teichmüller lifts ------------------------------------------------------------

def teichmuller(ctx: Context, r: int) -> PadicNumber:
    """The (p-1)-th root of unity congruent to r mod p."""
    r %= ctx.p
    if r == 0:
        raise ZeroResidue("Teichmüller lift of 0")
    cached = ctx._teich.get(r)
    if cached is None:
        cached = PadicNumber(ctx, 0, pow(r, ctx.p ** (ctx.N - 1), ctx.modulus), ctx.N)
        ctx._teich[r] = cached
    return cached


# -- logarithm and exponential -------------------------------------------------------

def plog(x: PadicNumber) -> PadicNumber:
    """p-adic logarithm on 1 + pZ_p."""
    if x.is_zero():
        raise DomainViolation("log of zero")
    z = x - 1
    if z.is_zero():
        return x.ctx.zero
    if z.val < 1:
        raise DomainViolation("log needs x in 1 + pZ_p")
    return log_series(z)


def _ilog(n: int, p: int) -> int:
    k = 0
    while n >= p:
        n //= p
        k += 1
    return k


def log_series(z: PadicNumber, target=None) -> PadicNumber:
    """sum_{n>=1} (-1)^(n+1) z^n / n, truncated once terms fall below ``target``.

    ``target`` defaults to the absolute precision of z.
    """
    ctx = z.ctx
    if z.is_zero():
        return ctx.zero
    p = ctx.p
    stop = z.abs_prec if target is None else target
    total = ctx.zero
    power = z
    n = 1
    while True:
        # n*v - floor(log_p n) bounds every later term from below and increases
        if n * z.val - _ilog(n, p) >= stop:
            break
        term = power / n
        total = total + term if n % 2 else total - term
        power = power * z
        n += 1
    return total


def pexp(y: PadicNumber) -> PadicNumber:
    """p-adic exponential on pZ_p."""
    ctx = y.ctx
    if y.is_zero():
        return ctx.one
    if y.val < 1:
        raise DomainViolation("exp needs valuation >= 1")
    stop = y.abs_prec
    total = ctx.one
    term = ctx.one
    n = 1
    while True:
        # v(y^n/n!) >= n*v(y) - (n-1)/(p-1), which increases with n
        if n * y.val - Fraction(n - 1, ctx.p - 1) >= stop:
            break
        term = term * y / n
        total = total + term
        n += 1
    return total
