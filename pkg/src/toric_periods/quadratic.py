"""Quadratic étale algebras F(sqrt D) over Q_p.

All three kinds share one element type, ``a + b*sqrt(D)``.  The split
algebra uses D = 1, so the pair coordinates are ``(a + b, a - b)`` and
multiplication is coordinatewise there.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from sympy.ntheory import primitive_root

from .errors import (
    DepthExceedsPrecision,
    NonInvertible,
    SplitKindUnsupported,
    ZeroInput,
)
from .padic import Context, PadicNumber, _ilog, _split_p, is_square, legendre, teichmuller

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"
KINDS = (SPLIT, INERT, RAMIFIED)


class QuadElem:
    __slots__ = ("alg", "a", "b")

    def __init__(self, alg: "QuadAlgebra", a: PadicNumber, b: PadicNumber):
        self.alg = alg
        self.a = a
        self.b = b

    def __repr__(self) -> str:
        return f"QuadElem({self.a.to_fraction()} + {self.b.to_fraction()}*sqrt({self.alg.D.to_fraction()}))"

    def _coerce(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (int, Fraction, PadicNumber)):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.alg, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.alg, -self.a, -self.b)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.alg, self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return QuadElem(self.alg, self.a * other, self.b * other)
        if not isinstance(other, QuadElem):
            return NotImplemented
        a, b, c, d = self.a, self.b, other.a, other.b
        return QuadElem(self.alg, a * c + b * d * self.alg.D, a * d + b * c)

    __rmul__ = __mul__

    def conj(self) -> "QuadElem":
        return QuadElem(self.alg, self.a, -self.b)

    def norm(self) -> PadicNumber:
        return self.a * self.a - self.b * self.b * self.alg.D

    def trace(self) -> PadicNumber:
        return self.a + self.a

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def is_invertible(self) -> bool:
        if self.alg.kind == SPLIT:
            x1, x2 = self.alg.to_pair(self)
            return not (x1.is_zero() or x2.is_zero())
        return not self.is_zero()

    def inverse(self) -> "QuadElem":
        if not self.is_invertible():
            raise NonInvertible(f"{self!r} is not invertible")
        nm = self.norm()
        if nm.is_zero():
            raise NonInvertible("norm vanished at working precision")
        inv = nm.inverse()
        return QuadElem(self.alg, self.a * inv, -self.b * inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            other = self.alg.ctx.element(other)
            return QuadElem(self.alg, self.a / other, self.b / other)
        if not isinstance(other, QuadElem):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.alg.scalar(other) * self.inverse()

    def __pow__(self, n: int) -> "QuadElem":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.alg.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.a == other.a and self.b == other.b

    __hash__ = None

    def imaginary_part(self) -> "QuadElem":
        """x - Tr(x)/2."""
        return QuadElem(self.alg, self.alg.ctx.zero, self.b)

    def valuation(self):
        return self.alg.valuation(self)


def imaginary_part(x: QuadElem) -> QuadElem:
    return x.imaginary_part()


class QuadAlgebra:
    """F(sqrt D) of a given kind; D = 1 for the split algebra."""

    def __init__(self, ctx: Context, kind: str, D=None):
        if kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        self.ctx = ctx
        self.kind = kind
        if D is None:
            D = {SPLIT: 1, INERT: ctx.nonsquare_unit(), RAMIFIED: ctx.p}[kind]
        D = ctx.element(D)
        if kind == SPLIT:
            if not is_square(D):
                raise ValueError("split algebra needs a square D")
            if not D == 1:
                raise ValueError("split algebras are realized with D = 1")
        elif kind == INERT:
            if D.val != 0 or is_square(D):
                raise ValueError("inert algebra needs a nonsquare unit D")
        else:
            if D.val != 1:
                raise ValueError("ramified algebra needs D of valuation 1")
        self.D = D
        self.e = 2 if kind == RAMIFIED else 1
        self.f = 2 if kind == INERT else 1
        self.q = ctx.q
        self.residue_size = ctx.q ** self.f
        self.zero = QuadElem(self, ctx.zero, ctx.zero)
        self.one = QuadElem(self, ctx.one, ctx.zero)
        self.sqrt_D = QuadElem(self, ctx.zero, ctx.one)
        self._tables = None

    # -- construction ---------------------------------------------------------
    def __repr__(self) -> str:
        return f"QuadAlgebra({self.kind}, D={self.D.to_fraction()}, p={self.ctx.p})"

    def elem(self, a, b=0) -> QuadElem:
        return QuadElem(self, self.ctx.element(a), self.ctx.element(b))

    def scalar(self, a) -> QuadElem:
        return QuadElem(self, self.ctx.element(a), self.ctx.zero)

    def from_pair(self, x1, x2) -> QuadElem:
        if self.kind != SPLIT:
            raise ValueError("pair coordinates exist only for the split algebra")
        x1, x2 = self.ctx.element(x1), self.ctx.element(x2)
        return QuadElem(self, (x1 + x2) / 2, (x1 - x2) / 2)

    def to_pair(self, x: QuadElem) -> tuple[PadicNumber, PadicNumber]:
        return x.a + x.b, x.a - x.b

    @property
    def is_field(self) -> bool:
        return self.kind != SPLIT

    @property
    def psi_conductor(self) -> int:
        """c(psi_K) for psi_K = psi o Tr with psi unramified."""
        return 1 - self.e

    def uniformizer(self) -> QuadElem:
        if self.kind == RAMIFIED:
            return self.sqrt_D
        return self.scalar(self.ctx.p)

    def uniformizer_power(self, m: int) -> QuadElem:
        if self.kind != RAMIFIED:
            return self.scalar(self.ctx.power_of_p(m))
        half, odd = divmod(m, 2)
        base = self.D ** half
        if odd:
            return QuadElem(self, self.ctx.zero, base)
        return QuadElem(self, base, self.ctx.zero)

    def same_as(self, other: "QuadAlgebra") -> bool:
        return self.kind == other.kind and self.D == other.D and self.ctx == other.ctx

    def isomorphic(self, other: "QuadAlgebra") -> bool:
        if self.kind != other.kind:
            return False
        if self.kind == SPLIT:
            return True
        return is_square(self.D / other.D)

    def transport_scale(self, other: "QuadAlgebra") -> PadicNumber:
        """s with sqrt(D_self) = s*sqrt(D_other) under an isomorphism self -> other."""
        if not self.isomorphic(other):
            raise ValueError("algebras are not isomorphic")
        return (self.D / other.D).sqrt()

    def transport(self, x: QuadElem, other: "QuadAlgebra", scale=None) -> QuadElem:
        s = self.transport_scale(other) if scale is None else scale
        return QuadElem(other, x.a, x.b * s)

    # -- valuation ------------------------------------------------------------
    def valuation(self, x: QuadElem):
        """v_K(x) normalized by v_K(uniformizer) = 1; split gives the min over coordinates."""
        if self.kind == SPLIT:
            x1, x2 = self.to_pair(x)
            return min(x1.valuation, x2.valuation)
        if self.kind == INERT:
            return min(x.a.valuation, x.b.valuation)
        return min(2 * x.a.valuation, 2 * x.b.valuation + 1)

    def is_minimal_element(self, x: QuadElem) -> bool:
        if self.kind == SPLIT:
            raise SplitKindUnsupported("minimality is defined for field kinds")
        if x.is_zero():
            raise ZeroInput("minimality of zero")
        return self.valuation(x.imaginary_part()) == self.valuation(x)

    def in_unit_filtration(self, x: QuadElem, n: int) -> bool:
        """x in U_K(n) (n = 0 means units)."""
        if n <= 0:
            return x.is_invertible() and self.valuation(x) == 0
        return self.valuation(x - 1) >= n

    # -- measures ---------------------------------------------------------------
    def l_value(self) -> Fraction:
        """L(eta_{K/F}, 1)."""
        q = Fraction(self.q)
        if self.kind == SPLIT:
            return 1 / (1 - 1 / q)
        if self.kind == INERT:
            return 1 / (1 + 1 / q)
        return Fraction(1)

    def filtration_volume(self, m: int) -> Fraction:
        """Vol(F^x \\ F^x U_K(e*m + e - 1)) = q^-m L(eta, 1), for filtration level >= 1.

        Level 0 is the full unit group, whose volume is :meth:`total_volume`.
        """
        if self.e * m + self.e - 1 < 1:
            raise ValueError("filtration level must be at least 1")
        return Fraction(1, self.q ** m) * self.l_value()

    def total_volume(self) -> Fraction:
        """Vol(F^x \\ K^x) (split: the unit shell O_F^x \\ O_K^x)."""
        return Fraction(2) if self.kind == RAMIFIED else Fraction(1)

    def coset_reps(self, M: int, shells: int = 0) -> list["Coset"]:
        """Representatives of F^x \\ K^x modulo U_K(M), indexed by P^1(O/p^M).

        Ramified cells are F^x t U_K(2M+1) for [1:c] and F^x t U_K(2M-1)
        for [c':1].  The split algebra enumerates the unit shell and,
        with ``shells=k``, the ratio classes p^j * unit for 0 < |j| <= k.
        """
        if M < 1:
            raise ValueError("depth must be at least 1")
        if M > self.ctx.N - 2:
            raise DepthExceedsPrecision(f"depth {M} needs precision >= {M + 2}")
        p = self.ctx.p
        mod = p ** M
        out: list[Coset] = []
        if self.kind == INERT:
            w = Fraction(1, (self.q + 1) * self.q ** (M - 1))
            for c in range(mod):
                out.append(Coset(self.elem(1, c), w, M, ("c", c)))
            for c in range(0, mod, p):
                out.append(Coset(self.elem(c, 1), w, M, ("c'", c)))
        elif self.kind == RAMIFIED:
            w_even = Fraction(1, self.q ** M)
            w_odd = Fraction(1, self.q ** (M - 1))
            for c in range(mod):
                out.append(Coset(self.elem(1, c), w_even, 2 * M + 1, ("c", c)))
            for c in range(0, mod, p):
                out.append(Coset(self.elem(c, 1), w_odd, 2 * M - 1, ("c'", c)))
        else:
            w = Fraction(1, (self.q - 1) * self.q ** (M - 1))
            for c in range(mod):
                if (c - 1) % p == 0 or (c + 1) % p == 0:
                    continue
                out.append(Coset(self.elem(1, c), w, M, ("c", c)))
            for c in range(0, mod, p):
                out.append(Coset(self.elem(c, 1), w, M, ("c'", c)))
            for j in range(1, shells + 1):
                for sign in (j, -j):
                    shift = self.from_pair(self.ctx.power_of_p(sign), 1)
                    for base in list(out[: (self.q - 1) * self.q ** (M - 1)]):
                        out.append(Coset(base.elem * shift, w, M, (f"shell{sign}",) + base.key))
        return out

    # -- Teichmüller structure ------------------------------------------------------
    def _build_tables(self):
        """Residue -> (index, Teichmüller lift, inverse lift) for a fixed generator."""
        ctx = self.ctx
        p = ctx.p
        if self.kind != INERT:
            g = primitive_root(p)
            table = {}
            x = 1
            for k in range(p - 1):
                zeta = teichmuller(ctx, x)
                table[x] = (k, zeta, zeta.inverse())
                x = (x * g) % p
            self._tables = (g, table)
            return
        d = self.D.residue()
        order = p * p - 1

        def rmul(u, v):
            return ((u[0] * v[0] + u[1] * v[1] * d) % p, (u[0] * v[1] + u[1] * v[0]) % p)

        def rpow(u, n):
            r = (1, 0)
            while n:
                if n & 1:
                    r = rmul(r, u)
                u = rmul(u, u)
                n >>= 1
            return r

        prime_factors = [f for f in range(2, order + 1)
                         if order % f == 0 and all(f % s for s in range(2, int(f ** 0.5) + 1))]
        gen = None
        for r0 in range(p):
            for r1 in range(1, p):
                cand = (r0, r1)
                if all(rpow(cand, order // f) != (1, 0) for f in prime_factors):
                    gen = cand
                    break
            if gen:
                break
        lift = self.elem(gen[0], gen[1]) ** (p ** (2 * (ctx.N - 1)))
        table = {}
        zeta = self.one
        x = (1, 0)
        for k in range(order):
            table[x] = (k, zeta, zeta.inverse())
            zeta = zeta * lift
            x = rmul(x, gen)
        self._tables = (gen, table)

    def teichmuller_table(self):
        if self._tables is None:
            self._build_tables()
        return self._tables

    def teichmuller_generator(self) -> QuadElem:
        """Lift of the fixed residue generator (index 1)."""
        gen, table = self.teichmuller_table()
        zeta = table[gen][1]
        return zeta if isinstance(zeta, QuadElem) else self.scalar(zeta)

    def decompose(self, x: QuadElem):
        """x = uniformizer^m * zeta * (1 + u).

        Returns (m, index, one_plus_u); for the split algebra m and index
        are pairs (one entry per coordinate).
        """
        if self.kind == SPLIT:
            return self._decompose_split(x)
        if not x.is_invertible():
            raise NonInvertible("decompose needs an invertible element")
        m = self.valuation(x)
        if self.kind == INERT:
            unit = x / self.ctx.power_of_p(m) if m else x
            key = (unit.a.lift(1), unit.b.lift(1))
            _, table = self.teichmuller_table()
            idx, _, zinv = table[key]
            return m, idx, unit * zinv
        unit = x / self.uniformizer_power(m) if m else x
        _, table = self.teichmuller_table()
        idx, _, zinv = table[unit.a.lift(1)]
        return m, idx, unit * zinv

    def _decompose_split(self, x: QuadElem):
        x1, x2 = self.to_pair(x)
        if x1.is_zero() or x2.is_zero():
            raise NonInvertible("split element with a zero coordinate")
        _, table = self.teichmuller_table()
        parts = []
        for xi in (x1, x2):
            m = xi.val
            unit = xi.unit_part()
            idx, _, zinv = table[unit.residue()]
            parts.append((m, idx, unit * zinv))
        (m1, i1, u1), (m2, i2, u2) = parts
        return (m1, m2), (i1, i2), self.from_pair(u1, u2)

    # -- log ----------------------------------------------------------------------
    def log_one_plus(self, w: QuadElem, target: int) -> QuadElem:
        """log(1 + w) for v_K(w) >= 1, dropping terms of K-valuation >= target."""
        if w.is_zero():
            return self.zero
        v = self.valuation(w)
        if v < 1:
            raise ValueError("log needs v_K(w) >= 1")
        p = self.ctx.p
        total = self.zero
        power = w
        n = 1
        while n * v - self.e * _ilog(n, p) < target:
            term = power / n
            total = total + term if n % 2 else total - term
            power = power * w
            n += 1
        return total


@dataclass(frozen=True)
class Coset:
    """One cell F^x * elem * U_K(level) with its Haar weight."""

    elem: QuadElem
    weight: Fraction
    level: int
    key: tuple


def norm_one_map(t: QuadElem) -> QuadElem:
    """t / conj(t): F^x \\ K^x -> K^1 (Hilbert 90)."""
    if not t.is_invertible():
        raise NonInvertible("norm_one_map needs an invertible element")
    return t * t.conj().inverse()


def residue_legendre(x: PadicNumber) -> int:
    return legendre(x.unit, x.ctx.p)


def iter_units_mod(ctx: Context, k: int) -> Iterator[int]:
    p = ctx.p
    for x in range(p ** k):
        if x % p:
            yield x
