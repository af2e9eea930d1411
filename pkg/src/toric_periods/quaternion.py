"""Quaternion algebras B = L + Lj over Q_p with j^2 = gamma and j l = conj(l) j."""
from __future__ import annotations

from fractions import Fraction

from .errors import (
    DegenerateGram,
    DivisionSideUnsupported,
    NoEmbedding,
    NonInvertible,
    NoSolution,
    ZeroInput,
)
from .padic import PadicNumber, hilbert_symbol, is_square
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra, QuadElem

MATRIX, DIVISION = "matrix", "division"


class QuatElem:
    __slots__ = ("B", "x", "y")

    def __init__(self, B: "QuatAlgebra", x: QuadElem, y: QuadElem):
        self.B = B
        self.x = x
        self.y = y

    def __repr__(self):
        return f"QuatElem({self.x!r} + ({self.y!r}) j)"

    def _coerce(self, other):
        if isinstance(other, QuatElem):
            return other
        if isinstance(other, QuadElem):
            return QuatElem(self.B, other, self.B.L.zero)
        return self.B.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return QuatElem(self.B, self.x + other.x, self.y + other.y)

    __radd__ = __add__

    def __neg__(self):
        return QuatElem(self.B, -self.x, -self.y)

    def __sub__(self, other):
        other = self._coerce(other)
        return QuatElem(self.B, self.x - other.x, self.y - other.y)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return QuatElem(self.B, self.x * other, self.y * other)
        other = self._coerce(other)
        x1, y1, x2, y2 = self.x, self.y, other.x, other.y
        gamma = self.B.gamma
        return QuatElem(self.B,
                        x1 * x2 + y1 * y2.conj() * gamma,
                        x1 * y2 + y1 * x2.conj())

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            return QuatElem(self.B, self.x * other, self.y * other)
        return self._coerce(other) * self

    def conj(self) -> "QuatElem":
        return QuatElem(self.B, self.x.conj(), -self.y)

    def norm(self) -> PadicNumber:
        return self.x.norm() - self.B.gamma * self.y.norm()

    def trace(self) -> PadicNumber:
        return self.x.trace()

    def is_zero(self) -> bool:
        return self.x.is_zero() and self.y.is_zero()

    def inverse(self) -> "QuatElem":
        nm = self.norm()
        if nm.is_zero():
            raise NonInvertible("quaternion of norm zero")
        return self.conj() * nm.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicNumber)):
            inv = self.B.ctx.element(other).inverse()
            return self * inv
        return self * self._coerce(other).inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        return self.x == other.x and self.y == other.y

    __hash__ = None

    def in_L(self) -> bool:
        return self.y.is_zero()


class QuatAlgebra:
    """L + Lj with j^2 = gamma."""

    def __init__(self, L: QuadAlgebra, gamma):
        if L.kind == SPLIT:
            raise ValueError("the L-pair model needs a field L")
        self.L = L
        self.ctx = L.ctx
        gamma = self.ctx.element(gamma)
        if gamma.is_zero():
            raise ZeroInput("gamma must be nonzero")
        self.gamma = gamma
        self.side = MATRIX if hilbert_symbol(gamma, L.D) == 1 else DIVISION
        self.eps = 0 if self.side == MATRIX else 2 - L.e
        self.nu_j = Fraction(L.e * gamma.val, 2)
        self.one = QuatElem(self, L.one, L.zero)
        self.j = QuatElem(self, L.zero, L.one)

    @classmethod
    def standard(cls, L: QuadAlgebra, side: str) -> "QuatAlgebra":
        """gamma normalized so that v(gamma) equals eps(B, L)."""
        if side == MATRIX:
            return cls(L, 1)
        if side != DIVISION:
            raise ValueError(f"unknown side {side!r}")
        if L.kind == INERT:
            return cls(L, L.ctx.p)
        return cls(L, L.ctx.nonsquare_unit())

    def __repr__(self):
        return f"QuatAlgebra({self.side}, L={self.L!r}, gamma={self.gamma.to_fraction()})"

    def elem(self, x: QuadElem, y: QuadElem | None = None) -> QuatElem:
        return QuatElem(self, x, self.L.zero if y is None else y)

    def scalar(self, a) -> QuatElem:
        return QuatElem(self, self.L.scalar(a), self.L.zero)

    def from_L(self, x: QuadElem) -> QuatElem:
        return QuatElem(self, x, self.L.zero)

    def perp(self, y: QuadElem) -> QuatElem:
        return QuatElem(self, self.L.zero, y)

    # -- pairing and valuation ----------------------------------------------------
    def pairing(self, g: QuatElem, h: QuatElem) -> PadicNumber:
        """<g, h> = Tr(gh)."""
        return (g * h).trace()

    def semi_valuation(self, g: QuatElem) -> Fraction:
        """nu(x + yj) = min(v_L(x), v_L(y) + e_L v(gamma) / 2)."""
        if g.is_zero():
            raise ZeroInput("semi-valuation of zero")
        vals = []
        if not g.x.is_zero():
            vals.append(Fraction(self.L.valuation(g.x)))
        if not g.y.is_zero():
            vals.append(Fraction(self.L.valuation(g.y)) + self.nu_j)
        return min(vals)

    def nu(self, g: QuatElem):
        return float("inf") if g.is_zero() else self.semi_valuation(g)

    def in_lattice(self, g: QuatElem, n) -> bool:
        return self.nu(g) >= n

    def in_subgroup(self, g: QuatElem, n) -> bool:
        """g in K_A(n) = 1 + B^n (n > 0)."""
        return self.nu(g - 1) >= n

    def orthogonal_decompose(self, g: QuatElem) -> tuple[QuatElem, QuatElem]:
        return self.from_L(g.x), self.perp(g.y)

    # -- 2x2 model ------------------------------------------------------------------
    def _matrix_twist(self):
        """l in L with Nm(l) = gamma, so that (l^-1 j)^2 = 1."""
        if self.side != MATRIX:
            raise DivisionSideUnsupported("the 2x2 model exists only on the matrix side")
        if self.gamma == 1:
            return self.L.one
        return solve_norm(self.L, self.gamma)

    def matrix_model(self, g: QuatElem):
        """x + yj -> [[x0-y0, x1+y1], [D(x1-y1), x0+y0]] after normalizing j^2 = 1."""
        l = self._matrix_twist()
        y = g.y * l
        D = self.L.D
        x0, x1, y0, y1 = g.x.a, g.x.b, y.a, y.b
        return ((x0 - y0, x1 + y1), (D * (x1 - y1), x0 + y0))

    def from_matrix(self, m) -> QuatElem:
        """Inverse of :meth:`matrix_model`."""
        l = self._matrix_twist()
        (p11, p12), (p21, p22) = m
        ctx = self.ctx
        p11, p12, p21, p22 = (ctx.element(v) for v in (p11, p12, p21, p22))
        D = self.L.D
        x0 = (p11 + p22) / 2
        y0 = (p22 - p11) / 2
        q21 = p21 / D
        x1 = (p12 + q21) / 2
        y1 = (p12 - q21) / 2
        y = QuadElem(self.L, y0, y1) * l.inverse()
        return QuatElem(self, QuadElem(self.L, x0, x1), y)


def matrix_det(m) -> PadicNumber:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def matrix_mul(m, n):
    return ((m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
            (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]))


def matrix_inv(m):
    det = matrix_det(m)
    if det.is_zero():
        raise NonInvertible("singular matrix")
    inv = det.inverse()
    return ((m[1][1] * inv, -m[0][1] * inv), (-m[1][0] * inv, m[0][0] * inv))


# -- norm equations -------------------------------------------------------------------

def norm_is_solvable(L: QuadAlgebra, t: PadicNumber) -> bool:
    return t.is_zero() or hilbert_symbol(t, L.D) == 1


def solve_norm(L: QuadAlgebra, t: PadicNumber) -> QuadElem:
    """Some y in L with Nm(y) = t, found by fixing one coordinate and taking a square root."""
    ctx = L.ctx
    t = ctx.element(t)
    if t.is_zero():
        return L.zero
    if not norm_is_solvable(L, t):
        raise NoSolution("target is not a norm from L")
    p = ctx.p
    D = L.D
    # y = p^k y' reduces to a target of valuation 0 (inert) or 0/1 (ramified)
    k = t.val // 2
    scale = ctx.power_of_p(k)
    t0 = t / (scale * scale)
    for b_try in _candidates(ctx):
        rhs = t0 + D * b_try * b_try
        if not rhs.is_zero() and is_square(rhs):
            y = QuadElem(L, rhs.sqrt(), b_try)
            return y * scale
    for a_try in _candidates(ctx):
        rhs = (a_try * a_try - t0) / D
        if not rhs.is_zero() and is_square(rhs):
            y = QuadElem(L, a_try, rhs.sqrt())
            return y * scale
    raise NoSolution("norm equation search failed")  # pragma: no cover


def _candidates(ctx):
    yield ctx.zero
    for r in range(1, ctx.p):
        yield ctx.element(r)
    for r in range(1, ctx.p):
        yield ctx.element(r * ctx.p)


# -- embeddings of a second torus -------------------------------------------------------

class TorusEmbedding:
    """An embedding E -> B given by the image beta of sqrt(D_E)."""

    def __init__(self, E: QuadAlgebra, B: QuatAlgebra, beta: QuatElem):
        self.E = E
        self.B = B
        self.beta = beta
        if not beta.trace().is_zero():
            raise ValueError("beta must have trace zero")
        if not (beta * beta - E.D).is_zero():
            raise ValueError("beta^2 must equal D_E")
        self.j_E = self._perp_generator()

    def __call__(self, t: QuadElem) -> QuatElem:
        return self.embed(t)

    def embed(self, t: QuadElem) -> QuatElem:
        if t.alg is not self.E:
            raise ValueError("element is not in E")
        return self.B.scalar(t.a) + self.beta * t.b

    def _perp_generator(self) -> QuatElem:
        B = self.B
        for g in (B.j, B.from_L(B.L.sqrt_D), B.perp(B.L.sqrt_D), B.one):
            c = g * self.beta - self.beta * g
            if not c.is_zero():
                return c
        raise DegenerateGram("beta is central")  # pragma: no cover

    def decompose_relative(self, g: QuatElem) -> tuple[QuatElem, QuatElem]:
        return decompose_relative(g, self.beta)


def decompose_relative(g: QuatElem, alpha: QuatElem) -> tuple[QuatElem, QuatElem]:
    """Split g = (c0 + c1 alpha) + r with r trace-orthogonal to F[alpha]."""
    B = g.B
    t_a = alpha.trace()
    t_aa = (alpha * alpha).trace()
    two = B.ctx.element(2)
    det = two * t_aa - t_a * t_a
    if det.is_zero():
        raise DegenerateGram("alpha generates a degenerate subalgebra")
    r0 = g.trace()
    r1 = (g * alpha).trace()
    c0 = (t_aa * r0 - t_a * r1) / det
    c1 = (two * r1 - t_a * r0) / det
    part = B.scalar(c0) + alpha * c1
    return part, g - part


def second_torus_embeddings(E: QuadAlgebra, B: QuatAlgebra):
    """Embeddings beta = s sqrt(D_L) + l1 j with l0 = s sqrt(D_L) and s^2 D_L + gamma Nm(l1) = D_E.

    The L-components are tried with growing size: s = 0, then s = r p^k for
    k running down from the working precision to -2.
    """
    L = B.L
    ctx = B.ctx
    if E.kind == SPLIT and B.side == DIVISION:
        raise NoEmbedding("a split torus does not embed in the division algebra")
    found = False
    if E.isomorphic(L):
        s = E.D / L.D
        found = True
        yield TorusEmbedding(E, B, B.from_L(L.sqrt_D * s.sqrt()))
    scales = [ctx.zero] + [ctx.element(r) * ctx.power_of_p(k) if k >= 0
                           else ctx.element(r) / ctx.power_of_p(-k)
                           for k in range(ctx.N - 2, -3, -1) for r in range(1, ctx.p)]
    for s in scales:
        target = (E.D - s * s * L.D) / B.gamma
        if target.is_zero() or not norm_is_solvable(L, target):
            continue
        l1 = solve_norm(L, target)
        found = True
        yield TorusEmbedding(E, B, QuatElem(B, L.sqrt_D * s, l1))
    if not found:
        raise NoEmbedding(f"{E!r} does not embed in {B!r}")


def embed_second_torus(E: QuadAlgebra, B: QuatAlgebra) -> TorusEmbedding:
    """Some embedding of E into B."""
    return next(iter(second_torus_embeddings(E, B)))
