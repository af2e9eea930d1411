"""Exact character values.

A character value e^{2 pi i t} is stored as the rational t mod 1 (a
:class:`Phase`).  Multiplicative characters of a quadratic algebra K are
given by a wild parameter alpha (the character is psi_K(alpha log x) on
U_K(1)), a tame exponent on Teichmüller lifts and a value on the fixed
uniformizer.
"""
from __future__ import annotations

import cmath
from fractions import Fraction

from .errors import CentralMismatch, ConductorTooSmall, NonInvertible, PrecisionExhausted
from .padic import PadicNumber, plog, teichmuller
from .quadratic import INERT, RAMIFIED, SPLIT, QuadAlgebra, QuadElem


class Phase:
    """t mod 1, standing for exp(2 pi i t)."""

    __slots__ = ("t",)

    def __init__(self, t=0):
        t = t.t if isinstance(t, Phase) else Fraction(t)
        self.t = t - (t.numerator // t.denominator)

    def __add__(self, other):
        return Phase(self.t + _phase_t(other))

    __radd__ = __add__

    def __sub__(self, other):
        return Phase(self.t - _phase_t(other))

    def __neg__(self):
        return Phase(-self.t)

    def __mul__(self, n: int):
        return Phase(self.t * n)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, (Phase, int, Fraction)):
            return self.t == Phase(_phase_t(other)).t
        return NotImplemented

    def __hash__(self):
        return hash(self.t)

    def __repr__(self):
        return f"Phase({self.t})"

    def is_zero(self) -> bool:
        return self.t == 0

    def to_complex(self) -> complex:
        if self.t == 0:
            return 1 + 0j
        return cmath.exp(2j * cmath.pi * float(self.t))


def _phase_t(x) -> Fraction:
    return x.t if isinstance(x, Phase) else Fraction(x)


ZERO_PHASE = Phase(0)


# -- additive characters -----------------------------------------------------------

def psi_eval(x: PadicNumber) -> Phase:
    """Unramified additive character: the p-adic fractional part."""
    return Phase(x.fractional())


def psi_K_eval(x: QuadElem) -> Phase:
    """psi o Tr on a quadratic algebra."""
    return psi_eval(x.trace())


# -- characters of the base field ---------------------------------------------------

class BaseChar:
    """A character of F^x: psi(alpha log <x>) on 1 + pZ_p, tame on roots of unity."""

    def __init__(self, ctx, alpha: PadicNumber | None = None, tame_exp: int = 0, unif_phase=0):
        self.ctx = ctx
        self.alpha = None if alpha is None or alpha.is_zero() else alpha
        self.tame_exp = tame_exp % (ctx.p - 1)
        self.unif_phase = Phase(unif_phase)
        self._gen = None

    def __call__(self, x: PadicNumber) -> Phase:
        if x.is_zero():
            raise NonInvertible("character of zero")
        ctx = self.ctx
        m = x.val
        unit = x.unit_part()
        r = unit.residue()
        phase = self.unif_phase * m
        if self.tame_exp:
            phase = phase + Phase(Fraction(self.tame_exp * _base_index(ctx.p, r), ctx.p - 1))
        if self.alpha is not None:
            one_plus = unit / teichmuller(ctx, r)
            phase = phase + psi_eval(self.alpha * plog(one_plus))
        return phase

    def conductor(self) -> int:
        if self.alpha is not None:
            return max(-self.alpha.val, 1 if self.tame_exp else 0)
        return 1 if self.tame_exp else 0


_BASE_INDEX: dict = {}


def _base_index(p: int, r: int) -> int:
    table = _BASE_INDEX.get(p)
    if table is None:
        from sympy.ntheory import primitive_root
        g = primitive_root(p)
        table = {}
        x = 1
        for k in range(p - 1):
            table[x] = k
            x = (x * g) % p
        _BASE_INDEX[p] = table
    return table[r % p]


# -- characters of quadratic algebras -------------------------------------------------

class MultCharSpec:
    """A character of K^x for a quadratic algebra K.

    For the split algebra ``tame_exp`` and ``unif_phase`` are pairs, one per
    coordinate; ``alpha`` is still a single element of K, acting
    coordinatewise through the trace.
    """

    def __init__(self, algebra: QuadAlgebra, alpha: QuadElem | None = None,
                 tame_exp=0, unif_phase=0):
        self.algebra = algebra
        if alpha is not None and alpha.is_zero():
            alpha = None
        self.alpha = alpha
        if algebra.kind == SPLIT:
            t1, t2 = tame_exp if isinstance(tame_exp, tuple) else (tame_exp, tame_exp)
            u1, u2 = unif_phase if isinstance(unif_phase, tuple) else (unif_phase, unif_phase)
            order = algebra.q - 1
            self.tame_exp = (t1 % order, t2 % order)
            self.unif_phase = (Phase(u1), Phase(u2))
        else:
            self.tame_exp = tame_exp % (algebra.residue_size - 1)
            self.unif_phase = Phase(unif_phase)
        self._conductor = None
        self._wild_target = None
        if alpha is not None:
            self._wild_target = algebra.psi_conductor - algebra.valuation(alpha)

    def __repr__(self):
        return (f"MultCharSpec({self.algebra.kind}, alpha={self.alpha!r}, "
                f"tame={self.tame_exp}, unif={self.unif_phase})")

    # -- evaluation ---------------------------------------------------------------
    def __call__(self, x: QuadElem) -> Phase:
        return char_eval(self, x)

    def wild_phase(self, one_plus_u: QuadElem) -> Phase:
        if self.alpha is None or self._wild_target <= 0:
            return ZERO_PHASE
        alg = self.algebra
        w = one_plus_u - 1
        if w.is_zero() or alg.valuation(w) >= self._wild_target:
            return ZERO_PHASE
        return psi_K_eval(self.alpha * alg.log_one_plus(w, self._wild_target))

    # -- algebra of characters ------------------------------------------------------
    def __mul__(self, other: "MultCharSpec") -> "MultCharSpec":
        if other.algebra is not self.algebra:
            raise ValueError("characters live on different algebras")
        alpha = _add_opt(self.alpha, other.alpha)
        if self.algebra.kind == SPLIT:
            tame = (self.tame_exp[0] + other.tame_exp[0], self.tame_exp[1] + other.tame_exp[1])
            unif = (self.unif_phase[0] + other.unif_phase[0], self.unif_phase[1] + other.unif_phase[1])
        else:
            tame = self.tame_exp + other.tame_exp
            unif = self.unif_phase + other.unif_phase
        return MultCharSpec(self.algebra, alpha, tame, unif)

    def inverse(self) -> "MultCharSpec":
        alpha = None if self.alpha is None else -self.alpha
        if self.algebra.kind == SPLIT:
            return MultCharSpec(self.algebra, alpha, (-self.tame_exp[0], -self.tame_exp[1]),
                                (-self.unif_phase[0], -self.unif_phase[1]))
        return MultCharSpec(self.algebra, alpha, -self.tame_exp, -self.unif_phase)

    def __truediv__(self, other: "MultCharSpec") -> "MultCharSpec":
        return self * other.inverse()

    def precompose(self, target: QuadAlgebra, to_source, alpha_image) -> "MultCharSpec":
        """The character x -> self(to_source(x)) on ``target``.

        ``to_source`` is an algebra isomorphism target -> source and
        ``alpha_image`` the parameter of the new character.
        """
        if target.kind == SPLIT:
            gen_phase = []
            unif = []
            for coord in (0, 1):
                pair_zeta = [1, 1]
                pair_zeta[coord] = teichmuller(target.ctx, target.teichmuller_table()[0])
                zeta = target.from_pair(*pair_zeta)
                gen_phase.append(self(to_source(zeta)).t * (target.q - 1))
                pair_pi = [1, 1]
                pair_pi[coord] = target.ctx.uniformizer
                unif.append(self(to_source(target.from_pair(*pair_pi))))
            tame = tuple(_as_int(t) for t in gen_phase)
            return MultCharSpec(target, alpha_image, tame, tuple(unif))
        zeta = target.teichmuller_generator()
        tame = _as_int(self(to_source(zeta)).t * (target.residue_size - 1))
        unif = self(to_source(target.uniformizer()))
        return MultCharSpec(target, alpha_image, tame, unif)

    def conjugate(self) -> "MultCharSpec":
        """x -> self(conj x)."""
        alpha = None if self.alpha is None else self.alpha.conj()
        return self.precompose(self.algebra, lambda x: x.conj(), alpha)

    def transport(self, target: QuadAlgebra) -> "MultCharSpec":
        """The same character seen on an isomorphic algebra."""
        if target is self.algebra:
            return self
        scale = target.transport_scale(self.algebra)
        back = lambda x: QuadElem(self.algebra, x.a, x.b * scale)
        alpha = None
        if self.alpha is not None:
            alpha = QuadElem(target, self.alpha.a, self.alpha.b / scale)
        return self.precompose(target, back, alpha)

    def twist_by_base(self, mu: BaseChar) -> "MultCharSpec":
        """self * (mu o Nm)."""
        return self * lift_base_char(self.algebra, mu)

    # -- invariants ---------------------------------------------------------------
    def conductor(self) -> int:
        if self._conductor is None:
            self._conductor = conductor_of(self)
        return self._conductor

    def coordinate_conductors(self) -> tuple[int, int]:
        """Split algebra only: conductors of the two coordinate characters."""
        if self.algebra.kind != SPLIT:
            raise ValueError("coordinate conductors exist only for split algebras")
        return tuple(_scan_conductor(self, coords=(c,)) for c in (0, 1))

    def central_phase(self, x: PadicNumber) -> Phase:
        return self(self.algebra.scalar(x))

    def is_trivial(self) -> bool:
        return self.conductor() == 0 and (
            all(u.is_zero() for u in self.unif_phase) if self.algebra.kind == SPLIT
            else self.unif_phase.is_zero())


def _as_int(t: Fraction) -> int:
    t = Fraction(t)
    if t.denominator != 1:
        raise ValueError(f"expected an integral tame exponent, got {t}")
    return int(t)


def _add_opt(x, y):
    if x is None:
        return y
    if y is None:
        return x
    return x + y


def lift_base_char(algebra: QuadAlgebra, mu: BaseChar) -> MultCharSpec:
    """mu o Nm as a character of K^x."""
    ctx = algebra.ctx
    alpha = None if mu.alpha is None else algebra.scalar(mu.alpha)
    if algebra.kind == SPLIT:
        # Nm(x1, x2) = x1*x2, so each coordinate sees mu
        return MultCharSpec(algebra, alpha, (mu.tame_exp, mu.tame_exp),
                            (mu.unif_phase, mu.unif_phase))
    zeta = algebra.teichmuller_generator()
    tame = _as_int(mu(zeta.norm()).t * (algebra.residue_size - 1))
    unif = mu(algebra.uniformizer().norm())
    return MultCharSpec(algebra, alpha, tame, unif)


def char_eval(chi: MultCharSpec, x: QuadElem) -> Phase:
    """chi(uniformizer^m zeta (1+u)) = m*unif + tame*ind(zeta)/(q_K-1) + psi_K(alpha log(1+u))."""
    alg = chi.algebra
    if x.alg is not alg:
        raise ValueError("element and character live on different algebras")
    m, idx, one_plus = alg.decompose(x)
    if alg.kind == SPLIT:
        order = alg.q - 1
        phase = chi.unif_phase[0] * m[0] + chi.unif_phase[1] * m[1]
        tame = chi.tame_exp[0] * idx[0] + chi.tame_exp[1] * idx[1]
        if tame:
            phase = phase + Phase(Fraction(tame, order))
    else:
        phase = chi.unif_phase * m
        if chi.tame_exp and idx:
            phase = phase + Phase(Fraction(chi.tame_exp * idx, alg.residue_size - 1))
    return phase + chi.wild_phase(one_plus)


def _level_generators(alg: QuadAlgebra, k: int, coords=(0, 1)):
    """Elements generating U_K(k)/U_K(k+1) (k >= 1) or the Teichmüller part (k = 0)."""
    ctx = alg.ctx
    if alg.kind == SPLIT:
        gens = []
        for c in coords:
            pair = [ctx.one, ctx.one]
            if k == 0:
                pair[c] = teichmuller(ctx, alg.teichmuller_table()[0])
            else:
                pair[c] = ctx.one + ctx.power_of_p(k)
            gens.append(alg.from_pair(*pair))
        return gens
    if k == 0:
        return [alg.teichmuller_generator()]
    step = alg.uniformizer_power(k)
    gens = [alg.one + step]
    if alg.kind == INERT:
        gens.append(alg.one + step * alg.sqrt_D)
    return gens


def _scan_conductor(chi: MultCharSpec, coords=(0, 1)) -> int:
    alg = chi.algebra
    if chi.alpha is not None:
        top = alg.psi_conductor - alg.valuation(chi.alpha) + 1
    else:
        top = 1
    top = max(top, 1)
    if top > alg.ctx.N * alg.e - 1:
        raise PrecisionExhausted("conductor scan exceeds working precision")
    for k in range(top, -1, -1):
        for g in _level_generators(alg, k, coords):
            if not chi(g).is_zero():
                return k + 1
    return 0


def conductor_of(chi: MultCharSpec) -> int:
    """Smallest c with chi trivial on U_K(c), by direct testing of level generators."""
    return _scan_conductor(chi)


def char_is_minimal(theta: MultCharSpec) -> bool:
    if theta.conductor() < 2:
        raise ConductorTooSmall("minimality needs conductor >= 2")
    return theta.algebra.is_minimal_element(theta.alpha)


def check_central(chi: MultCharSpec, omega, samples) -> None:
    """Raise CentralMismatch unless chi agrees with ``omega`` on the sampled x in F^x."""
    for x in samples:
        if chi.central_phase(x) != omega(x):
            raise CentralMismatch(f"central characters differ at {x!r}")


def small_conductor_alpha(algebra: QuadAlgebra, c: int) -> QuadElem:
    """Representative alpha with v_K(alpha) = -c + c(psi_K) for characters with c <= 1."""
    return algebra.uniformizer_power(algebra.psi_conductor - c)


def alpha_for(chi: MultCharSpec) -> QuadElem:
    """The wild parameter, or the fixed representative when the conductor is at most 1."""
    if chi.conductor() <= 1:
        return small_conductor_alpha(chi.algebra, chi.conductor())
    return chi.alpha
