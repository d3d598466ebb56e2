"""Equations of the class u_t + u^n u_x + h(t) u + g(t) u_xxx = 0.

Coefficient functions g and h are carried as tagged closed forms so that
gauge and equivalence transformations can be applied exactly, without a
computer algebra system.  Every transformation below maps a closed form to
another closed form or raises :class:`UnrepresentableGauge`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Union

import numpy as np
from numpy.polynomial import Polynomial as _NpPoly

from .errors import (
    DomainError,
    InputError,
    NjEqualsOne,
    RangeError,
    UnrepresentableGauge,
    UnsupportedDampingForm,
)

NJ_TOL = 1e-12


def _is_int(x: float) -> bool:
    return float(x).is_integer()


# ----------------------------------------------------------------------------
# coefficient forms
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Zero:
    def __str__(self):
        return "zero"


@dataclass(frozen=True)
class Constant:
    c: float

    def __str__(self):
        return f"const:{self.c!r}"


@dataclass(frozen=True)
class AffinePower:
    """lam * (alpha*t + beta)**rho"""

    lam: float
    alpha: float
    beta: float
    rho: float

    def __post_init__(self):
        if self.lam == 0 or self.alpha == 0 or self.rho == 0:
            raise InputError(f"AffinePower needs lam, alpha, rho != 0, got {self}")

    def __str__(self):
        return f"power:{self.lam!r},{self.alpha!r},{self.beta!r},{self.rho!r}"


@dataclass(frozen=True)
class Exponential:
    """lam * exp(k*t)"""

    lam: float
    k: float

    def __post_init__(self):
        if self.lam == 0 or self.k == 0:
            raise InputError(f"Exponential needs lam, k != 0, got {self}")

    def __str__(self):
        return f"exp:{self.lam!r},{self.k!r}"


@dataclass(frozen=True)
class PowerLawDamping:
    """j / t"""

    j: float

    def __post_init__(self):
        if self.j == 0:
            raise InputError("PowerLawDamping needs j != 0")

    def __str__(self):
        return f"damping:{self.j!r}"


@dataclass(frozen=True)
class Polynomial:
    """sum_k coeffs[k] * t**k, ascending powers.

    Used to express coefficients outside the power/exponential families,
    which is where the kernel case of the classification lives.
    """

    coeffs: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        while len(c) > 1 and c[-1] == 0.0:
            c = c[:-1]
        if not c or all(v == 0.0 for v in c):
            raise InputError("Polynomial must not vanish identically")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __str__(self):
        return "poly:" + ",".join(repr(v) for v in self.coeffs)


CoefficientFunction = Union[Zero, Constant, AffinePower, Exponential, PowerLawDamping, Polynomial]


def affine_power(lam: float, alpha: float, beta: float, rho: float) -> CoefficientFunction:
    """Build lam*(alpha t + beta)**rho in canonical form.

    rho == 0 collapses to a constant and a pure power with alpha > 0 is
    stored as (lam * alpha**rho) * t**rho.
    """
    if rho == 0:
        return Constant(lam)
    if beta == 0 and alpha > 0 and alpha != 1:
        return AffinePower(lam * alpha**rho, 1.0, 0.0, rho)
    return AffinePower(lam, alpha, beta, rho)


def shifted_power_form(p: Polynomial, rtol: float = 1e-12) -> CoefficientFunction | None:
    """Return the equivalent Constant/AffinePower if ``p`` is lam*(t - t0)**d."""
    c = p.coeffs
    d = p.degree
    if d == 0:
        return Constant(c[0])
    lam = c[-1]
    t0 = -c[-2] / (d * lam)
    expected = [lam * comb(d, k) * (-t0) ** (d - k) for k in range(d + 1)]
    scale = max(abs(v) for v in c)
    if all(abs(e - v) <= rtol * scale for e, v in zip(expected, c)):
        return affine_power(lam, 1.0, -t0, float(d))
    return None


def eval_coefficient(f: CoefficientFunction, t):
    """Evaluate a coefficient form at ``t`` (scalar or array)."""
    scalar = np.ndim(t) == 0
    t = np.asarray(t, dtype=float)
    if isinstance(f, Zero):
        out = np.zeros_like(t)
    elif isinstance(f, Constant):
        out = np.full_like(t, f.c)
    elif isinstance(f, AffinePower):
        base = f.alpha * t + f.beta
        if _is_int(f.rho):
            if f.rho < 0 and np.any(base == 0):
                raise DomainError(f"{f} is singular where alpha*t+beta = 0")
        elif np.any(base <= 0):
            raise DomainError(f"{f} with non-integer exponent needs alpha*t+beta > 0")
        out = f.lam * base**f.rho
    elif isinstance(f, Exponential):
        out = f.lam * np.exp(f.k * t)
    elif isinstance(f, PowerLawDamping):
        if np.any(t <= 0):
            raise DomainError("j/t is defined for t > 0 only")
        out = f.j / t
    elif isinstance(f, Polynomial):
        out = np.polynomial.polynomial.polyval(t, f.coeffs)
    else:
        raise TypeError(f"not a coefficient form: {f!r}")
    return float(out) if scalar else out


def damping_antiderivative(h: CoefficientFunction, t):
    """Fixed antiderivative of h used throughout: c*t for const, j*ln t for j/t."""
    if isinstance(h, Zero):
        return np.zeros_like(np.asarray(t, dtype=float)) if np.ndim(t) else 0.0
    if isinstance(h, Constant):
        return h.c * np.asarray(t, dtype=float) if np.ndim(t) else h.c * t
    if isinstance(h, PowerLawDamping):
        if np.any(np.asarray(t) <= 0):
            raise DomainError("j/t is defined for t > 0 only")
        return h.j * np.log(t)
    raise UnsupportedDampingForm(f"no closed-form antiderivative for h = {h}")


@dataclass(frozen=True)
class GKdVEquation:
    n: float
    g: CoefficientFunction
    h: CoefficientFunction = field(default_factory=Zero)

    def __post_init__(self):
        if self.n == 0:
            raise InputError("n must be nonzero")
        if isinstance(self.g, (Zero, PowerLawDamping)):
            raise InputError(f"g = {self.g} is not an admissible dispersion coefficient")
        if isinstance(self.g, Constant) and self.g.c == 0:
            raise InputError("g must not vanish")

    def __str__(self):
        return f"n={self.n!r}\ng={self.g}\nh={self.h}"


# ----------------------------------------------------------------------------
# equivalence group G~_0 of the undamped class
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivParams:
    """t~ = eps1*eps3**(-n)*t + eps0, x~ = eps1*x + eps2, u~ = eps3*u."""

    eps0: float = 0.0
    eps1: float = 1.0
    eps2: float = 0.0
    eps3: float = 1.0

    def __post_init__(self):
        if self.eps1 == 0 or self.eps3 == 0:
            raise InputError("eps1 and eps3 must be nonzero")

    def is_identity(self, tol: float = 0.0) -> bool:
        return (abs(self.eps0) <= tol and abs(self.eps1 - 1) <= tol
                and abs(self.eps2) <= tol and abs(self.eps3 - 1) <= tol)


def _eps3_power(eps3: float, n: float) -> float:
    if eps3 < 0 and not _is_int(n):
        raise DomainError("negative eps3 needs an integer power n")
    return eps3**n


def compose_params(first: EquivParams, then: EquivParams, n: float) -> EquivParams:
    """Parameters of ``then`` applied after ``first``."""
    q3n = _eps3_power(then.eps3, n)
    return EquivParams(
        eps0=then.eps1 / q3n * first.eps0 + then.eps0,
        eps1=then.eps1 * first.eps1,
        eps2=then.eps1 * first.eps2 + then.eps2,
        eps3=then.eps3 * first.eps3,
    )


def transform_point(p: EquivParams, n: float, t, x, u):
    """Image of (t, x, u) under the transformation."""
    s = _eps3_power(p.eps3, n)
    return p.eps1 / s * t + p.eps0, p.eps1 * x + p.eps2, p.eps3 * u


def apply_scaling_equivalence(eq0: GKdVEquation, p: EquivParams) -> GKdVEquation:
    """Transform an undamped equation: g~(t~) = eps1^2 eps3^n g((t~-eps0) eps3^n / eps1)."""
    if not isinstance(eq0.h, Zero):
        raise UnsupportedDampingForm("scaling equivalence acts on the h = 0 class; gauge first")
    n = eq0.n
    s = _eps3_power(p.eps3, n)
    a = s / p.eps1  # t = a*(t~ - eps0)
    K = p.eps1**2 * s
    g = eq0.g
    if isinstance(g, Constant):
        gt = Constant(K * g.c)
    elif isinstance(g, AffinePower):
        gt = affine_power(K * g.lam, g.alpha * a, g.beta - g.alpha * a * p.eps0, g.rho)
    elif isinstance(g, Exponential):
        gt = Exponential(K * g.lam * math.exp(-g.k * a * p.eps0), g.k * a)
    elif isinstance(g, Polynomial):
        composed = _NpPoly(g.coeffs)(_NpPoly([-a * p.eps0, a]))
        gt = Polynomial(tuple(K * composed.coef))
    else:  # pragma: no cover - excluded by GKdVEquation
        raise UnrepresentableGauge(f"cannot transform g = {g}")
    if type(gt) is not type(g) and not (isinstance(g, AffinePower) and isinstance(gt, Constant)):
        raise UnrepresentableGauge(f"shift/scale left the closed family: {g} -> {gt}")
    return GKdVEquation(n, gt, Zero())


def normalize_g(eq0: GKdVEquation) -> tuple[GKdVEquation, EquivParams]:
    """Bring g to Constant(+-1), AffinePower(+-1, 1, 0, rho) or Exponential(+-1, 1).

    Returns the normalized equation together with the parameters that realize
    it through :func:`apply_scaling_equivalence`.  Polynomials that are not a
    shifted power are returned unchanged with identity parameters.
    """
    if not isinstance(eq0.h, Zero):
        raise UnsupportedDampingForm("normalize_g expects h = 0; gauge first")
    n, g = eq0.n, eq0.g
    if isinstance(g, Polynomial):
        form = shifted_power_form(g)
        if form is None:
            return eq0, EquivParams()
        g = form
    sign = 1.0
    if isinstance(g, Constant):
        sign = math.copysign(1.0, g.c)
        p = EquivParams(eps3=abs(g.c) ** (-1.0 / n))
        target = Constant(sign)
    elif isinstance(g, AffinePower):
        sign = math.copysign(1.0, g.lam)
        A = abs(g.lam) * abs(g.alpha) ** g.rho
        if g.rho != 2:
            e3 = 1.0
            e1 = A ** (-1.0 / (2.0 - g.rho))
        else:
            e1 = 1.0
            e3 = A ** (-1.0 / (3.0 * n))
        # negative alpha needs time reversal, realized through the sign of eps1
        e1 = math.copysign(e1, g.alpha)
        e0 = g.beta * e1 / (g.alpha * e3**n)
        p = EquivParams(eps0=e0, eps1=e1, eps3=e3)
        target = AffinePower(sign, 1.0, 0.0, g.rho)
    elif isinstance(g, Exponential):
        sign = math.copysign(1.0, g.lam)
        p = EquivParams(eps0=math.log(g.k**2 * abs(g.lam)), eps1=g.k)
        target = Exponential(sign, 1.0)
    else:  # pragma: no cover
        raise UnrepresentableGauge(f"cannot normalize g = {g}")
    if _already_normal(g):
        p = EquivParams()
    return GKdVEquation(n, target, Zero()), p


def _already_normal(g) -> bool:
    if isinstance(g, Constant):
        return abs(g.c) == 1
    if isinstance(g, AffinePower):
        return abs(g.lam) == 1 and g.alpha == 1 and g.beta == 0
    if isinstance(g, Exponential):
        return abs(g.lam) == 1 and g.k == 1
    return False


# ----------------------------------------------------------------------------
# gauge h -> 0
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class IdentityMap:
    def __call__(self, t):
        return t

    def inverse(self, tt):
        return tt


@dataclass(frozen=True)
class ExpMap:
    """t~ = (1 - exp(-n c t)) / (n c)"""

    n: float
    c: float

    def __call__(self, t):
        nc = self.n * self.c
        return -np.expm1(-nc * np.asarray(t, dtype=float)) / nc if np.ndim(t) else -math.expm1(-nc * t) / nc

    def inverse(self, tt):
        nc = self.n * self.c
        arg = -nc * np.asarray(tt, dtype=float)
        if np.any(arg <= -1):
            bound = 1.0 / nc
            raise RangeError(f"t~ must satisfy n*c*t~ < 1 (t~ {'<' if nc > 0 else '>'} {bound})")
        out = -np.log1p(arg) / nc
        return float(out) if np.ndim(tt) == 0 else out


@dataclass(frozen=True)
class PowerMap:
    """t~ = t**(1 - n j) / (1 - n j), t > 0"""

    n: float
    j: float

    def __post_init__(self):
        if abs(self.n * self.j - 1) <= NJ_TOL:
            raise NjEqualsOne("n*j = 1: the time map degenerates to a logarithm")

    def __call__(self, t):
        e = 1 - self.n * self.j
        if np.any(np.asarray(t) <= 0):
            raise DomainError("power time map is defined for t > 0")
        return np.asarray(t, dtype=float) ** e / e if np.ndim(t) else t**e / e

    def inverse(self, tt):
        e = 1 - self.n * self.j
        base = e * np.asarray(tt, dtype=float)
        if np.any(base <= 0):
            raise RangeError(f"t~ must have the sign of 1 - n j = {e}")
        out = base ** (1.0 / e)
        return float(out) if np.ndim(tt) == 0 else out


@dataclass(frozen=True)
class AffineMap:
    a: float
    b: float

    def __post_init__(self):
        if self.a == 0:
            raise InputError("affine time map needs a != 0")

    def __call__(self, t):
        return self.a * t + self.b

    def inverse(self, tt):
        return (tt - self.b) / self.a


TimeMap = Union[IdentityMap, ExpMap, PowerMap, AffineMap]


def invert_time_map(tm: TimeMap, tt):
    """Closed-form inverse of a time map; raises RangeError outside its range."""
    return tm.inverse(tt)


@dataclass(frozen=True)
class UScale:
    """mu(t) = exp(int h dt): kind 'identity', 'exp' (e^{rate t}) or 'power' (t^rate)."""

    kind: str = "identity"
    rate: float = 0.0

    def __call__(self, t):
        if self.kind == "identity":
            return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0
        if self.kind == "exp":
            return np.exp(self.rate * np.asarray(t, dtype=float)) if np.ndim(t) else math.exp(self.rate * t)
        return np.asarray(t, dtype=float) ** self.rate if np.ndim(t) else t**self.rate


@dataclass(frozen=True)
class GaugeResult:
    eq0: GKdVEquation
    time_map: TimeMap
    u_scale: UScale

    def transform_point(self, t, x, u):
        """(t, x, u) -> (t~, x, mu(t) u)."""
        return self.time_map(t), x, self.u_scale(t) * u


def gauge_to_zero_damping(eq: GKdVEquation) -> GaugeResult:
    """Remove h by t~ = int exp(-n int h) dt, u~ = exp(int h) u."""
    n, g, h = eq.n, eq.g, eq.h
    if isinstance(h, Zero) or (isinstance(h, Constant) and h.c == 0):
        return GaugeResult(GKdVEquation(n, g, Zero()), IdentityMap(), UScale())

    if isinstance(h, Constant):
        nc = n * h.c
        if isinstance(g, Constant):
            gt = affine_power(g.c, -nc, 1.0, -1.0)
        elif isinstance(g, Exponential):
            gt = affine_power(g.lam, -nc, 1.0, -(g.k + nc) / nc)
        else:
            raise UnrepresentableGauge(f"h = {h} with g = {g} leaves the closed family")
        return GaugeResult(GKdVEquation(n, gt, Zero()), ExpMap(n, h.c), UScale("exp", h.c))

    if isinstance(h, PowerLawDamping):
        nj = n * h.j
        if abs(nj - 1) <= NJ_TOL:
            raise NjEqualsOne(f"n*j = {nj}: gauge time map degenerates")
        e = 1 - nj
        if isinstance(g, Constant):
            lam, rho = g.c, 0.0
        elif isinstance(g, AffinePower) and g.beta == 0 and g.alpha > 0:
            lam, rho = g.lam * g.alpha**g.rho, g.rho
        else:
            raise UnrepresentableGauge(f"h = {h} with g = {g} leaves the closed family")
        gt = affine_power(lam, e, 0.0, (rho + nj) / e)
        return GaugeResult(GKdVEquation(n, gt, Zero()), PowerMap(n, h.j), UScale("power", h.j))

    raise UnsupportedDampingForm(f"h = {h} is not one of zero, const, j/t")


# ----------------------------------------------------------------------------
# text format
# ----------------------------------------------------------------------------

def parse_number(text: str) -> float:
    """Parse a float, also accepting fractions like ``-1/3``."""
    text = text.strip()
    try:
        return float(text)
    except ValueError:
        try:
            return float(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a number: {text!r}") from exc


def parse_coefficient(text: str) -> CoefficientFunction:
    """Parse ``zero | const:c | power:lam,alpha,beta,rho | exp:lam,k | damping:j | poly:c0,c1,...``."""
    text = text.strip()
    if text == "zero":
        return Zero()
    kind, sep, args = text.partition(":")
    if not sep:
        raise InputError(f"bad coefficient spec {text!r}")
    vals = [parse_number(v) for v in args.split(",") if v.strip()]
    arity = {"const": 1, "power": 4, "exp": 2, "damping": 1}
    kind = kind.strip()
    if kind == "poly":
        return Polynomial(tuple(vals))
    if kind not in arity:
        raise InputError(f"unknown coefficient kind {kind!r}")
    if len(vals) != arity[kind]:
        raise InputError(f"{kind} takes {arity[kind]} values, got {len(vals)}")
    if kind == "const":
        return Constant(vals[0])
    if kind == "power":
        return AffinePower(*vals)
    if kind == "exp":
        return Exponential(*vals)
    return PowerLawDamping(vals[0])


def parse_equation(text: str) -> GKdVEquation:
    """Parse a key=value block with keys n, g and optional h (default zero).

    Entries are separated by newlines, semicolons or whitespace; ``#`` starts
    a comment.
    """
    fields = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for item in line.replace(";", " ").split():
            key, sep, value = item.partition("=")
            if not sep:
                raise InputError(f"expected key=value, got {item!r}")
            fields[key.strip()] = value.strip()
    unknown = set(fields) - {"n", "g", "h"}
    if unknown:
        raise InputError(f"unknown equation keys: {sorted(unknown)}")
    if "n" not in fields or "g" not in fields:
        raise InputError("equation needs n= and g=")
    return GKdVEquation(parse_number(fields["n"]), parse_coefficient(fields["g"]),
                        parse_coefficient(fields.get("h", "zero")))


def format_equation(eq: GKdVEquation) -> str:
    return str(eq) + "\n"
