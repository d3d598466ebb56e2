"""Similarity ansatzes and reduction of IBVPs to third-order ODE IVPs.

All reduced equations are carried in the generic form

    a3 phi''' + a2 phi'' + (p phi^m + q omega + s) phi' + r phi = 0,
    phi(0) = gamma, phi'(0) = phi''(0) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace as _replace
from typing import Optional, Union

import numpy as np

from .classify import Generator, check_bc_invariance, generators_for_damped_power_law
from .errors import (
    BadDomain,
    BadParameters,
    IncompatibleBoundaryExponent,
    InputError,
    NjEqualsOne,
    UnknownCase,
    UnsupportedClass,
    UnsupportedGenerator,
)
from .model import NJ_TOL, AffinePower, Constant, GKdVEquation, PowerLawDamping, Zero, parse_number

# ----------------------------------------------------------------------------
# ansatzes: u = prefactor(t) * phi(omega(x, t))
# ----------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerType:
    """u = t^pu phi(x t^-pw)"""

    pu: float
    pw: float

    def omega(self, x, t):
        return x * t ** (-self.pw)

    def prefactor(self, t):
        return t**self.pu

    def __str__(self):
        return f"power:{self.pu!r},{self.pw!r}"


@dataclass(frozen=True)
class ExpType:
    """u = e^(ru t) phi(x e^(-rw t))"""

    ru: float
    rw: float

    def omega(self, x, t):
        return x * np.exp(-self.rw * t)

    def prefactor(self, t):
        return np.exp(self.ru * t)

    def __str__(self):
        return f"exp:{self.ru!r},{self.rw!r}"


@dataclass(frozen=True)
class LogShift:
    """u = t^pu phi(x - shift ln t)"""

    pu: float
    shift: float

    def omega(self, x, t):
        return x - self.shift * np.log(t)

    def prefactor(self, t):
        return t**self.pu

    def __str__(self):
        return f"logshift:{self.pu!r},{self.shift!r}"


@dataclass(frozen=True)
class TravelingWave:
    """u = phi(x - sigma t)"""

    sigma: float

    def omega(self, x, t):
        return x - self.sigma * t

    def prefactor(self, t):
        return np.ones_like(np.asarray(t, dtype=float)) if np.ndim(t) else 1.0

    def __str__(self):
        return f"tw:{self.sigma!r}"


Ansatz = Union[PowerType, ExpType, LogShift, TravelingWave]

NEEDS_POSITIVE_T = (PowerType, LogShift)


def build_ansatz(gen: Generator) -> Ansatz:
    """Solve the characteristic system dt/tau = dx/xi = du/eta for a generator."""
    tt, t1, xx, x1, eu = gen.tau_t, gen.tau_1, gen.xi_x, gen.xi_1, gen.eta_u
    if tt != 0 and t1 == 0:
        if x1 == 0:
            return PowerType(pu=eu / tt, pw=xx / tt)
        if xx == 0:
            return LogShift(pu=eu / tt, shift=x1 / tt)
    elif tt == 0 and t1 != 0:
        if x1 == 0 and xx != 0:
            return ExpType(ru=eu / t1, rw=xx / t1)
        if xx == 0 and eu == 0:
            return TravelingWave(sigma=x1 / t1)
    raise UnsupportedGenerator(f"no ansatz family for {gen}")


def parse_ansatz(text: str) -> Optional[Ansatz]:
    text = text.strip()
    if text in ("", "none"):
        return None
    kind, _, args = text.partition(":")
    vals = [parse_number(v) for v in args.split(",")]
    table = {"power": (PowerType, 2), "exp": (ExpType, 2), "logshift": (LogShift, 2), "tw": (TravelingWave, 1)}
    if kind not in table or len(vals) != table[kind][1]:
        raise InputError(f"bad ansatz spec {text!r}")
    return table[kind][0](*vals)


# ----------------------------------------------------------------------------
# reduced ODE and IVP
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class GenericODE:
    a3: float
    a2: float
    p: float
    m: float
    q: float
    s: float
    r: float

    def __post_init__(self):
        if self.a3 == 0:
            raise InputError("a3 must be nonzero")
        if self.p != 0 and self.m == 0:
            raise InputError("m must be nonzero when p != 0")

    def astuple(self) -> tuple:
        return (self.a3, self.a2, self.p, self.m, self.q, self.s, self.r)

    def rhs(self, omega, phi, dphi, ddphi):
        """phi''' solved from the ODE (real powers; caller guards the base)."""
        return -(self.a2 * ddphi + (self.p * phi**self.m + self.q * omega + self.s) * dphi
                 + self.r * phi) / self.a3


@dataclass(frozen=True)
class ReducedIVP:
    ode: GenericODE
    gamma: float
    domain: tuple
    ansatz: Optional[Ansatz] = None

    def __post_init__(self):
        a, b = self.domain
        if not a < b:
            raise BadDomain(f"domain needs a < b, got {self.domain}")
        object.__setattr__(self, "domain", (float(a), float(b)))

    @property
    def a(self) -> float:
        return self.domain[0]

    @property
    def b(self) -> float:
        return self.domain[1]

    def replace(self, **changes) -> "ReducedIVP":
        return _replace(self, **changes)

    def to_kv(self) -> str:
        o = self.ode
        lines = [f"a3={o.a3!r}", f"a2={o.a2!r}", f"p={o.p!r}", f"m={o.m!r}", f"q={o.q!r}",
                 f"s={o.s!r}", f"r={o.r!r}", f"gamma={self.gamma!r}", f"a={self.a!r}", f"b={self.b!r}",
                 f"ansatz={self.ansatz if self.ansatz is not None else 'none'}"]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_kv(cls, text: str) -> "ReducedIVP":
        kv = {}
        for line in text.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise InputError(f"expected key=value, got {line!r}")
            kv[key.strip()] = value.strip()
        try:
            ode = GenericODE(*(parse_number(kv[k]) for k in ("a3", "a2", "p", "m", "q", "s", "r")))
            return cls(ode, parse_number(kv["gamma"]), (parse_number(kv["a"]), parse_number(kv["b"])),
                       parse_ansatz(kv.get("ansatz", "none")))
        except KeyError as exc:
            raise InputError(f"missing key {exc.args[0]!r} in IVP block") from exc


def catalog_reduction(case_id: int, *, n: float, eps: float, rho: float | None = None,
                     a: float | None = None, sigma: float | None = None) -> GenericODE:
    """Reduced ODE of catalogue case 1-5.

    1: g = eps t^rho, dilatation; 2: g = eps t^-1, dilatation plus shift a;
    3: g = eps e^t; 4: g = eps, traveling wave with speed sigma;
    5: g = eps, dilatation.
    """

    def need(name, v):
        if v is None:
            raise BadParameters(f"case {case_id} needs {name}")
        return v

    if case_id == 1:
        rho = need("rho", rho)
        return GenericODE(eps, 0.0, 1.0, n, -(rho + 1) / 3, 0.0, (rho - 2) / (3 * n))
    if case_id == 2:
        # r = -1/n matches the ansatz prefactor t^(-1/n)
        return GenericODE(eps, 0.0, 1.0, n, 0.0, -need("a", a) / n, -1 / n)
    if case_id == 3:
        return GenericODE(eps, 0.0, 1.0, n, -1 / 3, 0.0, 1 / (3 * n))
    if case_id == 4:
        return GenericODE(eps, 0.0, 1.0, n, 0.0, -need("sigma", sigma), 0.0)
    if case_id == 5:
        return GenericODE(eps, 0.0, 1.0, n, -1 / 3, 0.0, -2 / (3 * n))
    raise UnknownCase(f"no reduction case {case_id!r}")


def power_law_reduction(n: float, j: float, rho: float, lam: float) -> tuple[GenericODE, PowerType]:
    """ODE and ansatz for u_t + u^n u_x + (j/t) u + lam t^(rho(1-nj)-nj) u_xxx = 0.

    j = 0 is the undamped catalogue case 1.
    """
    nj = n * j
    if abs(nj - 1) <= NJ_TOL:
        raise NjEqualsOne(f"n*j = {nj}")
    e = 1 - nj
    ode = GenericODE(lam, 0.0, 1.0, n, (rho + 1) * (nj - 1) / 3, 0.0, (rho - 2) * e / (3 * n))
    ansatz = PowerType(pu=(rho * e - nj - 2) / (3 * n), pw=(rho + 1) * e / 3)
    return ode, ansatz


def _pure_power(g) -> tuple[float, float]:
    """(lam, exponent) for g = lam t^exponent; raises UnsupportedClass otherwise."""
    if isinstance(g, Constant):
        return g.c, 0.0
    if isinstance(g, AffinePower) and g.beta == 0 and g.alpha > 0:
        return g.lam * g.alpha**g.rho, g.rho
    raise UnsupportedClass(f"IBVP reduction needs g = lam t^rho, got {g}")


def reduce_ibvp(eq: GKdVEquation, gamma: float, q_exponent: float, domain=(0.0, 50.0)) -> ReducedIVP:
    """Reduce the IBVP u(x,0)=0, u(0,t)=gamma t^q, u_x(0,t)=u_xx(0,t)=0 on x,t > 0."""
    if domain[0] != 0:
        raise BadDomain("boundary data live at x = 0, so the omega-domain must start at 0")
    if gamma == 0:
        raise BadParameters("gamma must be nonzero (q(t) is nonvanishing)")
    n = eq.n
    lam, g_exp = _pure_power(eq.g)
    if isinstance(eq.h, Zero):
        j = 0.0
        rho = g_exp
        gen = Generator(tau_t=3 * n, xi_x=(rho + 1) * n, eta_u=rho - 2)
    elif isinstance(eq.h, PowerLawDamping):
        j = eq.h.j
        nj = n * j
        if abs(nj - 1) <= NJ_TOL:
            raise NjEqualsOne(f"n*j = {nj}")
        rho = (g_exp + nj) / (1 - nj)
        gen = generators_for_damped_power_law(n, j, rho, lam)[1]
    else:
        raise UnsupportedClass(f"IBVP reduction needs h = 0 or j/t, got {eq.h}")
    if not check_bc_invariance(gen, q_exponent):
        raise IncompatibleBoundaryExponent(
            f"boundary exponent {q_exponent} is not invariant; need {gen.eta_u / gen.tau_t}")
    ode, ansatz = power_law_reduction(n, j, rho, lam)
    assert math.isclose(ansatz.pu, gen.eta_u / gen.tau_t, rel_tol=1e-12, abs_tol=1e-14)
    return ReducedIVP(ode, gamma, tuple(domain), ansatz)


def kdv_burgers_benchmark(n: float, alpha: float, beta: float, gamma: float, domain=(0.0, 50.0)) -> ReducedIVP:
    """beta F''' - F'' - alpha n F^(n-1) F' + eta F'/2 + F/(2n-2) = 0 with F(0) = gamma."""
    if n == 1 or beta == 0:
        raise BadParameters("benchmark needs n != 1 and beta != 0")
    ode = GenericODE(beta, -1.0, -alpha * n, n - 1, 0.5, 0.0, 1 / (2 * n - 2))
    return ReducedIVP(ode, gamma, tuple(domain), None)


def standard_ivp(n: float = 1.0, rho: float = 1.0, eps: float = -1.0, gamma: float = 0.5,
                 domain=(0.0, 50.0)) -> ReducedIVP:
    """The undamped IBVP reduction; defaults give the reference solution used throughout."""
    ode, ansatz = power_law_reduction(n, 0.0, rho, eps)
    return ReducedIVP(ode, gamma, tuple(domain), ansatz)
