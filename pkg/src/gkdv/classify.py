"""Group classification: which Lie symmetry extension an equation admits."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

from .errors import InputError, NjEqualsOne, NotDilatation
from .model import (
    NJ_TOL,
    AffinePower,
    Constant,
    EquivParams,
    Exponential,
    GaugeResult,
    GKdVEquation,
    Polynomial,
    gauge_to_zero_damping,
    normalize_g,
)


@dataclass(frozen=True)
class Generator:
    """Gamma = (tau_t t + tau_1) d_t + (xi_x x + xi_1) d_x + eta_u u d_u."""

    tau_t: float = 0.0
    tau_1: float = 0.0
    xi_x: float = 0.0
    xi_1: float = 0.0
    eta_u: float = 0.0

    def __post_init__(self):
        if not any((self.tau_t, self.tau_1, self.xi_x, self.xi_1, self.eta_u)):
            raise InputError("generator with all coefficients zero")

    def as_dict(self) -> dict:
        return {"tau_t": self.tau_t, "tau_1": self.tau_1, "xi_x": self.xi_x,
                "xi_1": self.xi_1, "eta_u": self.eta_u}

    def __str__(self):
        def lin(a, b, var):
            parts = []
            if a:
                parts.append(f"{a:g}{var}")
            if b:
                parts.append(f"{b:g}")
            return "+".join(parts)

        terms = []
        for a, b, var, d in ((self.tau_t, self.tau_1, "t", "∂t"), (self.xi_x, self.xi_1, "x", "∂x")):
            c = lin(a, b, var)
            if c:
                terms.append(f"({c}){d}" if "+" in c else f"{c}{d}")
        if self.eta_u:
            terms.append(f"{self.eta_u:g}u∂u")
        return " + ".join(terms).replace("+ -", "- ")


X_TRANSLATION = Generator(xi_1=1.0)
T_TRANSLATION = Generator(tau_1=1.0)


@dataclass(frozen=True)
class Kernel:
    name = "kernel"


@dataclass(frozen=True)
class PowerG:
    rho: float
    eps: float
    name = "power"

    def __post_init__(self):
        if self.rho == 0:
            raise InputError("PowerG needs rho != 0")


@dataclass(frozen=True)
class ExpG:
    eps: float
    name = "exp"


@dataclass(frozen=True)
class ConstG:
    eps: float
    name = "const"


SymmetryClass = Union[Kernel, PowerG, ExpG, ConstG]


class ReductionFamily(str, Enum):
    """Inequivalent one-dimensional subalgebras usable for reduction."""

    G1 = "g1"
    G1_1 = "g1.1"
    G1_2 = "g1.2^a"
    G2 = "g2"
    G3_1 = "g3.1^sigma"
    G3_2 = "g3.2"

    @property
    def reduction_case(self) -> int | None:
        """Case id for :func:`gkdv.reduce.catalog_reduction`; g1 only gives constants."""
        return {"g1.1": 1, "g1.2^a": 2, "g2": 3, "g3.1^sigma": 4, "g3.2": 5}.get(self.value)


def class_generators(cls: SymmetryClass, n: float) -> list[Generator]:
    if isinstance(cls, Kernel):
        return [X_TRANSLATION]
    if isinstance(cls, PowerG):
        r = cls.rho
        return [X_TRANSLATION, Generator(tau_t=3 * n, xi_x=(r + 1) * n, eta_u=r - 2)]
    if isinstance(cls, ExpG):
        return [X_TRANSLATION, Generator(tau_1=3 * n, xi_x=n, eta_u=1.0)]
    if isinstance(cls, ConstG):
        return [X_TRANSLATION, T_TRANSLATION, Generator(tau_t=3 * n, xi_x=n, eta_u=-2.0)]
    raise TypeError(cls)


def reduction_menu(cls: SymmetryClass) -> list[ReductionFamily]:
    if isinstance(cls, Kernel):
        return [ReductionFamily.G1]
    if isinstance(cls, PowerG):
        second = ReductionFamily.G1_2 if cls.rho == -1 else ReductionFamily.G1_1
        return [ReductionFamily.G1, second]
    if isinstance(cls, ExpG):
        return [ReductionFamily.G1, ReductionFamily.G2]
    return [ReductionFamily.G1, ReductionFamily.G3_1, ReductionFamily.G3_2]


@dataclass(frozen=True)
class ClassificationReport:
    symmetry_class: SymmetryClass
    generators: list
    gauge: GaugeResult
    normalization: EquivParams
    reduction_menu: list
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        c = self.symmetry_class
        return {
            "class": c.name,
            "rho": getattr(c, "rho", None),
            "epsilon": getattr(c, "eps", None),
            "generators": [g.as_dict() for g in self.generators],
            "reduction_menu": [r.value for r in self.reduction_menu],
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        c = self.symmetry_class
        eps, rho = getattr(c, "eps", None), getattr(c, "rho", None)
        head = {"kernel": "kernel (no extension)",
                "power": f"g = {eps:g} t^{rho:g}" if rho is not None else "",
                "exp": f"g = {eps:g} e^t" if eps is not None else "",
                "const": f"g = {eps:g}" if eps is not None else ""}[c.name]
        lines = [f"class: {c.name}  [{head}]",
                 f"gauged equation: {str(self.gauge.eq0).replace(chr(10), ', ')}",
                 f"time map: {self.gauge.time_map}",
                 f"normalization: {self.normalization}",
                 "generators:"]
        lines += [f"  {g}" for g in self.generators]
        lines.append("reduction menu: " + ", ".join(r.value for r in self.reduction_menu))
        lines += [f"warning: {w}" for w in self.warnings]
        return "\n".join(lines) + "\n"


def classify(eq: GKdVEquation) -> ClassificationReport:
    """Gauge h to zero, normalize g, and match the normalized form against the extension cases."""
    gauge = gauge_to_zero_damping(eq)
    eq_n, params = normalize_g(gauge.eq0)
    n, g = eq_n.n, eq_n.g
    if isinstance(g, Constant):
        cls = ConstG(g.c)
    elif isinstance(g, AffinePower):
        cls = PowerG(g.rho, g.lam)
    elif isinstance(g, Exponential):
        cls = ExpG(g.lam)
    else:
        assert isinstance(g, Polynomial)
        cls = Kernel()
    warnings = []
    if n == 1:
        warnings.append("n = 1: the class admits a wider equivalence group; "
                        "the classification is relative to the n != 1 group")
    return ClassificationReport(cls, class_generators(cls, n), gauge, params,
                                reduction_menu(cls), warnings)


def generators_for_damped_power_law(n: float, j: float, rho: float, lam: float = 1.0) -> list[Generator]:
    """Symmetries of u_t + u^n u_x + (j/t) u + lam t^(rho(1-nj)-nj) u_xxx = 0."""
    if n == 0 or lam == 0:
        raise InputError("n and lam must be nonzero")
    nj = n * j
    if abs(nj - 1) <= NJ_TOL:
        raise NjEqualsOne(f"n*j = {nj}")
    return [X_TRANSLATION,
            Generator(tau_t=3 * n / (1 - nj), xi_x=n * (rho + 1), eta_u=rho - 2 - 3 * nj / (1 - nj))]


def check_bc_invariance(gen: Generator, q_exponent: float) -> bool:
    """Whether u(0,t) = gamma t^q_exponent is invariant under a dilatation generator."""
    if gen.tau_t == 0 or gen.tau_1 != 0 or gen.xi_1 != 0:
        raise NotDilatation(f"{gen} is not a pure dilatation")
    return abs(q_exponent - gen.eta_u / gen.tau_t) <= 1e-12 * max(1.0, abs(q_exponent))
