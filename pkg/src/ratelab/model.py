"""Single-source/single-link rate control model.

The source adjusts its rate x from delayed feedback:

    dx/dt = kappa * (x(t)**-a - h * x(t-tau)**(b+1) * c(t-T)**-b)
    c(t)  = g(x(t))

which is the primal rate update kappa*(x*U'(x) - x_d*p(x_d, c_d)) for the
utility U(x) = -1/(a*x**a) and the price p(x, c) = h*(x/c)**b.  All powers
act on strictly positive bases; nonpositive bases raise ModelDomainError
rather than propagating NaN.
"""

import math
from dataclasses import dataclass

from .errors import CapacityExhaustedError, ModelDomainError

AFFINE = "affine"
CONSTANT = "constant"


@dataclass(frozen=True)
class ModelParams:
    """Scalar constants of the rate update law.

    ``tau`` is the total round-trip delay acting on the rate feedback and
    ``T_delay`` the (shorter) delay of the capacity information.  The delay
    ordering tau >= T_delay is *not* enforced at construction so that
    ``analysis.validate_assumptions`` can report it as a violation; every
    scenario entry point rejects configs that break it.
    """

    kappa: float
    a: float
    b: float
    tau: float
    T_delay: float
    h_gain: float = 1.0
    x_min: float = 1e-3
    x_max: float = 1e3

    def __post_init__(self):
        for name in ("kappa", "a", "b", "tau", "T_delay", "h_gain"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ModelDomainError(f"{name} must be a positive finite number, got {v!r}")
        if not (0 < self.x_min < self.x_max):
            raise ModelDomainError(
                f"rate bounds must satisfy 0 < x_min < x_max, got [{self.x_min}, {self.x_max}]"
            )

    @property
    def max_delay(self) -> float:
        return max(self.tau, self.T_delay)


@dataclass(frozen=True)
class CapacityLaw:
    """Link capacity as a function of the instantaneous source rate, c = g(x).

    Two forms are supported: ``affine`` with g(x) = c0 - slope*x (slope > 0,
    strictly decreasing) and ``constant`` with g(x) = c0.
    """

    kind: str
    c0: float
    slope: float = 0.0

    def __post_init__(self):
        if self.kind not in (AFFINE, CONSTANT):
            raise ModelDomainError(f"unknown capacity law kind {self.kind!r}")
        if not (math.isfinite(self.c0) and self.c0 > 0):
            raise ModelDomainError(f"capacity intercept/level must be positive, got {self.c0}")
        if self.kind == AFFINE and not (math.isfinite(self.slope) and self.slope > 0):
            raise ModelDomainError(
                f"affine capacity law must be strictly decreasing: slope > 0, got {self.slope}"
            )
        if self.kind == CONSTANT:
            object.__setattr__(self, "slope", 0.0)

    @classmethod
    def affine(cls, intercept: float, slope: float) -> "CapacityLaw":
        return cls(AFFINE, intercept, slope)

    @classmethod
    def constant(cls, level: float) -> "CapacityLaw":
        return cls(CONSTANT, level, 0.0)

    def value(self, x):
        """Raw g(x); may be <= 0.  Use :func:`capacity` when positivity is required.

        Accepts scalars or numpy arrays (slope is 0 for the constant form).
        """
        return self.c0 - self.slope * x

    def derivative(self) -> float:
        """g'(x), constant for both supported forms."""
        return -self.slope if self.kind == AFFINE else 0.0


@dataclass(frozen=True)
class Equilibrium:
    """Fixed point of the rate dynamics: c_star = g(x_star) and the update
    vanishes.  ``residual`` is the fixed-point defect relative to c_star."""

    x_star: float
    c_star: float
    residual: float


def utility_derivative(x: float, a: float) -> float:
    """Marginal utility U'(x) = x**-(a+1) of U(x) = -1/(a*x**a); decreasing in x."""
    if not x > 0:
        raise ModelDomainError(f"utility_derivative requires x > 0, got {x}")
    if not a > 0:
        raise ModelDomainError(f"utility_derivative requires a > 0, got {a}")
    return x ** -(a + 1.0)


def price(x: float, c: float, b: float, h_gain: float = 1.0) -> float:
    """Congestion price h*(x/c)**b charged per unit of rate."""
    if not x > 0:
        raise ModelDomainError(f"price requires x > 0, got {x}")
    if not c > 0:
        raise ModelDomainError(f"price requires c > 0, got {c}")
    return h_gain * (x / c) ** b


def capacity(law: CapacityLaw, x: float) -> float:
    """g(x) with positivity enforced."""
    c = law.value(x)
    if not c > 0:
        raise CapacityExhaustedError(f"capacity law returned c = {c} <= 0 at x = {x}")
    return c


def rhs(x_now: float, x_delayed: float, c_delayed: float, p: ModelParams) -> float:
    """Rate derivative kappa*(x**-a - h*x_d**(b+1)*c_d**-b) before projection."""
    if not x_now > 0:
        raise ModelDomainError(f"rhs requires x_now > 0, got {x_now}")
    if not x_delayed > 0:
        raise ModelDomainError(f"rhs requires x_delayed > 0, got {x_delayed}")
    if not c_delayed > 0:
        raise ModelDomainError(f"rhs requires c_delayed > 0, got {c_delayed}")
    return p.kappa * (
        x_now ** -p.a - p.h_gain * x_delayed ** (p.b + 1.0) * c_delayed ** -p.b
    )


def clamp(x: float, dxdt: float, p: ModelParams) -> float:
    """Derivative projection at the rate bounds: no outward motion at x_min/x_max."""
    if x >= p.x_max:
        return min(dxdt, 0.0)
    if x <= p.x_min:
        return max(dxdt, 0.0)
    return dxdt
