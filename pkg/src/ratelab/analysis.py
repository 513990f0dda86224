"""Equilibrium, model-assumption validation, the delay-independent stability
margin, an energy-functional monitor, and trajectory classification.

The stability check asks whether, with the capacity coupled to the rate
(c = g(x)), the marginal-utility difference quotient dominates the delayed
price-flow difference quotient at every rate in a configured range:

    (x***-a - x**-a)/(x - x*)  >  (x**(b+1) c**-b - x***(b+1) c***-b)/(x - x*)

A positive minimum of LHS - RHS over the range certifies global asymptotic
convergence regardless of the delays; the converse does not hold (the
condition is sufficient only).
"""

import math
from dataclasses import dataclass

import numpy as np

from .dde import Trajectory
from .errors import EquilibriumBracketError, HorizonError, ModelDomainError
from .model import AFFINE, CapacityLaw, Equilibrium, ModelParams, capacity

CERTIFIED = "CertifiedStable"
NOT_CERTIFIED = "NotCertified"

CONVERGED = "Converged"
OSCILLATING = "Oscillating"
SATURATED = "Saturated"
UNDETERMINED = "Undetermined"

HARD = "hard"
WARNING = "warning"

# Relative half-width of the band around x_star where the margin switches to
# its analytic limit (the difference quotients are 0/0 there).
EPS_BAND_REL = 1e-6


@dataclass(frozen=True)
class AssumptionViolation:
    assumption: str
    description: str
    severity: str


@dataclass(frozen=True)
class StabilityReport:
    """Outcome of the margin check over a rate range.

    ``profile_x``/``profile_margin`` include the uniform grid plus the
    analytic limit point at x_star.  The verdict is CertifiedStable iff the
    minimum margin is positive and no hard assumption violation was found.
    """

    equilibrium: Equilibrium
    violations: tuple
    x_range: tuple
    grid_n: int
    profile_x: np.ndarray
    profile_margin: np.ndarray
    min_margin: float
    min_margin_x: float
    verdict: str


@dataclass(frozen=True)
class Classification:
    kind: str
    final_error: float
    tail_peak_to_peak: float
    settling_time: float | None


def solve_equilibrium(p: ModelParams, law: CapacityLaw) -> Equilibrium:
    """Bisect g(x) - h**(1/b) * x**((a+b+1)/b) to its root in [x_min, x_max].

    The root is the unique rate at which the update law vanishes; it also
    satisfies first-order optimality U'(x*) = p(x*, c*).  The bracket is
    tightened well below the 1e-12*x_star contract so the absolute residual
    stays tiny even for steep exponents (small b).
    """
    exponent = (p.a + p.b + 1.0) / p.b
    h_factor = p.h_gain ** (1.0 / p.b)

    def f(x: float) -> float:
        return law.value(x) - h_factor * x ** exponent

    lo, hi = p.x_min, p.x_max
    f_lo, f_hi = f(lo), f(hi)
    if f_lo == 0.0:
        x_star = lo
    elif f_hi == 0.0:
        x_star = hi
    elif f_lo * f_hi > 0:
        raise EquilibriumBracketError(
            f"no sign change of the equilibrium residual on [{lo}, {hi}] "
            f"(f({lo}) = {f_lo:.3g}, f({hi}) = {f_hi:.3g})"
        )
    else:
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            f_mid = f(mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if (f_lo > 0) == (f_mid > 0):
                lo, f_lo = mid, f_mid
            else:
                hi, f_hi = mid, f_mid
            if hi - lo < 1e-15 * max(1.0, 0.5 * (lo + hi)):
                break
        x_star = 0.5 * (lo + hi)
    c_star = capacity(law, x_star)
    residual = abs(f(x_star)) / c_star
    return Equilibrium(x_star=x_star, c_star=c_star, residual=residual)


def validate_assumptions(
    p: ModelParams,
    law: CapacityLaw,
    x_range: tuple[float, float],
    grid_n: int,
) -> list[AssumptionViolation]:
    """Check the model validity assumptions over a rate range.

    A1 (positive constants and tau >= T_delay) failures are hard.  A3 asks
    for a capacity law with g(x) > 1 (hard when violated) and g'(x) < -1
    (warning when violated: the benchmark law g(x) = 5 - x sits exactly on
    that boundary and is still usable).  Constant laws always warn on A3
    since they are not decreasing.
    """
    x_lo, x_hi = x_range
    if not (x_lo < x_hi):
        raise ModelDomainError(f"range must satisfy x_lo < x_hi, got [{x_lo}, {x_hi}]")
    if not (x_lo >= p.x_min and x_hi <= p.x_max):
        raise ModelDomainError(
            f"range [{x_lo}, {x_hi}] must lie within the rate bounds "
            f"[{p.x_min}, {p.x_max}]"
        )
    if grid_n < 2:
        raise ModelDomainError(f"grid_n must be at least 2, got {grid_n}")

    violations: list[AssumptionViolation] = []
    if p.tau < p.T_delay:
        violations.append(
            AssumptionViolation(
                "A1",
                f"delay ordering violated: tau = {p.tau} < T = {p.T_delay}",
                HARD,
            )
        )

    grid = np.linspace(x_lo, x_hi, grid_n)
    g_vals = law.value(grid)
    if np.any(g_vals <= 1.0):
        i = int(np.argmax(g_vals <= 1.0))
        violations.append(
            AssumptionViolation(
                "A3",
                f"capacity must exceed 1 on the range: g({grid[i]:.6g}) = "
                f"{g_vals[i]:.6g}",
                HARD,
            )
        )
    if law.kind == AFFINE:
        if law.derivative() >= -1.0:
            violations.append(
                AssumptionViolation(
                    "A3",
                    f"capacity slope must satisfy g'(x) < -1, got g'(x) = "
                    f"{law.derivative():.6g}",
                    WARNING,
                )
            )
    else:
        violations.append(
            AssumptionViolation(
                "A3", "constant capacity law is not strictly decreasing", WARNING
            )
        )
    return violations


def stability_margin(
    x: float,
    p: ModelParams,
    law: CapacityLaw,
    eq: Equilibrium,
    eps_band: float | None = None,
) -> float:
    """Stability margin (LHS - RHS of the certification inequality) at rate x.

    The capacity is coupled to the rate, c = g(x).  Inside the eps band
    around x_star the 0/0 quotients are replaced by their analytic limit,
    the derivative of each side at x_star:

        a*xs**-(a+1) - h*[(b+1)*xs**b*cs**-b - b*xs**(b+1)*cs**-(b+1)*g'(xs)]
    """
    xs, cs = eq.x_star, eq.c_star
    if eps_band is None:
        eps_band = EPS_BAND_REL * xs
    a, b, h = p.a, p.b, p.h_gain
    if not x > 0:
        raise ModelDomainError(f"margin requires x > 0, got {x}")
    if abs(x - xs) < eps_band:
        lhs = a * xs ** -(a + 1.0)
        rhs = h * (
            (b + 1.0) * xs ** b * cs ** -b
            - b * xs ** (b + 1.0) * cs ** -(b + 1.0) * law.derivative()
        )
        return lhs - rhs
    c = capacity(law, x)
    lhs = (xs ** -a - x ** -a) / (x - xs)
    rhs = h * (x ** (b + 1.0) * c ** -b - xs ** (b + 1.0) * cs ** -b) / (x - xs)
    return lhs - rhs


def check_stability(
    p: ModelParams,
    law: CapacityLaw,
    x_range: tuple[float, float],
    grid_n: int,
) -> StabilityReport:
    """Evaluate the margin on a uniform grid plus the x_star limit point."""
    if grid_n < 16:
        raise ModelDomainError(f"grid_n must be at least 16, got {grid_n}")
    eq = solve_equilibrium(p, law)
    violations = tuple(validate_assumptions(p, law, x_range, grid_n))
    xs_grid = np.linspace(x_range[0], x_range[1], grid_n)
    profile_x = np.append(xs_grid, eq.x_star)
    profile_margin = np.array([stability_margin(float(x), p, law, eq) for x in profile_x])
    i_min = int(np.argmin(profile_margin))
    hard = any(v.severity == HARD for v in violations)
    verdict = CERTIFIED if (profile_margin[i_min] > 0 and not hard) else NOT_CERTIFIED
    return StabilityReport(
        equilibrium=eq,
        violations=violations,
        x_range=(float(x_range[0]), float(x_range[1])),
        grid_n=grid_n,
        profile_x=profile_x,
        profile_margin=profile_margin,
        min_margin=float(profile_margin[i_min]),
        min_margin_x=float(profile_x[i_min]),
        verdict=verdict,
    )


def lyapunov_value(
    traj: Trajectory,
    t: float,
    p: ModelParams,
    eq: Equilibrium,
    theta_nodes: int = 201,
) -> float:
    """Energy functional |x - x*| + kappa*sgn(x - x*) * I(t) along the run,
    where I(t) integrates the delayed price-flow excess over theta in [-1, 0]
    with arguments x(t + theta*tau) and c(t + theta*T).

    Composite trapezoid quadrature with ``theta_nodes`` nodes; trajectory
    samples between grid points come from the Hermite interpolant.  sgn(0)
    is 0, so a trajectory pinned at the equilibrium gives exactly 0.
    """
    if theta_nodes < 3:
        raise ModelDomainError(f"theta_nodes must be at least 3, got {theta_nodes}")
    if t - p.max_delay < traj.t_start - 1e-9 * traj.step:
        raise HorizonError(
            f"need max(tau, T) = {p.max_delay} of recorded history before t = {t}; "
            f"trajectory starts at {traj.t_start}"
        )
    if t > traj.t_end + 1e-9 * traj.step:
        raise HorizonError(f"t = {t} beyond trajectory end {traj.t_end}")

    b, h = p.b, p.h_gain
    theta = np.linspace(-1.0, 0.0, theta_nodes)
    x_tau = traj.interp_x(t + theta * p.tau)
    x_t = traj.interp_x(t + theta * p.T_delay)
    c_t = traj.law.value(x_t)
    if np.any(c_t <= 0):
        raise ModelDomainError("capacity nonpositive along the quadrature window")
    term = h * x_tau ** (b + 1.0) * c_t ** -b
    term_star = h * eq.x_star ** (b + 1.0) * eq.c_star ** -b
    integral = float(np.trapezoid(term - term_star, dx=1.0 / (theta_nodes - 1)))
    dev = traj.interp_x(t) - eq.x_star
    sign = 0.0 if dev == 0.0 else math.copysign(1.0, dev)
    return abs(dev) + p.kappa * sign * integral


def classify(
    traj: Trajectory,
    eq: Equilibrium,
    tol_conv: float = 1e-2,
    tol_osc: float = 0.1,
    tail_fraction: float = 0.2,
) -> Classification:
    """Label the run outcome from its tail behavior.

    Converged: the endpoint and the tail peak-to-peak are both inside
    tol_conv.  Oscillating: tail peak-to-peak above tol_osc with no decay
    trend (tail amplitude at least 0.9x the mid-run amplitude over a window
    of the same length).  Saturated: the tail sits at a rate bound.
    Anything else (e.g. still-decaying transients) is Undetermined.
    """
    horizon = traj.t_end - traj.t_start
    if horizon < 10.0 * traj.params.tau - 1e-9:
        raise HorizonError(
            f"horizon {horizon:.6g} shorter than 10*tau = {10 * traj.params.tau:.6g}"
        )
    if not (0 < tail_fraction <= 0.5):
        raise ModelDomainError(f"tail_fraction must be in (0, 0.5], got {tail_fraction}")

    x = traj.x
    t = traj.t
    window = tail_fraction * horizon
    tail = x[t >= traj.t_end - window]
    mid_lo = traj.t_start + 0.5 * (horizon - window)
    mid = x[(t >= mid_lo) & (t <= mid_lo + window)]

    tail_pp = float(tail.max() - tail.min())
    mid_pp = float(mid.max() - mid.min())
    final_error = float(abs(x[-1] - eq.x_star))

    outside = np.abs(x - eq.x_star) >= tol_conv
    if outside[-1]:
        settling = None
    elif not outside.any():
        settling = float(traj.t_start)
    else:
        idx_last_outside = len(x) - 1 - int(np.argmax(outside[::-1]))
        settling = float(t[idx_last_outside + 1])

    p = traj.params
    at_bound = (
        float(np.abs(tail - p.x_min).max()) < tol_conv
        or float(np.abs(tail - p.x_max).max()) < tol_conv
    )

    if final_error < tol_conv and tail_pp < tol_conv:
        kind = CONVERGED
    elif tail_pp > tol_osc and tail_pp >= 0.9 * mid_pp:
        kind = OSCILLATING
    elif tail_pp < tol_conv and at_bound:
        kind = SATURATED
    else:
        kind = UNDETERMINED
    return Classification(
        kind=kind,
        final_error=final_error,
        tail_peak_to_peak=tail_pp,
        settling_time=settling,
    )
