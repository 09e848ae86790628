"""Integrable plaquette weight families and the local linear system.

Five weights attach to the plaquette passage states: ``u1`` for a single
arc of angle theta, ``u2`` for a single arc of angle pi - theta, ``v``
for a straight passage, ``w1``/``w2`` for the two-arc states.  The
closed forms below are trigonometric products in theta and a family
parameter (a spin sigma or a loop parameter s); ``local_residuals``
evaluates the eight linear relations those weights are defined to
satisfy, and ``solve_local_system`` recovers the weights from the
relations numerically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import as_theta

IDENTITY_TOL = 1e-12


@dataclass(frozen=True)
class WeightSet:
    """The five plaquette weights plus the parameters that produced them."""

    u1: float
    u2: float
    v: float
    w1: float
    w2: float
    theta: float | None = None
    family: str = ""
    param: float | None = None

    def as_tuple(self) -> tuple[float, float, float, float, float]:
        return (self.u1, self.u2, self.v, self.w1, self.w2)

    @property
    def x_c(self) -> float:
        """Critical fugacity: the per-unit-length weight u1."""
        return self.u1

    def at_fugacity(self, x: float) -> "WeightSet":
        """Rescale so a length-n walk picks up (x/x_c)^n relative to this set."""
        xc = self.x_c
        return replace(
            self,
            u1=x,
            u2=x * self.u2 / xc,
            v=x * self.v / xc,
            w1=x * x * self.w1 / (xc * xc),
            w2=x * x * self.w2 / (xc * xc),
        )

    def swapped(self) -> "WeightSet":
        """u1<->u2, w1<->w2 (the theta <-> pi-theta counterpart)."""
        return replace(self, u1=self.u2, u2=self.u1, w1=self.w2, w2=self.w1)


def critical_weights(theta) -> WeightSet:
    """The critical weight family on [pi/3, 2pi/3].

    Equals ``sigma_weights(theta, 5/8)`` componentwise; kept as a
    separate closed form because it is the family every growth-constant
    statement refers to.
    """
    th = as_theta(theta)  # range-checked
    q = 3.0 * th / 8.0
    a = 5.0 * math.pi / 4.0
    b = 5.0 * math.pi / 8.0
    denom = math.sin(a + q) * math.sin(b - q)
    return WeightSet(
        u1=math.sin(a) * math.sin(b + q) / denom,
        u2=math.sin(a) * math.sin(q) / denom,
        v=math.sin(b + q) * math.sin(-q) / denom,
        w1=math.sin(b + q) * math.sin(a - q) / denom,
        w2=math.sin(15.0 * math.pi / 8.0 + q) * math.sin(-q) / denom,
        theta=th,
        family="critical",
        param=5.0 / 8.0,
    )


def _require_eighth_odd(sigma: float) -> None:
    ell = sigma * 8.0
    if abs(ell - round(ell)) > 1e-9 or round(ell) % 2 == 0:
        raise ValueError(
            f"sigma={sigma!r} is not an odd multiple of 1/8; no generic "
            "weight solution exists off that locus"
        )


def sigma_weights(theta: float, sigma: float) -> WeightSet:
    """Weight family solving the local relations at spin sigma = ell/8, ell odd.

    theta is not range-restricted here: evaluating outside [pi/3, 2pi/3]
    is legitimate (and used to demonstrate where the positivity
    inequalities break down).
    """
    _require_eighth_odd(sigma)
    th = float(theta)
    s1 = sigma - 1.0
    t = math.sin(s1 * (math.pi + th)) * math.sin(s1 * (2.0 * math.pi - th))
    if abs(t) < 1e-12:
        raise ValueError(f"degenerate denominator t=0 at sigma={sigma}, theta={theta}")
    sin2s = math.sin(2.0 * sigma * math.pi)
    sp = math.sin(s1 * (math.pi - th))   # recurring factor, (pi-theta) leg
    st = math.sin(s1 * th)               # recurring factor, theta leg
    return WeightSet(
        u1=sin2s * sp / t,
        u2=sin2s * st / t,
        v=st * sp / t,
        w1=sp * math.sin(s1 * (2.0 * math.pi + th)) / t,
        w2=st * math.sin(s1 * (3.0 * math.pi - th)) / t,
        theta=th,
        family="sigma",
        param=sigma,
    )


def sigma_one_family(u1: float, theta: float | None = None) -> WeightSet:
    """The one-parameter family at spin 1: no straights, u1 + u2 = 1."""
    return WeightSet(
        u1=u1,
        u2=1.0 - u1,
        v=0.0,
        w1=u1,
        w2=1.0 - u1,
        theta=theta,
        family="sigma_one",
        param=u1,
    )


def loop_parameter(s: float) -> float:
    """Loop fugacity n associated with the parameter s."""
    return -2.0 * math.cos(4.0 * math.pi * s / 3.0)


def on_weights(theta: float, s: float) -> tuple[WeightSet, float]:
    """Loop-model weight family for a rhombus of angle theta, with its n.

    Unlike the sigma family this is defined for any real s away from the
    degenerate denominators, and it specialises to ``critical_weights``
    at s = -3/8 (where n = 0).
    """
    th = float(theta)
    sin_third = math.sin(math.pi * s / 3.0)
    if abs(sin_third) < 1e-12:
        raise ValueError(f"sin(pi*s/3) vanishes at s={s!r}")
    s23 = math.sin(2.0 * math.pi * s / 3.0)
    t = s23 ** 3 / sin_third + math.sin((th - math.pi / 3.0) * s) * math.sin(
        (2.0 * math.pi / 3.0 - th) * s
    )
    if abs(t) < 1e-12:
        raise ValueError(f"degenerate denominator t=0 at s={s}, theta={theta}")
    sp = math.sin((math.pi - th) * s)
    st = math.sin(th * s)
    ws = WeightSet(
        u1=sp * s23 / t,
        u2=st * s23 / t,
        v=st * sp / t,
        w1=math.sin((2.0 * math.pi / 3.0 - th) * s) * sp / t,
        w2=math.sin((th - math.pi / 3.0) * s) * st / t,
        theta=th,
        family="on",
        param=s,
    )
    return ws, loop_parameter(s)


@dataclass(frozen=True)
class LocalResiduals:
    """Residuals of the four local relations and their conjugates."""

    r1: complex
    r2: complex
    r3: complex
    r4: complex
    rc1: complex
    rc2: complex
    rc3: complex
    rc4: complex

    def all(self) -> tuple[complex, ...]:
        return (self.r1, self.r2, self.r3, self.r4,
                self.rc1, self.rc2, self.rc3, self.rc4)

    def max_abs(self) -> float:
        return max(abs(z) for z in self.all())


def _local_coefficient_rows(sigma: float, theta: float):
    """Complex coefficient rows (per weight) and constants of the four
    local relations, in the order (u1, u2, v, w1, w2)."""
    lam = cmath.exp(-1j * sigma * theta)
    mu = cmath.exp(-1j * sigma * math.pi)
    mub = mu.conjugate()
    e = cmath.exp(1j * theta)
    rows = [
        # 1 + lam*conj(mu)*e*u2 - v - lam*e*u1 = 0
        ((-lam * e, lam * mub * e, -1.0, 0.0, 0.0), 1.0),
        # lam*conj(mu)^2*e*v - mu*u2 - lam*e*w2 = 0
        ((0.0, -mu, lam * mub * mub * e, 0.0, -lam * e), 0.0),
        # -lam*mu*e*v - conj(mu)*u1 + lam*conj(mu)*e*w1 = 0
        ((-mub, 0.0, -lam * mu * e, lam * mub * e, 0.0), 0.0),
        # -lam*mu*e*u2 - mu^2*w2 + lam*conj(mu)^2*e*u1 - conj(mu)^2*w1 = 0
        ((lam * mub * mub * e, -lam * mu * e, 0.0, -mub * mub, -mu * mu), 0.0),
    ]
    return rows


def local_residuals(w: WeightSet, sigma: float, theta: float) -> LocalResiduals:
    """Evaluate the eight local relations at the given spin and angle."""
    rows = _local_coefficient_rows(sigma, float(theta))
    vals = []
    for coeffs, const in rows:
        vals.append(const + sum(c * x for c, x in zip(coeffs, w.as_tuple())))
    conj_vals = []
    for coeffs, const in rows:
        conj_vals.append(
            complex(const).conjugate()
            + sum(complex(c).conjugate() * x for c, x in zip(coeffs, w.as_tuple()))
        )
    return LocalResiduals(*vals, *conj_vals)


@dataclass(frozen=True)
class SystemSolution:
    """Least-squares solution of the real-linearized local system."""

    weights: WeightSet | None   # None when no consistent solution exists
    residual: float             # ||A x - b|| of the best solution
    rank: int                   # rank of the 8x5 real system
    nullspace: tuple[tuple[float, ...], ...]  # basis of solution directions

    @property
    def rank_deficiency(self) -> int:
        return 5 - self.rank


def solve_local_system(sigma: float, theta: float,
                       residual_tol: float = 1e-9) -> SystemSolution:
    """Solve the eight real-linearized local relations for the weights.

    The four complex relations are affine in the five real weights;
    stacking real and imaginary parts gives an 8x5 real least-squares
    problem.  At sigma on the solvable locus the residual vanishes and
    the solution matches ``sigma_weights``; at sigma = 1 the system has
    a one-dimensional solution family; elsewhere the residual stays
    bounded away from zero (or the solution degenerates to v = 0).
    """
    rows = _local_coefficient_rows(sigma, float(theta))
    A = np.zeros((8, 5))
    b = np.zeros(8)
    for k, (coeffs, const) in enumerate(rows):
        A[2 * k] = [complex(c).real for c in coeffs]
        A[2 * k + 1] = [complex(c).imag for c in coeffs]
        b[2 * k] = -complex(const).real
        b[2 * k + 1] = -complex(const).imag
    x, _, rank, _sing = np.linalg.lstsq(A, b, rcond=None)
    residual = float(np.linalg.norm(A @ x - b))
    _, _, vt = np.linalg.svd(A)
    nullspace = tuple(tuple(float(v) for v in vt[k])
                      for k in range(5) if k >= rank)
    weights = None
    if residual < residual_tol:
        weights = WeightSet(*[float(v) for v in x], theta=float(theta),
                            family="solved", param=sigma)
    return SystemSolution(weights=weights, residual=residual,
                          rank=int(rank), nullspace=nullspace)


def theta_grid(n: int = 13) -> list[float]:
    """Evenly spaced angles spanning [pi/3, 2pi/3]."""
    lo, hi = math.pi / 3, 2 * math.pi / 3
    if n == 1:
        return [0.5 * (lo + hi)]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]
