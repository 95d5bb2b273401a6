"""Unimodal families and orbit iteration with derivative cocycles.

The workhorse is the raw quadratic family x -> x^2 + c0 + t on its own
invariant interval [-beta_t, beta_t], beta_t = (1 + sqrt(1 - 4(c0+t)))/2.
A normalized variant rescaled to [-1, 1] and a custom callback-triple
variant are provided; the two quadratic kinds share fast kernels of the
form x -> a*x^2 + b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import CapExceeded, DomainError, EscapeError, NoConvergence

ORBIT_CAP = 10 ** 9

RAW = "raw"
NORMALIZED = "normalized"
CUSTOM = "custom"


def _beta(c) -> float:
    disc = 1.0 - 4.0 * c
    if disc < 0.0:
        raise DomainError(f"no invariant interval for c = {c}")
    return 0.5 * (1.0 + math.sqrt(disc))


@dataclass(frozen=True)
class UnimodalFamily:
    """A two-parameter-smooth unimodal family with critical point 0.

    kind is one of 'raw', 'normalized', 'custom'.  For the quadratic
    kinds the base parameter c0 defines the map; custom families supply
    the callback triple (f, dfdx, dfdt), an invariant interval and an
    admissible t-range.
    """

    kind: str
    c0: Optional[float] = None
    f: Optional[Callable] = None
    dfdx: Optional[Callable] = None
    dfdt: Optional[Callable] = None
    interval: Optional[tuple] = None
    t_range: tuple = (0.0, 0.0)
    label: str = ""

    critical_point = 0.0

    def admissible_t(self) -> tuple:
        if self.kind == CUSTOM:
            return self.t_range
        # map into itself needs c0+t in [-2, 1/4]
        return (-2.0 - self.c0, 0.25 - self.c0)

    def invariant_interval(self, t: float) -> tuple:
        if self.kind == CUSTOM:
            return self.interval
        if self.kind == RAW:
            beta = _beta(self.c0 + t)
            return (-beta, beta)
        return (-1.0, 1.0)

    def kernel_params(self, t: float):
        """(a, b) with f_t(x) = a x^2 + b, or None for custom families."""
        if self.kind == RAW:
            return (1.0, self.c0 + t)
        if self.kind == NORMALIZED:
            beta = _beta(self.c0 + t)
            return (beta, (self.c0 + t) / beta)
        return None

    def check_t(self, t: float):
        lo, hi = self.admissible_t()
        if not (lo - 1e-15 <= t <= hi + 1e-15):
            raise DomainError(f"t = {t} outside admissible range [{lo}, {hi}]")

    def map(self, t: float, x):
        if self.kind == CUSTOM:
            return self.f(t, x)
        a, b = self.kernel_params(t)
        return a * x * x + b

    def dmap_dx(self, t: float, x):
        if self.kind == CUSTOM:
            return self.dfdx(t, x)
        a, _ = self.kernel_params(t)
        return 2.0 * a * x

    def dmap_dt(self, t: float, x):
        if self.kind == CUSTOM:
            return self.dfdt(t, x)
        if self.kind == RAW:
            return 1.0 if np.isscalar(x) else np.ones_like(x)
        # normalized: f = beta x^2 + (c0+t)/beta with beta = beta(c0+t)
        c = self.c0 + t
        beta = _beta(c)
        dbeta = -1.0 / math.sqrt(1.0 - 4.0 * c)
        return dbeta * x * x + (beta - c * dbeta) / (beta * beta)

    def critical_value(self, t: float) -> float:
        return self.map(t, 0.0)


def raw_quadratic(c0: float) -> UnimodalFamily:
    _beta(c0)  # validates
    return UnimodalFamily(kind=RAW, c0=float(c0), label=f"raw(c0={c0})")


def normalized_quadratic(c0: float) -> UnimodalFamily:
    _beta(c0)
    return UnimodalFamily(kind=NORMALIZED, c0=float(c0), label=f"normalized(c0={c0})")


def custom_family(f, dfdx, dfdt, interval, t_range, label="custom") -> UnimodalFamily:
    return UnimodalFamily(kind=CUSTOM, f=f, dfdx=dfdx, dfdt=dfdt,
                          interval=tuple(interval), t_range=tuple(t_range),
                          label=label)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def evaluate(family: UnimodalFamily, t: float, x: float):
    """(f_t(x), d_x f_t(x), d_t f_t(x)) with domain checks."""
    family.check_t(t)
    lo, hi = family.invariant_interval(t)
    if not (lo - 4 * _kernels.EPS * (abs(lo) + abs(hi)) <= x
            <= hi + 4 * _kernels.EPS * (abs(lo) + abs(hi))):
        raise DomainError(f"x = {x} outside invariant interval [{lo}, {hi}]")
    fx = family.map(t, x)
    dx = family.dmap_dx(t, x)
    dt = family.dmap_dt(t, x)
    if not (np.isfinite(fx) and np.isfinite(dx) and np.isfinite(dt)):
        raise DomainError("non-finite value from family callbacks")
    return float(fx), float(dx), float(dt)


@dataclass(frozen=True)
class OrbitTrace:
    """An orbit segment with its cumulative derivative cocycle.

    points[k] = f_t^k(x0); log_abs_derivative[k] = log|Df_t^k(x0)|;
    param_derivative[k] (when traced from the critical value) is the
    recursion D xi_k = d_x f(xi_{k-1}) D xi_{k-1} + d_t f(xi_{k-1}).
    """

    points: np.ndarray
    log_abs_derivative: np.ndarray
    param_derivative: Optional[np.ndarray] = None
    events: tuple = ()

    def __len__(self):
        return self.points.size


def iterate_orbit(family: UnimodalFamily, t: float, x0: float, n: int,
                  trace_param_derivative: bool = False) -> OrbitTrace:
    """Orbit of x0 under f_t, with log-derivative cocycle and optional
    parameter-derivative recursion.

    Raises EscapeError (with the escape index) if an iterate leaves the
    invariant interval, and CapExceeded beyond the hard orbit cap.
    """
    family.check_t(t)
    if n > ORBIT_CAP:
        raise CapExceeded(ORBIT_CAP)
    lo, hi = family.invariant_interval(t)
    params = family.kernel_params(t)
    events = []
    if params is not None:
        a, b = params
        pts, logd, esc, under = _kernels.orbit_with_logd(a, b, float(x0), int(n), lo, hi)
        if under >= 0:
            events.append(f"derivative_underflow@{under}")
        if esc >= 0:
            raise EscapeError(int(esc))
    else:
        pts = np.empty(n + 1)
        logd = np.empty(n + 1)
        pts[0] = x0
        logd[0] = 0.0
        acc = 0.0
        x = x0
        tol = 4 * _kernels.EPS * (abs(lo) + abs(hi) + 1.0)
        for k in range(n):
            d = abs(family.dmap_dx(t, x))
            if d == 0.0:
                acc = -math.inf
                events.append(f"derivative_underflow@{k}")
            elif acc > -math.inf:
                acc += math.log(d)
                if acc < -745.0 and not events:
                    events.append(f"derivative_underflow@{k}")
            x = family.map(t, x)
            pts[k + 1] = x
            logd[k + 1] = acc
            if not (lo - tol <= x <= hi + tol):
                raise EscapeError(k + 1)
    pder = None
    if trace_param_derivative:
        pder = np.empty(n + 1)
        pder[0] = family.dmap_dt(t, 0.0)
        for k in range(n):
            xk = pts[k]
            pder[k + 1] = family.dmap_dx(t, xk) * pder[k] + family.dmap_dt(t, xk)
    return OrbitTrace(points=pts, log_abs_derivative=logd,
                      param_derivative=pder, events=tuple(events))


def critical_orbit(family: UnimodalFamily, t: float, n: int) -> np.ndarray:
    """xi_k(t) = f_t^{k+1}(0) for k = 0..n (the post-critical orbit)."""
    trace = iterate_orbit(family, t, family.critical_value(t), n)
    return trace.points


def param_derivative_sequence(family: UnimodalFamily, t: float, n: int) -> np.ndarray:
    """D xi_k(t) for k = 0..n via the chain-rule recursion."""
    trace = iterate_orbit(family, t, family.critical_value(t), n,
                          trace_param_derivative=True)
    return trace.param_derivative


@dataclass(frozen=True)
class TransversalityReport:
    partial_sums: np.ndarray
    tail_bound_estimate: float
    converged: bool
    limit_estimate: float


def transversality_sum(family: UnimodalFamily, n_max: int = 200,
                       tol: float = 1e-12) -> TransversalityReport:
    """Partial sums of sum_j d_t f(f^j(0)) / Df^j(f(0)) at t = 0.

    Converges geometrically at Misiurewicz bases because the derivative
    cocycle along the critical value grows geometrically; raises
    NoConvergence when the cocycle fails to grow.
    """
    t = 0.0
    x = family.critical_point  # orbit of 0: x_j = f^j(0)
    cocycle = 1.0  # Df^j(f(0)), signed
    partial = np.empty(n_max + 1)
    acc = 0.0
    terms = np.empty(n_max + 1)
    for j in range(n_max + 1):
        term = family.dmap_dt(t, x) / cocycle
        acc += term
        partial[j] = acc
        terms[j] = term
        x = family.map(t, x)  # x_{j+1}
        cocycle *= family.dmap_dx(t, x)  # extend product to Df^{j+1}(f(0))
        if cocycle == 0.0:
            raise NoConvergence("derivative cocycle vanished on the critical orbit")
    tail_terms = np.abs(terms[-8:])
    ratios = tail_terms[1:] / np.maximum(tail_terms[:-1], 1e-300)
    rho = float(np.max(ratios))
    if rho >= 0.999 or not np.isfinite(rho):
        raise NoConvergence(
            f"terms not decaying geometrically (ratio {rho:.3g}); "
            "base does not look Misiurewicz")
    tail_bound = float(tail_terms[-1] * rho / (1.0 - rho))
    return TransversalityReport(partial_sums=partial,
                                tail_bound_estimate=tail_bound,
                                converged=bool(tail_bound < tol),
                                limit_estimate=float(partial[-1]))
