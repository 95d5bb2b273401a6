"""Parameter-space machinery: Misiurewicz certification, the gamma_n
scale sequence, the superattracting parameter cascade t_n, preperiodic
continuation in t, and the nested returning-interval pair U_1 in U_0.

Boundary points of the returning intervals are exactly preperiodic:
their forward orbits are verified by following them to the landing
cycle and checking the cycle itself, which covers every iterate.  A
direct long-horizon float iteration of a preperiodic point is
meaningless past the shadowing window (the repelling cycle amplifies
round-off), so the structural check is the honest surrogate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (
    ClearanceFailed,
    ConstructionFailed,
    MethodUnavailable,
    NewtonDiverged,
    NoRootFound,
    NotPreperiodic,
)
from .family import UnimodalFamily, critical_orbit, param_derivative_sequence

DEFAULT_HORIZON = 10_000


# ---------------------------------------------------------------------------
# Misiurewicz certification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MisiurewiczCertificate:
    preperiod: int
    period: int
    cycle_point: float
    cycle_multiplier: float
    postcritical_gap: float
    horizon: int
    passed: bool

    def to_report(self) -> str:
        lines = ["[misiurewicz_certificate]"]
        for key in ("preperiod", "period", "cycle_point", "cycle_multiplier",
                    "postcritical_gap", "horizon", "passed"):
            value = getattr(self, key)
            if isinstance(value, float):
                value = format(value, ".17g")
            lines.append(f"{key} = {value}")
        return "\n".join(lines)


def _orbit_and_cocycle(family, t, z, m):
    """Orbit z..f^{m-1}(z) and signed Df^m(z)."""
    pts = np.empty(m)
    d = 1.0
    x = z
    for j in range(m):
        pts[j] = x
        d *= family.dmap_dx(t, x)
        x = family.map(t, x)
    return pts, d


def _newton_cycle(family, t, z0, q, tol=None, max_iter=80):
    """Refine a period-q point by Newton on f^q(z) - z."""
    lo, hi = family.invariant_interval(t)
    scale = abs(hi - lo)
    tol = tol if tol is not None else 64 * _kernels.EPS * scale
    z = z0
    for _ in range(max_iter):
        pts, dq = _orbit_and_cocycle(family, t, z, q)
        fz = family.map(t, pts[-1])
        g = fz - z
        dg = dq - 1.0
        if dg == 0.0:
            raise NewtonDiverged("singular Newton step on cycle refinement")
        step = g / dg
        z -= step
        if abs(step) < tol:
            return z
        if not (lo - scale <= z <= hi + scale):
            raise NewtonDiverged("cycle refinement left the phase space")
    raise NewtonDiverged("cycle refinement did not converge")


def certify_misiurewicz(family: UnimodalFamily, horizon: int = 400,
                        match_tol: float = 1e-7,
                        lambda_min: float = 1.2) -> MisiurewiczCertificate:
    """Detect (preperiod, period) of the critical orbit, refine the landing
    cycle, and certify hyperbolic repulsion at the base parameter t = 0.

    Raises NotPreperiodic when no near-match is found within the horizon,
    or when the detected cycle is not repelling (the critical orbit is
    periodic rather than preperiodic to a repelling set).
    """
    if horizon < 10:
        raise ValueError("horizon must be at least 10")
    xi = critical_orbit(family, 0.0, horizon)
    qmax = min(64, horizon // 2)
    found = None
    for k in range(horizon - 1):
        for q in range(1, min(qmax, horizon - k) + 1):
            if abs(xi[k + q] - xi[k]) < match_tol:
                found = (k, q)
                break
        if found:
            break
    if found is None:
        raise NotPreperiodic(
            f"no (preperiod, period) match within horizon {horizon} "
            f"at tolerance {match_tol}")
    k, q = found
    z = _newton_cycle(family, 0.0, float(xi[k]), q)
    cycle_pts, dq = _orbit_and_cocycle(family, 0.0, z, q)
    multiplier = abs(dq)
    if multiplier < 1.0:
        raise NotPreperiodic(
            f"critical orbit lands on a non-repelling cycle "
            f"(|Df^{q}| = {multiplier:.3g} < 1); base is not Misiurewicz")
    pre = np.abs(xi[:k]) if k > 0 else np.array([np.inf])
    gap = float(min(pre.min(), np.abs(cycle_pts).min()))
    passed = bool(multiplier >= lambda_min and gap > 0.0)
    return MisiurewiczCertificate(preperiod=k, period=q, cycle_point=float(z),
                                  cycle_multiplier=float(multiplier),
                                  postcritical_gap=gap, horizon=horizon,
                                  passed=passed)


# ---------------------------------------------------------------------------
# gamma_n scales
# ---------------------------------------------------------------------------

def gamma_scale(family: UnimodalFamily, n: int, kappa: float = 1.0) -> float:
    """gamma_n = kappa / |D xi_n(0)|, made monotone by a running minimum.

    Raises OverflowError when the parameter-derivative cocycle leaves
    float range (switch to a log-scale workflow in that case).
    """
    dxi = param_derivative_sequence(family, 0.0, n)
    mags = np.abs(dxi)
    if not np.all(np.isfinite(mags)):
        raise OverflowError(f"|D xi_k(0)| overflow before k = {n}")
    largest = float(np.maximum.accumulate(mags)[-1])
    if largest == 0.0:
        raise NoRootFound("parameter derivative identically zero")
    return kappa / largest


def distortion_onset(family: UnimodalFamily, n: int, threshold: float = 10.0) -> int:
    """Smallest k with |D xi_k(0)| > threshold (the m_0 of the scale lemma)."""
    dxi = np.abs(param_derivative_sequence(family, 0.0, n))
    hits = np.nonzero(dxi > threshold)[0]
    if hits.size == 0:
        raise NoRootFound(f"|D xi_k| never exceeds {threshold} up to k = {n}")
    return int(hits[0])


# ---------------------------------------------------------------------------
# preimage horizon (the N of the superattracting construction)
# ---------------------------------------------------------------------------

def _preimage_gap(family, depth, max_points=2_000_000):
    """Largest gap left in the invariant interval by preimages of 0 of
    depth <= depth (quadratic kinds only)."""
    a, b = family.kernel_params(0.0)
    lo, hi = family.invariant_interval(0.0)
    layer = [0.0]
    pts = [0.0]
    for _ in range(depth):
        nxt = []
        for y in layer:
            r = (y - b) / a
            if r >= 0.0:
                s = math.sqrt(r)
                if lo <= s <= hi:
                    nxt.append(s)
                if lo <= -s <= hi:
                    nxt.append(-s)
        layer = nxt
        pts.extend(nxt)
        if len(pts) > max_points:
            break
    arr = np.sort(np.asarray(pts))
    gaps = np.diff(np.concatenate(([lo], arr, [hi])))
    return float(gaps.max())


def preimage_horizon(family: UnimodalFamily, n: int, cap: int = 25,
                     kappa: float = 1.0) -> int:
    """Data-driven N: smallest N such that preimages of 0 of depth < N are
    eps1/2-dense, with eps1 the guaranteed sweep of xi_n over [0, eps0*gamma_n].
    """
    if family.kernel_params(0.0) is None:
        raise MethodUnavailable("preimage horizon needs a quadratic family")
    cert = certify_misiurewicz(family)
    gam = gamma_scale(family, n, kappa)
    half_gap = cert.postcritical_gap / 2.0
    eps0 = 1.0
    for _ in range(26):
        ok = True
        for frac in (0.5, 1.0):
            xi = critical_orbit(family, eps0 * gam * frac, n)
            if np.abs(xi).min() <= half_gap:
                ok = False
                break
        if ok:
            break
        eps0 /= 2.0
    xi_hi = critical_orbit(family, eps0 * gam, n)[-1]
    xi_lo = critical_orbit(family, 0.0, n)[-1]
    eps1 = abs(xi_hi - xi_lo)
    if eps1 == 0.0:
        raise NoRootFound("xi_n does not move over the gamma_n window")
    for N in range(2, cap + 1):
        if _preimage_gap(family, N - 1) <= eps1 / 2.0:
            return N
    return cap


# ---------------------------------------------------------------------------
# superattracting parameters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SuperattractingParameter:
    n: int
    t_n: float
    p_n: int
    gamma_n: float
    residual: float
    theta_clearance: float

    def to_report(self) -> str:
        lines = ["[superattracting_parameter]"]
        for key in ("n", "t_n", "p_n", "gamma_n", "residual", "theta_clearance"):
            value = getattr(self, key)
            if isinstance(value, float):
                value = format(value, ".17g")
            lines.append(f"{key} = {value}")
        return "\n".join(lines)


def _crit_final(family, t, p):
    x = 0.0
    for _ in range(p):
        x = family.map(t, x)
    return x


def _clearance(family, t, p):
    x = 0.0
    best = math.inf
    for k in range(1, p):
        x = family.map(t, x)
        best = min(best, abs(x))
    return best


def _grid_params(family, ts):
    if family.kind == "raw":
        return np.ones_like(ts), family.c0 + ts
    c = family.c0 + ts
    beta = 0.5 * (1.0 + np.sqrt(1.0 - 4.0 * c))
    return beta, c / beta


def _bisect_root(family, p, tlo, thi, glo, ghi, t_tol):
    for _ in range(200):
        if thi - tlo <= t_tol:
            break
        tm = 0.5 * (tlo + thi)
        if tm == tlo or tm == thi:
            break
        gm = _crit_final(family, tm, p)
        if gm == 0.0:
            return tm
        if (glo < 0.0) != (gm < 0.0):
            thi, ghi = tm, gm
        else:
            tlo, glo = tm, gm
    return 0.5 * (tlo + thi)


def _residual_extended(family, t, p, dps=50):
    """|f_t^p(0)| evaluated in extended precision at the double t."""
    import mpmath

    with mpmath.workdps(dps):
        tm = mpmath.mpf(t)
        c = mpmath.mpf(family.c0) + tm
        if family.kind == "raw":
            a, b = mpmath.mpf(1), c
        else:
            beta = (1 + mpmath.sqrt(1 - 4 * c)) / 2
            a, b = beta, c / beta
        x = mpmath.mpf(0)
        for _ in range(p):
            x = a * x * x + b
        return float(abs(x))


def _refine_extended(family, tlo, thi, p, dps=50):
    """Extended-precision bisection of f_t^p(0) = 0 inside [tlo, thi]."""
    import mpmath

    with mpmath.workdps(dps):
        def g(tm):
            c = mpmath.mpf(family.c0) + tm
            if family.kind == "raw":
                a, b = mpmath.mpf(1), c
            else:
                beta = (1 + mpmath.sqrt(1 - 4 * c)) / 2
                a, b = beta, c / beta
            x = mpmath.mpf(0)
            for _ in range(p):
                x = a * x * x + b
            return x

        lo, hi = mpmath.mpf(tlo), mpmath.mpf(thi)
        glo, ghi = g(lo), g(hi)
        if (glo < 0) == (ghi < 0):
            return float(0.5 * (lo + hi))
        for _ in range(220):
            mid = (lo + hi) / 2
            gm = g(mid)
            if gm == 0:
                return float(mid)
            if (glo < 0) != (gm < 0):
                hi, ghi = mid, gm
            else:
                lo, glo = mid, gm
        return float((lo + hi) / 2)


def find_superattracting(family: UnimodalFamily, n: int, N: int,
                         theta: float = 0.05, t_tol: Optional[float] = None,
                         kappa: float = 1.0,
                         refine_extended: bool = True) -> SuperattractingParameter:
    """Minimal t in (0, gamma_n] with f_t^p(0) = 0 for some p in [n+1, n+N],
    subject to the clearance f_t^k(0) outside (-theta, theta) for 0 < k < p.

    Sign changes of t -> f_t^p(0) are located on a grid sized to the
    oscillation scale 1/|D xi_{p-1}| and refined by bisection (the map
    oscillates violently in t; bisection on a bracket is unconditionally
    convergent).
    """
    if family.kernel_params(0.0) is None:
        raise MethodUnavailable("superattracting scan needs a quadratic family")
    gam = gamma_scale(family, n, kappa)
    if t_tol is None:
        t_tol = 8.0 * _kernels.EPS * (abs(family.c0) + 1.0)
    candidates = []
    total_grid = 0
    for p in range(n + 1, n + N + 1):
        m = int(min(4_194_304, max(1024, 32 * 4 ** max(p - 1 - n, 0))))
        total_grid += m
        ts = np.linspace(gam / m, gam, m)
        avec, bvec = _grid_params(family, ts)
        vals = _kernels.crit_final_on_grid(np.ascontiguousarray(avec, dtype=float),
                                           np.ascontiguousarray(bvec, dtype=float), p)
        sign = vals < 0.0
        flips = np.nonzero(sign[:-1] != sign[1:])[0]
        exact = np.nonzero(vals == 0.0)[0]
        roots = []
        for i in flips:
            roots.append(_bisect_root(family, p, ts[i], ts[i + 1],
                                      vals[i], vals[i + 1], t_tol))
        for i in exact:
            roots.append(float(ts[i]))
        for t_root in roots:
            if not (0.0 < t_root <= gam):
                continue
            clear = _clearance(family, t_root, p)
            candidates.append((t_root, p, clear))
    if not candidates:
        raise NoRootFound(
            f"no sign change of f_t^p(0) for p in [{n + 1}, {n + N}] on a "
            f"{total_grid}-point grid over (0, {gam:.3g}]")
    admissible = [c for c in candidates if c[2] > theta]
    if not admissible:
        raise ClearanceFailed(
            f"all {len(candidates)} roots violate the (-{theta}, {theta}) "
            "avoidance window")
    admissible.sort(key=lambda c: (c[0], c[1]))
    t_best, p_best, clear_best = admissible[0]
    # drop near-duplicates of the same root found at multiples of the period
    for t_c, p_c, cl_c in admissible:
        if abs(t_c - t_best) <= 4.0 * t_tol and p_c < p_best:
            t_best, p_best, clear_best = t_c, p_c, cl_c
    if refine_extended:
        width = max(8.0 * t_tol, 64.0 * _kernels.EPS * max(t_best, 1e-300))
        t_best = _refine_extended(family, max(t_best - width, 0.0),
                                  t_best + width, p_best)
        clear_best = _clearance(family, t_best, p_best)
        residual = _residual_extended(family, t_best, p_best)
    else:
        residual = abs(_crit_final(family, t_best, p_best))
    return SuperattractingParameter(n=n, t_n=float(t_best), p_n=int(p_best),
                                    gamma_n=float(gam), residual=float(residual),
                                    theta_clearance=float(clear_best))


def superattracting_cascade(family: UnimodalFamily, n_values: Sequence[int],
                            theta: float = 0.05, kappa: float = 1.0,
                            N: Optional[int] = None,
                            refine_extended: bool = True):
    """find_superattracting over a range of n with one shared preimage
    horizon N (fixing N across the cascade keeps the t_n sequence on a
    single geometric ladder)."""
    n_values = sorted(n_values)
    if N is None:
        N = preimage_horizon(family, max(n_values), kappa=kappa)
    out = []
    for n in n_values:
        out.append(find_superattracting(family, n, N, theta=theta, kappa=kappa,
                                        refine_extended=refine_extended))
    return out


# ---------------------------------------------------------------------------
# continuation of preperiodic points
# ---------------------------------------------------------------------------

def _newton_preimage(family, t, target, preperiod, x0, tol, max_iter=60):
    """Solve f_t^preperiod(x) = target by Newton from x0.

    Deep preimages evaluate f^preperiod with a round-off floor amplified
    by the derivative cocycle, so Newton is also accepted when it
    stagnates at a small step size instead of reaching tol.
    """
    lo, hi = family.invariant_interval(t)
    scale = abs(hi - lo)
    x = x0
    prev = math.inf
    for it in range(max_iter):
        pts, dp = _orbit_and_cocycle(family, t, x, preperiod)
        y = family.map(t, pts[-1])  # f^preperiod(x); pts ends at f^{preperiod-1}(x)
        if dp == 0.0:
            raise NewtonDiverged("critical point inside Newton path")
        step = (y - target) / dp
        x -= step
        if abs(x - x0) > 0.5 * scale:
            raise NewtonDiverged("Newton left the neighbourhood of the start")
        if abs(step) < tol:
            return x
        if it >= 3 and abs(step) >= 0.5 * prev and prev < 1e-5 * scale:
            return x
        prev = abs(step)
    raise NewtonDiverged("preimage Newton did not converge")


def continue_preperiodic(family: UnimodalFamily, x0: float, preperiod: int,
                         period: int, t: float) -> float:
    """Continuation x_t of a preperiodic point x0 of f_0.

    The landing cycle is refined at t = 0, continued to t by Newton, and
    x_t is solved from f_t^preperiod(x_t) = (continued cycle point) on the
    same monotone branch as x0; a pullback audit rejects branch jumps.
    """
    family.check_t(t)
    lo, hi = family.invariant_interval(t)
    tol = 64 * _kernels.EPS * abs(hi - lo)
    z0 = x0
    for _ in range(preperiod):
        z0 = family.map(0.0, z0)
    z0 = _newton_cycle(family, 0.0, z0, period)
    z_t = _newton_cycle(family, t, z0, period)
    if preperiod == 0:
        return float(z_t)
    x_t = _newton_preimage(family, t, z_t, preperiod, x0, tol)
    resid = _crit_from(family, t, x_t, preperiod) - z_t
    # the evaluation of f^preperiod carries round-off amplified by the
    # worst suffix of the derivative cocycle; budget the residual check
    pts, dp = _orbit_and_cocycle(family, t, x_t, preperiod)
    prefix = 1.0
    amp = 1.0
    for k in range(preperiod):
        prefix *= family.dmap_dx(t, pts[k])
        if prefix != 0.0:
            amp = max(amp, abs(dp / prefix))
    if abs(resid) > max(1e4 * tol, 512.0 * _kernels.EPS * abs(hi - lo) * amp):
        raise NewtonDiverged(f"preperiodicity residual {resid:.3g} too large")
    params = family.kernel_params(t)
    if params is not None:
        a, b = params
        wlo, whi, _, _, ok = _kernels.monotone_pullback(a, b, float(x_t),
                                                        int(preperiod), lo, hi)
        # slack covers the interval's own motion in t (boundary points of the
        # t=0 branch need not lie inside the t-branch exactly)
        slack = 64 * _kernels.EPS * abs(hi - lo) + 0.05 * (whi - wlo)
        if not ok or not (wlo - slack <= x0 <= whi + slack):
            raise NewtonDiverged("continuation jumped to another monotone branch")
    return float(x_t)


def _crit_from(family, t, x, m):
    for _ in range(m):
        x = family.map(t, x)
    return x


# ---------------------------------------------------------------------------
# returning interval pair U_1 inside U_0
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReturningIntervalPair:
    u0: tuple
    u1: tuple
    theta: float
    boundary_orbit_horizon: int
    q0_preperiod: int
    q1_preperiod: int
    landing_point: float
    landing_period: int
    t: float

    @property
    def u0_halfwidth(self):
        return 0.5 * (self.u0[1] - self.u0[0])

    @property
    def u1_halfwidth(self):
        return 0.5 * (self.u1[1] - self.u1[0])

    def to_report(self) -> str:
        lines = ["[returning_interval_pair]"]
        for key, val in (("u0_lo", self.u0[0]), ("u0_hi", self.u0[1]),
                         ("u1_lo", self.u1[0]), ("u1_hi", self.u1[1]),
                         ("theta", self.theta),
                         ("boundary_orbit_horizon", self.boundary_orbit_horizon),
                         ("q0_preperiod", self.q0_preperiod),
                         ("q1_preperiod", self.q1_preperiod),
                         ("landing_point", self.landing_point),
                         ("landing_period", self.landing_period),
                         ("t", self.t)):
            if isinstance(val, float):
                val = format(val, ".17g")
            lines.append(f"{key} = {val}")
        return "\n".join(lines)


def _interior_fixed_point(family):
    """The repelling fixed point inside the interval (not the boundary one)."""
    c = family.c0
    alpha_raw = 0.5 * (1.0 - math.sqrt(1.0 - 4.0 * c))
    if family.kind == "raw":
        return alpha_raw
    beta = 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * c))
    return alpha_raw / beta


def _landing_targets(family, cert):
    """Candidate repelling cycles for U-boundary orbits, best first.

    The target cycle must be disjoint from the cycle the critical orbit
    lands on: the backward tree of the landing cycle passes through the
    critical point, which kills both continuation and root bracketing
    (preimages through 0 are double roots).  The period-2 cycle exists and
    repels for every real Misiurewicz base; the interior fixed point is
    the fallback.
    """
    landing = []
    z = cert.cycle_point
    for _ in range(cert.period):
        landing.append(z)
        z = family.map(0.0, z)
    targets = []
    c = family.c0
    disc2 = -4.0 * c - 3.0
    if disc2 > 0.0:
        z2 = 0.5 * (-1.0 + math.sqrt(disc2))
        if family.kind == "normalized":
            z2 = z2 / _beta_of(c)
        targets.append((z2, 2))
    targets.append((_interior_fixed_point(family), 1))
    out = []
    for z, per in targets:
        pts = []
        y = z
        for _ in range(per):
            pts.append(y)
            y = family.map(0.0, y)
        gap = min(abs(p - l) for p in pts for l in landing)
        if gap > 1e-4:
            out.append((z, per, min(abs(p) for p in pts)))
    return out


def _beta_of(c):
    return 0.5 * (1.0 + math.sqrt(1.0 - 4.0 * c))


def _verified_preperiodic(family, q, j, target, cycle_min_abs, avoid_halfwidth,
                          land_tol):
    """Check exact landing and forward avoidance of (-avoid, avoid)."""
    x = q
    for i in range(1, j + 1):
        x = family.map(0.0, x)
        if abs(x) <= avoid_halfwidth and i < j:
            return False
        if i == j and abs(x - target) > land_tol:
            return False
    return cycle_min_abs > avoid_halfwidth


def _find_preperiodic_endpoint(family, window, target, cycle_min_abs, avoid_for,
                               land_tol, jmax=70, grid_points=4096):
    """Largest verified preperiodic point q in the window with f^j(q) = target.

    Candidates come from quadratic-shadow seeds q ~ sqrt((target - f^j(0)) /
    Df^{j-1}(f(0))) (points near 0 shadow the critical orbit), with a bounded
    grid scan of f^j(q) - target as a fallback; avoid_for(q) gives the
    avoidance halfwidth the candidate must clear.  Returns (q, j) or None.
    """
    qlo, qhi = window
    a, b = family.kernel_params(0.0)
    v = family.critical_value(0.0)
    best = None
    # direct scan over shallow depths; rightmost sign changes give the
    # largest candidates, which the windows prefer
    for j in range(2, min(jmax, 16) + 1):
        grid = np.linspace(qlo, qhi, grid_points)
        vals = _kernels.iterate_grid(a, b, grid, j) - target
        for q in _bisect_grid(a, b, grid, vals, j, target, land_tol, max_flips=32):
            if _verified_preperiodic(family, q, j, target, cycle_min_abs,
                                     avoid_for(q), land_tol * 10):
                if best is None or q > best[0]:
                    best = (q, j)
        if best is not None and best[0] > 0.85 * qhi:
            return best
    # shadow seeds reach the small windows that the scan cannot resolve
    for j in range(2, jmax + 1):
        wjv = _kernels.crit_from_scalar(a, b, 0.0, j)
        coc_val = 1.0
        y = v
        for _ in range(j - 1):
            coc_val *= family.dmap_dx(0.0, y)
            y = family.map(0.0, y)
        r = (target - wjv) / coc_val if coc_val != 0.0 else -1.0
        if r <= 0.0:
            continue
        seed = math.sqrt(r)
        if not (0.4 * qlo < seed < 2.2 * qhi):
            continue
        s_lo = max(qlo, 0.70 * seed)
        s_hi = min(qhi, 1.43 * seed)
        if s_lo >= s_hi:
            continue
        grid = np.linspace(s_lo, s_hi, 192)
        vals = _kernels.iterate_grid(a, b, grid, j) - target
        for q in _bisect_grid(a, b, grid, vals, j, target, land_tol):
            if _verified_preperiodic(family, q, j, target, cycle_min_abs,
                                     avoid_for(q), land_tol * 10):
                if best is None or q > best[0]:
                    best = (q, j)
    return best


def _bisect_grid(a, b, grid, vals, j, target, land_tol, max_flips=None):
    found = []
    sign = vals < 0.0
    flips = np.nonzero(sign[:-1] != sign[1:])[0]
    if max_flips is not None and flips.size > max_flips:
        flips = flips[-max_flips:]
    for i in flips:
        qlo, qhi = grid[i], grid[i + 1]
        glo = vals[i]
        for _ in range(200):
            qm = 0.5 * (qlo + qhi)
            if qm == qlo or qm == qhi:
                break
            gm = _kernels.crit_from_scalar(a, b, qm, j) - target
            if gm == 0.0:
                qlo = qhi = qm
                break
            if (glo < 0.0) != (gm < 0.0):
                qhi = qm
            else:
                qlo, glo = qm, gm
        q = 0.5 * (qlo + qhi)
        if abs(_kernels.crit_from_scalar(a, b, q, j) - target) <= land_tol:
            found.append(q)
    return found


def build_returning_pair(family: UnimodalFamily, t: float, theta: float,
                         horizon: int = DEFAULT_HORIZON) -> ReturningIntervalPair:
    """Nested symmetric intervals U_1 inside U_0 around 0 whose boundary
    points are exactly preperiodic with forward orbits avoiding U_0.

    Built at t = 0 from preperiodic points landing on the interior
    repelling fixed point, then continued to t; |U_1| <= theta *
    dist(U_1, boundary of U_0) by construction.
    """
    if family.kernel_params(0.0) is None:
        raise ConstructionFailed("returning pair construction needs a quadratic family")
    if theta <= 0.0:
        raise ValueError("theta must be positive")
    cert = certify_misiurewicz(family)
    lo, hi = family.invariant_interval(0.0)
    last_err = "no landing target available"
    for z_target, period, cyc_min in _landing_targets(family, cert):
        z_target = _newton_cycle(family, 0.0, z_target, period)
        land_tol = 1e-8 * max(1.0, abs(z_target))
        cap0 = min(0.98 * theta, 0.97 * cyc_min, 0.98 * hi)
        window0 = (0.40 * cap0, cap0)
        hit0 = _find_preperiodic_endpoint(family, window0, z_target, cyc_min,
                                          lambda q: q, land_tol)
        if hit0 is None:
            last_err = f"no admissible preperiodic U_0 endpoint in {window0}"
            continue
        q0, j0 = hit0
        cap1 = theta * q0 / (2.0 + theta)
        window1 = (0.30 * cap1, 0.95 * cap1)
        hit1 = _find_preperiodic_endpoint(family, window1, z_target, cyc_min,
                                          lambda q: q0, land_tol)
        if hit1 is None:
            last_err = f"no admissible preperiodic U_1 endpoint in {window1}"
            continue
        q1, j1 = hit1
        if t != 0.0:
            q0_t = continue_preperiodic(family, q0, j0, period, t)
            q1_t = continue_preperiodic(family, q1, j1, period, t)
            z_t = _newton_cycle(family, t, z_target, period)
            if not _verified_preperiodic_at(family, t, q0_t, j0, z_t, q0_t,
                                            land_tol * 100):
                raise ConstructionFailed("continued U_0 endpoint lost its avoidance")
            if not _verified_preperiodic_at(family, t, q1_t, j1, z_t, q0_t,
                                            land_tol * 100):
                raise ConstructionFailed("continued U_1 endpoint lost its avoidance")
        else:
            q0_t, q1_t = q0, q1
        if 2.0 * q1_t > theta * (q0_t - q1_t):
            raise ConstructionFailed("U_1 width constraint failed after continuation")
        return ReturningIntervalPair(u0=(-q0_t, q0_t), u1=(-q1_t, q1_t),
                                     theta=theta,
                                     boundary_orbit_horizon=horizon,
                                     q0_preperiod=j0, q1_preperiod=j1,
                                     landing_point=float(z_target),
                                     landing_period=period, t=float(t))
    raise ConstructionFailed(f"{last_err}; retry with smaller theta")


def _verified_preperiodic_at(family, t, q, j, target, avoid_halfwidth, land_tol):
    x = q
    for i in range(1, j + 1):
        x = family.map(t, x)
        if abs(x) <= avoid_halfwidth and i < j:
            return False
    return abs(x - target) <= land_tol and abs(target) > avoid_halfwidth
