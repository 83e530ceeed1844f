"""Predictor-corrector tracing of level sets {|f| = eps} and gradient rays
{arg f = alpha}, with continuous-argument bookkeeping.

Level arcs are parametrized by the argument of f itself (RK4 on
dz/dtau = i * direction * f/f'), gradient arcs by log|f| (dz/dsigma =
sign * f/f'); every node is Newton-projected back onto the constraint,
so the traced data satisfies it to corrector tolerance.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import SampledCurve, winding_number
from .errors import PreconditionError, TraceError
from .polynomials import as_rational, critical_values

DEFAULT_STEP = 0.01          # radians of arg (level) / log-modulus (gradient)
CORRECTOR_TOL = 1e-11        # relative constraint residual after projection
LEVEL_INVARIANT_TOL = 1e-8   # contract: max | |f|-eps | / eps on level arcs
CRITICAL_FIELD_TOL = 1e-10   # |f'| below this scale aborts a trace
_MAX_DZ_FACTOR = 0.05        # clamp on per-step motion, relative to 1+|z|


# -- stop rules ---------------------------------------------------------------


@dataclass(frozen=True)
class ArgChangeReaches:
    delta: float  # signed total change of arg f


@dataclass(frozen=True)
class ClosedLoop:
    pass


@dataclass(frozen=True)
class HitsGradient:
    alpha: float
    crossing: int = 1  # stop at the k-th crossing of arg f = alpha


@dataclass
class TracedArc:
    samples: np.ndarray
    f_values: np.ndarray
    arg_lift: np.ndarray
    kind: str        # "level" or "gradient"
    value: float     # eps for level arcs, alpha for gradient arcs

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=complex)
        self.f_values = np.asarray(self.f_values, dtype=complex)
        self.arg_lift = np.asarray(self.arg_lift, dtype=float)

    def curve(self, closed=False) -> SampledCurve:
        return SampledCurve(self.samples, closed=closed)

    def __len__(self):
        return self.samples.size


def arg_change_along(arc: TracedArc) -> float:
    """Total change of the continuous argument lift along the arc."""
    if len(arc) == 0:
        raise PreconditionError("empty arc")
    return float(arc.arg_lift[-1] - arc.arg_lift[0])


# -- scalar evaluation kernels -------------------------------------------------


def _scalar_kernels(f):
    """Fast scalar (f, f') evaluation closures from cached coefficient lists."""
    f = as_rational(f)
    nc = [complex(c) for c in f.num.coeffs][::-1]
    dc = [complex(c) for c in f.den.coeffs][::-1]
    nd = [complex(c) for c in f.num.derivative().coeffs][::-1]
    dd = [complex(c) for c in f.den.derivative().coeffs][::-1]

    def horner(cs, z):
        acc = cs[0]
        for c in cs[1:]:
            acc = acc * z + c
        return acc

    if len(dc) == 1 and dc[0] == 1.0:

        def fd(z):
            return horner(nc, z), horner(nd, z)

    else:

        def fd(z):
            n = horner(nc, z)
            d = horner(dc, z)
            dn = horner(nd, z)
            ddv = horner(dd, z)
            return n / d, (dn * d - n * ddv) / (d * d)

    return fd


def _field_scale(f, z) -> float:
    return float(f.num.derivative().eval_scale(z) + 1.0)


def solve_target(f, w, seed, tol: float = 1e-12) -> complex:
    """Newton-solve f(z) = w from the given seed.

    The tolerance is relative to |w| (absolute when w == 0); landing on a
    critical point or diverging raises TraceError carrying the iterates.
    """
    f = as_rational(f)
    fd = _scalar_kernels(f)
    w = complex(w)
    z = complex(seed)
    goal = tol * (abs(w) if w != 0 else 1.0)
    trail = [z]
    for _ in range(80):
        fv, dv = fd(z)
        if abs(fv - w) <= goal:
            break
        if abs(dv) < CRITICAL_FIELD_TOL * _field_scale(f, z):
            raise TraceError(
                f"Newton landed on a critical point near {z:.6g}", samples=trail
            )
        step = (fv - w) / dv
        if not np.isfinite(step.real) or not np.isfinite(step.imag):
            raise TraceError(f"Newton diverged near {z:.6g}", samples=trail)
        z = z - step
        trail.append(z)
    else:
        raise TraceError(
            f"Newton did not reach |f(z)-w| <= {goal:.3g} from seed {seed:.6g}",
            samples=trail,
        )
    fv, dv = fd(z)
    # a solution this close to a target with |f'|^2 ~ goal*|f''| is a
    # numerically multiple preimage, i.e. a critical point landing
    h = 1e-5 * (1.0 + abs(z))
    d2 = abs(fd(z + h)[1] - fd(z - h)[1]) / (2 * h)
    if abs(dv) < CRITICAL_FIELD_TOL * _field_scale(f, z) or abs(dv) ** 2 <= 8.0 * goal * d2:
        raise TraceError(f"solution {z:.6g} is a critical point", samples=trail)
    return z


def _project(fd, z, w_target, rel_scale):
    """Newton-project z onto f(z) = w_target (few quadratic steps)."""
    for _ in range(8):
        fv, dv = fd(z)
        err = fv - w_target
        if abs(err) <= CORRECTOR_TOL * rel_scale:
            return z, fv, dv
        if abs(dv) == 0:
            raise TraceError(f"corrector hit a critical point near {z:.6g}")
        z = z - err / dv
    fv, dv = fd(z)
    if abs(fv - w_target) > 100 * CORRECTOR_TOL * rel_scale:
        raise TraceError(f"corrector stalled near {z:.6g}")
    return z, fv, dv


def trace_level(f, eps, start, direction, stop, step: float = DEFAULT_STEP) -> TracedArc:
    """Follow {|f| = eps} from start with arg f moving in the given direction.

    Stop rules: ArgChangeReaches(delta), ClosedLoop(), HitsGradient(alpha, k).
    The endpoint is Newton-polished onto the exact stop target.
    """
    f = as_rational(f)
    if eps <= 0:
        raise PreconditionError("level needs eps > 0")
    if direction not in (1, -1):
        raise PreconditionError("direction must be +1 or -1")
    fd = _scalar_kernels(f)
    z = complex(start)
    fv, dv = fd(z)
    if abs(abs(fv) - eps) > 1e-3 * eps:
        raise PreconditionError(
            f"start point has |f| = {abs(fv):.6g}, expected {eps:.6g}"
        )
    # project start exactly onto the level set, keeping its argument
    z, fv, dv = _project(fd, z, eps * fv / abs(fv), eps)
    lift0 = float(np.angle(fv))
    lift = lift0

    if isinstance(stop, HitsGradient):
        rel = (stop.alpha - lift0) * direction % (2 * np.pi)
        if rel < 1e-12:
            rel = 2 * np.pi
        delta = direction * (rel + (stop.crossing - 1) * 2 * np.pi)
        stop = ArgChangeReaches(delta)
    if isinstance(stop, ArgChangeReaches):
        if stop.delta == 0 or np.sign(stop.delta) != direction:
            raise PreconditionError("stop delta must be nonzero with the trace's sign")
        budget = abs(stop.delta) + 4 * step
    else:
        deg_budget = f.num.degree + f.den.degree + 1
        budget = 2 * np.pi * deg_budget + 4 * step

    samples = [z]
    fvals = [fv]
    lifts = [lift]
    max_steps = int(budget / step * 4) + 64

    def field(zz):
        fz, dz_ = fd(zz)
        if abs(dz_) < CRITICAL_FIELD_TOL * _field_scale(f, zz):
            raise TraceError(f"critical point encountered near {zz:.6g}")
        return 1j * direction * fz / dz_

    for _ in range(max_steps):
        # clamp per-step motion near critical points
        v1 = field(z)
        h = min(step, _MAX_DZ_FACTOR * (1.0 + abs(z)) / max(abs(v1), 1e-300))
        k1 = v1
        k2 = field(z + 0.5 * h * k1)
        k3 = field(z + 0.5 * h * k2)
        k4 = field(z + h * k3)
        z_pred = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        fp, _ = fd(z_pred)
        if fp == 0:
            raise TraceError(f"trace hit a zero of f near {z_pred:.6g}")
        z_new, f_new, _ = _project(fd, z_pred, eps * fp / abs(fp), eps)
        dphi = float(np.angle(f_new / fvals[-1]))
        if abs(dphi) >= np.pi / 4:
            raise TraceError(f"argument jump {dphi:.3g} too large near {z_new:.6g}")
        lift += dphi
        z = z_new
        samples.append(z)
        fvals.append(f_new)
        lifts.append(lift)

        if isinstance(stop, ArgChangeReaches):
            if (lift - lift0) * direction >= abs(stop.delta) - 1e-13:
                target = eps * np.exp(1j * (lift0 + stop.delta))
                z_end = solve_target(f, target, z)
                f_end, _ = fd(z_end)
                samples[-1] = z_end
                fvals[-1] = f_end
                lifts[-1] = lift0 + stop.delta
                arc = TracedArc(samples, fvals, lifts, "level", float(eps))
                _check_level_invariant(arc, eps)
                return arc
        else:  # ClosedLoop
            laps = (lift - lift0) * direction / (2 * np.pi)
            if laps >= 1.0 - step / (2 * np.pi):
                k = int(round(laps))
                if k >= 1 and abs(laps - k) <= step:
                    target = eps * np.exp(1j * lift0)
                    z_end = solve_target(f, target, z)
                    if abs(z_end - samples[0]) <= 1e-7 * (1.0 + abs(samples[0])):
                        samples[-1] = samples[0]
                        fvals[-1] = fvals[0]
                        lifts[-1] = lift0 + direction * 2 * np.pi * k
                        arc = TracedArc(samples, fvals, lifts, "level", float(eps))
                        _check_level_invariant(arc, eps)
                        return arc
    raise TraceError(
        f"stop rule not met within step budget ({max_steps} steps)", samples=samples
    )


def _check_level_invariant(arc: TracedArc, eps: float):
    dev = float(np.max(np.abs(np.abs(arc.f_values) - eps))) / eps
    if dev > LEVEL_INVARIANT_TOL:
        raise TraceError(f"level invariant violated: relative deviation {dev:.3g}")
    gaps = np.abs(np.diff(arc.arg_lift))
    if gaps.size and gaps.max() >= np.pi / 4:
        raise TraceError("argument lift has a gap >= pi/4")


def trace_gradient(
    f, alpha, start, target_modulus, step: float = DEFAULT_STEP
) -> TracedArc:
    """Follow {arg f = alpha} from start until |f| reaches target_modulus.

    alpha may be any lift of the start argument; the returned arc stores it
    unchanged so chained traces keep a continuous argument bookkeeping.
    """
    f = as_rational(f)
    if target_modulus <= 0:
        raise PreconditionError("target modulus must be positive")
    fd = _scalar_kernels(f)
    z = complex(start)
    fv, _ = fd(z)
    m0 = abs(fv)
    if m0 == 0:
        raise PreconditionError("start point is a zero of f")
    if abs(target_modulus - m0) <= 1e-12 * m0:
        raise PreconditionError("target modulus equals the start modulus")
    mis = float(np.angle(fv * np.exp(-1j * alpha)))
    if abs(mis) > 1e-3:
        raise PreconditionError(
            f"start argument {np.angle(fv):.6g} is not alpha (mod 2pi)"
        )
    phase = np.exp(1j * float(alpha))
    z, fv, _ = _project(fd, z, m0 * phase, m0)
    sgn = 1.0 if target_modulus > abs(fv) else -1.0
    u_goal = float(np.log(target_modulus))

    samples = [z]
    fvals = [fv]
    max_steps = int(abs(u_goal - np.log(abs(fv))) / step * 4) + 64

    def field(zz):
        fz, dz_ = fd(zz)
        if abs(dz_) < CRITICAL_FIELD_TOL * _field_scale(f, zz):
            raise TraceError(f"critical point encountered near {zz:.6g}")
        return sgn * fz / dz_

    for _ in range(max_steps):
        v1 = field(z)
        h = min(step, _MAX_DZ_FACTOR * (1.0 + abs(z)) / max(abs(v1), 1e-300))
        k1 = v1
        k2 = field(z + 0.5 * h * k1)
        k3 = field(z + 0.5 * h * k2)
        k4 = field(z + h * k3)
        z_pred = z + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        fp, _ = fd(z_pred)
        z_new, f_new, _ = _project(fd, z_pred, abs(fp) * phase, abs(fp))
        z = z_new
        samples.append(z)
        fvals.append(f_new)
        if sgn * (np.log(abs(f_new)) - u_goal) >= -1e-13:
            z_end = solve_target(f, target_modulus * phase, z)
            f_end, _ = fd(z_end)
            samples[-1] = z_end
            fvals[-1] = f_end
            fv_arr = np.asarray(fvals)
            mods = np.abs(fv_arr)
            if not (np.all(np.diff(mods) > 0) or np.all(np.diff(mods) < 0)):
                raise TraceError("modulus not strictly monotone along gradient arc")
            dev = np.max(np.abs(np.angle(fv_arr * np.exp(-1j * float(alpha)))))
            if dev > LEVEL_INVARIANT_TOL:
                raise TraceError(f"gradient invariant violated: arg deviation {dev:.3g}")
            lifts = np.full(len(samples), float(alpha))
            return TracedArc(samples, fvals, lifts, "gradient", float(alpha))
    raise TraceError("target modulus not reached within step budget", samples=samples)


def _component_through(f, eps, z0, step, zero_pts):
    """Trace the closed component of {|f| = eps} bounding the sublevel region
    of the zero z0. Returns (loop, winding signature over zero_pts)."""
    f = as_rational(f)
    fd = _scalar_kernels(f)
    z0 = complex(z0)
    bound = 16.0 * (1.0 + max(abs(z) for z in zero_pts)) + 4.0 * eps
    last_err = None
    for phi in (0.0, np.pi / 2, np.pi, 3 * np.pi / 2, np.pi / 4, 5 * np.pi / 4):
        u = np.exp(1j * phi)
        try:
            t_lo, t_hi = 1e-9 * (1.0 + abs(z0)), None
            t = 1e-6 * (1.0 + abs(z0))
            while t <= bound:
                if abs(fd(z0 + t * u)[0]) >= eps:
                    t_hi = t
                    break
                t_lo = t
                t *= 1.6
            if t_hi is None:
                continue
            for _ in range(200):  # bisect to the first crossing
                tm = 0.5 * (t_lo + t_hi)
                if abs(fd(z0 + tm * u)[0]) >= eps:
                    t_hi = tm
                else:
                    t_lo = tm
                if t_hi - t_lo < 1e-12 * (1.0 + t_hi):
                    break
            seed = z0 + t_hi * u
            fs, _ = fd(seed)
            seed = solve_target(f, eps * fs / abs(fs), seed)
            arc = trace_level(f, eps, seed, +1, ClosedLoop(), step=step)
            loop = SampledCurve(arc.samples[:-1], closed=True)
            signature = tuple(winding_number(loop, z) for z in zero_pts)
            return loop, signature
        except TraceError as err:
            last_err = err
            continue
    raise last_err or TraceError(f"could not seed the level component of {z0:.6g}")


def level_component_enclosing(
    f, eps, zeros_subset, step: float = DEFAULT_STEP
) -> SampledCurve:
    """The closed component of {|f| = eps} that winds about every listed zero
    of f and about no other zero.

    Seeded by marching a ray from the first listed zero to its first level
    crossing, then tracing a closed loop. Fails naming the critical value
    that blocks the requested grouping.
    """
    f = as_rational(f)
    if f.num.degree < 1:
        raise PreconditionError("f needs at least one zero")
    if eps <= 0:
        raise PreconditionError("eps must be positive")
    cvals = critical_values(f.num) if f.is_polynomial and f.num.degree >= 2 else []
    for cv in cvals:
        if abs(abs(cv) - eps) < 1e-9 * max(eps, abs(cv)):
            raise PreconditionError(
                f"eps {eps:.6g} coincides with critical modulus |{cv:.6g}|"
            )
    zero_pts = sorted({complex(r) for r, _ in f.zeros()}, key=lambda z: (z.real, z.imag))
    subset = []
    for p in zeros_subset:
        p = complex(p)
        match = min(zero_pts, key=lambda z: abs(z - p))
        if abs(match - p) > 1e-6 * (1.0 + abs(match)):
            raise PreconditionError(f"{p:.6g} is not a zero of f")
        if match not in subset:
            subset.append(match)
    others = [z for z in zero_pts if z not in subset]

    loop, signature = _component_through(f, eps, subset[0], step, zero_pts)
    got = dict(zip(zero_pts, signature))
    if all(got[z] >= 1 for z in subset) and all(got[z] == 0 for z in others):
        return loop
    enclosed = [z for z in zero_pts if got[z] >= 1]
    raise TraceError(
        "no component separates the requested zeros: component through "
        f"{subset[0]:.6g} encloses {enclosed}; blocking critical value "
        f"{_blocking_value(cvals, eps, len(enclosed) > len(subset)):.6g}"
    )


def _blocking_value(cvals, eps, too_many):
    mods = [cv for cv in cvals if abs(cv) > 0]
    if not mods:
        return 0j
    if too_many:
        below = [cv for cv in mods if abs(cv) < eps]
        return max(below, key=abs) if below else min(mods, key=lambda c: abs(abs(c) - eps))
    above = [cv for cv in mods if abs(cv) > eps]
    return min(above, key=abs) if above else min(mods, key=lambda c: abs(abs(c) - eps))
