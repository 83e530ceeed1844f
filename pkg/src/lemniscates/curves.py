"""Sampled closed curves, winding numbers, and argument-principle counting.

Winding numbers are computed by summing exactly-wrapped turn angles of the
sample polygon, which is integer-stable: each wrapped increment is the true
turn of the polygon segment, so the sum telescopes to a multiple of 2*pi up
to rounding noise.
"""
from __future__ import annotations

import numpy as np

from .errors import NumericalError, PreconditionError
from .polynomials import as_rational

NEAR_HIT = 1e-9  # fixed near-hit rejection threshold
_MAX_REFINE_POINTS = 1_000_000


class SampledCurve:
    """Ordered complex samples of a curve; closed curves wrap implicitly."""

    __slots__ = ("points", "closed", "_orientation")

    def __init__(self, points, closed=True):
        pts = np.atleast_1d(np.asarray(points, dtype=complex))
        if pts.ndim != 1:
            raise PreconditionError("curve points must be a 1-d sequence")
        if not np.all(np.isfinite(pts)):
            raise PreconditionError("curve points must be finite")
        if closed and pts.size >= 2 and abs(pts[-1] - pts[0]) == 0.0:
            pts = pts[:-1]  # drop duplicated closing point
        minimum = 3 if closed else 2
        if pts.size < minimum:
            raise PreconditionError(f"need at least {minimum} points")
        nxt = np.roll(pts, -1) if closed else pts[1:]
        base = pts if closed else pts[:-1]
        if np.any(nxt == base):
            raise PreconditionError("consecutive curve points must be distinct")
        self.points = pts
        self.closed = bool(closed)
        self._orientation = None

    @property
    def orientation(self) -> int:
        """+1 for counterclockwise, -1 for clockwise (shoelace sign)."""
        if self._orientation is None:
            if not self.closed:
                raise PreconditionError("orientation needs a closed curve")
            p = self.points
            q = np.roll(p, -1)
            area2 = np.sum(p.real * q.imag - q.real * p.imag)
            self._orientation = 1 if area2 > 0 else -1
        return self._orientation

    def reversed(self) -> "SampledCurve":
        return SampledCurve(self.points[::-1], closed=self.closed)

    def diameter(self) -> float:
        p = self.points
        return float(
            np.hypot(p.real.max() - p.real.min(), p.imag.max() - p.imag.min())
        )

    def __len__(self):
        return self.points.size

    def __repr__(self):
        kind = "closed" if self.closed else "open"
        return f"SampledCurve({self.points.size} pts, {kind})"


def unit_circle(n: int = 512, radius: float = 1.0, center: complex = 0.0) -> SampledCurve:
    t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    return SampledCurve(center + radius * np.exp(1j * t), closed=True)


def ellipse(a: float, b: float, n: int = 512) -> SampledCurve:
    t = np.linspace(0.0, 2 * np.pi, n, endpoint=False)
    return SampledCurve(a * np.cos(t) + 1j * b * np.sin(t), closed=True)


def _turn_angles(points: np.ndarray, w: complex) -> np.ndarray:
    d = points - w
    ratio = np.roll(d, -1) / d
    return np.angle(ratio)


def winding_number(c: SampledCurve, w, return_residual: bool = False):
    """Winding of a closed curve about w; rejects w within NEAR_HIT of a sample."""
    if not c.closed:
        raise PreconditionError("winding number needs a closed curve")
    w = complex(w)
    d = np.abs(c.points - w)
    if d.min() < NEAR_HIT:
        raise PreconditionError(
            f"point {w:.6g} within {NEAR_HIT:g} of a curve sample"
        )
    total = float(np.sum(_turn_angles(c.points, w)))
    k = int(round(total / (2 * np.pi)))
    residual = abs(total / (2 * np.pi) - k)
    if return_residual:
        return k, residual
    return k


def _segment_distances(points: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """Min distance from each w to the closed polygon through `points`."""
    a = points
    b = np.roll(points, -1)
    u = b - a
    L2 = np.maximum(np.abs(u) ** 2, 1e-300)
    out = np.empty(ws.size)
    block = max(1, int(2_000_000 // max(points.size, 1)))
    for i in range(0, ws.size, block):
        wb = ws[i : i + block]
        rel = wb[:, None] - a[None, :]
        t = np.clip((rel * np.conj(u)[None, :]).real / L2[None, :], 0.0, 1.0)
        d = np.abs(rel - t * u[None, :])
        out[i : i + block] = d.min(axis=1)
    return out


def winding_numbers(points: np.ndarray, ws: np.ndarray, min_distance: float = NEAR_HIT):
    """Vectorized winding of the closed polygon `points` about each w.

    Returns (counts, valid) where valid is False for w closer than
    min_distance to the polygon (those counts are meaningless). Sample-point
    distances prefilter; only borderline targets pay for exact
    point-to-segment distances.
    """
    ws = np.asarray(ws, dtype=complex).ravel()
    counts = np.zeros(ws.size, dtype=int)
    valid = np.ones(ws.size, dtype=bool)
    block = max(1, int(4_000_000 // max(points.size, 1)))
    nxt = np.roll(points, -1)
    max_chord = float(np.abs(nxt - points).max())
    borderline = np.zeros(ws.size, dtype=bool)
    for i in range(0, ws.size, block):
        wb = ws[i : i + block]
        d = points[None, :] - wb[:, None]
        dist = np.abs(d).min(axis=1)
        ang = np.angle((nxt[None, :] - wb[:, None]) / d)
        total = ang.sum(axis=1)
        counts[i : i + block] = np.rint(total / (2 * np.pi)).astype(int)
        valid[i : i + block] = dist >= min_distance
        if min_distance > 0:
            borderline[i : i + block] = (dist < min_distance + 0.5 * max_chord) & (
                dist >= min_distance
            )
    idx = np.nonzero(borderline)[0]
    if idx.size:
        seg_d = _segment_distances(points, ws[idx])
        valid[idx] &= seg_d >= min_distance
    return counts, valid


def resample(c: SampledCurve, count: int) -> SampledCurve:
    """Arc-length-uniform resampling by piecewise-linear interpolation."""
    if count < 16:
        raise PreconditionError("resample needs count >= 16")
    pts = c.points
    if c.closed:
        ring = np.concatenate([pts, pts[:1]])
    else:
        ring = pts
    seg = np.abs(np.diff(ring))
    s = np.concatenate([[0.0], np.cumsum(seg)])
    total = s[-1]
    if total == 0:
        raise PreconditionError("curve has zero length")
    if c.closed:
        su = np.linspace(0.0, total, count, endpoint=False)
    else:
        su = np.linspace(0.0, total, count)
    re = np.interp(su, s, ring.real)
    im = np.interp(su, s, ring.imag)
    return SampledCurve(re + 1j * im, closed=c.closed)


def _refine_by_angle(f, zs: np.ndarray, w: complex, max_turn: float, closed=True):
    """Insert chord midpoints until every image turn about w is small."""
    for _ in range(40):
        ws = f(zs)
        d = ws - w
        if np.abs(d).min() < NEAR_HIT:
            j = int(np.abs(d).argmin())
            raise PreconditionError(
                f"image passes within {NEAR_HIT:g} of target "
                f"(nearest approach {abs(d[j]):.3g} at sample {j})"
            )
        nxt = np.roll(d, -1) if closed else d[1:]
        cur = d if closed else d[:-1]
        turns = np.angle(nxt / cur)
        bad = np.abs(turns) > max_turn
        if not bad.any():
            return zs, ws, turns
        if zs.size > _MAX_REFINE_POINTS:
            raise NumericalError(
                "image refinement exploded; image likely passes through target"
            )
        idx = np.nonzero(bad)[0]
        nxz = np.roll(zs, -1) if closed else zs[1:]
        mids = 0.5 * (zs[idx] + nxz[idx])
        zs = np.insert(zs, idx + 1, mids)
    raise NumericalError("image refinement did not settle; target too close to image")


def image_curve(f, c: SampledCurve, rel_chord: float = 0.02) -> SampledCurve:
    """Pointwise image of c under f, refined where consecutive images are far apart."""
    f = as_rational(f)
    zs = c.points.copy()
    if not f.is_polynomial:
        dv = np.abs(f.den(zs))
        if dv.min() < NEAR_HIT:
            raise PreconditionError("pole of f within 1e-9 of a curve sample")
    for _ in range(14):
        ws = np.asarray(f(zs))
        nxt = np.roll(ws, -1) if c.closed else ws[1:]
        cur = ws if c.closed else ws[:-1]
        chord = np.abs(nxt - cur)
        scale = max(ws.real.max() - ws.real.min(), ws.imag.max() - ws.imag.min())
        bad = chord > rel_chord * max(scale, 1e-300)
        if not bad.any() or zs.size > _MAX_REFINE_POINTS:
            break
        idx = np.nonzero(bad)[0]
        nxz = np.roll(zs, -1) if c.closed else zs[1:]
        mids = 0.5 * (zs[idx] + nxz[idx])
        if not f.is_polynomial and np.abs(f.den(mids)).min() < NEAR_HIT:
            raise PreconditionError("pole of f within 1e-9 of a refined sample")
        zs = np.insert(zs, idx + 1, mids)
    return SampledCurve(np.asarray(f(zs)), closed=c.closed)


def count_preimages(f, c: SampledCurve, w, return_residual: bool = False):
    """Zeros of f - w minus poles of f enclosed by c, by the argument principle.

    The image polygon is refined until each turn about w is below 0.2 rad,
    then the winding is the rounded angle sum (pre-rounding residual must be
    below 1e-6, and is returned on request).
    """
    f = as_rational(f)
    if not c.closed:
        raise PreconditionError("count_preimages needs a closed curve")
    if c.orientation != 1:
        raise PreconditionError("count_preimages needs a positively oriented curve")
    w = complex(w)
    zs = c.points.copy()
    if not f.is_polynomial:
        if np.abs(f.den(zs)).min() < NEAR_HIT:
            raise PreconditionError("pole of f within 1e-9 of a curve sample")
    _, _, turns = _refine_by_angle(f, zs, w, max_turn=0.2)
    total = float(turns.sum())
    k = int(round(total / (2 * np.pi)))
    residual = abs(total / (2 * np.pi) - k)
    if residual > 1e-6:
        raise NumericalError(
            f"winding angle sum {total:.3g} not integer-stable about {w:.6g}"
        )
    if return_residual:
        return k, residual
    return k


def _segment_pair_too_close(p1, p2, q1, q2, tol):
    """Vectorized test: does segment (p1,p2) intersect or come within tol of (q1,q2)?"""
    d1 = p2 - p1
    d2 = q2 - q1
    # proper crossing via orientation signs
    c1 = np.imag(np.conj(d1) * (q1 - p1))
    c2 = np.imag(np.conj(d1) * (q2 - p1))
    c3 = np.imag(np.conj(d2) * (p1 - q1))
    c4 = np.imag(np.conj(d2) * (p2 - q1))
    crossing = (c1 * c2 < 0) & (c3 * c4 < 0)

    def pt_seg(pt, a, b):
        ab = b - a
        denom = np.abs(ab) ** 2
        t = np.clip(((pt - a) * np.conj(ab)).real / np.maximum(denom, 1e-300), 0.0, 1.0)
        return np.abs(a + t * ab - pt)

    dmin = np.minimum.reduce(
        [pt_seg(p1, q1, q2), pt_seg(p2, q1, q2), pt_seg(q1, p1, p2), pt_seg(q2, p1, p2)]
    )
    return crossing | (dmin < tol)


def is_jordan(c: SampledCurve, tol: float = 1e-9) -> bool:
    """True iff no two non-adjacent segments of the closed polygon intersect
    or pass within tol of each other."""
    if not c.closed:
        raise PreconditionError("is_jordan needs a closed curve")
    p = c.points
    n = p.size
    a = p
    b = np.roll(p, -1)
    mid = 0.5 * (a + b)
    rad = 0.5 * np.abs(b - a)
    block = max(1, int(2_000_000 // n))
    for i0 in range(0, n, block):
        i = np.arange(i0, min(i0 + block, n))
        # candidate pairs (i, j) with j > i + 1, excluding the wrap-adjacent pair
        sep = np.abs(mid[i][:, None] - mid[None, :])
        reach = rad[i][:, None] + rad[None, :] + tol
        cand = sep <= reach
        j_idx = np.arange(n)[None, :]
        i_idx = i[:, None]
        adjacent = (
            (j_idx <= i_idx + 1)
            | ((i_idx == 0) & (j_idx == n - 1))
        )
        cand &= ~adjacent
        ii, jj = np.nonzero(cand)
        if ii.size == 0:
            continue
        gi = i[ii]
        hit = _segment_pair_too_close(a[gi], b[gi], a[jj], b[jj], tol)
        if hit.any():
            return False
    return True
