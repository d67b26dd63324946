"""Twisted convolution of measures.

``mu # nu`` pairs with a test function f as

    int f d(mu # nu) = int int f(p + q) exp(pi i [p, q]) dmu(p) dnu(q),

with [p, q] = x.y' - y.x'.  The k-fold product is the push-forward of
``phi_k mu_1 x ... x mu_k`` under the sum map, where phi_k is the left-associated
chain of such phases.  For two planar curves this push-forward has a density
given by a fiber sum over the roots of gamma(s) + delta(t) = z.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree

from .errors import BudgetExceededError, ConfigError, DimensionError, NearCriticalError
from .hermite import BasisTruncation, OperatorMatrix
from .measures import (
    Chart, Measure, Smooth, SmoothMeasureSpec, TConv, as_measures, chart_quadrature, point_cloud,
    reflect_measure, Reflect,
)
from .phase_space import PhasePoint, symplectic_phase_array

DEFAULT_BUDGET = 1 << 20
MAX_DIRECT_FOLD = 3


# ---------------------------------------------------------------------------
# Phase chain
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PhaseChain:
    points: tuple

    def __post_init__(self):
        pts = tuple(self.points)
        if not pts:
            raise ConfigError("phase chain needs at least one point")
        if len({p.n for p in pts}) != 1:
            raise DimensionError("phase chain points have different dimensions")
        object.__setattr__(self, "points", pts)


def phase_phi_k(chain) -> complex:
    """phi_k(p_1, ..., p_k), evaluated left to right; phi_1 = 1.

    Each step multiplies by exp(pi i [(p_1 + ... + p_{j-1}), p_j]) and renormalises.
    """
    if not isinstance(chain, PhaseChain):
        chain = PhaseChain(tuple(chain))
    arr = np.stack([p.as_array() for p in chain.points])
    return complex(phase_phi_k_array(arr))


def phase_phi_k_array(points: np.ndarray) -> np.ndarray:
    """Vectorised phi_k; ``points`` has shape (k, ..., 2n)."""
    points = np.asarray(points, dtype=float)
    running = points[0].copy()
    phi = np.ones(points.shape[1:-1], dtype=complex)
    for pj in points[1:]:
        phi = phi * np.exp(1j * np.pi * symplectic_phase_array(running, pj))
        phi = phi / np.abs(phi)
        running = running + pj
    return phi


# ---------------------------------------------------------------------------
# Direct multi-fold quadrature
# ---------------------------------------------------------------------------

def _check_direct_child(c: Measure):
    if isinstance(c, TConv):
        raise ConfigError("nested twisted convolution in direct mode; flatten it into a single "
                          "TConv node (twisted convolution is associative)")
    if isinstance(c, Reflect):
        _check_direct_child(reflect_measure(c.child))


def product_cloud(children: Sequence[Measure], panels=None, order=None, budget: int = DEFAULT_BUDGET,
                  N: int | None = None):
    """Points ``p_1 + ... + p_k`` with weights ``phi_k w_1 ... w_k`` over the product rule."""
    from .weyl import auto_panels

    children = as_measures(children)
    if len(children) < 2:
        raise ConfigError("twisted convolution needs at least two factors")
    if len(children) > MAX_DIRECT_FOLD:
        raise BudgetExceededError(f"direct quadrature limited to {MAX_DIRECT_FOLD} factors; "
                                  "use tconv_mode='product'")
    clouds = []
    for c in children:
        _check_direct_child(c)
        p = panels
        if p is None and N is not None:
            base = reflect_measure(c.child) if isinstance(c, Reflect) else c
            if isinstance(base, Smooth):
                p = auto_panels(base.spec, N)
        clouds.append(point_cloud(c, p, order))
    total = math.prod(len(w) for _, w in clouds)
    if total > budget:
        raise BudgetExceededError(
            f"direct quadrature needs {total} product nodes (budget {budget}); use tconv_mode='product'"
        )
    pts, wts = clouds[0]
    phi = np.ones(len(wts), dtype=complex)
    for q, v in clouds[1:]:
        phi = (phi[:, None] * np.exp(1j * np.pi * symplectic_phase_array(pts[:, None, :], q[None, :, :])))
        phi = (phi / np.abs(phi)).ravel()
        wts = (wts[:, None] * v[None, :]).ravel()
        pts = (pts[:, None, :] + q[None, :, :]).reshape(-1, pts.shape[1])
    return pts, wts * phi


def tconv_weyl_direct(children: Sequence[Measure], trunc: BasisTruncation, *, method: str = "recurrence",
                      panels=None, order=None, workers: int = 1, budget: int = DEFAULT_BUDGET,
                      box: float | None = None) -> OperatorMatrix:
    """Weyl transform of ``children[0] # ... # children[k-1]`` by nested quadrature.

    Evaluates ``sum rho(p_1 + ... + p_k) phi_k(p_1, ..., p_k) w_1 ... w_k`` over
    the product of the children's quadrature rules.  Children must be Dirac or
    smooth measures (or reflections / weighted sums of those).
    """
    from .hermite import DEFAULT_BOX
    from .weyl import assemble

    pts, wts = product_cloud(children, panels, order, budget, N=trunc.N)
    return OperatorMatrix(trunc, assemble(pts, wts, trunc, method=method, workers=workers,
                                          box=DEFAULT_BOX if box is None else box))


def pairing_oracle(a, b, g: Callable, panels: int = 256, order: int = 8) -> complex:
    """``int int g(p + q) exp(pi i [p, q]) da(p) db(q)`` by double quadrature.

    ``g`` receives points of shape (P, 2n) and returns P values.
    """
    a, b = as_measures([a, b])
    pa, wa = point_cloud(a, panels, order)
    pb, wb = point_cloud(b, panels, order)
    total = 0j
    for i in range(0, len(pa), 64):
        p = pa[i:i + 64, None, :]
        s = (p + pb[None, :, :]).reshape(-1, pa.shape[1])
        ph = np.exp(1j * np.pi * symplectic_phase_array(p, pb[None, :, :])).ravel()
        w = (wa[i:i + 64, None] * wb[None, :]).ravel()
        total += np.sum(w * ph * np.asarray(g(s)))
    return complex(total)


# ---------------------------------------------------------------------------
# Coarea density for two planar curves
# ---------------------------------------------------------------------------

@dataclass
class DensitySample:
    """Density of ``a # b`` at z.

    ``nearest_critical_distance`` is the smallest |sin| of the angle between the
    two tangents over the roots found (0 on the critical set, inf with no roots).
    """

    z: PhasePoint
    value: complex
    roots_found: int
    nearest_critical_distance: float
    roots: np.ndarray | None = None


class CurvePairDensity:
    """Evaluator of the density of ``a # b`` for two curve measures in the plane.

    The seed grid and its image under S(s, t) = gamma(s) + delta(t) are computed
    once; each query seeds Newton from grid points whose image lies within the
    grid's Lipschitz radius of z, then deduplicates converged roots.
    """

    def __init__(self, a: SmoothMeasureSpec, b: SmoothMeasureSpec, *, seeds: int = 256,
                 newton_max: int = 32, step_tol: float = 1e-12, dedup: float = 1e-8,
                 eps_j_rel: float = 1e-6):
        a = a.spec if isinstance(a, Smooth) else a
        b = b.spec if isinstance(b, Smooth) else b
        for spec in (a, b):
            if spec.chart.param_dim != 1 or spec.chart.n != 1:
                raise ConfigError("coarea density is implemented for curves in the plane (n = 1) only")
        self.a, self.b = a, b
        self.newton_max, self.step_tol, self.dedup = newton_max, step_tol, dedup
        (self.s0, self.s1), = a.chart.domain
        (self.t0, self.t1), = b.chart.domain
        s = np.linspace(self.s0, self.s1, seeds)
        t = np.linspace(self.t0, self.t1, seeds)
        S, T = np.meshgrid(s, t, indexing="ij")
        self.seed_s, self.seed_t = S.ravel(), T.ravel()
        ga, da = self._curve(a.chart, self.seed_s)
        gb, db = self._curve(b.chart, self.seed_t)
        self.images = ga + gb
        self.tree = cKDTree(self.images)
        speed_a = np.linalg.norm(da, axis=1)
        speed_b = np.linalg.norm(db, axis=1)
        hs = (self.s1 - self.s0) / (seeds - 1)
        ht = (self.t1 - self.t0) / (seeds - 1)
        self.radius = 1.01 * (speed_a.max() * hs + speed_b.max() * ht)
        self.eps_j = eps_j_rel * float(speed_a.max() * speed_b.max())
        self.scale = float(np.abs(self.images).max() + 1.0)

    def critical_values(self) -> np.ndarray:
        """Images of seed-grid edges across which det[gamma', delta'] changes sign.

        Each is within ``radius`` of a true critical value of the sum map.
        """
        if getattr(self, "_crit", None) is None:
            ns = int(round(np.sqrt(len(self.seed_s))))
            _, da = self._curve(self.a.chart, self.seed_s)
            _, db = self._curve(self.b.chart, self.seed_t)
            det = (da[:, 0] * db[:, 1] - da[:, 1] * db[:, 0]).reshape(ns, ns)
            img = self.images.reshape(ns, ns, 2)
            hits = []
            for axis in (0, 1):
                d0 = det.take(range(ns - 1), axis=axis)
                d1 = det.take(range(1, ns), axis=axis)
                mask = d0 * d1 <= 0
                i0 = img.take(range(ns - 1), axis=axis)
                i1 = img.take(range(1, ns), axis=axis)
                hits.append(0.5 * (i0[mask] + i1[mask]))
            self._crit = np.concatenate(hits).reshape(-1, 2)
        return self._crit

    def near_critical(self, z, margin: float) -> np.ndarray:
        """Whether each query point lies within ``margin`` of a critical value."""
        z = np.atleast_2d(np.asarray(z, dtype=float))
        crit = self.critical_values()
        if len(crit) == 0:
            return np.zeros(len(z), dtype=bool)
        dist, _ = cKDTree(crit).query(z)
        return dist <= margin + self.radius

    @staticmethod
    def _curve(chart: Chart, s):
        d = chart.derivatives(s, 1)
        return d[0], d[1]

    def _wrap(self, v, lo, hi, periodic):
        if periodic:
            return lo + np.mod(v - lo, hi - lo)
        return v

    def find_roots(self, z) -> np.ndarray:
        """Roots (s, t) of gamma(s) + delta(t) = z, shape (R, 2)."""
        z = np.asarray(z, dtype=float)
        idx = self.tree.query_ball_point(z, self.radius)
        if not idx:
            return np.zeros((0, 2))
        idx = np.sort(np.asarray(idx))
        s, t = self.seed_s[idx].copy(), self.seed_t[idx].copy()
        pa, pb = self.a.chart.periodic[0], self.b.chart.periodic[0]
        active = np.ones(len(s), dtype=bool)
        for _ in range(self.newton_max):
            ga, da = self._curve(self.a.chart, s)
            gb, db = self._curve(self.b.chart, t)
            r = ga + gb - z
            det = da[:, 0] * db[:, 1] - da[:, 1] * db[:, 0]
            ok = np.abs(det) > 1e-14 * self.scale
            safe = np.where(ok, det, 1.0)
            ds = np.where(ok, (db[:, 1] * r[:, 0] - db[:, 0] * r[:, 1]) / safe, 0.0)
            dt = np.where(ok, (-da[:, 1] * r[:, 0] + da[:, 0] * r[:, 1]) / safe, 0.0)
            # minimum-norm Gauss-Newton step where the Jacobian is singular
            g2 = np.sum(da * da, axis=1) + np.sum(db * db, axis=1)
            gs = np.sum(da * r, axis=1) / np.where(g2 > 0, g2, 1.0)
            gt = np.sum(db * r, axis=1) / np.where(g2 > 0, g2, 1.0)
            ds = np.where(ok, ds, gs)
            dt = np.where(ok, dt, gt)
            ds, dt = ds * active, dt * active
            s = self._wrap(s - ds, self.s0, self.s1, pa)
            t = self._wrap(t - dt, self.t0, self.t1, pb)
            active &= np.hypot(ds, dt) > self.step_tol
            if not active.any():
                break
        ga, _ = self._curve(self.a.chart, s)
        gb, _ = self._curve(self.b.chart, t)
        res = np.linalg.norm(ga + gb - z, axis=1)
        tol = 1e-9
        keep = res < 1e-9 * self.scale
        keep &= (s >= self.s0 - tol) & (s <= self.s1 + tol) & (t >= self.t0 - tol) & (t <= self.t1 + tol)
        cand = np.stack([s[keep], t[keep]], axis=1)
        roots = []
        period = np.array([self.s1 - self.s0 if pa else np.inf, self.t1 - self.t0 if pb else np.inf])
        for c in cand:
            dup = False
            for r0 in roots:
                diff = np.abs(c - r0)
                diff = np.minimum(diff, np.where(np.isfinite(period), period - diff, diff))
                if np.all(diff < self.dedup):
                    dup = True
                    break
            if not dup:
                roots.append(c)
        return np.array(roots).reshape(-1, 2)

    def __call__(self, z) -> DensitySample:
        zp = z if isinstance(z, PhasePoint) else PhasePoint.from_array(z)
        zarr = zp.as_array()
        roots = self.find_roots(zarr)
        if len(roots) == 0:
            return DensitySample(zp, 0j, 0, math.inf, roots)
        s, t = roots[:, 0], roots[:, 1]
        ga, da = self._curve(self.a.chart, s)
        gb, db = self._curve(self.b.chart, t)
        det = da[:, 0] * db[:, 1] - da[:, 1] * db[:, 0]
        speeds = np.linalg.norm(da, axis=1) * np.linalg.norm(db, axis=1)
        sine = np.abs(det) / speeds
        if np.any(np.abs(det) < self.eps_j):
            i = int(np.argmin(np.abs(det)))
            raise NearCriticalError(
                f"near-critical fiber point (s, t) = ({s[i]:.6g}, {t[i]:.6g}) for z = {zarr.tolist()}: "
                f"|det| = {abs(det[i]):.3e} < {self.eps_j:.3e}",
                root=roots[i], jacobian=float(abs(det[i])))
        psi = self.a.density(s[:, None]) * self.b.density(t[:, None])
        phase = np.exp(1j * np.pi * symplectic_phase_array(ga, gb))
        value = complex(np.sum(psi * speeds * phase / np.abs(det)))
        return DensitySample(zp, value, len(roots), float(sine.min()), roots)


def tconv_density(a, b, z, **options) -> DensitySample:
    """Density of ``a # b`` with respect to Lebesgue measure at z (planar curves)."""
    return CurvePairDensity(a, b, **options)(z)


@dataclass
class DensitySweep:
    """Density on the midpoints of a grid of cells.

    ``status`` is ``ok``, ``empty`` (no fiber) or ``near_critical`` (the cell
    meets the critical values of the sum map; the value there is not used).
    """

    centers: np.ndarray
    values: np.ndarray
    roots_found: np.ndarray
    nearest_critical_distance: np.ndarray
    status: list
    cell_area: float

    def to_csv(self, header: list[str] | None = None) -> str:
        lines = [f"# {h}" for h in header or []]
        lines.append("z_x,z_y,re,im,roots_found,nearest_critical_distance,status")
        for (x, y), v, r, d, st in zip(self.centers, self.values, self.roots_found,
                                       self.nearest_critical_distance, self.status):
            lines.append(f"{float(x)!r},{float(y)!r},{float(v.real)!r},{float(v.imag)!r},"
                         f"{int(r)},{float(d)!r},{st}")
        return "\n".join(lines) + "\n"

    def pairing(self, g: Callable):
        """Midpoint-rule pairing with g; returns (value, excluded cell centres where g != 0)."""
        gv = np.asarray(g(self.centers))
        bad = np.array([s == "near_critical" for s in self.status])
        excluded = [c.tolist() for c in self.centers[bad & (gv != 0)]]
        vals = np.where(bad, 0, self.values)
        return complex(np.sum(gv * vals) * self.cell_area), excluded


def _cell_grid(lo, hi, size):
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    nx, ny = (size, size) if np.isscalar(size) else size
    hx, hy = (hi[0] - lo[0]) / nx, (hi[1] - lo[1]) / ny
    xs = lo[0] + hx * (np.arange(nx) + 0.5)
    ys = lo[1] + hy * (np.arange(ny) + 0.5)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    return np.stack([X.ravel(), Y.ravel()], axis=1), hx, hy


def density_sweep(density: CurvePairDensity, lo, hi, size, mask: Callable | None = None) -> DensitySweep:
    """Evaluate the density at every cell midpoint, flagging near-critical cells.

    With ``mask`` only cells where ``mask`` is nonzero are evaluated (others report 0).
    """
    Z, hx, hy = _cell_grid(lo, hi, size)
    flagged = density.near_critical(Z, 0.5 * math.hypot(hx, hy))
    todo = np.ones(len(Z), dtype=bool) if mask is None else np.asarray(mask(Z)) != 0
    vals = np.zeros(len(Z), dtype=complex)
    roots = np.zeros(len(Z), dtype=int)
    dist = np.full(len(Z), math.inf)
    status = []
    for i, z in enumerate(Z):
        st = "near_critical" if flagged[i] else "ok"
        if todo[i]:
            try:
                d = density(z)
                vals[i], roots[i], dist[i] = d.value, d.roots_found, d.nearest_critical_distance
            except NearCriticalError:
                st = "near_critical"
                roots[i], dist[i] = 0, 0.0
        if st == "ok" and roots[i] == 0:
            st = "empty"
        status.append(st)
    return DensitySweep(Z, vals, roots, dist, status, hx * hy)


@dataclass
class GridPairing:
    value: complex
    excluded: list
    cells: int


def grid_pairing(density: CurvePairDensity, g: Callable, lo, hi, size) -> GridPairing:
    """Midpoint-rule integral of ``g * density`` over a box, skipping near-critical cells.

    Cells where ``g`` vanishes are not queried.
    """
    sweep = density_sweep(density, lo, hi, size, mask=g)
    value, excluded = sweep.pairing(g)
    return GridPairing(value, excluded, len(sweep.centers))


def bump_function(center, radius: float, height: float = 1.0) -> Callable:
    """Smooth compactly supported test function on phase space."""
    c = np.asarray(center, dtype=float)

    def g(p):
        r2 = np.sum((np.asarray(p) - c) ** 2, axis=-1) / radius ** 2
        inside = r2 < 1
        return np.where(inside, height * np.exp(1 - 1 / np.where(inside, 1 - r2, 1.0)), 0.0)
    return g


# ---------------------------------------------------------------------------
# Critical set of the sum map
# ---------------------------------------------------------------------------

def critical_set_area(a: Chart, b: Chart, grid: int = 512, etas=(0.2, 0.1, 0.05, 0.025)):
    """Area of {(s, t): unit tangents satisfy min |T_a -+ T_b| < eta} on a grid.

    Returns a list of ``(eta, area)``; the critical set of gamma(s) + delta(t)
    is the eta -> 0 limit.
    """
    for c in (a, b):
        if c.param_dim != 1 or c.n != 1:
            raise ConfigError("critical set estimator is for planar curves")
    (s0, s1), = a.domain
    (t0, t1), = b.domain
    hs, ht = (s1 - s0) / grid, (t1 - t0) / grid
    s = s0 + hs * (np.arange(grid) + 0.5)
    t = t0 + ht * (np.arange(grid) + 0.5)
    da = a.derivatives(s, 1)[1]
    db = b.derivatives(t, 1)[1]
    ua = da / np.linalg.norm(da, axis=1, keepdims=True)
    ub = db / np.linalg.norm(db, axis=1, keepdims=True)
    dot = ua @ ub.T
    dmin = np.sqrt(np.maximum(2 - 2 * np.abs(dot), 0.0))
    return [(float(eta), float(np.count_nonzero(dmin < eta) * hs * ht)) for eta in etas]
