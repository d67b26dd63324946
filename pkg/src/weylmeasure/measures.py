"""Charts, smooth measures on submanifold patches and measure expressions.

A smooth measure ``psi * sigma`` lives on the image of a chart ``u -> R^{2n}``
over a parameter box; ``sigma`` is the Riemannian volume of the embedding,
so integrals pick up ``sqrt(det g)`` (the speed, for curves).

Measure expressions are small immutable trees::

    Dirac(p) | Smooth(spec) | Reflect(child) | TConv(children) | WeightedSum(terms)

``Reflect`` is the involution ``mu -> mu*`` with ``mu*(E) = conj(mu(-E))``.  For
the positive measures of interest this is the plain reflection through the
origin; on complex combinations it conjugates the weights, and it reverses the
order of twisted convolutions, so that ``W(Reflect(m)) = W(m)^dagger`` always.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, DimensionError, QuadratureError, RankDeficientError
from .phase_space import PhasePoint

DEFAULT_CURVE_PANELS = 64
DEFAULT_CURVE_ORDER = 8
DEFAULT_PATCH_PANELS = 8
DEFAULT_PATCH_ORDER = 4
RANK_RTOL = 1e-10


# ---------------------------------------------------------------------------
# Charts
# ---------------------------------------------------------------------------

def _freeze(value):
    if isinstance(value, (list, tuple, np.ndarray)):
        return tuple(_freeze(v) for v in value)
    return value


class Chart:
    """Parametrisation of an m-dimensional patch in R^{2n}.

    Subclasses implement ``_jet(u, order)`` returning ``[D0, D1, ..., D_order]``
    where ``D_k`` has shape ``(P, 2n) + (m,) * k``.
    """

    max_jet_order: int | None = None

    def __init__(self, domain, n: int, periodic=None, name: str | None = None, params=None):
        domain = tuple((float(a), float(b)) for a, b in domain)
        if not domain:
            raise ConfigError("chart needs a non-empty parameter box")
        for a, b in domain:
            if not b > a:
                raise ConfigError(f"degenerate parameter interval [{a}, {b}]")
        if not 1 <= len(domain) <= 2 * n - 1:
            raise ConfigError(f"parameter dimension {len(domain)} not in [1, {2 * n - 1}]")
        self.domain = domain
        self.n = int(n)
        self.periodic = tuple(bool(p) for p in (periodic or (False,) * len(domain)))
        self.name = name
        self.params = params or {}

    @property
    def param_dim(self) -> int:
        return len(self.domain)

    @property
    def ambient_dim(self) -> int:
        return 2 * self.n

    def _as_params(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.param_dim == 1 and (u.ndim == 0 or u.ndim == 1):
            return u.reshape(-1, 1)
        return u.reshape(-1, self.param_dim)

    def jet(self, u, order: int):
        if order < 0:
            raise ValueError("jet order must be non-negative")
        if self.max_jet_order is not None and order > self.max_jet_order:
            raise ConfigError(
                f"chart {self.name or type(self).__name__} provides jets up to order "
                f"{self.max_jet_order}, {order} requested"
            )
        return self._jet(self._as_params(u), order)

    def eval(self, u) -> np.ndarray:
        return self.jet(u, 0)[0]

    def jacobian(self, u) -> np.ndarray:
        """First-derivative matrix, shape (P, 2n, m)."""
        return self.jet(u, 1)[1]

    def derivatives(self, s, order: int) -> np.ndarray:
        """Curve derivatives gamma, gamma', ..., gamma^(order); shape (order+1, P, 2n)."""
        if self.param_dim != 1:
            raise ConfigError("derivatives() is only defined for curves")
        return np.stack([d.reshape(d.shape[0], -1) for d in self.jet(s, order)])

    def reflected(self) -> Chart:
        return ReflectedChart(self)

    def key(self):
        if self.name is None:
            return None
        return (self.name, tuple(sorted((k, _freeze(v)) for k, v in self.params.items())))

    def __eq__(self, other):
        if not isinstance(other, Chart):
            return NotImplemented
        k = self.key()
        return self is other or (k is not None and k == other.key())

    def __hash__(self):
        k = self.key()
        return hash(k) if k is not None else id(self)

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, params={self.params!r})"

    def check_jets(self, rng: np.random.Generator | None = None, samples: int = 8,
                   rtol: float = 1e-6) -> float:
        """Compare order-1 jets with central differences at random interior points.

        Returns the worst relative discrepancy; raises ``QuadratureError`` above ``rtol``.
        """
        rng = rng or np.random.default_rng(0)
        lo = np.array([a for a, _ in self.domain])
        hi = np.array([b for _, b in self.domain])
        u = lo + (hi - lo) * (0.1 + 0.8 * rng.random((samples, self.param_dim)))
        J = self.jacobian(u)
        worst = 0.0
        for i in range(self.param_dim):
            h = 1e-5 * (hi[i] - lo[i])
            e = np.zeros(self.param_dim)
            e[i] = h
            fd = (self.eval(u + e) - self.eval(u - e)) / (2 * h)
            scale = np.maximum(np.linalg.norm(J[:, :, i], axis=1), 1e-300)
            worst = max(worst, float(np.max(np.linalg.norm(fd - J[:, :, i], axis=1) / scale)))
        if worst > rtol:
            raise QuadratureError(f"chart jets disagree with finite differences (rel err {worst:.2e})")
        return worst


class CurveChart(Chart):
    """Curve ``s -> R^{2n}`` given by a function returning its k-th derivative."""

    def __init__(self, deriv: Callable[[np.ndarray, int], np.ndarray], interval, n: int = 1,
                 periodic: bool = False, max_jet_order: int | None = None,
                 name: str | None = None, params=None):
        super().__init__([interval], n, (periodic,), name, params)
        self._deriv = deriv
        self.max_jet_order = max_jet_order

    def _jet(self, u, order):
        s = u[:, 0]
        out = []
        for k in range(order + 1):
            d = np.asarray(self._deriv(s, k), dtype=float).reshape(len(s), 2 * self.n)
            out.append(d.reshape((len(s), 2 * self.n) + (1,) * k))
        return out


class ReflectedChart(Chart):
    """Image of a chart under p -> -p, over the same parameter box."""

    def __init__(self, base: Chart):
        super().__init__(base.domain, base.n, base.periodic, None, None)
        self.base = base
        self.max_jet_order = base.max_jet_order

    def _jet(self, u, order):
        return [-d for d in self.base._jet(u, order)]

    def reflected(self) -> Chart:
        return self.base

    def key(self):
        k = self.base.key()
        return None if k is None else ("reflect", k)

    def __eq__(self, other):
        if isinstance(other, ReflectedChart):
            return self.base == other.base
        return NotImplemented if not isinstance(other, Chart) else False

    def __hash__(self):
        return hash(("reflect", hash(self.base)))

    def __repr__(self):
        return f"ReflectedChart({self.base!r})"


class Sphere3Chart(Chart):
    """Round 3-sphere in R^4 = phase space of dimension n = 2, hyperspherical coordinates."""

    max_jet_order = 1

    def __init__(self, r: float = 1.0, center=(0.0, 0.0, 0.0, 0.0)):
        center = np.asarray(center, dtype=float)
        if center.shape != (4,):
            raise ConfigError("sphere3 center must have 4 coordinates")
        super().__init__([(0.0, math.pi), (0.0, math.pi), (0.0, 2 * math.pi)], 2,
                         (False, False, True), "sphere3", {"r": float(r), "center": center.tolist()})
        self.r = float(r)
        self.center = center

    def _jet(self, u, order):
        a, b, c = u[:, 0], u[:, 1], u[:, 2]
        ca, sa, cb, sb, cc, sc = np.cos(a), np.sin(a), np.cos(b), np.sin(b), np.cos(c), np.sin(c)
        r = self.r
        val = self.center + r * np.stack([ca, sa * cb, sa * sb * cc, sa * sb * sc], axis=1)
        out = [val]
        if order >= 1:
            J = np.zeros((len(a), 4, 3))
            J[:, 0, 0] = -sa
            J[:, 1, 0], J[:, 1, 1] = ca * cb, -sa * sb
            J[:, 2, 0], J[:, 2, 1], J[:, 2, 2] = ca * sb * cc, sa * cb * cc, -sa * sb * sc
            J[:, 3, 0], J[:, 3, 1], J[:, 3, 2] = ca * sb * sc, sa * cb * sc, sa * sb * cc
            out.append(r * J)
        return out


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

def _trig_curve(ax, by, center):
    cx, cy = center

    def deriv(s, k):
        # d^k/ds^k cos(s) = cos(s + k pi/2)
        x = ax * np.cos(s + k * math.pi / 2)
        y = by * np.sin(s + k * math.pi / 2)
        if k == 0:
            x, y = x + cx, y + cy
        return np.stack([x, y], axis=1)
    return deriv


def _poly_curve(xc, yc):
    px, py = np.polynomial.Polynomial(xc), np.polynomial.Polynomial(yc)

    def deriv(s, k):
        return np.stack([px.deriv(k)(s) if k else px(s), py.deriv(k)(s) if k else py(s)], axis=1)
    return deriv


def _point2(v, name):
    v = np.asarray(v, dtype=float)
    if v.shape != (2,):
        raise ConfigError(f"{name} must be a 2-vector, got {v.tolist()}")
    return v


def _circle(r=1.0, center=(0.0, 0.0)):
    c = _point2(center, "center")
    if not r > 0:
        raise ConfigError("circle radius must be positive")
    return CurveChart(_trig_curve(r, r, c), (0.0, 2 * math.pi), periodic=True,
                      name="circle", params={"r": float(r), "center": c.tolist()})


def _ellipse(a=1.5, b=0.75, center=(0.0, 0.0)):
    c = _point2(center, "center")
    if not (a > 0 and b > 0):
        raise ConfigError("ellipse semi-axes must be positive")
    return CurveChart(_trig_curve(a, b, c), (0.0, 2 * math.pi), periodic=True,
                      name="ellipse", params={"a": float(a), "b": float(b), "center": c.tolist()})


def _line_segment(a=(-1.0, 0.0), b=(1.0, 0.0)):
    a, b = _point2(a, "a"), _point2(b, "b")
    if np.allclose(a, b):
        raise ConfigError("line segment endpoints coincide")
    chart = CurveChart(_poly_curve([a[0], b[0] - a[0]], [a[1], b[1] - a[1]]), (0.0, 1.0),
                       name="line_segment", params={"a": a.tolist(), "b": b.tolist()})
    return chart


def _parabola_arc(c=1.0, interval=(-1.0, 1.0)):
    return CurveChart(_poly_curve([0, 1], [0, 0, c]), tuple(interval),
                      name="parabola_arc", params={"c": float(c), "interval": list(interval)})


def _cubic_arc(c=1.0, interval=(-1.0, 1.0)):
    return CurveChart(_poly_curve([0, 1], [0, 0, 0, c]), tuple(interval),
                      name="cubic_arc", params={"c": float(c), "interval": list(interval)})


def _polynomial_curve(x=(0.0, 1.0), y=(0.0, 0.0, 1.0), interval=(-1.0, 1.0)):
    x = [float(v) for v in x]
    y = [float(v) for v in y]
    return CurveChart(_poly_curve(x, y), tuple(interval), name="polynomial_curve",
                      params={"x": x, "y": y, "interval": list(interval)})


def _sphere3(r=1.0, center=(0.0, 0.0, 0.0, 0.0)):
    return Sphere3Chart(r, center)


CATALOG = {
    "circle": _circle,
    "ellipse": _ellipse,
    "line_segment": _line_segment,
    "parabola_arc": _parabola_arc,
    "cubic_arc": _cubic_arc,
    "polynomial_curve": _polynomial_curve,
    "sphere3": _sphere3,
}


def curve_catalog(name: str, **params) -> Chart:
    """Build a catalog chart with analytic jets.

    ``circle``, ``ellipse``, ``parabola_arc``, ``cubic_arc`` and ``polynomial_curve``
    are planar curves (n = 1); ``line_segment`` lies in a line and serves as the
    hyperplane-contained control; ``sphere3`` is the unit 3-sphere in R^4 (n = 2).
    """
    try:
        factory = CATALOG[name]
    except KeyError:
        raise ConfigError(f"unknown curve {name!r}; catalog: {', '.join(sorted(CATALOG))}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name!r}: {exc}") from None


# ---------------------------------------------------------------------------
# Densities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConstantDensity:
    value: float = 1.0

    def __call__(self, u: np.ndarray) -> np.ndarray:
        return np.full(len(u), float(self.value))

    def to_json(self):
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class BumpDensity:
    """Smooth bump ``height * prod_i exp(1 - 1/(1 - ((u_i - c_i)/w_i)^2))``, zero outside the box."""

    center: tuple
    width: tuple
    height: float = 1.0

    def __post_init__(self):
        c = tuple(float(v) for v in np.atleast_1d(self.center))
        w = tuple(float(v) for v in np.atleast_1d(self.width))
        if len(c) != len(w) or any(v <= 0 for v in w):
            raise ConfigError("bump needs matching center/width with positive widths")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "width", w)

    def __call__(self, u: np.ndarray) -> np.ndarray:
        t = (u - np.array(self.center)) / np.array(self.width)
        t2 = np.minimum(t * t, 1.0)
        inside = np.all(t * t < 1.0, axis=1)
        with np.errstate(divide="ignore"):
            e = np.where(t2 < 1.0, 1.0 - 1.0 / np.where(t2 < 1.0, 1.0 - t2, 1.0), 0.0)
        return np.where(inside, self.height * np.exp(e.sum(axis=1)), 0.0)

    def to_json(self):
        return {"kind": "bump", "center": list(self.center), "width": list(self.width),
                "height": self.height}


@dataclass(frozen=True)
class PolynomialDensity:
    """Polynomial in the chart parameters: ``sum coef * prod u_i^e_i`` over ``terms``."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((tuple(int(e) for e in exps), float(c)) for exps, c in self.terms)
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_coeffs(cls, coeffs) -> PolynomialDensity:
        """Univariate polynomial with ascending coefficients."""
        return cls(tuple(((k,), c) for k, c in enumerate(coeffs)))

    def __call__(self, u: np.ndarray) -> np.ndarray:
        out = np.zeros(len(u))
        for exps, c in self.terms:
            if len(exps) != u.shape[1]:
                raise ConfigError("polynomial density exponent length does not match chart dimension")
            out += c * np.prod(u ** np.array(exps), axis=1)
        return out

    def to_json(self):
        if all(len(e) == 1 for e, _ in self.terms) and \
                [e[0] for e, _ in self.terms] == list(range(len(self.terms))):
            return {"kind": "polynomial", "coeffs": [c for _, c in self.terms]}
        return {"kind": "polynomial", "terms": [[list(e), c] for e, c in self.terms]}


@dataclass(frozen=True)
class SmoothMeasureSpec:
    """``psi * sigma`` on a chart image; optional quadrature override per measure."""

    chart: Chart
    density: Callable = ConstantDensity()
    panels: int | None = None
    order: int | None = None

    @property
    def n(self) -> int:
        return self.chart.n

    def reflected(self) -> SmoothMeasureSpec:
        return SmoothMeasureSpec(self.chart.reflected(), self.density, self.panels, self.order)


# ---------------------------------------------------------------------------
# Quadrature on charts
# ---------------------------------------------------------------------------

def composite_gauss_legendre(a: float, b: float, panels: int, order: int):
    """Nodes and weights of the composite Gauss-Legendre rule on [a, b]."""
    if panels < 1 or order < 1:
        raise ConfigError("panels and order must be positive")
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    return (mid[:, None] + half[:, None] * x).ravel(), (half[:, None] * w).ravel()


def chart_quadrature(chart: Chart, panels=None, order=None):
    """Tensor composite Gauss-Legendre rule on the parameter box: (u (P, m), w (P,))."""
    m = chart.param_dim
    if panels is None:
        panels = DEFAULT_CURVE_PANELS if m == 1 else DEFAULT_PATCH_PANELS
    if order is None:
        order = DEFAULT_CURVE_ORDER if m == 1 else DEFAULT_PATCH_ORDER
    rules = [composite_gauss_legendre(a, b, panels, order) for a, b in chart.domain]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    u = np.stack([g.ravel() for g in grids], axis=1)
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)
    return u, w


def volume_factor(J: np.ndarray, where=None) -> np.ndarray:
    """sqrt(det(J^T J)) per node, raising on rank deficiency."""
    sv = np.linalg.svd(J, compute_uv=False)
    # relative to the node's own scale and to the largest scale over all nodes
    # (the latter is the only check that bites for curves)
    bad = (sv[:, -1] <= RANK_RTOL * sv[:, 0]) | (sv[:, -1] <= RANK_RTOL * sv[:, 0].max(initial=0.0))
    if bad.any():
        i = int(np.argmax(bad))
        at = "" if where is None else f" at parameter {np.asarray(where[i]).tolist()}"
        raise RankDeficientError(f"chart is not an immersion at quadrature node {i}{at}")
    return np.prod(sv, axis=1)


@dataclass
class NodeSet:
    """Quadrature nodes of a smooth measure: parameters, image points, weights (psi sqrt(g) w)."""

    params: np.ndarray
    points: np.ndarray
    weights: np.ndarray


def smooth_nodes(spec: SmoothMeasureSpec, panels=None, order=None, drop_zero: bool = True) -> NodeSet:
    panels = spec.panels if spec.panels is not None else panels
    order = spec.order if spec.order is not None else order
    u, w = chart_quadrature(spec.chart, panels, order)
    val, J = spec.chart.jet(u, 1)
    vol = volume_factor(J, where=u)
    psi = np.asarray(spec.density(u), dtype=float)
    if psi.shape != (len(u),) or not np.all(np.isfinite(psi)):
        raise QuadratureError("density must return one finite real value per node")
    weights = w * psi * vol
    if drop_zero:
        keep = weights != 0
        u, val, weights = u[keep], val[keep], weights[keep]
    return NodeSet(u, val, weights)


def measure_integral(spec: SmoothMeasureSpec, f: Callable, panels=None, order=None) -> complex:
    """Integral of ``f`` against ``psi sigma``.

    ``f`` is called once with an array of image points of shape (P, 2n) and
    must return P values.
    """
    nodes = smooth_nodes(spec, panels, order, drop_zero=False)
    vals = np.asarray(f(nodes.points))
    if vals.shape != (len(nodes.weights),):
        raise QuadratureError(f"integrand returned shape {vals.shape}, expected ({len(nodes.weights)},)")
    if not np.all(np.isfinite(vals)):
        i = int(np.argmax(~np.isfinite(vals)))
        raise QuadratureError(f"non-finite integrand value at node {i} (parameter {nodes.params[i].tolist()})")
    return complex(np.sum(nodes.weights * vals))


# ---------------------------------------------------------------------------
# Measure expressions
# ---------------------------------------------------------------------------

class Measure:
    """Base class of measure expression nodes."""

    @property
    def n(self) -> int:
        raise NotImplementedError


@dataclass(frozen=True)
class Dirac(Measure):
    point: PhasePoint

    @property
    def n(self) -> int:
        return self.point.n


@dataclass(frozen=True)
class Smooth(Measure):
    spec: SmoothMeasureSpec

    @property
    def n(self) -> int:
        return self.spec.n


@dataclass(frozen=True)
class Reflect(Measure):
    child: Measure

    @property
    def n(self) -> int:
        return self.child.n


def _common_n(children) -> int:
    ns = {c.n for c in children}
    if len(ns) != 1:
        raise DimensionError(f"measure nodes of different dimensions: {sorted(ns)}")
    return ns.pop()


@dataclass(frozen=True)
class TConv(Measure):
    """Twisted convolution ``children[0] # children[1] # ...`` (associative)."""

    children: tuple

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if len(self.children) < 2:
            raise ConfigError("twisted convolution needs at least two factors")
        _common_n(self.children)

    @property
    def n(self) -> int:
        return self.children[0].n


@dataclass(frozen=True)
class WeightedSum(Measure):
    terms: tuple

    def __post_init__(self):
        terms = tuple((complex(w), c) for w, c in self.terms)
        if not terms:
            raise ConfigError("weighted sum needs at least one term")
        if not all(np.isfinite(w) for w, _ in terms):
            raise ConfigError("weights must be finite")
        _common_n([c for _, c in terms])
        object.__setattr__(self, "terms", terms)

    @property
    def n(self) -> int:
        return self.terms[0][1].n


def circle_measure(r: float = 1.0, center=(0.0, 0.0), density=None, **quad) -> Smooth:
    """Arc-length measure (times ``density``) on a circle in the phase plane."""
    return Smooth(SmoothMeasureSpec(curve_catalog("circle", r=r, center=center),
                                    density or ConstantDensity(), **quad))


def catalog_measure(name: str, density=None, panels=None, order=None, **params) -> Smooth:
    return Smooth(SmoothMeasureSpec(curve_catalog(name, **params), density or ConstantDensity(),
                                    panels, order))


def reflect_measure(m: Measure) -> Measure:
    """Apply the involution ``mu -> mu*`` structurally (reflection through the origin)."""
    if isinstance(m, Dirac):
        return Dirac(-m.point)
    if isinstance(m, Smooth):
        return Smooth(m.spec.reflected())
    if isinstance(m, Reflect):
        return m.child
    if isinstance(m, WeightedSum):
        return WeightedSum(tuple((w.conjugate(), reflect_measure(c)) for w, c in m.terms))
    if isinstance(m, TConv):
        return TConv(tuple(reflect_measure(c) for c in reversed(m.children)))
    raise TypeError(f"not a measure expression: {m!r}")


def point_cloud(m: Measure, panels=None, order=None):
    """Flatten a measure without twisted convolutions into weighted points.

    Returns ``(points (P, 2n), weights (P,) complex)`` with ``int f dm = sum w f(points)``.
    """
    if isinstance(m, Dirac):
        return m.point.as_array()[None, :], np.ones(1, dtype=complex)
    if isinstance(m, Smooth):
        nodes = smooth_nodes(m.spec, panels, order)
        return nodes.points, nodes.weights.astype(complex)
    if isinstance(m, Reflect):
        return point_cloud(reflect_measure(m.child), panels, order)
    if isinstance(m, WeightedSum):
        parts = [point_cloud(c, panels, order) for _, c in m.terms]
        pts = np.concatenate([p for p, _ in parts])
        wts = np.concatenate([w * c for (w, _), (_, c) in zip(m.terms, parts)])
        return pts, wts
    if isinstance(m, TConv):
        raise ConfigError("twisted convolutions cannot be flattened into a point cloud; "
                          "flatten nested convolutions into one TConv node")
    raise TypeError(f"not a measure expression: {m!r}")


def total_mass(m: Measure, panels=None, order=None) -> float:
    """Total-variation bound |m|(R^{2n}) (exact except for twisted convolutions, where it is
    the product bound)."""
    if isinstance(m, Dirac):
        return 1.0
    if isinstance(m, Smooth):
        nodes = smooth_nodes(m.spec, panels, order)
        return float(np.sum(np.abs(nodes.weights)))
    if isinstance(m, Reflect):
        return total_mass(m.child, panels, order)
    if isinstance(m, WeightedSum):
        return float(sum(abs(w) * total_mass(c, panels, order) for w, c in m.terms))
    if isinstance(m, TConv):
        return float(np.prod([total_mass(c, panels, order) for c in m.children]))
    raise TypeError(f"not a measure expression: {m!r}")


def as_measures(items: Sequence) -> tuple:
    out = []
    for it in items:
        if isinstance(it, SmoothMeasureSpec):
            it = Smooth(it)
        if not isinstance(it, Measure):
            raise TypeError(f"not a measure expression: {it!r}")
        out.append(it)
    return tuple(out)
