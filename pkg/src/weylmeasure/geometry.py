"""Finite type, tangent spans and hyperplane containment for charts.

Every test reduces to a numerical rank with one relative tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from typing import Sequence

import numpy as np

from .errors import ConfigError
from .measures import Chart

RANK_RTOL = 1e-8
EXCEEDS = "exceeds"


def numerical_rank(vectors: np.ndarray, rtol: float = RANK_RTOL) -> int:
    """Rank of the span of the columns, relative to the largest singular value."""
    vectors = np.atleast_2d(vectors)
    if vectors.size == 0:
        return 0
    sv = np.linalg.svd(vectors, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.count_nonzero(sv > rtol * sv[0]))


def finite_type_order(c: Chart, s: float, max_order: int = 8, rtol: float = RANK_RTOL):
    """Smallest k such that gamma'(s), ..., gamma^(k)(s) span the ambient space.

    Returns ``"exceeds"`` when the span stays deficient through ``max_order``.
    """
    if c.param_dim != 1:
        raise ConfigError("finite type order is implemented for curves")
    if max_order < 1:
        raise ConfigError("max_order must be at least 1")
    D = c.derivatives(np.array([float(s)]), max_order)[1:, 0, :]  # (max_order, 2n)
    dim = c.ambient_dim
    for k in range(1, max_order + 1):
        if k >= dim and numerical_rank(D[:k].T, rtol) == dim:
            return k
    return EXCEEDS


@dataclass
class TypeReport:
    """Finite-type orders over sampled parameters."""

    params: list
    orders: list
    max_order: int

    @property
    def finite_everywhere(self) -> bool:
        return all(o != EXCEEDS for o in self.orders)

    def to_json_dict(self):
        return {"params": [float(p) for p in self.params], "orders": list(self.orders),
                "max_order": self.max_order, "finite_at_all_samples": self.finite_everywhere}


def finite_type_scan(c: Chart, samples, max_order: int = 8, rtol: float = RANK_RTOL) -> TypeReport:
    samples = [float(s) for s in np.atleast_1d(samples)]
    return TypeReport(samples, [finite_type_order(c, s, max_order, rtol) for s in samples], max_order)


def uniform_samples(c: Chart, count: int) -> np.ndarray:
    """``count`` parameters spread over the chart box (cell midpoints per axis for m = 1)."""
    if c.param_dim != 1:
        raise ConfigError("uniform_samples is for curves")
    (a, b), = c.domain
    return a + (b - a) * (np.arange(count) + 0.5) / count


def _tangent_vectors(c: Chart, u) -> np.ndarray:
    return c.jacobian(np.atleast_1d(u) if c.param_dim > 1 else [u])[0]


def tangent_span_check(items: Sequence, rtol: float = RANK_RTOL):
    """Whether the tangent spaces at the given (chart, parameter) pairs span R^{2n}.

    Returns ``(spans, rank)``.
    """
    items = list(items)
    if not items:
        return False, 0
    dims = {c.ambient_dim for c, _ in items}
    if len(dims) != 1:
        raise ConfigError("charts live in different phase spaces")
    dim = dims.pop()
    cols = np.concatenate([_tangent_vectors(c, u) for c, u in items], axis=1)
    rank = numerical_rank(cols, rtol)
    return rank == dim, rank


@dataclass
class SpanSearch:
    found: bool
    params: list
    rank: int
    extra: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {"found": self.found, "params": [np.asarray(p).tolist() for p in self.params],
                "rank": self.rank}


def greedy_spanning_points(c: Chart, sampler, n: int | None = None, pad_even: bool = False,
                           rtol: float = RANK_RTOL) -> SpanSearch:
    """Scan parameters, keeping each one whose tangent space raises the stacked rank.

    Stops at full rank 2n.  With ``pad_even`` an odd-length result gets one more
    sample point appended (the rank is already full, so the span is unchanged).
    """
    n = c.n if n is None else n
    if n != c.n:
        raise ConfigError(f"chart lives in n={c.n}, requested n={n}")
    dim = 2 * n
    kept, cols, rank = [], np.zeros((dim, 0)), 0
    samples = list(sampler)
    for u in samples:
        trial = np.concatenate([cols, _tangent_vectors(c, u)], axis=1)
        r = numerical_rank(trial, rtol)
        if r > rank:
            kept.append(u)
            cols, rank = trial, r
            if rank == dim:
                break
    if rank < dim:
        return SpanSearch(False, kept, rank)
    if pad_even and len(kept) % 2:
        extra = next((u for u in samples if not any(np.array_equal(u, k) for k in kept)), kept[0])
        kept.append(extra)
    return SpanSearch(True, kept, rank)


@dataclass
class Hyperplane:
    normal: np.ndarray
    offset: float
    residual: float

    def to_json_dict(self):
        return {"normal": self.normal.tolist(), "offset": self.offset, "residual": self.residual}


def hyperplane_containment(c: Chart, samples, rel_tol: float = 1e-8) -> Hyperplane | None:
    """Best-fit affine hyperplane through the sampled image; returned only if it contains them.

    The normal is the smallest right singular vector of the centred sample
    matrix, signed so its largest-magnitude component is positive; the
    hyperplane is ``{p : normal . p = offset}``.
    """
    samples = np.asarray(samples, dtype=float)
    pts = c.eval(samples)
    dim = c.ambient_dim
    if len(pts) < dim + 1:
        raise ConfigError(f"need at least {dim + 1} samples, got {len(pts)}")
    centroid = pts.mean(axis=0)
    X = pts - centroid
    diameter = float(np.max(np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)))
    if diameter == 0:
        raise ConfigError("degenerate samples: all image points coincide")
    _, _, vt = np.linalg.svd(X)
    normal = vt[-1]
    normal = normal * np.sign(normal[np.argmax(np.abs(normal))])
    residual = float(np.max(np.abs(X @ normal)))
    if residual > rel_tol * diameter:
        return None
    offset = float(normal @ centroid)
    normal = np.where(np.abs(normal) < 1e-15, 0.0, normal)
    return Hyperplane(normal, offset + 0.0, residual)


def geometry_report(c: Chart, samples: int = 16, max_order: int = 8) -> dict:
    """Finite type, spanning points and hyperplane fit on one chart, as a JSON-ready dict."""
    params = uniform_samples(c, samples) if c.param_dim == 1 else None
    out = {"chart": {"name": c.name, "params": c.params}}
    if params is not None:
        out["finite_type"] = finite_type_scan(c, params, max_order).to_json_dict()
        out["spanning_points"] = greedy_spanning_points(c, params).to_json_dict()
        hp = hyperplane_containment(c, params)
        out["hyperplane"] = None if hp is None else hp.to_json_dict()
    return out


def report_json(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True) + "\n"
