"""Truncated Weyl transforms of measure expressions and spectral diagnostics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import json
import math

import numpy as np

from . import hermite
from .errors import ConfigError, NumericalError
from .hermite import BasisTruncation, OperatorMatrix
from .measures import (
    Dirac, Measure, Reflect, Smooth, TConv, WeightedSum, chart_quadrature, reflect_measure,
    smooth_nodes,
)
from .phase_space import PhasePoint

# points per assembly task; fixed so the reduction order never depends on the worker count
ASSEMBLY_CHUNK = 256


def auto_panels(spec, N: int) -> int | None:
    """Panel count for a curve measure so entries up to index N are resolved.

    Calibrated on the unit circle (64 panels of order 8 are enough up to N = 64);
    grows like sqrt(N) and with the phase-space length of the curve measured in
    the metric |d alpha|, alpha = (-x + 2 pi i y)/sqrt 2.
    """
    chart = spec.chart
    if chart.param_dim != 1 or chart.n != 1:
        return None
    u, w = chart_quadrature(chart, 64, 4)
    d = chart.jacobian(u)[:, :, 0]
    length = float(np.sum(w * np.hypot(d[:, 0], 2 * math.pi * d[:, 1])) / math.sqrt(2))
    ref = 18.39  # same functional on the unit circle
    return int(math.ceil(64 * math.sqrt(max(N, 64) / 64) * max(1.0, length / ref)))


def assemble(points: np.ndarray, coef: np.ndarray, trunc: BasisTruncation, *,
             method: str = "quadrature", workers: int = 1, order: int | None = None,
             pad: float = hermite.DEFAULT_GH_PAD, box: float = hermite.DEFAULT_BOX) -> np.ndarray:
    """``sum_p coef_p rho(points_p)`` for a weighted point cloud.

    Work is split into fixed-size chunks summed in chunk order, so the result is
    bit-identical for every ``workers`` value.
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2 * trunc.n)
    coef = np.asarray(coef, dtype=complex).ravel()
    if method == "quadrature" and order is None and len(points):
        # one order for all chunks keeps chunking invisible in the result
        order = hermite.quadrature_order(trunc.N, float(np.max(np.abs(points[:, trunc.n:]))), pad)
    starts = range(0, len(points), ASSEMBLY_CHUNK)

    def task(i):
        return hermite.accumulate(points[i:i + ASSEMBLY_CHUNK], coef[i:i + ASSEMBLY_CHUNK], trunc,
                                  method=method, order=order, pad=pad, box=box)

    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(task, starts))
    else:
        parts = [task(i) for i in starts]
    out = np.zeros((trunc.size, trunc.size), dtype=complex)
    for part in parts:
        out += part
    return out


def weyl_matrix(m: Measure, trunc: BasisTruncation, tconv_mode: str = "product", *,
                method: str = "quadrature", panels: int | None = None, order: int | None = None,
                workers: int = 1, budget: int | None = None, direct_method: str = "recurrence",
                box: float = hermite.DEFAULT_BOX) -> OperatorMatrix:
    """Truncated Weyl transform ``W(m) = int rho(x, y, 1) dm(x, y)``.

    Parameters
    ----------
    tconv_mode : {"product", "direct"}
        ``product`` multiplies the factors' matrices (the Weyl transform is an
        algebra homomorphism); ``direct`` integrates rho against the phase-weighted
        product measure pushed forward by the sum map.
    method : {"quadrature", "recurrence"}
        Route for the 1-d matrix elements of Dirac and smooth nodes.
    panels, order : int, optional
        Gauss-Legendre panels and order per panel on charts.  Panels default to
        :func:`auto_panels` for curves.
    """
    if m.n != trunc.n:
        raise ConfigError(f"measure has n={m.n}, truncation n={trunc.n}")
    if tconv_mode not in ("product", "direct"):
        raise ConfigError(f"unknown tconv mode {tconv_mode!r}")
    kw = dict(method=method, panels=panels, order=order, workers=workers, budget=budget,
              direct_method=direct_method, box=box)

    if isinstance(m, Dirac):
        return hermite.rho_matrix(m.point, trunc, method=method, box=box)
    if isinstance(m, Smooth):
        p = panels if panels is not None else auto_panels(m.spec, trunc.N)
        nodes = smooth_nodes(m.spec, p, order)
        return OperatorMatrix(trunc, assemble(nodes.points, nodes.weights, trunc, method=method,
                                              workers=workers, box=box))
    if isinstance(m, Reflect):
        return weyl_matrix(reflect_measure(m.child), trunc, tconv_mode, **kw)
    if isinstance(m, WeightedSum):
        out = np.zeros((trunc.size, trunc.size), dtype=complex)
        for w, child in m.terms:
            out += w * weyl_matrix(child, trunc, tconv_mode, **kw).entries
        return OperatorMatrix(trunc, out)
    if isinstance(m, TConv):
        if tconv_mode == "product":
            mats = [weyl_matrix(c, trunc, tconv_mode, **kw).entries for c in m.children]
            out = mats[0]
            for nxt in mats[1:]:
                out = out @ nxt
            return OperatorMatrix(trunc, out)
        from .twisted import DEFAULT_BUDGET, tconv_weyl_direct
        return tconv_weyl_direct(m.children, trunc, method=direct_method, panels=panels,
                                 order=order, workers=workers,
                                 budget=DEFAULT_BUDGET if budget is None else budget, box=box)
    raise TypeError(f"not a measure expression: {m!r}")


def singular_values(M) -> np.ndarray:
    """Singular values in non-increasing order."""
    a = M.entries if isinstance(M, OperatorMatrix) else np.asarray(M)
    if not np.all(np.isfinite(a)):
        raise NumericalError("matrix has non-finite entries")
    try:
        return np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"singular value decomposition failed: {exc}") from exc


def adjoint(M: OperatorMatrix) -> OperatorMatrix:
    return OperatorMatrix(M.trunc, M.entries.conj().T)


def quantum_translate(M: OperatorMatrix, p: PhasePoint, **kwargs) -> OperatorMatrix:
    """``rho(p) M rho(p)^{-1}`` at the truncation, using ``rho(-p)`` for the inverse.

    The truncated rho is only approximately unitary, so the result matches the
    exact conjugation on leading blocks once N is a few times the block size.
    """
    R = hermite.rho_matrix(p, M.trunc, **kwargs).entries
    Rinv = hermite.rho_matrix(-p, M.trunc, **kwargs).entries
    return OperatorMatrix(M.trunc, R @ M.entries @ Rinv)


def unitarity_defect(M: OperatorMatrix, K: int) -> float:
    """Frobenius norm of the leading K x K block of ``M^dagger M - I``."""
    G = M.entries.conj().T @ M.entries
    return float(np.linalg.norm(G[:K, :K] - np.eye(K)))


# ---------------------------------------------------------------------------
# Compactness scan
# ---------------------------------------------------------------------------

@dataclass
class SpectrumReport:
    """Singular values of W_N over a scan of truncation sizes, with the trend verdict.

    ``probes`` rows are ``(N, k, sigma_k)`` for k in {1, K, ceil(N/2)} (1-based).
    """

    N_list: list
    K: int
    singular_values: dict
    probes: list
    trend: str
    thresholds: dict
    mid_ratios: list = field(default_factory=list)

    def to_csv(self, header: list[str] | None = None) -> str:
        lines = [f"# {h}" for h in header or []]
        lines.append("N,k,sigma_k")
        lines += [f"{N},{k},{s!r}" for N, k, s in self.probes]
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "trend": self.trend,
            "thresholds": self.thresholds,
            "N_list": list(self.N_list),
            "K": self.K,
            "mid_ratio": [float(r) for r in self.mid_ratios],
        }

    def to_json(self, **meta) -> str:
        d = self.to_json_dict()
        if meta:
            d["meta"] = meta
        return json.dumps(d, indent=2, sort_keys=True) + "\n"


def classify_trend(mid: list, tau_dec: float, tau_flat: float) -> str:
    """Verdict from the relative mid-spectrum values sigma_{ceil(N/2)} / sigma_1.

    ``decaying``: strictly decreasing across the scan and ending below ``tau_dec``.
    ``non_decaying``: above ``tau_flat`` at every N.  Otherwise ``inconclusive``.
    """
    mid = list(mid)
    if all(b < a for a, b in zip(mid, mid[1:])) and mid[-1] < tau_dec:
        return "decaying"
    if all(v > tau_flat for v in mid):
        return "non_decaying"
    return "inconclusive"


def compactness_scan(m: Measure, N_list, K: int, *, tau_dec: float = 1e-3, tau_flat: float = 1e-1,
                     **weyl_kwargs) -> SpectrumReport:
    """Probe compactness of W(m) through the singular values of its truncations.

    Thresholds are relative to sigma_1 at each N.  For n = 1 the matrices for
    smaller N are leading blocks of the largest truncation.
    """
    N_list = [int(N) for N in N_list]
    if not N_list or any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise ConfigError(f"N_list must be strictly increasing, got {N_list}")
    if not 1 <= K < N_list[0]:
        raise ConfigError(f"need 1 <= K < min(N_list) = {N_list[0]}, got K={K}")
    if not (tau_dec > 0 and tau_flat > 0):
        raise ConfigError("thresholds must be positive")
    svals, probes, mid = {}, [], []
    big = None
    if m.n == 1:
        big = weyl_matrix(m, BasisTruncation(1, N_list[-1]), **weyl_kwargs).entries
    for N in N_list:
        if big is not None:
            W = big[:N, :N]
        else:
            W = weyl_matrix(m, BasisTruncation(m.n, N), **weyl_kwargs).entries
        s = singular_values(W)
        if np.any(np.diff(s) > 0) or np.any(s < 0):
            raise NumericalError("singular values not sorted")
        svals[N] = s
        half = math.ceil(len(s) / 2)
        for k in sorted({1, K, half}):
            probes.append((N, k, float(s[k - 1])))
        mid.append(float(s[half - 1] / s[0]) if s[0] > 0 else 0.0)
    trend = classify_trend(mid, tau_dec, tau_flat)
    return SpectrumReport(N_list, K, svals, probes, trend,
                          {"tau_dec_rel": tau_dec, "tau_flat_rel": tau_flat}, mid)
