"""Hermite functions and truncated matrices of the Schroedinger representation.

The representation acts on L^2(R^n) by

    (rho(x, y, z) phi)(t) = z exp(pi i (x.y + 2 y.t)) phi(t + x).

Operators are truncated to the span of the first N Hermite functions in each
coordinate.  Multi-indices are enumerated in graded order (total degree, then
lexicographic), so the leading K x K block of a truncation is meaningful for
every n.

Two independent routes to the 1-d matrix elements

    A_jk(x, y) = <rho(x, y, 1) h_k, h_j> = int exp(2 pi i y u) h_k(u + x/2) h_j(u - x/2) du

are provided: Gauss-Hermite quadrature in the centred variable ``u`` (the
default), and a normalised Laguerre recurrence that uses the identification of
rho(x, y, 1) with the displacement operator D(alpha), alpha = (-x + 2 pi i y)/sqrt 2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
import itertools
import math

import numpy as np
from scipy.special import gammaln, roots_hermite

from .errors import ConfigError, DimensionError, NumericalError, QuadratureError
from .phase_space import PhasePoint

ORDERING_VERSION = "graded-v1"
MAX_HERMITE_INDEX = 2048
DEFAULT_BOX = 16.0
DEFAULT_GH_PAD = 2.0

_RESCALE = 1e150
_LOG_RESCALE = math.log(_RESCALE)


# ---------------------------------------------------------------------------
# Hermite functions and Gauss-Hermite rules
# ---------------------------------------------------------------------------

def hermite_functions(N: int, t) -> np.ndarray:
    """Evaluate the orthonormal Hermite functions h_0 .. h_{N-1} at ``t``.

    Uses the three-term recurrence on the polynomial part and carries a
    per-point log scale, so values far in the Gaussian tail do not underflow
    before the polynomial growth is applied.

    Returns an array of shape ``t.shape + (N,)``.
    """
    if N > MAX_HERMITE_INDEX + 1:
        raise ValueError(f"N={N} exceeds the configured maximum index {MAX_HERMITE_INDEX}")
    return _hermite_functions(N, t)


def _hermite_functions(N: int, t) -> np.ndarray:
    # no index cap: Gauss-Hermite rules for large |y| need orders beyond it
    if N < 1:
        raise ValueError(f"need N >= 1, got {N}")
    t = np.asarray(t, dtype=float)
    if np.isnan(t).any():
        raise ValueError("NaN argument to Hermite function")
    out = np.empty(t.shape + (N,))
    logscale = -0.5 * t * t
    prev = np.zeros(t.shape)
    cur = np.full(t.shape, np.pi ** -0.25)
    out[..., 0] = cur * np.exp(logscale)
    for k in range(1, N):
        nxt = t * math.sqrt(2.0 / k) * cur - math.sqrt((k - 1) / k) * prev
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            logscale = logscale + big * _LOG_RESCALE
        out[..., k] = cur * np.exp(logscale)
    return out


def hermite_fn(k: int, t):
    """k-th orthonormal Hermite function, h_0(t) = pi^{-1/4} exp(-t^2/2)."""
    if k < 0 or k > MAX_HERMITE_INDEX:
        raise ValueError(f"Hermite index must lie in [0, {MAX_HERMITE_INDEX}], got {k}")
    return hermite_functions(k + 1, t)[..., k]


@lru_cache(maxsize=64)
def _gauss_hermite_cached(Q: int):
    u, _ = roots_hermite(Q)
    # polish the nodes with Newton on h_Q; h_Q' = sqrt(2Q) h_{Q-1} - u h_Q
    for _ in range(2):
        H = _hermite_functions(Q + 1, u)
        hq, hq1 = H[:, Q], H[:, Q - 1]
        u = u - hq / (math.sqrt(2.0 * Q) * hq1 - u * hq)
    h = _hermite_functions(Q, u)[:, Q - 1]
    scaled = 1.0 / (Q * h * h)
    u.flags.writeable = False
    scaled.flags.writeable = False
    return u, scaled


def gauss_hermite(Q: int, scaled: bool = False):
    """Gauss-Hermite nodes and weights of order ``Q``.

    With ``scaled=False`` the weights integrate ``f(u) exp(-u^2)``.  With
    ``scaled=True`` they are multiplied by ``exp(u^2)`` and integrate ``f(u)``
    directly; these are computed as ``1 / (Q h_{Q-1}(u_q)^2)`` so they stay
    finite where the classical weights underflow.
    """
    if Q < 1:
        raise ValueError(f"quadrature order must be positive, got {Q}")
    u, w = _gauss_hermite_cached(int(Q))
    if scaled:
        return u.copy(), w.copy()
    return u.copy(), w * np.exp(-u * u)


def quadrature_order(N: int, y_max: float, pad: float = DEFAULT_GH_PAD) -> int:
    """Gauss-Hermite order for matrix elements up to index N and momentum |y| <= y_max.

    ``exp(2 pi i y u)`` against ``exp(-u^2)`` needs roughly ``(pi y)^2`` extra
    nodes on top of the polynomial degree.
    """
    return max(2 * N, 64) + int(math.ceil(pad * (math.pi * y_max) ** 2))


# ---------------------------------------------------------------------------
# Truncations
# ---------------------------------------------------------------------------

def graded_multi_indices(n: int, N: int) -> np.ndarray:
    """All multi-indices of {0..N-1}^n sorted by total degree, then lexicographically."""
    idx = sorted(itertools.product(range(N), repeat=n), key=lambda a: (sum(a), a))
    return np.array(idx, dtype=np.int64).reshape(-1, n)


@dataclass(frozen=True, eq=False)
class BasisTruncation:
    """Span of h_alpha, alpha in {0..N-1}^n, enumerated in graded order."""

    n: int
    N: int
    indices: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1 or self.N < 1:
            raise ConfigError(f"truncation needs n >= 1 and N >= 1, got n={self.n}, N={self.N}")
        idx = graded_multi_indices(self.n, self.N)
        idx.flags.writeable = False
        object.__setattr__(self, "indices", idx)

    @property
    def size(self) -> int:
        return self.N ** self.n

    @property
    def ordering(self) -> str:
        return ORDERING_VERSION

    def lex_positions(self) -> np.ndarray:
        """Row-major (lexicographic) position of each graded multi-index."""
        pos = np.zeros(len(self.indices), dtype=np.int64)
        for i in range(self.n):
            pos = pos * self.N + self.indices[:, i]
        return pos

    def __eq__(self, other):
        if not isinstance(other, BasisTruncation):
            return NotImplemented
        return (self.n, self.N) == (other.n, other.N)

    def __hash__(self):
        return hash((self.n, self.N))


@dataclass(eq=False)
class OperatorMatrix:
    """Truncated operator: ``entries[a, b] = <T h_b, h_a>`` in graded order."""

    trunc: BasisTruncation
    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=complex)
        d = self.trunc.size
        if self.entries.shape != (d, d):
            raise DimensionError(
                f"entries of shape {self.entries.shape} do not match truncation size {d}"
            )
        if not np.all(np.isfinite(self.entries)):
            raise NumericalError("operator matrix has non-finite entries")

    @property
    def shape(self):
        return self.entries.shape

    def block(self, K: int) -> np.ndarray:
        """Leading K x K block (first K basis functions in graded order)."""
        return self.entries[:K, :K]

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        if self.trunc != other.trunc:
            raise DimensionError("operator matrices live on different truncations")
        return OperatorMatrix(self.trunc, self.entries @ other.entries)

    def __repr__(self):
        return f"OperatorMatrix(n={self.trunc.n}, N={self.trunc.N})"


# ---------------------------------------------------------------------------
# 1-d matrix elements
# ---------------------------------------------------------------------------

def _check_box(x, y, box):
    m = max(float(np.max(np.abs(x), initial=0.0)), float(np.max(np.abs(y), initial=0.0)))
    if m > box:
        raise ConfigError(f"phase-space coordinate {m:g} outside the configured box |x|,|y| <= {box:g}")


def _quadrature_accumulate(xs, ys, coef, N, Q, chunk=16):
    """sum_p coef_p A(x_p, y_p) by Gauss-Hermite quadrature of order Q."""
    u, w = gauss_hermite(Q, scaled=True)
    out = np.zeros((N, N), dtype=complex)
    for i in range(0, len(xs), chunk):
        x = xs[i:i + chunk, None]
        y = ys[i:i + chunk, None]
        left = hermite_functions(N, u[None, :] - x / 2).reshape(-1, N)
        right = hermite_functions(N, u[None, :] + x / 2).reshape(-1, N)
        c = (coef[i:i + chunk, None] * w[None, :] * np.exp(2j * np.pi * y * u[None, :])).ravel()
        out += (left * c[:, None]).T @ right
    return out


def _quadrature_stack(xs, ys, N, Q):
    u, w = gauss_hermite(Q, scaled=True)
    left = hermite_functions(N, u[None, :] - xs[:, None] / 2)
    right = hermite_functions(N, u[None, :] + xs[:, None] / 2)
    c = w[None, :] * np.exp(2j * np.pi * ys[:, None] * u[None, :])
    # batched (N x Q) @ (Q x N) products
    return np.matmul(np.swapaxes(left * c[:, :, None], 1, 2), right.astype(complex))


def _laguerre_tables(xs, ys, N):
    """Yield (k, ell_k) with ell_k[p, d] = normalised Laguerre function l_k^{(d)}(r_p).

    l_k^{(d)}(r) = sqrt(k!/(k+d)!) r^{d/2} exp(-r/2) L_k^{(d)}(r), r = |alpha|^2,
    which satisfies |l| <= 1 and equals |D_{k+d,k}(alpha)|.
    """
    alpha = (-xs + 2j * np.pi * ys) / math.sqrt(2.0)
    r = np.abs(alpha) ** 2
    zero = r == 0
    rr = np.where(zero, 1.0, r)[:, None]
    d = np.arange(N)[None, :]
    logscale = 0.5 * d * np.log(rr) - 0.5 * rr - 0.5 * gammaln(d + 1.0)
    prev = np.zeros((len(xs), N))
    cur = np.ones((len(xs), N))
    scale = np.exp(logscale)
    exact = (d == 0) * 1.0
    yield 0, np.where(zero[:, None], exact, cur * scale)
    for k in range(N - 1):
        nxt = ((2 * k + 1 + d - rr) * cur - np.sqrt(k * (k + d)) * prev) / np.sqrt((k + 1) * (k + 1 + d))
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE
        if big.any():
            cur = np.where(big, cur / _RESCALE, cur)
            prev = np.where(big, prev / _RESCALE, prev)
            logscale = logscale + big * _LOG_RESCALE
            scale = np.exp(logscale)
        yield k + 1, np.where(zero[:, None], exact, cur * scale)


def _recurrence_accumulate(xs, ys, coef, N, chunk=4096):
    """sum_p coef_p A(x_p, y_p) via the Laguerre recurrence, O(P N^2)."""
    out = np.zeros((N, N), dtype=complex)
    d = np.arange(N)
    sign = (-1.0) ** d
    for i in range(0, len(xs), chunk):
        x, y, c = xs[i:i + chunk], ys[i:i + chunk], coef[i:i + chunk]
        theta = np.angle(-x + 2j * np.pi * y)
        rot = np.exp(1j * theta[:, None] * d[None, :])
        lower_w = c[:, None] * rot
        upper_w = c[:, None] * rot.conj() * sign[None, :]
        for k, ell in _laguerre_tables(x, y, N):
            nd = N - k
            # entry (k+d, k) and (k, k+d) for d < N - k
            lo = np.einsum("pd,pd->d", lower_w[:, :nd], ell[:, :nd])
            up = np.einsum("pd,pd->d", upper_w[:, :nd], ell[:, :nd])
            out[k + d[:nd], k] += lo
            out[k, k + d[1:nd]] += up[1:]
    return out


def _recurrence_stack(xs, ys, N):
    P = len(xs)
    out = np.zeros((P, N, N), dtype=complex)
    d = np.arange(N)
    theta = np.angle(-xs + 2j * np.pi * ys)
    rot = np.exp(1j * theta[:, None] * d[None, :])
    sign = (-1.0) ** d
    for k, ell in _laguerre_tables(xs, ys, N):
        nd = N - k
        out[:, k + d[:nd], k] = rot[:, :nd] * ell[:, :nd]
        out[:, k, k + d[1:nd]] = (rot[:, 1:nd].conj() * sign[None, 1:nd]) * ell[:, 1:nd]
    return out


def rho_matrix_1d(x: float, y: float, N: int, *, method: str = "quadrature",
                  order: int | None = None, pad: float = DEFAULT_GH_PAD,
                  box: float = DEFAULT_BOX, check: bool | None = None) -> OperatorMatrix:
    """Truncated matrix of rho(x, y, 1) on L^2(R), entries A_jk = <rho h_k, h_j>.

    Parameters
    ----------
    method : {"quadrature", "recurrence"}
        Gauss-Hermite quadrature (default) or the Laguerre recurrence fast path.
    order : int, optional
        Gauss-Hermite order; defaults to :func:`quadrature_order`.
    check : bool, optional
        Compare against a higher order and raise :class:`QuadratureError` when
        the two disagree by more than 1e-10.  Defaults to True when ``order``
        is given explicitly.
    """
    if N < 1:
        raise ConfigError(f"need N >= 1, got {N}")
    if not (np.isfinite(x) and np.isfinite(y)):
        raise ValueError("non-finite phase-space point")
    _check_box(x, y, box)
    if x == 0 and y == 0 and method in ("quadrature", "recurrence"):
        # rho(0, 0, 1) is the identity; return it exactly
        return OperatorMatrix(BasisTruncation(1, N), np.eye(N, dtype=complex))
    xs, ys = np.array([float(x)]), np.array([float(y)])
    if method == "recurrence":
        return OperatorMatrix(BasisTruncation(1, N), _recurrence_stack(xs, ys, N)[0])
    if method != "quadrature":
        raise ConfigError(f"unknown method {method!r}")
    Q = order if order is not None else quadrature_order(N, abs(y), pad)
    if check is None:
        check = order is not None
    A = _quadrature_stack(xs, ys, N, Q)[0]
    if check:
        B = _quadrature_stack(xs, ys, N, Q + max(16, Q // 4))[0]
        err = np.max(np.abs(A - B))
        if err > 1e-10:
            raise QuadratureError(
                f"Gauss-Hermite order {Q} is insufficient for |y|={abs(y):g}, N={N} "
                f"(change {err:.2e} on raising the order); raise the quadrature order"
            )
    return OperatorMatrix(BasisTruncation(1, N), A)


def rho_stack_1d(xs, ys, N: int, *, method: str = "quadrature", pad: float = DEFAULT_GH_PAD,
                 order: int | None = None, box: float = DEFAULT_BOX) -> np.ndarray:
    """1-d matrices for many points at once, shape (P, N, N)."""
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    _check_box(xs, ys, box)
    if method == "recurrence":
        return _recurrence_stack(xs, ys, N)
    if method != "quadrature":
        raise ConfigError(f"unknown method {method!r}")
    Q = order if order is not None else quadrature_order(N, float(np.max(np.abs(ys), initial=0.0)), pad)
    out = np.empty((len(xs), N, N), dtype=complex)
    for i in range(0, len(xs), 256):
        out[i:i + 256] = _quadrature_stack(xs[i:i + 256], ys[i:i + 256], N, Q)
    return out


def accumulate_1d(xs, ys, coef, N: int, *, method: str = "quadrature", pad: float = DEFAULT_GH_PAD,
                  order: int | None = None, box: float = DEFAULT_BOX) -> np.ndarray:
    """``sum_p coef_p A(x_p, y_p)`` without materialising the per-point matrices."""
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    coef = np.asarray(coef, dtype=complex).ravel()
    if len(xs) == 0:
        return np.zeros((N, N), dtype=complex)
    _check_box(xs, ys, box)
    if method == "recurrence":
        return _recurrence_accumulate(xs, ys, coef, N)
    if method != "quadrature":
        raise ConfigError(f"unknown method {method!r}")
    Q = order if order is not None else quadrature_order(N, float(np.max(np.abs(ys))), pad)
    return _quadrature_accumulate(xs, ys, coef, N, Q)


# ---------------------------------------------------------------------------
# n-dimensional assembly
# ---------------------------------------------------------------------------

def _to_graded(lex: np.ndarray, trunc: BasisTruncation) -> np.ndarray:
    pos = trunc.lex_positions()
    return lex[np.ix_(pos, pos)]


def kron_to_graded(factors, trunc: BasisTruncation) -> np.ndarray:
    """Tensor product of per-coordinate N x N matrices, reordered to graded order."""
    lex = factors[0]
    for f in factors[1:]:
        lex = np.kron(lex, f)
    return _to_graded(lex, trunc)


def rho_matrix(p: PhasePoint, trunc: BasisTruncation, **kwargs) -> OperatorMatrix:
    """Truncated matrix of rho(p, 1): entry (alpha, beta) = prod_i A_{alpha_i beta_i}(x_i, y_i)."""
    if p.n != trunc.n:
        raise DimensionError(f"point has n={p.n} but truncation has n={trunc.n}")
    factors = [rho_matrix_1d(p.x[i], p.y[i], trunc.N, **kwargs).entries for i in range(p.n)]
    if trunc.n == 1:
        return OperatorMatrix(trunc, factors[0])
    return OperatorMatrix(trunc, kron_to_graded(factors, trunc))


def accumulate(points: np.ndarray, coef: np.ndarray, trunc: BasisTruncation, *,
               method: str = "quadrature", pad: float = DEFAULT_GH_PAD,
               order: int | None = None, box: float = DEFAULT_BOX, chunk: int = 512) -> np.ndarray:
    """``sum_p coef_p rho(points_p)`` as a graded-order matrix.

    ``points`` has shape (P, 2n) laid out as (x_1..x_n, y_1..y_n).
    """
    points = np.asarray(points, dtype=float).reshape(-1, 2 * trunc.n)
    coef = np.asarray(coef, dtype=complex).ravel()
    n, N = trunc.n, trunc.N
    if n == 1:
        return accumulate_1d(points[:, 0], points[:, 1], coef, N,
                             method=method, pad=pad, order=order, box=box)
    if order is None and method == "quadrature":
        order = quadrature_order(N, float(np.max(np.abs(points[:, n:]), initial=0.0)), pad)
    lex = np.zeros((N ** n, N ** n), dtype=complex)
    # the per-point Kronecker stack has N^(2n) entries; keep it around 64 MB
    chunk = max(1, min(chunk, (1 << 22) // N ** (2 * n)))
    for i in range(0, len(points), chunk):
        pts = points[i:i + chunk]
        c = coef[i:i + chunk]
        stacks = [rho_stack_1d(pts[:, k], pts[:, n + k], N, method=method, pad=pad,
                               order=order, box=box) for k in range(n)]
        # sum_p c_p kron(A1_p, ..., An_p) built as an outer product over coordinates
        acc = stacks[0] * c[:, None, None]
        for s in stacks[1:]:
            P, a, b = acc.shape
            acc = np.einsum("pij,pkl->pikjl", acc, s).reshape(P, a * N, b * N)
        lex += acc.sum(axis=0)
    return _to_graded(lex, trunc)
