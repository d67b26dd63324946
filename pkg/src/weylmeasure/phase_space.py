"""Phase-space points and the reduced Heisenberg group.

A point of phase space R^{2n} is a pair (x, y) of real n-vectors.  The
reduced Heisenberg group is R^{2n} x U(1) with product

    (x, y, z)(x', y', z') = (x + x', y + y', z z' exp(pi i (x.y' - y.x'))).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

UNIT_TOL = 1e-12


def _as_vector(v) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise DimensionError(f"expected a 1-d vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A point (x, y) of R^n x R^n."""

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = _as_vector(self.x), _as_vector(self.y)
        if x.size < 1 or x.size != y.size:
            raise DimensionError(
                f"position and momentum must have equal length >= 1, got {x.size} and {y.size}"
            )
        x.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @property
    def n(self) -> int:
        return self.x.size

    @classmethod
    def from_array(cls, v) -> PhasePoint:
        """Build from a flat array ``(x_1..x_n, y_1..y_n)``."""
        v = _as_vector(v)
        if v.size % 2:
            raise DimensionError(f"phase-space vector needs even length, got {v.size}")
        n = v.size // 2
        return cls(v[:n], v[n:])

    @classmethod
    def origin(cls, n: int) -> PhasePoint:
        return cls(np.zeros(n), np.zeros(n))

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.y])

    def _check(self, other: PhasePoint):
        if self.n != other.n:
            raise DimensionError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other: PhasePoint) -> PhasePoint:
        self._check(other)
        return PhasePoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: PhasePoint) -> PhasePoint:
        self._check(other)
        return PhasePoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> PhasePoint:
        return PhasePoint(-self.x, -self.y)

    def __mul__(self, a: float) -> PhasePoint:
        return PhasePoint(a * self.x, a * self.y)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, PhasePoint):
            return NotImplemented
        return np.array_equal(self.x, other.x) and np.array_equal(self.y, other.y)

    def __hash__(self) -> int:
        return hash((tuple(self.x), tuple(self.y)))

    def __repr__(self) -> str:
        return f"PhasePoint(x={self.x.tolist()}, y={self.y.tolist()})"


def symplectic_phase(p: PhasePoint, q: PhasePoint) -> float:
    """Return ``x.y' - y.x'`` for ``p = (x, y)`` and ``q = (x', y')``.

    This is the exponent (divided by pi i) of the cocycle in the group law.
    """
    p._check(q)
    return float(p.x @ q.y - p.y @ q.x)


def symplectic_phase_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Vectorised :func:`symplectic_phase` on arrays of shape (..., 2n)."""
    n = p.shape[-1] // 2
    return np.sum(p[..., :n] * q[..., n:] - p[..., n:] * q[..., :n], axis=-1)


@dataclass(frozen=True, eq=False)
class HeisenbergElement:
    """Element (x, y, z) of the reduced Heisenberg group, with ``|z| = 1``."""

    p: PhasePoint
    z: complex = 1.0

    def __post_init__(self):
        z = complex(self.z)
        if not abs(abs(z) - 1.0) <= UNIT_TOL:
            raise ValueError(f"central factor must have modulus 1, got |z|={abs(z)!r}")
        object.__setattr__(self, "z", z)

    @classmethod
    def from_xyz(cls, x, y, z=1.0) -> HeisenbergElement:
        return cls(PhasePoint(x, y), z)

    @classmethod
    def identity(cls, n: int) -> HeisenbergElement:
        return cls(PhasePoint.origin(n), 1.0)

    @property
    def n(self) -> int:
        return self.p.n

    def __mul__(self, other: HeisenbergElement) -> HeisenbergElement:
        return group_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, HeisenbergElement):
            return NotImplemented
        return self.p == other.p and self.z == other.z

    def __hash__(self) -> int:
        return hash((self.p, self.z))

    def __repr__(self) -> str:
        return f"HeisenbergElement(x={self.p.x.tolist()}, y={self.p.y.tolist()}, z={self.z!r})"


def _renormalize(z: complex) -> complex:
    # long products of phases drift off the unit circle otherwise
    return z / abs(z)


def group_mul(g: HeisenbergElement, h: HeisenbergElement) -> HeisenbergElement:
    phase = cmath.exp(1j * np.pi * symplectic_phase(g.p, h.p))
    return HeisenbergElement(g.p + h.p, _renormalize(g.z * h.z * phase))


def group_inverse(g: HeisenbergElement) -> HeisenbergElement:
    # the cocycle vanishes on (p, -p), so only the centre is conjugated
    return HeisenbergElement(-g.p, g.z.conjugate())
