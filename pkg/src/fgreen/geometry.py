"""Coordinates, the complex direction zeta, and the angular kernels.

Complex 3-vectors use the bilinear dot product ``a @ b`` (no conjugation)
for the quadric zeta . zeta = k0^2, and the Hermitian norm for s = |zeta|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConstraintError, DomainError

QUADRIC_RTOL = 1e-10
NORM_TOL = 1e-12
ANGLE_SLACK = 1e-9

TWO_PI = 2 * math.pi


def _clamp_polar(value, name):
    if -ANGLE_SLACK <= value < 0:
        return 0.0
    if math.pi < value <= math.pi + ANGLE_SLACK:
        return math.pi
    if not 0 <= value <= math.pi:
        raise DomainError(f"{name} = {value!r} outside [0, pi]")
    return float(value)


def bilinear(a, b):
    return complex(np.sum(np.asarray(a) * np.asarray(b)))


@dataclass(frozen=True)
class DirectionSpec:
    """Complex frequency zeta = s * zeta_dot with zeta . zeta = k0^2."""

    zeta: np.ndarray
    s: float
    zeta_dot: np.ndarray
    k0: float

    @property
    def quadric_residual(self):
        return abs(bilinear(self.zeta, self.zeta) - self.k0 ** 2)

    @property
    def m_dot(self):
        return complex(self.zeta_dot[2])


def make_direction(zeta_dot, s, k0=0.0):
    """Validate and build a DirectionSpec.

    ``zeta_dot`` must have unit Hermitian norm; ``s`` is then |zeta|.
    Raises ConstraintError when zeta . zeta differs from k0^2.

    >>> d = make_direction(np.array([1, 1j, 0]) / np.sqrt(2), 10.0)
    >>> abs(d.quadric_residual) < 1e-12
    True
    """
    zd = np.asarray(zeta_dot, dtype=complex).reshape(3)
    s = float(s)
    k0 = float(k0)
    if not s > 0:
        raise DomainError(f"s must be positive, got {s!r}")
    if k0 < 0:
        raise DomainError(f"k0 must be non-negative, got {k0!r}")
    norm = float(np.sqrt(np.sum(np.abs(zd) ** 2)))
    if abs(norm - 1.0) > NORM_TOL:
        raise ConstraintError(f"zeta_dot has Hermitian norm {norm!r}, expected 1", abs(norm - 1))
    zeta = s * zd
    residual = abs(bilinear(zeta, zeta) - k0 ** 2)
    if residual > QUADRIC_RTOL * max(1.0, s * s, k0 * k0):
        raise ConstraintError(
            f"zeta.zeta = {bilinear(zeta, zeta)!r} differs from k0^2 = {k0 ** 2!r} "
            f"(residual {residual:.6g})",
            residual,
        )
    zeta.setflags(write=False)
    zd.setflags(write=False)
    return DirectionSpec(zeta=zeta, s=s, zeta_dot=zd, k0=k0)


@dataclass(frozen=True)
class FieldPoint:
    """Spherical coordinates (R, psi, omega) of the physical point x."""

    R: float
    psi: float
    omega: float
    cartesian: tuple | None = field(default=None, compare=False)

    def __post_init__(self):
        if not self.R > 0:
            raise DomainError(f"R must be positive, got {self.R!r}")
        object.__setattr__(self, "psi", _clamp_polar(self.psi, "psi"))
        object.__setattr__(self, "omega", float(self.omega) % TWO_PI)
        if self.cartesian is not None:
            if np.max(np.abs(np.subtract(self.cartesian, self.xyz))) > 1e-12 * max(1.0, self.R):
                raise DomainError("Cartesian mirror inconsistent with (R, psi, omega)")

    @classmethod
    def from_cartesian(cls, x, y, z):
        R = math.sqrt(x * x + y * y + z * z)
        psi = math.acos(max(-1.0, min(1.0, z / R))) if R > 0 else 0.0
        omega = math.atan2(y, x) % TWO_PI
        return cls(R, psi, omega, cartesian=(x, y, z))

    @property
    def unit(self):
        return unit_vector(self.psi, self.omega)

    @property
    def xyz(self):
        return tuple(self.R * self.unit)


@dataclass(frozen=True)
class FourierAngles:
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _clamp_polar(self.theta, "theta"))
        object.__setattr__(self, "phi", float(self.phi) % TWO_PI)


def unit_vector(theta, phi):
    """(sin t cos p, sin t sin p, cos t), broadcasting over the last axis."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) + 0 * phi], axis=-1)


def alpha_fullspace(theta, phi, d):
    """alpha = (kd cos phi + ld sin phi) sin theta + md cos theta."""
    k, l, m = d.zeta_dot if isinstance(d, DirectionSpec) else np.asarray(d, dtype=complex)
    return (k * np.cos(phi) + l * np.sin(phi)) * np.sin(theta) + m * np.cos(theta)


def beta_fullspace(theta, phi, p):
    """beta = sin theta sin psi cos(phi - omega) + cos theta cos psi."""
    return (np.sin(theta) * np.sin(p.psi) * np.cos(phi - p.omega)
            + np.cos(theta) * np.cos(p.psi))


def aligned_frame(p):
    """Orthonormal (e1, e2, xhat) with xhat along the field point."""
    xhat = p.unit
    helper = np.array([1.0, 0.0, 0.0]) if abs(xhat[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - (helper @ xhat) * xhat
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(xhat, e1)
    return e1, e2, xhat
