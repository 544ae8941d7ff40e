"""Holomorphic disks on the Clifford torus as tuples of Blaschke products.

A disk ``w(z) = [w_0(z) : ... : w_k(z)]`` has each coordinate a finite Blaschke
product ``e^{i theta} prod (z - a) / (1 - conj(a) z)``. On ``|z| = 1`` every
coordinate has modulus one, so the boundary lies on T^k.

Areas use the Fubini-Study form normalised so a projective line has area pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import AccuracyError, DimensionMismatchError, ResolutionError
from .signvec import PointCode, canonicalize

_COINCIDE = 1e-12


@dataclass(frozen=True)
class BlaschkeDisk:
    k: int
    phases: tuple[float, ...]
    zeros: tuple[tuple[complex, ...], ...] = field(default=())

    def __post_init__(self):
        if len(self.phases) != self.k + 1:
            raise DimensionMismatchError(f"need {self.k + 1} phases, got {len(self.phases)}")
        zeros = self.zeros or tuple(() for _ in range(self.k + 1))
        if len(zeros) != self.k + 1:
            raise DimensionMismatchError(f"need {self.k + 1} zero lists, got {len(zeros)}")
        zeros = tuple(tuple(complex(a) for a in zs) for zs in zeros)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "phases", tuple(float(t) for t in self.phases))
        for zs in zeros:
            for a in zs:
                if not abs(a) < 1:
                    raise ValueError(f"Blaschke zero {a} is not inside the unit disk")
        if all(zeros):
            for a in zeros[0]:
                if all(any(abs(a - b) < _COINCIDE for b in zs) for zs in zeros[1:]):
                    raise ValueError(f"all coordinates vanish at {a}; the map is undefined there")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(zs) for zs in self.zeros)

    @property
    def total_degree(self) -> int:
        return sum(self.degrees)

    @property
    def maslov(self) -> int:
        return 2 * self.total_degree

    def coordinates(self, z) -> np.ndarray:
        """Unnormalised homogeneous coordinates, shape ``(k + 1,) + shape(z)``."""
        z = np.asarray(z, dtype=complex)
        out = np.empty((self.k + 1,) + z.shape, dtype=complex)
        for i, (theta, zs) in enumerate(zip(self.phases, self.zeros)):
            w = np.full(z.shape, np.exp(1j * theta), dtype=complex)
            for a in zs:
                w = w * (z - a) / (1 - np.conj(a) * z)
            out[i] = w
        return out

    def derivatives(self, z) -> tuple[np.ndarray, np.ndarray]:
        """Coordinates and their complex derivatives, by the product rule."""
        z = np.asarray(z, dtype=complex)
        w = np.empty((self.k + 1,) + z.shape, dtype=complex)
        dw = np.empty_like(w)
        for i, (theta, zs) in enumerate(zip(self.phases, self.zeros)):
            val = np.full(z.shape, np.exp(1j * theta), dtype=complex)
            der = np.zeros(z.shape, dtype=complex)
            for a in zs:
                denom = 1 - np.conj(a) * z
                f = (z - a) / denom
                df = (1 - abs(a) ** 2) / denom**2
                der = der * f + val * df
                val = val * f
            w[i], dw[i] = val, der
        return w, dw

    def evaluate(self, z: complex) -> np.ndarray:
        """Point of CP^k as a unit-norm homogeneous vector."""
        if abs(z) > 1 + 1e-12:
            raise ValueError(f"|z| = {abs(z)} > 1 is outside the disk")
        w = self.coordinates(z)
        return w / np.linalg.norm(w)

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "phases": list(self.phases),
            "zeros": [[[a.real, a.imag] for a in zs] for zs in self.zeros],
            "degrees": list(self.degrees),
            "maslov": self.maslov,
        }


def _sign_phase(s: float) -> float:
    return 0.0 if s > 0 else math.pi


def constant_disk(p: PointCode) -> BlaschkeDisk:
    return BlaschkeDisk(p.k, tuple(_sign_phase(s) for s in p.signs()))


def isolated_strips(p: PointCode) -> list[BlaschkeDisk]:
    """The k + 1 index-1 strips leaving ``p``, as the disks they are upper halves of.

    Disk ``i`` replaces coordinate ``eps_i`` by ``-eps_i z``. It passes through
    ``p`` at ``z = -1`` and through ``flip(p, i)`` at ``z = +1``.
    """
    signs = p.signs()
    out = []
    for i in range(p.k + 1):
        phases = [_sign_phase(s) for s in signs]
        phases[i] = _sign_phase(-signs[i])
        zeros = [()] * (p.k + 1)
        zeros[i] = (0j,)
        out.append(BlaschkeDisk(p.k, tuple(phases), tuple(zeros)))
    return out


def real_point(d: BlaschkeDisk, z: float, tol: float = 1e-12) -> PointCode:
    """Canonical code of ``w(z)`` for real boundary ``z``, which must be a sign vector."""
    w = d.coordinates(complex(z))
    if np.max(np.abs(w.imag)) > tol or np.max(np.abs(np.abs(w.real) - 1)) > tol:
        raise ValueError(f"w({z}) = {w} is not a point [±1:...:±1]")
    return canonicalize([1 if x > 0 else -1 for x in w.real])


def strip_endpoints(d: BlaschkeDisk) -> tuple[PointCode, PointCode]:
    """(start, end) of the upper-half strip: values at z = -1 and z = +1."""
    return real_point(d, -1.0), real_point(d, 1.0)


def maslov_two_disks_through(p: PointCode) -> int:
    """Number of Maslov-2 disks on T^k through ``p``.

    Each coordinate ``i`` carries one degree-1 family; its member through
    ``p`` at ``z = 1`` is built and checked.
    """
    signs = p.signs()
    count = 0
    for i in range(p.k + 1):
        zeros = [()] * (p.k + 1)
        zeros[i] = (0j,)
        d = BlaschkeDisk(p.k, tuple(_sign_phase(s) for s in signs), tuple(zeros))
        if d.maslov == 2 and real_point(d, 1.0) == p:
            count += 1
    return count


# ---------------------------------------------------------------------------
# Maslov index by winding
# ---------------------------------------------------------------------------


def winding_maslov(
    d: BlaschkeDisk, samples: int = 4096, max_doublings: int = 8
) -> int:
    """Twice the summed boundary winding numbers of the coordinates.

    The argument is tracked on ``samples`` equally spaced boundary points; the
    count is doubled while any step exceeds pi/2.
    """
    if samples < 64:
        raise ValueError("need at least 64 boundary samples")
    n = samples
    for _ in range(max_doublings + 1):
        phi = np.linspace(0.0, 2 * np.pi, n + 1)
        w = d.coordinates(np.exp(1j * phi))
        steps = np.angle(w[:, 1:] / w[:, :-1])
        if np.max(np.abs(steps), initial=0.0) <= np.pi / 2:
            total = steps.sum(axis=1) / (2 * np.pi)
            wind = np.rint(total)
            if np.max(np.abs(total - wind), initial=0.0) > 1e-6:
                raise ResolutionError(f"non-integer winding {total}")
            return int(2 * wind.sum())
        n *= 2
    raise ResolutionError(
        f"argument step still above pi/2 with {n // 2} samples; zeros too close to the circle"
    )


def random_disk(
    degrees, rng: np.random.Generator, radius: float = 0.9
) -> BlaschkeDisk:
    """Disk with the given per-coordinate degrees and zeros uniform in ``|a| < radius``."""
    degrees = list(degrees)
    k = len(degrees) - 1
    phases = tuple(rng.uniform(0, 2 * np.pi, size=k + 1))
    zeros = []
    for m in degrees:
        r = radius * np.sqrt(rng.uniform(0, 1, size=m))
        t = rng.uniform(0, 2 * np.pi, size=m)
        zeros.append(tuple(r * np.exp(1j * t)))
    return BlaschkeDisk(k, phases, tuple(zeros))


def degree_disk(k: int, degree: int, spread: float = 0.5) -> BlaschkeDisk:
    """Real-symmetric disk with ``degree`` real zeros in coordinate 0."""
    if degree < 0:
        raise ValueError("degree must be non-negative")
    zs = (0.0,) if degree == 1 else tuple(np.linspace(-spread, spread, degree))
    zeros = ((zs if degree else ()),) + ((),) * k
    return BlaschkeDisk(k, (0.0,) * (k + 1), zeros)


# ---------------------------------------------------------------------------
# symplectic area
# ---------------------------------------------------------------------------


def area_density(d: BlaschkeDisk, z) -> np.ndarray:
    """Pullback of the Fubini-Study form, as a multiple of dx dy."""
    w, dw = d.derivatives(z)
    n2 = np.sum(np.abs(w) ** 2, axis=0)
    d2 = np.sum(np.abs(dw) ** 2, axis=0)
    inner = np.sum(np.conj(w) * dw, axis=0)
    return (n2 * d2 - np.abs(inner) ** 2) / n2**2


@lru_cache(maxsize=64)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(n)


def _quadrature(d: BlaschkeDisk, phi_max: float, n: int) -> float:
    x, wx = _gauss(n)
    r = 0.5 * (x + 1)
    wr = 0.5 * wx
    m = 2 * n if phi_max > np.pi else n
    y, wy = _gauss(m)
    phi = 0.5 * phi_max * (y + 1)
    wphi = 0.5 * phi_max * wy
    rr, pp = np.meshgrid(r, phi, indexing="ij")
    vals = area_density(d, rr * np.exp(1j * pp)) * rr
    return float(wr @ vals @ wphi)


def energy(d: BlaschkeDisk, region: str = "full", grid: int = 64, rtol: float = 1e-4) -> float:
    """Symplectic area of the full disk or its upper half ``Im z >= 0``.

    Tensor Gauss-Legendre in (r, phi) at ``grid`` and ``2 * grid`` nodes;
    the finer value is returned once the two agree within ``rtol``.
    """
    if grid < 16:
        raise ValueError("grid must be at least 16")
    if region in ("full", "full_disk"):
        phi_max = 2 * np.pi
    elif region in ("upper", "upper_half"):
        phi_max = np.pi
    else:
        raise ValueError(f"unknown region {region!r}")
    coarse = _quadrature(d, phi_max, grid)
    fine = _quadrature(d, phi_max, 2 * grid)
    scale = max(abs(fine), 1e-300)
    if abs(fine - coarse) > rtol * scale:
        raise AccuracyError(
            f"quadrature changed by {abs(fine - coarse) / scale:.2e} between grids {grid} and {2 * grid}"
        )
    return fine


def strip_energy(p: PointCode, i: int, grid: int = 64) -> float:
    """Energy of the ``i``-th index-1 strip leaving ``p``."""
    return energy(isolated_strips(p)[i], "upper", grid)
