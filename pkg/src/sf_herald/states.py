"""Coordinate-representation wavefunctions for the states involved in heralding.

All wavefunctions use the quadrature ``x = (a + a^dagger) / sqrt(2)``.
"""

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, InvalidStateError
from .numerics import QuadratureGrid, _check_finite, hermite, integrate_line

VALIDITY_MARGIN = 1e-12


def _as_complex(value, name):
    try:
        value = complex(value)
    except (TypeError, ValueError):
        raise DomainError(f"{name} must be a complex number, got {value!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def _photon_number(n):
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise DomainError(f"photon number must be a non-negative integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class TmegParams:
    """Exponent coefficients of the two-mode Gaussian
    ``exp(-(a x1^2 + 2 b x1 x2 + d x2^2) / 2)``."""

    a: complex
    b: complex
    d: complex

    def __post_init__(self):
        for name in ("a", "b", "d"):
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))

    @property
    def real_determinant(self):
        return self.a.real * self.d.real - self.b.real ** 2


@dataclass(frozen=True)
class SqueezedFockSpec:
    n: int
    r: float

    def __post_init__(self):
        object.__setattr__(self, "n", _photon_number(self.n))
        _check_finite(self.r, "r")


@dataclass(frozen=True)
class RotatedSfSpec:
    """Squeezed Fock state with complex squeezing ``r_mag * exp(i phi)``."""

    n: int
    r_mag: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "n", _photon_number(self.n))
        _check_finite(self.r_mag, "r_mag")
        _check_finite(self.phi, "phi")
        if self.r_mag < 0:
            raise DomainError(f"r_mag must be >= 0, got {self.r_mag}")
        if not -math.pi < self.phi <= math.pi:
            raise DomainError(f"phi must lie in (-pi, pi], got {self.phi}")


@dataclass(frozen=True)
class Wavefunction:
    """Vectorized evaluator ``x -> psi(x)``.

    ``envelope`` is a positive coefficient ``c`` with ``|psi(x)|^2`` decaying at
    least like ``exp(-c x^2)``; it sizes the default quadrature grid.
    """

    func: Callable = field(repr=False)
    envelope: float
    label: str = ""

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        _check_finite(x, "x")
        return self.func(x)


@dataclass(frozen=True)
class WaveSample:
    x: float
    value: complex


def validate_tmeg(p):
    """Return ``p`` if it describes a normalizable state, else raise
    :class:`InvalidStateError` naming every violated inequality."""
    violations = []
    if not p.a.real > VALIDITY_MARGIN:
        violations.append(f"Re[a] > 0 violated (Re[a] = {p.a.real:.6g})")
    if not p.d.real > VALIDITY_MARGIN:
        violations.append(f"Re[d] > 0 violated (Re[d] = {p.d.real:.6g})")
    if not p.real_determinant > VALIDITY_MARGIN:
        violations.append(
            f"Re[a]Re[d] - Re[b]^2 > 0 violated (value = {p.real_determinant:.6g})"
        )
    if violations:
        raise InvalidStateError(violations)
    return p


def tmeg_wavefunction(p, x1, x2):
    """Normalized two-mode wavefunction ``Psi(x1, x2)``; broadcasts over arrays."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    prefactor = p.real_determinant ** 0.25 / math.sqrt(math.pi)
    return prefactor * np.exp(-0.5 * (p.a * x1 ** 2 + 2 * p.b * x1 * x2 + p.d * x2 ** 2))


def _fock_norm(n):
    # sqrt(2^n n! sqrt(pi)) via logs to stay finite for large n
    return math.exp(0.5 * (n * math.log(2.0) + math.lgamma(n + 1)) + 0.25 * math.log(math.pi))


def fock_wavefunction(n, x):
    n = _photon_number(n)
    x = np.asarray(x, dtype=float)
    return np.exp(-0.5 * x ** 2) * hermite(n, x) / _fock_norm(n)


def sf_wavefunction(s, x):
    x = np.asarray(x, dtype=float)
    scale = math.exp(s.r)
    return (np.exp(-0.5 * scale ** 2 * x ** 2) * hermite(s.n, scale * x)
            / (_fock_norm(s.n) / math.sqrt(scale)))


def _rotation_denominator(s):
    return math.cosh(2 * s.r_mag) - math.cos(s.phi) * math.sinh(2 * s.r_mag)


def rotated_sf_wavefunction(s, x):
    x = np.asarray(x, dtype=float)
    den = _rotation_denominator(s)
    exponent = (1 + 1j * math.sin(s.phi) * math.sinh(2 * s.r_mag)) / den
    return (np.exp(-0.5 * exponent * x ** 2) * hermite(s.n, x / math.sqrt(den))
            / (_fock_norm(s.n) * den ** 0.25))


def fock_state(n):
    n = _photon_number(n)
    return Wavefunction(lambda x: fock_wavefunction(n, x), 1.0, f"fock(n={n})")


def sf_state(n, r):
    s = SqueezedFockSpec(n, r)
    return Wavefunction(lambda x: sf_wavefunction(s, x), math.exp(2 * s.r),
                        f"sf(n={s.n}, r={s.r:g})")


def rotated_sf_state(n, r_mag, phi):
    s = RotatedSfSpec(n, r_mag, phi)
    return Wavefunction(lambda x: rotated_sf_wavefunction(s, x),
                        1.0 / _rotation_denominator(s),
                        f"rotated_sf(n={s.n}, |r|={s.r_mag:g}, phi={s.phi:g})")


def _grid_for(*wavefunctions, grid=None):
    if grid is not None:
        return grid
    envelopes = [getattr(wf, "envelope", None) for wf in wavefunctions]
    if any(e is None for e in envelopes):
        raise DomainError("a QuadratureGrid is required for plain callables")
    return QuadratureGrid.for_envelope(min(envelopes))


def overlap(f, g, grid=None):
    """``<f|g> = integral conj(f(x)) g(x) dx``."""
    grid = _grid_for(f, g, grid=grid)
    return complex(integrate_line(lambda x: np.conj(f(x)) * g(x), grid))


def norm(f, grid=None):
    """``integral |f(x)|^2 dx``."""
    grid = _grid_for(f, grid=grid)
    return float(integrate_line(lambda x: np.abs(f(x)) ** 2, grid))


def fidelity(f, g, grid=None):
    """State fidelity ``|<f|g>|^2``, insensitive to global phases.

    The overlap is divided by both norms, so the result stays in ``[0, 1]``
    even when the inputs carry small normalization errors.
    """
    grid = _grid_for(f, g, grid=grid)
    value = abs(overlap(f, g, grid)) ** 2 / (norm(f, grid) * norm(g, grid))
    return min(max(value, 0.0), 1.0)


def sample(wf, x_min, x_max, count):
    """Evaluate ``wf`` on ``count`` evenly spaced points."""
    if count < 1 or int(count) != count:
        raise DomainError(f"sample count must be a positive integer, got {count}")
    if not x_max >= x_min:
        raise DomainError(f"empty sampling interval [{x_min}, {x_max}]")
    xs = np.linspace(x_min, x_max, int(count))
    values = np.asarray(wf(xs), dtype=complex)
    return [WaveSample(float(x), complex(v)) for x, v in zip(xs, values)]
