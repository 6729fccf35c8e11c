"""Special functions and line quadrature used throughout the package."""

import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError

DEFAULT_POINTS = 2048
DEFAULT_TAIL_TOLERANCE = 1e-12
POINTS_ENV_VAR = "SF_HERALD_QUAD_POINTS"


def _check_finite(value, name="argument"):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{name} must be finite, got {value!r}")


def default_points():
    """Quadrature resolution, honouring the ``SF_HERALD_QUAD_POINTS`` override."""
    raw = os.environ.get(POINTS_ENV_VAR)
    if raw is None:
        return DEFAULT_POINTS
    try:
        points = int(raw)
    except ValueError:
        raise DomainError(f"{POINTS_ENV_VAR} must be an integer, got {raw!r}") from None
    if points < 64:
        raise DomainError(f"{POINTS_ENV_VAR} must be >= 64, got {points}")
    return points


@dataclass(frozen=True)
class QuadratureGrid:
    """Uniform grid on ``[-half_width, half_width]`` with ``points`` intervals."""

    half_width: float
    points: int = DEFAULT_POINTS
    tail_tolerance: float = DEFAULT_TAIL_TOLERANCE

    def __post_init__(self):
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise DomainError(f"half_width must be positive, got {self.half_width}")
        if int(self.points) != self.points or self.points < 64:
            raise DomainError(f"points must be an integer >= 64, got {self.points}")
        if not self.tail_tolerance > 0:
            raise DomainError(f"tail_tolerance must be positive, got {self.tail_tolerance}")

    @classmethod
    def for_envelope(cls, coefficient, points=None, tail_tolerance=DEFAULT_TAIL_TOLERANCE):
        """Grid for an integrand decaying like ``exp(-coefficient * x**2)``."""
        if not coefficient > 0:
            raise DomainError(f"envelope coefficient must be positive, got {coefficient}")
        if points is None:
            points = default_points()
        return cls(12.0 / math.sqrt(coefficient), points, tail_tolerance)

    def nodes(self):
        """Trapezoid nodes and weights."""
        intervals = self.points + self.points % 2
        x = np.linspace(-self.half_width, self.half_width, intervals + 1)
        h = 2.0 * self.half_width / intervals
        w = np.full(x.shape, h)
        w[0] = w[-1] = h / 2
        return x, w

    def refined(self, widen=False):
        if widen:
            # same step, larger window
            return QuadratureGrid(1.5 * self.half_width, 2 * ((3 * self.points + 3) // 4),
                                  self.tail_tolerance)
        return QuadratureGrid(self.half_width, 2 * self.points, self.tail_tolerance)


def hermite(n, z):
    """Physicists' Hermite polynomial ``H_n(z)`` by the three-term recurrence.

    ``z`` may be a scalar or an array, real or complex.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"Hermite degree must be a non-negative integer, got {n}")
    n = int(n)
    z = np.asarray(z)
    _check_finite(z, "z")
    h_prev = np.ones_like(z, dtype=np.result_type(z, float))
    if n == 0:
        return h_prev[()]
    h = 2 * z * h_prev
    for k in range(1, n):
        h_prev, h = h, 2 * z * h - 2 * k * h_prev
    return h[()]


def hyp2f1_terminating(n, z):
    """``2F1((1-n)/2, -n/2; 1; z)``, which is a polynomial of degree ``n//2`` in ``z``.

    Evaluated as ``sum_l n! / ((n-2l)! (l!)^2) (z/4)^l`` with exact integer
    coefficients, so ``fractions.Fraction`` input gives an exact result.
    """
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    n = int(n)
    if isinstance(z, (float, np.floating)):
        _check_finite(z, "z")
    quarter = z / 4
    total = 0
    power = 1
    for l in range(n // 2 + 1):
        total = total + math.comb(n, 2 * l) * math.comb(2 * l, l) * power
        power = power * quarter
    return total


def db_from_r(r):
    """Squeezing in decibels, ``10 log10(e^{2r})``."""
    _check_finite(r, "r")
    return 20.0 * r / math.log(10.0)


def r_from_db(db):
    _check_finite(db, "db")
    return db * math.log(10.0) / 20.0


def _trapezoid(y, w):
    return np.tensordot(w, y, axes=(0, 0))


def integrate_line(f, grid, max_refinements=4):
    """Integrate a Gaussian-decaying ``f`` over the real line.

    ``f`` is called with a 1-D array of nodes and must return an array whose
    first axis matches it; trailing axes are integrated independently. The
    trapezoid rule converges geometrically for such integrands, so the error is
    estimated by comparison with the every-other-node subgrid, and the window
    is widened while the integrand at the edges is not negligible.
    """
    for _ in range(max_refinements + 1):
        x, w = grid.nodes()
        y = np.asarray(f(x))
        if y.shape[:1] != x.shape:
            raise DomainError("integrand must return one value per node along axis 0")
        _check_finite(y, "integrand")
        value = _trapezoid(y, w)
        scale = max(float(np.max(_trapezoid(np.abs(y), w))), np.finfo(float).tiny)
        edge = float(np.max(np.abs(y[[0, -1]])))
        tail = edge * grid.half_width / scale
        coarse_w = 2 * w[::2]
        discretization = float(np.max(np.abs(value - _trapezoid(y[::2], coarse_w)))) / scale
        if tail > grid.tail_tolerance:
            grid = grid.refined(widen=True)
        elif discretization > grid.tail_tolerance:
            grid = grid.refined()
        else:
            return value[()] if np.ndim(value) == 0 else value
    raise ConvergenceError(
        f"quadrature did not converge: tail estimate {tail:.3g}, "
        f"discretization estimate {discretization:.3g}, tolerance {grid.tail_tolerance:g}"
    )
