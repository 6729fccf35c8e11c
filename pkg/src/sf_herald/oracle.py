"""Brute-force quadrature counterparts of the closed forms in :mod:`heralding`.

Nothing here uses the Hermite-argument or hypergeometric results; the
projection onto the mode-1 Fock state and the Born-rule double integral are
evaluated directly on trapezoid grids."""

import math

import numpy as np

from .errors import ConvergenceError
from .numerics import QuadratureGrid
from .states import Wavefunction, fock_wavefunction, tmeg_wavefunction, validate_tmeg

ORACLE_POINTS = 1024
ORACLE_TOLERANCE = 1e-11
MAX_KERNEL_SIZE = 2 ** 24


def _magnitude_form(p):
    """Quadratic form bounding ``|psi_F(x1) Psi(x1, x2)|`` as ``exp(-x^T M x)``."""
    return 0.5 * np.array([[1 + p.a.real, p.b.real], [p.b.real, p.d.real]])


def default_grid(p, points=ORACLE_POINTS):
    """Square grid sized by the narrowest direction of the integrand."""
    lam = float(np.linalg.eigvalsh(_magnitude_form(p))[0])
    return QuadratureGrid.for_envelope(lam, points=points)


def axis_grids(p, points=ORACLE_POINTS):
    """Per-axis grids: each half-width follows the marginal spread along that axis."""
    inv = np.linalg.inv(_magnitude_form(p))
    return tuple(QuadratureGrid.for_envelope(2.0 / inv[i, i], points=points) for i in (0, 1))


def _project(p, n_values, x1, w1, x2):
    kernel = tmeg_wavefunction(p, x1[:, None], x2[None, :])
    fock = np.array([fock_wavefunction(n, x1) for n in n_values])
    return (fock * w1) @ kernel


def _born_on(p, n_values, g1, g2):
    x1, w1 = g1.nodes()
    x2, w2 = g2.nodes()
    fine = (np.abs(_project(p, n_values, x1, w1, x2)) ** 2) @ w2
    coarse = (np.abs(_project(p, n_values, x1[::2], 2 * w1[::2], x2[::2])) ** 2) @ (2 * w2[::2])
    return fine, float(np.max(np.abs(fine - coarse)))


def born_probabilities(p, n_values, grids=None, tol=ORACLE_TOLERANCE):
    """``P_n = integral |integral psi_F(x1, n) Psi(x1, x2) dx1|^2 dx2`` for each ``n``.

    Each result is checked against the every-other-node subgrid; both axes are
    refined until they agree or the kernel would exceed ``MAX_KERNEL_SIZE``.
    """
    validate_tmeg(p)
    n_values = [int(n) for n in n_values]
    g1, g2 = grids or axis_grids(p)
    while True:
        fine, gap = _born_on(p, n_values, g1, g2)
        if gap <= tol:
            return fine
        if 4 * (g1.points + 1) * (g2.points + 1) > MAX_KERNEL_SIZE:
            raise ConvergenceError(f"Born-rule quadrature discrepancy {gap:.3g} > {tol:g}")
        g1, g2 = g1.refined(), g2.refined()


def born_probability(p, n, grids=None):
    return float(born_probabilities(p, [n], grids)[0])


def tmeg_norm(p, grid=None):
    """``integral |Psi(x1, x2)|^2`` over the plane."""
    grid = grid or default_grid(p)
    x, w = grid.nodes()
    density = np.abs(tmeg_wavefunction(p, x[:, None], x[None, :])) ** 2
    return float(w @ density @ w)


def projected_wavefunction(p, n, grids=None):
    """Mode-2 state after projecting mode 1 onto ``|n>``, normalized by the
    Born-rule probability."""
    validate_tmeg(p)
    grids = grids or axis_grids(p)
    probability = born_probability(p, n, grids)
    x1, w1 = grids[0].nodes()
    m = _magnitude_form(p)
    envelope = 2 * float(np.linalg.det(m)) / m[0, 0]
    scale = 1.0 / math.sqrt(probability)

    def func(x2):
        flat = np.atleast_1d(x2).ravel()
        values = _project(p, [n], x1, w1, flat)[0] * scale
        return values.reshape(np.shape(x2))

    return Wavefunction(func, envelope, f"projected(n={n})")
