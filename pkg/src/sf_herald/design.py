"""Probability maximization and inverse design of beam-splitter and CZ setups."""

import enum
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy.optimize import minimize

from .errors import DesignError, DomainError, InvalidStateError
from .heralding import (
    first_sf_probability,
    first_sf_tmeg,
    herald_probability_universal,
    universal_check,
)
from .numerics import _check_finite
from .states import TmegParams, _photon_number, validate_tmeg


class Regime(str, enum.Enum):
    UNIVERSAL = "universal"
    FIRST_SF_GENERAL = "first_sf_general"
    VACUUM_ONE_CHANNEL = "vacuum_one_channel"


class SetupKind(str, enum.Enum):
    BS = "bs"
    CZ = "cz"


@dataclass(frozen=True)
class BsSetup:
    """Two squeezed vacua (``r1``, ``r2``) mixed on a beam splitter of power transmission ``t``."""

    r1: float
    r2: float
    t: float

    def __post_init__(self):
        for name in ("r1", "r2", "t"):
            _check_finite(getattr(self, name), name)
        if not 0 < self.t < 1:
            raise DomainError(f"transmission must lie in (0, 1), got {self.t}")

    @property
    def orthogonal(self):
        return self.r1 * self.r2 < 0


@dataclass(frozen=True)
class CzSetup:
    """Two squeezed vacua coupled by ``exp(i g x1 x2)``."""

    r1: float
    r2: float
    g: float

    def __post_init__(self):
        for name in ("r1", "r2", "g"):
            _check_finite(getattr(self, name), name)
        if self.g == 0:
            raise DomainError("CZ weight g must be nonzero")


@dataclass(frozen=True)
class OptimalA:
    """Values of ``a`` maximizing the universal-regime probability.

    The maximizers form the circle ``|a - circle_center| = circle_radius``;
    its real-axis crossings are ``a_real_small`` and ``a_real_large``.
    """

    n: int
    a_real_small: float
    a_real_large: float
    circle_center: float
    circle_radius: float

    def circle_point(self, angle):
        return complex(self.circle_center + self.circle_radius * math.cos(angle),
                       self.circle_radius * math.sin(angle))


@dataclass(frozen=True)
class DesignResult:
    setup: Union[BsSetup, CzSetup]
    tmeg: TmegParams
    probability: float
    regime: Regime
    n: int
    r: float
    a: Optional[complex] = None


def max_probability(n):
    """``n^n / (n+1)^(n+1)``."""
    n = _photon_number(n)
    if n == 0:
        raise DomainError("heralding zero photons does not generate a squeezed Fock state")
    return n ** n / (n + 1) ** (n + 1)


def optimal_a(n):
    n = _photon_number(n)
    if n == 0:
        raise DomainError("n must be >= 1")
    center = n + 1 / (4 * n + 2) + 0.5
    radius = 2 * n * (n + 1) / (2 * n + 1)
    return OptimalA(n, 1 / (2 * n + 1), 1 + 2 * n, center, radius)


def bs_forward(s):
    e1, e2 = math.exp(2 * s.r1), math.exp(2 * s.r2)
    t = s.t
    return TmegParams(e1 * (1 - t) + e2 * t,
                      math.sqrt((1 - t) * t) * (e1 - e2),
                      e1 * t + e2 * (1 - t))


def cz_forward(s):
    return TmegParams(math.exp(2 * s.r1), 1j * s.g, math.exp(2 * s.r2))


def bs_transmission(r1, r2):
    """Universal-regime transmission ``1 / (1 - sinh r2 cosh r2 / (sinh r1 cosh r1))``."""
    return 1 / (1 - math.sinh(r2) * math.cosh(r2) / (math.sinh(r1) * math.cosh(r1)))


def _target(n, r):
    n = _photon_number(n)
    if n == 0:
        raise DesignError("target photon number must be >= 1", constraint="n >= 1")
    _check_finite(r, "r")
    return n, float(r)


def design_bs_universal(n, r, a=None):
    """BS setup in the universal regime with ``r1 + r2 = r``.

    ``a=None`` selects the probability-maximizing ``a = 1 + 2n``. The input
    squeezings are the two roots ``u = e^{2 r2}`` of
    ``u^2 - a(1 + e^{2r}) u + e^{2r} = 0`` (trace and determinant of the BS
    output); of the two, the one with smaller ``|r2|`` is returned.
    """
    n, r = _target(n, r)
    a = 1.0 + 2 * n if a is None else a
    if isinstance(a, complex) and a.imag != 0:
        raise DesignError("the BS universal regime needs real a", constraint="a real")
    a = float(a.real if isinstance(a, complex) else a)
    if not a > 1:
        raise DesignError(f"the BS universal regime needs a > 1, got a = {a}; "
                          "use the CZ setup for a < 1", constraint="a > 1")
    big = math.exp(2 * r)
    s = a * (1 + big)
    disc = s * s - 4 * big
    roots = [(s - math.sqrt(disc)) / 2, (s + math.sqrt(disc)) / 2]
    candidates = []
    for u in roots:
        r2 = 0.5 * math.log(u)
        r1 = r - r2
        if r1 * r2 < 0:
            candidates.append((abs(r2), r2 > 0, r1, r2))
    if not candidates:
        raise DesignError(f"no orthogonally squeezed inputs give a = {a}, r = {r}",
                          constraint="r1 * r2 < 0")
    _, _, r1, r2 = min(candidates)
    setup = BsSetup(r1, r2, bs_transmission(r1, r2))
    return DesignResult(setup, bs_forward(setup), herald_probability_universal(a, n),
                        Regime.UNIVERSAL, n, r, complex(a))


def design_cz_universal(n, r, a=None):
    """CZ setup in the universal regime: ``r1 = ln(a)/2``, ``r2 - r1 = r``,
    ``g = e^r sqrt(1 - e^{4 r1})``.

    ``a=None`` selects the probability-maximizing ``a = 1/(2n + 1)``.
    """
    n, r = _target(n, r)
    a = 1.0 / (2 * n + 1) if a is None else a
    if isinstance(a, complex) and a.imag != 0:
        raise DesignError("the CZ universal regime needs real a", constraint="a real")
    a = float(a.real if isinstance(a, complex) else a)
    if not 0 < a < 1:
        raise DesignError(f"the CZ universal regime needs 0 < a < 1, got a = {a}; "
                          "use the BS setup for a > 1", constraint="0 < a < 1")
    r1 = 0.5 * math.log(a)
    setup = CzSetup(r1, r1 + r, math.exp(r) * math.sqrt(1 - math.exp(4 * r1)))
    return DesignResult(setup, cz_forward(setup), herald_probability_universal(a, n),
                        Regime.UNIVERSAL, n, r, complex(a))


def _vacuum_channel_transmission(r2, r):
    # d - b^2/(a+1) = e^{2r} with r1 = 0 is linear in t
    e, big = math.exp(2 * r2), math.exp(2 * r)
    return 2 * (e - big) / ((e - 1) * (1 + big))


def _vacuum_channel_probability(r2, r):
    t = _vacuum_channel_transmission(r2, r)
    if not 0 < t < 1:
        return None
    p = bs_forward(BsSetup(0.0, r2, t))
    return first_sf_probability(p.a, p.d, r)


def design_bs_vacuum_channel(r, n=1, restarts=10, r2_span=4.0):
    """BS setup with a vacuum in input 1 maximizing the SF(1, r) probability.

    Only ``n = 1`` is reachable: a single squeezed input never meets the
    universal condition. The output-squeezing constraint fixes ``t`` in terms of
    ``r2``, and the remaining one-dimensional problem is maximized by
    Nelder-Mead restarted from a coarse grid.
    """
    n = _photon_number(n)
    if n != 1:
        raise DesignError("a vacuum in one BS channel only generates the first SF state",
                          constraint="n == 1")
    _check_finite(r, "r")
    if r == 0:
        raise DesignError("r = 0 needs t = 0: no entanglement, no heralding",
                          constraint="r != 0")
    sign = 1.0 if r > 0 else -1.0
    # feasible r2: beyond r on the same side
    lo, hi = (r, r + sign * r2_span) if r > 0 else (r + sign * r2_span, r)

    def objective(x):
        value = _vacuum_channel_probability(float(x[0]), r) if lo < x[0] < hi else None
        return 1.0 if value is None else -value

    starts = np.linspace(lo, hi, restarts + 2)[1:-1]
    best = None
    for x0 in starts:
        res = minimize(objective, [x0], method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 2000})
        if res.success and (best is None or res.fun < best.fun):
            best = res
    if best is None or best.fun >= 0:
        raise DesignError("vacuum-channel optimizer did not converge", constraint="convergence",
                          diagnostics={"r": r, "starts": [float(s) for s in starts]})
    r2 = float(best.x[0])
    if min(abs(r2 - lo), abs(r2 - hi)) < 1e-6:
        raise DesignError("vacuum-channel optimum sits on the search boundary",
                          constraint="convergence", diagnostics={"r2": r2, "bounds": (lo, hi)})
    setup = BsSetup(0.0, r2, _vacuum_channel_transmission(r2, r))
    return DesignResult(setup, bs_forward(setup), -float(best.fun),
                        Regime.VACUUM_ONE_CHANNEL, 1, float(r))


def design_first_sf_general(a, d, r, setup_kind):
    """Setup realizing SF(1, r) from free real ``a`` and ``d``, with
    ``b^2 = (a+1)(d - e^{2r})``.

    A BS yields real ``b`` (``d > e^{2r}``), a CZ gate imaginary ``b``
    (``d < e^{2r}``).
    """
    kind = SetupKind(setup_kind)
    _check_finite(r, "r")
    a, d = float(a), float(d)
    b2 = (a + 1) * (d - math.exp(2 * r))
    if b2 == 0:
        raise DesignError("d = e^{2r} gives b = 0: no entanglement", constraint="b != 0")
    if kind is SetupKind.BS and b2 < 0:
        raise DesignError("b^2 < 0 needs imaginary b: use the CZ setup",
                          constraint="d > e^{2r} for BS")
    if kind is SetupKind.CZ and b2 > 0:
        raise DesignError("b^2 > 0 needs real b: use the BS setup",
                          constraint="d < e^{2r} for CZ")
    try:
        tmeg = first_sf_tmeg(a, d, r)
    except InvalidStateError as exc:
        raise DesignError(str(exc), constraint="normalizable state") from exc
    if kind is SetupKind.BS:
        b = math.sqrt(b2)
        # e^{2 r1}, e^{2 r2} are the eigenvalues of [[a, b], [b, d]]
        half_gap = math.sqrt(((a - d) / 2) ** 2 + b2)
        u1, u2 = (a + d) / 2 + half_gap, (a + d) / 2 - half_gap
        setup = BsSetup(0.5 * math.log(u1), 0.5 * math.log(u2), (u1 - a) / (u1 - u2))
        tmeg = TmegParams(a, b, d)
    else:
        setup = CzSetup(0.5 * math.log(a), 0.5 * math.log(d), math.sqrt(-b2))
        tmeg = TmegParams(a, 1j * setup.g, d)
    regime = Regime.UNIVERSAL if universal_check(tmeg).satisfied else Regime.FIRST_SF_GENERAL
    return DesignResult(setup, tmeg, first_sf_probability(a, d, r), regime, 1, r, complex(a))


def maximize_first_sf_probability(r, setup_kind="bs", restarts=10):
    """Derivative-free maximization of the SF(1, r) probability over real ``(a, d)``.

    BS-type states (``d > e^{2r}``) are searched in ``(ln a, ln(d - e^{2r}))``,
    CZ-type states (``0 < d < e^{2r}``) in ``(ln a, logit(d e^{-2r}))``.
    Returns ``(a, d, probability)``.
    """
    kind = SetupKind(setup_kind)
    _check_finite(r, "r")
    big = math.exp(2 * r)

    def unpack(x):
        a = math.exp(x[0])
        if kind is SetupKind.BS:
            return a, big + math.exp(x[1])
        return a, big / (1 + math.exp(-x[1]))

    def objective(x):
        if np.max(np.abs(x)) > 30:
            return 1.0
        try:
            return -first_sf_probability(*unpack(x), r)
        except InvalidStateError:
            return 1.0

    grid = np.linspace(-2.5, 2.5, max(int(math.ceil(math.sqrt(restarts))), 2))
    starts = [(u, v) for u in grid for v in grid][:restarts]
    best = None
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead",
                       options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    if best.fun >= 0:
        raise DesignError("first-SF optimizer found no feasible point", constraint="convergence")
    # restart once from the best point to shake off simplex collapse
    best = minimize(objective, best.x, method="Nelder-Mead",
                    options={"xatol": 1e-13, "fatol": 1e-17, "maxiter": 4000})
    a, d = unpack(best.x)
    return a, d, -float(best.fun)

