"""State heralded in mode 2 after detecting ``n`` photons in mode 1.

The closed forms below follow from projecting the two-mode Gaussian onto the
Fock wavefunction of mode 1. ``alpha`` denotes the complex exponent
``d - b^2/(a+1)`` of the conditional Gaussian and ``beta2 = b^2/(a^2-1)`` the
squared scale of its Hermite polynomial argument.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import ImpossibleOutcomeError, InvalidStateError, SingularParameterError
from .numerics import hermite, hyp2f1_terminating
from .states import (
    RotatedSfSpec,
    TmegParams,
    Wavefunction,
    _as_complex,
    _photon_number,
    validate_tmeg,
)

SINGULAR_GAP = 1e-10
UNIVERSAL_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ExactSF:
    r: float
    kind: str = "ExactSF"


@dataclass(frozen=True)
class RotatedSF:
    """Rotated squeezed Fock state.

    ``r_theta`` and ``w`` parametrize the exponent ``e^{2 r_theta} + i w``,
    ``theta`` is the principal rotation angle in ``(-pi/4, pi/4]`` and
    ``r_eff`` the squeezing after removing the rotation. ``spec`` is the
    equivalent ``|r| e^{i phi}`` parametrization.
    """

    r_theta: float
    w: float
    theta: float
    r_eff: float
    spec: RotatedSfSpec
    kind: str = "RotatedSF"


@dataclass(frozen=True)
class Generic:
    kind: str = "Generic"


Classification = Union[ExactSF, RotatedSF, Generic]


@dataclass(frozen=True)
class UniversalCheck:
    residual: float
    satisfied: bool
    implied_r: Optional[float]


@dataclass(frozen=True)
class HeraldOutcome:
    n: int
    probability: float
    wavefunction: Wavefunction
    classification: Classification


def conditional_exponent(p):
    """``d - b^2/(a+1)``; its real part is positive for every valid state."""
    return p.d - p.b ** 2 / (p.a + 1)


def _check_not_singular(a, n):
    if n >= 1 and (abs(a - 1) < SINGULAR_GAP or abs(a + 1) < SINGULAR_GAP):
        raise SingularParameterError(f"a = {a} is within {SINGULAR_GAP:g} of +-1")


def herald_probability(p, n):
    """Probability of detecting ``n`` photons in mode 1."""
    validate_tmeg(p)
    n = _photon_number(n)
    a, b = p.a, p.b
    alpha = conditional_exponent(p).real
    denom = abs(1 + a) ** 2 * alpha
    base = 2 * math.sqrt(p.real_determinant)
    if n == 0:
        return base / math.sqrt(denom)
    if b == 0:
        # product state: only the l = n/2 term of the sum survives
        if n % 2:
            return 0.0
        m = n // 2
        coeff = math.comb(n, m) / 4 ** m
        return base * coeff * (abs(a * a - 1) * alpha) ** n / denom ** (n + 0.5)
    z = abs(1 - (a * a - 1) * alpha / b ** 2) ** 2
    return base * abs(b) ** (2 * n) / denom ** (n + 0.5) * hyp2f1_terminating(n, z)


def heralded_wavefunction(p, n):
    """Normalized closed-form wavefunction of mode 2 after detecting ``n`` photons."""
    validate_tmeg(p)
    n = _photon_number(n)
    a, b = p.a, p.b
    _check_not_singular(a, n)
    probability = herald_probability(p, n)
    if probability == 0.0:
        raise ImpossibleOutcomeError(f"detecting n={n} photons has zero probability")
    alpha = conditional_exponent(p)
    a_n = 2.0 ** n * math.factorial(n) * math.sqrt(math.pi)
    prefactor = ((-1) ** n * p.real_determinant ** 0.25
                 * cmath.sqrt(2 * (a - 1) ** n / (a + 1) ** (n + 1))
                 / math.sqrt(a_n * probability))
    scale = b / cmath.sqrt(a * a - 1) if n >= 1 else 0.0

    def func(x):
        return prefactor * np.exp(-0.5 * alpha * x ** 2) * hermite(n, scale * x)

    return Wavefunction(func, alpha.real, f"heralded(n={n})")


def universal_tmeg(a, r):
    """Two-mode state in the universal regime: ``b = sqrt(a^2-1) e^r``, ``d = a e^{2r}``."""
    a = _as_complex(a, "a")
    return TmegParams(a, cmath.sqrt(a * a - 1) * math.exp(r), a * math.exp(2 * r))


def herald_probability_universal(a, n):
    """Generation probability in the universal regime; independent of the squeezing."""
    a = _as_complex(a, "a")
    n = _photon_number(n)
    if abs(a - 1) < SINGULAR_GAP or abs(a + 1) < SINGULAR_GAP:
        raise SingularParameterError(f"a = {a} is within {SINGULAR_GAP:g} of +-1")
    root = cmath.sqrt(a * a - 1)
    radicand = a.real ** 2 - root.real ** 2
    if a.real <= 0 or radicand <= 0:
        raise InvalidStateError([f"a = {a} gives no normalizable universal state"])
    return 2 * abs(a * a - 1) ** n * math.sqrt(radicand) / abs(1 + a) ** (2 * n + 1)


def universal_check(p, tol=UNIVERSAL_TOLERANCE):
    """Relative residual of ``Re[alpha] = beta2`` together with ``Im[alpha] = 0``."""
    validate_tmeg(p)
    alpha = conditional_exponent(p)
    if abs(p.a * p.a - 1) == 0:
        return UniversalCheck(math.inf, False, None)
    beta2 = p.b ** 2 / (p.a * p.a - 1)
    scale = abs(alpha)
    residual = max(abs(alpha.real - beta2), abs(alpha.imag)) / scale
    satisfied = residual <= tol
    implied_r = 0.5 * math.log(beta2.real) if satisfied else None
    return UniversalCheck(residual, satisfied, implied_r)


def rotated_parameters(r_theta, w, n=0):
    """Rotation angle, effective squeezing and ``(|r|, phi)`` for exponent
    ``e^{2 r_theta} + i w``."""
    e2 = math.exp(2 * r_theta)
    den = e2 * e2 + w * w - 1
    if w == 0:
        theta = 0.0
    else:
        theta = math.pi / 4 if den == 0 else 0.5 * math.atan(2 * w / den)
    # asinh form of cosh r_eff = e^{-r_theta}/2 sqrt(2e2 + e2^2 + w^2 + 1), exact near r_eff = 0
    r_eff = math.asinh(math.hypot(math.expm1(2 * r_theta), w) / (2 * math.exp(r_theta)))
    # cosh 2|r| and the phase follow from matching to the |r| e^{i phi} form
    cosh_2r = 0.5 * (e2 + (1 + w * w) / e2)
    phi = math.atan2(w / e2, cosh_2r - 1 / e2) if r_eff > 0 else 0.0
    if phi == -math.pi:
        phi = math.pi
    return theta, r_eff, RotatedSfSpec(n, r_eff, phi)


def classify_outcome(p, n, tol=UNIVERSAL_TOLERANCE):
    """Label the heralded state as exact SF, rotated SF or generic.

    For ``n <= 1`` the Hermite factor is at most linear, so the outcome is
    always an (possibly rotated) SF state.
    """
    validate_tmeg(p)
    n = _photon_number(n)
    alpha = conditional_exponent(p)
    if n >= 2:
        check = universal_check(p, tol)
        if check.satisfied:
            return ExactSF(check.implied_r)
        beta2 = p.b ** 2 / (p.a * p.a - 1)
        if abs(beta2 - alpha.real) / abs(alpha) > tol:
            return Generic()
    r_theta = 0.5 * math.log(alpha.real)
    if abs(alpha.imag) / abs(alpha) <= tol:
        return ExactSF(r_theta)
    theta, r_eff, spec = rotated_parameters(r_theta, alpha.imag, n)
    return RotatedSF(r_theta, alpha.imag, theta, r_eff, spec)


def first_sf_tmeg(a, d, r):
    """State generating SF(1, r) for free ``a`` and ``d``: ``b^2 = (a+1)(d - e^{2r})``."""
    a = _as_complex(a, "a")
    d = _as_complex(d, "d")
    b = cmath.sqrt((a + 1) * (d - math.exp(2 * r)))
    return validate_tmeg(TmegParams(a, b, d))


def first_sf_probability(a, d, r):
    p = first_sf_tmeg(a, d, r)
    return (2 * abs(p.b) ** 2 * math.sqrt(p.real_determinant)
            / (abs(1 + p.a) ** 2 * math.exp(2 * r)) ** 1.5)


def rotated_sf_tmeg(a, spec):
    """Two-mode state whose ``n``-photon heralded output is the rotated SF ``spec``."""
    a = _as_complex(a, "a")
    den = math.cosh(2 * spec.r_mag) - math.sinh(2 * spec.r_mag) * math.cos(spec.phi)
    b = cmath.sqrt(a * a - 1) / math.sqrt(den)
    d = (a + 1j * math.sinh(2 * spec.r_mag) * math.sin(spec.phi)) / den
    return TmegParams(a, b, d)


def herald(p, n, tol=UNIVERSAL_TOLERANCE):
    """Probability, wavefunction and classification in one call."""
    wf = heralded_wavefunction(p, n)
    return HeraldOutcome(int(n), herald_probability(p, n), wf, classify_outcome(p, n, tol))


def squeezing_of(classification):
    """Squeezing parameter carried by a classification, if any."""
    if isinstance(classification, ExactSF):
        return classification.r
    if isinstance(classification, RotatedSF):
        return classification.r_eff
    return None


__all__ = [
    "Classification",
    "ExactSF",
    "Generic",
    "HeraldOutcome",
    "RotatedSF",
    "UniversalCheck",
    "classify_outcome",
    "conditional_exponent",
    "first_sf_probability",
    "first_sf_tmeg",
    "herald",
    "herald_probability",
    "herald_probability_universal",
    "heralded_wavefunction",
    "rotated_parameters",
    "rotated_sf_tmeg",
    "squeezing_of",
    "universal_check",
    "universal_tmeg",
]
