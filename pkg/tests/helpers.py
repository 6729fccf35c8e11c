"""Seeded samplers shared by the test modules."""

import math

import numpy as np

from sf_herald import TmegParams


def random_tmeg(rng, log_span=1.0, max_corr=0.6, imag_span=0.3):
    """Valid two-mode Gaussian with ``|ln Re a|, |ln Re d| <= log_span``.

    The defaults keep both modes moderately squeezed, so that photon counts
    above 30 carry less than 1e-6 of the probability.
    """
    ra = math.exp(rng.uniform(-log_span, log_span))
    rd = math.exp(rng.uniform(-log_span, log_span))
    rb = rng.uniform(-max_corr, max_corr) * math.sqrt(ra * rd)
    ia, ib, id_ = rng.uniform(-imag_span, imag_span, size=3)
    return TmegParams(complex(ra, ia), complex(rb, ib), complex(rd, id_))


WIDE = dict(log_span=1.5, max_corr=0.8, imag_span=0.5)


def random_tmegs(seed, count, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_tmeg(rng, **kwargs) for _ in range(count)]


def with_real_exponent(p):
    """Copy of ``p`` with ``Im[d]`` shifted so that ``d - b^2/(a+1)`` is real."""
    shift = (p.d - p.b ** 2 / (p.a + 1)).imag
    return TmegParams(p.a, p.b, p.d - 1j * shift)
