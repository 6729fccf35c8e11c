import math

import numpy as np
import pytest

from sf_herald import (
    QuadratureGrid,
    RotatedSfSpec,
    SqueezedFockSpec,
    TmegParams,
    fidelity,
    fock_state,
    norm,
    overlap,
    rotated_sf_state,
    sample,
    sf_state,
    tmeg_wavefunction,
    validate_tmeg,
)
from sf_herald.errors import DomainError, InvalidStateError
from sf_herald.oracle import tmeg_norm
from sf_herald.states import fock_wavefunction, rotated_sf_wavefunction, sf_wavefunction

from helpers import random_tmegs

X = np.linspace(-4, 4, 81)


def test_validate_examples():
    assert validate_tmeg(TmegParams(1, 0, 1)).a == 1
    universal = TmegParams(3, math.sqrt(8) * math.exp(0.5), 3 * math.e)
    assert validate_tmeg(universal) is universal
    with pytest.raises(InvalidStateError) as info:
        validate_tmeg(TmegParams(1, 1, 1))
    assert len(info.value.violations) == 1
    assert "Re[b]^2" in info.value.violations[0]


def test_validate_lists_every_violation():
    with pytest.raises(InvalidStateError) as info:
        validate_tmeg(TmegParams(-1, 0, 2))
    assert len(info.value.violations) == 2


def test_params_reject_non_finite():
    with pytest.raises(DomainError):
        TmegParams(float("inf"), 0, 1)
    with pytest.raises(DomainError):
        TmegParams("abc", 0, 1)


def test_tmeg_vacuum_peak_and_factorization():
    vac = TmegParams(1, 0, 1)
    assert math.isclose(tmeg_wavefunction(vac, 0, 0).real, 1 / math.sqrt(math.pi))
    x1, x2 = np.meshgrid(X, X)
    product = fock_wavefunction(0, x1) * fock_wavefunction(0, x2)
    assert np.max(np.abs(tmeg_wavefunction(vac, x1, x2) - product)) <= 1e-12


def test_tmeg_norm_random():
    for p in random_tmegs(11, 10):
        assert abs(tmeg_norm(p) - 1) <= 1e-9


def test_fock_examples():
    assert math.isclose(fock_wavefunction(0, 0.0), math.pi ** -0.25)
    assert fock_wavefunction(1, 0.0) == 0


@pytest.mark.parametrize("n", range(9))
def test_fock_normalized(n):
    assert abs(norm(fock_state(n)) - 1) <= 1e-10


def test_sf_examples():
    assert math.isclose(sf_wavefunction(SqueezedFockSpec(0, 0.0), 0.0), math.pi ** -0.25)
    assert sf_wavefunction(SqueezedFockSpec(1, 0.83), 0.0) == 0


@pytest.mark.parametrize("n", range(7))
@pytest.mark.parametrize("r", [-1.0, 0.5, 1.0])
def test_sf_normalized(n, r):
    assert abs(norm(sf_state(n, r)) - 1) <= 1e-10


@pytest.mark.parametrize("n", range(6))
def test_sf_is_rescaled_fock(n):
    r = 0.7
    lhs = sf_wavefunction(SqueezedFockSpec(n, r), X)
    rhs = math.exp(r / 2) * fock_wavefunction(n, math.exp(r) * X)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12


@pytest.mark.parametrize("n", range(6))
def test_rotated_phi_zero_is_sf(n):
    for r in (0.0, 0.4, 1.0):
        rot = rotated_sf_wavefunction(RotatedSfSpec(n, r, 0.0), X)
        assert np.max(np.abs(rot - sf_wavefunction(SqueezedFockSpec(n, r), X))) <= 1e-12


def test_rotated_zero_squeezing_is_vacuum():
    rot = rotated_sf_wavefunction(RotatedSfSpec(0, 0.0, 1.3), X)
    assert np.max(np.abs(rot - fock_wavefunction(0, X))) <= 1e-12


@pytest.mark.parametrize("n", range(5))
def test_rotated_normalized(n):
    assert abs(norm(rotated_sf_state(n, 0.7, 1.1)) - 1) <= 1e-9


def test_rotated_spec_domain():
    with pytest.raises(DomainError):
        RotatedSfSpec(1, -0.1, 0.0)
    with pytest.raises(DomainError):
        RotatedSfSpec(1, 0.1, -math.pi)
    assert RotatedSfSpec(1, 0.1, math.pi).phi == math.pi


@pytest.mark.parametrize("n", range(6))
def test_parity(n):
    sign = (-1) ** n
    for wf in (fock_state(n), sf_state(n, 0.6), rotated_sf_state(n, 0.5, 0.9)):
        assert np.max(np.abs(wf(-X) - sign * wf(X))) <= 1e-12


def test_fidelity_examples():
    psi = rotated_sf_state(2, 0.4, 0.3)
    assert abs(fidelity(psi, psi) - 1) <= 1e-10
    assert fidelity(fock_state(0), fock_state(1)) <= 1e-12
    assert fidelity(sf_state(1, 0.5), sf_state(1, -0.5)) < 0.9


def test_fidelity_ignores_global_phase():
    psi = sf_state(3, 0.2)
    phased = type(psi)(lambda x: np.exp(1.7j) * psi(x), psi.envelope)
    assert abs(fidelity(psi, phased) - 1) <= 1e-12


def test_overlap_needs_grid_for_plain_callables():
    with pytest.raises(DomainError):
        overlap(lambda x: np.exp(-x * x), fock_state(0))
    grid = QuadratureGrid.for_envelope(1.0)
    value = overlap(lambda x: np.exp(-x * x / 2) * math.pi ** -0.25, fock_state(0), grid)
    assert abs(value - 1) <= 1e-12


def test_sample():
    points = sample(fock_state(1), -1.0, 1.0, 3)
    assert [s.x for s in points] == [-1.0, 0.0, 1.0]
    assert points[1].value == 0
    assert points[0].value == pytest.approx(-points[2].value)
    with pytest.raises(DomainError):
        sample(fock_state(1), 1.0, -1.0, 3)
    with pytest.raises(DomainError):
        sample(fock_state(1), -1.0, 1.0, 0)


def test_wavefunction_rejects_non_finite_x():
    with pytest.raises(DomainError):
        fock_state(0)(np.array([0.0, np.inf]))


def test_photon_number_domain():
    for bad in (-1, 1.5, True):
        with pytest.raises(DomainError):
            fock_state(bad)
