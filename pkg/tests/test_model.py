"""
Tests for the Polyakov chain: links, action, drift and gauge transforms.

"""
import cmath
import math

import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gaugecool.algebra import expm, generator_basis
from gaugecool.exceptions import InvalidDimension, InvalidInput
from gaugecool.model import (
    ChainParams,
    LinkConfig,
    action,
    drift,
    eigen_phases,
    gauge_transform,
    loop_observable,
)
from tests.helpers import central_difference, left_multiply


def diagonal_su2(s):
    return LinkConfig(np.diag([cmath.exp(-1j * s), cmath.exp(1j * s)]))


def random_gauge(n, N, rng, imaginary=0.5):
    basis = generator_basis(n)
    shape = (len(basis), N)
    coefficients = rng.standard_normal(shape) + (
        1j * imaginary * rng.standard_normal(shape)
    )
    return expm(1j * basis.combine(coefficients))


def test_params_validation():
    with pytest.raises(InvalidDimension, match='n'):
        ChainParams(1, 4, 1, 1)
    with pytest.raises(InvalidDimension, match='N'):
        ChainParams(2, 0, 1, 1)


def test_params_coerce_couplings():
    params = ChainParams(2, 1, 1, 2.5)
    assert params.beta1 == 1 + 0j and isinstance(params.beta2, complex)


def test_chemical_potential():
    params = ChainParams.from_chemical_potential(3, 16, 2, 0.1, 1)
    assert params.beta1 == pytest.approx(2 + 0.1 * math.e)
    assert params.beta2 == pytest.approx(2 + 0.1 / math.e)


def test_chemical_potential_conjugates_beta():
    params = ChainParams.from_chemical_potential(2, 1, 1 + 1j, 0, 0)
    assert params.beta1 == 1 + 1j
    assert params.beta2 == 1 - 1j


def test_links_must_have_unit_determinant():
    links = np.stack([np.eye(2), 2 * np.eye(2)])
    with pytest.raises(InvalidInput, match='link 2 has det'):
        LinkConfig(links)


def test_links_must_be_finite():
    links = np.eye(2)[None].copy()
    links[0, 0, 1] = np.nan
    with pytest.raises(InvalidInput, match='non-finite'):
        LinkConfig(links)


def test_links_shape():
    with pytest.raises(InvalidDimension):
        LinkConfig(np.ones((2, 2, 3)))


def test_links_are_read_only(random_config):
    config = random_config()
    with pytest.raises(ValueError):
        config.links[0, 0, 0] = 0


def test_single_matrix_is_one_link():
    config = LinkConfig(np.eye(3))
    assert (config.n, config.N) == (3, 1)


def test_identity():
    config = LinkConfig.identity(3, 4)
    assert len(config) == 4
    assert np.allclose(config.product(), np.eye(3))
    assert config.norm_squared() == 12


def test_random_links_are_special_unitary(rng):
    config = LinkConfig.random(3, 5, rng)
    dagger = np.conj(np.swapaxes(config.links, 1, 2))
    assert np.allclose(config.links @ dagger, np.eye(3), atol=1e-12)
    assert np.allclose(config.determinants(), 1, atol=1e-12)


def test_products(random_config):
    config = random_config(n=3, N=4)
    u = config.links
    assert np.allclose(config.product(), u[0] @ u[1] @ u[2] @ u[3])
    assert np.allclose(config.shifted_product(), u[3] @ u[0] @ u[1] @ u[2])
    cyclic = config.cyclic_products()
    assert np.allclose(cyclic[0], config.product())
    assert np.allclose(cyclic[2], u[2] @ u[3] @ u[0] @ u[1])


def test_products_single_link(random_config):
    config = random_config(n=2, N=1)
    assert np.allclose(config.product(), config[0])
    assert np.allclose(config.shifted_product(), config[0])
    assert np.allclose(config.cyclic_products()[0], config[0])


def test_renormalized():
    links = np.stack([np.eye(2), np.diag([2.0, 2.0]), np.eye(2)])
    config = LinkConfig(links, check=False).renormalized()
    assert np.allclose(config.determinants(), 1)
    assert np.allclose(config[1], np.eye(2))


def test_renormalized_keeps_good_links(random_config):
    config = random_config()
    assert config.renormalized() is config


def test_action_identity():
    params = ChainParams(3, 4, 1 + 1j, 2)
    assert action(params, LinkConfig.identity(3, 4)) == pytest.approx(
        -3 * (3 + 1j)
    )


def test_action_dimension_mismatch():
    params = ChainParams(3, 4, 1, 1)
    with pytest.raises(InvalidDimension):
        action(params, LinkConfig.identity(3, 5))


def test_loop_observable(random_config):
    config = random_config(n=3, N=3)
    loop = config.product()
    assert loop_observable(config, 1) == pytest.approx(np.trace(loop))
    assert loop_observable(config, -2) == pytest.approx(
        np.trace(np.linalg.matrix_power(np.linalg.inv(loop), 2))
    )
    assert loop_observable(LinkConfig.identity(2, 3), 3) == 2


def test_loop_observable_zero_power():
    with pytest.raises(InvalidInput, match='nonzero'):
        loop_observable(LinkConfig.identity(2, 1), 0)


def test_zero_couplings_zero_drift(random_config):
    config = random_config(n=3, N=3)
    table = drift(ChainParams(3, 3, 0, 0), config)
    assert table.shape == (8, 3)
    assert np.all(table.entries == 0)


def test_drift_diagonal_su2():
    """For ``U = diag(e^-is, e^is)`` only the diagonal generator is active
    and ``K = -2 beta sin s``."""
    s = 0.7 + 0.3j
    params = ChainParams(2, 1, 0.4 + 0.1j, 0.6 - 0.3j)
    table = drift(params, diagonal_su2(s)).entries
    beta = params.beta1 + params.beta2
    assert table[2, 0] == pytest.approx(-2 * beta * cmath.sin(s))
    assert np.allclose(table[:2], 0)


@pytest.mark.parametrize('n,N', [(2, 1), (2, 3), (3, 4), (4, 2)])
def test_drift_finite_difference(n, N, rng):
    """The analytic drift is the left Lie derivative of the action."""
    params = ChainParams(n, N, 1.3 + 0.2j, 0.7 - 0.4j)
    config = LinkConfig.random(n, N, rng, imaginary=0.2)
    table = drift(params, config)
    for a in range(n * n - 1):
        for k in range(N):
            numeric = central_difference(
                lambda eps: action(params, left_multiply(config, a, k, eps))
            )
            assert abs(numeric - table[a, k]) < 1e-6


@seed(11)
@settings(max_examples=200, deadline=None)
@given(
    links=arrays(np.float64, (2, 8, 3), elements=st.floats(-1.5, 1.5)),
    gauge=arrays(np.float64, (2, 8, 3), elements=st.floats(-1.5, 1.5)),
)
def test_gauge_invariance(links, gauge):
    """Action and loop observables do not change under complexified gauge
    transforms."""
    basis = generator_basis(3)
    config = LinkConfig(
        expm(1j * basis.combine(links[0] + 0.3j * links[1])), check=False
    )
    matrices = expm(1j * basis.combine(gauge[0] + 0.3j * gauge[1]))
    transformed = gauge_transform(config, matrices)
    params = ChainParams(3, 3, 1.2 + 0.3j, 0.8)

    before = action(params, config)
    assert abs(action(params, transformed) - before) < 1e-10 * max(
        1, abs(before)
    )
    for k in (1, -1, 2):
        value = loop_observable(config, k)
        assert abs(loop_observable(transformed, k) - value) < 1e-10 * max(
            1, abs(value)
        )


def test_gauge_transform_formula(rng):
    config = LinkConfig.random(2, 3, rng)
    gauge = random_gauge(2, 3, rng)
    transformed = gauge_transform(config, gauge)
    expected = np.linalg.inv(gauge[1]) @ config[1] @ gauge[2]
    assert np.allclose(transformed[1], expected)
    expected = np.linalg.inv(gauge[2]) @ config[2] @ gauge[0]
    assert np.allclose(transformed[2], expected)


def test_gauge_transform_rejects_bad_determinant(rng):
    config = LinkConfig.random(2, 3, rng)
    gauge = random_gauge(2, 3, rng)
    gauge[1] *= 2
    with pytest.raises(InvalidInput, match='gauge matrix 2'):
        gauge_transform(config, gauge)


def test_gauge_transform_rejects_wrong_count(rng):
    config = LinkConfig.random(2, 3, rng)
    with pytest.raises(InvalidDimension):
        gauge_transform(config, random_gauge(2, 2, rng))


def test_eigen_phases():
    s = 0.4 - 0.2j
    phases = np.sort_complex(eigen_phases(diagonal_su2(s)))
    assert np.allclose(phases, [-s, s])
