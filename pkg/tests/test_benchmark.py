"""
Performance benchmark tests using the `pytest-benchmark` package.

Benchmarks are divided into three groups: *frequent*, *targeted*, and
*simulation*. The *frequent* group benchmarks the linear algebra called once
or more per Langevin step. The *targeted* group benchmarks single steps of
the chains with each cooling strategy. The *simulation* group benchmarks
complete short runs.

"""
import numpy as np
import pytest

from gaugecool import _speedups
from gaugecool.algebra import eig, expm
from gaugecool.cooling import (
    GradientDescent,
    NoCooling,
    Optimal,
    cool_optimal,
    gradient,
)
from gaugecool.exact import QuadratureSpec, su3_expectation
from gaugecool.langevin import (
    PolyakovChain,
    Schedule,
    euler_step,
    make_rng,
    run_chain,
)
from gaugecool.model import ChainParams
from gaugecool.reduced import ReducedChain, ReducedParams, run_reduced

PARAMS = ChainParams.from_chemical_potential(3, 16, 2, 0.1, 1)


@pytest.fixture
def config(random_config):
    return random_config(n=3, N=16, spread=0.5, imaginary=0.1)


@pytest.mark.benchmark(group='frequent')
def test_expm(config, benchmark):
    benchmark(expm, 0.01j * config.links[0])


@pytest.mark.benchmark(group='frequent')
def test_eig(config, benchmark):
    benchmark(eig, config.product())


@pytest.mark.benchmark(group='frequent')
def test_cool_optimal(config, benchmark):
    benchmark(cool_optimal, config)


@pytest.mark.benchmark(group='frequent')
def test_gradient(config, benchmark):
    benchmark(gradient, config)


@pytest.mark.benchmark(group='frequent')
def test_euler_step(config, rng, benchmark):
    noise = rng.standard_normal((8, 16))
    benchmark(euler_step, PARAMS, config, 2e-5, noise)


@pytest.mark.benchmark(group='frequent')
def test_reduced_drift(benchmark):
    benchmark(_speedups.drift, 0.5, 0.1, 1.0, 0.2)


@pytest.mark.benchmark(group='targeted')
@pytest.mark.parametrize('strategy', [
    NoCooling(), GradientDescent(1.0, 5), Optimal(),
], ids=repr)
def test_chain_step(strategy, benchmark):
    chain = PolyakovChain(PARAMS, strategy, 2e-5, make_rng(0))
    benchmark(chain.step)


@pytest.mark.benchmark(group='targeted')
def test_reduced_advance(benchmark):
    chain = ReducedChain(ReducedParams(1.0, 0.2), 1e-5, make_rng(0))
    benchmark(chain.advance, 1000)


@pytest.mark.benchmark(group='simulation')
def test_chain_run(benchmark):
    schedule = Schedule(2e-5, 2e-3, 2e-4, 10, seed=1)

    def sim():
        return run_chain(PARAMS, schedule, Optimal(), [1, -1])

    report = benchmark(sim)
    assert report.ok
    assert report.num_samples == 10


@pytest.mark.benchmark(group='simulation')
def test_reduced_run(benchmark):
    schedule = Schedule(1e-5, 0.01, 0.001, 100, seed=1)

    def sim():
        return run_reduced(ReducedParams(1.0, 0.2), schedule)

    report = benchmark(sim)
    assert report.ok
    assert report.num_samples == 100


@pytest.mark.benchmark(group='simulation')
def test_su3_quadrature(benchmark):
    value = benchmark(su3_expectation, 1, PARAMS.beta1, PARAMS.beta2,
                      QuadratureSpec(128))
    assert np.isfinite(value)
