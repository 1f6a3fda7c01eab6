"""
Finite-difference oracles and gauge helpers shared by the tests.

"""
import numpy as np

from gaugecool.algebra import expm, generator_basis
from gaugecool.model import LinkConfig


def left_multiply(config, a, k, eps):
    """Return *config* with link *k* replaced by ``exp(i eps l_a) U_k``."""
    lam = generator_basis(config.n)[a]
    links = config.links.copy()
    links[k] = expm(1j * eps * lam) @ links[k]
    return LinkConfig(links, check=False)


def imaginary_gauge(config, y):
    """Apply the gauge ``V_k = exp(-Y_k . l)`` for a real table *y*; the
    links become ``exp(Y_k . l) U_k exp(-Y_(k+1) . l)``."""
    generator = generator_basis(config.n).combine(y)
    links = (
        expm(generator) @ config.links @ np.roll(expm(-generator), -1, axis=0)
    )
    return LinkConfig(links, check=False)


def central_difference(f, h=1e-5):
    """Central difference of a function of one real variable at 0."""
    return (f(h) - f(-h)) / (2 * h)


def second_difference(f, h=1e-4):
    return (f(h) - 2 * f(0.0) + f(-h)) / h ** 2
