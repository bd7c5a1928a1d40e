import numpy as np
import pytest

from spinforge import SpinSystem

# Fast demo system for RTA-only dynamics (frequency selectivity not needed:
# only the RTA Hamiltonian itself is ever integrated against closed forms).
DEMO = SpinSystem(omega1=500.0, omega2=125.0, J=1.0, gamma1=1.0, gamma2=1.0)

# Guard-compliant desk system for designed pulses and exact-Hamiltonian work:
# min resonance gap 2J = 12, default design coupling 0.05 (guard ratio 120).
DESK = SpinSystem(omega1=64.0, omega2=16.0, J=6.0, gamma1=1.0, gamma2=1.0)
DESK_H1 = 0.05

# Production-scale numbers: proton-like first spin, second gyromagnetic
# ratio a quarter of the first, weak scalar coupling.
FULL_SCALE = SpinSystem(omega1=5.0e8, omega2=1.25e8, J=200.0, gamma1=2.8e8, gamma2=7.0e7)


@pytest.fixture
def demo_system():
    return DEMO


@pytest.fixture
def desk_system():
    return DESK


@pytest.fixture
def production_system():
    return FULL_SCALE


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
