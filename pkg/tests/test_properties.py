"""Property-based checks of the structural invariants."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oscbic import (
    LatticeConfig,
    SingleExcitationState,
    UniformGiantAtomLayout,
    build_hamiltonian,
    diagonalize,
    evolve,
    g_abs_sq,
    i_n_integral,
    non_markovianity,
    self_energy,
    uniform_lattice_config,
    zero_coupling_momenta,
)

layouts = st.builds(
    UniformGiantAtomLayout,
    M=st.integers(2, 6),
    n0=st.integers(1, 10),
    rho0=st.floats(0.05, 2.0),
)

off_axis_points = st.tuples(
    st.one_of(st.floats(0.05, 2.0), st.floats(-2.0, -0.05)),
    st.floats(-3.0, 3.0),
).map(lambda p: complex(*p))


@settings(max_examples=40, deadline=None)
@given(layout=layouts)
def test_coupling_intensity_nonnegative_and_bounded(layout):
    ks = np.linspace(-np.pi, np.pi, 257)
    vals = g_abs_sq(ks, layout)
    assert np.all(vals >= -1e-12)
    assert np.max(vals) <= layout.rho0**2 * layout.M**2 / (2 * np.pi) + 1e-12


@settings(max_examples=40, deadline=None)
@given(layout=layouts)
def test_zero_momenta_annihilate_coupling(layout):
    ks = zero_coupling_momenta(layout)
    assert len(ks) == layout.n0 * (layout.M - 1)
    assert np.max(np.abs(g_abs_sq(ks, layout))) < 1e-11


@settings(max_examples=30, deadline=None)
@given(layout=layouts, s=off_axis_points)
def test_self_energy_reflection(layout, s):
    # even spacing mirrors the band, flipping the sign under conjugation
    if layout.n0 % 2 == 1:
        layout = UniformGiantAtomLayout(layout.M, layout.n0 + 1, layout.rho0)
    lhs = self_energy(np.conj(s), layout)
    rhs = -np.conj(self_energy(s, layout))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(-12, 12),
    s=st.tuples(st.floats(0.05, 2.5), st.floats(-2.5, 2.5)).map(lambda p: complex(*p)),
)
def test_resolvent_integral_even_in_site_index(n, s):
    assert i_n_integral(-n, s) == i_n_integral(n, s)


@settings(max_examples=25, deadline=None)
@given(M=st.integers(3, 40), ell=st.integers(1, 12))
def test_non_markovianity_lower_bound(M, ell):
    assert non_markovianity(M, 4 * ell) > 4 * np.pi**2


@settings(max_examples=15, deadline=None)
@given(
    data=st.data(),
    n_sites=st.integers(6, 24),
    seed=st.integers(0, 2**31 - 1),
)
def test_hermiticity_and_completeness(data, n_sites, seed):
    rng = np.random.default_rng(seed)
    n_couplings = data.draw(st.integers(0, min(4, n_sites)))
    sites = rng.choice(np.arange(1, n_sites + 1), size=n_couplings, replace=False)
    couplings = tuple((int(s), float(rng.normal())) for s in sites)
    config = LatticeConfig(
        N=n_sites,
        J=float(rng.uniform(0.2, 2.0)),
        omega_a=float(rng.normal()),
        couplings=couplings,
    )
    h = build_hamiltonian(config)
    assert np.array_equal(h, h.T)
    spectrum = diagonalize(h)
    assert abs(spectrum.emitter_probabilities.sum() - 1.0) < 1e-10


@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 2**31 - 1), t_max=st.floats(0.5, 30.0))
def test_unitary_evolution_of_random_states(seed, t_max):
    rng = np.random.default_rng(seed)
    config, _ = uniform_lattice_config(3, 4, 1.0, N=40)
    vec = rng.normal(size=41) + 1j * rng.normal(size=41)
    vec /= np.linalg.norm(vec)
    spectrum = diagonalize(build_hamiltonian(config))
    series = evolve(
        spectrum,
        SingleExcitationState.from_vector(vec),
        np.linspace(0.0, t_max, 64),
    )
    assert np.max(np.abs(series.prob_total - 1.0)) < 1e-10
