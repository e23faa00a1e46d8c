import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tline_dce import quantization as qz
from tline_dce.constants import HBAR
from tline_dce.errors import DomainError
from tline_dce.lattice import CircuitFamily, CircuitSpec

FAMILIES = list(CircuitFamily)


@pytest.fixture(params=FAMILIES, ids=lambda f: f.value)
def modes64(request):
    return qz.build_modes(CircuitSpec(request.param, N=64, rhtl2_approx=True))


def random_amplitudes(modes, rng):
    a = rng.normal(size=modes.size) + 1j * rng.normal(size=modes.size)
    a[modes.index(-(modes.spec.N // 2))] = 0  # band edge carried by +N/2
    return a


def test_mode_count_and_labels():
    m = qz.build_modes(CircuitSpec("LHTL1"))
    assert m.size == 200
    assert sorted(set(np.abs(m.j))) == list(range(1, 101))
    assert m.index(-100) == 0 and m.index(-1) == 99 and m.index(1) == 100 and m.index(100) == 199


def test_amp_norm_zeta_identity(modes64):
    np.testing.assert_allclose(modes64.amp_norm * modes64.zeta, 1 / (2 * 64), rtol=1e-14)


def test_mode_function_modulus_and_edge_sign(modes64):
    n = np.arange(1, 65)
    for j in (1, -5, 32):
        phi = qz.mode_function(modes64, j, n, t=-3e-12)
        np.testing.assert_allclose(np.abs(phi), modes64.amp_norm[modes64.index(j)], rtol=1e-14)
    edge = qz.mode_function(modes64, 32, n, 0.0)
    np.testing.assert_allclose(edge.real / abs(edge[0]), (-1.0) ** n, atol=1e-12)


def test_mode_function_rejects_positive_time(modes64):
    with pytest.raises(DomainError, match="dynamics"):
        qz.mode_function(modes64, 1, 1, t=1e-12)


def test_normalization_direct_sum():
    """Inner products summed node by node, no matrix algebra."""
    spec = CircuitSpec("LHTL1", N=16)
    m = qz.build_modes(spec)
    n = np.arange(1, 17)

    def inner(i, j, t):
        phi_i = qz.mode_function(m, i, n, t)
        phi_j = qz.mode_function(m, j, n, t)
        w_i, w_j = m.omega0[m.index(i)], m.omega0[m.index(j)]
        total = 0j
        for a, b in zip(phi_i, phi_j):
            total += a * np.conj(-1j * w_j * b) - (-1j * w_i * a) * np.conj(b)
        return -1j * spec.C / HBAR * total

    assert inner(3, 3, -1e-12) == pytest.approx(1.0, abs=1e-12)
    assert inner(3, -3, 0.0) == pytest.approx(0.0, abs=1e-12)
    assert inner(2, 5, 0.0) == pytest.approx(0.0, abs=1e-12)
    for i, j in [(3, 3), (3, -3), (2, 5)]:
        assert qz.normalization_check(m, i, j, -1e-12 if i == j else 0.0) == pytest.approx(
            inner(i, j, -1e-12 if i == j else 0.0), abs=1e-13
        )


def test_normalization_band_edge_alias():
    m = qz.build_modes(CircuitSpec("LHTL2", N=16))
    assert qz.normalization_check(m, 8, -8) == pytest.approx(1.0, abs=1e-12)


def test_normalization_matrix(modes64):
    delta = qz.periodic_delta(64, modes64.j[:, None], modes64.j[None, :])
    np.testing.assert_allclose(qz.normalization_matrix(modes64, t=-2e-12), delta, atol=1e-12)


def test_commutator_matrix(modes64):
    delta = qz.periodic_delta(64, modes64.j[:, None], modes64.j[None, :])
    comm = qz.commutator_matrix(modes64)
    np.testing.assert_allclose(modes64.chi[:, None] * comm, delta, atol=1e-12)
    if not modes64.spec.family.left_handed:
        np.testing.assert_allclose(comm, delta, atol=1e-12)


def test_commutator_negative_control(modes64):
    delta = qz.periodic_delta(64, modes64.j[:, None], modes64.j[None, :])
    comm = qz.commutator_matrix(modes64, chi=modes64.chi * 1.01)
    assert np.max(np.abs(modes64.chi[:, None] * comm - delta)) > 1e-3


def test_single_mode_extraction(modes64):
    for j in (1, -7, 20):
        a = np.zeros(modes64.size, complex)
        a[modes64.index(j)] = 1.0
        b = qz.extract_amplitudes(modes64, qz.embed(modes64, a))
        np.testing.assert_allclose(b, a, atol=1e-12)


def test_zero_state(modes64):
    z = np.zeros(64)
    assert np.all(qz.extract_amplitudes(modes64, qz.FieldState(z, z)) == 0)


def test_two_mode_superposition(modes64):
    a = np.zeros(modes64.size, complex)
    a[modes64.index(3)] = 0.5 - 0.2j
    a[modes64.index(-11)] = 1.5j
    st_ = qz.embed(modes64, a, t=-1e-12)
    assert qz.extract_amplitude(modes64, st_, 3, t=-1e-12) == pytest.approx(0.5 - 0.2j, abs=1e-12)
    assert qz.extract_amplitude(modes64, st_, -11, t=-1e-12) == pytest.approx(1.5j, abs=1e-12)


def test_round_trip_random(modes64):
    rng = np.random.default_rng(7)
    for _ in range(10):
        a = random_amplitudes(modes64, rng)
        b = qz.extract_amplitudes(modes64, qz.embed(modes64, a))
        b[modes64.index(-32)] = 0
        assert np.max(np.abs(b - a)) <= 1e-10 * np.max(np.abs(a))


def test_embedded_field_is_real(modes64):
    a = random_amplitudes(modes64, np.random.default_rng(3))
    st_ = qz.embed(modes64, a)
    assert np.max(np.abs(st_.Phi.imag)) < 1e-12 * np.max(np.abs(st_.Phi))


def test_extract_shape_error(modes64):
    with pytest.raises(ValueError, match="nodes"):
        qz.extract_amplitudes(modes64, qz.FieldState(np.zeros(10), np.zeros(10)))
    with pytest.raises(ValueError):
        qz.FieldState(np.zeros(4), np.zeros(5))


def test_momentum_stencils():
    Phidot = np.random.default_rng(0).normal(size=8)
    lhtl1 = CircuitSpec("LHTL1", N=8)
    P = qz.conjugate_momentum(lhtl1, Phidot)
    n = 3
    expected = lhtl1.C * (2 * Phidot[n] - Phidot[n + 1] - Phidot[n - 1]) + lhtl1.C_J * Phidot[n]
    assert P[n] == pytest.approx(expected, rel=1e-14)
    # periodic wrap at node 1
    lhtl2 = CircuitSpec("LHTL2", N=8)
    P2 = qz.conjugate_momentum(lhtl2, Phidot)
    assert P2[0] == pytest.approx(lhtl2.C * (2 * Phidot[0] - Phidot[1] - Phidot[7]), rel=1e-14)
    np.testing.assert_array_equal(qz.conjugate_momentum(CircuitSpec("RHTL1", N=8), Phidot), 0.4e-12 * Phidot)


def test_parseval_energy(modes64):
    rng = np.random.default_rng(11)
    for _ in range(5):
        a = 1e-3 * random_amplitudes(modes64, rng)
        st_ = qz.embed(modes64, a)
        e_field = qz.field_energy(modes64.spec, st_.Phi.real, st_.Phidot.real)
        assert e_field == pytest.approx(qz.amplitude_energy(modes64, a), rel=1e-8)


def test_hamiltonian_spectrum(modes64):
    vac = np.zeros(modes64.size, int)
    zero_point = qz.hamiltonian_spectrum(modes64, vac)
    assert zero_point == pytest.approx(np.sum(HBAR * modes64.omega0 / 2), rel=1e-14)
    for j in (1, -9, 32):
        occ = vac.copy()
        occ[modes64.index(j)] = 1
        gap = qz.hamiltonian_spectrum(modes64, occ) - zero_point
        assert gap == pytest.approx(modes64.epsilon[modes64.index(j)], rel=1e-9)
    with pytest.raises(DomainError):
        occ = vac.copy()
        occ[0] = -1
        qz.hamiltonian_spectrum(modes64, occ)


def test_mode_table_csv():
    text = qz.build_modes(CircuitSpec("RHTL1", N=8)).to_csv()
    lines = text.splitlines()
    assert lines[0] == "j,k,omega0,chi,epsilon_over_hbar,amp_norm"
    assert len(lines) == 9
    assert lines[1].startswith("-4,")


@settings(max_examples=25, deadline=None)
@given(
    fam=st.sampled_from(FAMILIES),
    half=st.integers(2, 20),
    seed=st.integers(0, 2**32 - 1),
    t=st.floats(-1e-10, 0.0),
)
def test_round_trip_property(fam, half, seed, t):
    m = qz.build_modes(CircuitSpec(fam, N=2 * half))
    a = random_amplitudes(m, np.random.default_rng(seed))
    b = qz.extract_amplitudes(m, qz.embed(m, a, t), t)
    b[m.index(-half)] = 0
    assert np.max(np.abs(b - a)) <= 1e-10 * np.max(np.abs(a))
