import math

import numpy as np
import pytest

from tline_dce import dynamics as dyn, lattice
from tline_dce.errors import DomainError, IntegrationError
from tline_dce.lattice import CircuitFamily, CircuitSpec

LHTL1 = CircuitSpec("LHTL1")
LHTL2 = CircuitSpec("LHTL2")


def drive(eta=0.01, Omega=1e12, t_f=1e-10, **kw):
    return dyn.DriveSpec(eta=eta, Omega=Omega, t_f=t_f, **kw)


def test_drive_energy_profile():
    d = drive(eta=0.02)
    E0 = LHTL1.E0
    assert dyn.drive_energy(LHTL1, d, 0.0) == E0
    assert dyn.drive_energy(LHTL1, d, math.pi / (2 * d.Omega)) == pytest.approx(E0 * 1.08, rel=1e-14)
    assert dyn.drive_energy(LHTL1, d, 2 * d.t_f) == E0
    assert dyn.drive_energy(LHTL1, d, -1e-12) == E0


def test_cosine_ramp_envelope():
    d = drive(ramp="cosine", ramp_window=2e-11)
    t = np.array([0.0, 1e-11, 2e-11, 5e-11, 9e-11, 1e-10])
    np.testing.assert_allclose(dyn.envelope(d, t), [0, 0.5, 1, 1, 0.5, 0], atol=1e-14)
    with pytest.raises(ValueError):
        drive(ramp="cosine", ramp_window=0.0)


@pytest.mark.parametrize(
    "kw",
    [{"eta": -0.1}, {"eta": 0.2}, {"Omega": 0.0}, {"t_f": 0.0}, {"ramp": "linear"}],
)
def test_drive_validation(kw):
    with pytest.raises(ValueError):
        drive(**kw)


def test_drive_warns_above_005():
    with pytest.warns(RuntimeWarning):
        drive(eta=0.08)


def test_instantaneous_frequency_identities():
    d = drive(eta=0.02, Omega=7.3e11)
    t = np.linspace(0, d.t_f, 37)
    s = np.sin(d.Omega * t)
    for fam in ("LHTL1", "RHTL2"):
        spec = CircuitSpec(fam)
        w0 = lattice.dispersion(spec, 13)
        w = dyn.instantaneous_frequency(spec, d, 13, t)
        np.testing.assert_allclose(w**2 / w0**2 - 1, 4 * d.eta * s, atol=1e-12)
    for fam in ("LHTL2", "RHTL1"):
        spec = CircuitSpec(fam)
        w0 = lattice.dispersion(spec, 13)
        w = dyn.instantaneous_frequency(spec, d, 13, t)
        np.testing.assert_allclose((w**2 - w0**2) / (spec.tilde_E0 / spec.C), 4 * d.eta * s, atol=1e-12)
    flat = drive(eta=0.0)
    assert dyn.instantaneous_frequency(LHTL1, flat, 5, 3e-11) == lattice.dispersion(LHTL1, 5)


def test_modulation_gain_matches_dispersion():
    """Closed-form omega^2(t) used by the integrator agrees with the dispersion at E(t)."""
    d = drive(eta=0.03, Omega=9e11)
    t = np.linspace(0, d.t_f, 11)
    for fam in CircuitFamily:
        spec = CircuitSpec(fam)
        w0 = lattice.dispersion(spec, 40)
        lhs = w0**2 + lattice.modulation_gain(spec, 40) * dyn.modulation(d, t)
        np.testing.assert_allclose(lhs, dyn.instantaneous_frequency(spec, d, 40, t) ** 2, rtol=1e-13)


def test_resonance_offset():
    w0 = 3e11
    assert dyn.resonance_offset(drive(Omega=2 * w0), w0) == 0.0
    d = drive(eta=0.01, Omega=2 * w0 * 1.1, tol_res=0.01)
    assert dyn.resonance_offset(d, w0) == pytest.approx(0.1, rel=1e-12)
    assert not dyn.is_resonant(d, w0)
    assert dyn.resonance_offset(drive(Omega=1e-300), w0) == pytest.approx(-1.0)


def test_multiscale_initial_values():
    d = dyn.DriveSpec.resonant(LHTL1, 10, 0.01, tau=1e-12)
    w0 = lattice.dispersion(LHTL1, 10)
    A, B = dyn.multiscale_AB(LHTL1, d, 10, 0.0)
    assert A == 0 and B == pytest.approx(1 / math.sqrt(2 * w0), rel=1e-15)


def test_multiscale_massless_sinh():
    d = dyn.DriveSpec.resonant(LHTL1, 10, 0.01, tau=1e-12)
    w0 = lattice.dispersion(LHTL1, 10)
    A, B = dyn.multiscale_AB(LHTL1, d, 10, 0.5 / w0)
    assert (A * math.sqrt(2 * w0)).real == pytest.approx(0.5210953054937474, rel=1e-14)
    assert (B * math.sqrt(2 * w0)).real == pytest.approx(math.cosh(0.5), rel=1e-14)


def test_multiscale_massive_rate():
    d = dyn.DriveSpec.resonant(LHTL2, 100, 0.01, tau=1e-12)
    w0 = lattice.dispersion(LHTL2, 100)
    A, _ = dyn.multiscale_AB(LHTL2, d, 100)
    x = LHTL2.tilde_E0 * 1e-12 / (LHTL2.C * w0)
    assert (A * math.sqrt(2 * w0)).real == pytest.approx(math.sinh(x), rel=1e-13)


def test_multiscale_off_resonant():
    d = dyn.DriveSpec.resonant(LHTL1, 10, 0.01, tau=1e-12, detuning=0.1)
    A, B = dyn.multiscale_AB(LHTL1, d, 10)
    assert A == 0
    with pytest.raises(DomainError):
        dyn.multiscale_AB(LHTL1, d, 10, -1.0)


def test_bogoliubov_from_AB():
    w0 = 2e11
    r = dyn.bogoliubov_from_AB(0.0, 1 / math.sqrt(2 * w0), w0)
    assert r.alpha == pytest.approx(1.0) and r.beta == 0
    r = dyn.bogoliubov_from_AB(math.sinh(1) / math.sqrt(2 * w0), math.cosh(1) / math.sqrt(2 * w0), w0)
    assert r.particle_number == pytest.approx(1.3810978455418155, rel=1e-14)
    for tau in (0.0, 0.3, 2.0, 7.0):
        r = dyn.bogoliubov_from_AB(math.sinh(tau), math.cosh(tau), 0.5)
        # |alpha|^2 - |beta|^2 cancels, so the floor is eps * |alpha|^2
        assert r.unitarity == pytest.approx(1.0, abs=1e-12 * abs(r.alpha) ** 2)


def test_undriven_trajectory_is_free_rotation():
    d = drive(eta=0.0, t_f=5e-11)
    traj = dyn.integrate_mode(LHTL1, d, 4, samples=200)
    w0 = traj.omega0
    np.testing.assert_allclose(traj.Q, np.exp(-1j * w0 * traj.t), atol=1e-9)
    A, B = dyn.extract_AB_numeric(traj, w0, d.t_f)
    assert abs(A) < 1e-9 * abs(B)
    assert B == pytest.approx(traj.norm, rel=1e-9)


def test_extraction_reconstructs_endpoint():
    d = dyn.DriveSpec.resonant(LHTL2, 30, 0.01, tau=1e-12)
    traj = dyn.integrate_mode(LHTL2, d, 30, samples=16)
    w0 = traj.omega0
    A, B = dyn.extract_AB_numeric(traj, w0, d.t_f)
    Q = A * np.exp(1j * w0 * d.t_f) + B * np.exp(-1j * w0 * d.t_f)
    assert abs(Q - traj.norm * traj.Q[-1]) <= 1e-12 * abs(traj.norm * traj.Q[-1])
    with pytest.raises(ValueError):
        dyn.extract_AB_numeric(traj, w0, 2 * d.t_f)


@pytest.mark.parametrize("family", list(CircuitFamily))
def test_wronskian_and_unitarity(family):
    spec = CircuitSpec(family)
    h = 25
    d = dyn.DriveSpec.resonant(spec, h, 0.02, tau=1e-12)
    result, traj = dyn.numeric_bogoliubov(spec, d, h, rtol=1e-10, atol=1e-12)
    assert traj.wronskian_drift.max() <= 1e-9
    assert result.unitarity == pytest.approx(1.0, abs=1e-8)
    assert traj.Q[0] == 1 and traj.Qdot[0] == pytest.approx(-1j * traj.omega0)


def test_resonant_oracle_close_to_sinh():
    h = 1
    w0 = lattice.dispersion(LHTL1, h)
    tau = 1.0 / w0
    d = dyn.DriveSpec.resonant(LHTL1, h, 0.01, tau=tau)
    result, _ = dyn.numeric_bogoliubov(LHTL1, d, h)
    assert result.particle_number == pytest.approx(math.sinh(1.0) ** 2, rel=0.05)


def test_plus_minus_mode_degeneracy():
    d = dyn.DriveSpec.resonant(LHTL2, 17, 0.01, tau=1e-12)
    a, _ = dyn.numeric_bogoliubov(LHTL2, d, 17)
    b, _ = dyn.numeric_bogoliubov(LHTL2, d, -17)
    assert a.alpha == b.alpha and a.beta == b.beta
    an_a = dyn.analytic_bogoliubov(LHTL2, d, 17)
    an_b = dyn.analytic_bogoliubov(LHTL2, d, -17)
    assert an_a.beta == an_b.beta


def test_off_resonance_suppression_bandwidth():
    h = 5
    w0 = lattice.dispersion(LHTL1, h)
    tau = 1.0 / w0
    eta = 0.01
    res, _ = dyn.numeric_bogoliubov(LHTL1, dyn.DriveSpec.resonant(LHTL1, h, eta, tau=tau), h)
    off, _ = dyn.numeric_bogoliubov(LHTL1, dyn.DriveSpec.resonant(LHTL1, h, eta, tau=tau, detuning=10 * eta), h)
    assert off.particle_number < 0.05 * res.particle_number
    assert not off.resonant and res.resonant


def test_literal_initial_velocity_breaks_identity():
    d = drive(eta=0.0, t_f=2e-11)
    traj = dyn.integrate_mode(LHTL1, d, 3, initial_velocity="literal", samples=4)
    A, B = dyn.extract_AB_numeric(traj, traj.omega0, d.t_f)
    r = dyn.bogoliubov_from_AB(A, B, traj.omega0)
    assert abs(r.alpha) == pytest.approx(1.5, rel=1e-8)
    assert abs(r.beta) == pytest.approx(0.5, rel=1e-8)
    with pytest.raises(ValueError):
        dyn.integrate_mode(LHTL1, d, 3, initial_velocity="other")


def test_cosine_ramp_runs_and_stays_unitary():
    h = 3
    base = dyn.DriveSpec.resonant(LHTL1, h, 0.01, tau=1e-12)
    d = dyn.DriveSpec(eta=0.01, Omega=base.Omega, t_f=base.t_f, ramp="cosine", ramp_window=base.t_f / 10)
    res, traj = dyn.numeric_bogoliubov(LHTL1, d, h)
    assert res.unitarity == pytest.approx(1.0, abs=1e-8)
    assert 0 < res.particle_number


def test_integration_failure(monkeypatch):
    class Failed:
        status = -1
        message = "Required step size is less than spacing between numbers."
        t = np.array([0.0, 3.0])

    monkeypatch.setattr(dyn, "solve_ivp", lambda *a, **k: Failed())
    with pytest.raises(IntegrationError) as info:
        dyn.integrate_mode(LHTL1, drive(), 2)
    assert info.value.last_time == pytest.approx(3.0 / lattice.dispersion(LHTL1, 2))


def test_explicit_sample_times():
    d = drive(eta=0.01, t_f=1e-11)
    t = np.linspace(0, d.t_f, 5)
    traj = dyn.integrate_mode(LHTL1, d, 2, samples=t)
    np.testing.assert_allclose(traj.t, t, rtol=1e-14, atol=0)
    with pytest.raises(ValueError):
        dyn.integrate_mode(LHTL1, d, 2, samples=np.array([0.0, 2e-11]))


def test_resonant_factory_requires_one_time():
    with pytest.raises(ValueError):
        dyn.DriveSpec.resonant(LHTL1, 1, 0.01)
    with pytest.raises(ValueError):
        dyn.DriveSpec.resonant(LHTL1, 1, 0.0, tau=1e-12)
    d = dyn.DriveSpec.resonant(LHTL1, 1, 0.01, tau=1e-12)
    assert d.t_f == pytest.approx(1e-10) and d.tau == pytest.approx(1e-12)
    assert d.tol_res == 0.005
