import math

import numpy as np
import pytest

from rabifloquet.errors import DomainError, MultiphotonResonanceError
from rabifloquet.floquet import build_floquet_matrix_lab, quasienergies
from rabifloquet.gvv import (
    build_floquet_matrix_dut,
    frame_unitary,
    gvv_effective,
    gvv_shifts,
)
from rabifloquet.model import DriveParams
from rabifloquet.numerics import bessel_j


def brute_force_shifts(p, N=40):
    """Independent oracle: textbook second-order perturbation sums taken
    directly from the rotated-frame Floquet matrix, with the nearly
    degenerate pair excluded."""
    F = build_floquet_matrix_dut(p, N).matrix
    diag = np.diag(F).copy()
    V = F - np.diag(diag)
    i10 = 2 * N            # excited-like state, Fourier index 0
    i01 = 2 * (N + 1) + 1  # ground-like state, Fourier index 1
    d1 = d0 = d10 = 0.0
    for s in range(len(diag)):
        if s in (i10, i01):
            continue
        d1 += V[s, i10] ** 2 / (diag[i10] - diag[s])
        d0 += V[s, i01] ** 2 / (diag[i01] - diag[s])
        d10 += V[i10, s] * V[s, i01] / (diag[i10] - diag[s])
    return d1, d0, d10


class TestShifts:
    def test_against_brute_force(self):
        for omega, amp in [(0.6, 1.0), (0.6, 4.18), (1.0, 2.5), (1.5, 6.0)]:
            p = DriveParams(1.0, amp, omega)
            d1, d0, d10, d01 = gvv_shifts(p, 100)
            b1, b0, b10 = brute_force_shifts(p)
            assert d1 == pytest.approx(b1, abs=1e-12)
            assert d0 == pytest.approx(b0, abs=1e-12)
            assert d10 == pytest.approx(b10, abs=1e-12)
            assert d01 == pytest.approx(b10, abs=1e-12)

    def test_symmetries(self):
        rng = np.random.default_rng(21)
        for _ in range(15):
            p = DriveParams(1.0, float(rng.uniform(0.1, 8.0)), float(rng.uniform(0.5, 3.0)))
            d1, d0, d10, d01 = gvv_shifts(p)
            scale = max(abs(d1), abs(d10), 1e-300)
            assert abs(d1 + d0) <= 1e-10 * scale
            assert abs(d10 - d01) <= 1e-10 * scale

    def test_k_convergence(self):
        p = DriveParams(1.0, 6.0, 0.6)
        a = gvv_shifts(p, 60)
        b = gvv_shifts(p, 120)
        assert np.allclose(a, b, atol=1e-13)

    def test_rejects_bad_k(self):
        with pytest.raises(DomainError):
            gvv_shifts(DriveParams(1.0, 1.0, 1.0), 0)

    def test_multiphoton_resonance_guard(self):
        # tune omega to a vanishing three-photon denominator J0*omega0 = 3*omega
        omega = 1.0 / 3.0
        for _ in range(40):
            omega = bessel_j(0, 0.05 / omega) / 3.0
        with pytest.raises(MultiphotonResonanceError):
            gvv_shifts(DriveParams(1.0, 0.05, omega))


class TestEffective:
    def test_closed_form_equals_eigengap(self):
        # gvv_effective raises internally on disagreement; also check directly
        p = DriveParams(1.0, 4.0, 0.6)
        eff = gvv_effective(p)
        h = 0.5 * (eff.h + eff.h.T)
        ev = np.linalg.eigvalsh(h)
        assert eff.Omega == pytest.approx(float(ev[1] - ev[0]), abs=1e-12)

    def test_grwa_formula(self):
        p = DriveParams(1.0, 2.0, 0.9)
        eff = gvv_effective(p)
        j0 = bessel_j(0, p.A / p.omega)
        j1 = bessel_j(1, p.A / p.omega)
        assert eff.Omega_grwa == pytest.approx(
            math.sqrt((p.omega - j0) ** 2 + j1 ** 2), abs=1e-14
        )

    def test_weak_resonant_limit(self):
        p = DriveParams(1.0, 0.02, 1.0)
        eff = gvv_effective(p)
        assert eff.Omega == pytest.approx(0.01, rel=0.01)
        assert eff.Omega_grwa == pytest.approx(0.01, rel=0.01)

    def test_omega_close_to_exact_pair_gap_weak(self):
        p = DriveParams(1.0, 0.5, 0.6)
        N = 40
        F = build_floquet_matrix_dut(p, N).matrix
        ev, vec = np.linalg.eigh(F)
        k10 = int(np.argmax(np.abs(vec[2 * N, :])))
        k01 = int(np.argmax(np.abs(vec[2 * (N + 1) + 1, :])))
        exact = abs(float(ev[k10] - ev[k01]))
        assert abs(gvv_effective(p).Omega - exact) <= 0.02


class TestRotatedFrameMatrix:
    def test_hermitian(self):
        F = build_floquet_matrix_dut(DriveParams(1.0, 3.0, 0.6), 12)
        assert np.array_equal(F.matrix, F.matrix.T)

    def test_diagonal_pattern(self):
        p = DriveParams(1.0, 2.0, 0.6)
        N = 5
        F = build_floquet_matrix_dut(p, N).matrix
        j0 = bessel_j(0, p.A / p.omega)
        for b, n in enumerate(range(-N, N + 1)):
            assert F[2 * b, 2 * b] == pytest.approx(n * p.omega + 0.5 * j0)
            assert F[2 * b + 1, 2 * b + 1] == pytest.approx(n * p.omega - 0.5 * j0)

    def test_coupling_parity(self):
        p = DriveParams(1.0, 2.0, 0.6)
        N = 5
        F = build_floquet_matrix_dut(p, N).matrix
        j1 = bessel_j(1, p.A / p.omega)
        j2 = bessel_j(2, p.A / p.omega)
        b = N  # Fourier index 0 block
        # odd harmonic couples only opposite internal states, odd under swap
        assert F[2 * b, 2 * (b + 1) + 1] == pytest.approx(-0.5 * j1)
        assert F[2 * b + 1, 2 * (b + 1)] == pytest.approx(0.5 * j1)
        assert F[2 * b, 2 * (b + 1)] == 0.0
        # even harmonic couples like states with opposite signs
        assert F[2 * b, 2 * (b + 2)] == pytest.approx(0.5 * j2)
        assert F[2 * b + 1, 2 * (b + 2) + 1] == pytest.approx(-0.5 * j2)

    def test_quasienergies_match_lab_frame(self):
        for omega, amp in [(0.6, 1.0), (0.6, 4.18), (1.0, 3.0), (2.0, 7.0)]:
            p = DriveParams(1.0, amp, omega)
            g_lab = quasienergies(build_floquet_matrix_lab(p, 40), omega).gap
            g_rot = quasienergies(build_floquet_matrix_dut(p, 40), omega).gap
            assert abs(g_lab - g_rot) <= 1e-8


class TestFrameUnitary:
    def test_identity_at_zero(self):
        u = frame_unitary(DriveParams(1.0, 5.0, 0.8), 0.0)
        assert np.allclose(u, np.eye(2))

    def test_unitary_everywhere(self):
        p = DriveParams(1.0, 10.0, 1.0)
        for t in np.linspace(0.0, 2.0 * p.period, 13):
            u = frame_unitary(p, float(t))
            assert np.allclose(u @ u.conj().T, np.eye(2), atol=1e-14)

    def test_periodicity(self):
        p = DriveParams(1.0, 3.0, 0.6)
        assert np.allclose(frame_unitary(p, 1.3),
                           frame_unitary(p, 1.3 + p.period), atol=1e-12)
