import math

import numpy as np
import pytest

from rabifloquet.errors import ContractViolationError, DomainError
from rabifloquet.model import (
    DensityMatrix,
    DriveParams,
    PureState,
    TimeSeries,
    hamiltonian_lab,
)


class TestDriveParams:
    def test_period(self):
        p = DriveParams(omega0=1.0, A=2.0, omega=0.5)
        assert p.period == pytest.approx(4.0 * math.pi)

    @pytest.mark.parametrize("kwargs", [
        dict(omega0=0.0, A=1.0, omega=1.0),
        dict(omega0=1.0, A=-0.1, omega=1.0),
        dict(omega0=1.0, A=1.0, omega=0.0),
        dict(omega0=1.0, A=1.0, omega=-2.0),
        dict(omega0=float("inf"), A=1.0, omega=1.0),
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(DomainError):
            DriveParams(**kwargs)


class TestHamiltonian:
    def test_static_limit(self):
        p = DriveParams(1.0, 0.0, 1.0)
        h = hamiltonian_lab(p, 0.37)
        assert np.allclose(h, np.diag([0.5, -0.5]))

    def test_quarter_period_diagonal(self):
        p = DriveParams(1.0, 2.0, 1.0)
        h = hamiltonian_lab(p, p.period / 4.0)
        assert abs(h[0, 1]) < 1e-15
        assert abs(h[1, 0]) < 1e-15

    def test_initial_coupling(self):
        p = DriveParams(1.0, 2.0, 0.7)
        h = hamiltonian_lab(p, 0.0)
        assert h[0, 1] == pytest.approx(1.0)
        assert h[1, 0] == pytest.approx(1.0)

    def test_periodicity(self):
        # t + T is itself rounded, so equality holds to rounding error only
        p = DriveParams(1.0, 1.5, 0.6)
        for t in (0.1, 3.7, 12.9):
            assert np.allclose(hamiltonian_lab(p, t),
                               hamiltonian_lab(p, t + p.period), atol=1e-12)

    def test_hermitian(self):
        p = DriveParams(1.3, 0.8, 0.9)
        for t in np.linspace(0.0, 2.0 * p.period, 17):
            h = hamiltonian_lab(p, float(t))
            assert np.allclose(h, h.conj().T)


class TestStates:
    def test_vector_ordering_excited_first(self):
        psi = PureState(c0=0.0, c1=1.0)
        assert np.allclose(psi.vector(), [1.0, 0.0])

    def test_ground_and_excited(self):
        assert np.allclose(PureState.ground().vector(), [0.0, 1.0])
        assert np.allclose(PureState.excited().vector(), [1.0, 0.0])

    def test_normalization_enforced(self):
        with pytest.raises(ContractViolationError):
            PureState(c0=1.0, c1=1.0)

    def test_density_matrix_p1(self):
        rho = DensityMatrix(np.diag([0.25, 0.75]).astype(complex))
        assert rho.p1 == pytest.approx(0.25)

    def test_density_matrix_from_pure(self):
        rho = DensityMatrix.from_pure(PureState.excited())
        assert rho.p1 == pytest.approx(1.0)

    @pytest.mark.parametrize("mat", [
        np.array([[0.5, 0.1], [0.4, 0.5]]),            # not Hermitian
        np.diag([0.9, 0.9]),                           # trace != 1
        np.array([[1.2, 0.0], [0.0, -0.2]]),           # negative eigenvalue
    ])
    def test_density_matrix_rejects(self, mat):
        with pytest.raises(ContractViolationError):
            DensityMatrix(mat.astype(complex))


class TestTimeSeries:
    def test_bounds_check(self):
        t = np.linspace(0.0, 1.0, 5)
        TimeSeries(t=t, p1=np.full(5, 0.5)).check_bounds()
        with pytest.raises(ContractViolationError):
            TimeSeries(t=t, p1=np.array([0.0, 0.5, 1.2, 0.5, 0.0])).check_bounds()

    def test_length_mismatch(self):
        with pytest.raises(ContractViolationError):
            TimeSeries(t=np.linspace(0.0, 1.0, 5), p1=np.zeros(4))
