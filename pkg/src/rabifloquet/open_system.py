"""Dissipative dynamics: lab-frame Lindblad integration and the reduced
rotating-frame route with time-dependent rates.

Rewriting the lab-frame damping and dephasing channels in the rotating
basis makes the decay parameters periodic functions of time; combined
with the effective 2x2 Hamiltonian this gives an approximate open-system
solution that can be rotated back to lab populations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DomainError
from .gvv import frame_unitary, gvv_effective
from .model import DensityMatrix, DriveParams, TimeSeries, hamiltonian_lab
from .numerics import evolve_ode

TWO_PI = 2.0 * math.pi

# Jump operators in the (upper, lower) matrix ordering used throughout.
_LOWER = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # |lower><upper|
_RAISE = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
_PROJ_UP = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
_PROJ_DOWN = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)


@dataclass(frozen=True)
class DecayRates:
    """Lab-frame dissipation parameters.

    Gamma_10 damps population from |1> to |0>, gamma_11 dephases |1>.
    The reverse channels Gamma_01 and gamma_00 are accepted but default
    to zero (the scenario studied throughout).
    """

    Gamma_10: float
    gamma_11: float
    Gamma_01: float = 0.0
    gamma_00: float = 0.0

    def __post_init__(self):
        for name in ("Gamma_10", "gamma_11", "Gamma_01", "gamma_00"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise DomainError(f"{name} must be finite and nonnegative")


@dataclass(frozen=True)
class RotatedRates:
    """Rotating-frame rates at one instant; all nonnegative by construction."""

    t: float
    gamma_s1s1: float
    gamma_s0s0: float
    Gamma_s1s0: float
    Gamma_s0s1: float


@dataclass(frozen=True)
class RotationWeights:
    """Coefficients of a lab jump operator expanded in the rotating basis."""

    zeta: float
    beta: float
    eta: float


def rotation_weights(p: DriveParams, t: float) -> RotationWeights:
    th = 0.5 * p.A * math.sin(math.fmod(p.omega * t, TWO_PI)) / p.omega
    return RotationWeights(
        zeta=0.5 * math.sin(2.0 * th),
        beta=math.sin(th) ** 2,
        eta=math.cos(th) ** 2,
    )


def rotated_rates(p: DriveParams, d: DecayRates, t: float) -> RotatedRates:
    """Time-dependent rotating-frame decay, excitation, and dephasing rates.

    At t = 0 the frames coincide and the lab rates are recovered; at
    strong drive the excitation rate periodically exceeds the decay rate.
    """
    s = math.sin(math.fmod(p.omega * t, TWO_PI))
    full = p.A * s / p.omega        # argument of the sin^2 terms
    half = 0.5 * full               # argument of the sin^4 / cos^4 terms
    sin2 = math.sin(full) ** 2
    c4 = math.cos(half) ** 4
    s4 = math.sin(half) ** 4
    return RotatedRates(
        t=t,
        gamma_s1s1=sin2 * d.Gamma_10 / 8.0 + c4 * d.gamma_11,
        gamma_s0s0=sin2 * d.Gamma_10 / 8.0 + s4 * d.gamma_11,
        Gamma_s1s0=sin2 * d.gamma_11 / 2.0 + c4 * d.Gamma_10,
        Gamma_s0s1=sin2 * d.gamma_11 / 2.0 + s4 * d.Gamma_10,
    )


def _dissipator(op: np.ndarray, rho: np.ndarray) -> np.ndarray:
    od = op.conj().T
    odo = od @ op
    return 2.0 * (op @ rho @ od) - odo @ rho - rho @ odo


def _check_physical(rho: np.ndarray, where: str) -> None:
    if abs(np.trace(rho).real - 1.0) > 1e-8:
        raise ContractViolationError(f"trace drift at {where}: {np.trace(rho).real}")
    if float(np.max(np.abs(rho - rho.conj().T))) > 1e-9:
        raise ContractViolationError(f"Hermiticity loss at {where}")
    if float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))) < -1e-8:
        raise ContractViolationError(f"negative population at {where}")


def evolve_lab_lindblad(
    p: DriveParams,
    d: DecayRates,
    rho0: DensityMatrix,
    t_grid,
    rel_tol: float = 1e-9,
    return_states: bool = False,
):
    """Integrate the full lab-frame Lindblad equation; returns P1(t).

    Dissipator convention: rho' = -i[H, rho] + (Gamma_10/2) D[|0><1|]
    + (Gamma_01/2) D[|1><0|] + gamma_11 D[|1><1|] + gamma_00 D[|0><0|]
    with D[O] rho = 2 O rho O+ - O+O rho - rho O+O, so an undriven
    excited state decays as exp(-Gamma_10 t).
    """
    t = np.asarray(t_grid, dtype=float)

    def rhs(time: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(2, 2)
        h = hamiltonian_lab(p, time)
        out = -1j * (h @ rho - rho @ h)
        if d.Gamma_10:
            out += 0.5 * d.Gamma_10 * _dissipator(_LOWER, rho)
        if d.Gamma_01:
            out += 0.5 * d.Gamma_01 * _dissipator(_RAISE, rho)
        if d.gamma_11:
            out += d.gamma_11 * _dissipator(_PROJ_UP, rho)
        if d.gamma_00:
            out += d.gamma_00 * _dissipator(_PROJ_DOWN, rho)
        return out.reshape(-1)

    states = evolve_ode(rhs, rho0.matrix.reshape(-1), t, rel_tol=rel_tol, max_step=p.period / 400.0)
    rhos = states.reshape(len(t), 2, 2)
    for i, rho in enumerate(rhos):
        _check_physical(rho, f"t={t[i]:g}")
    series = TimeSeries(t=t, p1=rhos[:, 0, 0].real)
    return (series, rhos) if return_states else series


def rotate_to_lab(rho_rot: DensityMatrix, p: DriveParams, t: float) -> DensityMatrix:
    """Conjugate a rotating-frame density matrix back to the lab basis."""
    u = frame_unitary(p, t)
    return DensityMatrix(u @ rho_rot.matrix @ u.conj().T)


def evolve_gvv_lindblad(
    p: DriveParams,
    d: DecayRates,
    t_grid,
    K: int | None = None,
    rel_tol: float = 1e-9,
    return_states: bool = False,
):
    """Reduced rotating-frame Lindblad route; returns lab-frame P1(t).

    Uses the time-independent effective 2x2 Hamiltonian with the
    time-dependent rotated rates; the initial rotating-frame state is
    the lower basis state (equal to |0> at t = 0), and populations are
    read out after rotating back to the lab basis.
    """
    t = np.asarray(t_grid, dtype=float)
    eff = gvv_effective(p, K)
    h = 0.5 * (eff.h + eff.h.T).astype(complex)

    def rhs(time: float, y: np.ndarray) -> np.ndarray:
        rho = y.reshape(2, 2)
        r = rotated_rates(p, d, time)
        out = -1j * (h @ rho - rho @ h)
        out += 0.5 * r.Gamma_s1s0 * _dissipator(_LOWER, rho)
        out += 0.5 * r.Gamma_s0s1 * _dissipator(_RAISE, rho)
        out += r.gamma_s1s1 * _dissipator(_PROJ_UP, rho)
        out += r.gamma_s0s0 * _dissipator(_PROJ_DOWN, rho)
        return out.reshape(-1)

    rho0 = np.array([[0.0, 0.0], [0.0, 1.0]], dtype=complex)
    states = evolve_ode(rhs, rho0.reshape(-1), t, rel_tol=rel_tol, max_step=p.period / 400.0)
    rhos = states.reshape(len(t), 2, 2)
    p1 = np.empty(len(t))
    for i, rho in enumerate(rhos):
        _check_physical(rho, f"t={t[i]:g}")
        u = frame_unitary(p, t[i])
        p1[i] = (u @ rho @ u.conj().T)[0, 0].real
    series = TimeSeries(t=t, p1=p1)
    return (series, rhos) if return_states else series
