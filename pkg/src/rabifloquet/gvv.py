"""Effective two-level reduction of the driven qubit via nearly degenerate
perturbation theory in the doubly rotated frame.

Two frame rotations (a pi/2 spin flip followed by a drive-phase rotation)
turn the driven Hamiltonian into a Floquet matrix whose couplings are
Bessel functions of A/omega.  Reducing the nearly degenerate pair of
Floquet states to a 2x2 matrix with second-order shifts gives the
oscillation frequency Omega; dropping the shifts gives the first-order
frequency Omega' (the generalized rotating-wave value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, InternalConsistencyError, MultiphotonResonanceError
from .floquet import DEFAULT_TRUNCATION, FloquetMatrix, FrequencyComb, make_comb
from .model import IDENTITY, SIGMA_X, DriveParams
from .numerics import bessel_j, bessel_table, eig_hermitian

_DENOMINATOR_FLOOR = 1e-9


def default_k_sum(p: DriveParams) -> int:
    # Bessel orders beyond 2 A / omega contribute below 1e-12.
    return max(50, int(math.ceil(2.0 * p.A / p.omega)) + 20)


@dataclass(frozen=True)
class GvvEffective:
    """Second-order reduction: shifts, 2x2 matrix, and both frequencies."""

    params: DriveParams
    K: int
    delta_1p: float
    delta_0p: float
    delta_10: float
    delta_01: float
    h: np.ndarray = field(repr=False)  # 2x2, basis (excited-like, ground-like)
    B: float
    Omega: float
    Omega_grwa: float


def _check_denominators(p: DriveParams, j0: float, K: int) -> None:
    k = np.concatenate([np.arange(-K, 0), np.arange(1, K + 1)])
    for odd in (2 * k + 1, 2 * k - 1):
        dens = np.abs(j0 * p.omega0 - odd * p.omega)
        bad = np.flatnonzero(dens < _DENOMINATOR_FLOOR * p.omega0)
        if len(bad):
            raise MultiphotonResonanceError(
                f"multiphoton resonance: |J0*omega0 - {odd[bad[0]]}*omega| < "
                f"{_DENOMINATOR_FLOOR}*omega0",
                k=int(k[bad[0]]),
            )


def gvv_shifts(p: DriveParams, K: int | None = None) -> tuple[float, float, float, float]:
    """Second-order shifts (delta_1p, delta_0p, delta_10, delta_01).

    Sums run over the harmonic index k in [-K, K] excluding 0 with
    Bessel argument A/omega.  Near-zero perturbative denominators raise
    MultiphotonResonanceError rather than silently diverging.
    """
    if K is None:
        K = default_k_sum(p)
    if K < 1:
        raise DomainError("K must be >= 1")
    table = bessel_table(p.A / p.omega, 2 * K + 1)
    j = table.values
    off = table.max_order  # index offset: J_m = j[m + off]
    w0, w = p.omega0, p.omega
    j0 = j[off]
    _check_denominators(p, j0, K)

    k = np.concatenate([np.arange(-K, 0), np.arange(1, K + 1)])
    j2k = j[2 * k + off]
    j2kp1 = j[2 * k + 1 + off]
    j2km1 = j[2 * k - 1 + off]
    den_p = j0 * w0 - (2 * k + 1) * w
    den_m = j0 * w0 + (2 * k - 1) * w

    delta_1p = float(np.sum((j2kp1 * w0 / 2) ** 2 / den_p + (j2k * w0 / 2) ** 2 / (-2 * k * w)))
    delta_0p = float(np.sum(-((j2km1 * w0 / 2) ** 2) / den_m + (j2k * w0 / 2) ** 2 / (-2 * k * w)))
    delta_10 = float(np.sum(
        -j2km1 * j2k * w0**2 / 4 / den_m + j2kp1 * j2k * w0**2 / (-8 * k * w)
    ))
    delta_01 = float(np.sum(
        j2kp1 * j2k * w0**2 / 4 / den_p + j2km1 * j2k * w0**2 / (-8 * k * w)
    ))
    return delta_1p, delta_0p, delta_10, delta_01


def gvv_effective(p: DriveParams, K: int | None = None) -> GvvEffective:
    """Assemble the effective 2x2 matrix and both oscillation frequencies.

    Omega is computed twice, from the closed form and from the eigenvalue
    gap of the matrix; disagreement beyond 1e-10 omega0 raises, guarding
    against transcription slips in the dense closed-form expression.
    """
    if K is None:
        K = default_k_sum(p)
    d1, d0, d10, d01 = gvv_shifts(p, K)
    w0, w = p.omega0, p.omega
    j0 = float(bessel_j(0, p.A / p.omega))
    j1 = float(bessel_j(1, p.A / p.omega))

    h = np.array([
        [0.5 * j0 * w0 + d1, -0.5 * j1 * w0 + d10],
        [-0.5 * j1 * w0 + d01, w - 0.5 * j0 * w0 + d0],
    ])
    b = (
        2.0 * (d1 - d0 - w) * j0 * w0
        - 2.0 * (d10 + d01) * j1 * w0
        + (j0**2 + j1**2) * w0**2
    )
    omega_closed = math.sqrt(4.0 * d10 * d01 + (d1 - d0 - w) ** 2 + b)
    dec = eig_hermitian(0.5 * (h + h.T))
    omega_gap = float(dec.eigenvalues[1] - dec.eigenvalues[0])
    if abs(omega_closed - omega_gap) > 1e-10 * w0:
        raise InternalConsistencyError(
            f"closed form Omega={omega_closed} vs eigenvalue gap {omega_gap}"
        )
    omega_grwa = math.sqrt((w - j0 * w0) ** 2 + (j1 * w0) ** 2)
    return GvvEffective(
        params=p, K=K,
        delta_1p=d1, delta_0p=d0, delta_10=d10, delta_01=d01,
        h=h, B=b, Omega=omega_closed, Omega_grwa=omega_grwa,
    )


def analytic_comb(base: float, omega: float, n_max: int) -> FrequencyComb:
    """Comb {2 n omega} and {|+-base + 2 n omega|} for an analytic base."""
    return make_comb(base, omega, n_max)


def build_floquet_matrix_dut(p: DriveParams, N: int = DEFAULT_TRUNCATION) -> FloquetMatrix:
    """Floquet matrix in the doubly rotated frame.

    Row layout matches the lab-frame builder: block b = n + N holds the
    excited-like row 2b and the ground-like row 2b + 1.  Diagonal entries
    are n omega +- J_0 omega0 / 2; the harmonic-k coupling is diagonal
    (+J_k, -J_k) omega0 / 2 for even k and purely off-diagonal for odd k.
    """
    if N < 1:
        raise DomainError("truncation N must be >= 1")
    table = bessel_table(p.A / p.omega, 2 * N)
    dim = 2 * (2 * N + 1)
    h = np.zeros((dim, dim))
    w0 = p.omega0
    for bn, n in enumerate(range(-N, N + 1)):
        rn = 2 * bn
        h[rn, rn] = n * p.omega + 0.5 * table[0] * w0
        h[rn + 1, rn + 1] = n * p.omega - 0.5 * table[0] * w0
        for bm in range(bn + 1, 2 * N + 1):
            m = bm - N
            k = m - n
            if k > 2 * N:
                break
            rm = 2 * bm
            jk = table[k]
            if k % 2 == 0:
                h[rn, rm] = h[rm, rn] = 0.5 * jk * w0
                h[rn + 1, rm + 1] = h[rm + 1, rn + 1] = -0.5 * jk * w0
            else:
                h[rn, rm + 1] = h[rm + 1, rn] = -0.5 * jk * w0
                h[rn + 1, rm] = h[rm, rn + 1] = 0.5 * jk * w0
    bandwidth = min(2 * N, int(math.ceil(p.A / p.omega)) + 8)
    return FloquetMatrix(truncation=N, frame="dut", matrix=h, bandwidth=bandwidth)


# ---------------------------------------------------------------------------
# Rotating frame shared with the dissipative route
# ---------------------------------------------------------------------------

def frame_angle(p: DriveParams, t: float) -> float:
    """Half rotation angle A sin(omega t) / (2 omega), phase-reduced."""
    return 0.5 * p.A * math.sin(math.fmod(p.omega * t, 2.0 * math.pi)) / p.omega


def frame_unitary(p: DriveParams, t: float) -> np.ndarray:
    """Unitary mapping rotating-frame states to lab states.

    Columns are the rotating basis states expressed in (|1>, |0>); at
    t = 0 it is the identity, so the frames share initial conditions.
    """
    th = frame_angle(p, t)
    return math.cos(th) * IDENTITY + 1j * math.sin(th) * SIGMA_X
