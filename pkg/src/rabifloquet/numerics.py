"""Self-contained numerical kernels.

Integer-order Bessel functions of the first kind, bracketed root finding,
dense Hermitian eigendecomposition, fixed-step ODE integration with
step-halving convergence control, and spectral peak extraction.

All functions are pure: no global mutable state, results depend only on
the arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import (
    ContractViolationError,
    ConvergenceError,
    DomainError,
    EvaluationError,
)

_BESSEL_X_MAX = 1e6
_BESSEL_N_MAX = 10_000
_RESCALE_LIMIT = 1e250


# ---------------------------------------------------------------------------
# Bessel functions J_n(x), integer order
# ---------------------------------------------------------------------------

def _miller_start_order(nmax: int, xmax: float) -> int:
    # Downward recurrence needs to start well above both the target order
    # and the turning point k ~ x; the sqrt cushion keeps the seeded tail
    # below double precision at the highest requested order.
    m = max(nmax, int(math.ceil(xmax)))
    start = m + 15 * int(math.sqrt(m + 1.0)) + 30
    return start + (start % 2)


def _bessel_backward(nmax: int, x: np.ndarray) -> np.ndarray:
    """All of J_0(x)..J_nmax(x) for x >= 0, shape (nmax+1, len(x)).

    Miller's algorithm: seed a tiny value far above nmax, recur downward
    with J_{k-1} = (2k/x) J_k - J_{k+1}, then normalize with
    J_0 + 2 sum_{k even >= 2} J_k = 1.
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros((nmax + 1, x.size))
    nonzero = x > 0.0
    out[0, ~nonzero] = 1.0  # J_0(0) = 1, J_n(0) = 0 for n > 0
    if not np.any(nonzero):
        return out

    xs = x[nonzero]
    start = _miller_start_order(nmax, float(xs.max()))
    jp = np.zeros_like(xs)            # J_{k+1}
    jc = np.full_like(xs, 1e-30)      # J_k
    norm = np.zeros_like(xs)
    vals = np.zeros((nmax + 1, xs.size))
    for k in range(start, 0, -1):
        jm = (2.0 * k / xs) * jc - jp
        jp, jc = jc, jm               # jc is now J_{k-1}
        order = k - 1
        if order <= nmax:
            vals[order] = jc
        if order > 0 and order % 2 == 0:
            norm += 2.0 * jc
        big = np.abs(jc) > _RESCALE_LIMIT
        if np.any(big):
            scale = np.where(big, _RESCALE_LIMIT, 1.0)
            jp /= scale
            jc /= scale
            norm /= scale
            vals[:, big] /= _RESCALE_LIMIT
    norm += jc                        # add J_0
    vals /= norm
    out[:, nonzero] = vals
    return out


def bessel_j(n: int, x):
    """Bessel function of the first kind J_n(x) for integer n.

    Accepts scalar or array ``x``; accurate to 1e-12 absolute for
    |x| <= 100.  Negative orders and arguments are handled through
    J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x).
    """
    n = int(n)
    if abs(n) >= _BESSEL_N_MAX:
        raise DomainError(f"Bessel order out of range: |n|={abs(n)} >= {_BESSEL_N_MAX}")
    scalar = np.isscalar(x)
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if not np.all(np.isfinite(xa)) or np.any(np.abs(xa) >= _BESSEL_X_MAX):
        raise DomainError("Bessel argument out of range (must be finite, |x| < 1e6)")

    sign = np.where(xa < 0.0, (-1.0) ** abs(n), 1.0)
    if n < 0:
        sign = sign * (-1.0) ** (-n)
    vals = _bessel_backward(abs(n), np.abs(xa))[abs(n)] * sign
    return float(vals[0]) if scalar else vals.reshape(np.shape(x))


@dataclass(frozen=True)
class BesselTable:
    """J_n(x) for all orders n in [-max_order, max_order] at a fixed x."""

    argument: float
    max_order: int
    values: np.ndarray = field(repr=False)  # index 0 <-> n = -max_order

    def __getitem__(self, n: int) -> float:
        if abs(n) > self.max_order:
            raise DomainError(f"order {n} outside table range +-{self.max_order}")
        return float(self.values[n + self.max_order])

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.max_order, self.max_order + 1)


def bessel_table(x: float, max_order: int) -> BesselTable:
    """All J_n(x) for |n| <= max_order from a single downward recurrence."""
    if max_order < 0:
        raise DomainError("max_order must be nonnegative")
    if max_order >= _BESSEL_N_MAX:
        raise DomainError(f"max_order out of range: {max_order}")
    x = float(x)
    if not math.isfinite(x) or abs(x) >= _BESSEL_X_MAX:
        raise DomainError("Bessel argument out of range (must be finite, |x| < 1e6)")
    pos = _bessel_backward(max_order, np.array([abs(x)]))[:, 0]
    ns = np.arange(-max_order, max_order + 1)
    vals = pos[np.abs(ns)] * np.where(ns < 0, (-1.0) ** np.abs(ns), 1.0)
    if x < 0:
        vals = vals * (-1.0) ** np.abs(ns)
    return BesselTable(argument=x, max_order=max_order, values=vals)


# ---------------------------------------------------------------------------
# Bracketed root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootSet:
    """Sorted roots found on a bracket by scan + bisection."""

    roots: tuple
    bracket: tuple
    tolerance: float

    def __len__(self) -> int:
        return len(self.roots)


def _bisect(f, a: float, b: float, fa: float, fb: float, tol: float) -> float:
    while b - a > tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if not math.isfinite(fm):
            raise EvaluationError(f"non-finite value at x={m}", abscissa=m)
        if fm == 0.0:
            return m
        if fa * fm < 0.0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return 0.5 * (a + b)


def find_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    scan_points: int = 4000,
    tol: float = 1e-10,
) -> RootSet:
    """Roots of ``f`` on [lo, hi] by uniform scan and bisection refinement.

    Every sign change between adjacent scan samples is refined to a
    bracket of width <= tol; exact zeros landing on grid points are
    reported once.  ``f`` may accept arrays (used for the scan) or only
    scalars.
    """
    if not lo < hi:
        raise DomainError(f"invalid bracket [{lo}, {hi}]")
    if scan_points < 2:
        raise DomainError("scan_points must be >= 2")
    xs = np.linspace(lo, hi, scan_points)
    try:
        ys = np.asarray(f(xs), dtype=float)
        if ys.shape != xs.shape:
            raise TypeError
    except (TypeError, ValueError):
        ys = np.array([float(f(x)) for x in xs])
    if not np.all(np.isfinite(ys)):
        bad = xs[~np.isfinite(ys)][0]
        raise EvaluationError(f"non-finite value at x={bad}", abscissa=float(bad))

    resolution = (hi - lo) / (scan_points - 1)
    roots: list[float] = []
    def add(r: float) -> None:
        if not roots or r - roots[-1] > resolution * 0.5:
            roots.append(r)

    for i in range(scan_points - 1):
        if ys[i] == 0.0:
            add(float(xs[i]))
        elif ys[i] * ys[i + 1] < 0.0:
            add(_bisect(f, float(xs[i]), float(xs[i + 1]), float(ys[i]), float(ys[i + 1]), tol))
    if ys[-1] == 0.0:
        add(float(xs[-1]))
    return RootSet(roots=tuple(roots), bracket=(lo, hi), tolerance=tol)


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenDecomposition:
    dimension: int
    eigenvalues: np.ndarray = field(repr=False)   # ascending
    eigenvectors: np.ndarray = field(repr=False)  # columns, orthonormal


def eig_hermitian(matrix) -> EigenDecomposition:
    """Full spectrum of a Hermitian matrix, ascending eigenvalues.

    Eigenvector phases are fixed deterministically: the largest-magnitude
    component of each column is made real and positive, so repeated runs
    and parameter sweeps are bit-stable.
    """
    h = np.asarray(matrix, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 1:
        raise DomainError(f"expected a square matrix, got shape {h.shape}")
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(h - h.conj().T))) > 1e-10 * scale:
        raise ContractViolationError("matrix is not Hermitian within tolerance")
    evals, evecs = np.linalg.eigh(h)
    for j in range(evecs.shape[1]):
        i = int(np.argmax(np.abs(evecs[:, j])))
        pivot = evecs[i, j]
        evecs[:, j] *= pivot.conj() / abs(pivot)
    return EigenDecomposition(dimension=h.shape[0], eigenvalues=evals, eigenvectors=evecs)


# ---------------------------------------------------------------------------
# ODE integration: classical RK4 with Richardson step-halving
# ---------------------------------------------------------------------------

def _rk4_pass(rhs, y0: np.ndarray, t_grid: np.ndarray, substeps: np.ndarray) -> np.ndarray:
    y = y0.astype(complex)
    out = np.empty((len(t_grid),) + y.shape, dtype=complex)
    out[0] = y
    for i in range(len(t_grid) - 1):
        t0, t1 = t_grid[i], t_grid[i + 1]
        n = int(substeps[i])
        h = (t1 - t0) / n
        t = t0
        for _ in range(n):
            k1 = rhs(t, y)
            k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1)
            k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2)
            k4 = rhs(t + h, y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += h
        out[i + 1] = y
    return out


def evolve_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t_grid,
    rel_tol: float = 1e-9,
    max_step: float | None = None,
    max_halvings: int = 12,
) -> np.ndarray:
    """Integrate y' = rhs(t, y) and return the states at exactly ``t_grid``.

    Fixed-step classical RK4; the step count per grid interval is doubled
    (Richardson step-halving) until two successive solutions differ by
    less than ``rel_tol`` in max norm over the whole grid.
    """
    if not 1e-13 <= rel_tol <= 1e-3:
        raise DomainError("rel_tol must be in [1e-13, 1e-3]")
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or len(t_grid) < 2 or np.any(np.diff(t_grid) <= 0):
        raise DomainError("t_grid must be an ascending 1-d grid")
    y0 = np.atleast_1d(np.asarray(y0, dtype=complex))

    dt = np.diff(t_grid)
    if max_step is not None and max_step > 0:
        substeps = np.maximum(1, np.ceil(dt / max_step).astype(int))
    else:
        substeps = np.ones(len(dt), dtype=int)

    prev = _rk4_pass(rhs, y0, t_grid, substeps)
    for _ in range(max_halvings):
        substeps = substeps * 2
        if np.min(dt / substeps) < 1e-14 * (t_grid[-1] - t_grid[0]):
            raise ConvergenceError("step size underflow before reaching rel_tol")
        cur = _rk4_pass(rhs, y0, t_grid, substeps)
        diff = float(np.max(np.abs(cur - prev)))
        scale = max(1.0, float(np.max(np.abs(cur))))
        if diff < rel_tol * scale:
            return cur
        prev = cur
    raise ConvergenceError(f"no convergence to rel_tol={rel_tol} after {max_halvings} halvings")


# ---------------------------------------------------------------------------
# Spectral peak extraction
# ---------------------------------------------------------------------------

def dominant_peaks(
    series,
    max_peaks: int,
    rel_threshold: float = 1e-3,
) -> list[tuple[float, float]]:
    """Dominant spectral lines of a uniformly sampled real signal.

    ``series`` is any object with uniform ``t`` and ``p1`` arrays (for
    instance a :class:`~rabifloquet.model.TimeSeries`).  The signal is
    mean-subtracted, Hann-windowed and Fourier transformed; local maxima
    above ``rel_threshold`` of the largest peak are refined by quadratic
    interpolation of the log magnitude.  Returns (frequency, amplitude)
    pairs sorted by amplitude, descending; frequencies are in cycles per
    unit time.
    """
    t = np.asarray(series.t, dtype=float)
    y = np.asarray(series.p1, dtype=float)
    if len(t) != len(y) or len(t) < 8:
        raise ContractViolationError("series too short or mismatched lengths")
    dts = np.diff(t)
    dt = float(np.mean(dts))
    if np.max(np.abs(dts - dt)) > 1e-9 * dt:
        raise ContractViolationError("series is not uniformly sampled")

    n = len(y)
    window = np.hanning(n)
    spec = np.abs(np.fft.rfft((y - y.mean()) * window))
    freqs_step = 1.0 / (n * dt)
    amp_scale = 2.0 / window.sum()

    if spec.max() == 0.0:
        return []
    floor = rel_threshold * spec.max()
    peaks: list[tuple[float, float]] = []
    for k in range(1, len(spec) - 1):
        if spec[k] >= floor and spec[k] >= spec[k - 1] and spec[k] > spec[k + 1]:
            lm, lc, lp = (math.log(max(spec[k + d], 1e-300)) for d in (-1, 0, 1))
            denom = lm - 2.0 * lc + lp
            delta = 0.5 * (lm - lp) / denom if denom < 0 else 0.0
            delta = min(0.5, max(-0.5, delta))
            peaks.append(((k + delta) * freqs_step, float(spec[k]) * amp_scale))
    peaks.sort(key=lambda fa: -fa[1])
    return peaks[:max_peaks]
