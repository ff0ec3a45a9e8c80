"""Directional sweeps over a step potential.

Each step j of a discretized potential reflects and transmits plane waves.
Accumulating those elementary events from one boundary inward gives, per
energy, the reflection/transmission coefficients of every step and the wave
amplitudes on every step, for incidence from either side.

Index conventions (N steps, nodes x_0..x_N, step j = [x_j, x_{j+1})):

  left-hand solution  psi_j = A_j e^{ik_j(x-x_j)}   + B_j e^{-ik_j(x-x_j)}
  right-hand solution psi_j = C_{j+1} e^{ik_j(x-x_{j+1})} + D_{j+1} e^{-ik_j(x-x_{j+1})}

  LeftSweep:  R[j] for j = 1..N+1 (R[N+1] = 0), T[j] for j = 1..N,
              A[j], B[j] for j = 0..N with A[0] = 1 and B[N] = 0.
  RightSweep: Rbar[j] for j = 0..N (Rbar[0] = 0), Tbar[j] for j = 1..N,
              C[j], D[j] for j = 1..N+1 with C[1] = 0 and D[N+1] = 1.

Unused slots (R[0], T[0], Tbar[0], C[0], D[0]) are kept zero so arrays can
be indexed exactly as written above.

The branch convention Im k >= 0 makes every exponential in the recursion
bounded, so nothing overflows; amplitudes under wide classically forbidden
regions instead decay multiplicatively and may underflow to exactly zero.
That is accepted: a transmission probability then reports as 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .constants import ParticleContext, step_wavevectors
from .errors import NumericalSingularityError
from .potential import DiscretizedPotential

# Denominators below this magnitude mean two adjacent wavevectors cancelled
# against the accumulated reflection; genuine 0/0 is already excluded by the
# degeneracy nudge, so treat it as a hard numerical failure.
_SINGULARITY_FLOOR = 1e-300


@dataclass(frozen=True)
class LeftSweep:
    """Coefficients of the unit-incidence solution from the left."""

    E: float
    k: np.ndarray
    R: np.ndarray
    T: np.ndarray
    A: np.ndarray
    B: np.ndarray


@dataclass(frozen=True)
class RightSweep:
    """Coefficients of the unit-incidence solution from the right."""

    E: float
    k: np.ndarray
    Rbar: np.ndarray
    Tbar: np.ndarray
    C: np.ndarray
    D: np.ndarray


def _left_coefficients(k, dx, E):
    """Backward recursion for step coefficients R_j, T_j (j = N..1)."""
    N = len(k) - 1
    R = [0j] * (N + 2)
    T = [0j] * (N + 1)
    exp = cmath.exp
    for j in range(N, 0, -1):
        ka = k[j - 1]
        kb = k[j]
        rnext = R[j + 1]
        den = (ka - kb) * rnext + (ka + kb)
        if abs(den) < _SINGULARITY_FLOOR:
            raise NumericalSingularityError(E, j)
        ph = exp(1j * (ka * dx[j - 1]))
        T[j] = (2.0 * ka / den) * ph
        R[j] = (((ka + kb) * rnext + (ka - kb)) / den) * ph * ph
    return R, T


def _right_coefficients(k, dx, E):
    """Forward recursion for step coefficients Rbar_j, Tbar_j (j = 1..N)."""
    N = len(k) - 1
    Rbar = [0j] * (N + 1)
    Tbar = [0j] * (N + 1)
    exp = cmath.exp
    for j in range(1, N + 1):
        ka = k[j]
        kb = k[j - 1]
        rprev = Rbar[j - 1]
        den = (ka - kb) * rprev + (ka + kb)
        if abs(den) < _SINGULARITY_FLOOR:
            raise NumericalSingularityError(E, j)
        ph = exp(1j * (ka * dx[j]))
        Tbar[j] = (2.0 * ka / den) * ph
        Rbar[j] = (((ka + kb) * rprev + (ka - kb)) / den) * ph * ph
    return Rbar, Tbar


def left_sweep(dp: DiscretizedPotential, E: float, ctx: ParticleContext) -> LeftSweep:
    """Full left-incidence solution at energy E.

    Computes R_j, T_j backward from the right boundary (R_{N+1} = 0), then
    the amplitudes forward: A_j = A_{j-1} T_j with A_0 = 1, B_j = A_j R_{j+1}.
    """
    k = step_wavevectors(E, dp.u.tolist(), ctx.phi)
    dx = dp.dx.tolist()
    N = len(k) - 1
    R, T = _left_coefficients(k, dx, E)
    A = [0j] * (N + 1)
    B = [0j] * (N + 1)
    a = 1.0 + 0j
    A[0] = a
    for j in range(1, N + 1):
        a = a * T[j]
        A[j] = a
    for j in range(N + 1):
        B[j] = A[j] * R[j + 1]
    return LeftSweep(E=E, k=np.array(k), R=np.array(R), T=np.array(T),
                     A=np.array(A), B=np.array(B))


def right_sweep(dp: DiscretizedPotential, E: float, ctx: ParticleContext) -> RightSweep:
    """Full right-incidence solution at energy E.

    Computes Rbar_j, Tbar_j forward from the left boundary (Rbar_0 = 0),
    then the amplitudes backward: D_j = D_{j+1} Tbar_j with D_{N+1} = 1,
    C_j = D_j Rbar_{j-1}.
    """
    k = step_wavevectors(E, dp.u.tolist(), ctx.phi)
    dx = dp.dx.tolist()
    N = len(k) - 1
    Rbar, Tbar = _right_coefficients(k, dx, E)
    C = [0j] * (N + 2)
    D = [0j] * (N + 2)
    d = 1.0 + 0j
    D[N + 1] = d
    for j in range(N, 0, -1):
        d = d * Tbar[j]
        D[j] = d
    for j in range(1, N + 2):
        C[j] = D[j] * Rbar[j - 1]
    return RightSweep(E=E, k=np.array(k), Rbar=np.array(Rbar), Tbar=np.array(Tbar),
                      C=np.array(C), D=np.array(D))


def reflection_coefficients(dp: DiscretizedPotential, E: float, ctx: ParticleContext):
    """Both directions' reflection coefficients without amplitude arrays.

    Returns (k, R, Rbar) as numpy arrays; this is the cheap pass the
    bound-state mismatch functional needs, skipping A/B/C/D entirely.
    """
    k = step_wavevectors(E, dp.u.tolist(), ctx.phi)
    dx = dp.dx.tolist()
    R, _ = _left_coefficients(k, dx, E)
    Rbar, _ = _right_coefficients(k, dx, E)
    return np.array(k), np.array(R), np.array(Rbar)


def transmission_product(dp: DiscretizedPotential, E: float, ctx: ParticleContext):
    """Streaming fast path for transmission-only scans.

    Runs the backward step recursion keeping only the running product of
    T_j, so no O(N) coefficient arrays are stored.  Returns
    (t_amp, r_amp, k_left, k_right) where t_amp = A_N/A_0 = prod_j T_j and
    r_amp = B_0/A_0 = R_1.
    """
    k = step_wavevectors(E, dp.u.tolist(), ctx.phi)
    dx = dp.dx.tolist()
    N = len(k) - 1
    exp = cmath.exp
    r = 0j
    t_amp = 1.0 + 0j
    for j in range(N, 0, -1):
        ka = k[j - 1]
        kb = k[j]
        den = (ka - kb) * r + (ka + kb)
        if abs(den) < _SINGULARITY_FLOOR:
            raise NumericalSingularityError(E, j)
        ph = exp(1j * (ka * dx[j - 1]))
        t_amp = t_amp * (2.0 * ka / den) * ph
        r = (((ka + kb) * r + (ka - kb)) / den) * ph * ph
    return t_amp, r, k[0], k[N]
