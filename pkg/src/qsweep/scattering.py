"""Transmission coefficients and stationary wave-function sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constants import ParticleContext
from .errors import InvalidEnergyError
from .potential import DiscretizedPotential
from .recursion import LeftSweep, left_sweep, transmission_product


@dataclass(frozen=True)
class TransmissionCurve:
    """Transmission/reflection probabilities over an energy grid."""

    E: np.ndarray
    T: np.ndarray
    R: np.ndarray


@dataclass(frozen=True)
class WaveField:
    """Complex wave-function samples at positions x."""

    x: np.ndarray
    psi: np.ndarray
    E: float


def transmission(sweep: LeftSweep, dp: DiscretizedPotential) -> tuple[float, float]:
    """Transmission and reflection probabilities from a left sweep.

    R = |B_0/A_0|^2 and T = (Re k_N / Re k_0)|A_N/A_0|^2; the current
    ratio handles unequal asymptotic potentials and reduces to the plain
    amplitude ratio when U(x_0) = U(x_N).  If the far side is evanescent
    (Re k_N = 0) there is no transmitted current and T = 0.
    """
    k0 = sweep.k[0]
    kN = sweep.k[-1]
    if k0.real <= 0.0:
        raise InvalidEnergyError(
            f"evanescent incidence at E={sweep.E!r} eV (E below the entry potential)"
        )
    a0 = sweep.A[0]
    r = abs(sweep.B[0] / a0) ** 2
    if kN.real > 0.0:
        t = (kN.real / k0.real) * abs(sweep.A[-1] / a0) ** 2
    else:
        t = 0.0
    return t, r


def transmission_curve(dp: DiscretizedPotential, Egrid, ctx: ParticleContext) -> TransmissionCurve:
    """T(E) and R(E) over an energy grid, via the streaming product pass.

    Per-energy failures propagate with the offending energy attached (the
    singularity error additionally names the step).
    """
    Egrid = np.asarray(Egrid, dtype=float)
    T = np.empty(len(Egrid))
    R = np.empty(len(Egrid))
    for i, E in enumerate(Egrid):
        t_amp, r_amp, k0, kN = transmission_product(dp, float(E), ctx)
        if k0.real <= 0.0:
            raise InvalidEnergyError(
                f"evanescent incidence at E={E!r} eV (E below the entry potential)"
            )
        R[i] = abs(r_amp) ** 2
        T[i] = (kN.real / k0.real) * abs(t_amp) ** 2 if kN.real > 0.0 else 0.0
    return TransmissionCurve(E=Egrid, T=T, R=R)


def sample_wavefunction(sweep: LeftSweep, dp: DiscretizedPotential, xs) -> WaveField:
    """Evaluate the swept solution at arbitrary positions inside the grid.

    Within step j the field is A_j e^{ik_j(x-x_j)} + B_j e^{-ik_j(x-x_j)};
    at the nodes themselves this reduces to A_j + B_j.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("no sample positions given")
    if xs.min() < dp.x[0] or xs.max() > dp.x[-1]:
        raise ValueError(
            f"samples must lie in [{dp.x[0]!r}, {dp.x[-1]!r}] nm"
        )
    j = np.searchsorted(dp.x, xs, side="right") - 1
    np.clip(j, 0, dp.n_steps, out=j)
    rel = xs - dp.x[j]
    kj = sweep.k[j]
    psi = sweep.A[j] * np.exp(1j * kj * rel) + sweep.B[j] * np.exp(-1j * kj * rel)
    return WaveField(x=xs, psi=psi, E=sweep.E)


def wavefunction_at_nodes(dp: DiscretizedPotential, E: float, ctx: ParticleContext) -> WaveField:
    """Left-incidence stationary field sampled at the grid nodes."""
    sweep = left_sweep(dp, E, ctx)
    return WaveField(x=dp.x.copy(), psi=sweep.A + sweep.B, E=E)
