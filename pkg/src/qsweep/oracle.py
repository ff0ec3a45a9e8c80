"""Independent analytic reference solutions.

Closed-form results for potentials with textbook solutions, used to verify
the sweep engine.  Nothing here touches the recursion machinery: these are
straight evaluations of transcendental formulas, with bisection for root
finding.
"""

from __future__ import annotations

import math

from .constants import HBAR, HBAR_C, ParticleContext


def analytic_step_RT(E: float, U_left: float, U_right: float, ctx: ParticleContext):
    """Reflection probability and transmitted current fraction at one step.

    Returns (|r|^2, current fraction).  For E between the two levels the
    step totally reflects: (1, 0).
    """
    if E <= min(U_left, U_right):
        raise ValueError(f"E={E!r} is below both potential levels")
    if E <= max(U_left, U_right):
        return 1.0, 0.0
    kl = ctx.phi * math.sqrt(E - U_left)
    kr = ctx.phi * math.sqrt(E - U_right)
    r2 = ((kl - kr) / (kl + kr)) ** 2
    t_current = 4.0 * kl * kr / (kl + kr) ** 2
    return r2, t_current


def analytic_square_barrier_T(E: float, V0: float, width: float, ctx: ParticleContext) -> float:
    """Transmission through a square barrier of height V0 and given width.

    Valid both below the barrier (tunneling, sinh form) and above it
    (oscillatory sin form); exactly at E = V0 the quadratic limit of either
    branch is used.
    """
    if E <= 0.0:
        raise ValueError(f"need E > 0, got {E!r}")
    phi = ctx.phi
    gap = E - V0
    if abs(gap) < 1e-12 * max(abs(V0), E):
        # sin(k2 w)^2/(E-V0) -> phi^2 w^2 as E -> V0
        return 1.0 / (1.0 + phi**2 * E * width**2 / 4.0)
    if gap > 0.0:
        k2 = phi * math.sqrt(gap)
        osc = math.sin(k2 * width) ** 2
    else:
        kappa = phi * math.sqrt(-gap)
        osc = -math.sinh(kappa * width) ** 2
    return 1.0 / (1.0 + V0**2 * osc / (4.0 * E * gap))


def _bisect(fn, lo: float, hi: float, tol: float) -> float:
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"no sign change on [{lo!r}, {hi!r}]")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = fn(mid)
        if fm == 0.0 or hi - lo < tol:
            return mid
        if (fm > 0) == (fhi > 0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def finite_well_eigenvalues(V0: float, half_width: float, ctx: ParticleContext) -> list[float]:
    """Bound energies of the well U = -V0 on |x| < half_width, 0 outside.

    Roots of the even (z tan z = sqrt(z0^2 - z^2)) and odd
    (-z cot z = sqrt(z0^2 - z^2)) matching conditions with
    z = phi*half_width*sqrt(E + V0), found by bisection to 1e-10 eV.
    Energies are negative and sorted ascending; parity alternates even,
    odd, even, ... with energy order.
    """
    if V0 <= 0.0 or half_width <= 0.0:
        raise ValueError("need V0 > 0 and half_width > 0")
    scale = ctx.phi * half_width
    z0 = scale * math.sqrt(V0)
    # Bisect in z until the bracket maps to less than 1e-10 eV.
    ztol = 1e-10 * scale**2 / max(2.0 * z0, 1e-30)

    def even(z):
        return z * math.tan(z) - math.sqrt(max(z0**2 - z**2, 0.0))

    def odd(z):
        return -z / math.tan(z) - math.sqrt(max(z0**2 - z**2, 0.0))

    eps = 1e-12 * max(z0, 1.0)
    roots = []
    n = 0
    while True:
        start = n * math.pi / 2.0
        if start >= z0:
            break
        end = min(start + math.pi / 2.0, z0)
        fn = even if n % 2 == 0 else odd
        lo, hi = start + eps, end - eps
        if lo < hi and fn(lo) < 0.0 < fn(hi):
            roots.append(_bisect(fn, lo, hi, ztol))
        n += 1
    return [(z / scale) ** 2 - V0 for z in roots]


def reference_levels(kind: str, n: int, *, omega: float | None = None,
                     e2: float = 1.44, ctx: ParticleContext | None = None) -> float:
    """Textbook level sequences.

    kind="harmonic": hbar*omega*(n + 1/2) for n >= 0 (omega in 1/fs).
    kind="rydberg": -Ry/n^2 for n >= 1 with Ry = mass*e2^2/(2*hbar_c^2);
    the electron with e2 = 1.44 eV nm gives Ry = 13.606 eV.
    """
    if kind == "harmonic":
        if omega is None:
            raise ValueError("harmonic levels need omega")
        if n < 0:
            raise ValueError(f"need n >= 0, got {n!r}")
        return HBAR * omega * (n + 0.5)
    if kind == "rydberg":
        if ctx is None:
            raise ValueError("rydberg levels need a particle context")
        if n < 1:
            raise ValueError(f"need n >= 1, got {n!r}")
        rydberg = ctx.mass * e2**2 / (2.0 * HBAR_C**2)
        return -rydberg / n**2
    raise ValueError(f"unknown level kind {kind!r}")
