"""Variational structure of isotropic energies E(|f_z|, |f_zbar|).

The stationary-solution analysis lives in (u, v) = (|f_z|, |f_zbar|) on the
open positive quadrant.  The distinguished integrand there is

    E(u, v) = [u - (p-1) v] (u + v)^(p-1)

(note the coefficient p-1 for every p: this is the normalization in which
radial maps are critical points; it coincides with the Burkholder function
exactly when p >= 2).  It solves the PDE pair

    E_uu - 2 E_uv + E_vv = 0
    E_uu - E_vv = -2 E_v / v

and, among p-homogeneous isotropic integrands, its scalar multiples are the
only solutions, which the ODE reduction check reconstructs numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .report import ExperimentReport, VERDICT_FAIL, VERDICT_PASS


@dataclass(frozen=True)
class IntegrandUV:
    """C^2 function of (u, v) on the open quadrant with exact derivatives."""

    name: str
    E: Callable
    E_u: Callable
    E_v: Callable
    E_uu: Callable
    E_uv: Callable
    E_vv: Callable


def burkholder_uv(p: float) -> IntegrandUV:
    """[u - (p-1) v](u+v)^(p-1) with closed-form first and second derivatives."""
    q = p - 1.0

    def D(u, v):
        return u - q * v

    return IntegrandUV(
        name=f"burkholder_uv(p={p:g})",
        E=lambda u, v: D(u, v) * (u + v) ** q,
        E_u=lambda u, v: (u + v) ** q + q * D(u, v) * (u + v) ** (q - 1.0),
        E_v=lambda u, v: -q * (u + v) ** q + q * D(u, v) * (u + v) ** (q - 1.0),
        E_uu=lambda u, v: 2.0 * q * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
        E_uv=lambda u, v: q * (2.0 - p) * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
        E_vv=lambda u, v: -2.0 * q * q * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
    )


def modified_burkholder_uv(p: float, m: float) -> IntegrandUV:
    """[u - M v](u+v)^(p-1); solves the wave part but not the second equation unless M = p-1."""
    q = p - 1.0

    def D(u, v):
        return u - m * v

    return IntegrandUV(
        name=f"modified_burkholder_uv(p={p:g}, M={m:g})",
        E=lambda u, v: D(u, v) * (u + v) ** q,
        E_u=lambda u, v: (u + v) ** q + q * D(u, v) * (u + v) ** (q - 1.0),
        E_v=lambda u, v: -m * (u + v) ** q + q * D(u, v) * (u + v) ** (q - 1.0),
        E_uu=lambda u, v: 2.0 * q * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
        E_uv=lambda u, v: q * (1.0 - m) * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
        E_vv=lambda u, v: -2.0 * m * q * (u + v) ** (q - 1.0) + q * (q - 1.0) * D(u, v) * (u + v) ** (q - 2.0),
    )


def power_uv(p: float) -> IntegrandUV:
    return IntegrandUV(
        name=f"power_uv(p={p:g})",
        E=lambda u, v: u**p,
        E_u=lambda u, v: p * u ** (p - 1.0),
        E_v=lambda u, v: 0.0 * u,
        E_uu=lambda u, v: p * (p - 1.0) * u ** (p - 2.0),
        E_uv=lambda u, v: 0.0 * u,
        E_vv=lambda u, v: 0.0 * u,
    )


def quadratic_uv() -> IntegrandUV:
    return IntegrandUV(
        name="quadratic_uv",
        E=lambda u, v: u * u + v * v,
        E_u=lambda u, v: 2.0 * u,
        E_v=lambda u, v: 2.0 * v,
        E_uu=lambda u, v: 2.0 + 0.0 * u,
        E_uv=lambda u, v: 0.0 * u,
        E_vv=lambda u, v: 2.0 + 0.0 * u,
    )


def from_callable(name: str, f: Callable, h: float = 1e-5) -> IntegrandUV:
    """Finite-difference fallback (central, step scaled by the point size)."""

    def du(u, v):
        s = h * max(1.0, abs(u))
        return (f(u + s, v) - f(u - s, v)) / (2.0 * s)

    def dv(u, v):
        s = h * max(1.0, abs(v))
        return (f(u, v + s) - f(u, v - s)) / (2.0 * s)

    def duu(u, v):
        s = h * max(1.0, abs(u))
        return (f(u + s, v) - 2.0 * f(u, v) + f(u - s, v)) / (s * s)

    def dvv(u, v):
        s = h * max(1.0, abs(v))
        return (f(u, v + s) - 2.0 * f(u, v) + f(u, v - s)) / (s * s)

    def duv(u, v):
        su = h * max(1.0, abs(u))
        sv = h * max(1.0, abs(v))
        return (f(u + su, v + sv) - f(u + su, v - sv) - f(u - su, v + sv) + f(u - su, v - sv)) / (4.0 * su * sv)

    return IntegrandUV(name, f, du, dv, duu, duv, dvv)


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------

def pde_pair_residual(E: IntegrandUV, u: float, v: float) -> tuple[float, float]:
    """(E_uu - 2E_uv + E_vv,  E_uu - E_vv + 2 E_v / v) at a quadrant point."""
    if u <= 0 or v <= 0:
        raise ValueError("the PDE pair lives on the open quadrant u, v > 0")
    r1 = E.E_uu(u, v) - 2.0 * E.E_uv(u, v) + E.E_vv(u, v)
    r2 = E.E_uu(u, v) - E.E_vv(u, v) + 2.0 * E.E_v(u, v) / v
    return float(r1), float(r2)


def pde_pair_scale(E: IntegrandUV, u: float, v: float) -> float:
    """Magnitude of the largest term entering the residuals, for relative tests."""
    return max(
        abs(float(E.E_uu(u, v))),
        abs(float(E.E_uv(u, v))),
        abs(float(E.E_vv(u, v))),
        abs(float(E.E_v(u, v)) / v),
        1e-300,
    )


def radial_el_residual(E: IntegrandUV, prof, r: float) -> float:
    """LHS - RHS of (E_uu - 2E_uv + E_vv) r rho'' = 2 (E_uu - E_vv + 2 E_v/v) v.

    u = (rho/r + rho')/2 and v = (rho/r - rho')/2; requires rho > r rho' so
    the point stays in the open quadrant.
    """
    rho = float(prof.rho(r))
    drho = float(prof.drho(r))
    ddrho = float(prof.ddrho(r))
    if rho <= r * drho:
        raise ValueError("outside the standing assumption rho(r) > r rho'(r)")
    u = 0.5 * (rho / r + drho)
    v = 0.5 * (rho / r - drho)
    lhs = (E.E_uu(u, v) - 2.0 * E.E_uv(u, v) + E.E_vv(u, v)) * r * ddrho
    rhs = 2.0 * (E.E_uu(u, v) - E.E_vv(u, v) + 2.0 * E.E_v(u, v) / v) * v
    return float(lhs - rhs)


def quadrant_grid(lo: float = 1e-3, hi: float = 1e3, n: int = 25, v_floor: float = 1e-3) -> list[tuple[float, float]]:
    """Log-spaced (u, v) points with v >= v_floor * u (the axis is singular)."""
    g = np.geomspace(lo, hi, n)
    return [(float(u), float(v)) for u in g for v in g if v >= v_floor * u]


def ode_reduction_check(p: float, tol: float = 1e-8) -> ExperimentReport:
    """Reconstruct the integrand from the characteristic ODE.

    With Phi(xi, zeta) = A(xi) zeta + B(xi), homogeneity fixes
    A(xi) = p xi^(p-1) up to scale and the ODE B' = A - xi A' is integrated
    numerically from B(1) = 2 - p.  Back in (u, v) variables,
    Phi(u+v, u-v)/2 must reproduce [u - (p-1)v](u+v)^(p-1) (the /2 is the
    scale normalization: A, B are fixed only up to a common factor).
    """
    if p <= 1.0:
        raise ValueError("p must exceed 1")

    def rhs(xi, b):
        # A - xi A' with A = p xi^(p-1)
        return p * xi ** (p - 1.0) - xi * p * (p - 1.0) * xi ** (p - 2.0)

    xi_lo, xi_hi = 0.5, 2.0
    sol_up = solve_ivp(rhs, (1.0, xi_hi), [2.0 - p], rtol=1e-12, atol=1e-14, dense_output=True, method="DOP853")
    sol_dn = solve_ivp(rhs, (1.0, xi_lo), [2.0 - p], rtol=1e-12, atol=1e-14, dense_output=True, method="DOP853")

    def B(xi):
        xi = np.asarray(xi, dtype=float)
        out = np.empty_like(xi)
        up = xi >= 1.0
        if up.any():
            out[up] = sol_up.sol(xi[up])[0]
        if (~up).any():
            out[~up] = sol_dn.sol(xi[~up])[0]
        return out

    xs = np.linspace(xi_lo, xi_hi, 401)
    ode_err = float(np.max(np.abs(B(xs) - (2.0 - p) * xs**p)))

    uu = np.linspace(0.35, 1.2, 41)
    vv = np.linspace(0.05, 0.75, 41)
    U, V = np.meshgrid(uu, vv, indexing="ij")
    mask = (U + V >= xi_lo) & (U + V <= xi_hi)
    xi = (U + V)[mask]
    zeta = (U - V)[mask]
    phi = p * xi ** (p - 1.0) * zeta + B(xi)
    target = (U[mask] - (p - 1.0) * V[mask]) * xi ** (p - 1.0)
    rec_err = float(np.max(np.abs(0.5 * phi - target) / np.maximum(1.0, np.abs(target))))

    ok = ode_err <= tol and rec_err <= tol
    return ExperimentReport(
        name="ode_reduction_check",
        parameters={"p": p, "tol": tol},
        samples=int(mask.sum()),
        metrics={"ode_max_error": ode_err, "reconstruction_max_rel_error": rec_err},
        max_gap=max(ode_err, rec_err),
        verdict=VERDICT_PASS if ok else VERDICT_FAIL,
    )
