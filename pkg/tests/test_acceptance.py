"""Acceptance criteria, one test per criterion, tolerances pinned as stated.

Each test prints a single PASS/FAIL line (visible with pytest -s or in the
captured output); the assertion carries the same condition.
"""
import math
import time

import numpy as np

from burkbench import (
    Exponent,
    PlanarGradient,
    beurling_m,
    burkholder,
    burkholder_m,
    envelope_closed_form,
    eval_burkholder,
    eval_burkholder_real_form,
    vnorm,
)
from burkbench.beurling import (
    GridField,
    beurling_apply,
    lp_ratio,
    norm_lower_bound_scan,
    spectral_derivatives,
)
from burkbench.envelope import compute_envelope
from burkbench.euler import (
    burkholder_uv,
    ode_reduction_check,
    pde_pair_residual,
    pde_pair_scale,
    quadrant_grid,
    radial_el_residual,
)
from burkbench.probe import probe_aubert_threshold, probe_rank_one_concavity
from burkbench.radial import (
    PerturbationField,
    bump_perturbation,
    closed_form_energy,
    energy_quadrature,
    example_11_energy,
    local_max_experiment,
    piecewise_linear_profile,
    power_profile,
    radially_linear_comparison,
    random_matrix_profile,
    spline_profile,
)

P_SET = [1.2, 1.5, 2.0, 3.0, 4.0, 8.0]


def report(num, ok, detail):
    line = f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    return ok


def test_criterion_1_cross_form_identity():
    t0 = time.time()
    worst = 0.0
    rng = np.random.default_rng(2024)
    for p in P_SET:
        e = Exponent(p)
        x = rng.uniform(0.0, 3.0, 10_000)
        y = rng.uniform(0.0, 3.0, 10_000)
        direct = (x - e.burkholder_norm * y) * (x + y) ** (p - 1.0)
        lam = abs(1.0 - 2.0 / p)
        real_form = 0.5 * e.p_star * ((x * x - y * y) - lam * (x + y) ** 2) * (x + y) ** (p - 2.0)
        scale = np.maximum(1.0, np.abs(direct))
        worst = max(worst, float(np.max(np.abs(direct - real_form) / scale)))
        # the scalar operations themselves, spot-checked on a subsample
        for xi_r, xi_i, z_r, z_i in rng.uniform(-2, 2, size=(40, 4)):
            g = PlanarGradient(complex(xi_r, xi_i), complex(z_r, z_i))
            a = eval_burkholder(e, g)
            b = eval_burkholder_real_form(e, g)
            worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    dt = time.time() - t0
    ok = worst <= 1e-12 and dt < 1.0
    assert report(1, ok, f"cross-form identity: max rel dev {worst:.2e}, runtime {dt:.2f}s")


def test_criterion_2_vnorm_display():
    worst = 0.0
    for p in P_SET:
        e = Exponent(p)
        worst = max(worst, abs(vnorm(burkholder(e)) - (e.p_star - 1.0)))
    ok = worst <= 1e-6
    assert report(2, ok, f"vnorm(Burkholder) = p*-1: max dev {worst:.2e}")


def test_criterion_3_rank_one_thresholds():
    t0 = time.time()
    e3 = Exponent(3.0)
    ok_at = probe_rank_one_concavity(burkholder_m(e3, e3.burkholder_norm)).verdict == "concave-on-sample"
    below = probe_rank_one_concavity(burkholder_m(e3, e3.burkholder_norm - 0.05))
    ok_below = below.verdict == "violation-found" and below.witness is not None

    crit = 2.0 + math.sqrt(3.0)
    grid = [3.64, 3.68, 3.71, 3.73, 3.75, 3.78]
    out = probe_aubert_threshold(grid)
    violated = [m for m, r in out if r.violated]
    clean = [m for m, r in out if not r.violated]
    ok_aubert = bool(violated) and bool(clean) and max(violated) <= crit + 0.02 and min(clean) >= crit - 0.02

    r4 = probe_rank_one_concavity(beurling_m(Exponent(4.0), 3.0))
    p4x, p4y = r4.witness.point() if r4.witness else (0.0, 1.0)
    r15 = probe_rank_one_concavity(beurling_m(Exponent(1.5), 2.0))
    q15x, q15y = r15.witness.point() if r15.witness else (1.0, 0.0)
    ok_beurling = r4.violated and p4x > p4y and r15.violated and q15y > q15x

    dt = time.time() - t0
    ok = ok_at and ok_below and ok_aubert and ok_beurling and dt < 30.0
    assert report(
        3,
        ok,
        f"thresholds: M=p*-1 concave {ok_at}, M-0.05 witness {ok_below}, "
        f"Aubert bracket [{max(violated, default=0):.2f}, {min(clean, default=9):.2f}] around {crit:.3f}, "
        f"Beurling witnesses at ({p4x:.2f},{p4y:.2f})/({q15x:.2f},{q15y:.2f}), runtime {dt:.1f}s",
    )


def test_criterion_4_envelope_convergence():
    t0 = time.time()
    ok = True
    details = []
    for p in (1.5, 3.0):
        e = Exponent(p)
        E = beurling_m(e, e.burkholder_norm)
        closed = envelope_closed_form(e)
        errs = []
        for n in (65, 129, 257):
            grid, run = compute_envelope(E, e, nx=n, x_max=2.0, tol=1e-6)
            X, Y = np.meshgrid(grid.xs, grid.ys, indexing="ij")
            ref = closed.moduli(X, Y)
            half = (n - 1) // 2 + 1
            errs.append(float(np.max(np.abs(grid.values - ref)[:half, :half])))
        ok = ok and errs[-1] <= 5e-3 and errs[0] > errs[1] > errs[2]
        details.append(f"p={p}: errors {errs[0]:.2e} > {errs[1]:.2e} > {errs[2]:.2e}")
    dt = time.time() - t0
    ok = ok and dt < 120.0
    assert report(4, ok, "envelope vs closed form: " + "; ".join(details) + f", runtime {dt:.1f}s")


def _twelve_profiles():
    return [
        (3.0, power_profile(1.0)),
        (3.0, power_profile(0.8)),
        (3.0, power_profile(0.5)),
        (3.0, power_profile(0.4, c=1.3)),
        (3.0, piecewise_linear_profile([0, 0.5, 1], [0, 0.6, 1])),
        (3.0, spline_profile([0, 0.25, 0.5, 0.75, 1], [0, 0.3, 0.55, 0.8, 1])),
        (4.0, power_profile(0.6, R=1.5)),
        (4.0, power_profile(1.0, R=2.0)),
        (1.5, power_profile(1.0, orientation="minus")),
        (1.5, power_profile(0.5, orientation="minus")),
        (1.5, power_profile(-0.3, orientation="minus")),
        (1.5, piecewise_linear_profile([0, 0.3, 1], [0, 0.4, 1.2], orientation="minus")),
    ]


def test_criterion_5_radial_energy_identity():
    t0 = time.time()
    worst = 0.0
    for p, prof in _twelve_profiles():
        e = Exponent(p)
        val, _ = energy_quadrature(burkholder(e), prof, e)
        closed = closed_form_energy(prof, e)
        worst = max(worst, abs(val - closed) / (1.0 + abs(closed)))
    dt = time.time() - t0
    ok = worst <= 1e-7 and dt < 10.0
    assert report(5, ok, f"energy identity over 12 profiles: max scaled gap {worst:.2e}, runtime {dt:.1f}s")


def test_criterion_6_zero_energy_example():
    worst = 0.0
    for p in (1.5, 2.0, 3.0, 4.0):
        for R in (1.0, 2.0):
            rep = example_11_energy(Exponent(p), R=R)
            worst = max(worst, abs(rep.metrics["total"]) / rep.metrics["inner"])
            if rep.verdict != "pass":
                worst = max(worst, 1.0)
    ok = worst <= 1e-8
    assert report(6, ok, f"zero-energy extension: max |total|/inner {worst:.2e}")


def test_criterion_7_radially_linear_comparison():
    worst = -np.inf
    ok = True
    for p in (1.5, 3.0):
        e = Exponent(p)
        rng = np.random.default_rng(777)
        for _ in range(50):
            lam = random_matrix_profile(rng)
            rep = radially_linear_comparison(burkholder(e), lam, e, tol=1e-8)
            ok = ok and rep.verdict == "pass"
            worst = max(worst, rep.max_gap)
    assert report(7, ok, f"sphere-average comparison, 100 seeded profiles: max violation {worst:.2e}")


def test_criterion_8_local_maximum():
    e = Exponent(3.0)
    s = 4.0
    prof = power_profile(1.0 - 2.0 / s)
    rng = np.random.default_rng(99)
    ok = True
    worst = -np.inf
    for k in range(10):
        eps = bump_perturbation(e, s, rng, m=int(k % 4))
        rep = local_max_experiment(prof, s, eps, e)
        ok = ok and rep.verdict == "pass" and rep.metrics["energy"] <= math.pi + 1e-6
        worst = max(worst, rep.metrics["energy"] - math.pi)
    eps = bump_perturbation(e, s, rng)
    big = PerturbationField(eps.amplitude * 10.0, eps.r0, eps.r1, eps.m)
    guard = local_max_experiment(prof, s, big, e)
    ok = ok and guard.verdict == "not-asserted"
    assert report(8, ok, f"local maximum: max energy-pi {worst:.2e}, oversized -> {guard.verdict}")


def test_criterion_9_euler_lagrange():
    worst_pde = 0.0
    for p in P_SET:
        E = burkholder_uv(p)
        for (u, v) in quadrant_grid():
            r1, r2 = pde_pair_residual(E, u, v)
            s = pde_pair_scale(E, u, v)
            worst_pde = max(worst_pde, abs(r1) / s, abs(r2) / s)

    worst_el = 0.0
    c2_profiles = [(3.0, power_profile(0.5)), (4.0, power_profile(0.4)), (2.0, power_profile(0.7)),
                   (1.5, power_profile(0.3)),
                   (3.0, spline_profile([0, 0.25, 0.5, 0.75, 1], [0, 0.35, 0.6, 0.82, 1]))]
    for p, prof in c2_profiles:
        E = burkholder_uv(p)
        for r in np.linspace(0.15, 0.95, 17):
            rho, drho = float(prof.rho(r)), float(prof.drho(r))
            if rho <= r * drho:
                continue
            worst_el = max(worst_el, abs(radial_el_residual(E, prof, float(r))))

    worst_ode = 0.0
    for p in (1.5, 2.0, 3.0):
        rep = ode_reduction_check(p)
        worst_ode = max(worst_ode, rep.metrics["ode_max_error"], rep.metrics["reconstruction_max_rel_error"])

    ok = worst_pde <= 1e-9 and worst_el <= 1e-8 and worst_ode <= 1e-8
    assert report(
        9, ok,
        f"Euler-Lagrange: PDE residuals {worst_pde:.2e}, radial residuals {worst_el:.2e}, "
        f"ODE reconstruction {worst_ode:.2e}",
    )


def test_criterion_10_beurling_transform():
    t0 = time.time()
    # Plancherel to 1e-10 on a zero-mean band-limited field
    rng = np.random.default_rng(5)
    n, L = 256, 20.0
    spec = np.zeros((n, n), complex)
    spec[1:9, 1:9] = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    w = GridField(n, L, np.fft.ifft2(spec))
    plancherel_dev = abs(lp_ratio(w, 2.0) - 1.0)

    f = GridField(n, L, np.fft.ifft2(spec))
    dz, dzb = spectral_derivatives(f)
    sd = beurling_apply(dzb)
    intertwine_dev = float(np.max(np.abs(sd.values - dz.values)) / np.max(np.abs(dz.values)))

    best = {}
    cap_ok = True
    for p, alphas in ((4.0, [0.505, 0.52, 0.55, 0.6, 0.65]),
                      (3.0, [0.35, 0.4, 0.45, 0.5]),
                      (1.5, [-0.32, -0.3, -0.25, -0.2])):
        est, rep = norm_lower_bound_scan(p, alphas, n=1024, L=44.0, R=10.0)
        target = max(p, p / (p - 1.0)) - 1.0
        best[p] = rep.metrics["best_stable_ratio"]
        cap_ok = cap_ok and rep.metrics["max_ratio_any"] <= 1.05 * target
    dt = time.time() - t0

    window_ok = 2.85 <= best[4.0] <= 3.05
    ok = plancherel_dev <= 1e-10 and intertwine_dev <= 1e-12 and window_ok and cap_ok and dt < 120.0
    assert report(
        10, ok,
        f"Beurling: Plancherel dev {plancherel_dev:.1e}, S∘dbar=d dev {intertwine_dev:.1e}, "
        f"best p=4 ratio {best[4.0]:.3f} (required [2.85, 3.05]), caps ok {cap_ok}, runtime {dt:.1f}s",
    )
