import math

import numpy as np
import pytest

from burkbench import Exponent, aubert, beurling_m, burkholder, burkholder_m
from burkbench.probe import (
    ProbeConfig,
    probe_aubert_threshold,
    probe_rank_one_concavity,
    second_difference,
    verify_witness,
)

P_SET = [1.2, 1.5, 2.0, 3.0, 4.0, 8.0]


class TestSecondDifference:
    def test_boundary_case_vanishing_curvature(self):
        # t -> B_4(1+t, t) equals (1-2t)(1+2t)^3 for t >= 0 and 1+4t for t <= 0;
        # the second derivative vanishes at t = 0 and the centered second
        # difference picks up only the O(h) third-order term
        E = burkholder(Exponent(4.0))
        d2 = second_difference(E, (1, 0), (1, 1), 0.0, 1e-4)
        assert abs(d2) < 2e-3
        assert d2 <= 0.0

    def test_against_symbolic_second_derivative(self):
        # d^2/dt^2 [(1-2t)(1+2t)^3] at t=0.1 is -24(1.2)^2 + 24(0.8)(1.2) = -11.52
        E = burkholder(Exponent(4.0))
        d2 = second_difference(E, (1, 0), (1, 1), 0.1, 1e-5)
        assert d2 == pytest.approx(-11.52, abs=1e-4)

    def test_beurling_convexity_at_origin_direction(self):
        # (1+t)^4 - 81 t^4 has second derivative 12 at t = 0
        E = beurling_m(Exponent(4.0), 3.0)
        d2 = second_difference(E, (1, 0), (1, 1), 0.0, 1e-4)
        assert d2 == pytest.approx(12.0, rel=1e-4)

    def test_rejects_nonpositive_h(self):
        E = burkholder(Exponent(3.0))
        with pytest.raises(ValueError):
            second_difference(E, (1, 0), (1, 1), 0.0, 0.0)

    def test_fd_matches_polynomial_restriction_order_h2(self):
        # smooth polynomial restriction: Aubert along a real direction
        m = 3.0
        E = aubert(m)

        def exact_dd(x, y, t):
            # d^2/dt^2 [((x+t)^2 - m^2 (y+t)^2)((x+t)^2 + (y+t)^2)] via expansion
            import numpy.polynomial.polynomial as P

            c1 = P.polymul([x * x - m * m * y * y, 2 * (x - m * m * y), 1 - m * m],
                           [x * x + y * y, 2 * (x + y), 2.0])
            d2 = P.polyder(c1, 2)
            return P.polyval(t, d2)

        for h in (1e-3, 1e-4):
            d2 = second_difference(E, (1.0, 0.3), (1, 1), 0.2, h)
            assert d2 == pytest.approx(exact_dd(1.0, 0.3, 0.2), abs=50 * h * h + 1e-8)


class TestProbeVerdicts:
    @pytest.mark.parametrize("p", P_SET)
    def test_burkholder_concave_at_threshold(self, p):
        e = Exponent(p)
        res = probe_rank_one_concavity(burkholder(e))
        assert res.verdict == "concave-on-sample"

    def test_burkholder_m_below_threshold_violated(self):
        e = Exponent(3.0)
        res = probe_rank_one_concavity(burkholder_m(e, 1.9))
        assert res.verdict == "violation-found"
        assert res.witness is not None
        # witness reproducible through the scalar path
        d2 = verify_witness(burkholder_m(e, 1.9), res, h=1e-4)
        assert d2 > res.witness.tolerance * 0.5

    def test_burkholder_m_slightly_below_threshold(self):
        e = Exponent(3.0)
        res = probe_rank_one_concavity(burkholder_m(e, e.burkholder_norm - 0.05))
        assert res.verdict == "violation-found"

    def test_beurling_m_violations_where_claimed(self):
        # p > 2: failure near (1, 0); p < 2: failure near (0, 1);
        # the location claim is about the gradient A + tX where the second
        # difference turns positive, not about the scan's base point
        res4 = probe_rank_one_concavity(beurling_m(Exponent(4.0), 3.0))
        assert res4.verdict == "violation-found"
        px, py = res4.witness.point()
        assert px > 2.0 * py

        res15 = probe_rank_one_concavity(beurling_m(Exponent(1.5), 2.0))
        assert res15.verdict == "violation-found"
        qx, qy = res15.witness.point()
        assert qy > 2.0 * qx

    def test_determinism(self):
        e = Exponent(3.0)
        r1 = probe_rank_one_concavity(burkholder_m(e, 1.9))
        r2 = probe_rank_one_concavity(burkholder_m(e, 1.9))
        assert r1.to_dict() == r2.to_dict()

    def test_witness_reproducible_for_scaled_bases(self):
        # base points away from the unit segment: the stored witness offset
        # must be the actual (|A|-scaled) one, reproducible via the scalar path
        e = Exponent(3.0)
        E = burkholder_m(e, 1.9)
        cfg = ProbeConfig(base_points=np.array([[3.0, 0.02], [2.0, 0.03]]))
        res = probe_rank_one_concavity(E, cfg)
        assert res.violated
        d2 = verify_witness(E, res, h=1e-4)
        assert d2 == pytest.approx(res.witness.second_difference, rel=5e-2, abs=1e-6)
        assert d2 > 0

    def test_phase_rotation_invariance(self):
        # rotating base and direction by common phases cannot change verdicts:
        # the scan works in moduli, so verify on the scalar second difference
        e = Exponent(3.0)
        E = burkholder_m(e, 1.9)
        A = (1.0, 0.01)
        X = (1.0, 1.0)
        base = second_difference(E, A, X, 0.0, 1e-4)
        for th1, th2 in [(0.7, 1.1), (2.0, 0.3)]:
            A2 = (A[0] * np.exp(1j * th1), A[1] * np.exp(1j * th2))
            X2 = (X[0] * np.exp(1j * th1), X[1] * np.exp(1j * th2))
            rot = second_difference(E, A2, X2, 0.0, 1e-4)
            assert rot == pytest.approx(base, rel=1e-9, abs=1e-10)


class TestAubertThreshold:
    def test_bracket_around_critical_m(self):
        crit = 2 + math.sqrt(3)
        grid = [3.60, 3.66, 3.70, 3.72, 3.75, 3.80]
        out = probe_aubert_threshold(grid)
        verdicts = {m: r.verdict for m, r in out}
        assert verdicts[3.60] == "violation-found"
        assert verdicts[3.80] == "concave-on-sample"
        last_bad = max(m for m, r in out if r.violated)
        first_good = min(m for m, r in out if not r.violated)
        assert last_bad <= crit + 0.02
        assert first_good >= crit - 0.02

    def test_at_threshold_concave_within_tolerance(self):
        out = probe_aubert_threshold([2 + math.sqrt(3)])
        assert out[0][1].verdict == "concave-on-sample"

    def test_rejects_unsorted(self):
        with pytest.raises(ValueError):
            probe_aubert_threshold([3.8, 3.6])


class TestRandomTripleInvariant:
    @pytest.mark.parametrize("p", P_SET)
    def test_no_excess_over_1e6_on_random_triples(self, p):
        # 1e5 random (base, direction, t) triples; second differences of the
        # threshold Burkholder integrand stay below +1e-6 (scaled)
        e = Exponent(p)
        E = burkholder(e)
        rng = np.random.default_rng(int(p * 1000))
        n = 100_000
        x = rng.uniform(0, 1, n)
        y = 1.0 - x
        ph1 = rng.uniform(0, 2 * np.pi, n)
        ph2 = rng.uniform(0, 2 * np.pi, n)
        t = rng.uniform(-1, 1, n)
        h = 1e-3

        def ev(tt):
            mx = np.hypot(x + np.cos(ph1) * tt, np.sin(ph1) * tt)
            my = np.hypot(y + np.cos(ph2) * tt, np.sin(ph2) * tt)
            return np.asarray(E.moduli(mx, my))

        d2 = (ev(t + h) - 2 * ev(t) + ev(t - h)) / (h * h)
        scale = np.maximum(1.0, np.abs(ev(t)))
        assert float(np.max(d2 / scale)) <= 1e-6


class TestConfig:
    def test_h_window_enforced(self):
        with pytest.raises(ValueError):
            ProbeConfig(h=1e-7)
        with pytest.raises(ValueError):
            ProbeConfig(h=0.1)

    def test_negative_bases_rejected(self):
        with pytest.raises(ValueError):
            ProbeConfig(base_points=np.array([[-1.0, 0.5]]))
