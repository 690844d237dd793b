"""Numerical rank-one concavity probing.

A rank-one direction in the complex identification is a pair (alpha, beta)
with |alpha| = |beta| != 0.  Concavity of every restriction
t -> E(A + t X) over such directions is probed through second differences on
a fixed (base point, direction phases, t) lattice.  Isotropy lets base
points live on the real moduli segment: for A = (x, y) with x, y >= 0 and
X = (e^{i phi}, e^{i psi}),

    |x + t e^{i phi}|^2 = x^2 + 2 x t cos(phi) + t^2,

so the scan only needs the cosines of the direction phases.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .kernel import Integrand

SECOND_DIFF_TOL_REL = 1e-8  # scaled by the local value size
H_MIN, H_MAX = 1e-6, 1e-2


def _default_bases() -> np.ndarray:
    """Moduli base points (x, y): the unit segment plus near-axis refinement.

    Near-axis points matter: the below-threshold Burkholder violations live
    at |zeta| / |xi| of order (M - p* + 1).
    """
    xs = np.linspace(0.0, 1.0, 33)
    seg = np.column_stack([xs, 1.0 - xs])
    edge = np.array([1e-3, 3e-3, 0.01, 0.02, 0.03, 0.05])
    near_x = np.column_stack([1.0 - edge, edge])
    near_y = np.column_stack([edge, 1.0 - edge])
    return np.vstack([seg, near_x, near_y])


@dataclass(frozen=True)
class ProbeConfig:
    base_points: np.ndarray = field(default_factory=_default_bases)
    n_phases: int = 32
    n_t: int = 41
    h: float = 1e-3  # rounding in the moduli is amplified by 1/h^2
    tol_rel: float = SECOND_DIFF_TOL_REL

    def __post_init__(self):
        if not (H_MIN <= self.h <= H_MAX):
            raise ValueError(f"h must lie in [{H_MIN}, {H_MAX}]")
        pts = np.asarray(self.base_points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or np.any(pts < 0):
            raise ValueError("base_points must be an (n, 2) array of nonnegative moduli")
        object.__setattr__(self, "base_points", pts)

    @property
    def phases(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * np.pi, self.n_phases, endpoint=False)

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(-1.0, 1.0, self.n_t)


@dataclass(frozen=True)
class ProbeWitness:
    base: tuple[float, float]
    direction_phases: tuple[float, float]
    t: float
    second_difference: float
    tolerance: float

    def point(self) -> tuple[float, float]:
        """Moduli of A + t X, the gradient at which concavity fails."""
        phi, psi = self.direction_phases
        mx = abs(self.base[0] + self.t * np.exp(1j * phi))
        my = abs(self.base[1] + self.t * np.exp(1j * psi))
        return float(mx), float(my)


@dataclass(frozen=True)
class ProbeResult:
    verdict: str  # "concave-on-sample" | "violation-found"
    witness: ProbeWitness | None
    n_triples: int
    max_scaled_excess: float

    @property
    def violated(self) -> bool:
        return self.verdict == "violation-found"

    def to_dict(self) -> dict:
        d = {
            "verdict": self.verdict,
            "n_triples": self.n_triples,
            "max_scaled_excess": self.max_scaled_excess,
        }
        if self.witness is not None:
            d["witness"] = {
                "base": list(self.witness.base),
                "direction_phases": list(self.witness.direction_phases),
                "t": self.witness.t,
                "second_difference": self.witness.second_difference,
                "tolerance": self.witness.tolerance,
            }
        return d


def _restriction_moduli(x, y, ca, sa, cb, sb, t):
    """Moduli of (x + t e^{i phi}, y + t e^{i psi}).

    Uses hypot(x + t cos, t sin) rather than the expanded quadratic
    x^2 + 2xt cos + t^2: the expansion cancels catastrophically where a
    modulus nearly vanishes along the restriction, and the noise gets
    amplified by 1/h^2 in the second differences.
    """
    mx = np.hypot(x + ca * t, sa * t)
    my = np.hypot(y + cb * t, sb * t)
    return mx, my


def second_difference(E: Integrand, A, X, t: float, h: float) -> float:
    """[E(A+(t+h)X) - 2 E(A+tX) + E(A+(t-h)X)] / h^2 along a rank-one X."""
    if h <= 0:
        raise ValueError("h must be positive")
    xi, zeta = complex(A[0]), complex(A[1])
    al, be = complex(X[0]), complex(X[1])
    vals = []
    for tt in (t + h, t, t - h):
        gx = abs(xi + tt * al)
        gy = abs(zeta + tt * be)
        vals.append(float(E.moduli(gx, gy)))
    return (vals[0] - 2.0 * vals[1] + vals[2]) / (h * h)


def probe_rank_one_concavity(E: Integrand, cfg: ProbeConfig | None = None) -> ProbeResult:
    """Scan all configured (base, direction, t) triples for convex spots.

    The reported violation is the first one in the fixed (base, phi, psi, t)
    enumeration order, so results do not depend on any scheduling.
    """
    cfg = cfg or ProbeConfig()
    bases = cfg.base_points
    cos_ph = np.cos(cfg.phases)
    sin_ph = np.sin(cfg.phases)
    t = cfg.t_grid
    h = cfg.h

    x = bases[:, 0][:, None, None, None]
    y = bases[:, 1][:, None, None, None]
    ca = cos_ph[None, :, None, None]
    sa = sin_ph[None, :, None, None]
    cb = cos_ph[None, None, :, None]
    sb = sin_ph[None, None, :, None]
    # t spans [-1, 1] scaled by the base magnitude: homogeneity makes larger
    # offsets redundant, smaller bases need proportionally smaller steps
    scale_a = np.maximum(x + y, 1e-6)
    tt = t[None, None, None, :] * scale_a

    def ev(t_arr):
        mx, my = _restriction_moduli(x, y, ca, sa, cb, sb, t_arr)
        return np.asarray(E.moduli(mx, my), dtype=float)

    e0 = ev(tt)
    ep = ev(tt + h)
    em = ev(tt - h)
    d2 = (ep - 2.0 * e0 + em) / (h * h)
    scale = np.maximum(1.0, np.maximum(np.abs(e0), np.maximum(np.abs(ep), np.abs(em))))
    tol = cfg.tol_rel * scale
    excess = d2 - tol
    max_excess = float(np.max(excess / scale))
    hits = excess > 0.0
    n_triples = int(d2.size)
    if not hits.any():
        return ProbeResult("concave-on-sample", None, n_triples, max_excess)
    flat = int(np.argmax(hits.reshape(-1)))  # first True in C order = lexicographic
    ib, ip, iq, it = np.unravel_index(flat, hits.shape)
    # witness t is the actual offset used, i.e. after the |A| scaling
    t_used = float(t[it]) * float(max(bases[ib, 0] + bases[ib, 1], 1e-6))
    witness = ProbeWitness(
        base=(float(bases[ib, 0]), float(bases[ib, 1])),
        direction_phases=(float(cfg.phases[ip]), float(cfg.phases[iq])),
        t=t_used,
        second_difference=float(d2[ib, ip, iq, it]),
        tolerance=float(tol[ib, ip, iq, it]),
    )
    return ProbeResult("violation-found", witness, n_triples, max_excess)


def probe_aubert_threshold(m_grid, cfg: ProbeConfig | None = None) -> list[tuple[float, ProbeResult]]:
    """Per-M verdicts for the fourth-degree integrand; transition near 2+sqrt(3)."""
    from .kernel import aubert

    m_grid = list(m_grid)
    if any(b < a for a, b in zip(m_grid, m_grid[1:])):
        raise ValueError("M grid must be sorted ascending")
    cfg = cfg or ProbeConfig()
    return [(float(m), probe_rank_one_concavity(aubert(m), cfg)) for m in m_grid]


def verify_witness(E: Integrand, result: ProbeResult, h: float) -> float:
    """Re-evaluate a reported witness through second_difference."""
    w = result.witness
    if w is None:
        raise ValueError("result carries no witness")
    A = (w.base[0], w.base[1])
    X = (np.exp(1j * w.direction_phases[0]), np.exp(1j * w.direction_phases[1]))
    return second_difference(E, A, X, w.t, h)
