"""Closed-form evaluation of the variational integrands and their constants.

Every integrand here is isotropic: its value depends on the complex pair
(xi, zeta) only through the moduli (|xi|, |zeta|).  All evaluators therefore
route through a moduli form, which makes the isotropy invariant exact in
floating point and lets the rest of the package work on real moduli grids.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

P_MIN = 1.0
P_MAX = 64.0  # (p*-1)^p overflows doubles long before this is interesting


def p_star(p: float) -> float:
    """Symmetrized exponent max(p, p/(p-1))."""
    return max(p, p / (p - 1.0))


@dataclass(frozen=True)
class Exponent:
    """Integrability parameter p with its derived constants.

    p_star          max(p, p/(p-1))
    burkholder_norm p_star - 1, the sup of |B_p| on the unit moduli segment
    c_p             p (1 - 1/p_star)^(p-1), the sharp comparison constant
    """

    p: float
    p_star: float = field(init=False)
    burkholder_norm: float = field(init=False)
    c_p: float = field(init=False)

    def __post_init__(self):
        p = float(self.p)
        if not (P_MIN < p <= P_MAX):
            raise ValueError(f"p must lie in ({P_MIN}, {P_MAX}], got {p}")
        object.__setattr__(self, "p", p)
        ps = p_star(p)
        object.__setattr__(self, "p_star", ps)
        object.__setattr__(self, "burkholder_norm", ps - 1.0)
        object.__setattr__(self, "c_p", p * (1.0 - 1.0 / ps) ** (p - 1.0))


@dataclass(frozen=True)
class PlanarGradient:
    """Pair (xi, zeta) of complex derivatives identified with a 2x2 matrix."""

    xi: complex
    zeta: complex

    @property
    def moduli(self) -> tuple[float, float]:
        return abs(self.xi), abs(self.zeta)

    @property
    def op_norm(self) -> float:
        return abs(self.xi) + abs(self.zeta)

    @property
    def determinant(self) -> float:
        return abs(self.xi) ** 2 - abs(self.zeta) ** 2

    def is_rank_one(self, tol: float = 0.0) -> bool:
        x, y = self.moduli
        return x > 0 and abs(x - y) <= tol * max(x, y)

    def as_matrix(self) -> np.ndarray:
        """Real 2x2 matrix of the map z -> xi*z + zeta*conj(z)."""
        a, b = self.xi.real, self.xi.imag
        c, d = self.zeta.real, self.zeta.imag
        return np.array([[a + c, -b + d], [b + d, a - c]])

    @staticmethod
    def from_matrix(m: np.ndarray) -> "PlanarGradient":
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        xi = complex(m[0, 0] + m[1, 1], m[1, 0] - m[0, 1]) / 2.0
        zeta = complex(m[0, 0] - m[1, 1], m[1, 0] + m[0, 1]) / 2.0
        return PlanarGradient(xi, zeta)


def _as_gradient(g) -> PlanarGradient:
    if isinstance(g, PlanarGradient):
        return g
    xi, zeta = g
    return PlanarGradient(complex(xi), complex(zeta))


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value of a square matrix.

    n=2 uses the closed form via the complex identification; larger n falls
    back to LAPACK singular values.
    """
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n) or n < 2:
        raise ValueError("expected a square matrix with n >= 2")
    if n == 2:
        g = PlanarGradient.from_matrix(a)
        return g.op_norm
    return float(np.linalg.svd(a, compute_uv=False)[0])


# ---------------------------------------------------------------------------
# moduli forms (vectorized in x = |xi|, y = |zeta|)
# ---------------------------------------------------------------------------

def burkholder_moduli(e: Exponent, x, y):
    """[x - (p*-1) y] (x + y)^(p-1), extended by 0 at the origin."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    s = x + y
    return (x - e.burkholder_norm * y) * _safe_pow(s, e.p - 1.0)


def burkholder_m_moduli(e: Exponent, m: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (x - m * y) * _safe_pow(x + y, e.p - 1.0)


def beurling_m_moduli(e: Exponent, m: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return _safe_pow(x, e.p) - (m ** e.p) * _safe_pow(y, e.p)


def aubert_moduli(m: float, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return (x * x - m * m * y * y) * (x * x + y * y)


def envelope_moduli(e: Exponent, x, y):
    """Closed form of the rank-one concave envelope of the Beurling function.

    For p >= 2 the envelope equals F_p where (p*-1)|zeta| >= |xi| and
    c_p B_p on the complementary branch; for 1 < p < 2 the branches swap.
    Continuous across the ray |xi| = (p*-1)|zeta| (both branches vanish).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    f = beurling_m_moduli(e, e.burkholder_norm, x, y)
    b = e.c_p * burkholder_moduli(e, x, y)
    inner = e.burkholder_norm * y >= x
    if e.p >= 2.0:
        return np.where(inner, f, b)
    return np.where(inner, b, f)


def _safe_pow(base, expo: float):
    """base**expo for base >= 0 with 0**expo := 0 for expo > 0."""
    base = np.asarray(base, dtype=float)
    out = np.zeros_like(base)
    pos = base > 0.0
    out[pos] = base[pos] ** expo
    if out.ndim == 0:
        return float(out)
    return out


# ---------------------------------------------------------------------------
# gradient-level evaluators
# ---------------------------------------------------------------------------

def eval_burkholder(e: Exponent, g) -> float:
    g = _as_gradient(g)
    x, y = g.moduli
    return float(burkholder_moduli(e, x, y))


def eval_burkholder_real_form(e: Exponent, g) -> float:
    """(p*/2) [det - |1-2/p| |Df|^2] |Df|^(p-2); identical to eval_burkholder."""
    g = _as_gradient(g)
    nrm = g.op_norm
    det = g.determinant
    lam = abs(1.0 - 2.0 / e.p)
    return float(0.5 * e.p_star * (det - lam * nrm * nrm) * _safe_pow(nrm, e.p - 2.0))


def eval_burkholder_m(e: Exponent, m: float, g) -> float:
    if m <= 0:
        raise ValueError("M must be positive")
    g = _as_gradient(g)
    x, y = g.moduli
    return float(burkholder_m_moduli(e, m, x, y))


def eval_beurling_m(e: Exponent, m: float, g) -> float:
    if m <= 0:
        raise ValueError("M must be positive")
    g = _as_gradient(g)
    x, y = g.moduli
    return float(beurling_m_moduli(e, m, x, y))


def eval_aubert(m: float, g) -> float:
    if m <= 0:
        raise ValueError("M must be positive")
    g = _as_gradient(g)
    x, y = g.moduli
    return float(aubert_moduli(m, x, y))


def eval_envelope_closed_form(e: Exponent, g) -> float:
    g = _as_gradient(g)
    x, y = g.moduli
    return float(envelope_moduli(e, x, y))


def eval_higher_dim(n: int, p: float, lam: float, sign: int, a: np.ndarray) -> float:
    """[sign*det A - lam |A|^n] |A|^(p-n) with |A| the operator norm."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if p < n / 2.0:
        raise ValueError(f"p must satisfy p >= n/2, got p={p}, n={n}")
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    a = np.asarray(a, dtype=float)
    if a.shape != (n, n):
        raise ValueError(f"matrix shape {a.shape} does not match n={n}")
    nrm = operator_norm(a)
    det = float(np.linalg.det(a))
    return float((sign * det - lam * nrm**n) * _safe_pow(nrm, p - n))


def distortion(g) -> float:
    """(|xi|+|zeta|)/(|xi|-|zeta|) for orientation-preserving gradients."""
    g = _as_gradient(g)
    x, y = g.moduli
    if x <= y:
        raise ValueError("non-orientation-preserving input: |xi| <= |zeta|")
    return (x + y) / (x - y)


# ---------------------------------------------------------------------------
# integrand registry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Integrand:
    """Isotropic, degree-homogeneous integrand with a vectorized moduli form."""

    name: str
    degree: float
    moduli: Callable
    params: tuple = ()

    def __call__(self, g) -> float:
        g = _as_gradient(g)
        x, y = g.moduli
        return float(self.moduli(x, y))

    def describe(self) -> str:
        if not self.params:
            return self.name
        return self.name + "(" + ", ".join(f"{k}={v:g}" for k, v in self.params) + ")"


def burkholder(e: Exponent) -> Integrand:
    return Integrand("burkholder", e.p, lambda x, y: burkholder_moduli(e, x, y), (("p", e.p),))


def burkholder_m(e: Exponent, m: float) -> Integrand:
    if m <= 0:
        raise ValueError("M must be positive")
    return Integrand(
        "burkholder_m", e.p, lambda x, y: burkholder_m_moduli(e, m, x, y), (("p", e.p), ("M", m))
    )


def beurling_m(e: Exponent, m: float) -> Integrand:
    if m <= 0:
        raise ValueError("M must be positive")
    return Integrand(
        "beurling_m", e.p, lambda x, y: beurling_m_moduli(e, m, x, y), (("p", e.p), ("M", m))
    )


def aubert(m: float) -> Integrand:
    if m <= 0:
        raise ValueError("M must be positive")
    return Integrand("aubert", 4.0, lambda x, y: aubert_moduli(m, x, y), (("M", m),))


def envelope_closed_form(e: Exponent) -> Integrand:
    return Integrand("envelope_closed_form", e.p, lambda x, y: envelope_moduli(e, x, y), (("p", e.p),))


_FACTORIES = {
    "burkholder": lambda e, **kw: burkholder(e),
    "burkholder_m": lambda e, M, **kw: burkholder_m(e, M),
    "beurling_m": lambda e, M, **kw: beurling_m(e, M),
    "aubert": lambda e, M, **kw: aubert(M),
    "envelope_closed_form": lambda e, **kw: envelope_closed_form(e),
}


def make_integrand(tag: str, e: Exponent | None = None, **params) -> Integrand:
    """Build an integrand by tag; tags needing p take an Exponent."""
    try:
        factory = _FACTORIES[tag]
    except KeyError:
        raise ValueError(f"unknown integrand tag {tag!r}") from None
    return factory(e, **params)


# ---------------------------------------------------------------------------
# the V_p norm
# ---------------------------------------------------------------------------

def vnorm(integrand, n_scan: int = 100_001, refine_iters: int = 80) -> float:
    """sup of |E| over the unit moduli segment {(x, 1-x) : x in [0, 1]}.

    Dense scan plus golden-section refinement around the best bracket; the
    integrands are continuous but only piecewise smooth on the segment, so a
    derivative-free sweep is the reliable choice.
    """
    f = integrand.moduli if isinstance(integrand, Integrand) else integrand
    x = np.linspace(0.0, 1.0, n_scan)
    vals = np.abs(np.asarray(f(x, 1.0 - x), dtype=float))
    k = int(np.argmax(vals))
    best = float(vals[k])
    lo = x[max(k - 1, 0)]
    hi = x[min(k + 1, n_scan - 1)]
    gold = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - gold * (b - a)
    d = a + gold * (b - a)
    fc = abs(float(f(c, 1.0 - c)))
    fd = abs(float(f(d, 1.0 - d)))
    for _ in range(refine_iters):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - gold * (b - a)
            fc = abs(float(f(c, 1.0 - c)))
        else:
            a, c, fc = c, d, fd
            d = a + gold * (b - a)
            fd = abs(float(f(d, 1.0 - d)))
    return max(best, fc, fd)
