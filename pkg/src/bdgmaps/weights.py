"""Weight sequences, the generating function f_q and Boltzmann parameters.

A weight sequence assigns a nonnegative weight ``q_i`` to faces of degree
``2i``. Everything downstream (offspring laws, the scaling constant of the
radius) is derived from the solution ``Z`` of ``f_q(x) = 1 - 1/x``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Mapping

import numpy as np

__all__ = [
    "Classification",
    "WeightSequence",
    "BoltzmannParams",
    "N",
    "eval_f",
    "solve_and_classify",
    "derive_offspring",
    "kappa_weights",
    "kappa_params",
    "load_weights",
]

CRITICAL_TOL = 1e-8
ROOT_TOL = 1e-12


class Classification(str, Enum):
    INADMISSIBLE = "inadmissible"
    SUBCRITICAL = "admissible-subcritical"
    CRITICAL = "critical-not-regular"
    REGULAR_CRITICAL = "regular-critical"


@lru_cache(maxsize=None)
def N(k: int) -> int:
    """Number of points in ``A_{k-1}``: ``binom(2k-1, k-1)``, exact."""
    if k < 1:
        raise ValueError(f"N(k) needs k >= 1, got {k}")
    return math.comb(2 * k - 1, k - 1)


@dataclass(frozen=True)
class WeightSequence:
    """Finitely supported weights ``{i: q_i}``, keys are half face degrees."""

    weights: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for i, w in dict(self.weights).items():
            i = int(i)
            w = float(Fraction(w)) if isinstance(w, str) else float(w)
            if i < 1:
                raise ValueError(f"weight index must be >= 1, got {i}")
            if not (w >= 0 and math.isfinite(w)):
                raise ValueError(f"weight q_{i} must be finite and >= 0, got {w}")
            if w > 0:
                clean[i] = w
        if not any(i > 1 for i in clean):
            raise ValueError("need q_i > 0 for at least one i > 1")
        object.__setattr__(self, "weights", dict(sorted(clean.items())))

    @property
    def max_index(self) -> int:
        return max(self.weights)

    def coefficients(self) -> np.ndarray:
        """Power-series coefficients ``c_k = N(k+1) q_{k+1}`` of f_q."""
        c = np.zeros(self.max_index)
        for i, w in self.weights.items():
            # big-int binomial first, float conversion last
            c[i - 1] = float(Fraction(N(i)) * Fraction(w))
        return c

    def to_json(self) -> dict:
        return {"weights": {str(i): repr(w) for i, w in self.weights.items()}}


def load_weights(source) -> WeightSequence:
    """Read ``{"weights": {"2": "1/12"}}`` from a path, JSON string or dict."""
    if isinstance(source, (str, Path)) and Path(source).exists():
        doc = json.loads(Path(source).read_text())
    elif isinstance(source, str):
        doc = json.loads(source)
    else:
        doc = source
    return WeightSequence({int(k): Fraction(str(v)) for k, v in doc["weights"].items()})


def eval_f(q: WeightSequence, x: float, derivative_order: int = 0) -> float:
    """Evaluate f_q or one of its first two derivatives at ``x >= 0``."""
    if x < 0:
        raise ValueError("f_q is only defined for x >= 0")
    if derivative_order not in (0, 1, 2):
        raise ValueError("derivative_order must be 0, 1 or 2")
    c = q.coefficients()
    poly = np.polynomial.Polynomial(c)
    if derivative_order:
        poly = poly.deriv(derivative_order)
    return float(poly(x))


@dataclass(frozen=True)
class BoltzmannParams:
    q: WeightSequence
    classification: Classification
    Z: float = math.nan
    fZ: float = math.nan
    rho: float = math.nan
    mu0_param: float = math.nan
    mu1_pmf: np.ndarray = field(default_factory=lambda: np.zeros(0))
    m0: float = math.nan
    m1: float = math.nan
    scale_D: float = math.nan
    tangency: float = math.nan  # Z^2 f'(Z)

    @property
    def is_critical(self) -> bool:
        return self.classification in (Classification.CRITICAL, Classification.REGULAR_CRITICAL)

    def mu0_pmf(self, kmax: int) -> np.ndarray:
        k = np.arange(kmax + 1)
        return (1.0 - self.mu0_param) * self.mu0_param**k

    def summary(self) -> dict:
        return {
            "classification": self.classification.value,
            "Z": self.Z,
            "fZ": self.fZ,
            "rho": self.rho,
            "tangency": self.tangency,
            "mu0_param": self.mu0_param,
            "mu1_pmf": [float(p) for p in self.mu1_pmf],
            "m0": self.m0,
            "m1": self.m1,
            "scale_D": self.scale_D,
        }


def _g(c, x):
    return np.polynomial.polynomial.polyval(x, c) - 1.0 + 1.0 / x


def _dg(c, x):
    return np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(c)) - 1.0 / x**2


def _d2g(c, x):
    return np.polynomial.polynomial.polyval(x, np.polynomial.polynomial.polyder(c, 2)) + 2.0 / x**3


def _bisect_newton(fun, dfun, lo, hi, tol=ROOT_TOL, maxiter=200):
    """Root of a function with a sign change on [lo, hi]; Newton steps kept inside the bracket."""
    flo = fun(lo)
    x = 0.5 * (lo + hi)
    for _ in range(maxiter):
        fx = fun(x)
        if abs(fx) <= tol or hi - lo <= 1e-15 * max(1.0, abs(x)):
            return x
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi = x
        d = dfun(x)
        xn = x - fx / d if d != 0 else math.nan
        x = xn if lo < xn < hi else 0.5 * (lo + hi)
    return x


def solve_and_classify(q: WeightSequence) -> BoltzmannParams:
    """Solve ``f_q(x) = 1 - 1/x`` for the admissible root and classify ``q``.

    ``g(x) = f_q(x) - 1 + 1/x`` is convex on ``x > 0`` and positive on
    ``(0, 1]``, so there is a root iff the minimum of g on ``(1, inf)`` is
    nonpositive; the admissible root (``Z^2 f'(Z) <= 1``) is the left one.
    """
    c = q.coefficients()
    lo = 1.0 + 1e-9
    if _dg(c, lo) >= 0:
        return BoltzmannParams(q, Classification.INADMISSIBLE)
    hi = 2.0
    while _dg(c, hi) < 0:
        hi *= 2.0
        if hi > 1e100:
            return BoltzmannParams(q, Classification.INADMISSIBLE)
    xmin = _bisect_newton(lambda x: _dg(c, x), lambda x: _d2g(c, x), lo, hi, tol=1e-15)
    gmin = _g(c, xmin)
    if gmin > ROOT_TOL:
        return BoltzmannParams(q, Classification.INADMISSIBLE)
    if gmin >= -ROOT_TOL:
        Z = xmin
    else:
        Z = _bisect_newton(lambda x: _g(c, x), lambda x: _dg(c, x), lo, xmin)
    fZ = eval_f(q, Z)
    tangency = Z**2 * eval_f(q, Z, 1)
    cls = Classification.REGULAR_CRITICAL if abs(tangency - 1.0) <= CRITICAL_TOL else Classification.SUBCRITICAL
    # finite support: radius of convergence is infinite, so critical is always regular
    rho = 2.0 + Z**3 * eval_f(q, Z, 2)
    mu1 = np.array([Z**k * ck for k, ck in enumerate(c)]) / fZ
    mu1 = mu1 / mu1.sum()
    m0 = fZ / (1.0 - fZ)
    m1 = float(np.dot(np.arange(len(mu1)), mu1))
    D = (4.0 * rho / (9.0 * (Z - 1.0))) ** 0.25
    return BoltzmannParams(
        q=q,
        classification=cls,
        Z=Z,
        fZ=fZ,
        rho=rho,
        mu0_param=fZ,
        mu1_pmf=mu1,
        m0=m0,
        m1=m1,
        scale_D=D,
        tangency=tangency,
    )


def derive_offspring(params: BoltzmannParams) -> tuple[float, np.ndarray]:
    """Return ``(p, mu1)``: mu0(k) = (1-p) p^k and the tabulated type-1 law."""
    if not params.is_critical:
        raise ValueError(f"offspring laws need a critical sequence, got {params.classification.value}")
    return params.mu0_param, params.mu1_pmf.copy()


def kappa_weights(kappa: int) -> WeightSequence:
    """Weights of uniform 2kappa-angulations: ``q_kappa = alpha_kappa``."""
    if kappa < 2:
        raise ValueError(f"kappa must be >= 2, got {kappa}")
    alpha = Fraction((kappa - 1) ** (kappa - 1), kappa**kappa * N(kappa))
    return WeightSequence({kappa: float(alpha)})


def kappa_params(kappa: int) -> BoltzmannParams:
    return solve_and_classify(kappa_weights(kappa))
