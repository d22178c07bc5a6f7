"""Similarity thresholds for small eps and turning-point bounds from Bi zeros."""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional

from .airyfn import eval_airy
from .detcore import KNOT
from .errors import AllNormsMissing, ConvergenceError
from .roots import newton_complex

SHIFT = 2.5  # the series terms are (k^2 - 5/2)^(-1) and (k^2 - 5/2)^(-2)


@dataclass(frozen=True)
class BoundConstants:
    c_inf: float
    c_1: float
    c_2: float
    tail_error_1: float
    tail_error_2: float


@dataclass(frozen=True)
class NormTriple:
    norm_inf: Optional[float] = None
    norm_1: Optional[float] = None
    norm_2: Optional[float] = None

    def __post_init__(self):
        present = [v for v in (self.norm_inf, self.norm_1, self.norm_2) if v is not None]
        if not present:
            raise AllNormsMissing("at least one of the L_inf, L_1, L_2 norms is required")
        if any(v < 0 or math.isnan(v) for v in present):
            raise ValueError("norms must be non-negative")
        # on [-1, 1]: ||p||_1 <= 2 ||p||_inf and ||p||_1 <= sqrt(2) ||p||_2
        slack = 1e-12
        if self.norm_1 is not None and self.norm_inf is not None:
            if self.norm_1 > 2 * self.norm_inf * (1 + slack):
                warnings.warn("norm_1 > 2 * norm_inf is impossible on [-1, 1]", stacklevel=2)
        if self.norm_1 is not None and self.norm_2 is not None:
            if self.norm_1 > math.sqrt(2) * self.norm_2 * (1 + slack):
                warnings.warn("norm_1 > sqrt(2) * norm_2 is impossible on [-1, 1]", stacklevel=2)


@dataclass(frozen=True)
class TurnBound:
    k: int
    z_k: complex
    bound: float


def _tail_first(T: float) -> float:
    """Integral of (t^2 - b)^(-1) over [T, inf)."""
    s = math.sqrt(SHIFT)
    return math.log((T + s) / (T - s)) / (2 * s)


def _tail_second(T: float) -> float:
    """Integral of (t^2 - b)^(-2) over [T, inf)."""
    b = SHIFT
    s = math.sqrt(b)
    return -math.log((T + s) / (T - s)) / (4 * b * s) + T / (2 * b * (T * T - b))


def _derivs(power: int, t: float):
    """First and third derivatives of f = (t^2 - b)^(-power)."""
    b = SHIFT
    u = t * t - b
    if power == 1:
        return -2 * t / u**2, -24 * t * (t * t + b) / u**4
    return -4 * t / u**3, -(120 * t**3 + 72 * b * t) / u**5


def _series(power: int, tol: float):
    """sum_{k>=2} (k^2 - 5/2)^(-power) and a bound on its error.

    The tail beyond N is the midpoint Euler-Maclaurin expansion at
    t = N + 1/2: integral from t, plus f1(t) / 24, minus 7 f3(t) / 5760
    (f1, f3 the first and third derivatives).  The derivatives of f alternate
    in sign, so the remainder is smaller than the last included term; N is
    the smallest index for which that term is at most ``tol``.
    """
    integral = _tail_first if power == 1 else _tail_second
    partial = 0.0
    k = 2
    while True:
        partial += (k * k - SHIFT) ** -power
        t = k + 0.5
        d1, d3 = _derivs(power, t)
        bound = 7 * abs(d3) / 5760
        if bound <= tol:
            return partial + integral(t) + d1 / 24 - 7 * d3 / 5760, bound
        k += 1


def compute_constants(tol: float = 1e-12) -> BoundConstants:
    """The three threshold constants.

    ``tail_error_*`` is the guaranteed bound on each series truncation,
    i.e. ``tol``; the certified remainder never exceeds it.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    s1, _ = _series(1, tol)
    s2, _ = _series(2, tol)
    quarter_pi2 = math.pi**2 / 4
    return BoundConstants(
        c_inf=3 * math.pi**2 / 8,
        c_1=quarter_pi2 / (2.0 / 3.0 + s1),
        c_2=quarter_pi2 / math.sqrt(4.0 / 9.0 + s2),
        tail_error_1=tol,
        tail_error_2=tol,
    )


def similarity_threshold(norms: NormTriple, constants: BoundConstants | None = None):
    """Largest eps guaranteed by the small-eps criterion, and which norm gave it.

    Each available norm yields a sufficient condition ``eps < C / ||p||``;
    any one of them suffices, so the maximum is returned.  A zero norm
    makes its condition vacuous and the result is ``math.inf``.
    """
    c = constants or compute_constants()
    best, which = -math.inf, None
    for label, norm, const in (
        ("L_inf", norms.norm_inf, c.c_inf),
        ("L_1", norms.norm_1, c.c_1),
        ("L_2", norms.norm_2, c.c_2),
    ):
        if norm is None:
            continue
        value = math.inf if norm == 0 else const / norm
        if value > best:
            best, which = value, label
    return best, which


def _bi_zero_seed(k: int) -> complex:
    # zeros of Bi above the ray arg z = pi/3: exp(i pi/3) T(3 pi (4k - 1) / 8 + 3i ln 2 / 4)
    t = 3 * math.pi * (4 * k - 1) / 8 + 0.75j * math.log(2)
    T = t ** (2.0 / 3.0) * (1 + 5 / (48 * t**2) - 5 / (36 * t**4))
    return cmath.exp(1j * math.pi / 3) * T


def bi_complex_zero(k: int, tol: float = 1e-13) -> complex:
    """k-th zero of Bi in the open first quadrant, by modulus."""
    res = newton_complex(lambda z: eval_airy("bi", z), _bi_zero_seed(k), tol=tol, max_iter=60)
    z = res.root
    if not (z.real > 0 and z.imag > 0):
        raise ConvergenceError(f"Bi zero {k} at {z!r} is not in the first quadrant")
    if abs(eval_airy("bi", z).value) > 1e-10:
        raise ConvergenceError(f"Bi zero {k} at {z!r} fails the residual check")
    return z


def turning_bounds(k_max: int) -> list[TurnBound]:
    """``cot(arg z_k)`` for the first ``k_max`` first-quadrant zeros of Bi."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    out = []
    prev = 0.0
    for k in range(1, k_max + 1):
        z = bi_complex_zero(k)
        if abs(z) <= prev:
            raise ConvergenceError(f"Bi zero {k} out of modulus order")
        prev = abs(z)
        bound = 1.0 / math.tan(cmath.phase(z))
        if not 0 < bound < KNOT:
            raise ConvergenceError(f"cot(arg z_{k}) = {bound} outside (0, 1/sqrt(3))")
        out.append(TurnBound(k, z, bound))
    return out
