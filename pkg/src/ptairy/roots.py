"""Newton solvers: scalar complex roots, ray zeros of U_-/U_+, and the
two-dimensional system ``D = dD/dlam = 0`` that locates double eigenvalues."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .airyfn import SQRT3, eval_u
from .detcore import KNOT, det_jet
from .errors import (
    ConvergenceError,
    DomainError,
    NumericalError,
    DerivativeUnderflow,
    JacobianSingular,
    NonConvergence,
)

RAY_ANGLE = math.pi / 3
RAY = cmath.exp(1j * RAY_ANGLE)
# (sqrt(3)/4) * (3/2)**3
ASYM_PREFACTOR = SQRT3 / 4.0 * 27.0 / 8.0
DEDUP_DISTANCE = 1e-6


@dataclass(frozen=True)
class RootResult:
    root: complex
    residual: float
    iterations: int
    converged: bool


@dataclass(frozen=True)
class CriticalPoint:
    eps_star: float
    lambda_star: complex
    residual_pair: tuple[float, float]
    iterations: int = 0


def newton_complex(
    f: Callable[[complex], tuple],
    seed: complex,
    tol: float = 1e-12,
    max_iter: int = 50,
    max_halvings: int = 20,
) -> RootResult:
    """Damped Newton iteration for a holomorphic ``f``.

    ``f(z)`` returns ``(value, derivative)`` or ``(value, derivative, scale)``;
    with a scale the residual test is ``|value| <= tol * scale``.  A step is
    halved while ``|f|`` fails to decrease (up to ``max_halvings`` times).

    Raises
    ------
    NonConvergence
        If the tolerance is not met within ``max_iter`` iterations.
    DerivativeUnderflow
        If ``|f'(z)| < 1e-300`` at an iterate.
    """
    z = complex(seed)
    val, der, scale = _unpack(f(z))
    for it in range(max_iter + 1):
        res = abs(val)
        if it > 0 and res <= tol * scale and abs(step) <= tol * (1.0 + abs(z)):
            return RootResult(z, res / scale, it, True)
        if it == max_iter:
            break
        if abs(der) < 1e-300:
            raise DerivativeUnderflow(f"|f'| underflow at z={z!r}")
        step = -val / der
        trial = z + step
        tval, tder, tscale = _unpack(f(trial))
        halvings = 0
        # damp only while far from the rounding floor
        while abs(tval) > res and res > tol * scale and halvings < max_halvings:
            step *= 0.5
            trial = z + step
            tval, tder, tscale = _unpack(f(trial))
            halvings += 1
        z, val, der, scale = trial, tval, tder, tscale
    raise NonConvergence(
        f"Newton did not converge from seed {seed!r}: last z={z!r}, |f|={abs(val):.3e}"
    )


def _unpack(out):
    if len(out) == 3:
        return complex(out[0]), complex(out[1]), float(out[2])
    return complex(out[0]), complex(out[1]), 1.0


def solve_critical(
    seed_eps: float,
    seed_lambda: complex,
    tol: float = 1e-12,
    max_iter: int = 60,
    knot_tol: float = 1e-8,
) -> CriticalPoint:
    """Locate a double eigenvalue: solve ``D = 0, dD/dlam = 0`` for ``(eps, lam)``.

    Newton runs in ``C^2`` with the exact Jacobian
    ``[[D_eps, D_lam], [D_lam_eps, D_lam_lam]]``; steps are halved while the
    residual norm grows.  Real seeds stay real because ``D`` is real on the
    real ``(eps, lam)`` plane.  The returned point is checked to sit on the
    knot ``1/sqrt(3)`` to ``knot_tol``.

    Raises
    ------
    NonConvergence
        Iteration budget exhausted, the iterate left the admissible region,
        or the converged point is off the knot.
    JacobianSingular
        The 2x2 Jacobian is numerically singular.
    """
    x = np.array([complex(seed_eps), complex(seed_lambda)])

    def residual(x):
        eps = x[0]
        if eps.real <= 0:
            raise NonConvergence(f"critical solve left eps > 0 (eps={eps!r})")
        if abs(eps.imag) <= 1e-15 * eps.real:
            eps = float(eps.real)
        j = det_jet(eps, x[1])
        return j, np.array([j.d, j.d_lambda]) / j.scale

    jet, F = residual(x)
    nF = float(np.max(np.abs(F)))
    n_it = 0
    while nF > tol:
        if n_it == max_iter:
            raise NonConvergence(
                f"critical solve did not converge from ({seed_eps}, {seed_lambda}); "
                f"last residual {nF:.3e}"
            )
        n_it += 1
        J = np.array([[jet.d_eps, jet.d_lambda], [jet.d_lambda_eps, jet.d_lambda2]]) / jet.scale
        det2 = J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0]
        if abs(det2) <= 1e-14 * float(np.max(np.abs(J))) ** 2:
            raise JacobianSingular(f"singular critical-system Jacobian at {x!r}")
        dx = np.linalg.solve(J, -F)
        for _ in range(21):
            try:
                tjet, tF = residual(x + dx)
            except (NumericalError, DomainError):
                tF = None
            if tF is not None and float(np.max(np.abs(tF))) < nF:
                break
            dx = dx * 0.5
        else:
            raise NonConvergence(f"critical solve stalled at {x!r} (residual {nF:.3e})")
        x = x + dx
        jet, F = tjet, tF
        nF = float(np.max(np.abs(F)))

    eps, lam = x
    if abs(eps.imag) > 1e-8 * abs(eps):
        raise NonConvergence(f"critical solve converged to complex eps={eps!r}")
    pair = (abs(jet.d), abs(jet.d_lambda))
    if max(pair) > tol * jet.scale:
        raise NonConvergence(f"critical residuals {pair} exceed tolerance")
    if abs(lam - KNOT) > knot_tol:
        raise NonConvergence(
            f"double eigenvalue at lam={lam!r} is {abs(lam - KNOT):.3e} off the knot"
        )
    return CriticalPoint(float(eps.real), complex(lam), pair, n_it)


def asymptotic_modulus(sign, k: int) -> float:
    """Predicted modulus of the k-th ray zero of U_- (sign '-') or U_+ ('+')."""
    phase = math.pi / 12 if sign in ("-", -1) else 5 * math.pi / 12
    eps_k = ASYM_PREFACTOR * (math.pi * k - phase) ** 2
    return 2.0 / SQRT3 * eps_k ** (1.0 / 3.0)


def ray_zero(
    sign, k: int, tol: float = 1e-13, ray_tol: float = 1e-10, seed_scale: float = 1.0
) -> complex:
    """The k-th zero (k >= 1) of U_sign on the ray arg z = pi/3.

    ``seed_scale`` multiplies the asymptotic seed modulus.
    """
    if not seed_scale > 0:
        raise ValueError("seed_scale must be positive")
    seed = seed_scale * asymptotic_modulus(sign, k) * RAY
    res = newton_complex(lambda z: eval_u(sign, z), seed, tol=tol, max_iter=60)
    z = res.root
    value = abs(eval_u(sign, z).value)
    off = abs(cmath.phase(z) - RAY_ANGLE)
    if value > 1e-10 or off > ray_tol:
        raise ConvergenceError(
            f"zero {k} of U{sign} at {z!r} fails ray verification "
            f"(|U|={value:.2e}, angular offset={off:.2e})"
        )
    return z


def ray_zero_moduli(sign, count: int, ray_tol: float = 1e-10, seed_scale: float = 1.0) -> list[float]:
    """Moduli of the first ``count`` nonzero zeros of U_sign on arg z = pi/3.

    The origin (the zero of U_- forced by Bi(0) = sqrt(3) Ai(0)) is not
    included; the list starts with alpha_1 / beta_1.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    moduli: list[float] = []
    for k in range(1, count + 1):
        r = abs(ray_zero(sign, k, ray_tol=ray_tol, seed_scale=seed_scale))
        if moduli and r <= moduli[-1] + DEDUP_DISTANCE:
            raise ConvergenceError(
                f"U{sign} zero {k} (|z|={r:.12g}) duplicates or precedes zero {k - 1}"
            )
        moduli.append(r)
    return moduli
