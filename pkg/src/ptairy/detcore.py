"""Characteristic determinant of ``-y''/eps + i x y = lam y``, ``y(+-1) = 0``.

With ``xi(x) = eps**(1/3) * (lam - i x)`` every solution is a combination of
``Ai(xi(x))`` and ``Bi(xi(x))``; the Dirichlet conditions at ``x = +-1`` give

    D(eps, lam) = i * (Ai(xi_p) Bi(xi_m) - Ai(xi_m) Bi(xi_p)),
    xi_p = xi(+1),  xi_m = xi(-1).

The unit factor ``i`` makes ``D`` real for real ``(eps, lam)``, so that
``D(eps, conj lam) = conj D(eps, lam)``. ``eps`` may be complex in the
internal routines (the two-dimensional critical-point solver uses that);
the public entry points require it to be real and positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .airyfn import R_MAX, airy_all
from .errors import DomainError

KNOT = 1.0 / math.sqrt(3.0)

TOL_DET = 1e-10


@dataclass(frozen=True)
class SpectralParams:
    eps: float
    lam: complex

    def __post_init__(self):
        _check_eps(self.eps)


@dataclass(frozen=True)
class DetValue:
    d: complex
    d_lambda: complex
    d_eps: complex
    scale: float = 1.0


@dataclass(frozen=True)
class DetJet:
    """D with first and second partials; used by the critical-point solver."""

    d: complex
    d_lambda: complex
    d_eps: complex
    d_lambda2: complex
    d_lambda_eps: complex
    scale: float = 1.0


def _check_eps(eps):
    if isinstance(eps, complex):
        raise DomainError("eps must be real")
    if not (eps > 0 and math.isfinite(eps)):
        raise DomainError(f"eps must be positive and finite, got {eps!r}")


def cbrt_eps(eps):
    if isinstance(eps, complex):
        return eps ** (1.0 / 3.0)
    return math.cbrt(eps) if hasattr(math, "cbrt") else eps ** (1.0 / 3.0)


def xi_map(eps: float, lam, x: float) -> complex:
    """``eps**(1/3) * (lam - i x)`` with the real positive cube root."""
    _check_eps(eps)
    return cbrt_eps(eps) * (complex(lam) - 1j * x)


def _endpoint_values(eps, lam):
    c = cbrt_eps(eps)
    xp = c * (lam - 1j)
    xm = c * (lam + 1j)
    for name, xi in (("xi(+1)", xp), ("xi(-1)", xm)):
        if abs(xi) > R_MAX:
            raise DomainError(
                f"{name} = {xi:.6g} has modulus {abs(xi):.6g} > {R_MAX:g}; "
                f"(eps, lam) = ({eps!r}, {lam!r}) is outside the working region"
            )
    return c, xp, xm, airy_all(xp), airy_all(xm)


def _jet(eps, lam, second: bool):
    lam = complex(lam)
    c, xp, xm, (ap, ap1, bp, bp1), (am, am1, bm, bm1) = _endpoint_values(eps, lam)
    # P = Ai(xp) Bi(xm), Q = Ai(xm) Bi(xp); D = i (P - Q)
    P = ap * bm
    Q = am * bp
    P_l = c * (ap1 * bm + ap * bm1)
    Q_l = c * (am1 * bp + am * bp1)
    three_eps = 3.0 * eps
    P_e = (xp * ap1 * bm + xm * ap * bm1) / three_eps
    Q_e = (xm * am1 * bp + xp * am * bp1) / three_eps
    scale = max(1.0, abs(P), abs(Q))
    if not second:
        return DetValue(1j * (P - Q), 1j * (P_l - Q_l), 1j * (P_e - Q_e), scale)
    # Ai'' = xi Ai, Bi'' = xi Bi
    P_ll = c * c * ((xp + xm) * ap * bm + 2.0 * ap1 * bm1)
    Q_ll = c * c * ((xm + xp) * am * bp + 2.0 * am1 * bp1)
    P_le = (c / three_eps) * (
        ap1 * bm + ap * bm1 + (xp * xp + xm * xm) * ap * bm + (xp + xm) * ap1 * bm1
    )
    Q_le = (c / three_eps) * (
        am1 * bp + am * bp1 + (xm * xm + xp * xp) * am * bp + (xm + xp) * am1 * bp1
    )
    return DetJet(
        1j * (P - Q),
        1j * (P_l - Q_l),
        1j * (P_e - Q_e),
        1j * (P_ll - Q_ll),
        1j * (P_le - Q_le),
        scale,
    )


def char_det(p: SpectralParams) -> DetValue:
    """D, dD/dlam and dD/deps at ``p``.

    ``DetValue.scale`` is ``max(1, |Ai(xi_p) Bi(xi_m)|, |Ai(xi_m) Bi(xi_p)|)``;
    a root test should compare ``|d|`` with ``tol * scale``.
    """
    return _jet(p.eps, p.lam, second=False)


def det(eps: float, lam) -> DetValue:
    _check_eps(eps)
    return _jet(eps, complex(lam), second=False)


def det_jet(eps, lam) -> DetJet:
    """Like :func:`det` plus second partials; ``eps`` may be complex here."""
    if not isinstance(eps, complex):
        _check_eps(eps)
    return _jet(eps, complex(lam), second=True)


def det_on_knot(eps: float) -> DetValue:
    """The determinant at ``lam = 1/sqrt(3)``; real-valued for real ``eps``."""
    return det(eps, KNOT)


def is_eigenvalue(eps: float, lam, tol: float = TOL_DET) -> bool:
    v = det(eps, lam)
    return abs(v.d) <= tol * v.scale
