"""
Complex Airy functions Ai, Bi and the combinations U_-, U_+ and V_a.

Evaluation strategy
-------------------
* ``|z| <= R_SWITCH``: Maclaurin series of the two canonical solutions of
  ``y'' = z y``.  The running sum of absolute term values measures the
  cancellation; when it exceeds ``CANCEL_LIMIT`` times the result the same
  series is re-summed with mpmath at a working precision large enough to
  absorb the loss.
* ``|z| > R_SWITCH``: the large-argument expansion of Ai, used only where
  ``|arg z| <= 2 pi / 3``.  Of the three rotated points ``z, w z, w^2 z``
  (``w = exp(2 pi i / 3)``) at most one falls outside that sector; its value
  follows from ``Ai(z) + w Ai(w z) + w^2 Ai(w^2 z) = 0``.  Bi is assembled
  from ``Ai(w z)`` and ``Ai(w^2 z)``.

Values in the lower half-plane are obtained by Schwarz reflection, so
``f(conj z) == conj f(z)`` holds bit for bit.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum
from typing import NamedTuple

import mpmath

from .errors import ConvergenceError, DomainError

__all__ = [
    "AiryPair",
    "Kind",
    "R_MAX",
    "R_SWITCH",
    "AI0",
    "AIP0",
    "BI0",
    "BIP0",
    "SQRT3",
    "airy_all",
    "eval_airy",
    "eval_solution",
    "eval_u",
    "eval_v",
]

SQRT3 = math.sqrt(3.0)
R_MAX = 80.0
R_SWITCH = 8.5
CANCEL_LIMIT = 100.0

_OMEGA = cmath.exp(2j * math.pi / 3)
_OMEGA_BAR = _OMEGA.conjugate()
_E_PI6 = cmath.exp(1j * math.pi / 6)
_E_5PI6 = cmath.exp(5j * math.pi / 6)
_TWO_THIRDS_PI = 2.0 * math.pi / 3.0
_ROOT_PI = math.sqrt(math.pi)
_TINY = 2.0 ** -60


def _origin_values():
    ai0 = 1.0 / (3.0 ** (2.0 / 3.0) * math.gamma(2.0 / 3.0))
    aip0 = -1.0 / (3.0 ** (1.0 / 3.0) * math.gamma(1.0 / 3.0))
    return ai0, aip0


AI0, AIP0 = _origin_values()
BI0 = SQRT3 * AI0
BIP0 = -SQRT3 * AIP0


class AiryPair(NamedTuple):
    value: complex
    derivative: complex


class Kind(Enum):
    AI = "ai"
    BI = "bi"
    U_MINUS = "u-"
    U_PLUS = "u+"
    V = "v"


# -- Maclaurin series -----------------------------------------------------


def _series_float(z: complex):
    """Return (ai, aip, bi, bip) and the worst cancellation ratio."""
    z2 = z * z
    z3 = z2 * z
    # f = sum c_k z^{3k}, g = sum d_k z^{3k+1}; tf, tg are the running terms
    tf = 1.0 + 0j
    tg = z
    f, g = tf, tg
    fp, gp = 0j, 1.0 + 0j
    af, ag = 1.0, abs(z)
    afp, agp = 0.0, 1.0
    k = 0
    while True:
        k += 1
        tf = tf * z3 / ((3 * k - 1) * (3 * k))
        tg = tg * z3 / ((3 * k) * (3 * k + 1))
        f += tf
        g += tg
        # derivative terms: d/dz z^{3k} = 3k z^{3k-1}, d/dz z^{3k+1} = (3k+1) z^{3k}
        dfp = 3 * k * tf / z if z != 0 else 0j
        dgp = (3 * k + 1) * tg / z if z != 0 else 0j
        fp += dfp
        gp += dgp
        mf, mg = abs(tf), abs(tg)
        af += mf
        ag += mg
        afp += abs(dfp)
        agp += abs(dgp)
        if mf + mg + abs(dfp) + abs(dgp) <= _TINY * (af + ag + afp + agp) or z == 0:
            break
        if k > 400:
            raise ConvergenceError(f"Maclaurin series did not converge at z={z!r}")
    ai = AI0 * f + AIP0 * g
    aip = AI0 * fp + AIP0 * gp
    bi = BI0 * f + BIP0 * g
    bip = BI0 * fp + BIP0 * gp
    scale = AI0 * af + abs(AIP0) * ag
    scale_p = AI0 * afp + abs(AIP0) * agp
    ratio = max(
        _ratio(scale, ai),
        _ratio(scale_p, aip),
        _ratio(SQRT3 * scale, bi),
        _ratio(SQRT3 * scale_p, bip),
    )
    return (ai, aip, bi, bip), ratio


def _ratio(scale, value):
    a = abs(value)
    if a == 0.0:
        return math.inf if scale > 0 else 1.0
    return scale / a


def _series_mp(z: complex, dps: int):
    with mpmath.workdps(dps):
        zz = mpmath.mpc(z.real, z.imag)
        z3 = zz ** 3
        ai0 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
        aip0 = -1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
        s3 = mpmath.sqrt(3)
        tf = mpmath.mpc(1)
        tg = zz
        f, g = tf, tg
        fp, gp = mpmath.mpc(0), mpmath.mpc(1)
        scale = 1 + abs(zz)
        stop = mpmath.mpf(10) ** (-dps)
        k = 0
        while True:
            k += 1
            tf = tf * z3 / ((3 * k - 1) * (3 * k))
            tg = tg * z3 / ((3 * k) * (3 * k + 1))
            f += tf
            g += tg
            if zz != 0:
                fp += 3 * k * tf / zz
                gp += (3 * k + 1) * tg / zz
            m = abs(tf) + abs(tg)
            scale += m
            if m * (3 * k + 2) <= stop * scale * max(1, abs(zz)) or zz == 0:
                break
            if k > 2000:
                raise ConvergenceError(f"extended-precision series stalled at z={z!r}")
        out = (
            ai0 * f + aip0 * g,
            ai0 * fp + aip0 * gp,
            s3 * (ai0 * f - aip0 * g),
            s3 * (ai0 * fp - aip0 * gp),
        )
        ratio = max(_ratio_mp(scale, v) for v in out)
        return tuple(complex(v) for v in out), ratio


def _ratio_mp(scale, value):
    a = abs(value)
    if a == 0:
        return mpmath.inf
    return scale / a


def _series(z: complex):
    vals, ratio = _series_float(z)
    if ratio <= CANCEL_LIMIT:
        return vals
    # digits lost to cancellation, plus headroom for the final rounding
    dps = 20 + int(math.log10(min(ratio, 1e30)))
    for _ in range(4):
        vals, ratio_mp = _series_mp(z, dps)
        lost = float(mpmath.log10(ratio_mp)) if ratio_mp != mpmath.inf else math.inf
        if lost + 18 <= dps:
            return vals
        if lost == math.inf:
            # exact zero of one component; nothing more to gain
            return vals
        dps = int(lost) + 22
    raise ConvergenceError(f"cancellation in the Maclaurin series at z={z!r} not resolved")


# -- large |z| -------------------------------------------------------------


def _ai_asym(z: complex):
    """Large-argument expansion of (Ai, Ai'), valid for |arg z| <= 2 pi / 3."""
    zeta = (2.0 / 3.0) * z * cmath.sqrt(z)
    inv = 1.0 / zeta
    u = 1.0
    su = 1.0 + 0j
    sv = 1.0 + 0j
    term_u = 1.0 + 0j
    prev = math.inf
    k = 0
    while True:
        k += 1
        u *= (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216.0 * k)
        v = -(6 * k + 1) / (6 * k - 1) * u
        term_u = term_u * (-inv)
        tu = u * term_u
        tv = v * term_u
        mag = abs(tu) + abs(tv)
        if mag > prev:
            # past the smallest term: truncate here
            if prev > 1e-13:
                raise ConvergenceError(f"asymptotic expansion too coarse at z={z!r}")
            break
        su += tu
        sv += tv
        prev = mag
        if mag < 1e-17:
            break
    z14 = cmath.sqrt(cmath.sqrt(z))
    e = cmath.exp(-zeta) / (2.0 * _ROOT_PI)
    return e * su / z14, -e * sv * z14


def _large(z: complex):
    pts = (z, _OMEGA * z, _OMEGA_BAR * z)
    args = [abs(cmath.phase(p)) for p in pts]
    bad = max(range(3), key=args.__getitem__)
    vals = [None, None, None]
    for i in range(3):
        if i != bad:
            vals[i] = _ai_asym(pts[i])
    # Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0 and the differentiated identity
    c_val = (1.0, _OMEGA, _OMEGA_BAR)
    c_der = (1.0, _OMEGA_BAR, _OMEGA)
    sv = sum(c_val[i] * vals[i][0] for i in range(3) if i != bad)
    sd = sum(c_der[i] * vals[i][1] for i in range(3) if i != bad)
    vals[bad] = (-sv / c_val[bad], -sd / c_der[bad])
    (ai, aip), (a1, a1p), (a2, a2p) = vals
    bi = _E_PI6 * a1 + _E_PI6.conjugate() * a2
    bip = _E_5PI6 * a1p + _E_5PI6.conjugate() * a2p
    return ai, aip, bi, bip


def airy_all(z: complex):
    """Return ``(Ai(z), Ai'(z), Bi(z), Bi'(z))`` for ``|z| <= R_MAX``.

    Raises
    ------
    DomainError
        If ``|z|`` exceeds the working region or ``z`` is not finite.
    """
    z = complex(z)
    r = abs(z)
    if not math.isfinite(r):
        raise DomainError(f"non-finite Airy argument {z!r}")
    if r > R_MAX:
        raise DomainError(f"|z| = {r:.6g} exceeds the working region |z| <= {R_MAX:g}")
    if z.imag < 0.0:
        return tuple(v.conjugate() for v in airy_all(z.conjugate()))
    if r <= R_SWITCH:
        out = _series(z)
    else:
        out = _large(z)
    if z.imag == 0.0:
        out = tuple(complex(v.real, 0.0) for v in out)
    return out


def eval_airy(kind, z) -> AiryPair:
    kind = Kind(kind)
    ai, aip, bi, bip = airy_all(z)
    if kind is Kind.AI:
        return AiryPair(ai, aip)
    if kind is Kind.BI:
        return AiryPair(bi, bip)
    raise ValueError(f"eval_airy only handles Ai and Bi, got {kind}")


def eval_v(a: float, z) -> AiryPair:
    """``V_a = a Ai + Bi`` with derivative."""
    a = float(a)
    if not math.isfinite(a):
        raise DomainError("V_a needs a finite coefficient a")
    ai, aip, bi, bip = airy_all(z)
    return AiryPair(a * ai + bi, a * aip + bip)


def eval_u(sign, z) -> AiryPair:
    """``U_- = -sqrt(3) Ai + Bi`` for ``sign < 0`` (or "-"), ``U_+`` otherwise."""
    return eval_v(_sign_value(sign) * SQRT3, z)


def _sign_value(sign) -> int:
    if sign in ("-", -1):
        return -1
    if sign in ("+", 1):
        return 1
    raise ValueError(f"sign must be '-' or '+', got {sign!r}")


def eval_solution(kind, z, a: float | None = None) -> AiryPair:
    """Dispatch on a solution kind; ``a`` is required for ``Kind.V``."""
    kind = Kind(kind)
    if kind in (Kind.AI, Kind.BI):
        return eval_airy(kind, z)
    if kind is Kind.U_MINUS:
        return eval_u("-", z)
    if kind is Kind.U_PLUS:
        return eval_u("+", z)
    if a is None:
        raise ValueError("Kind.V needs the coefficient a")
    return eval_v(a, z)
