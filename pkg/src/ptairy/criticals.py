"""Knot-crossing and collision parameters from the ray zeros of U_+ and U_-."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .airyfn import SQRT3, eval_u
from .detcore import KNOT, det_on_knot
from .errors import ConvergenceError
from .roots import ASYM_PREFACTOR, ray_zero_moduli, solve_critical

ROOT_TOL = 1e-8

INDEXING_NOTE = (
    "rows start at k=1 with the first nonzero modulus; the zero of U_- at the "
    "origin (alpha_0 = 0) is excluded since it would give eps = 0"
)


@dataclass(frozen=True)
class CriticalRow:
    k: int
    alpha: float
    beta: float
    delta: float
    eps: float


@dataclass(frozen=True)
class CriticalTable:
    rows: tuple
    metadata: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def interlaced(self) -> bool:
        seq = [x for r in self.rows for x in (r.delta, r.eps)]
        return seq[0] > 0 and all(a < b for a, b in zip(seq, seq[1:]))


class AtKind(enum.Enum):
    AT_DELTA = "delta"
    AT_EPS = "eps"


@dataclass(frozen=True)
class EigenfunctionCheck:
    kind: AtKind
    residual_minus1: float
    residual_plus1: float
    interior_norm: float


def modulus_to_eps(r: float) -> float:
    return (r * SQRT3 / 2) ** 3


def build_table(
    k_max: int,
    verify_critical: bool = True,
    ray_tol: float = 1e-10,
    seed_scale: float = 1.0,
    root_tol: float = ROOT_TOL,
) -> CriticalTable:
    """Rows (k, alpha_k, beta_k, delta_k, eps_k) for k = 1..k_max.

    Each delta_k and eps_k is checked to be a root of the knot determinant to
    ``root_tol``; with ``verify_critical`` each eps_k is also recomputed by the
    two-dimensional critical-point solver and must agree to ``root_tol``.
    """
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    alphas = ray_zero_moduli("-", k_max, ray_tol, seed_scale)
    betas = ray_zero_moduli("+", k_max, ray_tol, seed_scale)
    rows = []
    for k, (a, b) in enumerate(zip(alphas, betas), start=1):
        delta, eps = modulus_to_eps(b), modulus_to_eps(a)
        for name, e in (("delta", delta), ("eps", eps)):
            v = det_on_knot(e)
            if abs(v.d) > root_tol * v.scale:
                raise ConvergenceError(f"{name}_{k}={e!r} is not a knot root (|D|={abs(v.d):.2e})")
        if verify_critical:
            cp = solve_critical(eps, KNOT)
            if abs(cp.eps_star - eps) > root_tol * max(1.0, eps):
                raise ConvergenceError(
                    f"eps_{k}: ray zero gives {eps!r}, critical solver gives {cp.eps_star!r}"
                )
        rows.append(CriticalRow(k, a, b, delta, eps))
    table = CriticalTable(tuple(rows), {"indexing": INDEXING_NOTE, "alpha_0": 0.0})
    if not table.interlaced():
        raise ConvergenceError("computed delta_k / eps_k fail to interlace")
    return table


def asymptotic_table(k_max: int):
    """(k, eps_asym, delta_asym) from the large-k formulas without the O(1/k) term."""
    out = []
    for k in range(1, k_max + 1):
        e = ASYM_PREFACTOR * (math.pi * k - math.pi / 12) ** 2
        d = ASYM_PREFACTOR * (math.pi * k - 5 * math.pi / 12) ** 2
        out.append((k, e, d))
    return out


def eigenfunction_values(kind, k: int, param: float | None = None, table: CriticalTable | None = None):
    """Candidate eigenfunction y(z) = U(p^(1/3) (1/sqrt 3 - i z)) as a callable.

    ``kind`` AT_DELTA uses U_+ with p = delta_k, AT_EPS uses U_- with p = eps_k.
    ``param`` overrides p (for sensitivity checks).
    """
    kind = AtKind(kind)
    if param is None:
        table = table or build_table(k, verify_critical=False)
        row = table.rows[k - 1]
        param = row.delta if kind is AtKind.AT_DELTA else row.eps
    sign = "+" if kind is AtKind.AT_DELTA else "-"
    c = param ** (1.0 / 3.0)
    return lambda z: eval_u(sign, c * (KNOT - 1j * z)).value


def eigenfunction_residual(
    kind, k: int, param: float | None = None, table: CriticalTable | None = None
) -> EigenfunctionCheck:
    """Boundary values at z = -1, +1 and the largest |y| at 11 interior points."""
    y = eigenfunction_values(kind, k, param, table)
    interior = np.linspace(-1, 1, 13)[1:-1]
    return EigenfunctionCheck(
        AtKind(kind),
        abs(y(-1.0)),
        abs(y(1.0)),
        max(abs(y(z)) for z in interior),
    )


def knot_index(eps: float, n: int = 64) -> list[int]:
    """1-based positions of the knot in the oracle spectrum sorted by real part.

    Used to confirm that the knot eigenvalue at delta_k is lam_{2k-1} and
    that at eps_k it is the pair (lam_{2k-1}, lam_{2k}).
    """
    from .oracle import DiscretizationConfig, oracle_spectrum

    spec = oracle_spectrum(eps, DiscretizationConfig(n), n // 4)
    ev = spec.eigenvalues
    return [i + 1 for i, lam in enumerate(ev) if abs(lam - KNOT) < 1e-4]
