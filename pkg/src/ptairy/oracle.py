"""
Independent check of the determinant roots by discretizing the operator

    T(eps) y = -y''/eps + i x y,   y(-1) = y(1) = 0

either by Chebyshev collocation or by the 3-point finite-difference stencil,
then solving the dense non-Hermitian eigenproblem with LAPACK (Hessenberg
reduction plus shifted QR).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .detcore import det
from .errors import DomainError, EigensolveFailure, UnmatchedEigenvalue
from .roots import newton_complex

N_MAX = 512


class Scheme(enum.Enum):
    CHEBYSHEV_COLLOCATION = "chebyshev"
    FINITE_DIFFERENCE_2ND_ORDER = "fd"


@dataclass(frozen=True)
class DiscretizationConfig:
    n: int = 64
    scheme: Scheme = Scheme.CHEBYSHEV_COLLOCATION

    def __post_init__(self):
        object.__setattr__(self, "scheme", Scheme(self.scheme))
        if not 8 <= self.n <= N_MAX:
            raise DomainError(f"interior grid size n={self.n} outside [8, {N_MAX}]")


@dataclass(frozen=True)
class OracleSpectrum:
    eps: float
    eigenvalues: np.ndarray
    config: DiscretizationConfig
    trust_count: int


@dataclass
class CrossCheckReport:
    eps: float
    oracle: np.ndarray
    roots: np.ndarray
    residuals: np.ndarray
    max_delta: float
    deltas: np.ndarray = field(repr=False, default=None)


def cheb(N):
    """Chebyshev-Gauss-Lobatto points x_j = cos(pi j / N) and the first
    derivative matrix on them (negative-sum trick for the diagonal)."""
    j = np.arange(N + 1)
    x = np.cos(np.pi * j / N)
    c = np.where((j == 0) | (j == N), 2.0, 1.0) * (-1.0) ** j
    dX = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dX + np.eye(N + 1))
    D -= np.diag(D.sum(axis=1))
    return x, D


def grid(config: DiscretizationConfig) -> np.ndarray:
    n = config.n
    if config.scheme is Scheme.CHEBYSHEV_COLLOCATION:
        # interior nodes in increasing order
        return np.cos(np.pi * np.arange(n, 0, -1) / (n + 1))
    h = 2.0 / (n + 1)
    return -1.0 + h * np.arange(1, n + 1)


def discretize(eps: float, config: DiscretizationConfig, potential=None) -> np.ndarray:
    """Dense matrix of ``-y''/eps + p(x) y`` on the interior nodes.

    ``potential`` defaults to ``p(x) = i x``.
    """
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps!r}")
    n = config.n
    if config.scheme is Scheme.CHEBYSHEV_COLLOCATION:
        x, D = cheb(n + 1)
        D2 = (D @ D)[1:-1, 1:-1]
        # reverse so nodes run from -1 to 1
        D2 = D2[::-1, ::-1]
        x = x[1:-1][::-1]
    else:
        h = 2.0 / (n + 1)
        x = -1.0 + h * np.arange(1, n + 1)
        D2 = (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)) / h**2
    p = 1j * x if potential is None else np.asarray(potential(x), dtype=complex)
    return -D2 / eps + np.diag(p)


def _sorted(ev: np.ndarray, order: str) -> np.ndarray:
    if order == "abs":
        idx = np.lexsort((ev.imag, ev.real, np.abs(ev)))
    else:
        idx = np.lexsort((ev.imag, ev.real))
    return ev[idx]


def _eigvals(M):
    try:
        ev = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolveFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise EigensolveFailure("eigensolver returned non-finite values")
    return ev


def oracle_spectrum(
    eps: float,
    config: DiscretizationConfig = DiscretizationConfig(),
    count: int | None = None,
    order: str = "real",
    trust_rtol: float = 1e-8,
) -> OracleSpectrum:
    """Lowest ``count`` discrete eigenvalues, sorted by real part (or ``abs``).

    ``trust_count`` is the length of the leading run of eigenvalues that agree
    with a run at twice the resolution to relative accuracy ``trust_rtol``.
    """
    n = config.n
    if count is None:
        count = n // 4
    if count > n // 4:
        raise DomainError(f"count={count} exceeds the resolved part n/4={n // 4}")
    ev = _sorted(_eigvals(discretize(eps, config)), order)
    fine_cfg = DiscretizationConfig(min(2 * n, N_MAX), config.scheme)
    fine = _sorted(_eigvals(discretize(eps, fine_cfg)), order)
    trust = 0
    for lam in ev[: n // 2]:
        d = np.min(np.abs(fine - lam))
        if d > trust_rtol * max(1.0, abs(lam)):
            break
        trust += 1
    return OracleSpectrum(eps, ev[:count], config, trust)


def cross_check(
    eps: float,
    count: int = 5,
    config: DiscretizationConfig = DiscretizationConfig(),
    match_tol: float = 1e-3,
) -> CrossCheckReport:
    """Refine each oracle eigenvalue as a root of D and compare.

    Raises
    ------
    UnmatchedEigenvalue
        If a refined root is farther than ``match_tol`` from its seed, or
        two seeds collapse onto the same root.
    """
    spec = oracle_spectrum(eps, config, max(count, config.n // 4))
    seeds = spec.eigenvalues[:count]
    roots = np.empty(count, dtype=complex)
    residuals = np.empty(count)
    for i, s in enumerate(seeds):
        res = newton_complex(lambda z: _det_pair(eps, z), complex(s), tol=1e-13, max_iter=60)
        roots[i] = res.root
        residuals[i] = res.residual
    deltas = np.abs(roots - seeds)
    if np.any(deltas > match_tol):
        i = int(np.argmax(deltas))
        raise UnmatchedEigenvalue(
            f"oracle eigenvalue {seeds[i]!r} refined to {roots[i]!r} ({deltas[i]:.2e} away)"
        )
    for i in range(count):
        for j in range(i + 1, count):
            if abs(roots[i] - roots[j]) < 1e-6 and abs(seeds[i] - seeds[j]) > 1e-6:
                raise UnmatchedEigenvalue(f"seeds {i} and {j} refined to the same root")
    return CrossCheckReport(eps, seeds, roots, residuals, float(deltas.max()), deltas)


def _det_pair(eps, z):
    v = det(eps, z)
    return v.d, v.d_lambda, v.scale
