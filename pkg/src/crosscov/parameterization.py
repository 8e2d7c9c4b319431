"""Exact parameterization of rank-one cross-covariance matrices.

Given ``Sigma_XY = d u v^T``, the scale ``alpha`` of the X salience is the
only free quantity of the single-latent model: ``a = alpha u``,
``b = d v / alpha``.  The error covariances

    Sigma_ee(alpha) = Sigma_XX - a a^T,    Sigma_zz(alpha) = Sigma_YY - b b^T

are both PSD exactly on ``[alpha_min, alpha_max]``.  The paired-latent model
adds the latent correlation ``rho`` and replaces ``b`` by ``d v / (alpha rho)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .covariance import (
    DEFAULT_TOL,
    AlphaBounds,
    BlockCovariance,
    LatentParams,
    RankOneFactors,
    Tolerances,
    min_eigenvalue,
)
from .errors import (
    BracketingFailure,
    DimensionMismatch,
    InfeasibleAlpha,
    InfeasiblePoint,
    NonPositiveAlpha,
    NotPSD,
    NotSymmetric,
    ZeroCrossCovariance,
)

MAX_ITER = 200
REL_WIDTH = 1e-12
REGION_STEPS = 256
_EPS = np.finfo(float).eps
_ULPS = 8


@dataclass(frozen=True)
class EigCurvePoint:
    alpha: float
    f_value: float
    g_value: float


@dataclass(frozen=True)
class FeasiblePoint:
    rho: float
    alpha: float


@dataclass(frozen=True)
class FeasibleRegion:
    """For each ``rhos[i]`` the feasible alphas are ``[alpha_lo[i], alpha_hi[i]]``."""

    rhos: np.ndarray
    alpha_lo: np.ndarray
    alpha_hi: np.ndarray


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    return alpha


def _spectral_radius(m: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvalsh(m))))


def decompose(cov: BlockCovariance, tol: Tolerances = DEFAULT_TOL) -> RankOneFactors:
    """Leading singular triple of the cross block with the sign convention applied.

    The component of ``u`` with greatest absolute value is made positive;
    ties go to the lowest index.
    """
    U, s, Vt = np.linalg.svd(cov.xy)
    floor = tol.zero_floor * cov.scale
    if s[0] <= floor:
        raise ZeroCrossCovariance(f"leading singular value {s[0]:.3g} is below the floor {floor:.3g}")
    u, v = U[:, 0].copy(), Vt[0].copy()
    mag = np.abs(u)
    # components equal to the maximum up to rounding count as ties
    k = int(np.flatnonzero(mag >= mag.max() * (1 - 1e-12))[0])
    if u[k] < 0:
        u, v = -u, -v
    return RankOneFactors(u, v, float(s[0]))


def salience_at_alpha(factors: RankOneFactors, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    alpha = _check_alpha(alpha)
    return alpha * factors.u, factors.v * factors.d / alpha


def error_cov_at_alpha(cov: BlockCovariance, factors: RankOneFactors, alpha: float):
    """``(Sigma_XX - a a^T, Sigma_YY - b b^T)`` at ``alpha``; not necessarily PSD."""
    a, b = salience_at_alpha(factors, alpha)
    return cov.xx - np.outer(a, a), cov.yy - np.outer(b, b)


def min_eig_f(cov: BlockCovariance, factors: RankOneFactors, alpha: float) -> float:
    return min_eigenvalue(error_cov_at_alpha(cov, factors, alpha)[0])


def min_eig_g(cov: BlockCovariance, factors: RankOneFactors, alpha: float) -> float:
    return min_eigenvalue(error_cov_at_alpha(cov, factors, alpha)[1])


def eig_curve(cov: BlockCovariance, factors: RankOneFactors, alphas: Iterable[float]) -> list[EigCurvePoint]:
    return [EigCurvePoint(float(al), min_eig_f(cov, factors, al), min_eig_g(cov, factors, al)) for al in alphas]


def _boundary(below: Callable[[float], bool], start: float) -> tuple[float, float]:
    """Bracket and bisect the switch of a monotone predicate.

    ``below`` must be true on ``(0, t)`` and false on ``(t, inf)``.  Returns
    ``(lo, hi)`` with ``below(lo)`` true, ``below(hi)`` false and
    ``hi - lo <= REL_WIDTH * hi``.
    """
    if below(start):
        lo, hi = start, 2.0 * start
        for _ in range(MAX_ITER):
            if not below(hi):
                break
            lo, hi = hi, 2.0 * hi
        else:
            raise BracketingFailure(f"no sign change found above {start:g}")
    else:
        lo, hi = 0.5 * start, start
        for _ in range(MAX_ITER):
            if below(lo):
                break
            lo, hi = 0.5 * lo, lo
        else:
            raise BracketingFailure(f"no sign change found below {start:g}")

    for _ in range(MAX_ITER):
        if hi - lo <= REL_WIDTH * hi:
            break
        mid = 0.5 * (lo + hi)
        if below(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def alpha_bounds(
    cov: BlockCovariance, factors: RankOneFactors | None = None, tol: Tolerances = DEFAULT_TOL
) -> AlphaBounds:
    """Feasible interval of ``alpha`` by bisection on the two eigenvalue curves.

    ``f`` is nonincreasing and ``g`` nondecreasing, so each feasible set is a
    half line and bisection converges globally.  A curve counts as
    nonnegative down to a few ulps of its block, plus whatever negativity
    the block itself already carries, so that zero plateaus (singular
    blocks) resolve to their extreme end.
    """
    if factors is None:
        factors = decompose(cov, tol)
    scale_x, scale_y = _spectral_radius(cov.xx), _spectral_radius(cov.yy)
    slack_x = 64 * _EPS * scale_x + max(0.0, -min_eigenvalue(cov.xx))
    slack_y = 64 * _EPS * scale_y + max(0.0, -min_eigenvalue(cov.yy))

    def f_ok(al):
        return min_eig_f(cov, factors, al) >= -slack_x

    def g_bad(al):
        return min_eig_g(cov, factors, al) < -slack_y

    start = float(np.sqrt(factors.d))
    alpha_max, _ = _boundary(f_ok, start)
    _, alpha_min = _boundary(g_bad, start)

    flat_max = abs(min_eig_f(cov, factors, alpha_max * (1 - 1e-6))) <= tol.psd * scale_x
    flat_min = abs(min_eig_g(cov, factors, alpha_min * (1 + 1e-6))) <= tol.psd * scale_y

    if alpha_min > alpha_max:
        if alpha_min - alpha_max > 1e-8 * alpha_max:
            raise BracketingFailure(
                f"alpha_min {alpha_min:.12g} exceeds alpha_max {alpha_max:.12g}; is the input PSD?"
            )
        alpha_min = alpha_max = 0.5 * (alpha_min + alpha_max)
    return AlphaBounds(alpha_min, alpha_max, flat_min=flat_min, flat_max=flat_max)


def is_feasible(bounds: AlphaBounds, point) -> bool:
    """Closed membership test ``|rho| <= 1, alpha_min^2 <= (alpha rho)^2, alpha <= alpha_max``.

    The two alpha inequalities allow a few ulps so that boundary points built
    from the bounds themselves (e.g. ``(rho_min, alpha_max)``) stay inside.
    """
    rho, alpha = (point.rho, point.alpha) if isinstance(point, FeasiblePoint) else point
    slack = 1 + _ULPS * _EPS
    return (
        alpha > 0
        and abs(rho) <= 1.0
        and bounds.alpha_min ** 2 <= (alpha * rho) ** 2 * slack
        and alpha <= bounds.alpha_max * slack
    )


def feasible_region(bounds: AlphaBounds, steps: int = REGION_STEPS) -> FeasibleRegion:
    """Positive branch of the feasible set sampled at ``steps`` correlations in ``[rho_min, 1]``."""
    rhos = np.linspace(bounds.rho_min, 1.0, steps)
    lo = np.minimum(bounds.alpha_min / rhos, bounds.alpha_max)
    return FeasibleRegion(rhos, lo, np.full(steps, bounds.alpha_max))


def paired_params(
    cov: BlockCovariance,
    factors: RankOneFactors,
    rho: float,
    alpha: float,
    tol: Tolerances = DEFAULT_TOL,
) -> LatentParams:
    """Paired-latent parameters at ``(rho, alpha)``.

    Raises :class:`InfeasiblePoint` naming each of the latent correlation
    matrix, ``sigma_ee`` and ``sigma_zz`` that fails to be PSD.
    """
    alpha = _check_alpha(alpha)
    rho = float(rho)
    if rho == 0.0 or abs(rho) > 1.0:
        raise InfeasiblePoint(
            f"rho = {rho:g}: latent correlation matrix is not PSD" if rho else "rho = 0 leaves b undefined",
            failing=("latent_corr",),
        )
    a = alpha * factors.u
    b = factors.v * factors.d / (alpha * rho)
    ee = cov.xx - np.outer(a, a)
    zz = cov.yy - np.outer(b, b)

    failing, parts = [], []
    for name, m, block in (("sigma_ee", ee, cov.xx), ("sigma_zz", zz, cov.yy)):
        lam = min_eigenvalue(m)
        if lam < -tol.psd * _spectral_radius(block):
            failing.append(name)
            parts.append(f"{name} has minimum eigenvalue {lam:.6g}")
    if failing:
        raise InfeasiblePoint(f"(rho, alpha) = ({rho:g}, {alpha:g}) is infeasible: " + "; ".join(parts), failing)
    return LatentParams(a, b, rho, 0.5 * (ee + ee.T), 0.5 * (zz + zz.T), tol=tol)


def single_latent_params(
    cov: BlockCovariance, factors: RankOneFactors, alpha: float, tol: Tolerances = DEFAULT_TOL
) -> LatentParams:
    try:
        return paired_params(cov, factors, 1.0, alpha, tol)
    except InfeasiblePoint as exc:
        raise InfeasibleAlpha(str(exc), exc.failing) from None


def lemma6_curve(A, C, alphas: Sequence[float], tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """Smallest eigenvalue of ``A - alpha C`` for each alpha.

    Nonincreasing in alpha for symmetric ``A`` and PSD ``C``.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if A.shape != C.shape or A.shape[0] != A.shape[1]:
        raise DimensionMismatch(f"A {A.shape} and C {C.shape} must be square and equal in shape")
    for name, m in (("A", A), ("C", C)):
        if np.max(np.abs(m - m.T)) > tol.sym * max(np.max(np.abs(m)), 1e-300):
            raise NotSymmetric(f"{name} is not symmetric")
    if min_eigenvalue(C) < -tol.psd * max(_spectral_radius(C), 0.0):
        raise NotPSD("C is not positive semidefinite")
    return [min_eigenvalue(A - float(al) * C) for al in alphas]


@dataclass(frozen=True)
class SplitReport:
    A_star_psd: bool
    B_star_psd: bool
    A_star_pd: bool
    B_star_pd: bool
    A_star_min_eig: float
    B_star_min_eig: float


def lemma7_split(cov: BlockCovariance, factors: RankOneFactors, tol: Tolerances = DEFAULT_TOL) -> SplitReport:
    """Definiteness of ``Sigma_XX - u'u'^T`` and ``Sigma_YY - v'v'^T`` for the balanced
    split ``u' = sqrt(d) u``, ``v' = sqrt(d) v``."""
    r = np.sqrt(factors.d)
    a_star = cov.xx - np.outer(r * factors.u, r * factors.u)
    b_star = cov.yy - np.outer(r * factors.v, r * factors.v)
    la, lb = min_eigenvalue(a_star), min_eigenvalue(b_star)
    sa = tol.psd * _spectral_radius(cov.xx)
    sb = tol.psd * _spectral_radius(cov.yy)
    return SplitReport(la >= -sa, lb >= -sb, la > sa, lb > sb, la, lb)
