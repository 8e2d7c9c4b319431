"""Sampling from latent parameterizations and moment-based estimation.

Random numbers come from the Philox4x32-10 counter-based generator
(``numpy.random.Philox``).  Raw 64-bit outputs are mapped to uniforms on the
open unit interval and then to standard normals by the inverse normal CDF,
so a seed fixes every draw without any rejection step.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtri

from .covariance import (
    DEFAULT_TOL,
    AlphaBounds,
    BlockCovariance,
    LatentParams,
    RankOneFactors,
    Tolerances,
    is_psd,
    validate,
)
from .errors import DegenerateBlock, IndexOutOfRange, TooFewRows, WrongDimensions
from .parameterization import alpha_bounds, decompose, single_latent_params

RANK_ONE_WARN_RATIO = 0.2


class RankOneInadequate(UserWarning):
    """The cross block is far from rank one (second/first singular value too large)."""


@dataclass(frozen=True)
class DataMatrix:
    """``n`` observations of ``X1..Xp, Y1..Yq``; ``latents`` holds ``(xi, omega)`` when sampled."""

    values: np.ndarray
    p: int
    q: int
    latents: np.ndarray | None = field(default=None, compare=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.ndim != 2 or vals.shape[1] != self.p + self.q or vals.shape[0] < 1:
            raise WrongDimensions(f"expected an n x {self.p + self.q} array with n >= 1, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def columns(self) -> list[str]:
        return [f"X{i}" for i in range(1, self.p + 1)] + [f"Y{j}" for j in range(1, self.q + 1)]


def standard_normals(seed: int, shape) -> np.ndarray:
    """Deterministic N(0, 1) draws from Philox via the inverse CDF."""
    bits = np.random.Philox(seed).random_raw(int(np.prod(shape)))
    u = ((bits >> np.uint64(11)).astype(float) + 0.5) * 2.0 ** -53
    return ndtri(u).reshape(shape)


def _psd_root(m: np.ndarray) -> np.ndarray:
    # eigen factor, not Cholesky: boundary parameterizations are singular
    lam, vec = np.linalg.eigh(m)
    return vec * np.sqrt(np.clip(lam, 0.0, None))


def sample_latent(params: LatentParams, n: int, seed: int) -> DataMatrix:
    p, q, rho = params.p, params.q, params.rho
    z = standard_normals(seed, (n, 2 + p + q))
    xi = z[:, 0]
    omega = rho * xi + np.sqrt(max(0.0, 1.0 - rho * rho)) * z[:, 1]
    eps = z[:, 2 : 2 + p] @ _psd_root(params.sigma_ee).T
    zeta = z[:, 2 + p :] @ _psd_root(params.sigma_zz).T
    x = np.outer(xi, params.a) + eps
    y = np.outer(omega, params.b) + zeta
    return DataMatrix(np.hstack([x, y]), p, q, latents=np.column_stack([xi, omega]))


def empirical_cov(data: DataMatrix) -> BlockCovariance:
    """Centered sample covariance with ``n - 1`` normalization (no PSD check)."""
    if data.n < 2:
        raise TooFewRows(f"need at least 2 rows, got {data.n}")
    s = np.cov(data.values, rowvar=False, ddof=1)
    return validate(np.atleast_2d(s), data.p, data.q, check_psd=False)


def rank_one_project(cov: BlockCovariance, tol: Tolerances = DEFAULT_TOL) -> BlockCovariance:
    """Replace the cross block by its best rank-one approximation.

    Within-block covariances are untouched.  The joint matrix may stop being
    PSD; that is reported through ``psd_violation`` and not repaired.
    """
    U, s, Vt = np.linalg.svd(cov.xy)
    sigma = np.array(cov.sigma)
    cross = s[0] * np.outer(U[:, 0], Vt[0])
    sigma[: cov.p, cov.p :] = cross
    sigma[cov.p :, : cov.p] = cross.T
    return BlockCovariance(cov.p, cov.q, sigma, psd_violation=not is_psd(sigma, tol.psd))


@dataclass(frozen=True)
class TetradReport:
    """``lhs = Cov(X_i, X_k) Cov(Y_j, Y_l)``, ``rhs = Cov(X_i, Y_j) Cov(X_k, Y_l)``."""

    indices: tuple
    lhs: float
    rhs: float
    residual: float


def tetrad_residual(cov: BlockCovariance, i: int, k: int, j: int, l: int) -> TetradReport:
    """Tetrad difference for ``X_i, X_k, Y_j, Y_l``; indices are 1-based like the labels."""
    if cov.p < 2 or cov.q < 2:
        raise DegenerateBlock(f"tetrads need p > 1 and q > 1, got p={cov.p}, q={cov.q}")
    if i == k or j == l:
        raise DegenerateBlock("need i != k and j != l")
    for name, idx, hi in (("i", i, cov.p), ("k", k, cov.p), ("j", j, cov.q), ("l", l, cov.q)):
        if not 1 <= idx <= hi:
            raise IndexOutOfRange(f"{name}={idx} outside 1..{hi}")
    xx, yy, xy = cov.xx, cov.yy, cov.xy
    lhs = float(xx[i - 1, k - 1] * yy[j - 1, l - 1])
    rhs = float(xy[i - 1, j - 1] * xy[k - 1, l - 1])
    return TetradReport((i, k, j, l), lhs, rhs, lhs - rhs)


def all_tetrads(cov: BlockCovariance) -> list[TetradReport]:
    return [
        tetrad_residual(cov, i, k, j, l)
        for i in range(1, cov.p + 1)
        for k in range(i + 1, cov.p + 1)
        for j in range(1, cov.q + 1)
        for l in range(1, cov.q + 1)
        if j != l
    ]


def marginal_independence_check(cov: BlockCovariance, block: str = "X") -> float:
    """Largest absolute within-block off-diagonal covariance (0 for a single variable)."""
    if block not in ("X", "Y"):
        raise ValueError(f"block must be 'X' or 'Y', got {block!r}")
    m = cov.xx if block == "X" else cov.yy
    if m.shape[0] < 2:
        return 0.0
    off = m[~np.eye(m.shape[0], dtype=bool)]
    return float(np.max(np.abs(off)))


@dataclass(frozen=True)
class FitReport:
    factors: RankOneFactors
    bounds: AlphaBounds
    alpha: float
    params: LatentParams
    sv_ratio: float
    psd_violation: bool
    diagnostics: tuple = ()

    def to_json(self) -> dict:
        return {
            "u": self.factors.u.tolist(),
            "v": self.factors.v.tolist(),
            "d": self.factors.d,
            "alpha_min": self.bounds.alpha_min,
            "alpha_max": self.bounds.alpha_max,
            "rho_min": self.bounds.rho_min,
            "alpha": self.alpha,
            "params": self.params.to_json(),
            "sv_ratio": self.sv_ratio,
            "psd_violation": self.psd_violation,
            "diagnostics": list(self.diagnostics),
        }


def fit_covariance(cov: BlockCovariance, tol: Tolerances = DEFAULT_TOL) -> FitReport:
    """Project to rank one, bound alpha and pick the single-latent fit at the interval midpoint."""
    diagnostics = []
    ratio = cov.sv_ratio
    if ratio > RANK_ONE_WARN_RATIO:
        msg = f"cross block is far from rank one: singular value ratio {ratio:.3g} > {RANK_ONE_WARN_RATIO}"
        warnings.warn(msg, RankOneInadequate, stacklevel=2)
        diagnostics.append(msg)
    projected = rank_one_project(cov, tol)
    if projected.psd_violation:
        diagnostics.append("rank-one projection is not positive semidefinite")
    factors = decompose(projected, tol)
    bounds = alpha_bounds(projected, factors, tol)
    alpha = 0.5 * (bounds.alpha_min + bounds.alpha_max)
    params = single_latent_params(projected, factors, alpha, tol)
    return FitReport(factors, bounds, alpha, params, ratio, projected.psd_violation, tuple(diagnostics))


def fit(data: DataMatrix, p: int | None = None, tol: Tolerances = DEFAULT_TOL) -> FitReport:
    if p is not None and p != data.p:
        data = DataMatrix(data.values, p, data.values.shape[1] - p)
    if data.n < data.p + data.q + 1:
        raise TooFewRows(f"need at least p + q + 1 = {data.p + data.q + 1} rows, got {data.n}")
    return fit_covariance(empirical_cov(data), tol)
