"""Block covariance matrices, rank-one factors and latent parameter sets.

All objects here are frozen dataclasses wrapping read-only numpy arrays.  The
only way to obtain a checked :class:`BlockCovariance` is :func:`validate`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotPSD, NotSymmetric, RankTooHigh, WrongDimensions


@dataclass(frozen=True)
class Tolerances:
    """Floating point slack used by every check in the package.

    ``sym``, ``psd`` and ``rank`` are relative to the magnitude of the matrix
    being checked; ``recon`` is absolute and meant for unit-scale inputs.
    """

    sym: float = 1e-10
    psd: float = 1e-9
    rank: float = 1e-8
    recon: float = 1e-9
    zero_floor: float = 1e-12


DEFAULT_TOL = Tolerances()


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=float)
    out.setflags(write=False)
    return out


def min_eigenvalue(m: np.ndarray) -> float:
    """Smallest eigenvalue of a symmetric matrix (full decomposition)."""
    m = np.asarray(m, dtype=float)
    if m.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(m)[0])


def psd_slack(m: np.ndarray, tol: float, scale: float | None = None) -> float:
    if scale is None:
        scale = float(np.max(np.abs(np.linalg.eigvalsh(m)))) if m.size else 0.0
    return tol * scale


def is_psd(m: np.ndarray, tol: float = DEFAULT_TOL.psd, scale: float | None = None) -> bool:
    """True when ``min eig(m) >= -tol * scale``; ``scale`` defaults to the spectral radius."""
    m = np.asarray(m, dtype=float)
    return min_eigenvalue(m) >= -psd_slack(m, tol, scale)


def singular_value_ratio(c: np.ndarray) -> float:
    """Second over first singular value; nan for a zero block, 0 for a vector block."""
    s = np.linalg.svd(np.asarray(c, dtype=float), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return float("nan")
    if s.size == 1:
        return 0.0
    return float(s[1] / s[0])


@dataclass(frozen=True)
class BlockCovariance:
    """A ``(p+q) x (p+q)`` covariance split into X and Y blocks.

    ``psd_violation`` is only ever set by estimation steps that may leave
    the joint matrix indefinite (see ``simulation.rank_one_project``).
    """

    p: int
    q: int
    sigma: np.ndarray
    psd_violation: bool = False
    sv_ratio: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "sigma", _frozen(self.sigma))
        if self.p < 1 or self.q < 1 or self.sigma.shape != (self.p + self.q, self.p + self.q):
            raise WrongDimensions(
                f"expected a {self.p + self.q}x{self.p + self.q} matrix for p={self.p}, q={self.q}, "
                f"got shape {self.sigma.shape}"
            )
        object.__setattr__(self, "sv_ratio", singular_value_ratio(self.xy))

    @property
    def xx(self) -> np.ndarray:
        return self.sigma[: self.p, : self.p]

    @property
    def xy(self) -> np.ndarray:
        return self.sigma[: self.p, self.p :]

    @property
    def yx(self) -> np.ndarray:
        return self.sigma[self.p :, : self.p]

    @property
    def yy(self) -> np.ndarray:
        return self.sigma[self.p :, self.p :]

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.sigma)))

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "sigma": self.sigma.tolist()}


def validate(
    sigma,
    p: int,
    q: int,
    tol: Tolerances = DEFAULT_TOL,
    strict_rank: bool = False,
    check_psd: bool = True,
) -> BlockCovariance:
    """Check ``sigma`` and wrap it as a :class:`BlockCovariance`.

    The stored matrix is the symmetrized input.  With ``strict_rank`` the
    cross block must have rank exactly one, otherwise :class:`RankTooHigh`
    is raised (this includes the rank-zero case).
    """
    try:
        s = np.array(sigma, dtype=float)
    except (TypeError, ValueError) as exc:
        raise WrongDimensions(f"sigma is not a numeric matrix: {exc}") from None
    n = p + q
    if p < 1 or q < 1 or s.ndim != 2 or s.shape != (n, n):
        raise WrongDimensions(f"expected a {n}x{n} matrix for p={p}, q={q}, got shape {s.shape}")
    if not np.all(np.isfinite(s)):
        raise WrongDimensions("sigma contains non-finite entries")

    big = float(np.max(np.abs(s)))
    asym = float(np.max(np.abs(s - s.T)))
    if asym > tol.sym * big:
        raise NotSymmetric(f"max |s_ij - s_ji| = {asym:.3g} exceeds {tol.sym:g} * {big:.3g}")
    s = 0.5 * (s + s.T)

    if check_psd:
        eig = np.linalg.eigvalsh(s)
        if eig[0] < -tol.psd * max(eig[-1], 0.0):
            raise NotPSD(f"minimum eigenvalue {eig[0]:.6g} (largest {eig[-1]:.6g})")

    cov = BlockCovariance(p, q, s)
    if strict_rank:
        sv = np.linalg.svd(cov.xy, compute_uv=False)
        if sv[0] <= tol.zero_floor * big:
            raise RankTooHigh("cross-covariance block is zero; rank one is required")
        if sv.size > 1 and sv[1] > tol.rank * sv[0]:
            raise RankTooHigh(f"cross-covariance block is not rank one (sv ratio {sv[1] / sv[0]:.3g})")
    return cov


@dataclass(frozen=True)
class RankOneFactors:
    """``Sigma_XY = d * u v^T`` with unit ``u``, ``v`` and ``d > 0``."""

    u: np.ndarray
    v: np.ndarray
    d: float

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u).ravel())
        object.__setattr__(self, "v", _frozen(self.v).ravel())
        object.__setattr__(self, "d", float(self.d))
        if not self.d > 0:
            raise ValueError("d must be positive")

    @property
    def cross(self) -> np.ndarray:
        return self.d * np.outer(self.u, self.v)


@dataclass(frozen=True)
class AlphaBounds:
    """Feasible interval ``[alpha_min, alpha_max]`` for the scale of ``a``.

    ``flat_min``/``flat_max`` flag a zero plateau of the eigenvalue curve at
    the returned root; the root is then the extreme end of that plateau.
    """

    alpha_min: float
    alpha_max: float
    flat_min: bool = False
    flat_max: bool = False

    @property
    def rho_min(self) -> float:
        return self.alpha_min / self.alpha_max


@dataclass(frozen=True)
class LatentParams:
    """Saliences, latent correlation and error covariances.

    ``rho = 1`` is the single-latent model.
    """

    a: np.ndarray
    b: np.ndarray
    rho: float
    sigma_ee: np.ndarray
    sigma_zz: np.ndarray
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    def __post_init__(self):
        a = _frozen(self.a).ravel()
        b = _frozen(self.b).ravel()
        ee = _frozen(np.atleast_2d(self.sigma_ee))
        zz = _frozen(np.atleast_2d(self.sigma_zz))
        for name, val in (("a", a), ("b", b), ("sigma_ee", ee), ("sigma_zz", zz)):
            object.__setattr__(self, name, val)
        object.__setattr__(self, "rho", float(self.rho))

        if ee.shape != (a.size, a.size) or zz.shape != (b.size, b.size):
            raise DimensionMismatch(
                f"sigma_ee {ee.shape} / sigma_zz {zz.shape} do not match a ({a.size}) / b ({b.size})"
            )
        if not abs(self.rho) <= 1.0:
            raise ValueError(f"|rho| must be <= 1, got {self.rho}")
        for name, m in (("sigma_ee", ee), ("sigma_zz", zz)):
            if np.max(np.abs(m - m.T)) > self.tol.sym * max(np.max(np.abs(m)), 1e-300):
                raise NotSymmetric(f"{name} is not symmetric")
        # reference scale: the observed block the error covariance came from
        scale_x = float(a @ a) + float(np.max(np.abs(np.linalg.eigvalsh(ee))))
        scale_y = float(b @ b) + float(np.max(np.abs(np.linalg.eigvalsh(zz))))
        if not is_psd(ee, self.tol.psd, scale_x):
            raise NotPSD(f"sigma_ee has minimum eigenvalue {min_eigenvalue(ee):.6g}")
        if not is_psd(zz, self.tol.psd, scale_y):
            raise NotPSD(f"sigma_zz has minimum eigenvalue {min_eigenvalue(zz):.6g}")

    @property
    def p(self) -> int:
        return self.a.size

    @property
    def q(self) -> int:
        return self.b.size

    def to_json(self) -> dict:
        return {
            "a": self.a.tolist(),
            "b": self.b.tolist(),
            "rho": self.rho,
            "sigma_ee": self.sigma_ee.tolist(),
            "sigma_zz": self.sigma_zz.tolist(),
        }

    @classmethod
    def from_json(cls, doc: dict) -> "LatentParams":
        return cls(doc["a"], doc["b"], doc["rho"], doc["sigma_ee"], doc["sigma_zz"])


@dataclass(frozen=True)
class ReconstructionParts:
    """``Sigma = Q + E``.

    ``w`` stacks ``a`` over ``b``; ``Q`` equals ``w w^T`` with its
    off-diagonal blocks multiplied by ``rho``; ``E = diag(sigma_ee, sigma_zz)``.
    """

    w: np.ndarray
    Q: np.ndarray
    E: np.ndarray


def reconstruct(params: LatentParams, p: int | None = None, q: int | None = None):
    """Observed covariance induced by a latent parameter set.

    Returns ``(BlockCovariance, ReconstructionParts)``.
    """
    p = params.p if p is None else p
    q = params.q if q is None else q
    if (p, q) != (params.p, params.q):
        raise DimensionMismatch(f"params have p={params.p}, q={params.q}; asked for p={p}, q={q}")
    a, b, rho = params.a, params.b, params.rho

    E = np.zeros((p + q, p + q))
    E[:p, :p] = params.sigma_ee
    E[p:, p:] = params.sigma_zz
    Q = np.empty_like(E)
    Q[:p, :p] = np.outer(a, a)
    Q[p:, p:] = np.outer(b, b)
    Q[:p, p:] = rho * np.outer(a, b)
    Q[p:, :p] = Q[:p, p:].T
    cov = validate(Q + E, p, q, params.tol)
    return cov, ReconstructionParts(_frozen(np.concatenate([a, b])), _frozen(Q), _frozen(E))
