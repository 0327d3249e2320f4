"""Grunsky coefficient operators and the univalence certificate.

The coefficients alpha_mn are read off the bivariate log-kernel of a
normalized exterior germ f(z) = z + b_0 + b_1/z + ...:

    log (f(z) - f(w)) / (z - w) = - sum_{m,n >= 1} alpha_mn z^-m w^-n.

Writing (f(z) - f(w))/(z - w) = 1 + g(z, w) gives the closed kernel
g[p, q] = -b_{p+q-1}; the principal-branch logarithm is then the Mercator
series evaluated by truncated 2-d convolution.  The weighted matrix
beta_mn = sqrt(mn) alpha_mn is complex symmetric and its largest singular
value is a truncated lower bound for the Grunsky norm, nondecreasing in the
truncation order N.

The largest singular value is computed by power iteration on B*B in the
Takagi form (x -> conj(Bx)/|Bx|), which simultaneously produces a unit
vector whose bilinear form |x^T B x| realizes the bound and therefore serves
as a finite witness whenever the Grunsky inequality is violated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .series import TruncatedExteriorSeries

__all__ = [
    "GrunskyCoefficients",
    "GrunskyMatrix",
    "GrunskyCertificate",
    "grunsky_from_map",
    "grunsky_matrix",
    "grunsky_norm",
    "grunsky_scale",
    "univalence_certificate",
    "truncated_norm_ladder",
    "largest_singular_value",
]

SYMMETRY_TOL = 1e-10
DEFAULT_SLACK = 1e-6
POWER_TOL = 1e-10
POWER_MAXITER = 10_000
POWER_SEED = 20240803


@dataclass(frozen=True)
class GrunskyCoefficients:
    """alpha_mn for 1 <= m, n <= N, stored 0-indexed as alpha[m-1, n-1]."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha, dtype=complex)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise ValueError("GrunskyCoefficients: alpha must be a square matrix, N >= 1")
        if not np.all(np.isfinite(a.view(float))):
            raise ValueError("GrunskyCoefficients: non-finite entries")
        scale = max(1.0, np.abs(a).max())
        if np.abs(a - a.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("GrunskyCoefficients: symmetry violated beyond tolerance")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def N(self) -> int:
        return self.alpha.shape[0]

    def truncate(self, N: int) -> "GrunskyCoefficients":
        if N > self.N:
            raise ValueError(f"cannot extend truncation {self.N} to {N}")
        return GrunskyCoefficients(self.alpha[:N, :N])


@dataclass(frozen=True)
class GrunskyMatrix:
    """beta_mn = sqrt(mn) alpha_mn; complex symmetric, not Hermitian."""

    beta: np.ndarray

    def __post_init__(self):
        bmat = np.asarray(self.beta, dtype=complex)
        if bmat.ndim != 2 or bmat.shape[0] != bmat.shape[1] or bmat.shape[0] < 1:
            raise ValueError("GrunskyMatrix: beta must be square, N >= 1")
        if not np.all(np.isfinite(bmat.view(float))):
            raise ValueError("GrunskyMatrix: non-finite entries")
        scale = max(1.0, np.abs(bmat).max())
        if np.abs(bmat - bmat.T).max() > SYMMETRY_TOL * scale:
            raise ValueError("GrunskyMatrix: symmetry violated beyond tolerance")
        bmat.setflags(write=False)
        object.__setattr__(self, "beta", bmat)

    @property
    def N(self) -> int:
        return self.beta.shape[0]


def grunsky_from_map(f: TruncatedExteriorSeries, N: int) -> GrunskyCoefficients:
    """Extract alpha_mn, m, n <= N from a germ of order K >= 2N.

    The kernel (f(z)-f(w))/(z-w) - 1 has the exact double expansion
    -sum b_{p+q-1} z^-p w^-q, so the log-series needs b_1 .. b_{2N-1}.
    """
    if N < 1:
        raise ValueError("grunsky_from_map: N must be >= 1")
    K = f.order
    if K < 2 * N:
        raise ValueError(
            f"grunsky_from_map: germ order K = {K} insufficient for N = {N}; need K >= {2 * N}")
    G = np.zeros((N + 1, N + 1), dtype=complex)
    idx = np.add.outer(np.arange(1, N + 1), np.arange(1, N + 1)) - 1  # p+q-1
    G[1:, 1:] = -f.coeffs[idx]
    L = np.zeros_like(G)
    P = G.copy()
    L += P
    for j in range(2, N + 1):
        # g^j has order >= j in each variable; beyond j = N nothing survives
        P = fftconvolve(P, G)[: N + 1, : N + 1]
        L += ((-1) ** (j + 1) / j) * P
    alpha = -L[1:, 1:]
    alpha = 0.5 * (alpha + alpha.T)  # symmetrize away convolution roundoff
    return GrunskyCoefficients(alpha)


def grunsky_matrix(coeffs: GrunskyCoefficients) -> GrunskyMatrix:
    m = np.arange(1, coeffs.N + 1, dtype=float)
    return GrunskyMatrix(np.sqrt(np.outer(m, m)) * coeffs.alpha)


def largest_singular_value(B: np.ndarray,
                           tol: float = POWER_TOL,
                           maxiter: int = POWER_MAXITER,
                           seed: int = POWER_SEED,
                           restarts: int = 3) -> tuple[float, np.ndarray, complex]:
    """Largest singular value of a complex symmetric matrix by power iteration.

    Iterates x <- conj(Bx)/||Bx|| (two steps equal one power-method step on
    B*B).  Returns (sigma, x, x^T B x); for a simple top singular value the
    returned vector is a Takagi vector, so |x^T B x| converges to sigma.
    Deterministic for a fixed seed.
    """
    B = np.asarray(B, dtype=complex)
    n = B.shape[0]
    rng = np.random.default_rng(seed)
    best_sigma = 0.0
    best_x = np.zeros(n, dtype=complex)
    best_form = 0.0 + 0.0j
    for _ in range(max(1, restarts)):
        x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        x /= np.linalg.norm(x)
        sigma_prev = -1.0
        for _ in range(maxiter):
            y = B @ x
            sigma = float(np.linalg.norm(y))
            if sigma == 0.0:
                break
            x = np.conj(y) / sigma
            if abs(sigma - sigma_prev) <= tol * max(sigma, 1e-300):
                break
            sigma_prev = sigma
        form = complex(x @ (B @ x))
        if sigma > best_sigma or (sigma == best_sigma and abs(form) > abs(best_form)):
            best_sigma, best_x, best_form = sigma, x, form
    return best_sigma, best_x, best_form


def grunsky_norm(B: GrunskyMatrix | np.ndarray, **kwargs) -> float:
    """Operator norm of the truncated bilinear form (largest singular value).

    A lower bound for the Grunsky norm of the underlying map, nondecreasing
    in the truncation order N.
    """
    beta = B.beta if isinstance(B, GrunskyMatrix) else np.asarray(B, dtype=complex)
    sigma, _, _ = largest_singular_value(beta, **kwargs)
    return sigma


def truncated_norm_ladder(coeffs: GrunskyCoefficients, orders) -> dict[int, float]:
    """grunsky_norm of each principal truncation; monotone nondecreasing."""
    out = {}
    for N in orders:
        if not 1 <= N <= coeffs.N:
            raise ValueError(f"ladder order {N} outside 1..{coeffs.N}")
        out[N] = grunsky_norm(grunsky_matrix(coeffs.truncate(N)))
    return out


@dataclass(frozen=True)
class GrunskyCertificate:
    verdict: str                    # "NonUnivalent" | "Inconclusive"
    sigma: float
    N: int
    slack: float
    witness: np.ndarray | None = None
    witness_form: complex | None = None


def univalence_certificate(B: GrunskyMatrix, slack: float = DEFAULT_SLACK,
                           **kwargs) -> GrunskyCertificate:
    """Grunsky-inequality test on the truncated matrix.

    NonUnivalent requires sigma > 1 + slack together with a unit vector whose
    bilinear form strictly exceeds 1 (the finite witness).  Anything else is
    Inconclusive: truncation only lower-bounds the Grunsky norm, so no
    univalence can ever be certified from below.
    """
    if slack <= 0:
        raise ValueError("univalence_certificate: slack must be positive")
    sigma, x, form = largest_singular_value(B.beta, **kwargs)
    if sigma > 1.0 + slack and abs(form) > 1.0:
        return GrunskyCertificate("NonUnivalent", sigma, B.N, slack, x, form)
    if sigma > 1.0 + slack:
        # Takagi alignment failed (degenerate top value); try harder restarts
        sigma2, x2, form2 = largest_singular_value(B.beta, restarts=12, seed=POWER_SEED + 1)
        if abs(form2) > 1.0:
            return GrunskyCertificate("NonUnivalent", sigma2, B.N, slack, x2, form2)
    return GrunskyCertificate("Inconclusive", sigma, B.N, slack)


def grunsky_scale(coeffs: GrunskyCoefficients, s: complex) -> GrunskyCoefficients:
    """Coefficients of the scaling homotopy: alpha_mn -> alpha_mn s^{m+n}.

    Exact consequence of b_k -> b_k s^{k+1} on the log-kernel; must agree
    coefficientwise with recomputation from the scaled germ.
    """
    s = complex(s)
    if abs(s) > 1 + 1e-15:
        raise ValueError(f"grunsky_scale: |s| = {abs(s)} exceeds 1")
    m = np.arange(1, coeffs.N + 1)
    powers = s ** np.add.outer(m, m)
    return GrunskyCoefficients(coeffs.alpha * powers)
