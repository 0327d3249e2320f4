"""Truncated power-series arithmetic over complex coefficients.

Two containers are provided:

* :class:`TruncatedTaylorSeries` -- finitely many coefficients c_0..c_K in a
  declared expansion variable (``"z"`` or ``"1/z"``).  Used for log-kernels,
  Schwarzian expansions and everything downstream.
* :class:`TruncatedExteriorSeries` -- a normalized map germ at infinity,
  f(z) = z + b_0 + b_1/z + ... + b_K/z^K, with the leading coefficient pinned
  to 1.

All values are immutable after construction and every operation returns a new
instance, so they are safe to share across threads.  The truncation order is
part of the value: binary operations return the minimum order of their
operands, never silently more.  Non-finite coefficients are rejected at
construction time instead of being propagated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "TruncatedTaylorSeries",
    "TruncatedExteriorSeries",
    "series_mul",
    "series_log1p",
    "series_derivative",
    "scale_homotopy",
]


def _as_coeffs(values, what: str) -> np.ndarray:
    c = np.asarray(values, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError(f"{what}: expected a nonempty 1-d coefficient array")
    if not np.all(np.isfinite(c.view(float))):
        bad = int(np.flatnonzero(~np.isfinite(c))[0])
        raise ValueError(f"{what}: non-finite coefficient at index {bad}")
    c.setflags(write=False)
    return c


@dataclass(frozen=True)
class TruncatedTaylorSeries:
    """Coefficients c_0..c_K of a truncated expansion in ``var``."""

    coeffs: np.ndarray
    var: str = "z"

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs, "TruncatedTaylorSeries"))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> complex:
        return complex(self.coeffs[k]) if 0 <= k <= self.order else 0.0 + 0.0j

    def truncate(self, order: int) -> "TruncatedTaylorSeries":
        if order >= self.order:
            return self
        return TruncatedTaylorSeries(self.coeffs[: order + 1], self.var)

    def __add__(self, other: "TruncatedTaylorSeries") -> "TruncatedTaylorSeries":
        _check_var(self, other)
        K = min(self.order, other.order)
        return TruncatedTaylorSeries(self.coeffs[: K + 1] + other.coeffs[: K + 1], self.var)

    def __sub__(self, other: "TruncatedTaylorSeries") -> "TruncatedTaylorSeries":
        _check_var(self, other)
        K = min(self.order, other.order)
        return TruncatedTaylorSeries(self.coeffs[: K + 1] - other.coeffs[: K + 1], self.var)

    def __mul__(self, other):
        if isinstance(other, TruncatedTaylorSeries):
            return series_mul(self, other)
        return TruncatedTaylorSeries(self.coeffs * complex(other), self.var)

    __rmul__ = __mul__

    def evaluate(self, z):
        """Evaluate at points ``z`` (the ``var`` tag decides z vs 1/z)."""
        z = np.asarray(z, dtype=complex)
        x = 1.0 / z if self.var == "1/z" else z
        acc = np.zeros_like(x)
        for c in self.coeffs[::-1]:
            acc = acc * x + c
        return acc


def _check_var(a: TruncatedTaylorSeries, b: TruncatedTaylorSeries):
    if a.var != b.var:
        raise ValueError(f"incompatible expansion variables: {a.var!r} vs {b.var!r}")


@dataclass(frozen=True)
class TruncatedExteriorSeries:
    """Normalized germ f(z) = z + b_0 + b_1 z^-1 + ... + b_K z^-K.

    ``coeffs`` holds b_0..b_K; the leading coefficient b_{-1} = 1 is implicit
    and not stored.  K must be at least 1.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = _as_coeffs(self.coeffs, "TruncatedExteriorSeries")
        if len(c) < 2:
            raise ValueError("TruncatedExteriorSeries: truncation order K must be >= 1")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def b(self) -> np.ndarray:
        """Coefficients b_0..b_K (read-only view)."""
        return self.coeffs

    def evaluate(self, z):
        z = np.asarray(z, dtype=complex)
        u = 1.0 / z
        acc = np.zeros_like(u)
        for c in self.coeffs[:0:-1]:
            acc = (acc + c) * u
        return z + self.coeffs[0] + acc

    def derivative_values(self, z):
        """f'(z) = 1 - sum k b_k z^{-k-1}."""
        z = np.asarray(z, dtype=complex)
        u = 1.0 / z
        acc = np.zeros_like(u)
        for k in range(self.order, 0, -1):
            acc = (acc + k * self.coeffs[k]) * u
        return 1.0 - acc * u


def series_mul(a: TruncatedTaylorSeries, b: TruncatedTaylorSeries) -> TruncatedTaylorSeries:
    """Cauchy product truncated at min(K_a, K_b)."""
    _check_var(a, b)
    K = min(a.order, b.order)
    full = np.convolve(a.coeffs[: K + 1], b.coeffs[: K + 1])
    return TruncatedTaylorSeries(full[: K + 1], a.var)


def series_log1p(g: TruncatedTaylorSeries) -> TruncatedTaylorSeries:
    """Series of log(1 + g) to order K; g must have zero constant term.

    Principal branch; since g(0) = 0 the branch is unambiguous.
    """
    if g[0] != 0:
        raise ValueError(f"series_log1p: g has nonzero constant term {g[0]}")
    K = g.order
    out = np.zeros(K + 1, dtype=complex)
    # g^j / j with alternating sign; g^j starts at order j, so j <= K terms
    power = g.coeffs.copy()
    out += power
    for j in range(2, K + 1):
        power = np.convolve(power, g.coeffs)[: K + 1]
        out += ((-1) ** (j + 1) / j) * power
    return TruncatedTaylorSeries(out, g.var)


def series_derivative(a: TruncatedTaylorSeries) -> TruncatedTaylorSeries:
    """d/dz, honoring the expansion variable.

    For var "z": sum c_k z^k -> sum k c_k z^{k-1}, order K-1.
    For var "1/z" (u = 1/z): d/dz sum c_k u^k = -sum k c_k u^{k+1}, order K+1;
    all coefficients are exact, no information is lost.
    """
    c = a.coeffs
    if a.var == "1/z":
        k = np.arange(len(c))
        out = np.concatenate(([0.0, 0.0], -(k * c)[1:]))
        return TruncatedTaylorSeries(out, a.var)
    k = np.arange(1, len(c))
    out = c[1:] * k
    if out.size == 0:
        out = np.zeros(1, dtype=complex)
    return TruncatedTaylorSeries(out, a.var)


def scale_homotopy(f: TruncatedExteriorSeries, s: complex) -> TruncatedExteriorSeries:
    """The scaling homotopy F_s(z) = s F(z/s): b_k -> b_k s^{k+1}.

    Requires |s| <= 1; s = 1 is the identity and s = 0 collapses to z.
    """
    s = complex(s)
    if abs(s) > 1 + 1e-15:
        raise ValueError(f"scale_homotopy: |s| = {abs(s)} exceeds 1")
    powers = s ** (np.arange(len(f.coeffs)) + 1)
    return TruncatedExteriorSeries(f.coeffs * powers)


def reciprocal_one_plus(g: TruncatedTaylorSeries) -> TruncatedTaylorSeries:
    """Series of 1/(1+g) to order K; g must have zero constant term."""
    if g[0] != 0:
        raise ValueError("reciprocal_one_plus: g has nonzero constant term")
    K = g.order
    out = np.zeros(K + 1, dtype=complex)
    out[0] = 1.0
    for k in range(1, K + 1):
        # (1+g) * out = 1, coefficient k: out[k] + sum_{j=1..k} g[j] out[k-j] = 0
        out[k] = -np.dot(g.coeffs[1 : k + 1], out[k - 1 :: -1][: k])
    return TruncatedTaylorSeries(out, g.var)
