"""Closed-form exterior conformal maps for symmetric polygon families.

The exterior map of the regular n-gon with prevertices at the n-th roots of
unity is the normalized antiderivative of the Schwarz-Christoffel density

    f'(z) = (1 - z^-n)^(2/n),      f(z) = z + sum_k b_k z^-k,

whose binomial expansion gives b_{nj-1} = (-1)^{j+1} C(2/n, j) / (nj - 1).
At a prevertex a the map behaves like (z - a)^beta with beta = 1 + 2/n, the
opening of the polygon corner seen from the exterior domain; consequently the
Schwarzian has double poles with coefficient

    c_j = (1 - beta_j^2) / 2,      beta_j = 2 - alpha_j,

where pi*alpha_j is the interior angle of the polygon.  That angle-to-
coefficient relation is classical Schwarzian theory, imported rather than
derived here, and it is cross-checked in the test suite against the
Schwarzian of the closed-form germ.  The single reflection coefficient
value for tangent-circle polygons, 1 - min(alpha_j), is exposed as
:func:`werner_value`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .schwarzian import RationalSchwarzian
from .series import TruncatedExteriorSeries

__all__ = [
    "PolygonSpec",
    "regular_ngon_exterior_map",
    "werner_value",
    "circular_polygon_schwarzian",
]

CLOSURE_TOL = 1e-10
DECAY_VALIDATION_TOL = 1e-12


@dataclass(frozen=True)
class PolygonSpec:
    """A polygon family prescription.

    ``family`` is "regular-ngon" or "circular-arc".  Interior angles are
    pi * alphas[j] with alphas in [0, 2); for a regular n-gon they are all
    (n-2)/n and the prevertices are the n-th roots of unity.  Closed
    rectilinear polygons must satisfy the turning condition
    sum (1 - alpha_j) = 2.
    """

    family: str
    n: int
    alphas: np.ndarray = field(default=None)
    prevertices: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("PolygonSpec: need n >= 2")
        if self.family == "regular-ngon":
            alphas = np.full(self.n, (self.n - 2) / self.n)
            prev = np.exp(2j * np.pi * np.arange(self.n) / self.n)
            object.__setattr__(self, "alphas", alphas)
            object.__setattr__(self, "prevertices", prev)
        elif self.family == "circular-arc":
            if self.alphas is None or self.prevertices is None:
                raise ValueError("circular-arc spec needs explicit alphas and prevertices")
            alphas = np.asarray(self.alphas, dtype=float)
            prev = np.asarray(self.prevertices, dtype=complex)
            if len(alphas) != self.n or len(prev) != self.n:
                raise ValueError("PolygonSpec: angle/prevertex count mismatch with n")
            if np.any(alphas < 0) or np.any(alphas >= 2):
                raise ValueError("PolygonSpec: interior angle parameters must lie in [0, 2)")
            if np.abs(np.abs(prev) - 1).max() > 1e-12:
                raise ValueError("PolygonSpec: prevertices must lie on the unit circle")
            object.__setattr__(self, "alphas", alphas)
            object.__setattr__(self, "prevertices", prev)
        else:
            raise ValueError(f"unknown polygon family {self.family!r}")
        self.alphas.setflags(write=False)
        self.prevertices.setflags(write=False)

    def validate_rectilinear_closure(self, tol: float = CLOSURE_TOL):
        total = float(np.sum(1.0 - self.alphas))
        if abs(total - 2.0) > tol:
            raise ValueError(
                f"PolygonSpec: exterior turning sum (1 - alpha_j) = {total}, expected 2")


def _binom(a: float, j: int) -> float:
    out = 1.0
    for i in range(j):
        out *= (a - i) / (i + 1)
    return out


def regular_ngon_exterior_map(n: int, K: int) -> TruncatedExteriorSeries:
    """Normalized germ of the regular n-gon exterior map, to order K.

    Antiderivative of (1 - z^-n)^(2/n) with zero constant term; coefficients
    vanish except at indices nj - 1 (rotation symmetry of the family).
    n = 2 degenerates to the slit map z + 1/z.
    """
    if n < 2:
        raise ValueError("regular_ngon_exterior_map: need n >= 2")
    if K < 2 * n:
        raise ValueError(f"regular_ngon_exterior_map: need K >= 2n = {2 * n}")
    b = np.zeros(K + 1, dtype=complex)
    j = 1
    while n * j - 1 <= K:
        b[n * j - 1] = (-1) ** (j + 1) * _binom(2.0 / n, j) / (n * j - 1)
        j += 1
    return TruncatedExteriorSeries(b)


def werner_value(spec: PolygonSpec) -> float:
    """Common Grunsky/Teichmueller norm value 1 - min_j alpha_j."""
    return float(1.0 - np.min(spec.alphas))


def circular_polygon_schwarzian(spec: PolygonSpec,
                                accessory: np.ndarray | None = None) -> RationalSchwarzian:
    """Schwarzian of the exterior polygon map as rational circle-pole data.

    Double-pole coefficients come from the corner exponents seen by the
    exterior domain: c_j = (1 - (2 - alpha_j)^2)/2.  Residues c'_j are the
    accessory parameters; for the regular family symmetry forces
    c'_j = -c_j * conj(a_j), and for other specs they must be supplied.
    The three O(z^-4) decay constraints are validated, never assumed.
    """
    a = spec.prevertices
    beta = 2.0 - spec.alphas
    c = (1.0 - beta ** 2) / 2.0
    if spec.family == "regular-ngon":
        spec.validate_rectilinear_closure()
        cprime = -c * np.conj(a)
    else:
        if accessory is None:
            raise ValueError("circular-arc polygon needs explicit accessory residues c'_j")
        cprime = np.asarray(accessory, dtype=complex)
        if cprime.shape != a.shape:
            raise ValueError("accessory residue count mismatch")
    r = RationalSchwarzian(poles=a, c=c.astype(complex), cprime=cprime)
    residuals = [abs(s) for s in r.decay_residuals()]
    if max(residuals) > DECAY_VALIDATION_TOL * max(1.0, float(np.abs(c).max())):
        raise ValueError(
            "circular_polygon_schwarzian: decay constraints unsatisfied, residuals "
            f"{residuals}")
    return r
