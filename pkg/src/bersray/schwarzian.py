"""Schwarzian derivatives and hyperbolic sup-norms on the disk and its exterior.

The weighted sup-norm used throughout is

    interior disk:  ||phi|| = sup_{|z|<1} (1 - |z|^2)^2 |phi(z)|
    exterior disk:  ||phi|| = sup_{|z|>1} (|z|^2 - 1)^2 |phi(z)|

The two conventions are reflection-symmetric: the exterior norm of phi equals
the interior norm of z^{-4} phi(1/z), which is how the exterior evaluator is
implemented.  With this weight the Ahlfors-Weill sufficiency radius is 2 and
the classical necessity cutoff is 6; those two constants drive the gate
classification in :func:`univalence_gates`.

For rational functions with double poles on the unit circle the norm has a
closed boundary form: only the second-order pole coefficients survive the
weighted limit, giving 4 * max_j |c_j|.  :func:`bnorm_rational_boundary`
implements it and :func:`bnorm_grid` provides the independent grid
maximization it is tested against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import (
    TruncatedExteriorSeries,
    TruncatedTaylorSeries,
    series_derivative,
    series_log1p,
    series_mul,
)

__all__ = [
    "RationalSchwarzian",
    "HyperbolicNorm",
    "GridConfig",
    "schwarzian_of_series",
    "bnorm_grid",
    "bnorm_rational_boundary",
    "univalence_gates",
    "INSIDE_AW_BALL",
    "INDETERMINATE_BAND",
    "CERTIFIED_NONUNIVALENT",
]

# gate classification labels
INSIDE_AW_BALL = "inside-AW-ball"
INDETERMINATE_BAND = "indeterminate-band"
CERTIFIED_NONUNIVALENT = "certified-nonunivalent-by-norm"

AW_RADIUS = 2.0          # sufficiency ball radius for the weight above
NECESSITY_CUTOFF = 6.0   # classical necessary bound; sanity cutoff only

POLE_ON_CIRCLE_TOL = 1e-12
DECAY_CONSTRAINT_TOL = 1e-10


@dataclass(frozen=True)
class RationalSchwarzian:
    """r(z) = sum_j c_j/(z - a_j)^2 + c'_j/(z - a_j), poles a_j on |z| = 1.

    The three decay sums

        S1 = sum c'_j
        S2 = sum (c_j + c'_j a_j)
        S3 = sum (2 c_j a_j + c'_j a_j^2)

    all vanish exactly when r(z) = O(z^-4) at infinity, which is required for
    r to live in the exterior-disk norm space and to drive the Schwarz
    equation there.
    """

    poles: np.ndarray
    c: np.ndarray
    cprime: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.poles, dtype=complex)
        c = np.asarray(self.c, dtype=complex)
        cp = np.asarray(self.cprime, dtype=complex)
        if not (a.shape == c.shape == cp.shape) or a.ndim != 1 or a.size == 0:
            raise ValueError("RationalSchwarzian: poles, c, cprime must be equal-length 1-d arrays")
        if not np.all(np.isfinite(a.view(float)) ) or not np.all(np.isfinite(c.view(float))) \
                or not np.all(np.isfinite(cp.view(float))):
            raise ValueError("RationalSchwarzian: non-finite data")
        off = np.abs(np.abs(a) - 1.0)
        if off.max() > POLE_ON_CIRCLE_TOL:
            j = int(off.argmax())
            raise ValueError(
                f"RationalSchwarzian: pole {j} has |a| = {abs(a[j])!r}, "
                f"off the unit circle beyond {POLE_ON_CIRCLE_TOL}")
        if np.abs(c).sum() == 0.0:
            raise ValueError("RationalSchwarzian: all double-pole coefficients vanish")
        for arr in (a, c, cp):
            arr.setflags(write=False)
        object.__setattr__(self, "poles", a)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "cprime", cp)

    @property
    def n(self) -> int:
        return len(self.poles)

    def decay_residuals(self) -> tuple[complex, complex, complex]:
        a, c, cp = self.poles, self.c, self.cprime
        return (
            complex(cp.sum()),
            complex((c + cp * a).sum()),
            complex((2 * c * a + cp * a * a).sum()),
        )

    def is_exterior_admissible(self, tol: float = DECAY_CONSTRAINT_TOL) -> bool:
        return max(abs(s) for s in self.decay_residuals()) <= tol

    def require_exterior_admissible(self, tol: float = DECAY_CONSTRAINT_TOL):
        res = self.decay_residuals()
        if max(abs(s) for s in res) > tol:
            raise ValueError(
                "RationalSchwarzian is not O(z^-4) at infinity; decay residuals "
                f"{[abs(s) for s in res]} exceed {tol}")

    def evaluate(self, z):
        """Vectorized evaluation; points at a pole evaluate to inf."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros(z.shape, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            for a, cj, cpj in zip(self.poles, self.c, self.cprime):
                d = z - a
                out = out + cj / (d * d) + cpj / d
        return out

    def laurent_at_infinity(self, M: int) -> np.ndarray:
        """Coefficients phi_1..phi_M of r(z) = sum_m phi_m z^-m.

        1/(z-a)   = sum_{m>=1} a^{m-1} z^-m
        1/(z-a)^2 = sum_{m>=2} (m-1) a^{m-2} z^-m
        """
        m = np.arange(1, M + 1)
        phi = np.zeros(M, dtype=complex)
        for a, cj, cpj in zip(self.poles, self.c, self.cprime):
            am = a ** (m - 1)            # a^(m-1), |a| = 1 so powers are stable
            phi += cpj * am
            phi[1:] += cj * (m[1:] - 1) * am[:-1]
        return phi


@dataclass(frozen=True)
class HyperbolicNorm:
    """A computed weighted sup-norm with provenance tags."""

    value: float
    domain: str           # "interior" | "exterior"
    method: str           # "grid" | "boundary-formula"
    error_estimate: float = 0.0
    argmax: complex | None = None

    def __post_init__(self):
        if not (np.isfinite(self.value) and self.value >= 0.0):
            raise ValueError(f"HyperbolicNorm: invalid value {self.value}")


# ---------------------------------------------------------------------------
# Schwarzian of a series germ

def schwarzian_of_series(w: TruncatedExteriorSeries) -> TruncatedTaylorSeries:
    """Schwarzian derivative S_w = (w''/w')' - (w''/w')^2 / 2 as a series in 1/z.

    For a normalized germ the result starts at order z^-4; the z^-2 and z^-3
    coefficients are checked to vanish.  Raises if the input order is too
    small to resolve any significant coefficient.
    """
    K = w.order
    if K < 1:
        raise ValueError("schwarzian_of_series: germ order too small")
    # w'(z) = 1 + A(u), u = 1/z, A = -sum_k k b_k u^{k+1}
    A = np.zeros(K + 2, dtype=complex)
    k = np.arange(1, K + 1)
    A[2:] = -k * w.coeffs[1:]
    A_series = TruncatedTaylorSeries(A, var="1/z")
    L = series_log1p(A_series)                 # log w'
    g1 = series_derivative(L)                  # w''/w'
    g1p = series_derivative(g1)                # (w''/w')'
    S = g1p - 0.5 * series_mul(g1, g1)
    if S.order < 4:
        raise ValueError("schwarzian_of_series: truncation order too small, "
                         f"need K >= 2, got series order {S.order}")
    lead = np.abs(S.coeffs[:4])
    if lead.max() > 1e-12 * max(1.0, np.abs(S.coeffs).max()):
        raise ValueError(f"schwarzian_of_series: unexpected low-order terms {S.coeffs[:4]}")
    return S


# ---------------------------------------------------------------------------
# Grid maximization engine

@dataclass(frozen=True)
class GridConfig:
    """Radial-angular grid used for weighted sup evaluation.

    The radial ladder is r = 1 - 2^-j, j = 0..j_max: dyadic approach to the
    boundary (j = 0 contributes the center, where smooth integrands can peak).
    Golden-section refinement runs in the (j, theta) coordinates around the
    coarse argmax.
    """

    n_theta: int = 4096
    j_max: int = 20
    refine_sweeps: int = 4
    golden_iters: int = 48
    pole_guard: float = 1e-8


_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0


def _golden_max(f, lo: float, hi: float, iters: int) -> tuple[float, float]:
    a, b = lo, hi
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
    x = c if fc >= fd else d
    return x, max(fc, fd)


def grid_max(fn, config: GridConfig = GridConfig()) -> tuple[float, complex, float]:
    """Maximize a nonnegative function over the open unit disk.

    ``fn`` maps an array of disk points to nonnegative reals; failed
    evaluations may come back as nan/inf and are skipped.  Returns
    (value, argmax point, error estimate).
    """
    js = np.arange(config.j_max + 1, dtype=float)
    radii = 1.0 - 0.5 ** js
    thetas = 2 * np.pi * np.arange(config.n_theta) / config.n_theta
    z = radii[:, None] * np.exp(1j * thetas)[None, :]
    vals = np.asarray(fn(z.ravel()), dtype=float).reshape(z.shape)
    ok = np.isfinite(vals)
    if not ok.any():
        raise ValueError("grid_max: every grid evaluation failed")
    vals = np.where(ok, vals, -np.inf)
    flat = int(np.argmax(vals))
    jj, tt = np.unravel_index(flat, vals.shape)
    coarse = float(vals[jj, tt])

    def val_at(j, theta):
        r = 1.0 - 0.5 ** j
        p = r * np.exp(1j * theta)
        v = float(np.asarray(fn(np.array([p])), dtype=float)[0])
        return v if np.isfinite(v) else -np.inf

    j_star, th_star = float(js[jj]), float(thetas[tt])
    best = coarse
    dth = 2 * np.pi / config.n_theta
    for _ in range(config.refine_sweeps):
        th_star, best = _golden_max(lambda t: val_at(j_star, t),
                                    th_star - dth, th_star + dth, config.golden_iters)
        j_lo = max(0.0, j_star - 1.0)
        j_hi = min(float(config.j_max), j_star + 1.0)
        j_star, best = _golden_max(lambda j: val_at(j, th_star),
                                   j_lo, j_hi, config.golden_iters)
        dth /= 8.0
    arg = (1.0 - 0.5 ** j_star) * np.exp(1j * th_star)
    err = abs(best - coarse)
    return max(best, coarse), complex(arg), err


def _interior_weighted(phi_eval):
    def fn(z):
        w = (1.0 - np.abs(z) ** 2) ** 2
        with np.errstate(over="ignore", invalid="ignore"):
            return w * np.abs(phi_eval(z))
    return fn


def _evaluator(phi):
    if isinstance(phi, RationalSchwarzian):
        return phi.evaluate
    if isinstance(phi, (TruncatedTaylorSeries, TruncatedExteriorSeries)):
        return phi.evaluate
    if callable(phi):
        return phi
    raise TypeError(f"cannot evaluate object of type {type(phi)!r}")


def bnorm_grid(phi, domain: str = "interior",
               config: GridConfig = GridConfig(),
               guard_poles: np.ndarray | None = None) -> HyperbolicNorm:
    """Weighted sup-norm by grid maximization with local refinement.

    ``domain`` selects the interior disk weight (1-|z|^2)^2 or the exterior
    weight (|z|^2-1)^2; the exterior case is computed on the inverted
    evaluator z^-4 phi(1/z), which has identical weighted values point for
    point.  Grid points within ``config.pole_guard`` of a guarded pole are
    excluded (the boundary formula covers that regime analytically).
    """
    ev = _evaluator(phi)
    if guard_poles is None and isinstance(phi, RationalSchwarzian):
        guard_poles = phi.poles
    if domain == "interior":
        base = ev
    elif domain == "exterior":
        def base(z):
            with np.errstate(divide="ignore", invalid="ignore"):
                return ev(1.0 / z) / z ** 4
    else:
        raise ValueError(f"unknown domain tag {domain!r}")

    guards = np.asarray(guard_poles, dtype=complex) if guard_poles is not None else None

    def guarded(z):
        out = np.abs(np.asarray(base(z), dtype=complex))
        if guards is not None and guards.size:
            # inverted evaluator keeps poles on the unit circle at conj positions
            g = guards if domain == "interior" else 1.0 / guards
            d = np.min(np.abs(z[:, None] - g[None, :]), axis=1)
            out = np.where(d < config.pole_guard, np.nan, out)
        return out

    fn = _interior_weighted(guarded)
    value, arg, err = grid_max(fn, config)
    if domain == "exterior":
        arg = 1.0 / arg if arg != 0 else complex(np.inf)
    return HyperbolicNorm(value=value, domain=domain, method="grid",
                          error_estimate=err, argmax=arg)


def bnorm_rational_boundary(r: RationalSchwarzian, domain: str = "interior") -> HyperbolicNorm:
    """Boundary-limit norm of a rational function with double circle poles.

    Radial approach to a second-order pole a_j gives the weighted limit
    4|c_j|; first-order parts are killed by the quadratic weight, and away
    from the poles the weight sends everything to zero.  The norm is then
    the largest per-pole limit.  Poles repeated in the data are merged first
    so interference between coincident double poles is accounted for.
    """
    if np.abs(r.c).sum() == 0.0:
        raise ValueError("bnorm_rational_boundary: hypothesis sum |c_j| > 0 violated")
    if domain not in ("interior", "exterior"):
        raise ValueError(f"unknown domain tag {domain!r}")
    # merge coefficients of (numerically) coincident poles
    poles = r.poles
    c = r.c.copy()
    used = np.zeros(len(poles), dtype=bool)
    best = 0.0
    best_pole = poles[0]
    for j in range(len(poles)):
        if used[j]:
            continue
        close = np.abs(poles - poles[j]) < 1e-12
        used |= close
        cj = c[close].sum()
        if 4.0 * abs(cj) > best:
            best = 4.0 * abs(cj)
            best_pole = poles[j]
    arg = best_pole if domain == "interior" else best_pole
    return HyperbolicNorm(value=best, domain=domain, method="boundary-formula",
                          error_estimate=0.0, argmax=complex(arg))


def univalence_gates(norm) -> str:
    """Classify a norm value against the sufficiency/necessity gates."""
    value = norm.value if isinstance(norm, HyperbolicNorm) else float(norm)
    if value < AW_RADIUS:
        return INSIDE_AW_BALL
    if value <= NECESSITY_CUTOFF:
        return INDETERMINATE_BAND
    return CERTIFIED_NONUNIVALENT
