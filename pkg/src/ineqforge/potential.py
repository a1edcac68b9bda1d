"""Potentials V on R^n from a closed radial family, with exact derivatives.

Every supported family is radial: V(x) = f(|x|) + offset for a scalar
profile f, so gradients, Hessian eigenvalues, Laplacians and tail bounds
all reduce to closed-form functions of rho = |x|.  The Hessian of a radial
function has eigenvalue f''(rho) in the radial direction and f'(rho)/rho
with multiplicity n-1 tangentially; sums of radial functions share these
eigenspaces, which keeps min-eigenvalue computations exact for sums too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import TailMassTooLarge

TAIL_REL_TOL = 1e-10

_FAMILIES = ("gaussian", "power", "double_well", "sum")


@dataclass(frozen=True)
class EvalResult:
    """Value, gradient and smallest Hessian eigenvalue at one point."""

    v: float
    grad: np.ndarray
    hess_min_eig: float


@dataclass(frozen=True)
class PotentialSpec:
    """Immutable description of a potential from the closed family set.

    gaussian(c):      V = c|x|^2,               c > 0
    power(c, b_pow):  V = c|x|^b_pow,           c > 0, b_pow > 1
    double_well:      V = a4|x|^4 - a2|x|^2,    a4 > 0
    sum:              V = sum of sub-potentials (same dimension)

    An empty sum is the constant potential V = offset.  It is accepted as
    a geometry/certificate test stub only: e^{-V} is not integrable, so
    quadrature operations reject it through the tail check.
    """

    family: str
    n: int
    offset: float = 0.0
    c: float = 0.0
    b_pow: float = 0.0
    a4: float = 0.0
    a2: float = 0.0
    terms: tuple["PotentialSpec", ...] = field(default=())

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.family in ("gaussian", "power") and not self.c > 0:
            raise ValueError("c must be > 0")
        if self.family == "power" and not self.b_pow > 1:
            raise ValueError("b_pow must be > 1")
        if self.family == "double_well" and not self.a4 > 0:
            raise ValueError("a4 must be > 0")
        if self.family == "sum":
            for t in self.terms:
                if t.n != self.n:
                    raise ValueError("sum terms must share the dimension")

    # -- radial profile -------------------------------------------------

    def radial_value(self, rho):
        """f(rho) + offset, vectorized."""
        rho = np.asarray(rho, dtype=float)
        if self.family == "gaussian":
            out = self.c * rho**2
        elif self.family == "power":
            out = self.c * rho**self.b_pow
        elif self.family == "double_well":
            out = self.a4 * rho**4 - self.a2 * rho**2
        else:
            out = np.zeros_like(rho)
            for t in self.terms:
                out = out + t.radial_value(rho)
        return out + self.offset

    def radial_d1(self, rho):
        """f'(rho), vectorized.  Zero at rho = 0 for every family."""
        rho = np.asarray(rho, dtype=float)
        if self.family == "gaussian":
            return 2.0 * self.c * rho
        if self.family == "power":
            b = self.b_pow
            with np.errstate(divide="ignore", invalid="ignore"):
                out = self.c * b * rho ** (b - 1.0)
            return np.where(rho == 0.0, 0.0, out)
        if self.family == "double_well":
            return 4.0 * self.a4 * rho**3 - 2.0 * self.a2 * rho
        out = np.zeros_like(rho)
        for t in self.terms:
            out = out + t.radial_d1(rho)
        return out

    def radial_d2(self, rho):
        """f''(rho); +inf at 0 for power with b_pow < 2."""
        rho = np.asarray(rho, dtype=float)
        if self.family == "gaussian":
            return np.full_like(rho, 2.0 * self.c)
        if self.family == "power":
            b = self.b_pow
            coef = self.c * b * (b - 1.0)
            if b == 2.0:
                return np.full_like(rho, coef)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = coef * rho ** (b - 2.0)
            at0 = 0.0 if b > 2.0 else np.inf
            return np.where(rho == 0.0, at0, out)
        if self.family == "double_well":
            return 12.0 * self.a4 * rho**2 - 2.0 * self.a2
        out = np.zeros_like(rho)
        for t in self.terms:
            out = out + t.radial_d2(rho)
        return out

    def tangential_eig(self, rho):
        """f'(rho)/rho, the tangential Hessian eigenvalue (n >= 2)."""
        rho = np.asarray(rho, dtype=float)
        if self.family == "gaussian":
            return np.full_like(rho, 2.0 * self.c)
        if self.family == "power":
            b = self.b_pow
            coef = self.c * b
            if b == 2.0:
                return np.full_like(rho, coef)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = coef * rho ** (b - 2.0)
            at0 = 0.0 if b > 2.0 else np.inf
            return np.where(rho == 0.0, at0, out)
        if self.family == "double_well":
            return 4.0 * self.a4 * rho**2 - 2.0 * self.a2
        out = np.zeros_like(rho)
        for t in self.terms:
            out = out + t.tangential_eig(rho)
        return out

    def laplacian(self, rho):
        """Trace of the Hessian as a function of rho."""
        if self.n == 1:
            return self.radial_d2(rho)
        return self.radial_d2(rho) + (self.n - 1) * self.tangential_eig(rho)

    # -- analytic envelopes ---------------------------------------------

    def tail_power(self) -> tuple[float, float]:
        """(p, coeff) of the leading term coeff*rho^p of V at infinity."""
        if self.family == "gaussian":
            return 2.0, self.c
        if self.family == "power":
            return self.b_pow, self.c
        if self.family == "double_well":
            return 4.0, self.a4
        best_p, coeff = 0.0, 0.0
        for t in self.terms:
            p, cf = t.tail_power()
            if p > best_p:
                best_p, coeff = p, cf
            elif p == best_p:
                coeff += cf
        return best_p, coeff

    def monotone_radius(self) -> float:
        """Radius beyond which f is non-decreasing."""
        if self.family == "double_well":
            return math.sqrt(self.a2 / (2.0 * self.a4)) if self.a2 > 0 else 0.0
        if self.family == "sum":
            return max((t.monotone_radius() for t in self.terms), default=0.0)
        return 0.0

    def convex_radius(self) -> float:
        """Radius beyond which f'' >= 0."""
        if self.family == "double_well":
            return math.sqrt(self.a2 / (6.0 * self.a4)) if self.a2 > 0 else 0.0
        if self.family == "sum":
            return max((t.convex_radius() for t in self.terms), default=0.0)
        return 0.0

    def grad_abs_sup(self, R: float) -> float:
        """sup over [0, R] of |f'|, exact for pure families."""
        if R <= 0:
            return 0.0
        if self.family == "gaussian":
            return 2.0 * self.c * R
        if self.family == "power":
            return self.c * self.b_pow * R ** (self.b_pow - 1.0)
        if self.family == "double_well":
            cands = [abs(4.0 * self.a4 * R**3 - 2.0 * self.a2 * R)]
            rc = self.convex_radius()
            if 0.0 < rc < R:
                cands.append(abs(4.0 * self.a4 * rc**3 - 2.0 * self.a2 * rc))
            return max(cands)
        return sum(t.grad_abs_sup(R) for t in self.terms)

    def value_sup(self, R: float) -> float:
        """Upper bound for sup over [0, R] of f (exact for pure families)."""
        if self.family == "sum":
            return sum(t.value_sup(R) for t in self.terms) + self.offset
        cands = [float(self.radial_value(0.0)), float(self.radial_value(R))]
        return max(cands)

    def value_inf(self, R: float) -> float:
        """Lower bound for inf over [0, R] of f (exact for pure families)."""
        if self.family == "double_well":
            rm = min(self.monotone_radius(), R)
            return float(self.radial_value(rm))
        if self.family == "sum":
            return sum(t.value_inf(R) for t in self.terms) + self.offset
        return float(self.radial_value(0.0))

    def value_inf_beyond(self, r: float) -> float:
        """Lower bound for inf over [r, inf) of f (exact for pure families)."""
        if self.family == "sum":
            return sum(t.value_inf_beyond(r) for t in self.terms) + self.offset
        rm = self.monotone_radius()
        return float(self.radial_value(max(r, 0.0) if r >= rm else rm))

    def min_value(self) -> float:
        """Lower bound for the global infimum of V."""
        return self.value_inf_beyond(0.0)


# -- constructors --------------------------------------------------------


def gaussian(c: float, n: int = 1, offset: float = 0.0) -> PotentialSpec:
    return PotentialSpec("gaussian", n=n, offset=offset, c=c)


def power(c: float, b_pow: float, n: int = 1, offset: float = 0.0) -> PotentialSpec:
    return PotentialSpec("power", n=n, offset=offset, c=c, b_pow=b_pow)


def double_well(a4: float, a2: float, n: int = 1, offset: float = 0.0) -> PotentialSpec:
    return PotentialSpec("double_well", n=n, offset=offset, a4=a4, a2=a2)


def sum_of(terms, n: int | None = None, offset: float = 0.0) -> PotentialSpec:
    terms = tuple(terms)
    if n is None:
        if not terms:
            raise ValueError("dimension required for an empty sum")
        n = terms[0].n
    return PotentialSpec("sum", n=n, offset=offset, terms=terms)


def constant(v0: float, n: int = 1) -> PotentialSpec:
    """Flat potential test stub (not a normalizable measure)."""
    return PotentialSpec("sum", n=n, offset=v0, terms=())


# -- operations -----------------------------------------------------------


def evaluate(spec: PotentialSpec, x) -> EvalResult:
    """Value, gradient and min Hessian eigenvalue from closed forms."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (spec.n,):
        raise ValueError(f"expected a point in R^{spec.n}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("point must be finite")
    rho = float(np.linalg.norm(x))
    v = float(spec.radial_value(rho))
    if rho == 0.0:
        grad = np.zeros(spec.n)
    else:
        grad = float(spec.radial_d1(rho)) * x / rho
    hmin = float(spec.radial_d2(rho))
    if spec.n >= 2:
        hmin = min(hmin, float(spec.tangential_eig(rho)))
    return EvalResult(v, grad, hmin)


def _trapezoid_weights(m: int, h: float) -> np.ndarray:
    w = np.full(m, h)
    w[0] = w[-1] = h / 2.0
    return w


def tail_mass_bound(spec: PotentialSpec, rho0: float) -> float:
    """Closed-form upper bound for the e^{-V} mass outside B(0, rho0).

    Uses the linear envelope f(rho) >= f(rho0) + f'(rho0)(rho - rho0),
    valid because f is convex and increasing beyond rho0 for every
    constructible family.  Raises TailMassTooLarge when the envelope
    does not decay (flat or shrinking tail).
    """
    needed = max(spec.monotone_radius(), spec.convex_radius())
    slope = float(spec.radial_d1(rho0))
    if rho0 < needed or slope <= 0.0:
        raise TailMassTooLarge(
            math.inf, 0.0, "tail envelope is not decaying at the truncation radius"
        )
    f0 = float(spec.radial_value(rho0))
    if spec.n == 1:
        return 2.0 * math.exp(-f0) / slope
    # n = 2: 2*pi * integral of rho * exp(-f0 - slope(rho-rho0))
    return 2.0 * math.pi * math.exp(-f0) * (rho0 / slope + 1.0 / slope**2)


def normalizing_constant(spec: PotentialSpec, L: float = 8.0, m: int = 4001) -> float:
    """Z = integral of e^{-V} over [-L, L]^n by composite trapezoid.

    Only n in {1, 2} is supported.  Raises TailMassTooLarge when the
    analytic bound on the mass outside B(0, L-1) exceeds 1e-10 * Z.
    """
    if spec.n > 2:
        raise ValueError("quadrature supports n in {1, 2} only")
    if m < 3:
        raise ValueError("need at least 3 nodes")
    xs = np.linspace(-L, L, m)
    h = xs[1] - xs[0]
    w = _trapezoid_weights(m, h)
    if spec.n == 1:
        z = float(np.sum(w * np.exp(-spec.radial_value(np.abs(xs)))))
    else:
        rho = np.sqrt(xs[:, None] ** 2 + xs[None, :] ** 2)
        z = float(w @ np.exp(-spec.radial_value(rho)) @ w)
    tail = tail_mass_bound(spec, L - 1.0)
    if tail > TAIL_REL_TOL * z:
        raise TailMassTooLarge(tail, TAIL_REL_TOL * z)
    return z


def curvature_lower_bound(spec: PotentialSpec, R: float) -> float:
    """c0 with Hess V >= c0 * Id on B(0, R).

    Each Hessian-eigenvalue branch is monotone in rho for every pure
    family, so the infimum is attained at an endpoint and is exact;
    sums use branch-wise subadditivity, which is one-sided conservative.
    """
    if R <= 0:
        raise ValueError("R must be > 0")

    def branch_inf(s: PotentialSpec, tangential: bool) -> float:
        if s.family == "sum":
            return sum(branch_inf(t, tangential) for t in s.terms)
        fn = s.tangential_eig if tangential else s.radial_d2
        lo, hi = float(fn(0.0)), float(fn(R))
        return min(lo, hi)

    c0 = branch_inf(spec, tangential=False)
    if spec.n >= 2:
        c0 = min(c0, branch_inf(spec, tangential=True))
    return c0


# -- serialization ---------------------------------------------------------


def spec_to_dict(spec: PotentialSpec) -> dict:
    d: dict = {"family": spec.family}
    if spec.family == "gaussian":
        d["c"] = spec.c
    elif spec.family == "power":
        d["c"] = spec.c
        d["b_pow"] = spec.b_pow
    elif spec.family == "double_well":
        d["a4"] = spec.a4
        d["a2"] = spec.a2
    else:
        d["terms"] = [spec_to_dict(t) for t in spec.terms]
    d["n"] = spec.n
    d["offset"] = spec.offset
    return d


def spec_from_dict(d: dict) -> PotentialSpec:
    fam = d["family"]
    n = int(d.get("n", 1))
    off = float(d.get("offset", 0.0))
    if fam == "gaussian":
        return gaussian(float(d["c"]), n=n, offset=off)
    if fam == "power":
        return power(float(d["c"]), float(d["b_pow"]), n=n, offset=off)
    if fam == "double_well":
        return double_well(float(d["a4"]), float(d["a2"]), n=n, offset=off)
    if fam == "sum":
        return PotentialSpec(
            "sum", n=n, offset=off, terms=tuple(spec_from_dict(t) for t in d["terms"])
        )
    raise ValueError(f"unknown family {fam!r}")
