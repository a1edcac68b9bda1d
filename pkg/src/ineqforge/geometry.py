"""Level-set and ball envelopes: Phi, Phi^{-1}, g, G, H.

Phi(r) is the infimum of the witness rate phi off the set A_r; g, G, H
are the sup of |V|, sup of |grad V|^2 and the oscillation of V over the
enlarged set.  Quantities are exact by monotonicity for pure radial
families and one-sided conservative otherwise: Phi may only shrink and
g, G, H may only grow, which keeps every downstream certificate a valid
upper rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnboundedBelow
from .lyapunov import LyapunovWitness, PhiForm
from .potential import PotentialSpec

R_SEARCH_CAP = 1e9
_GRID = 4001


@dataclass(frozen=True)
class SetFamily:
    """Exhausting compact sets A_r plus the enlargement convention.

    kind: "balls" (A_r = B(0, r)), "v_levels" (A_r = {V < r}) or
    "h_levels" (A_r = {V + c0|x|^2/2 < r}, c0 from the curvature bound).
    enlargement: "metric" (distance-2 neighborhood) or "level" (level
    r+2 directly); "level" pairs with level-set families only.
    """

    kind: str = "balls"
    enlargement: str = "metric"
    c0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("balls", "v_levels", "h_levels"):
            raise ValueError(f"unknown set family {self.kind!r}")
        if self.enlargement not in ("metric", "level"):
            raise ValueError(f"unknown enlargement {self.enlargement!r}")
        if self.kind == "balls" and self.enlargement == "level":
            raise ValueError("level enlargement applies to level-set families")


BALLS_METRIC = SetFamily("balls", "metric")
V_LEVELS_LEVEL = SetFamily("v_levels", "level")
V_LEVELS_METRIC = SetFamily("v_levels", "metric")


def _shift_monotone_radius(spec: PotentialSpec, c0: float) -> float:
    """Radius beyond which f'(rho) + c0*rho >= 0, analytic and sound."""
    if c0 >= 0.0:
        return spec.monotone_radius()
    if spec.family == "gaussian":
        if 2.0 * spec.c + c0 >= 0.0:
            return 0.0
        raise UnboundedBelow("quadratic shift defeats the gaussian slope")
    if spec.family == "power":
        b, c = spec.b_pow, spec.c
        if b > 2.0:
            return (-c0 / (c * b)) ** (1.0 / (b - 2.0))
        if b == 2.0 and 2.0 * c + c0 >= 0.0:
            return 0.0
        raise UnboundedBelow("shifted level function is not coercive")
    if spec.family == "double_well":
        return math.sqrt(max(2.0 * spec.a2 - c0, 0.0) / (4.0 * spec.a4))
    if not spec.terms:
        raise UnboundedBelow("constant potential has no coercive shift")
    dominant = max(spec.terms, key=lambda t: t.tail_power()[0])
    base = max(t.monotone_radius() for t in spec.terms)
    return max(base, _shift_monotone_radius(dominant, c0))


class _ShiftedLevel:
    """V + c0|x|^2/2 exposed with the radial-profile methods used here."""

    def __init__(self, spec: PotentialSpec, c0: float):
        self.spec = spec
        self.c0 = c0
        self.offset = spec.offset

    def radial_value(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.spec.radial_value(rho) + 0.5 * self.c0 * rho**2

    def radial_d1(self, rho):
        rho = np.asarray(rho, dtype=float)
        return self.spec.radial_d1(rho) + self.c0 * rho

    def monotone_radius(self) -> float:
        return _shift_monotone_radius(self.spec, self.c0)

    def grad_abs_sup(self, R: float) -> float:
        return self.spec.grad_abs_sup(R) + abs(self.c0) * R

    def value_sup(self, R: float) -> float:
        return self.spec.value_sup(R) + max(self.c0, 0.0) * R**2 / 2.0


def _shifted(spec: PotentialSpec, family: SetFamily):
    """Level function defining the sets: V itself, or V + c0|x|^2/2."""
    if family.kind != "h_levels" or family.c0 == 0.0:
        return spec
    return _ShiftedLevel(spec, family.c0)


def level_outer_radius(spec: PotentialSpec, y: float) -> float:
    """Upper bound for sup{ rho : f(rho) < y } by bisection on the tail."""
    rm = max(spec.monotone_radius(), 1e-6)
    if float(spec.radial_value(rm)) >= y:
        return rm
    hi = rm
    while float(spec.radial_value(hi)) < y:
        hi *= 2.0
        if hi > R_SEARCH_CAP:
            raise UnboundedBelow("level set is unbounded on the search range")
    lo = hi / 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(spec.radial_value(mid)) < y:
            lo = mid
        else:
            hi = mid
    return hi


def _inner_radius_of_complement(spec: PotentialSpec, r: float) -> float:
    """Lower bound for inf{ rho : f(rho) >= r } (entry radius of {V >= r})."""
    rho = np.linspace(0.0, max(spec.monotone_radius(), 1.0), _GRID)
    vals = spec.radial_value(rho)
    hits = np.nonzero(vals >= r)[0]
    if hits.size:
        i = hits[0]
        return float(rho[max(i - 1, 0)])  # one step back: one-sided conservative
    lo = float(rho[-1])
    hi = max(lo, 1e-6)
    while float(spec.radial_value(hi)) < r:
        hi *= 2.0
        if hi > R_SEARCH_CAP:
            raise UnboundedBelow("V never reaches the requested level")
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if float(spec.radial_value(mid)) < r:
            lo = mid
        else:
            hi = mid
    return lo


# -- Phi -----------------------------------------------------------------


def phi_inf(
    witness: LyapunovWitness,
    family: SetFamily,
    r: float,
    spec: PotentialSpec | None = None,
) -> float:
    """Phi(r) = inf over the complement of A_r of phi.

    Exact for monotone radial forms (power_abs on balls, power_V on
    V-levels); otherwise a conservative lower bound via the entry radius
    of the complement.
    """
    if r < 0:
        raise ValueError("r must be >= 0")
    phi = witness.phi
    if family.kind == "balls":
        if phi.kind == "power_abs":
            return phi.coeff * r**phi.exponent
        if spec is None:
            raise ValueError("power_V phi needs the potential spec")
        level = spec.value_inf_beyond(r)
        return phi.of_level(level)
    if spec is None:
        raise ValueError("level-set families need the potential spec")
    lvl_spec = _shifted(spec, family)
    if phi.kind == "power_V" and family.kind == "v_levels":
        return phi.of_level(r)
    rho_in = _inner_radius_of_complement(lvl_spec, r)
    if phi.kind == "power_abs":
        return phi.coeff * rho_in**phi.exponent
    inner_level = spec.value_inf_beyond(rho_in)
    return phi.of_level(inner_level)


def generalized_inverse(
    fn: Callable[[float], float], y: float, r_cap: float = R_SEARCH_CAP
) -> float:
    """inf{ s >= 0 : fn(s) >= y } for non-decreasing fn, by bisection.

    Returns math.inf when fn never reaches y below r_cap.
    """
    if y <= 0 or fn(0.0) >= y:
        return 0.0
    hi = 1.0
    while fn(hi) < y:
        hi *= 2.0
        if hi > r_cap:
            return math.inf
    lo = hi / 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= y:
            hi = mid
        else:
            lo = mid
    return hi


# -- envelopes -------------------------------------------------------------


def _ball_envelope(spec: PotentialSpec, R: float) -> dict:
    sup_v = spec.value_sup(R)
    inf_v = spec.value_inf(R)
    g = max(abs(sup_v), abs(inf_v))
    G = spec.grad_abs_sup(R) ** 2
    return {"g": g, "G": G, "H": sup_v - inf_v}


def _v_sup_on_level(family: SetFamily, level: float, R_out: float) -> float:
    """Upper bound for sup of V over { level fn < level }."""
    if family.kind == "h_levels" and family.c0 < 0.0:
        return level - family.c0 * R_out**2 / 2.0
    return level


def envelope_profile(spec: PotentialSpec, family: SetFamily, r: float) -> dict:
    """g, G, H over the enlargement of A_r (T = 0, so V - T = V)."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if family.kind == "balls":
        return _ball_envelope(spec, r + 2.0)
    lvl_spec = _shifted(spec, family)
    vmin = spec.min_value()
    if family.enlargement == "level":
        R_out = level_outer_radius(lvl_spec, r + 2.0)
        v_sup = _v_sup_on_level(family, r + 2.0, R_out)
        return {
            "g": max(abs(v_sup), abs(vmin)),
            "G": spec.grad_abs_sup(R_out) ** 2,
            "H": v_sup - vmin,
        }
    # metric enlargement of a level set: conservative superset
    # {level < r + 2 * sup|grad| on the 2-shell around the set}
    R_set = level_outer_radius(lvl_spec, r)
    lam = lvl_spec.grad_abs_sup(R_set + 2.0)
    r_big = r + 2.0 * lam
    R_out = level_outer_radius(lvl_spec, r_big)
    v_sup = _v_sup_on_level(family, r_big, R_out)
    return {
        "g": max(abs(v_sup), abs(vmin)),
        "G": spec.grad_abs_sup(R_out) ** 2,
        "H": v_sup - vmin,
    }


# -- assembled profile -------------------------------------------------------


@dataclass(frozen=True)
class GeometryProfile:
    """Monotone evaluators for Phi, g, G, H over a clamped set family.

    Radii are clamped below at the witness r0 so that every used set
    contains B(0, r0), as the drift condition requires.
    """

    phi_of_r: Callable[[float], float]
    g_of_r: Callable[[float], float]
    G_of_r: Callable[[float], float]
    H_of_r: Callable[[float], float]
    r0: float
    family: SetFamily
    provenance: str
    r_cap: float = R_SEARCH_CAP

    def phi_inverse(self, y: float) -> float:
        """Generalized inverse of Phi; +inf sentinel beyond the cap."""
        if y < 0:
            raise ValueError("y must be >= 0")
        return generalized_inverse(self.phi_of_r, y, self.r_cap)

    def envelopes(self, r: float) -> dict:
        return {"g": self.g_of_r(r), "G": self.G_of_r(r), "H": self.H_of_r(r)}


def build_profile(
    spec: PotentialSpec, witness: LyapunovWitness, family: SetFamily = BALLS_METRIC
) -> GeometryProfile:
    """Bind a witness and a set family into evaluators for the rate routes."""
    r0 = witness.r0
    if family.kind != "balls":
        # clamp level so A_r contains the validation ball B(0, r0)
        r0 = float(_shifted(spec, family).value_sup(witness.r0))

    def clamp(r: float) -> float:
        if math.isinf(r):
            return r
        return max(float(r), r0)

    def phi_of_r(r: float) -> float:
        return phi_inf(witness, family, clamp(r), spec=spec)

    def g_of_r(r: float) -> float:
        r = clamp(r)
        return math.inf if math.isinf(r) else envelope_profile(spec, family, r)["g"]

    def G_of_r(r: float) -> float:
        r = clamp(r)
        return math.inf if math.isinf(r) else envelope_profile(spec, family, r)["G"]

    def H_of_r(r: float) -> float:
        r = clamp(r)
        return math.inf if math.isinf(r) else envelope_profile(spec, family, r)["H"]

    exact = spec.family != "sum" and (
        (family.kind == "balls" and witness.phi.kind == "power_abs")
        or (family.kind == "v_levels" and witness.phi.kind == "power_V")
    )
    return GeometryProfile(
        phi_of_r=phi_of_r,
        g_of_r=g_of_r,
        G_of_r=G_of_r,
        H_of_r=H_of_r,
        r0=r0,
        family=family,
        provenance="exact-by-monotonicity" if exact else "grid-with-margin",
    )


def sample_profile(profile: GeometryProfile, rs) -> list[tuple[float, ...]]:
    """Rows (r, Phi, g, G, H) for CSV export."""
    rows = []
    for r in rs:
        rows.append(
            (
                float(r),
                profile.phi_of_r(r),
                profile.g_of_r(r),
                profile.G_of_r(r),
                profile.H_of_r(r),
            )
        )
    return rows
