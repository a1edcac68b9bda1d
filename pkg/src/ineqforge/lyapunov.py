"""Lyapunov witnesses: drift ratios, validation, and curvature growth.

A witness certifies the drift condition LW/W <= -phi + b * 1_{|x| < r0}
for W = e^{aV} or W = e^{a|x|^b}.  Validation combines a fine radial grid
with an analytic sign check on the leading tail term, since the condition
is a statement at infinity that no finite grid can certify alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoWitnessFound, SingularOrigin
from .potential import PotentialSpec

DRIFT_GRID_POINTS = 10_000
CURVATURE_TOL = 1e-10


@dataclass(frozen=True)
class ExpAV:
    """Witness family W = e^{aV}, 0 <= a < 1 (a = 0 is a test hook)."""

    a: float

    def __post_init__(self):
        if not 0.0 <= self.a < 1.0:
            raise ValueError("exp_aV requires 0 <= a < 1")


@dataclass(frozen=True)
class ExpDist:
    """Witness family W = e^{a|x|^b}, a > 0, b > 1."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 1.0):
            raise ValueError("exp_dist requires a > 0 and b > 1")


@dataclass(frozen=True)
class PhiForm:
    """Radial rate function phi with a symbolic tag.

    power_abs: phi(x) = coeff * |x|^exponent
    power_V:   phi(x) = coeff * max(V(x), 0)^exponent

    coeff None marks a shape-only candidate that fit_witness rescales.
    """

    kind: str
    coeff: float | None
    exponent: float

    def __post_init__(self):
        if self.kind not in ("power_abs", "power_V"):
            raise ValueError(f"unknown phi form {self.kind!r}")
        if self.coeff is not None and self.coeff < 0:
            raise ValueError("phi must be nonnegative")
        if self.exponent <= 0:
            raise ValueError("phi exponent must be positive")

    def radial(self, spec: PotentialSpec, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == "power_abs":
            return self.coeff * rho**self.exponent
        v = np.maximum(spec.radial_value(rho), 0.0)
        return self.coeff * v**self.exponent

    def of_level(self, level):
        """phi as a function of the V-level (power_V only, exact)."""
        if self.kind != "power_V":
            raise ValueError("of_level applies to power_V forms only")
        return self.coeff * max(level, 0.0) ** self.exponent

    def to_dict(self) -> dict:
        return {"kind": self.kind, "coeff": self.coeff, "exponent": self.exponent}


@dataclass(frozen=True)
class LyapunovWitness:
    family: str  # "exp_aV" | "exp_dist"
    a: float
    b_exp: float | None
    phi: PhiForm
    phi0: float
    b_const: float
    r0: float
    validated_on: dict

    def witness_family(self):
        if self.family == "exp_aV":
            return ExpAV(self.a)
        return ExpDist(self.a, self.b_exp)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "a": self.a,
            "b_exp": self.b_exp,
            "phi": self.phi.to_dict(),
            "phi0": self.phi0,
            "b_const": self.b_const,
            "r0": self.r0,
            "validated_on": dict(self.validated_on),
        }


def witness_from_dict(d: dict) -> LyapunovWitness:
    return LyapunovWitness(
        family=d["family"],
        a=float(d["a"]),
        b_exp=None if d.get("b_exp") is None else float(d["b_exp"]),
        phi=PhiForm(**d["phi"]),
        phi0=float(d["phi0"]),
        b_const=float(d["b_const"]),
        r0=float(d["r0"]),
        validated_on=dict(d["validated_on"]),
    )


@dataclass(frozen=True)
class DriftReport:
    max_violation: float
    witness: LyapunovWitness | None
    grid: dict


# -- drift ratios ----------------------------------------------------------


def drift_profile(spec: PotentialSpec, fam, rho):
    """(LW/W)(x) as a function of rho = |x|, vectorized.

    exp_aV:   a * (Lap V - (1-a)|grad V|^2)
    exp_dist: -a b rho^{b-2} * psi,  psi = rho f' - (n + b - 2 + a b rho^b)
    """
    rho = np.asarray(rho, dtype=float)
    if isinstance(fam, ExpAV):
        a = fam.a
        g2 = spec.radial_d1(rho) ** 2
        return a * (spec.laplacian(rho) - (1.0 - a) * g2)
    if isinstance(fam, ExpDist):
        a, b = fam.a, fam.b
        if b < 2.0 and np.any(rho == 0.0):
            raise SingularOrigin("exp_dist drift is singular at x = 0 for b < 2")
        psi = rho * spec.radial_d1(rho) - (spec.n + (b - 2.0) + a * b * rho**b)
        if b == 2.0:
            scale = np.ones_like(rho)
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                scale = rho ** (b - 2.0)
            scale = np.where(rho == 0.0, 0.0, scale)
        return -a * b * scale * psi
    raise TypeError("family must be ExpAV or ExpDist")


def drift_ratio(spec: PotentialSpec, fam, x) -> float:
    """Pointwise (LW/W)(x) from the closed-form family formula."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    rho = float(np.linalg.norm(x))
    return float(drift_profile(spec, fam, rho))


# -- tail sign analysis ----------------------------------------------------


def _drift_tail(spec: PotentialSpec, fam) -> tuple[float, float] | None:
    """Leading (exponent, coeff) of -LW/W at infinity, None if not -> +inf."""
    p, cv = spec.tail_power()
    if isinstance(fam, ExpAV):
        if p <= 1.0 or cv <= 0.0 or fam.a == 0.0:
            return None
        # -drift ~ a(1-a) * (c p)^2 * rho^(2p-2)
        return 2.0 * p - 2.0, fam.a * (1.0 - fam.a) * (cv * p) ** 2
    a, b = fam.a, fam.b
    if p > b:
        return b - 2.0 + p, a * b * cv * p
    if p == b:
        coeff = cv * p - a * b
        if coeff <= 0.0:
            return None
        return 2.0 * b - 2.0, a * b * coeff
    return None


def _phi_tail(spec: PotentialSpec, phi: PhiForm) -> tuple[float, float]:
    if phi.kind == "power_abs":
        return phi.exponent, phi.coeff
    p, cv = spec.tail_power()
    return p * phi.exponent, phi.coeff * cv**phi.exponent


def eventually_negative(spec: PotentialSpec, fam, phi: PhiForm) -> bool:
    """Sign of the symbolic leading term of drift + phi at infinity."""
    dt = _drift_tail(spec, fam)
    if dt is None:
        return False
    de, dc = dt
    pe, pc = _phi_tail(spec, phi)
    if pe < de:
        return True
    return pe == de and pc < dc


# -- validation and fitting -------------------------------------------------


def _validation_grid(fam, radius: float, points: int) -> np.ndarray:
    rho = np.linspace(0.0, radius, points)
    if isinstance(fam, ExpDist) and fam.b < 2.0:
        rho = rho[1:]  # drift singular at the origin
    return rho


def check_drift_condition(
    spec: PotentialSpec,
    witness: LyapunovWitness,
    points: int | None = None,
) -> DriftReport:
    """Re-validate LW/W <= -phi + b_const inside r0 on a radial grid."""
    fam = witness.witness_family()
    radius = float(witness.validated_on["radius"])
    points = points or int(witness.validated_on["points"])
    rho = _validation_grid(fam, radius, points)
    drift = drift_profile(spec, fam, rho)
    phi = witness.phi.radial(spec, rho)
    slack = drift + phi - witness.b_const * (rho < witness.r0)
    report = DriftReport(
        max_violation=float(np.max(slack)),
        witness=witness,
        grid={"radius": radius, "points": points},
    )
    return report


def fit_witness(
    spec: PotentialSpec,
    fam,
    r0_grid,
    phi_candidates,
    phi0: float = 1.0,
    domain_factor: float = 4.0,
    points: int = DRIFT_GRID_POINTS,
) -> LyapunovWitness:
    """Smallest-r0 witness validating the drift condition.

    Candidates with coeff None are rescaled so phi(r0) = phi0.  Acceptance
    requires a nonpositive grid maximum of drift + phi outside r0 and a
    negative symbolic leading term at infinity.  b_const is the grid
    supremum of drift + phi over the ball, nudged up for soundness.
    """
    r0_grid = sorted(float(r) for r in r0_grid)
    radius = domain_factor * max(r0_grid)
    rho = _validation_grid(fam, radius, points)
    tried = []
    for r0 in r0_grid:
        for cand in phi_candidates:
            phi = cand
            if phi.coeff is None or phi.coeff == 0.0:
                base = PhiForm(cand.kind, 1.0, cand.exponent)
                ref = float(base.radial(spec, r0))
                if ref <= 0.0:
                    continue
                phi = PhiForm(cand.kind, phi0 / ref, cand.exponent)
            if not eventually_negative(spec, fam, phi):
                tried.append((r0, phi.kind, "tail sign"))
                continue
            drift = drift_profile(spec, fam, rho)
            phival = phi.radial(spec, rho)
            outside = rho >= r0
            viol = float(np.max((drift + phival)[outside]))
            if viol > 0.0:
                tried.append((r0, phi.kind, f"grid violation {viol:.3e}"))
                continue
            inside = ~outside
            sup_in = float(np.max((drift + phival)[inside])) if inside.any() else 0.0
            b_const = max(sup_in, 0.0)
            b_const += 1e-12 * max(1.0, abs(b_const))
            phi_floor = float(np.min(phival[outside]))
            if isinstance(fam, ExpAV):
                family, a, b_exp = "exp_aV", fam.a, None
            else:
                family, a, b_exp = "exp_dist", fam.a, fam.b
            return LyapunovWitness(
                family=family,
                a=a,
                b_exp=b_exp,
                phi=phi,
                phi0=phi_floor,
                b_const=b_const,
                r0=r0,
                validated_on={"radius": radius, "points": points},
            )
    raise NoWitnessFound(f"no candidate validated; attempts: {tried[:8]}")


def make_witness(
    spec: PotentialSpec,
    fam,
    phi: PhiForm,
    r0: float,
    b_const: float | None = None,
    radius: float | None = None,
    points: int = DRIFT_GRID_POINTS,
) -> LyapunovWitness:
    """Validate an explicitly specified witness; raises if it fails."""
    radius = radius or 4.0 * r0
    if not eventually_negative(spec, fam, phi):
        raise NoWitnessFound("leading tail term of drift + phi is not negative")
    rho = _validation_grid(fam, radius, points)
    drift = drift_profile(spec, fam, rho)
    phival = phi.radial(spec, rho)
    outside = rho >= r0
    viol = float(np.max((drift + phival)[outside]))
    if viol > 0.0:
        raise NoWitnessFound(f"drift condition fails outside r0 by {viol:.3e}")
    sup_in = float(np.max((drift + phival)[~outside])) if (~outside).any() else 0.0
    if b_const is None:
        b_const = max(sup_in, 0.0) * (1.0 + 1e-12)
    elif sup_in > b_const:
        raise NoWitnessFound(f"b_const {b_const} below grid supremum {sup_in:.6g}")
    if isinstance(fam, ExpAV):
        family, a, b_exp = "exp_aV", fam.a, None
    else:
        family, a, b_exp = "exp_dist", fam.a, fam.b
    return LyapunovWitness(
        family=family,
        a=a,
        b_exp=b_exp,
        phi=phi,
        phi0=float(np.min(phival[outside])),
        b_const=float(b_const),
        r0=float(r0),
        validated_on={"radius": radius, "points": points},
    )


def check_curvature_growth(
    spec: PotentialSpec, c0: float, R: float = 6.0, points: int = 4001
) -> DriftReport:
    """Grid check of x . grad V >= V(x) - V(0) + c0 |x|^2 / 2.

    For radial V both sides depend on rho only.  max_violation is the
    grid maximum of RHS - LHS; the check passes when it is <= 1e-10.
    """
    rho = np.linspace(0.0, R, points)
    lhs = rho * spec.radial_d1(rho)
    rhs = spec.radial_value(rho) - spec.radial_value(0.0) + 0.5 * c0 * rho**2
    return DriftReport(
        max_violation=float(np.max(rhs - lhs)),
        witness=None,
        grid={"radius": R, "points": points},
    )
