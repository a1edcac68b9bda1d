"""Rate-function certificates assembled from witnesses, profiles, baselines.

Two explicit perturbation routes (an epsilon-optimized one and an
oscillation-based one), the level-set variant, the general local-rate
composition, and the two closed catalogs of rates driven by log-density
or distance Lyapunov functions.  Classification refines a super-Poincare
certificate into DLSI / F-Sobolev / Nash-type form from its rate class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .baseline import BaselineBeta, lebesgue_baseline
from .errors import CasePremiseUnchecked
from .geometry import (
    BALLS_METRIC,
    GeometryProfile,
    SetFamily,
    V_LEVELS_LEVEL,
    build_profile,
)
from .lyapunov import LyapunovWitness, check_curvature_growth, witness_from_dict
from .potential import PotentialSpec, curvature_lower_bound, spec_from_dict, spec_to_dict

DEFAULT_EPS_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20))  # 0.05 .. 0.95


def _safe_exp(x: float) -> float:
    if x > 709.0:
        return math.inf
    return math.exp(x)


@dataclass(frozen=True)
class RateFunction:
    """Evaluable s -> beta(s) in (0, +inf] with a symbolic class tag.

    class_tag: "polynomial" (params c, p: c*s^-p), "exponential"
    (params C, c, p: C*exp(c*s^-p)), "doubly_exponential" or "tabulated".
    Outside the validity range the evaluator returns +inf.
    """

    evaluator: Callable[[float], float]
    class_tag: str
    params: dict
    validity: tuple[float, float] = (0.0, math.inf)

    def __call__(self, s: float) -> float:
        lo, hi = self.validity
        if not (lo < s <= hi):
            return math.inf
        return float(self.evaluator(s))

    def probe_grid(self, points: int = 40) -> np.ndarray:
        lo, hi = self.validity
        lo = max(lo, 1e-3) if lo <= 0 else lo
        hi = min(hi, 10.0)
        return np.geomspace(max(lo * 1.0001, 1e-12), hi, points)


@dataclass(frozen=True)
class Certificate:
    """An inequality kind plus its rate, premises and provenance."""

    kind: dict
    rate: RateFunction | None
    assumptions: tuple = ()
    provenance: dict = field(default_factory=dict)
    unnormalized_constants: tuple[str, ...] = ()
    rate_table: tuple | None = None  # sampled (s, beta) rows carried through JSON

    @property
    def is_unnormalized(self) -> bool:
        return bool(self.unnormalized_constants)


# -- rate class tags ---------------------------------------------------------


def polynomial_rate(c: float, p: float, validity=(0.0, math.inf)) -> RateFunction:
    return RateFunction(
        evaluator=lambda s: c * s ** (-p),
        class_tag="polynomial",
        params={"c": c, "p": p},
        validity=validity,
    )


def exponential_rate(C: float, c: float, p: float, validity=(0.0, math.inf)) -> RateFunction:
    return RateFunction(
        evaluator=lambda s: C * _safe_exp(c * s ** (-p)),
        class_tag="exponential",
        params={"C": C, "c": c, "p": p},
        validity=validity,
    )


def fit_class_tag(evaluator: Callable[[float], float], validity, points: int = 40):
    """(tag, params, residual) from log-log probes of the evaluator.

    Fits both a polynomial shape log b = log c - p log s and an
    exponential shape log log b = log c + p log(1/s); keeps the better
    fit when its max relative residual is below 5%, else "tabulated".
    """
    lo, hi = validity
    lo = max(lo, 1e-12)
    hi = min(hi, 1e6)
    ss = np.geomspace(lo * 1.000001, hi, points)
    vals = np.array([evaluator(float(s)) for s in ss])
    keep = np.isfinite(vals) & (vals > 0)
    ss, vals = ss[keep], vals[keep]
    if len(ss) < 10 or ss[-1] / ss[0] < 10.0:
        return "tabulated", {}, math.inf

    def _linfit(x, y):
        A = np.vstack([x, np.ones_like(x)]).T
        coef, *_ = np.linalg.lstsq(A, y, rcond=None)
        resid = A @ coef - y
        scale = np.maximum(np.abs(y), 1e-12)
        return coef, float(np.max(np.abs(resid) / scale))

    best = ("tabulated", {}, math.inf)
    logs = np.log(ss)
    (slope, icept), res_poly = _linfit(logs, np.log(vals))
    if res_poly < 0.05 and slope < 0:
        best = ("polynomial", {"c": math.exp(icept), "p": -slope}, res_poly)
    big = vals > 1.0 + 1e-9
    if np.count_nonzero(big) >= 10:
        (slope, icept), res_exp = _linfit(-logs[big], np.log(np.log(vals[big])))
        if res_exp < 0.05 and slope > 0 and res_exp < best[2]:
            best = ("exponential", {"C": 1.0, "c": math.exp(icept), "p": slope}, res_exp)
    return best


# -- explicit perturbation routes --------------------------------------------


def alpha_route_one(
    base: BaselineBeta,
    profile: GeometryProfile,
    b_const: float,
    eps_grid: Sequence[float],
    s: float,
) -> float:
    """Epsilon-optimized perturbation rate.

    alpha(s) = inf over eps of (5 / 2 eps) * beta(eps*s/10 ^ eps/16 ^
    2(1-eps)/G(r)) * exp(g(r)) with r = Phi^{-1}(4b/eps v 4/(s*eps)).
    """
    if not s > 0:
        return math.inf
    if not eps_grid:
        raise ValueError("eps_grid must be non-empty")
    best = math.inf
    for eps in eps_grid:
        if not 0.0 < eps < 1.0:
            raise ValueError("eps values must lie in (0, 1)")
        y = max(4.0 * b_const / eps, 4.0 / (s * eps))
        r = profile.phi_inverse(y)
        if math.isinf(r):
            continue
        G = profile.G_of_r(r)
        g = profile.g_of_r(r)
        third = math.inf if G <= 0.0 else 2.0 * (1.0 - eps) / G
        s_loc = min(eps * s / 10.0, eps / 16.0, third)
        if not s_loc > 0:
            continue
        grown = _safe_exp(g)
        val = (2.5 / eps) * base(s_loc) * grown
        best = min(best, val)
    return best


def alpha_route_two(
    base: BaselineBeta,
    profile: GeometryProfile,
    b_const: float,
    r0: float,
    s: float,
) -> float:
    """Oscillation-based perturbation rate.

    alpha(s) = 2 exp(2 H(r0 v r*)) * beta((s/8) e^{-H(r*)}) with
    r* = Phi^{-1}(4/s v b*s/2).
    """
    if not s > 0:
        return math.inf
    y = max(4.0 / s, b_const * s / 2.0)
    r_star = profile.phi_inverse(y)
    if math.isinf(r_star):
        return math.inf
    H_in = profile.H_of_r(r_star)
    H_out = profile.H_of_r(max(r0, r_star))
    outer = 2.0 * _safe_exp(2.0 * H_out)
    inner_s = (s / 8.0) * math.exp(-min(H_in, 745.0))
    if inner_s <= 0.0:
        return math.inf
    return outer * base(inner_s)


def alpha_levelset(
    base: BaselineBeta,
    profile: GeometryProfile,
    b_const: float,
    eps_grid: Sequence[float],
    s: float,
) -> float:
    """Route-one rate over the level-set profile (g = r + 2 variant)."""
    if profile.family.enlargement != "level":
        raise ValueError("alpha_levelset expects a level-enlargement profile")
    return alpha_route_one(base, profile, b_const, eps_grid, s)


def alpha_general(
    beta_local: Callable[[float, float], float],
    profile: GeometryProfile,
    b_const: float,
    s: float,
    exact_chaining: bool = True,
) -> float:
    """Compose a local rate beta(r, s) through the drift at scale s.

    Plain mode evaluates beta(Phi^{-1}(2/s), s/2).  Exact mode carries
    the (1 + b/Phi(r)) amplification produced when the local term is
    re-injected through the drift bound: the local scale shrinks to
    s / (2 (1 + b/Phi(r))) and the rate is multiplied by the same factor.
    """
    if not s > 0:
        return math.inf
    r = profile.phi_inverse(2.0 / s)
    if math.isinf(r):
        return math.inf
    if not exact_chaining or b_const == 0.0:
        return beta_local(r, s / 2.0)
    phi_r = profile.phi_of_r(r)
    factor = 1.0 + (b_const / phi_r if phi_r > 0 else math.inf)
    if math.isinf(factor):
        return math.inf
    return factor * beta_local(r, s / (2.0 * factor))


# -- log-density catalog ------------------------------------------------------


@dataclass(frozen=True)
class PowerLaw:
    """u -> coeff * u^exponent on u >= 0, with closed-form composition."""

    coeff: float = 1.0
    exponent: float = 1.0

    def __call__(self, u: float) -> float:
        if u < 0:
            raise ValueError("power law evaluated at negative argument")
        return self.coeff * u**self.exponent


def monotone_inverse(fn: Callable[[float], float], y: float) -> float:
    """Inverse of an increasing-to-infinity fn by doubling + bisection."""
    if fn(0.0) >= y:
        return 0.0
    hi = 1.0
    while fn(hi) < y:
        hi *= 2.0
        if hi > 1e12:
            return math.inf
    lo = hi / 2.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if fn(mid) >= y:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def beta_logdensity(
    variant: int,
    eta: Callable[[float], float],
    gamma_or_theta: Callable[[float], float],
    n: int,
    c: float,
    C: float,
    s: float,
) -> float:
    """Rates from the e^{aV} Lyapunov catalog.

    variant 1: C (1 + e^{u} gamma^n(u)),                 u = eta^{-1}(c/s)
    variant 2: C (1 + theta^n(u) s^{-n/2} e^{(n+4)u/2}), u = eta^{-1}(c/s)
    """
    if variant not in (1, 2):
        raise ValueError("variant must be 1 or 2")
    if not (c > 0 and C > 0 and s > 0):
        raise ValueError("need c, C, s > 0")
    u = monotone_inverse(eta, c / s)
    if math.isinf(u):
        return math.inf
    if variant == 1:
        return C * (1.0 + _safe_exp(u) * gamma_or_theta(u) ** n)
    return C * (
        1.0 + gamma_or_theta(u) ** n * s ** (-n / 2.0) * _safe_exp((n + 4.0) * u / 2.0)
    )


# -- distance catalog ---------------------------------------------------------


def distance_exponent(case: int, b: float, b_prime: float | None = None) -> float:
    """Exponent p of the rate C e^{c (1/s)^p} per curvature case."""
    if case == 1:
        if not b > 1:
            raise ValueError("case 1 requires b > 1")
        return b / (2.0 * min(b - 1.0, 1.0))
    if case in (2, 4):
        if b_prime is None or not (b > 1 and b_prime >= b):
            raise ValueError("cases 2/4 require b' >= b > 1")
        return b_prime / (b_prime + b - 2.0)
    if case == 3:
        return 1.0
    raise ValueError("case must be in {1, 2, 3, 4}")


_CASE_PREMISES = {
    1: ("curvature_sign_nonneg", "growth_lower", "curvature_growth"),
    2: ("curvature_sign_nonneg", "growth_lower", "growth_upper", "curvature_growth"),
    3: ("curvature_sign_nonpos", "growth_quadratic", "curvature_growth"),
    4: ("curvature_sign_nonpos", "growth_lower", "growth_upper", "curvature_growth"),
}


def beta_distance(
    case: int,
    b: float,
    b_prime: float | None,
    c: float,
    C: float,
    s: float,
    assumptions: Sequence[Mapping],
) -> float:
    """Rate C e^{c (1/s)^p} from the e^{a|x|^b} Lyapunov catalog.

    Raises CasePremiseUnchecked unless every premise required by the
    case appears (satisfied) in the assumptions list.
    """
    names = {a.get("name") for a in assumptions if a.get("satisfied", False)}
    missing = [p for p in _CASE_PREMISES[case] if p not in names]
    if missing:
        raise CasePremiseUnchecked(f"missing checked premises: {missing}")
    if not (c > 0 and C > 0 and s > 0):
        raise ValueError("need c, C, s > 0")
    p = distance_exponent(case, b, b_prime)
    return C * _safe_exp(c * (1.0 / s) ** p)


def distance_premises(
    spec: PotentialSpec,
    case: int,
    b: float | None = None,
    b_prime: float | None = None,
    R_check: float = 6.0,
) -> tuple[list[dict], float, float | None]:
    """Run the curvature/growth checks a distance-route case requires.

    Returns (assumptions, b, b_prime); growth exponents default to the
    leading tail power of V.
    """
    p_lead, c_lead = spec.tail_power()
    if b is None:
        b = p_lead
    c0 = curvature_lower_bound(spec, R_check)
    growth = check_curvature_growth(spec, c0, R=R_check)
    assumptions = [
        {
            "name": "curvature_sign_nonneg" if c0 >= 0 else "curvature_sign_nonpos",
            "satisfied": True,
            "c0": c0,
        },
        {
            "name": "curvature_growth",
            "satisfied": bool(growth.max_violation <= 1e-10),
            "max_violation": growth.max_violation,
        },
    ]
    if case in (1, 2, 4):
        ok = p_lead > b or (p_lead == b and c_lead > 0)
        assumptions.append(
            {"name": "growth_lower", "satisfied": bool(ok), "b": b, "lead": [p_lead, c_lead]}
        )
    if case in (2, 4):
        if b_prime is None:
            b_prime = p_lead
        ok = b_prime > p_lead or (b_prime == p_lead and c_lead > 0)
        assumptions.append(
            {"name": "growth_upper", "satisfied": bool(ok), "b_prime": b_prime}
        )
    if case == 3:
        ok = p_lead > 2.0 or (p_lead == 2.0 and c_lead + c0 / 2.0 > 0)
        assumptions.append({"name": "growth_quadratic", "satisfied": bool(ok)})
    return assumptions, b, b_prime


# -- classification -----------------------------------------------------------


def classify(cert: Certificate) -> Certificate:
    """Refine a SPI certificate's kind from its rate class.

    exponential p = 1 -> DLSI; exponential p > 1 (sub-quadratic growth
    branch p = b/(2(b-1)), 1 < b < 2) -> F-Sobolev with exponent
    2(1 - 1/b) = 1/p; polynomial -> Nash-type tag, kind unchanged.
    """
    if cert.kind.get("kind") != "SPI" or cert.rate is None:
        return cert
    tag = cert.rate.class_tag
    params = cert.rate.params
    if tag == "exponential":
        p = float(params["p"])
        if abs(p - 1.0) <= 0.05:
            kind = {
                "kind": "DLSI",
                "C_LS": float(params.get("c", 1.0)),
                "D_LS": max(math.log(max(params.get("C", 1.0), 1.0)), 0.0),
            }
            extra = tuple(
                k for k in ("C_LS", "D_LS") if k not in cert.unnormalized_constants
            )
            return replace(
                cert,
                kind=kind,
                unnormalized_constants=cert.unnormalized_constants + extra,
            )
        if p > 1.0:
            if "b" in params and 1.0 < params["b"] < 2.0:
                exponent = 2.0 * (1.0 - 1.0 / float(params["b"]))
            else:
                exponent = 1.0 / p
            return replace(cert, kind={"kind": "FSob", "exponent": exponent})
        return cert
    if tag == "polynomial":
        return replace(cert, kind={"kind": "SPI", "subtype": "nash"})
    return cert


# -- certificate assembly ------------------------------------------------------


def _route_rate(
    evaluator: Callable[[float], float], s_max: float
) -> RateFunction:
    tag, params, _ = fit_class_tag(evaluator, (1e-2, s_max if math.isfinite(s_max) else 1.0))
    return RateFunction(
        evaluator=evaluator, class_tag=tag, params=params, validity=(0.0, s_max)
    )


def certify_route_one(
    spec: PotentialSpec,
    witness: LyapunovWitness,
    base: BaselineBeta | None = None,
    family: SetFamily = BALLS_METRIC,
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    s_max: float = math.inf,
) -> Certificate:
    base = base or lebesgue_baseline(spec.n)
    profile = build_profile(spec, witness, family)
    rate = _route_rate(
        lambda s: alpha_route_one(base, profile, witness.b_const, eps_grid, s), s_max
    )
    return Certificate(
        kind={"kind": "SPI"},
        rate=rate,
        assumptions=(
            {"name": "drift_condition", "satisfied": True, "witness": witness.to_dict()},
        ),
        provenance={
            "route": "main1",
            "inputs": {
                "potential": spec_to_dict(spec),
                "witness": witness.to_dict(),
                "family": {"kind": family.kind, "enlargement": family.enlargement},
                "base": {"form": base.form, "n": base.n},
                "eps_grid": list(eps_grid),
                "s_max": s_max,
            },
        },
        unnormalized_constants=tuple(base.unnormalized),
    )


def certify_route_two(
    spec: PotentialSpec,
    witness: LyapunovWitness,
    base: BaselineBeta | None = None,
    family: SetFamily = BALLS_METRIC,
    s_max: float = math.inf,
) -> Certificate:
    base = base or lebesgue_baseline(spec.n)
    profile = build_profile(spec, witness, family)
    rate = _route_rate(
        lambda s: alpha_route_two(base, profile, witness.b_const, witness.r0, s), s_max
    )
    return Certificate(
        kind={"kind": "SPI"},
        rate=rate,
        assumptions=(
            {"name": "drift_condition", "satisfied": True, "witness": witness.to_dict()},
        ),
        provenance={
            "route": "main2",
            "inputs": {
                "potential": spec_to_dict(spec),
                "witness": witness.to_dict(),
                "family": {"kind": family.kind, "enlargement": family.enlargement},
                "base": {"form": base.form, "n": base.n},
                "s_max": s_max,
            },
        },
        unnormalized_constants=tuple(base.unnormalized),
    )


def certify_levelset(
    spec: PotentialSpec,
    witness: LyapunovWitness,
    base: BaselineBeta | None = None,
    eps_grid: Sequence[float] = DEFAULT_EPS_GRID,
    s_max: float = math.inf,
) -> Certificate:
    cert = certify_route_one(
        spec, witness, base=base, family=V_LEVELS_LEVEL, eps_grid=eps_grid, s_max=s_max
    )
    prov = dict(cert.provenance)
    prov["route"] = "levelset"
    return replace(cert, provenance=prov)


def condcat_premises(
    spec: PotentialSpec,
    eta: Callable[[float], float],
    a0: float = 0.5,
    R: float = 4.0,
    R_far: float = 20.0,
    points: int = 2001,
) -> list[dict]:
    """Numeric spot-checks of the log-density catalog conditions.

    Verifies V -> infinity, the drift inequality
    (1 - a0)|grad V|^2 - Lap V >= eta(V) outside radius R, and records
    the tail bound for eta(V)/|grad V|^2 without using it numerically.
    """
    p_lead, c_lead = spec.tail_power()
    rho = np.linspace(R, R_far, points)
    g2 = spec.radial_d1(rho) ** 2
    lap = spec.laplacian(rho)
    eta_v = np.array([eta(max(float(v), 0.0)) for v in spec.radial_value(rho)])
    slack = (1.0 - a0) * g2 - lap - eta_v
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(g2 > 0, eta_v / g2, math.inf)
    return [
        {"name": "V_coercive", "satisfied": bool(p_lead > 0 and c_lead > 0)},
        {
            "name": "drift_inequality",
            "satisfied": bool(np.min(slack) >= 0.0),
            "min_slack": float(np.min(slack)),
            "a0": a0,
            "outside_radius": R,
        },
        {
            "name": "eta_over_grad_sq_bounded",
            "satisfied": bool(np.max(ratio) < math.inf),
            "sup_on_grid": float(np.max(ratio)),
        },
    ]


def certify_logdensity(
    spec: PotentialSpec,
    variant: int,
    eta: PowerLaw,
    gamma_or_theta: PowerLaw,
    c: float = 1.0,
    C: float = 1.0,
    a0: float = 0.5,
    s_max: float = 1.0,
) -> Certificate:
    assumptions = condcat_premises(spec, eta, a0=a0)
    if not all(a["satisfied"] for a in assumptions):
        bad = [a["name"] for a in assumptions if not a["satisfied"]]
        raise CasePremiseUnchecked(f"log-density premises failed: {bad}")
    rate = RateFunction(
        evaluator=lambda s: beta_logdensity(variant, eta, gamma_or_theta, spec.n, c, C, s),
        class_tag="exponential",
        params={"C": C, "c": c ** (1.0 / eta.exponent), "p": 1.0 / eta.exponent},
        validity=(0.0, s_max),
    )
    return Certificate(
        kind={"kind": "SPI"},
        rate=rate,
        assumptions=tuple(assumptions),
        provenance={
            "route": f"logdensity{variant}",
            "inputs": {
                "potential": spec_to_dict(spec),
                "eta": {"coeff": eta.coeff, "exponent": eta.exponent},
                "envelope": {
                    "coeff": gamma_or_theta.coeff,
                    "exponent": gamma_or_theta.exponent,
                },
                "c": c,
                "C": C,
                "a0": a0,
                "s_max": s_max,
            },
        },
        unnormalized_constants=("c", "C"),
    )


def certify_distance(
    spec: PotentialSpec,
    case: int,
    b: float | None = None,
    b_prime: float | None = None,
    c: float = 1.0,
    C: float = 1.0,
    R_check: float = 6.0,
    s_max: float = 1.0,
) -> Certificate:
    assumptions, b, b_prime = distance_premises(spec, case, b, b_prime, R_check)
    if not all(a["satisfied"] for a in assumptions):
        bad = [a["name"] for a in assumptions if not a["satisfied"]]
        raise CasePremiseUnchecked(f"distance-route premises failed: {bad}")
    p = distance_exponent(case, b, b_prime)
    params = {"C": C, "c": c, "p": p, "b": b}
    if b_prime is not None:
        params["b_prime"] = b_prime
    rate = RateFunction(
        evaluator=lambda s: beta_distance(case, b, b_prime, c, C, s, assumptions),
        class_tag="exponential",
        params=params,
        validity=(0.0, s_max),
    )
    return Certificate(
        kind={"kind": "SPI"},
        rate=rate,
        assumptions=tuple(assumptions),
        provenance={
            "route": "distance",
            "inputs": {
                "potential": spec_to_dict(spec),
                "case": case,
                "b": b,
                "b_prime": b_prime,
                "c": c,
                "C": C,
                "R_check": R_check,
                "s_max": s_max,
            },
        },
        unnormalized_constants=("c", "C"),
    )


# -- (de)serialization ---------------------------------------------------------


def rate_to_dict(rate: RateFunction, table: Sequence | None = None) -> dict:
    d: dict = {
        "class_tag": rate.class_tag,
        "params": {k: float(v) for k, v in sorted(rate.params.items())},
        "validity": [rate.validity[0], rate.validity[1]],
    }
    if table is not None:
        d["table"] = [[float(s), float(v)] for s, v in table]
    return d


def certificate_to_dict(cert: Certificate, table_s: Sequence[float] | None = None) -> dict:
    table = cert.rate_table
    if table_s is not None and cert.rate is not None:
        table = [(float(s), cert.rate(float(s))) for s in table_s]
    return {
        "schema_version": 1,
        "kind": dict(cert.kind),
        "rate": None if cert.rate is None else rate_to_dict(cert.rate, table),
        "assumptions": [dict(a) for a in cert.assumptions],
        "provenance": dict(cert.provenance),
        "unnormalized_constants": list(cert.unnormalized_constants),
    }


def _tabulated_rate(d: dict) -> RateFunction:
    table = d.get("table") or []
    if table:
        ss = np.array([row[0] for row in table])
        vals = np.array([row[1] for row in table])

        def evaluator(s: float) -> float:
            if s < ss[0] or s > ss[-1]:
                return math.inf
            return float(np.interp(math.log(s), np.log(ss), vals))

    else:
        def evaluator(s: float) -> float:
            return math.inf

    lo, hi = d.get("validity", [0.0, math.inf])
    return RateFunction(evaluator, d.get("class_tag", "tabulated"), dict(d.get("params", {})), (lo, hi))


def rate_from_dict(d: dict) -> RateFunction:
    tag = d.get("class_tag")
    params = d.get("params", {})
    lo, hi = d.get("validity", [0.0, math.inf])
    validity = (float(lo), float(hi))
    if tag == "polynomial" and {"c", "p"} <= params.keys():
        return polynomial_rate(params["c"], params["p"], validity)
    if tag == "exponential" and {"C", "c", "p"} <= params.keys():
        rf = exponential_rate(params["C"], params["c"], params["p"], validity)
        return replace(rf, params=dict(params))
    return _tabulated_rate(d)


def certificate_from_dict(d: dict) -> Certificate:
    """Rebuild a certificate; route inputs win over the stored table."""
    rate = None
    inputs = d.get("provenance", {}).get("inputs")
    route = d.get("provenance", {}).get("route")
    if inputs and route:
        rate = _rebuild_route_rate(route, inputs)
    if rate is None and d.get("rate") is not None:
        rate = rate_from_dict(d["rate"])
    table = None
    if d.get("rate") and d["rate"].get("table"):
        table = tuple((float(s), float(v)) for s, v in d["rate"]["table"])
    return Certificate(
        kind=dict(d["kind"]),
        rate=rate,
        assumptions=tuple(d.get("assumptions", [])),
        provenance=dict(d.get("provenance", {})),
        unnormalized_constants=tuple(d.get("unnormalized_constants", [])),
        rate_table=table,
    )


def _rebuild_route_rate(route: str, inputs: dict) -> RateFunction | None:
    spec = spec_from_dict(inputs["potential"]) if "potential" in inputs else None
    s_max = float(inputs.get("s_max", math.inf))
    if route in ("main1", "main2", "levelset"):
        witness = witness_from_dict(inputs["witness"])
        fam = SetFamily(**inputs["family"])
        base = lebesgue_baseline(int(inputs["base"]["n"]))
        profile = build_profile(spec, witness, fam)
        if route == "main2":
            return _route_rate(
                lambda s: alpha_route_two(base, profile, witness.b_const, witness.r0, s),
                s_max,
            )
        eps = tuple(inputs["eps_grid"])
        return _route_rate(
            lambda s: alpha_route_one(base, profile, witness.b_const, eps, s), s_max
        )
    if route in ("logdensity1", "logdensity2"):
        eta = PowerLaw(**inputs["eta"])
        env = PowerLaw(**inputs["envelope"])
        variant = 1 if route.endswith("1") else 2
        c, C = float(inputs["c"]), float(inputs["C"])
        return RateFunction(
            evaluator=lambda s: beta_logdensity(variant, eta, env, spec.n, c, C, s),
            class_tag="exponential",
            params={"C": C, "c": c ** (1.0 / eta.exponent), "p": 1.0 / eta.exponent},
            validity=(0.0, s_max),
        )
    if route == "distance":
        cert = certify_distance(
            spec,
            int(inputs["case"]),
            b=inputs.get("b"),
            b_prime=inputs.get("b_prime"),
            c=float(inputs["c"]),
            C=float(inputs["C"]),
            R_check=float(inputs.get("R_check", 6.0)),
            s_max=s_max,
        )
        return cert.rate
    return None
