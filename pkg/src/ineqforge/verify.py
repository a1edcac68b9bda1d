"""Desk-scale oracle: a 1-D finite-difference model of Delta - grad V . grad.

The model carries the measure on grid nodes and conductances on edges
(no-flux truncation, so constants stay in the kernel and mu(1) = 1).
It measures spectral gaps, realized super-Poincare rates, entropy/energy
ratios and the drift-energy inequality, and checks that certificates
dominate what the model actually achieves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh_tridiagonal, solveh_banded

from .certificates import Certificate
from .errors import ModeMismatch, SolverFailure, TailMassTooLarge
from .lyapunov import LyapunovWitness, drift_profile
from .potential import PotentialSpec, tail_mass_bound

MIN_NODES = 201
CLIP = 1e8
DRIFT_ENERGY_TOL = 1e-3


@dataclass(frozen=True)
class DiscreteModel:
    """Grid, normalized node weights and edge conductances for one potential."""

    spec: PotentialSpec
    xs: np.ndarray
    h: float
    node_weights: np.ndarray  # sums to 1
    edge_cond: np.ndarray  # e^{-V(mid)} h / Z_h, length m - 1
    center: float = 0.0

    @property
    def m(self) -> int:
        return len(self.xs)


def build_model(
    spec: PotentialSpec, L: float = 8.0, m: int = 2001, center: float = 0.0
) -> DiscreteModel:
    """Uniform no-flux model on [center - L, center + L] with m nodes."""
    if spec.n != 1:
        raise ValueError("the oracle is one-dimensional")
    if m < MIN_NODES:
        raise ValueError(f"need at least {MIN_NODES} nodes")
    xs = np.linspace(center - L, center + L, m)
    h = float(xs[1] - xs[0])
    v_nodes = spec.radial_value(np.abs(xs - center))
    vmin = float(np.min(v_nodes))  # common shift, cancels on normalization
    raw = np.exp(-(v_nodes - vmin)) * h
    z = float(np.sum(raw))
    mids = 0.5 * (xs[:-1] + xs[1:])
    v_mids = spec.radial_value(np.abs(mids - center))
    edge = np.exp(-(v_mids - vmin)) * h / z
    tail = tail_mass_bound(spec, L - 1.0)
    if tail > 1e-10 * z * math.exp(-vmin):
        raise TailMassTooLarge(tail, 1e-10 * z * math.exp(-vmin))
    return DiscreteModel(
        spec=spec,
        xs=xs,
        h=h,
        node_weights=raw / z,
        edge_cond=edge,
        center=center,
    )


# -- functionals -------------------------------------------------------------


def functional(model: DiscreteModel, f, kind: str) -> float:
    """mean, variance, entropy of f^2, l1 norm, or Dirichlet energy."""
    f = np.asarray(f, dtype=float)
    w = model.node_weights
    if kind == "mean":
        return float(np.sum(w * f))
    if kind == "variance":
        mu = float(np.sum(w * f))
        return float(np.sum(w * f**2) - mu**2)
    if kind == "l1":
        return float(np.sum(w * np.abs(f)))
    if kind == "energy":
        diff = (f[1:] - f[:-1]) / model.h
        return float(np.sum(diff**2 * model.edge_cond))
    if kind == "entropy":
        if not np.any(f != 0.0):
            raise ValueError("entropy needs a nonzero function")
        f2 = f**2
        s = float(np.sum(w * f2))
        terms = np.where(f2 > 0.0, f2 * np.log(np.where(f2 > 0.0, f2, 1.0)), 0.0)
        return float(np.sum(w * terms) - s * math.log(s))
    raise ValueError(f"unknown functional {kind!r}")


# -- spectral gap -------------------------------------------------------------


def _symmetrized_tridiag(model: DiscreteModel) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of M^{-1/2} K M^{-1/2} (tridiagonal, PSD)."""
    w = model.node_weights
    c = model.edge_cond / model.h**2
    m = model.m
    diag = np.zeros(m)
    diag[:-1] += c
    diag[1:] += c
    off = -c
    sw = np.sqrt(w)
    return diag / w, off / (sw[:-1] * sw[1:])


@dataclass(frozen=True)
class GapResult:
    gap: float
    poincare_constant: float


def spectral_gap(model: DiscreteModel) -> GapResult:
    """Smallest nonzero eigenvalue by Sturm-sequence bisection (LAPACK)."""
    d, e = _symmetrized_tridiag(model)
    try:
        vals = eigh_tridiagonal(d, e, select="i", select_range=(0, 1), eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise SolverFailure(str(exc)) from exc
    gap = float(vals[1])
    if not gap > 0:
        raise SolverFailure("nonpositive spectral gap")
    return GapResult(gap=gap, poincare_constant=1.0 / gap)


def spectral_gap_inverse_iteration(
    model: DiscreteModel, shift: float = 1e-3, tol: float = 1e-12, max_iter: int = 2000
) -> GapResult:
    """Independent strategy: deflated shifted inverse iteration."""
    d, e = _symmetrized_tridiag(model)
    m = len(d)
    v0 = np.sqrt(model.node_weights)
    v0 /= np.linalg.norm(v0)
    ab = np.zeros((2, m))
    ab[0, 1:] = e
    ab[1, :] = d + shift

    def mult(y):
        out = d * y
        out[:-1] += e * y[1:]
        out[1:] += e * y[:-1]
        return out

    x = model.xs - np.sum(model.node_weights * model.xs)
    x = x - (v0 @ x) * v0
    x /= np.linalg.norm(x)
    lam_old = math.inf
    for _ in range(max_iter):
        y = solveh_banded(ab, x)
        y = y - (v0 @ y) * v0
        nrm = np.linalg.norm(y)
        if nrm == 0.0:
            raise SolverFailure("inverse iteration collapsed onto the kernel")
        y /= nrm
        lam = float(y @ mult(y))
        if abs(lam - lam_old) <= tol * max(abs(lam), 1.0):
            resid = float(np.linalg.norm(mult(y) - lam * y))
            if resid <= 1e-8 * max(abs(lam), 1.0):
                return GapResult(gap=lam, poincare_constant=1.0 / lam)
        lam_old = lam
        x = y
    raise SolverFailure("inverse iteration did not converge")


def generator_eigenvectors(model: DiscreteModel, k: int = 8) -> list[np.ndarray]:
    """First k eigenvectors of the discrete generator, sign-normalized."""
    d, e = _symmetrized_tridiag(model)
    try:
        _, vecs = eigh_tridiagonal(d, e, select="i", select_range=(0, k - 1))
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise SolverFailure(str(exc)) from exc
    sw = np.sqrt(model.node_weights)
    out = []
    for j in range(vecs.shape[1]):
        f = vecs[:, j] / sw
        i = int(np.argmax(np.abs(f)))
        if f[i] < 0:
            f = -f
        out.append(f)
    return out


# -- battery -------------------------------------------------------------------


@dataclass(frozen=True)
class TestBattery:
    """Named grid functions driving the empirical bounds."""

    members: tuple = ()

    def __post_init__(self):
        for name, f in self.members:
            if not np.all(np.isfinite(f)):
                raise ValueError(f"battery member {name} is not finite")
            if not np.any(f != 0.0):
                raise ValueError(f"battery member {name} is identically zero")

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def build_battery(model: DiscreteModel, n_eig: int = 8) -> TestBattery:
    """Polynomials under a gaussian cutoff, hats, clipped exponentials,
    smoothed indicators, and the first discrete eigenvectors."""
    xs = model.xs - model.center
    L = float(xs[-1])
    members: list[tuple[str, np.ndarray]] = []
    cutoff = np.exp(-((xs / (L / 3.0)) ** 2))
    for k in range(7):
        members.append((f"poly{k}", np.clip(xs**k * cutoff, -CLIP, CLIP)))
    for i, c in enumerate(np.linspace(-L / 2.0, L / 2.0, 5)):
        members.append((f"hat{i}", np.maximum(0.0, 1.0 - np.abs(xs - c) / (L / 4.0))))
    for lam in (0.25, -0.25, 0.5, -0.5, 1.0, -1.0):
        members.append((f"exp{lam:+g}", np.minimum(np.exp(lam * xs), CLIP)))
    intervals = ((-L / 2.0, 0.0), (0.0, L / 2.0), (-L / 4.0, L / 4.0), (L / 8.0, 3.0 * L / 8.0))
    for i, (a, b) in enumerate(intervals):
        f = 0.5 * (np.tanh((xs - a) / 0.25) - np.tanh((xs - b) / 0.25))
        members.append((f"ind{i}", f))
    for j, f in enumerate(generator_eigenvectors(model, n_eig)):
        members.append((f"eig{j}", np.clip(f, -CLIP, CLIP)))
    return TestBattery(tuple(members))


# -- empirical quantities --------------------------------------------------------


def empirical_beta_detail(model: DiscreteModel, battery: TestBattery, s: float):
    """(value, witness name): max over f of (mu(f^2) - s E(f))_+ / mu(|f|)^2."""
    if not s > 0:
        raise ValueError("s must be > 0")
    w = model.node_weights
    best, best_name = 0.0, ""
    for name, f in battery:
        num = float(np.sum(w * f**2)) - s * functional(model, f, "energy")
        if num <= 0.0:
            continue
        val = num / functional(model, f, "l1") ** 2
        if val > best:
            best, best_name = val, name
    return best, best_name


def empirical_beta(model: DiscreteModel, battery: TestBattery, s: float) -> float:
    """Certified lower bound on the model's optimal super-Poincare rate."""
    return empirical_beta_detail(model, battery, s)[0]


def empirical_lsi(model: DiscreteModel, battery: TestBattery) -> float:
    """Lower bound on the optimal log-Sobolev constant from the battery."""
    best = 0.0
    found = False
    for _, f in battery:
        en = functional(model, f, "energy")
        if en <= 1e-14:
            continue
        found = True
        best = max(best, functional(model, f, "entropy") / en)
    if not found:
        raise ValueError("battery has no member with positive energy")
    return best


# -- soundness reports --------------------------------------------------------------


@dataclass(frozen=True)
class SoundnessReport:
    s_grid: tuple = ()
    empirical: tuple = ()
    certified: tuple = ()
    violations: tuple = ()
    mode: str = "absolute"
    kappa: float | None = None
    flags: tuple = ()
    witnesses: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        d = {
            "s_grid": list(self.s_grid),
            "empirical": list(self.empirical),
            "certified": list(self.certified),
            "violations": [dict(v) for v in self.violations],
            "mode": self.mode,
        }
        if self.kappa is not None:
            d["kappa"] = self.kappa
        if self.flags:
            d["flags"] = list(self.flags)
        return d


def check_drift_energy(
    model: DiscreteModel,
    spec: PotentialSpec,
    witness: LyapunovWitness,
    battery: TestBattery,
    tol: float = DRIFT_ENERGY_TOL,
) -> SoundnessReport:
    """Check sum f^2 (-LW/W) dmu <= (1 + tol) * energy(f) per battery member.

    The drift side is analytic (closed-form ratio at the nodes), so only
    the inequality itself is exposed to quadrature error.
    """
    rho = np.abs(model.xs - model.center)
    fam = witness.witness_family()
    keep = np.ones(model.m, dtype=bool)
    if witness.family == "exp_dist" and witness.b_exp is not None and witness.b_exp < 2.0:
        keep = rho > 0.0  # drop the singular node; raises the analytic side
        rho = rho[keep]
    neg_drift = -drift_profile(spec, fam, rho)
    violations = []
    lhs_list, rhs_list = [], []
    for name, f in battery:
        lhs = float(np.sum(f[keep] ** 2 * neg_drift * model.node_weights[keep]))
        rhs = functional(model, f, "energy")
        lhs_list.append(lhs)
        rhs_list.append(rhs)
        if lhs > rhs * (1.0 + tol):
            violations.append({"name": name, "lhs": lhs, "rhs": rhs, "excess": lhs - rhs})
    return SoundnessReport(
        s_grid=(),
        empirical=tuple(lhs_list),
        certified=tuple(rhs_list),
        violations=tuple(violations),
        mode="drift-energy",
    )


def check_certificate(
    cert: Certificate,
    model: DiscreteModel,
    battery: TestBattery,
    s_grid,
    mode: str = "absolute",
) -> SoundnessReport:
    """Certified rate must dominate the realized rate on every s.

    absolute: rate(s) >= empirical(s) pointwise.  shape: report the single
    kappa >= 1 with kappa * rate(s) >= empirical(s); required for
    certificates carrying unnormalized constants.
    """
    if mode not in ("absolute", "shape"):
        raise ValueError("mode must be 'absolute' or 'shape'")
    if mode == "absolute" and cert.is_unnormalized:
        raise ModeMismatch("unnormalized certificate requires shape mode")
    if cert.rate is None:
        raise ValueError("certificate has no rate function")
    s_grid = [float(s) for s in s_grid]
    emp, certv, names = [], [], []
    for s in s_grid:
        e, name = empirical_beta_detail(model, battery, s)
        emp.append(e)
        certv.append(cert.rate(s))
        names.append(name)
    violations = []
    flags = []
    n_inf = sum(1 for v in certv if math.isinf(v))
    if n_inf:
        flags.append(f"uninformative: {n_inf} of {len(certv)} points have rate +inf")
    kappa = None
    if mode == "absolute":
        for s, e, cv, name in zip(s_grid, emp, certv, names):
            if e > cv * (1.0 + 1e-9):
                violations.append({"s": s, "emp": e, "cert": cv, "witness_fn": name})
    else:
        ratios = []
        for s, e, cv, name in zip(s_grid, emp, certv, names):
            if cv <= 0.0:
                violations.append({"s": s, "emp": e, "cert": cv, "witness_fn": name})
            elif not math.isinf(cv):
                ratios.append(e / cv)
        kappa = max(1.0, max(ratios) if ratios else 1.0)
    return SoundnessReport(
        s_grid=tuple(s_grid),
        empirical=tuple(emp),
        certified=tuple(certv),
        violations=tuple(violations),
        mode=mode,
        kappa=kappa,
        flags=tuple(flags),
        witnesses=tuple(names),
    )
