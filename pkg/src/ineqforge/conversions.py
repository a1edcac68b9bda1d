"""Dictionary between super-Poincare rates and F-Sobolev descriptors.

xi(t) = sup_u (1/u - beta(u)/(u t)) converts a rate into the integrand
whose average yields F; the reverse direction inverts F on its monotone
tail.  Shape detection fits log beta against 1/u to recognize the
defective-log-Sobolev class beta(u) = c e^{c'/u}, and Rothaus tightening
turns a defective constant pair plus a Poincare constant into a tight
log-Sobolev constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import NotInvertible, XiDiverges

U_LO, U_HI = 1e-6, 1e6
DLSI_RESIDUAL_THRESHOLD = 0.05


@dataclass(frozen=True)
class FSobDescriptor:
    """Evaluable F on [1, inf) with defective constants and a monotone tail.

    u_star marks the recorded point beyond which F is non-decreasing;
    inversion is only attempted to the right of it.
    """

    evaluator: Callable[[float], float]
    c1: float = 1.0
    c2: float = 1.0
    u_star: float = 1.0
    exponent_tag: float | None = None

    def __call__(self, u: float) -> float:
        return float(self.evaluator(u))


def _default_u_grid() -> np.ndarray:
    return np.geomspace(U_LO, U_HI, 241)


def xi_from_beta(beta: Callable[[float], float], t: float, u_grid=None) -> float:
    """sup over u > 0 of (1/u - beta(u)/(u t)), with divergence sentinels.

    The sup is taken over a log grid refined by golden-section search
    around the argmax; returns 0 when every value is nonpositive and
    +inf when values still grow at the lower grid boundary.
    """
    if not t > 0:
        raise ValueError("t must be > 0")
    us = _default_u_grid() if u_grid is None else np.asarray(u_grid, dtype=float)

    def h(u: float) -> float:
        b = beta(u)
        if math.isinf(b):
            return -math.inf
        return (1.0 - b / t) / u

    vals = np.array([h(float(u)) for u in us])
    imax = int(np.argmax(vals))
    if vals[imax] <= 0.0:
        return 0.0
    lo = us[max(imax - 1, 0)]
    hi = us[min(imax + 1, len(us) - 1)]
    if imax == 0:
        # the maximum sits at or below the window edge: walk down in
        # decades until h turns over, or declare divergence at the floor
        u = float(us[0])
        while h(u / 10.0) > h(u):
            u /= 10.0
            if u < 1e-18:
                return math.inf
        lo, hi = u / 10.0, float(us[min(1, len(us) - 1)])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = math.log(lo), math.log(hi)
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = h(math.exp(c)), h(math.exp(d))
    for _ in range(80):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = h(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = h(math.exp(d))
    best = max(float(vals[imax]), fc, fd)
    return best


def fsob_from_beta(
    beta: Callable[[float], float],
    C1: float,
    C2: float,
    u: float,
    u_grid=None,
) -> float:
    """F(u) = (C1/u) * integral_0^u xi(t/2) dt - C2 by adaptive quadrature."""
    if not u > 0:
        raise ValueError("u must be > 0")
    if C1 == 0.0:
        return -C2
    # xi is non-decreasing for non-increasing beta, so one endpoint probe
    # detects divergence inside the range
    if math.isinf(xi_from_beta(beta, u / 2.0, u_grid)):
        raise XiDiverges(f"xi diverges at t = {u / 2.0}")
    integral, _ = quad(
        lambda t: xi_from_beta(beta, t / 2.0, u_grid), 0.0, u, limit=200
    )
    return C1 / u * integral - C2


def beta_from_fsob(F: FSobDescriptor, C1: float, C2: float, u: float) -> float:
    """beta(u) = C1 * F^{-1}(C2 (1 + 1/u)) on the recorded monotone tail."""
    if not u > 0:
        raise ValueError("u must be > 0")
    target = C2 * (1.0 + 1.0 / u)
    lo = F.u_star
    if F(lo) > target:
        raise NotInvertible(f"target {target} below F({lo}) = {F(lo)}")
    hi = max(2.0 * lo, 2.0)
    while F(hi) < target:
        hi *= 2.0
        if hi > 1e300:
            raise NotInvertible("F does not reach the target on the probed range")
    for _ in range(200):
        mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * (lo + hi)
        if F(mid) < target:
            lo = mid
        else:
            hi = mid
    return C1 * hi


def detect_dlsi(samples: Sequence[tuple[float, float]]) -> dict:
    """Least-squares fit of log beta = log c + c'/u over the samples.

    Requires at least 8 samples spanning two decades of u.  The family
    is accepted when the max relative residual on beta is below 5%;
    a flat fit is reported as the degenerate c' = 0 case.
    """
    if len(samples) < 8:
        raise ValueError("need at least 8 samples")
    us = np.array([float(u) for u, _ in samples])
    bs = np.array([float(b) for _, b in samples])
    if np.max(us) / np.min(us) < 100.0 * (1.0 - 1e-9):
        raise ValueError("samples must span two decades of u")
    if np.any(bs <= 0):
        raise ValueError("beta samples must be positive")
    A = np.vstack([1.0 / us, np.ones_like(us)]).T
    coef, *_ = np.linalg.lstsq(A, np.log(bs), rcond=None)
    c_prime, log_c = float(coef[0]), float(coef[1])
    fit = A @ coef
    residual = float(np.max(np.abs(np.expm1(fit - np.log(bs)))))
    is_dlsi = residual < DLSI_RESIDUAL_THRESHOLD and c_prime >= -1e-9
    return {
        "is_dlsi": bool(is_dlsi),
        "c": math.exp(log_c),
        "c_prime": c_prime,
        "residual": residual,
        "degenerate": bool(abs(c_prime) < 1e-9),
    }


def rothaus_tighten(C_LS: float, D_LS: float, C_P: float) -> float:
    """Tight log-Sobolev constant C_LS + (D_LS + 2) * C_P.

    Standard consequence of combining a defective log-Sobolev inequality
    with a Poincare inequality; all three inputs must be positive
    (D_LS = 0 inputs are still dominated by the formula).
    """
    if C_LS <= 0 or D_LS < 0 or C_P <= 0:
        raise ValueError("need C_LS > 0, D_LS >= 0, C_P > 0")
    return C_LS + (D_LS + 2.0) * C_P


def sample_fsob(F: FSobDescriptor, us) -> list[tuple[float, float]]:
    """(u, F(u)) rows for CSV export."""
    return [(float(u), F(float(u))) for u in us]
