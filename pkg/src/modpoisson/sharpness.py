"""Sign regions, constants, and data families certifying growth sharpness.

The modified kernels are not of one sign, so lower bounds on the solution
integrals require regions of the boundary where the sign is controlled:
a band of directions nearly orthogonal to the field point's projection
(where the Gegenbauer combination is one-signed), and a cone around the
projection direction near the kernel's contact sphere (where the base
kernel dominates its subtracted tail).  The data families supported on
half balls and on reflected ball pairs realize the lower bounds; their
amplitudes are chosen so the finite prefixes here extend to summable
sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gegenbauer
from .data import BoundaryData, Support
from .errors import ConstructionError, DomainError
from .geometry import HalfSpacePoint, cos_theta_prime_array
from .kernels import KernelParams, kernel_K, kernel_KM_direct
from .quadrature import QuadratureSpec, integral_F

__all__ = [
    "SharpnessConstants",
    "compute_constants",
    "RegionSpec",
    "region_contains",
    "SignCheckReport",
    "sign_check_phi",
    "sign_check_km_cone",
    "data_half_balls",
    "data_balls_super_extension",
    "lower_bound_report",
    "balanced_sign_integral",
]


@dataclass(frozen=True)
class SharpnessConstants:
    """Constants of the sign analysis for one (lam, M) pair.

    beta1: smallest positive root of the consecutive Gegenbauer pair (1 when
    none exists); beta2: largest zero of the index-min(1, lam) polynomial;
    gamma: the tail-domination threshold; r0: largest root of the quartic
    A^4 + (1-gamma) A^2 - 2; cone_ratio A strictly between 1 and
    min(2, r0, sec(pi/2M)); reflection_amp: the super-extension amplitude;
    theta0: polar angle guaranteeing the cone's angular product condition;
    theta_fit: the larger angle above which construction balls fit the
    near-contact cone portion at their own reference points.
    """

    lam: float
    big_m: int
    beta1: float
    beta2: float
    gamma: float
    r0: float
    cone_ratio: float
    reflection_amp: float
    theta0: float
    theta_fit: float
    mu: int
    eps0: int

    @property
    def half_sign(self) -> int:
        """(-1)^(mu + eps0) = (-1)^ceil(M/2), the one-signed combination's sign."""
        return (-1) ** (self.mu + self.eps0)


def compute_constants(lam: float, big_m: int) -> SharpnessConstants:
    if lam <= 0:
        raise DomainError("lam must be positive")
    if big_m < 1:
        raise DomainError("the sharpness machinery starts at M = 1")
    mu, eps0 = divmod(big_m, 2)

    positive_roots = [r for r in gegenbauer.roots(lam, big_m) if r > 1e-13]
    positive_roots += [r for r in gegenbauer.roots(lam, big_m - 1) if r > 1e-13]
    beta1 = min(positive_roots) if positive_roots else 1.0

    beta2_roots = gegenbauer.roots(min(1.0, lam), big_m)
    beta2 = float(beta2_roots[-1]) if len(beta2_roots) else 0.0

    gamma = sum(2.0**m * gegenbauer.value_at_one(lam, m) for m in range(big_m)) ** (-1.0 / lam)
    # largest root of A^4 + (1 - gamma) A^2 - 2 = 0, via the quadratic in A^2
    b = 1.0 - gamma
    r0 = math.sqrt((-b + math.sqrt(b * b + 8.0)) / 2.0)

    upper = min(2.0, r0)
    cos_half = math.cos(math.pi / (2.0 * big_m))
    if cos_half > 1e-12:
        upper = min(upper, 1.0 / cos_half)
    cone_ratio = 0.5 * (1.0 + upper)

    reflection_amp = _reflection_amplitude(lam, big_m, cone_ratio)

    theta0 = math.asin(math.sqrt(cone_ratio / (2.0 * cone_ratio - 1.0)))
    theta_fit = 0.5 * (math.pi - math.asin(1.0 - cone_ratio**-2))

    return SharpnessConstants(
        lam=lam,
        big_m=big_m,
        beta1=beta1,
        beta2=beta2,
        gamma=gamma,
        r0=r0,
        cone_ratio=cone_ratio,
        reflection_amp=reflection_amp,
        theta0=theta0,
        theta_fit=theta_fit,
        mu=mu,
        eps0=eps0,
    )


def _min_on_interval(lam: float, m: int, lo: float, hi: float) -> float:
    """Minimum of C_m^lam over [lo, hi] via its stationary points."""
    candidates = [lo, hi]
    if m >= 1:
        candidates += [r for r in gegenbauer.roots(lam + 1.0, m - 1) if lo < r < hi]
    return min(gegenbauer.value(lam, m, t) for t in candidates)


def _reflection_amplitude(lam: float, big_m: int, a_ratio: float) -> float:
    from scipy.special import gammaln

    base = ((a_ratio + 1.0) / (a_ratio - 1.0)) ** (2.0 * lam)
    cmin = _min_on_interval(lam, big_m - 1, 1.0 / a_ratio, 1.0)
    if cmin <= 0:
        raise ConstructionError("Gegenbauer factor must stay positive on the cone interval")
    binom = math.exp(
        gammaln(2.0 * lam + big_m + 1.0) - gammaln(big_m) - gammaln(2.0 * lam + 2.0)
    )
    alt = 8.0 * math.sqrt(2.0) * (big_m + 1.0) / (2.0 * lam + big_m - 1.0) * binom / cmin
    return base * max(1.0, alt)


@dataclass(frozen=True)
class RegionSpec:
    """One of the sign regions; the |x|-dependent ones carry a reference point.

    which: 'band' (the direction band where the Gegenbauer combination is
    one-signed), 'cone' (|y'| > 1 within the double cone around the
    projection axis), 'cone_near' (cone portion with |x|/A < |y'| < A|x| on
    the positive side), 'cone_far_pos' / 'cone_far_neg' (cone portions with
    |y'| < |x|/A on either side of the reflection hyperplane).
    """

    which: str
    big_m: int
    constants: SharpnessConstants
    x_ref: HalfSpacePoint | None = None

    def __post_init__(self):
        if self.which not in ("band", "cone", "cone_near", "cone_far_pos", "cone_far_neg"):
            raise DomainError(f"unknown region {self.which!r}")
        if self.which != "band" and self.x_ref is None:
            raise DomainError("|x|-dependent regions need a reference point")


def _band_interval(constants: SharpnessConstants):
    """cos(theta') interval of the one-signed band.

    Even orders keep the positive side; odd orders need the mirrored side
    (the reflected band), so the leading Gegenbauer term keeps one sign.
    """
    b1 = constants.beta1
    if constants.big_m % 2 == 0:
        return b1 / 3.0, b1 / 2.0
    return -b1 / 2.0, -b1 / 3.0


def region_contains(region: RegionSpec, yp) -> bool:
    pts = np.atleast_2d(np.asarray(yp, dtype=float))
    return bool(_region_mask(region, pts)[0])


def _region_mask(region: RegionSpec, pts: np.ndarray) -> np.ndarray:
    c = region.constants
    x = region.x_ref
    norms = np.linalg.norm(pts, axis=-1)
    if region.which == "band":
        if region.big_m == 0:
            return np.ones(len(pts), dtype=bool)
        lo, hi = _band_interval(c)
        cosp = cos_theta_prime_array(x if x is not None else _default_axis_point(pts), pts)
        return (cosp >= lo) & (cosp <= hi)
    cosp = cos_theta_prime_array(x, pts)
    in_cone = (norms > 1.0) & (np.abs(cosp) > 1.0 / math.sqrt(c.cone_ratio))
    if region.which == "cone":
        return in_cone
    s = x.r / np.where(norms > 0, norms, np.inf)
    first = pts @ x.y_hat
    if region.which == "cone_near":
        return in_cone & (first > 0) & (s > 1.0 / c.cone_ratio) & (s < c.cone_ratio)
    if region.which == "cone_far_pos":
        return in_cone & (first > 0) & (s > c.cone_ratio)
    return in_cone & (first < 0) & (s > c.cone_ratio)


def _default_axis_point(pts: np.ndarray) -> HalfSpacePoint:
    dim = pts.shape[-1] + 1
    return HalfSpacePoint(n=dim, r=1.0, theta=0.9)


@dataclass(frozen=True)
class SignCheckReport:
    check: str
    params: dict
    samples: int
    min_value: float
    passed: bool

    def as_record(self) -> dict:
        return {
            "check": self.check,
            "params": self.params,
            "samples": self.samples,
            "min_value": self.min_value,
            "pass": self.passed,
        }


def sign_check_phi(lam: float, big_m: int, samples: int = 10_000, seed: int = 42,
                   control: bool = False) -> SignCheckReport:
    """Sample the signed Gegenbauer combination over the band's parameters.

    Draws (theta, cos(theta') in the band, zeta in [0,1], s in [0,10]) and
    reports the minimum of the signed combination; passing means strictly
    positive.  With control=True the directions are drawn outside the band
    (near the projection axis), where sign changes must appear.
    """
    constants = compute_constants(lam, big_m)
    rng = np.random.default_rng(seed)
    theta = rng.uniform(0.0, math.pi / 2.0, samples)
    if control:
        cosp = rng.uniform(0.95, 1.0, samples)
    else:
        lo, hi = _band_interval(constants)
        cosp = rng.uniform(lo, hi, samples)
    zeta = rng.uniform(0.0, 1.0, samples)
    s = rng.uniform(0.0, 10.0, samples)
    theta_big = np.sin(theta) * cosp
    signed = constants.half_sign * gegenbauer.phi_pm(lam, big_m, theta_big, s * zeta, -1)
    min_value = float(np.min(signed))
    return SignCheckReport(
        check="phi_band_sign" + ("_control" if control else ""),
        params={"lam": lam, "M": big_m, "control": control},
        samples=samples,
        min_value=min_value,
        passed=min_value > 0.0,
    )


def sign_check_km_cone(lam: float, big_m: int, x: HalfSpacePoint,
                       samples: int = 10_000, seed: int = 42) -> SignCheckReport:
    """Sample K_M / (K s^M) over the near-contact cone portion.

    The reference point must satisfy sin(theta) >= sin(theta0); the ratio is
    the kernel's integral factor, which stays positive on the closed region.
    """
    if big_m == 0:
        return SignCheckReport(
            check="km_cone_sign",
            params={"lam": lam, "M": 0},
            samples=0,
            min_value=1.0,
            passed=True,
        )
    constants = compute_constants(lam, big_m)
    if x.sin_theta < math.sin(constants.theta0) - 1e-12:
        raise DomainError(
            f"reference point needs sin(theta) >= {math.sin(constants.theta0):.6f}"
        )
    a = constants.cone_ratio
    rng = np.random.default_rng(seed)
    s = rng.uniform(1.0 / a + 1e-9, a - 1e-9, samples)
    cosp = rng.uniform(1.0 / math.sqrt(a) + 1e-9, 1.0, samples)
    dim = x.n - 1
    perp = rng.normal(size=(samples, dim))
    perp -= np.outer(perp @ x.y_hat, x.y_hat)
    norms = np.linalg.norm(perp, axis=-1)
    norms[norms == 0] = 1.0
    perp /= norms[:, None]
    sinp = np.sqrt(1.0 - cosp * cosp)
    directions = cosp[:, None] * x.y_hat[None, :] + sinp[:, None] * perp
    pts = (x.r / s)[:, None] * directions
    params = KernelParams(lam, big_m)
    ratio = kernel_KM_direct(params, x, pts) / (kernel_K(lam, x, pts) * s**big_m)
    min_value = float(np.min(ratio))
    return SignCheckReport(
        check="km_cone_sign",
        params={"lam": lam, "M": big_m, "theta": x.theta, "r": x.r},
        samples=samples,
        min_value=min_value,
        passed=min_value > 0.0,
    )


# ---------------------------------------------------------------------------
# data constructions


def data_half_balls(n: int, psi_values, centers, lam: float, big_m: int) -> BoundaryData:
    """Data supported on unit half balls along the second boundary axis.

    On each ball the profile is (1 - distance) * |y_1'| restricted to the
    half where (-1)^M y_1' >= 0, carrying the overall sign (-1)^(mu+eps0);
    amplitudes are psi_i |c_i|^(2 lam) (the proof's scaling with its
    existential constant normalized to one).
    """
    if n < 3:
        raise ConstructionError("half-ball construction needs a second boundary axis")
    centers = [float(c) for c in centers]
    psi_values = [float(p) for p in psi_values]
    if len(centers) != len(psi_values):
        raise ConstructionError("need one amplitude per center")
    if not centers or centers[0] < 2.0:
        raise ConstructionError("centers must start at 2 or beyond")
    if any(b - a < 2.0 for a, b in zip(centers[:-1], centers[1:])):
        raise ConstructionError("unit balls must be disjoint (spacing >= 2)")
    constants = compute_constants(lam, big_m)
    sign = constants.half_sign
    half = (-1.0) ** big_m
    amps = [p * c ** (2.0 * lam) for p, c in zip(psi_values, centers)]

    e2 = np.zeros(n - 1)
    e2[1] = 1.0
    ball_list = tuple((c * e2, 1.0) for c in centers)

    def evaluator(pts):
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        first = pts[..., 0]
        for c, amp in zip(centers, amps):
            d = np.linalg.norm(pts - c * e2, axis=-1)
            mask = (d < 1.0) & (half * first >= 0.0)
            out += np.where(mask, sign * amp * (1.0 - d) * np.abs(first), 0.0)
        return out

    edges = []
    for c in centers:
        edges += [c - 1.0, c + 1.0]
    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=0.0,
        support=Support(
            "compact",
            outer_radius=centers[-1] + 1.0,
            inner_radius=centers[0] - 1.0,
            radial_edges=tuple(edges),
            balls=ball_list,
        ),
        integrability_M=big_m,
        name=f"half_balls(M={big_m})",
        amplitude=max(abs(a) for a in amps),
    )


def data_balls_super_extension(n: int, a_values, b_values, amplitudes,
                               lam: float, big_m: int) -> BoundaryData:
    """Data on balls along the first boundary axis with reflected partners.

    Each positive-side ball carries the cone profile amp * (1 - d / b); the
    mirrored ball carries (-1)^M * A_lam times it, the extension that makes
    the sign-indefinite part of the kernel integrate to a non-negative
    total.
    """
    a_values = [float(a) for a in a_values]
    b_values = [float(b) for b in b_values]
    amplitudes = [float(f) for f in amplitudes]
    if not (len(a_values) == len(b_values) == len(amplitudes)):
        raise ConstructionError("need matching centers, radii and amplitudes")
    constants = compute_constants(lam, big_m)
    a_ratio = constants.cone_ratio
    for a, b in zip(a_values, b_values):
        if b > a / 2.0:
            raise ConstructionError("ball radii must satisfy b <= a / 2")
        if a - b <= 1.0:
            raise ConstructionError("balls must stay outside the unit ball")
        if (b / a) ** 2 >= 1.0 - 1.0 / a_ratio:
            raise ConstructionError("ball subtends too wide an angle for the cone")
        x_norm = math.hypot(a, b)
        if a - x_norm / a_ratio < b or a_ratio * x_norm - a < b:
            raise ConstructionError(
                "ball does not fit the near-contact cone portion at its own "
                "reference point; shrink b or adjust a"
            )
    if any(b2 < 3.0 * a1 for a1, b2 in zip(a_values[:-1], a_values[1:])):
        raise ConstructionError("centers must be 3-separated for disjointness")

    refl = (-1.0) ** big_m * constants.reflection_amp
    e1 = np.zeros(n - 1)
    e1[0] = 1.0
    balls = []
    for a, b in zip(a_values, b_values):
        balls += [(a * e1, b), (-a * e1, b)]

    def evaluator(pts):
        pts = np.asarray(pts, dtype=float)
        out = np.zeros(pts.shape[:-1])
        for a, b, amp in zip(a_values, b_values, amplitudes):
            d = np.linalg.norm(pts - a * e1, axis=-1)
            out += np.where(d < b, amp * (1.0 - d / b), 0.0)
            d = np.linalg.norm(pts + a * e1, axis=-1)
            out += np.where(d < b, refl * amp * (1.0 - d / b), 0.0)
        return out

    edges = []
    for a, b in zip(a_values, b_values):
        edges += [a - b, a + b]
    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=0.0,
        support=Support(
            "compact",
            outer_radius=a_values[-1] + b_values[-1],
            inner_radius=a_values[0] - b_values[0],
            radial_edges=tuple(edges),
            balls=tuple(balls),
        ),
        integrability_M=big_m,
        name=f"super_balls(M={big_m})",
        amplitude=max(abs(f) for f in amplitudes) * max(1.0, abs(refl)),
    )


def reference_point(n: int, c: float, theta: float, axis: int = 0) -> HalfSpacePoint:
    """Point of radius c whose projection lies along the given boundary axis."""
    y_hat = np.zeros(n - 1)
    y_hat[axis] = 1.0
    return HalfSpacePoint(n=n, r=c, theta=theta, y_hat=y_hat)


def lower_bound_report(data: BoundaryData, lam: float, big_m: int,
                       x: HalfSpacePoint, scale: float,
                       spec: QuadratureSpec | None = None) -> dict:
    """Measured ratio of the signed F-integral to its predicted lower-bound
    scale; positive ratios certify the construction."""
    spec = spec or QuadratureSpec(abs_tol=1e-8, rel_tol=1e-8)
    value = integral_F(KernelParams(lam, big_m), data, x, spec)
    return {
        "check": "lower_bound",
        "params": {"lam": lam, "M": big_m, "r": x.r, "theta": x.theta, "data": data.name},
        "value": value,
        "ratio": value / scale,
        "pass": value > 0.0,
    }


def balanced_sign_integral(data: BoundaryData, lam: float, big_m: int,
                           x: HalfSpacePoint, spec: QuadratureSpec | None = None) -> float:
    """Integral of f K_M over the far cone portions on both reflection sides.

    The super extension is sized to make this non-negative even though the
    kernel's sign is unknown on the positive far side.
    """
    spec = spec or QuadratureSpec(abs_tol=1e-8, rel_tol=1e-8)
    constants = compute_constants(lam, big_m)
    pos = RegionSpec("cone_far_pos", big_m, constants, x)
    neg = RegionSpec("cone_far_neg", big_m, constants, x)
    params = KernelParams(lam, big_m)

    def g(pts):
        mask = _region_mask(pos, pts) | _region_mask(neg, pts)
        vals = data(pts) * kernel_KM_direct(params, x, pts)
        return np.where(mask, vals, 0.0)

    from .quadrature import _ball_region, _integrate_regions

    regions = [_ball_region(x, c, rad, spec, data.support)
               for c, rad in data.support.balls]
    value, _ = _integrate_regions(g, data.n, regions, spec)
    return value
