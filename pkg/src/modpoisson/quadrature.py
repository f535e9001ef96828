"""Quadrature over the boundary hyperplane and the half-space solution maps.

The integration scheme is a product of radial panels (Gauss-Legendre, with
panel edges aligned to data kinks, the kernel window around |x|, and graded
refinement near kernel peaks) and a sphere rule in the angular variables
(two points for boundary dimension one, panelled Gauss rules above).  Error
control is by whole-grid refinement comparison; evaluations never sample
randomly, so results are reproducible bit for bit.

Near the boundary the Dirichlet map switches to a singularity-subtracted
form: the data value at the projection point is split off against the
kernel's exact normalization, and only the difference is integrated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import gegenbauer, quad1d
from .data import BoundaryData, Support
from .errors import AccuracyError, DomainError
from .geometry import HalfSpacePoint, cos_theta_prime_array
from .kernels import KernelParams, kernel_K, kernel_KM_direct, kernel_KM_second

__all__ = [
    "QuadratureSpec",
    "alpha_n",
    "unit_ball_volume",
    "sphere_surface_area",
    "cutoff_w",
    "apply_cutoff",
    "integrate_weighted",
    "integral_F",
    "integral_F_second",
    "dirichlet_D",
    "neumann_N",
    "dirichlet_DM",
    "neumann_NM",
    "solution_u",
    "solution_v",
]


def unit_ball_volume(n: int) -> float:
    return math.pi ** (n / 2.0) / math.gamma(1.0 + n / 2.0)


def alpha_n(n: int) -> float:
    """Poisson normalization 2 / (n * omega_n) = Gamma(n/2) / pi^(n/2)."""
    return 2.0 / (n * unit_ball_volume(n))


def sphere_surface_area(k: int) -> float:
    """Surface measure of the unit k-sphere S^k; S^0 counts two points."""
    if k == 0:
        return 2.0
    return float(2.0 * math.pi ** ((k + 1) / 2.0) / math.gamma((k + 1) / 2.0))


@dataclass
class QuadratureSpec:
    """Resolution and tolerance knobs for the boundary integrals.

    truncation_radius of None means: solve the neglected-tail bound (data
    growth class times the kernel majorant) for the radius that pushes the
    tail below a tenth of abs_tol.
    """

    truncation_radius: float | None = None
    radial_panels: int = 24
    angular_order: int = 48
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9

    def __post_init__(self):
        if self.radial_panels < 1 or self.angular_order < 4:
            raise DomainError("resolution parameters out of range")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")


# ---------------------------------------------------------------------------
# sphere rules


def _orthonormal_frame(pole: np.ndarray) -> np.ndarray:
    """Rows: pole followed by an orthonormal completion."""
    d = pole.size
    frame = np.eye(d)
    frame[0] = pole
    q, _ = np.linalg.qr(frame.T)
    if np.dot(q[:, 0], pole) < 0:
        q[:, 0] = -q[:, 0]
    return q.T


def _gl_on(a: float, b: float, npts: int):
    x, w = quad1d.gauss_legendre(npts)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


def sphere_rule(dim_ambient: int, order: int, pole=None, pole_angles=()):
    """Quadrature points (unit vectors) and weights on the sphere S^(d-1)
    sitting in R^d, where d = dim_ambient - 1 is the boundary dimension.

    pole_angles are graded panel edges (angles from the pole) used to
    resolve integrands concentrated near the pole direction.
    """
    d = dim_ambient - 1
    if pole is None:
        pole = np.eye(d)[0] if d else np.array([])
    pole = np.asarray(pole, dtype=float)
    pole = pole / np.linalg.norm(pole)
    if d == 1:
        return pole[None, :] * np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])

    angles = sorted({a for a in pole_angles if 0.0 < a < math.pi})
    if d == 2:
        frame = _orthonormal_frame(pole)
        edges = sorted({0.0, math.pi / 2, math.pi, 1.5 * math.pi, 2.0 * math.pi}
                       | {a for a in angles}
                       | {2.0 * math.pi - a for a in angles})
        nodes, weights = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            npts = max(6, int(order * (b - a) / (2.0 * math.pi)) + 1)
            xs, ws = _gl_on(a, b, npts)
            nodes.append(xs)
            weights.append(ws)
        phi = np.concatenate(nodes)
        w = np.concatenate(weights)
        pts = np.outer(np.cos(phi), frame[0]) + np.outer(np.sin(phi), frame[1])
        return pts, w

    # d >= 3: polar angle against the pole, product with a subsphere rule;
    # integrating in the angle keeps the sin^(d-2) weight analytic
    frame = _orthonormal_frame(pole)
    phi_edges = sorted({0.0, math.pi / 2, math.pi} | set(angles))
    phi_nodes, phi_weights = [], []
    polar_order = max(10, order // 2)
    for a, b in zip(phi_edges[:-1], phi_edges[1:]):
        npts = max(6, int(polar_order * (b - a) / math.pi) + 1)
        xs, ws = _gl_on(a, b, npts)
        phi_nodes.append(xs)
        phi_weights.append(ws)
    phi = np.concatenate(phi_nodes)
    wphi = np.concatenate(phi_weights)
    if d == 3:
        sub_pts, sub_w = sphere_rule(3, max(8, (2 * order) // 3), pole=np.array([1.0, 0.0]))
    else:
        sub_pts, sub_w = sphere_rule(d, max(8, (2 * order) // 3))
    sint = np.sin(phi)
    meas = sint ** (d - 2) * wphi
    pts = (
        np.cos(phi)[:, None, None] * frame[0][None, None, :]
        + sint[:, None, None] * (sub_pts @ frame[1:])[None, :, :]
    )
    w = meas[:, None] * sub_w[None, :]
    return pts.reshape(-1, d), w.reshape(-1)


# ---------------------------------------------------------------------------
# radial panel construction


def _geometric_edges(a: float, b: float, count: int) -> list[float]:
    if a <= 0:
        raise ValueError("geometric edges need a positive left endpoint")
    return list(np.geomspace(a, b, max(count, 2)))


def _graded_edges(center: float, scale: float, lo: float, hi: float) -> list[float]:
    """Dyadic edges accumulating at `center` from distance `scale` outward."""
    edges = []
    dist = scale
    while dist < (hi - lo):
        for side in (center - dist, center + dist):
            if lo < side < hi:
                edges.append(side)
        dist *= 4.0
    if lo < center < hi:
        edges.append(center)
    return edges


def _dedupe(edges, lo, hi, min_gap=1e-13):
    edges = sorted(set([lo, hi] + [e for e in edges if lo < e < hi]))
    out = [edges[0]]
    for e in edges[1:]:
        if e - out[-1] > min_gap * max(1.0, abs(e)):
            out.append(e)
    if out[-1] != hi:
        out[-1] = hi
    return out


def _split_panels(edges, level: int):
    if level == 0:
        return list(edges)
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        ratio = b / a if a > 0 else None
        k = 2**level
        if ratio is not None and ratio > 1.5:
            out.extend(np.geomspace(a, b, k + 1)[:-1])
        else:
            out.extend(np.linspace(a, b, k + 1)[:-1])
    out.append(edges[-1])
    return out


# ---------------------------------------------------------------------------
# regions


@dataclass
class _Region:
    center: np.ndarray | None  # None means the origin
    r_lo: float
    r_hi: float
    edges: tuple
    pole: np.ndarray | None = None
    pole_angles: tuple = ()
    cuts: tuple = ()  # foreign kink circles as (center, radius) pairs


def _kernel_window_edges(x: HalfSpacePoint, lo: float, hi: float) -> list[float]:
    edges = [e for e in (0.5 * x.r, x.r, 2.0 * x.r) if lo < e < hi]
    ynorm = x.r * x.sin_theta
    if x.x_n < 0.5 * ynorm:
        edges += _graded_edges(ynorm, x.x_n, lo, hi)
    return edges


def _peak_angles(x: HalfSpacePoint, rho: float) -> tuple:
    """Graded angular edges toward the projection direction for peaked kernels."""
    ynorm = x.r * x.sin_theta
    if ynorm == 0.0 or x.x_n >= 0.5 * ynorm or rho <= 0:
        return ()
    w = x.x_n / max(rho, 1e-300)
    angles = []
    while w < math.pi / 4:
        angles.append(w)
        w *= 4.0
    return tuple(angles)


def _annulus_region(x, support: Support, lo: float, hi: float, spec) -> _Region | None:
    lo = max(lo, 1e-300)
    if hi <= lo:
        return None
    edges = _geometric_edges(lo, hi, spec.radial_panels)
    edges += [e for e in support.radial_edges if lo < e < hi]
    if x is not None:
        edges += _kernel_window_edges(x, lo, hi)
    pole = x.y_hat if x is not None else None
    pole_angles = _peak_angles(x, x.r * x.sin_theta) if x is not None else ()
    return _Region(None, lo, hi, tuple(_dedupe(edges, lo, hi)), pole, pole_angles)


def _ball_region(x, center: np.ndarray, radius: float, spec,
                 support: Support | None = None) -> _Region:
    center = np.asarray(center, dtype=float)
    edges = list(np.linspace(0.0, radius, max(4, spec.radial_panels // 4) + 1))
    cuts = []
    if support is not None:
        cnorm = float(np.linalg.norm(center))
        origin = np.zeros_like(center)
        for e in support.radial_edges:
            if abs(e - cnorm) < radius - 1e-12:
                if cnorm < 1e-12:
                    edges.append(float(e))
                else:
                    cuts.append((origin, float(e)))
        for q, rad_q in support.balls or ():
            q = np.asarray(q, dtype=float)
            dist = float(np.linalg.norm(center - q))
            if dist < 1e-12:
                if 0.0 < rad_q < radius:
                    edges.append(float(rad_q))
            elif abs(dist - rad_q) < radius - 1e-12:
                cuts.append((q, float(rad_q)))
    pole = None
    pole_angles = ()
    if x is not None:
        off = x.y - center
        dist = float(np.linalg.norm(off))
        if dist < 2.0 * radius and x.x_n < radius:
            edges += _graded_edges(dist, max(x.x_n, 1e-12), 0.0, radius)
            if dist > 4.0 * x.x_n:
                pole = off / dist
                w = x.x_n / max(dist, 1e-300)
                while w < math.pi / 2:
                    pole_angles += (w,)
                    w *= 4.0
    if pole is None and abs(center[0]) < radius and center.size > 1:
        # data may kink across the first-coordinate hyperplane; align the pole
        pole = np.eye(center.size)[0]
    return _Region(center, 0.0, radius, tuple(_dedupe(edges, 0.0, radius)), pole,
                   pole_angles, tuple(cuts))


def _angular_order(n: int, spec: QuadratureSpec, level: int) -> int:
    base = spec.angular_order
    if n == 4:
        base = max(12, (2 * spec.angular_order) // 3)
    elif n == 5:
        base = max(10, spec.angular_order // 2)
    return int(base * 1.5**level)


def _eval_region(g, n: int, region: _Region, spec, level: int) -> float:
    if region.cuts:
        return _eval_region_cut(g, n, region, spec, level)
    edges = _split_panels(region.edges, level)
    rho_nodes, rho_weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        xs, ws = _gl_on(a, b, 12)
        rho_nodes.append(xs)
        rho_weights.append(ws)
    rho = np.concatenate(rho_nodes)
    wr = np.concatenate(rho_weights)
    pts_ang, w_ang = sphere_rule(
        n, _angular_order(n, spec, level), pole=region.pole, pole_angles=region.pole_angles
    )
    pts = rho[:, None, None] * pts_ang[None, :, :]
    if region.center is not None:
        pts = pts + region.center
    vals = g(pts.reshape(-1, n - 1)).reshape(rho.size, -1)
    return float(np.dot(wr * rho ** (n - 2), vals @ w_ang))


def _eval_region_cut(g, n: int, region: _Region, spec, level: int) -> float:
    """Ball-local evaluation with per-ray radial panel edges placed exactly
    where foreign kink circles cross each angular ray; restores spectral
    panel convergence for integrands cut by unaligned circles."""
    base_edges = _split_panels(region.edges, level)
    pts_ang, w_ang = sphere_rule(
        n, _angular_order(n, spec, level), pole=region.pole, pole_angles=region.pole_angles
    )
    center = region.center
    xs12, ws12 = quad1d.gauss_legendre(12)
    total = 0.0
    for u, wq in zip(pts_ang, w_ang):
        extra = []
        for q, rad_q in region.cuts:
            delta = center - q
            b = float(np.dot(u, delta))
            disc = b * b + rad_q * rad_q - float(np.dot(delta, delta))
            if disc > 0.0:
                sq = math.sqrt(disc)
                for root in (-b + sq, -b - sq):
                    if 1e-13 < root < region.r_hi - 1e-13:
                        extra.append(root)
        edges = _dedupe(list(base_edges) + extra, region.r_lo, region.r_hi)
        rho_parts, w_parts = [], []
        for a, bnd in zip(edges[:-1], edges[1:]):
            half = 0.5 * (bnd - a)
            rho_parts.append(a + half * (xs12 + 1.0))
            w_parts.append(half * ws12)
        rho = np.concatenate(rho_parts)
        wr = np.concatenate(w_parts)
        pts = center + rho[:, None] * u[None, :]
        total += wq * float(np.dot(wr * rho ** (n - 2), g(pts)))
    return total


def _integrate_regions(g, n: int, regions, spec: QuadratureSpec, max_levels: int = 5):
    regions = [r for r in regions if r is not None]
    if not regions:
        return 0.0, 0.0
    prev = None
    est = math.inf
    for level in range(max_levels):
        cur = sum(_eval_region(g, n, r, spec, level) for r in regions)
        if prev is not None:
            est = abs(cur - prev)
            if est <= max(spec.abs_tol, spec.rel_tol * abs(cur)):
                return cur, est
        prev = cur
    raise AccuracyError(
        f"boundary quadrature stalled with estimate {est:.3e}",
        value=prev,
        estimate=est,
        tolerance=max(spec.abs_tol, spec.rel_tol * abs(prev)),
    )


# ---------------------------------------------------------------------------
# truncation of global supports


def _auto_truncation(data: BoundaryData, magnitude, spec: QuadratureSpec,
                     start: float) -> float:
    """Double the radius until the probed tail magnitude clears the budget.

    `magnitude(R)` should bound |f * kernel| * surface measure * one decay
    length at radius R.
    """
    if spec.truncation_radius is not None:
        return spec.truncation_radius
    target = 0.1 * spec.abs_tol
    radius = start
    for _ in range(80):
        if magnitude(radius) < target:
            return radius
        radius *= 2.0
    raise AccuracyError("could not find a truncation radius meeting the tail budget")


def _data_reach(data: BoundaryData, kernel_decay, spec, x: HalfSpacePoint,
                extra_growth: float = 0.0) -> float:
    """Outer radius for integration: support bound or solved truncation."""
    if data.support.kind == "compact":
        return data.support.outer_radius
    n = data.n
    area = sphere_surface_area(n - 2)

    def magnitude(radius):
        probe = np.zeros(n - 1)
        probe[0] = radius
        fval = abs(float(data(probe[None, :])[0])) + data.amplitude * (1.0 + radius) ** min(
            data.growth_exponent, 0.0
        )
        return fval * radius**extra_growth * kernel_decay(radius) * area * radius ** (n - 2) * radius

    start = max(4.0, 4.0 * x.r if x is not None else 4.0,
                2.0 * (data.support.inner_radius + 1.0))
    return _auto_truncation(data, magnitude, spec, start)


# ---------------------------------------------------------------------------
# cutoff


def cutoff_w(y) -> float | np.ndarray:
    """Continuous ramp: 0 inside the unit ball, 1 outside radius 2.

    Smoothstep in |y| on [1, 2]; any continuous ramp is admissible, this
    fixes ours.
    """
    y = np.asarray(y, dtype=float)
    rho = np.linalg.norm(np.atleast_1d(y), axis=-1) if y.ndim else np.abs(y)
    t = np.clip(rho - 1.0, 0.0, 1.0)
    out = 3.0 * t * t - 2.0 * t**3
    return float(out) if np.ndim(out) == 0 else out


def apply_cutoff(data: BoundaryData):
    """Split data into (w*f, (1-w)*f); either part may be None when empty."""
    sup = data.support
    far = None
    if sup.kind == "global" or sup.outer_radius > 1.0:
        far = data.scaled_by(lambda pts: cutoff_w(pts), name_suffix="*w")
        far_inner = max(1.0, sup.inner_radius)
        far = _replace_support(
            far,
            Support(
                sup.kind,
                outer_radius=sup.outer_radius,
                inner_radius=far_inner,
                radial_edges=tuple(sorted(set(sup.radial_edges) | {1.0, 2.0})),
                balls=sup.balls,
            ),
        )
    near = None
    if sup.inner_radius < 2.0:
        near = data.scaled_by(lambda pts: 1.0 - cutoff_w(pts), name_suffix="*(1-w)")
        near_balls = tuple(
            (c, rad) for c, rad in sup.balls or ()
            if float(np.linalg.norm(np.asarray(c))) - rad < 2.0
        )
        near = _replace_support(
            near,
            Support(
                "compact",
                outer_radius=min(2.0, sup.outer_radius) if sup.kind == "compact" else 2.0,
                inner_radius=sup.inner_radius,
                radial_edges=tuple(
                    sorted({e for e in sup.radial_edges if e <= 2.0} | {1.0, 2.0})
                ),
                balls=near_balls,
            ),
        )
    return far, near


def _replace_support(data: BoundaryData, support: Support) -> BoundaryData:
    from dataclasses import replace

    return replace(data, support=support)


# ---------------------------------------------------------------------------
# generic weighted integral (moment integrals for the expansions)


def integrate_weighted(data: BoundaryData, weight, spec: QuadratureSpec | None = None,
                       *, r_lo: float = 0.0, weight_growth: float = 0.0,
                       x: HalfSpacePoint | None = None, return_estimate: bool = False):
    """Integral of data * weight over its support intersected with |y'| > r_lo.

    `weight` is a vectorized function of boundary points; `weight_growth`
    bounds its growth for truncation of global data.
    """
    spec = spec or QuadratureSpec()
    sup = data.support

    def g(pts):
        return data(pts) * weight(pts)

    regions = []
    if sup.balls:
        for center, radius in sup.balls:
            regions.append(_ball_region(x, center, radius, spec, sup))
    else:
        hi = _data_reach(data, lambda r: 1.0, spec, x, extra_growth=weight_growth)
        lo = max(r_lo, sup.inner_radius)
        if lo == 0.0:
            regions.append(_ball_region(x, np.zeros(data.n - 1), min(1.0, hi), spec, sup))
            lo = min(1.0, hi)
        regions.append(_annulus_region(x, sup, lo, hi, spec))
    value, est = _integrate_regions(g, data.n, regions, spec)
    return (value, est) if return_estimate else value


# ---------------------------------------------------------------------------
# the F-integrals and solution maps


def _check_first_kind(data: BoundaryData, lam: float, big_m: int):
    if not data.first_kind_admissible(lam, big_m):
        raise DomainError(
            f"data growth {data.growth_exponent} violates the moment condition "
            f"for lam={lam}, M={big_m}"
        )


def _first_kind_regions(data, x, lam, big_m, spec, r_lo):
    sup = data.support
    if sup.balls:
        regions = []
        origin = np.zeros(data.n - 1)
        for c, rad in sup.balls:
            cnorm = float(np.linalg.norm(np.asarray(c)))
            if cnorm + rad <= r_lo:
                continue  # entirely inside the excluded disk
            region = _ball_region(x, c, rad, spec, sup)
            if cnorm - rad < r_lo - 1e-12 < cnorm + rad:
                # ball crosses the region boundary; clip along each ray
                # (the caller masks the integrand below r_lo)
                region.cuts = region.cuts + ((origin, float(r_lo)),)
            regions.append(region)
        return regions

    def kernel_decay(radius):
        if radius <= x.r:
            return x.sec_theta ** (2.0 * lam) * max(x.r, radius) ** (-2.0 * lam)
        return (
            (x.r / radius) ** big_m
            * x.sec_theta ** (2.0 * lam)
            * radius ** (-2.0 * lam)
        )

    hi = _data_reach(data, kernel_decay, spec, x) if sup.kind == "global" else sup.outer_radius
    lo = max(r_lo, sup.inner_radius)
    regions = []
    if lo == 0.0:
        # origin-inclusive supports only occur for the unmodified kernel
        regions.append(_ball_region(x, np.zeros(data.n - 1), min(1.0, hi), spec, sup))
        lo = min(1.0, hi)
    regions.append(_annulus_region(x, sup, lo, hi, spec))
    return regions


def integral_F(params: KernelParams, data: BoundaryData, x: HalfSpacePoint,
               spec: QuadratureSpec | None = None, *, return_estimate: bool = False):
    """F[f](x): integral of f * K_M over the exterior of the unit ball."""
    if params.kind != "first":
        raise DomainError("integral_F takes first-kind kernel parameters")
    spec = spec or QuadratureSpec()
    _check_first_kind(data, params.lam, params.big_m)

    def g(pts):
        norms = np.linalg.norm(pts, axis=-1)
        out = np.zeros(norms.shape)
        mask = norms > 1.0
        if np.any(mask):
            out[mask] = data(pts[mask]) * kernel_KM_direct(params, x, pts[mask])
        return out

    regions = _first_kind_regions(data, x, params.lam, params.big_m, spec, r_lo=1.0)
    value, est = _integrate_regions(g, data.n, regions, spec)
    return (value, est) if return_estimate else value


def integral_F_second(params: KernelParams, data: BoundaryData, x: HalfSpacePoint,
                      spec: QuadratureSpec | None = None, *,
                      return_estimate: bool = False):
    """F~[f](x): integral of f * K~_M over the whole boundary hyperplane."""
    if params.kind != "second":
        raise DomainError("integral_F_second takes second-kind kernel parameters")
    spec = spec or QuadratureSpec()
    if not data.second_kind_admissible(params.big_m):
        raise DomainError(
            f"data growth {data.growth_exponent} violates the decay condition for M={params.big_m}"
        )

    def g(pts):
        return data(pts) * kernel_KM_second(params, x, pts)

    sup = data.support
    regions = []
    if sup.balls:
        regions = [_ball_region(x, c, rad, spec, sup) for c, rad in sup.balls]
    else:
        # the subtracted tail grows like |y'|^(M-1), fold that into truncation
        def kernel_decay(radius):
            return max(
                radius ** (-2.0 * params.lam),
                radius ** (params.big_m - 1.0) * x.r ** -(params.big_m + 2.0 * params.lam - 1.0),
            ) * x.sec_theta ** (2.0 * params.lam)

        hi = _data_reach(data, kernel_decay, spec, x) if sup.kind == "global" else sup.outer_radius
        lo = sup.inner_radius
        if lo == 0.0:
            regions.append(_ball_region(x, np.zeros(data.n - 1), min(1.0, hi), spec, sup))
            lo = min(1.0, hi)
        regions.append(_annulus_region(x, sup, lo, hi, spec))
    value, est = _integrate_regions(g, data.n, regions, spec)
    return (value, est) if return_estimate else value


def _near_boundary(data: BoundaryData, x: HalfSpacePoint) -> bool:
    if data.support.kind != "compact":
        return False
    scale = max(1.0, data.support.outer_radius)
    ynorm = x.r * x.sin_theta
    return x.x_n < 0.02 * scale and ynorm <= data.support.outer_radius + 2.0


def _covering_radius(data: BoundaryData, y: np.ndarray) -> float:
    sup = data.support
    if sup.balls:
        return max(float(np.linalg.norm(y - c)) + rad for c, rad in sup.balls)
    return float(np.linalg.norm(y)) + sup.outer_radius


def _kernel_mass_within(n: int, x_n: float, radius: float) -> float:
    """alpha_n * x_n * integral of the Dirichlet kernel over a disk of given
    radius around the projection point; its limit at infinity is exactly 1."""

    def integrand(rho):
        return rho ** (n - 2) * (rho * rho + x_n * x_n) ** (-n / 2.0)

    edges = [0.0] + [x_n * 2.0**j for j in range(-2, 80) if x_n * 2.0**j < radius] + [radius]
    val = quad1d.fixed_panels(integrand, sorted(set(edges)), npts=20)
    return alpha_n(n) * x_n * sphere_surface_area(n - 2) * val


def _dirichlet_near(data: BoundaryData, x: HalfSpacePoint, spec: QuadratureSpec) -> float:
    n = x.n
    y = x.y
    f_at_y = float(data(y[None, :])[0])
    radius = _covering_radius(data, y) + 1.0

    def g(pts):
        return (data(pts) - f_at_y) * kernel_K(n / 2.0, x, pts)

    region = _ball_region(x, y, radius, spec, data.support)
    value, _ = _integrate_regions(g, n, [region], spec)
    return alpha_n(n) * x.x_n * value + f_at_y * _kernel_mass_within(n, x.x_n, radius)


def dirichlet_D(data: BoundaryData, x: HalfSpacePoint,
                spec: QuadratureSpec | None = None, *, return_estimate: bool = False):
    """Classical half-space Dirichlet integral alpha_n x_n int f K(n/2)."""
    spec = spec or QuadratureSpec()
    lam = x.n / 2.0
    _check_first_kind(data, lam, 0)
    if _near_boundary(data, x):
        value = _dirichlet_near(data, x, spec)
        return (value, spec.abs_tol) if return_estimate else value

    def g(pts):
        return data(pts) * kernel_K(lam, x, pts)

    regions = _first_kind_regions(data, x, lam, 0, spec, r_lo=0.0)
    value, est = _integrate_regions(g, data.n, regions, spec)
    value *= alpha_n(x.n) * x.x_n
    return (value, est) if return_estimate else value


def neumann_N(data: BoundaryData, x: HalfSpacePoint,
              spec: QuadratureSpec | None = None, *, return_estimate: bool = False):
    """Classical half-space Neumann integral; needs ambient dimension >= 3."""
    if x.n < 3:
        raise DomainError("the planar Neumann problem has a logarithmic kernel "
                          "and is not supported")
    spec = spec or QuadratureSpec()
    lam = (x.n - 2) / 2.0
    _check_first_kind(data, lam, 0)

    def g(pts):
        return data(pts) * kernel_K(lam, x, pts)

    regions = _first_kind_regions(data, x, lam, 0, spec, r_lo=0.0)
    if _near_boundary(data, x):
        # integrable kernel spike at the projection point: integrate in
        # projection-centered coordinates instead
        y = x.y
        radius = _covering_radius(data, y) + 1.0
        regions = [_ball_region(x, y, radius, spec, data.support)]
    value, est = _integrate_regions(g, data.n, regions, spec)
    value *= alpha_n(x.n) / (x.n - 2.0)
    return (value, est) if return_estimate else value


def _check_origin_clearance(data: BoundaryData, big_m: int, allow_origin: bool):
    if big_m >= 1 and data.support.inner_radius <= 0.0 and not allow_origin:
        raise DomainError(
            "modified kernels are singular at the boundary origin; data must "
            "vanish near it (or pass allow_origin=True when the weighted "
            "integrability holds)"
        )


def dirichlet_DM(big_m: int, data: BoundaryData, x: HalfSpacePoint,
                 spec: QuadratureSpec | None = None, *, allow_origin: bool = False,
                 return_estimate: bool = False):
    """Modified Dirichlet integral alpha_n x_n int f K_M(n/2)."""
    spec = spec or QuadratureSpec()
    lam = x.n / 2.0
    _check_first_kind(data, lam, big_m)
    _check_origin_clearance(data, big_m, allow_origin)
    if big_m == 0:
        return dirichlet_D(data, x, spec, return_estimate=return_estimate)
    if _near_boundary(data, x) and data.growth_exponent < 1.0:
        # K_M = K minus its Gegenbauer tail, integrated termwise: the base
        # part uses the subtracted near-boundary scheme, the tail moments
        # are regular integrals (data vanishes near the origin)
        base = _dirichlet_near(data, x, spec)
        correction = 0.0
        for m in range(big_m):
            def weight(pts, m=m):
                norms = np.linalg.norm(pts, axis=-1)
                tb = x.sin_theta * cos_theta_prime_array(x, pts)
                return norms ** -(m + x.n) * gegenbauer.value(lam, m, tb)

            moment = integrate_weighted(data, weight, spec, weight_growth=-(m + x.n), x=x)
            correction += x.r**m * moment
        value = base - alpha_n(x.n) * x.x_n * correction
        return (value, spec.abs_tol) if return_estimate else value
    params = KernelParams(lam, big_m)

    def g(pts):
        return data(pts) * kernel_KM_direct(params, x, pts)

    regions = _first_kind_regions(data, x, lam, big_m, spec, r_lo=data.support.inner_radius)
    value, est = _integrate_regions(g, data.n, regions, spec)
    value *= alpha_n(x.n) * x.x_n
    return (value, est) if return_estimate else value


def neumann_NM(big_m: int, data: BoundaryData, x: HalfSpacePoint,
               spec: QuadratureSpec | None = None, *, allow_origin: bool = False,
               return_estimate: bool = False):
    """Modified Neumann integral (alpha_n / (n-2)) int f K_M((n-2)/2)."""
    if x.n < 3:
        raise DomainError("the planar Neumann problem is not supported")
    spec = spec or QuadratureSpec()
    lam = (x.n - 2) / 2.0
    _check_first_kind(data, lam, big_m)
    _check_origin_clearance(data, big_m, allow_origin)
    if big_m == 0:
        return neumann_N(data, x, spec, return_estimate=return_estimate)
    params = KernelParams(lam, big_m)

    def g(pts):
        return data(pts) * kernel_KM_direct(params, x, pts)

    regions = _first_kind_regions(data, x, lam, big_m, spec, r_lo=data.support.inner_radius)
    if _near_boundary(data, x):
        y = x.y
        radius = _covering_radius(data, y) + 1.0
        regions = [_ball_region(x, y, radius, spec, data.support)]
    value, est = _integrate_regions(g, data.n, regions, spec)
    value *= alpha_n(x.n) / (x.n - 2.0)
    return (value, est) if return_estimate else value


def solution_u(data: BoundaryData, big_m: int, x: HalfSpacePoint,
               spec: QuadratureSpec | None = None) -> float:
    """Assembled Dirichlet solution D_M[w f] + D[(1 - w) f]."""
    spec = spec or QuadratureSpec()
    far, near = apply_cutoff(data)
    total = 0.0
    if far is not None:
        total += dirichlet_DM(big_m, far, x, spec)
    if near is not None:
        total += dirichlet_D(near, x, spec)
    return total


def solution_v(data: BoundaryData, big_m: int, x: HalfSpacePoint,
               spec: QuadratureSpec | None = None) -> float:
    """Assembled Neumann solution N_M[w f] + N[(1 - w) f]."""
    spec = spec or QuadratureSpec()
    far, near = apply_cutoff(data)
    total = 0.0
    if far is not None:
        total += neumann_NM(big_m, far, x, spec)
    if near is not None:
        total += neumann_N(near, x, spec)
    return total
