"""Numerical certification: finite differences, identities, growth sweeps.

Every check produces a CheckReport with a residual, a tolerance, and a pass
flag; a check whose finite-difference signal is drowned by quadrature noise
reports itself inconclusive rather than silently passing.  Quadrature
tolerances feeding a finite difference are kept at least two orders tighter
than the difference tolerance so truncation, not integration error,
dominates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .data import BoundaryData
from .errors import DomainError
from .geometry import HalfSpacePoint
from .kernels import KernelParams, kernel_KM_direct, kernel_with_convention
from .quadrature import (
    QuadratureSpec,
    dirichlet_D,
    dirichlet_DM,
    neumann_NM,
    solution_u,
    solution_v,
)
from . import quad1d

__all__ = [
    "CheckReport",
    "fd_laplacian",
    "refinement_order",
    "check_harmonicity",
    "check_boundary",
    "check_kernel_identity",
    "check_neumann_representation",
    "growth_sweep",
]


@dataclass
class CheckReport:
    """Outcome of one certification check; pass means residual <= tolerance."""

    name: str
    parameters: dict
    residual: float
    tolerance: float
    passed: bool = field(init=False)
    refinement_order: float | None = None
    inconclusive: bool = False

    def __post_init__(self):
        self.passed = bool(self.residual <= self.tolerance) and not self.inconclusive

    def as_json(self) -> str:
        record = {
            "name": self.name,
            "parameters": self.parameters,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "refinement_order": self.refinement_order,
            "inconclusive": self.inconclusive,
        }
        return json.dumps(record)


def fd_laplacian(fn, x, h: float) -> float:
    """Second-order central stencil for the Laplacian of a scalar field."""
    x = np.asarray(x, dtype=float)
    center = fn(x)
    total = 0.0
    for i in range(x.size):
        step = np.zeros_like(x)
        step[i] = h
        total += fn(x + step) - 2.0 * center + fn(x - step)
    return total / (h * h)


def refinement_order(fn, exact_fn, x, h: float) -> float:
    """Observed convergence order of the stencil between steps h and h/2."""
    e1 = abs(fd_laplacian(fn, x, h) - exact_fn(x))
    e2 = abs(fd_laplacian(fn, x, h / 2.0) - exact_fn(x))
    if e2 == 0.0:
        return float("inf")
    return math.log2(e1 / e2)


def check_harmonicity(fn, points, h: float, tol: float, name: str,
                      parameters: dict | None = None,
                      noise_floor: float = 0.0,
                      scale: float | None = None) -> CheckReport:
    """Max normalized FD-Laplacian residual of a claimed-harmonic field.

    The residual is normalized by the local field magnitude: the stencil
    maximum by default, or an explicit `scale` (for fields with deep zeros,
    pass the sup over the evaluation sphere).  noise_floor is the expected
    quadrature noise amplification eps / h^2; when it exceeds the
    tolerance, the check is inconclusive by design.
    """
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        lap = fd_laplacian(fn, x, h)
        if scale is None:
            stencil = [abs(fn(x))]
            for i in range(x.size):
                step = np.zeros_like(x)
                step[i] = h
                stencil += [abs(fn(x + step)), abs(fn(x - step))]
            local = max(max(stencil), 1e-30)
        else:
            local = scale
        worst = max(worst, abs(lap) / local)
    return CheckReport(
        name=name,
        parameters=parameters or {},
        residual=worst,
        tolerance=tol,
        inconclusive=noise_floor > tol,
    )


def check_boundary(problem: str, data: BoundaryData, y, xn_sequence,
                   spec: QuadratureSpec | None = None,
                   tol: float = 1e-3) -> CheckReport:
    """Boundary recovery: the Dirichlet solution approaches the data value,
    the Neumann solution's normal derivative approaches its negative.

    Gaps are measured along the decreasing heights xn_sequence; the check
    passes when they decrease and the final gap is below tolerance.
    """
    if problem not in ("dirichlet", "neumann"):
        raise DomainError("problem must be 'dirichlet' or 'neumann'")
    spec = spec or QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10)
    y = np.asarray(y, dtype=float)
    n = data.n
    f_at_y = float(data(y[None, :])[0])
    gaps = []
    for xn in xn_sequence:
        x = HalfSpacePoint.from_cartesian(np.append(y, xn))
        if problem == "dirichlet":
            val = solution_u(data, 1, x, spec)
            gaps.append(abs(val - f_at_y))
        else:
            h = xn / 2.0
            above = HalfSpacePoint.from_cartesian(np.append(y, xn + h))
            below = HalfSpacePoint.from_cartesian(np.append(y, xn - h))
            dv = (solution_v(data, 1, above, spec) - solution_v(data, 1, below, spec)) / (2 * h)
            gaps.append(abs(dv + f_at_y))
    decreasing = all(b <= a * 1.05 for a, b in zip(gaps[:-1], gaps[1:]))
    return CheckReport(
        name=f"boundary_{problem}",
        parameters={"y": list(y), "xn": list(xn_sequence), "gaps": gaps,
                    "decreasing": decreasing},
        residual=gaps[-1] if decreasing else float("inf"),
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# differential-difference identities of the modified kernel


def _point(r, theta, y_hat, n):
    return HalfSpacePoint(n=n, r=r, theta=theta, y_hat=y_hat)


def _fd_central(fn, t, h):
    return (fn(t + h) - fn(t - h)) / (2.0 * h)


def _plane_rotation(x: HalfSpacePoint, yp: np.ndarray):
    """Parametrize y' by its angle to the projection direction, within the
    plane spanned by the two (for the theta' derivative)."""
    norm = float(np.linalg.norm(yp))
    yhat = x.y_hat
    cosp = float(np.dot(yhat, yp)) / norm
    residual = yp - np.dot(yhat, yp) * yhat
    res_norm = float(np.linalg.norm(residual))
    if res_norm < 1e-12:
        perp = np.zeros_like(yp)
        perp[1 if abs(yhat[0]) > 0.5 else 0] = 1.0
        perp -= np.dot(yhat, perp) * yhat
        perp /= np.linalg.norm(perp)
    else:
        perp = residual / res_norm
    angle = math.acos(max(-1.0, min(1.0, cosp)))

    def at(t):
        return norm * (math.cos(t) * yhat + math.sin(t) * perp)

    return angle, at


def check_kernel_identity(identity: str, lam: float, big_m: int, x: HalfSpacePoint,
                 yp, h: float = 1e-4, tol: float = 1e-6) -> CheckReport:
    """One differential-difference identity of the modified kernel.

    The left side is a central difference in the named variable; the right
    side couples kernels of raised exponent and lowered order (with the
    convention that non-positive orders mean the unmodified kernel).
    """
    yp = np.asarray(yp, dtype=float)
    n = x.n
    lam1 = lam + 1.0
    y = x.y
    ynorm = x.r * x.sin_theta
    params = KernelParams(lam, big_m)
    km1 = kernel_with_convention(lam1, big_m - 1, x, yp)
    km2 = kernel_with_convention(lam1, big_m - 2, x, yp)

    if identity == "i":
        lhs = _fd_central(lambda t: kernel_KM_direct(params, _point(x.r, t, x.y_hat, n), yp),
                          x.theta, h)
        rhs = 2.0 * lam * x.x_n * float(np.dot(x.y_hat, yp)) * km1
    elif identity == "ii":
        lhs = _fd_central(lambda t: kernel_KM_direct(params, _point(t, x.theta, x.y_hat, n), yp),
                          x.r, h)
        rhs = 2.0 * lam * (
            x.sin_theta * float(np.dot(x.y_hat, yp)) * km1 - x.r * km2
        )
    elif identity in ("iii", "iv"):
        if identity == "iii":
            i = 0

            def move(t):
                cart = np.append(y.copy(), x.x_n)
                cart[i] = t
                return HalfSpacePoint.from_cartesian(cart)

            lhs = _fd_central(lambda t: kernel_KM_direct(params, move(t), yp), y[0], h)
            rhs = 2.0 * lam * (yp[0] * km1 - y[0] * km2)
        else:
            def move(t):
                cart = np.append(t * x.y_hat, x.x_n)
                return HalfSpacePoint.from_cartesian(cart)

            lhs = _fd_central(lambda t: kernel_KM_direct(params, move(t), yp), ynorm, h)
            rhs = 2.0 * lam * (float(np.dot(x.y_hat, yp)) * km1 - ynorm * km2)
    elif identity == "v":
        def move(t):
            return HalfSpacePoint.from_cartesian(np.append(y, t))

        lhs = _fd_central(lambda t: kernel_KM_direct(params, move(t), yp), x.x_n, h)
        rhs = -2.0 * lam * x.x_n * km2
    elif identity == "vi":
        norm = float(np.linalg.norm(yp))
        unit = yp / norm
        lhs = _fd_central(lambda t: kernel_KM_direct(params, x, t * unit), norm, h)
        km0 = kernel_KM_direct(KernelParams(lam1, big_m), x, yp)
        rhs = 2.0 * lam * (float(np.dot(y, unit)) * km1 - norm * km0)
    elif identity == "vii":
        i = 0

        def move(t):
            moved = yp.copy()
            moved[i] = t
            return kernel_KM_direct(params, x, moved)

        lhs = _fd_central(move, yp[0], h)
        km0 = kernel_KM_direct(KernelParams(lam1, big_m), x, yp)
        rhs = 2.0 * lam * (y[0] * km1 - yp[0] * km0)
    elif identity == "viii":
        angle, at = _plane_rotation(x, yp)
        lhs = _fd_central(lambda t: kernel_KM_direct(params, x, at(t)), angle, h)
        norm = float(np.linalg.norm(yp))
        rhs = -2.0 * lam * ynorm * norm * math.sin(angle) * km1
    else:
        raise DomainError(f"unknown identity {identity!r}")

    scale = max(1.0, abs(lhs), abs(rhs))
    return CheckReport(
        name=f"kernel_identity_{identity}",
        parameters={"lam": lam, "M": big_m, "r": x.r, "theta": x.theta},
        residual=abs(lhs - rhs) / scale,
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# representations of the modified Neumann integral


def _dm_convention(m: int, data, x, spec):
    if m <= 0:
        return dirichlet_D(data, x, spec)
    return dirichlet_DM(m, data, x, spec)


def _directional_data(data: BoundaryData, vec: np.ndarray) -> BoundaryData:
    vec = np.asarray(vec, dtype=float)
    return data.scaled_by(lambda pts: pts @ vec, name_suffix="*dir", growth_shift=1.0)


def check_neumann_representation(representation: str, data: BoundaryData, big_m: int,
                 x: HalfSpacePoint, anchor: float,
                 spec: QuadratureSpec | None = None, tol: float = 1e-5,
                 axis: int = 0) -> CheckReport:
    """One integral representation of the modified Neumann solution through
    modified Dirichlet integrals, checked against direct evaluation.

    anchor is the representation's free parameter: the starting polar angle
    (i), radius (ii), coordinate (iii), projection length (iv), or height
    (v).  The data must be continuous with the origin outside the closure
    of its support.
    """
    spec = spec or QuadratureSpec()
    if data.support.inner_radius <= 0:
        raise DomainError("representations need data supported away from the origin")
    n = x.n
    direct = neumann_NM(big_m, data, x, spec)
    glx, glw = quad1d.gauss_legendre(24)

    def outer(a, b, fn):
        half = 0.5 * (b - a)
        mid = 0.5 * (b + a)
        return half * sum(w * fn(mid + half * t) for t, w in zip(glx, glw))

    f_dir = _directional_data(data, x.y_hat)
    if representation == "i":
        contrib = outer(anchor, x.theta,
                        lambda t: _dm_convention(big_m - 1, f_dir,
                                                 _point(x.r, t, x.y_hat, n), spec))
        base = neumann_NM(big_m, data, _point(x.r, anchor, x.y_hat, n), spec)
    elif representation == "ii":
        tan, sec = math.tan(x.theta), 1.0 / math.cos(x.theta)
        term1 = tan * outer(anchor, x.r,
                            lambda t: _dm_convention(big_m - 1, f_dir,
                                                     _point(t, x.theta, x.y_hat, n), spec) / t)
        term2 = sec * outer(anchor, x.r,
                            lambda t: _dm_convention(big_m - 2, data,
                                                     _point(t, x.theta, x.y_hat, n), spec))
        contrib = term1 - term2
        base = neumann_NM(big_m, data, _point(anchor, x.theta, x.y_hat, n), spec)
    elif representation == "iii":
        cart = x.to_cartesian()

        def at(t):
            moved = cart.copy()
            moved[axis] = t
            return HalfSpacePoint.from_cartesian(moved)

        e_i = np.zeros(n - 1)
        e_i[axis] = 1.0
        f_i = _directional_data(data, e_i)
        term1 = outer(anchor, cart[axis],
                      lambda t: _dm_convention(big_m - 1, f_i, at(t), spec)) / x.x_n
        term2 = outer(anchor, cart[axis],
                      lambda t: _dm_convention(big_m - 2, data, at(t), spec) * t) / x.x_n
        contrib = term1 - term2
        base = neumann_NM(big_m, data, at(anchor), spec)
    elif representation == "iv":
        def at(t):
            return HalfSpacePoint.from_cartesian(np.append(t * x.y_hat, x.x_n))

        ynorm = x.r * x.sin_theta
        term1 = outer(anchor, ynorm,
                      lambda t: _dm_convention(big_m - 1, f_dir, at(t), spec)) / x.x_n
        term2 = outer(anchor, ynorm,
                      lambda t: _dm_convention(big_m - 2, data, at(t), spec) * t) / x.x_n
        contrib = term1 - term2
        base = neumann_NM(big_m, data, at(anchor), spec)
    elif representation == "v":
        y = x.y

        def at(t):
            return HalfSpacePoint.from_cartesian(np.append(y, t))

        contrib = -outer(anchor, x.x_n,
                         lambda t: _dm_convention(big_m - 2, data, at(t), spec))
        base = neumann_NM(big_m, data, at(anchor), spec)
    else:
        raise DomainError(f"unknown representation {representation!r}")

    value = contrib + base
    scale = max(1.0, abs(direct))
    return CheckReport(
        name=f"neumann_representation_{representation}",
        parameters={"M": big_m, "anchor": anchor, "r": x.r, "theta": x.theta},
        residual=abs(value - direct) / scale,
        tolerance=tol,
    )


# ---------------------------------------------------------------------------
# growth sweeps


def growth_sweep(target, radii, thetas, weight_exponent: float,
                 radial_exponent: float, name: str,
                 parameters: dict | None = None,
                 wiggle: float = 1.05, drop: float = 0.2) -> CheckReport:
    """Weighted supremum sweep certifying an order relation.

    target(x) evaluates the integral at a half-space point; mu(r) is the
    maximum over the theta grid of |target| * cos(theta)^weight_exponent,
    and the certified claim is that mu(r) / r^radial_exponent decreases
    (after the first step, within the wiggle factor) to at most `drop`
    times its initial value.
    """
    radii = list(radii)
    seq = []
    for r in radii:
        mu = 0.0
        for theta in thetas:
            x = HalfSpacePoint(n=parameters.get("n", 3) if parameters else 3,
                               r=float(r), theta=float(theta))
            mu = max(mu, abs(target(x)) * math.cos(theta) ** weight_exponent)
        seq.append(mu / float(r) ** radial_exponent)
    if seq[0] == 0.0:
        residual = 0.0 if max(seq) == 0.0 else float("inf")
    else:
        monotone = all(b <= a * wiggle for a, b in zip(seq[1:-1], seq[2:]))
        residual = seq[-1] / seq[0] if monotone else float("inf")
    return CheckReport(
        name=name,
        parameters={**(parameters or {}), "radii": radii,
                    "weighted_sequence": seq},
        residual=residual,
        tolerance=drop,
    )
