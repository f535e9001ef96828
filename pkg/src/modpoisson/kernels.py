"""Half-space kernels: the base kernel, the two modified kinds, and bounds.

The modified kernel of the first kind subtracts the leading Gegenbauer tail
in inverse powers of |y'| (useful for growing data); the second kind swaps
the roles of |x| and |y'| (useful for decaying data and expansions).  The
direct subtraction formula is the production path; the one-dimensional
integral form exists for cross-verification and for the sign analysis in
`sharpness`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from . import gegenbauer, quad1d
from .errors import DomainError, SingularityError
from .geometry import HalfSpacePoint, cos_theta_prime_array

__all__ = [
    "KernelParams",
    "kernel_K",
    "kernel_KM_direct",
    "kernel_KM_integral",
    "kernel_KM_integral_poly",
    "kernel_KM_second",
    "kernel_bound_first",
    "kernel_with_convention",
]


@dataclass(frozen=True)
class KernelParams:
    """(lam, M, kind) selecting a modified kernel; kind is 'first' or 'second'."""

    lam: float
    big_m: int
    kind: str = "first"

    def __post_init__(self):
        if not self.lam > 0:
            raise DomainError(f"kernel exponent must be positive, got {self.lam}")
        if self.big_m < 0:
            raise DomainError(f"modification order must be >= 0, got {self.big_m}")
        if self.kind not in ("first", "second"):
            raise DomainError(f"kind must be 'first' or 'second', got {self.kind!r}")
        if self.kind == "second" and self.big_m < 1:
            raise DomainError("second-kind kernels require M >= 1")


def _prepare(x: HalfSpacePoint, yp):
    """Shared polar quantities: (|y'| array, cos(theta') array, scalar flag)."""
    pts = np.asarray(yp, dtype=float)
    scalar = pts.ndim == 1
    pts2 = pts.reshape(-1, x.n - 1) if scalar else pts
    norms = np.linalg.norm(pts2, axis=-1)
    cosp = cos_theta_prime_array(x, pts2)
    return norms, cosp, scalar


def _out(vals: np.ndarray, scalar: bool):
    return float(vals[0]) if scalar else vals


def kernel_K(lam: float, x: HalfSpacePoint, yp):
    """Base kernel [|y' - y|^2 + x_n^2] ** (-lam).

    Computed in polar form |y'|^2 - 2|y'||x|Theta + |x|^2, which avoids the
    cancellation of the Cartesian form when |y' - y| is tiny against |x|.
    """
    if not lam > 0:
        raise DomainError(f"kernel exponent must be positive, got {lam}")
    norms, cosp, scalar = _prepare(x, yp)
    theta_big = x.sin_theta * cosp
    base = norms * norms - 2.0 * norms * x.r * theta_big + x.r * x.r
    if np.any(base <= 0.0):
        raise SingularityError("kernel evaluated at (or beyond) its contact point")
    return _out(base ** (-lam), scalar)


def kernel_KM_direct(params: KernelParams, x: HalfSpacePoint, yp):
    """First-kind modified kernel by direct subtraction of the Gegenbauer tail.

    K_M = K - sum over m < M of |x|^m |y'|^-(m+2*lam) C_m^lam(Theta); M = 0
    reduces to the base kernel.
    """
    if params.kind != "first":
        raise DomainError("kernel_KM_direct takes first-kind parameters")
    lam, big_m = params.lam, params.big_m
    if big_m == 0:
        return kernel_K(lam, x, yp)
    norms, cosp, scalar = _prepare(x, yp)
    if np.any(norms == 0.0):
        raise SingularityError("modified kernel is singular at the boundary origin")
    theta_big = x.sin_theta * cosp
    base = norms * norms - 2.0 * norms * x.r * theta_big + x.r * x.r
    if np.any(base <= 0.0):
        raise SingularityError("kernel evaluated at (or beyond) its contact point")
    s = x.r / norms
    tail = norms ** (-2.0 * lam) * gegenbauer.weighted_sum(lam, big_m, theta_big, s)
    return _out(base ** (-lam) - tail, scalar)


def _phi_minus_coeffs(lam: float, big_m: int, theta_big: float):
    a = big_m * gegenbauer.value(lam, big_m, theta_big)
    b = (2.0 * lam + big_m - 1.0) * gegenbauer.value(lam, big_m - 1, theta_big)
    return a, b


def kernel_KM_integral(
    params: KernelParams, x: HalfSpacePoint, yp, tol: float = 1e-10
) -> float:
    """First-kind modified kernel via its one-dimensional integral form.

    K_M = K * integral over zeta in (0, s) of
    (1 - 2*Theta*zeta + zeta^2)^(lam-1) * Phi_-(Theta, zeta) * zeta^(M-1),
    with s = |x| / |y'|.  Adaptive quadrature to absolute tolerance `tol`;
    for lam < 1 the weight can be near-singular where zeta and Theta both
    approach 1, which is handled by graded panel edges there.
    """
    if params.kind != "first" or params.big_m < 1:
        raise DomainError("integral form needs first-kind parameters with M >= 1")
    lam, big_m = params.lam, params.big_m
    pts = np.asarray(yp, dtype=float)
    if pts.ndim != 1:
        raise DomainError("integral form evaluates one boundary point at a time")
    norm = float(np.linalg.norm(pts))
    if norm == 0.0:
        raise SingularityError("modified kernel is singular at the boundary origin")
    s = x.r / norm
    if s == 0.0:
        return 0.0
    cosp = float(cos_theta_prime_array(x, pts.reshape(1, -1))[0])
    theta_big = x.sin_theta * cosp
    a, b = _phi_minus_coeffs(lam, big_m, theta_big)

    def integrand(zeta):
        weight = (1.0 - 2.0 * theta_big * zeta + zeta * zeta) ** (lam - 1.0)
        return weight * (a - b * zeta) * zeta ** (big_m - 1)

    edges = [0.0, s]
    if lam < 1.0 and theta_big > 0.9 and s > 0.5:
        # graded edges toward the near-contact point zeta = 1
        graded = [1.0 - 1e-2 * 4.0**-j for j in range(12)]
        if s > 1.0:
            graded += [1.0, min(s, 1.0 + 1e-2)]
        edges += [e for e in graded if 0.0 < e < s]
    elif s > 1.0:
        edges.append(1.0)
    edges = sorted(set(edges))
    integral, _ = quad1d.adaptive(integrand, edges, tol)
    return kernel_K(lam, x, yp) * integral


def kernel_KM_integral_poly(params: KernelParams, x: HalfSpacePoint, yp) -> float:
    """Closed form of the integral representation for lam = 1.

    The weight exponent vanishes, leaving a polynomial with antiderivative
    C_M(Theta) s^M - C_{M-1}(Theta) s^(M+1); used as a machine-precision
    oracle against the quadrature path.
    """
    if params.lam != 1.0:
        raise DomainError("closed-form integral requires lam = 1 exactly")
    if params.big_m < 1:
        raise DomainError("closed form needs M >= 1")
    big_m = params.big_m
    pts = np.asarray(yp, dtype=float)
    norm = float(np.linalg.norm(pts))
    if norm == 0.0:
        raise SingularityError("modified kernel is singular at the boundary origin")
    s = x.r / norm
    cosp = float(cos_theta_prime_array(x, pts.reshape(1, -1))[0])
    theta_big = x.sin_theta * cosp
    integral = (
        gegenbauer.value(1.0, big_m, theta_big) * s**big_m
        - gegenbauer.value(1.0, big_m - 1, theta_big) * s ** (big_m + 1)
    )
    return kernel_K(1.0, x, yp) * integral


def kernel_KM_second(params: KernelParams, x: HalfSpacePoint, yp):
    """Second-kind modified kernel: tail in inverse powers of |x| instead.

    K~_M = K - sum over m < M of |y'|^m |x|^-(m+2*lam) C_m^lam(Theta).
    """
    if params.kind != "second":
        raise DomainError("kernel_KM_second takes second-kind parameters")
    lam, big_m = params.lam, params.big_m
    norms, cosp, scalar = _prepare(x, yp)
    theta_big = x.sin_theta * cosp
    base = norms * norms - 2.0 * norms * x.r * theta_big + x.r * x.r
    if np.any(base <= 0.0):
        raise SingularityError("kernel evaluated at (or beyond) its contact point")
    u = norms / x.r
    tail = x.r ** (-2.0 * lam) * gegenbauer.weighted_sum(lam, big_m, theta_big, u)
    return _out(base ** (-lam) - tail, scalar)


def _binom_gamma(a: float, k: float) -> float:
    """binom(a, k) for real a via log-gamma."""
    return float(np.exp(gammaln(a + 1.0) - gammaln(k + 1.0) - gammaln(a - k + 1.0)))


def kernel_bound_first(params: KernelParams, x: HalfSpacePoint, yp):
    """Fully explicit majorant of |K_M| for M >= 1.

    For lam >= 1/2:
        2*lam*binom(2*lam+M, M-1) * 2^(2*lam) * sec(theta)^(2*lam)
        * (|x|+|y'|)^(-2*lam) * s^M * (1+s)^(2*lam-1)
    and for lam < 1/2 the factor s*(1+s)^(2*lam-1) is replaced by
    min(s, s^(2*lam)) / lam, absorbing the singular weight.
    """
    if params.kind != "first" or params.big_m < 1:
        raise DomainError("bound applies to first-kind parameters with M >= 1")
    lam, big_m = params.lam, params.big_m
    norms, _, scalar = _prepare(x, yp)
    if np.any(norms == 0.0):
        raise SingularityError("bound undefined at the boundary origin")
    s = x.r / norms
    d1 = 2.0 * lam * _binom_gamma(2.0 * lam + big_m, big_m - 1.0)
    front = d1 * 2.0 ** (2.0 * lam) * x.sec_theta ** (2.0 * lam) * (x.r + norms) ** (-2.0 * lam)
    if lam >= 0.5:
        vals = front * s**big_m * (1.0 + s) ** (2.0 * lam - 1.0)
    else:
        vals = front * s ** (big_m - 1) * np.minimum(s, s ** (2.0 * lam)) / lam
    return _out(vals, scalar)


def kernel_with_convention(lam: float, m: int, x: HalfSpacePoint, yp):
    """K_m with the convention K_m = K for m <= 0 (differential identities)."""
    if m <= 0:
        return kernel_K(lam, x, yp)
    return kernel_KM_direct(KernelParams(lam, m), x, yp)
