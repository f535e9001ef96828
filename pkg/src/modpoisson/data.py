"""Boundary data: evaluatable functions on the hyperplane with declared growth.

Every integral operator in the package consumes a BoundaryData, which couples
a vectorized evaluator with the metadata the quadrature needs: a growth
exponent, a support descriptor (with kink radii for panel alignment), and,
for union-of-balls supports, the explicit ball list so integration can run
in ball-local coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import ConstructionError, DomainError

__all__ = [
    "Support",
    "BoundaryData",
    "constant",
    "bump",
    "shell_bump",
    "bump_train",
    "exp_decay",
    "poly_growth",
    "DATA_REGISTRY",
    "make_data",
]


@dataclass(frozen=True)
class Support:
    """Where the data lives: 'compact' within outer_radius or 'global'.

    radial_edges lists radii where the data has kinks or support boundaries
    (quadrature aligns panel edges there); balls, when set, is a tuple of
    (center, radius) pairs whose union contains the support exactly.
    """

    kind: str
    outer_radius: float | None = None
    inner_radius: float = 0.0
    radial_edges: tuple = ()
    balls: tuple = ()

    def __post_init__(self):
        if self.kind not in ("compact", "global"):
            raise DomainError(f"support kind must be 'compact' or 'global', got {self.kind!r}")
        if self.kind == "compact" and not self.outer_radius:
            raise DomainError("compact support needs an outer radius")


@dataclass
class BoundaryData:
    """A data function f on R^(n-1) with its integrability metadata.

    evaluator takes an array of shape (..., n-1) and returns values of shape
    (...).  growth_exponent is the smallest g with |f(y)| <= C (1+|y|)^g;
    decaying data may declare -inf.  integrability_M records the declared
    modification order from the data author (informational; the operators
    check admissibility from the growth exponent directly).
    """

    n: int
    evaluator: Callable[[np.ndarray], np.ndarray]
    growth_exponent: float
    support: Support
    integrability_M: int | None = None
    name: str = ""
    amplitude: float = 1.0

    def __call__(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return self.evaluator(pts)

    def first_kind_admissible(self, lam: float, big_m: int) -> bool:
        """Whether the growth condition for the first modified kernel holds."""
        if self.support.kind == "compact":
            return True
        return big_m + 2.0 * lam > self.growth_exponent + self.n - 1.0

    def second_kind_admissible(self, big_m: int) -> bool:
        """Whether the moment condition for the second modified kernel holds."""
        if self.support.kind == "compact":
            return True
        return self.growth_exponent + (big_m - 1.0) + (self.n - 2.0) < -1.0

    def scaled_by(self, factor_fn, name_suffix="*", growth_shift=0.0) -> "BoundaryData":
        """New data multiplying this one by a vectorized factor function."""
        inner = self.evaluator

        def evaluator(pts):
            return inner(pts) * factor_fn(pts)

        return replace(
            self,
            evaluator=evaluator,
            growth_exponent=self.growth_exponent + growth_shift,
            name=self.name + name_suffix,
        )


def _norms(pts):
    return np.linalg.norm(np.asarray(pts, dtype=float), axis=-1)


def constant(n: int, value: float = 1.0) -> BoundaryData:
    """f = value everywhere (harmonic-measure normalization tests)."""

    def evaluator(pts):
        return np.full(np.asarray(pts).shape[:-1], float(value))

    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=0.0,
        support=Support("global"),
        integrability_M=0,
        name=f"constant({value})",
        amplitude=abs(value),
    )


def _cone_profile(dist, radius):
    return np.clip(1.0 - dist / radius, 0.0, None)


def _smooth_profile(dist, radius):
    u = np.clip(dist / radius, 0.0, 1.0)
    return (1.0 - u * u) ** 3


def bump(n: int, center=None, radius: float = 1.0, height: float = 1.0,
         normalized: bool = False) -> BoundaryData:
    """Smooth compactly supported bump (1 - (d/radius)^2)^3 at `center`.

    With normalized=True the height is rescaled so the integral over the
    boundary hyperplane is 1 (radial mass computed to machine accuracy).
    """
    if radius <= 0:
        raise ConstructionError("bump radius must be positive")
    if center is None:
        center = np.zeros(n - 1)
    else:
        center = np.atleast_1d(np.asarray(center, dtype=float))
        if center.size == 1 and n > 2:
            # scalar shorthand: offset along the first boundary axis
            center = np.append(center, np.zeros(n - 2))
    if center.shape != (n - 1,):
        raise ConstructionError(f"bump center must live in R^{n - 1}")
    if normalized:
        height = height / _radial_mass(n, radius)
    cnorm = float(np.linalg.norm(center))

    def evaluator(pts):
        d = np.linalg.norm(np.asarray(pts, dtype=float) - center, axis=-1)
        return height * _smooth_profile(d, radius)

    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=0.0,
        support=Support(
            "compact",
            outer_radius=cnorm + radius,
            inner_radius=max(0.0, cnorm - radius),
            radial_edges=(max(0.0, cnorm - radius), cnorm + radius),
            balls=((center, radius),),
        ),
        integrability_M=0,
        name=f"bump(r={radius})",
        amplitude=abs(height),
    )


def _radial_mass(n: int, radius: float) -> float:
    """Integral of the smooth profile over R^(n-1), by exact 1D quadrature."""
    from .quadrature import sphere_surface_area

    xg, wg = np.polynomial.legendre.leggauss(64)
    rho = 0.5 * radius * (xg + 1.0)
    w = 0.5 * radius * wg
    vals = _smooth_profile(rho, radius) * rho ** (n - 2)
    return float(sphere_surface_area(n - 2) * np.dot(w, vals))


def shell_bump(n: int, r_in: float, r_out: float, height: float = 1.0,
               normalized: bool = False) -> BoundaryData:
    """Radially symmetric bump supported on the annulus r_in <= |y| <= r_out."""
    if not 0 <= r_in < r_out:
        raise ConstructionError("need 0 <= r_in < r_out")
    mid, half = 0.5 * (r_in + r_out), 0.5 * (r_out - r_in)
    if normalized:
        from .quadrature import sphere_surface_area

        xg, wg = np.polynomial.legendre.leggauss(64)
        rho = mid + half * xg
        w = half * wg
        mass = sphere_surface_area(n - 2) * np.dot(w, _smooth_profile(np.abs(rho - mid), half) * rho ** (n - 2))
        height = height / float(mass)

    def evaluator(pts):
        rho = _norms(pts)
        return height * _smooth_profile(np.abs(rho - mid), half)

    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=0.0,
        support=Support(
            "compact",
            outer_radius=r_out,
            inner_radius=r_in,
            radial_edges=(r_in, mid, r_out),
        ),
        integrability_M=0,
        name=f"shell({r_in},{r_out})",
        amplitude=abs(height),
    )


def bump_train(n: int, radii=(4.0, 16.0, 64.0), width: float = 0.5,
               growth: float = 1.0) -> BoundaryData:
    """Radial shells at the given radii with amplitudes r^growth.

    Compactly supported (finite prefix of a train), but exercising the
    declared polynomial growth class across its shells.
    """
    radii = tuple(sorted(float(r) for r in radii))
    if radii[0] - width <= 0:
        raise ConstructionError("innermost shell must stay away from the origin")
    amps = [r**growth for r in radii]

    def evaluator(pts):
        rho = _norms(pts)
        out = np.zeros_like(rho)
        for r, a in zip(radii, amps):
            out += a * _smooth_profile(np.abs(rho - r), width)
        return out

    edges = []
    for r in radii:
        edges += [r - width, r, r + width]
    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=growth,
        support=Support(
            "compact",
            outer_radius=radii[-1] + width,
            inner_radius=radii[0] - width,
            radial_edges=tuple(edges),
        ),
        integrability_M=None,
        name=f"bump_train(g={growth})",
        amplitude=max(amps),
    )


def exp_decay(n: int, rate: float = 1.0) -> BoundaryData:
    """f(y) = exp(-rate * |y|); satisfies every moment condition."""
    if rate <= 0:
        raise ConstructionError("decay rate must be positive")

    def evaluator(pts):
        return np.exp(-rate * _norms(pts))

    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=-np.inf,
        support=Support("global"),
        integrability_M=None,
        name=f"exp_decay({rate})",
        amplitude=1.0,
    )


def poly_growth(n: int, exponent: float = 1.0) -> BoundaryData:
    """f(y) = (1 + |y|^2)^(exponent/2), a smooth global growth class."""

    def evaluator(pts):
        rho = _norms(pts)
        return (1.0 + rho * rho) ** (exponent / 2.0)

    return BoundaryData(
        n=n,
        evaluator=evaluator,
        growth_exponent=float(exponent),
        support=Support("global"),
        integrability_M=None,
        name=f"poly_growth({exponent})",
        amplitude=1.0,
    )


def _sharpness_half_balls(n: int, lam: float = 0.5, big_m: int = 1,
                          centers=(4.0, 16.0), psi=(1.0, 1.0)) -> BoundaryData:
    from .sharpness import data_half_balls

    return data_half_balls(n, list(psi), list(centers), lam, int(big_m))


def _sharpness_super_balls(n: int, lam: float = 1.5, big_m: int = 1,
                           a=(20.0, 60.0), b=(1.5, 4.5), amps=(1.0, 1.0)) -> BoundaryData:
    from .sharpness import data_balls_super_extension

    return data_balls_super_extension(n, list(a), list(b), list(amps), lam, int(big_m))


DATA_REGISTRY = {
    "constant": constant,
    "bump": bump,
    "shell_bump": shell_bump,
    "bump_train": bump_train,
    "exp_decay": exp_decay,
    "poly_growth": poly_growth,
    "sharpness_half_balls": _sharpness_half_balls,
    "sharpness_super_balls": _sharpness_super_balls,
}


def make_data(name: str, n: int, **kwargs) -> BoundaryData:
    """Instantiate a named built-in data function (CLI entry point)."""
    if name not in DATA_REGISTRY:
        raise DomainError(f"unknown data {name!r}; choices: {sorted(DATA_REGISTRY)}")
    return DATA_REGISTRY[name](n, **kwargs)
