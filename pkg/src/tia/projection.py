"""Rotate-then-project circumradius sweep and the projected quality measure.

For a tetrahedron in standard position, rotating by theta about the z-axis
and projecting onto the xz-plane flattens the element to a triangle: the
base maps into the x-axis and the apex keeps its height.  R_theta is that
triangle's circumradius, R_P its maximum over theta in [-pi/2, pi/2], and
the projected circumradius of the element is the minimum over base facets of
R_B * R_P / h_B.  Unlike the circumsphere radius, this measure tracks the
interpolation error of flat, no-short-edge elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DegenerateProjection, ParameterOutOfRange
from .simplex import (
    StandardPosition,
    Tetrahedron,
    diameter,
    facet_circumradius,
    inradius_circumradius,
    standard_position,
)

THETA_GRID_POINTS = 2048
GOLDEN_REL_TOL = 1e-10
DEFAULT_PHI = 0.2  # tilt used by the constructive theta selection; sin(2phi)tan(2phi) <= 1/6


@dataclass(frozen=True)
class ProjectedTriangle:
    """Image of a standard-position element under rotate-and-project.

    The base collapses to the segment [x_lo, x_hi] on the x-axis and the
    apex lands at (apex_x, apex_z) with apex_x = gamma * w(theta), where
    w(theta) = s21*cos(theta) - s22*sin(theta).
    """

    x_lo: float
    x_hi: float
    apex_x: float
    apex_z: float
    theta: float


@dataclass(frozen=True)
class FacetProjectionReport:
    base_index: int
    R_B: float
    R_P: float
    theta_at_max: float
    ratio: float
    h_B: float

    def as_dict(self) -> dict:
        return {
            "base": self.base_index,
            "R_B": self.R_B,
            "R_P": self.R_P,
            "theta_at_max": self.theta_at_max,
            "ratio": self.ratio,
        }


@dataclass(frozen=True)
class ThetaSelection:
    """Constructive rotation angle and the two inequalities it certifies.

    The selection guarantees ``apex_x <= base_mid`` and ``gap >= gap_floor``
    with ``gap_floor = sin(phi) * gamma * s_bold_2``.
    """

    case_id: int
    theta: float
    phi: float
    c1: float
    apex_x: float
    base_mid: float
    gap: float
    gap_floor: float


@dataclass(frozen=True)
class GeometryReport:
    h_K: float
    rho_K: float
    R_sphere: float
    R_K: float
    facets: tuple[FacetProjectionReport, ...]

    def as_dict(self) -> dict:
        return {
            "h_K": self.h_K,
            "rho_K": self.rho_K,
            "R_sphere": self.R_sphere,
            "R_K": self.R_K,
            "facets": [f.as_dict() for f in self.facets],
        }


class DistortionCheck(NamedTuple):
    distortion: float
    projection_ratio: float


def project_theta(sp: StandardPosition, theta: float) -> ProjectedTriangle:
    """Project the standard-position element after rotating by ``theta``."""
    eta, xi = sp.base_third_xy
    c, s = math.cos(theta), math.sin(theta)
    base_xs = (0.0, sp.alpha * c, eta * c - xi * s)
    w = sp.s21 * c - sp.s22 * s
    return ProjectedTriangle(
        x_lo=min(base_xs),
        x_hi=max(base_xs),
        apex_x=sp.gamma * w,
        apex_z=sp.gamma * sp.t2,
        theta=theta,
    )


def r_theta(pt: ProjectedTriangle) -> float:
    """Circumradius of the projected triangle, in closed form.

    Equals the generic three-point circumradius of ((x_lo, 0), (x_hi, 0),
    (apex_x, apex_z)).
    """
    scale = max(abs(pt.x_lo), abs(pt.x_hi), abs(pt.apex_x), pt.apex_z)
    if pt.apex_z <= 1e-13 * scale or (pt.x_hi - pt.x_lo) <= 1e-13 * scale:
        raise DegenerateProjection(
            f"projected triangle too flat: width {pt.x_hi - pt.x_lo:.3e}, height {pt.apex_z:.3e}"
        )
    hi = math.hypot(pt.x_hi - pt.apex_x, pt.apex_z)
    lo = math.hypot(pt.x_lo - pt.apex_x, pt.apex_z)
    return hi * lo / (2.0 * pt.apex_z)


def _radius_profile(sp: StandardPosition, thetas: np.ndarray) -> np.ndarray:
    eta, xi = sp.base_third_xy
    c, s = np.cos(thetas), np.sin(thetas)
    b2 = sp.alpha * c
    b3 = eta * c - xi * s
    x_lo = np.minimum(0.0, np.minimum(b2, b3))
    x_hi = np.maximum(0.0, np.maximum(b2, b3))
    apex_x = sp.gamma * (sp.s21 * c - sp.s22 * s)
    height = sp.gamma * sp.t2
    return (
        np.sqrt((x_hi - apex_x) ** 2 + height**2)
        * np.sqrt((x_lo - apex_x) ** 2 + height**2)
        / (2.0 * height)
    )


def _radius_scalar(sp: StandardPosition, theta: float) -> float:
    eta, xi = sp.base_third_xy
    c, s = math.cos(theta), math.sin(theta)
    b2 = sp.alpha * c
    b3 = eta * c - xi * s
    x_lo = min(0.0, b2, b3)
    x_hi = max(0.0, b2, b3)
    apex_x = sp.gamma * (sp.s21 * c - sp.s22 * s)
    height = sp.gamma * sp.t2
    return (
        math.hypot(x_hi - apex_x, height)
        * math.hypot(x_lo - apex_x, height)
        / (2.0 * height)
    )


def _golden_max(f, lo: float, hi: float, rel_tol: float = GOLDEN_REL_TOL):
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    tol = rel_tol * math.pi
    span = hi - lo
    if span <= tol:
        mid = 0.5 * (lo + hi)
        return mid, f(mid)
    steps = int(math.ceil(math.log(tol / span) / math.log(inv_phi)))
    c = hi - inv_phi * span
    d = lo + inv_phi * span
    fc, fd = f(c), f(d)
    for _ in range(steps):
        if fc > fd:
            hi, d, fd = d, c, fc
            span = hi - lo
            c = hi - inv_phi * span
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            span = hi - lo
            d = lo + inv_phi * span
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def r_p(sp: StandardPosition) -> tuple[float, float]:
    """Maximum projected circumradius over theta in [-pi/2, pi/2].

    Dense-grid scan followed by golden-section refinement on the bracketing
    subinterval; the result is never below any grid sample.
    """
    scale = max(sp.alpha, sp.gamma)
    if sp.gamma * sp.t2 <= 1e-13 * scale:
        raise DegenerateProjection("apex height vanishes; no bounded maximum")
    thetas = np.linspace(-math.pi / 2, math.pi / 2, THETA_GRID_POINTS)
    values = _radius_profile(sp, thetas)
    i = int(np.argmax(values))
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, len(thetas) - 1)]
    theta_ref, value_ref = _golden_max(lambda t: _radius_scalar(sp, t), lo, hi)
    if value_ref >= values[i]:
        return float(value_ref), float(theta_ref)
    return float(values[i]), float(thetas[i])


def projected_circumradius(tet: Tetrahedron) -> tuple[float, list[FacetProjectionReport]]:
    """Projected circumradius of ``tet`` with the per-facet breakdown.

    Minimum over the four base facets of R_B * R_P / h_B; invariant under
    rigid motions and homogeneous of degree 1 under similarity scaling.
    """
    reports = []
    for base in range(4):
        sp = standard_position(tet, base)
        base_pts = sp.standard_vertices[:3]
        rb = facet_circumradius(base_pts[0], base_pts[1], base_pts[2])
        rp, theta_at_max = r_p(sp)
        reports.append(
            FacetProjectionReport(
                base_index=base,
                R_B=rb,
                R_P=rp,
                theta_at_max=theta_at_max,
                ratio=rb * rp / sp.h_base,
                h_B=sp.h_base,
            )
        )
    return min(r.ratio for r in reports), reports


def geometry_report(tet: Tetrahedron) -> GeometryReport:
    rho, r_sphere = inradius_circumradius(tet)
    r_k, facets = projected_circumradius(tet)
    return GeometryReport(
        h_K=diameter(tet),
        rho_K=rho,
        R_sphere=r_sphere,
        R_K=r_k,
        facets=tuple(facets),
    )


# ---------------------------------------------------------------------------
# constructive constants


def _check_phi(phi: float):
    if not (0.0 < phi < math.pi / 6):
        raise ParameterOutOfRange(f"phi must lie in (0, pi/6), got {phi}")
    if math.sin(2 * phi) * math.tan(2 * phi) > 1.0 / 6.0 + 1e-15:
        raise ParameterOutOfRange(f"phi={phi} violates sin(2phi)tan(2phi) <= 1/6")


def gap_constant(phi: float = DEFAULT_PHI) -> float:
    """Lower-bound constant sin(phi) for the apex offset inequality."""
    _check_phi(phi)
    return math.sin(phi)


def projection_floor_constant(phi: float = DEFAULT_PHI) -> float:
    """Constant C3 with R_P >= C3 * max(alpha, gamma) / sqrt(1 - s_bold_2)."""
    c1 = gap_constant(phi)
    return min(c1, 0.25) * min(1.0, c1) / (2.0 * math.sqrt(2.0))


def distortion_bound_constant(phi: float = DEFAULT_PHI) -> float:
    """Constant C with distortion <= C * R_B * R_P / (h_B * max(alpha, gamma))."""
    return 4.0 * math.sqrt(2.0) / projection_floor_constant(phi)


def select_theta(sp: StandardPosition, phi: float = DEFAULT_PHI) -> ThetaSelection:
    """Constructive rotation angle certifying the projection lower bound.

    Case 1 (|s22| tan(phi) <= |s21|): theta = 0.  Case 2 (otherwise, with
    3 * gamma * s22 * tan(2 phi) <= alpha): theta = -2 phi.  Case 3: theta =
    2 phi.  In every case the apex projection stays left of the base
    midpoint and its offset from the lower base endpoint is at least
    sin(phi) * gamma * s_bold_2.
    """
    _check_phi(phi)
    if abs(sp.s22) * math.tan(phi) <= abs(sp.s21):
        case_id, theta = 1, 0.0
    elif 3.0 * sp.gamma * sp.s22 * math.tan(2 * phi) <= sp.alpha:
        case_id, theta = 2, -2.0 * phi
    else:
        case_id, theta = 3, 2.0 * phi
    pt = project_theta(sp, theta)
    c1 = math.sin(phi)
    return ThetaSelection(
        case_id=case_id,
        theta=theta,
        phi=phi,
        c1=c1,
        apex_x=pt.apex_x,
        base_mid=0.5 * (pt.x_lo + pt.x_hi),
        gap=abs(pt.x_lo - pt.apex_x),
        gap_floor=c1 * sp.gamma * sp.s_bold_2,
    )


def distortion_bound_terms(sp: StandardPosition) -> DistortionCheck:
    """Shear distortion against the unscaled projection ratio.

    Returns ``(prod_i (1 - s_bold_i)**-0.5, R_B * R_P / (h_B * max(alpha,
    gamma)))``; the first is bounded by ``distortion_bound_constant()`` times
    the second.
    """
    s1, s2 = sp.s_bold_1, sp.s_bold_2
    if s1 >= 1.0 or s2 >= 1.0:
        raise ParameterOutOfRange("shear magnitudes must be below 1")
    distortion = 1.0 / math.sqrt((1.0 - s1) * (1.0 - s2))
    base_pts = sp.standard_vertices[:3]
    rb = facet_circumradius(base_pts[0], base_pts[1], base_pts[2])
    rp, _ = r_p(sp)
    ratio = rb * rp / (sp.h_base * max(sp.alpha, sp.gamma))
    return DistortionCheck(distortion=distortion, projection_ratio=ratio)
