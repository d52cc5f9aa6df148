"""Sobolev seminorms of polynomials over tetrahedra.

The order-m seminorm with exponent p sums |d^delta q|^p in L^p over all
derivative multi-orders of total order m (maximum over orders and points for
p = infinity).  Even integer p is computed exactly through the closed-form
monomial integral on the reference tetrahedron; general finite p uses
adaptive uniform subdivision with a fixed conical-product quadrature rule;
p = infinity samples a dense barycentric lattice (documented relative
accuracy about 1e-3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import DegenerateElement, DegreeOverflow, ParameterOutOfRange, UnsupportedOrder
from .polynomials import Polynomial
from .simplex import AffineMap, Tetrahedron, uniform_scale

MAX_INTEGRAND_DEGREE = 24
MAX_DERIVATIVE_ORDER = 24
SUP_LATTICE_DIVISIONS = 50   # barycentric subdivisions per edge for p = inf
SUP_REL_ACCURACY = 1e-3      # documented sampling accuracy of the sup path
QUAD_POINTS_PER_AXIS = 5     # conical-product rule, exact through degree 9
QUAD_REL_TOL = 1e-8
MAX_REFINE_LEVEL = 4


@dataclass(frozen=True)
class SeminormSpec:
    """Derivative order m >= 0 and Lebesgue exponent p in [1, inf]."""

    m: int
    p: float

    def __post_init__(self):
        if self.m < 0:
            raise ParameterOutOfRange(f"derivative order must be >= 0, got {self.m}")
        if not (self.p >= 1.0):
            raise ParameterOutOfRange(f"exponent p must be >= 1, got {self.p}")


def derivative_orders(m: int) -> list[tuple[int, int, int]]:
    return [(d1, d2, m - d1 - d2) for d1 in range(m + 1) for d2 in range(m + 1 - d1)]


@lru_cache(maxsize=None)
def _reference_moments(cap: int) -> dict:
    # integral of x^i y^j z^l over the unit right-corner tetrahedron
    moments = {}
    for i in range(cap + 1):
        for j in range(cap + 1 - i):
            for l in range(cap + 1 - i - j):
                moments[(i, j, l)] = (
                    math.factorial(i) * math.factorial(j) * math.factorial(l)
                ) / math.factorial(i + j + l + 3)
    return moments


def integrate_polynomial(tet: Tetrahedron, q: Polynomial) -> float:
    """Exact integral of ``q`` over ``tet`` (up to rounding).

    Change of variables onto the unit right-corner tetrahedron, then the
    closed-form monomial moments i! j! l! / (i + j + l + 3)!.
    """
    if q.degree > MAX_INTEGRAND_DEGREE:
        raise DegreeOverflow(f"integrand degree {q.degree} exceeds {MAX_INTEGRAND_DEGREE}")
    if not q.terms:
        return 0.0
    v = tet.vertices
    jac = (v[1:] - v[0]).T
    det = float(np.linalg.det(jac))
    if det == 0.0:
        raise DegenerateElement("zero-volume element in integration")
    pulled = q.compose_affine(AffineMap(jac, v[0]))
    moments = _reference_moments(MAX_INTEGRAND_DEGREE)
    return abs(det) * sum(c * moments[exp] for exp, c in pulled.terms.items())


@lru_cache(maxsize=8)
def _barycentric_lattice(divisions: int) -> np.ndarray:
    rows = []
    for a1 in range(divisions + 1):
        for a2 in range(divisions + 1 - a1):
            for a3 in range(divisions + 1 - a1 - a2):
                rows.append((a1, a2, a3, divisions - a1 - a2 - a3))
    return np.array(rows, dtype=float) / divisions


def _sup_seminorm(tet: Tetrahedron, derivs: list[Polynomial]) -> float:
    points = _barycentric_lattice(SUP_LATTICE_DIVISIONS) @ tet.vertices
    best = 0.0
    for d in derivs:
        if d:
            best = max(best, float(np.abs(d.evaluate(points)).max()))
    return best


@lru_cache(maxsize=2)
def _reference_rule() -> tuple[np.ndarray, np.ndarray]:
    # conical-product rule on the unit right-corner tetrahedron
    def on_unit_interval(n, k):
        x, w = roots_jacobi(n, k, 0.0)
        return (x + 1.0) / 2.0, w / 2.0 ** (k + 1)

    n = QUAD_POINTS_PER_AXIS
    a, wa = on_unit_interval(n, 2)
    b, wb = on_unit_interval(n, 1)
    c, wc = on_unit_interval(n, 0)
    pts, wts = [], []
    for i in range(n):
        for j in range(n):
            for l in range(n):
                x = a[i]
                y = b[j] * (1.0 - a[i])
                z = c[l] * (1.0 - a[i]) * (1.0 - b[j])
                pts.append((x, y, z))
                wts.append(wa[i] * wb[j] * wc[l])
    return np.array(pts), np.array(wts)


def _split_cells(cells: np.ndarray) -> np.ndarray:
    # uniform refinement of each tetrahedron into 8 children via edge midpoints
    v0, v1, v2, v3 = cells[:, 0], cells[:, 1], cells[:, 2], cells[:, 3]
    m01 = 0.5 * (v0 + v1)
    m02 = 0.5 * (v0 + v2)
    m03 = 0.5 * (v0 + v3)
    m12 = 0.5 * (v1 + v2)
    m13 = 0.5 * (v1 + v3)
    m23 = 0.5 * (v2 + v3)
    children = [
        (v0, m01, m02, m03),
        (m01, v1, m12, m13),
        (m02, m12, v2, m23),
        (m03, m13, m23, v3),
        (m01, m02, m03, m13),
        (m01, m02, m12, m13),
        (m02, m03, m13, m23),
        (m02, m12, m13, m23),
    ]
    return np.concatenate([np.stack(c, axis=1) for c in children], axis=0)


def _quadrature_power_sum(tet: Tetrahedron, derivs: list[Polynomial], p: float) -> float:
    ref_pts, ref_wts = _reference_rule()
    cells = tet.vertices[np.newaxis, :, :]
    previous = None
    total = 0.0
    for _ in range(MAX_REFINE_LEVEL + 1):
        origins = cells[:, 0, :]
        jacs = cells[:, 1:, :] - origins[:, np.newaxis, :]
        dets = np.abs(np.linalg.det(jacs))
        # points: (ncells, nq, 3)
        pts = origins[:, np.newaxis, :] + np.einsum("qr,crx->cqx", ref_pts, jacs)
        flat = pts.reshape(-1, 3)
        integrand = np.zeros(flat.shape[0])
        for d in derivs:
            if d:
                integrand += np.abs(d.evaluate(flat)) ** p
        per_cell = integrand.reshape(len(cells), -1) @ ref_wts
        total = float(per_cell @ dets)
        if previous is not None and abs(total - previous) <= QUAD_REL_TOL * max(abs(total), 1e-300):
            break
        previous = total
        cells = _split_cells(cells)
    return total


def seminorm(tet: Tetrahedron, q: Polynomial, spec: SeminormSpec) -> float:
    """Order-m, exponent-p Sobolev seminorm of ``q`` over ``tet``."""
    m, p = spec.m, spec.p
    if m > MAX_DERIVATIVE_ORDER:
        raise UnsupportedOrder(f"derivative order {m} exceeds {MAX_DERIVATIVE_ORDER}")
    derivs = [q.derivative(d) for d in derivative_orders(m)]
    if not any(derivs):
        return 0.0
    if math.isinf(p):
        return _sup_seminorm(tet, derivs)
    if p == int(p) and int(p) % 2 == 0:
        power = int(p)
        total = sum(integrate_polynomial(tet, d**power) for d in derivs if d)
        return max(total, 0.0) ** (1.0 / p)
    return _quadrature_power_sum(tet, derivs, p) ** (1.0 / p)


def scaling_identity_check(
    q: Polynomial, tet: Tetrahedron, alpha: float, k: int, p: float
) -> tuple[float, float]:
    """Both sides of the similarity-scaling identity for seminorms.

    Returns ``(|q|_{k,p,K}, alpha**(3/p - k) * |q o S_alpha|_{k,p,S_{1/alpha}(K)})``
    where ``S_alpha`` is the uniform scaling by ``alpha``; the two must agree.
    """
    if not alpha > 0.0:
        raise ParameterOutOfRange(f"scale factor must be positive, got {alpha}")
    spec = SeminormSpec(k, p)
    lhs = seminorm(tet, q, spec)
    pulled = q.compose_affine(uniform_scale(alpha))
    shrunk = uniform_scale(1.0 / alpha).apply_to(tet)
    exponent = (0.0 if math.isinf(p) else 3.0 / p) - k
    rhs = alpha**exponent * seminorm(shrunk, pulled, spec)
    return lhs, rhs


def validate_p(k: int, m: int, p: float) -> bool:
    """Whether exponent ``p`` is admissible for interpolation order k and
    error order m (continuity of point evaluation on the source space)."""
    if k < 1 or m < 0 or m > k:
        raise ParameterOutOfRange(f"need k >= 1 and 0 <= m <= k, got k={k}, m={m}")
    return p_rule_violation(k, m, p) is None


def p_rule_violation(k: int, m: int, p: float) -> str | None:
    """The violated admissibility clause, or None when (k, m, p) is valid."""
    if k == m:
        return None if p > 2.0 else f"k - m = 0 requires p > 2 (got p={p})"
    if k == 1 and m == 0:
        return None if p > 1.5 else f"k = 1, m = 0 requires p > 3/2 (got p={p})"
    return None if p >= 1.0 else f"p must be at least 1 (got p={p})"
