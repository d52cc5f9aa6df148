"""Tetrahedron geometry: validation, size measures, canonical positioning,
and the shear/scale factorization of the vertex map.

A tetrahedron is brought to *standard position* by a rigid motion (plus at
most one reflection): the base facet lies in the xy-plane with its longest
edge on the positive x-axis starting at the origin, the remaining base
vertex has positive y, and the apex has positive z with x-coordinate at most
half the longest base edge.  All downstream quality measures are defined on
that canonical frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateElement, NonFinite, ParameterOutOfRange

VOLUME_REL_TOLERANCE = 1e-14  # volume threshold relative to diameter**3

_EDGE_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def _as_points(vertices) -> np.ndarray:
    pts = np.asarray(vertices, dtype=float)
    if pts.shape != (4, 3):
        raise ValueError(f"expected 4 points in 3-space, got shape {pts.shape}")
    return pts


@dataclass(frozen=True, eq=False)
class Tetrahedron:
    """Four labeled vertices in 3-space; label order is significant."""

    vertices: np.ndarray

    def __post_init__(self):
        pts = _as_points(self.vertices).copy()
        pts.setflags(write=False)
        object.__setattr__(self, "vertices", pts)

    @property
    def signed_volume(self) -> float:
        v = self.vertices
        return float(np.linalg.det(v[1:] - v[0]) / 6.0)

    @property
    def volume(self) -> float:
        return abs(self.signed_volume)

    def facet(self, i: int) -> np.ndarray:
        """Vertices of the facet opposite vertex ``i``, in ascending label order."""
        if i not in range(4):
            raise ParameterOutOfRange(f"facet index must be 0..3, got {i}")
        return self.vertices[[j for j in range(4) if j != i]]

    def edge_lengths(self) -> np.ndarray:
        v = self.vertices
        return np.array([np.linalg.norm(v[a] - v[b]) for a, b in _EDGE_PAIRS])

    def as_dict(self) -> dict:
        return {"vertices": self.vertices.tolist()}

    def __repr__(self):
        rows = ", ".join(str(tuple(p)) for p in self.vertices)
        return f"Tetrahedron({rows})"


def tetrahedron_from_dict(data: dict) -> Tetrahedron:
    if not isinstance(data, dict) or "vertices" not in data:
        raise ValueError("tetrahedron JSON must be an object with a 'vertices' key")
    return validate_tetrahedron(data["vertices"])


def validate_tetrahedron(vertices) -> Tetrahedron:
    """Check finiteness and non-degeneracy, returning the validated element.

    The volume threshold is scale-invariant: |volume| must exceed
    ``VOLUME_REL_TOLERANCE * diam**3``.
    """
    pts = _as_points(vertices)
    if not np.all(np.isfinite(pts)):
        raise NonFinite("vertex coordinates must be finite")
    tet = Tetrahedron(pts)
    h = diameter(tet)
    if h == 0.0 or tet.volume <= VOLUME_REL_TOLERANCE * h**3:
        raise DegenerateElement(
            f"volume {tet.volume:.3e} below threshold for diameter {h:.3e}"
        )
    return tet


def diameter(tet: Tetrahedron) -> float:
    """Largest pairwise vertex distance."""
    return float(tet.edge_lengths().max())


def _facet_area(p, q, r) -> float:
    return 0.5 * float(np.linalg.norm(np.cross(q - p, r - p)))


def total_surface_area(tet: Tetrahedron) -> float:
    return sum(_facet_area(*tet.facet(i)) for i in range(4))


def inradius_circumradius(tet: Tetrahedron) -> tuple[float, float]:
    """Inscribed-sphere diameter and circumscribed-sphere radius.

    The inscribed-sphere diameter is ``6 * volume / surface_area``.  The
    circumcenter is found from the 3x3 linear system equating squared
    distances to all four vertices.
    """
    vol = tet.volume
    if vol == 0.0:
        raise DegenerateElement("zero volume")
    rho = 6.0 * vol / total_surface_area(tet)
    v = tet.vertices
    lhs = 2.0 * (v[1:] - v[0])
    rhs = np.sum(v[1:] ** 2, axis=1) - np.sum(v[0] ** 2)
    try:
        center = np.linalg.solve(lhs, rhs)
    except np.linalg.LinAlgError as exc:
        raise DegenerateElement("singular equidistance system") from exc
    return rho, float(np.linalg.norm(center - v[0]))


def facet_circumradius(p, q, r) -> float:
    """Circumradius of the triangle p q r: product of side lengths over 4*area."""
    from .errors import CollinearPoints

    p, q, r = (np.asarray(x, dtype=float) for x in (p, q, r))
    a = np.linalg.norm(q - p)
    b = np.linalg.norm(r - q)
    c = np.linalg.norm(p - r)
    area = _facet_area(p, q, r)
    scale = max(a, b, c)
    if scale == 0.0 or area <= 1e-14 * scale * scale:
        raise CollinearPoints("points span no triangle")
    return float(a * b * c / (4.0 * area))


# ---------------------------------------------------------------------------
# affine maps


@dataclass(frozen=True, eq=False)
class AffineMap:
    """x -> linear @ x + translation."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float).reshape(3, 3).copy()
        tr = np.asarray(self.translation, dtype=float).reshape(3).copy()
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    def __call__(self, points):
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self after inner: (self.compose(inner))(x) == self(inner(x))."""
        return AffineMap(
            self.linear @ inner.linear,
            self.linear @ inner.translation + self.translation,
        )

    def inverse(self) -> "AffineMap":
        inv = np.linalg.inv(self.linear)
        return AffineMap(inv, -inv @ self.translation)

    def apply_to(self, tet: Tetrahedron) -> Tetrahedron:
        return Tetrahedron(self(tet.vertices))

    @staticmethod
    def identity() -> "AffineMap":
        return AffineMap(np.eye(3), np.zeros(3))


def squeeze_yz(a: float, b: float) -> AffineMap:
    """Diagonal map (x, y, z) -> (x, a*y, b*z) with 0 < a <= 1 and b > 0."""
    if not (0.0 < a <= 1.0):
        raise ParameterOutOfRange(f"squeeze_yz needs 0 < a <= 1, got a={a}")
    if not b > 0.0:
        raise ParameterOutOfRange(f"squeeze_yz needs b > 0, got b={b}")
    return AffineMap(np.diag([1.0, a, b]), np.zeros(3))


def scale_axes(alpha: float, beta: float, gamma: float) -> AffineMap:
    """Diagonal map (x, y, z) -> (alpha*x, beta*y, gamma*z), 0 < beta <= alpha, gamma > 0.

    Factors as ``uniform_scale(alpha).compose(squeeze_yz(beta/alpha, gamma/alpha))``.
    """
    if not (0.0 < beta <= alpha):
        raise ParameterOutOfRange(f"scale_axes needs 0 < beta <= alpha, got {beta}, {alpha}")
    if not gamma > 0.0:
        raise ParameterOutOfRange(f"scale_axes needs gamma > 0, got {gamma}")
    return AffineMap(np.diag([alpha, beta, gamma]), np.zeros(3))


def uniform_scale(alpha: float) -> AffineMap:
    """Similarity x -> alpha * x with alpha > 0."""
    if not alpha > 0.0:
        raise ParameterOutOfRange(f"uniform_scale needs alpha > 0, got {alpha}")
    return AffineMap(np.diag([alpha] * 3), np.zeros(3))


REFERENCE_CASE_I = Tetrahedron([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])
REFERENCE_CASE_II = Tetrahedron([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 0, 1)])


def reference_tetrahedron(case_tag: str) -> Tetrahedron:
    if case_tag == "i":
        return REFERENCE_CASE_I
    if case_tag == "ii":
        return REFERENCE_CASE_II
    raise ParameterOutOfRange(f"case tag must be 'i' or 'ii', got {case_tag!r}")


# ---------------------------------------------------------------------------
# standard position


@dataclass(frozen=True, eq=False)
class StandardPosition:
    """Canonical parameters of a tetrahedron over a chosen base facet.

    With the base in the xy-plane, its longest edge of length ``alpha`` runs
    from the origin along the positive x-axis.  The remaining base vertex is
    ``(beta*s1, beta*t1, 0)`` when it lies in the lower half (``case_tag
    'i'``, measuring ``beta`` from the origin vertex) and ``(alpha - beta*s1,
    beta*t1, 0)`` otherwise (``case_tag 'ii'``, measuring from the far
    vertex).  The apex is ``gamma * (s21, s22, t2)`` with ``t2 > 0`` and
    apex x-coordinate at most ``alpha / 2``.

    ``motion`` maps input coordinates onto this frame; ``order`` records
    which input vertex landed on each canonical label.
    """

    alpha: float
    beta: float
    gamma: float
    s1: float
    t1: float
    s21: float
    s22: float
    t2: float
    case_tag: str
    motion: AffineMap
    order: tuple[int, int, int, int]

    def __post_init__(self):
        a = self.alpha
        tol = 1e-9 * a
        ok = (
            0.0 < self.beta <= a + tol
            and self.gamma > 0.0
            and self.t1 > 0.0
            and self.t2 > 0.0
            and self.s1 >= 0.0
            and abs(self.s1**2 + self.t1**2 - 1.0) < 1e-9
            and abs(self.s21**2 + self.s22**2 + self.t2**2 - 1.0) < 1e-9
            and self.beta * self.s1 <= a / 2 + 1e-12 * a
            and self.gamma * self.s21 <= a / 2 + 1e-12 * a
            and self.case_tag in ("i", "ii")
        )
        if not ok:
            raise ValueError(f"standard-position constraints violated: {self}")

    @property
    def s_bold_1(self) -> float:
        """|s1|: the base-shear magnitude."""
        return abs(self.s1)

    @property
    def s_bold_2(self) -> float:
        """sqrt(s21**2 + s22**2): the apex-shear magnitude."""
        return math.hypot(self.s21, self.s22)

    @property
    def h_base(self) -> float:
        """Longest base edge length (equals alpha)."""
        return self.alpha

    @property
    def base_third_xy(self) -> tuple[float, float]:
        """In-plane coordinates (eta, xi) of the base vertex off the x-axis."""
        if self.case_tag == "i":
            return self.beta * self.s1, self.beta * self.t1
        return self.alpha - self.beta * self.s1, self.beta * self.t1

    @property
    def standard_vertices(self) -> np.ndarray:
        eta, xi = self.base_third_xy
        return np.array(
            [
                [0.0, 0.0, 0.0],
                [self.alpha, 0.0, 0.0],
                [eta, xi, 0.0],
                [self.gamma * self.s21, self.gamma * self.s22, self.gamma * self.t2],
            ]
        )


def standard_position(tet: Tetrahedron, base: int) -> StandardPosition:
    """Canonical parameters of ``tet`` using the facet opposite vertex ``base``.

    The longest base edge is chosen deterministically (exact ties broken by
    lexicographic comparison of the sorted endpoint coordinates).  The rigid
    motion translates one endpoint to the origin, rotates the edge onto the
    positive x-axis and the base into the xy-plane with the remaining base
    vertex at y > 0, reflects z if needed so the apex has z > 0, and finally
    reflects x -> alpha - x (relabeling the edge endpoints) if the apex
    x-coordinate exceeds alpha / 2.
    """
    if base not in range(4):
        raise ParameterOutOfRange(f"base facet index must be 0..3, got {base}")
    verts = tet.vertices
    apex_index = base
    base_indices = [j for j in range(4) if j != apex_index]
    pts = verts[base_indices]

    best = None
    for i, j in ((0, 1), (0, 2), (1, 2)):
        length = float(np.linalg.norm(pts[i] - pts[j]))
        key = (-length, tuple(sorted((tuple(pts[i]), tuple(pts[j])))))
        if best is None or key < best[0]:
            best = (key, (i, j))
    i1, i2 = best[1]
    i3 = 3 - i1 - i2
    if tuple(pts[i2]) < tuple(pts[i1]):
        i1, i2 = i2, i1

    p1, p2, p3 = pts[i1], pts[i2], pts[i3]
    apex = verts[apex_index]
    alpha = float(np.linalg.norm(p2 - p1))
    if alpha == 0.0:
        raise DegenerateElement("base facet has a zero-length edge")
    ex = (p2 - p1) / alpha
    in_plane = p3 - p1
    perp = in_plane - (in_plane @ ex) * ex
    xi = float(np.linalg.norm(perp))
    if xi <= 1e-14 * alpha:
        raise DegenerateElement("base facet is collinear")
    ey = perp / xi
    ez = np.cross(ex, ey)
    if (apex - p1) @ ez < 0.0:
        ez = -ez
    rot = np.vstack([ex, ey, ez])
    motion = AffineMap(rot, -rot @ p1)

    if motion(apex)[0] > alpha / 2:
        flip = AffineMap(np.diag([-1.0, 1.0, 1.0]), np.array([alpha, 0.0, 0.0]))
        motion = flip.compose(motion)
        i1, i2 = i2, i1

    std = motion(np.vstack([pts[i1], pts[i2], pts[i3], apex]))
    eta = min(max(float(std[2, 0]), 0.0), alpha)
    xi = float(std[2, 1])
    apex_std = std[3]
    gamma = float(np.linalg.norm(apex_std))
    if gamma == 0.0 or apex_std[2] <= 0.0:
        raise DegenerateElement("apex coincides with the base plane")

    if eta <= alpha / 2:
        case_tag = "i"
        beta = math.hypot(eta, xi)
        s1 = eta / beta
    else:
        case_tag = "ii"
        beta = math.hypot(alpha - eta, xi)
        s1 = (alpha - eta) / beta
    t1 = xi / beta

    order = (base_indices[i1], base_indices[i2], base_indices[i3], apex_index)
    return StandardPosition(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        s1=s1,
        t1=t1,
        s21=float(apex_std[0] / gamma),
        s22=float(apex_std[1] / gamma),
        t2=float(apex_std[2] / gamma),
        case_tag=case_tag,
        motion=motion,
        order=order,
    )


# ---------------------------------------------------------------------------
# shear/scale factorization


@dataclass(frozen=True, eq=False)
class MatrixFactorization:
    """Upper-triangular factorization of the standard-position vertex map.

    ``shear @ scale`` maps the reference tetrahedron of the matching case
    onto the standard-position vertices, and ``shear == apex_shear @
    base_shear``.  The Gram eigenvalues are those of ``apex_shear.T @
    apex_shear`` (namely ``{1, 1 +- s_bold_2}``) and of ``base_shear.T @
    base_shear`` (``{1, 1 +- s_bold_1}``).
    """

    shear: np.ndarray
    apex_shear: np.ndarray
    base_shear: np.ndarray
    scale: np.ndarray
    apex_gram_eigenvalues: np.ndarray
    base_gram_eigenvalues: np.ndarray


def matrix_factorization(sp: StandardPosition) -> MatrixFactorization:
    sign = 1.0 if sp.case_tag == "i" else -1.0
    shear = np.array(
        [
            [1.0, sign * sp.s1, sp.s21],
            [0.0, sp.t1, sp.s22],
            [0.0, 0.0, sp.t2],
        ]
    )
    apex_shear = np.array(
        [
            [1.0, 0.0, sp.s21],
            [0.0, 1.0, sp.s22],
            [0.0, 0.0, sp.t2],
        ]
    )
    base_shear = np.array(
        [
            [1.0, sign * sp.s1, 0.0],
            [0.0, sp.t1, 0.0],
            [0.0, 0.0, 1.0],
        ]
    )
    scale = np.diag([sp.alpha, sp.beta, sp.gamma])
    return MatrixFactorization(
        shear=shear,
        apex_shear=apex_shear,
        base_shear=base_shear,
        scale=scale,
        apex_gram_eigenvalues=np.linalg.eigvalsh(apex_shear.T @ apex_shear),
        base_gram_eigenvalues=np.linalg.eigvalsh(base_shear.T @ base_shear),
    )
