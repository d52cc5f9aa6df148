"""Degree-k Lagrange interpolation on the principal lattice of a tetrahedron.

Lattice points carry barycentric coordinates gamma/k for multi-indices gamma
with |gamma| = k.  The nodal basis is the closed-form product over falling
barycentric factors; it evaluates exactly (0 or 1) on the lattice when fed
rational inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .errors import IllConditioned, IndexOrderMismatch, MissingNode, ParameterOutOfRange
from .polynomials import Polynomial
from .simplex import Tetrahedron

MAX_LATTICE_DEGREE = 6


def multi_indices(order: int) -> list[tuple[int, int, int, int]]:
    """All 4-tuples of nonnegative integers summing to ``order``, lexicographic."""
    out = []
    for a1 in range(order + 1):
        for a2 in range(order + 1 - a1):
            for a3 in range(order + 1 - a1 - a2):
                out.append((a1, a2, a3, order - a1 - a2 - a3))
    return out


@dataclass(frozen=True, eq=False)
class LatticePoint:
    index: tuple[int, int, int, int]
    point: np.ndarray
    barycentric: np.ndarray


def lattice_points(tet: Tetrahedron, k: int) -> list[LatticePoint]:
    if not 1 <= k <= MAX_LATTICE_DEGREE:
        raise ParameterOutOfRange(f"lattice degree must be 1..{MAX_LATTICE_DEGREE}, got {k}")
    verts = tet.vertices
    out = []
    for gamma in multi_indices(k):
        bary = np.array(gamma, dtype=float) / k
        out.append(LatticePoint(index=gamma, point=bary @ verts, barycentric=bary))
    return out


def lagrange_basis(k: int, gamma) -> Callable:
    """Nodal basis function for lattice index ``gamma`` at degree ``k``.

    Returns a callable of a length-4 barycentric sequence.  The arithmetic is
    generic: floats, numpy arrays, fractions, and Polynomial entries all
    work, so the same formula serves numeric evaluation and symbolic
    expansion.
    """
    gamma = tuple(int(a) for a in gamma)
    if len(gamma) != 4 or min(gamma) < 0 or sum(gamma) != k:
        raise IndexOrderMismatch(f"multi-index {gamma} does not have order {k}")

    def basis(lam):
        out = 1
        for i in range(4):
            for step in range(gamma[i]):
                out = out * ((k * lam[i] - step) / (gamma[i] - step))
        return out

    return basis


def barycentric_polynomials(tet: Tetrahedron) -> list[Polynomial]:
    """The four degree-1 barycentric coordinate functions of ``tet``."""
    mat = np.vstack([tet.vertices.T, np.ones(4)])
    try:
        inv = np.linalg.inv(mat)
    except np.linalg.LinAlgError as exc:
        raise IllConditioned("vertex matrix is singular") from exc
    if np.abs(mat @ inv - np.eye(4)).max() > 1e-6:
        raise IllConditioned("vertex matrix inversion is unstable")
    polys = []
    for i in range(4):
        polys.append(
            Polynomial(
                {
                    (1, 0, 0): inv[i, 0],
                    (0, 1, 0): inv[i, 1],
                    (0, 0, 1): inv[i, 2],
                    (0, 0, 0): inv[i, 3],
                }
            )
        )
    return polys


def interpolate(tet: Tetrahedron, k: int, values: Mapping) -> Polynomial:
    """Degree-k interpolant matching ``values`` on the principal lattice.

    ``values`` maps every multi-index of order k to a number.  The result is
    the expanded monomial-form polynomial, of degree at most k.
    """
    if not 1 <= k <= MAX_LATTICE_DEGREE:
        raise ParameterOutOfRange(f"lattice degree must be 1..{MAX_LATTICE_DEGREE}, got {k}")
    indices = multi_indices(k)
    missing = [g for g in indices if g not in values]
    if missing:
        raise MissingNode(f"missing values for {len(missing)} lattice indices, e.g. {missing[0]}")
    lams = barycentric_polynomials(tet)
    total = Polynomial.zero()
    for gamma in indices:
        coef = float(values[gamma])
        if coef == 0.0:
            continue
        total = total + coef * lagrange_basis(k, gamma)(lams)
    return total


def interpolate_function(tet: Tetrahedron, k: int, f) -> Polynomial:
    """Interpolate a callable or Polynomial by sampling it on the lattice."""
    evaluate = f.evaluate if isinstance(f, Polynomial) else f
    values = {lp.index: float(evaluate(lp.point)) for lp in lattice_points(tet, k)}
    return interpolate(tet, k, values)
