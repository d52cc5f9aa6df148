"""Trivariate polynomials in monomial form.

Coefficients are stored in a dict keyed by exponent triples (i, j, l).
Arithmetic, differentiation, and affine composition are exact over the
stored coefficients; construction prunes entries below 1e-14 of the largest
coefficient magnitude.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DegreeOverflow

PRUNE_REL = 1e-14
COMPOSE_DEGREE_CAP = 12


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        data = {}
        if terms:
            top = max(abs(float(c)) for c in terms.values())
            cut = PRUNE_REL * top
            for exp, coef in terms.items():
                c = float(coef)
                if c != 0.0 and abs(c) > cut:
                    i, j, l = (int(e) for e in exp)
                    if min(i, j, l) < 0:
                        raise ValueError(f"negative exponent in {exp}")
                    data[(i, j, l)] = c
        self.terms = data

    # -- constructors -------------------------------------------------------

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, exp, coef=1.0) -> "Polynomial":
        return cls({tuple(exp): coef})

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    # -- structure ----------------------------------------------------------

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(i + j + l for i, j, l in self.terms)

    def max_abs_coeff(self) -> float:
        if not self.terms:
            return 0.0
        return max(abs(c) for c in self.terms.values())

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = [f"{c:+g}*x^{i}y^{j}z^{l}" for (i, j, l), c in sorted(self.terms.items())]
        return "Polynomial(" + " ".join(parts) + ")"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        merged = dict(self.terms)
        for exp, c in other.terms.items():
            merged[exp] = merged.get(exp, 0.0) + c
        return Polynomial(merged)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Polynomial({e: c * other for e, c in self.terms.items()})
        if not isinstance(other, Polynomial):
            return NotImplemented
        prod: dict = {}
        for (i1, j1, l1), c1 in self.terms.items():
            for (i2, j2, l2), c2 in other.terms.items():
                key = (i1 + i2, j1 + j2, l1 + l2)
                prod[key] = prod.get(key, 0.0) + c1 * c2
        return Polynomial(prod)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        if not isinstance(scalar, (int, float)):
            return NotImplemented
        return self * (1.0 / scalar)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = Polynomial.constant(1.0)
        square = self
        while n:
            if n & 1:
                result = result * square
            n >>= 1
            if n:
                square = square * square
        return result

    # -- calculus -----------------------------------------------------------

    def derivative(self, delta) -> "Polynomial":
        """Exact formal partial derivative of multi-order ``delta``."""
        d = tuple(int(x) for x in delta)
        out: dict = {}
        for (i, j, l), c in self.terms.items():
            if i < d[0] or j < d[1] or l < d[2]:
                continue
            factor = c
            for e, k in ((i, d[0]), (j, d[1]), (l, d[2])):
                for step in range(k):
                    factor *= e - step
            out[(i - d[0], j - d[1], l - d[2])] = out.get((i - d[0], j - d[1], l - d[2]), 0.0) + factor
        return Polynomial(out)

    def evaluate(self, points):
        """Evaluate at one point (3,) or many points (N, 3)."""
        pts = np.asarray(points, dtype=float)
        single = pts.ndim == 1
        P = pts.reshape(-1, 3)
        out = np.zeros(P.shape[0])
        if self.terms:
            dmax = [max(e[axis] for e in self.terms) for axis in range(3)]
            powers = []
            for axis in range(3):
                col = np.ones((dmax[axis] + 1, P.shape[0]))
                for e in range(1, dmax[axis] + 1):
                    col[e] = col[e - 1] * P[:, axis]
                powers.append(col)
            for (i, j, l), c in self.terms.items():
                out += c * powers[0][i] * powers[1][j] * powers[2][l]
        return float(out[0]) if single else out

    def compose_affine(self, fmap) -> "Polynomial":
        """Exact composition self(fmap(x)) for an AffineMap ``fmap``."""
        if self.degree > COMPOSE_DEGREE_CAP:
            raise DegreeOverflow(
                f"degree {self.degree} exceeds composition cap {COMPOSE_DEGREE_CAP}"
            )
        lin = np.asarray(fmap.linear, dtype=float)
        tr = np.asarray(fmap.translation, dtype=float)
        images = []
        for row in range(3):
            images.append(
                Polynomial(
                    {
                        (1, 0, 0): lin[row, 0],
                        (0, 1, 0): lin[row, 1],
                        (0, 0, 1): lin[row, 2],
                        (0, 0, 0): tr[row],
                    }
                )
            )
        if not self.terms:
            return Polynomial.zero()
        dmax = [max(e[axis] for e in self.terms) for axis in range(3)]
        powers = []
        for axis in range(3):
            cache = [Polynomial.constant(1.0)]
            for _ in range(dmax[axis]):
                cache.append(cache[-1] * images[axis])
            powers.append(cache)
        total = Polynomial.zero()
        for (i, j, l), c in self.terms.items():
            total = total + c * (powers[0][i] * powers[1][j] * powers[2][l])
        return total

    # -- serialization ------------------------------------------------------

    def as_dict(self) -> dict:
        return {
            "terms": [
                {"exp": list(exp), "coef": coef}
                for exp, coef in sorted(self.terms.items())
            ]
        }


def _coerce(value):
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, float)):
        return Polynomial.constant(value)
    return NotImplemented


def polynomial_from_dict(data: dict) -> Polynomial:
    if not isinstance(data, dict) or "terms" not in data:
        raise ValueError("polynomial JSON must be an object with a 'terms' key")
    terms = {}
    for entry in data["terms"]:
        exp = tuple(int(e) for e in entry["exp"])
        terms[exp] = terms.get(exp, 0.0) + float(entry["coef"])
    return Polynomial(terms)


def exponent_triples(degree: int) -> list[tuple[int, int, int]]:
    """All (i, j, l) with i + j + l == degree, lexicographic order."""
    return [
        (i, j, degree - i - j)
        for i in range(degree + 1)
        for j in range(degree + 1 - i)
    ]


def exponents_up_to(degree: int) -> list[tuple[int, int, int]]:
    out = []
    for d in range(degree + 1):
        out.extend(exponent_triples(d))
    return sorted(out)


X = Polynomial.monomial((1, 0, 0))
Y = Polynomial.monomial((0, 1, 0))
Z = Polynomial.monomial((0, 0, 1))
