"""Element families, polynomial test batteries, and bound-ratio sweeps.

The central record compares the interpolation error seminorm against two
candidate bounds: one scaled by the projected circumradius (which stays
bounded on degenerating families) and one scaled by the circumsphere radius
(which the flat-element family drives to divergence).
"""

from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import InvalidPForKM, ParameterOutOfRange, ZeroDataSeminorm
from .interpolation import interpolate_function
from .polynomials import Polynomial, exponent_triples, exponents_up_to
from .projection import projected_circumradius
from .seminorms import SeminormSpec, p_rule_violation, seminorm, validate_p
from .simplex import (
    REFERENCE_CASE_I,
    Tetrahedron,
    diameter,
    inradius_circumradius,
    reference_tetrahedron,
    scale_axes,
    squeeze_yz,
    validate_tetrahedron,
)

FAMILY_KINDS = ("sliver", "squeezed", "needle", "random")
RANDOM_MIN_VOLUME = 1e-4
RATIO_ZERO_REL_TOL = 1e-9

CSV_COLUMNS = [
    "family",
    "kind_param",
    "h_param",
    "k",
    "m",
    "p",
    "function_id",
    "h_K",
    "rho_K",
    "R_sphere",
    "R_K",
    "error_seminorm",
    "data_seminorm",
    "ratio_projected",
    "ratio_naive",
]


@dataclass(frozen=True)
class ElementFamily:
    """A deterministic one-parameter family of tetrahedra.

    ``grid`` is the degeneration parameter: h for slivers, the z-stretch b
    for squeezed reference elements, and the aspect for needles.  The random
    kind ignores ``grid`` and draws ``count`` elements from ``seed``.
    """

    kind: str
    grid: tuple[float, ...] = ()
    alpha_exponent: float = 2.5
    reference: str = "i"
    squeeze_y: float = 1.0
    seed: int = 0
    count: int = 10

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ParameterOutOfRange(f"unknown family kind {self.kind!r}")
        object.__setattr__(self, "grid", tuple(float(g) for g in self.grid))

    @property
    def kind_param(self) -> float:
        if self.kind == "sliver":
            return self.alpha_exponent
        if self.kind == "squeezed":
            return self.squeeze_y
        if self.kind == "random":
            return float(self.seed)
        return float("nan")


def sliver_tetrahedron(h: float, alpha_exponent: float) -> Tetrahedron:
    """Flat element with no short edge: (+-h, 0, 0) and (0, +-h, h**alpha_exponent)."""
    if h <= 0.0 or alpha_exponent <= 0.0:
        raise ParameterOutOfRange("sliver needs h > 0 and a positive exponent")
    rise = h**alpha_exponent
    return validate_tetrahedron(
        [(h, 0.0, 0.0), (-h, 0.0, 0.0), (0.0, -h, rise), (0.0, h, rise)]
    )


def sliver_probe(h: float, alpha_exponent: float) -> Polynomial:
    """Quadratic vanishing at the sliver's vertices yet with curvature 2."""
    return Polynomial(
        {(2, 0, 0): 1.0, (0, 0, 0): -h * h, (0, 0, 1): h ** (2.0 - alpha_exponent)}
    )


def random_tetrahedra(count: int, seed: int) -> list[Tetrahedron]:
    """Reproducible unit-cube tetrahedra with volume above RANDOM_MIN_VOLUME."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        verts = rng.uniform(0.0, 1.0, size=(4, 3))
        tet = Tetrahedron(verts)
        if tet.volume > RANDOM_MIN_VOLUME:
            out.append(validate_tetrahedron(verts))
    return out


def make_family(family: ElementFamily) -> list[tuple[float, Tetrahedron]]:
    """Generate (parameter, element) pairs; every element is validated."""
    if family.kind == "sliver":
        return [(h, sliver_tetrahedron(h, family.alpha_exponent)) for h in family.grid]
    if family.kind == "squeezed":
        ref = reference_tetrahedron(family.reference)
        out = []
        for b in family.grid:
            tet = squeeze_yz(family.squeeze_y, b).apply_to(ref)
            out.append((b, validate_tetrahedron(tet.vertices)))
        return out
    if family.kind == "needle":
        out = []
        for aspect in family.grid:
            if not 0.0 < aspect <= 1.0:
                raise ParameterOutOfRange(f"needle aspect must be in (0, 1], got {aspect}")
            tet = scale_axes(1.0, aspect, aspect).apply_to(REFERENCE_CASE_I)
            out.append((aspect, validate_tetrahedron(tet.vertices)))
        return out
    return [
        (float(i), tet)
        for i, tet in enumerate(random_tetrahedra(family.count, family.seed))
    ]


def function_battery(
    k: int, seed: int, sliver: tuple[float, float] | None = None
) -> list[tuple[str, Polynomial]]:
    """Test polynomials of degree k + 1 for the degree-k interpolant.

    All monomials of degree k + 1, then 20 seeded random polynomials with
    coefficients in [-1, 1] over every monomial of degree <= k + 1, then the
    flat-element probe when ``sliver=(h, alpha_exponent)`` is given at k = 1.
    """
    if not 1 <= k <= 4:
        raise ParameterOutOfRange(f"battery degree must be 1..4, got {k}")
    battery = [
        (f"mono_x{i}y{j}z{l}", Polynomial.monomial((i, j, l)))
        for (i, j, l) in exponent_triples(k + 1)
    ]
    rng = np.random.default_rng(seed)
    exps = exponents_up_to(k + 1)
    for n in range(20):
        coeffs = rng.uniform(-1.0, 1.0, size=len(exps))
        battery.append((f"rand{n:02d}", Polynomial(dict(zip(exps, coeffs)))))
    if sliver is not None and k == 1:
        h, alpha_exponent = sliver
        battery.append(("sliver_probe", sliver_probe(h, alpha_exponent)))
    return battery


@dataclass(frozen=True)
class ErrorRatioRecord:
    family: str
    kind_param: float
    h_param: float
    k: int
    m: int
    p: float
    function_id: str
    h_K: float
    rho_K: float
    R_sphere: float
    R_K: float
    error_seminorm: float
    data_seminorm: float
    ratio_projected: float
    ratio_naive: float

    def as_row(self) -> list[str]:
        return [_format_value(getattr(self, col)) for col in CSV_COLUMNS]

    def as_dict(self) -> dict:
        return {
            col: ("inf" if col == "p" and math.isinf(self.p) else getattr(self, col))
            for col in CSV_COLUMNS
        }


def _format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if math.isinf(value):
        return "inf"
    return repr(float(value))


@dataclass(frozen=True)
class _ElementGeometry:
    h_K: float
    rho_K: float
    R_sphere: float
    R_K: float


def _element_geometry(tet: Tetrahedron) -> _ElementGeometry:
    rho, r_sphere = inradius_circumradius(tet)
    r_k, _ = projected_circumradius(tet)
    return _ElementGeometry(diameter(tet), rho, r_sphere, r_k)


def error_ratio(
    tet: Tetrahedron,
    v: Polynomial,
    k: int,
    m: int,
    p: float,
    *,
    family: str = "single",
    kind_param: float = float("nan"),
    h_param: float = float("nan"),
    function_id: str = "custom",
    geometry: _ElementGeometry | None = None,
) -> ErrorRatioRecord:
    """One bound-quotient record for function ``v`` on element ``tet``.

    ``ratio_projected`` divides the order-m error seminorm by
    R_K**m * h_K**(k + 1 - 2m) * |v|_{k+1,p}; ``ratio_naive`` uses the
    circumsphere radius in place of R_K.
    """
    violation = p_rule_violation(k, m, p)
    if violation is not None:
        raise InvalidPForKM(violation)
    if v.degree > k + 1:
        warnings.warn(
            f"battery function degree {v.degree} exceeds k + 1 = {k + 1}; "
            "the reference seminorm no longer controls the full error",
            stacklevel=2,
        )
    geo = geometry if geometry is not None else _element_geometry(tet)
    data = seminorm(tet, v, SeminormSpec(k + 1, p))
    error = seminorm(tet, v - interpolate_function(tet, k, v), SeminormSpec(m, p))
    if data > 0.0:
        weight = geo.h_K ** (k + 1 - 2 * m) * data
        ratio_projected = error / (geo.R_K**m * weight)
        ratio_naive = error / (geo.R_sphere**m * weight)
    else:
        scale = seminorm(tet, v, SeminormSpec(m, p))
        if error > RATIO_ZERO_REL_TOL * max(1.0, scale):
            raise ZeroDataSeminorm(
                f"error {error:.3e} with vanishing reference seminorm for {function_id}"
            )
        ratio_projected = ratio_naive = 0.0
    return ErrorRatioRecord(
        family=family,
        kind_param=kind_param,
        h_param=h_param,
        k=k,
        m=m,
        p=p,
        function_id=function_id,
        h_K=geo.h_K,
        rho_K=geo.rho_K,
        R_sphere=geo.R_sphere,
        R_K=geo.R_K,
        error_seminorm=error,
        data_seminorm=data,
        ratio_projected=ratio_projected,
        ratio_naive=ratio_naive,
    )


def bound_sweep(
    family: ElementFamily,
    k: int,
    m: int,
    p: float,
    seed: int = 0,
    threads: int | None = None,
) -> list[ErrorRatioRecord]:
    """Records for every (element, battery function) pair of the family.

    Output order is (grid order, battery order) regardless of ``threads``.
    """
    violation = p_rule_violation(k, m, p)
    if violation is not None:
        raise InvalidPForKM(violation)
    elements = make_family(family)

    def rows_for(item):
        param, tet = item
        geo = _element_geometry(tet)
        probe = (param, family.alpha_exponent) if family.kind == "sliver" else None
        return [
            error_ratio(
                tet,
                v,
                k,
                m,
                p,
                family=family.kind,
                kind_param=family.kind_param,
                h_param=param,
                function_id=fid,
                geometry=geo,
            )
            for fid, v in function_battery(k, seed, sliver=probe)
        ]

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(rows_for, elements))
    else:
        chunks = [rows_for(item) for item in elements]
    return [record for chunk in chunks for record in chunk]


def per_element_max(records: list[ErrorRatioRecord]) -> list[dict]:
    """Per-element maxima of both ratios, preserving first-seen order."""
    summary: dict[float, dict] = {}
    for rec in records:
        row = summary.setdefault(
            rec.h_param,
            {"h_param": rec.h_param, "max_ratio_projected": 0.0, "max_ratio_naive": 0.0},
        )
        row["max_ratio_projected"] = max(row["max_ratio_projected"], rec.ratio_projected)
        row["max_ratio_naive"] = max(row["max_ratio_naive"], rec.ratio_naive)
    return list(summary.values())


def b_lower_bound(tet: Tetrahedron, k: int, m: int, p: float, seed: int = 0) -> float:
    """Certified lower bound for the best error constant of the element.

    Maximum over the battery of error seminorm over reference seminorm; the
    true constant is a supremum over the full admissible space, so this
    never overestimates.
    """
    violation = p_rule_violation(k, m, p)
    if violation is not None:
        raise InvalidPForKM(violation)
    best = 0.0
    for _, v in function_battery(k, seed):
        data = seminorm(tet, v, SeminormSpec(k + 1, p))
        if data == 0.0:
            continue
        error = seminorm(tet, v - interpolate_function(tet, k, v), SeminormSpec(m, p))
        best = max(best, error / data)
    return best


def sliver_rejection_demo(alpha_exponent: float, h_grid) -> list[dict]:
    """Error against both radius measures on the flattening-element family.

    For exponents above 2 the error-to-circumsphere quotient diverges as h
    shrinks while the error-to-projected-circumradius quotient stays
    bounded; rows carry everything needed to see both behaviours.
    """
    if alpha_exponent <= 2.0:
        raise ParameterOutOfRange(
            f"the rejection regime needs exponent > 2, got {alpha_exponent}"
        )
    rows = []
    for h in h_grid:
        tet = sliver_tetrahedron(h, alpha_exponent)
        probe = sliver_probe(h, alpha_exponent)
        interpolant = interpolate_function(tet, 1, probe)
        error = seminorm(tet, probe - interpolant, SeminormSpec(1, math.inf))
        _, r_sphere = inradius_circumradius(tet)
        r_k, _ = projected_circumradius(tet)
        rows.append(
            {
                "h": h,
                "error_seminorm": error,
                "R_sphere": r_sphere,
                "R_K": r_k,
                "naive_quotient": error / r_sphere,
                "projected_quotient": error / r_k,
                "interpolant_max_coeff": interpolant.max_abs_coeff(),
            }
        )
    return rows


def records_to_csv(records: list[ErrorRatioRecord], stream=None) -> str | None:
    """Write records as CSV with the mandatory header; bytes are
    deterministic for fixed inputs.  Returns the text when no stream given."""
    own = stream is None
    target = io.StringIO() if own else stream
    writer = csv.writer(target, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.as_row())
    return target.getvalue() if own else None
