"""Seeded property suites behind the ``verify`` CLI command.

Each suite returns CheckResult rows; a check passes only if every sampled
case satisfies its tolerance.  The same invariants are exercised (at fixed
larger sizes) by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .experiments import (
    ElementFamily,
    b_lower_bound,
    bound_sweep,
    function_battery,
    per_element_max,
    random_tetrahedra,
    records_to_csv,
    sliver_rejection_demo,
)
from .interpolation import (
    interpolate_function,
    lagrange_basis,
    lattice_points,
    multi_indices,
)
from .polynomials import Polynomial, exponent_triples
from .projection import (
    DEFAULT_PHI,
    ProjectedTriangle,
    distortion_bound_constant,
    distortion_bound_terms,
    gap_constant,
    project_theta,
    projected_circumradius,
    projection_floor_constant,
    r_p,
    r_theta,
    select_theta,
)
from .seminorms import SeminormSpec, integrate_polynomial, scaling_identity_check, seminorm, validate_p
from .simplex import (
    REFERENCE_CASE_I,
    AffineMap,
    Tetrahedron,
    diameter,
    facet_circumradius,
    inradius_circumradius,
    matrix_factorization,
    standard_position,
    uniform_scale,
)

DEFAULT_SEED = 20240601


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    cases: int
    detail: str = ""


def random_rotation(rng) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def _result(name: str, failures: int, cases: int, detail: str = "") -> CheckResult:
    return CheckResult(name, failures == 0, cases, detail or (f"{failures} failures" if failures else ""))


# ---------------------------------------------------------------------------


def geometry_suite(samples: int = 1000, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    tets = random_tetrahedra(samples, seed)
    rng = np.random.default_rng(seed + 1)
    results = []

    fail_round = fail_constraints = cases = 0
    positions = []
    for tet in tets:
        for base in range(4):
            sp = standard_position(tet, base)
            positions.append(sp)
            cases += 1
            rebuilt = sp.motion.inverse()(sp.standard_vertices)
            scale = max(1.0, diameter(tet))
            if np.abs(rebuilt - tet.vertices[list(sp.order)]).max() > 1e-10 * scale:
                fail_round += 1
            tol = 1e-12 * sp.alpha
            ok = (
                0 < sp.beta <= sp.alpha * (1 + 1e-12)
                and sp.t1 > 0
                and sp.t2 > 0
                and sp.s1 >= 0
                and abs(sp.s1**2 + sp.t1**2 - 1) < 1e-12
                and abs(sp.s21**2 + sp.s22**2 + sp.t2**2 - 1) < 1e-12
                and sp.beta * sp.s1 <= sp.alpha / 2 + tol
                and sp.gamma * sp.s21 <= sp.alpha / 2 + tol
            )
            if not ok:
                fail_constraints += 1
    results.append(_result("standard-position round-trip (1e-10)", fail_round, cases))
    results.append(_result("standard-position parameter constraints", fail_constraints, cases))

    fail_fact = 0
    for sp in positions:
        f = matrix_factorization(sp)
        ok = (
            np.abs(f.shear - f.apex_shear @ f.base_shear).max() <= 1e-14
            and abs(np.linalg.det(f.shear) - sp.t1 * sp.t2) <= 1e-12
            and np.abs(
                np.sort(f.apex_gram_eigenvalues)
                - np.sort([1.0, 1.0 - sp.s_bold_2, 1.0 + sp.s_bold_2])
            ).max()
            <= 1e-10
            and np.abs(
                np.sort(f.base_gram_eigenvalues)
                - np.sort([1.0, 1.0 - sp.s_bold_1, 1.0 + sp.s_bold_1])
            ).max()
            <= 1e-10
        )
        if not ok:
            fail_fact += 1
    results.append(_result("shear factorization and gram eigenvalues", fail_fact, len(positions)))

    fail_rb_closed = fail_rb_floor = 0
    for sp in positions:
        pts = sp.standard_vertices[:3]
        generic = facet_circumradius(pts[0], pts[1], pts[2])
        closed = (
            math.sqrt(sp.alpha**2 - 2 * sp.alpha * sp.beta * sp.s1 + sp.beta**2)
            / (2 * sp.t1)
        )
        if abs(generic - closed) > 1e-12 * max(1.0, closed):
            fail_rb_closed += 1
        floor = sp.h_base / (4 * math.sqrt(2.0) * math.sqrt(1 - sp.s_bold_1))
        if generic < floor - 1e-12:
            fail_rb_floor += 1
    results.append(_result("base circumradius closed form vs generic (1e-12)", fail_rb_closed, len(positions)))
    results.append(_result("base circumradius floor (1e-12 slack)", fail_rb_floor, len(positions)))

    c3 = projection_floor_constant(DEFAULT_PHI)
    c_bound = distortion_bound_constant(DEFAULT_PHI)
    fail_sel = fail_floor = fail_distortion = 0
    for sp in positions:
        sel = select_theta(sp)
        slack = 1e-12 * max(1.0, sp.alpha, sp.gamma)
        if not (sel.apex_x <= sel.base_mid + slack and sel.gap >= sel.gap_floor - slack):
            fail_sel += 1
        rp, _ = r_p(sp)
        if rp < c3 * max(sp.alpha, sp.gamma) / math.sqrt(1 - sp.s_bold_2) - slack:
            fail_floor += 1
        check = distortion_bound_terms(sp)
        if check.distortion > c_bound * check.projection_ratio * (1 + 1e-9):
            fail_distortion += 1
    results.append(_result("constructive theta selection inequalities", fail_sel, len(positions)))
    results.append(_result("projection floor with constructive constant", fail_floor, len(positions)))
    results.append(_result("distortion bounded by projection ratio", fail_distortion, len(positions)))

    fail_rt = 0
    for _ in range(min(samples, 500)):
        pt = ProjectedTriangle(
            x_lo=float(rng.uniform(-2, 0)),
            x_hi=float(rng.uniform(0.5, 3)),
            apex_x=float(rng.uniform(-2, 2)),
            apex_z=float(rng.uniform(0.1, 2)),
            theta=0.0,
        )
        closed = r_theta(pt)
        generic = facet_circumradius(
            (pt.x_lo, 0.0, 0.0), (pt.x_hi, 0.0, 0.0), (pt.apex_x, pt.apex_z, 0.0)
        )
        if abs(closed - generic) > 1e-10 * max(1.0, generic):
            fail_rt += 1
    results.append(_result("projected circumradius closed form vs generic", fail_rt, min(samples, 500)))

    fail_dom = 0
    dom_cases = 0
    for sp in positions[: min(20, len(positions))]:
        rp, _ = r_p(sp)
        thetas = rng.uniform(-math.pi / 2, math.pi / 2, size=10_000)
        for th in thetas:
            dom_cases += 1
            if r_theta(project_theta(sp, float(th))) > rp * (1 + 1e-9):
                fail_dom += 1
    results.append(_result("r_p dominates random theta samples", fail_dom, dom_cases))

    fail_rigid = 0
    rigid_cases = 0
    for tet in tets[: min(100, len(tets))]:
        rot = random_rotation(rng)
        shift = rng.uniform(-2, 2, size=3)
        moved = AffineMap(rot, shift).apply_to(tet)
        rigid_cases += 1
        rho_a, rs_a = inradius_circumradius(tet)
        rho_b, rs_b = inradius_circumradius(moved)
        facet_a = facet_circumradius(*tet.facet(0))
        facet_b = facet_circumradius(*moved.facet(0))
        ok = (
            abs(diameter(tet) - diameter(moved)) <= 1e-10
            and abs(rho_a - rho_b) <= 1e-10
            and abs(rs_a - rs_b) <= 1e-10 * max(1.0, rs_a)
            and abs(facet_a - facet_b) <= 1e-10 * max(1.0, facet_a)
        )
        if not ok:
            fail_rigid += 1
    results.append(_result("rigid-motion invariance of size measures", fail_rigid, rigid_cases))

    fail_rk = 0
    rk_cases = 0
    for tet in tets[: min(10, len(tets))]:
        rk_cases += 1
        r_k, _ = projected_circumradius(tet)
        rot = random_rotation(rng)
        moved = AffineMap(rot, rng.uniform(-1, 1, size=3)).apply_to(tet)
        r_k_moved, _ = projected_circumradius(moved)
        scaled, _ = projected_circumradius(uniform_scale(2.0).apply_to(tet))
        if abs(r_k - r_k_moved) > 1e-8 * max(1.0, r_k) or abs(scaled - 2 * r_k) > 1e-8 * max(1.0, r_k):
            fail_rk += 1
    results.append(_result("projected circumradius rigid invariance and scaling", fail_rk, rk_cases))
    return results


def interp_suite(samples: int = 100, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    tets = random_tetrahedra(samples, seed)
    rng = np.random.default_rng(seed + 2)
    results = []

    fail_card = card_cases = 0
    for k in range(1, 5):
        indices = multi_indices(k)
        for gamma in indices:
            basis = lagrange_basis(k, gamma)
            for delta in indices:
                card_cases += 1
                value = basis([Fraction(a, k) for a in delta])
                expected = 1 if delta == gamma else 0
                if value != expected:
                    fail_card += 1
    results.append(_result("nodal basis cardinality is exact for k <= 4", fail_card, card_cases))

    fail_repro = repro_cases = 0
    for tet in tets:
        for k in range(1, 5):
            for d in range(k + 1):
                for exp in exponent_triples(d):
                    repro_cases += 1
                    mono = Polynomial.monomial(exp)
                    q = interpolate_function(tet, k, mono)
                    scale = max(1.0, q.max_abs_coeff())
                    if (q - mono).max_abs_coeff() > 1e-9 * scale:
                        fail_repro += 1
    results.append(_result("monomial reproduction through degree k (1e-9)", fail_repro, repro_cases))

    fail_cond = cond_cases = 0
    for tet in tets[: min(25, len(tets))]:
        for k in (1, 2, 3):
            coeffs = {e: rng.uniform(-1, 1) for e in exponent_triples(k + 1)}
            v = Polynomial(coeffs)
            q = interpolate_function(tet, k, v)
            pts = lattice_points(tet, k)
            sampled = np.array([v.evaluate(lp.point) for lp in pts])
            reproduced = np.array([q.evaluate(lp.point) for lp in pts])
            cond_cases += 1
            if np.abs(sampled - reproduced).max() > 1e-9 * max(1.0, np.abs(sampled).max()):
                fail_cond += 1
    results.append(_result("interpolation conditions at lattice points", fail_cond, cond_cases))

    fail_unity = 0
    unity_cases = 1000
    bary = rng.dirichlet(np.ones(4), size=unity_cases)
    for k in (2, 3):
        total = np.zeros(unity_cases)
        for gamma in multi_indices(k):
            total += lagrange_basis(k, gamma)([bary[:, 0], bary[:, 1], bary[:, 2], bary[:, 3]])
        if np.abs(total - 1.0).max() > 1e-12:
            fail_unity += 1
    results.append(_result("basis partition of unity (1e-12)", fail_unity, 2 * unity_cases))

    fail_lin = lin_cases = 0
    for tet in tets[: min(20, len(tets))]:
        k = 2
        v = Polynomial({e: rng.uniform(-1, 1) for e in exponent_triples(3)})
        w = Polynomial({e: rng.uniform(-1, 1) for e in exponent_triples(3)})
        a, b = rng.uniform(-2, 2, size=2)
        combined = interpolate_function(tet, k, a * v + b * w)
        split = a * interpolate_function(tet, k, v) + b * interpolate_function(tet, k, w)
        lin_cases += 1
        if (combined - split).max_abs_coeff() > 1e-10 * max(1.0, combined.max_abs_coeff()):
            fail_lin += 1
    results.append(_result("interpolation linearity (1e-10)", fail_lin, lin_cases))
    return results


def norms_suite(samples: int = 100, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    tets = random_tetrahedra(samples, seed)
    rng = np.random.default_rng(seed + 3)
    results = []

    vol = integrate_polynomial(REFERENCE_CASE_I, Polynomial.constant(1.0))
    moment = integrate_polynomial(REFERENCE_CASE_I, Polynomial.monomial((1, 0, 0)))
    ok = abs(vol - 1.0 / 6.0) < 1e-15 and abs(moment - 1.0 / 24.0) < 1e-15
    results.append(CheckResult("reference moments (volume 1/6, first moment 1/24)", ok, 2))

    q = Polynomial({(2, 0, 0): 1.0, (0, 2, 0): 1.0, (0, 0, 2): 1.0})
    value = seminorm(REFERENCE_CASE_I, q, SeminormSpec(2, 2.0))
    results.append(
        CheckResult("order-2 seminorm of x^2+y^2+z^2 equals sqrt(2)", abs(value - math.sqrt(2.0)) < 1e-10, 1)
    )

    fail_quad = quad_cases = 0
    for tet in tets[: min(10, len(tets))]:
        poly = Polynomial({e: rng.uniform(-1, 1) for e in exponent_triples(5)})
        for p in (2.0, 4.0):
            quad_cases += 1
            exact = seminorm(tet, poly, SeminormSpec(1, p))
            from .seminorms import _quadrature_power_sum, derivative_orders

            derivs = [poly.derivative(d) for d in derivative_orders(1)]
            numeric = _quadrature_power_sum(tet, derivs, p) ** (1.0 / p)
            if abs(exact - numeric) > 1e-7 * max(1.0, exact):
                fail_quad += 1
    results.append(_result("subdivision quadrature matches exact path (1e-7)", fail_quad, quad_cases))

    fail_hom = hom_cases = 0
    for tet in tets[: min(20, len(tets))]:
        poly = Polynomial({e: rng.uniform(-1, 1) for e in exponent_triples(3)})
        c = float(rng.uniform(-3, 3))
        for p in (2.0, math.inf):
            hom_cases += 1
            base = seminorm(tet, poly, SeminormSpec(1, p))
            scaled = seminorm(tet, c * poly, SeminormSpec(1, p))
            if abs(scaled - abs(c) * base) > 1e-12 * max(1.0, base):
                fail_hom += 1
    results.append(_result("seminorm absolute homogeneity (1e-12)", fail_hom, hom_cases))

    fail_scale = scale_cases = 0
    for i, tet in enumerate(tets[: min(60, len(tets))]):
        k = int(rng.integers(1, 4))
        p = (2.0, 4.0, math.inf)[i % 3]
        poly = Polynomial({e: rng.uniform(-1, 1) for e in exponent_triples(k + 1)})
        alpha = float(rng.uniform(0.3, 3.0))
        lhs, rhs = scaling_identity_check(poly, tet, alpha, k, p)
        tol = 1e-3 if math.isinf(p) else 1e-10
        scale_cases += 1
        if abs(lhs - rhs) > tol * max(1.0, lhs):
            fail_scale += 1
    results.append(_result("similarity scaling identity", fail_scale, scale_cases))

    table_fail = table_cases = 0
    for k in range(1, 5):
        for m in range(k + 1):
            for p in (1.0, 1.5, 1.6, 2.0, 2.1, 3.0, math.inf):
                table_cases += 1
                if k == m:
                    expected = p > 2.0
                elif k == 1 and m == 0:
                    expected = p > 1.5
                else:
                    expected = p >= 1.0
                if validate_p(k, m, p) != expected:
                    table_fail += 1
    results.append(_result("admissible-exponent table", table_fail, table_cases))
    return results


def bounds_suite(samples: int = 0, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    del samples  # grid sizes are fixed; the signature matches the other suites
    results = []

    rows = sliver_rejection_demo(2.5, (0.2, 0.1, 0.05, 0.025))
    ok_identity = all(r["interpolant_max_coeff"] <= 1e-12 for r in rows) and all(
        r["error_seminorm"] >= r["h"] ** (2.0 - 2.5) * (1 - 1e-12) for r in rows
    )
    results.append(CheckResult("flat-element probe interpolates to zero", ok_identity, len(rows)))

    naive = [r["naive_quotient"] for r in rows]
    proj = [r["projected_quotient"] for r in rows]
    ok_naive = all(b >= 2.0 * a for a, b in zip(naive, naive[1:]))
    ok_proj = max(proj) <= 3.0 * min(proj)
    results.append(CheckResult("circumsphere quotient doubles per halving", ok_naive, len(naive) - 1))
    results.append(CheckResult("projected quotient stays in a 3x band", ok_proj, len(proj)))

    normalized = [r["R_K"] / r["h"] ** (2.0 - 2.5) for r in rows]
    results.append(
        CheckResult("R_K tracks h**(2 - exponent) within 2x", max(normalized) <= 2.0 * min(normalized), len(rows))
    )

    fail_band = band_cases = 0
    combos = [(2, 1, 2.0), (1, 1, math.inf), (2, 0, 2.0)]
    families = [
        ElementFamily(kind="sliver", grid=(0.2, 0.1, 0.05), alpha_exponent=2.5),
        ElementFamily(kind="squeezed", grid=(1.0, 4.0, 16.0)),
        ElementFamily(kind="needle", grid=(1.0, 0.25, 0.0625)),
    ]
    for k, m, p in combos:
        for family in families:
            band_cases += 1
            maxima = [
                row["max_ratio_projected"]
                for row in per_element_max(bound_sweep(family, k, m, p, seed=seed))
            ]
            if max(maxima) > 5.0 * min(maxima):
                fail_band += 1
    results.append(_result("projected-ratio maxima stay in a 5x band", fail_band, band_cases))

    grid = (1.0, 2.0, 4.0, 8.0, 16.0)
    values = []
    for b in grid:
        tet = squeeze_to_reference(b)
        values.append(b_lower_bound(tet, 1, 0, 2.0, seed=seed) / max(1.0, b**2))
    results.append(
        CheckResult(
            "squeeze-normalized best-constant lower bound is bounded",
            max(values) <= 2.0 * values[-1],
            len(grid),
        )
    )

    family = ElementFamily(kind="sliver", grid=(0.2, 0.1), alpha_exponent=2.5)
    first = records_to_csv(bound_sweep(family, 1, 1, math.inf, seed=seed))
    second = records_to_csv(bound_sweep(family, 1, 1, math.inf, seed=seed))
    results.append(CheckResult("sweep output is bitwise deterministic", first == second, 2))
    return results


def squeeze_to_reference(b: float) -> Tetrahedron:
    from .simplex import squeeze_yz

    return squeeze_yz(1.0, b).apply_to(REFERENCE_CASE_I)


SUITES = {
    "geometry": geometry_suite,
    "interp": interp_suite,
    "norms": norms_suite,
    "bounds": bounds_suite,
}


def run_suites(names, samples: int = 1000, seed: int = DEFAULT_SEED) -> list[tuple[str, CheckResult]]:
    out = []
    for name in names:
        suite = SUITES[name]
        size = samples if name != "interp" else min(samples, 100)
        if name == "norms":
            size = min(samples, 100)
        for check in suite(samples=size, seed=seed):
            out.append((name, check))
    return out
