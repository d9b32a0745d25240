from fractions import Fraction

import numpy as np
import polars as pl
import pytest
from scipy.optimize import linprog

from newtonscope.numerics import make_rng
from newtonscope.oracle import Verdict, build_oracle, query_oracle
from newtonscope.poly import LineFamily, Polynomial, parse_polynomial
from newtonscope.polytope import (
    BudgetExceededError,
    EmptyComplementError,
    IncrementalHull,
    InconsistentOracleError,
    LatticePolytope,
    NotAFacialRootError,
    QueryLog,
    SymbolicTag,
    bounding_box,
    d_omega,
    face_complement,
    functional_to_direction,
    homogenized_polytope,
    newton_polytope,
    reconstruct_polytope,
    symbolic_oracle,
    convergence_bound,
    tropical_of_hypersurface,
)
from newtonscope.tracker import TrackSettings
from newtonscope.witness import witness_for_hypersurface

XY = ("x", "y")


def random_polynomial(rng, n, max_degree=4, max_terms=6):
    names = ("x", "y", "z")[:n]
    while True:
        count = int(rng.integers(2, max_terms + 1))
        terms = {}
        for _ in range(count):
            alpha = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=n))
            if sum(alpha) <= max_degree:
                terms[alpha] = complex(rng.integers(1, 10)) * (1 if rng.random() < 0.5 else -1)
        f = Polynomial(names, terms)
        if len(f) >= 2:
            return f


def test_symbolic_oracle_examples():
    f = parse_polynomial("x^2 + y + 1", XY)
    assert symbolic_oracle(f, (1, 0)).vertex_point == (2, 0, 0)
    edge = symbolic_oracle(f, (-1, 0))
    assert edge.tag is SymbolicTag.FACE_MIN
    assert edge.point == (0, 0, 1)
    assert edge.as_counts() == ((0, 0), 1, 1)
    assert symbolic_oracle(parse_polynomial("x^2 + y^2", XY), (1, 1)).is_eep
    sextic = parse_polynomial("x^2*y^4 + x + 1", XY)
    assert symbolic_oracle(sextic, (3, 2)).vertex_point == (2, 4, 0)


def test_tropical_of_hypersurface():
    f = parse_polynomial("x + y + 1", XY)
    assert tropical_of_hypersurface(f, (1, 1))
    assert not tropical_of_hypersurface(f, (1, 2))
    assert tropical_of_hypersurface(f, (-1, 0))


def test_hull_of_square_with_interior_points():
    points = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1), (1, 0)]
    hull = IncrementalHull(points)
    assert hull.dimension == 2
    assert hull.vertices() == {(0, 0), (2, 0), (0, 2), (2, 2)}
    assert len(hull.facets()) == 4
    assert hull.contains((1, 2))
    assert not hull.contains((3, 1))


def test_hull_in_a_lower_dimensional_span():
    # A triangle on the plane x + y + z = 3.
    hull = IncrementalHull([(3, 0, 0), (0, 3, 0), (0, 0, 3), (1, 1, 1)])
    assert hull.dimension == 2
    assert hull.vertices() == {(3, 0, 0), (0, 3, 0), (0, 0, 3)}
    assert hull.in_span((2, 1, 0))
    assert not hull.in_span((1, 1, 0))
    with pytest.raises(ValueError):
        hull.add((1, 1, 0))
    segment = IncrementalHull([(0, 0, 2), (1, 1, 0), (2, 2, -2)])
    assert segment.dimension == 1
    assert segment.vertices() == {(0, 0, 2), (2, 2, -2)}


def _in_hull_of(point, others):
    """Whether ``point`` is a convex combination of ``others`` (LP feasibility)."""
    if not others:
        return False
    a_eq = np.vstack([np.array(others, dtype=float).T, np.ones(len(others))])
    b_eq = np.append(np.array(point, dtype=float), 1.0)
    result = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    return result.status == 0


def test_hull_matches_brute_force_on_random_points():
    rng = make_rng(10)
    for _ in range(60):
        dim = int(rng.integers(2, 5))
        count = int(rng.integers(dim + 1, 16))
        points = sorted({tuple(int(v) for v in rng.integers(0, 7, size=dim)) for _ in range(count)})
        if len(points) < 2:
            continue
        hull = IncrementalHull(points)
        expected = {p for p in points if not _in_hull_of(p, [q for q in points if q != p])}
        assert hull.vertices() == expected, points
        assert all(hull.contains(p) for p in points)
        outside = tuple(7 for _ in range(dim))
        assert not hull.contains(outside)


def test_lattice_points_of_triangle():
    triangle = LatticePolytope([(0, 0), (2, 0), (0, 2)])
    assert triangle.lattice_points() == {(0, 0), (1, 0), (2, 0), (0, 1), (1, 1), (0, 2)}
    simplex = homogenized_polytope(parse_polynomial("x^2 + y^2 + 1", XY))
    assert simplex.affine_dimension() == 2
    assert len(simplex.lattice_points()) == 6


def test_lattice_polytope_faces_and_json():
    square = LatticePolytope([(0, 0), (1, 0), (0, 1), (1, 1)])
    assert square.support_function((1, 2)) == 3
    assert square.exposed_face((1, 0)).points == {(1, 0), (1, 1)}
    assert square.coordinate_minimum() == (0, 0)
    assert LatticePolytope.from_json(square.to_json()) == square
    assert newton_polytope(parse_polynomial("x*y + x + y + 1", XY)) == square


def test_reconstruct_from_symbolic_oracle_matches_exact_hull():
    rng = make_rng(11)
    for trial in range(40):
        n = 2 if trial % 2 else 3
        f = random_polynomial(rng, n)
        expected = homogenized_polytope(f)
        log = QueryLog()
        found = reconstruct_polytope(
            lambda omega: symbolic_oracle(f, omega), n, f.degree, rng=rng, log=log
        )
        assert found.vertices() == expected.vertices(), str(f)
        assert len(log) > 0


def test_query_log_is_tabular(tmp_path):
    f = parse_polynomial("x^2*y + y^3 + x + 2", XY)
    log = QueryLog()
    reconstruct_polytope(lambda w: symbolic_oracle(f, w), 2, f.degree, rng=make_rng(0), log=log)
    frame = log.to_frame()
    assert frame.height == len(log)
    path = log.write_parquet(tmp_path / "queries.parquet")
    assert pl.read_parquet(path).height == len(log)
    assert log.to_json()[0]["functional"]


def test_budget_and_inconsistent_oracles():
    f = parse_polynomial("x^3 + x*y + y^2 + 1", XY)
    with pytest.raises(BudgetExceededError):
        reconstruct_polytope(
            lambda w: symbolic_oracle(f, w), 2, f.degree, rng=make_rng(0), max_queries=3
        )
    g = parse_polynomial("x + y + 1", XY)
    # An oracle for a polynomial of a different degree breaks the coordinate-sum check.
    answers = iter([symbolic_oracle(g, (1, 0)), symbolic_oracle(f, (0, 1))])

    def mixed(omega):
        return next(answers, symbolic_oracle(f, omega))

    with pytest.raises(InconsistentOracleError):
        reconstruct_polytope(mixed, 2, 3, rng=make_rng(0))


def test_bounding_box():
    f = parse_polynomial("x^2*y + y^3 + x + 2", XY)
    box = bounding_box(lambda w: symbolic_oracle(f, w), 2, f.degree, rng=make_rng(1))
    assert box == [(0, 2), (0, 3), (0, 3)]


def test_functional_to_direction():
    assert functional_to_direction((3, 1, 1)) == (Fraction(2), Fraction(0))


def test_d_omega_and_complement():
    f = parse_polynomial("x^2 + y + 1", XY)
    assert d_omega(f, (-1, 0)) == 2
    assert face_complement(f, (-1, 0)) == [(2, 0)]
    assert d_omega(f, (Fraction(1, 2), 0)) == 1
    with pytest.raises(EmptyComplementError):
        d_omega(parse_polynomial("x^2 + y^2", XY), (1, 1))


def test_bound_decreases_and_rejects_non_roots():
    f = parse_polynomial("x^2 + y + 1", XY)
    family = LineFamily.from_targets([1.0, -1.0], [1.0, 1j])
    # Facial form on omega = (-1, 0) is y + 1; on the line y = 1j*s + 1j.
    tau = (family.b[1] - 1) / family.a[1]
    bounds = [convergence_bound(f, (-1, 0), family, tau, 1, t) for t in (10.0, 100.0, 1000.0)]
    assert bounds[0] > bounds[1] > bounds[2] > 0
    assert bounds[0] / bounds[1] == pytest.approx(100.0)
    with pytest.raises(NotAFacialRootError):
        convergence_bound(f, (-1, 0), family, tau + 1, 1, 10.0)


def _bound_case(rng):
    """``c1 x^p + c2 y + c3`` with ``omega = (w, 0)``, ``w < 0``: one path converges off target."""
    while True:
        p = int(rng.integers(1, 4))
        w = -int(rng.integers(1, 3))
        c1, c2, c3 = (int(v) * (1 if rng.random() < 0.5 else -1) for v in rng.integers(1, 6, size=3))
        if p * -w <= 4 and 2 * abs(c3) >= abs(c2):
            return Polynomial(XY, {(p, 0): c1, (0, 1): c2, (0, 0): c3}), (w, 0)


def test_bound_dominates_tracked_distance():
    rng = make_rng(12)
    checked = 0
    while checked < 20:
        f, omega = _bound_case(rng)
        witness = witness_for_hypersurface(f, rng, TrackSettings())
        ctx = build_oracle(witness, rng=rng)
        c2, c3 = f.coefficient((0, 1)), f.coefficient((0, 0))
        # Facial form c2 y + c3 vanishes at y = -c3/c2 on y = a s - b.
        tau = (ctx.family.b[1] - c3 / c2) / ctx.family.a[1]
        gaps = [abs(tau - g) for g in ctx.family.targets]
        if min(gaps) < 0.2:
            continue
        answer = query_oracle(ctx, omega)
        converged = [tr for tr in answer.traces if tr.verdict is Verdict.TO_OTHER]
        assert len(converged) == 1, (f, omega)
        trace = converged[0]
        assert abs(trace.limit - tau) < 1e-2
        if len(trace.samples) < 8:
            continue
        gap = d_omega(f, omega)
        assert gap == f.degree * -omega[0]

        radius = min([1.0] + [abs(a) for a in ctx.family.a] + [g / 2 for g in gaps])
        distances = [abs(s - tau) for _, s, _ in trace.samples]
        outside = [k for k, dist in enumerate(distances) if dist > radius]
        capture = outside[-1] + 1 if outside else 0
        for t, s, _ in trace.samples[capture:]:
            assert abs(s - tau) <= convergence_bound(f, omega, ctx.family, tau, 1, t), (f, omega, t)

        (t1, s1, _), (t2, s2, _) = trace.samples[-3], trace.samples[-1]
        slope = np.log(abs(s2 - tau) / abs(s1 - tau)) / np.log(t2 / t1)
        assert slope == pytest.approx(-float(gap), rel=0.25), (f, omega)
        checked += 1


def test_support_function_matches_reconstruction():
    rng = make_rng(13)
    checked = 0
    while checked < 200:
        count = int(rng.integers(2, 9))
        points = {tuple(int(v) for v in rng.integers(0, 7, size=3)) for _ in range(count)}
        if len(points) < 2:
            continue
        f = Polynomial(("x", "y", "z"), {p: 1 for p in points})
        found = reconstruct_polytope(lambda w: symbolic_oracle(f, w), 3, f.degree, rng=rng)
        polytope = LatticePolytope(points)
        for _ in range(4):
            omega = tuple(int(v) for v in rng.integers(-5, 6, size=3))
            best = max(sum(a * b for a, b in zip(v[:3], omega)) for v in found.vertices())
            assert polytope.support_function(omega) == best, (points, omega)
            checked += 1


def test_tropical_of_hypersurface_is_the_positive_dimensional_face_test():
    rng = make_rng(14)
    for case in range(500):
        n = 2 + case % 2
        f = random_polynomial(rng, n) if case % 7 else Polynomial(("x", "y", "z")[:n], {(1,) * n: 3})
        if case % 11 == 0:
            omega = (0,) * n
        else:
            omega = tuple(int(v) for v in rng.integers(-3, 4, size=n))
        exact = symbolic_oracle(f, omega)
        expected = exact.tag is SymbolicTag.FACE_MIN or (exact.is_eep and len(f) >= 2)
        assert tropical_of_hypersurface(f, omega) == expected, (f, omega)
