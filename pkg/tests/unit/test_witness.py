import numpy as np
import pytest

from newtonscope.numerics import make_rng, random_slice
from newtonscope.poly import CompiledSystem, PolySystem, eliminate, parse_polynomial
from newtonscope.tracker import TrackSettings
from newtonscope.witness import (
    ProjectionDimensionError,
    WitnessSet,
    WitnessUndercountError,
    estimate_dimension,
    line_slice,
    move_slice,
    square_up,
    witness_for_hypersurface,
    witness_for_projection,
)
from newtonscope.witness.build import is_simple_root

XYZ = ("x", "y", "z")
SETTINGS = TrackSettings()


def _system(texts, variables):
    return PolySystem.of([parse_polynomial(t, variables) for t in texts])


def _on_system(system, points, tol=1e-7):
    compiled = CompiledSystem.from_system(system)
    return all(compiled.relative_residual(p) < tol for p in points)


def test_circle_has_degree_two():
    f = parse_polynomial("x^2 + y^2 - 1", ("x", "y"))
    witness = witness_for_hypersurface(f, make_rng(0), SETTINGS)
    assert witness.degree == 2
    assert _on_system(witness.system, witness.points)
    assert np.allclose([witness.slice.evaluate(p) for p in witness.projected_points()], 0, atol=1e-8)


def test_line_slice_contains_the_line():
    a = [1.0 + 0.5j, -0.3 + 1j, 2.0]
    b = [0.2, 1j, -1.0]
    slice_ = line_slice(a, b)
    assert slice_.k == 2
    for s in (0.0, 1.5 - 0.5j):
        point = np.array(a) * s - np.array(b)
        assert np.allclose(slice_.evaluate(point), 0)
    assert line_slice([1.0], [0.5]).k == 0


def test_square_up_keeps_leading_equations_and_mixes_the_rest():
    polys = [parse_polynomial(t, XYZ) for t in ("x - 1", "y - 2", "z - 3")]
    squared = square_up(polys, 2, make_rng(1))
    assert len(squared) == 2
    # The common zero (1, 2, 3) survives any combination.
    for f in squared:
        assert CompiledSystem.from_system(PolySystem.of([f])).residual(np.array([1, 2, 3])) < 1e-12
    assert square_up(polys, 3, make_rng(1)) == polys
    with pytest.raises(ValueError):
        square_up(polys, 4, make_rng(1))


@pytest.mark.parametrize(
    ("texts", "expected"),
    [
        (["y - x^2", "z - x^3"], 1),
        (["x^2 + y^2 + z^2 - 1"], 2),
        (["x - 1", "y - 2", "z - 3"], 0),
        (["x*y - z", "x + y + z - 1"], 1),
    ],
)
def test_estimate_dimension(texts, expected):
    estimate = estimate_dimension(_system(texts, XYZ), make_rng(2), SETTINGS)
    assert estimate.dimension == expected


def test_twisted_cubic_projections():
    system = _system(["y - x^2", "z - x^3"], XYZ)
    onto_xy = witness_for_projection(system, [2], make_rng(3), SETTINGS)
    assert onto_xy.degree == 2
    assert onto_xy.image_variables == ("x", "y")
    onto_yz = witness_for_projection(system, [0], make_rng(3), SETTINGS)
    assert onto_yz.degree == 3
    assert _on_system(onto_yz.system, onto_yz.points)


def test_example_curve_projects_to_a_sextic():
    system = _system(
        ["x*y*t - (x-y-t)^2 + 3*x + t", "x + y^2 + t^2"], ("x", "y", "t")
    )
    witness = witness_for_projection(system, [2], make_rng(4), SETTINGS)
    assert witness.degree == 6
    assert witness.dropped == (2,)
    assert witness.hyperplanes == 0


def test_collapsing_projection_is_reported():
    system = _system(["x - 1", "y - 2"], XYZ)
    with pytest.raises(ProjectionDimensionError) as exc:
        witness_for_projection(system, [2], make_rng(5), SETTINGS)
    assert exc.value.image_dimension == 0


def test_fibers_are_cut_by_hyperplanes():
    # A surface whose projection to (x, y) is the curve x*y = 1.
    system = _system(["x*y - 1"], XYZ)
    witness = witness_for_projection(system, [2], make_rng(6), SETTINGS)
    assert witness.hyperplanes == 1
    assert witness.degree == 2
    assert len(witness.equations) == 1


def test_move_slice_tracks_points_to_the_new_line():
    f = parse_polynomial("x^3 - y^2 + x*y - 1", ("x", "y"))
    rng = make_rng(7)
    witness = witness_for_hypersurface(f, rng, SETTINGS)
    new_slice = random_slice(2, 1, rng)
    moved = move_slice(witness, new_slice, SETTINGS, rng)
    assert moved.degree == witness.degree == 3
    assert _on_system(moved.system, moved.points)
    assert np.allclose([new_slice.evaluate(p) for p in moved.points], 0, atol=1e-8)


def test_witness_json_round_trip(tmp_path):
    system = _system(["y - x^2", "z - x^3"], XYZ)
    witness = witness_for_projection(system, [0], make_rng(8), SETTINGS)
    path = witness.dump(tmp_path / "cubic.witness.json")
    loaded = WitnessSet.load(path)
    assert loaded.degree == witness.degree
    assert loaded.projection == witness.projection
    assert np.allclose(loaded.points, witness.points)
    assert loaded.system == witness.system


@pytest.mark.parametrize("text", ["9*x^2*y + 7*x^2", "x^2*y^2 + 3*x^3", "(x + y - 1)^2"])
@pytest.mark.parametrize("seed", range(5))
def test_repeated_factor_is_an_undercount(text, seed):
    f = parse_polynomial(text, ("x", "y"))
    with pytest.raises(WitnessUndercountError) as exc:
        witness_for_hypersurface(f, make_rng(seed), SETTINGS)
    assert exc.value.expected == f.degree
    assert exc.value.found < f.degree


def test_monomial_factor_keeps_full_degree():
    f = parse_polynomial("4*x^3*y + 5*x*y^3 + 7*y^3 + x*y + 6*y", ("x", "y"))
    witness = witness_for_hypersurface(f, make_rng(0), SETTINGS)
    assert witness.degree == 4
    # One witness point sits on the factor y = 0.
    assert sum(abs(p[1]) < 1e-6 for p in witness.points) == 1


def test_simple_root_check():
    # (s - 1)^2 (s + 2)
    coeffs = np.array([2.0, -3.0, 0.0, 1.0], dtype=complex)
    assert is_simple_root(coeffs, -2.0)
    assert not is_simple_root(coeffs, 1.0 + 2e-5)
    assert not is_simple_root(np.array([3.0], dtype=complex), 0.5)


def test_degree_is_stable_over_reslices():
    f = parse_polynomial("x^3 + x*y^2 - 2*y + 5", ("x", "y"))
    rng = make_rng(9)
    witness = witness_for_hypersurface(f, rng, SETTINGS)
    for _ in range(10):
        witness = move_slice(witness, random_slice(2, 1, rng), SETTINGS, rng)
        assert witness.degree == 3
        assert _on_system(witness.system, witness.points)
        distinct = {tuple(np.round(p, 6)) for p in witness.points}
        assert len(distinct) == 3


@pytest.mark.parametrize(
    ("texts", "seed"),
    [
        (["x*y*t - (x-y-t)^2 + 3*x + t", "x + y^2 + t^2"], 10),
        (["x - t^2 - 1", "y - t^3 + t"], 11),
        (["x*t - 1", "y - t^2 - x"], 12),
    ],
)
def test_projection_degree_matches_resultant(texts, seed):
    system = _system(texts, ("x", "y", "t"))
    eliminant = eliminate(system, "t")
    witness = witness_for_projection(system, [2], make_rng(seed), SETTINGS)
    assert witness.degree == eliminant.degree
