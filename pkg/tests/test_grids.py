import numpy as np
import pytest

from python.calculus.grids import GridSpec, SampledField, box_points, complex_to_real, real_to_complex, sphere_points
from python.calculus.weights import WeightSpec, japanese
from python.helpers.errors import MalformedInputError, PreconditionError


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_sphere_points_have_unit_norm(dim):
    pts = sphere_points(dim, 200)
    assert pts.shape == (200, dim)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), 1.0, rtol=1e-12)


def test_box_points_stay_in_box():
    pts = box_points(500, 4, 2.5)
    assert pts.shape == (500, 4)
    assert np.all(np.abs(pts) <= 2.5)
    z = real_to_complex(pts, 2)
    np.testing.assert_array_equal(complex_to_real(z), pts)


def test_grid_spec_parse_and_radii():
    grid = GridSpec.parse("1,8,4,16")
    np.testing.assert_allclose(grid.radii(), [1, 2, 4, 8])
    radii, shells = grid.shells(2)
    assert shells.shape == (4, 16, 2)
    np.testing.assert_allclose(np.linalg.norm(shells[-1], axis=-1), 8.0)
    assert GridSpec.parse(None) == GridSpec()


@pytest.mark.parametrize("text", ["1,8,4", "a,b,c,d"])
def test_grid_spec_rejects_bad_text(text):
    with pytest.raises(MalformedInputError):
        GridSpec.parse(text)


def test_grid_spec_preconditions():
    with pytest.raises(PreconditionError):
        GridSpec(0.0, 8.0)
    with pytest.raises(PreconditionError):
        GridSpec(1.0, 8.0, 0, 16)


def test_sampled_field_checks():
    with pytest.raises(MalformedInputError):
        SampledField(points=np.zeros((3, 1)), values=np.zeros(2))
    with pytest.raises(MalformedInputError):
        SampledField(points=np.zeros((2, 1)), values=np.array([1.0, np.nan]))


def test_weights():
    assert japanese(np.array([3 + 4j])) == pytest.approx(np.sqrt(26))
    poly = WeightSpec.parse("poly:2")
    assert poly.is_moderate
    assert poly(np.array([1.0 + 0j])) == pytest.approx(2.0)
    exp = WeightSpec.parse("exp:0.5:2")
    assert not exp.is_moderate
    assert exp(np.array([4.0 + 0j])) == pytest.approx(np.e)
    assert WeightSpec.parse("1")(np.array([5.0 + 0j])) == pytest.approx(1.0)
    assert str(poly) == "<z>^2"


@pytest.mark.parametrize("text", ["poly", "exp:1", "gauss:1", "poly:x"])
def test_weight_parse_errors(text):
    with pytest.raises(MalformedInputError):
        WeightSpec.parse(text)
