import numpy as np
import pytest

from woodscat import ConfigurationError, build_mesh, make_circle, make_star


def test_circle_position():
    c = make_circle(1.0)
    p = c.position(np.array([np.pi / 2]))
    assert np.allclose(p, [[0.0, 1.0]], atol=1e-15)


def test_circle_curvature_and_jacobian():
    mesh = build_mesh(make_circle(2.5), 16)
    assert np.allclose(mesh.curvature, 1.0 / 2.5, atol=1e-13)
    assert np.allclose(mesh.jacobian, 2.5, atol=1e-13)


def test_circle_extent():
    r = 0.1 * 2 * np.pi
    mesh = build_mesh(make_circle(r), 16)
    assert mesh.y_min == pytest.approx(-r, abs=1e-9)
    assert mesh.y_max == pytest.approx(r, abs=1e-9)


def test_invalid_radius():
    with pytest.raises(ConfigurationError):
        make_circle(0.0)


def test_star_positions():
    star = make_star(1.0)
    p0 = star.position(np.array([0.0]))[0]
    assert p0 == pytest.approx([1.11, 0.0], abs=1e-14)
    ppi = star.position(np.array([np.pi]))[0]
    # r(pi) = 1 - 0.1 + 0.01 = 0.91
    assert ppi == pytest.approx([-0.91, 0.0], abs=1e-14)


def test_star_five_fold_symmetry():
    star = make_star(1.0)
    t = np.linspace(0, 2 * np.pi, 37)
    rot = 2 * np.pi / 5
    p1 = star.position(t + rot)
    p0 = star.position(t)
    c, s = np.cos(rot), np.sin(rot)
    rotated = np.stack([c * p0[:, 0] - s * p0[:, 1],
                        s * p0[:, 0] + c * p0[:, 1]], axis=-1)
    assert np.max(np.abs(p1 - rotated)) <= 1e-13


def test_mesh_nodes_small_circle():
    mesh = build_mesh(make_circle(1.0), 4)
    expect = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert np.allclose(mesh.points, expect, atol=1e-15)
    assert np.allclose(mesh.normals, expect, atol=1e-15)


def test_odd_node_count_rejected():
    with pytest.raises(ConfigurationError):
        build_mesh(make_circle(1.0), 7)


def test_star_extent_vs_dense_sampling():
    mesh = build_mesh(make_star(1.0), 64)
    t = np.linspace(0, 2 * np.pi, 1_000_000, endpoint=False)
    y = make_star(1.0).position(t)[:, 1]
    assert mesh.y_max == pytest.approx(float(y.max()), abs=1e-8)
    assert mesh.y_min == pytest.approx(float(y.min()), abs=1e-8)


def test_nodes_strictly_inside_extent():
    for curve in (make_circle(0.7), make_star(1.3)):
        mesh = build_mesh(curve, 32)
        assert np.all(mesh.points[:, 1] > mesh.y_min)
        assert np.all(mesh.points[:, 1] < mesh.y_max)


@pytest.mark.parametrize("curve", [make_circle(1.2), make_star(1.0)])
def test_outward_orientation(curve):
    mesh = build_mesh(curve, 48)
    centroid = mesh.points.mean(axis=0)
    assert np.all(np.sum((mesh.points - centroid) * mesh.normals, axis=1) > 0.0)


@pytest.mark.parametrize("curve", [make_circle(0.9), make_star(1.0)])
def test_mesh_refinement_consistency(curve):
    coarse = build_mesh(curve, 16)
    fine = build_mesh(curve, 32)
    # coincident parameters: every other fine node
    assert np.max(np.abs(fine.normals[::2] - coarse.normals)) <= 1e-13
    assert np.max(np.abs(fine.curvature[::2] - coarse.curvature)) <= 1e-13


def test_unit_normals():
    mesh = build_mesh(make_star(1.0), 40)
    assert np.max(np.abs(np.linalg.norm(mesh.normals, axis=1) - 1.0)) <= 1e-14
