import math

import pytest

import cmcforge as cf


def test_lambda_and_ranges():
    assert cf.lambda_of_c(3 / 16) == pytest.approx(0.5)
    assert cf.c_range(3, 3) == (("-5/16", "0"), ("0", "3/16"))
    assert cf.genus0_ends(3, 3) == 4
    with pytest.raises(ValueError):
        cf.c_range(4, 4)


def test_exists():
    assert cf.exists_cmc(3, 3, 0.1)["exists"]
    assert not cf.exists_cmc(2, 3, 0.23)["exists"]
    assert cf.exists_cmc(3, 3, 0.0)["minimal"]


def test_table():
    rows = cf.platonic_table()
    assert rows[0]["symmetry"] == "Tetrahedra"
    assert rows[0]["ta_over_pi"] == ["8", "12", "16"]
    assert len(rows) == 5


def test_catalog():
    assert "catenoid" in cf.catalog_names()
    d = cf.catalog("trinoid")
    assert len(d["reflections"]) >= 3
    with pytest.raises(KeyError):
        cf.catalog("torus")


def test_monodromy_trace():
    rho = cf.monodromy("catenoid", 0.1)
    tr = rho[0][0] + rho[1][1]
    assert abs(abs(tr) - 2 * abs(math.cos(math.pi * math.sqrt(0.6)))) < 1e-6
    assert abs(rho[0][0] * rho[1][1] - rho[0][1] * rho[1][0] - 1) < 1e-8


def test_solve_synthetic():
    rep = cf.solve("synthetic", 0.02)
    assert rep["converged"]
    assert abs(rep["su2_residuals"][0]) < 1e-8


def test_mesh_in_ball():
    verts, faces = cf.mesh("catenoid", 0.1, 6, 6)
    assert len(faces) > 0
    radius = 1 / 0.1
    assert all(math.hypot(*v) < radius for v in verts)
    assert all(0 <= i < len(verts) for f in faces for i in f)


def test_total_curvature():
    numeric, formula = cf.numeric_ta("trinoid", 0.1)
    assert numeric == pytest.approx(formula, rel=0.02)


def test_verify_one_suite():
    (r,) = cf.verify(7)
    assert r["pass"]
