import json
import math

import numpy as np
import pytest
import scipy.sparse.linalg as spla
from hypothesis import given, settings
from hypothesis import strategies as st

from collapse_heat import analytic
from collapse_heat.analytic import AnalyticCase
from collapse_heat.exceptions import ConvergenceError, ValidityWarning
from collapse_heat.materials import COPPER_RRR30, TORLON_4203, Material
from collapse_heat.noise import NoiseParams
from collapse_heat.pde import (
    BOUNDARY,
    EXTERIOR,
    INTERIOR,
    Box,
    CustomMask,
    Ellipsoid,
    FiniteCylinder,
    Slab,
    Sphere,
    build_domain,
    center_profile,
    convergence_study,
    fitted_order,
    laplacian_system,
    solve,
    write_field_csv,
    write_profile_csv,
)

P = NoiseParams()


# -- domains -----------------------------------------------------------------

def test_unit_cube_has_16_cubed_interior():
    d = build_domain(Box(1.0, 1.0, 1.0), 16)
    assert d.n_interior == 16**3
    assert d.interior_counts() == (16, 16, 16)
    assert d.spacing == pytest.approx(1 / 16)
    assert d.shape == (18, 18, 18)


def test_sphere_volume_fraction():
    N = 64
    d = build_domain(Sphere(0.5), N)
    assert d.n_interior == pytest.approx(math.pi / 6 * N**3, rel=0.05)


def test_box_aspect():
    d = build_domain(Box(1.0, 2.0, 3.0), 8)
    assert d.interior_counts() == (8, 16, 24)


@pytest.mark.parametrize(
    "desc", [Sphere(1.0), Ellipsoid(1.0, 0.5, 0.7), FiniteCylinder(0.5, 2.0), Box(1.0, 1.0, 0.3)]
)
def test_labels_are_consistent(desc):
    d = build_domain(desc, 12)
    labels = d.labels
    assert set(np.unique(labels)) <= {EXTERIOR, BOUNDARY, INTERIOR}
    # padding layer: the outermost shell of the grid holds no interior nodes
    for axis in range(3):
        assert not np.take(d.interior, 0, axis=axis).any()
        assert not np.take(d.interior, -1, axis=axis).any()
    # every interior neighbor is interior or boundary, never exterior
    for axis in range(3):
        for shift in (1, -1):
            nb = np.roll(labels, shift, axis=axis)
            assert not np.any(d.interior & (nb == EXTERIOR))
    # every boundary node touches the interior
    touch = np.zeros_like(d.interior)
    for axis in range(3):
        for shift in (1, -1):
            touch |= np.roll(d.interior, shift, axis=axis)
    assert np.all(touch[d.boundary])


def test_resolution_floor():
    with pytest.raises(ValueError, match="resolution"):
        build_domain(Sphere(1.0), 4)
    with pytest.raises(ValueError):
        build_domain(Box(1.0, 1.0, 1.0), 8.5)


def test_floor_holds_on_every_axis():
    # this ellipsoid rasterizes to 7 nodes along y at resolution 8
    d = build_domain(Ellipsoid(1.0, 0.5625, 0.55859375), 8)
    assert min(d.interior_counts()) >= 8
    assert d.resolution == 9
    assert build_domain(Sphere(1.0), 8).resolution == 8


def test_custom_mask_used_as_given():
    mask = np.ones((10, 10, 3), dtype=bool)
    d = build_domain(CustomMask(mask, 0.1))
    assert d.interior_counts() == (10, 10, 3)
    assert d.shape == (12, 12, 5)
    assert d.spacing == 0.1


@pytest.mark.parametrize("kwargs", [dict(Lx=0.0, Ly=1.0, Lz=1.0), dict(Lx=1.0, Ly=-1.0, Lz=1.0)])
def test_descriptor_validation(kwargs):
    with pytest.raises(ValueError):
        Box(**kwargs)


def test_custom_mask_validation():
    with pytest.raises(ValueError):
        CustomMask(np.zeros((4, 4, 4), dtype=bool), 0.1)
    with pytest.raises(ValueError):
        CustomMask(np.ones((4, 4), dtype=bool), 0.1)


def test_slab_is_periodic():
    d = build_domain(Slab(0.5), 16)
    assert d.periodic == (False, True, True)
    assert d.interior_counts()[0] == 16


# -- operator ------------------------------------------------------------------

def loop_operator(domain, theta):
    """Assemble h^2 (-lap) node by node, the slow obvious way."""
    idx = {}
    for pos in zip(*np.nonzero(domain.interior)):
        idx[tuple(int(p) for p in pos)] = len(idx)
    n = len(idx)
    A = np.zeros((n, n))
    for pos, row in idx.items():
        for axis in range(3):
            for s in (1, -1):
                nb = list(pos)
                nb[axis] += s
                if domain.periodic[axis]:
                    nb[axis] %= domain.shape[axis]
                nb = tuple(nb)
                if nb in idx:
                    A[row, row] += 1.0
                    A[row, idx[nb]] -= 1.0
                else:
                    A[row, row] += 1.0 / theta
    return A, idx


@pytest.mark.parametrize("scheme, theta", [("face", 0.5), ("node", 1.0)])
@pytest.mark.parametrize("desc", [Sphere(1.0), Box(1.0, 1.0, 1.0), Slab(1.0)], ids=["sphere", "box", "slab"])
def test_operator_matches_loop_assembly(desc, scheme, theta):
    d = build_domain(desc, 8)
    A, index = laplacian_system(d, scheme)
    ref, idx = loop_operator(d, theta)
    perm = np.array([index[p] for p in idx])
    np.testing.assert_array_equal(A.toarray()[np.ix_(perm, perm)], ref)


def test_operator_is_symmetric_positive_definite():
    d = build_domain(Ellipsoid(1.0, 0.6, 0.8), 10)
    for scheme in ("face", "node", "cut"):
        A, _ = laplacian_system(d, scheme)
        assert abs(A - A.T).max() == 0
        assert np.linalg.eigvalsh(A.toarray()).min() > 0


def test_unknown_scheme():
    with pytest.raises(ValueError, match="boundary"):
        laplacian_system(build_domain(Sphere(1.0), 8), "ghost")


# -- solver ----------------------------------------------------------------------

def test_cg_matches_direct_solve():
    d = build_domain(Sphere(1.0), 16)
    f = solve(d, COPPER_RRR30, P, tol=1e-12)
    A, index = laplacian_system(d)
    from collapse_heat.noise import volumetric_heating

    b = np.full(A.shape[0], d.spacing**2 * 2 * volumetric_heating(P, 9000.0) / 45.0)
    w = spla.spsolve(A.tocsc(), b)
    np.testing.assert_allclose(f.u[d.interior], w[index[d.interior]], rtol=1e-9)


def test_sor_matches_cg():
    d = build_domain(Box(1.0, 0.8, 0.6), 12)
    a = solve(d, TORLON_4203, P, T_s=0.01, tol=1e-11)
    b = solve(d, TORLON_4203, P, T_s=0.01, tol=1e-11, method="sor")
    np.testing.assert_allclose(a.T[d.interior], b.T[d.interior], rtol=1e-8)


def test_zero_heating_is_uniform():
    d = build_domain(Sphere(1.0), 12)
    f = solve(d, TORLON_4203, NoiseParams(0.0), T_s=0.05)
    assert f.iterations == 0
    assert np.all(f.T[d.interior] == 0.05)
    assert f.T_c == 0.05


def test_field_layout():
    d = build_domain(Sphere(1.0), 12)
    f = solve(d, TORLON_4203, P, T_s=0.02)
    assert np.all(np.isnan(f.T[d.labels == EXTERIOR]))
    assert np.all(f.T[d.boundary] == 0.02)
    assert f.u_s == pytest.approx(0.02**3.18, rel=1e-14, abs=0)
    assert f.T[f.argmax] == f.T_c
    assert f.residual <= 1e-10
    assert f.residual_history[-1] == f.residual


@pytest.mark.parametrize("desc", [Sphere(1.0), Box(1.0, 0.8, 0.6), Ellipsoid(1.0, 0.7, 0.5)])
def test_argmax_near_center(desc):
    f = solve(build_domain(desc, 15), TORLON_4203, P)
    center = (np.array(f.domain.shape) - 1) / 2
    assert np.all(np.abs(np.array(f.argmax) - center) <= 1)


def test_solver_errors():
    d = build_domain(Sphere(1.0), 8)
    with pytest.raises(ValueError):
        solve(d, COPPER_RRR30, P, T_s=-1.0)
    with pytest.raises(ValueError):
        solve(d, COPPER_RRR30, P, method="gauss")
    with pytest.raises(ConvergenceError) as err:
        solve(d, COPPER_RRR30, P, max_iter=2)
    assert err.value.iterations == 2
    assert len(err.value.residual_history) == 3
    with pytest.raises(ConvergenceError):
        solve(d, COPPER_RRR30, P, max_iter=1, method="sor")


def test_small_body_warns():
    d = build_domain(Sphere(2e-7), 8)
    with pytest.warns(ValidityWarning):
        solve(d, COPPER_RRR30, P)


def test_sphere_against_closed_form_coarse():
    for mat in (COPPER_RRR30, TORLON_4203):
        f = solve(build_domain(Sphere(1.0), 32), mat, P)
        exact = analytic.lower_bound(AnalyticCase("sphere", 1.0), mat, P)
        assert f.T_c == pytest.approx(exact, rel=0.01, abs=0)


def test_cut_scheme_is_more_accurate_on_sphere():
    exact = analytic.lower_bound(AnalyticCase("sphere", 1.0), COPPER_RRR30, P)
    d = build_domain(Sphere(1.0), 16)
    errs = {s: abs(solve(d, COPPER_RRR30, P, boundary=s).T_c / exact - 1) for s in ("face", "node", "cut")}
    assert errs["cut"] < 0.5 * errs["face"]
    assert errs["face"] < errs["node"]


def test_node_scheme_overestimates():
    exact = analytic.lower_bound(AnalyticCase("sphere", 1.0), TORLON_4203, P)
    f = solve(build_domain(Sphere(1.0), 16), TORLON_4203, P, boundary="node")
    assert f.T_c > exact


def test_cube_within_factor_two_of_estimate():
    f = solve(build_domain(Box(1.0, 1.0, 1.0), 32), COPPER_RRR30, P)
    estimate = analytic.cube_central_temperature(AnalyticCase("cube-estimate", 1.0), COPPER_RRR30, P)
    assert 0.5 < f.T_c / estimate < 2.0


def test_u_linear_in_Q():
    d = build_domain(Ellipsoid(1.0, 0.7, 0.5), 12)
    f1 = solve(d, TORLON_4203, P, T_s=0.03, tol=1e-13)
    f2 = solve(d, TORLON_4203, P.with_lambda(3e-8), T_s=0.03, tol=1e-13)
    w1 = f1.u[d.interior] - f1.u_s
    w2 = f2.u[d.interior] - f2.u_s
    np.testing.assert_allclose(w2, 3 * w1, rtol=1e-8)


def test_pde_scaling_law():
    for mat in (COPPER_RRR30, TORLON_4203):
        a = solve(build_domain(FiniteCylinder(0.5, 1.0), 12), mat, P).T_c
        b = solve(build_domain(FiniteCylinder(1.5, 3.0), 12), mat, P).T_c
        assert b == pytest.approx(3 ** (2 / mat.exponent) * a, rel=5e-3, abs=0)


@settings(max_examples=15, deadline=None)
@given(
    beta=st.floats(0.0, 3.0),
    T_s=st.floats(0.0, 0.2),
    lam=st.floats(1e-10, 1e-6),
    axes=st.tuples(st.floats(0.3, 1.0), st.floats(0.3, 1.0), st.floats(0.3, 1.0)),
)
def test_maximum_principle(beta, T_s, lam, axes):
    mat = Material("m", 5000.0, 1.0, beta, valid_below=1e6)
    d = build_domain(Ellipsoid(*axes), 8)
    f = solve(d, mat, NoiseParams(lam), T_s=T_s)
    assert np.all(f.T[d.interior] >= T_s)
    assert f.T_c >= T_s


# -- profiles --------------------------------------------------------------------

def test_center_profile_of_box_is_symmetric():
    f = solve(build_domain(Box(1.0, 1.0, 1.0), 16), COPPER_RRR30, P)
    prof = center_profile(f, "x")
    assert prof.radii[0] == pytest.approx(-0.5)
    assert prof.radii[-1] == pytest.approx(0.5)
    assert prof.temperatures[0] == prof.temperatures[-1] == 0.0
    np.testing.assert_allclose(prof.temperatures, prof.temperatures[::-1], rtol=1e-8)
    assert prof.T_c == pytest.approx(f.T_c, rel=1e-12, abs=0)


def test_center_profile_cut_endpoints_on_surface():
    f = solve(build_domain(Sphere(1.0), 16), COPPER_RRR30, P, boundary="cut")
    prof = center_profile(f, 1)
    assert prof.radii[0] == pytest.approx(-1.0, abs=1e-9)
    assert prof.radii[-1] == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("mat", [COPPER_RRR30, TORLON_4203], ids=lambda m: m.name)
def test_sphere_center_profile_at_64(mat):
    f = solve(build_domain(Sphere(1.0), 64), mat, P)
    prof = center_profile(f)
    case = AnalyticCase("sphere", 1.0)
    exact = analytic.temperature_at(case, mat, P, np.clip(np.abs(prof.radii), 0.0, 1.0))
    T_c = analytic.sphere_central_temperature(case, mat, P)
    assert np.max(np.abs(prof.temperatures - exact)) / T_c < 0.01
    assert np.all(np.abs(prof.radii) <= 1.0)


def test_center_profile_needs_field():
    with pytest.raises(ValueError):
        center_profile(None)


def test_slab_profile_coarse():
    f = solve(build_domain(Slab(1.0), 16), TORLON_4203, P)
    prof = center_profile(f)
    case = AnalyticCase("slab", 1.0)
    exact = analytic.temperature_at(case, TORLON_4203, P, prof.radii)
    u_c = analytic.central_temperature(case, TORLON_4203, P) ** 3.18
    u_err = np.abs(prof.temperatures**3.18 - exact**3.18).max() / u_c
    assert u_err == pytest.approx(1 / 16**2, rel=1e-6)


# -- study and export ---------------------------------------------------------------

def test_fitted_order():
    h = np.array([0.1, 0.05, 0.025])
    assert fitted_order(h, 3 * h**2) == pytest.approx(2.0)
    assert math.isnan(fitted_order(h, [1e-3, 0.0, 1e-5]))


def test_study_preconditions():
    with pytest.raises(ValueError):
        convergence_study(Sphere(1.0), COPPER_RRR30, P, resolutions=(8, 16))
    with pytest.raises(ValueError):
        convergence_study(Sphere(1.0), COPPER_RRR30, P, resolutions=(16, 8, 32))


def test_study_without_oracle_uses_successive_differences():
    study = convergence_study(Box(1.0, 1.0, 1.0), COPPER_RRR30, P, resolutions=(8, 16, 32))
    assert study.T_c_exact is None
    assert study.T_c_errors == []
    assert len(study.profile_errors) == 2
    assert study.order > 1.7
    assert len(list(study.rows())) == 3


def test_field_export(tmp_path):
    d = build_domain(Box(1.0, 1.0, 1.0), 8)
    f = solve(d, COPPER_RRR30, P)
    sidecar = write_field_csv(f, tmp_path / "field.csv")
    lines = (tmp_path / "field.csv").read_text().splitlines()
    assert lines[0] == "x_m,y_m,z_m,T_K"
    assert len(lines) == 1 + 8**3
    data = np.loadtxt(tmp_path / "field.csv", delimiter=",", skiprows=1)
    assert data[:, 3].max() == pytest.approx(f.T_c, rel=1e-7, abs=0)
    meta = json.loads(sidecar.read_text())
    assert meta["geometry"]["kind"] == "Box"
    assert meta["resolution"] == 8
    assert meta["material"]["name"] == "copper-rrr30"

    again = tmp_path / "again.csv"
    write_field_csv(solve(d, COPPER_RRR30, P), again)
    assert again.read_bytes() == (tmp_path / "field.csv").read_bytes()

    write_profile_csv(center_profile(f), tmp_path / "profile.csv")
    assert (tmp_path / "profile.csv").read_text().startswith("position_m,T_K\n")
