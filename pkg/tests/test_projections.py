import math

import numpy as np
import pytest

from pettylab import (
    GeometryError,
    QuadratureSpec,
    RadialMeasure,
    Zonotope,
    ball_body,
    cauchy_surface_bound_defect,
    centroid_body_support,
    cube_body,
    empirical_centroid_body,
    hull,
    mixed_projection_support,
    petty_product,
    polar_measure,
    polar_projection_polytope,
    projection_body,
    projection_body_of_zonotope,
    solid_simplex,
    sphere_directions,
    support,
    vertex_set_distance,
    volume,
    zonotope_to_vpolytope,
)
from pettylab.mixed import surface_area
from pettylab.verify import centroid_support_cubature, shadow_oracle


class TestProjectionBody:
    def test_cube_shadows_give_a_scaled_cube(self):
        for n in (2, 3):
            Z = projection_body(cube_body(n))
            target = cube_body(n, 2.0 ** (n - 1))
            assert vertex_set_distance(zonotope_to_vpolytope(Z), target) == 0.0

    def test_support_equals_shadow_volume(self):
        gen = np.random.default_rng(80)
        for n in (2, 3):
            for _ in range(8):
                K = hull(gen.normal(size=(n + 5, n)))
                Z = projection_body(K)
                for _ in range(5):
                    u = gen.normal(size=n)
                    u /= np.linalg.norm(u)
                    assert support(Z, u) == pytest.approx(
                        shadow_oracle(K, u), abs=1e-10
                    )

    def test_zonotope_route_agrees_with_facet_route(self):
        gen = np.random.default_rng(81)
        for n in (2, 3):
            for m in (n, n + 2, n + 3):
                Z = Zonotope(gen.normal(size=(m, n)))
                direct = projection_body_of_zonotope(Z)
                via_facets = projection_body(zonotope_to_vpolytope(Z))
                U = sphere_directions(n, 64)
                got = direct.support_batch(U)
                known = via_facets.support_batch(U)
                assert np.abs(got - known).max() <= 1e-9 * max(1.0, known.max())

    def test_degenerate_input_needs_the_flag(self):
        seg = hull(np.array([[0.0, 0.0], [1.0, 2.0]]))
        with pytest.raises(GeometryError):
            projection_body(seg)
        Z = projection_body(seg, allow_degenerate=True)
        # shadow of a segment: |<rotated direction, u>|
        d = np.array([1.0, 2.0])
        r = np.array([-d[1], d[0]])
        gen = np.random.default_rng(82)
        for u in gen.normal(size=(10, 2)):
            assert support(Z, u) == pytest.approx(abs(r @ u), abs=1e-12)

    def test_flat_spatial_body_projects_through_its_area_vector(self):
        flat = hull(
            np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)
        )
        Z = projection_body(flat, allow_degenerate=True)
        assert support(Z, np.array([0.0, 0.0, 1.0])) == pytest.approx(1.0)
        assert support(Z, np.array([1.0, 0.0, 0.0])) == pytest.approx(0.0, abs=1e-12)

    def test_point_has_no_shadow(self):
        point = hull(np.array([[1.0, 1.0], [1.0, 1.0]]))
        Z = projection_body(point, allow_degenerate=True)
        assert support(Z, np.array([1.0, 0.0])) == 0.0


class TestMixedProjection:
    def test_pair_of_equal_bodies_collapses_to_projection_body(self):
        gen = np.random.default_rng(83)
        K = hull(gen.normal(size=(8, 3)))
        h = mixed_projection_support([K, K])
        Z = projection_body(K)
        U = sphere_directions(3, 128)
        assert np.abs(h(U) - Z.support_batch(U)).max() <= 1e-8

    def test_zonotope_pair_cross_form_agrees_with_polytopes(self):
        gen = np.random.default_rng(84)
        A = Zonotope(gen.normal(size=(3, 3)))
        B = Zonotope(gen.normal(size=(4, 3)))
        fast = mixed_projection_support([A, B])
        slow = mixed_projection_support(
            [zonotope_to_vpolytope(A), zonotope_to_vpolytope(B)]
        )
        U = sphere_directions(3, 96)
        assert np.abs(fast(U) - slow(U)).max() <= 1e-8 * max(1.0, slow(U).max())

    def test_zonotope_with_polytope_segment_width_form(self):
        gen = np.random.default_rng(85)
        P = hull(gen.normal(size=(7, 3)))
        B = Zonotope(gen.normal(size=(3, 3)))
        fast = mixed_projection_support([P, B])
        slow = mixed_projection_support([P, zonotope_to_vpolytope(B)])
        U = sphere_directions(3, 96)
        assert np.abs(fast(U) - slow(U)).max() <= 1e-8 * max(1.0, slow(U).max())

    def test_even_and_one_homogeneous(self):
        gen = np.random.default_rng(86)
        K = hull(gen.normal(size=(7, 3)))
        L = hull(gen.normal(size=(7, 3)))
        h = mixed_projection_support([K, L])
        u = gen.normal(size=(4, 3))
        assert h(u) == pytest.approx(h(-u), rel=1e-10)
        assert h(2.0 * u) == pytest.approx(2.0 * h(u), rel=1e-10)


class TestPolarMeasure:
    def test_lebesgue_measure_of_the_polar_region(self):
        # {x : h_cube(x) <= 1} is the cross polytope of area 2
        got = polar_measure(cube_body(2), RadialMeasure.lebesgue())
        assert got == pytest.approx(2.0, rel=1e-4)

    def test_certification_doubles_and_agrees(self):
        spec = QuadratureSpec(nodes=2048, certify=True)
        got = polar_measure(cube_body(2), RadialMeasure.lebesgue(), spec)
        assert got == pytest.approx(2.0, rel=1e-3)

    def test_gaussian_mass_of_the_polar_region(self):
        # P(|X1| + |X2| <= 1) for a standard normal pair, frozen by MC
        gen = np.random.default_rng(87)
        X = gen.normal(size=(1_000_000, 2))
        known = float(np.mean(np.abs(X).sum(axis=1) <= 1.0))
        got = polar_measure(cube_body(2), RadialMeasure.gaussian(1.0))
        assert got == pytest.approx(known, abs=2e-3)

    def test_ball_variant_truncates_the_radius(self):
        full = polar_measure(cube_body(2), RadialMeasure.lebesgue())
        trunc = polar_measure(cube_body(2), RadialMeasure.ball(0.5))
        assert trunc == pytest.approx(math.pi * 0.25, rel=1e-3)
        assert trunc < full

    def test_unbounded_lebesgue_region_is_rejected(self):
        with pytest.raises(GeometryError):
            RadialMeasure.lebesgue().radial_integral(np.array([np.inf]), 2)
        # degenerate support: the quadrature diverges with the node count,
        # which the doubling certification turns into a hard failure
        seg = hull(np.array([[0.0, 0.0], [1.0, 0.0]]))
        Z = projection_body(seg, allow_degenerate=True)
        with pytest.raises(GeometryError):
            polar_measure(
                Z, RadialMeasure.lebesgue(), QuadratureSpec(nodes=512, certify=True)
            )

    def test_unbounded_gaussian_region_stays_finite(self):
        seg = hull(np.array([[0.0, 0.0], [1.0, 0.0]]))
        Z = projection_body(seg, allow_degenerate=True)
        got = polar_measure(Z, RadialMeasure.gaussian(1.0))
        assert 0.0 < got < 1.0

    def test_radial_integrals_match_numeric_quadrature(self):
        full = np.linspace(0.0, 3.0, 200_001)
        cut = np.linspace(0.0, 1.5, 200_001)
        for measure, grid, density in (
            (RadialMeasure.lebesgue(), full, np.ones_like(full)),
            (RadialMeasure.gaussian(1.0), full, None),
            (RadialMeasure.ball(1.5), cut, np.ones_like(cut)),
        ):
            for n in (2, 3):
                if measure.variant == "gaussian":
                    density = np.exp(-0.5 * grid**2) / (2.0 * math.pi) ** (n / 2)
                vals = density * grid ** (n - 1)
                known = float(np.trapezoid(vals, grid))
                assert measure.radial_integral(3.0, n) == pytest.approx(
                    known, rel=1e-6, abs=1e-9
                )


class TestCentroidBody:
    def test_square_support_along_an_axis(self):
        h = centroid_body_support(cube_body(2))
        assert h(np.array([[1.0, 0.0]]))[0] == pytest.approx(0.5)
        assert h(np.array([[0.0, 1.0]]))[0] == pytest.approx(0.5)

    def test_triangle_support_equals_first_moment(self):
        # x >= 0 on this triangle, so mean |x| is the centroid coordinate
        T = hull(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]))
        h = centroid_body_support(T)
        assert h(np.array([[1.0, 0.0]]))[0] == pytest.approx(1.0 / 3.0)

    def test_matches_grid_cubature(self):
        gen = np.random.default_rng(88)
        K = hull(gen.normal(size=(7, 2)))
        h = centroid_body_support(K)
        for _ in range(3):
            u = gen.normal(size=2)
            u /= np.linalg.norm(u)
            known = centroid_support_cubature(K.vertices, u)
            assert h(u[None, :])[0] == pytest.approx(known, rel=2e-2)

    def test_empirical_body_converges(self):
        gen = np.random.default_rng(89)
        K = cube_body(2)
        pts = gen.uniform(-1.0, 1.0, size=(20000, 2))
        Z = empirical_centroid_body(pts)
        h = centroid_body_support(K)
        U = sphere_directions(2, 32)
        assert np.abs(Z.support_batch(U) - h(U)).max() <= 0.02

    def test_empirical_generators_are_scaled_samples(self):
        pts = np.array([[2.0, 0.0], [0.0, 4.0]])
        Z = empirical_centroid_body(pts)
        assert Z.generators == pytest.approx(pts / 2.0)


class TestPetty:
    def test_square_product_is_exactly_two(self):
        assert petty_product(cube_body(2)) == pytest.approx(2.0, abs=1e-12)
        assert petty_product(cube_body(2, 3.0)) == pytest.approx(2.0, abs=1e-10)

    def test_polar_projection_of_the_square(self):
        got = polar_projection_polytope(cube_body(2))
        known = 0.5 * np.vstack([np.eye(2), -np.eye(2)])
        assert vertex_set_distance(got, hull(known)) <= 1e-12
        assert volume(got) == pytest.approx(0.5)

    def test_triangle_attains_the_simplex_value(self):
        assert petty_product(solid_simplex(2)) == pytest.approx(1.5, abs=1e-12)

    def test_cube_value_in_space(self):
        assert petty_product(cube_body(3)) == pytest.approx(4.0 / 3.0, rel=1e-12)

    def test_ball_approximations_approach_the_extremal_values(self):
        assert petty_product(ball_body(2)) == pytest.approx(
            math.pi**2 / 4.0, rel=1e-2
        )
        assert petty_product(ball_body(3)) == pytest.approx(64.0 / 27.0, rel=2e-2)

    def test_quadrature_path_tracks_the_exact_path(self):
        gen = np.random.default_rng(90)
        for _ in range(5):
            K = hull(gen.normal(size=(8, 2)))
            exact = petty_product(K, method="exact")
            quad = petty_product(K, method="quadrature")
            assert quad == pytest.approx(exact, rel=2e-3)

    def test_affine_invariance(self):
        gen = np.random.default_rng(91)
        K = hull(gen.normal(size=(8, 2)))
        A = np.array([[2.0, 1.0], [0.5, 1.5]])
        img = hull(K.vertices @ A.T)
        assert petty_product(img) == pytest.approx(petty_product(K), rel=1e-9)

    def test_zonotope_input(self):
        Z = Zonotope(np.eye(2))
        assert petty_product(Z) == pytest.approx(2.0, abs=1e-12)


def test_cauchy_bound_never_exceeds_surface_area():
    gen = np.random.default_rng(92)
    for n in (2, 3):
        for _ in range(15):
            K = hull(gen.normal(size=(n + 5, n)))
            assert cauchy_surface_bound_defect(K) >= -1e-9
