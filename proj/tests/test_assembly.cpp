#include <cmath>
#include <numbers>
#include <vector>

#include "balloon/assembly.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace balloon;
using std::numbers::pi;

TEST_CASE("equator curvature from the radicand") {
    CHECK(equator_curvature({0.0, 16.0}) == doctest::Approx(2.0));
    CHECK(equator_curvature({0.0, 1.0}) == doctest::Approx(1.0));
    CHECK(equator_curvature({3.0, -11.0}) == doctest::Approx(std::sqrt(10.0)));
    CHECK_THROWS_AS(equator_curvature({0.0, -1.0}), NoEquatorError);
    CHECK_THROWS_AS(equator_curvature({-2.0, -9.0}), NoEquatorError);
}

TEST_CASE("family coordinate fixes the dilation gauge") {
    const double L = oracle::kFlatRadius1;
    auto member = family_member(oracle::kMylarNu, L);
    CHECK(member.lambda == 0.0);
    CHECK(member.mu == doctest::Approx(16.0).epsilon(1e-9));
    CHECK(family_nu(member, L) == doctest::Approx(oracle::kMylarNu).epsilon(1e-12));
    CHECK(mylar_nu() == doctest::Approx(oracle::kMylarNu).epsilon(1e-10));
}

TEST_CASE("build_arc from the equator reaches a smooth pole at the mylar length") {
    Tolerances tol;
    ArcSpec spec;
    spec.params = ProfileParams{0.0, 16.0};
    spec.length = oracle::kFlatRadius1;
    auto arc = build_arc(spec, tol);
    CHECK(arc.trajectory.length() == spec.length);               // arclength preserved
    CHECK(arc.curve.length() == spec.length);
    CHECK(std::abs(arc.trajectory.k(spec.length)) < 1e-8);      // k = 0 at the far end
    CHECK(arc.curve.start_pose().theta == doctest::Approx(pi / 2));
    const double turn = std::abs(total_turning(arc.curve));
    CHECK(turn == doctest::Approx(pi / 2).epsilon(1e-9));        // quarter turn
    CHECK(pole_corner_angle(arc.curve, 2) == doctest::Approx(0.0).epsilon(1e-8));

    // Truncated arc: pole end keeps nonzero curvature, corner opens up.
    spec.length = 0.5 * oracle::kFlatRadius1;
    auto half = build_arc(spec, tol);
    CHECK(std::abs(half.trajectory.k(spec.length)) > 0.5);
    CHECK(pole_corner_angle(half.curve, 2) > 0.1);
}

TEST_CASE("build_arc with constant-curvature member gives circular arcs") {
    Tolerances tol;
    // Constant solution k = c: lambda = c^2/2, mu = -3 c^4 / 4 (double root of R).
    const double c = 2.0;
    ArcSpec spec;
    spec.params = ProfileParams{c * c / 2.0, -0.75 * c * c * c * c};
    spec.length = pi / c;  // half circle
    auto arc = build_arc(spec, tol);
    CHECK(arc.trajectory.k(0.0) == doctest::Approx(c));
    CHECK(arc.trajectory.k(spec.length) == doctest::Approx(c).epsilon(1e-10));
    CHECK(total_turning(arc.curve) == doctest::Approx(pi).epsilon(1e-10));
}

TEST_CASE("build_arc from a pole anchor and degenerate notices") {
    Tolerances tol;
    ArcSpec spec;
    spec.boundary = ArcBoundary::pole_k_zero;
    spec.params = ProfileParams{0.0, 16.0};
    spec.length = oracle::kFlatRadius1;
    auto arc = build_arc(spec, tol);
    CHECK(arc.trajectory.k(0.0) == 0.0);
    CHECK(arc.trajectory.k(spec.length) == doctest::Approx(2.0).epsilon(1e-8));

    ArcSpec degen = spec;
    degen.params = ProfileParams{1.0, 1.0};  // mu = lambda^2: only the trivial branch
    CHECK_THROWS_AS(build_arc(degen, tol), DegenerateArcError);

    ArcSpec empty;
    empty.length = 1.0;
    CHECK_THROWS_AS(build_arc(empty, tol), std::invalid_argument);
}

TEST_CASE("pole corner angle limits") {
    // Straight segment (k = 0 limit): flat section folds back, angle pi.
    auto segment = reconstruct_from_curvature([](double) { return 0.0; }, {0.0, 0.0, 0.0}, 1.0);
    CHECK(pole_corner_angle(segment, 2) == doctest::Approx(pi));
    // Quarter circle: two half-circle copies close smoothly into a circle.
    auto quarter = reconstruct_from_curvature([](double) { return 1.0; }, {0.0, 0.0, 0.0},
                                              pi / 2);
    CHECK(pole_corner_angle(quarter, 2) == doctest::Approx(0.0).epsilon(1e-10));
    CHECK_THROWS_AS(pole_corner_angle(segment, 1), std::invalid_argument);
}

TEST_CASE("two-copy mylar assembly closes into the full oval") {
    Tolerances tol;
    ArcSpec spec;
    spec.params = ProfileParams{0.0, 16.0};
    spec.length = oracle::kFlatRadius1;
    auto arc = build_arc(spec, tol);
    auto section = assemble_cross_section(arc.curve, 2);
    CHECK(section.arcs.size() == 2);
    CHECK(section.corner_exterior_angles.size() == 2);
    CHECK(std::abs(section.corner_exterior_angles[0]) < 1e-8);
    CHECK(section.closure.endpoint_gap <= 1e-6);
    CHECK(section.closure.total_turning + section.closure.corner_sum ==
          doctest::Approx(2.0 * pi).epsilon(1e-9));
    CHECK(section.closure_ok);
}

TEST_CASE("constant-curvature copies close into a circle") {
    Tolerances tol;
    const double c = 1.0;
    ArcSpec spec;
    spec.params = ProfileParams{c * c / 2.0, -0.75};
    spec.length = 0.5 * pi / c;  // quarter circle; copies are half circles
    auto arc = build_arc(spec, tol);
    auto section = assemble_cross_section(arc.curve, 2);
    CHECK(section.closure.endpoint_gap < 1e-9);
    CHECK(section.closure.total_turning + section.closure.corner_sum ==
          doctest::Approx(2.0 * pi).epsilon(1e-10));

    // The literal half-circle-per-quarter feed still satisfies the turning identity.
    spec.length = pi / c;
    auto over = assemble_cross_section(build_arc(spec, tol).curve, 2);
    CHECK(over.closure.total_turning + over.closure.corner_sum ==
          doctest::Approx(2.0 * pi).epsilon(1e-9));
}

TEST_CASE("four-copy section satisfies the turning identity") {
    Tolerances tol;
    ArcSpec spec;
    spec.params = family_member(1.7, 1.0);
    spec.length = 1.0;
    auto arc = build_arc(spec, tol);
    auto section = assemble_cross_section(arc.curve, 4);
    CHECK(section.arcs.size() == 4);
    CHECK(section.closure.endpoint_gap <= 1e-6);
    CHECK(section.closure.total_turning + section.closure.corner_sum ==
          doctest::Approx(2.0 * pi).epsilon(1e-6));
    CHECK(section.closure_ok);
    CHECK_THROWS_AS(assemble_cross_section(arc.curve, 3), std::invalid_argument);
}

TEST_CASE("shooting recovers the mylar member and round-trips") {
    Tolerances tol;
    const double L = oracle::kFlatRadius1;
    auto mylar = shoot_for_pole_angle(L, 0.0, tol);
    CHECK(family_nu(mylar, L) == doctest::Approx(oracle::kMylarNu).epsilon(1e-9));
    CHECK(mylar.mu == doctest::Approx(16.0).epsilon(1e-6));

    // Round trip: angle produced by some nu0 is shot back to nu0.
    const double nu0 = 1.8;
    ArcSpec spec;
    spec.params = family_member(nu0, L);
    spec.length = L;
    const double angle = pole_corner_angle(build_arc(spec, tol).curve, 2);
    auto recovered = shoot_for_pole_angle(L, angle, tol);
    CHECK(family_nu(recovered, L) == doctest::Approx(nu0).epsilon(1e-8));

    CHECK_THROWS_AS(shoot_for_pole_angle(0.0, 0.0, tol), DegenerateArcError);
    CHECK_THROWS_AS(shoot_for_pole_angle(L, 3.14159, tol), NoSolutionError);
}

TEST_CASE("pole-curvature parameterization resolves on the descending branch") {
    Tolerances tol;
    const double L = oracle::kFlatRadius1;
    auto near_mylar = params_for_pole_curvature(0.0, L, tol);
    CHECK(family_nu(near_mylar, L) == doctest::Approx(oracle::kMylarNu).epsilon(1e-7));

    const double target = 0.5;
    auto member = params_for_pole_curvature(target, L, tol);
    ArcSpec spec;
    spec.params = member;
    spec.length = L;
    CHECK(build_arc(spec, tol).trajectory.k(L) == doctest::Approx(target).epsilon(1e-7));

    CHECK_THROWS_AS(params_for_pole_curvature(100.0, L, tol), NoSolutionError);
}

TEST_CASE("sweep over the family") {
    Tolerances tol;
    const double L = 1.0;
    const double grid[] = {0.5, 1.2, 1.9, oracle::kMylarNu, 2.61};
    auto rows = sweep_family(grid, L, tol);
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].nu == grid[i]);
        CHECK(rows[i].ok);
        CHECK(rows[i].turning_plus_corners == doctest::Approx(2.0 * pi).epsilon(1e-6));
    }
    // Pole angle decreases toward the mylar member, which sits at zero.
    CHECK(rows[0].pole_angle > rows[1].pole_angle);
    CHECK(rows[1].pole_angle > rows[2].pole_angle);
    CHECK(std::abs(rows[3].pole_angle) < 1e-7);
    CHECK(std::abs(rows[3].pole_curvature) < 1e-7);

    const double single[] = {1.0};
    CHECK(sweep_family(single, L, tol).size() == 1);

    // Scale invariance: metrics at (c L, nu) match metrics at (L, nu).
    auto scaled = sweep_family(grid, 2.5 * L, tol);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(scaled[i].pole_angle == doctest::Approx(rows[i].pole_angle).epsilon(1e-8));
        CHECK(scaled[i].pole_curvature * 2.5 ==
              doctest::Approx(rows[i].pole_curvature).epsilon(1e-8));
    }
}
