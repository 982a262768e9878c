#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "fluxforge/generators.hpp"
#include "fluxforge/mesh.hpp"

using namespace fluxforge;

namespace {

VectorField constant_field(double cx, double cy, int N) {
    AnalyticField fn = [cx, cy](const Point&, double* out) {
        out[0] = cx;
        out[1] = cy;
    };
    return VectorField(GridSpec(2, N), fn);
}

VectorField scaled_vortex(double scale, int N) {
    AnalyticField fn = [scale](const Point& x, double* out) {
        double r2 = std::max(x[0] * x[0] + x[1] * x[1], 1e-24);
        out[0] = scale * x[0] / (2.0 * M_PI * r2);
        out[1] = scale * x[1] / (2.0 * M_PI * r2);
    };
    return VectorField(GridSpec(2, N), fn);
}

}  // namespace

TEST_CASE("build_mesh enumerates the lattice centers") {
    CubicMesh m = build_mesh(2, 0.25, Point{});
    CHECK(m.q_eps == 3);
    CHECK(m.cube_count() == 4);
    std::set<std::pair<double, double>> centers;
    for (long i = 0; i < m.cube_count(); ++i) {
        Point c = m.center(m.multi_index(i));
        centers.insert({c[0], c[1]});
    }
    CHECK(centers.count({-0.125, -0.125}) == 1);
    CHECK(centers.count({-0.125, 0.125}) == 1);
    CHECK(centers.count({0.125, -0.125}) == 1);
    CHECK(centers.count({0.125, 0.125}) == 1);

    CubicMesh coarse = build_mesh(2, 0.3, Point{});
    CHECK(coarse.q_eps == 2);
    CHECK(coarse.cube_count() == 1);

    CHECK_THROWS_AS(build_mesh(2, 0.25, make_point({0.2, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(build_mesh(2, 0.0, Point{}), std::invalid_argument);

    // every cube closure stays inside the domain
    CubicMesh shifted = build_mesh(2, 0.125, make_point({0.06, -0.06}));
    for (long i = 0; i < shifted.cube_count(); ++i) {
        Cube c = shifted.cube(shifted.multi_index(i));
        CHECK(c.lo[0] > -0.5);
        CHECK(c.hi[0] < 0.5);
        CHECK(c.lo[1] > -0.5);
        CHECK(c.hi[1] < 0.5);
    }
}

TEST_CASE("skeleton deviation vanishes for constants and scales with |c|^p") {
    VectorField V = constant_field(0.5, 0.25, 16);
    CubicMesh m = build_mesh(2, 0.25, Point{});
    CHECK(skeleton_deviation(V, m, 2.0, WeightedMeasure(0.0)) == 0.0);

    // linear field against a refined quadrature oracle
    AnalyticField lin = [](const Point& x, double* out) {
        out[0] = x[0];
        out[1] = 0.0;
    };
    VectorField L(GridSpec(2, 32), lin);
    MeshOptions fine;
    fine.deviation_M = 1024;
    fine.average_K = 64;
    double dev = skeleton_deviation(L, m, 2.0, WeightedMeasure(0.0), fine);
    CHECK(dev > 0.0);

    // closed form: per cube (2/3) eps^3 of |x1 - c1|^2 over the four faces
    double expected = 0.25 * 4.0 * (2.0 / 3.0) * std::pow(0.25, 3);
    CHECK(dev == doctest::Approx(expected).epsilon(1e-3));

    MeshOptions std_opt;
    double base = skeleton_deviation(L, m, 2.0, WeightedMeasure(0.0), std_opt);
    AnalyticField lin3 = [](const Point& x, double* out) {
        out[0] = -3.0 * x[0];
        out[1] = 0.0;
    };
    VectorField L3(GridSpec(2, 32), lin3);
    double scaled = skeleton_deviation(L3, m, 2.0, WeightedMeasure(0.0), std_opt);
    CHECK(scaled == doctest::Approx(std::pow(3.0, 2.0) * base).epsilon(1e-12));
}

TEST_CASE("select_shift prefers the zero shift on constants and is deterministic") {
    VectorField V = constant_field(0.5, 0.25, 16);
    CubicMesh m = select_shift(V, 0.25, 2.0, WeightedMeasure(0.0), 16, 42);
    CHECK(m.shift[0] == 0.0);
    CHECK(m.shift[1] == 0.0);

    ChargeSet cs;
    cs.items.push_back({make_point({0.0, 0.0}), 1});
    VectorField W = gen_vortex(cs, 2, 64);
    CubicMesh sel = select_shift(W, 0.25, 1.5, WeightedMeasure(0.0), 32, 42);
    double dev_sel = skeleton_deviation(W, sel, 1.5, WeightedMeasure(0.0));
    double dev_zero =
        skeleton_deviation(W, build_mesh(2, 0.25, Point{}), 1.5, WeightedMeasure(0.0));
    CHECK(dev_sel <= dev_zero);

    CubicMesh again = select_shift(W, 0.25, 1.5, WeightedMeasure(0.0), 32, 42);
    CHECK(sel.shift[0] == again.shift[0]);
    CHECK(sel.shift[1] == again.shift[1]);
}

TEST_CASE("classify_cubes: one bad cube per unit vortex") {
    ChargeSet cs;
    cs.items.push_back({make_point({0.0, 0.0}), 1});
    VectorField V = gen_vortex(cs, 2, 64);
    CubicMesh m = select_shift(V, 0.25, 1.5, WeightedMeasure(0.0), 32, 42);
    auto recs = classify_cubes(V, m, 1e-2);

    int bad = 0, good = 0, other = 0;
    for (const auto& r : recs) {
        if (r.cls == CubeClass::bad) {
            ++bad;
            CHECK(r.degree == 1);
        } else if (r.cls == CubeClass::good) {
            ++good;
        } else {
            ++other;
        }
    }
    CHECK(bad == 1);
    CHECK(other == 0);
    CHECK(good == static_cast<int>(recs.size()) - 1);
}

TEST_CASE("classify_cubes: divergence-free fields have no bad cubes") {
    VectorField V = gen_divfree(19, 2, 32);
    for (double eps : {0.25, 0.125, 0.0625}) {
        CubicMesh m = select_shift(V, eps, 2.0, WeightedMeasure(0.0), 8, 42);
        for (const auto& r : classify_cubes(V, m, 1e-2)) {
            CHECK(r.cls == CubeClass::good);
            CHECK(std::abs(r.flux) < 1e-6);
        }
    }
}

TEST_CASE("classify_cubes flags non-integral fluxes") {
    VectorField V = scaled_vortex(0.5, 64);
    CubicMesh m = select_shift(V, 0.25, 1.5, WeightedMeasure(0.0), 32, 42);
    auto recs = classify_cubes(V, m, 1e-2);
    int flagged = 0;
    for (const auto& r : recs)
        if (r.cls == CubeClass::non_integral) {
            ++flagged;
            CHECK(std::abs(std::abs(r.flux) - 0.5) < 1e-2);
        }
    CHECK(flagged == 1);
}

TEST_CASE("bad_cube_stats counts and weights") {
    VectorField D = gen_divfree(4, 2, 16);
    CubicMesh m = build_mesh(2, 0.125, Point{});
    auto drecs = classify_cubes(D, m, 1e-2);
    auto [zero_count, zero_wv] = bad_cube_stats(drecs, m, WeightedMeasure(0.0));
    CHECK(zero_count == 0);
    CHECK(zero_wv == 0.0);

    ChargeSet cs;
    cs.items.push_back({make_point({0.0, 0.0}), 1});
    VectorField V = gen_vortex(cs, 2, 64);
    CubicMesh sel = select_shift(V, 0.25, 1.5, WeightedMeasure(0.0), 32, 42);
    auto recs = classify_cubes(V, sel, 1e-2);
    auto [count, wv] = bad_cube_stats(recs, sel, WeightedMeasure(0.0));
    CHECK(count == 1);
    CHECK(wv == doctest::Approx(0.0625).epsilon(1e-12));  // eps^2, f == 1

    ChargeSet two;
    two.items.push_back({make_point({0.2, 0.2}), 1});
    two.items.push_back({make_point({-0.25, -0.1}), 1});
    VectorField W = gen_vortex(two, 2, 64);
    CubicMesh m8 = select_shift(W, 0.125, 1.5, WeightedMeasure(0.0), 32, 42);
    auto wrecs = classify_cubes(W, m8, 1e-2);
    auto [wcount, wwv] = bad_cube_stats(wrecs, m8, WeightedMeasure(0.0));
    CHECK(wcount == 2);
    CHECK(wwv == doctest::Approx(2.0 * 0.125 * 0.125).epsilon(1e-12));
}

TEST_CASE("degree conservation and charge coverage") {
    ChargeSet cs;
    cs.items.push_back({make_point({0.15, -0.2}), 1});
    cs.items.push_back({make_point({-0.3, 0.25}), -2});
    VectorField V = gen_vortex(cs, 2, 64);

    CubicMesh m = select_shift(V, 0.125, 1.5, WeightedMeasure(0.0), 32, 42);
    auto recs = classify_cubes(V, m, 1e-2);

    long total = 0;
    for (const auto& r : recs) total += r.degree;
    double omega_flux = boundary_flux(V, m.omega(), 512);
    CHECK(total == std::lround(omega_flux));

    // every bad cube contains a charge
    for (const auto& r : recs) {
        if (r.cls != CubeClass::bad) continue;
        Cube cube = m.cube(m.multi_index(r.index));
        bool found = false;
        for (const auto& ch : cs.items)
            if (cube.contains(ch.pos)) found = true;
        CHECK(found);
    }
}

TEST_CASE("bad-cube weighted volume shrinks along the epsilon ladder") {
    ChargeSet cs;
    cs.items.push_back({make_point({0.0, 0.0}), 1});
    VectorField V = gen_vortex(cs, 2, 64);

    double prev = -1.0;
    for (double eps : {0.25, 0.125, 0.0625}) {
        CubicMesh m = select_shift(V, eps, 1.5, WeightedMeasure(0.0), 32, 42);
        auto recs = classify_cubes(V, m, 1e-2);
        auto [count, wv] = bad_cube_stats(recs, m, WeightedMeasure(0.0));
        CHECK(count >= 1);
        if (prev >= 0.0) CHECK(wv <= 1.5 * prev);
        prev = wv;
    }
}

TEST_CASE("weighted measures factor through the decomposition") {
    VectorField V = gen_divfree(31, 2, 24);
    WeightedMeasure mu(0.5);
    CubicMesh m = select_shift(V, 0.125, 2.0, mu, 8, 42);
    auto recs = classify_cubes(V, m, 1e-2);
    for (const auto& r : recs) CHECK(r.cls == CubeClass::good);
    auto [count, wv] = bad_cube_stats(recs, m, mu);
    CHECK(count == 0);
    CHECK(wv == 0.0);
    CHECK(skeleton_deviation(V, m, 2.0, mu) > 0.0);
}
