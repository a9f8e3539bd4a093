#include <cmath>
#include <random>

#include "doctest.h"
#include "geometry_cases.hpp"

using namespace adfnn;
using doctest::Approx;

namespace {
const Segment unit_seg({0, 0}, {1, 0});
}

TEST_CASE("line signed distance") {
    auto f = line_signed_distance(unit_seg);
    CHECK(f({0.5, 0.5}) == Approx(-0.5));
    CHECK(f({0.3, 0.0}) == 0.0);
    auto g = line_signed_distance(Segment({0, 0}, {0, 2}));
    CHECK(g({1, 1}) == Approx(1.0));
    CHECK_THROWS(Segment({1, 1}, {1, 1}));
}

TEST_CASE("trimming function") {
    auto t = trim_function(unit_seg);
    CHECK(t({0.5, 0}) == Approx(0.25));
    CHECK(t({0, 0}) == 0.0);
    CHECK(t({2, 0}) == Approx(-2.0));
}

TEST_CASE("segment adf") {
    auto phi = segment_adf(unit_seg);
    CHECK(phi({0.5, 0.3}) == Approx(0.3002314976804588).epsilon(1e-13));
    CHECK(phi({0.5, 0.0}) == 0.0);
    CHECK(phi({2.0, 0.0}) == Approx(2.0));
    CHECK(phi({0.5, -0.3}) == Approx(phi({0.5, 0.3})));
}

TEST_CASE("circle adf") {
    auto phi = circle_adf({0, 0}, 1.0);
    CHECK(phi({0, 0}) == Approx(0.5));
    CHECK(phi({1, 0}) == 0.0);
    CHECK(phi({0, 0.5}) == Approx(0.375));
    CHECK(phi({2, 0}) < 0.0);
    CHECK_THROWS(circle_adf({0, 0}, 0.0));
}

TEST_CASE("first order normalization") {
    auto w = ScalarField::from([](auto x) { return 2.0 * x[0]; });
    auto phi = first_order_normalize(w);
    double z[1] = {0.0};
    CHECK(phi(std::span<const double>(z, 1)) == 0.0);
    auto at = [&](double s) {
        double v[1] = {s};
        return phi(std::span<const double>(v, 1));
    };
    CHECK((at(1e-6) - at(-1e-6)) / 2e-6 == Approx(1.0).epsilon(1e-8));

    auto ell = ScalarField::from([](auto x) { return 1.0 - x[0] * x[0] / 0.25 - x[1] * x[1] / 0.0625; });
    CHECK(first_order_normalize(ell)({0.5, 0.0}) == Approx(0.0));

    auto lin = ScalarField::from([](auto x) { return x[0] + x[1]; });
    CHECK(first_order_normalize(lin)({1, 1}) == Approx(2.0 / std::sqrt(6.0)));

    auto zero = ScalarField::from([](auto x) { return x[0] * x[0]; });
    double o[1] = {0.0};
    CHECK_THROWS(first_order_normalize(zero)(std::span<const double>(o, 1)));
}

TEST_CASE("R_alpha and R_s pairs") {
    auto a = ScalarField::constant(3.0), b = ScalarField::constant(4.0);
    CHECK(r_alpha_pair(a, b, 1.0, JoinKind::Disjunction)({0, 0}) == Approx(4.0));
    CHECK(r_alpha_pair(a, b, 1.0, JoinKind::Conjunction)({0, 0}) == Approx(3.0));
    auto one = ScalarField::constant(1.0), zero = ScalarField::constant(0.0);
    CHECK(r_alpha_pair(one, one, 0.0, JoinKind::Conjunction)({0, 0}) == Approx(2.0 - std::sqrt(2.0)));
    CHECK_THROWS(r_alpha_pair(a, b, -1.0, JoinKind::Conjunction));
    CHECK_THROWS(r_alpha_pair(a, b, 1.5, JoinKind::Conjunction));

    CHECK(r_s_pair(zero, zero, 1, JoinKind::Disjunction)({0, 0}) == 0.0);
    CHECK(r_s_pair(one, zero, 1, JoinKind::Disjunction)({0, 0}) == Approx(2.0));
    CHECK(r_s_pair(one, one, 2, JoinKind::Conjunction)({0, 0}) == Approx((2.0 - std::sqrt(2.0)) * 2.0));
    CHECK_THROWS(r_s_pair(one, one, 0, JoinKind::Conjunction));
}

TEST_CASE("R_alpha at alpha=1 is max/min") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        double p = u(rng), q = u(rng);
        auto a = ScalarField::constant(p), b = ScalarField::constant(q);
        CHECK(std::abs(r_alpha_pair(a, b, 1.0, JoinKind::Disjunction)({0, 0}) - std::max(p, q)) <= 1e-12);
        CHECK(std::abs(r_alpha_pair(a, b, 1.0, JoinKind::Conjunction)({0, 0}) - std::min(p, q)) <= 1e-12);
    }
}

TEST_CASE("R-equivalence join") {
    auto c = [](double v) { return ScalarField::constant(v); };
    CHECK(r_equivalence_join({c(1), c(1)}, 1)({0, 0}) == Approx(0.5));
    CHECK(r_equivalence_join({c(0), c(0.7)}, 2)({0, 0}) == 0.0);
    CHECK(r_equivalence_join({c(2), c(3), c(6)}, 1)({0, 0}) == Approx(1.0));
    CHECK_THROWS(r_equivalence_join({c(1)}, 0));
}

TEST_CASE("R-equivalence associativity") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    for (int m = 1; m <= 3; ++m) {
        for (int i = 0; i < 100; ++i) {
            auto a = ScalarField::constant(u(rng)), b = ScalarField::constant(u(rng)),
                 c = ScalarField::constant(u(rng));
            double nested = r_equivalence_join({r_equivalence_join({a, b}, m), c}, m)({0, 0});
            double flat = r_equivalence_join({a, b, c}, m)({0, 0});
            CHECK(std::abs(nested - flat) <= 1e-12);
        }
    }
}

TEST_CASE("R-conjunction join") {
    auto c = [](double v) { return ScalarField::constant(v); };
    CHECK(r_conjunction_join(c(0), c(5), 2)({0, 0}) == Approx(0.0));
    CHECK(r_conjunction_join(c(1), c(1), 2)({0, 0}) == Approx(2.0 - std::sqrt(2.0)));
    CHECK(r_conjunction_join(c(3), c(4), 2)({0, 0}) == Approx(2.0));
    CHECK_THROWS(r_conjunction_join(c(3), c(4), 1));
}

TEST_CASE("polygon REQ adf") {
    auto sq = Polygon::square(0, 1);
    auto phi = polygon_adf_req(sq, 1);
    CHECK(phi({0.5, 0.0}) == 0.0);
    CHECK(testgeo::normal_derivative(phi, {0.5, 0.0}, {0.0, 1.0}) == Approx(1.0).epsilon(1e-3));
    // frozen from tests/oracles/geometry_oracle.py
    CHECK(polygon_adf_req(Polygon::square(-1, 1), 1)({0, 0}) == Approx(0.2795084971874737).epsilon(1e-13));
    CHECK(polygon_adf_req(Polygon::square(-1, 1), 2)({0, 0}) == Approx(0.5590169943749475).epsilon(1e-13));
}

TEST_CASE("polygon orientation is normalized") {
    Polygon cw({{{0, 0}, {0, 1}, {1, 1}, {1, 0}}});
    CHECK(signed_area(cw.loops()[0]) > 0.0);
    Polygon holed({{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}, {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}});
    CHECK(signed_area(holed.loops()[1]) < 0.0);
    CHECK(holed.contains({1.5, 0}));
    CHECK_FALSE(holed.contains({0, 0}));
    CHECK_THROWS(Polygon({{{0, 0}, {1, 0}}}));
}

TEST_CASE("mean value weight and adf") {
    auto W = mvp_polygon_weight(Polygon::square(-1, 1));
    CHECK(W({0, 0}) == Approx(4.0 * std::sqrt(2.0)));
    CHECK(mvp_polygon_weight(Polygon::square(0, 1))({0.5, 0.5}) == Approx(8.0 * std::sqrt(2.0)));
    CHECK_THROWS_AS(W({1, 1}), BoundaryProximity);

    CHECK(mvp_polygon_adf(Polygon::square(-1, 1))({0, 0}) == Approx(2.0 / (4.0 * std::sqrt(2.0))));
    auto phi = mvp_polygon_adf(Polygon::square(0, 1));
    CHECK(phi({0.5, 0.0}) == 0.0);
    CHECK(testgeo::normal_derivative(phi, {0.5, 0.0}, {0.0, 1.0}) == Approx(1.0).epsilon(1e-2));
}

TEST_CASE("mean value weight on a domain with a hole") {
    Polygon holed({{{-2, -2}, {2, -2}, {2, 2}, {-2, 2}}, {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}});
    auto phi = mvp_polygon_adf(holed);
    CHECK(phi({1.5, 0.0}) > 0.0);
    CHECK(phi({1.0, 0.0}) == 0.0);
    CHECK(testgeo::normal_derivative(phi, {1.0, 0.3}, {1.0, 0.0}) == Approx(1.0).epsilon(1e-2));
}

TEST_CASE("curve mean value potential") {
    auto circle = ParametricCurve::ellipse(1.0, 1.0);
    auto phi = mvp_curve_adf(circle, 1, 256);
    // frozen from tests/oracles/geometry_oracle.py (trapezoid, 1e5 nodes)
    CHECK(phi({0, 0}) == Approx(0.31830988618379075).epsilon(1e-10));
    CHECK(phi({0.5, 0}) == Approx(0.25554320759565247).epsilon(1e-9));
    CHECK(phi({1, 0}) == 0.0);
    CHECK(phi({std::cos(1.0), std::sin(1.0)}) == 0.0);
    double h = 1e-5;
    double d = (-3.0 * 0.0 + 4.0 * phi({1 - h, 0}) - phi({1 - 2 * h, 0})) / (2 * h);
    CHECK(d == Approx(1.0).epsilon(1e-2));

    auto ell = mvp_curve_adf(ParametricCurve::ellipse(0.5, 0.3), 1, 256);
    double v = ell({0.2, 0.1});
    CHECK(v == Approx(0.09274225642076701).epsilon(1e-9));
    CHECK(ell({-0.2, 0.1}) == Approx(v).epsilon(1e-12));
    CHECK(ell({0.2, -0.1}) == Approx(v).epsilon(1e-12));
    CHECK_THROWS(mvp_curve_adf(circle, 0, 256));
}

TEST_CASE("curve potential with p=2 keeps unit normal slope") {
    auto phi = mvp_curve_adf(ParametricCurve::ellipse(1.0, 1.0), 2, 256);
    double h = 1e-5;
    double d = (4.0 * phi({1 - h, 0}) - phi({1 - 2 * h, 0})) / (2 * h);
    CHECK(d == Approx(1.0).epsilon(1e-2));
}

TEST_CASE("transfinite interpolant") {
    auto c = [](double v) { return ScalarField::constant(v); };
    auto g = transfinite_interpolant({{c(0.3), c(0.0), 1}, {c(0.3), c(1.0), 1}});
    CHECK(g({0, 0}) == Approx(0.5));

    auto r = ScalarField::from([](auto x) { return sqrt(x[0] * x[0] + x[1] * x[1]); });
    std::vector<TransfinitePiece> ann{{1.0 - r, c(1.0), 1}, {r - 0.25, c(2.0), 1}};
    auto ga = transfinite_interpolant(ann);
    CHECK(ga({1.0, 0.0}) == 1.0);
    CHECK(ga({0.25, 0.0}) == 2.0);
    for (double rr : {0.3, 0.5, 0.8}) CHECK(ga({0.0, rr}) == Approx((7.0 - 4.0 * rr) / 3.0));

    // lowest-index piece wins where two zero sets meet
    auto tie = transfinite_interpolant({{c(0.0), c(3.0), 1}, {c(0.0), c(4.0), 1}});
    CHECK(tie({0, 0}) == 3.0);
}

TEST_CASE("transfinite partition of unity") {
    auto sq = Polygon::square(0, 1);
    std::vector<TransfinitePiece> pieces;
    int k = 0;
    for (const auto& e : sq.edges()) {
        pieces.push_back({segment_adf(e), ScalarField::constant(static_cast<double>(k)), 1 + (k % 2)});
        ++k;
    }
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.01, 0.99);
    for (int i = 0; i < 200; ++i) {
        double x = u(rng), y = u(rng);
        double s = 0.0;
        for (std::size_t j = 0; j < pieces.size(); ++j) s += transfinite_weight(pieces, j)({x, y});
        CHECK(std::abs(s - 1.0) <= 1e-12);
    }
    auto g = transfinite_interpolant(pieces);
    for (const auto& b : testgeo::boundary_samples(sq, 40)) {
        if (b.vertex_gap < 1e-9) continue;
        int edge = 0;
        for (const auto& e : sq.edges()) {
            if (segment_adf(e)({b.p[0], b.p[1]}) == 0.0) break;
            ++edge;
        }
        CHECK(g({b.p[0], b.p[1]}) == static_cast<double>(edge));
    }
}

TEST_CASE("hypercube adf") {
    auto c1 = hypercube_adf(1);
    double z[1] = {0.0};
    CHECK(c1(std::span<const double>(z, 1)) == Approx(0.5));
    auto c4 = hypercube_adf(4);
    double face[4] = {0.2, -1.0, 0.3, 0.1};
    CHECK(c4(std::span<const double>(face, 4)) == 0.0);
    CHECK(hypercube_adf(2)({0, 0}) == Approx(0.25));
    CHECK_THROWS(hypercube_adf(5));
}

TEST_CASE("boundary zero and positivity on test polygons") {
    std::vector<Polygon> polys{Polygon::square(0, 1), testgeo::l_shape(), Polygon::regular(6, 1.0)};
    std::mt19937_64 rng(5);
    for (const auto& poly : polys) {
        auto req = polygon_adf_req(poly, 1);
        auto mvp = mvp_polygon_adf(poly);
        for (const auto& b : testgeo::boundary_samples(poly, 200)) {
            CHECK(std::abs(req({b.p[0], b.p[1]})) <= 1e-10);
            CHECK(mvp({b.p[0], b.p[1]}) == 0.0);
        }
        std::uniform_real_distribution<double> u(-2, 2);
        int count = 0;
        while (count < 1000) {
            Vec2 p{u(rng), u(rng)};
            if (!poly.contains(p) || poly.boundary_distance(p) < 1e-6) continue;
            ++count;
            CHECK(req({p[0], p[1]}) > 0.0);
            CHECK(mvp({p[0], p[1]}) > 0.0);
        }
    }
}
