#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "adfnn/derivatives.hpp"
#include "adfnn/geometry.hpp"
#include "adfnn/network.hpp"
#include "doctest.h"

using namespace adfnn;

namespace {

const double kPi = std::numbers::pi;

ScalarField net_field(const Model& m) {
    return ScalarField::from([&m](auto xs) {
        using T = typename std::decay_t<decltype(xs)>::value_type;
        if constexpr (std::is_same_v<T, double>) {
            return m.forward(xs);
        } else {
            return m.forward(xs);
        }
    });
}

double eval_at(const Model& m, double x, double y) {
    const double p[2] = {x, y};
    return m.forward(std::span<const double>(p, 2));
}

// Independent tanh MLP evaluation in extended precision; keeps the
// finite-difference oracle's rounding noise well below the tolerances.
long double eval_long(const Mlp& m, long double x, long double y) {
    const auto& w = m.widths();
    auto th = m.params();
    std::vector<long double> a{x, y};
    std::size_t pos = 0;
    for (std::size_t l = 1; l < w.size(); ++l) {
        std::vector<long double> z(static_cast<std::size_t>(w[l]));
        const std::size_t bias = pos + static_cast<std::size_t>(w[l] * w[l - 1]);
        for (int i = 0; i < w[l]; ++i) {
            long double s = th[bias + static_cast<std::size_t>(i)];
            for (int j = 0; j < w[l - 1]; ++j) s += th[pos + static_cast<std::size_t>(i * w[l - 1] + j)] * a[static_cast<std::size_t>(j)];
            z[static_cast<std::size_t>(i)] = l + 1 < w.size() ? std::tanh(s) : s;
        }
        pos = bias + static_cast<std::size_t>(w[l]);
        a = std::move(z);
    }
    return a[0];
}

// d^k/dt^k of t -> f(x + t v), central stencils.
double fd_directional(const Mlp& m, double x, double y, double vx, double vy, int k, long double h) {
    auto f = [&](long double t) { return eval_long(m, x + t * vx, y + t * vy); };
    switch (k) {
        case 1: return static_cast<double>(f(h) - f(-h)) / (2 * h);
        case 2: return static_cast<double>(f(h) - 2 * f(0) + f(-h)) / (h * h);
        default:
            return static_cast<double>(-f(-3 * h) + 12 * f(-2 * h) - 39 * f(-h) + 56 * f(0) - 39 * f(h) + 12 * f(2 * h) - f(3 * h)) /
                   (6 * h * h * h * h);
    }
}

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

// Directional derivative of order k recovered from a total-degree jet.
double jet_directional(const Jet& j, double vx, double vy, int k) {
    double s = 0.0;
    const Layout& L = j.layout();
    for (int i = 0; i < L.size(); ++i) {
        const auto& a = L.index(i);
        if (degree(a) != k) continue;
        s += j[i] * std::pow(vx, a[0]) * std::pow(vy, a[1]);
    }
    return s * factorial(k);
}

}  // namespace

TEST_CASE("gradient of x^2 + y^2") {
    auto x = ScalarField::coordinate(0), y = ScalarField::coordinate(1);
    auto f = x * x + y * y;
    const double p[2] = {1.0, 2.0};
    auto g = grad_input(f, p);
    CHECK(g[0] == doctest::Approx(2.0));
    CHECK(g[1] == doctest::Approx(4.0));
    CHECK(laplacian(f, p) == doctest::Approx(4.0));
}

TEST_CASE("constant field has zero gradient") {
    auto f = ScalarField::constant(3.5);
    const double p[2] = {0.3, -0.7};
    auto g = grad_input(f, p);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
}

TEST_CASE("unit circle distance: gradient -x and laplacian -2") {
    auto phi = circle_adf({0, 0}, 1.0);
    const double p[2] = {1.0, 0.0};
    auto g = grad_input(phi, p);
    CHECK(g[0] == doctest::Approx(-1.0));
    CHECK(g[1] == doctest::Approx(0.0));
    for (double r : {0.0, 0.3, 0.8}) {
        const double q[2] = {r, 0.5 * r};
        CHECK(laplacian(phi, q) == doctest::Approx(-2.0));
    }
}

TEST_CASE("laplacian of sin(pi x) sin(pi y) at the centre") {
    auto f = ScalarField::from([](auto xs) { return sin(kPi * xs[0]) * sin(kPi * xs[1]); });
    const double p[2] = {0.5, 0.5};
    CHECK(laplacian(f, p) == doctest::Approx(-2 * kPi * kPi).epsilon(1e-13));
}

TEST_CASE("biharmonic examples") {
    auto plate = ScalarField::from([](auto xs) {
        auto r2 = xs[0] * xs[0] + xs[1] * xs[1];
        return (1.0 - r2) * (1.0 - r2) / 64.0;
    });
    auto cubic = ScalarField::from([](auto xs) { return xs[0] * xs[0] * xs[1] - 3.0 * xs[1] * xs[1] * xs[1] + xs[0]; });
    auto quartic = ScalarField::from([](auto xs) { return pow(xs[0], 4); });
    for (auto [x, y] : {std::pair{0.1, 0.2}, std::pair{-0.6, 0.3}}) {
        const double p[2] = {x, y};
        CHECK(biharmonic(plate, p) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(biharmonic(cubic, p)) < 1e-12);
        CHECK(biharmonic(quartic, p) == doctest::Approx(24.0).epsilon(1e-12));
    }
    const double p3[3] = {0, 0, 0};
    CHECK_THROWS(biharmonic(plate, p3));
}

TEST_CASE("non-finite intermediate raises") {
    auto f = ScalarField::from([](auto xs) { return log(xs[0]); });
    const double p[1] = {0.0};
    CHECK_THROWS(grad_input(f, p));
}

TEST_CASE("jet arithmetic matches plain arithmetic on the value") {
    const Layout& L = Layout::total(2, 4);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    for (int t = 0; t < 50; ++t) {
        double a = u(rng), b = u(rng);
        Jet ja = Jet::variable(L, a, 0), jb = Jet::variable(L, b, 1);
        CHECK((ja * jb + ja / jb).value() == a * b + a / b);
        CHECK(exp(ja - jb).value() == doctest::Approx(std::exp(a - b)).epsilon(1e-15));
        CHECK(tanh(ja).value() == doctest::Approx(std::tanh(a)).epsilon(1e-15));
        CHECK(sqrt(ja).value() == doctest::Approx(std::sqrt(a)).epsilon(1e-15));
    }
}

TEST_CASE("polynomial jets vanish above their degree") {
    const Layout& L = Layout::total(2, 4);
    Jet x = Jet::variable(L, 0.7, 0), y = Jet::variable(L, -0.4, 1);
    Jet p = x * x * y - 2.0 * x + 1.0;
    for (int i = 0; i < L.size(); ++i) {
        if (degree(L.index(i)) > 3) CHECK(p[i] == 0.0);
    }
    CHECK(p.derivative({2, 1, 0, 0}) == doctest::Approx(2.0));
    CHECK(p.derivative({1, 1, 0, 0}) == doctest::Approx(2 * 0.7));
}

TEST_CASE("tanh derivative polynomials against closed forms") {
    double d[6];
    const double x = 0.37, t = std::tanh(x), s = 1 - t * t;
    tanh_derivatives(x, 5, d);
    CHECK(d[1] == doctest::Approx(s));
    CHECK(d[2] == doctest::Approx(-2 * t * s));
    CHECK(d[3] == doctest::Approx(s * (6 * t * t - 2)));
    CHECK(d[4] == doctest::Approx(-8 * t * s * (3 * t * t - 2)));
}

TEST_CASE("network derivatives of order 1, 2 and 4 match finite differences") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Layout& L = Layout::total(2, 4);
    double worst[5] = {};
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> widths = trial % 2 ? std::vector<int>{2, 12, 12, 1} : std::vector<int>{2, 16, 1};
        Mlp net = Mlp::init(widths, Activation::Tanh, 100 + trial);
        for (auto& p : net.params()) p += 0.1 * u(rng);  // nonzero biases
        const double x = u(rng), y = u(rng);
        const double pt[2] = {x, y};
        Jet j = net.forward(std::span<const Jet>(seed(L, pt)));
        for (auto [vx, vy] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.6, 0.8}}) {
            for (int k : {1, 2, 4}) {
                double exact = jet_directional(j, vx, vy, k);
                double fd = fd_directional(net, x, y, vx, vy, k, k <= 2 ? 1e-4 : 1e-2);
                double rel = std::abs(exact - fd) / std::max(std::abs(fd), 1e-2);
                worst[k] = std::max(worst[k], rel);
            }
        }
    }
    MESSAGE("worst relative errors: k=1 ", worst[1], " k=2 ", worst[2], " k=4 ", worst[4]);
    CHECK(worst[1] <= 1e-6);
    CHECK(worst[2] <= 1e-6);
    CHECK(worst[4] <= 1e-4);
}

TEST_CASE("grad_input of a network matches finite differences at 100 points") {
    Mlp net = Mlp::init({2, 20, 20, 1}, Activation::Tanh, 5);
    auto f = net_field(net);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double x = u(rng), y = u(rng);
        const double p[2] = {x, y};
        auto g = grad_input(f, p);
        double gx = fd_directional(net, x, y, 1, 0, 1, 1e-5), gy = fd_directional(net, x, y, 0, 1, 1, 1e-5);
        double scale = std::max(std::hypot(gx, gy), 1e-3);
        worst = std::max(worst, std::hypot(g[0] - gx, g[1] - gy) / scale);
    }
    CHECK(worst <= 1e-6);
}
