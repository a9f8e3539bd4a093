#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "adfnn/bench.hpp"

namespace adfnn::bench {

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField x_() { return ScalarField::coordinate(0); }
ScalarField y_() { return ScalarField::coordinate(1); }
ScalarField c_(double v) { return ScalarField::constant(v); }

}  // namespace

std::shared_ptr<Model> make_network(const Config& cfg, int dim, double lo, double hi, std::uint64_t seed) {
    if (cfg.activation == Activation::Gaussian && dim == 1) {
        const int n = cfg.hidden.front();
        std::vector<double> centers(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) centers[static_cast<std::size_t>(i)] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * i / (n - 1);
        return std::make_shared<RbfNet>(centers, seed);
    }
    std::vector<int> widths{dim};
    widths.insert(widths.end(), cfg.hidden.begin(), cfg.hidden.end());
    widths.push_back(1);
    return std::make_shared<Mlp>(Mlp::init(widths, cfg.activation, seed));
}

namespace {

const auto make_model = make_network;

// ADF to both ends of [a, b].
ScalarField interval_phi(double a, double b, AdfKind adf, int m) {
    auto x = x_();
    if (adf == AdfKind::Product) return (x - a) * (b - x) / (b - a);
    return r_equivalence_join({x - a, b - x}, m);
}

// Affine function with the given end values.
ScalarField interval_lift(double a, double b, double ua, double ub) {
    return ua + (ub - ua) * (x_() - a) / (b - a);
}

BoundaryPiece point_piece(std::string name, double x0, DiffOp op, ScalarField data) {
    BoundaryPiece p;
    p.name = std::move(name);
    p.sample = [x0](int, std::uint64_t) { return Points::Constant(1, 1, x0); };
    p.op = std::move(op);
    p.data = std::move(data);
    return p;
}

BoundaryPiece segment_piece(std::string name, Vec2 a, Vec2 b, ScalarField data) {
    BoundaryPiece p;
    p.name = std::move(name);
    BoundaryCurve curve{[a, b](double t) {
                            return std::vector<double>{a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])};
                        },
                        std::hypot(b[0] - a[0], b[1] - a[1])};
    p.sample = [curve](int n, std::uint64_t seed) { return sample_boundary(curve, n, SampleStrategy::Grid, seed); };
    p.op = op_value();
    p.data = std::move(data);
    return p;
}

BoundaryPiece circle_piece(std::string name, double radius, ScalarField data) {
    BoundaryPiece p;
    p.name = std::move(name);
    BoundaryCurve curve{[radius](double t) {
                            return std::vector<double>{radius * std::cos(2 * kPi * t), radius * std::sin(2 * kPi * t)};
                        },
                        2 * kPi * radius};
    p.sample = [curve](int n, std::uint64_t seed) { return sample_boundary(curve, n, SampleStrategy::Grid, seed); };
    p.op = op_value();
    p.data = std::move(data);
    return p;
}

std::vector<BoundaryPiece> polygon_pieces(const Polygon& poly, const std::vector<ScalarField>& data) {
    std::vector<BoundaryPiece> out;
    auto edges = poly.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        out.push_back(segment_piece("edge" + std::to_string(i), edges[i].x1, edges[i].x2, data[i]));
    }
    return out;
}

ScalarField polygon_phi(const Polygon& poly, AdfKind adf, int m) {
    return adf == AdfKind::Mvp ? mvp_polygon_adf(poly) : polygon_adf_req(poly, m);
}

// Transfinite lift of per-edge data on a polygon.
ScalarField polygon_lift(const Polygon& poly, const std::vector<ScalarField>& data) {
    std::vector<TransfinitePiece> pieces;
    auto edges = poly.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) pieces.push_back({segment_adf(edges[i]), data[i], 1});
    return transfinite_interpolant(pieces);
}

// Common fields of a problem on (a, b).
ProblemSpec interval_problem(std::string name, std::string summary, double a, double b) {
    ProblemSpec s;
    s.name = std::move(name);
    s.summary = std::move(summary);
    s.domain = "interval (" + format_number(a) + ", " + format_number(b) + ")";
    s.dim = 1;
    s.interior = SamplingDomain::box({a}, {b});
    s.measure = b - a;
    s.eval_lo = {a};
    s.eval_hi = {b};
    s.defaults.n_interior = 100;
    s.defaults.sampling = SampleStrategy::Grid;
    s.defaults.n_boundary = 2;
    return s;
}

// -u'' = f on (a, b) with u(a) = ua, u(b) = ub.
ProblemSpec rod_dirichlet(std::string name, std::string summary, double a, double b, double ua, double ub,
                          ScalarField f, ScalarField exact, std::vector<int> hidden) {
    auto s = interval_problem(std::move(name), std::move(summary), a, b);
    s.pde = Pde::Poisson;
    s.f = std::move(f);
    s.exact = std::move(exact);
    s.methods = {Method::Collocation, Method::Ritz};
    s.adfs = {AdfKind::Product, AdfKind::Req};
    s.standard_loss = true;
    s.boundary = {point_piece("left", a, op_value(), c_(ua)), point_piece("right", b, op_value(), c_(ub))};
    s.defaults.method = Method::Collocation;
    s.defaults.adf = AdfKind::Product;
    s.defaults.hidden = std::move(hidden);
    s.defaults.activation = Activation::Tanh;
    s.defaults.epochs = 10000;
    auto lift = interval_lift(a, b, ua, ub);
    s.ansatz = [s_dim = s.dim, a, b, lift, lo = a, hi = b](const Config& cfg) {
        auto net = make_model(cfg, s_dim, lo, hi, cfg.seed);
        return dirichlet_structure(lift, interval_phi(a, b, cfg.adf, cfg.m), net);
    };
    return s;
}

template <class T>
T relu_sq(const T& t) {
    return value_of(t) > 0.0 ? T(t * t) : T(0.0 * t);
}

ProblemSpec rod_ex1() {
    auto b = ScalarField::from([](auto x) { return 1.0 - 2.0 * x[0] + 10.0 * x[0] * x[0]; });
    auto u = ScalarField::from([](auto x) {
        auto t = x[0];
        return 0.5 - t * t / 2.0 + t * t * t / 3.0 - 10.0 * t * t * t * t / 12.0;
    });
    return rod_dirichlet("rod-ex1", "elastic rod, -u'' = 1 - 2x + 10x^2, Dirichlet both ends", 0.0, 1.0, 0.5, -0.5, b,
                         u, {30, 30});
}

ProblemSpec rod_ex2() {
    auto s = interval_problem("rod-ex2", "elastic rod, -u'' = 1 - 2x + 10x^2, u(0) = 1/2, u'(1) = 0", 0.0, 1.0);
    s.pde = Pde::Poisson;
    s.f = ScalarField::from([](auto x) { return 1.0 - 2.0 * x[0] + 10.0 * x[0] * x[0]; });
    s.exact = ScalarField::from([](auto x) {
        auto t = x[0];
        return 0.5 + 10.0 * t / 3.0 - t * t / 2.0 + t * t * t / 3.0 - 10.0 * t * t * t * t / 12.0;
    });
    s.methods = {Method::Collocation, Method::Ritz};
    s.adfs = {AdfKind::Exact};
    s.standard_loss = true;
    s.boundary = {point_piece("left", 0.0, op_value(), c_(0.5)), point_piece("right", 1.0, op_partial(0), c_(0.0))};
    s.defaults.adf = AdfKind::Exact;
    s.defaults.hidden = {50, 50};
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 1, 0.0, 1.0, cfg.seed);
        auto x = x_();
        return mixed_structure_I(c_(0.5), c_(0.0), c_(0.0), x, 1.0 - x, net, std::vector<double>{1.0});
    };
    return s;
}

ProblemSpec rod_ex3(int k, std::vector<int> hidden) {
    const double kp = k * kPi;
    auto b = ScalarField::from([kp](auto x) { return -sin(kp * x[0]); });
    auto u = ScalarField::from([kp](auto x) { return -sin(kp * x[0]) / (kp * kp); });
    return rod_dirichlet("rod-ex3-k" + std::to_string(k), "elastic rod, -u'' = -sin(k pi x), k = " + std::to_string(k),
                         0.0, 1.0, 0.0, 0.0, b, u, std::move(hidden));
}

ProblemSpec rod_ex4() {
    auto b = ScalarField::from([](auto x) { return value_of(x[0]) >= 0.0 ? 1.0 : 0.0; });
    auto u = ScalarField::from([](auto x) {
        using T = std::decay_t<decltype(x[0])>;
        return value_of(x[0]) >= 0.0 ? T(-0.5 * x[0] * x[0]) : T(0.0 * x[0]);
    });
    return rod_dirichlet("rod-ex4", "elastic rod, Heaviside body force on (-1, 1)", -1.0, 1.0, 0.0, -0.5, b, u,
                         {50, 50});
}

ProblemSpec rod_ex5() {
    auto s = interval_problem("rod-ex5", "elastic rod, unit point load at x = 0, u(-1) = 0, u'(1) = 0", -1.0, 1.0);
    s.pde = Pde::Poisson;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) {
        using T = std::decay_t<decltype(x[0])>;
        return value_of(x[0]) < 0.0 ? T(1.0 + x[0]) : T(0.0 * x[0] + 1.0);
    });
    s.methods = {Method::Ritz};
    s.rejected[Method::Collocation] =
        "rod-ex5 has a Dirac delta load; it is not possible to solve this problem using the collocation method "
        "(use --method ritz)";
    s.adfs = {AdfKind::Exact};
    s.defaults.method = Method::Ritz;
    s.defaults.adf = AdfKind::Exact;
    s.defaults.hidden = {50, 50};
    s.defaults.activation = Activation::Repu3;
    s.defaults.epochs = 10000;
    // a regular grid leaves room for an unresolved spike at the load point
    s.defaults.n_interior = 400;
    s.defaults.sampling = SampleStrategy::Halton;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 1, -1.0, 1.0, cfg.seed);
        return dirichlet_structure(c_(0.0), x_() + 1.0, net);
    };
    s.ritz_extras = [](const Config&) {
        return std::vector<PointGroup>{point_functional_group("point-load", {0.0}, op_value(), -1.0)};
    };
    return s;
}

ProblemSpec rod_ex6() {
    auto b = ScalarField::from([](auto x) { return 2.0 * pow(x[0], -4.0 / 3.0) / 9.0; });
    auto u = ScalarField::from([](auto x) { return pow(x[0], 2.0 / 3.0); });
    return rod_dirichlet("rod-ex6", "elastic rod, -u'' = 2 x^(-4/3) / 9, exact x^(2/3)", 0.0, 1.0, 0.0, 1.0, b, u,
                         {50, 50});
}

ProblemSpec rod_ex7() {
    auto gauss = [](auto t) {
        return exp(-9.0 * (t - 0.25) * (t - 0.25)) + exp(-10.0 * (t - 0.6) * (t - 0.6));
    };
    auto u = ScalarField::from([gauss](auto x) { return gauss(x[0]); });
    auto b = ScalarField::from([](auto x) {
        auto t = x[0];
        auto term = [&](double g, double a) {
            auto r = t - a;
            return -exp(-g * r * r) * (4.0 * g * g * r * r - 2.0 * g);
        };
        return term(9.0, 0.25) + term(10.0, 0.6);
    });
    auto s = rod_dirichlet("rod-ex7", "elastic rod, exact sum of two Gaussians, Gaussian RBF network", 0.0, 1.0,
                           gauss(0.0), gauss(1.0), b, u, {10});
    s.defaults.activation = Activation::Gaussian;
    return s;
}

ProblemSpec rod_eigen() {
    auto s = interval_problem("rod-eigen", "rod vibrations u'' + w^2 u = 0, fixed ends, lowest mode", 0.0, 1.0);
    s.pde = Pde::Eigen;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) { return std::sqrt(2.0) * sin(kPi * x[0]); });
    s.exact_up_to_sign = true;
    s.methods = {Method::Eigen};
    s.adfs = {AdfKind::Product, AdfKind::Req};
    s.standard_loss = true;
    s.boundary = {point_piece("left", 0.0, op_value(), c_(0.0)), point_piece("right", 1.0, op_value(), c_(0.0))};
    s.defaults.method = Method::Eigen;
    s.defaults.adf = AdfKind::Product;
    s.defaults.hidden = {50, 50, 50};
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 1, 0.0, 1.0, cfg.seed);
        return dirichlet_structure(c_(0.0), interval_phi(0.0, 1.0, cfg.adf, cfg.m), net);
    };
    return s;
}

ProblemSpec advection_diffusion(int alpha, std::vector<int> hidden) {
    auto s = interval_problem("advdiff-a" + std::to_string(alpha),
                              "advection-diffusion u'' = a u', u(0) = 0, u(1) = 1, a = " + std::to_string(alpha), 0.0,
                              1.0);
    const double a = alpha;
    s.pde = Pde::AdvectionDiffusion;
    s.alpha = a;
    s.f = c_(0.0);
    s.exact = ScalarField::from([a](auto x) { return (exp(a * x[0]) - 1.0) / std::expm1(a); });
    s.methods = {Method::Collocation};
    s.rejected[Method::Ritz] = "the advection-diffusion operator is not self-adjoint and has no Ritz energy (use --method collocation)";
    s.adfs = {AdfKind::Product, AdfKind::Req};
    s.standard_loss = true;
    s.boundary = {point_piece("left", 0.0, op_value(), c_(0.0)), point_piece("right", 1.0, op_value(), c_(1.0))};
    s.defaults.adf = AdfKind::Product;
    s.defaults.hidden = std::move(hidden);
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 1, 0.0, 1.0, cfg.seed);
        return dirichlet_structure(x_(), interval_phi(0.0, 1.0, cfg.adf, cfg.m), net);
    };
    return s;
}

ProblemSpec beam() {
    auto s = interval_problem("beam-moment", "clamped Euler-Bernoulli beam, unit point moment at x = 1/2", 0.0, 1.0);
    s.pde = Pde::Biharmonic;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) {
        auto t = x[0];
        return relu_sq(t - 0.5) / 2.0 + t * t / 8.0 - t * t * t / 4.0;
    });
    s.methods = {Method::Ritz};
    s.rejected[Method::Collocation] =
        "beam-moment has a point moment (derivative of a Dirac delta); it is not possible to solve this problem "
        "using the collocation method (use --method ritz)";
    s.adfs = {AdfKind::Product, AdfKind::Req};
    s.defaults.method = Method::Ritz;
    s.defaults.adf = AdfKind::Product;
    s.defaults.hidden = {50, 50};
    s.defaults.activation = Activation::Repu3;
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 1, 0.0, 1.0, cfg.seed);
        return clamped_plate_structure(interval_phi(0.0, 1.0, cfg.adf, cfg.m), net);
    };
    s.ritz_extras = [](const Config&) {
        return std::vector<PointGroup>{point_functional_group("moment", {0.5}, op_partial(0), 1.0)};
    };
    return s;
}

// Fields shared by the problems posed on a polygon.
ProblemSpec polygon_problem(std::string name, std::string summary, const Polygon& poly, double scale) {
    ProblemSpec s;
    s.name = std::move(name);
    s.summary = std::move(summary);
    s.dim = 2;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& loop : poly.loops()) {
        for (const auto& v : loop) {
            x0 = std::min(x0, v[0]);
            x1 = std::max(x1, v[0]);
            y0 = std::min(y0, v[1]);
            y1 = std::max(y1, v[1]);
            s.interior.vertices.push_back({v[0], v[1]});
        }
    }
    s.domain = "polygon with " + std::to_string(poly.edges().size()) + " edges";
    s.interior.lo = {x0, y0};
    s.interior.hi = {x1, y1};
    s.interior.inside = [poly](std::span<const double> x) { return poly.contains({x[0], x[1]}); };
    s.interior.band = poly.loops().size() == 1 && poly.loops()[0].size() == 4;
    s.measure = poly.area();
    s.collocation_margin = 0.01 * scale;
    s.ritz_margin = 1e-4;
    s.eval_lo = {x0, y0};
    s.eval_hi = {x1, y1};
    const double tol = 1e-12 * scale;
    s.eval_inside = [poly, tol](std::span<const double> x) {
        return poly.contains({x[0], x[1]}) || poly.boundary_distance({x[0], x[1]}) <= tol;
    };
    s.adfs = {AdfKind::Req, AdfKind::Mvp};
    s.standard_loss = true;
    s.defaults.adf = AdfKind::Req;
    s.defaults.hidden = {50, 50};
    s.defaults.n_interior = 5000;
    s.defaults.n_boundary = 400;
    s.defaults.sampling = SampleStrategy::Grid;
    s.defaults.epochs = 5000;
    return s;
}

ProblemSpec heat_square(int k) {
    const auto poly = Polygon::square(-1.0, 1.0);
    auto s = polygon_problem("heat-square-k" + std::to_string(k),
                             "heat conduction -lap u = sin(k pi x) sin(k pi y) on the biunit square, k = " +
                                 std::to_string(k),
                             poly, 2.0);
    const double kp = k * kPi;
    s.domain = "square (-1, 1)^2";
    s.pde = Pde::Poisson;
    s.f = ScalarField::from([kp](auto x) { return sin(kp * x[0]) * sin(kp * x[1]); });
    s.exact = ScalarField::from([kp](auto x) { return sin(kp * x[0]) * sin(kp * x[1]) / (2.0 * kp * kp); });
    s.methods = {Method::Collocation, Method::Ritz};
    s.boundary = polygon_pieces(poly, std::vector<ScalarField>(4, c_(0.0)));
    s.ansatz = [poly](const Config& cfg) {
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        return dirichlet_structure(c_(0.0), polygon_phi(poly, cfg.adf, cfg.m), net);
    };
    return s;
}

ProblemSpec laplace_square() {
    const auto poly = Polygon::square(0.0, 1.0);
    auto s = polygon_problem("laplace-square", "Laplace on the unit square, u = sin(pi x) on y = 1, zero elsewhere",
                             poly, 1.0);
    s.domain = "square (0, 1)^2";
    s.pde = Pde::Poisson;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) { return sin(kPi * x[0]) * 0.5 * (exp(kPi * x[1]) + exp(-kPi * x[1])) / std::cosh(kPi); });
    s.methods = {Method::Collocation, Method::Ritz};
    // square() lists the vertices counterclockwise from (0, 0): bottom, right, top, left
    std::vector<ScalarField> data{c_(0.0), c_(0.0), ScalarField::from([](auto x) { return sin(kPi * x[0]); }), c_(0.0)};
    s.boundary = polygon_pieces(poly, data);
    auto lift = polygon_lift(poly, data);
    s.ansatz = [poly, lift](const Config& cfg) {
        auto net = make_model(cfg, 2, 0.0, 1.0, cfg.seed);
        return dirichlet_structure(lift, polygon_phi(poly, cfg.adf, cfg.m), net);
    };
    return s;
}

// Radius as a field; smooth away from the origin.
ScalarField radius_field() {
    return ScalarField::from([](auto x) { return sqrt(x[0] * x[0] + x[1] * x[1]); });
}

ProblemSpec disk_like(std::string name, std::string summary, double r_in, double r_out) {
    ProblemSpec s;
    s.name = std::move(name);
    s.summary = std::move(summary);
    s.dim = 2;
    s.interior.lo = {-r_out, -r_out};
    s.interior.hi = {r_out, r_out};
    s.interior.inside = [r_in, r_out](std::span<const double> x) {
        const double r = std::hypot(x[0], x[1]);
        return r > r_in && r < r_out;
    };
    // equal-area spiral lattice: point k at area fraction (k + 1/2)/n, golden-angle turns
    s.interior.lattice = [r_in, r_out](int n, double delta) {
        const double a = r_in > 0.0 ? r_in + delta : 0.0, b = r_out - delta;
        if (!(a < b)) throw std::invalid_argument("sampling margin leaves an empty region");
        const double turn = kPi * (3.0 - std::sqrt(5.0));
        Points pts(2, n);
        for (int k = 0; k < n; ++k) {
            const double r = std::sqrt(a * a + (k + 0.5) / n * (b * b - a * a)), t = turn * k;
            pts(0, k) = r * std::cos(t);
            pts(1, k) = r * std::sin(t);
        }
        return pts;
    };
    s.measure = kPi * (r_out * r_out - r_in * r_in);
    s.eval_lo = s.interior.lo;
    s.eval_hi = s.interior.hi;
    s.eval_inside = [r_in, r_out](std::span<const double> x) {
        const double r = std::hypot(x[0], x[1]);
        return r >= r_in && r <= r_out;
    };
    s.adfs = {AdfKind::Exact};
    s.defaults.adf = AdfKind::Exact;
    s.defaults.hidden = {50, 50};
    return s;
}

constexpr double kInner = 0.25;

ProblemSpec annulus_dirichlet() {
    auto s = disk_like("annulus-dirichlet", "Laplace on the annulus 1/4 < r < 1, u = 1 outside, u = 2 inside", kInner, 1.0);
    s.domain = "annulus 1/4 < r < 1";
    s.pde = Pde::Poisson;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) { return 1.0 - 0.5 * log(x[0] * x[0] + x[1] * x[1]) / std::log(4.0); });
    s.methods = {Method::Collocation, Method::Ritz};
    s.standard_loss = true;
    s.boundary = {circle_piece("outer", 1.0, c_(1.0)), circle_piece("inner", kInner, c_(2.0))};
    s.defaults.n_interior = 612;
    s.defaults.n_boundary = 96;
    s.defaults.sampling = SampleStrategy::Halton;
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto r = radius_field();
        auto phi1 = 1.0 - r, phi2 = r - kInner;
        auto g = transfinite_interpolant({{phi1, c_(1.0), 1}, {phi2, c_(2.0), 1}});
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        return dirichlet_structure(g, r_equivalence_join({phi1, phi2}, cfg.m), net);
    };
    return s;
}

ProblemSpec annulus_mixed() {
    auto s = disk_like("annulus-mixed", "Laplace on the annulus, u = 1 on r = 1, du/dn + u = 2 + 4/ln 4 on r = 1/4",
                       kInner, 1.0);
    s.domain = "annulus 1/4 < r < 1";
    s.pde = Pde::Poisson;
    s.f = c_(0.0);
    s.exact = ScalarField::from([](auto x) { return 1.0 - 0.5 * log(x[0] * x[0] + x[1] * x[1]) / std::log(4.0); });
    s.methods = {Method::Collocation, Method::Ritz};
    const double h = 2.0 + 4.0 / std::log(4.0);
    s.defaults.n_interior = 612;
    s.defaults.n_boundary = 96;
    s.defaults.sampling = SampleStrategy::Halton;
    s.defaults.epochs = 10000;
    // at 1e-3 Adam sits on a plateau near loss 15 for thousands of epochs
    s.defaults.lr = 1e-2;
    s.ansatz = [h](const Config& cfg) {
        auto r = radius_field();
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        return mixed_structure_II(c_(1.0), c_(1.0), c_(h), 1.0 - r, r - kInner, net);
    };
    s.ritz_extras = [h](const Config& cfg) {
        BoundaryCurve inner{[](double t) {
                                return std::vector<double>{kInner * std::cos(2 * kPi * t), kInner * std::sin(2 * kPi * t)};
                            },
                            2 * kPi * kInner};
        auto pts = sample_boundary(inner, std::max(cfg.n_boundary, 8), SampleStrategy::Grid, cfg.seed);
        return std::vector<PointGroup>{ritz_robin_group(pts, c_(1.0), c_(h), inner.length)};
    };
    return s;
}

// Boundary data that is 1 at vertex 0 and falls off linearly along its two edges.
std::vector<ScalarField> hat_data(const Polygon& poly) {
    const auto edges = poly.edges();
    const auto n = edges.size();
    std::vector<ScalarField> data(n, c_(0.0));
    auto along = [](const Segment& e, bool from_start) {
        const Vec2 a = e.x1, b = e.x2;
        const double l2 = (b[0] - a[0]) * (b[0] - a[0]) + (b[1] - a[1]) * (b[1] - a[1]);
        return ScalarField::from([a, b, l2, from_start](auto x) {
            auto t = ((x[0] - a[0]) * (b[0] - a[0]) + (x[1] - a[1]) * (b[1] - a[1])) / l2;
            return from_start ? 1.0 - t : t;
        });
    };
    data[0] = along(edges[0], true);
    data[n - 1] = along(edges[n - 1], false);
    return data;
}

ProblemSpec harmonic(std::string name, std::string summary, const Polygon& poly, std::optional<ScalarField> exact) {
    auto s = polygon_problem(std::move(name), std::move(summary), poly, poly.diameter() / std::sqrt(2.0));
    s.pde = Pde::Poisson;
    s.f = c_(0.0);
    s.exact = std::move(exact);
    s.methods = {Method::Ritz, Method::Collocation};
    s.defaults.method = Method::Ritz;
    s.defaults.activation = Activation::Tanh;
    s.defaults.n_interior = 2000;
    s.defaults.sampling = SampleStrategy::Halton;
    const auto data = hat_data(poly);
    s.boundary = polygon_pieces(poly, data);
    auto lift = polygon_lift(poly, data);
    s.ansatz = [poly, lift](const Config& cfg) {
        auto net = make_model(cfg, 2, 0.0, 1.0, cfg.seed);
        return dirichlet_structure(lift, polygon_phi(poly, cfg.adf, cfg.m), net);
    };
    return s;
}

ProblemSpec plate() {
    auto s = disk_like("plate-clamped-disk", "clamped Kirchhoff plate on the unit disk, lap^2 u = 1", 0.0, 1.0);
    s.domain = "unit disk";
    s.pde = Pde::Biharmonic;
    s.f = c_(1.0);
    s.exact = ScalarField::from([](auto x) {
        auto q = 1.0 - (x[0] * x[0] + x[1] * x[1]);
        return q * q / 64.0;
    });
    s.methods = {Method::Ritz, Method::Collocation};
    s.defaults.method = Method::Ritz;
    s.defaults.activation = Activation::Repu3;
    s.defaults.n_interior = 2800;
    s.defaults.sampling = SampleStrategy::Grid;
    s.defaults.epochs = 10000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        return clamped_plate_structure(circle_adf({0.0, 0.0}, 1.0), net);
    };
    return s;
}

// Embedding box (-1, 1)^2 for the interface problems.
ProblemSpec eikonal_problem(std::string name, std::string summary) {
    ProblemSpec s;
    s.name = std::move(name);
    s.summary = std::move(summary);
    s.dim = 2;
    s.pde = Pde::Eikonal;
    s.f = c_(1.0);
    s.interior = SamplingDomain::box({-1.0, -1.0}, {1.0, 1.0});
    s.measure = 4.0;
    s.eval_lo = {-1.0, -1.0};
    s.eval_hi = {1.0, 1.0};
    s.methods = {Method::Eikonal};
    s.adfs = {AdfKind::Req, AdfKind::Mvp};
    s.defaults.method = Method::Eikonal;
    s.defaults.adf = AdfKind::Req;
    s.defaults.activation = Activation::Repu3;
    s.defaults.n_interior = 10000;
    s.defaults.n_boundary = 400;
    s.defaults.sampling = SampleStrategy::Grid;
    s.defaults.epochs = 5000;
    return s;
}

ProblemSpec eikonal_square() {
    auto s = eikonal_problem("eikonal-square", "signed distance to the boundary of (-1/2, 1/2)^2 in (-1, 1)^2");
    s.domain = "interface square (-1/2, 1/2)^2 in (-1, 1)^2";
    // negative inside the interface
    s.exact = ScalarField::from([](auto x) {
        using T = std::decay_t<decltype(x[0])>;
        const T X = value_of(x[0]) >= 0.0 ? T(x[0]) : T(-x[0]);
        const T Y = value_of(x[1]) >= 0.0 ? T(x[1]) : T(-x[1]);
        const bool ox = value_of(X) > 0.5, oy = value_of(Y) > 0.5;
        if (ox && oy) return T(sqrt((X - 0.5) * (X - 0.5) + (Y - 0.5) * (Y - 0.5)));
        if (ox) return T(X - 0.5);
        if (oy) return T(Y - 0.5);
        return value_of(X) > value_of(Y) ? T(X - 0.5) : T(Y - 0.5);
    });
    const auto poly = Polygon::square(-0.5, 0.5);
    s.standard_loss = true;
    s.boundary = polygon_pieces(poly, std::vector<ScalarField>(4, c_(0.0)));
    s.defaults.hidden = {30, 30, 30};
    // the kinks of the exact field along the diagonals sharpen slowly at 1e-3
    s.defaults.lr = 1e-2;
    s.defaults.epochs = 3000;
    s.ansatz = [poly](const Config& cfg) {
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        auto phi = polygon_phi(poly, cfg.adf, cfg.m);
        if (cfg.adf == AdfKind::Req) {
            // the R-equivalence ADF is positive on both sides; flip it outside
            // to match the sign convention of the MVP field
            auto side = ScalarField::from([poly](auto x) {
                return x[0] * 0.0 + (poly.contains({value_of(x[0]), value_of(x[1])}) ? 1.0 : -1.0);
            });
            phi = side * phi;
        }
        return dirichlet_structure(c_(0.0), phi, net);
    };
    return s;
}

// Signed distance to the ellipse (x/a)^2 + (y/b)^2 = 1, negative inside.
double ellipse_signed_distance(double a, double b, double x, double y) {
    const double px = std::abs(x), py = std::abs(y);
    auto d2 = [&](double t) {
        const double dx = a * std::cos(t) - px, dy = b * std::sin(t) - py;
        return dx * dx + dy * dy;
    };
    const int n = 512;
    int best = 0;
    for (int i = 1; i <= n; ++i) {
        if (d2(0.5 * kPi * i / n) < d2(0.5 * kPi * best / n)) best = i;
    }
    double lo = 0.5 * kPi * std::max(best - 1, 0) / n, hi = 0.5 * kPi * std::min(best + 1, n) / n;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
        if (d2(c) < d2(d)) hi = d;
        else lo = c;
    }
    const double dist = std::sqrt(d2(0.5 * (lo + hi)));
    return (px * px) / (a * a) + (py * py) / (b * b) < 1.0 ? -dist : dist;
}

constexpr double kEllA = 0.25, kEllB = 0.15;

ProblemSpec eikonal_ellipse() {
    auto s = eikonal_problem("eikonal-ellipse", "signed distance to an ellipse with semi-axes 0.25 and 0.15");
    s.domain = "interface ellipse (semi-axes 0.25, 0.15) in (-1, 1)^2";
    s.exact = ScalarField::from(
        [](auto x) { return ellipse_signed_distance(kEllA, kEllB, value_of(x[0]), value_of(x[1])); });
    s.exact_numeric = true;
    s.defaults.hidden = {50, 50};
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 2, -1.0, 1.0, cfg.seed);
        ScalarField phi;
        if (cfg.adf == AdfKind::Mvp) {
            phi = mvp_curve_adf(ParametricCurve::ellipse(kEllA, kEllB), cfg.p);
        } else {
            auto x = x_(), y = y_();
            phi = first_order_normalize(1.0 - x * x / (kEllA * kEllA) - y * y / (kEllB * kEllB));
        }
        return dirichlet_structure(c_(0.0), phi, net);
    };
    return s;
}

ProblemSpec poisson_4d() {
    ProblemSpec s;
    s.name = "poisson-4d";
    s.summary = "Poisson -lap u = prod sin(pi x_i) on (-1, 1)^4";
    s.domain = "hypercube (-1, 1)^4";
    s.dim = 4;
    s.pde = Pde::Poisson;
    auto prod = [](auto x) { return sin(kPi * x[0]) * sin(kPi * x[1]) * sin(kPi * x[2]) * sin(kPi * x[3]); };
    s.f = ScalarField::from(prod);
    s.exact = ScalarField::from([prod](auto x) { return prod(x) / (4.0 * kPi * kPi); });
    s.interior = SamplingDomain::box({-1, -1, -1, -1}, {1, 1, 1, 1});
    s.measure = 16.0;
    s.collocation_margin = 0.02;
    s.ritz_margin = 1e-4;
    s.eval_lo = s.interior.lo;
    s.eval_hi = s.interior.hi;
    s.methods = {Method::Collocation, Method::Ritz};
    s.adfs = {AdfKind::Req, AdfKind::Product};
    s.defaults.adf = AdfKind::Req;
    s.defaults.hidden = {100, 100};
    s.defaults.n_interior = 5000;
    s.defaults.sampling = SampleStrategy::Grid;
    s.defaults.epochs = 12000;
    s.eval_samples = 5000;
    s.ansatz = [](const Config& cfg) {
        auto net = make_model(cfg, 4, -1.0, 1.0, cfg.seed);
        ScalarField phi;
        if (cfg.adf == AdfKind::Product) {
            phi = ScalarField::from([](auto x) {
                return (1.0 - x[0] * x[0]) * (1.0 - x[1] * x[1]) * (1.0 - x[2] * x[2]) * (1.0 - x[3] * x[3]);
            });
        } else {
            phi = hypercube_adf(4, cfg.m);
        }
        return dirichlet_structure(c_(0.0), phi, net);
    };
    return s;
}

std::vector<ProblemSpec> make_registry() {
    const Polygon lshape({{{0.0, 0.0}, {1.0, 0.0}, {1.0, 0.5}, {0.5, 0.5}, {0.5, 1.0}, {0.0, 1.0}}});
    std::vector<ProblemSpec> r;
    r.push_back(rod_ex1());
    r.push_back(rod_ex2());
    r.push_back(rod_ex3(1, {30, 30}));
    r.push_back(rod_ex3(3, {100, 100}));
    r.push_back(rod_ex3(5, {100, 100}));
    r.push_back(rod_ex4());
    r.push_back(rod_ex5());
    r.push_back(rod_ex6());
    r.push_back(rod_ex7());
    r.push_back(rod_eigen());
    r.push_back(advection_diffusion(1, {50, 50}));
    r.push_back(advection_diffusion(5, {50, 50}));
    r.push_back(advection_diffusion(10, {50, 50}));
    r.push_back(advection_diffusion(50, {50, 50, 50}));
    r.push_back(beam());
    r.push_back(heat_square(1));
    r.push_back(heat_square(2));
    r.push_back(laplace_square());
    r.push_back(annulus_dirichlet());
    r.push_back(annulus_mixed());
    r.push_back(harmonic("harmonic-square", "harmonic coordinate of vertex (0, 0) on the unit square",
                         Polygon::square(0.0, 1.0),
                         ScalarField::from([](auto x) { return (1.0 - x[0]) * (1.0 - x[1]); })));
    auto lsh = harmonic("harmonic-lshape", "harmonic coordinate of vertex (0, 0) on an L-shaped hexagon", lshape,
                        std::nullopt);
    lsh.domain = "L-shaped polygon";
    r.push_back(lsh);
    r.push_back(plate());
    r.push_back(eikonal_square());
    r.push_back(eikonal_ellipse());
    r.push_back(poisson_4d());
    return r;
}

}  // namespace

const std::vector<ProblemSpec>& registry() {
    static const std::vector<ProblemSpec> r = make_registry();
    return r;
}

const ProblemSpec& find_problem(const std::string& name) {
    for (const auto& p : registry()) {
        if (p.name == name) return p;
    }
    throw std::invalid_argument("unknown problem: " + name + " (see `list`)");
}

}  // namespace adfnn::bench
