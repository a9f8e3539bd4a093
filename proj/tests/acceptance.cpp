// End-to-end acceptance runs. `acceptance` runs every criterion;
// `acceptance 3 7` runs a subset. One PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "adfnn/bench.hpp"
#include "adfnn/network.hpp"
#include "geometry_cases.hpp"

using namespace adfnn;
using namespace adfnn::bench;

namespace {

const double kPi = std::numbers::pi;

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string& what) {
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + what + (ok ? "" : " [FAIL]");
    }
};

std::string num(double v) { return fmt::format("{:.3g}", v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double value_at(const ScalarField& u, std::vector<double> x) { return u(std::span<const double>(x)); }

double op_at(const ScalarField& u, const std::vector<double>& x, const DiffOp& op) {
    const Jet j = taylor(u, x, layout_for(static_cast<int>(x.size()), {op}));
    return apply_op(op, j);
}

// Largest |op u - data| over `n` samples spread across the pieces.
double boundary_defect(const ProblemSpec& spec, const ScalarField& u, int n) {
    double worst = 0.0;
    const int per = (n + static_cast<int>(spec.boundary.size()) - 1) / static_cast<int>(spec.boundary.size());
    for (const auto& piece : spec.boundary) {
        const Points pts = piece.sample(std::max(per, piece.min_points), 7);
        for (Eigen::Index p = 0; p < pts.cols(); ++p) {
            std::vector<double> x(pts.col(p).data(), pts.col(p).data() + pts.rows());
            worst = std::max(worst, std::abs(op_at(u, x, piece.op) - piece.data(std::span<const double>(x))));
        }
    }
    return worst;
}

Points circle_points(double r, int n) {
    Points pts(2, n);
    for (int i = 0; i < n; ++i) {
        pts(0, i) = r * std::cos(2 * kPi * (i + 0.5) / n);
        pts(1, i) = r * std::sin(2 * kPi * (i + 0.5) / n);
    }
    return pts;
}

RunResult solve(const std::string& name, Overrides ov) {
    ov.trace_every = ov.trace_every.value_or(1000);
    return run(name, ov);
}

double err(const RunResult& r) { return r.metrics.at("normalized_l2_error"); }

// ---- 1: geometry ----

Outcome geometry_suite() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<std::pair<std::string, Polygon>> polys{{"square", Polygon::square(0, 1)},
                                                             {"L-shape", testgeo::l_shape()},
                                                             {"hexagon", Polygon::regular(6, 1.0)},
                                                             {"20-gon", Polygon::regular(20, 1.0)}};
    for (const auto& [name, poly] : polys) {
        const auto req = polygon_adf_req(poly, 1);
        const auto mvp = mvp_polygon_adf(poly);
        double diameter = 0.0;
        for (const auto& a : poly.loops()[0])
            for (const auto& b : poly.loops()[0]) diameter = std::max(diameter, std::hypot(a[0] - b[0], a[1] - b[1]));
        double zero_req = 0.0, zero_mvp = 0.0, slope_req = 0.0, slope_mvp = 0.0;
        int regular = 0;
        for (const auto& b : testgeo::boundary_samples(poly, 400)) {
            zero_req = std::max(zero_req, std::abs(req({b.p[0], b.p[1]})));
            zero_mvp = std::max(zero_mvp, std::abs(mvp({b.p[0], b.p[1]})));
            if (b.vertex_gap < 0.05 * diameter) continue;
            ++regular;
            slope_req = std::max(slope_req, std::abs(testgeo::normal_derivative(req, b.p, b.inward) - 1.0));
            slope_mvp = std::max(slope_mvp, std::abs(testgeo::normal_derivative(mvp, b.p, b.inward) - 1.0));
        }
        o.check(regular >= 50 && zero_req <= 1e-10 && zero_mvp == 0.0 && slope_req <= 1e-3 && slope_mvp <= 1e-2,
                fmt::format("{}: {} regular pts, |req|<={}, |mvp|<={}, slope dev req {} mvp {}", name, regular,
                            num(zero_req), num(zero_mvp), num(slope_req), num(slope_mvp)));
    }
    const double t = seconds_since(t0);
    o.check(t < 10.0, fmt::format("{:.1f} s", t));
    return o;
}

// ---- 2: autodiff ----

// Independent tanh MLP in extended precision as the finite-difference oracle.
long double eval_long(const Mlp& m, long double x, long double y) {
    const auto& w = m.widths();
    const auto th = m.params();
    std::vector<long double> a{x, y};
    std::size_t pos = 0;
    for (std::size_t l = 1; l < w.size(); ++l) {
        const auto rows = static_cast<std::size_t>(w[l]), cols = static_cast<std::size_t>(w[l - 1]);
        std::vector<long double> z(rows);
        const std::size_t bias = pos + rows * cols;
        for (std::size_t i = 0; i < rows; ++i) {
            long double s = th[bias + i];
            for (std::size_t j = 0; j < cols; ++j) s += th[pos + i * cols + j] * a[j];
            z[i] = l + 1 < w.size() ? std::tanh(s) : s;
        }
        pos = bias + rows;
        a = std::move(z);
    }
    return a[0];
}

double fd_directional(const Mlp& m, double x, double y, double vx, double vy, int k, long double h) {
    auto f = [&](long double t) { return eval_long(m, x + t * vx, y + t * vy); };
    if (k == 1) return static_cast<double>((f(h) - f(-h)) / (2 * h));
    if (k == 2) return static_cast<double>((f(h) - 2 * f(0) + f(-h)) / (h * h));
    return static_cast<double>((-f(-3 * h) + 12 * f(-2 * h) - 39 * f(-h) + 56 * f(0) - 39 * f(h) + 12 * f(2 * h) -
                                f(3 * h)) /
                               (6 * h * h * h * h));
}

double jet_directional(const Jet& j, double vx, double vy, int k) {
    double s = 0.0;
    const Layout& L = j.layout();
    for (int i = 0; i < L.size(); ++i) {
        const auto& a = L.index(i);
        if (degree(a) != k) continue;
        s += j[i] * std::pow(vx, a[0]) * std::pow(vy, a[1]);
    }
    return s * std::tgamma(k + 1.0);
}

double laplacian_loss(const Model& m, const Mat<double>& X, std::vector<double>* grad) {
    const Layout& L = Layout::axes(2, 2);
    const auto w = weights(op_laplacian(2), L);
    ParamTape<double> tape;
    Mat<double> out;
    m.forward_batch(L, X, out, grad ? &tape : nullptr);
    Mat<double> dout = Mat<double>::Zero(out.rows(), out.cols());
    double s = 0.0;
    for (Eigen::Index p = 0; p < X.cols(); ++p) {
        double lap = 0.0;
        for (int k = 0; k < L.size(); ++k) lap += w[static_cast<std::size_t>(k)] * out(k, p);
        const double r = lap - std::sin(X(0, p));
        s += 0.5 * r * r;
        for (int k = 0; k < L.size(); ++k) dout(k, p) = r * w[static_cast<std::size_t>(k)];
    }
    if (grad) {
        grad->assign(m.num_params(), 0.0);
        m.backward_batch(tape, dout, *grad);
    }
    return s;
}

Outcome autodiff_suite() {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Layout& L = Layout::total(2, 4);
    double worst[5] = {};
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<int> widths = trial % 2 ? std::vector<int>{2, 12, 12, 1} : std::vector<int>{2, 16, 1};
        Mlp net = Mlp::init(widths, Activation::Tanh, 500 + trial);
        for (auto& p : net.params()) p += 0.1 * u(rng);
        const double x = u(rng), y = u(rng);
        const double pt[2] = {x, y};
        const Jet j = net.forward(std::span<const Jet>(seed(L, pt)));
        for (auto [vx, vy] : {std::pair{1.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.6, 0.8}}) {
            for (int k : {1, 2, 4}) {
                const double fd = fd_directional(net, x, y, vx, vy, k, k <= 2 ? 1e-4 : 1e-2);
                worst[k] = std::max(worst[k], std::abs(jet_directional(j, vx, vy, k) - fd) / std::max(std::abs(fd), 1e-2));
            }
        }
    }
    o.check(worst[1] <= 1e-6 && worst[2] <= 1e-6 && worst[4] <= 1e-4,
            fmt::format("20 nets, rel err k=1 {} k=2 {} k=4 {}", num(worst[1]), num(worst[2]), num(worst[4])));

    Mlp m = Mlp::init({2, 12, 12, 1}, Activation::Tanh, 77);
    for (auto& p : m.params()) p += 0.1 * u(rng);
    Mat<double> X(2, 6);
    for (Eigen::Index p = 0; p < X.cols(); ++p) X(0, p) = u(rng), X(1, p) = u(rng);
    std::vector<double> g;
    laplacian_loss(m, X, &g);
    double num_err = 0.0, den = 0.0;
    auto th = m.params();
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double t = th[i], h = 1e-4;
        th[i] = t + h;
        const double fp = laplacian_loss(m, X, nullptr);
        th[i] = t - h;
        const double fm = laplacian_loss(m, X, nullptr);
        th[i] = t;
        num_err = std::max(num_err, std::abs(g[i] - (fp - fm) / (2 * h)));
        den = std::max(den, std::abs((fp - fm) / (2 * h)));
    }
    o.check(num_err / den <= 1e-5, fmt::format("laplacian-loss theta gradient rel err {}", num(num_err / den)));
    const double t = seconds_since(t0);
    o.check(t < 30.0, fmt::format("{:.1f} s", t));
    return o;
}

// ---- 3-8: one-dimensional rods, eigenproblem, advection-diffusion, plate ----

Outcome rod_ex1() {
    Outcome o;
    Overrides ov;
    ov.epochs = 10000;
    ov.n_interior = 100;
    const auto r = solve("rod-ex1", ov);
    o.check(err(r) <= 1e-2, "normalized L2 error " + num(err(r)));
    return o;
}

Outcome rod_ex2() {
    Outcome o;
    Overrides ov;
    ov.epochs = 10000;
    ov.hidden = std::vector<int>{50, 50};
    const auto r = solve("rod-ex2", ov);
    o.check(err(r) <= 1e-2, "normalized L2 error " + num(err(r)));
    const double u0 = std::abs(value_at(r.ansatz.field, {0.0}) - 0.5);
    o.check(u0 <= 1e-6, "|u(0) - 1/2| " + num(u0));
    const double h = 1e-5;
    const double du = (3 * value_at(r.ansatz.field, {1.0}) - 4 * value_at(r.ansatz.field, {1.0 - h}) +
                       value_at(r.ansatz.field, {1.0 - 2 * h})) /
                      (2 * h);
    o.check(std::abs(du) <= 1e-6, "FD u'(1) " + num(du));
    return o;
}

Outcome rod_point_load() {
    Outcome o;
    Overrides ov;
    ov.method = Method::Ritz;
    const auto r = solve("rod-ex5", ov);
    const double e = r.metrics.at("energy");
    o.check(std::abs(e + 0.5) <= 0.02 * 0.5, "energy " + num(e));
    o.check(err(r) <= 1e-2, "normalized L2 error " + num(err(r)));
    return o;
}

Outcome rod_eigen() {
    Outcome o;
    Overrides ov;
    ov.epochs = 10000;
    const auto r = solve("rod-eigen", ov);
    const double w = r.metrics.at("omega");
    o.check(std::abs(w - kPi) <= 1e-2, fmt::format("omega {:.8f}, |omega - pi| {}", w, num(std::abs(w - kPi))));
    return o;
}

Outcome advection_diffusion() {
    Outcome o;
    for (int a : {1, 5, 10}) {
        const auto r = solve(fmt::format("advdiff-a{}", a), {});
        o.check(err(r) <= 1e-2, fmt::format("alpha {}: error {}", a, num(err(r))));
    }
    return o;
}

Outcome clamped_plate() {
    Outcome o;
    Overrides ov;
    ov.n_interior = 2800;
    ov.single_precision = true;
    ov.method = Method::Ritz;
    ov.epochs = 3000;
    const auto ritz = solve("plate-clamped-disk", ov);
    o.check(ritz.max_error <= 1e-4, "ritz max abs error " + num(ritz.max_error));
    ov.method = Method::Collocation;
    ov.epochs = 1000;
    const auto coll = solve("plate-clamped-disk", ov);
    o.check(coll.max_error <= 1e-4, "collocation max abs error " + num(coll.max_error));
    return o;
}

// ---- 9-13: two and four dimensions ----

Outcome heat_square() {
    Outcome o;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        Overrides ov;
        ov.seed = seed;
        ov.epochs = 2000;
        ov.single_precision = true;
        ov.adf = AdfKind::Req;
        const double req = err(solve("heat-square-k1", ov));
        ov.adf = AdfKind::Mvp;
        const double mvp = err(solve("heat-square-k1", ov));
        ov.adf.reset();
        ov.loss = LossKind::Standard;
        const double pinn = err(solve("heat-square-k1", ov));
        o.check(req <= 5e-2 && mvp <= 5e-2 && req < pinn && mvp < pinn,
                fmt::format("seed {}: req {} mvp {} standard {}", seed, num(req), num(mvp), num(pinn)));
    }
    return o;
}

Outcome annulus() {
    Outcome o;
    Overrides ov;
    ov.single_precision = true;
    ov.epochs = 3000;
    const auto dir = solve("annulus-dirichlet", ov);
    o.check(err(dir) <= 2e-2, "dirichlet error " + num(err(dir)));
    const double bd = boundary_defect(find_problem("annulus-dirichlet"), dir.ansatz.field, 200);
    o.check(bd <= 1e-10, "dirichlet boundary defect " + num(bd));

    ov.epochs = 6000;
    const auto mix = solve("annulus-mixed", ov);
    o.check(err(mix) <= 2e-2, "mixed error " + num(err(mix)));
    const double h = 2.0 + 4.0 / std::log(4.0);
    double outer = 0.0, robin = 0.0;
    const Points po = circle_points(1.0, 100), pi = circle_points(0.25, 100);
    for (Eigen::Index p = 0; p < po.cols(); ++p) {
        outer = std::max(outer, std::abs(value_at(mix.ansatz.field, {po(0, p), po(1, p)}) - 1.0));
        // outward normal of the domain on the inner circle points to the origin
        const std::vector<double> x{pi(0, p), pi(1, p)};
        const DiffOp dn = (-4.0 * x[0]) * op_partial(0) + (-4.0 * x[1]) * op_partial(1);
        robin = std::max(robin, std::abs(op_at(mix.ansatz.field, x, dn + op_value()) - h));
    }
    o.check(outer <= 1e-10, "mixed |u - 1| on r=1 " + num(outer));
    o.check(robin <= 1e-8, "mixed Robin residual on r=1/4 " + num(robin));
    return o;
}

Outcome eikonal_square() {
    Outcome o;
    const auto& spec = find_problem("eikonal-square");
    for (AdfKind a : {AdfKind::Req, AdfKind::Mvp}) {
        Overrides ov;
        ov.adf = a;
        ov.single_precision = true;
        const auto r = solve("eikonal-square", ov);
        o.check(r.max_error <= 0.05, adf_name(a) + " L-inf error " + num(r.max_error));
        const double bd = boundary_defect(spec, r.ansatz.field, 400);
        o.check(bd <= 1e-10, adf_name(a) + " |u| on interface " + num(bd));
    }
    return o;
}

Outcome poisson_4d() {
    Outcome o;
    Overrides ov;
    ov.single_precision = true;
    auto t0 = std::chrono::steady_clock::now();
    ov.adf = AdfKind::Req;
    const auto req = solve("poisson-4d", ov);
    const double t_req = seconds_since(t0);
    o.check(err(req) <= 3e-2, fmt::format("req error {} in {:.0f} s", num(err(req)), t_req));
    o.check(t_req <= 1200.0, "req runtime <= 20 min");
    t0 = std::chrono::steady_clock::now();
    ov.adf = AdfKind::Product;
    ov.epochs = 5000;
    const auto prod = solve("poisson-4d", ov);
    o.detail += fmt::format("; product error {} after 5000 epochs in {:.0f} s (recorded)", num(err(prod)),
                            seconds_since(t0));
    return o;
}

Outcome harmonic_lshape() {
    Outcome o;
    Overrides ov;
    ov.single_precision = true;
    ov.epochs = 2000;
    const auto& spec = find_problem("harmonic-lshape");
    const auto r = solve("harmonic-lshape", ov);
    const double bd = boundary_defect(spec, r.ansatz.field, 500);
    o.check(bd <= 1e-10, "hat data defect at 500 samples " + num(bd));
    const double lo = r.u_pred.minCoeff(), hi = r.u_pred.maxCoeff();
    o.check(lo >= -0.05 && hi <= 1.05, fmt::format("range [{}, {}] over {} grid points", num(lo), num(hi), r.u_pred.size()));
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"geometry suite", geometry_suite},
        {"autodiff suite", autodiff_suite},
        {"rod example 1", rod_ex1},
        {"rod example 2, mixed BC", rod_ex2},
        {"rod point load, Ritz", rod_point_load},
        {"rod eigenproblem", rod_eigen},
        {"advection-diffusion", advection_diffusion},
        {"clamped circular plate", clamped_plate},
        {"heat equation k=1", heat_square},
        {"annulus Laplace", annulus},
        {"Eikonal square", eikonal_square},
        {"4D Poisson", poisson_4d},
        {"L-shape harmonic coordinate", harmonic_lshape},
    };
    std::vector<int> which;
    for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
    if (which.empty())
        for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);

    bool all = true;
    for (int id : which) {
        if (id < 1 || id > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion %d\n", id);
            return 2;
        }
        const auto& [name, fn] = criteria[static_cast<std::size_t>(id - 1)];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        all = all && o.pass;
        std::printf("criterion %2d %s: %s (%.0f s) %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(),
                    seconds_since(t0), o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
