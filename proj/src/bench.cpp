#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "adfnn/bench.hpp"

namespace adfnn::bench {

Method parse_method(const std::string& s) {
    if (s == "collocation") return Method::Collocation;
    if (s == "ritz") return Method::Ritz;
    if (s == "eigen") return Method::Eigen;
    if (s == "eikonal") return Method::Eikonal;
    throw std::invalid_argument("unknown method: " + s);
}

AdfKind parse_adf(const std::string& s) {
    if (s == "req") return AdfKind::Req;
    if (s == "mvp") return AdfKind::Mvp;
    if (s == "exact") return AdfKind::Exact;
    if (s == "product") return AdfKind::Product;
    throw std::invalid_argument("unknown adf: " + s);
}

LossKind parse_loss(const std::string& s) {
    if (s == "exactbc") return LossKind::ExactBc;
    if (s == "standard") return LossKind::Standard;
    throw std::invalid_argument("unknown loss: " + s);
}

std::string method_name(Method m) {
    switch (m) {
        case Method::Collocation: return "collocation";
        case Method::Ritz: return "ritz";
        case Method::Eigen: return "eigen";
        case Method::Eikonal: return "eikonal";
    }
    return "?";
}

std::string adf_name(AdfKind a) {
    switch (a) {
        case AdfKind::Req: return "req";
        case AdfKind::Mvp: return "mvp";
        case AdfKind::Exact: return "exact";
        case AdfKind::Product: return "product";
    }
    return "?";
}

std::string loss_name(LossKind l) { return l == LossKind::Standard ? "standard" : "exactbc"; }

namespace {

template <class T, class F>
std::string join(const std::vector<T>& v, F name) {
    std::string out;
    for (const auto& x : v) out += (out.empty() ? "" : ", ") + name(x);
    return out;
}

template <class T>
bool contains(const std::vector<T>& v, const T& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

DiffOp residual_op(const ProblemSpec& spec) {
    switch (spec.pde) {
        case Pde::Poisson: return -1.0 * op_laplacian(spec.dim);
        case Pde::AdvectionDiffusion: return op_partial(0, 2) + (-spec.alpha) * op_partial(0);
        case Pde::Biharmonic: return spec.dim == 1 ? op_partial(0, 4) : op_biharmonic2d();
        case Pde::Eigen: return op_partial(0, 2) + (std::numbers::pi * std::numbers::pi) * op_value();
        case Pde::Eikonal: break;
    }
    throw std::logic_error("no linear residual operator for this problem");
}

}  // namespace

Config resolve(const ProblemSpec& spec, const Overrides& ov) {
    Config c = spec.defaults;
    if (ov.method) c.method = *ov.method;
    if (ov.adf) c.adf = *ov.adf;
    if (ov.m) c.m = *ov.m;
    if (ov.p) c.p = *ov.p;
    if (ov.hidden) c.hidden = *ov.hidden;
    if (ov.activation) c.activation = *ov.activation;
    if (ov.epochs) c.epochs = *ov.epochs;
    if (ov.lr) c.lr = *ov.lr;
    if (ov.seed) c.seed = *ov.seed;
    if (ov.n_interior) c.n_interior = *ov.n_interior;
    if (ov.n_boundary) c.n_boundary = *ov.n_boundary;
    if (ov.sampling) c.sampling = *ov.sampling;
    if (ov.loss) c.loss = *ov.loss;
    if (ov.loss_weight) c.loss_weight = *ov.loss_weight;
    if (ov.single_precision) c.single_precision = *ov.single_precision;
    if (ov.trace_every) c.trace_every = *ov.trace_every;
    if (ov.eval_per_axis) c.eval_per_axis = *ov.eval_per_axis;
    c.delta_margin = ov.delta_margin ? *ov.delta_margin
                     : c.method == Method::Ritz ? spec.ritz_margin
                                                 : spec.collocation_margin;

    const std::string& n = spec.name;
    if (!contains(spec.methods, c.method)) {
        auto it = spec.rejected.find(c.method);
        if (it != spec.rejected.end()) throw std::invalid_argument(it->second);
        throw std::invalid_argument(n + " does not support method " + method_name(c.method) + " (supported: " +
                                    join(spec.methods, method_name) + ")");
    }
    if (!contains(spec.adfs, c.adf)) {
        throw std::invalid_argument(n + " does not support adf " + adf_name(c.adf) + " (supported: " +
                                    join(spec.adfs, adf_name) + ")");
    }
    if (c.loss == LossKind::Standard && !spec.standard_loss) {
        throw std::invalid_argument(n + " has no standard (boundary penalty) formulation");
    }
    if (ov.loss_weight && c.loss != LossKind::Standard) {
        throw std::invalid_argument("--loss-weight applies only to --loss standard");
    }
    if (ov.loss_weight && !(c.loss_weight >= 0.0 && c.loss_weight <= 1.0)) {
        throw std::invalid_argument("loss weight must lie in [0, 1]");
    }
    const bool second_order = spec.pde != Pde::Eikonal && spec.pde != Pde::Eigen;
    if (c.activation == Activation::Relu && second_order &&
        (c.method == Method::Collocation || spec.pde == Pde::Biharmonic)) {
        throw std::invalid_argument(
            "relu has a zero second derivative almost everywhere, so the residual of a second- or higher-order "
            "operator does not see the network; use tanh or repu3");
    }
    if (c.activation == Activation::Repu3 && spec.pde == Pde::Biharmonic && c.method == Method::Collocation &&
        c.loss == LossKind::Standard) {
        throw std::invalid_argument("a bare repu3 network is piecewise biharmonic; use tanh for standard plate collocation");
    }
    if (c.hidden.empty() || std::any_of(c.hidden.begin(), c.hidden.end(), [](int w) { return w < 1; })) {
        throw std::invalid_argument("architecture needs at least one hidden layer of positive width");
    }
    if (c.activation == Activation::Gaussian && spec.dim == 1 && c.hidden.size() != 1) {
        throw std::invalid_argument("the Gaussian RBF network has exactly one hidden layer");
    }
    if (c.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    if (!(c.lr >= 0.0)) throw std::invalid_argument("learning rate must be >= 0");
    if (c.m < 1) throw std::invalid_argument("--m must be >= 1");
    if (c.p < 1) throw std::invalid_argument("--p must be >= 1");
    if (c.n_interior < 1) throw std::invalid_argument("--n-interior must be >= 1");
    if (c.n_boundary < 0) throw std::invalid_argument("--n-boundary must be >= 0");
    if (c.delta_margin < 0.0) throw std::invalid_argument("--delta-margin must be >= 0");
    if (c.trace_every < 1) throw std::invalid_argument("trace interval must be >= 1");
    if (c.eval_per_axis < 2) throw std::invalid_argument("evaluation grid needs >= 2 points per axis");
    return c;
}

double pde_residual(const ProblemSpec& spec, const ScalarField& u, std::span<const double> x) {
    const int d = spec.dim;
    if (spec.pde == Pde::Eikonal) {
        std::vector<DiffOp> ops;
        for (int i = 0; i < d; ++i) ops.push_back(op_partial(i));
        const Jet j = taylor(u, x, layout_for(d, ops));
        double s = 0.0;
        for (const auto& op : ops) s += apply_op(op, j) * apply_op(op, j);
        return std::sqrt(s) - spec.f(x);
    }
    const DiffOp op = residual_op(spec);
    const Jet j = taylor(u, x, layout_for(d, {op}));
    return apply_op(op, j) - spec.f(x);
}

Setup build(const ProblemSpec& spec, const Config& cfg) {
    Setup s;
    s.interior = sample_interior(spec.interior, cfg.n_interior, cfg.sampling, cfg.delta_margin, cfg.seed + 1);
    const bool standard = cfg.loss == LossKind::Standard;
    if (standard) {
        s.ansatz = plain_structure(make_network(cfg, spec.dim, spec.interior.lo[0], spec.interior.hi[0], cfg.seed));
    } else {
        s.ansatz = spec.ansatz(cfg);
    }
    double wi = 1.0, wb = 1.0;
    if (standard && cfg.loss_weight >= 0.0) {
        wi = cfg.loss_weight;
        wb = 1.0 - cfg.loss_weight;
    }

    switch (cfg.method) {
        case Method::Collocation:
            s.groups.push_back(residual_group("interior", s.interior, residual_op(spec), spec.f, wi));
            break;
        case Method::Ritz:
            if (spec.pde == Pde::Biharmonic) {
                s.groups.push_back(ritz_plate_group(s.interior, spec.f, spec.measure));
            } else {
                s.groups.push_back(ritz_poisson_group(s.interior, spec.f, spec.measure));
            }
            if (spec.ritz_extras) {
                for (auto& g : spec.ritz_extras(cfg)) s.groups.push_back(std::move(g));
            }
            for (auto& g : s.groups) g.weight *= wi;
            break;
        case Method::Eigen:
            s.groups.push_back(rayleigh_group(s.interior));
            s.groups.back().weight = wi;
            break;
        case Method::Eikonal:
            s.groups.push_back(eikonal_group(s.interior));
            s.groups.back().weight = wi;
            break;
    }

    if (standard) {
        const int pieces = static_cast<int>(spec.boundary.size());
        for (int i = 0; i < pieces; ++i) {
            const auto& piece = spec.boundary[static_cast<std::size_t>(i)];
            const int n = std::max(piece.min_points, cfg.n_boundary / std::max(pieces, 1));
            Points pts = piece.sample(n, cfg.seed + 2 + static_cast<std::uint64_t>(i));
            s.groups.push_back(residual_group("boundary-" + piece.name, pts, piece.op, piece.data, wb));
        }
    }
    return s;
}

Points evaluation_grid(const ProblemSpec& spec, const Config& cfg) {
    if (spec.eval_samples > 0) {
        return sample_interior(spec.interior, spec.eval_samples, SampleStrategy::Uniform, 0.0, 20211);
    }
    return tensor_grid(spec.eval_lo, spec.eval_hi, cfg.eval_per_axis, spec.eval_inside);
}

namespace {

Eigen::VectorXd values_on(const ScalarField& f, const Points& grid) {
    Eigen::VectorXd v(grid.cols());
    for (Eigen::Index p = 0; p < grid.cols(); ++p) {
        v(p) = f(std::span<const double>(grid.col(p).data(), static_cast<std::size_t>(grid.rows())));
    }
    return v;
}

double rayleigh_omega(const ScalarField& u, const Points& pts) {
    const Layout& L = layout_for(1, {op_partial(0)});
    double s0 = 0.0, s1 = 0.0;
    for (Eigen::Index p = 0; p < pts.cols(); ++p) {
        const double x = pts(0, p);
        const Jet j = taylor(u, std::span<const double>(&x, 1), L);
        const double v = j.value(), d = apply_op(op_partial(0), j);
        s0 += v * v;
        s1 += d * d;
    }
    return std::sqrt(s1 / s0);
}

}  // namespace

RunResult run(const ProblemSpec& spec, const Config& cfg) {
    RunResult r;
    r.problem = spec.name;
    r.config = cfg;
    Setup setup = build(spec, cfg);
    r.ansatz = setup.ansatz;
    r.grid = evaluation_grid(spec, cfg);

    Trainer trainer(setup.ansatz, setup.groups);
    if (spec.exact && !spec.exact_up_to_sign) trainer.monitor(*spec.exact, r.grid);
    TrainConfig tc;
    tc.epochs = cfg.epochs;
    tc.lr = cfg.lr;
    tc.single_precision = cfg.single_precision;
    tc.trace_every = cfg.trace_every;
    r.trace = trainer.train(tc);
    r.final_loss = trainer.loss(false);
    r.metrics["final_loss"] = r.final_loss;

    r.u_pred = values_on(r.ansatz.field, r.grid);
    if (spec.exact) {
        r.u_exact = values_on(*spec.exact, r.grid);
        // eigenfunctions are determined up to sign
        if (spec.exact_up_to_sign && r.u_pred.dot(r.u_exact) < 0.0) r.u_pred = -r.u_pred;
        const Eigen::VectorXd e = r.u_pred - r.u_exact;
        const double den = r.u_exact.norm();
        r.final_error = den > 0.0 ? e.norm() / den : e.norm() / std::sqrt(static_cast<double>(e.size()));
        r.max_error = e.cwiseAbs().maxCoeff();
        r.metrics["normalized_l2_error"] = r.final_error;
        r.metrics["max_abs_error"] = r.max_error;
    }
    if (cfg.method == Method::Ritz) r.metrics["energy"] = r.final_loss;
    if (cfg.method == Method::Eigen) {
        const double w = rayleigh_omega(r.ansatz.field, setup.interior);
        r.metrics["omega"] = w;
        r.metrics["omega_error"] = std::abs(w - std::numbers::pi);
    }
    return r;
}

RunResult run(const std::string& problem, const Overrides& ov) {
    const auto& spec = find_problem(problem);
    return run(spec, resolve(spec, ov));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string trace_csv(const RunResult& r) {
    std::ostringstream os;
    os << "epoch,train_loss,normalized_l2_error\n";
    for (const auto& rec : r.trace.records) {
        os << rec.epoch << ',' << format_number(rec.loss) << ',' << format_number(rec.error) << '\n';
    }
    return os.str();
}

std::string field_csv(const RunResult& r) {
    static const char* axes[] = {"x", "y", "z", "w"};
    std::ostringstream os;
    const auto d = r.grid.rows();
    for (Eigen::Index i = 0; i < d; ++i) os << axes[i] << ',';
    const bool exact = r.u_exact.size() == r.u_pred.size() && r.u_exact.size() > 0;
    os << "u_pred" << (exact ? ",u_exact,abs_err" : "") << '\n';
    for (Eigen::Index p = 0; p < r.grid.cols(); ++p) {
        for (Eigen::Index i = 0; i < d; ++i) os << format_number(r.grid(i, p)) << ',';
        os << format_number(r.u_pred(p));
        if (exact) {
            os << ',' << format_number(r.u_exact(p)) << ',' << format_number(std::abs(r.u_pred(p) - r.u_exact(p)));
        }
        os << '\n';
    }
    return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

void export_result(const RunResult& r, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
    write_file(std::filesystem::path(dir) / "trace.csv", trace_csv(r));
    write_file(std::filesystem::path(dir) / "field.csv", field_csv(r));
}

}  // namespace adfnn::bench
