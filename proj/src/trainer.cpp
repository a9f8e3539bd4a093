#include <cmath>
#include <random>
#include <stdexcept>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#ifdef _OPENMP
#include <omp.h>
#endif

#include "adfnn/solvers.hpp"
#include "loss_kernel.hpp"

namespace adfnn {

namespace {

// Network inputs bound while evaluating a group: one per (model, anchor).
struct Slot {
    int model = 0;
    int anchor = -1;
    const Layout* layout = nullptr;
    Eigen::Index offset = 0;  // first row in the stacked jets J
    Eigen::Index size = 0;
};

struct Chunk {
    Eigen::Index start = 0, len = 0;
};

// Per group: F = F0 + sum_rows(B_i .* J) for each functional i.
struct Compiled {
    PointGroup group;
    const Layout* layout = nullptr;
    std::vector<Slot> slots;
    Eigen::Index nJ = 0;
    Eigen::MatrixXd F0;               // ops x P
    std::vector<Eigen::MatrixXd> B;   // per op: nJ x P
    std::vector<Chunk> chunks;
    Mat<float> Xf;                    // points in single precision
};

template <class S>
struct Tapes {
    // [slot][chunk]
    std::vector<std::vector<ParamTape<S>>> t;
};

template <class F>
void parallel_for(std::size_t n, F&& f) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i) f(static_cast<std::size_t>(i));
#else
    for (std::size_t i = 0; i < n; ++i) f(i);
#endif
}

}  // namespace

struct Trainer::Impl {
    std::vector<std::shared_ptr<Model>> models;
    std::vector<std::size_t> param_offset;
    std::size_t nparams = 0;
    std::vector<Compiled> groups;
    std::vector<std::vector<double>> anchors;
    int chunk = 512;

    bool has_monitor = false;
    Compiled monitor;
    double monitor_norm = 0.0;

    int model_index(const Model* m) const {
        for (std::size_t i = 0; i < models.size(); ++i) {
            if (models[i].get() == m) return static_cast<int>(i);
        }
        throw std::logic_error("ansatz references a network it does not own");
    }

    std::span<const double> point(const Compiled& c, Eigen::Index p) const {
        return {c.group.points.col(p).data(), static_cast<std::size_t>(c.group.points.rows())};
    }

    std::vector<Binding> zero_bindings(const Compiled& c) const {
        std::vector<Binding> b;
        for (const auto& s : c.slots) b.push_back({models[static_cast<std::size_t>(s.model)].get(), s.anchor, Jet(*s.layout, 0.0)});
        return b;
    }

    Compiled compile(const Ansatz& ansatz, PointGroup g) const {
        Compiled c;
        const int d = static_cast<int>(g.points.rows());
        c.layout = &layout_for(d, g.ops);
        for (const auto& r : ansatz.field.requirements(*c.layout)) {
            Slot s;
            s.model = model_index(r.model.get());
            s.anchor = r.anchor;
            s.layout = r.layout;
            s.offset = c.nJ;
            s.size = r.layout->size();
            if (s.anchor >= static_cast<int>(anchors.size())) throw std::logic_error("ansatz anchor without a point");
            c.nJ += s.size;
            c.slots.push_back(s);
        }
        const Eigen::Index P = g.points.cols();
        const auto nF = static_cast<Eigen::Index>(g.ops.size());
        c.F0.resize(nF, P);
        c.B.assign(static_cast<std::size_t>(nF), Eigen::MatrixXd::Zero(c.nJ, P));
        std::vector<std::vector<double>> w;
        for (const auto& op : g.ops) w.push_back(weights(op, *c.layout));
        c.group = std::move(g);

        auto functionals = [&](const Jet& u, Eigen::Index p, Eigen::MatrixXd& out) {
            for (Eigen::Index i = 0; i < nF; ++i) {
                double s = 0.0;
                const auto& wi = w[static_cast<std::size_t>(i)];
                for (std::size_t k = 0; k < wi.size(); ++k) s += wi[k] * u[static_cast<int>(k)];
                out(i, p) = s;
            }
        };

        parallel_for(static_cast<std::size_t>(P), [&](std::size_t pu) {
            const auto p = static_cast<Eigen::Index>(pu);
            auto xs = seed(*c.layout, point(c, p));
            auto bind = zero_bindings(c);
            EvalCache cache;
            EvalContext ctx{bind, -1, &cache};
            Jet u0 = ansatz.field.eval(std::span<const Jet>(xs), ctx);
            Eigen::MatrixXd f0(nF, 1), f1(nF, 1);
            functionals(u0, 0, f0);
            c.F0.col(p) = f0;
            for (std::size_t s = 0; s < c.slots.size(); ++s) {
                for (Eigen::Index k = 0; k < c.slots[s].size; ++k) {
                    bind[s].jet[static_cast<int>(k)] = 1.0;
                    Jet u = ansatz.field.eval(std::span<const Jet>(xs), ctx);
                    bind[s].jet[static_cast<int>(k)] = 0.0;
                    functionals(u, 0, f1);
                    for (Eigen::Index i = 0; i < nF; ++i) c.B[static_cast<std::size_t>(i)](c.slots[s].offset + k, p) = f1(i, 0) - f0(i, 0);
                }
            }
        });
        for (Eigen::Index i = 0; i < c.F0.size(); ++i) {
            if (!std::isfinite(c.F0.data()[i])) throw std::runtime_error("non-finite ansatz term in group " + c.group.name);
        }
        for (Eigen::Index s = 0; s < P; s += chunk) c.chunks.push_back({s, std::min<Eigen::Index>(chunk, P - s)});
        c.Xf = c.group.points.cast<float>();
        return c;
    }

    // Stacked network jets J (nJ x P) for a group.
    template <class S>
    Eigen::MatrixXd network_jets(const Compiled& c, Tapes<S>* tapes) const {
        const Eigen::Index P = c.group.points.cols();
        Eigen::MatrixXd J(c.nJ, P);
        if (tapes) tapes->t.assign(c.slots.size(), {});
        for (std::size_t s = 0; s < c.slots.size(); ++s) {
            const Slot& sl = c.slots[s];
            const Model& m = *models[static_cast<std::size_t>(sl.model)];
            if (sl.anchor >= 0) {
                const auto& a = anchors[static_cast<std::size_t>(sl.anchor)];
                Mat<S> X = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())).cast<S>();
                Mat<S> out;
                if (tapes) tapes->t[s].resize(1);
                m.forward_batch(*sl.layout, X, out, tapes ? &tapes->t[s][0] : nullptr);
                J.middleRows(sl.offset, sl.size) = out.template cast<double>().replicate(1, P);
                continue;
            }
            if (tapes) tapes->t[s].resize(c.chunks.size());
            parallel_for(c.chunks.size(), [&](std::size_t k) {
                const Chunk& ch = c.chunks[k];
                Mat<S> out;
                ParamTape<S>* tp = tapes ? &tapes->t[s][k] : nullptr;
                if constexpr (std::is_same_v<S, double>) {
                    m.forward_batch(*sl.layout, Mat<double>(c.group.points.middleCols(ch.start, ch.len)), out, tp);
                } else {
                    m.forward_batch(*sl.layout, Mat<float>(c.Xf.middleCols(ch.start, ch.len)), out, tp);
                }
                J.block(sl.offset, ch.start, sl.size, ch.len) = out.template cast<double>();
            });
        }
        return J;
    }

    Eigen::MatrixXd functionals(const Compiled& c, const Eigen::MatrixXd& J) const {
        Eigen::MatrixXd F = c.F0;
        for (std::size_t i = 0; i < c.B.size(); ++i) {
            F.row(static_cast<Eigen::Index>(i)) += (c.B[i].array() * J.array()).colwise().sum().matrix();
        }
        return F;
    }

    template <class S>
    double run(std::vector<double>* grad) {
        double total = 0.0;
        if (grad) grad->assign(nparams, 0.0);
        for (const auto& c : groups) {
            Tapes<S> tapes;
            Eigen::MatrixXd J = network_jets<S>(c, grad ? &tapes : nullptr);
            Eigen::MatrixXd F = functionals(c, J);
            Eigen::MatrixXd dF;
            total += detail::group_value(c.group, F, grad ? &dF : nullptr);
            if (!grad) continue;
            Eigen::MatrixXd dJ = Eigen::MatrixXd::Zero(c.nJ, J.cols());
            for (std::size_t i = 0; i < c.B.size(); ++i) {
                dJ.array() += c.B[i].array().rowwise() * dF.row(static_cast<Eigen::Index>(i)).array();
            }
            for (std::size_t s = 0; s < c.slots.size(); ++s) {
                const Slot& sl = c.slots[s];
                const Model& m = *models[static_cast<std::size_t>(sl.model)];
                std::span<double> g(grad->data() + param_offset[static_cast<std::size_t>(sl.model)], m.num_params());
                if (sl.anchor >= 0) {
                    Mat<S> dout = dJ.middleRows(sl.offset, sl.size).rowwise().sum().template cast<S>();
                    m.backward_batch(tapes.t[s][0], dout, g);
                    continue;
                }
                std::vector<std::vector<double>> partial(c.chunks.size(), std::vector<double>(m.num_params(), 0.0));
                parallel_for(c.chunks.size(), [&](std::size_t k) {
                    const Chunk& ch = c.chunks[k];
                    Mat<S> dout = dJ.block(sl.offset, ch.start, sl.size, ch.len).template cast<S>();
                    m.backward_batch(tapes.t[s][k], dout, partial[k]);
                });
                for (const auto& pk : partial) {
                    for (std::size_t i = 0; i < pk.size(); ++i) g[i] += pk[i];
                }
            }
        }
        return total;
    }

    double monitor_error(bool single) const {
        Eigen::MatrixXd J = single ? network_jets<float>(monitor, nullptr) : network_jets<double>(monitor, nullptr);
        Eigen::MatrixXd F = functionals(monitor, J);
        double num = (F.row(0).transpose() - monitor.group.target).squaredNorm();
        return monitor_norm > 0.0 ? std::sqrt(num) / monitor_norm : std::sqrt(num / static_cast<double>(F.cols()));
    }
};

Trainer::Trainer(Ansatz ansatz, std::vector<PointGroup> groups) : ansatz_(std::move(ansatz)), impl_(std::make_unique<Impl>()) {
    if (!ansatz_.field.valid()) throw std::invalid_argument("empty ansatz");
    if (ansatz_.models.empty()) throw std::invalid_argument("ansatz has no trainable network");
    impl_->models = ansatz_.models;
    impl_->anchors = ansatz_.anchors;
    for (const auto& m : impl_->models) {
        impl_->param_offset.push_back(impl_->nparams);
        impl_->nparams += m->num_params();
    }
#ifdef _OPENMP
    Eigen::setNbThreads(1);
#endif
    for (auto& g : groups) impl_->groups.push_back(impl_->compile(ansatz_, std::move(g)));
}

Trainer::~Trainer() = default;

void Trainer::monitor(const ScalarField& exact, const Points& grid) {
    impl_->monitor = impl_->compile(ansatz_, residual_group("monitor", grid, op_value(), exact));
    impl_->monitor_norm = impl_->monitor.group.target.norm();
    impl_->has_monitor = true;
}

std::size_t Trainer::num_params() const { return impl_->nparams; }

std::vector<double> Trainer::params() const {
    std::vector<double> theta;
    theta.reserve(impl_->nparams);
    for (const auto& m : impl_->models) {
        auto p = std::as_const(*m).params();
        theta.insert(theta.end(), p.begin(), p.end());
    }
    return theta;
}

void Trainer::set_params(std::span<const double> theta) {
    if (theta.size() != impl_->nparams) throw std::invalid_argument("parameter vector size mismatch");
    std::size_t pos = 0;
    for (const auto& m : impl_->models) {
        auto p = m->params();
        std::copy(theta.begin() + static_cast<std::ptrdiff_t>(pos), theta.begin() + static_cast<std::ptrdiff_t>(pos + p.size()), p.begin());
        pos += p.size();
    }
}

double Trainer::loss(bool single_precision) {
    return single_precision ? impl_->run<float>(nullptr) : impl_->run<double>(nullptr);
}

double Trainer::loss_and_gradient(std::vector<double>& grad, bool single_precision) {
    return single_precision ? impl_->run<float>(&grad) : impl_->run<double>(&grad);
}

double Trainer::affinity_defect(int points_per_group, std::uint64_t rng_seed) const {
    std::mt19937_64 rng(rng_seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (const auto& c : impl_->groups) {
        const Eigen::Index P = c.group.points.cols();
        for (int t = 0; t < points_per_group && t < P; ++t) {
            const Eigen::Index p = (P * t) / std::max(points_per_group, 1);
            auto bind = impl_->zero_bindings(c);
            Eigen::VectorXd Jp(c.nJ);
            for (std::size_t s = 0; s < c.slots.size(); ++s) {
                for (Eigen::Index k = 0; k < c.slots[s].size; ++k) {
                    const double v = u(rng);
                    bind[s].jet[static_cast<int>(k)] = v;
                    Jp(c.slots[s].offset + k) = v;
                }
            }
            auto xs = seed(*c.layout, impl_->point(c, p));
            EvalContext ctx{bind};
            Jet uj = ansatz_.field.eval(std::span<const Jet>(xs), ctx);
            for (std::size_t i = 0; i < c.group.ops.size(); ++i) {
                const double direct = apply_op(c.group.ops[i], uj);
                const double affine = c.F0(static_cast<Eigen::Index>(i), p) + c.B[i].col(p).dot(Jp);
                worst = std::max(worst, std::abs(direct - affine) / std::max(1.0, std::abs(direct)));
            }
        }
    }
    return worst;
}

TrainTrace Trainer::train(const TrainConfig& cfg) {
    if (cfg.epochs < 1) throw std::invalid_argument("epochs must be at least 1");
    if (cfg.chunk < 1) throw std::invalid_argument("chunk size must be positive");
#ifdef __GLIBC__
    // tapes are reallocated every epoch; keep those blocks on the heap
    // instead of paying an mmap/munmap round trip each time
    static const bool tuned = [] {
        mallopt(M_MMAP_THRESHOLD, 1 << 30);
        mallopt(M_TRIM_THRESHOLD, 1 << 30);
        return true;
    }();
    (void)tuned;
#endif
    TrainTrace trace;
    trace.records.reserve(static_cast<std::size_t>(cfg.epochs));
    std::vector<double> theta = params(), grad;
    AdamState adam(theta.size());
    adam.lr = cfg.lr;
    for (int e = 1; e <= cfg.epochs; ++e) {
        const double L = loss_and_gradient(grad, cfg.single_precision);
        if (!std::isfinite(L)) throw std::runtime_error("non-finite loss at epoch " + std::to_string(e));
        TraceRecord r{e, L};
        if (impl_->has_monitor && cfg.trace_every > 0 && (e % cfg.trace_every == 0 || e == 1 || e == cfg.epochs)) {
            r.error = impl_->monitor_error(cfg.single_precision);
        }
        trace.records.push_back(r);
        adam_step(adam, theta, grad);
        set_params(theta);
    }
    return trace;
}

}  // namespace adfnn
