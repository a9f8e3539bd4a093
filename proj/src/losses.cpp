#include <cmath>
#include <stdexcept>

#include "adfnn/solvers.hpp"
#include "loss_kernel.hpp"

namespace adfnn {

namespace detail {

double group_value(const PointGroup& g, const Eigen::MatrixXd& F, Eigen::MatrixXd* dF) {
    const Eigen::Index P = F.cols();
    if (P == 0) return 0.0;
    const double inv = 1.0 / static_cast<double>(P);
    if (dF) dF->setZero(F.rows(), P);
    double total = 0.0;
    switch (g.kind) {
        case GroupKind::Residual:
            for (Eigen::Index p = 0; p < P; ++p) {
                const double r = F(0, p) - g.target(p);
                total += r * r;
                if (dF) (*dF)(0, p) = g.weight * 2.0 * r * inv;
            }
            return g.weight * total * inv;
        case GroupKind::Energy:
            for (Eigen::Index p = 0; p < P; ++p) {
                for (Eigen::Index i = 0; i < F.rows(); ++i) {
                    const double f = F(i, p);
                    total += 0.5 * g.a(i, p) * f * f + g.b(i, p) * f;
                    if (dF) (*dF)(i, p) = g.weight * (g.a(i, p) * f + g.b(i, p)) * inv;
                }
            }
            return g.weight * total * inv;
        case GroupKind::Eikonal:
            for (Eigen::Index p = 0; p < P; ++p) {
                const double n = F.col(p).norm();
                total += (n - 1.0) * (n - 1.0);
                if (dF && n > 0.0) dF->col(p) = g.weight * 2.0 * (n - 1.0) / n * inv * F.col(p);
            }
            return g.weight * total * inv;
        case GroupKind::Rayleigh: {
            const double s0 = F.row(0).squaredNorm();
            const double s1 = F.bottomRows(F.rows() - 1).squaredNorm();
            if (s0 < 1e-30) throw std::runtime_error("degenerate trial function in Rayleigh quotient");
            const double c = s0 * inv - 1.0;
            if (dF) {
                dF->row(0) = g.weight * (-2.0 * s1 / (s0 * s0) + 4.0 * c * inv) * F.row(0);
                dF->bottomRows(F.rows() - 1) = g.weight * 2.0 / s0 * F.bottomRows(F.rows() - 1);
            }
            return g.weight * (s1 / s0 + c * c);
        }
    }
    return 0.0;
}

}  // namespace detail

namespace {

Eigen::VectorXd values_at(const ScalarField& f, const Points& pts) {
    Eigen::VectorXd v(pts.cols());
    for (Eigen::Index p = 0; p < pts.cols(); ++p) {
        v(p) = f(std::span<const double>(pts.col(p).data(), static_cast<std::size_t>(pts.rows())));
    }
    return v;
}

}  // namespace

PointGroup residual_group(std::string name, const Points& pts, const DiffOp& op, const ScalarField& f, double weight) {
    PointGroup g;
    g.name = std::move(name);
    g.kind = GroupKind::Residual;
    g.points = pts;
    g.ops = {op};
    g.target = values_at(f, pts);
    g.weight = weight;
    return g;
}

PointGroup boundary_mismatch_group(std::string name, const Points& pts, const ScalarField& g, double weight) {
    return residual_group(std::move(name), pts, op_value(), g, weight);
}

PointGroup ritz_poisson_group(const Points& pts, const ScalarField& f, double measure) {
    const int d = static_cast<int>(pts.rows());
    PointGroup g;
    g.name = "ritz-interior";
    g.kind = GroupKind::Energy;
    g.points = pts;
    for (int i = 0; i < d; ++i) g.ops.push_back(op_partial(i));
    g.ops.push_back(op_value());
    g.a = Eigen::MatrixXd::Zero(d + 1, pts.cols());
    g.b = Eigen::MatrixXd::Zero(d + 1, pts.cols());
    g.a.topRows(d).setOnes();
    g.b.row(d) = -values_at(f, pts).transpose();
    g.weight = measure;
    return g;
}

PointGroup ritz_robin_group(const Points& pts, const ScalarField& c, const ScalarField& h, double measure) {
    PointGroup g;
    g.name = "ritz-robin";
    g.kind = GroupKind::Energy;
    g.points = pts;
    g.ops = {op_value()};
    g.a = values_at(c, pts).transpose();
    g.b = -values_at(h, pts).transpose();
    g.weight = measure;
    return g;
}

PointGroup ritz_plate_group(const Points& pts, const ScalarField& f, double measure, double rigidity) {
    const int d = static_cast<int>(pts.rows());
    PointGroup g;
    g.name = "ritz-bending";
    g.kind = GroupKind::Energy;
    g.points = pts;
    g.ops = {op_laplacian(d), op_value()};
    g.a = Eigen::MatrixXd::Zero(2, pts.cols());
    g.b = Eigen::MatrixXd::Zero(2, pts.cols());
    g.a.row(0).setConstant(rigidity);
    g.b.row(1) = -values_at(f, pts).transpose();
    g.weight = measure;
    return g;
}

PointGroup point_functional_group(std::string name, std::vector<double> point, const DiffOp& op, double coef) {
    PointGroup g;
    g.name = std::move(name);
    g.kind = GroupKind::Energy;
    g.points = Eigen::Map<const Points>(point.data(), static_cast<Eigen::Index>(point.size()), 1);
    g.ops = {op};
    g.a = Eigen::MatrixXd::Zero(1, 1);
    g.b = Eigen::MatrixXd::Constant(1, 1, coef);
    return g;
}

PointGroup rayleigh_group(const Points& pts) {
    PointGroup g;
    g.name = "rayleigh";
    g.kind = GroupKind::Rayleigh;
    g.points = pts;
    g.ops = {op_value()};
    for (int i = 0; i < pts.rows(); ++i) g.ops.push_back(op_partial(i));
    return g;
}

PointGroup eikonal_group(const Points& pts) {
    PointGroup g;
    g.name = "eikonal";
    g.kind = GroupKind::Eikonal;
    g.points = pts;
    for (int i = 0; i < pts.rows(); ++i) g.ops.push_back(op_partial(i));
    return g;
}

double evaluate_loss(const Ansatz& ansatz, const std::vector<PointGroup>& groups) {
    double total = 0.0;
    for (const auto& g : groups) {
        const int d = static_cast<int>(g.points.rows());
        const Layout& L = layout_for(d, g.ops);
        Eigen::MatrixXd F(static_cast<Eigen::Index>(g.ops.size()), g.points.cols());
        for (Eigen::Index p = 0; p < g.points.cols(); ++p) {
            auto xs = seed(L, std::span<const double>(g.points.col(p).data(), static_cast<std::size_t>(d)));
            Jet u = ansatz.field(std::span<const Jet>(xs));
            for (std::size_t i = 0; i < g.ops.size(); ++i) {
                const double v = apply_op(g.ops[i], u);
                if (!std::isfinite(v)) {
                    std::string where;
                    for (int k = 0; k < d; ++k) where += (k ? ", " : "") + std::to_string(g.points(k, p));
                    throw std::runtime_error("non-finite residual at (" + where + ")");
                }
                F(static_cast<Eigen::Index>(i), p) = v;
            }
        }
        total += detail::group_value(g, F, nullptr);
    }
    return total;
}

double collocation_loss(const Ansatz& ansatz, const DiffOp& op, const ScalarField& f, const Points& pts) {
    return evaluate_loss(ansatz, {residual_group("interior", pts, op, f)});
}

double standard_pinn_loss(const Ansatz& net, const DiffOp& op, const ScalarField& f, const Points& interior,
                          const Points& boundary, const ScalarField& g, double w) {
    if (w > 1.0) throw std::invalid_argument("loss weight must lie in [0, 1]");
    const double wi = w < 0.0 ? 1.0 : w, wb = w < 0.0 ? 1.0 : 1.0 - w;
    return evaluate_loss(net, {residual_group("interior", interior, op, f, wi),
                               boundary_mismatch_group("boundary", boundary, g, wb)});
}

double ritz_poisson_loss(const Ansatz& ansatz, const ScalarField& f, const Points& interior, double measure) {
    return evaluate_loss(ansatz, {ritz_poisson_group(interior, f, measure)});
}

double ritz_plate_loss(const Ansatz& ansatz, const ScalarField& f, const Points& interior, double measure) {
    return evaluate_loss(ansatz, {ritz_plate_group(interior, f, measure)});
}

double rayleigh_loss(const Ansatz& ansatz, const Points& pts) { return evaluate_loss(ansatz, {rayleigh_group(pts)}); }

double eikonal_loss(const Ansatz& ansatz, const Points& pts) { return evaluate_loss(ansatz, {eikonal_group(pts)}); }

double normalized_error(const ScalarField& u_pred, const ScalarField& u_exact, const Points& grid) {
    double num = 0.0, den = 0.0;
    for (Eigen::Index p = 0; p < grid.cols(); ++p) {
        std::span<const double> x(grid.col(p).data(), static_cast<std::size_t>(grid.rows()));
        const double e = u_exact(x);
        const double r = u_pred(x) - e;
        num += r * r;
        den += e * e;
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num / static_cast<double>(grid.cols()));
}

double max_abs_error(const ScalarField& u_pred, const ScalarField& u_exact, const Points& grid) {
    double m = 0.0;
    for (Eigen::Index p = 0; p < grid.cols(); ++p) {
        std::span<const double> x(grid.col(p).data(), static_cast<std::size_t>(grid.rows()));
        m = std::max(m, std::abs(u_pred(x) - u_exact(x)));
    }
    return m;
}

}  // namespace adfnn
