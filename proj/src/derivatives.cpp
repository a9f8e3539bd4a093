#include "adfnn/derivatives.hpp"

#include <cmath>
#include <stdexcept>

namespace adfnn {

namespace {

void check_finite(const Jet& j) {
    for (int i = 0; i < j.size(); ++i) {
        if (!std::isfinite(j[i])) throw std::domain_error("non-finite derivative");
    }
}

double factorial_of(const MultiIndex& a) {
    double f = 1.0;
    for (auto v : a) {
        for (int k = 2; k <= v; ++k) f *= k;
    }
    return f;
}

}  // namespace

Jet taylor(const ScalarField& f, std::span<const double> x, const Layout& layout) {
    auto xs = seed(layout, x);
    Jet j = f(std::span<const Jet>(xs));
    check_finite(j);
    return j;
}

std::vector<double> grad_input(const ScalarField& f, std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    Jet j = taylor(f, x, Layout::total(d, 1));
    std::vector<double> g(x.size());
    for (int i = 0; i < d; ++i) g[static_cast<std::size_t>(i)] = apply_op(op_partial(i), j);
    return g;
}

double laplacian(const ScalarField& f, std::span<const double> x) {
    const int d = static_cast<int>(x.size());
    return apply_op(op_laplacian(d), taylor(f, x, Layout::axes(d, 2)));
}

double biharmonic(const ScalarField& f, std::span<const double> x) {
    if (x.size() != 2) throw std::invalid_argument("biharmonic is defined for two-dimensional fields");
    return apply_op(op_biharmonic2d(), taylor(f, x, Layout::biharmonic2d()));
}

double apply_op(const DiffOp& op, const Jet& u) {
    double s = 0.0;
    for (const auto& t : op) s += t.coef * u.derivative(t.alpha);
    return s;
}

std::vector<double> weights(const DiffOp& op, const Layout& layout) {
    std::vector<double> w(static_cast<std::size_t>(layout.size()), 0.0);
    for (const auto& t : op) {
        int k = layout.find(t.alpha);
        if (k < 0) throw std::logic_error("operator term missing from jet layout");
        w[static_cast<std::size_t>(k)] += t.coef * factorial_of(t.alpha);
    }
    return w;
}

const Layout& layout_for(int dim, const std::vector<DiffOp>& ops) {
    std::vector<MultiIndex> idx;
    for (const auto& op : ops) {
        for (const auto& t : op) idx.push_back(t.alpha);
    }
    return Layout::closure(dim, idx);
}

DiffOp op_value() { return {DiffTerm{}}; }

DiffOp op_partial(int axis, int order) {
    DiffTerm t;
    t.alpha[static_cast<std::size_t>(axis)] = static_cast<std::uint8_t>(order);
    return {t};
}

DiffOp op_laplacian(int dim) {
    DiffOp op;
    for (int i = 0; i < dim; ++i) op = op + op_partial(i, 2);
    return op;
}

DiffOp op_biharmonic2d() {
    DiffTerm mixed;
    mixed.alpha = {2, 2, 0, 0};
    mixed.coef = 2.0;
    return op_partial(0, 4) + op_partial(1, 4) + DiffOp{mixed};
}

DiffOp operator+(DiffOp a, const DiffOp& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

DiffOp operator*(double s, DiffOp a) {
    for (auto& t : a) t.coef *= s;
    return a;
}

}  // namespace adfnn
