#include "adfnn/field.hpp"

#include <stdexcept>

namespace adfnn {

void FieldNode::requirements(const Layout& layout, int anchor, std::vector<Requirement>& out) const {
    for (const auto& c : children_) c.node().requirements(layout, anchor, out);
}

bool FieldNode::compute_depends_on_model() const {
    for (const auto& c : children_) {
        if (c.node().depends_on_model()) return true;
    }
    return false;
}

const Jet* EvalCache::find(const void* node, const Layout* layout, int anchor) const {
    for (const auto& e : entries_) {
        if (e.node == node && e.layout == layout && e.anchor == anchor) return &e.value;
    }
    return nullptr;
}

void EvalCache::store(const void* node, const Layout* layout, int anchor, const Jet& value) {
    entries_.push_back({node, layout, anchor, value});
}

Jet ScalarField::eval(std::span<const Jet> x, const EvalContext& ctx) const {
    if (!ctx.cache || node_->trivial() || node_->depends_on_model()) return node_->eval(x, ctx);
    const Layout* L = &x[0].layout();
    if (const Jet* hit = ctx.cache->find(node_.get(), L, ctx.anchor)) return *hit;
    Jet v = node_->eval(x, ctx);
    ctx.cache->store(node_.get(), L, ctx.anchor, v);
    return v;
}

std::vector<Requirement> ScalarField::requirements(const Layout& layout) const {
    std::vector<Requirement> out;
    node_->requirements(layout, -1, out);
    // merge duplicates, keeping the largest layout per (model, anchor)
    std::vector<Requirement> merged;
    for (auto& r : out) {
        bool found = false;
        for (auto& m : merged) {
            if (m.model == r.model && m.anchor == r.anchor) {
                if (!m.layout->contains(*r.layout)) {
                    std::vector<MultiIndex> idx;
                    for (int i = 0; i < m.layout->size(); ++i) idx.push_back(m.layout->index(i));
                    for (int i = 0; i < r.layout->size(); ++i) idx.push_back(r.layout->index(i));
                    m.layout = &Layout::closure(m.layout->dim(), idx);
                }
                found = true;
                break;
            }
        }
        if (!found) merged.push_back(r);
    }
    return merged;
}

namespace {

enum class Op { Add, Sub, Mul, Div };

class BinaryNode final : public detail::GenericNode<BinaryNode> {
public:
    BinaryNode(Op op, ScalarField a, ScalarField b) : op_(op) {
        children_ = {std::move(a), std::move(b)};
    }
    template <class T>
    T compute(std::span<const T> x, const EvalContext& ctx) const {
        T a = children_[0].eval(x, ctx);
        T b = children_[1].eval(x, ctx);
        switch (op_) {
            case Op::Add: return a + b;
            case Op::Sub: return a - b;
            case Op::Mul: return a * b;
            case Op::Div: return a / b;
        }
        return a;
    }

private:
    Op op_;
};

enum class Fn { Sqrt, Exp, Log, Sin, Cos, Tanh, PowReal, PowInt, Neg };

class UnaryNode final : public detail::GenericNode<UnaryNode> {
public:
    UnaryNode(Fn fn, ScalarField a, double r = 0.0) : fn_(fn), r_(r) { children_ = {std::move(a)}; }
    template <class T>
    T compute(std::span<const T> x, const EvalContext& ctx) const {
        T a = children_[0].eval(x, ctx);
        switch (fn_) {
            case Fn::Sqrt: return sqrt(a);
            case Fn::Exp: return exp(a);
            case Fn::Log: return log(a);
            case Fn::Sin: return sin(a);
            case Fn::Cos: return cos(a);
            case Fn::Tanh: return tanh(a);
            case Fn::PowReal: return pow(a, r_);
            case Fn::PowInt: {
                if constexpr (std::is_same_v<T, double>) {
                    return std::pow(a, static_cast<int>(r_));
                } else {
                    return pow(a, static_cast<int>(r_));
                }
            }
            case Fn::Neg: return -a;
        }
        return a;
    }

private:
    Fn fn_;
    double r_;
};

ScalarField binary(Op op, const ScalarField& a, const ScalarField& b) {
    if (!a.valid() || !b.valid()) throw std::invalid_argument("empty scalar field");
    return ScalarField(std::make_shared<BinaryNode>(op, a, b));
}

ScalarField unary(Fn fn, const ScalarField& a, double r = 0.0) {
    if (!a.valid()) throw std::invalid_argument("empty scalar field");
    return ScalarField(std::make_shared<UnaryNode>(fn, a, r));
}

}  // namespace

ScalarField ScalarField::constant(double c) {
    return from([c](auto) { return c; });
}

ScalarField ScalarField::coordinate(int axis) {
    if (axis < 0 || axis >= kMaxDim) throw std::invalid_argument("coordinate axis out of range");
    return from([axis](auto x) { return x[static_cast<std::size_t>(axis)]; });
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) { return binary(Op::Add, a, b); }
ScalarField operator-(const ScalarField& a, const ScalarField& b) { return binary(Op::Sub, a, b); }
ScalarField operator*(const ScalarField& a, const ScalarField& b) { return binary(Op::Mul, a, b); }
ScalarField operator/(const ScalarField& a, const ScalarField& b) { return binary(Op::Div, a, b); }
ScalarField operator-(const ScalarField& a) { return unary(Fn::Neg, a); }
ScalarField operator+(const ScalarField& a, double b) { return a + ScalarField::constant(b); }
ScalarField operator+(double a, const ScalarField& b) { return ScalarField::constant(a) + b; }
ScalarField operator-(const ScalarField& a, double b) { return a - ScalarField::constant(b); }
ScalarField operator-(double a, const ScalarField& b) { return ScalarField::constant(a) - b; }
ScalarField operator*(const ScalarField& a, double b) { return a * ScalarField::constant(b); }
ScalarField operator*(double a, const ScalarField& b) { return ScalarField::constant(a) * b; }
ScalarField operator/(const ScalarField& a, double b) { return a * ScalarField::constant(1.0 / b); }

ScalarField sqrt(const ScalarField& a) { return unary(Fn::Sqrt, a); }
ScalarField exp(const ScalarField& a) { return unary(Fn::Exp, a); }
ScalarField log(const ScalarField& a) { return unary(Fn::Log, a); }
ScalarField sin(const ScalarField& a) { return unary(Fn::Sin, a); }
ScalarField cos(const ScalarField& a) { return unary(Fn::Cos, a); }
ScalarField tanh(const ScalarField& a) { return unary(Fn::Tanh, a); }
ScalarField pow(const ScalarField& a, double r) { return unary(Fn::PowReal, a, r); }
ScalarField pow(const ScalarField& a, int n) { return unary(Fn::PowInt, a, n); }

std::vector<Jet> seed(const Layout& layout, std::span<const double> x) {
    std::vector<Jet> jets;
    jets.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        jets.push_back(Jet::variable(layout, x[j], static_cast<int>(j)));
    }
    return jets;
}

std::vector<Jet> gradient_jets(const ScalarField& f, std::span<const Jet> x, const EvalContext& ctx) {
    const Layout& target = x[0].layout();
    const Layout& up = target.raised();
    std::vector<double> x0(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) x0[j] = x[j].value();
    auto xs = seed(up, x0);
    Jet v = f.eval(std::span<const Jet>(xs), ctx);
    std::vector<Jet> g;
    g.reserve(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) g.push_back(differentiate(v, static_cast<int>(j), target));
    return g;
}

}  // namespace adfnn
