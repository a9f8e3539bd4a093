#pragma once

#include <atomic>
#include <cmath>
#include <initializer_list>
#include <memory>
#include <span>
#include <type_traits>
#include <vector>

#include "adfnn/jet.hpp"

namespace adfnn {

using std::cos;
using std::exp;
using std::log;
using std::pow;
using std::sin;
using std::sqrt;
using std::tanh;

class Model;

// Network jets injected in place of evaluating a model. anchor < 0 means the
// model at the evaluation point; anchor >= 0 selects a frozen trace point.
struct Binding {
    const Model* model = nullptr;
    int anchor = -1;
    Jet jet;
};

// Jets of network-free subfields at a single evaluation point, reused across
// repeated evaluations of one expression at that point.
class EvalCache {
public:
    const Jet* find(const void* node, const Layout* layout, int anchor) const;
    void store(const void* node, const Layout* layout, int anchor, const Jet& value);
    void clear() { entries_.clear(); }

private:
    struct Entry {
        const void* node;
        const Layout* layout;
        int anchor;
        Jet value;
    };
    std::vector<Entry> entries_;
};

struct EvalContext {
    std::span<const Binding> bindings;
    int anchor = -1;
    EvalCache* cache = nullptr;

    const Binding* find(const Model* model, int anchor_id) const {
        for (const auto& b : bindings) {
            if (b.model == model && b.anchor == anchor_id) return &b;
        }
        return nullptr;
    }
};

// Layout demanded of a model by an expression evaluated on a given layout.
struct Requirement {
    std::shared_ptr<const Model> model;
    int anchor = -1;
    const Layout* layout = nullptr;
};

class ScalarField;

class FieldNode {
public:
    virtual ~FieldNode() = default;
    virtual double eval(std::span<const double> x, const EvalContext& ctx) const = 0;
    virtual Jet eval(std::span<const Jet> x, const EvalContext& ctx) const = 0;
    // Appends model requirements when evaluated on `layout`.
    virtual void requirements(const Layout& layout, int anchor, std::vector<Requirement>& out) const;
    bool depends_on_model() const {
        int s = depends_.load(std::memory_order_relaxed);
        if (s < 0) {
            s = compute_depends_on_model() ? 1 : 0;
            depends_.store(s, std::memory_order_relaxed);
        }
        return s == 1;
    }
    // Leaves cheap enough that caching them costs more than evaluating.
    virtual bool trivial() const { return false; }

protected:
    virtual bool compute_depends_on_model() const;
    std::vector<ScalarField> children_;

private:
    mutable std::atomic<int> depends_{-1};
};

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(std::shared_ptr<const FieldNode> node) : node_(std::move(node)) {}

    static ScalarField constant(double c);
    static ScalarField coordinate(int axis);

    // Wraps a generic callable f(std::span<const T>) for T in {double, Jet}.
    template <class F>
    static ScalarField from(F f);

    bool valid() const { return static_cast<bool>(node_); }
    const FieldNode& node() const { return *node_; }

    double operator()(std::span<const double> x) const { return node_->eval(x, EvalContext{}); }
    double operator()(std::initializer_list<double> x) const {
        return (*this)(std::span<const double>(x.begin(), x.size()));
    }
    Jet operator()(std::span<const Jet> x) const { return node_->eval(x, EvalContext{}); }

    double eval(std::span<const double> x, const EvalContext& ctx) const { return node_->eval(x, ctx); }
    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const;

    std::vector<Requirement> requirements(const Layout& layout) const;

private:
    std::shared_ptr<const FieldNode> node_;
};

namespace detail {

template <class F>
class LambdaNode final : public FieldNode {
public:
    explicit LambdaNode(F f) : f_(std::move(f)) {}
    bool trivial() const override { return true; }
    double eval(std::span<const double> x, const EvalContext&) const override { return f_(x); }
    Jet eval(std::span<const Jet> x, const EvalContext&) const override {
        auto r = f_(x);
        if constexpr (std::is_same_v<std::decay_t<decltype(r)>, Jet>) {
            return r;
        } else {
            return Jet(x[0].layout(), static_cast<double>(r));
        }
    }

private:
    F f_;
};

// Nodes whose evaluation is one template over the scalar type.
template <class Derived>
class GenericNode : public FieldNode {
public:
    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        return static_cast<const Derived*>(this)->template compute<double>(x, ctx);
    }
    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        return static_cast<const Derived*>(this)->template compute<Jet>(x, ctx);
    }
};

}  // namespace detail

template <class F>
ScalarField ScalarField::from(F f) {
    return ScalarField(std::make_shared<detail::LambdaNode<F>>(std::move(f)));
}

ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a);
ScalarField operator+(const ScalarField& a, double b);
ScalarField operator+(double a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, double b);
ScalarField operator-(double a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, double b);
ScalarField operator*(double a, const ScalarField& b);
ScalarField operator/(const ScalarField& a, double b);

ScalarField sqrt(const ScalarField& a);
ScalarField exp(const ScalarField& a);
ScalarField log(const ScalarField& a);
ScalarField sin(const ScalarField& a);
ScalarField cos(const ScalarField& a);
ScalarField tanh(const ScalarField& a);
ScalarField pow(const ScalarField& a, double r);
ScalarField pow(const ScalarField& a, int n);

// Seeded jets for evaluating at a point on the given layout.
std::vector<Jet> seed(const Layout& layout, std::span<const double> x);

// Gradient fields of `f` evaluated on a jet layout: every component returned
// on `target`, computed from f evaluated on target.raised().
std::vector<Jet> gradient_jets(const ScalarField& f, std::span<const Jet> x, const EvalContext& ctx);

}  // namespace adfnn
