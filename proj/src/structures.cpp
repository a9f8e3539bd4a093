#include "adfnn/structures.hpp"

#include <stdexcept>

#include "adfnn/geometry.hpp"

namespace adfnn {

namespace {

class NetworkNode final : public FieldNode {
public:
    explicit NetworkNode(std::shared_ptr<const Model> m) : model_(std::move(m)) {}

    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        if (const Binding* b = ctx.find(model_.get(), ctx.anchor)) return b->jet.value();
        return model_->forward(x);
    }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        if (const Binding* b = ctx.find(model_.get(), ctx.anchor)) return restrict_to(b->jet, x[0].layout());
        return model_->forward(x);
    }

    void requirements(const Layout& layout, int anchor, std::vector<Requirement>& out) const override {
        out.push_back({model_, anchor, &layout});
    }

protected:
    bool compute_depends_on_model() const override { return true; }

private:
    std::shared_ptr<const Model> model_;
};

class D1Node final : public FieldNode {
public:
    D1Node(ScalarField phi, ScalarField v) { children_ = {std::move(phi), std::move(v)}; }

    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        auto xs = seed(Layout::total(static_cast<int>(x.size()), 0), x);
        return eval(std::span<const Jet>(xs), ctx).value();
    }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        auto gp = gradient_jets(children_[0], x, ctx);
        auto gv = gradient_jets(children_[1], x, ctx);
        Jet s(x[0].layout(), 0.0);
        for (std::size_t i = 0; i < gp.size(); ++i) s -= gp[i] * gv[i];
        return s;
    }

    void requirements(const Layout& layout, int anchor, std::vector<Requirement>& out) const override {
        for (const auto& c : children_) c.node().requirements(layout.raised(), anchor, out);
    }
};

class FrozenTraceNode final : public FieldNode {
public:
    FrozenTraceNode(ScalarField f, std::vector<double> point, int anchor) : point_(std::move(point)), anchor_(anchor) {
        children_ = {std::move(f)};
    }

    double eval(std::span<const double>, const EvalContext& ctx) const override { return trace(ctx); }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override { return Jet(x[0].layout(), trace(ctx)); }

    void requirements(const Layout&, int, std::vector<Requirement>& out) const override {
        children_[0].node().requirements(Layout::total(static_cast<int>(point_.size()), 0), anchor_, out);
    }

private:
    double trace(const EvalContext& ctx) const {
        EvalContext at = ctx;
        at.anchor = anchor_;
        auto xs = seed(Layout::total(static_cast<int>(point_.size()), 0), point_);
        return children_[0].eval(std::span<const Jet>(xs), at).value();
    }

    std::vector<double> point_;
    int anchor_;
};

void require(const ScalarField& f, const char* what) {
    if (!f.valid()) throw std::invalid_argument(std::string("missing field: ") + what);
}

void require(const std::shared_ptr<Model>& m) {
    if (!m) throw std::invalid_argument("missing network");
}

}  // namespace

ScalarField network_field(std::shared_ptr<const Model> model) {
    if (!model) throw std::invalid_argument("missing network");
    return ScalarField(std::make_shared<NetworkNode>(std::move(model)));
}

ScalarField d1_field(const ScalarField& phi, const ScalarField& v) {
    require(phi, "phi");
    require(v, "v");
    return ScalarField(std::make_shared<D1Node>(phi, v));
}

ScalarField frozen_trace(const ScalarField& f, std::vector<double> point, int anchor) {
    require(f, "trace");
    if (anchor < 0) throw std::invalid_argument("anchor id must be non-negative");
    return ScalarField(std::make_shared<FrozenTraceNode>(f, std::move(point), anchor));
}

Ansatz plain_structure(std::shared_ptr<Model> net) {
    require(net);
    return {network_field(net), {net}, {}};
}

Ansatz dirichlet_structure(const ScalarField& g, const ScalarField& phi, std::shared_ptr<Model> net) {
    require(g, "g");
    require(phi, "phi");
    require(net);
    return {g + phi * network_field(net), {net}, {}};
}

Ansatz robin_structure(const ScalarField& c, const ScalarField& h, const ScalarField& phi, std::shared_ptr<Model> net1,
                       std::shared_ptr<Model> net2, const ScalarField& phi_full) {
    require(c, "c");
    require(h, "h");
    require(phi, "phi");
    require(net1);
    require(net2);
    const ScalarField& pf = phi_full.valid() ? phi_full : phi;
    auto n1 = network_field(net1);
    auto n2 = network_field(net2);
    auto u = n1 + phi * (c * n1 + d1_field(phi, n1)) - phi * h + pf * pf * n2;
    std::vector<std::shared_ptr<Model>> models{net1};
    if (net2 != net1) models.push_back(net2);
    return {u, models, {}};
}

Ansatz neumann_structure(const ScalarField& h, const ScalarField& phi, std::shared_ptr<Model> net1,
                         std::shared_ptr<Model> net2, const ScalarField& phi_full) {
    require(h, "h");
    require(phi, "phi");
    require(net1);
    require(net2);
    const ScalarField& pf = phi_full.valid() ? phi_full : phi;
    auto n1 = network_field(net1);
    auto n2 = network_field(net2);
    auto u = n1 + phi * d1_field(phi, n1) - phi * h + pf * pf * n2;
    std::vector<std::shared_ptr<Model>> models{net1};
    if (net2 != net1) models.push_back(net2);
    return {u, models, {}};
}

Ansatz mixed_structure_I(const ScalarField& g, const ScalarField& c, const ScalarField& h, const ScalarField& phi1,
                         const ScalarField& phi2, std::shared_ptr<Model> net,
                         std::optional<std::vector<double>> trace_point) {
    require(g, "g");
    require(c, "c");
    require(h, "h");
    require(phi1, "phi1");
    require(phi2, "phi2");
    require(net);
    auto n = network_field(net);
    auto phi = r_equivalence_join({phi1, phi2}, 1);
    auto normal = d1_field(phi2, phi1 * n + g);
    Ansatz a{{}, {net}, {}};
    if (trace_point) {
        normal = frozen_trace(normal, *trace_point, 0);
        a.anchors.push_back(*trace_point);
    }
    a.field = g + phi1 * n + phi * ((phi2 + c * phi1) * n + normal + c * g - h);
    return a;
}

Ansatz mixed_structure_II(const ScalarField& g, const ScalarField& c, const ScalarField& h, const ScalarField& phi1,
                          const ScalarField& phi2, std::shared_ptr<Model> net) {
    require(g, "g");
    require(c, "c");
    require(h, "h");
    require(phi1, "phi1");
    require(phi2, "phi2");
    require(net);
    auto n = network_field(net);
    auto u2 = n + phi2 * (c * n + d1_field(phi2, n)) - phi2 * h;
    // u2 lives on Gamma_2, so its weight vanishes on Gamma_1
    std::vector<TransfinitePiece> pieces{{phi1, g, 1}, {phi2, u2, 2}};
    auto u = transfinite_interpolant(pieces) + phi1 * phi2 * phi2 * n;
    return {u, {net}, {}};
}

Ansatz clamped_plate_structure(const ScalarField& phi, std::shared_ptr<Model> net) {
    require(phi, "phi");
    require(net);
    return {phi * phi * network_field(net), {net}, {}};
}

}  // namespace adfnn
