#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "adfnn/field.hpp"
#include "adfnn/network.hpp"

namespace adfnn {

// Trial function that meets its boundary conditions for every parameter
// value. Affine in the outputs of `models`; `anchors[k]` is the point whose
// network trace is bound under anchor id k.
struct Ansatz {
    ScalarField field;
    std::vector<std::shared_ptr<Model>> models;
    std::vector<std::vector<double>> anchors;

    double operator()(std::span<const double> x) const { return field(x); }
    double operator()(std::initializer_list<double> x) const { return field(x); }
};

// The network output as a field. Uses a bound jet from the context when one
// is present for (model, anchor), else evaluates the model.
ScalarField network_field(std::shared_ptr<const Model> model);

// -grad(phi) . grad(v), evaluated as a field everywhere.
ScalarField d1_field(const ScalarField& phi, const ScalarField& v);

// Constant field equal to the value of f at `point`, with network jets there
// bound under anchor id `anchor`.
ScalarField frozen_trace(const ScalarField& f, std::vector<double> point, int anchor);

Ansatz plain_structure(std::shared_ptr<Model> net);

// g + phi N
Ansatz dirichlet_structure(const ScalarField& g, const ScalarField& phi, std::shared_ptr<Model> net);

// [1 + phi (c + D1)](N1) - phi h + phi_full^2 N2; phi_full defaults to phi.
Ansatz robin_structure(const ScalarField& c, const ScalarField& h, const ScalarField& phi, std::shared_ptr<Model> net1,
                       std::shared_ptr<Model> net2, const ScalarField& phi_full = {});
Ansatz neumann_structure(const ScalarField& h, const ScalarField& phi, std::shared_ptr<Model> net1,
                         std::shared_ptr<Model> net2, const ScalarField& phi_full = {});

// Dirichlet g on the zero set of phi1, du/dn + c u = h on that of phi2, one
// network. With `trace_point` set, the D1 terms are frozen at that point (a
// one-dimensional Gamma_2); otherwise they are fields.
Ansatz mixed_structure_I(const ScalarField& g, const ScalarField& c, const ScalarField& h, const ScalarField& phi1,
                         const ScalarField& phi2, std::shared_ptr<Model> net,
                         std::optional<std::vector<double>> trace_point = std::nullopt);

// Transfinite blend of u1 = g (mu = 1) and the Robin structure on phi2 (mu = 2),
// plus phi1 phi2^2 N.
Ansatz mixed_structure_II(const ScalarField& g, const ScalarField& c, const ScalarField& h, const ScalarField& phi1,
                          const ScalarField& phi2, std::shared_ptr<Model> net);

// phi^2 N: value and normal derivative vanish on the zero set of phi.
Ansatz clamped_plate_structure(const ScalarField& phi, std::shared_ptr<Model> net);

}  // namespace adfnn
