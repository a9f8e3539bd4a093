#pragma once

#include <span>
#include <vector>

#include "adfnn/field.hpp"

namespace adfnn {

// Taylor expansion of `f` at x on the given layout.
Jet taylor(const ScalarField& f, std::span<const double> x, const Layout& layout);

std::vector<double> grad_input(const ScalarField& f, std::span<const double> x);
double laplacian(const ScalarField& f, std::span<const double> x);
// u_xxxx + 2 u_xxyy + u_yyyy; two-dimensional fields only.
double biharmonic(const ScalarField& f, std::span<const double> x);

// Linear functionals of a jet. Each term is coefficient * d^alpha u.
struct DiffTerm {
    MultiIndex alpha{};
    double coef = 1.0;
};
using DiffOp = std::vector<DiffTerm>;

double apply_op(const DiffOp& op, const Jet& u);
// Weights w with apply_op(op, u) = sum_i w[i] * u[i] on `layout`.
std::vector<double> weights(const DiffOp& op, const Layout& layout);
// Smallest layout on which every term of the operators is available.
const Layout& layout_for(int dim, const std::vector<DiffOp>& ops);

DiffOp op_value();
DiffOp op_partial(int axis, int order = 1);
DiffOp op_laplacian(int dim);
DiffOp op_biharmonic2d();
DiffOp operator+(DiffOp a, const DiffOp& b);
DiffOp operator*(double s, DiffOp a);

}  // namespace adfnn
