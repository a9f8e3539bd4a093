#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "adfnn/derivatives.hpp"
#include "adfnn/param_tape.hpp"
#include "adfnn/structures.hpp"

namespace adfnn {

using Points = Mat<double>;  // d x P, one point per column

// ---- sampling ----

enum class SampleStrategy { Grid, Uniform, Halton };
SampleStrategy parse_strategy(const std::string& name);

struct SamplingDomain {
    std::vector<double> lo, hi;                                 // bounding box
    std::function<bool(std::span<const double>)> inside;       // strict membership
    std::vector<std::vector<double>> vertices;                 // corners to keep away from
    // true: the margin is a band along the whole boundary (box shrunk by delta);
    // false: only a distance from the vertices
    bool band = false;
    // Replaces the tensor grid for SampleStrategy::Grid when set: n points
    // with the margin delta applied by the generator.
    std::function<Points(int n, double delta)> lattice;

    int dim() const { return static_cast<int>(lo.size()); }
    static SamplingDomain box(std::vector<double> lo, std::vector<double> hi);
};

Points sample_interior(const SamplingDomain& domain, int n, SampleStrategy strategy, double delta_margin,
                       std::uint64_t seed);

// A boundary piece as a curve t in [0, 1] -> point, with its length.
struct BoundaryCurve {
    std::function<std::vector<double>(double)> at;
    double length = 0.0;
};

// n points at evenly spaced parameters (Grid) or uniform random parameters.
Points sample_boundary(const BoundaryCurve& curve, int n, SampleStrategy strategy, std::uint64_t seed);
Points concat(const std::vector<Points>& parts);

// Tensor grid on [lo, hi] with `per_axis` points per axis, filtered by `inside` when set.
Points tensor_grid(const std::vector<double>& lo, const std::vector<double>& hi, int per_axis,
                   const std::function<bool(std::span<const double>)>& inside = {});

// ---- losses ----

enum class GroupKind {
    Residual,  // (F_0 - target)^2
    Energy,    // sum_i (a_i F_i^2 / 2 + b_i F_i)
    Eikonal,   // (|F| - 1)^2
    Rayleigh,  // sum F_1^2 / sum F_0^2 + (mean F_0^2 - 1)^2, over the group
};

// Loss contribution weight * mean over points (Rayleigh: weight * group value).
// Functional i at point p is apply_op(ops[i], ansatz jet at p).
struct PointGroup {
    std::string name;
    GroupKind kind = GroupKind::Residual;
    Points points;
    std::vector<DiffOp> ops;
    Eigen::VectorXd target;  // Residual: per point
    Eigen::MatrixXd a, b;    // Energy: ops x points
    double weight = 1.0;
};

PointGroup residual_group(std::string name, const Points& pts, const DiffOp& op, const ScalarField& f,
                          double weight = 1.0);
PointGroup boundary_mismatch_group(std::string name, const Points& pts, const ScalarField& g, double weight = 1.0);
// |Omega| * mean(|grad u|^2 / 2 - f u)
PointGroup ritz_poisson_group(const Points& pts, const ScalarField& f, double measure);
// |Gamma| * mean(c u^2 / 2 - h u)
PointGroup ritz_robin_group(const Points& pts, const ScalarField& c, const ScalarField& h, double measure);
// |Omega| * mean(rigidity (lap u)^2 / 2 - f u); 1D uses u'' in place of the Laplacian
PointGroup ritz_plate_group(const Points& pts, const ScalarField& f, double measure, double rigidity = 1.0);
// coef * (op u)(point)
PointGroup point_functional_group(std::string name, std::vector<double> point, const DiffOp& op, double coef);
PointGroup rayleigh_group(const Points& pts);
PointGroup eikonal_group(const Points& pts);

// Direct evaluation through the ansatz at every point (no precomputation).
double evaluate_loss(const Ansatz& ansatz, const std::vector<PointGroup>& groups);

double collocation_loss(const Ansatz& ansatz, const DiffOp& op, const ScalarField& f, const Points& pts);
// w in [0, 1] weighs the PDE term, 1 - w the boundary term; w < 0 means a plain sum.
double standard_pinn_loss(const Ansatz& net, const DiffOp& op, const ScalarField& f, const Points& interior,
                          const Points& boundary, const ScalarField& g, double w = -1.0);
double ritz_poisson_loss(const Ansatz& ansatz, const ScalarField& f, const Points& interior, double measure);
double ritz_plate_loss(const Ansatz& ansatz, const ScalarField& f, const Points& interior, double measure);
double rayleigh_loss(const Ansatz& ansatz, const Points& pts);
double eikonal_loss(const Ansatz& ansatz, const Points& pts);

// ||u_pred - u_exact||_2 / ||u_exact||_2 over the grid (absolute when the exact norm is zero).
double normalized_error(const ScalarField& u_pred, const ScalarField& u_exact, const Points& grid);
double max_abs_error(const ScalarField& u_pred, const ScalarField& u_exact, const Points& grid);

// ---- training ----

struct TrainConfig {
    int epochs = 1000;
    double lr = 1e-3;
    bool single_precision = false;
    int trace_every = 100;  // error monitor interval; the loss is recorded every epoch
    int chunk = 512;
};

struct TraceRecord {
    int epoch = 0;
    double loss = 0.0;
    double error = std::numeric_limits<double>::quiet_NaN();
};

struct TrainTrace {
    std::vector<TraceRecord> records;
};

class Trainer {
public:
    Trainer(Ansatz ansatz, std::vector<PointGroup> groups);
    ~Trainer();
    Trainer(const Trainer&) = delete;
    Trainer& operator=(const Trainer&) = delete;

    // Relative L2 error on `grid` recorded every trace_every epochs and at the end.
    void monitor(const ScalarField& exact, const Points& grid);

    std::size_t num_params() const;
    std::vector<double> params() const;
    void set_params(std::span<const double> theta);

    double loss(bool single_precision = false);
    double loss_and_gradient(std::vector<double>& grad, bool single_precision = false);
    // Largest |F_affine - F_direct| over a few points per group with random network jets.
    double affinity_defect(int points_per_group = 3, std::uint64_t seed = 1) const;

    TrainTrace train(const TrainConfig& config);

    const Ansatz& ansatz() const { return ansatz_; }

private:
    struct Impl;
    Ansatz ansatz_;
    std::unique_ptr<Impl> impl_;
};

}  // namespace adfnn
