#pragma once

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adfnn/geometry.hpp"
#include "adfnn/solvers.hpp"

namespace adfnn::bench {

enum class Method { Collocation, Ritz, Eigen, Eikonal };
enum class AdfKind { Req, Mvp, Exact, Product };
enum class LossKind { ExactBc, Standard };
enum class Pde { Poisson, AdvectionDiffusion, Biharmonic, Eigen, Eikonal };

Method parse_method(const std::string& s);
AdfKind parse_adf(const std::string& s);
LossKind parse_loss(const std::string& s);
std::string method_name(Method m);
std::string adf_name(AdfKind a);
std::string loss_name(LossKind l);

// Fully resolved run settings.
struct Config {
    Method method = Method::Collocation;
    AdfKind adf = AdfKind::Req;
    int m = 1;
    int p = 1;
    std::vector<int> hidden{50, 50};
    Activation activation = Activation::Tanh;
    int epochs = 10000;
    double lr = 1e-3;
    std::uint64_t seed = 42;
    int n_interior = 100;
    int n_boundary = 0;
    double delta_margin = -1.0;  // < 0: the problem default for the method
    SampleStrategy sampling = SampleStrategy::Grid;
    LossKind loss = LossKind::ExactBc;
    double loss_weight = -1.0;  // < 0: plain sum of the standard-loss terms
    bool single_precision = false;
    int trace_every = 100;
    int eval_per_axis = 201;
};

// Command-line style overrides; unset fields keep the problem defaults.
struct Overrides {
    std::optional<Method> method;
    std::optional<AdfKind> adf;
    std::optional<int> m, p;
    std::optional<std::vector<int>> hidden;
    std::optional<Activation> activation;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<std::uint64_t> seed;
    std::optional<int> n_interior, n_boundary;
    std::optional<double> delta_margin;
    std::optional<SampleStrategy> sampling;
    std::optional<LossKind> loss;
    std::optional<double> loss_weight;
    std::optional<bool> single_precision;
    std::optional<int> trace_every;
    std::optional<int> eval_per_axis;
};

// A boundary piece for the standard (penalty) loss: `op u = data` at sampled points.
struct BoundaryPiece {
    std::string name;
    std::function<Points(int n, std::uint64_t seed)> sample;
    DiffOp op;
    ScalarField data;
    int min_points = 1;
};

struct ProblemSpec {
    std::string name;
    std::string summary;
    std::string domain;  // descriptor shown by `list`
    int dim = 1;
    Pde pde = Pde::Poisson;
    double alpha = 0.0;  // advection-diffusion coefficient
    ScalarField f;
    std::optional<ScalarField> exact;
    bool exact_numeric = false;  // exact known only pointwise (no derivatives)
    bool exact_up_to_sign = false;

    SamplingDomain interior;
    double measure = 1.0;
    double collocation_margin = 0.0;
    double ritz_margin = 0.0;
    std::vector<double> eval_lo, eval_hi;
    std::function<bool(std::span<const double>)> eval_inside;
    // > 0: errors are measured at this many fixed uniform random interior
    // points instead of the tensor grid
    int eval_samples = 0;

    std::vector<Method> methods;
    std::vector<AdfKind> adfs;
    std::map<Method, std::string> rejected;  // method -> reason
    bool standard_loss = false;
    std::vector<BoundaryPiece> boundary;

    Config defaults;
    // Exact-BC trial function for the resolved config.
    std::function<Ansatz(const Config&)> ansatz;
    // Extra energy terms for Ritz (point loads, moments).
    std::function<std::vector<PointGroup>(const Config&)> ritz_extras;
};

// MLP [dim, hidden..., 1], or an RBF network with centres spread over [lo, hi]
// for the Gaussian activation in one dimension.
std::shared_ptr<Model> make_network(const Config& cfg, int dim, double lo, double hi, std::uint64_t seed);

const std::vector<ProblemSpec>& registry();
const ProblemSpec& find_problem(const std::string& name);

// Merges overrides into the problem defaults and validates the combination.
Config resolve(const ProblemSpec& spec, const Overrides& ov);

// PDE residual of a field at x (for eigenproblems with omega = pi).
double pde_residual(const ProblemSpec& spec, const ScalarField& u, std::span<const double> x);

struct Setup {
    Ansatz ansatz;
    std::vector<PointGroup> groups;
    Points interior;
};
Setup build(const ProblemSpec& spec, const Config& cfg);

Points evaluation_grid(const ProblemSpec& spec, const Config& cfg);

struct RunResult {
    std::string problem;
    Config config;
    TrainTrace trace;
    double final_loss = 0.0;
    double final_error = std::numeric_limits<double>::quiet_NaN();
    double max_error = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> metrics;
    Points grid;
    Eigen::VectorXd u_pred, u_exact;  // u_exact empty without an exact solution
    Ansatz ansatz;
};

RunResult run(const std::string& problem, const Overrides& ov = {});
RunResult run(const ProblemSpec& spec, const Config& cfg);

// Writes trace.csv and field.csv into `dir` (created when missing).
void export_result(const RunResult& result, const std::string& dir);
std::string trace_csv(const RunResult& result);
std::string field_csv(const RunResult& result);

// Shortest decimal string that parses back to the same double.
std::string format_number(double v);

}  // namespace adfnn::bench
