#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "adfnn/jet.hpp"
#include "adfnn/param_tape.hpp"

namespace adfnn {

Activation parse_activation(const std::string& name);
std::string activation_name(Activation a);

// A trainable scalar-valued approximator with a flat parameter vector.
class Model {
public:
    virtual ~Model() = default;

    virtual int input_dim() const = 0;
    virtual std::span<double> params() = 0;
    virtual std::span<const double> params() const = 0;
    std::size_t num_params() const { return params().size(); }

    virtual double forward(std::span<const double> x) const = 0;
    virtual Jet forward(std::span<const Jet> x) const = 0;

    // X is d x P; out is layout.size() x P Taylor coefficients.
    void forward_batch(const Layout& layout, const Mat<double>& X, Mat<double>& out, ParamTape<double>* tape) const;
    void forward_batch(const Layout& layout, const Mat<float>& X, Mat<float>& out, ParamTape<float>* tape) const;
    // Adds d(loss)/d(theta) into grad given d(loss)/d(out).
    void backward_batch(const ParamTape<double>& tape, const Mat<double>& dout, std::span<double> grad) const;
    void backward_batch(const ParamTape<float>& tape, const Mat<float>& dout, std::span<double> grad) const;

    virtual std::unique_ptr<Model> clone() const = 0;

protected:
    virtual DenseStack<double> stack_double() const = 0;
    virtual DenseStack<float> stack_float() const = 0;
    virtual void scatter(const DenseStack<double>& g, std::span<double> grad) const = 0;
};

// Multilayer perceptron [d, N_1, ..., N_L, 1] with a linear output layer.
// Parameters are stored layer by layer: W_l (row-major), then b_l.
class Mlp final : public Model {
public:
    Mlp(std::vector<int> widths, Activation act);

    static Mlp init(std::vector<int> widths, Activation act, std::uint64_t seed);

    const std::vector<int>& widths() const { return widths_; }
    Activation activation() const { return act_; }

    int input_dim() const override { return widths_.front(); }
    std::span<double> params() override { return theta_; }
    std::span<const double> params() const override { return theta_; }
    double forward(std::span<const double> x) const override;
    Jet forward(std::span<const Jet> x) const override;
    std::unique_ptr<Model> clone() const override { return std::make_unique<Mlp>(*this); }

    static std::size_t count_params(const std::vector<int>& widths);

protected:
    DenseStack<double> stack_double() const override;
    DenseStack<float> stack_float() const override;
    void scatter(const DenseStack<double>& g, std::span<double> grad) const override;

private:
    template <class T>
    T forward_impl(std::span<const T> x) const;
    template <class S>
    DenseStack<S> stack() const;

    std::vector<int> widths_;
    Activation act_;
    std::vector<double> theta_;
};

// Single hidden layer of Gaussians exp(-(a_i (x - b_i))^2) with fixed centers
// b_i; parameters are the widths a_i followed by the output weights.
class RbfNet final : public Model {
public:
    RbfNet(std::vector<double> centers, std::uint64_t seed);

    const std::vector<double>& centers() const { return centers_; }

    int input_dim() const override { return 1; }
    std::span<double> params() override { return theta_; }
    std::span<const double> params() const override { return theta_; }
    double forward(std::span<const double> x) const override;
    Jet forward(std::span<const Jet> x) const override;
    std::unique_ptr<Model> clone() const override { return std::make_unique<RbfNet>(*this); }

protected:
    DenseStack<double> stack_double() const override;
    DenseStack<float> stack_float() const override;
    void scatter(const DenseStack<double>& g, std::span<double> grad) const override;

private:
    template <class S>
    DenseStack<S> stack() const;

    std::vector<double> centers_;
    std::vector<double> theta_;
};

struct AdamState {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    long step = 0;
    std::vector<double> m;
    std::vector<double> v;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// Bias-corrected Adam update; throws before touching theta on a non-finite gradient.
void adam_step(AdamState& state, std::span<double> theta, std::span<const double> grad);

// Text checkpoint: a versioned header, the model description, then one
// parameter per line in storage order.
void save_checkpoint(const Model& model, const std::string& path);
std::unique_ptr<Model> load_checkpoint(const std::string& path);

}  // namespace adfnn
