#pragma once

#include <Eigen/Dense>
#include <vector>

#include "adfnn/jet.hpp"

namespace adfnn {

enum class Activation { Tanh, Relu, Repu3, Gaussian };

// out[m] = sigma^(m)(x) for m = 0..order; piecewise activations use 0 at the kink.
void activation_derivatives(Activation act, double x, int order, double* out);

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Hidden layers followed by a one-row linear output layer.
template <class S>
struct DenseStack {
    std::vector<Mat<S>> W;
    std::vector<Vec<S>> b;
    Activation act = Activation::Tanh;

    void zero_like(const DenseStack& other);
};

// Forward intermediates of a batched jet evaluation, replayed in reverse to
// accumulate parameter gradients. Activations are stored as width x (n*P)
// matrices whose column block k holds Taylor coefficient k of every point.
template <class S>
struct ParamTape {
    struct Layer {
        Mat<S> input;  // layer input jets (unused for the first layer)
        Mat<S> z;      // pre-activation jets, width x (n*P)
        Mat<S> base;   // tanh(z0) or exp(-z0^2), width x P
    };
    const Layout* layout = nullptr;
    int points = 0;
    Mat<S> X;
    std::vector<Layer> layers;
    Mat<S> last;
};

// X is d x P; out is n x P with row k the Taylor coefficient k of the output.
template <class S>
void dense_forward(const DenseStack<S>& net, const Layout& layout, const Mat<S>& X, Mat<S>& out,
                   ParamTape<S>* tape);

// dout is n x P; gradients are added into grad (shaped like net).
template <class S>
void dense_backward(const DenseStack<S>& net, const ParamTape<S>& tape, const Mat<S>& dout, DenseStack<S>& grad);

}  // namespace adfnn
