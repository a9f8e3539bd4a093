#include "adfnn/network.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>
#include <stdexcept>

namespace adfnn {

Activation parse_activation(const std::string& name) {
    if (name == "tanh") return Activation::Tanh;
    if (name == "relu") return Activation::Relu;
    if (name == "repu3") return Activation::Repu3;
    if (name == "gaussian") return Activation::Gaussian;
    throw std::invalid_argument("unknown activation: " + name);
}

std::string activation_name(Activation a) {
    switch (a) {
        case Activation::Tanh: return "tanh";
        case Activation::Relu: return "relu";
        case Activation::Repu3: return "repu3";
        case Activation::Gaussian: return "gaussian";
    }
    return "?";
}

namespace {

template <class S>
DenseStack<double> widen(const DenseStack<S>& g) {
    DenseStack<double> out;
    out.act = g.act;
    for (const auto& w : g.W) out.W.push_back(w.template cast<double>());
    for (const auto& b : g.b) out.b.push_back(b.template cast<double>());
    return out;
}

double activate(Activation act, double z) {
    switch (act) {
        case Activation::Tanh: return std::tanh(z);
        case Activation::Relu: return z > 0.0 ? z : 0.0;
        case Activation::Repu3: return z > 0.0 ? z * z * z : 0.0;
        case Activation::Gaussian: return std::exp(-z * z);
    }
    return z;
}

Jet activate(Activation act, const Jet& z) {
    int K = z.layout().max_degree();
    std::array<double, kMaxCoeffs + 1> d{};
    activation_derivatives(act, z.value(), K, d.data());
    return compose(z, std::span<const double>(d.data(), static_cast<std::size_t>(K + 1)));
}

}  // namespace

void Model::forward_batch(const Layout& layout, const Mat<double>& X, Mat<double>& out,
                          ParamTape<double>* tape) const {
    dense_forward(stack_double(), layout, X, out, tape);
}

void Model::forward_batch(const Layout& layout, const Mat<float>& X, Mat<float>& out, ParamTape<float>* tape) const {
    dense_forward(stack_float(), layout, X, out, tape);
}

void Model::backward_batch(const ParamTape<double>& tape, const Mat<double>& dout, std::span<double> grad) const {
    auto net = stack_double();
    DenseStack<double> g;
    g.zero_like(net);
    dense_backward(net, tape, dout, g);
    scatter(g, grad);
}

void Model::backward_batch(const ParamTape<float>& tape, const Mat<float>& dout, std::span<double> grad) const {
    auto net = stack_float();
    DenseStack<float> g;
    g.zero_like(net);
    dense_backward(net, tape, dout, g);
    scatter(widen(g), grad);
}

std::size_t Mlp::count_params(const std::vector<int>& widths) {
    std::size_t n = 0;
    for (std::size_t l = 1; l < widths.size(); ++l) {
        n += static_cast<std::size_t>(widths[l]) * static_cast<std::size_t>(widths[l - 1] + 1);
    }
    return n;
}

Mlp::Mlp(std::vector<int> widths, Activation act) : widths_(std::move(widths)), act_(act) {
    if (widths_.size() < 3) throw std::invalid_argument("network needs at least one hidden layer");
    if (widths_.back() != 1) throw std::invalid_argument("network output width must be 1");
    for (int w : widths_) {
        if (w < 1) throw std::invalid_argument("layer widths must be positive");
    }
    if (widths_.front() > kMaxDim) throw std::invalid_argument("network input dimension must be 1..4");
    theta_.assign(count_params(widths_), 0.0);
}

Mlp Mlp::init(std::vector<int> widths, Activation act, std::uint64_t seed) {
    Mlp net(std::move(widths), act);
    std::mt19937_64 rng(seed);
    std::size_t pos = 0;
    for (std::size_t l = 1; l < net.widths_.size(); ++l) {
        const int in = net.widths_[l - 1], out = net.widths_[l];
        const double r = std::sqrt(6.0 / (in + out));
        std::uniform_real_distribution<double> u(-r, r);
        for (int i = 0; i < out * in; ++i) net.theta_[pos++] = u(rng);
        pos += static_cast<std::size_t>(out);  // biases stay zero
    }
    return net;
}

template <class T>
T Mlp::forward_impl(std::span<const T> x) const {
    if (static_cast<int>(x.size()) != widths_.front()) throw std::invalid_argument("network input dimension mismatch");
    std::vector<T> a(x.begin(), x.end());
    std::size_t pos = 0;
    const std::size_t L = widths_.size() - 1;
    for (std::size_t l = 1; l <= L; ++l) {
        const int in = widths_[l - 1], out = widths_[l];
        const double* W = theta_.data() + pos;
        const double* b = W + static_cast<std::ptrdiff_t>(in) * out;
        std::vector<T> z;
        z.reserve(static_cast<std::size_t>(out));
        for (int i = 0; i < out; ++i) {
            T s = b[i] + 0.0 * a[0];
            for (int j = 0; j < in; ++j) s += W[i * in + j] * a[static_cast<std::size_t>(j)];
            z.push_back(l < L ? activate(act_, s) : s);
        }
        a = std::move(z);
        pos += static_cast<std::size_t>(out) * static_cast<std::size_t>(in + 1);
    }
    return a[0];
}

double Mlp::forward(std::span<const double> x) const { return forward_impl<double>(x); }
Jet Mlp::forward(std::span<const Jet> x) const { return forward_impl<Jet>(x); }

template <class S>
DenseStack<S> Mlp::stack() const {
    DenseStack<S> net;
    net.act = act_;
    std::size_t pos = 0;
    for (std::size_t l = 1; l < widths_.size(); ++l) {
        const int in = widths_[l - 1], out = widths_[l];
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> W(theta_.data() + pos,
                                                                                                 out, in);
        net.W.push_back(W.cast<S>());
        pos += static_cast<std::size_t>(out * in);
        net.b.push_back(Eigen::Map<const Eigen::VectorXd>(theta_.data() + pos, out).cast<S>());
        pos += static_cast<std::size_t>(out);
    }
    return net;
}

DenseStack<double> Mlp::stack_double() const { return stack<double>(); }
DenseStack<float> Mlp::stack_float() const { return stack<float>(); }

void Mlp::scatter(const DenseStack<double>& g, std::span<double> grad) const {
    if (grad.size() != theta_.size()) throw std::invalid_argument("gradient size mismatch");
    std::size_t pos = 0;
    for (std::size_t l = 0; l < g.W.size(); ++l) {
        const auto& W = g.W[l];
        for (Eigen::Index i = 0; i < W.rows(); ++i) {
            for (Eigen::Index j = 0; j < W.cols(); ++j) grad[pos++] += W(i, j);
        }
        for (Eigen::Index i = 0; i < g.b[l].size(); ++i) grad[pos++] += g.b[l](i);
    }
}

RbfNet::RbfNet(std::vector<double> centers, std::uint64_t seed) : centers_(std::move(centers)) {
    const std::size_t n = centers_.size();
    if (n < 1) throw std::invalid_argument("RBF network needs at least one center");
    theta_.assign(2 * n, 0.0);
    // widths start at the inverse center spacing
    double spacing = n > 1 ? (centers_.back() - centers_.front()) / static_cast<double>(n - 1) : 1.0;
    if (!(spacing > 0.0)) spacing = 1.0;
    for (std::size_t i = 0; i < n; ++i) theta_[i] = 1.0 / spacing;
    std::mt19937_64 rng(seed);
    const double r = std::sqrt(6.0 / static_cast<double>(n + 1));
    std::uniform_real_distribution<double> u(-r, r);
    for (std::size_t i = 0; i < n; ++i) theta_[n + i] = u(rng);
}

double RbfNet::forward(std::span<const double> x) const {
    const std::size_t n = centers_.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = theta_[i] * (x[0] - centers_[i]);
        s += theta_[n + i] * std::exp(-z * z);
    }
    return s;
}

Jet RbfNet::forward(std::span<const Jet> x) const {
    const std::size_t n = centers_.size();
    Jet s(x[0].layout(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        Jet z = theta_[i] * (x[0] - centers_[i]);
        s += theta_[n + i] * activate(Activation::Gaussian, z);
    }
    return s;
}

template <class S>
DenseStack<S> RbfNet::stack() const {
    const auto n = static_cast<Eigen::Index>(centers_.size());
    DenseStack<S> net;
    net.act = Activation::Gaussian;
    Mat<S> W1(n, 1);
    Vec<S> b1(n);
    Mat<S> W2(1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        W1(i, 0) = static_cast<S>(theta_[static_cast<std::size_t>(i)]);
        b1(i) = static_cast<S>(-theta_[static_cast<std::size_t>(i)] * centers_[static_cast<std::size_t>(i)]);
        W2(0, i) = static_cast<S>(theta_[static_cast<std::size_t>(n + i)]);
    }
    net.W = {W1, W2};
    net.b = {b1, Vec<S>::Zero(1)};
    return net;
}

DenseStack<double> RbfNet::stack_double() const { return stack<double>(); }
DenseStack<float> RbfNet::stack_float() const { return stack<float>(); }

void RbfNet::scatter(const DenseStack<double>& g, std::span<double> grad) const {
    const std::size_t n = centers_.size();
    if (grad.size() != theta_.size()) throw std::invalid_argument("gradient size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<Eigen::Index>(i);
        grad[i] += g.W[0](k, 0) - g.b[0](k) * centers_[i];
        grad[n + i] += g.W[1](0, k);
    }
}

void adam_step(AdamState& s, std::span<double> theta, std::span<const double> grad) {
    if (grad.size() != theta.size()) throw std::invalid_argument("gradient size mismatch");
    if (s.m.size() != theta.size()) {
        s.m.assign(theta.size(), 0.0);
        s.v.assign(theta.size(), 0.0);
    }
    for (std::size_t i = 0; i < grad.size(); ++i) {
        if (!std::isfinite(grad[i])) {
            throw std::runtime_error("non-finite gradient at parameter " + std::to_string(i));
        }
    }
    ++s.step;
    const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
    const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
    for (std::size_t i = 0; i < theta.size(); ++i) {
        s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * grad[i];
        s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * grad[i] * grad[i];
        double mhat = s.m[i] / c1;
        double vhat = s.v[i] / c2;
        theta[i] -= s.lr * mhat / (std::sqrt(vhat) + s.eps);
    }
}

namespace {
constexpr const char* kCheckpointHeader = "adfnn-checkpoint v1";
}

void save_checkpoint(const Model& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
    out << kCheckpointHeader << '\n';
    if (const auto* mlp = dynamic_cast<const Mlp*>(&model)) {
        out << "mlp " << activation_name(mlp->activation());
        for (int w : mlp->widths()) out << ' ' << w;
        out << '\n';
    } else if (const auto* rbf = dynamic_cast<const RbfNet*>(&model)) {
        out << "rbf " << rbf->centers().size() << '\n' << std::setprecision(17);
        for (double c : rbf->centers()) out << c << '\n';
    } else {
        throw std::invalid_argument("unsupported model type for checkpoint");
    }
    out << std::setprecision(17);
    for (double p : model.params()) out << p << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::unique_ptr<Model> load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
    std::string line;
    std::getline(in, line);
    if (line != kCheckpointHeader) throw std::runtime_error("unrecognized checkpoint header in " + path);
    std::getline(in, line);
    std::istringstream desc(line);
    std::string kind;
    desc >> kind;
    std::unique_ptr<Model> model;
    if (kind == "mlp") {
        std::string act;
        desc >> act;
        std::vector<int> widths;
        int w;
        while (desc >> w) widths.push_back(w);
        model = std::make_unique<Mlp>(widths, parse_activation(act));
    } else if (kind == "rbf") {
        std::size_t n = 0;
        desc >> n;
        std::vector<double> centers(n);
        for (auto& c : centers) in >> c;
        model = std::make_unique<RbfNet>(centers, 0);
    } else {
        throw std::runtime_error("unknown model kind in checkpoint: " + kind);
    }
    for (auto& p : model->params()) {
        if (!(in >> p)) throw std::runtime_error("truncated checkpoint: " + path);
    }
    return model;
}

}  // namespace adfnn
