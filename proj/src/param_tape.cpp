#include "adfnn/param_tape.hpp"

#include <cmath>
#include <stdexcept>

namespace adfnn {

void activation_derivatives(Activation act, double x, int order, double* out) {
    for (int m = 0; m <= order; ++m) out[m] = 0.0;
    switch (act) {
        case Activation::Tanh:
            tanh_derivatives(x, order, out);
            break;
        case Activation::Gaussian:
            gaussian_derivatives(x, order, out);
            break;
        case Activation::Relu:
            out[0] = x > 0.0 ? x : 0.0;
            if (order >= 1) out[1] = x > 0.0 ? 1.0 : 0.0;
            break;
        case Activation::Repu3: {
            double p = x > 0.0 ? x : 0.0;
            const double v[4] = {p * p * p, 3.0 * p * p, 6.0 * p, x > 0.0 ? 6.0 : 0.0};
            for (int m = 0; m <= order && m < 4; ++m) out[m] = v[m];
            break;
        }
    }
}

template <class S>
void DenseStack<S>::zero_like(const DenseStack& other) {
    act = other.act;
    W.resize(other.W.size());
    b.resize(other.b.size());
    for (std::size_t l = 0; l < other.W.size(); ++l) {
        W[l] = Mat<S>::Zero(other.W[l].rows(), other.W[l].cols());
        b[l] = Vec<S>::Zero(other.b[l].size());
    }
}

namespace {

constexpr Eigen::Index kTile = 256;

double inv_factorial(int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return 1.0 / f;
}

// Index lists for composing a scalar series with jets on one layout.
struct Plan {
    int n = 0, K = 0;
    std::vector<std::vector<int>> ks;                       // [m]: k >= 1 with deg(k) >= m
    std::vector<std::vector<Layout::Product>> prods;        // [m]: products feeding power m

    explicit Plan(const Layout& L) : n(L.size()), K(L.max_degree()), ks(static_cast<std::size_t>(K + 1)),
                                     prods(static_cast<std::size_t>(K + 1)) {
        for (int m = 1; m <= K; ++m) {
            for (int k = 1; k < n; ++k)
                if (degree(L.index(k)) >= m) ks[static_cast<std::size_t>(m)].push_back(k);
            if (m < 2) continue;
            for (const auto& p : L.nonconstant_products()) {
                if (degree(L.index(p.k)) >= m && degree(L.index(p.i)) >= m - 1) prods[static_cast<std::size_t>(m)].push_back(p);
            }
        }
    }
};

template <class S>
using ArrMap = Eigen::Map<Eigen::Array<S, Eigen::Dynamic, 1>>;
template <class S>
using CArrMap = Eigen::Map<const Eigen::Array<S, Eigen::Dynamic, 1>>;

// Activation-specific base values kept on the tape: tanh z or exp(-z^2).
template <class S>
void base_values(Activation act, const S* z, Eigen::Index T, S* out) {
    if (act == Activation::Tanh) {
        ArrMap<S>(out, T) = CArrMap<S>(z, T).tanh();
    } else if (act == Activation::Gaussian) {
        ArrMap<S>(out, T) = (-CArrMap<S>(z, T).square()).exp();
    }
}

// s[m*T + e] = sigma^(m)(z_e)/m! for m = 0..order.
template <class S>
void series_tile(Activation act, const S* z, const S* base, Eigen::Index T, int order, S* s) {
    switch (act) {
        case Activation::Tanh:
            for (int m = 0; m <= order; ++m) {
                const auto& q = tanh_derivative_poly(m);
                const S f = static_cast<S>(inv_factorial(m));
                S* out = s + m * T;
                for (Eigen::Index e = 0; e < T; ++e) {
                    S acc = static_cast<S>(q.back());
                    for (std::size_t k = q.size() - 1; k-- > 0;) acc = acc * base[e] + static_cast<S>(q[k]);
                    out[e] = acc * f;
                }
            }
            break;
        case Activation::Gaussian:
            for (Eigen::Index e = 0; e < T; ++e) {
                S h0 = 1, h1 = 2 * z[e];
                for (int m = 0; m <= order; ++m) {
                    const S h = m == 0 ? h0 : h1;
                    s[m * T + e] = ((m % 2) ? -h : h) * base[e] * static_cast<S>(inv_factorial(m));
                    if (m >= 1) {
                        const S h2 = 2 * z[e] * h1 - static_cast<S>(2 * m) * h0;
                        h0 = h1;
                        h1 = h2;
                    }
                }
            }
            break;
        case Activation::Relu:
            for (Eigen::Index e = 0; e < T; ++e) {
                const bool pos = z[e] > S(0);
                for (int m = 0; m <= order; ++m) s[m * T + e] = m == 0 ? (pos ? z[e] : S(0)) : (m == 1 && pos ? S(1) : S(0));
            }
            break;
        case Activation::Repu3:
            for (Eigen::Index e = 0; e < T; ++e) {
                const S p = z[e] > S(0) ? z[e] : S(0);
                const S v[4] = {p * p * p, 3 * p * p, 3 * p, z[e] > S(0) ? S(1) : S(0)};
                for (int m = 0; m <= order; ++m) s[m * T + e] = m < 4 ? v[m] : S(0);
            }
            break;
    }
}

// Powers (z - z0)^m, m = 2..K, for one tile; level 1 is read from Z directly.
// pw[((m - 2) * n + k) * T + e]
template <class S>
void powers_tile(const Plan& pl, const S* Z, Eigen::Index stride, Eigen::Index T, S* pw) {
    const int n = pl.n;
    if (pl.K < 2) return;
    std::fill(pw, pw + static_cast<Eigen::Index>(pl.K - 1) * n * T, S(0));
    for (int m = 2; m <= pl.K; ++m) {
        S* cur = pw + static_cast<Eigen::Index>(m - 2) * n * T;
        for (const auto& p : pl.prods[static_cast<std::size_t>(m)]) {
            const S* prev = m == 2 ? Z + p.i * stride : pw + (static_cast<Eigen::Index>(m - 3) * n + p.i) * T;
            const S* delta = Z + p.j * stride;
            S* out = cur + p.k * T;
            for (Eigen::Index e = 0; e < T; ++e) out[e] += prev[e] * delta[e];
        }
    }
}

template <class S>
const S* power(const Plan& pl, int m, int k, const S* Z, Eigen::Index stride, const S* pw, Eigen::Index T) {
    return m == 1 ? Z + k * stride : pw + (static_cast<Eigen::Index>(m - 2) * pl.n + k) * T;
}

// A = sigma(Z) coefficientwise; Z and A are width x (n*P).
template <class S>
void activate(Activation act, const Layout& L, const Mat<S>& Z, Mat<S>& A, Mat<S>* base_out) {
    const Plan pl(L);
    const Eigen::Index stride = Z.rows() * (Z.cols() / pl.n);
    A.resize(Z.rows(), Z.cols());
    Mat<S> base(Z.rows(), Z.cols() / pl.n);
    std::vector<S> s(static_cast<std::size_t>((pl.K + 1) * kTile));
    std::vector<S> pw(static_cast<std::size_t>(std::max(pl.K - 1, 0) * pl.n * kTile));
    for (Eigen::Index e0 = 0; e0 < stride; e0 += kTile) {
        const Eigen::Index T = std::min(kTile, stride - e0);
        const S* z = Z.data() + e0;
        S* a = A.data() + e0;
        S* b = base.data() + e0;
        base_values(act, z, T, b);
        series_tile(act, z, b, T, pl.K, s.data());
        powers_tile(pl, z, stride, T, pw.data());
        std::copy(s.data(), s.data() + T, a);
        for (int k = 1; k < pl.n; ++k) std::fill(a + k * stride, a + k * stride + T, S(0));
        for (int m = 1; m <= pl.K; ++m) {
            const S* sm = s.data() + m * T;
            for (int k : pl.ks[static_cast<std::size_t>(m)]) {
                const S* p = power(pl, m, k, z, stride, pw.data(), T);
                S* out = a + k * stride;
                for (Eigen::Index e = 0; e < T; ++e) out[e] += sm[e] * p[e];
            }
        }
    }
    if (base_out) *base_out = std::move(base);
}

template <class S>
Mat<S> activate_backward(Activation act, const Layout& L, const typename ParamTape<S>::Layer& rec, const Mat<S>& dA) {
    const Plan pl(L);
    const Mat<S>& Z = rec.z;
    const Eigen::Index stride = Z.rows() * (Z.cols() / pl.n);
    const int n = pl.n, K = pl.K;
    Mat<S> dZ(Z.rows(), Z.cols());
    std::vector<S> s(static_cast<std::size_t>((K + 2) * kTile));
    std::vector<S> pw(static_cast<std::size_t>(std::max(K - 1, 0) * n * kTile));
    std::vector<S> pbar(static_cast<std::size_t>(K * n * kTile));
    for (Eigen::Index e0 = 0; e0 < stride; e0 += kTile) {
        const Eigen::Index T = std::min(kTile, stride - e0);
        const S* z = Z.data() + e0;
        const S* da = dA.data() + e0;
        S* dz = dZ.data() + e0;
        series_tile(act, z, rec.base.data() + e0, T, K + 1, s.data());
        powers_tile(pl, z, stride, T, pw.data());
        // d/dz0 of s_m is (m + 1) s_{m+1}
        for (Eigen::Index e = 0; e < T; ++e) dz[e] = da[e] * s[static_cast<std::size_t>(T + e)];
        std::fill(pbar.begin(), pbar.end(), S(0));
        for (int m = 1; m <= K; ++m) {
            const S* sm = s.data() + m * T;
            const S* sm1 = s.data() + (m + 1) * T;
            const S scale = static_cast<S>(m + 1);
            S* pb = pbar.data() + static_cast<Eigen::Index>(m - 1) * n * T;
            for (int k : pl.ks[static_cast<std::size_t>(m)]) {
                const S* p = power(pl, m, k, z, stride, pw.data(), T);
                const S* g = da + k * stride;
                S* out = pb + k * T;
                for (Eigen::Index e = 0; e < T; ++e) {
                    dz[e] += scale * sm1[e] * g[e] * p[e];
                    out[e] = sm[e] * g[e];
                }
            }
        }
        for (int m = K; m >= 2; --m) {
            const S* pm_bar = pbar.data() + static_cast<Eigen::Index>(m - 1) * n * T;
            S* lower = pbar.data() + static_cast<Eigen::Index>(m - 2) * n * T;
            for (const auto& p : pl.prods[static_cast<std::size_t>(m)]) {
                const S* prev = power(pl, m - 1, p.i, z, stride, pw.data(), T);
                const S* delta = z + p.j * stride;
                const S* src = pm_bar + p.k * T;
                S* oi = lower + p.i * T;
                S* oj = pbar.data() + p.j * T;
                for (Eigen::Index e = 0; e < T; ++e) {
                    oi[e] += src[e] * delta[e];
                    oj[e] += src[e] * prev[e];
                }
            }
        }
        for (int k = 1; k < n; ++k) {
            const S* src = K >= 1 ? pbar.data() + k * T : nullptr;
            S* out = dz + k * stride;
            for (Eigen::Index e = 0; e < T; ++e) out[e] = src ? src[e] : S(0);
        }
    }
    return dZ;
}

}  // namespace

template <class S>
void dense_forward(const DenseStack<S>& net, const Layout& layout, const Mat<S>& X, Mat<S>& out, ParamTape<S>* tape) {
    const int n = layout.size();
    const int P = static_cast<int>(X.cols());
    const int d = static_cast<int>(X.rows());
    const std::size_t hidden = net.W.size() - 1;
    if (net.W[0].cols() != d) throw std::invalid_argument("network input dimension mismatch");
    if (tape) {
        tape->layout = &layout;
        tape->points = P;
        tape->X = X;
        tape->layers.assign(hidden, {});
    }

    Mat<S> A;
    {
        const Mat<S>& W = net.W[0];
        Mat<S> Z = Mat<S>::Zero(W.rows(), static_cast<Eigen::Index>(n) * P);
        Z.leftCols(P).noalias() = W * X;
        Z.leftCols(P).colwise() += net.b[0];
        for (int j = 0; j < d; ++j) {
            MultiIndex e{};
            e[static_cast<std::size_t>(j)] = 1;
            int k = layout.find(e);
            if (k >= 0) Z.middleCols(static_cast<Eigen::Index>(k) * P, P).colwise() = W.col(j);
        }
        activate<S>(net.act, layout, Z, A, tape ? &tape->layers[0].base : nullptr);
        if (tape) tape->layers[0].z = std::move(Z);
    }
    for (std::size_t l = 1; l < hidden; ++l) {
        Mat<S> Z;
        Z.noalias() = net.W[l] * A;
        Z.leftCols(P).colwise() += net.b[l];
        if (tape) tape->layers[l].input = std::move(A);
        activate<S>(net.act, layout, Z, A, tape ? &tape->layers[l].base : nullptr);
        if (tape) tape->layers[l].z = std::move(Z);
    }
    Mat<S> o;
    o.noalias() = net.W[hidden] * A;
    o.leftCols(P).array() += net.b[hidden](0);
    out.resize(n, P);
    for (int k = 0; k < n; ++k) out.row(k) = o.middleCols(static_cast<Eigen::Index>(k) * P, P);
    if (tape) tape->last = std::move(A);
}

template <class S>
void dense_backward(const DenseStack<S>& net, const ParamTape<S>& tape, const Mat<S>& dout, DenseStack<S>& grad) {
    const Layout& layout = *tape.layout;
    const int n = layout.size();
    const int P = tape.points;
    const std::size_t hidden = net.W.size() - 1;

    Mat<S> dO(1, static_cast<Eigen::Index>(n) * P);
    for (int k = 0; k < n; ++k) dO.middleCols(static_cast<Eigen::Index>(k) * P, P) = dout.row(k);
    grad.W[hidden].noalias() += dO * tape.last.transpose();
    grad.b[hidden](0) += dO.leftCols(P).sum();
    Mat<S> dA;
    dA.noalias() = net.W[hidden].transpose() * dO;

    for (std::size_t l = hidden; l-- > 0;) {
        Mat<S> dZ = activate_backward<S>(net.act, layout, tape.layers[l], dA);
        grad.b[l] += dZ.leftCols(P).rowwise().sum();
        if (l > 0) {
            grad.W[l].noalias() += dZ * tape.layers[l].input.transpose();
            dA.noalias() = net.W[l].transpose() * dZ;
        } else {
            grad.W[0].noalias() += dZ.leftCols(P) * tape.X.transpose();
            for (int j = 0; j < static_cast<int>(tape.X.rows()); ++j) {
                MultiIndex e{};
                e[static_cast<std::size_t>(j)] = 1;
                int k = layout.find(e);
                if (k >= 0) grad.W[0].col(j) += dZ.middleCols(static_cast<Eigen::Index>(k) * P, P).rowwise().sum();
            }
        }
    }
}

template struct DenseStack<double>;
template struct DenseStack<float>;
template void dense_forward<double>(const DenseStack<double>&, const Layout&, const Mat<double>&, Mat<double>&,
                                    ParamTape<double>*);
template void dense_forward<float>(const DenseStack<float>&, const Layout&, const Mat<float>&, Mat<float>&,
                                   ParamTape<float>*);
template void dense_backward<double>(const DenseStack<double>&, const ParamTape<double>&, const Mat<double>&,
                                     DenseStack<double>&);
template void dense_backward<float>(const DenseStack<float>&, const ParamTape<float>&, const Mat<float>&,
                                    DenseStack<float>&);

}  // namespace adfnn
