#include "adfnn/jet.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace adfnn {

int degree(const MultiIndex& a) {
    int s = 0;
    for (auto v : a) s += v;
    return s;
}

namespace {

bool index_less(const MultiIndex& a, const MultiIndex& b) {
    int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
    MultiIndex r{};
    for (int i = 0; i < kMaxDim; ++i) r[i] = static_cast<std::uint8_t>(a[i] + b[i]);
    return r;
}

MultiIndex unit(int axis, int k = 1) {
    MultiIndex r{};
    r[static_cast<std::size_t>(axis)] = static_cast<std::uint8_t>(k);
    return r;
}

std::mutex g_layout_mutex;
std::map<std::pair<int, std::vector<MultiIndex>>, std::unique_ptr<Layout>>& layout_cache() {
    static std::map<std::pair<int, std::vector<MultiIndex>>, std::unique_ptr<Layout>> cache;
    return cache;
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

Layout::Layout(int dim, std::vector<MultiIndex> idx) : dim_(dim), index_(std::move(idx)) {
    for (const auto& a : index_) max_degree_ = std::max(max_degree_, degree(a));
    const int n = size();
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            int k = find(add(index_[i], index_[j]));
            if (k < 0) continue;
            Product p{static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                      static_cast<std::uint8_t>(k)};
            products_.push_back(p);
            if (i != 0 && j != 0) nonconst_.push_back(p);
        }
    }
}

const Layout& Layout::closure(int dim, const std::vector<MultiIndex>& needed) {
    if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("jet dimension must be 1..4");
    std::vector<MultiIndex> all;
    std::vector<MultiIndex> stack(needed.begin(), needed.end());
    stack.push_back(MultiIndex{});
    while (!stack.empty()) {
        MultiIndex a = stack.back();
        stack.pop_back();
        for (int i = dim; i < kMaxDim; ++i) {
            if (a[i] != 0) throw std::invalid_argument("multi-index exceeds jet dimension");
        }
        if (std::find(all.begin(), all.end(), a) != all.end()) continue;
        all.push_back(a);
        for (int i = 0; i < dim; ++i) {
            if (a[i] > 0) {
                MultiIndex b = a;
                --b[i];
                stack.push_back(b);
            }
        }
    }
    std::sort(all.begin(), all.end(), index_less);
    if (static_cast<int>(all.size()) > kMaxCoeffs) throw std::invalid_argument("jet layout too large");

    std::lock_guard<std::mutex> lock(g_layout_mutex);
    auto key = std::make_pair(dim, all);
    auto& cache = layout_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto* layout = new Layout(dim, all);
    cache.emplace(std::move(key), std::unique_ptr<Layout>(layout));
    return *layout;
}

const Layout& Layout::total(int dim, int order) {
    std::vector<MultiIndex> needed;
    MultiIndex a{};
    // enumerate all monomials of degree exactly `order`
    std::vector<MultiIndex> frontier{a};
    for (int k = 0; k < order; ++k) {
        std::vector<MultiIndex> next;
        for (const auto& m : frontier) {
            for (int i = 0; i < dim; ++i) next.push_back(add(m, unit(i)));
        }
        frontier = std::move(next);
    }
    return closure(dim, frontier);
}

const Layout& Layout::axes(int dim, int order) {
    std::vector<MultiIndex> needed;
    for (int i = 0; i < dim; ++i) needed.push_back(unit(i, order));
    return closure(dim, needed);
}

const Layout& Layout::biharmonic2d() {
    MultiIndex xxyy{};
    xxyy[0] = 2;
    xxyy[1] = 2;
    return closure(2, {unit(0, 4), unit(1, 4), xxyy});
}

int Layout::find(const MultiIndex& a) const {
    auto it = std::lower_bound(index_.begin(), index_.end(), a, index_less);
    if (it == index_.end() || *it != a) return -1;
    return static_cast<int>(it - index_.begin());
}

bool Layout::contains(const Layout& other) const {
    if (&other == this) return true;
    if (other.dim_ != dim_) return false;
    for (const auto& a : other.index_) {
        if (find(a) < 0) return false;
    }
    return true;
}

const Layout& Layout::raised() const {
    if (raised_) return *raised_;
    std::vector<MultiIndex> needed;
    for (const auto& a : index_) {
        for (int i = 0; i < dim_; ++i) needed.push_back(add(a, unit(i)));
    }
    raised_ = &closure(dim_, needed);
    return *raised_;
}

Jet::Jet(const Layout& layout, double value) : layout_(&layout) { c_[0] = value; }

Jet Jet::variable(const Layout& layout, double value, int axis) {
    Jet j(layout, value);
    int k = layout.find(unit(axis));
    if (k >= 0) j.c_[static_cast<std::size_t>(k)] = 1.0;
    return j;
}

double Jet::derivative(const MultiIndex& alpha) const {
    int k = layout_->find(alpha);
    if (k < 0) return 0.0;
    double f = 1.0;
    for (auto v : alpha) f *= factorial(v);
    return f * c_[static_cast<std::size_t>(k)];
}

Jet& Jet::operator+=(const Jet& b) {
    assert(layout_ == b.layout_);
    for (int i = 0; i < size(); ++i) c_[i] += b.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& b) {
    assert(layout_ == b.layout_);
    for (int i = 0; i < size(); ++i) c_[i] -= b.c_[i];
    return *this;
}

Jet& Jet::operator*=(const Jet& b) {
    *this = *this * b;
    return *this;
}

Jet& Jet::operator/=(const Jet& b) {
    *this = *this / b;
    return *this;
}

Jet& Jet::operator/=(double b) {
    for (int i = 0; i < size(); ++i) c_[i] /= b;
    return *this;
}

Jet& Jet::operator*=(double b) {
    for (int i = 0; i < size(); ++i) c_[i] *= b;
    return *this;
}

Jet operator-(const Jet& a) { return a * -1.0; }
Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator*(const Jet& a, const Jet& b) {
    assert(&a.layout() == &b.layout());
    Jet r(a.layout(), 0.0);
    for (const auto& p : a.layout().products()) r[p.k] += a[p.i] * b[p.j];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    double v = b.value();
    int K = b.layout().max_degree();
    std::array<double, kMaxCoeffs> d{};
    double inv = 1.0 / v;
    double term = inv;
    for (int m = 0; m <= K; ++m) {
        d[m] = term;
        term *= -(m + 1) * inv;
    }
    Jet r = a * compose(b, std::span<const double>(d.data(), static_cast<std::size_t>(K + 1)));
    r[0] = a.value() / v;
    return r;
}

Jet operator+(Jet a, double b) { return a += b; }
Jet operator+(double a, Jet b) { return b += a; }
Jet operator-(Jet a, double b) { return a -= b; }
Jet operator-(double a, const Jet& b) { return (-b) += a; }
Jet operator*(Jet a, double b) { return a *= b; }
Jet operator*(double a, Jet b) { return b *= a; }
Jet operator/(Jet a, double b) { return a /= b; }
Jet operator/(double a, const Jet& b) { return Jet(b.layout(), a) / b; }

Jet compose(const Jet& a, std::span<const double> derivs) {
    const Layout& L = a.layout();
    const int K = static_cast<int>(derivs.size()) - 1;
    Jet delta = a;
    delta[0] = 0.0;
    Jet r(L, derivs[static_cast<std::size_t>(K)] / factorial(K));
    for (int m = K - 1; m >= 0; --m) {
        Jet t(L, 0.0);
        for (const auto& p : L.nonconstant_products()) t[p.k] += r[p.i] * delta[p.j];
        for (int i = 1; i < L.size(); ++i) t[i] += r[0] * delta[i];
        t[0] = derivs[static_cast<std::size_t>(m)] / factorial(m);
        r = t;
    }
    return r;
}

namespace {

template <class F>
Jet apply(const Jet& a, F&& fill) {
    int K = a.layout().max_degree();
    std::array<double, kMaxCoeffs> d{};
    fill(a.value(), K, d.data());
    return compose(a, std::span<const double>(d.data(), static_cast<std::size_t>(K + 1)));
}

}  // namespace

Jet pow(const Jet& a, double r) {
    return apply(a, [r](double x, int K, double* d) {
        double coef = 1.0;
        for (int m = 0; m <= K; ++m) {
            d[m] = coef * std::pow(x, r - m);
            coef *= (r - m);
        }
    });
}

Jet sqrt(const Jet& a) {
    if (a.layout().max_degree() == 0) return Jet(a.layout(), std::sqrt(a.value()));
    return pow(a, 0.5);
}

Jet exp(const Jet& a) {
    return apply(a, [](double x, int K, double* d) {
        double e = std::exp(x);
        for (int m = 0; m <= K; ++m) d[m] = e;
    });
}

Jet log(const Jet& a) {
    return apply(a, [](double x, int K, double* d) {
        d[0] = std::log(x);
        double t = 1.0 / x;
        for (int m = 1; m <= K; ++m) {
            d[m] = t;
            t *= -static_cast<double>(m) / x;
        }
    });
}

Jet sin(const Jet& a) {
    return apply(a, [](double x, int K, double* d) {
        double s = std::sin(x), c = std::cos(x);
        const double cyc[4] = {s, c, -s, -c};
        for (int m = 0; m <= K; ++m) d[m] = cyc[m % 4];
    });
}

Jet cos(const Jet& a) {
    return apply(a, [](double x, int K, double* d) {
        double s = std::sin(x), c = std::cos(x);
        const double cyc[4] = {c, -s, -c, s};
        for (int m = 0; m <= K; ++m) d[m] = cyc[m % 4];
    });
}

Jet tanh(const Jet& a) {
    return apply(a, [](double x, int K, double* d) { tanh_derivatives(x, K, d); });
}

Jet pow(const Jet& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Jet result(a.layout(), 1.0);
    Jet base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        n >>= 1;
        if (n) base = base * base;
    }
    return result;
}

Jet differentiate(const Jet& a, int axis, const Layout& target) {
    const Layout& src = a.layout();
    Jet r(target, 0.0);
    for (int i = 0; i < target.size(); ++i) {
        MultiIndex up = target.index(i);
        ++up[static_cast<std::size_t>(axis)];
        int k = src.find(up);
        if (k < 0) throw std::logic_error("jet layout too small to differentiate");
        r[i] = up[static_cast<std::size_t>(axis)] * a[k];
    }
    return r;
}

Jet restrict_to(const Jet& a, const Layout& target) {
    if (&a.layout() == &target) return a;
    Jet r(target, 0.0);
    for (int i = 0; i < target.size(); ++i) {
        int k = a.layout().find(target.index(i));
        if (k < 0) throw std::logic_error("cannot restrict jet to a larger layout");
        r[i] = a[k];
    }
    return r;
}

Jet extend_to(const Jet& a, const Layout& target) {
    if (&a.layout() == &target) return a;
    Jet r(target, 0.0);
    for (int i = 0; i < a.size(); ++i) {
        int k = target.find(a.layout().index(i));
        if (k < 0) throw std::logic_error("cannot extend jet to a smaller layout");
        r[k] = a[i];
    }
    return r;
}

const std::vector<double>& tanh_derivative_poly(int m) {
    // d/dx P(t) = P'(t) (1 - t^2) with t = tanh x
    static const auto polys = [] {
        constexpr int kMax = 10;
        std::vector<std::vector<double>> p(kMax + 1);
        p[0] = {0.0, 1.0};
        for (int k = 1; k <= kMax; ++k) {
            const auto& q = p[static_cast<std::size_t>(k - 1)];
            std::vector<double> dq(q.size() + 1, 0.0);
            for (std::size_t i = 1; i < q.size(); ++i) {
                double c = q[i] * static_cast<double>(i);
                dq[i - 1] += c;
                dq[i + 1] -= c;
            }
            p[static_cast<std::size_t>(k)] = dq;
        }
        return p;
    }();
    if (m < 0 || m >= static_cast<int>(polys.size())) throw std::invalid_argument("tanh derivative order too high");
    return polys[static_cast<std::size_t>(m)];
}

void tanh_derivatives(double x, int order, double* out) {
    double t = std::tanh(x);
    for (int m = 0; m <= order; ++m) {
        const auto& q = tanh_derivative_poly(m);
        double s = 0.0;
        for (std::size_t k = q.size(); k-- > 0;) s = s * t + q[k];
        out[m] = s;
    }
}

void gaussian_derivatives(double x, int order, double* out) {
    // (-1)^m H_m(x) exp(-x^2) with physicists' Hermite polynomials
    double g = std::exp(-x * x);
    double h0 = 1.0, h1 = 2.0 * x;
    for (int m = 0; m <= order; ++m) {
        double h = (m == 0) ? h0 : h1;
        out[m] = ((m % 2) ? -h : h) * g;
        if (m >= 1) {
            double h2 = 2.0 * x * h1 - 2.0 * m * h0;
            h0 = h1;
            h1 = h2;
        }
    }
}

}  // namespace adfnn
