#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace adfnn {

inline constexpr int kMaxDim = 4;
inline constexpr int kMaxCoeffs = 40;

using MultiIndex = std::array<std::uint8_t, kMaxDim>;

int degree(const MultiIndex& a);

// A downward-closed set of monomials in d variables. Truncating a Taylor
// series to such a set is a ring homomorphism, so jets on any layout can be
// multiplied without reference to the monomials that were dropped.
class Layout {
public:
    struct Product {
        std::uint8_t i, j, k;
    };

    static const Layout& closure(int dim, const std::vector<MultiIndex>& needed);
    static const Layout& total(int dim, int order);
    // {0} plus k*e_j for k <= order; enough for Laplacians and 1D problems.
    static const Layout& axes(int dim, int order);
    static const Layout& biharmonic2d();

    int dim() const { return dim_; }
    int size() const { return static_cast<int>(index_.size()); }
    int max_degree() const { return max_degree_; }
    const MultiIndex& index(int i) const { return index_[static_cast<std::size_t>(i)]; }
    int find(const MultiIndex& a) const;
    bool contains(const Layout& other) const;

    std::span<const Product> products() const { return products_; }
    // Products with neither factor the constant term.
    std::span<const Product> nonconstant_products() const { return nonconst_; }

    // Layout holding every monomial one degree above this one in any variable.
    const Layout& raised() const;

private:
    Layout(int dim, std::vector<MultiIndex> idx);

    int dim_;
    int max_degree_ = 0;
    std::vector<MultiIndex> index_;
    std::vector<Product> products_;
    std::vector<Product> nonconst_;
    mutable const Layout* raised_ = nullptr;
};

// Truncated multivariate Taylor polynomial. Coefficient c[i] multiplies
// (x - x0)^alpha_i, so a partial derivative is alpha! * c[i].
class Jet {
public:
    Jet() = default;
    Jet(const Layout& layout, double value);

    static Jet variable(const Layout& layout, double value, int axis);

    const Layout& layout() const { return *layout_; }
    int size() const { return layout_ ? layout_->size() : 0; }
    double value() const { return c_[0]; }
    double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
    // Partial derivative d^alpha; zero when alpha lies outside the layout.
    double derivative(const MultiIndex& alpha) const;

    Jet& operator+=(const Jet& b);
    Jet& operator-=(const Jet& b);
    Jet& operator*=(const Jet& b);
    Jet& operator/=(const Jet& b);
    Jet& operator+=(double b) { c_[0] += b; return *this; }
    Jet& operator-=(double b) { c_[0] -= b; return *this; }
    Jet& operator*=(double b);
    Jet& operator/=(double b);

private:
    const Layout* layout_ = nullptr;
    std::array<double, kMaxCoeffs> c_{};
};

Jet operator-(const Jet& a);
Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator+(Jet a, double b);
Jet operator+(double a, Jet b);
Jet operator-(Jet a, double b);
Jet operator-(double a, const Jet& b);
Jet operator*(Jet a, double b);
Jet operator*(double a, Jet b);
Jet operator/(Jet a, double b);
Jet operator/(double a, const Jet& b);

// f(a) from the derivatives f^(m)(a0), m = 0..max_degree.
Jet compose(const Jet& a, std::span<const double> derivs);

Jet sqrt(const Jet& a);
Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet tanh(const Jet& a);
Jet pow(const Jet& a, double r);
Jet pow(const Jet& a, int n);

// d/dx_axis of a jet on layout.raised() (or any superset), truncated to target.
Jet differentiate(const Jet& a, int axis, const Layout& target);
Jet restrict_to(const Jet& a, const Layout& target);
// Re-expresses a jet on a superset layout, padding with zeros.
Jet extend_to(const Jet& a, const Layout& target);

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

// Taylor derivative tables shared with the batched network kernels.
void tanh_derivatives(double x, int order, double* out);
// Coefficients (ascending powers of tanh x) of the m-th derivative of tanh.
const std::vector<double>& tanh_derivative_poly(int m);
void gaussian_derivatives(double x, int order, double* out);

}  // namespace adfnn
