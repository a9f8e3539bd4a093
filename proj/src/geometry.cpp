#include "adfnn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace adfnn {

Segment::Segment(Vec2 a, Vec2 b) : x1(a), x2(b) {
    if (length() <= 0.0) throw std::invalid_argument("degenerate segment");
}

double Segment::length() const { return std::hypot(x2[0] - x1[0], x2[1] - x1[1]); }

Vec2 Segment::midpoint() const { return {0.5 * (x1[0] + x2[0]), 0.5 * (x1[1] + x2[1])}; }

double signed_area(const std::vector<Vec2>& loop) {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const auto& p = loop[i];
        const auto& q = loop[(i + 1) % loop.size()];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * a;
}

Polygon::Polygon(std::vector<std::vector<Vec2>> loops) : loops_(std::move(loops)) {
    if (loops_.empty()) throw std::invalid_argument("polygon has no loops");
    for (std::size_t l = 0; l < loops_.size(); ++l) {
        auto& loop = loops_[l];
        if (loop.size() >= 2 && loop.front() == loop.back()) loop.pop_back();
        if (loop.size() < 3) throw std::invalid_argument("polygon loop needs at least 3 vertices");
        for (std::size_t i = 0; i < loop.size(); ++i) {
            if (loop[i] == loop[(i + 1) % loop.size()]) {
                throw std::invalid_argument("polygon has repeated consecutive vertices");
            }
        }
        double a = signed_area(loop);
        if (a == 0.0) throw std::invalid_argument("polygon loop has zero area");
        bool want_ccw = (l == 0);
        if ((a > 0.0) != want_ccw) std::reverse(loop.begin(), loop.end());
    }
}

std::vector<Segment> Polygon::edges() const {
    std::vector<Segment> out;
    for (const auto& loop : loops_) {
        for (std::size_t i = 0; i < loop.size(); ++i) out.emplace_back(loop[i], loop[(i + 1) % loop.size()]);
    }
    return out;
}

double Polygon::diameter() const {
    double d = 0.0;
    const auto& outer = loops_[0];
    for (const auto& p : outer) {
        for (const auto& q : outer) d = std::max(d, std::hypot(p[0] - q[0], p[1] - q[1]));
    }
    return d;
}

double Polygon::area() const {
    double a = 0.0;
    for (const auto& loop : loops_) a += signed_area(loop);
    return a;
}

double Polygon::perimeter() const {
    double s = 0.0;
    for (const auto& e : edges()) s += e.length();
    return s;
}

bool Polygon::contains(const Vec2& p) const {
    bool inside = false;
    for (const auto& loop : loops_) {
        for (std::size_t i = 0, j = loop.size() - 1; i < loop.size(); j = i++) {
            const auto& a = loop[i];
            const auto& b = loop[j];
            if ((a[1] > p[1]) != (b[1] > p[1])) {
                double xc = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if (p[0] < xc) inside = !inside;
            }
        }
    }
    return inside;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    double dx = b[0] - a[0], dy = b[1] - a[1];
    double t = ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy);
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p[0] - a[0] - t * dx, p[1] - a[1] - t * dy);
}

}  // namespace

double Polygon::boundary_distance(const Vec2& p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& e : edges()) d = std::min(d, point_segment_distance(p, e.x1, e.x2));
    return d;
}

Polygon Polygon::square(double lo, double hi) {
    return Polygon({{{lo, lo}, {hi, lo}, {hi, hi}, {lo, hi}}});
}

Polygon Polygon::regular(int n, double radius, Vec2 center) {
    std::vector<Vec2> loop;
    for (int i = 0; i < n; ++i) {
        double a = 2.0 * M_PI * i / n;
        loop.push_back({center[0] + radius * std::cos(a), center[1] + radius * std::sin(a)});
    }
    return Polygon({loop});
}

Polygon read_polygon(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open polygon file: " + path);
    std::vector<std::vector<Vec2>> loops(1);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            if (!loops.back().empty()) loops.emplace_back();
            continue;
        }
        std::istringstream ss(line);
        Vec2 v;
        if (!(ss >> v[0] >> v[1])) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected two numbers");
        }
        loops.back().push_back(v);
    }
    if (loops.back().empty()) loops.pop_back();
    return Polygon(std::move(loops));
}

ParametricCurve ParametricCurve::ellipse(double a, double b, Vec2 center) {
    ParametricCurve c;
    c.at = [a, b, center](double t) {
        double th = 2.0 * M_PI * t;
        return CurveSample{{center[0] + a * std::cos(th), center[1] + b * std::sin(th)},
                           {-2.0 * M_PI * a * std::sin(th), 2.0 * M_PI * b * std::cos(th)}};
    };
    return c;
}

ScalarField line_signed_distance(const Segment& seg) {
    const double L = seg.length();
    const Vec2 a = seg.x1, b = seg.x2;
    return ScalarField::from([=](auto x) {
        return ((x[0] - a[0]) * (b[1] - a[1]) - (x[1] - a[1]) * (b[0] - a[0])) / L;
    });
}

ScalarField trim_function(const Segment& seg) {
    const double L = seg.length();
    const Vec2 c = seg.midpoint();
    return ScalarField::from([=](auto x) {
        auto dx = x[0] - c[0];
        auto dy = x[1] - c[1];
        return (0.25 * L * L - (dx * dx + dy * dy)) / L;
    });
}

ScalarField segment_adf(const Segment& seg) {
    const double L = seg.length();
    const Vec2 a = seg.x1, b = seg.x2, c = seg.midpoint();
    return ScalarField::from([=](auto x) {
        auto f = ((x[0] - a[0]) * (b[1] - a[1]) - (x[1] - a[1]) * (b[0] - a[0])) / L;
        auto dx = x[0] - c[0];
        auto dy = x[1] - c[1];
        auto t = (0.25 * L * L - (dx * dx + dy * dy)) / L;
        auto f2 = f * f;
        auto varphi = sqrt(t * t + f2 * f2);
        // varphi - t loses all digits for t > 0 near the segment
        auto gap = value_of(t) > 0.0 ? (f2 * f2) / (varphi + t) : varphi - t;
        return sqrt(f2 + 0.25 * gap * gap);
    });
}

ScalarField circle_adf(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("circle radius must be positive");
    return ScalarField::from([=](auto x) {
        auto dx = x[0] - center[0];
        auto dy = x[1] - center[1];
        return (radius * radius - (dx * dx + dy * dy)) / (2.0 * radius);
    });
}

namespace {

class NormalizeNode final : public FieldNode {
public:
    explicit NormalizeNode(ScalarField omega) { children_ = {std::move(omega)}; }

    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        auto xs = seed(Layout::total(static_cast<int>(x.size()), 0), x);
        return eval(std::span<const Jet>(xs), ctx).value();
    }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        Jet w = children_[0].eval(x, ctx);
        auto g = gradient_jets(children_[0], x, ctx);
        Jet s = w * w;
        for (const auto& gj : g) s += gj * gj;
        if (s.value() == 0.0) throw std::domain_error("normalization undefined where field and gradient vanish");
        return w / sqrt(s);
    }

    void requirements(const Layout& layout, int anchor, std::vector<Requirement>& out) const override {
        children_[0].node().requirements(layout.raised(), anchor, out);
    }
};

class PairNode final : public detail::GenericNode<PairNode> {
public:
    enum class Kind { Alpha, S, Conj };
    PairNode(Kind kind, ScalarField a, ScalarField b, double param, double sign)
        : kind_(kind), param_(param), sign_(sign) {
        children_ = {std::move(a), std::move(b)};
    }

    template <class T>
    T compute(std::span<const T> x, const EvalContext& ctx) const {
        T a = children_[0].eval(x, ctx);
        T b = children_[1].eval(x, ctx);
        switch (kind_) {
            case Kind::Alpha:
                return (a + b + sign_ * sqrt(a * a + b * b - 2.0 * param_ * a * b)) / (1.0 + param_);
            case Kind::S: {
                T q = a * a + b * b;
                return (a + b + sign_ * sqrt(q)) * pow(q, 0.5 * param_);
            }
            case Kind::Conj: {
                int s = static_cast<int>(param_);
                return a + b - pow(pow(a, s) + pow(b, s), 1.0 / param_);
            }
        }
        return a;
    }

private:
    Kind kind_;
    double param_;
    double sign_;
};

Jet pow_int(const Jet& a, int m) { return pow(a, m); }

class ReqNode final : public FieldNode {
public:
    ReqNode(std::vector<ScalarField> fields, int m) : m_(m) { children_ = std::move(fields); }

    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        // Neumaier-compensated sum of phi_i^-m in input order
        double sum = 0.0, comp = 0.0;
        bool zero = false;
        for (const auto& c : children_) {
            double v = c.eval(x, ctx);
            if (v == 0.0) zero = true;
            if (zero) continue;
            double term = 1.0 / std::pow(v, m_);
            double t = sum + term;
            if (std::abs(sum) >= std::abs(term)) {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        if (zero) return 0.0;
        return std::pow(sum + comp, -1.0 / m_);
    }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        // factor out the smallest piece: phi = phi_k (sum_i (phi_k/phi_i)^m)^(-1/m)
        std::vector<Jet> v;
        v.reserve(children_.size());
        for (const auto& c : children_) v.push_back(c.eval(x, ctx));
        std::size_t k = 0;
        int zeros = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i].value() == 0.0) ++zeros;
            if (std::abs(v[i].value()) < std::abs(v[k].value())) k = i;
        }
        if (zeros > 1) return Jet(x[0].layout(), 0.0);
        Jet s(x[0].layout(), 1.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i == k) continue;
            s += pow_int(v[k] / v[i], m_);
        }
        return v[k] * pow(s, -1.0 / m_);
    }

private:
    int m_;
};

template <class T>
struct Pt {
    T x, y;
};

// Closest-point distance from p to a sampled curve, refined by ternary search.
double curve_distance(const ParametricCurve& curve, const std::vector<CurveSample>& coarse, const Vec2& p) {
    const std::size_t n = coarse.size();
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double d = std::hypot(coarse[i].c[0] - p[0], coarse[i].c[1] - p[1]);
        if (d < bd) {
            bd = d;
            best = i;
        }
    }
    auto dist = [&](double t) {
        t -= std::floor(t);
        auto s = curve.at(t);
        return std::hypot(s.c[0] - p[0], s.c[1] - p[1]);
    };
    double lo = (static_cast<double>(best) - 1.0) / n, hi = (static_cast<double>(best) + 1.0) / n;
    for (int it = 0; it < 100; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (dist(m1) < dist(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    return std::min(bd, dist(0.5 * (lo + hi)));
}

class MvpPolygonNode final : public detail::GenericNode<MvpPolygonNode> {
public:
    MvpPolygonNode(const Polygon& poly, bool adf) : poly_(poly), adf_(adf), eps_(1e-9 * poly.diameter()) {}

    template <class T>
    T compute(std::span<const T> x, const EvalContext&) const {
        const Vec2 p{value_of(x[0]), value_of(x[1])};
        if (poly_.boundary_distance(p) <= eps_) {
            if (!adf_) throw BoundaryProximity("mean value weight evaluated on the boundary");
            return zero_like(x[0]);
        }
        T W = zero_like(x[0]);
        for (const auto& loop : poly_.loops()) {
            const std::size_t n = loop.size();
            std::vector<Pt<T>> r(n);
            std::vector<T> len;
            len.reserve(n);
            for (std::size_t i = 0; i < n; ++i) {
                r[i] = {loop[i][0] - x[0], loop[i][1] - x[1]};
                len.push_back(sqrt(r[i].x * r[i].x + r[i].y * r[i].y));
            }
            for (std::size_t i = 0; i < n; ++i) {
                std::size_t j = (i + 1) % n;
                T det = r[i].x * r[j].y - r[i].y * r[j].x;
                T dot = r[i].x * r[j].x + r[i].y * r[j].y;
                T rr = len[i] * len[j];
                // tan(theta/2) in whichever form avoids cancellation
                T t = value_of(dot) >= 0.0 ? det / (rr + dot) : (rr - dot) / det;
                W += (1.0 / len[i] + 1.0 / len[j]) * t;
            }
        }
        if (!adf_) return W;
        return 2.0 / W;
    }

private:
    static double zero_like(double) { return 0.0; }
    static Jet zero_like(const Jet& j) { return Jet(j.layout(), 0.0); }

    Polygon poly_;
    bool adf_;
    double eps_;
};

// Gauss-Legendre nodes and weights on [0, 1].
constexpr int kGauss = 8;
const std::array<double, kGauss>& gauss_nodes() {
    static const std::array<double, kGauss> n = [] {
        std::array<double, kGauss> out{};
        const double x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267, 0.9602898564975363};
        for (int i = 0; i < 4; ++i) {
            out[3 - i] = 0.5 * (1.0 - x[i]);
            out[4 + i] = 0.5 * (1.0 + x[i]);
        }
        return out;
    }();
    return n;
}
const std::array<double, kGauss>& gauss_weights() {
    static const std::array<double, kGauss> w = [] {
        std::array<double, kGauss> out{};
        const double v[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
        for (int i = 0; i < 4; ++i) {
            out[3 - i] = 0.5 * v[i];
            out[4 + i] = 0.5 * v[i];
        }
        return out;
    }();
    return w;
}

class MvpCurveNode final : public detail::GenericNode<MvpCurveNode> {
public:
    MvpCurveNode(ParametricCurve curve, int p, int panels) : curve_(std::move(curve)), p_(p), panels_(panels) {
        const auto& gn = gauss_nodes();
        double diam = 0.0;
        const int nc = 4 * panels_;
        for (int i = 0; i < nc; ++i) coarse_.push_back(curve_.at(static_cast<double>(i) / nc));
        for (const auto& a : coarse_) {
            for (const auto& b : coarse_) diam = std::max(diam, std::hypot(a.c[0] - b.c[0], a.c[1] - b.c[1]));
        }
        eps_ = 1e-9 * diam;
        for (int k = 0; k < panels_; ++k) {
            for (int q = 0; q < kGauss; ++q) nodes_.push_back(curve_.at((k + gn[q]) / panels_));
        }
        // boundary normal derivative is 1 when W_p ~ C_p d^-p near the curve
        scale_ = std::sqrt(M_PI) * std::tgamma(0.5 * (p_ + 1)) / std::tgamma(0.5 * p_ + 1.0);
    }

    template <class T>
    T compute(std::span<const T> x, const EvalContext&) const {
        const Vec2 p{value_of(x[0]), value_of(x[1])};
        if (curve_distance(curve_, coarse_, p) <= eps_) return T(0.0 * x[0]);
        T W = 0.0 * x[0];
        const double h = 1.0 / panels_;
        for (int k = 0; k < panels_; ++k) {
            panel(x, p, k * h, h, &nodes_[static_cast<std::size_t>(k * kGauss)], 0, W);
        }
        if (!std::isfinite(value_of(W)) || value_of(W) <= 0.0) {
            throw std::runtime_error("curve potential quadrature failed");
        }
        return pow(scale_ / W, 1.0 / p_);
    }

private:
    template <class T>
    void panel(std::span<const T> x, const Vec2& p, double t0, double h, const CurveSample* cached, int depth,
               T& W) const {
        const auto& gn = gauss_nodes();
        const auto& gw = gauss_weights();
        std::array<CurveSample, kGauss> s;
        double mind = std::numeric_limits<double>::infinity();
        double arc = 0.0;
        for (int q = 0; q < kGauss; ++q) {
            s[q] = cached ? cached[q] : curve_.at(t0 + h * gn[q]);
            mind = std::min(mind, std::hypot(s[q].c[0] - p[0], s[q].c[1] - p[1]));
            arc += gw[q] * h * std::hypot(s[q].dc[0], s[q].dc[1]);
        }
        if (mind < 1.5 * arc && depth < 40) {
            panel(x, p, t0, 0.5 * h, nullptr, depth + 1, W);
            panel(x, p, t0 + 0.5 * h, 0.5 * h, nullptr, depth + 1, W);
            return;
        }
        for (int q = 0; q < kGauss; ++q) {
            T dx = s[q].c[0] - x[0];
            T dy = s[q].c[1] - x[1];
            // c' rotated clockwise: (c'_y, -c'_x)
            T num = dx * s[q].dc[1] - dy * s[q].dc[0];
            T r2 = dx * dx + dy * dy;
            W += (gw[q] * h) * num / pow(r2, 0.5 * (2 + p_));
        }
    }

    ParametricCurve curve_;
    int p_;
    int panels_;
    double eps_ = 0.0;
    double scale_ = 2.0;
    std::vector<CurveSample> coarse_;
    std::vector<CurveSample> nodes_;
};

class TransfiniteNode final : public FieldNode {
public:
    TransfiniteNode(const std::vector<TransfinitePiece>& pieces, long weight_of) : weight_of_(weight_of) {
        for (const auto& p : pieces) {
            if (p.mu < 1) throw std::invalid_argument("transfinite exponent must be >= 1");
            children_.push_back(p.adf);
            children_.push_back(p.data);
            mu_.push_back(p.mu);
        }
    }

    double eval(std::span<const double> x, const EvalContext& ctx) const override {
        const std::size_t n = mu_.size();
        std::vector<double> phi(n);
        for (std::size_t i = 0; i < n; ++i) phi[i] = children_[2 * i].eval(x, ctx);
        for (std::size_t i = 0; i < n; ++i) {
            if (phi[i] == 0.0) {
                if (weight_of_ >= 0) return static_cast<std::size_t>(weight_of_) == i ? 1.0 : 0.0;
                return children_[2 * i + 1].eval(x, ctx);
            }
        }
        // weights proportional to phi_i^-mu_i, scaled by the smallest phi
        double pmin = *std::min_element(phi.begin(), phi.end());
        double wsum = 0.0, acc = 0.0, wsel = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double w = std::pow(pmin / phi[i], mu_[i]) * std::pow(pmin, -(mu_[i] - 1));
            wsum += w;
            if (weight_of_ < 0) {
                acc += w * children_[2 * i + 1].eval(x, ctx);
            } else if (static_cast<std::size_t>(weight_of_) == i) {
                wsel = w;
            }
        }
        return weight_of_ < 0 ? acc / wsum : wsel / wsum;
    }

    Jet eval(std::span<const Jet> x, const EvalContext& ctx) const override {
        const std::size_t n = mu_.size();
        std::vector<Jet> pw;
        int first_zero = -1;
        for (std::size_t i = 0; i < n; ++i) {
            Jet p = children_[2 * i].eval(x, ctx);
            if (p.value() == 0.0 && first_zero < 0) first_zero = static_cast<int>(i);
            pw.push_back(pow(p, mu_[i]));
        }
        // product form: w_i = prod_{j != i} phi_j^mu_j / sum_k prod_{j != k} phi_j^mu_j
        std::vector<Jet> num;
        Jet den(x[0].layout(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            Jet prod(x[0].layout(), 1.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) prod *= pw[j];
            }
            den += prod;
            num.push_back(prod);
        }
        if (den.value() == 0.0) {
            std::size_t k = static_cast<std::size_t>(first_zero);
            if (weight_of_ >= 0) return Jet(x[0].layout(), static_cast<std::size_t>(weight_of_) == k ? 1.0 : 0.0);
            return children_[2 * k + 1].eval(x, ctx);
        }
        if (weight_of_ >= 0) return num[static_cast<std::size_t>(weight_of_)] / den;
        Jet acc(x[0].layout(), 0.0);
        for (std::size_t i = 0; i < n; ++i) acc += num[i] * children_[2 * i + 1].eval(x, ctx);
        return acc / den;
    }

private:
    std::vector<int> mu_;
    long weight_of_;
};

}  // namespace

ScalarField first_order_normalize(const ScalarField& omega) {
    return ScalarField(std::make_shared<NormalizeNode>(omega));
}

ScalarField r_alpha_pair(const ScalarField& w1, const ScalarField& w2, double alpha, JoinKind kind) {
    if (!(alpha > -1.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in (-1, 1]");
    double sign = kind == JoinKind::Disjunction ? 1.0 : -1.0;
    return ScalarField(std::make_shared<PairNode>(PairNode::Kind::Alpha, w1, w2, alpha, sign));
}

ScalarField r_s_pair(const ScalarField& w1, const ScalarField& w2, int s, JoinKind kind) {
    if (s < 1) throw std::invalid_argument("R_s requires s >= 1");
    double sign = kind == JoinKind::Disjunction ? 1.0 : -1.0;
    return ScalarField(std::make_shared<PairNode>(PairNode::Kind::S, w1, w2, s, sign));
}

ScalarField r_equivalence_join(const std::vector<ScalarField>& fields, int m) {
    if (m < 1) throw std::invalid_argument("R-equivalence order m must be >= 1");
    if (fields.empty()) throw std::invalid_argument("R-equivalence of no fields");
    if (fields.size() == 1) return fields[0];
    return ScalarField(std::make_shared<ReqNode>(fields, m));
}

ScalarField r_conjunction_join(const ScalarField& w1, const ScalarField& w2, int s) {
    if (s < 2) throw std::invalid_argument("R-conjunction join requires s >= 2");
    return ScalarField(std::make_shared<PairNode>(PairNode::Kind::Conj, w1, w2, s, -1.0));
}

ScalarField polygon_adf_req(const Polygon& poly, int m) {
    std::vector<ScalarField> pieces;
    for (const auto& e : poly.edges()) pieces.push_back(segment_adf(e));
    return r_equivalence_join(pieces, m);
}

ScalarField mvp_polygon_weight(const Polygon& poly) {
    return ScalarField(std::make_shared<MvpPolygonNode>(poly, false));
}

ScalarField mvp_polygon_adf(const Polygon& poly) {
    return ScalarField(std::make_shared<MvpPolygonNode>(poly, true));
}

ScalarField mvp_curve_adf(const ParametricCurve& curve, int p, int panels) {
    if (p < 1) throw std::invalid_argument("curve potential exponent p must be >= 1");
    if (panels * kGauss < 64) throw std::invalid_argument("too few quadrature points");
    return ScalarField(std::make_shared<MvpCurveNode>(curve, p, panels));
}

ScalarField transfinite_interpolant(const std::vector<TransfinitePiece>& pieces) {
    if (pieces.empty()) throw std::invalid_argument("transfinite interpolant needs a piece");
    return ScalarField(std::make_shared<TransfiniteNode>(pieces, -1));
}

ScalarField transfinite_weight(const std::vector<TransfinitePiece>& pieces, std::size_t i) {
    if (i >= pieces.size()) throw std::out_of_range("transfinite piece index");
    return ScalarField(std::make_shared<TransfiniteNode>(pieces, static_cast<long>(i)));
}

ScalarField hypercube_adf(int d, int m) {
    if (d < 1 || d > 4) throw std::invalid_argument("hypercube dimension must be 1..4");
    std::vector<ScalarField> strips;
    for (int i = 0; i < d; ++i) {
        strips.push_back(ScalarField::from([i](auto x) {
            auto xi = x[static_cast<std::size_t>(i)];
            return 0.5 * (1.0 - xi * xi);
        }));
    }
    return r_equivalence_join(strips, m);
}

}  // namespace adfnn
