#include <cmath>
#include <random>
#include <stdexcept>

#include "adfnn/solvers.hpp"

namespace adfnn {

SampleStrategy parse_strategy(const std::string& name) {
    if (name == "grid") return SampleStrategy::Grid;
    if (name == "uniform" || name == "uniform-random") return SampleStrategy::Uniform;
    if (name == "halton") return SampleStrategy::Halton;
    throw std::invalid_argument("unknown sampling strategy: " + name);
}

SamplingDomain SamplingDomain::box(std::vector<double> lo, std::vector<double> hi) {
    SamplingDomain d;
    d.lo = lo;
    d.hi = hi;
    d.band = true;
    d.inside = [lo, hi](std::span<const double> x) {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
        }
        return true;
    };
    return d;
}

namespace {

double radical_inverse(std::uint64_t i, int base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
        i /= static_cast<std::uint64_t>(base);
    }
    return r;
}

struct Acceptor {
    const SamplingDomain& dom;
    double delta;
    std::vector<double> lo, hi;  // region candidates are drawn from

    Acceptor(const SamplingDomain& d, double margin) : dom(d), delta(margin), lo(d.lo), hi(d.hi) {
        if (dom.band) {
            for (std::size_t i = 0; i < lo.size(); ++i) {
                lo[i] += delta;
                hi[i] -= delta;
                if (!(lo[i] <= hi[i])) throw std::invalid_argument("sampling margin leaves an empty region");
            }
        }
    }

    bool operator()(std::span<const double> x) const {
        if (dom.band) {
            for (std::size_t i = 0; i < lo.size(); ++i) {
                if (x[i] < lo[i] || x[i] > hi[i]) return false;
            }
        }
        if (dom.inside && !dom.inside(x)) return false;
        for (const auto& v : dom.vertices) {
            double s = 0.0;
            for (std::size_t i = 0; i < v.size(); ++i) s += (x[i] - v[i]) * (x[i] - v[i]);
            if (std::sqrt(s) < delta) return false;
        }
        return true;
    }
};

Points from_columns(const std::vector<std::vector<double>>& pts, int d) {
    Points P(d, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k)
        for (int i = 0; i < d; ++i) P(i, static_cast<Eigen::Index>(k)) = pts[k][static_cast<std::size_t>(i)];
    return P;
}

std::vector<std::vector<double>> grid_candidates(const Acceptor& acc, int d, int m) {
    std::vector<std::vector<double>> out;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    while (true) {
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<std::size_t>(i);
            const double t = (idx[u] + 0.5) / m;
            x[u] = acc.lo[u] + t * (acc.hi[u] - acc.lo[u]);
        }
        if (acc(x)) out.push_back(x);
        int i = 0;
        while (i < d && ++idx[static_cast<std::size_t>(i)] == m) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == d) break;
    }
    return out;
}

}  // namespace

Points sample_interior(const SamplingDomain& domain, int n, SampleStrategy strategy, double delta_margin,
                       std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one interior point");
    const int d = domain.dim();
    Acceptor acc(domain, delta_margin);
    std::vector<std::vector<double>> pts;

    if (strategy == SampleStrategy::Grid && domain.lattice) {
        Points pts = domain.lattice(n, delta_margin);
        if (pts.cols() != n) throw std::runtime_error("cannot place the requested grid points");
        return pts;
    }
    if (strategy == SampleStrategy::Grid) {
        int m = std::max(1, static_cast<int>(std::ceil(std::pow(static_cast<double>(n), 1.0 / d) - 1e-9)));
        for (int tries = 0; tries < 64; ++tries, ++m) {
            pts = grid_candidates(acc, d, m);
            if (static_cast<int>(pts.size()) >= n) break;
        }
        if (static_cast<int>(pts.size()) < n) throw std::runtime_error("cannot place the requested grid points");
        if (static_cast<int>(pts.size()) > n) {
            std::vector<std::vector<double>> pick;
            for (int k = 0; k < n; ++k) pick.push_back(pts[static_cast<std::size_t>(k) * pts.size() / static_cast<std::size_t>(n)]);
            pts = std::move(pick);
        }
        return from_columns(pts, d);
    }

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    static const int primes[4] = {2, 3, 5, 7};
    std::uint64_t hindex = 1 + seed % 100003;
    const long long max_tries = 2000LL * n + 100000;
    std::vector<double> x(static_cast<std::size_t>(d));
    for (long long t = 0; t < max_tries && static_cast<int>(pts.size()) < n; ++t) {
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<std::size_t>(i);
            double r = strategy == SampleStrategy::Uniform ? unit(rng) : radical_inverse(hindex, primes[i]);
            x[u] = acc.lo[u] + r * (acc.hi[u] - acc.lo[u]);
        }
        ++hindex;
        if (acc(x)) pts.push_back(x);
    }
    if (static_cast<int>(pts.size()) < n) {
        throw std::runtime_error("cannot place " + std::to_string(n) + " points: domain too small for the margin");
    }
    return from_columns(pts, d);
}

Points sample_boundary(const BoundaryCurve& curve, int n, SampleStrategy strategy, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("need at least one boundary point");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<double>> pts;
    for (int k = 0; k < n; ++k) {
        double t = strategy == SampleStrategy::Uniform ? unit(rng)
                   : strategy == SampleStrategy::Halton ? radical_inverse(static_cast<std::uint64_t>(k + 1), 2)
                                                         : (k + 0.5) / n;
        pts.push_back(curve.at(t));
    }
    return from_columns(pts, static_cast<int>(pts[0].size()));
}

Points concat(const std::vector<Points>& parts) {
    Eigen::Index cols = 0, rows = 0;
    for (const auto& p : parts) {
        cols += p.cols();
        if (p.cols() > 0) rows = p.rows();
    }
    Points out(rows, cols);
    Eigen::Index c = 0;
    for (const auto& p : parts) {
        if (p.cols() == 0) continue;
        out.middleCols(c, p.cols()) = p;
        c += p.cols();
    }
    return out;
}

Points tensor_grid(const std::vector<double>& lo, const std::vector<double>& hi, int per_axis,
                   const std::function<bool(std::span<const double>)>& inside) {
    const int d = static_cast<int>(lo.size());
    std::vector<std::vector<double>> pts;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    while (true) {
        for (int i = 0; i < d; ++i) {
            const auto u = static_cast<std::size_t>(i);
            double t = per_axis == 1 ? 0.5 : static_cast<double>(idx[u]) / (per_axis - 1);
            x[u] = lo[u] + t * (hi[u] - lo[u]);
        }
        if (!inside || inside(x)) pts.push_back(x);
        int i = 0;
        while (i < d && ++idx[static_cast<std::size_t>(i)] == per_axis) idx[static_cast<std::size_t>(i++)] = 0;
        if (i == d) break;
    }
    return from_columns(pts, d);
}

}  // namespace adfnn
