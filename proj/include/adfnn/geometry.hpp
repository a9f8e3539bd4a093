#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "adfnn/field.hpp"

namespace adfnn {

using Vec2 = std::array<double, 2>;

struct Segment {
    Vec2 x1;
    Vec2 x2;

    Segment(Vec2 a, Vec2 b);
    double length() const;
    Vec2 midpoint() const;
};

// Outer loop counterclockwise, inner loops clockwise. The constructor
// reorients loops whose signed area disagrees.
class Polygon {
public:
    explicit Polygon(std::vector<std::vector<Vec2>> loops);

    const std::vector<std::vector<Vec2>>& loops() const { return loops_; }
    std::vector<Segment> edges() const;
    double diameter() const;
    double area() const;
    double perimeter() const;
    bool contains(const Vec2& p) const;
    // Distance to the nearest edge.
    double boundary_distance(const Vec2& p) const;

    static Polygon square(double lo, double hi);
    static Polygon regular(int n, double radius, Vec2 center = {0.0, 0.0});

private:
    std::vector<std::vector<Vec2>> loops_;
};

double signed_area(const std::vector<Vec2>& loop);

// Polygon file: one vertex per line, loops separated by blank lines.
Polygon read_polygon(const std::string& path);

struct CurveSample {
    Vec2 c;
    Vec2 dc;
};

struct ParametricCurve {
    std::function<CurveSample(double)> at;
    bool closed = true;

    static ParametricCurve ellipse(double a, double b, Vec2 center = {0.0, 0.0});
};

enum class JoinKind { Disjunction, Conjunction };

struct BoundaryProximity : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ScalarField line_signed_distance(const Segment& seg);
ScalarField trim_function(const Segment& seg);
ScalarField segment_adf(const Segment& seg);
ScalarField circle_adf(Vec2 center, double radius);
ScalarField first_order_normalize(const ScalarField& omega);
ScalarField r_alpha_pair(const ScalarField& w1, const ScalarField& w2, double alpha, JoinKind kind);
ScalarField r_s_pair(const ScalarField& w1, const ScalarField& w2, int s, JoinKind kind);
ScalarField r_equivalence_join(const std::vector<ScalarField>& fields, int m = 1);
ScalarField r_conjunction_join(const ScalarField& w1, const ScalarField& w2, int s);
ScalarField polygon_adf_req(const Polygon& poly, int m = 1);
ScalarField mvp_polygon_weight(const Polygon& poly);
ScalarField mvp_polygon_adf(const Polygon& poly);
ScalarField mvp_curve_adf(const ParametricCurve& curve, int p = 1, int panels = 256);

struct TransfinitePiece {
    ScalarField adf;
    ScalarField data;
    int mu = 1;
};
ScalarField transfinite_interpolant(const std::vector<TransfinitePiece>& pieces);
// Weight of piece i, for partition-of-unity checks.
ScalarField transfinite_weight(const std::vector<TransfinitePiece>& pieces, std::size_t i);

ScalarField hypercube_adf(int d, int m = 1);

}  // namespace adfnn
