#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssw/contour.hpp"
#include "ssw/errors.hpp"
#include "ssw/scan.hpp"

using namespace ssw;

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}

template <typename F>
Eigen::MatrixXd tabulate(const std::vector<double>& bs, const std::vector<double>& ts, F f) {
    Eigen::MatrixXd m(ts.size(), bs.size());
    for (std::size_t r = 0; r < ts.size(); ++r)
        for (std::size_t c = 0; c < bs.size(); ++c) m(r, c) = f(bs[c], ts[r]);
    return m;
}

// Crossings of the ray {T = t0, B > b0} with all polylines.
int ray_crossings(const std::vector<Polyline>& lines, double b0, double t0) {
    int n = 0;
    for (const auto& l : lines) {
        const std::size_t count = l.points.size();
        const std::size_t segs = l.closed ? count : count - 1;
        for (std::size_t i = 0; i < segs; ++i) {
            const auto& p = l.points[i];
            const auto& q = l.points[(i + 1) % count];
            if ((p.t > t0) == (q.t > t0)) continue;
            const double b = p.b + (t0 - p.t) * (q.b - p.b) / (q.t - p.t);
            if (b > b0) ++n;
        }
    }
    return n;
}

} // namespace

TEST_CASE("constant slice has no contour") {
    const auto bs = linspace(0, 2, 11), ts = linspace(0.1, 10, 9);
    CHECK(detection_boundary(bs, ts, Eigen::MatrixXd::Constant(9, 11, 0.5)).empty());
}

TEST_CASE("ramp in B gives one vertical line at B = 1") {
    const auto bs = linspace(0, 2, 21), ts = linspace(0.1, 10, 15);
    const auto lines = detection_boundary(bs, ts, tabulate(bs, ts, [](double b, double) { return b; }));
    REQUIRE(lines.size() == 1);
    CHECK(!lines[0].closed);
    CHECK(lines[0].points.size() == ts.size());
    for (const auto& p : lines[0].points) CHECK(std::abs(p.b - 1.0) <= 0.1);
    double lo = 1e9, hi = -1e9;
    for (const auto& p : lines[0].points) {
        lo = std::min(lo, p.t);
        hi = std::max(hi, p.t);
    }
    CHECK(lo == ts.front());
    CHECK(hi == ts.back());
}

TEST_CASE("interpolation is linear along edges") {
    const auto bs = linspace(0, 1, 2), ts = linspace(0, 1, 2);
    Eigen::MatrixXd v(2, 2);
    v << 0, 4, 0, 4;
    const auto lines = detection_boundary(bs, ts, v, 1.0);
    REQUIRE(lines.size() == 1);
    for (const auto& p : lines[0].points) CHECK(p.b == doctest::Approx(0.25));
}

TEST_CASE("bump gives one closed loop") {
    const auto bs = linspace(0, 2, 41), ts = linspace(0, 2, 41);
    const auto lines = detection_boundary(bs, ts, tabulate(bs, ts, [](double b, double t) {
        return 2 - (b - 1) * (b - 1) - (t - 1) * (t - 1);
    }));
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].closed);
    for (const auto& p : lines[0].points) CHECK(std::abs(std::hypot(p.b - 1, p.t - 1) - 1) < 0.01);
    CHECK(ray_crossings(lines, 1.0, 1.0) == 1);
}

TEST_CASE("two bumps give two loops") {
    const auto bs = linspace(0, 4, 81), ts = linspace(0, 2, 41);
    const auto lines = detection_boundary(bs, ts, tabulate(bs, ts, [](double b, double t) {
        const double d1 = std::hypot(b - 1, t - 1), d2 = std::hypot(b - 3, t - 1);
        return 2 - std::min(d1, d2);
    }), 1.5);
    CHECK(lines.size() == 2);
    for (const auto& l : lines) CHECK(l.closed);
}

TEST_CASE("saddles resolve by the centre value") {
    const auto bs = linspace(0, 1, 2), ts = linspace(0, 1, 2);
    Eigen::MatrixXd v(2, 2);
    v << 2, 0, 0, 2;
    CHECK(detection_boundary(bs, ts, v, 1.0).size() == 2);
    v << 1.5, 0, 0, 1.5;  // centre 0.75 is outside
    CHECK(detection_boundary(bs, ts, v, 1.0).size() == 2);
}

TEST_CASE("NaN cells are skipped") {
    const auto bs = linspace(0, 2, 21), ts = linspace(0, 1, 5);
    Eigen::MatrixXd v = tabulate(bs, ts, [](double b, double) { return b; });
    v(2, 10) = NAN;
    const auto lines = detection_boundary(bs, ts, v);
    CHECK(lines.size() == 2);
    for (const auto& l : lines)
        for (const auto& p : l.points) CHECK(std::isfinite(p.b));
}

TEST_CASE("degenerate slices") {
    CHECK_THROWS_AS(detection_boundary({0.0}, {0.0, 1.0}, Eigen::MatrixXd::Zero(2, 1)), EmptyGrid);
    CHECK_THROWS_AS(detection_boundary({0.0, 1.0}, {}, Eigen::MatrixXd::Zero(0, 2)), EmptyGrid);
    CHECK_THROWS_AS(detection_boundary({0.0, 1.0}, {0.0, 1.0}, Eigen::MatrixXd::Zero(3, 2)), InvalidAxes);
}

TEST_CASE("equilibrium W1 boundary encloses the cold low-field corner") {
    ScanSpec spec;
    spec.b_axis = linspace(0, 1, 21);
    spec.t_axis = linspace(0.02, 0.6, 30);
    spec.gamma_axis = {0.0};
    const auto grid = scan(Quantity::W1, spec);
    const auto lines = detection_boundary(grid, 0);
    REQUIRE(!lines.empty());
    CHECK(ray_crossings(lines, 0.1, 0.1) % 2 == 1);
    // The lowest-T crossing sits near the zero-temperature value sqrt(1 - pi^2/16).
    double lowest_b = NAN, lowest_t = 1e9;
    for (const auto& l : lines)
        for (const auto& p : l.points)
            if (p.t < lowest_t) {
                lowest_t = p.t;
                lowest_b = p.b;
            }
    CHECK(std::abs(lowest_b - std::sqrt(1 - M_PI * M_PI / 16)) < 0.05);
}
