#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ssw/correlators.hpp"
#include "ssw/errors.hpp"
#include "ssw/pfaffian.hpp"
#include "ssw/thermo.hpp"

using namespace ssw;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

// Pfaffian by expansion along the first row; exponential but independent.
cd pfaffian_expand(const Eigen::MatrixXcd& a) {
    const auto n = a.rows();
    if (n == 0) return 1;
    if (n % 2) return 0;
    cd total = 0;
    for (Eigen::Index j = 1; j < n; ++j) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index k = 1; k < n; ++k)
            if (k != j) keep.push_back(k);
        Eigen::MatrixXcd minor(n - 2, n - 2);
        for (std::size_t r = 0; r < keep.size(); ++r)
            for (std::size_t c = 0; c < keep.size(); ++c) minor(r, c) = a(keep[r], keep[c]);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        total += sign * a(0, j) * pfaffian_expand(minor);
    }
    return total;
}

Eigen::MatrixXcd random_antisymmetric(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = cd(g(rng), g(rng));
            a(j, i) = -a(i, j);
        }
    return a;
}

// beta -> 0 at fixed lambda = -gamma/beta = 1.
const ChainParamsd hot = make_params(1.0, 0.5, 1e9, -1e-9);

} // namespace

TEST_CASE("pfaffian agrees with first-row expansion") {
    std::mt19937_64 rng(99);
    for (int n : {2, 4, 6, 8}) {
        for (int rep = 0; rep < 5; ++rep) {
            const Eigen::MatrixXcd a = random_antisymmetric(n, rng);
            const cd ref = pfaffian_expand(a);
            CHECK(std::abs(pfaffian(a) - ref) < 1e-10 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("pfaffian squares to the determinant") {
    std::mt19937_64 rng(4);
    const Eigen::MatrixXcd a = random_antisymmetric(10, rng);
    const cd pf = pfaffian(a);
    CHECK(std::abs(pf * pf - a.determinant()) < 1e-9 * std::abs(a.determinant()));
}

TEST_CASE("pfaffian edge cases") {
    CHECK(pfaffian(Eigen::MatrixXd(0, 0)) == 1.0);
    CHECK(pfaffian(Eigen::MatrixXd::Zero(3, 3)) == 0.0);
    Eigen::Matrix2d two;
    two << 0, 2.5, -2.5, 0;
    CHECK(pfaffian(two) == 2.5);
    CHECK_THROWS_AS(pfaffian(Eigen::MatrixXd::Zero(2, 3)), DimensionMismatch);
    // A leading zero block forces a pivot.
    Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
    p(0, 2) = 1; p(2, 0) = -1;
    p(1, 3) = 1; p(3, 1) = -1;
    CHECK(pfaffian(p) == doctest::Approx(-1.0));
}

TEST_CASE("G_R examples") {
    for (int r : {0, 1, 2, 5}) CHECK(std::abs(g_r(hot, r)) < 1e-8);
    CHECK(std::abs(g_r(make_params(1.0, 2.0, 1e-3, 0.0), 1)) < 1e-4);
    CHECK(std::abs(g_r(make_params(1.0, 0.5, 1e-3, 0.0), 1) + (2 / pi) * std::sqrt(0.75)) < 1e-3);
}

TEST_CASE("s_R examples") {
    CHECK(s_r(make_params(1.0, 0.5, 1.0, 2.0), 0) == 0.0);
    for (int r : {1, 2, 3})
        for (double b : {0.0, 0.5, 1.5}) CHECK(std::abs(s_r(make_params(1.0, b, 0.6, 0.0), r)) < 1e-10);
    CHECK(std::abs(s_r(make_params(1.0, 0.5, 1.0, 1.0), 1)) > 1e-3);
}

TEST_CASE("correlator set agrees with the single integrals") {
    const auto p = make_params(1.0, 0.7, 0.6, 1.3);
    const auto cs = correlator_set(p, 4);
    CHECK(cs.r_max() == 4);
    CHECK(cs.s[0] == 0.0);
    CHECK(std::abs(cs.g[0] - magnetization_density(p)) < 1e-10);
    for (int r = 0; r <= 4; ++r) {
        CHECK(std::abs(cs.g[r] - g_r(p, r)) < 1e-10);
        CHECK(std::abs(cs.s[r] - s_r(p, r)) < 1e-10);
        CHECK(std::abs(cs.g[r]) <= 1.0);
        CHECK(std::abs(cs.s[r]) <= 1.0);
    }
    CHECK(cs.s_at(-2) == -cs.s_at(2));
    CHECK(cs.g_at(-3) == cs.g_at(3));
}

TEST_CASE("two-point strings reduce to the pairings") {
    const auto cs = correlator_set(make_params(1.0, 0.4, 0.9, 1.1), 2);
    const MajoranaOp ab[] = {{Majorana::A, 0}, {Majorana::B, 1}};
    const MajoranaOp bb[] = {{Majorana::B, 0}, {Majorana::B, 2}};
    const MajoranaOp ba[] = {{Majorana::B, 1}, {Majorana::A, 0}};
    CHECK(majorana_string_expectation<double>(cs, ab) == cd(cs.g[1], 0));
    CHECK(majorana_string_expectation<double>(cs, bb) == cd(0, cs.s[2]));
    CHECK(majorana_string_expectation<double>(cs, ba) == cd(-cs.g[1], 0));
    const MajoranaOp far[] = {{Majorana::A, 0}, {Majorana::B, 3}};
    CHECK_THROWS_AS(majorana_string_expectation<double>(cs, far), InvalidParams);
}

TEST_CASE("nearest-neighbour closed forms") {
    const auto cs = correlator_set(make_params(1.0, 0.5, 1.0, 1.0), 1);
    const auto pc = pair_correlators(cs, 1);
    CHECK(std::abs(pc.xx_plus_yy + 2 * cs.g[1]) < 1e-14);
    CHECK(std::abs(pc.yx_minus_xy - 2 * cs.s[1]) < 1e-14);
    CHECK(std::abs(pc.zz - (cs.g[0] * cs.g[0] - cs.g[1] * cs.g[1] - cs.s[1] * cs.s[1])) < 1e-14);
    CHECK(pc.z_single == cs.g[0]);
}

TEST_CASE("next-nearest-neighbour zz closed form") {
    const auto cs = correlator_set(make_params(1.0, 0.8, 0.7, -1.4), 2);
    const auto pc = pair_correlators(cs, 2);
    CHECK(std::abs(pc.zz - (cs.g[0] * cs.g[0] - cs.g[2] * cs.g[2] - cs.s[2] * cs.s[2])) < 1e-14);
}

TEST_CASE("pair correlators in the limits") {
    for (int r : {1, 2}) {
        const auto pc = pair_correlators(hot, r);
        CHECK(std::abs(pc.xx_plus_yy) < 1e-8);
        CHECK(std::abs(pc.yx_minus_xy) < 1e-8);
        CHECK(std::abs(pc.zz) < 1e-8);
        CHECK(concurrence(hot, r) == 0.0);
    }
    const auto cold = make_params(1.0, 5.0, 1e-3, 0.0);
    const auto pc = pair_correlators(cold, 1);
    CHECK(std::abs(pc.zz - 1) < 1e-4);
    CHECK(std::abs(pc.xx_plus_yy) < 1e-4);
    CHECK(concurrence(cold, 1) < 1e-6);
    CHECK(concurrence(cold, 2) < 1e-6);
}

TEST_CASE("equilibrium has no yx - xy part") {
    for (double b : {0.0, 0.6, 1.4})
        for (int r : {1, 2}) CHECK(std::abs(pair_correlators(make_params(1.0, b, 0.4, 0.0), r).yx_minus_xy) < 1e-10);
}

TEST_CASE("bounds, residues and concurrence range over random points") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 60; ++i) {
        const auto p = make_params(0.5 + u(rng), 2 * u(rng), 0.1 + 5 * u(rng), 6 * u(rng) - 3);
        for (int r : {1, 2}) {
            const auto pc = pair_correlators(p, r);
            CHECK(pc.imag_residue < 1e-12);
            CHECK(std::abs(pc.zz) <= 1.0);
            CHECK(std::abs(pc.z_single) <= 1.0);
            CHECK(std::abs(pc.xx_plus_yy) <= 2.0);
            CHECK(std::abs(pc.yx_minus_xy) <= 2.0);
            const double c = concurrence(pc);
            CHECK(c >= 0.0);
            CHECK(c <= 1.0);
        }
    }
}

TEST_CASE("unsupported separations") {
    const auto p = make_params(1.0, 0.5, 1.0, 1.0);
    CHECK_THROWS_AS(pair_correlators(p, 0), UnsupportedSeparation);
    CHECK_THROWS_AS(pair_correlators(p, 3), UnsupportedSeparation);
    CHECK_THROWS_AS(concurrence(p, 3), UnsupportedSeparation);
    CHECK_THROWS_AS(g_r(p, -1), InvalidParams);
}

TEST_CASE("negative vy") {
    PairCorrelatorsd bad{0.1, 0.0, -1.0, 0.5, 1, 0.0};
    CHECK_THROWS_AS(concurrence(bad), NegativeVy);
    // Marginal round-off is clamped: (1+zz)^2 - 4 m^2 = -1.6e-11 -> vy ~ -1e-12.
    PairCorrelatorsd edge{0.4, 0.0, 0.0, 0.5 + 4e-12, 1, 0.0};
    CHECK(concurrence(edge) == doctest::Approx(0.2));
}
