#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ssw/correlators.hpp"
#include "ssw/ed_oracle.hpp"
#include "ssw/errors.hpp"

using namespace ssw;
using namespace ssw::ed;
using cd = std::complex<double>;
using enum PauliAxis;

namespace {

// Explicit Kronecker products, site 1 leftmost, |0> = spin up.
Eigen::MatrixXcd pauli(char a) {
    Eigen::Matrix2cd m;
    switch (a) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m.setIdentity();
    }
    return m;
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// word[k] is the Pauli letter on site k + 1 ('i' for identity).
Eigen::MatrixXcd string_op(const std::string& word) {
    Eigen::MatrixXcd m = pauli(word[0]);
    for (std::size_t k = 1; k < word.size(); ++k) m = kron(m, pauli(word[k]));
    return m;
}

Eigen::MatrixXcd place(int n, std::initializer_list<std::pair<int, char>> f) {
    std::string w(n, 'i');
    for (auto [site, a] : f) w[(site - 1) % n] = a;
    return string_op(w);
}

double maxabs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("Pauli algebra") {
    for (auto a : {X, Y, Z}) {
        const auto s = build_site_operator(4, 2, a);
        CHECK(maxabs((s * s).matrix - identity(4).matrix) < 1e-15);
    }
    CHECK(maxabs(commutator(build_site_operator(3, 1, X), build_site_operator(3, 2, Y)).matrix) == 0.0);
    const auto xy = build_site_operator(3, 1, X) * build_site_operator(3, 1, Y);
    CHECK(maxabs(xy.matrix - cd(0, 1) * build_site_operator(3, 1, Z).matrix) < 1e-15);
    CHECK(maxabs(build_site_operator(3, 2, Y).matrix - place(3, {{2, 'y'}})) == 0.0);
    CHECK(maxabs(build_site_operator(5, 1, Z).matrix - place(5, {{1, 'z'}})) == 0.0);
}

TEST_CASE("size and range checks") {
    CHECK_THROWS_AS(build_site_operator(13, 1, X), SizeLimit);
    CHECK_THROWS_AS(build_h0(13, 1, 0.5), SizeLimit);
    CHECK_THROWS_AS(build_je(2, 1, 0.5), InvalidParams);
    CHECK_THROWS_AS(build_site_operator(4, 5, X), InvalidParams);
    CHECK_THROWS_AS(build_site_operator(4, 0, X), InvalidParams);
    CHECK_THROWS_AS(build_h0(4, 1, 0.5) + build_h0(5, 1, 0.5), DimensionMismatch);
}

TEST_CASE("three-site Hamiltonian spectrum against a direct eigensolve") {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(8, 8);
    for (int l = 1; l <= 3; ++l)
        h += -0.5 * (place(3, {{l, 'x'}, {l + 1, 'x'}}) + place(3, {{l, 'y'}, {l + 1, 'y'}}));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> direct(h);
    const Eigen::VectorXd ours = spectrum(build_h0(3, 1.0, 0.0));
    CHECK((ours - direct.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(maxabs(build_h0(3, 1.0, 0.0).matrix - h) < 1e-15);
}

TEST_CASE("U(1) symmetry and Zeeman shifts") {
    const auto h = build_h0(6, 1.0, 0.7, 1.3);
    CHECK(maxabs(commutator(h, total_sz(6)).matrix) < 1e-12);
    CHECK(h.hermiticity_residue() < 1e-12);
    const double delta = 0.25, b = 1.3;
    const auto h2 = build_h0(6, 1.0, 0.7 + delta, b);
    // Sector with total sigma^z = 2: compare sector spectra.
    std::vector<Eigen::Index> sector;
    for (Eigen::Index s = 0; s < 64; ++s)
        if (6 - 2 * std::popcount(static_cast<unsigned>(s)) == 2) sector.push_back(s);
    auto block = [&](const PauliOperator& op) {
        Eigen::MatrixXcd m(sector.size(), sector.size());
        for (std::size_t r = 0; r < sector.size(); ++r)
            for (std::size_t c = 0; c < sector.size(); ++c) m(r, c) = op.matrix(sector[r], sector[c]);
        return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues().eval();
    };
    CHECK((block(h2) - block(h) + Eigen::VectorXd::Constant(sector.size(), b * delta * 2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("energy current against an explicit Pauli-string build") {
    const int n = 4;
    const double j = 1.0, b = 0.7;
    Eigen::MatrixXcd je = Eigen::MatrixXcd::Zero(16, 16);
    for (int l = 1; l <= n; ++l) {
        je += -b * j * (place(n, {{l, 'y'}, {l + 1, 'x'}}) - place(n, {{l, 'x'}, {l + 1, 'y'}}));
        je += 0.5 * j * j * (place(n, {{l, 'y'}, {l + 1, 'z'}, {l + 2, 'x'}}) - place(n, {{l, 'x'}, {l + 1, 'z'}, {l + 2, 'y'}}));
    }
    CHECK(maxabs(build_je(n, j, b).matrix - je) < 1e-14);
}

TEST_CASE("energy current properties") {
    const auto h = build_h0(6, 1.0, 0.7);
    const auto je = build_je(6, 1.0, 0.7);
    CHECK(je.hermiticity_residue() < 1e-12);
    CHECK(std::abs(je.matrix.trace()) < 1e-12);
    const double scale = maxabs(h.matrix) * maxabs(je.matrix);
    CHECK(maxabs(commutator(je, h).matrix) < 1e-11 * scale);
}

TEST_CASE("sum of local currents reproduces the closed form") {
    for (int n : {4, 6, 8}) {
        PauliOperator sum = zero_operator(n);
        for (int l = 1; l <= n; ++l) sum = sum + build_jl(n, l, 1.0, 0.7);
        CHECK(maxabs(sum.matrix - build_je(n, 1.0, 0.7).matrix) < 1e-12);
    }
}

TEST_CASE("local currents") {
    const int n = 6;
    const double j = 1.0, b = 0.7;
    const auto h = build_h0(n, j, b);
    for (int l = 1; l <= n; ++l) {
        const auto jl = build_jl(n, l, j, b);
        CHECK(jl.hermiticity_residue() < 1e-12);
        // dh_l/dt = i[H, h_l] = j_{l-1} - j_l
        const auto lhs = cd(0, 1) * commutator(h, energy_density_operator(n, l, j, b));
        const auto rhs = build_jl(n, l == 1 ? n : l - 1, j, b) - jl;
        CHECK(maxabs(lhs.matrix - rhs.matrix) < 1e-12);
    }
    CHECK(maxabs(build_jl(n, 3, 0.0, b).matrix) == 0.0);
}

TEST_CASE("thermal state limits") {
    const auto h = build_h0(5, 1.0, 0.4);
    const auto je = build_je(5, 1.0, 0.4);
    const auto inf = thermal_state(h, je, 0.0, 0.0);
    CHECK(maxabs(inf.rho - Eigen::MatrixXcd::Identity(32, 32) / 32.0) < 1e-12);
    CHECK(inf.log_z == doctest::Approx(5 * std::log(2.0)));
    const auto cold = thermal_state(build_h0(6, 1.0, 0.3), build_je(6, 1.0, 0.3), 1e3, 0.0);
    CHECK(expect(build_h0(6, 1.0, 0.3), cold) == doctest::Approx(spectrum(build_h0(6, 1.0, 0.3))(0)).epsilon(1e-10));
    CHECK_THROWS_AS(thermal_state(h, je, NAN, 0.0), InvalidParams);
}

TEST_CASE("two-qubit Gibbs state in closed form") {
    const double j = 0.8, b = 0.3, beta = 1.7;
    PauliOperator h;
    h.n_sites = 2;
    h.matrix = -0.5 * j * (place(2, {{1, 'x'}, {2, 'x'}}) + place(2, {{1, 'y'}, {2, 'y'}})) -
               b * (place(2, {{1, 'z'}}) + place(2, {{2, 'z'}}));
    h.kind = OperatorKind::Hermitian;
    const auto st = thermal_state(h, zero_operator(2), beta, 0.0);
    const double z = 2 * std::cosh(2 * beta * b) + 2 * std::cosh(beta * j);
    Eigen::Matrix4cd ref = Eigen::Matrix4cd::Zero();
    ref(0, 0) = std::exp(2 * beta * b) / z;
    ref(3, 3) = std::exp(-2 * beta * b) / z;
    ref(1, 1) = ref(2, 2) = std::cosh(beta * j) / z;
    ref(1, 2) = ref(2, 1) = std::sinh(beta * j) / z;
    CHECK(maxabs(st.rho - ref) < 1e-14);
    CHECK(st.log_z == doctest::Approx(std::log(z)).epsilon(1e-14));
}

TEST_CASE("density-matrix axioms") {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 12; ++i) {
        const double b = 2 * u(rng), t = 0.1 + 4 * u(rng), g = 6 * u(rng) - 3;
        const auto st = thermal_state(build_h0(6, 1.0, b), build_je(6, 1.0, b), 1 / t, g);
        CHECK(std::abs(st.rho.trace() - 1.0) < 1e-12);
        CHECK(maxabs(st.rho - st.rho.adjoint()) < 1e-12);
        CHECK(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(st.rho).eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("expectations") {
    const auto st = thermal_state(build_h0(6, 1.0, 0.5), build_je(6, 1.0, 0.5), 1.0, 1.0);
    CHECK(expect(identity(6), st) == doctest::Approx(1.0).epsilon(1e-14));
    const double z1 = expect(build_site_operator(6, 1, Z), st);
    CHECK(std::abs(z1) <= 1.0);
    CHECK_THROWS_AS(expect(identity(4), st), DimensionMismatch);
}

TEST_CASE("reduced states") {
    const auto mixed = thermal_state(build_h0(5, 1.0, 0.5), build_je(5, 1.0, 0.5), 0.0, 0.0);
    CHECK(maxabs(two_site_rdm(mixed, 1, 3) - Eigen::Matrix4cd::Identity() / 4.0) < 1e-14);

    const auto polar = thermal_state(build_h0(5, 1.0, 5.0), build_je(5, 1.0, 5.0), 50.0, 0.0);
    Eigen::Matrix4cd up = Eigen::Matrix4cd::Zero();
    up(0, 0) = 1;
    CHECK(maxabs(two_site_rdm(polar, 2, 4) - up) < 1e-12);

    const auto st = thermal_state(build_h0(8, 1.0, 0.5), build_je(8, 1.0, 0.5), 1.0, 1.0);
    const Eigen::Matrix4cd r = two_site_rdm(st, 1, 2);
    for (int a = 0; a < 4; ++a)
        for (int c = 0; c < 4; ++c) {
            const bool allowed = a == c || (a == 1 && c == 2) || (a == 2 && c == 1) || a + c == 3;
            if (!allowed) CHECK(std::abs(r(a, c)) < 1e-10);
        }
    CHECK(std::abs(r(0, 3)) < 1e-10);
    CHECK(std::abs(r.trace() - 1.0) < 1e-12);
    CHECK_THROWS_AS(two_site_rdm(st, 2, 2), DimensionMismatch);
    CHECK_THROWS_AS(two_site_rdm(st, 1, 9), DimensionMismatch);
}

TEST_CASE("reduced state correlators match direct expectations") {
    const int n = 8;
    const auto st = thermal_state(build_h0(n, 1.0, 0.5), build_je(n, 1.0, 0.5), 1.0, 1.0);
    for (int sep : {1, 2}) {
        const auto pc = pair_correlators_from_rdm(two_site_rdm(st, 3, 3 + sep), sep);
        auto two = [&](PauliAxis a, PauliAxis b) {
            const std::pair<int, PauliAxis> f[] = {{3, a}, {3 + sep, b}};
            return pauli_string(n, f);
        };
        CHECK(std::abs(pc.xx_plus_yy - expect(two(X, X) + two(Y, Y), st)) < 1e-12);
        CHECK(std::abs(pc.yx_minus_xy - expect(two(Y, X) - two(X, Y), st)) < 1e-12);
        CHECK(std::abs(pc.zz - expect(two(Z, Z), st)) < 1e-12);
        CHECK(std::abs(pc.z_single - expect(build_site_operator(n, 3, Z), st)) < 1e-12);
    }
}

TEST_CASE("Wootters concurrence") {
    Eigen::Vector4cd bell(0, 1, 1, 0);
    bell /= std::sqrt(2.0);
    CHECK(std::abs(wootters_concurrence(bell * bell.adjoint()) - 1.0) < 1e-12);

    const double th[] = {0.7, 2.1}, ph[] = {0.3, -1.2};
    const Eigen::VectorXcd prod = product_state(th, ph);
    CHECK(wootters_concurrence(prod * prod.adjoint()) < 1e-12);

    Eigen::Vector4cd singlet(0, 1, -1, 0);
    singlet /= std::sqrt(2.0);
    const double p = 0.6;
    const Eigen::Matrix4cd werner = p * singlet * singlet.adjoint() + (1 - p) * Eigen::Matrix4cd::Identity() / 4.0;
    CHECK(std::abs(wootters_concurrence(werner) - (3 * p - 1) / 2) < 1e-10);
    const Eigen::Matrix4cd separable = 0.3 * singlet * singlet.adjoint() + 0.7 * Eigen::Matrix4cd::Identity() / 4.0;
    CHECK(wootters_concurrence(separable) == 0.0);

    CHECK_THROWS_AS(wootters_concurrence(Eigen::Matrix4cd::Identity()), InvalidDensityMatrix);
    Eigen::Matrix4cd skew = Eigen::Matrix4cd::Identity() / 4.0;
    skew(0, 1) = 0.1;
    CHECK_THROWS_AS(wootters_concurrence(skew), InvalidDensityMatrix);
    Eigen::Matrix4cd negative = Eigen::Matrix4cd::Zero();
    negative(0, 0) = 1.5;
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(wootters_concurrence(negative), InvalidDensityMatrix);
}

TEST_CASE("X-state formula agrees with Wootters on thermal reduced states") {
    std::mt19937_64 rng(161);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 8; ++i) {
        const double b = 2 * u(rng), t = 0.1 + u(rng), g = 4 * u(rng) - 2;
        const auto st = thermal_state(build_h0(6, 1.0, b), build_je(6, 1.0, b), 1 / t, g);
        for (int sep : {1, 2}) {
            const auto r = two_site_rdm(st, 1, 1 + sep);
            CHECK(std::abs(wootters_concurrence(r) - concurrence(pair_correlators_from_rdm(r, sep))) < 1e-9);
        }
    }
}

TEST_CASE("product states obey both separability bounds") {
    const int n = 6;
    std::mt19937_64 rng(20260101);
    for (double b : {0.3, 1.0}) {
        const auto je = build_je(n, 1.0, b);
        PauliOperator hop = zero_operator(n);
        for (int l = 1; l <= n; ++l) {
            const std::pair<int, PauliAxis> xx[] = {{l, X}, {l + 1, X}};
            const std::pair<int, PauliAxis> yy[] = {{l, Y}, {l + 1, Y}};
            hop = hop + pauli_string(n, xx) + pauli_string(n, yy);
        }
        hop.kind = OperatorKind::Hermitian;
        for (int i = 0; i < 200; ++i) {
            const auto psi = random_product_state(n, rng);
            CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
            CHECK(std::abs(expect(je, psi)) <= n * (2 * b + 1) / 2.0);
            CHECK(std::abs(expect(hop, psi)) <= n);
        }
    }
}

TEST_CASE("random product states are reproducible") {
    std::mt19937_64 a(5), b(5);
    CHECK(random_product_state(4, a) == random_product_state(4, b));
}
