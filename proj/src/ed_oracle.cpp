#include "ssw/ed_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ssw/errors.hpp"

namespace ssw::ed {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

void check_size(int n_sites, int minimum = 1) {
    if (n_sites > kMaxSites)
        throw SizeLimit("exact diagonalisation is limited to N <= " + std::to_string(kMaxSites) + " (got " +
                        std::to_string(n_sites) + ")");
    if (n_sites < minimum)
        throw InvalidParams("chain needs at least " + std::to_string(minimum) + " sites (got " +
                            std::to_string(n_sites) + ")");
}

// Periodic boundary: site N + 1 is site 1, site 0 is site N.
int wrap_site(int n_sites, int site) { return ((site - 1) % n_sites + n_sites) % n_sites + 1; }

// 1-based periodic site -> bit position in the basis index.
int bit_of(int n_sites, int site) { return n_sites - wrap_site(n_sites, site); }

void check_same_space(const PauliOperator& a, const PauliOperator& b) {
    if (a.n_sites != b.n_sites || a.dim() != b.dim())
        throw DimensionMismatch("operators act on different chains");
}

OperatorKind sum_kind(OperatorKind a, OperatorKind b) { return a == b ? a : OperatorKind::General; }

PauliOperator bond_coupling(int n, int l, double j) {
    const std::pair<int, PauliAxis> xx[] = {{l, PauliAxis::X}, {l + 1, PauliAxis::X}};
    const std::pair<int, PauliAxis> yy[] = {{l, PauliAxis::Y}, {l + 1, PauliAxis::Y}};
    PauliOperator v = Complex(-j / 2.0) * (pauli_string(n, xx) + pauli_string(n, yy));
    v.kind = OperatorKind::Hermitian;
    return v;
}

PauliOperator onsite_field(int n, int l, double b_field, double b_aux) {
    PauliOperator h = Complex(-b_aux * b_field) * build_site_operator(n, wrap_site(n, l), PauliAxis::Z);
    h.kind = OperatorKind::Hermitian;
    return h;
}

PauliOperator hermitian(PauliOperator op) {
    op.kind = OperatorKind::Hermitian;
    return op;
}

} // namespace

double PauliOperator::hermiticity_residue() const {
    if (matrix.size() == 0) return 0.0;
    if (kind == OperatorKind::AntiHermitian) return (matrix + matrix.adjoint()).cwiseAbs().maxCoeff();
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

PauliOperator operator+(const PauliOperator& a, const PauliOperator& b) {
    check_same_space(a, b);
    return {a.n_sites, a.matrix + b.matrix, sum_kind(a.kind, b.kind)};
}

PauliOperator operator-(const PauliOperator& a, const PauliOperator& b) {
    check_same_space(a, b);
    return {a.n_sites, a.matrix - b.matrix, sum_kind(a.kind, b.kind)};
}

PauliOperator operator*(const PauliOperator& a, const PauliOperator& b) {
    check_same_space(a, b);
    return {a.n_sites, a.matrix * b.matrix, OperatorKind::General};
}

PauliOperator operator*(Complex c, const PauliOperator& a) {
    OperatorKind kind = OperatorKind::General;
    if (c.imag() == 0.0)
        kind = a.kind;
    else if (c.real() == 0.0 && a.kind != OperatorKind::General)
        kind = a.kind == OperatorKind::Hermitian ? OperatorKind::AntiHermitian : OperatorKind::Hermitian;
    return {a.n_sites, c * a.matrix, kind};
}

PauliOperator commutator(const PauliOperator& a, const PauliOperator& b) {
    check_same_space(a, b);
    PauliOperator out{a.n_sites, a.matrix * b.matrix - b.matrix * a.matrix, OperatorKind::General};
    // [H1, H2] of Hermitian operators is anti-Hermitian.
    if (a.kind == OperatorKind::Hermitian && b.kind == OperatorKind::Hermitian) out.kind = OperatorKind::AntiHermitian;
    return out;
}

PauliOperator identity(int n_sites) {
    check_size(n_sites);
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    return {n_sites, Eigen::MatrixXcd::Identity(dim, dim), OperatorKind::Hermitian};
}

PauliOperator zero_operator(int n_sites) {
    check_size(n_sites);
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    return {n_sites, Eigen::MatrixXcd::Zero(dim, dim), OperatorKind::Hermitian};
}

PauliOperator build_site_operator(int n_sites, int site, PauliAxis axis) {
    check_size(n_sites);
    if (site < 1 || site > n_sites)
        throw InvalidParams("site " + std::to_string(site) + " outside 1.." + std::to_string(n_sites));
    const std::pair<int, PauliAxis> f[] = {{site, axis}};
    return pauli_string(n_sites, f);
}

PauliOperator pauli_string(int n_sites, std::span<const std::pair<int, PauliAxis>> factors) {
    check_size(n_sites);
    std::uint64_t flip = 0;
    std::uint64_t used = 0;
    std::uint64_t zmask = 0;
    std::uint64_t ymask = 0;
    for (const auto& [site, axis] : factors) {
        const std::uint64_t bit = std::uint64_t(1) << bit_of(n_sites, site);
        if (used & bit) throw InvalidParams("pauli_string: repeated site " + std::to_string(site));
        used |= bit;
        if (axis != PauliAxis::Z) flip |= bit;
        if (axis == PauliAxis::Z) zmask |= bit;
        if (axis == PauliAxis::Y) ymask |= bit;
    }
    const Eigen::Index dim = Eigen::Index(1) << n_sites;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    const int n_y = std::popcount(ymask);
    for (Eigen::Index in = 0; in < dim; ++in) {
        const auto s = static_cast<std::uint64_t>(in);
        // Z|1> = -|1>; Y|0> = i|1>, Y|1> = -i|0>.
        double sign = (std::popcount(s & zmask) % 2) ? -1.0 : 1.0;
        if (std::popcount(s & ymask) % 2) sign = -sign;
        Complex phase = sign;
        for (int k = 0; k < n_y; ++k) phase *= kI;
        m(static_cast<Eigen::Index>(s ^ flip), in) = phase;
    }
    return {n_sites, std::move(m), OperatorKind::Hermitian};
}

PauliOperator total_sz(int n_sites) {
    PauliOperator out = zero_operator(n_sites);
    for (int l = 1; l <= n_sites; ++l) out = out + build_site_operator(n_sites, l, PauliAxis::Z);
    return out;
}

PauliOperator build_h0(int n_sites, double j, double b_field, double b_aux) {
    check_size(n_sites, 3);
    PauliOperator h = zero_operator(n_sites);
    for (int l = 1; l <= n_sites; ++l) {
        h = h + bond_coupling(n_sites, l, j);
        h = h + Complex(-b_aux * b_field) * build_site_operator(n_sites, l, PauliAxis::Z);
    }
    return hermitian(std::move(h));
}

PauliOperator build_je(int n_sites, double j, double b_field) {
    check_size(n_sites, 3);
    using enum PauliAxis;
    PauliOperator je = zero_operator(n_sites);
    for (int l = 1; l <= n_sites; ++l) {
        const std::pair<int, PauliAxis> yx[] = {{l, Y}, {l + 1, X}};
        const std::pair<int, PauliAxis> xy[] = {{l, X}, {l + 1, Y}};
        const std::pair<int, PauliAxis> yzx[] = {{l, Y}, {l + 1, Z}, {l + 2, X}};
        const std::pair<int, PauliAxis> xzy[] = {{l, X}, {l + 1, Z}, {l + 2, Y}};
        je = je + Complex(-b_field * j) * (pauli_string(n_sites, yx) - pauli_string(n_sites, xy));
        je = je + Complex(j * j / 2.0) * (pauli_string(n_sites, yzx) - pauli_string(n_sites, xzy));
    }
    return hermitian(std::move(je));
}

PauliOperator build_jl(int n_sites, int site, double j, double b_field, double b_aux) {
    check_size(n_sites, 3);
    auto h = [&](int l) { return onsite_field(n_sites, l, b_field, b_aux); };
    auto v = [&](int l) { return bond_coupling(n_sites, l, j); };
    PauliOperator inner = commutator(h(site) - h(site + 1), v(site)) + commutator(v(site), v(site + 1)) +
                          commutator(v(site - 1), v(site));
    return hermitian(Complex(0.0, 0.5) * inner);
}

PauliOperator energy_density_operator(int n_sites, int site, double j, double b_field, double b_aux) {
    check_size(n_sites, 3);
    PauliOperator out = onsite_field(n_sites, site, b_field, b_aux) +
                        Complex(0.5) * (bond_coupling(n_sites, site - 1, j) + bond_coupling(n_sites, site, j));
    return hermitian(std::move(out));
}

Eigen::VectorXd spectrum(const PauliOperator& op) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op.matrix, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw EigensolverFailure("Hermitian eigensolve failed");
    return solver.eigenvalues();
}

ThermalState thermal_state(const PauliOperator& h0, const PauliOperator& je, double beta, double gamma) {
    check_same_space(h0, je);
    if (!std::isfinite(beta) || !std::isfinite(gamma)) throw InvalidParams("beta and gamma must be finite");
    const int n = h0.n_sites;
    const Eigen::Index dim = h0.dim();
    const Eigen::MatrixXcd k = beta * h0.matrix + gamma * je.matrix;
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InvalidParams("beta H0 + gamma J^E is not Hermitian");

    // Group basis states by magnetisation; K is block diagonal when it conserves S^z.
    std::vector<std::vector<Eigen::Index>> sectors(static_cast<std::size_t>(n + 1));
    for (Eigen::Index i = 0; i < dim; ++i) sectors[static_cast<std::size_t>(std::popcount(static_cast<std::uint64_t>(i)))].push_back(i);
    double leak = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index jj = 0; jj < dim; ++jj)
            if (std::popcount(static_cast<std::uint64_t>(i)) != std::popcount(static_cast<std::uint64_t>(jj)))
                leak = std::max(leak, std::abs(k(i, jj)));
    if (leak > 1e-12 * scale) {
        sectors.assign(1, std::vector<Eigen::Index>(static_cast<std::size_t>(dim)));
        for (Eigen::Index i = 0; i < dim; ++i) sectors[0][static_cast<std::size_t>(i)] = i;
    }

    struct Block {
        const std::vector<Eigen::Index>* index;
        Eigen::VectorXd values;
        Eigen::MatrixXcd vectors;
    };
    std::vector<Block> blocks;
    double lowest = INFINITY;
    for (const auto& idx : sectors) {
        if (idx.empty()) continue;
        const auto m = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXcd sub(m, m);
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = k(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sub);
        if (solver.info() != Eigen::Success) throw EigensolverFailure("eigensolve of beta H0 + gamma J^E failed");
        lowest = std::min(lowest, solver.eigenvalues().minCoeff());
        blocks.push_back({&idx, solver.eigenvalues(), solver.eigenvectors()});
    }

    ThermalState state;
    state.n_sites = n;
    state.beta = beta;
    state.gamma = gamma;
    state.rho = Eigen::MatrixXcd::Zero(dim, dim);
    state.generator_spectrum.resize(dim);
    double z_shifted = 0.0;
    Eigen::Index filled = 0;
    for (const auto& blk : blocks) {
        const Eigen::VectorXd w = (-(blk.values.array() - lowest)).exp().matrix();
        z_shifted += w.sum();
        const Eigen::MatrixXcd part = blk.vectors * w.asDiagonal() * blk.vectors.adjoint();
        const auto& idx = *blk.index;
        const auto m = static_cast<Eigen::Index>(idx.size());
        for (Eigen::Index a = 0; a < m; ++a)
            for (Eigen::Index b = 0; b < m; ++b) state.rho(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]) = part(a, b);
        state.generator_spectrum.segment(filled, m) = blk.values;
        filled += m;
    }
    std::sort(state.generator_spectrum.data(), state.generator_spectrum.data() + dim);
    state.rho /= z_shifted;
    state.log_z = std::log(z_shifted) - lowest;
    return state;
}

double expect(const PauliOperator& op, const ThermalState& state) {
    if (op.dim() != state.rho.rows() || op.n_sites != state.n_sites)
        throw DimensionMismatch("operator and state act on different chains");
    // tr(A rho) = sum_ij A_ij rho_ji
    const Complex v = op.matrix.cwiseProduct(state.rho.transpose()).sum();
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw InvalidParams("expectation value has an imaginary part; operator is not Hermitian");
    return v.real();
}

double expect(const PauliOperator& op, const Eigen::VectorXcd& psi) {
    if (op.dim() != psi.size()) throw DimensionMismatch("operator and state act on different chains");
    const Complex v = psi.dot(op.matrix * psi);
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw InvalidParams("expectation value has an imaginary part; operator is not Hermitian");
    return v.real();
}

Eigen::Matrix4cd two_site_rdm(const ThermalState& state, int l, int r) {
    const int n = state.n_sites;
    if (state.rho.rows() != (Eigen::Index(1) << n)) throw DimensionMismatch("state dimension does not match 2^N");
    if (l < 1 || l > n || r < 1 || r > n || l == r)
        throw DimensionMismatch("two_site_rdm needs two distinct sites in 1.." + std::to_string(n));
    const std::uint64_t bl = std::uint64_t(1) << bit_of(n, l);
    const std::uint64_t br = std::uint64_t(1) << bit_of(n, r);
    const std::uint64_t rest_count = std::uint64_t(1) << (n - 2);
    // Scatter the N-2 "rest" bits around the two kept positions.
    auto embed = [&](std::uint64_t rest, int a, int b) {
        std::uint64_t out = 0;
        int k = 0;
        for (int bit = 0; bit < n; ++bit) {
            const std::uint64_t mask = std::uint64_t(1) << bit;
            if (mask == bl || mask == br) continue;
            if (rest & (std::uint64_t(1) << k)) out |= mask;
            ++k;
        }
        if (a) out |= bl;
        if (b) out |= br;
        return static_cast<Eigen::Index>(out);
    };
    Eigen::Matrix4cd rdm = Eigen::Matrix4cd::Zero();
    for (std::uint64_t rest = 0; rest < rest_count; ++rest) {
        Eigen::Index idx[4];
        for (int s = 0; s < 4; ++s) idx[s] = embed(rest, s >> 1, s & 1);
        for (int s = 0; s < 4; ++s)
            for (int t = 0; t < 4; ++t) rdm(s, t) += state.rho(idx[s], idx[t]);
    }
    return rdm;
}

double wootters_concurrence(const Eigen::Matrix4cd& rho) {
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > 1e-10) throw InvalidDensityMatrix("two-qubit state is not Hermitian");
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-10) throw InvalidDensityMatrix("two-qubit state has trace != 1");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho);
    if (eig.info() != Eigen::Success) throw EigensolverFailure("eigensolve of two-qubit state failed");
    if (eig.eigenvalues().minCoeff() < -1e-10) throw InvalidDensityMatrix("two-qubit state is not positive");

    Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
    yy(0, 3) = -1.0;
    yy(1, 2) = 1.0;
    yy(2, 1) = 1.0;
    yy(3, 0) = -1.0;
    // With rho = V V^dag, the lambda_i are the singular values of V^T (y x y) V; this
    // avoids square roots of round-off sized eigenvalues of rho rho~.
    const Eigen::Vector4d root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::Matrix4cd v = eig.eigenvectors() * root.asDiagonal();
    const Eigen::Matrix4cd tau = v.transpose() * yy * v;
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(tau);
    Eigen::Vector4d lam = svd.singularValues();
    std::sort(lam.data(), lam.data() + 4, std::greater<>());
    return std::max(0.0, lam(0) - lam(1) - lam(2) - lam(3));
}

PairCorrelatorsd pair_correlators_from_rdm(const Eigen::Matrix4cd& rdm, int separation) {
    const Eigen::Matrix2cd x{{0, 1}, {1, 0}};
    const Eigen::Matrix2cd y{{0, -kI}, {kI, 0}};
    const Eigen::Matrix2cd z{{1, 0}, {0, -1}};
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    auto kron = [](const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
        Eigen::Matrix4cd out;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
        return out;
    };
    auto ev = [&](const Eigen::Matrix4cd& op) { return (op * rdm).trace().real(); };
    PairCorrelatorsd out;
    out.separation = separation;
    out.xx_plus_yy = ev(kron(x, x) + kron(y, y));
    out.yx_minus_xy = ev(kron(y, x) - kron(x, y));
    out.zz = ev(kron(z, z));
    out.z_single = ev(kron(z, id));
    return out;
}

Eigen::VectorXcd product_state(std::span<const double> theta, std::span<const double> phi) {
    if (theta.size() != phi.size()) throw DimensionMismatch("theta and phi must have one entry per site");
    const int n = static_cast<int>(theta.size());
    check_size(n);
    Eigen::VectorXcd psi(1);
    psi(0) = 1.0;
    for (int l = 0; l < n; ++l) {
        Eigen::Vector2cd site(std::cos(theta[static_cast<std::size_t>(l)] / 2.0),
                              std::polar(std::sin(theta[static_cast<std::size_t>(l)] / 2.0), phi[static_cast<std::size_t>(l)]));
        // Site 1 ends up most significant.
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index i = 0; i < psi.size(); ++i) {
            next(2 * i) = psi(i) * site(0);
            next(2 * i + 1) = psi(i) * site(1);
        }
        psi = std::move(next);
    }
    return psi;
}

Eigen::VectorXcd random_product_state(int n_sites, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> cos_theta(-1.0, 1.0);
    std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
    std::vector<double> theta(static_cast<std::size_t>(n_sites));
    std::vector<double> phi(static_cast<std::size_t>(n_sites));
    for (int l = 0; l < n_sites; ++l) {
        theta[static_cast<std::size_t>(l)] = std::acos(cos_theta(rng));
        phi[static_cast<std::size_t>(l)] = azimuth(rng);
    }
    return product_state(theta, phi);
}

EdObservables ed_observables(const ChainParamsd& p, int n_sites) {
    p.validate();
    check_size(n_sites, 3);
    const PauliOperator h0 = build_h0(n_sites, p.j_coupling, p.b_field, p.b_aux);
    const PauliOperator je = build_je(n_sites, p.j_coupling, p.b_field);
    const ThermalState state = thermal_state(h0, je, p.beta(), p.gamma);

    EdObservables out;
    const double n = n_sites;
    out.log_z_density = state.log_z / n;
    out.e_density = expect(h0, state) / n;
    out.q_density = expect(je, state) / n;
    out.u_density = out.e_density + p.drive() * out.q_density;
    out.m_density = expect(build_site_operator(n_sites, 1, PauliAxis::Z), state);
    const Eigen::Matrix4cd rdm1 = two_site_rdm(state, 1, 2);
    const Eigen::Matrix4cd rdm2 = two_site_rdm(state, 1, 3);
    out.r1 = pair_correlators_from_rdm(rdm1, 1);
    out.r2 = pair_correlators_from_rdm(rdm2, 2);
    out.concurrence_r1 = wootters_concurrence(rdm1);
    out.concurrence_r2 = wootters_concurrence(rdm2);
    return out;
}

} // namespace ssw::ed
