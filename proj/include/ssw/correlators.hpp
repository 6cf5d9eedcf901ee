#ifndef SSW_CORRELATORS_HPP
#define SSW_CORRELATORS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ssw/chain_params.hpp"
#include "ssw/errors.hpp"
#include "ssw/pfaffian.hpp"
#include "ssw/quadrature.hpp"
#include "ssw/thermo.hpp"

namespace ssw {

/// Fermionic two-point functions G_R = <A_l B_{l+R}> and S_R = <B_l B_{l+R}> = i s_R
/// for R = 0..r_max. G is even and s is odd in R.
template <typename Scalar>
struct CorrelatorSet {
    std::vector<Scalar> g;
    std::vector<Scalar> s;

    int r_max() const { return static_cast<int>(g.size()) - 1; }

    Scalar g_at(int separation) const { return g.at(static_cast<std::size_t>(std::abs(separation))); }
    Scalar s_at(int separation) const {
        const Scalar v = s.at(static_cast<std::size_t>(std::abs(separation)));
        return separation < 0 ? -v : v;
    }
};

using CorrelatorSetd = CorrelatorSet<double>;

/// Two-site spin correlators at separation R on a translation-invariant chain.
template <typename Scalar>
struct PairCorrelators {
    Scalar xx_plus_yy{};
    Scalar yx_minus_xy{};
    Scalar zz{};
    Scalar z_single{};
    int separation{};
    /// Largest imaginary part dropped from the Pfaffians.
    Scalar imag_residue{};
};

using PairCorrelatorsd = PairCorrelators<double>;

/// G_0..G_rmax and s_0..s_rmax from one array-valued quadrature of tanh(beta Lambda).
template <typename Scalar>
CorrelatorSet<Scalar> correlator_set(const ChainParams<Scalar>& p, int r_max, const QuadratureConfig& config = {}) {
    p.validate();
    if (r_max < 0) throw InvalidParams("r_max must be non-negative");
    using std::cos;
    using std::sin;
    using std::tanh;
    using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
    const int n = r_max + 1;
    const Vec avg = detail::zone_average<Scalar>(
        [&](Scalar q) -> Vec {
            const Scalar t = tanh(beta_lambda(p, q));
            Vec v(2 * n);
            for (int r = 0; r < n; ++r) {
                v(r) = cos(q * Scalar(r)) * t;
                v(n + r) = sin(q * Scalar(r)) * t;
            }
            return v;
        },
        config);
    CorrelatorSet<Scalar> out;
    out.g.assign(avg.data(), avg.data() + n);
    out.s.assign(avg.data() + n, avg.data() + 2 * n);
    out.s[0] = Scalar(0);
    return out;
}

/// G_R = (1/2pi) int cos(qR) tanh(beta Lambda) dq.
template <typename Scalar>
Scalar g_r(const ChainParams<Scalar>& p, int separation, const QuadratureConfig& config = {}) {
    p.validate();
    if (separation < 0) throw InvalidParams("separation must be non-negative");
    using std::cos;
    using std::tanh;
    return detail::zone_average<Scalar>(
        [&](Scalar q) { return cos(q * Scalar(separation)) * tanh(beta_lambda(p, q)); }, config);
}

/// s_R with S_R = i s_R; s_R = (1/2pi) int sin(qR) tanh(beta Lambda) dq.
template <typename Scalar>
Scalar s_r(const ChainParams<Scalar>& p, int separation, const QuadratureConfig& config = {}) {
    p.validate();
    if (separation < 0) throw InvalidParams("separation must be non-negative");
    if (separation == 0) return Scalar(0);
    using std::sin;
    using std::tanh;
    return detail::zone_average<Scalar>(
        [&](Scalar q) { return sin(q * Scalar(separation)) * tanh(beta_lambda(p, q)); }, config);
}

enum class Majorana { A, B };

/// A_l = a_l^dag + a_l or B_l = a_l^dag - a_l at a site (relative index).
struct MajoranaOp {
    Majorana kind;
    int site;
};

/// Wick contraction of a Majorana string via the Pfaffian of its pair expectations:
/// <A_m A_n> = -S_{n-m}, <B_m B_n> = S_{n-m}, <A_m B_n> = G_{n-m}, <B_m A_n> = -G_{n-m}.
template <typename Scalar>
std::complex<Scalar> majorana_string_expectation(const CorrelatorSet<Scalar>& c, std::span<const MajoranaOp> ops) {
    using Complex = std::complex<Scalar>;
    const auto n = static_cast<Eigen::Index>(ops.size());
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic> m = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const auto& x = ops[static_cast<std::size_t>(i)];
            const auto& y = ops[static_cast<std::size_t>(j)];
            const int d = y.site - x.site;
            if (std::abs(d) > c.r_max())
                throw InvalidParams("correlator set too short for separation " + std::to_string(d));
            Complex v;
            if (x.kind == Majorana::A && y.kind == Majorana::A)
                v = Complex(0, -c.s_at(d));
            else if (x.kind == Majorana::B && y.kind == Majorana::B)
                v = Complex(0, c.s_at(d));
            else if (x.kind == Majorana::A)
                v = Complex(c.g_at(d), 0);
            else
                v = Complex(-c.g_at(d), 0);
            m(i, j) = v;
            m(j, i) = -v;
        }
    }
    return pfaffian(m);
}

namespace detail {

// X_0 (A_1 B_1) ... (A_{R-1} B_{R-1}) Y_R
inline std::vector<MajoranaOp> jw_string(Majorana head, Majorana tail, int separation) {
    std::vector<MajoranaOp> ops;
    ops.reserve(static_cast<std::size_t>(2 * separation));
    ops.push_back({head, 0});
    for (int m = 1; m < separation; ++m) {
        ops.push_back({Majorana::A, m});
        ops.push_back({Majorana::B, m});
    }
    ops.push_back({tail, separation});
    return ops;
}

} // namespace detail

/// Spin pair correlators from Wick contraction of the Jordan-Wigner strings.
///
/// xx+yy = -<A_0 .. B_R> + <B_0 .. A_R>, yx-xy = i<A_0 .. A_R> - i<B_0 .. B_R>,
/// zz = <A_0 B_0 A_R B_R>. The phase of yx-xy does not alternate with R; exact
/// diagonalisation fixes it.
template <typename Scalar>
PairCorrelators<Scalar> pair_correlators(const CorrelatorSet<Scalar>& c, int separation) {
    if (separation != 1 && separation != 2)
        throw UnsupportedSeparation("pair correlators are available for R = 1, 2 only (got " +
                                    std::to_string(separation) + ")");
    using Complex = std::complex<Scalar>;
    using std::abs;
    const Complex i(0, 1);
    auto ev = [&](Majorana head, Majorana tail) {
        const auto ops = detail::jw_string(head, tail, separation);
        return majorana_string_expectation<Scalar>(c, ops);
    };
    const Complex xx = -ev(Majorana::A, Majorana::B) + ev(Majorana::B, Majorana::A);
    const Complex yx = i * ev(Majorana::A, Majorana::A) - i * ev(Majorana::B, Majorana::B);
    const MajoranaOp zz_ops[] = {{Majorana::A, 0}, {Majorana::B, 0}, {Majorana::A, separation}, {Majorana::B, separation}};
    const Complex zz = majorana_string_expectation<Scalar>(c, zz_ops);

    PairCorrelators<Scalar> out;
    out.separation = separation;
    out.xx_plus_yy = xx.real();
    out.yx_minus_xy = yx.real();
    out.zz = zz.real();
    out.z_single = c.g_at(0);
    out.imag_residue = std::max({abs(xx.imag()), abs(yx.imag()), abs(zz.imag())});
    return out;
}

template <typename Scalar>
PairCorrelators<Scalar> pair_correlators(const ChainParams<Scalar>& p, int separation,
                                         const QuadratureConfig& config = {}) {
    if (separation != 1 && separation != 2)
        throw UnsupportedSeparation("pair correlators are available for R = 1, 2 only (got " +
                                    std::to_string(separation) + ")");
    return pair_correlators(correlator_set(p, separation, config), separation);
}

/// Concurrence of a U(1)-symmetric two-site state: C = 2 max(|z| - sqrt(vy), 0),
/// |z| = |xx+yy - i(yx-xy)|/4 and vy = ((1+zz)^2 - 4<sz>^2)/16.
template <typename Scalar>
Scalar concurrence(const PairCorrelators<Scalar>& pc) {
    using std::hypot;
    using std::sqrt;
    const Scalar z = hypot(pc.xx_plus_yy, pc.yx_minus_xy) / Scalar(4);
    Scalar vy = ((Scalar(1) + pc.zz) * (Scalar(1) + pc.zz) - Scalar(4) * pc.z_single * pc.z_single) / Scalar(16);
    if (vy < Scalar(-1e-10))
        throw NegativeVy("(1+zz)^2 < 4<sz>^2: correlators do not describe a two-qubit state");
    vy = std::max(vy, Scalar(0));
    return Scalar(2) * std::max(z - sqrt(vy), Scalar(0));
}

template <typename Scalar>
Scalar concurrence(const ChainParams<Scalar>& p, int separation, const QuadratureConfig& config = {}) {
    return concurrence(pair_correlators(p, separation, config));
}

} // namespace ssw

#endif // SSW_CORRELATORS_HPP
