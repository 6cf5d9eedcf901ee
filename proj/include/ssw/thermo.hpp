#ifndef SSW_THERMO_HPP
#define SSW_THERMO_HPP

#include <cmath>
#include <numbers>

#include <Eigen/Core>

#include "ssw/chain_params.hpp"
#include "ssw/quadrature.hpp"

namespace ssw {

/// Per-site steady-state densities at one parameter point.
template <typename Scalar>
struct ThermoPoint {
    Scalar log_z_density{};
    Scalar m_density{};
    /// -(1/N) d(ln Z)/d(beta)
    Scalar e_density{};
    /// <J^E>/N
    Scalar q_density{};
    /// <H0 + (gamma/beta) J^E>/N = e + (gamma/beta) q
    Scalar u_density{};
};

using ThermoPointd = ThermoPoint<double>;

/// ln(2 cosh x) without overflow.
template <typename Scalar>
Scalar log_two_cosh(Scalar x) {
    using std::abs;
    using std::exp;
    using std::log1p;
    const Scalar a = abs(x);
    return a + log1p(exp(Scalar(-2) * a));
}

namespace detail {

template <typename Scalar>
constexpr Scalar inv_two_pi = Scalar(1) / (Scalar(2) * std::numbers::pi_v<Scalar>);

// Brillouin-zone average (1/2pi) * integral over [0, 2pi].
template <typename Scalar, typename F>
auto zone_average(F&& f, const QuadratureConfig& config) {
    auto v = integrate_periodic<Scalar>(std::forward<F>(f), config);
    v *= inv_two_pi<Scalar>;
    return v;
}

} // namespace detail

/// (1/N) ln Z = (1/2pi) int ln[2 cosh(beta xi(q))] dq. Honours b_aux.
template <typename Scalar>
Scalar log_z_density(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    p.validate();
    return detail::zone_average<Scalar>([&](Scalar q) { return log_two_cosh(beta_xi(p, q)); }, config);
}

/// M/N = (1/2pi) int tanh(beta Lambda(q)) dq.
template <typename Scalar>
Scalar magnetization_density(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    p.validate();
    using std::tanh;
    return detail::zone_average<Scalar>([&](Scalar q) { return tanh(beta_lambda(p, q)); }, config);
}

/// -(1/N) d(ln Z)/d(beta) = (1/2pi) int (J cos q - B) tanh(beta Lambda) dq.
template <typename Scalar>
Scalar energy_density_term(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    p.validate();
    using std::cos;
    using std::tanh;
    return detail::zone_average<Scalar>(
        [&](Scalar q) { return (p.j_coupling * cos(q) - p.b_field) * tanh(beta_lambda(p, q)); }, config);
}

/// Q/N = (J/pi) int (J cos q - B) sin q tanh(beta Lambda) dq = -(1/N) d(ln Z)/d(gamma).
template <typename Scalar>
Scalar energy_current_density(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    p.validate();
    using std::cos;
    using std::sin;
    using std::tanh;
    const Scalar J = p.j_coupling;
    return Scalar(2) * J *
           detail::zone_average<Scalar>(
               [&](Scalar q) { return (J * cos(q) - p.b_field) * sin(q) * tanh(beta_lambda(p, q)); }, config);
}

/// U/N = <H0 + (gamma/beta) J^E>/N.
template <typename Scalar>
Scalar internal_energy_density(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    const Scalar e = energy_density_term(p, config);
    if (p.gamma == Scalar(0)) return e;
    return e + p.drive() * energy_current_density(p, config);
}

/// All densities at once; m, e and q share one array-valued quadrature.
template <typename Scalar>
ThermoPoint<Scalar> thermo_point(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    p.validate();
    using std::cos;
    using std::sin;
    using std::tanh;
    using Vec3 = Eigen::Array<Scalar, 3, 1>;
    const Scalar J = p.j_coupling;
    const Scalar B = p.b_field;
    const Vec3 avg = detail::zone_average<Scalar>(
        [&](Scalar q) -> Vec3 {
            const Scalar t = tanh(beta_lambda(p, q));
            const Scalar band = J * cos(q) - B;
            return Vec3(t, band * t, band * sin(q) * t);
        },
        config);
    ThermoPoint<Scalar> out;
    out.log_z_density = log_z_density(p, config);
    out.m_density = avg(0);
    out.e_density = avg(1);
    out.q_density = Scalar(2) * J * avg(2);
    out.u_density = out.e_density + p.drive() * out.q_density;
    return out;
}

} // namespace ssw

#endif // SSW_THERMO_HPP
