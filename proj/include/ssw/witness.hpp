#ifndef SSW_WITNESS_HPP
#define SSW_WITNESS_HPP

#include <cmath>

#include "ssw/chain_params.hpp"
#include "ssw/quadrature.hpp"
#include "ssw/thermo.hpp"

namespace ssw {

template <typename Scalar>
struct WitnessResult {
    Scalar w1{};
    Scalar w_ss{};
    ThermoPoint<Scalar> thermo;

    /// Witness values above one certify entanglement.
    bool w1_detects() const { return w1 > Scalar(1); }
    bool w_ss_detects() const { return w_ss > Scalar(1); }
};

using WitnessResultd = WitnessResult<double>;

/// W1 from the per-site densities, using the cancelled form 2|e + B m|/J.
template <typename Scalar>
Scalar w1_from(const ChainParams<Scalar>& p, const ThermoPoint<Scalar>& t) {
    using std::abs;
    return Scalar(2) * abs(t.e_density + p.b_field * t.m_density) / p.j_coupling;
}

/// W1 through U, M and Q without using the cancellation; kept for cross-checks.
template <typename Scalar>
Scalar w1_uncancelled(const ChainParams<Scalar>& p, const ThermoPoint<Scalar>& t) {
    using std::abs;
    return Scalar(2) * abs(t.u_density + p.b_field * t.m_density - p.drive() * t.q_density) / p.j_coupling;
}

/// W_ss = 2|Q| / (J N (2B + J)).
template <typename Scalar>
Scalar w_ss_from(const ChainParams<Scalar>& p, const ThermoPoint<Scalar>& t) {
    using std::abs;
    return Scalar(2) * abs(t.q_density) / (p.j_coupling * (Scalar(2) * p.b_field + p.j_coupling));
}

template <typename Scalar>
Scalar w1(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    ThermoPoint<Scalar> t;
    t.e_density = energy_density_term(p, config);
    t.m_density = magnetization_density(p, config);
    return w1_from(p, t);
}

template <typename Scalar>
Scalar w_ss(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    ThermoPoint<Scalar> t;
    t.q_density = energy_current_density(p, config);
    return w_ss_from(p, t);
}

template <typename Scalar>
WitnessResult<Scalar> evaluate_witnesses(const ChainParams<Scalar>& p, const QuadratureConfig& config = {}) {
    WitnessResult<Scalar> r;
    r.thermo = thermo_point(p, config);
    r.w1 = w1_from(p, r.thermo);
    r.w_ss = w_ss_from(p, r.thermo);
    return r;
}

} // namespace ssw

#endif // SSW_WITNESS_HPP
