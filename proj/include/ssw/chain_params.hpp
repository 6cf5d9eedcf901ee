#ifndef SSW_CHAIN_PARAMS_HPP
#define SSW_CHAIN_PARAMS_HPP

#include <cmath>
#include <string>

#include "ssw/errors.hpp"

namespace ssw {

/// One evaluation point of the current-carrying XX chain.
///
/// The steady state is rho ~ exp(-beta H0 - gamma J^E) with beta = 1/T.
/// Temperature is stored and inverted on demand; gamma enters every
/// integrand only through gamma/beta = gamma*T, see drive().
template <typename Scalar>
struct ChainParams {
    Scalar j_coupling{1};
    Scalar b_field{0};
    Scalar temperature{1};
    Scalar gamma{0};
    /// Auxiliary Zeeman multiplier; 1 is the physical chain.
    Scalar b_aux{1};

    Scalar beta() const { return Scalar(1) / temperature; }
    /// gamma/beta, the coefficient of J^E in the effective Hamiltonian.
    Scalar drive() const { return gamma * temperature; }

    /// Throws InvalidParams unless J > 0, T > 0, B >= 0 and everything is finite.
    void validate() const {
        using std::isfinite;
        if (!isfinite(j_coupling) || !isfinite(b_field) || !isfinite(temperature) ||
            !isfinite(gamma) || !isfinite(b_aux))
            throw InvalidParams("chain parameters must be finite");
        if (!(j_coupling > 0)) throw InvalidParams("J must be positive");
        if (!(temperature > 0)) throw InvalidParams("T must be positive");
        if (b_field < 0) throw InvalidParams("B must be non-negative");
    }

    template <typename Other>
    ChainParams<Other> cast() const {
        return {Other(j_coupling), Other(b_field), Other(temperature), Other(gamma), Other(b_aux)};
    }
};

using ChainParamsd = ChainParams<double>;

/// Builds a validated parameter point.
template <typename Scalar>
ChainParams<Scalar> make_params(Scalar j, Scalar b, Scalar t, Scalar gamma, Scalar b_aux = Scalar(1)) {
    ChainParams<Scalar> p{j, b, t, gamma, b_aux};
    p.validate();
    return p;
}

/// Single-particle energy xi(q) including the auxiliary field b.
///
/// xi(q) = Bb - J cos q + 2(gamma/beta) J B sin q - 2(gamma/beta) J^2 sin q cos q.
/// Only the Zeeman term carries b: the current operator is held fixed when b varies.
template <typename Scalar>
Scalar xi(const ChainParams<Scalar>& p, Scalar q) {
    using std::cos;
    using std::sin;
    const Scalar c = cos(q);
    const Scalar s = sin(q);
    const Scalar d = p.drive();
    const Scalar J = p.j_coupling;
    const Scalar B = p.b_field;
    return B * p.b_aux - J * c + Scalar(2) * d * J * B * s - Scalar(2) * d * J * J * s * c;
}

/// Factored dispersion Lambda(q) = (B - J cos q)(2(gamma/beta) J sin q + 1), i.e. xi at b = 1.
template <typename Scalar>
Scalar lambda_dispersion(const ChainParams<Scalar>& p, Scalar q) {
    using std::cos;
    using std::sin;
    return (p.b_field - p.j_coupling * cos(q)) *
           (Scalar(2) * p.drive() * p.j_coupling * sin(q) + Scalar(1));
}

/// beta * Lambda(q), written so that beta -> 0 at fixed gamma stays finite.
template <typename Scalar>
Scalar beta_lambda(const ChainParams<Scalar>& p, Scalar q) {
    using std::cos;
    using std::sin;
    const Scalar band = p.b_field - p.j_coupling * cos(q);
    return band * (p.beta() + Scalar(2) * p.gamma * p.j_coupling * sin(q));
}

/// beta * xi(q), finite as beta -> 0 at fixed gamma.
template <typename Scalar>
Scalar beta_xi(const ChainParams<Scalar>& p, Scalar q) {
    using std::cos;
    using std::sin;
    const Scalar J = p.j_coupling;
    const Scalar B = p.b_field;
    const Scalar c = cos(q);
    return p.beta() * (B * p.b_aux - J * c) + Scalar(2) * p.gamma * J * sin(q) * (B - J * c);
}

} // namespace ssw

#endif // SSW_CHAIN_PARAMS_HPP
