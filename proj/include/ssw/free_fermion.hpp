#ifndef SSW_FREE_FERMION_HPP
#define SSW_FREE_FERMION_HPP

#include <vector>

#include "ssw/chain_params.hpp"
#include "ssw/correlators.hpp"

namespace ssw {

/// How the periodic spin chain is mapped to free fermions at finite N.
enum class FiniteChainMethod {
    /// ParityResolved up to kParityResolvedMaxSites, GrandCanonical above.
    Auto,
    /// Exact: even fermion parity uses antiperiodic momenta, odd parity periodic ones.
    ParityResolved,
    /// Plain Fourier transform over k = 2 pi j / N, no parity projection.
    GrandCanonical,
};

inline constexpr int kParityResolvedMaxSites = 12;

/// One Gaussian (Wick-factorisable) constituent of the finite-chain state.
struct GaussianComponent {
    double weight = 1.0;
    CorrelatorSetd correlators;
};

/// Discrete-momentum analogues of every thermodynamic and correlator quantity.
///
/// The state is a convex mixture of Gaussian components; one-body quantities are
/// averaged directly, multi-point correlators must be contracted per component.
struct FiniteChainResult {
    int n_sites = 0;
    double log_z_density = 0;
    double m_density = 0;
    double e_density = 0;
    double q_density = 0;
    double u_density = 0;
    /// Mixture-averaged G_R and s_R, R = 0..r_max.
    std::vector<double> g;
    std::vector<double> s;
    std::vector<GaussianComponent> components;
    FiniteChainMethod method = FiniteChainMethod::Auto;
};

FiniteChainResult free_fermion_finite(const ChainParamsd& p, int n_sites, int r_max = 2,
                                      FiniteChainMethod method = FiniteChainMethod::Auto);

/// Pair correlators of the mixture: Wick per component, then weighted sum.
PairCorrelatorsd pair_correlators(const FiniteChainResult& chain, int separation);

double concurrence(const FiniteChainResult& chain, int separation);

} // namespace ssw

#endif // SSW_FREE_FERMION_HPP
