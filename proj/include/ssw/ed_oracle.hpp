#ifndef SSW_ED_ORACLE_HPP
#define SSW_ED_ORACLE_HPP

#include <complex>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ssw/chain_params.hpp"
#include "ssw/correlators.hpp"

namespace ssw::ed {

/// Largest chain the dense oracle accepts (4096-dimensional Hilbert space).
inline constexpr int kMaxSites = 12;

enum class PauliAxis { X, Y, Z };

enum class OperatorKind { Hermitian, AntiHermitian, General };

/// Dense operator on the 2^N-dimensional space of an N-site spin-1/2 chain.
///
/// Basis index bit (N - l) holds site l (sites are 1-based, site 1 is the most
/// significant bit); bit value 0 is spin up (sigma^z = +1).
struct PauliOperator {
    int n_sites = 0;
    Eigen::MatrixXcd matrix;
    OperatorKind kind = OperatorKind::General;

    Eigen::Index dim() const { return matrix.rows(); }
    /// max |M - M^dag| (Hermitian) or max |M + M^dag| (anti-Hermitian).
    double hermiticity_residue() const;
};

PauliOperator operator+(const PauliOperator& a, const PauliOperator& b);
PauliOperator operator-(const PauliOperator& a, const PauliOperator& b);
PauliOperator operator*(const PauliOperator& a, const PauliOperator& b);
PauliOperator operator*(std::complex<double> c, const PauliOperator& a);
PauliOperator commutator(const PauliOperator& a, const PauliOperator& b);

PauliOperator identity(int n_sites);
PauliOperator zero_operator(int n_sites);

/// sigma^axis on one site (1-based), embedded in the N-site chain.
PauliOperator build_site_operator(int n_sites, int site, PauliAxis axis);

/// Product of single-site Paulis on distinct sites; sites wrap periodically.
PauliOperator pauli_string(int n_sites, std::span<const std::pair<int, PauliAxis>> factors);

/// Sum_l sigma^z_l.
PauliOperator total_sz(int n_sites);

/// H0 = -(J/2) sum (xx + yy) - b B sum z, periodic.
PauliOperator build_h0(int n_sites, double j, double b_field, double b_aux = 1.0);

/// Closed-form XX energy current
/// J^E = -BJ sum (y_l x_{l+1} - x_l y_{l+1}) + (J^2/2) sum (y_l z_{l+1} x_{l+2} - x_l z_{l+1} y_{l+2}).
PauliOperator build_je(int n_sites, double j, double b_field);

/// Local current from the general commutator construction
/// j_l = (i/2)([h_l - h_{l+1}, V_{l,l+1}] + [V_{l,l+1}, V_{l+1,l+2}] + [V_{l-1,l}, V_{l,l+1}])
/// with h_l = -bB z_l and V_{l,l+1} = -(J/2)(x_l x_{l+1} + y_l y_{l+1}).
PauliOperator build_jl(int n_sites, int site, double j, double b_field, double b_aux = 1.0);

/// Local energy density h_l^0 + (V_{l-1,l} + V_{l,l+1})/2; satisfies i[H0, h_l] = j_{l-1} - j_l.
PauliOperator energy_density_operator(int n_sites, int site, double j, double b_field, double b_aux = 1.0);

/// Eigenvalues (ascending) of a Hermitian operator.
Eigen::VectorXd spectrum(const PauliOperator& op);

/// rho = exp(-beta H0 - gamma J^E) / Z.
struct ThermalState {
    int n_sites = 0;
    double beta = 0;
    double gamma = 0;
    Eigen::MatrixXcd rho;
    /// ln tr exp(-beta H0 - gamma J^E)
    double log_z = 0;
    /// Eigenvalues of beta H0 + gamma J^E.
    Eigen::VectorXd generator_spectrum;
};

/// Builds the state from the eigendecomposition of K = beta H0 + gamma J^E, block by
/// block in total-S^z sectors when K conserves S^z.
ThermalState thermal_state(const PauliOperator& h0, const PauliOperator& je, double beta, double gamma);

/// tr(op rho) for a Hermitian op.
double expect(const PauliOperator& op, const ThermalState& state);

/// <psi| op |psi> for a normalised pure state.
double expect(const PauliOperator& op, const Eigen::VectorXcd& psi);

/// Reduced state of sites l and r (1-based); basis |s_l s_r>, s_l most significant.
Eigen::Matrix4cd two_site_rdm(const ThermalState& state, int l, int r);

/// Wootters concurrence max(0, l1 - l2 - l3 - l4) of a two-qubit density matrix.
double wootters_concurrence(const Eigen::Matrix4cd& rho);

/// Spin pair correlators read off a two-site reduced density matrix.
PairCorrelatorsd pair_correlators_from_rdm(const Eigen::Matrix4cd& rdm, int separation);

/// Tensor product of single-site states cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
Eigen::VectorXcd product_state(std::span<const double> theta, std::span<const double> phi);

/// Haar-random single-site states on every site.
Eigen::VectorXcd random_product_state(int n_sites, std::mt19937_64& rng);

/// Every observable the analytic side computes, evaluated by exact diagonalisation.
struct EdObservables {
    double log_z_density = 0;
    double m_density = 0;
    double e_density = 0;
    double q_density = 0;
    double u_density = 0;
    PairCorrelatorsd r1;
    PairCorrelatorsd r2;
    double concurrence_r1 = 0;
    double concurrence_r2 = 0;
};

EdObservables ed_observables(const ChainParamsd& p, int n_sites);

} // namespace ssw::ed

#endif // SSW_ED_ORACLE_HPP
