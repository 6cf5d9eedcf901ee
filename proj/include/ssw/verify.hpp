#ifndef SSW_VERIFY_HPP
#define SSW_VERIFY_HPP

#include <string>
#include <vector>

#include "ssw/chain_params.hpp"
#include "ssw/quadrature.hpp"

namespace ssw {

/// One observable at one parameter point, by three independent routes.
struct VerificationRow {
    ChainParamsd params;
    std::string quantity;
    double ed = 0;
    double free_fermion = 0;
    /// Thermodynamic-limit value; differs from the other two by finite-size effects.
    double quadrature = 0;
    double diff_ed_ff = 0;
    double diff_ff_quadrature = 0;
    bool pass = false;
};

struct VerificationReport {
    int n_sites = 0;
    double tolerance = 0;
    std::vector<VerificationRow> rows;

    bool passed() const;
    /// Row with the largest ED / free-fermion difference (nullptr when empty).
    const VerificationRow* worst() const;
    std::string to_json() const;
};

/// B in {0, 0.5, 1, 1.5} x T in {0.2, 1, 5} x gamma in {0, 1, 2}, J = 1.
std::vector<ChainParamsd> keystone_grid();

/// Compares exact diagonalisation with the finite-N free-fermion solution at every
/// point; a row passes when |ED - free fermion| <= tolerance.
VerificationReport run_verification(int n_sites, const std::vector<ChainParamsd>& grid, double tolerance = 1e-8,
                                    const QuadratureConfig& config = {});

} // namespace ssw

#endif // SSW_VERIFY_HPP
