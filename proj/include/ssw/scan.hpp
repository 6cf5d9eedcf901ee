#ifndef SSW_SCAN_HPP
#define SSW_SCAN_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ssw/chain_params.hpp"
#include "ssw/quadrature.hpp"

namespace ssw {

enum class Quantity { W1, WSS, Q, M, C_R1, C_R2 };

std::string_view to_string(Quantity q);
/// Accepts the canonical tags (W1, WSS, Q, M, C_R1, C_R2) and W_1 / W_ss spellings.
Quantity parse_quantity(std::string_view tag);

/// Evenly spaced values min..max; count == 1 means the single value min.
struct AxisRange {
    double min = 0;
    double max = 0;
    int count = 1;

    /// Parses "min:max:count" or a single number.
    static AxisRange parse(std::string_view text);
    std::vector<double> values() const;
};

struct ScanSpec {
    std::vector<double> b_axis;
    std::vector<double> t_axis;
    std::vector<double> gamma_axis;
    double j_coupling = 1.0;
    double b_aux = 1.0;
    QuadratureConfig quadrature;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

/// Dense (gamma, T, B) array of one scalar observable; B varies fastest.
struct ScanGrid {
    Quantity quantity = Quantity::W1;
    std::vector<double> b_axis;
    std::vector<double> t_axis;
    std::vector<double> gamma_axis;
    std::vector<double> values;
    double j_coupling = 1.0;
    double b_aux = 1.0;
    QuadratureConfig quadrature;
    /// Points whose evaluation failed; they hold NaN.
    long error_count = 0;

    std::size_t index(std::size_t ib, std::size_t it, std::size_t ig) const {
        return (ig * t_axis.size() + it) * b_axis.size() + ib;
    }
    double at(std::size_t ib, std::size_t it, std::size_t ig) const { return values.at(index(ib, it, ig)); }

    /// (T, B) plane at one gamma index: rows follow T, columns follow B.
    Eigen::MatrixXd slice(std::size_t gamma_index) const;

    /// Throws InvalidAxes on non-increasing axes or a size mismatch.
    void validate() const;
};

/// Throws InvalidAxes unless every axis is non-empty, finite, strictly increasing and physical.
void validate_axes(const ScanSpec& spec);

/// Value of one scan quantity at one point (throws on quadrature failure).
double evaluate_quantity(Quantity q, const ChainParamsd& p, const QuadratureConfig& config = {});

/// Evaluates the quantity on every grid point. Output is independent of thread count.
ScanGrid scan(Quantity q, const ScanSpec& spec);

/// CSV with '#'-prefixed metadata lines and a B,T,gamma,value table.
/// Numbers use the shortest representation that round-trips exactly.
void write_csv(const ScanGrid& grid, std::ostream& out, std::string_view generated_at = {});
ScanGrid read_csv(std::istream& in);

/// JSON document (schema 1): axes, flattened values (NaN as null) and metadata.
std::string to_json(const ScanGrid& grid, std::string_view generated_at = {});
ScanGrid from_json(std::string_view text);

/// Shortest round-trip decimal form of a double ("nan", "inf", "-inf" for non-finite).
std::string format_double(double v);
double parse_double(std::string_view text);

/// Version string baked in at configure time.
std::string_view version();

} // namespace ssw

#endif // SSW_SCAN_HPP
