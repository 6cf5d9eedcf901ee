#ifndef SSW_CONTOUR_HPP
#define SSW_CONTOUR_HPP

#include <vector>

#include <Eigen/Core>

#include "ssw/scan.hpp"

namespace ssw {

struct ContourPoint {
    double b;
    double t;
};

struct Polyline {
    std::vector<ContourPoint> points;
    /// True for loops; open polylines end on the grid boundary (or a NaN cell).
    bool closed = false;
};

/// Level set of a (T, B) slice by marching squares with linear edge interpolation.
/// values(i, j) belongs to (b_axis[j], t_axis[i]). Cells touching NaN are skipped.
std::vector<Polyline> detection_boundary(const std::vector<double>& b_axis, const std::vector<double>& t_axis,
                                         const Eigen::MatrixXd& values, double level = 1.0);

std::vector<Polyline> detection_boundary(const ScanGrid& grid, std::size_t gamma_index, double level = 1.0);

} // namespace ssw

#endif // SSW_CONTOUR_HPP
