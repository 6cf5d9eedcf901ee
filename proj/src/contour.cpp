#include "ssw/contour.hpp"

#include <array>
#include <cmath>
#include <map>
#include <utility>

#include "ssw/errors.hpp"

namespace ssw {

namespace {

// An edge of the grid identified by its lower-left node and orientation.
struct EdgeKey {
    Eigen::Index row;
    Eigen::Index col;
    bool horizontal;  // joins (row, col)-(row, col+1); otherwise (row, col)-(row+1, col)

    auto operator<=>(const EdgeKey&) const = default;
};

struct Segment {
    EdgeKey a;
    EdgeKey b;
};

} // namespace

std::vector<Polyline> detection_boundary(const std::vector<double>& b_axis, const std::vector<double>& t_axis,
                                         const Eigen::MatrixXd& values, double level) {
    const auto rows = static_cast<Eigen::Index>(t_axis.size());
    const auto cols = static_cast<Eigen::Index>(b_axis.size());
    if (rows < 2 || cols < 2) throw EmptyGrid("contouring needs at least a 2x2 (B, T) slice");
    if (values.rows() != rows || values.cols() != cols) throw InvalidAxes("slice shape does not match its axes");

    auto inside = [&](Eigen::Index r, Eigen::Index c) { return values(r, c) > level; };
    auto crossing = [&](const EdgeKey& e) {
        const Eigen::Index r2 = e.horizontal ? e.row : e.row + 1;
        const Eigen::Index c2 = e.horizontal ? e.col + 1 : e.col;
        const double v1 = values(e.row, e.col);
        const double v2 = values(r2, c2);
        const double f = (v2 == v1) ? 0.5 : (level - v1) / (v2 - v1);
        const auto b1 = b_axis[static_cast<std::size_t>(e.col)];
        const auto b2 = b_axis[static_cast<std::size_t>(c2)];
        const auto t1 = t_axis[static_cast<std::size_t>(e.row)];
        const auto t2 = t_axis[static_cast<std::size_t>(r2)];
        return ContourPoint{b1 + f * (b2 - b1), t1 + f * (t2 - t1)};
    };

    std::vector<Segment> segments;
    for (Eigen::Index r = 0; r + 1 < rows; ++r) {
        for (Eigen::Index c = 0; c + 1 < cols; ++c) {
            const double corners[4] = {values(r, c), values(r, c + 1), values(r + 1, c + 1), values(r + 1, c)};
            if (std::isnan(corners[0]) || std::isnan(corners[1]) || std::isnan(corners[2]) || std::isnan(corners[3]))
                continue;
            // Corner order: 0 = (r, c), 1 = (r, c+1), 2 = (r+1, c+1), 3 = (r+1, c).
            const int mask = (inside(r, c) ? 1 : 0) | (inside(r, c + 1) ? 2 : 0) | (inside(r + 1, c + 1) ? 4 : 0) |
                             (inside(r + 1, c) ? 8 : 0);
            if (mask == 0 || mask == 15) continue;
            const EdgeKey bottom{r, c, true};
            const EdgeKey right{r, c + 1, false};
            const EdgeKey top{r + 1, c, true};
            const EdgeKey left{r, c, false};
            const double centre = 0.25 * (corners[0] + corners[1] + corners[2] + corners[3]);
            switch (mask) {
            case 1: case 14: segments.push_back({left, bottom}); break;
            case 2: case 13: segments.push_back({bottom, right}); break;
            case 3: case 12: segments.push_back({left, right}); break;
            case 4: case 11: segments.push_back({right, top}); break;
            case 6: case 9: segments.push_back({bottom, top}); break;
            case 7: case 8: segments.push_back({left, top}); break;
            case 5:  // saddle: corners 0 and 2 inside
                if (centre > level) {
                    segments.push_back({left, top});
                    segments.push_back({bottom, right});
                } else {
                    segments.push_back({left, bottom});
                    segments.push_back({right, top});
                }
                break;
            case 10:  // saddle: corners 1 and 3 inside
                if (centre > level) {
                    segments.push_back({left, bottom});
                    segments.push_back({right, top});
                } else {
                    segments.push_back({left, top});
                    segments.push_back({bottom, right});
                }
                break;
            default: break;
            }
        }
    }

    // Each edge crossing is shared by at most two segments; stitch them into chains.
    std::map<EdgeKey, std::vector<std::size_t>> touching;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        touching[segments[i].a].push_back(i);
        touching[segments[i].b].push_back(i);
    }
    std::vector<bool> used(segments.size(), false);

    auto walk = [&](std::size_t first, const EdgeKey& start) {
        Polyline line;
        line.points.push_back(crossing(start));
        EdgeKey at = start;
        std::size_t seg = first;
        while (true) {
            used[seg] = true;
            const EdgeKey next = (segments[seg].a == at) ? segments[seg].b : segments[seg].a;
            line.points.push_back(crossing(next));
            at = next;
            std::size_t follow = segments.size();
            for (std::size_t cand : touching[at])
                if (!used[cand]) follow = cand;
            if (follow == segments.size()) break;
            seg = follow;
        }
        if (at == start && line.points.size() > 2) {
            line.closed = true;
            line.points.pop_back();
        }
        return line;
    };

    std::vector<Polyline> out;
    // Open chains first, starting from edges touched by a single segment.
    for (const auto& [edge, segs] : touching)
        if (segs.size() == 1 && !used[segs[0]]) out.push_back(walk(segs[0], edge));
    for (std::size_t i = 0; i < segments.size(); ++i)
        if (!used[i]) out.push_back(walk(i, segments[i].a));
    return out;
}

std::vector<Polyline> detection_boundary(const ScanGrid& grid, std::size_t gamma_index, double level) {
    grid.validate();
    return detection_boundary(grid.b_axis, grid.t_axis, grid.slice(gamma_index), level);
}

} // namespace ssw
