#include "ssw/scan.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "ssw/correlators.hpp"
#include "ssw/errors.hpp"
#include "ssw/witness.hpp"

#ifndef SSW_VERSION
#define SSW_VERSION "unknown"
#endif

namespace ssw {

namespace {

constexpr int kSchema = 1;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

void check_axis(const std::vector<double>& axis, const char* name) {
    if (axis.empty()) throw InvalidAxes(std::string(name) + " axis is empty");
    for (std::size_t i = 0; i < axis.size(); ++i) {
        if (!std::isfinite(axis[i])) throw InvalidAxes(std::string(name) + " axis has a non-finite value");
        if (i > 0 && !(axis[i] > axis[i - 1])) throw InvalidAxes(std::string(name) + " axis is not strictly increasing");
    }
}

std::vector<double> unique_in_order(const std::vector<double>& v) {
    std::vector<double> out = v;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

std::string_view version() { return SSW_VERSION; }

std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::W1: return "W1";
    case Quantity::WSS: return "WSS";
    case Quantity::Q: return "Q";
    case Quantity::M: return "M";
    case Quantity::C_R1: return "C_R1";
    case Quantity::C_R2: return "C_R2";
    }
    return "?";
}

Quantity parse_quantity(std::string_view tag) {
    static const std::map<std::string, Quantity, std::less<>> names = {
        {"W1", Quantity::W1},    {"W_1", Quantity::W1},     {"WSS", Quantity::WSS},   {"W_ss", Quantity::WSS},
        {"Wss", Quantity::WSS},  {"Q", Quantity::Q},        {"M", Quantity::M},       {"C_R1", Quantity::C_R1},
        {"C_R2", Quantity::C_R2}};
    const auto it = names.find(tag);
    if (it == names.end()) throw InvalidParams("unknown scan quantity '" + std::string(tag) + "'");
    return it->second;
}

AxisRange AxisRange::parse(std::string_view text) {
    AxisRange r;
    const std::string s = trim(text);
    const auto first = s.find(':');
    try {
        if (first == std::string::npos) {
            r.min = r.max = parse_double(s);
            r.count = 1;
        } else {
            const auto second = s.find(':', first + 1);
            if (second == std::string::npos) throw InvalidAxes("axis range must be min:max:count");
            r.min = parse_double(s.substr(0, first));
            r.max = parse_double(s.substr(first + 1, second - first - 1));
            const std::string count = trim(s.substr(second + 1));
            int n = 0;
            const auto res = std::from_chars(count.data(), count.data() + count.size(), n);
            if (res.ec != std::errc() || res.ptr != count.data() + count.size())
                throw InvalidAxes("axis count '" + count + "' is not an integer");
            r.count = n;
        }
    } catch (const InvalidAxes&) {
        throw;
    } catch (const Error& e) {
        throw InvalidAxes(std::string("bad axis range '") + s + "': " + e.what());
    }
    if (r.count < 1) throw InvalidAxes("axis count must be >= 1");
    if (r.count > 1 && !(r.max > r.min)) throw InvalidAxes("axis range needs max > min when count > 1");
    return r;
}

std::vector<double> AxisRange::values() const {
    if (count == 1) return {min};
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
    v.back() = max;
    return v;
}

Eigen::MatrixXd ScanGrid::slice(std::size_t gamma_index) const {
    if (gamma_index >= gamma_axis.size()) throw InvalidAxes("gamma index out of range");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(t_axis.size()), static_cast<Eigen::Index>(b_axis.size()));
    for (std::size_t it = 0; it < t_axis.size(); ++it)
        for (std::size_t ib = 0; ib < b_axis.size(); ++ib)
            m(static_cast<Eigen::Index>(it), static_cast<Eigen::Index>(ib)) = at(ib, it, gamma_index);
    return m;
}

void ScanGrid::validate() const {
    check_axis(b_axis, "B");
    check_axis(t_axis, "T");
    check_axis(gamma_axis, "gamma");
    if (values.size() != b_axis.size() * t_axis.size() * gamma_axis.size())
        throw InvalidAxes("value array does not match axis lengths");
}

void validate_axes(const ScanSpec& spec) {
    check_axis(spec.b_axis, "B");
    check_axis(spec.t_axis, "T");
    check_axis(spec.gamma_axis, "gamma");
    if (spec.b_axis.front() < 0) throw InvalidAxes("B axis must be non-negative");
    if (!(spec.t_axis.front() > 0)) throw InvalidAxes("T axis must be positive");
    if (!(spec.j_coupling > 0) || !std::isfinite(spec.j_coupling)) throw InvalidAxes("J must be positive");
    spec.quadrature.validate();
}

double evaluate_quantity(Quantity q, const ChainParamsd& p, const QuadratureConfig& config) {
    switch (q) {
    case Quantity::W1: return w1(p, config);
    case Quantity::WSS: return w_ss(p, config);
    case Quantity::Q: return energy_current_density(p, config);
    case Quantity::M: return magnetization_density(p, config);
    case Quantity::C_R1: return concurrence(p, 1, config);
    case Quantity::C_R2: return concurrence(p, 2, config);
    }
    throw InvalidParams("unsupported quantity");
}

ScanGrid scan(Quantity q, const ScanSpec& spec) {
    validate_axes(spec);
    ScanGrid grid;
    grid.quantity = q;
    grid.b_axis = spec.b_axis;
    grid.t_axis = spec.t_axis;
    grid.gamma_axis = spec.gamma_axis;
    grid.j_coupling = spec.j_coupling;
    grid.b_aux = spec.b_aux;
    grid.quadrature = spec.quadrature;
    const std::size_t total = spec.b_axis.size() * spec.t_axis.size() * spec.gamma_axis.size();
    grid.values.assign(total, std::numeric_limits<double>::quiet_NaN());

    unsigned threads = spec.threads != 0 ? spec.threads : std::max(1U, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
    std::vector<long> failures(threads, 0);

    auto work = [&](unsigned worker) {
        for (std::size_t i = worker; i < total; i += threads) {
            const std::size_t nb = grid.b_axis.size();
            const std::size_t nt = grid.t_axis.size();
            const std::size_t ib = i % nb;
            const std::size_t it = (i / nb) % nt;
            const std::size_t ig = i / (nb * nt);
            const ChainParamsd p{spec.j_coupling, grid.b_axis[ib], grid.t_axis[it], grid.gamma_axis[ig], spec.b_aux};
            try {
                grid.values[i] = evaluate_quantity(q, p, spec.quadrature);
            } catch (const NonConvergence&) {
                ++failures[worker];
            } catch (const NegativeVy&) {
                ++failures[worker];
            }
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }
    for (long f : failures) grid.error_count += f;
    return grid;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    const std::string s = trim(text);
    if (s == "nan" || s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0;
    const char* first = s.data();
    if (!s.empty() && s[0] == '+') ++first;
    const auto res = std::from_chars(first, s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
        throw InvalidParams("'" + s + "' is not a number");
    return v;
}

void write_csv(const ScanGrid& grid, std::ostream& out, std::string_view generated_at) {
    grid.validate();
    out << "# ssw scan\n";
    out << "# schema: " << kSchema << '\n';
    out << "# version: " << version() << '\n';
    out << "# quantity: " << to_string(grid.quantity) << '\n';
    out << "# J: " << format_double(grid.j_coupling) << '\n';
    out << "# b: " << format_double(grid.b_aux) << '\n';
    out << "# tolerance: " << format_double(grid.quadrature.tolerance) << '\n';
    out << "# max_nodes: " << grid.quadrature.max_nodes << '\n';
    out << "# initial_nodes: " << grid.quadrature.initial_nodes << '\n';
    out << "# error_count: " << grid.error_count << '\n';
    if (!generated_at.empty()) out << "# generated: " << generated_at << '\n';
    out << "B,T,gamma,value\n";
    for (std::size_t ig = 0; ig < grid.gamma_axis.size(); ++ig)
        for (std::size_t it = 0; it < grid.t_axis.size(); ++it)
            for (std::size_t ib = 0; ib < grid.b_axis.size(); ++ib)
                out << format_double(grid.b_axis[ib]) << ',' << format_double(grid.t_axis[it]) << ','
                    << format_double(grid.gamma_axis[ig]) << ',' << format_double(grid.at(ib, it, ig)) << '\n';
}

ScanGrid read_csv(std::istream& in) {
    ScanGrid grid;
    std::map<std::string, std::string, std::less<>> meta;
    std::string line;
    bool header = false;
    struct Row {
        double b, t, g, v;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto colon = line.find(':');
            if (colon != std::string::npos) meta[trim(line.substr(1, colon - 1))] = trim(line.substr(colon + 1));
            continue;
        }
        if (!header) {
            if (trim(line) != "B,T,gamma,value") throw InvalidAxes("unexpected CSV header '" + line + "'");
            header = true;
            continue;
        }
        std::stringstream ss(line);
        std::string cell[4];
        for (auto& c : cell)
            if (!std::getline(ss, c, ',')) throw InvalidAxes("short CSV row '" + line + "'");
        rows.push_back({parse_double(cell[0]), parse_double(cell[1]), parse_double(cell[2]), parse_double(cell[3])});
    }
    if (!header) throw InvalidAxes("CSV has no B,T,gamma,value header");
    if (auto it = meta.find("quantity"); it != meta.end()) grid.quantity = parse_quantity(it->second);
    if (auto it = meta.find("J"); it != meta.end()) grid.j_coupling = parse_double(it->second);
    if (auto it = meta.find("b"); it != meta.end()) grid.b_aux = parse_double(it->second);
    if (auto it = meta.find("tolerance"); it != meta.end()) grid.quadrature.tolerance = parse_double(it->second);
    if (auto it = meta.find("max_nodes"); it != meta.end()) grid.quadrature.max_nodes = std::stol(it->second);
    if (auto it = meta.find("initial_nodes"); it != meta.end()) grid.quadrature.initial_nodes = std::stol(it->second);
    if (auto it = meta.find("error_count"); it != meta.end()) grid.error_count = std::stol(it->second);

    std::vector<double> bs, ts, gs;
    for (const auto& r : rows) {
        bs.push_back(r.b);
        ts.push_back(r.t);
        gs.push_back(r.g);
    }
    grid.b_axis = unique_in_order(bs);
    grid.t_axis = unique_in_order(ts);
    grid.gamma_axis = unique_in_order(gs);
    grid.values.assign(grid.b_axis.size() * grid.t_axis.size() * grid.gamma_axis.size(),
                       std::numeric_limits<double>::quiet_NaN());
    if (rows.size() != grid.values.size()) throw InvalidAxes("CSV rows do not form a dense grid");
    auto pos = [](const std::vector<double>& axis, double v) {
        return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
    };
    for (const auto& r : rows) grid.values[grid.index(pos(grid.b_axis, r.b), pos(grid.t_axis, r.t), pos(grid.gamma_axis, r.g))] = r.v;
    grid.validate();
    return grid;
}

std::string to_json(const ScanGrid& grid, std::string_view generated_at) {
    grid.validate();
    using nlohmann::json;
    json values = json::array();
    for (double v : grid.values) values.push_back(std::isfinite(v) ? json(v) : json(nullptr));
    json doc = {
        {"schema", kSchema},
        {"quantity", std::string(to_string(grid.quantity))},
        {"axes", {{"B", grid.b_axis}, {"T", grid.t_axis}, {"gamma", grid.gamma_axis}}},
        {"layout", "gamma-major, then T, B fastest"},
        {"values", values},
        {"metadata",
         {{"version", std::string(version())},
          {"J", grid.j_coupling},
          {"b", grid.b_aux},
          {"quadrature",
           {{"tolerance", grid.quadrature.tolerance},
            {"max_nodes", grid.quadrature.max_nodes},
            {"initial_nodes", grid.quadrature.initial_nodes}}},
          {"error_count", grid.error_count}}},
    };
    if (!generated_at.empty()) doc["metadata"]["generated"] = std::string(generated_at);
    return doc.dump(2) + "\n";
}

ScanGrid from_json(std::string_view text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidAxes(std::string("malformed scan JSON: ") + e.what());
    }
    if (doc.value("schema", 0) != kSchema) throw InvalidAxes("unsupported scan JSON schema");
    ScanGrid grid;
    try {
        grid.quantity = parse_quantity(doc.at("quantity").get<std::string>());
        grid.b_axis = doc.at("axes").at("B").get<std::vector<double>>();
        grid.t_axis = doc.at("axes").at("T").get<std::vector<double>>();
        grid.gamma_axis = doc.at("axes").at("gamma").get<std::vector<double>>();
        for (const auto& v : doc.at("values"))
            grid.values.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>());
        const auto& meta = doc.at("metadata");
        grid.j_coupling = meta.at("J").get<double>();
        grid.b_aux = meta.at("b").get<double>();
        grid.quadrature.tolerance = meta.at("quadrature").at("tolerance").get<double>();
        grid.quadrature.max_nodes = meta.at("quadrature").at("max_nodes").get<long>();
        grid.quadrature.initial_nodes = meta.at("quadrature").at("initial_nodes").get<long>();
        grid.error_count = meta.at("error_count").get<long>();
    } catch (const json::exception& e) {
        throw InvalidAxes(std::string("incomplete scan JSON: ") + e.what());
    }
    grid.validate();
    return grid;
}

} // namespace ssw
