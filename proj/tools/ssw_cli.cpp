// ssw: steady-state witness calculator for the current-carrying XX chain.
//
//   ssw point   --J 1 --B 0.5 --T 1 --gamma 1 [--q W1,WSS,...]
//   ssw scan    --B-range 0:2:41 --T-range 0.1:10:41 --gamma-range 0:2:3 --q W1 --out w1.csv
//   ssw contour --B-range ... --T-range ... --gamma 2 --q WSS --level 1
//   ssw verify  --N 8
//
// Exit codes: 0 ok, 1 I/O error, 2 quadrature failure, 3 invalid configuration,
// 4 verification failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssw/chain_params.hpp"
#include "ssw/contour.hpp"
#include "ssw/correlators.hpp"
#include "ssw/errors.hpp"
#include "ssw/scan.hpp"
#include "ssw/thermo.hpp"
#include "ssw/verify.hpp"
#include "ssw/witness.hpp"

namespace {

enum ExitCode { kOk = 0, kIoError = 1, kConvergence = 2, kInvalidConfig = 3, kVerificationFailed = 4 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double j = 1.0;
    double b = 0.0;
    double t = 1.0;
    double gamma = 0.0;
    double b_aux = 1.0;
    std::vector<std::string> quantities;
    std::string b_range;
    std::string t_range;
    std::string gamma_range;
    double tol = ssw::QuadratureConfig{}.tolerance;
    std::string out;
    std::string format = "csv";
    int n_sites = 8;
    double level = 1.0;
    double verify_tol = 1e-8;
    bool split_gamma = false;
    bool no_timestamp = false;
};

const std::vector<std::string> kPointQuantities = {"lnZ", "M", "U", "Q", "W1", "WSS", "G0", "G1",
                                                   "G2",  "s0", "s1", "s2", "C_R1", "C_R2"};

std::string canonical_point_quantity(const std::string& q) {
    static const std::map<std::string, std::string> alias = {{"W_1", "W1"}, {"W_ss", "WSS"}, {"Wss", "WSS"},
                                                             {"lnz", "lnZ"}, {"C1", "C_R1"}, {"C2", "C_R2"}};
    if (auto it = alias.find(q); it != alias.end()) return it->second;
    for (const auto& k : kPointQuantities)
        if (k == q) return k;
    throw ssw::InvalidParams("unknown quantity '" + q + "'");
}

std::string timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

unsigned thread_cap() {
    if (const char* env = std::getenv("SSW_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (const std::exception&) {
        }
        throw ssw::InvalidParams(std::string("SSW_THREADS must be a positive integer (got '") + env + "')");
    }
    return 0;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw IoError("failed writing '" + path + "'");
}

ssw::QuadratureConfig quadrature(const RunConfig& c) {
    ssw::QuadratureConfig q;
    q.tolerance = c.tol;
    q.validate();
    return q;
}

ssw::ChainParamsd point_params(const RunConfig& c) { return ssw::make_params(c.j, c.b, c.t, c.gamma, c.b_aux); }

ssw::ScanSpec scan_spec(const RunConfig& c) {
    ssw::ScanSpec s;
    s.b_axis = c.b_range.empty() ? std::vector<double>{c.b} : ssw::AxisRange::parse(c.b_range).values();
    s.t_axis = c.t_range.empty() ? std::vector<double>{c.t} : ssw::AxisRange::parse(c.t_range).values();
    s.gamma_axis = c.gamma_range.empty() ? std::vector<double>{c.gamma} : ssw::AxisRange::parse(c.gamma_range).values();
    s.j_coupling = c.j;
    s.b_aux = c.b_aux;
    s.quadrature = quadrature(c);
    s.threads = thread_cap();
    ssw::validate_axes(s);
    return s;
}

int cmd_point(const RunConfig& c) {
    const ssw::ChainParamsd p = point_params(c);
    const ssw::QuadratureConfig q = quadrature(c);
    std::vector<std::string> wanted;
    for (const auto& name : (c.quantities.empty() ? kPointQuantities : c.quantities))
        wanted.push_back(canonical_point_quantity(name));

    std::vector<std::pair<std::string, double>> values;
    for (const auto& name : wanted) {
        double v = 0;
        try {
            if (name == "lnZ") v = ssw::log_z_density(p, q);
            else if (name == "M") v = ssw::magnetization_density(p, q);
            else if (name == "U") v = ssw::internal_energy_density(p, q);
            else if (name == "Q") v = ssw::energy_current_density(p, q);
            else if (name == "W1") v = ssw::w1(p, q);
            else if (name == "WSS") v = ssw::w_ss(p, q);
            else if (name[0] == 'G') v = ssw::g_r(p, name[1] - '0', q);
            else if (name[0] == 's') v = ssw::s_r(p, name[1] - '0', q);
            else if (name == "C_R1") v = ssw::concurrence(p, 1, q);
            else if (name == "C_R2") v = ssw::concurrence(p, 2, q);
        } catch (const ssw::NonConvergence& e) {
            std::cerr << "ssw point: quantity " << name << " failed: " << e.what() << '\n';
            return kConvergence;
        }
        values.emplace_back(name, v);
    }

    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json doc = {{"schema", 1},
                              {"version", std::string(ssw::version())},
                              {"params", {{"J", p.j_coupling}, {"B", p.b_field}, {"T", p.temperature}, {"gamma", p.gamma}, {"b", p.b_aux}}},
                              {"tolerance", q.tolerance}};
        for (const auto& [name, v] : values) doc["values"][name] = v;
        os << doc.dump(2) << '\n';
    } else {
        os << "# tolerance: " << ssw::format_double(q.tolerance) << '\n';
        os << "quantity,value\n";
        for (const auto& [name, v] : values) os << name << ',' << ssw::format_double(v) << '\n';
    }
    emit(c.out, os.str());
    return kOk;
}

std::string output_path(const RunConfig& c, const std::string& suffix, bool multi) {
    if (!multi) return c.out;
    if (c.out.empty() || c.out == "-") throw ssw::InvalidParams("multiple output files need --out as a file stem");
    std::filesystem::path p(c.out);
    const std::string ext = p.has_extension() ? p.extension().string() : "." + c.format;
    p.replace_extension();
    return p.string() + suffix + ext;
}

int cmd_scan(const RunConfig& c) {
    ssw::ScanSpec spec = scan_spec(c);
    std::vector<ssw::Quantity> quantities;
    for (const auto& name : (c.quantities.empty() ? std::vector<std::string>{"W1"} : c.quantities))
        quantities.push_back(ssw::parse_quantity(name));
    const bool multi = quantities.size() > 1 || c.split_gamma;
    const std::string stamp = c.no_timestamp ? std::string() : timestamp();
    long failures = 0;

    for (const auto q : quantities) {
        std::vector<std::vector<double>> gamma_sets;
        if (c.split_gamma)
            for (double g : spec.gamma_axis) gamma_sets.push_back({g});
        else
            gamma_sets.push_back(spec.gamma_axis);
        for (std::size_t gi = 0; gi < gamma_sets.size(); ++gi) {
            ssw::ScanSpec part = spec;
            part.gamma_axis = gamma_sets[gi];
            const ssw::ScanGrid grid = ssw::scan(q, part);
            failures += grid.error_count;
            std::string suffix = "_" + std::string(ssw::to_string(q));
            if (c.split_gamma) suffix += "_g" + std::to_string(gi);
            std::ostringstream os;
            if (c.format == "json")
                os << ssw::to_json(grid, stamp);
            else
                ssw::write_csv(grid, os, stamp);
            emit(output_path(c, suffix, multi), os.str());
        }
    }
    if (failures > 0) {
        std::cerr << "ssw scan: " << failures << " grid point(s) failed to converge (written as NaN)\n";
        return kConvergence;
    }
    return kOk;
}

int cmd_contour(const RunConfig& c) {
    const ssw::ScanSpec spec = scan_spec(c);
    const ssw::Quantity q = ssw::parse_quantity(c.quantities.empty() ? "W1" : c.quantities.front());
    const ssw::ScanGrid grid = ssw::scan(q, spec);

    std::ostringstream os;
    nlohmann::json slices = nlohmann::json::array();
    if (c.format != "json") os << "gamma,contour,point,B,T,closed\n";
    for (std::size_t gi = 0; gi < grid.gamma_axis.size(); ++gi) {
        const auto lines = ssw::detection_boundary(grid, gi, c.level);
        nlohmann::json contours = nlohmann::json::array();
        for (std::size_t li = 0; li < lines.size(); ++li) {
            nlohmann::json pts = nlohmann::json::array();
            for (std::size_t pi = 0; pi < lines[li].points.size(); ++pi) {
                const auto& pt = lines[li].points[pi];
                if (c.format == "json")
                    pts.push_back({pt.b, pt.t});
                else
                    os << ssw::format_double(grid.gamma_axis[gi]) << ',' << li << ',' << pi << ','
                       << ssw::format_double(pt.b) << ',' << ssw::format_double(pt.t) << ','
                       << (lines[li].closed ? 1 : 0) << '\n';
            }
            contours.push_back({{"closed", lines[li].closed}, {"points", pts}});
        }
        slices.push_back({{"gamma", grid.gamma_axis[gi]}, {"contours", contours}});
    }
    if (c.format == "json") {
        nlohmann::json doc = {{"schema", 1},
                              {"version", std::string(ssw::version())},
                              {"quantity", std::string(ssw::to_string(q))},
                              {"level", c.level},
                              {"error_count", grid.error_count},
                              {"slices", slices}};
        os << doc.dump(2) << '\n';
    }
    emit(c.out, os.str());
    if (grid.error_count > 0) {
        std::cerr << "ssw contour: " << grid.error_count << " grid point(s) failed to converge\n";
        return kConvergence;
    }
    return kOk;
}

int cmd_verify(const RunConfig& c) {
    std::vector<ssw::ChainParamsd> grid;
    if (c.b_range.empty() && c.t_range.empty() && c.gamma_range.empty() && c.j == 1.0) {
        grid = ssw::keystone_grid();
    } else {
        auto axis = [](const std::string& r, std::vector<double> fallback) {
            return r.empty() ? fallback : ssw::AxisRange::parse(r).values();
        };
        for (double g : axis(c.gamma_range, {0.0, 1.0, 2.0}))
            for (double t : axis(c.t_range, {0.2, 1.0, 5.0}))
                for (double b : axis(c.b_range, {0.0, 0.5, 1.0, 1.5})) grid.push_back(ssw::make_params(c.j, b, t, g, c.b_aux));
    }
    const ssw::VerificationReport report = ssw::run_verification(c.n_sites, grid, c.verify_tol, quadrature(c));
    emit(c.out, report.to_json());
    if (!report.passed()) {
        const auto* w = report.worst();
        std::cerr << "ssw verify: FAILED; worst offender " << w->quantity << " at B=" << w->params.b_field
                  << " T=" << w->params.temperature << " gamma=" << w->params.gamma << ": |ED - free fermion| = "
                  << w->diff_ed_ff << '\n';
        return kVerificationFailed;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady-state entanglement witnesses for the energy-current-carrying XX chain"};
    app.set_config("--config", "", "Read flags from a TOML/INI file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    app.add_option("--J", c.j, "Nearest-neighbour coupling (> 0)")->capture_default_str();
    app.add_option("--B", c.b, "Magnetic field (>= 0)")->capture_default_str();
    app.add_option("--T", c.t, "Steady-state temperature (> 0)")->capture_default_str();
    app.add_option("--gamma", c.gamma, "Energy-current driving")->capture_default_str();
    app.add_option("--b", c.b_aux, "Auxiliary Zeeman multiplier")->capture_default_str();
    app.add_option("--q", c.quantities, "Quantities (comma separated)")->delimiter(',');
    app.add_option("--B-range", c.b_range, "B axis as min:max:count");
    app.add_option("--T-range", c.t_range, "T axis as min:max:count");
    app.add_option("--gamma-range", c.gamma_range, "gamma axis as min:max:count");
    app.add_option("--tol", c.tol, "Quadrature tolerance")->capture_default_str();
    app.add_option("--out", c.out, "Output file (stdout when omitted); a file stem for multi-file scans");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--N", c.n_sites, "Chain length for verify")->capture_default_str();
    app.add_option("--level", c.level, "Contour level")->capture_default_str();
    app.add_option("--verify-tol", c.verify_tol, "Pass threshold for |ED - free fermion|")->capture_default_str();
    app.add_flag("--split-gamma", c.split_gamma, "Write one scan file per gamma value");
    app.add_flag("--no-timestamp", c.no_timestamp, "Omit the generation timestamp from scan metadata");

    auto* point = app.add_subcommand("point", "Evaluate quantities at one parameter point");
    auto* scan = app.add_subcommand("scan", "Evaluate a quantity on a (B, T, gamma) grid");
    auto* contour = app.add_subcommand("contour", "Extract level-set polylines of a scanned quantity per gamma");
    auto* verify = app.add_subcommand("verify", "Cross-check exact diagonalisation against the free-fermion solution");
    for (auto* sub : {point, scan, contour, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidConfig;
    }

    try {
        if (*point) return cmd_point(c);
        if (*scan) return cmd_scan(c);
        if (*contour) return cmd_contour(c);
        if (*verify) return cmd_verify(c);
    } catch (const ssw::NonConvergence& e) {
        std::cerr << "ssw: " << e.what() << '\n';
        return kConvergence;
    } catch (const IoError& e) {
        std::cerr << "ssw: " << e.what() << '\n';
        return kIoError;
    } catch (const ssw::Error& e) {
        std::cerr << "ssw: " << e.what() << '\n';
        return kInvalidConfig;
    }
    return kInvalidConfig;
}
