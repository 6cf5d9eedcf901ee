#include "ssw/verify.hpp"

#include <cmath>

#include <json.hpp>

#include "ssw/correlators.hpp"
#include "ssw/ed_oracle.hpp"
#include "ssw/errors.hpp"
#include "ssw/free_fermion.hpp"
#include "ssw/scan.hpp"
#include "ssw/thermo.hpp"

namespace ssw {

bool VerificationReport::passed() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return !rows.empty();
}

const VerificationRow* VerificationReport::worst() const {
    const VerificationRow* w = nullptr;
    for (const auto& r : rows)
        if (!w || !(r.diff_ed_ff <= w->diff_ed_ff)) w = &r;
    return w;
}

std::string VerificationReport::to_json() const {
    using nlohmann::json;
    json table = json::array();
    for (const auto& r : rows) {
        table.push_back({{"J", r.params.j_coupling},
                         {"B", r.params.b_field},
                         {"T", r.params.temperature},
                         {"gamma", r.params.gamma},
                         {"quantity", r.quantity},
                         {"ed", r.ed},
                         {"free_fermion", r.free_fermion},
                         {"quadrature", r.quadrature},
                         {"abs_diff_ed_free_fermion", r.diff_ed_ff},
                         {"abs_diff_free_fermion_quadrature", r.diff_ff_quadrature},
                         {"pass", r.pass}});
    }
    json doc = {{"schema", 1},
                {"version", std::string(version())},
                {"N", n_sites},
                {"tolerance", tolerance},
                {"passed", passed()},
                {"rows", table}};
    if (const auto* w = worst())
        doc["worst"] = {{"quantity", w->quantity},
                        {"B", w->params.b_field},
                        {"T", w->params.temperature},
                        {"gamma", w->params.gamma},
                        {"abs_diff_ed_free_fermion", w->diff_ed_ff}};
    return doc.dump(2) + "\n";
}

std::vector<ChainParamsd> keystone_grid() {
    std::vector<ChainParamsd> grid;
    for (double gamma : {0.0, 1.0, 2.0})
        for (double t : {0.2, 1.0, 5.0})
            for (double b : {0.0, 0.5, 1.0, 1.5}) grid.push_back(make_params(1.0, b, t, gamma));
    return grid;
}

VerificationReport run_verification(int n_sites, const std::vector<ChainParamsd>& grid, double tolerance,
                                    const QuadratureConfig& config) {
    if (n_sites > ed::kMaxSites)
        throw SizeLimit("verification runs exact diagonalisation, limited to N <= " + std::to_string(ed::kMaxSites));
    VerificationReport report;
    report.n_sites = n_sites;
    report.tolerance = tolerance;
    for (const auto& p : grid) {
        const ed::EdObservables exact = ed::ed_observables(p, n_sites);
        const FiniteChainResult ff = free_fermion_finite(p, n_sites, 2, FiniteChainMethod::ParityResolved);
        const PairCorrelatorsd ff1 = pair_correlators(ff, 1);
        const PairCorrelatorsd ff2 = pair_correlators(ff, 2);
        const ThermoPointd th = thermo_point(p, config);
        const CorrelatorSetd cs = correlator_set(p, 2, config);
        const PairCorrelatorsd q1 = pair_correlators(cs, 1);
        const PairCorrelatorsd q2 = pair_correlators(cs, 2);

        auto add = [&](const char* name, double e, double f, double q) {
            VerificationRow r;
            r.params = p;
            r.quantity = name;
            r.ed = e;
            r.free_fermion = f;
            r.quadrature = q;
            r.diff_ed_ff = std::abs(e - f);
            r.diff_ff_quadrature = std::abs(f - q);
            r.pass = r.diff_ed_ff <= tolerance;
            report.rows.push_back(r);
        };
        add("lnZ/N", exact.log_z_density, ff.log_z_density, th.log_z_density);
        add("M/N", exact.m_density, ff.m_density, th.m_density);
        add("U/N", exact.u_density, ff.u_density, th.u_density);
        add("Q/N", exact.q_density, ff.q_density, th.q_density);
        add("xx+yy R1", exact.r1.xx_plus_yy, ff1.xx_plus_yy, q1.xx_plus_yy);
        add("yx-xy R1", exact.r1.yx_minus_xy, ff1.yx_minus_xy, q1.yx_minus_xy);
        add("zz R1", exact.r1.zz, ff1.zz, q1.zz);
        add("xx+yy R2", exact.r2.xx_plus_yy, ff2.xx_plus_yy, q2.xx_plus_yy);
        add("yx-xy R2", exact.r2.yx_minus_xy, ff2.yx_minus_xy, q2.yx_minus_xy);
        add("zz R2", exact.r2.zz, ff2.zz, q2.zz);
        add("C R1", exact.concurrence_r1, concurrence(ff1), concurrence(q1));
        add("C R2", exact.concurrence_r2, concurrence(ff2), concurrence(q2));
    }
    return report;
}

} // namespace ssw
