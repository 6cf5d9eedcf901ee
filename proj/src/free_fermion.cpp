#include "ssw/free_fermion.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "ssw/errors.hpp"
#include "ssw/thermo.hpp"

namespace ssw {

namespace {

// Single-particle data on one momentum grid.
struct ModeTable {
    std::vector<double> beta_xi;
    std::vector<double> band;     // J cos k - bB, weight of t_k in <H0>/N
    std::vector<double> current;  // 2J sin k (J cos k - B), weight of t_k in <J^E>/N
    std::vector<std::vector<double>> cos_r;
    std::vector<std::vector<double>> sin_r;
};

ModeTable make_modes(const ChainParamsd& p, int n, int r_max, double offset) {
    ModeTable t;
    const double J = p.j_coupling;
    const double B = p.b_field;
    for (int j = 0; j < n; ++j) {
        const double k = 2.0 * std::numbers::pi * (j + offset) / n;
        t.beta_xi.push_back(beta_xi(p, k));
        t.band.push_back(J * std::cos(k) - B * p.b_aux);
        t.current.push_back(2.0 * J * std::sin(k) * (J * std::cos(k) - B));
        std::vector<double> c(static_cast<std::size_t>(r_max + 1));
        std::vector<double> s(static_cast<std::size_t>(r_max + 1));
        for (int r = 0; r <= r_max; ++r) {
            c[static_cast<std::size_t>(r)] = std::cos(k * r);
            s[static_cast<std::size_t>(r)] = std::sin(k * r);
        }
        t.cos_r.push_back(std::move(c));
        t.sin_r.push_back(std::move(s));
    }
    return t;
}

// Everything is linear in t_k = <1 - 2 n_k>.
struct Linear {
    double m = 0, e = 0, q = 0;
    std::vector<double> g, s;
};

Linear linear_quantities(const ModeTable& modes, const std::vector<double>& t, int r_max) {
    Linear out;
    const auto n = static_cast<double>(t.size());
    out.g.assign(static_cast<std::size_t>(r_max + 1), 0.0);
    out.s.assign(static_cast<std::size_t>(r_max + 1), 0.0);
    for (std::size_t k = 0; k < t.size(); ++k) {
        out.m += t[k];
        out.e += modes.band[k] * t[k];
        out.q += modes.current[k] * t[k];
        for (int r = 0; r <= r_max; ++r) {
            out.g[static_cast<std::size_t>(r)] += modes.cos_r[k][static_cast<std::size_t>(r)] * t[k];
            out.s[static_cast<std::size_t>(r)] += modes.sin_r[k][static_cast<std::size_t>(r)] * t[k];
        }
    }
    out.m /= n;
    out.e /= n;
    out.q /= n;
    for (auto& v : out.g) v /= n;
    for (auto& v : out.s) v /= n;
    out.s[0] = 0.0;
    return out;
}

void finish(FiniteChainResult& r, const ChainParamsd& p) { r.u_density = r.e_density + p.drive() * r.q_density; }

FiniteChainResult grand_canonical(const ChainParamsd& p, int n, int r_max) {
    const ModeTable modes = make_modes(p, n, r_max, 0.0);
    std::vector<double> t(static_cast<std::size_t>(n));
    double log_z = 0.0;
    for (int k = 0; k < n; ++k) {
        t[static_cast<std::size_t>(k)] = std::tanh(modes.beta_xi[static_cast<std::size_t>(k)]);
        log_z += log_two_cosh(modes.beta_xi[static_cast<std::size_t>(k)]);
    }
    const Linear lin = linear_quantities(modes, t, r_max);
    FiniteChainResult r;
    r.n_sites = n;
    r.method = FiniteChainMethod::GrandCanonical;
    r.log_z_density = log_z / n;
    r.m_density = lin.m;
    r.e_density = lin.e;
    r.q_density = lin.q;
    r.g = lin.g;
    r.s = lin.s;
    r.components.push_back({1.0, {lin.g, lin.s}});
    finish(r, p);
    return r;
}

// Exact finite-N state: every Fock state of the fermion modes, with the momentum
// grid fixed by the fermion parity (even -> antiperiodic, odd -> periodic). Each
// Fock state is a Slater determinant, so Wick's theorem holds per state.
FiniteChainResult parity_resolved(const ChainParamsd& p, int n, int r_max) {
    struct Sector {
        double offset;
        int parity;
    };
    const Sector sectors[] = {{0.5, 0}, {0.0, 1}};

    struct State {
        double log_weight;
        Linear lin;
    };
    std::vector<State> states;
    states.reserve(std::size_t(1) << n);
    const std::uint64_t count = std::uint64_t(1) << n;
    for (const auto& sector : sectors) {
        const ModeTable modes = make_modes(p, n, r_max, sector.offset);
        std::vector<double> t(static_cast<std::size_t>(n));
        for (std::uint64_t occ = 0; occ < count; ++occ) {
            if (std::popcount(occ) % 2 != sector.parity) continue;
            double log_w = 0.0;
            for (int k = 0; k < n; ++k) {
                const bool filled = (occ >> k) & 1U;
                t[static_cast<std::size_t>(k)] = filled ? -1.0 : 1.0;
                if (filled) log_w -= 2.0 * modes.beta_xi[static_cast<std::size_t>(k)];
            }
            states.push_back({log_w, linear_quantities(modes, t, r_max)});
        }
    }

    double top = -INFINITY;
    for (const auto& st : states) top = std::max(top, st.log_weight);
    double z = 0.0;
    for (const auto& st : states) z += std::exp(st.log_weight - top);

    FiniteChainResult r;
    r.n_sites = n;
    r.method = FiniteChainMethod::ParityResolved;
    r.g.assign(static_cast<std::size_t>(r_max + 1), 0.0);
    r.s.assign(static_cast<std::size_t>(r_max + 1), 0.0);
    r.components.reserve(states.size());
    for (auto& st : states) {
        const double w = std::exp(st.log_weight - top) / z;
        r.m_density += w * st.lin.m;
        r.e_density += w * st.lin.e;
        r.q_density += w * st.lin.q;
        for (int i = 0; i <= r_max; ++i) {
            r.g[static_cast<std::size_t>(i)] += w * st.lin.g[static_cast<std::size_t>(i)];
            r.s[static_cast<std::size_t>(i)] += w * st.lin.s[static_cast<std::size_t>(i)];
        }
        r.components.push_back({w, {std::move(st.lin.g), std::move(st.lin.s)}});
    }
    // K_state = sum_k 2 beta xi_k n_k - beta b B N, since sum_k xi_k = N b B on either grid.
    r.log_z_density = (std::log(z) + top) / n + p.beta() * p.b_field * p.b_aux;
    finish(r, p);
    return r;
}

} // namespace

FiniteChainResult free_fermion_finite(const ChainParamsd& p, int n_sites, int r_max, FiniteChainMethod method) {
    p.validate();
    if (n_sites < 3) throw InvalidParams("free_fermion_finite needs N >= 3 (got " + std::to_string(n_sites) + ")");
    if (r_max < 0 || r_max >= n_sites) throw InvalidParams("r_max must lie in [0, N)");
    if (method == FiniteChainMethod::Auto)
        method = n_sites <= kParityResolvedMaxSites ? FiniteChainMethod::ParityResolved : FiniteChainMethod::GrandCanonical;
    if (method == FiniteChainMethod::ParityResolved) {
        if (n_sites > 20) throw SizeLimit("parity-resolved enumeration is limited to N <= 20");
        return parity_resolved(p, n_sites, r_max);
    }
    return grand_canonical(p, n_sites, r_max);
}

PairCorrelatorsd pair_correlators(const FiniteChainResult& chain, int separation) {
    PairCorrelatorsd out;
    out.separation = separation;
    for (const auto& c : chain.components) {
        const PairCorrelatorsd pc = pair_correlators(c.correlators, separation);
        out.xx_plus_yy += c.weight * pc.xx_plus_yy;
        out.yx_minus_xy += c.weight * pc.yx_minus_xy;
        out.zz += c.weight * pc.zz;
        out.z_single += c.weight * pc.z_single;
        out.imag_residue = std::max(out.imag_residue, pc.imag_residue);
    }
    return out;
}

double concurrence(const FiniteChainResult& chain, int separation) {
    return concurrence(pair_correlators(chain, separation));
}

} // namespace ssw
