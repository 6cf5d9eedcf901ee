#ifndef SSW_QUADRATURE_HPP
#define SSW_QUADRATURE_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <utility>

#include "ssw/errors.hpp"

namespace ssw {

struct QuadratureConfig {
    double tolerance = 1e-10;
    long max_nodes = 1L << 20;
    long initial_nodes = 64;

    void validate() const {
        if (!(tolerance > 0)) throw InvalidParams("quadrature tolerance must be positive");
        if (initial_nodes < 8) throw InvalidParams("quadrature needs at least 8 initial nodes");
        if (max_nodes < initial_nodes) throw InvalidParams("max_nodes must be >= initial_nodes");
    }
};

template <typename V>
struct QuadratureResult {
    V value;
    long nodes;
};

namespace detail {

// Coefficient access that works for plain scalars and Eigen column arrays.
template <typename V>
constexpr bool is_scalar_v = std::is_floating_point_v<V>;

template <typename V>
long coeff_count(const V& v) {
    if constexpr (is_scalar_v<V>) {
        return 1;
    } else {
        return static_cast<long>(v.size());
    }
}

template <typename V>
auto& coeff(V& v, long i) {
    if constexpr (is_scalar_v<V>) {
        (void)i;
        return v;
    } else {
        return v(i);
    }
}

template <typename V>
auto coeff(const V& v, long i) {
    if constexpr (is_scalar_v<V>) {
        (void)i;
        return v;
    } else {
        return v(i);
    }
}

// Neumaier summation; the result depends only on the order of add() calls.
template <typename V>
struct CompensatedSum {
    V sum;
    V carry;

    explicit CompensatedSum(const V& zero) : sum(zero), carry(zero) {}

    void add(const V& x) {
        using std::abs;
        for (long i = 0; i < coeff_count(x); ++i) {
            auto& s = coeff(sum, i);
            auto& c = coeff(carry, i);
            const auto xi = coeff(x, i);
            const auto t = s + xi;
            if (abs(s) >= abs(xi))
                c += (s - t) + xi;
            else
                c += (xi - t) + s;
            s = t;
        }
    }

    V total() const {
        V out = sum;
        for (long i = 0; i < coeff_count(out); ++i) coeff(out, i) += coeff(carry, i);
        return out;
    }
};

template <typename V>
V zero_like(const V& v) {
    V out = v;
    for (long i = 0; i < coeff_count(out); ++i) coeff(out, i) = 0;
    return out;
}

template <typename V>
bool all_finite(const V& v) {
    using std::isfinite;
    for (long i = 0; i < coeff_count(v); ++i)
        if (!isfinite(coeff(v, i))) return false;
    return true;
}

template <typename V>
auto max_abs(const V& v) {
    using std::abs;
    auto m = abs(coeff(v, 0));
    for (long i = 1; i < coeff_count(v); ++i) m = std::max(m, decltype(m)(abs(coeff(v, i))));
    return m;
}

template <typename V>
auto max_abs_diff(const V& a, const V& b) {
    using std::abs;
    auto m = abs(coeff(a, 0) - coeff(b, 0));
    for (long i = 1; i < coeff_count(a); ++i) m = std::max(m, decltype(m)(abs(coeff(a, i) - coeff(b, i))));
    return m;
}

} // namespace detail

/// Integral of a 2pi-periodic function over [0, 2pi] by the trapezoid rule with node
/// doubling. Stops once |I_2n - I_n| <= tol * max(1, |I_2n|) and returns I_2n.
///
/// The integrand may return a floating-point scalar or an Eigen column array; for
/// arrays the convergence test uses the max-norm over components.
template <typename Scalar, typename F>
auto integrate_periodic_detailed(F&& f, const QuadratureConfig& config = {})
    -> QuadratureResult<std::decay_t<std::invoke_result_t<F&, Scalar>>> {
    using V = std::decay_t<std::invoke_result_t<F&, Scalar>>;
    config.validate();
    constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

    long nodes = config.initial_nodes;
    V first = f(Scalar(0));
    detail::CompensatedSum<V> acc(detail::zero_like(first));
    auto check = [&](const V& v) {
        if (!detail::all_finite(v))
            throw NonConvergence("periodic quadrature: non-finite integrand value", NAN, nodes);
        acc.add(v);
    };
    check(first);
    for (long j = 1; j < nodes; ++j) check(f(two_pi * Scalar(j) / Scalar(nodes)));

    auto scaled = [&](long n) {
        V v = acc.total();
        for (long i = 0; i < detail::coeff_count(v); ++i) detail::coeff(v, i) *= two_pi / Scalar(n);
        return v;
    };

    V previous = scaled(nodes);
    double delta = INFINITY;
    while (2 * nodes <= config.max_nodes) {
        const long fine = 2 * nodes;
        for (long j = 1; j < fine; j += 2) check(f(two_pi * Scalar(j) / Scalar(fine)));
        nodes = fine;
        V current = scaled(nodes);
        delta = static_cast<double>(detail::max_abs_diff(current, previous));
        const double scale = std::max(1.0, static_cast<double>(detail::max_abs(current)));
        if (delta <= config.tolerance * scale) return {current, nodes};
        previous = std::move(current);
    }
    throw NonConvergence("periodic quadrature did not converge within " + std::to_string(config.max_nodes) +
                             " nodes (last change " + std::to_string(delta) + ")",
                         delta, nodes);
}

template <typename Scalar, typename F>
auto integrate_periodic(F&& f, const QuadratureConfig& config = {}) {
    return integrate_periodic_detailed<Scalar>(std::forward<F>(f), config).value;
}

} // namespace ssw

#endif // SSW_QUADRATURE_HPP
