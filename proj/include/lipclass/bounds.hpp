#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lipclass/errors.hpp"

namespace lipclass::bounds {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Largest alpha-separated subset of a set with the given diameter in a space
/// of doubling dimension ddim: (2 diam / alpha)^ddim.
inline double packing_bound(double diam, double alpha, double ddim) {
    if (!(alpha > 0.0)) throw input_error("packing bound needs alpha > 0");
    if (!(diam >= 0.0)) throw input_error("packing bound needs diam >= 0");
    return std::pow(2.0 * diam / alpha, ddim);
}

/// log of the fat-shattering estimate at scale 1/16 for L-Lipschitz functions
/// under an eps-perturbation: ddim * log(16 L diam / (1 - 32 eps)).
inline double log_fat_dim(double lipschitz, double diam, double ddim, double eps) {
    if (!(eps >= 0.0 && eps < 1.0 / 32.0)) throw input_error("fat_dim needs eps in [0, 1/32)");
    if (!(lipschitz > 0.0 && diam > 0.0)) throw input_error("fat_dim needs L > 0 and diam > 0");
    if (!(ddim >= 0.0)) throw input_error("fat_dim needs ddim >= 0");
    return ddim * (std::log(16.0 * lipschitz * diam) - std::log1p(-32.0 * eps));
}

/// (16 L diam / (1 - 32 eps))^ddim, or +infinity past the double range.
inline double fat_dim(double lipschitz, double diam, double ddim, double eps) {
    const double lg = log_fat_dim(lipschitz, diam, ddim, eps);
    return lg >= std::log(std::numeric_limits<double>::max()) ? kInfinity : std::exp(lg);
}

/// Scale-gamma estimate (L diam / gamma)^ddim; gamma = 1/16 matches fat_dim at eps = 0.
inline double fat_gamma(double lipschitz, double diam, double ddim, double gamma) {
    if (!(gamma > 0.0)) throw input_error("fat_gamma needs gamma > 0");
    return std::pow(lipschitz * diam / gamma, ddim);
}

struct BoundValue {
    /// the printed expression; +infinity when D >= 34 e n, where it has no meaning
    double raw = 0.0;
    /// raw clamped to [0, 1]
    double clamped = 0.0;
};

namespace detail {

inline void check_common(double n, double dim, double delta) {
    if (!(n >= 1.0)) throw input_error("bound needs n >= 1");
    if (!(dim > 0.0)) throw input_error("bound needs D > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw input_error("bound needs delta in (0, 1)");
}

inline BoundValue make(double raw) { return {raw, std::clamp(raw, 0.0, 1.0)}; }

} // namespace detail

/// (2/n) (D log2(34 e n / D) log2(578 n) + log2(4/delta)).
inline BoundValue gen_bound_separable(double n, double dim, double delta) {
    detail::check_common(n, dim, delta);
    const double ratio = 34.0 * std::numbers::e * n / dim;
    if (!(ratio > 1.0) || std::isinf(dim)) return detail::make(kInfinity);
    const double raw = (2.0 / n) * (dim * std::log2(ratio) * std::log2(578.0 * n) + std::log2(4.0 / delta));
    return detail::make(raw);
}

/// The root term sqrt((2/n)(D ln(34 e n / D) log2(578 n) + ln(4/delta))).
inline double agnostic_complexity(double n, double dim, double delta) {
    detail::check_common(n, dim, delta);
    const double ratio = 34.0 * std::numbers::e * n / dim;
    if (!(ratio > 1.0) || std::isinf(dim)) return kInfinity;
    return std::sqrt((2.0 / n) * (dim * std::log(ratio) * std::log2(578.0 * n) + std::log(4.0 / delta)));
}

/// k/n + sqrt((2/n)(D ln(34 e n / D) log2(578 n) + ln(4/delta))).
inline BoundValue gen_bound_agnostic(double n, double k, double dim, double delta) {
    if (!(k >= 0.0 && k <= n)) throw input_error("bound needs 0 <= k <= n");
    return detail::make(k / n + agnostic_complexity(n, dim, delta));
}

/// Complexity term of the constant classifier (no fat-shattering part).
inline double constant_complexity(double n, double delta) {
    if (!(n >= 1.0)) throw input_error("bound needs n >= 1");
    if (!(delta > 0.0 && delta < 1.0)) throw input_error("bound needs delta in (0, 1)");
    return std::sqrt(2.0 * std::log(4.0 / delta) / n);
}

} // namespace lipclass::bounds
