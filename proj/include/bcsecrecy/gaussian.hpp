#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bcsecrecy/distributions.hpp"
#include "bcsecrecy/frontier.hpp"

namespace bcsecrecy {

/// Degraded AWGN broadcast channel with an eavesdropper: transmit power and
/// the three noise variances, ordered n1 <= n2 <= n3.
struct GaussianParams {
    double power = 1.0;
    double n1 = 1.0;
    double n2 = 1.0;
    double n3 = 1.0;
};

inline Validation validate_gaussian(const GaussianParams& g) {
    if (!(g.power > 0.0)) return {Errc::InvalidParams, "power must be positive"};
    if (!(g.n1 > 0.0 && g.n2 > 0.0 && g.n3 > 0.0)) return {Errc::InvalidParams, "noise variances must be positive"};
    if (!(g.n1 <= g.n2 && g.n2 <= g.n3)) return {Errc::InvalidParams, "noise variances must satisfy n1 <= n2 <= n3"};
    return {};
}

inline void require_valid(const GaussianParams& g) {
    if (auto v = validate_gaussian(g); !v) throw Error(Errc::InvalidParams, v.message);
}

/// C(snr) = 1/2 log2(1 + snr).
inline double capacity_fn(double snr) {
    if (!(snr >= 0.0)) throw Error(Errc::NegativeSnr, "snr " + std::to_string(snr) + " is negative");
    return 0.5 * std::log2(1.0 + snr);
}

/// Secrecy rate pair for power split alpha: a fraction alpha of the power
/// carries the satellite layer for receiver 1, the rest the cloud layer for
/// receiver 2.
///
///   r1 = C(aP/N1) + C((1-a)P/(aP+N3)) - C(P/N3)
///   r2 = C((1-a)P/(aP+N2)) - C((1-a)P/(aP+N3))
///
/// Each is evaluated as a single logarithm of a ratio, which is the same
/// quantity after telescoping C terms and is non-negative by construction
/// when n1 <= n2 <= n3.
inline RatePoint gaussian_region_point(const GaussianParams& g, double alpha) {
    require_valid(g);
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw Error(Errc::AlphaOutOfRange, "alpha " + std::to_string(alpha) + " outside [0, 1]");
    const double ap = alpha * g.power;
    const double r1 = 0.5 * std::log2(((ap + g.n1) * g.n3) / ((ap + g.n3) * g.n1));
    const double r2 = 0.5 * std::log2(((g.power + g.n2) * (ap + g.n3)) / ((g.power + g.n3) * (ap + g.n2)));
    // Ratios are >= 1 exactly; only rounding can push the logs below zero.
    return {r1 < 0.0 ? 0.0 : r1, r2 < 0.0 ? 0.0 : r2};
}

struct GaussianSample {
    double alpha = 0.0;
    RatePoint point;
};

/// gaussian_region_point on the uniform grid {0, 1/(k-1), ..., 1}.
inline std::vector<GaussianSample> gaussian_region_samples(const GaussianParams& g, std::size_t num_alphas) {
    require_valid(g);
    if (num_alphas < 2) throw Error(Errc::InvalidParams, "need at least two alpha values");
    std::vector<GaussianSample> out;
    out.reserve(num_alphas);
    for (std::size_t i = 0; i < num_alphas; ++i) {
        const double alpha = i + 1 == num_alphas ? 1.0 : static_cast<double>(i) / static_cast<double>(num_alphas - 1);
        out.push_back({alpha, gaussian_region_point(g, alpha)});
    }
    return out;
}

inline RegionFrontier gaussian_region_sweep(const GaussianParams& g, std::size_t num_alphas) {
    const auto samples = gaussian_region_samples(g, num_alphas);
    std::vector<RatePoint> pts;
    pts.reserve(samples.size());
    for (const auto& s : samples) pts.push_back(s.point);
    return pareto_filter(pts);
}

}  // namespace bcsecrecy
