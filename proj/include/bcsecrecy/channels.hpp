#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bcsecrecy/distributions.hpp"
#include "bcsecrecy/linear_program.hpp"

namespace bcsecrecy {

/// Feasibility threshold for stochastic degradedness, max-norm.
inline constexpr double kDegradedTolerance = 1e-7;

enum class Receiver { Y1, Y2, Z };

/// Matrix product first * second: the channel X -> Y -> Z.
inline DiscreteChannel cascade(const DiscreteChannel& first, const DiscreteChannel& second) {
    if (first.output_size() != second.input_size())
        throw Error(Errc::DimensionMismatch, "cascade: first has " + std::to_string(first.output_size()) +
                                                 " outputs, second has " + std::to_string(second.input_size()) +
                                                 " inputs");
    const std::size_t nx = first.input_size(), ny = first.output_size(), nz = second.output_size();
    std::vector<double> out(nx * nz, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) {
            const double a = first(x, y);
            if (a == 0.0) continue;
            for (std::size_t z = 0; z < nz; ++z) out[x * nz + z] += a * second(y, z);
        }
    return DiscreteChannel(nx, nz, std::move(out));
}

inline DiscreteChannel marginal_channel(const BroadcastChannel& bcc, Receiver which) {
    require_valid(bcc);
    const std::size_t nx = bcc.x_size();
    const std::size_t a = bcc.y1_size(), b = bcc.y2_size(), c = bcc.z_size();
    const std::size_t cols = which == Receiver::Y1 ? a : which == Receiver::Y2 ? b : c;
    std::vector<double> out(nx * cols, 0.0);
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y1 = 0; y1 < a; ++y1)
            for (std::size_t y2 = 0; y2 < b; ++y2)
                for (std::size_t z = 0; z < c; ++z) {
                    const std::size_t k = which == Receiver::Y1 ? y1 : which == Receiver::Y2 ? y2 : z;
                    out[x * cols + k] += bcc(x, y1, y2, z);
                }
    return DiscreteChannel(nx, cols, std::move(out));
}

/// The three conditional marginals P(y1|x), P(y2|x), P(z|x). Every region
/// computation consumes only these.
struct BroadcastMarginals {
    DiscreteChannel py1x;
    DiscreteChannel py2x;
    DiscreteChannel pzx;

    std::size_t x_size() const noexcept { return py1x.input_size(); }
};

inline BroadcastMarginals marginals(const BroadcastChannel& bcc) {
    return {marginal_channel(bcc, Receiver::Y1), marginal_channel(bcc, Receiver::Y2),
            marginal_channel(bcc, Receiver::Z)};
}

inline void require_valid(const BroadcastMarginals& m) {
    require_valid(m.py1x);
    require_valid(m.py2x);
    require_valid(m.pzx);
    if (m.py2x.input_size() != m.x_size() || m.pzx.input_size() != m.x_size())
        throw Error(Errc::DimensionMismatch, "marginal channels disagree on the input alphabet");
}

struct DegradednessReport {
    bool feasible = false;
    double residual = 0.0;
    std::optional<DiscreteChannel> intermediate;
};

/// Looks for a row-stochastic M with stronger * M == weaker.
///
/// Solved as the Chebyshev program  min t  s.t.  |stronger*M - weaker| <= t
/// entrywise, M >= 0, rows of M sum to one. The optimum t is the smallest
/// achievable max-norm residual, so the same program certifies feasibility
/// and reports how far an infeasible pair is from being degraded.
inline DegradednessReport check_stochastic_degraded(const DiscreteChannel& stronger, const DiscreteChannel& weaker) {
    require_valid(stronger);
    require_valid(weaker);
    if (stronger.input_size() != weaker.input_size())
        throw Error(Errc::DimensionMismatch, "degradedness check needs a shared input alphabet");

    const std::size_t nx = stronger.input_size();
    const std::size_t n1 = stronger.output_size();
    const std::size_t n2 = weaker.output_size();
    const std::size_t nm = n1 * n2;
    const std::size_t k = nx * n2;
    const std::size_t t_col = nm;
    const std::size_t nvars = nm + 1 + 2 * k;

    std::vector<double> cost(nvars, 0.0);
    cost[t_col] = 1.0;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    A.reserve(2 * k + n1);
    for (int side = 0; side < 2; ++side) {
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t y2 = 0; y2 < n2; ++y2) {
                std::vector<double> row(nvars, 0.0);
                for (std::size_t y1 = 0; y1 < n1; ++y1) row[y1 * n2 + y2] = stronger(x, y1);
                const std::size_t s = nm + 1 + side * k + x * n2 + y2;
                if (side == 0) {
                    row[t_col] = -1.0;
                    row[s] = 1.0;
                } else {
                    row[t_col] = 1.0;
                    row[s] = -1.0;
                }
                A.push_back(std::move(row));
                b.push_back(weaker(x, y2));
            }
    }
    for (std::size_t y1 = 0; y1 < n1; ++y1) {
        std::vector<double> row(nvars, 0.0);
        for (std::size_t y2 = 0; y2 < n2; ++y2) row[y1 * n2 + y2] = 1.0;
        A.push_back(std::move(row));
        b.push_back(1.0);
    }

    const auto sol = lp::solve_standard_form(cost, A, b);
    DegradednessReport report;
    if (sol.status != lp::Status::Optimal) {
        // Cannot happen for valid inputs (uniform M with large t is feasible).
        report.residual = std::numeric_limits<double>::infinity();
        return report;
    }

    std::vector<double> m(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(nm));
    for (std::size_t y1 = 0; y1 < n1; ++y1) {
        double s = 0.0;
        for (std::size_t y2 = 0; y2 < n2; ++y2) {
            double& v = m[y1 * n2 + y2];
            v = std::max(v, 0.0);
            s += v;
        }
        for (std::size_t y2 = 0; y2 < n2; ++y2) m[y1 * n2 + y2] = s > 0.0 ? m[y1 * n2 + y2] / s : 1.0 / n2;
    }
    DiscreteChannel inter(n1, n2, std::move(m));
    const DiscreteChannel recon = cascade(stronger, inter);
    double residual = 0.0;
    for (std::size_t i = 0; i < recon.flat().size(); ++i)
        residual = std::max(residual, std::abs(recon.flat()[i] - weaker.flat()[i]));
    report.residual = residual;
    report.feasible = residual <= kDegradedTolerance;
    if (report.feasible) report.intermediate = std::move(inter);
    return report;
}

}  // namespace bcsecrecy
