#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "bcsecrecy/error.hpp"

namespace bcsecrecy {

/// Rate pair in bits per channel use.
struct RatePoint {
    double r1 = 0.0;
    double r2 = 0.0;

    friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Points closer than this (per coordinate, or in the hull turn test) are
/// treated as coincident / collinear when extracting frontiers.
inline constexpr double kFrontierTolerance = 1e-14;

struct RegionFrontier {
    std::vector<RatePoint> points;  // sorted by r1 ascending
    bool hulled = false;

    double max_r1() const {
        double m = 0.0;
        for (const auto& p : points) m = std::max(m, p.r1);
        return m;
    }
    double max_r2() const {
        double m = 0.0;
        for (const auto& p : points) m = std::max(m, p.r2);
        return m;
    }
};

/// Pareto-maximal subset, sorted by r1 ascending (hence r2 descending).
inline RegionFrontier pareto_filter(std::span<const RatePoint> points) {
    if (points.empty()) throw Error(Errc::EmptyInput, "no rate points to filter");
    std::vector<RatePoint> sorted(points.begin(), points.end());
    std::sort(sorted.begin(), sorted.end(), [](const RatePoint& a, const RatePoint& b) {
        return a.r1 != b.r1 ? a.r1 > b.r1 : a.r2 > b.r2;
    });
    std::vector<RatePoint> keep;
    for (const auto& p : sorted) {
        if (keep.empty() || p.r2 > keep.back().r2 + kFrontierTolerance) {
            if (!keep.empty() && keep.back().r1 <= p.r1 + kFrontierTolerance) {
                // Same r1 up to noise: the higher r2 wins.
                keep.back() = p;
                continue;
            }
            keep.push_back(p);
        }
    }
    std::reverse(keep.begin(), keep.end());
    return {std::move(keep), false};
}

/// Upper-right boundary of the convex hull of points and the origin: the
/// region reachable by time sharing, described by its vertices.
inline RegionFrontier upper_right_hull(std::span<const RatePoint> points) {
    if (points.empty()) throw Error(Errc::EmptyInput, "no rate points to hull");
    std::vector<RatePoint> all(points.begin(), points.end());
    all.push_back({0.0, 0.0});
    auto pareto = pareto_filter(all).points;

    // Pareto points run left to right with falling r2; keep strict right turns.
    std::vector<RatePoint> hull;
    for (const auto& c : pareto) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1);
            if (cross >= -kFrontierTolerance) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(c);
    }
    return {std::move(hull), true};
}

}  // namespace bcsecrecy
