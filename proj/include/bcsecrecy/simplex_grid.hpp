#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "bcsecrecy/error.hpp"

namespace bcsecrecy {

/// Number of points of the lattice {p : p_i = k_i/steps, sum k_i = steps}
/// over `dims` coordinates, i.e. C(steps + dims - 1, dims - 1). Saturates at
/// uint64 max.
inline std::uint64_t simplex_grid_size(std::size_t dims, std::size_t steps) {
    if (dims == 0) return 0;
    // C(steps + dims - 1, dims - 1), built incrementally to stay exact.
    std::uint64_t c = 1;
    for (std::size_t i = 1; i < dims; ++i) {
        const std::uint64_t num = steps + i;
        if (c > std::numeric_limits<std::uint64_t>::max() / num) return std::numeric_limits<std::uint64_t>::max();
        c = c * num / i;
    }
    return c;
}

/// All probability vectors over `dims` symbols whose entries are multiples of
/// 1/steps, in lexicographic order of the integer counts (last coordinate
/// varies fastest).
inline std::vector<std::vector<double>> simplex_grid(std::size_t dims, std::size_t steps) {
    if (dims == 0 || steps == 0) throw Error(Errc::InvalidGrid, "simplex grid needs dims >= 1 and steps >= 1");
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(simplex_grid_size(dims, steps)));
    std::vector<std::size_t> counts(dims, 0);
    auto emit = [&] {
        std::vector<double> p(dims);
        for (std::size_t i = 0; i < dims; ++i) p[i] = static_cast<double>(counts[i]) / static_cast<double>(steps);
        out.push_back(std::move(p));
    };
    auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
        if (pos + 1 == dims) {
            counts[pos] = remaining;
            emit();
            return;
        }
        for (std::size_t k = 0; k <= remaining; ++k) {
            counts[pos] = k;
            self(self, pos + 1, remaining - k);
        }
    };
    rec(rec, 0, steps);
    return out;
}

/// Converts a grid resolution such as 0.05 into the integer step count 20.
/// Rejects resolutions that are not reciprocals of integers.
inline std::size_t resolution_steps(double resolution) {
    if (!(resolution > 0.0 && resolution <= 1.0))
        throw Error(Errc::InvalidGrid, "grid resolution must lie in (0, 1]");
    const double inv = 1.0 / resolution;
    const double r = std::round(inv);
    if (std::abs(inv - r) > 1e-6 * r)
        throw Error(Errc::InvalidGrid, "grid resolution must be the reciprocal of an integer");
    return static_cast<std::size_t>(r);
}

}  // namespace bcsecrecy
