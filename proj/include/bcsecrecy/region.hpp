#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

#include "bcsecrecy/channels.hpp"
#include "bcsecrecy/frontier.hpp"
#include "bcsecrecy/information.hpp"
#include "bcsecrecy/simplex_grid.hpp"

// Grid search over auxiliary distributions for the discrete secrecy regions:
// the degraded-channel region (auxiliary U, superposition) and the general
// inner bound (auxiliaries V1, V2, double binning).

namespace bcsecrecy {

/// Auxiliary-variable grid. Cardinalities default to |X|.
struct AuxGridSpec {
    std::size_t u_card = 2;
    std::size_t v1_card = 2;
    std::size_t v2_card = 2;
    double resolution = 0.05;
    bool deterministic_x = true;
    std::uint64_t budget = 5'000'000;
    std::size_t max_card = 8;

    static AuxGridSpec for_input(std::size_t x_size) {
        AuxGridSpec g;
        g.u_card = g.v1_card = g.v2_card = x_size;
        return g;
    }
};

inline std::size_t validate_grid(const AuxGridSpec& g) {
    const std::size_t steps = resolution_steps(g.resolution);
    for (std::size_t c : {g.u_card, g.v1_card, g.v2_card})
        if (c < 1 || c > g.max_card)
            throw Error(Errc::InvalidGrid, "auxiliary cardinality " + std::to_string(c) + " outside [1, " +
                                               std::to_string(g.max_card) + "]");
    return steps;
}

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
    return a * b;
}

inline std::uint64_t saturating_pow(std::uint64_t base, std::size_t exp) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) r = saturating_mul(r, base);
    return r;
}

inline void check_budget(std::uint64_t candidates, std::uint64_t budget) {
    if (candidates > budget)
        throw Error(Errc::GridTooLarge, std::to_string(candidates) + " candidates exceed the budget of " +
                                            std::to_string(budget));
}

/// Odometer over `digits` positions each in [0, base).
inline bool advance(std::vector<std::size_t>& digits, std::size_t base) {
    for (std::size_t d = digits.size(); d-- > 0;) {
        if (++digits[d] < base) return true;
        digits[d] = 0;
    }
    return false;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Degraded channel region, auxiliary U with P(u) P(x|u).

/// Information quantities behind one degraded-region candidate and the
/// resulting unclamped bounds.
struct DegradedTerms {
    double i_x_y1_given_u = 0.0;
    double i_u_y2 = 0.0;
    double i_u_z = 0.0;
    double i_x_z = 0.0;

    double r1_bound() const { return i_x_y1_given_u + i_u_z - i_x_z; }
    double r2_bound() const { return i_u_y2 - i_u_z; }
    RatePoint clamped() const { return {std::max(r1_bound(), 0.0), std::max(r2_bound(), 0.0)}; }
};

inline DegradedTerms degraded_terms(const BroadcastMarginals& m, const Pmf& pu, const DiscreteChannel& pxu) {
    require_valid(m);
    require_valid(pu);
    require_valid(pxu);
    if (pu.size() != pxu.input_size() || pxu.output_size() != m.x_size())
        throw Error(Errc::DimensionMismatch, "P(u) / P(x|u) do not match the channel alphabets");
    DegradedTerms t;
    std::vector<double> px(m.x_size(), 0.0);
    for (std::size_t u = 0; u < pu.size(); ++u) {
        if (pu[u] == 0.0) continue;
        t.i_x_y1_given_u += pu[u] * detail::mutual_information(pxu.row(u), m.py1x);
        for (std::size_t x = 0; x < px.size(); ++x) px[x] += pu[u] * pxu(u, x);
    }
    t.i_u_y2 = detail::mutual_information(pu.probs(), cascade(pxu, m.py2x));
    t.i_u_z = detail::mutual_information(pu.probs(), cascade(pxu, m.pzx));
    t.i_x_z = detail::mutual_information(px, m.pzx);
    return t;
}

/// Every clamped candidate point of the degraded region on the grid, in
/// enumeration order (P(x|u) rows outer, P(u) inner).
inline std::vector<RatePoint> degraded_region_points(const BroadcastMarginals& m, const AuxGridSpec& grid) {
    require_valid(m);
    const std::size_t steps = validate_grid(grid);
    const std::size_t nu = grid.u_card;
    const auto u_grid = simplex_grid(nu, steps);
    const auto x_grid = simplex_grid(m.x_size(), steps);
    detail::check_budget(detail::saturating_mul(u_grid.size(), detail::saturating_pow(x_grid.size(), nu)), grid.budget);

    // Per candidate row r = P(x|u): the Y1 information and the Y2 / Z output laws.
    struct RowCache {
        double i_y1;
        std::vector<double> y2, z;
        double h_y2, h_z;
    };
    std::vector<RowCache> cache;
    cache.reserve(x_grid.size());
    for (const auto& r : x_grid) {
        RowCache c;
        c.i_y1 = detail::mutual_information(r, m.py1x);
        c.y2 = detail::output_distribution(r, m.py2x);
        c.z = detail::output_distribution(r, m.pzx);
        c.h_y2 = detail::entropy_bits(c.y2);
        c.h_z = detail::entropy_bits(c.z);
        cache.push_back(std::move(c));
    }
    std::vector<double> h_z_given_x(m.x_size());
    for (std::size_t x = 0; x < m.x_size(); ++x) h_z_given_x[x] = detail::entropy_bits(m.pzx.row(x));

    std::vector<RatePoint> out;
    out.reserve(u_grid.size() * std::min<std::size_t>(x_grid.size(), 1u << 16));
    std::vector<std::size_t> rows(nu, 0);
    std::vector<double> y2(m.py2x.output_size()), z(m.pzx.output_size()), px(m.x_size());
    do {
        for (const auto& pu : u_grid) {
            std::fill(y2.begin(), y2.end(), 0.0);
            std::fill(z.begin(), z.end(), 0.0);
            std::fill(px.begin(), px.end(), 0.0);
            double i_x_y1_u = 0.0, h_y2_u = 0.0, h_z_u = 0.0;
            for (std::size_t u = 0; u < nu; ++u) {
                const double w = pu[u];
                if (w == 0.0) continue;
                const auto& c = cache[rows[u]];
                i_x_y1_u += w * c.i_y1;
                h_y2_u += w * c.h_y2;
                h_z_u += w * c.h_z;
                for (std::size_t k = 0; k < y2.size(); ++k) y2[k] += w * c.y2[k];
                for (std::size_t k = 0; k < z.size(); ++k) z[k] += w * c.z[k];
                const auto& r = x_grid[rows[u]];
                for (std::size_t x = 0; x < px.size(); ++x) px[x] += w * r[x];
            }
            double h_z_x = 0.0;
            for (std::size_t x = 0; x < px.size(); ++x) h_z_x += px[x] * h_z_given_x[x];
            const double h_z = detail::entropy_bits(z);
            DegradedTerms t;
            t.i_x_y1_given_u = i_x_y1_u;
            t.i_u_y2 = std::max(detail::entropy_bits(y2) - h_y2_u, 0.0);
            t.i_u_z = std::max(h_z - h_z_u, 0.0);
            t.i_x_z = std::max(h_z - h_z_x, 0.0);
            out.push_back(t.clamped());
        }
    } while (detail::advance(rows, x_grid.size()));
    return out;
}

/// Convex hull of all grid candidates of the degraded secrecy region.
inline RegionFrontier degraded_region_inner(const DiscreteChannel& py1x, const DiscreteChannel& py2x,
                                            const DiscreteChannel& pzx, const AuxGridSpec& grid) {
    const auto pts = degraded_region_points({py1x, py2x, pzx}, grid);
    return upper_right_hull(pts);
}

// ---------------------------------------------------------------------------
// General inner bound, auxiliaries (V1, V2) with P(v1, v2) P(x|v1, v2).

/// Information quantities for one general-bound candidate.
struct GeneralTerms {
    double i_v1_y1 = 0.0;
    double i_v2_y2 = 0.0;
    double i_v1_z = 0.0;
    double i_v2_z = 0.0;
    double i_v12_z = 0.0;
    double i_v1_v2 = 0.0;

    double r1_bound() const { return i_v1_y1 - i_v1_z; }
    double r2_bound() const { return i_v2_y2 - i_v2_z; }
    double sum_bound() const { return i_v1_y1 + i_v2_y2 - i_v12_z - i_v1_v2; }
};

/// The two dominant corners of {r1 <= a, r2 <= b, r1 + r2 <= s} after
/// clamping each bound at zero.
inline std::array<RatePoint, 2> pentagon_corners(double a, double b, double s) {
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    s = std::max(s, 0.0);
    const double ma = std::min(a, s), mb = std::min(b, s);
    return {RatePoint{ma, std::min(b, s - ma)}, RatePoint{std::min(a, s - mb), mb}};
}

namespace detail {

/// P(v1, v2) flattened as v1 * n2 + v2; `pxv` rows use the same index.
inline GeneralTerms general_terms_unchecked(const BroadcastMarginals& m, std::span<const double> pv,
                                            std::size_t n1, std::size_t n2,
                                            const std::vector<std::vector<double>>& y1_given_v,
                                            const std::vector<std::vector<double>>& y2_given_v,
                                            const std::vector<std::vector<double>>& z_given_v) {
    const std::size_t ny1 = m.py1x.output_size(), ny2 = m.py2x.output_size(), nz = m.pzx.output_size();
    std::vector<double> j1(n1 * ny1, 0.0), j2(n2 * ny2, 0.0), jz1(n1 * nz, 0.0), jz2(n2 * nz, 0.0),
        jz12(n1 * n2 * nz, 0.0);
    for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < n2; ++b) {
            const std::size_t v = a * n2 + b;
            const double w = pv[v];
            if (w == 0.0) continue;
            for (std::size_t y = 0; y < ny1; ++y) j1[a * ny1 + y] += w * y1_given_v[v][y];
            for (std::size_t y = 0; y < ny2; ++y) j2[b * ny2 + y] += w * y2_given_v[v][y];
            for (std::size_t z = 0; z < nz; ++z) {
                const double p = w * z_given_v[v][z];
                jz1[a * nz + z] += p;
                jz2[b * nz + z] += p;
                jz12[v * nz + z] = p;
            }
        }
    GeneralTerms t;
    t.i_v1_y1 = mi_from_joint(j1, n1, ny1);
    t.i_v2_y2 = mi_from_joint(j2, n2, ny2);
    t.i_v1_z = mi_from_joint(jz1, n1, nz);
    t.i_v2_z = mi_from_joint(jz2, n2, nz);
    t.i_v12_z = mi_from_joint(jz12, n1 * n2, nz);
    t.i_v1_v2 = mi_from_joint(pv, n1, n2);
    return t;
}

inline std::vector<std::vector<double>> compose_rows(const std::vector<std::vector<double>>& pxv,
                                                     const DiscreteChannel& ch) {
    std::vector<std::vector<double>> out;
    out.reserve(pxv.size());
    for (const auto& r : pxv) out.push_back(output_distribution(r, ch));
    return out;
}

/// Enumerates P(x|v) tables over `nv` auxiliary symbols: deterministic maps
/// (as one-hot rows) or rows drawn from the x-simplex grid.
template <class Fn>
void for_each_x_map(std::size_t nv, std::size_t nx, bool deterministic, std::size_t steps, Fn&& fn) {
    const auto rows = deterministic ? std::vector<std::vector<double>>{} : simplex_grid(nx, steps);
    const std::size_t base = deterministic ? nx : rows.size();
    std::vector<std::size_t> digits(nv, 0);
    std::vector<std::vector<double>> table(nv, std::vector<double>(nx, 0.0));
    do {
        for (std::size_t v = 0; v < nv; ++v) {
            if (deterministic) {
                std::fill(table[v].begin(), table[v].end(), 0.0);
                table[v][digits[v]] = 1.0;
            } else {
                table[v] = rows[digits[v]];
            }
        }
        fn(static_cast<const std::vector<std::vector<double>>&>(table));
    } while (advance(digits, base));
}

inline std::uint64_t x_map_count(std::size_t nv, std::size_t nx, bool deterministic, std::size_t steps) {
    const std::uint64_t base = deterministic ? nx : simplex_grid_size(nx, steps);
    return saturating_pow(base, nv);
}

}  // namespace detail

inline GeneralTerms general_terms(const BroadcastMarginals& m, const JointPmf& pv1v2, const DiscreteChannel& pxv) {
    require_valid(m);
    require_valid(pv1v2);
    require_valid(pxv);
    if (pv1v2.rank() != 2) throw Error(Errc::InvalidJoint, "P(v1, v2) must have two axes");
    const std::size_t n1 = pv1v2.shape()[0], n2 = pv1v2.shape()[1];
    if (pxv.input_size() != n1 * n2 || pxv.output_size() != m.x_size())
        throw Error(Errc::DimensionMismatch, "P(x|v1,v2) must have |V1||V2| rows and |X| columns");
    const auto rows = pxv.rows();
    return detail::general_terms_unchecked(m, pv1v2.probs(), n1, n2, detail::compose_rows(rows, m.py1x),
                                           detail::compose_rows(rows, m.py2x), detail::compose_rows(rows, m.pzx));
}

/// Pentagon corners of every grid candidate of the general inner bound.
inline std::vector<RatePoint> general_inner_points(const BroadcastMarginals& m, const AuxGridSpec& grid) {
    require_valid(m);
    const std::size_t steps = validate_grid(grid);
    const std::size_t n1 = grid.v1_card, n2 = grid.v2_card, nv = n1 * n2;
    const std::uint64_t maps = detail::x_map_count(nv, m.x_size(), grid.deterministic_x, steps);
    detail::check_budget(detail::saturating_mul(simplex_grid_size(nv, steps), maps), grid.budget);
    const auto v_grid = simplex_grid(nv, steps);

    std::vector<RatePoint> out;
    detail::for_each_x_map(nv, m.x_size(), grid.deterministic_x, steps, [&](const auto& pxv) {
        const auto y1v = detail::compose_rows(pxv, m.py1x);
        const auto y2v = detail::compose_rows(pxv, m.py2x);
        const auto zv = detail::compose_rows(pxv, m.pzx);
        for (const auto& pv : v_grid) {
            const auto t = detail::general_terms_unchecked(m, pv, n1, n2, y1v, y2v, zv);
            const auto corners = pentagon_corners(t.r1_bound(), t.r2_bound(), t.sum_bound());
            out.push_back(corners[0]);
            if (!(corners[1] == corners[0])) out.push_back(corners[1]);
        }
    });
    return out;
}

inline RegionFrontier general_inner_bound(const DiscreteChannel& py1x, const DiscreteChannel& py2x,
                                          const DiscreteChannel& pzx, const AuxGridSpec& grid) {
    const auto pts = general_inner_points({py1x, py2x, pzx}, grid);
    return upper_right_hull(pts);
}

/// max over gridded P(v), P(x|v) of I(V;Y) - I(V;Z), clamped at zero. Uses
/// grid.v1_card for |V| and grid.deterministic_x for the map family; the
/// deterministic family contains the identity embedding V = X.
inline double wiretap_secrecy_capacity(const DiscreteChannel& main, const DiscreteChannel& eve,
                                       const AuxGridSpec& grid) {
    require_valid(main);
    require_valid(eve);
    if (main.input_size() != eve.input_size())
        throw Error(Errc::DimensionMismatch, "main and eavesdropper channels need a shared input alphabet");
    const std::size_t steps = validate_grid(grid);
    const std::size_t nv = grid.v1_card, nx = main.input_size();
    detail::check_budget(detail::saturating_mul(simplex_grid_size(nv, steps),
                                                detail::x_map_count(nv, nx, grid.deterministic_x, steps)),
                         grid.budget);
    const auto v_grid = simplex_grid(nv, steps);
    double best = 0.0;
    detail::for_each_x_map(nv, nx, grid.deterministic_x, steps, [&](const auto& pxv) {
        const auto yv = detail::compose_rows(pxv, main);
        const auto zv = detail::compose_rows(pxv, eve);
        std::vector<double> y(main.output_size()), z(eve.output_size());
        std::vector<double> h_yv(nv), h_zv(nv);
        for (std::size_t v = 0; v < nv; ++v) {
            h_yv[v] = detail::entropy_bits(yv[v]);
            h_zv[v] = detail::entropy_bits(zv[v]);
        }
        for (const auto& pv : v_grid) {
            std::fill(y.begin(), y.end(), 0.0);
            std::fill(z.begin(), z.end(), 0.0);
            double hy = 0.0, hz = 0.0;
            for (std::size_t v = 0; v < nv; ++v) {
                if (pv[v] == 0.0) continue;
                for (std::size_t k = 0; k < y.size(); ++k) y[k] += pv[v] * yv[v][k];
                for (std::size_t k = 0; k < z.size(); ++k) z[k] += pv[v] * zv[v][k];
                hy += pv[v] * h_yv[v];
                hz += pv[v] * h_zv[v];
            }
            const double i_vy = std::max(detail::entropy_bits(y) - hy, 0.0);
            const double i_vz = std::max(detail::entropy_bits(z) - hz, 0.0);
            best = std::max(best, i_vy - i_vz);
        }
    });
    return best;
}

}  // namespace bcsecrecy
