#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace bcsecrecy;

namespace {

constexpr double kWiretapBsc = 0.25293250129808112662;  // h2(0.2) - h2(0.1)

AuxGridSpec grid(double res, std::size_t card = 2) {
    AuxGridSpec g;
    g.u_card = g.v1_card = g.v2_card = card;
    g.resolution = res;
    return g;
}

void expect_frontier_near(const RegionFrontier& a, const RegionFrontier& b, double tol) {
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        EXPECT_NEAR(a.points[i].r1, b.points[i].r1, tol) << i;
        EXPECT_NEAR(a.points[i].r2, b.points[i].r2, tol) << i;
    }
}

// Pareto and convex-position checks for a hulled frontier.
void expect_valid_frontier(const RegionFrontier& f) {
    ASSERT_FALSE(f.points.empty());
    for (std::size_t i = 0; i < f.points.size(); ++i) {
        EXPECT_GE(f.points[i].r1, 0.0);
        EXPECT_GE(f.points[i].r2, 0.0);
        for (std::size_t j = 0; j < f.points.size(); ++j) {
            if (i == j) continue;
            const auto &p = f.points[i], &q = f.points[j];
            EXPECT_FALSE(q.r1 >= p.r1 && q.r2 >= p.r2 && (q.r1 > p.r1 || q.r2 > p.r2));
        }
    }
    if (!f.hulled) return;
    // with (0, max r2) prepended and (max r1, 0) appended, every turn is strictly clockwise
    std::vector<RatePoint> chain{{0.0, f.max_r2()}};
    chain.insert(chain.end(), f.points.begin(), f.points.end());
    chain.push_back({f.max_r1(), 0.0});
    for (std::size_t i = 1; i + 1 < chain.size(); ++i) {
        const auto &a = chain[i - 1], &b = chain[i], &c = chain[i + 1];
        if ((a == b) || (b == c)) continue;
        const double cross = (b.r1 - a.r1) * (c.r2 - a.r2) - (b.r2 - a.r2) * (c.r1 - a.r1);
        EXPECT_LT(cross, 0.0) << i;
    }
}

const DiscreteChannel kY1 = DiscreteChannel::bsc(0.05);
const DiscreteChannel kY2 = cascade(kY1, DiscreteChannel::bsc(0.1));
const DiscreteChannel kZ = cascade(kY2, DiscreteChannel::bsc(0.15));

}  // namespace

TEST(SimplexGrid, SizesAndEntries) {
    EXPECT_EQ(simplex_grid_size(2, 20), 21u);
    EXPECT_EQ(simplex_grid_size(3, 4), 15u);
    auto g = simplex_grid(3, 4);
    ASSERT_EQ(g.size(), 15u);
    for (const auto& p : g) {
        double s = 0;
        for (double v : p) s += v;
        EXPECT_NEAR(s, 1.0, 1e-15);
    }
    EXPECT_EQ(g.front(), (std::vector<double>{0, 0, 1}));
    EXPECT_EQ(g.back(), (std::vector<double>{1, 0, 0}));
    EXPECT_EQ(resolution_steps(0.05), 20u);
    EXPECT_EQ(resolution_steps(1.0), 1u);
    EXPECT_THROW(resolution_steps(0.3), Error);
    EXPECT_THROW(resolution_steps(0.0), Error);
}

TEST(Hull, Examples) {
    std::vector<RatePoint> a{{1, 0}, {0, 1}};
    auto fa = upper_right_hull(a);
    ASSERT_EQ(fa.points.size(), 2u);
    EXPECT_EQ(fa.points[0], (RatePoint{0, 1}));
    EXPECT_EQ(fa.points[1], (RatePoint{1, 0}));
    EXPECT_TRUE(fa.hulled);

    std::vector<RatePoint> b{{1, 1}, {0.5, 0.5}};
    auto fb = upper_right_hull(b);
    ASSERT_EQ(fb.points.size(), 1u);
    EXPECT_EQ(fb.points[0], (RatePoint{1, 1}));

    std::vector<RatePoint> c{{2, 0}, {0, 2}, {0.9, 0.9}};
    auto fc = upper_right_hull(c);
    ASSERT_EQ(fc.points.size(), 2u);
    EXPECT_EQ(fc.points[0], (RatePoint{0, 2}));
    EXPECT_EQ(fc.points[1], (RatePoint{2, 0}));

    std::vector<RatePoint> d{{2, 0}, {0, 2}, {1.1, 1.1}};
    EXPECT_EQ(upper_right_hull(d).points.size(), 3u);
}

TEST(Hull, EmptyInput) {
    std::vector<RatePoint> none;
    try {
        upper_right_hull(none);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EmptyInput);
    }
    EXPECT_THROW(pareto_filter(none), Error);
}

TEST(Hull, RandomPointClouds) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        std::vector<RatePoint> pts(1 + rng() % 40);
        for (auto& p : pts) p = {u(rng), u(rng)};
        auto f = upper_right_hull(pts);
        expect_valid_frontier(f);
        // every input lies under the hull: below each supporting line
        for (const auto& p : pts) {
            bool under = false;
            for (std::size_t i = 0; i + 1 < f.points.size() && !under; ++i) {
                const auto &a = f.points[i], &b = f.points[i + 1];
                if (p.r1 >= a.r1 && p.r1 <= b.r1) {
                    const double y = a.r2 + (b.r2 - a.r2) * (p.r1 - a.r1) / (b.r1 - a.r1);
                    under = p.r2 <= y + 1e-12;
                }
            }
            if (f.points.size() == 1 || p.r1 <= f.points.front().r1) under = under || p.r2 <= f.points.front().r2 + 1e-12;
            EXPECT_TRUE(under);
        }
    }
}

TEST(Pentagon, Corners) {
    auto c = pentagon_corners(1.0, 1.0, 1.5);
    EXPECT_EQ(c[0], (RatePoint{1.0, 0.5}));
    EXPECT_EQ(c[1], (RatePoint{0.5, 1.0}));
    auto d = pentagon_corners(1.0, 1.0, 3.0);
    EXPECT_EQ(d[0], (RatePoint{1.0, 1.0}));
    EXPECT_EQ(d[1], (RatePoint{1.0, 1.0}));
    auto e = pentagon_corners(-0.2, 0.4, -1.0);
    EXPECT_EQ(e[0], (RatePoint{0.0, 0.0}));
    EXPECT_EQ(e[1], (RatePoint{0.0, 0.0}));
}

TEST(DegradedRegion, MatchesOracleOnCascade) {
    const auto g = grid(0.05);
    const auto lib = degraded_region_points({kY1, kY2, kZ}, g);
    const auto ref = oracle::degraded_points(kY1, kY2, kZ, 2, 20);
    ASSERT_EQ(lib.size(), ref.size());
    for (std::size_t i = 0; i < lib.size(); ++i) {
        EXPECT_NEAR(lib[i].r1, ref[i].r1, 1e-12);
        EXPECT_NEAR(lib[i].r2, ref[i].r2, 1e-12);
    }
    const auto f = degraded_region_inner(kY1, kY2, kZ, g);
    expect_valid_frontier(f);
    expect_frontier_near(f, upper_right_hull(ref), 1e-12);
}

TEST(DegradedRegion, EavesdropperAsStrongAsReceiverOne) {
    const auto f = degraded_region_inner(kY1, kY2, kY1, grid(0.05));
    ASSERT_EQ(f.points.size(), 1u);
    EXPECT_NEAR(f.points[0].r1, 0.0, 1e-12);
    EXPECT_NEAR(f.points[0].r2, 0.0, 1e-12);
}

TEST(DegradedRegion, UninformativeEavesdropperGivesBroadcastRegion) {
    const auto z = DiscreteChannel::constant(2, {0.3, 0.7});
    const auto g = grid(0.1);
    const auto pts = degraded_region_points({kY1, kY2, z}, g);
    // classical degraded BC: R1 <= I(X;Y1|U), R2 <= I(U;Y2), same enumeration
    const auto u_grid = simplex_grid(2, 10), x_grid = simplex_grid(2, 10);
    std::size_t i = 0;
    for (const auto& r0 : x_grid)
        for (const auto& r1 : x_grid)
            for (const auto& pu : u_grid) {
                DiscreteChannel pxu = DiscreteChannel::from_rows({r0, r1});
                Pmf p(pu);
                double ixy1u = 0;
                for (std::size_t u = 0; u < 2; ++u) ixy1u += pu[u] * mutual_information(Pmf(pxu.rows()[u]), kY1);
                const double iuy2 = mutual_information(p, cascade(pxu, kY2));
                ASSERT_LT(i, pts.size());
                EXPECT_NEAR(pts[i].r1, ixy1u, 1e-12);
                EXPECT_NEAR(pts[i].r2, iuy2, 1e-12);
                ++i;
            }
    EXPECT_EQ(i, pts.size());
}

TEST(DegradedRegion, RelabelingInvariance) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 5; ++t) {
        auto a = oracle::random_channel(rng, 3, 2), b = oracle::random_channel(rng, 3, 3), c = oracle::random_channel(rng, 3, 2);
        auto permute = [](const DiscreteChannel& ch) {
            return DiscreteChannel::from_rows({ch.rows()[2], ch.rows()[0], ch.rows()[1]});
        };
        AuxGridSpec g = grid(0.25);
        auto f = degraded_region_inner(a, b, c, g);
        auto h = degraded_region_inner(permute(a), permute(b), permute(c), g);
        expect_frontier_near(f, h, 1e-12);
        expect_valid_frontier(f);
    }
}

TEST(DegradedRegion, ClampSoundness) {
    std::mt19937_64 rng(23);
    auto a = oracle::random_channel(rng, 2, 2), b = oracle::random_channel(rng, 2, 2), c = oracle::random_channel(rng, 2, 2);
    BroadcastMarginals m{a, b, c};
    const auto pts = degraded_region_points(m, grid(0.1));
    const auto xg = simplex_grid(2, 10), ug = simplex_grid(2, 10);
    std::size_t i = 0;
    for (const auto& r0 : xg)
        for (const auto& r1 : xg)
            for (const auto& pu : ug) {
                const auto t = degraded_terms(m, Pmf(pu), DiscreteChannel::from_rows({r0, r1}));
                EXPECT_NEAR(pts[i].r1, std::max(t.r1_bound(), 0.0), 1e-12);
                EXPECT_NEAR(pts[i].r2, std::max(t.r2_bound(), 0.0), 1e-12);
                ++i;
            }
}

TEST(DegradedRegion, Errors) {
    EXPECT_THROW(degraded_region_inner(kY1, DiscreteChannel::identity(3), kZ, grid(0.1)), Error);
    try {
        degraded_region_inner(kY1, kY2, kZ, grid(0.3));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidGrid);
    }
    AuxGridSpec big = grid(0.01, 4);
    try {
        degraded_region_inner(kY1, kY2, kZ, big);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GridTooLarge);
        EXPECT_TRUE(e.is_budget());
    }
    AuxGridSpec zero = grid(0.1, 0);
    EXPECT_THROW(degraded_region_inner(kY1, kY2, kZ, zero), Error);
}

TEST(GeneralBound, MartonReduction) {
    std::mt19937_64 rng(31);
    const auto py1 = oracle::random_channel(rng, 2, 2), py2 = oracle::random_channel(rng, 2, 2);
    const auto z = DiscreteChannel::constant(2, {0.5, 0.5});
    const auto g = grid(0.1);
    const auto lib = general_inner_bound(py1, py2, z, g);
    const auto ref = upper_right_hull(oracle::marton_points(py1, py2, 2, 2, 10));
    expect_frontier_near(lib, ref, 1e-12);
    expect_valid_frontier(lib);
}

TEST(GeneralBound, WiretapReduction) {
    const auto main = DiscreteChannel::bsc(0.1), eve = DiscreteChannel::bsc(0.2);
    const auto silent = DiscreteChannel::constant(2, {0.5, 0.5});
    const auto g = grid(0.1);
    const auto f = general_inner_bound(main, silent, eve, g);
    EXPECT_NEAR(f.max_r1(), wiretap_secrecy_capacity(main, eve, g), 1e-12);
}

TEST(GeneralBound, ContainedInDegradedRegion) {
    const auto g = grid(0.1);
    const auto gen = general_inner_bound(kY1, kY2, kZ, g);
    const auto deg = degraded_region_inner(kY1, kY2, kZ, g);
    // each general-bound vertex lies under the degraded frontier
    for (const auto& p : gen.points) {
        double best = -1.0;
        for (std::size_t i = 0; i + 1 < deg.points.size(); ++i) {
            const auto &a = deg.points[i], &b = deg.points[i + 1];
            if (p.r1 >= a.r1 - 1e-12 && p.r1 <= b.r1 + 1e-12) {
                const double y = b.r1 == a.r1 ? std::max(a.r2, b.r2) : a.r2 + (b.r2 - a.r2) * (p.r1 - a.r1) / (b.r1 - a.r1);
                best = std::max(best, y);
            }
        }
        if (p.r1 <= deg.points.front().r1) best = std::max(best, deg.points.front().r2);
        EXPECT_LE(p.r2, best + 1e-9) << p.r1 << "," << p.r2;
    }
}

TEST(GeneralBound, StochasticMapsIncludeDeterministic) {
    auto g = grid(0.5);
    g.v1_card = g.v2_card = 1;
    g.deterministic_x = false;
    const auto f = general_inner_bound(kY1, kY2, DiscreteChannel::bsc(0.4), g);
    expect_valid_frontier(f);
    // |V1| = |V2| = 1 carries no information
    ASSERT_EQ(f.points.size(), 1u);
    EXPECT_NEAR(f.points[0].r1, 0.0, 1e-15);
}

TEST(GeneralBound, BudgetExceeded) {
    auto g = grid(0.05, 3);
    try {
        general_inner_bound(kY1, kY2, kZ, g);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::GridTooLarge);
    }
}

TEST(GeneralTerms, DirectEvaluation) {
    // V1 = X1, V2 = X2 for a two-bit input; Y1 sees bit 1, Y2 bit 2, Z sees their xor
    std::vector<std::vector<double>> y1(4), y2(4), z(4);
    for (std::size_t x = 0; x < 4; ++x) {
        y1[x] = {x / 2 == 0 ? 1.0 : 0.0, x / 2 == 0 ? 0.0 : 1.0};
        y2[x] = {x % 2 == 0 ? 1.0 : 0.0, x % 2 == 0 ? 0.0 : 1.0};
        const bool par = (x / 2) != (x % 2);
        z[x] = {par ? 0.0 : 1.0, par ? 1.0 : 0.0};
    }
    BroadcastMarginals m{DiscreteChannel::from_rows(y1), DiscreteChannel::from_rows(y2), DiscreteChannel::from_rows(z)};
    JointPmf pv({2, 2}, {0.25, 0.25, 0.25, 0.25}, {"V1", "V2"});
    const auto t = general_terms(m, pv, DiscreteChannel::identity(4));
    EXPECT_NEAR(t.i_v1_y1, 1.0, 1e-15);
    EXPECT_NEAR(t.i_v2_y2, 1.0, 1e-15);
    EXPECT_NEAR(t.i_v1_z, 0.0, 1e-15);
    EXPECT_NEAR(t.i_v12_z, 1.0, 1e-15);
    EXPECT_NEAR(t.i_v1_v2, 0.0, 1e-15);
    EXPECT_NEAR(t.sum_bound(), 1.0, 1e-15);
}

TEST(Wiretap, Examples) {
    const auto g = grid(0.01);
    EXPECT_NEAR(wiretap_secrecy_capacity(DiscreteChannel::bsc(0.1), DiscreteChannel::bsc(0.2), g), kWiretapBsc, 2e-3);
    EXPECT_EQ(wiretap_secrecy_capacity(DiscreteChannel::bsc(0.1), DiscreteChannel::bsc(0.1), g), 0.0);
    EXPECT_NEAR(wiretap_secrecy_capacity(DiscreteChannel::constant(2, {0.4, 0.6}), DiscreteChannel::bsc(0.3), g), 0.0, 1e-15);
    EXPECT_THROW(wiretap_secrecy_capacity(DiscreteChannel::bsc(0.1), DiscreteChannel::identity(3), g), Error);
}

TEST(Wiretap, MatchesBruteForceOnCoarseGrid) {
    const auto main = DiscreteChannel::bsc(0.1), eve = DiscreteChannel::bsc(0.2);
    double best = 0;
    for (const auto& pv : simplex_grid(2, 20))
        for (std::size_t f0 = 0; f0 < 2; ++f0)
            for (std::size_t f1 = 0; f1 < 2; ++f1) {
                DiscreteChannel map = DiscreteChannel::from_rows({f0 ? std::vector<double>{0, 1} : std::vector<double>{1, 0},
                                                                  f1 ? std::vector<double>{0, 1} : std::vector<double>{1, 0}});
                const double d = double(oracle::channel_mi(pv, cascade(map, main)) - oracle::channel_mi(pv, cascade(map, eve)));
                best = std::max(best, d);
            }
    EXPECT_NEAR(wiretap_secrecy_capacity(main, eve, grid(0.05)), best, 1e-12);
}
