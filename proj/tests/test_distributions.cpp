#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "bcsecrecy/bcsecrecy.hpp"

using namespace bcsecrecy;

TEST(Pmf, UniformBinaryIsValid) { EXPECT_TRUE(validate_pmf(Pmf{0.5, 0.5}).ok()); }

TEST(Pmf, SumAboveOneRejected) {
    auto v = validate_pmf(Pmf{0.5, 0.6});
    ASSERT_FALSE(v.ok());
    EXPECT_EQ(*v.error, Errc::SumNotOne);
    EXPECT_NE(v.message.find("1.1"), std::string::npos);
}

TEST(Pmf, NegativeEntryBeatsSumTolerance) {
    auto v = validate_pmf(Pmf{1.0, -1e-12});
    ASSERT_FALSE(v.ok());
    EXPECT_EQ(*v.error, Errc::NegativeEntry);
    EXPECT_NE(v.message.find("1"), std::string::npos);
}

TEST(Pmf, SumWithinToleranceAccepted) {
    EXPECT_TRUE(validate_pmf(Pmf{0.5, 0.5 + 5e-10}).ok());
    EXPECT_FALSE(validate_pmf(Pmf{0.5, 0.5 + 5e-9}).ok());
}

TEST(Pmf, EmptyRejected) { EXPECT_FALSE(validate_pmf(Pmf(std::vector<double>{})).ok()); }

TEST(Pmf, RequireValidThrowsWithCode) {
    try {
        require_valid(Pmf{0.2, 0.2});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidPmf);
    }
}

TEST(Pmf, Factories) {
    auto u = Pmf::uniform(4);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(u[i], 0.25);
    auto pm = Pmf::point_mass(3, 1);
    EXPECT_EQ(pm[0], 0.0);
    EXPECT_EQ(pm[1], 1.0);
    EXPECT_EQ(pm[2], 0.0);
}

TEST(Channel, RowValidation) {
    EXPECT_TRUE(validate_channel(DiscreteChannel::bsc(0.1)).ok());
    DiscreteChannel bad{{0.5, 0.4}, {0.5, 0.5}};
    auto v = validate_channel(bad);
    ASSERT_FALSE(v.ok());
    EXPECT_NE(v.message.find("row 0"), std::string::npos);
}

TEST(Channel, RaggedRowsRejected) {
    EXPECT_THROW(DiscreteChannel::from_rows({{1.0}, {0.5, 0.5}}), Error);
}

TEST(Channel, Factories) {
    auto id = DiscreteChannel::identity(3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(id(i, j), i == j ? 1.0 : 0.0);
    auto c = DiscreteChannel::constant(2, {0.3, 0.7});
    EXPECT_EQ(c(1, 1), 0.7);
    auto b = DiscreteChannel::bsc(0.2);
    EXPECT_DOUBLE_EQ(b(0, 1), 0.2);
    EXPECT_DOUBLE_EQ(b(1, 1), 0.8);
}

TEST(Broadcast, SliceMustSumToOne) {
    BroadcastChannel ok(1, 1, 1, 2, {0.5, 0.5});
    EXPECT_TRUE(validate_broadcast(ok).ok());
    BroadcastChannel bad(1, 1, 1, 2, {0.5, 0.6});
    EXPECT_FALSE(validate_broadcast(bad).ok());
    EXPECT_THROW(BroadcastChannel(1, 1, 1, 2, {1.0}), Error);
}

TEST(Joint, MarginalAndAxis) {
    JointPmf j({2, 3}, {0.1, 0.2, 0.1, 0.3, 0.2, 0.1}, {"A", "B"});
    EXPECT_EQ(j.axis("B"), 1u);
    auto ma = j.marginal({0});
    EXPECT_NEAR(ma.probs()[0], 0.4, 1e-15);
    EXPECT_NEAR(ma.probs()[1], 0.6, 1e-15);
    auto mba = j.marginal({1, 0});
    EXPECT_EQ(mba.shape(), (std::vector<std::size_t>{3, 2}));
    EXPECT_DOUBLE_EQ(mba.probs()[1], 0.3);
    EXPECT_THROW(j.axis("C"), Error);
}

TEST(Joint, Validation) {
    EXPECT_TRUE(validate_joint(JointPmf({2}, {0.5, 0.5})).ok());
    EXPECT_FALSE(validate_joint(JointPmf({2}, {0.5, 0.4})).ok());
    EXPECT_THROW(JointPmf({2, 2}, {1.0}), Error);
}

TEST(ChannelJson, MarginalsParse) {
    auto j = nlohmann::json::parse(R"({"type":"bcc-marginals","py1x":[[1,0],[0,1]],"py2x":[[0.9,0.1],[0.1,0.9]],
                                       "pzx":[[0.5,0.5],[0.5,0.5]]})");
    auto spec = parse_channel(j);
    auto m = discrete_marginals(spec);
    EXPECT_EQ(m.x_size(), 2u);
    EXPECT_DOUBLE_EQ(m.py2x(1, 0), 0.1);
}

TEST(ChannelJson, TinyNegativeClampedAtLoad) {
    auto j = nlohmann::json::parse(R"({"type":"bcc-marginals","py1x":[[1.0,-1e-13],[0,1]],"py2x":[[1,0],[0,1]],
                                       "pzx":[[1,0],[0,1]]})");
    auto m = discrete_marginals(parse_channel(j));
    EXPECT_EQ(m.py1x(0, 1), 0.0);
}

TEST(ChannelJson, RealNegativeRejected) {
    auto j = nlohmann::json::parse(R"({"type":"bcc-marginals","py1x":[[1.01,-0.01],[0,1]],"py2x":[[1,0],[0,1]],
                                       "pzx":[[1,0],[0,1]]})");
    try {
        parse_channel(j);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidChannel);
        EXPECT_NE(std::string(e.what()).find("py1x"), std::string::npos);
    }
}

TEST(ChannelJson, FullTensorAndGaussian) {
    auto j = nlohmann::json::parse(R"({"type":"bcc","x":2,"y1":1,"y2":1,"z":2,"joint":[0.25,0.75,1,0]})");
    auto spec = parse_channel(j);
    ASSERT_TRUE(std::holds_alternative<BroadcastChannel>(spec));
    auto m = discrete_marginals(spec);
    EXPECT_DOUBLE_EQ(m.pzx(0, 1), 0.75);

    auto g = parse_channel(nlohmann::json::parse(R"({"type":"awgn-bcc","power":1,"n1":0.25,"n2":0.5,"n3":1})"));
    ASSERT_TRUE(std::holds_alternative<GaussianParams>(g));
    EXPECT_THROW(discrete_marginals(g), Error);
}

TEST(ChannelJson, MalformedDocumentsNameTheProblem) {
    auto expect_msg = [](const char* doc, const char* needle) {
        try {
            parse_channel(nlohmann::json::parse(doc));
            ADD_FAILURE() << doc;
        } catch (const Error& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_msg(R"({"py1x":[[1]]})", "type");
    expect_msg(R"({"type":"bcc","x":2,"y1":1,"y2":1,"z":2,"joint":[1,0,1]})", "expected 4");
    expect_msg(R"({"type":"awgn-bcc","power":1,"n1":2,"n2":1,"n3":1})", "n1");
    expect_msg(R"({"type":"nope"})", "nope");
    expect_msg(R"({"type":"bcc-marginals","py1x":[[1,0]],"py2x":[[1,0],[0,1]],"pzx":[[1]]})", "rows");
}
