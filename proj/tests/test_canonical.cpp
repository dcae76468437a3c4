#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "relunet/canonical.hpp"
#include "relunet/constructor.hpp"
#include "relunet/targets.hpp"

using namespace relunet;

namespace {

Network single(double a, double xi, double b) {
    Network net(1, 0.0);
    net.add_unit(a, xi, b);
    return net;
}

double max_gap(const Network& net, const CanonicalNetwork& c, std::size_t n) {
    return oracle::grid_sup([&](double x) { return evaluate(net, x); },
                            [&](double x) { return evaluate_canonical(c, x); }, c.length, n);
}

}  // namespace

TEST(Fold, ForwardRescale) {
    const auto c = fold_to_canonical(single(2, 1, 1), 1.0);
    ASSERT_EQ(c.forward.size(), 1u);
    EXPECT_EQ(c.forward[0], (Breakpoint{0.5, 2.0}));
    EXPECT_TRUE(c.backward.empty());
    EXPECT_EQ(c.const_term, 0.0);
}

TEST(Fold, LeftOfDomainBecomesAffine) {
    const auto c = fold_to_canonical(single(1, -0.5, 2), 1.0);
    EXPECT_TRUE(c.forward.empty());
    EXPECT_EQ(c.const_term, 1.0);
    EXPECT_EQ(c.slope_pos, 2.0);
}

TEST(Fold, DeadBackwardUnitDropped) {
    const auto c = fold_to_canonical(single(-2, 1, 1), 1.0);
    EXPECT_TRUE(c.forward.empty());
    EXPECT_TRUE(c.backward.empty());
    EXPECT_EQ(c.const_term, 0.0);
    EXPECT_EQ(c.slope_pos, 0.0);
    EXPECT_EQ(c.slope_neg, 0.0);
}

TEST(Fold, RemainingCases) {
    // a > 0, t > L: zero on [0, L].
    auto c = fold_to_canonical(single(1, 2, 5), 1.0);
    EXPECT_EQ(c, (CanonicalNetwork{1.0, 0.0, 0.0, 0.0, {}, {}}));
    // a < 0, t > L: relu(-x + 3) = 2 + relu(1 - x) on [0, 1].
    c = fold_to_canonical(single(-1, -3, 1), 1.0);
    EXPECT_EQ(c.const_term, 2.0);
    EXPECT_EQ(c.slope_neg, 1.0);
    // a < 0, t in range.
    c = fold_to_canonical(single(-4, -2, 0.5), 1.0);
    ASSERT_EQ(c.backward.size(), 1u);
    EXPECT_EQ(c.backward[0], (Breakpoint{0.5, 2.0}));
    // Degenerate a: b relu(-xi) constant.
    c = fold_to_canonical(single(1e-13, -0.25, 4), 1.0);
    EXPECT_EQ(c.const_term, 1.0);
    EXPECT_TRUE(c.forward.empty());
    // Closed interval: kinks at 0 and L stay in range.
    c = fold_to_canonical(single(1, 0, 1), 1.0);
    EXPECT_EQ(c.forward.size(), 1u);
    c = fold_to_canonical(single(-1, -1, 1), 1.0);
    EXPECT_EQ(c.backward.size(), 1u);
}

TEST(Fold, DimensionError) {
    EXPECT_THROW(fold_to_canonical(Network(2), 1.0), DimensionError);
    EXPECT_THROW(breakpoint_ratios(Network(2)), DimensionError);
}

TEST(Fold, EquivalenceOnRandomNetworks) {
    std::mt19937_64 gen(2024);
    std::uniform_int_distribution<int> count(0, 50);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto net = oracle::random_network(gen, 1, static_cast<std::size_t>(count(gen)), 3.0);
        const auto c = fold_to_canonical(net, 1.0);
        for (const auto& bp : c.forward) EXPECT_TRUE(bp.t >= 0.0 && bp.t <= 1.0);
        for (const auto& bp : c.backward) EXPECT_TRUE(bp.t >= 0.0 && bp.t <= 1.0);
        ASSERT_LE(max_gap(net, c, 512), 1e-10) << "trial " << trial;
    }
}

TEST(Fold, IdempotentThroughInducedNetwork) {
    std::mt19937_64 gen(77);
    for (int trial = 0; trial < 200; ++trial) {
        const auto net = oracle::random_network(gen, 1, 30, 3.0);
        const auto c0 = fold_to_canonical(net, 1.0);
        const auto c1 = fold_to_canonical(to_network(c0), 1.0);
        EXPECT_LE(max_gap(to_network(c0), c0, 512), 1e-12);
        EXPECT_LE(max_gap(to_network(c1), c0, 512), 1e-12);
        EXPECT_EQ(fold_to_canonical(to_network(c1), 1.0), c1);
    }
}

TEST(Fold, ConstructorOutputIsForwardOnly) {
    const double L = 2 * std::numbers::pi;
    const auto f = make_target({"sin", {{"M", 3}}, {}});
    const auto d = uniform_division(40, L);
    const auto net = build_network(f, d);
    const auto c = fold_to_canonical(net, L);
    EXPECT_EQ(c.slope_neg, 0.0);
    EXPECT_TRUE(c.backward.empty());
    ASSERT_EQ(c.forward.size(), net.size());
    for (std::size_t j = 0; j < net.size(); ++j) {
        EXPECT_EQ(c.forward[j].t, net.units()[j].bias);
        EXPECT_EQ(c.forward[j].coeff, net.units()[j].weight_out);
    }
    EXPECT_EQ(c.const_term, f(0.0));
}

TEST(BreakpointRatios, Examples) {
    Network net(1);
    net.add_unit(2, 1, 3);
    net.add_unit(-1, 0.5, 2);
    net.add_unit(0.0, 1, 1);
    const auto r = breakpoint_ratios(net);
    ASSERT_EQ(r.entries.size(), 2u);
    EXPECT_EQ(r.entries[0].t, 0.5);
    EXPECT_EQ(r.entries[0].sign, 1);
    EXPECT_EQ(r.entries[0].mass, 6.0);
    EXPECT_EQ(r.entries[1].t, -0.5);
    EXPECT_EQ(r.entries[1].sign, -1);
    EXPECT_EQ(r.degenerate_count, 1u);

    EXPECT_TRUE(breakpoint_ratios(Network(1)).entries.empty());
}

TEST(BreakpointRatios, ConstructedSinAreMeshPoints) {
    const double L = 2 * std::numbers::pi;
    const auto d = uniform_division(12, L);
    const auto r = breakpoint_ratios(build_network(make_target({"sin", {{"M", 3}}, {}}), d));
    ASSERT_EQ(r.entries.size(), 13u);
    EXPECT_EQ(r.entries[0].t, 0.0);
    for (std::size_t j = 0; j < 12; ++j) {
        EXPECT_EQ(r.entries[j + 1].t, d.points()[j]);
        EXPECT_NEAR(r.entries[j + 1].t, j * std::numbers::pi / 6, 1e-15);
    }
}
