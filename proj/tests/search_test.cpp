/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#include "netsched/presets.hpp"
#include "netsched/search.hpp"
#include "reference_search.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <random>
#include <thread>

namespace netsched {
namespace {

using testing::scalar;

NcsConfig scalar_ncs(const std::vector<std::pair<double, double>>& modes, int m) {
    // Each plant: A = a_u, B = 1, K = a_s - a_u so that A + B K = a_s.
    std::vector<PlantModel> plants;
    int i = 1;
    for (auto [as, au] : modes) plants.push_back(PlantModel{i++, scalar(au), scalar(1), scalar(as - au)});
    return make_ncs(std::move(plants), m);
}

void expect_valid_selection(const SearchResult& res, int n, int m) {
    EXPECT_EQ(partition_violation(res.params.partition, n, m), "");
    EXPECT_EQ(res.params.probabilities.sum(), Rational(1));
    ASSERT_EQ(res.evidence.size(), static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) EXPECT_EQ(res.evidence[static_cast<std::size_t>(i - 1)].certificate.p, res.params.probability_of(i));
}

TEST(Search, PublishedBenchmarkAtHalf) {
    const auto cfg = presets::preset("experiment1").config;
    const auto out = search_schedule_parameters(cfg, Rational(1, 2));
    ASSERT_TRUE(out.found());
    const auto& res = *out.result;
    EXPECT_EQ(res.params.partition.blocks, (std::vector<std::vector<int>>{{1}, {2}}));
    EXPECT_EQ(res.params.probabilities.values, (std::vector<Rational>{Rational(1, 2), Rational(1, 2)}));
    expect_valid_selection(res, 2, 1);
    for (const auto& plant : cfg.plants) {
        const auto mm = mode_matrices(plant);
        EXPECT_TRUE(verify_certificate(mm.stable, mm.unstable, res.evidence[static_cast<std::size_t>(plant.index - 1)].certificate).ok);
    }
}

TEST(Search, BothPlantsNeedMoreThanThreeQuarters) {
    const auto cfg = scalar_ncs({{0.0, 2.0}, {0.0, 2.0}}, 1);
    const auto out = search_schedule_parameters(cfg, Rational(1, 10));
    EXPECT_EQ(out.status, SearchStatus::infeasible);
    EXPECT_FALSE(out.result.has_value());
    EXPECT_GT(out.multisets_examined, 0u);
}

TEST(Search, OneDemandingPlantAndOneStablePlant) {
    const auto cfg = scalar_ncs({{0.0, 2.0}, {0.0, 0.5}}, 1);
    const auto out = search_schedule_parameters(cfg, Rational(1, 10));
    ASSERT_TRUE(out.found());
    const auto& res = *out.result;
    expect_valid_selection(res, 2, 1);
    EXPECT_GT(res.params.probability_of(1), Rational(3, 4));
    EXPECT_EQ(res.params.probability_of(1) + res.params.probability_of(2), Rational(1));
}

TEST(Search, RequiresGains) {
    auto cfg = presets::preset("experiment1").config;
    cfg.plants[1].K.reset();
    try {
        search_schedule_parameters(cfg, Rational(1, 2));
        FAIL();
    } catch (const SynthesisRequired& e) {
        EXPECT_NE(std::string(e.what()).find("synthesis required first"), std::string::npos);
    }
}

TEST(Search, InfeasibleGridStepHasNoCandidates) {
    const auto cfg = scalar_ncs({{0.0, 0.5}, {0.0, 0.5}}, 1);
    EXPECT_EQ(search_schedule_parameters(cfg, Rational(3, 10)).status, SearchStatus::infeasible);
    EXPECT_TRUE(search_schedule_parameters(cfg, Rational(1, 10)).found());
}

TEST(Search, MatchesNaiveReferenceOnRandomTables) {
    // Property: with arbitrary feasibility tables that are monotone or not, the
    // multiset + matching search agrees with exhaustive enumeration.
    std::mt19937_64 gen(51);
    for (int trial = 0; trial < 300; ++trial) {
        const int m = 1 + trial % 3;
        const int v = 2 + (trial / 3) % 2;
        const int n = m * v;
        const int den = std::vector<int>{2, 3, 4, 5, 6}[static_cast<std::size_t>(trial % 5)];
        const Rational h(1, den);
        const double density = std::uniform_real_distribution<double>(0.2, 0.9)(gen);
        std::map<std::pair<int, std::int64_t>, bool> table;
        std::bernoulli_distribution coin(density);
        for (int i = 1; i <= n; ++i)
            for (std::int64_t k = 1; k <= grid_top(h); ++k) table[{i, k}] = coin(gen);
        auto lookup = [&](int plant, const Rational& p) { return table.at({plant, (p / h).num()}); };
        const auto naive = reference::naive_search(n, m, h, lookup);
        FeasibilityOracle oracle = [&](int plant, const Rational& p) -> std::optional<PlantEvidence> {
            if (!lookup(plant, p)) return std::nullopt;
            return PlantEvidence{StabilityCertificate{p, Matrix::Identity(1, 1), Matrix::Identity(1, 1), kDefaultKappa},
                                 std::nullopt};
        };
        const auto fast = search_with_oracle(n, m, h, oracle);
        ASSERT_EQ(fast.found(), naive.has_value()) << "trial " << trial;
        if (fast.found()) {
            expect_valid_selection(*fast.result, n, m);
            for (int i = 1; i <= n; ++i) EXPECT_TRUE(lookup(i, fast.result->params.probability_of(i)));
        }
    }
}

TEST(Search, MatchesNaiveReferenceOnCertificates) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        for (int m : {1, 2}) {
            const int n = 4;
            const auto cfg = reference::random_fixed_gain_ncs(n, m, 1 + static_cast<int>(seed % 2), seed);
            for (const Rational& h : {Rational(1, 2), Rational(1, 4)}) {
                const auto naive = reference::naive_search(n, m, h, reference::certificate_check(cfg));
                const auto fast = search_schedule_parameters(cfg, h);
                EXPECT_EQ(fast.found(), naive.has_value()) << "seed " << seed << " m " << m << " h " << h;
            }
        }
    }
}

TEST(Search, MemoisationBoundsEvaluations) {
    const auto cfg = scalar_ncs({{0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}, {0.0, 2.0}}, 2);
    const auto out = search_schedule_parameters(cfg, Rational(1, 20));
    EXPECT_EQ(out.status, SearchStatus::infeasible);
    // At most one check per (plant, grid point).
    EXPECT_LE(out.evaluations, 4u * 19u);
}

TEST(Search, ThreadCountDoesNotChangeTheAnswer) {
    const auto cfg = reference::random_fixed_gain_ncs(6, 2, 2, 99);
    SearchOptions one, many;
    many.threads = 4;
    const auto a = search_schedule_parameters(cfg, Rational(1, 10), one);
    const auto b = search_schedule_parameters(cfg, Rational(1, 10), many);
    ASSERT_EQ(a.status, b.status);
    if (a.found()) {
        EXPECT_EQ(a.result->params.partition.blocks, b.result->params.partition.blocks);
        EXPECT_EQ(a.result->params.probabilities.values, b.result->params.probabilities.values);
    }
}

TEST(Search, WithSynthesisDesignsVerifiedGains) {
    auto cfg = presets::preset("experiment1").config;
    for (auto& p : cfg.plants) p.K.reset();
    const auto out = search_with_synthesis(cfg, Rational(1, 10));
    ASSERT_TRUE(out.found());
    expect_valid_selection(*out.result, 2, 1);
    for (const auto& plant : cfg.plants) {
        const auto& ev = out.result->evidence[static_cast<std::size_t>(plant.index - 1)];
        ASSERT_TRUE(ev.gain.has_value());
        EXPECT_TRUE(verify_certificate(plant.A + plant.B * *ev.gain, plant.A, ev.certificate).ok);
    }
}

TEST(Search, TimeBudgetStopsTheSearch) {
    FeasibilityOracle slow = [](int, const Rational&) -> std::optional<PlantEvidence> {
        std::this_thread::sleep_for(std::chrono::milliseconds(2));
        return std::nullopt;
    };
    SearchOptions opts;
    opts.time_budget_seconds = 0.01;
    const auto out = search_with_oracle(4, 2, Rational(1, 200), slow, opts);
    EXPECT_EQ(out.status, SearchStatus::budget_exhausted);
}

}  // namespace
}  // namespace netsched
