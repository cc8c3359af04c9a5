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
#include "netsched/mjls.hpp"
#include "netsched/presets.hpp"
#include "netsched/synthesis.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace netsched {
namespace {

using testing::matrices_near;
using testing::scalar;

bool negative_definite(const Matrix& m) { return lambda_max(m) < 0.0; }

Matrix random_spd(std::mt19937_64& gen, int d, double lo) {
    std::normal_distribution<double> n(0, 1);
    Matrix x(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) x(i, j) = n(gen);
    return x * x.transpose() + lo * Matrix::Identity(d, d);
}

TEST(OpenLoop, NecessaryConditionThreshold) {
    EXPECT_TRUE(open_loop_step_feasible(scalar(2), Rational(4, 5)));
    EXPECT_FALSE(open_loop_step_feasible(scalar(2), Rational(7, 10)));
    EXPECT_FALSE(open_loop_step_feasible(scalar(2), Rational(3, 4)));
}

TEST(OpenLoop, ScalarSteinConstruction) {
    // 0.2 P_u = 1 + 0.8 * 1e-6 * 4  =>  P_u = 5 (1 + 3.2e-6)
    const auto pair = solve_open_loop_feasibility(scalar(2), Rational(4, 5), 1e-6);
    ASSERT_TRUE(pair.has_value());
    EXPECT_EQ(pair->method, "stein");
    EXPECT_NEAR(pair->unscaled_P_u(0, 0), 5.0 * (1.0 + 3.2e-6), 1e-12);
    EXPECT_TRUE(within_band(pair->P_s, pair->P_u, 1e-6));
    EXPECT_TRUE(open_loop_residual_negative(scalar(2), pair->P_s, pair->P_u, Rational(4, 5)));
    EXPECT_FALSE(solve_open_loop_feasibility(scalar(2), Rational(7, 10), 1e-6).has_value());
}

TEST(OpenLoop, SchurStableAlwaysFeasible) {
    Matrix a(2, 2);
    a << 0.5, 0.4, -0.3, 0.2;
    for (int k = 1; k < 10; ++k) {
        EXPECT_TRUE(solve_open_loop_feasibility(a, Rational(k, 10)).has_value());
        EXPECT_TRUE(solve_open_loop_feasibility(a, Matrix::Identity(2, 1), Rational(k, 10)).has_value());
    }
}

TEST(OpenLoop, InputAwarePairLeavesRoomForGain) {
    for (const auto& pub : {presets::batch_reactor(), presets::inverted_pendulum()}) {
        const auto pair = solve_open_loop_feasibility(pub.plant.A, pub.plant.B, Rational(1, 2));
        ASSERT_TRUE(pair.has_value());
        EXPECT_EQ(pair->method, "riccati");
        EXPECT_TRUE(within_band(pair->P_s, pair->P_u, kDefaultKappa));
        EXPECT_TRUE(solve_gain_feasibility(pub.plant.A, pub.plant.B, pair->P_s, pair->P_u, Rational(1, 2)).has_value());
    }
}

TEST(GainStep, ScalarChain) {
    const Matrix a = scalar(2), b = scalar(1), ps = scalar(0.01), pu = scalar(1);
    const Rational p(4, 5);
    const auto y = solve_gain_feasibility(a, b, ps, pu, p);
    ASSERT_TRUE(y.has_value());
    EXPECT_NEAR((*y)(0, 0), -200.0, 1e-9);
    EXPECT_NEAR(gain_quadratic_form(a, b, ps, pu, p, *y)(0, 0), 0.0, 1e-9);
    const Matrix k = compute_gain(*y, ps);
    EXPECT_NEAR(k(0, 0), -2.0, 1e-12);
    EXPECT_NEAR((a + b * k)(0, 0), 0.0, 1e-12);
}

TEST(GainStep, PublishedPendulumParameterIsFeasible) {
    const auto pub = presets::inverted_pendulum();
    const double margin = gain_margin(pub.plant.A, pub.plant.B, pub.certificate.P_s, pub.certificate.P_u, Rational(1, 2),
                                      pub.Y);
    EXPECT_LT(margin, 0.0);
    const auto reactor = presets::batch_reactor();
    EXPECT_LT(gain_margin(reactor.plant.A, reactor.plant.B, reactor.certificate.P_s, reactor.certificate.P_u,
                          Rational(1, 2), reactor.Y),
              0.0);
}

TEST(GainStep, NoInputBoundary) {
    Matrix a(2, 2);
    a << 0.6, 0.2, 0.0, 0.5;
    const Matrix b = Matrix::Zero(2, 1);
    const Matrix ps = Matrix::Identity(2, 2) * 0.8, pu = Matrix::Identity(2, 2);
    const Rational p(1, 2);
    EXPECT_TRUE(matrices_near(optimal_gain_parameter(a, b, ps, pu, p), Matrix::Zero(1, 2), 0.0));
    const Matrix c = a * ps.inverse();
    const bool oracle = negative_definite(c.transpose() * mixed_lyapunov(ps, pu, p) * c - ps.inverse());
    EXPECT_EQ(solve_gain_feasibility(a, b, ps, pu, p).has_value(), oracle);
    EXPECT_TRUE(oracle);
    EXPECT_FALSE(solve_gain_feasibility(3.0 * a, b, ps, pu, p).has_value());
}

TEST(GainStep, ComputeGainFromPublishedY) {
    const auto pendulum = presets::inverted_pendulum();
    EXPECT_TRUE(matrices_near(compute_gain(pendulum.Y, pendulum.certificate.P_s), presets::pendulum_K(), 1e-3));
    const auto reactor = presets::batch_reactor();
    EXPECT_TRUE(matrices_near(compute_gain(reactor.Y, reactor.certificate.P_s), presets::batch_reactor_K(), 1e-2));
    EXPECT_TRUE(matrices_near(compute_gain(Matrix::Zero(1, 2), pendulum.certificate.P_s), Matrix::Zero(1, 2), 0.0));
    EXPECT_THROW(compute_gain(Matrix::Zero(1, 3), pendulum.certificate.P_s), DimensionError);
}

TEST(GainStep, OptimalParameterMinimisesQuadraticForm) {
    // Property: F(Y*) <= F(Y) in the Loewner order for random Y.
    std::mt19937_64 gen(41);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + trial % 2;
        Matrix a(d, d), b(d, 1), y(1, d);
        for (int i = 0; i < d; ++i) {
            b(i, 0) = n(gen);
            y(0, i) = n(gen);
            for (int j = 0; j < d; ++j) a(i, j) = n(gen);
        }
        const Matrix ps = random_spd(gen, d, 0.5), pu = random_spd(gen, d, 0.5);
        const Rational p(1 + trial % 9, 10);
        const Matrix fs = gain_quadratic_form(a, b, ps, pu, p, optimal_gain_parameter(a, b, ps, pu, p));
        const Matrix fy = gain_quadratic_form(a, b, ps, pu, p, y);
        EXPECT_GE(lambda_min(fy - fs), -1e-8 * (1 + fy.norm()));
    }
}

TEST(GainStep, SchurComplementAndCongruenceEquivalences) {
    // Property: block LMI < 0  <=>  F(Y) < P_s^{-1}  <=>  (A + B Y P_s)^T Pbar (A + B Y P_s) < P_s.
    std::mt19937_64 gen(43);
    std::normal_distribution<double> n(0, 1);
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int d = 1 + trial % 3;
        Matrix a(d, d), b(d, 1);
        for (int i = 0; i < d; ++i) {
            b(i, 0) = n(gen);
            for (int j = 0; j < d; ++j) a(i, j) = 0.7 * n(gen);
        }
        const Matrix ps = random_spd(gen, d, 0.2), pu = random_spd(gen, d, 0.2);
        const Rational p(1 + trial % 9, 10);
        Matrix y = optimal_gain_parameter(a, b, ps, pu, p);
        for (int i = 0; i < d; ++i) y(0, i) += 0.3 * n(gen);
        const double margin = gain_margin(a, b, ps, pu, p, y);
        if (std::abs(margin) < 1e-6) continue;
        const bool via_form = margin < 0;
        const bool via_block = negative_definite(gain_block_matrix(a, b, ps, pu, p, y));
        const Matrix as = a + b * compute_gain(y, ps);
        const bool via_closed_loop =
            negative_definite(as.transpose() * mixed_lyapunov(ps, pu, p) * as - ps);
        const bool via_closed_block = negative_definite(closed_loop_block_matrix(as, ps, pu, p));
        EXPECT_EQ(via_form, via_block);
        EXPECT_EQ(via_form, via_closed_loop);
        EXPECT_EQ(via_form, via_closed_block);
        (via_form ? feasible : infeasible)++;
    }
    EXPECT_GT(feasible, 20);
    EXPECT_GT(infeasible, 20);
}

TEST(Synthesis, PublishedPlantsAtHalf) {
    const auto cfg = presets::preset("experiment1");
    const auto result = synthesize_controllers(cfg.config, *cfg.schedule, 1e-8);
    ASSERT_TRUE(result.all_succeeded());
    for (const auto& s : result.plants) {
        ASSERT_TRUE(s.K.has_value());
        ASSERT_TRUE(s.certificate.has_value());
        const auto& plant = cfg.config.plant(s.index);
        const Matrix as = plant.A + plant.B * *s.K;
        EXPECT_TRUE(verify_certificate(as, plant.A, *s.certificate).ok);
        EXPECT_TRUE(iid_stability_test(as, plant.A, Rational(1, 2)));
        EXPECT_TRUE(matrices_near(*s.K, compute_gain(*s.Y, s.certificate->P_s), 1e-12));
    }
}

TEST(Synthesis, OpenLoopFailureIsReported) {
    const PlantModel plant{1, scalar(2), scalar(1), std::nullopt};
    const auto s = synthesize_plant(plant, Rational(7, 10));
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.failure, "open-loop feasibility");
    EXPECT_TRUE(synthesize_plant(plant, Rational(4, 5)).ok());
}

TEST(Synthesis, GainFailureIsReported) {
    // Input cannot reach the unstable direction. The open-loop step alone is
    // satisfiable at p = 1/2 (0.5 * 1.69 < 1), but no gain can help.
    Matrix a(2, 2);
    a << 1.3, 0.0, 0.0, 0.2;
    Matrix b(2, 1);
    b << 0.0, 1.0;
    const auto s = synthesize_plant(PlantModel{1, a, b, std::nullopt}, Rational(1, 2));
    EXPECT_FALSE(s.ok());
    EXPECT_EQ(s.failure, "gain feasibility failed");
}

TEST(Synthesis, ExistingGainsAreOverwritten) {
    auto cfg = presets::preset("experiment1");
    for (auto& p : cfg.config.plants) p.K = Matrix::Zero(p.input_dim(), p.state_dim());
    const auto result = synthesize_controllers(cfg.config, *cfg.schedule);
    ASSERT_TRUE(result.all_succeeded());
    const auto updated = result.apply(cfg.config);
    for (const auto& p : updated.plants) {
        EXPECT_GT(p.K->norm(), 0.0);
        EXPECT_TRUE(is_schur_stable(p.A + p.B * *p.K));
    }
}

TEST(Synthesis, ResultIndependentOfThreadCount) {
    const auto cfg = generate_random_ncs(6, 2, 3, 2);
    const ScheduleParameters params{Partition{{{1, 2}, {3, 4}, {5, 6}}},
                                    ProbabilityVector{{Rational(1, 5), Rational(2, 5), Rational(2, 5)}}};
    const auto one = synthesize_controllers(cfg, params, kDefaultKappa, 1);
    const auto four = synthesize_controllers(cfg, params, kDefaultKappa, 4);
    for (std::size_t i = 0; i < one.plants.size(); ++i) {
        EXPECT_EQ(one.plants[i].failure, four.plants[i].failure);
        if (one.plants[i].K) {
            EXPECT_TRUE(matrices_near(*one.plants[i].K, *four.plants[i].K, 0.0));
        }
    }
}

}  // namespace
}  // namespace netsched
