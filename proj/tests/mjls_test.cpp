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
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

namespace netsched {
namespace {

using testing::matrices_near;
using testing::scalar;

TEST(TransitionMatrix, RowsAreIdentical) {
    const auto half = transition_matrix(Rational(1, 2));
    EXPECT_EQ(half.rows[0][0], Rational(1, 2));
    EXPECT_EQ(half.rows[1][1], Rational(1, 2));
    const auto quarter = transition_matrix(Rational(1, 4));
    for (int r = 0; r < 2; ++r) {
        EXPECT_EQ(quarter.rows[r][0], Rational(1, 4));
        EXPECT_EQ(quarter.rows[r][1], Rational(3, 4));
    }
    for (int k = 1; k < 100; ++k) {
        const auto t = transition_matrix(Rational(k, 100));
        EXPECT_EQ(t.row_sum(0), Rational(1));
        EXPECT_EQ(t.row_sum(1), Rational(1));
    }
}

TEST(TransitionMatrix, ClosedIntervalEndpointsRejected) {
    EXPECT_THROW(transition_matrix(Rational(0)), std::domain_error);
    EXPECT_THROW(transition_matrix(Rational(1)), std::domain_error);
    EXPECT_THROW(transition_matrix(Rational(3, 2)), std::domain_error);
}

TEST(SecondMoment, ScalarValue) {
    const auto op = second_moment_operator(scalar(0.5), scalar(1.2), Rational(1, 2));
    ASSERT_EQ(op.M.rows(), 1);
    EXPECT_NEAR(op.M(0, 0), 0.5 * 0.25 + 0.5 * 1.44, 1e-15);
    EXPECT_NEAR(op.spectral_radius(), 0.845, 1e-15);
}

TEST(SecondMoment, ShapeAndNearBoundaryLimit) {
    Matrix as(2, 2), au(2, 2);
    as << 0.3, 0.1, 0.0, 0.2;
    au << 3.0, 1.0, -1.0, 2.0;
    const auto op = second_moment_operator(as, au, Rational(999999, 1000000));
    EXPECT_EQ(op.M.rows(), 4);
    EXPECT_EQ(op.M.cols(), 4);
    EXPECT_TRUE(matrices_near(op.M, kron(as, as), 1e-5));
    EXPECT_THROW(second_moment_operator(as, Matrix::Zero(3, 3), Rational(1, 2)), DimensionError);
}

TEST(SecondMoment, PropagatesSecondMomentsExactly) {
    // Oracle: enumerate every mode sequence of length t and average x x^T.
    Matrix as(2, 2), au(2, 2);
    as << 0.4, 0.2, -0.1, 0.3;
    au << 1.1, 0.5, 0.0, 0.9;
    const Rational p(3, 10);
    const double pd = p.to_double();
    Vector x0(2);
    x0 << 1.5, -0.5;
    const auto op = second_moment_operator(as, au, p);
    constexpr int steps = 10;
    Matrix second = Matrix::Zero(2, 2);
    for (int mask = 0; mask < (1 << steps); ++mask) {
        Vector x = x0;
        double prob = 1.0;
        for (int t = 0; t < steps; ++t) {
            const bool stable = (mask >> t) & 1;
            x = (stable ? as : au) * x;
            prob *= stable ? pd : 1.0 - pd;
        }
        second += prob * x * x.transpose();
    }
    Vector v = vec(x0 * x0.transpose());
    for (int t = 0; t < steps; ++t) v = op.M * v;
    EXPECT_TRUE(matrices_near(unvec(v, 2, 2), second, 1e-12));
}

TEST(IidStability, Examples) {
    EXPECT_TRUE(iid_stability_test(scalar(0.5), scalar(1.2), Rational(1, 2)));
    EXPECT_FALSE(iid_stability_test(scalar(0.5), scalar(2.0), Rational(1, 10)));
    Matrix a(2, 2);
    a << 0.5, 0.4, -0.2, 0.6;
    for (int k = 1; k < 10; ++k) EXPECT_TRUE(iid_stability_test(a, a, Rational(k, 10)));
}

TEST(ExpectedCost, ScalarClosedForm) {
    EXPECT_NEAR(expected_cost_exact(scalar(0.5), scalar(1.2), Rational(1, 2), Vector::Ones(1)), 1.0 / (1.0 - 0.845),
                1e-12);
    EXPECT_NEAR(expected_cost_exact(scalar(0.5), scalar(1.2), Rational(1, 2), Vector::Ones(1)), 6.451612903, 1e-9);
    EXPECT_NEAR(expected_cost_exact(scalar(0.5), scalar(1.2), Rational(1, 2), Vector::Constant(1, 2.0)),
                4.0 / 0.155, 1e-11);
    EXPECT_EQ(expected_cost_exact(scalar(0.5), scalar(1.2), Rational(1, 2), Vector::Zero(1)), 0.0);
}

TEST(ExpectedCost, DivergentExpectation) {
    try {
        expected_cost_exact(scalar(0.5), scalar(2.0), Rational(1, 10), Vector::Ones(1));
        FAIL();
    } catch (const DivergentExpectation& e) {
        EXPECT_STREQ(e.what(), "divergent expectation");
    }
}

TEST(ExpectedCost, MatchesTruncatedSeries) {
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 30; ++trial) {
        Matrix as(2, 2), au(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                as(i, j) = 0.5 * u(gen);
                au(i, j) = 1.2 * u(gen);
            }
        const Rational p(1 + trial % 9, 10);
        if (second_moment_operator(as, au, p).spectral_radius() > 0.9) continue;
        Vector x0(2);
        x0 << u(gen), u(gen);
        const auto op = second_moment_operator(as, au, p);
        double series = 0.0;
        Vector v = vec(x0 * x0.transpose());
        for (int t = 0; t < 2000; ++t) {
            series += v(0) + v(3);
            v = op.M * v;
        }
        EXPECT_NEAR(expected_cost_exact(as, au, p, x0), series, 1e-10 * (1 + series));
    }
}

}  // namespace
}  // namespace netsched
