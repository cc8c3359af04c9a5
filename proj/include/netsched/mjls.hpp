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
#ifndef NETSCHED_MJLS_HPP
#define NETSCHED_MJLS_HPP

// Jump-linear view of a single plant under a probabilistic schedule. The plant
// is in its stable mode with probability p at every step, independently of the
// past, so the mode chain has identical transition rows [p, 1-p].

#include "netsched/linalg.hpp"
#include "netsched/rational.hpp"

#include <array>
#include <stdexcept>

namespace netsched {

inline void require_open_probability(const Rational& p) {
    if (p <= Rational(0) || p >= Rational(1))
        throw std::domain_error("probability must lie in ]0,1[, got " + p.str());
}

/// Mode transition matrix; row/column 0 is the stable mode, 1 the unstable mode.
struct TransitionMatrix {
    Rational p;
    std::array<std::array<Rational, 2>, 2> rows;

    [[nodiscard]] Rational row_sum(int r) const { return rows[r][0] + rows[r][1]; }
};

inline TransitionMatrix transition_matrix(const Rational& p) {
    require_open_probability(p);
    const Rational q = Rational(1) - p;
    return {p, {{{p, q}, {p, q}}}};
}

/// M = p (As kron As) + (1-p) (Au kron Au), acting on vec(E[x x^T]).
struct SecondMomentOperator {
    Matrix M;
    Rational p;
    Matrix stable;
    Matrix unstable;

    [[nodiscard]] double spectral_radius() const { return netsched::spectral_radius(M); }
};

inline SecondMomentOperator second_moment_operator(const Matrix& a_s, const Matrix& a_u, const Rational& p) {
    require_square(a_s, "stable mode matrix");
    require_same_shape(a_s, a_u, "mode matrices");
    require_open_probability(p);
    const double pd = p.to_double();
    return {pd * kron(a_s, a_s) + (1.0 - pd) * kron(a_u, a_u), p, a_s, a_u};
}

/// Mean-square stability of the i.i.d. jump system: rho(M) < 1 - tol::spectral.
inline bool iid_stability_test(const Matrix& a_s, const Matrix& a_u, const Rational& p) {
    return second_moment_operator(a_s, a_u, p).spectral_radius() < 1.0 - tol::spectral;
}

class DivergentExpectation : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/**
 * Exact E[sum_{t>=0} ||x(t)||^2] for x(0) = x0 with the mode redrawn at every
 * step (including t = 0):  vec(I)^T (I - M)^{-1} vec(x0 x0^T).
 */
inline double expected_cost_exact(const Matrix& a_s, const Matrix& a_u, const Rational& p, const Vector& x0) {
    const auto op = second_moment_operator(a_s, a_u, p);
    if (x0.size() != a_s.rows()) throw DimensionError("initial state has wrong dimension");
    if (op.spectral_radius() >= 1.0 - tol::spectral) throw DivergentExpectation("divergent expectation");
    const Eigen::Index d = a_s.rows();
    const Eigen::Index n = d * d;
    Eigen::PartialPivLU<Matrix> lu(Matrix::Identity(n, n) - op.M);
    const Vector moments = lu.solve(vec(x0 * x0.transpose()));
    return vec(Matrix::Identity(d, d)).dot(moments);
}

}  // namespace netsched

#endif  // NETSCHED_MJLS_HPP
