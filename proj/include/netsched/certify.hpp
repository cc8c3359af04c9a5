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
#ifndef NETSCHED_CERTIFY_HPP
#define NETSCHED_CERTIFY_HPP

/**
 * @file certify.hpp
 * @brief Stochastic-stability certificates for one plant.
 *
 * A plant that is served with probability p is stochastically stable iff there
 * are symmetric positive definite P_s, P_u with
 *
 *     A_k^T Pbar A_k - P_k < 0,   k in {s, u},   Pbar = p P_s + (1-p) P_u.
 *
 * The pair is homogeneous (any positive multiple works), so the band
 * kappa I <= P_k <= I is checked after normalising the larger eigenvalue to 1,
 * i.e. as a bound 1/kappa on the joint condition number.
 */

#include "netsched/linalg.hpp"
#include "netsched/mjls.hpp"
#include "netsched/rational.hpp"

#include <optional>
#include <string>
#include <vector>

namespace netsched {

inline constexpr double kDefaultKappa = 1e-8;

struct StabilityCertificate {
    Rational p;
    Matrix P_s;
    Matrix P_u;
    double kappa = kDefaultKappa;

    [[nodiscard]] Matrix P_bar() const {
        const double pd = p.to_double();
        return pd * P_s + (1.0 - pd) * P_u;
    }

    [[nodiscard]] StabilityCertificate scaled(double c) const { return {p, c * P_s, c * P_u, kappa}; }
};

struct ResidualPair {
    Matrix R_s;
    Matrix R_u;
    double margin_s = 0.0;  // lambda_max(R_s)
    double margin_u = 0.0;  // lambda_max(R_u)
};

inline ResidualPair condition_residuals(const Matrix& a_s, const Matrix& a_u, const StabilityCertificate& cert) {
    require_square(a_s, "stable mode matrix");
    require_same_shape(a_s, a_u, "mode matrices");
    require_same_shape(a_s, cert.P_s, "P_s");
    require_same_shape(a_s, cert.P_u, "P_u");
    const Matrix pbar = cert.P_bar();
    ResidualPair r;
    r.R_s = symmetrize(a_s.transpose() * pbar * a_s - cert.P_s);
    r.R_u = symmetrize(a_u.transpose() * pbar * a_u - cert.P_u);
    r.margin_s = lambda_max(r.R_s);
    r.margin_u = lambda_max(r.R_u);
    return r;
}

struct VerificationReport {
    bool ok = false;
    std::vector<std::string> diagnostics;
    std::optional<ResidualPair> residuals;
    double tolerance = 0.0;  // negative-definiteness margin used

    explicit operator bool() const { return ok; }
};

inline VerificationReport verify_certificate(const Matrix& a_s, const Matrix& a_u, const StabilityCertificate& cert) {
    VerificationReport rep;
    auto fail = [&](std::string msg) { rep.diagnostics.push_back(std::move(msg)); };

    if (cert.p <= Rational(0) || cert.p >= Rational(1)) fail("probability outside ]0,1[");
    if (!(cert.kappa > 0.0 && cert.kappa < 1.0)) fail("kappa outside ]0,1[");
    if (a_s.rows() != a_s.cols() || a_s.rows() != cert.P_s.rows() || a_s.rows() != cert.P_s.cols() ||
        a_u.rows() != a_s.rows() || a_u.cols() != a_s.cols() || cert.P_u.rows() != a_s.rows() ||
        cert.P_u.cols() != a_s.rows()) {
        fail("dimension mismatch");
        return rep;
    }
    if (!cert.P_s.allFinite() || !cert.P_u.allFinite()) {
        fail("non-finite certificate entries");
        return rep;
    }
    if (!is_symmetric(cert.P_s) || !is_symmetric(cert.P_u)) fail("symmetry violated");

    const auto es = eigen_range(cert.P_s);
    const auto eu = eigen_range(cert.P_u);
    if (es.min <= 0.0 || eu.min <= 0.0) {
        fail("not positive definite");
    } else {
        const double top = std::max(es.max, eu.max);
        const double floor = cert.kappa * top * (1.0 - tol::pd);
        if (es.min < floor || eu.min < floor) fail("kappa band violated (condition number exceeds 1/kappa)");
    }

    if (cert.p > Rational(0) && cert.p < Rational(1)) {
        rep.residuals = condition_residuals(a_s, a_u, cert);
        rep.tolerance = tol::nd * (1.0 + cert.P_bar().norm());
        if (!(rep.residuals->margin_s < -rep.tolerance)) fail("stable-mode residual not negative definite");
        if (!(rep.residuals->margin_u < -rep.tolerance)) fail("unstable-mode residual not negative definite");
    }
    rep.ok = rep.diagnostics.empty();
    return rep;
}

/// Unscaled solution of the coupled Stein system A_k^T Pbar A_k - P_k = -I, k in {s,u}.
struct CoupledSteinSolution {
    Matrix P_s;
    Matrix P_u;
};

inline std::optional<CoupledSteinSolution> solve_coupled_stein(const Matrix& a_s, const Matrix& a_u,
                                                               const Rational& p) {
    require_square(a_s, "stable mode matrix");
    require_same_shape(a_s, a_u, "mode matrices");
    require_open_probability(p);
    const Eigen::Index d = a_s.rows();
    const Eigen::Index n = d * d;
    const double pd = p.to_double();
    const Matrix ks = kron(a_s.transpose(), a_s.transpose());
    const Matrix ku = kron(a_u.transpose(), a_u.transpose());

    // Unknown vector [vec(P_s); vec(P_u)].
    Matrix lhs(2 * n, 2 * n);
    lhs.topLeftCorner(n, n) = pd * ks - Matrix::Identity(n, n);
    lhs.topRightCorner(n, n) = (1.0 - pd) * ks;
    lhs.bottomLeftCorner(n, n) = pd * ku;
    lhs.bottomRightCorner(n, n) = (1.0 - pd) * ku - Matrix::Identity(n, n);
    Vector rhs(2 * n);
    rhs.head(n) = -vec(Matrix::Identity(d, d));
    rhs.tail(n) = -vec(Matrix::Identity(d, d));

    auto x = solve_linear(lhs, rhs);
    if (!x) return std::nullopt;
    return CoupledSteinSolution{symmetrize(unvec(Vector(x->col(0).head(n)), d, d)), symmetrize(unvec(Vector(x->col(0).tail(n)), d, d))};
}

/**
 * Computes a certificate from the coupled Stein system (right-hand side I),
 * normalised so the larger eigenvalue is 1. Returns nullopt ("no solution
 * found") when the system is singular, the solution is not positive definite,
 * the kappa band fails, or the residual check does not pass.
 */
inline std::optional<StabilityCertificate> find_certificate(const Matrix& a_s, const Matrix& a_u, const Rational& p,
                                                            double kappa = kDefaultKappa) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in ]0,1[");
    auto sol = solve_coupled_stein(a_s, a_u, p);
    if (!sol) return std::nullopt;
    const auto es = eigen_range(sol->P_s);
    const auto eu = eigen_range(sol->P_u);
    if (!(es.min > 0.0 && eu.min > 0.0)) return std::nullopt;
    const double scale = 1.0 / std::max(es.max, eu.max);
    StabilityCertificate cert{p, scale * sol->P_s, scale * sol->P_u, kappa};
    if (std::min(es.min, eu.min) * scale < kappa * (1.0 - tol::pd)) return std::nullopt;
    if (!verify_certificate(a_s, a_u, cert)) return std::nullopt;
    return cert;
}

}  // namespace netsched

#endif  // NETSCHED_CERTIFY_HPP
