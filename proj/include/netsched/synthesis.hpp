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
#ifndef NETSCHED_SYNTHESIS_HPP
#define NETSCHED_SYNTHESIS_HPP

/**
 * @file synthesis.hpp
 * @brief Static state-feedback design for plants served with probability p.
 *
 * Two steps per plant:
 *   1. open-loop step: find P_s, P_u > 0 with A^T Pbar A - P_u < 0;
 *   2. gain step: find Y with G(Y)^T Pbar G(Y) - P_s^{-1} < 0, where
 *      G(Y) = A P_s^{-1} + B Y, then K = Y P_s.
 * Step 2 is the Schur complement of the congruence-transformed closed-loop
 * condition, so the pair from step 1 certifies A + B K.
 */

#include "netsched/certify.hpp"
#include "netsched/linalg.hpp"
#include "netsched/model.hpp"
#include "netsched/parallel.hpp"
#include "netsched/partition.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace netsched {

/// Necessary and sufficient for the open-loop step: (1-p) rho(A)^2 < 1.
inline bool open_loop_step_feasible(const Matrix& a, const Rational& p) {
    require_open_probability(p);
    const double rho = spectral_radius(a);
    return (1.0 - p.to_double()) * rho * rho < 1.0 - tol::spectral;
}

struct OpenLoopPair {
    Matrix P_s;
    Matrix P_u;
    /// P_u from the Stein solve with right-hand side I + p kappa A^T A, before band placement.
    Matrix unscaled_P_u;
    /// "stein" (input-agnostic construction) or "riccati" (input-aware).
    std::string method;
    int iterations = 0;
};

inline bool within_band(const Matrix& ps, const Matrix& pu, double kappa) {
    const auto es = eigen_range(ps);
    const auto eu = eigen_range(pu);
    const double lo = kappa * (1.0 - tol::pd);
    const double hi = 1.0 + tol::pd;
    return es.min >= lo && eu.min >= lo && es.max <= hi && eu.max <= hi;
}

inline bool open_loop_residual_negative(const Matrix& a, const Matrix& ps, const Matrix& pu, const Rational& p) {
    const double pd = p.to_double();
    const Matrix pbar = pd * ps + (1.0 - pd) * pu;
    return lambda_max(a.transpose() * pbar * a - pu) < -tol::nd * (1.0 + pbar.norm());
}

/**
 * Input-agnostic open-loop step: P_s = kappa I and P_u solving
 *   (1-p) A^T P_u A - P_u = -(eps I + p kappa A^T A),
 * with eps = 1 for the reported unscaled P_u and eps chosen so that
 * lambda_max(P_u) <= 1 for the returned pair (both then lie in [kappa I, I]).
 */
inline std::optional<OpenLoopPair> solve_open_loop_feasibility(const Matrix& a, const Rational& p,
                                                               double kappa = kDefaultKappa) {
    require_square(a, "A");
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in ]0,1[");
    if (!open_loop_step_feasible(a, p)) return std::nullopt;
    const Eigen::Index d = a.rows();
    const double pd = p.to_double();
    const Matrix id = Matrix::Identity(d, d);
    auto u0 = solve_stein(a, 1.0 - pd, id);
    auto u1 = solve_stein(a, 1.0 - pd, a.transpose() * a);
    if (!u0 || !u1) return std::nullopt;

    OpenLoopPair out;
    out.method = "stein";
    out.unscaled_P_u = *u0 + pd * kappa * *u1;
    const double eps = (1.0 - pd * kappa * lambda_max(*u1)) / lambda_max(*u0);
    if (!(eps > 0.0)) return std::nullopt;
    out.P_s = kappa * id;
    out.P_u = symmetrize(eps * *u0 + pd * kappa * *u1);
    if (!within_band(out.P_s, out.P_u, kappa)) return std::nullopt;
    if (!open_loop_residual_negative(a, out.P_s, out.P_u, p)) return std::nullopt;
    return out;
}

struct RiccatiOptions {
    int max_iterations = 100000;
    double relative_tolerance = 1e-12;
    double divergence_bound = 1e14;
};

/**
 * Input-aware open-loop step. Iterates the coupled jump-system Riccati map
 * (state weight I, zero input weight)
 *
 *   P_u <- I + A^T Pbar A
 *   P_s <- I + A^T Pbar A - A^T Pbar B (B^T Pbar B)^+ B^T Pbar A
 *
 * from P_s = P_u = I. The limit satisfies the open-loop condition with margin
 * I and leaves the same margin for the gain step. If the iteration diverges
 * (the plant is not mean-square stabilisable at this p) the input-agnostic
 * pair is returned instead, when it exists; the gain step then reports the
 * failure.
 */
inline std::optional<OpenLoopPair> solve_open_loop_feasibility(const Matrix& a, const Matrix& b, const Rational& p,
                                                               double kappa = kDefaultKappa,
                                                               const RiccatiOptions& opts = {}) {
    require_square(a, "A");
    if (b.rows() != a.rows()) throw DimensionError("B rows must match A");
    if (!(kappa > 0.0 && kappa < 1.0)) throw std::domain_error("kappa must lie in ]0,1[");
    if (!open_loop_step_feasible(a, p)) return std::nullopt;

    const Eigen::Index d = a.rows();
    const double pd = p.to_double();
    const Matrix id = Matrix::Identity(d, d);
    Matrix ps = id;
    Matrix pu = id;
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const Matrix pbar = pd * ps + (1.0 - pd) * pu;
        const Matrix atpa = a.transpose() * pbar * a;
        const Matrix btpa = b.transpose() * pbar * a;
        const Matrix btpb = b.transpose() * pbar * b;
        Matrix next_u = symmetrize(id + atpa);
        Matrix next_s = symmetrize(id + atpa - btpa.transpose() * pseudo_inverse(btpb) * btpa);
        const double scale = next_u.cwiseAbs().maxCoeff();
        const double change =
            std::max((next_u - pu).cwiseAbs().maxCoeff(), (next_s - ps).cwiseAbs().maxCoeff()) / scale;
        ps = std::move(next_s);
        pu = std::move(next_u);
        if (!std::isfinite(scale) || scale > opts.divergence_bound) break;
        if (change < opts.relative_tolerance) {
            converged = true;
            break;
        }
    }
    if (converged) {
        const double top = std::max(lambda_max(ps), lambda_max(pu));
        OpenLoopPair out;
        out.method = "riccati";
        out.iterations = it + 1;
        out.unscaled_P_u = pu;
        out.P_s = ps / top;
        out.P_u = pu / top;
        if (within_band(out.P_s, out.P_u, kappa) && open_loop_residual_negative(a, out.P_s, out.P_u, p)) return out;
    }
    return solve_open_loop_feasibility(a, p, kappa);
}

/// Pbar = p P_s + (1-p) P_u.
inline Matrix mixed_lyapunov(const Matrix& ps, const Matrix& pu, const Rational& p) {
    const double pd = p.to_double();
    return pd * ps + (1.0 - pd) * pu;
}

/// F(Y) = (A P_s^{-1} + B Y)^T Pbar (A P_s^{-1} + B Y).
inline Matrix gain_quadratic_form(const Matrix& a, const Matrix& b, const Matrix& ps, const Matrix& pu,
                                  const Rational& p, const Matrix& y) {
    auto ps_inv = spd_inverse(ps);
    if (!ps_inv) throw std::invalid_argument("P_s is not positive definite");
    const Matrix g = a * *ps_inv + b * y;
    return symmetrize(g.transpose() * mixed_lyapunov(ps, pu, p) * g);
}

/// Minimiser of F in the Loewner order: Y* = -(B^T Pbar B)^+ B^T Pbar A P_s^{-1}.
inline Matrix optimal_gain_parameter(const Matrix& a, const Matrix& b, const Matrix& ps, const Matrix& pu,
                                     const Rational& p) {
    auto ps_inv = spd_inverse(ps);
    if (!ps_inv) throw std::invalid_argument("P_s is not positive definite");
    const Matrix pbar = mixed_lyapunov(ps, pu, p);
    return -pseudo_inverse(b.transpose() * pbar * b) * b.transpose() * pbar * a * *ps_inv;
}

/// lambda_max(F(Y) - P_s^{-1}); the gain step is feasible at Y iff this is negative.
inline double gain_margin(const Matrix& a, const Matrix& b, const Matrix& ps, const Matrix& pu, const Rational& p,
                          const Matrix& y) {
    return lambda_max(gain_quadratic_form(a, b, ps, pu, p, y) - *spd_inverse(ps));
}

inline double gain_tolerance(const Matrix& ps) { return tol::nd * (1.0 + spd_inverse(ps)->norm()); }

/// Returns Y* when F(Y*) < P_s^{-1}, nullopt ("gain feasibility failed") otherwise.
inline std::optional<Matrix> solve_gain_feasibility(const Matrix& a, const Matrix& b, const Matrix& ps,
                                                    const Matrix& pu, const Rational& p) {
    require_square(a, "A");
    if (b.rows() != a.rows()) throw DimensionError("B rows must match A");
    require_same_shape(a, ps, "P_s");
    require_same_shape(a, pu, "P_u");
    require_open_probability(p);
    if (!spd_inverse(ps) || !spd_inverse(pu)) throw std::invalid_argument("P_s and P_u must be positive definite");
    Matrix y = optimal_gain_parameter(a, b, ps, pu, p);
    if (gain_margin(a, b, ps, pu, p, y) < -gain_tolerance(ps)) return y;
    return std::nullopt;
}

/// K = Y P_s.
inline Matrix compute_gain(const Matrix& y, const Matrix& ps) {
    if (y.cols() != ps.rows()) throw DimensionError("Y columns must match P_s: " + shape_of(y) + " vs " + shape_of(ps));
    return y * ps;
}

/// [[-Pbar^{-1}, G], [G^T, -P_s^{-1}]] with G = A P_s^{-1} + B Y.
inline Matrix gain_block_matrix(const Matrix& a, const Matrix& b, const Matrix& ps, const Matrix& pu,
                                const Rational& p, const Matrix& y) {
    const Eigen::Index d = a.rows();
    const Matrix ps_inv = *spd_inverse(ps);
    const Matrix pbar_inv = *spd_inverse(mixed_lyapunov(ps, pu, p));
    const Matrix g = a * ps_inv + b * y;
    Matrix blk(2 * d, 2 * d);
    blk << -pbar_inv, g, g.transpose(), -ps_inv;
    return blk;
}

/// [[-Pbar, Pbar A_s], [A_s^T Pbar, -P_s]], the Schur form of the closed-loop condition.
inline Matrix closed_loop_block_matrix(const Matrix& a_s, const Matrix& ps, const Matrix& pu, const Rational& p) {
    const Eigen::Index d = a_s.rows();
    const Matrix pbar = mixed_lyapunov(ps, pu, p);
    Matrix blk(2 * d, 2 * d);
    blk << -pbar, pbar * a_s, (pbar * a_s).transpose(), -ps;
    return blk;
}

struct PlantSynthesis {
    int index = 0;
    Rational p;
    std::optional<Matrix> K;
    std::optional<Matrix> Y;
    std::optional<StabilityCertificate> certificate;
    std::string failure;  // empty on success
    std::string open_loop_method;

    [[nodiscard]] bool ok() const { return failure.empty(); }
};

inline const char* kOpenLoopFailure = "open-loop feasibility";
inline const char* kGainFailure = "gain feasibility failed";

inline PlantSynthesis synthesize_plant(const PlantModel& plant, const Rational& p, double kappa = kDefaultKappa) {
    PlantSynthesis out;
    out.index = plant.index;
    out.p = p;
    auto pair = solve_open_loop_feasibility(plant.A, plant.B, p, kappa);
    if (!pair) {
        out.failure = kOpenLoopFailure;
        return out;
    }
    out.open_loop_method = pair->method;
    auto y = solve_gain_feasibility(plant.A, plant.B, pair->P_s, pair->P_u, p);
    if (!y) {
        out.failure = kGainFailure;
        return out;
    }
    Matrix k = compute_gain(*y, pair->P_s);
    StabilityCertificate cert{p, pair->P_s, pair->P_u, kappa};
    auto report = verify_certificate(plant.A + plant.B * k, plant.A, cert);
    if (!report) {
        out.failure = "certificate verification failed: " + report.diagnostics.front();
        return out;
    }
    out.Y = std::move(*y);
    out.K = std::move(k);
    out.certificate = std::move(cert);
    return out;
}

struct SynthesisResult {
    std::vector<PlantSynthesis> plants;  // ordered by plant index

    [[nodiscard]] bool all_succeeded() const {
        for (const auto& p : plants)
            if (!p.ok()) return false;
        return true;
    }

    /// Copy of config with synthesized gains written over any existing ones.
    [[nodiscard]] NcsConfig apply(NcsConfig config) const {
        for (const auto& p : plants)
            if (p.K) config.plants[static_cast<std::size_t>(p.index - 1)].K = *p.K;
        return config;
    }
};

/// Designs a gain for every plant using its block's probability. Never throws for infeasibility.
inline SynthesisResult synthesize_controllers(const NcsConfig& config, const ScheduleParameters& params,
                                             double kappa = kDefaultKappa, int threads = 1) {
    params.validate(config.size(), config.capacity);
    SynthesisResult result;
    result.plants.resize(config.plants.size());
    parallel_for(config.plants.size(), threads, [&](std::size_t i) {
        const auto& plant = config.plants[i];
        result.plants[i] = synthesize_plant(plant, params.probability_of(plant.index), kappa);
    });
    return result;
}

}  // namespace netsched

#endif  // NETSCHED_SYNTHESIS_HPP
