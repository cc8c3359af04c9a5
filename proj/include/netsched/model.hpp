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
#ifndef NETSCHED_MODEL_HPP
#define NETSCHED_MODEL_HPP

#include "netsched/linalg.hpp"
#include "netsched/random.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsched {

/**
 * @brief One plant x(t+1) = A x(t) + B u(t) with optional state feedback u = K x.
 *
 * Plant indices are 1-based, matching the ids used in schedules and files.
 */
struct PlantModel {
    int index = 1;
    Matrix A;
    Matrix B;
    std::optional<Matrix> K;

    [[nodiscard]] Eigen::Index state_dim() const { return A.rows(); }
    [[nodiscard]] Eigen::Index input_dim() const { return B.cols(); }
    [[nodiscard]] bool has_gain() const { return K.has_value(); }

    /// Throws DimensionError / std::invalid_argument on malformed data.
    void validate() const {
        if (index < 1) throw std::invalid_argument("plant index must be >= 1");
        require_square(A, "A");
        if (B.rows() != A.rows() || B.cols() < 1)
            throw DimensionError("B must be d x m with m >= 1, got " + shape_of(B) + " for d=" +
                                 std::to_string(A.rows()));
        if (K && (K->rows() != B.cols() || K->cols() != A.rows()))
            throw DimensionError("K must be m x d, got " + shape_of(*K));
        if (!all_finite(A) || !all_finite(B) || (K && !all_finite(*K)))
            throw std::invalid_argument("plant " + std::to_string(index) + " has non-finite entries");
    }
};

inline PlantModel make_plant(int index, Matrix a, Matrix b, std::optional<Matrix> k = std::nullopt) {
    PlantModel p{index, std::move(a), std::move(b), std::move(k)};
    p.validate();
    return p;
}

/// The two mode matrices of a plant: closed loop (network access) and open loop.
struct ModeMatrices {
    Matrix stable;    // A + B K
    Matrix unstable;  // A
};

/// A + B K.
inline Matrix closed_loop_matrix(const PlantModel& plant) {
    if (!plant.K) throw std::invalid_argument("gain not set for plant " + std::to_string(plant.index));
    plant.validate();
    return plant.A + plant.B * (*plant.K);
}

inline ModeMatrices mode_matrices(const PlantModel& plant) {
    return {closed_loop_matrix(plant), plant.A};
}

/// Schur stable: spectral radius < 1 - tol::spectral.
inline bool is_schur_stable(const Matrix& m) {
    require_square(m, "matrix");
    if (!all_finite(m)) throw std::invalid_argument("matrix has non-finite entries");
    return spectral_radius(m) < 1.0 - tol::spectral;
}

/// Kalman rank test on [B, AB, ..., A^{d-1} B].
inline bool is_controllable(const Matrix& a, const Matrix& b) {
    require_square(a, "A");
    if (b.rows() != a.rows() || b.cols() < 1)
        throw DimensionError("B must have as many rows as A, got " + shape_of(b) + " vs " + shape_of(a));
    const Eigen::Index d = a.rows();
    Matrix ctrb(d, d * b.cols());
    Matrix block = b;
    for (Eigen::Index k = 0; k < d; ++k) {
        ctrb.middleCols(k * b.cols(), b.cols()) = block;
        block = a * block;
    }
    return numerical_rank(ctrb) == d;
}

/**
 * @brief N plants sharing a network that serves M of them per time step.
 *
 * Plants are kept sorted by index and the indices are exactly 1..N.
 */
struct NcsConfig {
    std::vector<PlantModel> plants;
    int capacity = 1;

    [[nodiscard]] int size() const { return static_cast<int>(plants.size()); }

    [[nodiscard]] const PlantModel& plant(int index) const {
        if (index < 1 || index > size()) throw std::out_of_range("unknown plant index " + std::to_string(index));
        return plants[static_cast<std::size_t>(index - 1)];
    }

    void validate() const {
        const int n = size();
        if (capacity <= 0 || capacity >= n)
            throw std::invalid_argument("capacity must satisfy 0<M<N (M=" + std::to_string(capacity) +
                                        ", N=" + std::to_string(n) + ")");
        for (int i = 0; i < n; ++i) {
            if (plants[static_cast<std::size_t>(i)].index != i + 1)
                throw std::invalid_argument("plant indices must be exactly 1..N");
            plants[static_cast<std::size_t>(i)].validate();
        }
    }
};

inline NcsConfig make_ncs(std::vector<PlantModel> plants, int capacity) {
    std::sort(plants.begin(), plants.end(), [](const auto& a, const auto& b) { return a.index < b.index; });
    NcsConfig c{std::move(plants), capacity};
    c.validate();
    return c;
}

struct PlantAssumptions {
    int index = 0;
    bool open_loop_unstable = false;
    bool has_gain = false;
    bool closed_loop_stable = false;
    bool controllable = false;

    [[nodiscard]] bool passed() const {
        return open_loop_unstable && has_gain && closed_loop_stable && controllable;
    }
};

struct AssumptionReport {
    std::vector<PlantAssumptions> plants;
    bool divisible = false;  // N % M == 0

    [[nodiscard]] bool passed() const {
        return divisible && std::all_of(plants.begin(), plants.end(), [](const auto& p) { return p.passed(); });
    }

    /// Everything except the gain flags; what controller synthesis needs.
    [[nodiscard]] bool plant_data_passed() const {
        return divisible && std::all_of(plants.begin(), plants.end(), [](const auto& p) {
                   return p.open_loop_unstable && p.controllable;
               });
    }
};

inline AssumptionReport check_assumptions(const NcsConfig& config) {
    AssumptionReport report;
    report.divisible = config.capacity > 0 && config.size() % config.capacity == 0;
    for (const auto& plant : config.plants) {
        PlantAssumptions a;
        a.index = plant.index;
        a.open_loop_unstable = !is_schur_stable(plant.A);
        a.controllable = is_controllable(plant.A, plant.B);
        a.has_gain = plant.has_gain();
        a.closed_loop_stable = a.has_gain && is_schur_stable(closed_loop_matrix(plant));
        report.plants.push_back(a);
    }
    return report;
}

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr int kGenerationBudget = 10000;

/**
 * Random benchmark plants: A with entries uniform on [-2,2], B a single
 * column with entries uniform on {0,1}. Draws of (A, B) are rejected until
 * A is unstable and (A, B) is controllable. No gains are set.
 */
inline NcsConfig generate_random_ncs(int n, int d, std::uint64_t seed, int capacity = 1) {
    if (n < 2 || d < 1) throw std::invalid_argument("random NCS needs N >= 2 and d >= 1");
    std::vector<PlantModel> plants;
    plants.reserve(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        Xoshiro256 rng(derive_seed(seed, "random-ncs/plant", static_cast<std::uint64_t>(i)));
        bool accepted = false;
        for (int attempt = 0; attempt < kGenerationBudget && !accepted; ++attempt) {
            Matrix a(d, d);
            for (Eigen::Index r = 0; r < d; ++r)
                for (Eigen::Index c = 0; c < d; ++c) a(r, c) = rng.uniform(-2.0, 2.0);
            Matrix b(d, 1);
            for (Eigen::Index r = 0; r < d; ++r) b(r, 0) = static_cast<double>(rng.below(2));
            if (is_schur_stable(a) || !is_controllable(a, b)) continue;
            plants.push_back(PlantModel{i, std::move(a), std::move(b), std::nullopt});
            accepted = true;
        }
        if (!accepted)
            throw GenerationError("resampling budget exhausted for plant " + std::to_string(i));
    }
    NcsConfig config{std::move(plants), capacity};
    config.validate();
    return config;
}

}  // namespace netsched

#endif  // NETSCHED_MODEL_HPP
