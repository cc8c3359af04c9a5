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
#ifndef NETSCHED_SIM_HPP
#define NETSCHED_SIM_HPP

#include "netsched/model.hpp"
#include "netsched/parallel.hpp"
#include "netsched/partition.hpp"
#include "netsched/random.hpp"
#include "netsched/scheduler.hpp"

#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsched {

/// States x(0..T) of one plant and the modes sigma(0..T-1) that produced them.
struct Trajectory {
    int plant = 0;
    std::vector<Vector> states;
    std::vector<Mode> modes;
};

/// A state norm above this marks the run as divergent.
inline constexpr double kOverflowGuard = 1e150;

/**
 * x(t+1) = A_{sigma(t)} x(t). Each step is also evaluated as A x + B u with
 * u = K x (stable) or u = 0 (unstable); the two must agree to 1e-12 relative.
 */
inline Trajectory simulate_plant(const PlantModel& plant, const std::vector<Mode>& modes, const Vector& x0) {
    const auto mm = mode_matrices(plant);
    if (x0.size() != plant.state_dim()) throw DimensionError("initial state has wrong dimension");
    Trajectory traj;
    traj.plant = plant.index;
    traj.modes = modes;
    traj.states.reserve(modes.size() + 1);
    traj.states.push_back(x0);
    for (Mode m : modes) {
        const Vector& x = traj.states.back();
        Vector next = (m == Mode::stable ? mm.stable : mm.unstable) * x;
        const Vector drift = plant.A * x;
        const Vector input = m == Mode::stable ? Vector(plant.B * (*plant.K * x)) : Vector::Zero(x.size());
        const Vector direct = drift + input;
        const double scale = drift.norm() + input.norm() + next.norm();
        if ((direct - next).norm() > 1e-12 * scale && std::isfinite(scale))
            throw std::logic_error("mode-matrix and input forms of the update disagree");
        traj.states.push_back(std::move(next));
    }
    return traj;
}

/// Partial sums sum_{t<=tau} ||x(t)||^2 over the first `horizon` states.
inline std::vector<double> cumulative_cost(const Trajectory& traj, std::size_t horizon) {
    if (horizon > traj.states.size()) throw std::out_of_range("horizon exceeds trajectory length");
    std::vector<double> sums;
    sums.reserve(horizon);
    double acc = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
        acc += traj.states[t].squaredNorm();
        sums.push_back(acc);
    }
    return sums;
}

inline std::vector<double> cumulative_cost(const Trajectory& traj) { return cumulative_cost(traj, traj.states.size()); }

/// Number of trailing steps used by the tail diagnostic: the last tenth of the run.
inline std::size_t tail_window(std::size_t states) { return std::max<std::size_t>(1, (states - 1) / 10); }

/// Cost growth over the final tenth of the run divided by the total cost (0 for a zero run).
inline double tail_increment_ratio(const std::vector<double>& sums) {
    if (sums.size() < 2) return 0.0;
    const double total = sums.back();
    if (total <= 0.0) return 0.0;
    const std::size_t w = tail_window(sums.size());
    return (total - sums[sums.size() - 1 - w]) / total;
}

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::int64_t trials = 0;
    std::int64_t horizon = 0;
    double tail_ratio = 0.0;
    bool diverged = false;
};

/**
 * Averages the truncated cost sum_{t=0}^{T} ||x(t)||^2 over independent
 * i.i.d. schedules. Trial k uses the sub-stream derive_seed(seed, "mc", k);
 * results are combined in trial order, so the estimate does not depend on
 * the thread count.
 */
inline MonteCarloEstimate estimate_stochastic_stability(const PlantModel& plant, const ScheduleParameters& params,
                                                        const Vector& x0, std::int64_t horizon, std::int64_t trials,
                                                        std::uint64_t seed, int threads = 1) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const auto mm = mode_matrices(plant);
    if (x0.size() != plant.state_dim()) throw DimensionError("initial state has wrong dimension");
    const auto block = params.partition.block_of(plant.index);
    if (!block) throw std::out_of_range("plant is in no block");

    const auto n_states = static_cast<std::size_t>(horizon) + 1;
    const std::size_t cut = n_states - 1 - tail_window(n_states);
    struct TrialCost {
        double total = 0.0;
        double before_tail = 0.0;
        bool diverged = false;
    };
    std::vector<TrialCost> costs(static_cast<std::size_t>(trials));
    parallel_for(costs.size(), threads, [&](std::size_t k) {
        const auto schedule = generate_schedule_iid(params, horizon, derive_seed(seed, "mc", k));
        Vector x = x0;
        TrialCost c;
        for (std::size_t t = 0; t < n_states; ++t) {
            const double nx = x.squaredNorm();
            if (!(std::sqrt(nx) <= kOverflowGuard)) {
                c.diverged = true;
                break;
            }
            c.total += nx;
            if (t == cut) c.before_tail = c.total;
            if (t + 1 < n_states) x = (schedule.seq[t] == *block ? mm.stable : mm.unstable) * x;
        }
        costs[k] = c;
    });

    MonteCarloEstimate est;
    est.trials = trials;
    est.horizon = horizon;
    double sum = 0.0;
    double sum_before = 0.0;
    for (const auto& c : costs) {
        est.diverged = est.diverged || c.diverged;
        sum += c.total;
        sum_before += c.before_tail;
    }
    if (est.diverged) {
        est.mean = std::numeric_limits<double>::infinity();
        est.standard_error = std::numeric_limits<double>::infinity();
        est.tail_ratio = 1.0;
        return est;
    }
    est.mean = sum / static_cast<double>(trials);
    double ss = 0.0;
    for (const auto& c : costs) ss += (c.total - est.mean) * (c.total - est.mean);
    est.standard_error = trials > 1 ? std::sqrt(ss / static_cast<double>(trials - 1) / static_cast<double>(trials)) : 0.0;
    est.tail_ratio = sum > 0.0 ? (sum - sum_before) / sum : 0.0;
    return est;
}

/// Advances every plant under one shared schedule; plant i follows mode_signal(schedule, params, i).
inline std::vector<Trajectory> simulate_ncs(const NcsConfig& config, const ScheduleParameters& params,
                                            const Schedule& schedule, const std::vector<Vector>& x0s) {
    if (x0s.size() != config.plants.size()) throw std::invalid_argument("need one initial state per plant");
    for (const auto& plant : config.plants)
        if (!plant.has_gain()) throw std::invalid_argument("gain not set for plant " + std::to_string(plant.index));
    std::vector<Trajectory> out;
    out.reserve(config.plants.size());
    for (std::size_t i = 0; i < config.plants.size(); ++i) {
        const auto& plant = config.plants[i];
        out.push_back(simulate_plant(plant, mode_signal(schedule, params, plant.index), x0s[i]));
    }
    return out;
}

/// CSV: t,plant,mode,norm_sq,x1..xd. The final state has no outgoing mode and is marked "-".
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    const auto d = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t,plant,mode,norm_sq";
    for (Eigen::Index k = 1; k <= d; ++k) os << ",x" << k;
    os << '\n' << std::setprecision(17);
    for (std::size_t t = 0; t < traj.states.size(); ++t) {
        os << t << ',' << traj.plant << ',' << (t < traj.modes.size() ? to_string(traj.modes[t]) : "-") << ','
           << traj.states[t].squaredNorm();
        for (Eigen::Index k = 0; k < d; ++k) os << ',' << traj.states[t](k);
        os << '\n';
    }
}

/// CSV: t,plant,partial_sum.
inline void write_cost_csv(std::ostream& os, int plant, const std::vector<double>& sums) {
    os << "t,plant,partial_sum\n" << std::setprecision(17);
    for (std::size_t t = 0; t < sums.size(); ++t) os << t << ',' << plant << ',' << sums[t] << '\n';
}

}  // namespace netsched

#endif  // NETSCHED_SIM_HPP
