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
#ifndef NETSCHED_SCHEDULER_HPP
#define NETSCHED_SCHEDULER_HPP

#include "netsched/partition.hpp"
#include "netsched/random.hpp"
#include "netsched/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsched {

enum class ScheduleMode { iid, exact };

inline const char* to_string(ScheduleMode m) { return m == ScheduleMode::iid ? "iid" : "exact"; }

inline ScheduleMode parse_schedule_mode(const std::string& s) {
    if (s == "iid") return ScheduleMode::iid;
    if (s == "exact") return ScheduleMode::exact;
    throw std::invalid_argument("unknown schedule mode \"" + s + "\" (expected iid or exact)");
}

/// Realised block sequence gamma(0..T-1); entries are 1-based block indices.
struct Schedule {
    std::vector<int> seq;
    std::uint64_t seed = 0;
    ScheduleMode mode = ScheduleMode::iid;

    [[nodiscard]] std::size_t horizon() const { return seq.size(); }

    [[nodiscard]] std::vector<std::int64_t> counts(int v) const {
        std::vector<std::int64_t> c(static_cast<std::size_t>(v), 0);
        for (int j : seq) ++c.at(static_cast<std::size_t>(j - 1));
        return c;
    }
};

/// Per-block occurrence counts f_1..f_v, summing to T.
struct FrequencyTable {
    std::vector<std::int64_t> counts;

    [[nodiscard]] std::int64_t total() const { return std::accumulate(counts.begin(), counts.end(), std::int64_t{0}); }
};

/**
 * f_j = p_j T when every product is an integer; otherwise largest-remainder
 * apportionment (floor, then hand the leftover to the largest fractional
 * parts, ties to the smaller index).
 */
inline FrequencyTable frequency_table(const ProbabilityVector& probs, std::int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const std::size_t v = probs.values.size();
    FrequencyTable out;
    out.counts.resize(v);
    std::vector<Rational> remainder(v);
    std::int64_t assigned = 0;
    for (std::size_t j = 0; j < v; ++j) {
        const Rational exact = probs.values[j] * Rational(horizon);
        // floor for nonnegative values
        const std::int64_t fl = exact.num() / exact.den();
        out.counts[j] = fl;
        remainder[j] = exact - Rational(fl);
        assigned += fl;
    }
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::int64_t left = horizon - assigned, k = 0; left > 0; --left, ++k)
        ++out.counts[order[static_cast<std::size_t>(k) % v]];
    return out;
}

/**
 * Frequency-exact schedule: a uniformly random ordering of the multiset with
 * f_j copies of block j (Fisher-Yates over an explicit length-T array).
 */
inline Schedule generate_schedule_exact(const ScheduleParameters& params, std::int64_t horizon, std::uint64_t seed) {
    const auto table = frequency_table(params.probabilities, horizon);
    Schedule s;
    s.seed = seed;
    s.mode = ScheduleMode::exact;
    s.seq.reserve(static_cast<std::size_t>(horizon));
    for (std::size_t j = 0; j < table.counts.size(); ++j)
        s.seq.insert(s.seq.end(), static_cast<std::size_t>(table.counts[j]), static_cast<int>(j + 1));
    Xoshiro256 rng(derive_seed(seed, "schedule/exact"));
    for (std::size_t i = s.seq.size(); i > 1; --i) {
        const auto k = static_cast<std::size_t>(rng.below(i));
        std::swap(s.seq[i - 1], s.seq[k]);
    }
    return s;
}

/**
 * Independent draws: gamma(t) = j with probability exactly p_j, sampled as a
 * uniform integer below the common denominator of the p_j.
 */
inline Schedule generate_schedule_iid(const ScheduleParameters& params, std::int64_t horizon, std::uint64_t seed) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    const auto& p = params.probabilities.values;
    if (p.empty()) throw std::invalid_argument("no probabilities");
    std::int64_t denom = 1;
    for (const auto& q : p) denom = std::lcm(denom, q.den());
    std::vector<std::uint64_t> cumulative;
    std::int64_t acc = 0;
    for (const auto& q : p) {
        acc += q.num() * (denom / q.den());
        cumulative.push_back(static_cast<std::uint64_t>(acc));
    }
    if (acc != denom) throw std::invalid_argument("probabilities must sum to 1");

    Schedule s;
    s.seed = seed;
    s.mode = ScheduleMode::iid;
    s.seq.resize(static_cast<std::size_t>(horizon));
    Xoshiro256 rng(derive_seed(seed, "schedule/iid"));
    for (auto& entry : s.seq) {
        const std::uint64_t u = rng.below(static_cast<std::uint64_t>(denom));
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        entry = static_cast<int>(it - cumulative.begin()) + 1;
    }
    return s;
}

inline Schedule generate_schedule(const ScheduleParameters& params, std::int64_t horizon, std::uint64_t seed,
                                  ScheduleMode mode) {
    return mode == ScheduleMode::exact ? generate_schedule_exact(params, horizon, seed)
                                       : generate_schedule_iid(params, horizon, seed);
}

enum class Mode : std::uint8_t { stable, unstable };

inline const char* to_string(Mode m) { return m == Mode::stable ? "s" : "u"; }

/// sigma(t) = stable iff plant is in block gamma(t).
inline std::vector<Mode> mode_signal(const Schedule& schedule, const ScheduleParameters& params, int plant) {
    const auto block = params.partition.block_of(plant);
    if (!block) throw std::out_of_range("unknown plant index " + std::to_string(plant));
    std::vector<Mode> modes;
    modes.reserve(schedule.seq.size());
    for (int j : schedule.seq) modes.push_back(j == *block ? Mode::stable : Mode::unstable);
    return modes;
}

/// CSV with columns t,block_index,plants; the plant ids of gamma(t) are quoted and comma-separated.
inline void write_schedule_csv(std::ostream& os, const Schedule& schedule, const ScheduleParameters& params) {
    os << "t,block_index,plants\n";
    for (std::size_t t = 0; t < schedule.seq.size(); ++t) {
        const int j = schedule.seq[t];
        os << t << ',' << j << ",\"";
        const auto& members = params.partition.blocks.at(static_cast<std::size_t>(j - 1));
        for (std::size_t k = 0; k < members.size(); ++k) os << (k ? "," : "") << members[k];
        os << "\"\n";
    }
}

}  // namespace netsched

#endif  // NETSCHED_SCHEDULER_HPP
