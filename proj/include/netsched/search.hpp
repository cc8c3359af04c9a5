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
#ifndef NETSCHED_SEARCH_HPP
#define NETSCHED_SEARCH_HPP

/**
 * @file search.hpp
 * @brief Exhaustive selection of blocks and activation probabilities.
 *
 * A candidate (partition, probability vector) is feasible iff every plant i in
 * block j admits a certificate at probability p_j. Plant i only couples to its
 * own block probability, so feasibility is a table F(i, p) that is evaluated
 * lazily and memoised.
 *
 * Candidates are grouped by the multiset of probabilities: for a multiset
 * {q_1 <= ... <= q_v}, some (partition, ordering) is feasible iff plants can be
 * assigned to v labelled slots of capacity M with F(i, q_slot) true for all i,
 * which is a bipartite b-matching question. The search visits multisets in
 * lexicographic order and, within one, assigns plants in index order to the
 * lowest slot that still admits a completion. The answer (feasible or not)
 * is the same as enumerating every partition and every ordered probability
 * vector.
 */

#include "netsched/certify.hpp"
#include "netsched/model.hpp"
#include "netsched/parallel.hpp"
#include "netsched/partition.hpp"
#include "netsched/synthesis.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netsched {

/// What a per-(plant, p) feasibility check produces when it succeeds.
struct PlantEvidence {
    StabilityCertificate certificate;
    std::optional<Matrix> gain;  // set when the gain was designed during the search
};

struct SearchResult {
    ScheduleParameters params;
    std::vector<PlantEvidence> evidence;  // index i-1 for plant i
};

enum class SearchStatus { found, infeasible, budget_exhausted };

inline const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::infeasible: return "infeasible";
        case SearchStatus::budget_exhausted: return "budget exhausted";
    }
    return "?";
}

struct SearchOutcome {
    SearchStatus status = SearchStatus::infeasible;
    std::optional<SearchResult> result;
    std::uint64_t multisets_examined = 0;
    std::uint64_t evaluations = 0;  // distinct (plant, p) checks performed

    [[nodiscard]] bool found() const { return status == SearchStatus::found; }
};

struct SearchOptions {
    double kappa = kDefaultKappa;
    int threads = 1;
    double time_budget_seconds = 0.0;  // 0 disables the budget
};

using FeasibilityOracle = std::function<std::optional<PlantEvidence>(int plant, const Rational& p)>;

namespace detail {

/// Kuhn-style augmenting search on plants x slots; slot capacities in `cap`.
class SlotMatcher {
public:
    SlotMatcher(std::vector<std::vector<int>> edges, std::vector<int> cap)
        : edges_(std::move(edges)), cap_(std::move(cap)) {}

    /// True if every plant in `plants` can be matched.
    bool perfect(const std::vector<int>& plants) {
        holders_.assign(cap_.size(), {});
        for (int plant : plants) {
            visited_.assign(cap_.size(), false);
            if (!augment(plant)) return false;
        }
        return true;
    }

private:
    bool augment(int plant) {
        for (int slot : edges_[static_cast<std::size_t>(plant)]) {
            auto s = static_cast<std::size_t>(slot);
            if (visited_[s]) continue;
            visited_[s] = true;
            if (static_cast<int>(holders_[s].size()) < cap_[s]) {
                holders_[s].push_back(plant);
                return true;
            }
            for (auto& other : holders_[s]) {
                if (augment(other)) {
                    other = plant;
                    return true;
                }
            }
        }
        return false;
    }

    std::vector<std::vector<int>> edges_;
    std::vector<int> cap_;
    std::vector<std::vector<int>> holders_;
    std::vector<bool> visited_;
};

}  // namespace detail

/**
 * Search over the h-grid using an arbitrary per-(plant, p) oracle. Plants are
 * 1..n, blocks have size m.
 */
inline SearchOutcome search_with_oracle(int n, int m, const Rational& h, const FeasibilityOracle& oracle,
                                        const SearchOptions& opts = {}) {
    require_divisible_capacity(n, m);
    const int v = n / m;
    const auto start = std::chrono::steady_clock::now();
    auto over_budget = [&]() {
        if (opts.time_budget_seconds <= 0.0) return false;
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() >
               opts.time_budget_seconds;
    };

    SearchOutcome outcome;
    // memo[p] -> per-plant evidence (index plant-1).
    std::map<Rational, std::vector<std::optional<PlantEvidence>>> memo;
    auto column = [&](const Rational& p) -> const std::vector<std::optional<PlantEvidence>>& {
        auto it = memo.find(p);
        if (it != memo.end()) return it->second;
        std::vector<std::optional<PlantEvidence>> col(static_cast<std::size_t>(n));
        parallel_for(col.size(), opts.threads, [&](std::size_t i) { col[i] = oracle(static_cast<int>(i) + 1, p); });
        outcome.evaluations += static_cast<std::uint64_t>(n);
        return memo.emplace(p, std::move(col)).first->second;
    };

    ProbabilityGrid grid(v, h, /*nondecreasing=*/true);
    while (auto q = grid.next()) {
        if (over_budget()) {
            outcome.status = SearchStatus::budget_exhausted;
            return outcome;
        }
        ++outcome.multisets_examined;
        // feasible[i][j]: plant i+1 works in slot j.
        std::vector<std::vector<bool>> feasible(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(v)));
        bool every_plant_has_slot = true;
        for (int j = 0; j < v; ++j) {
            const auto& col = column(q->values[static_cast<std::size_t>(j)]);
            for (int i = 0; i < n; ++i) feasible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = col[static_cast<std::size_t>(i)].has_value();
        }
        for (int i = 0; i < n && every_plant_has_slot; ++i) {
            bool any = false;
            for (int j = 0; j < v; ++j) any = any || feasible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            every_plant_has_slot = any;
        }
        if (!every_plant_has_slot) continue;

        std::vector<int> cap(static_cast<std::size_t>(v), m);
        std::vector<int> slot_of(static_cast<std::size_t>(n), -1);
        auto completable = [&](int from) {
            std::vector<std::vector<int>> edges(static_cast<std::size_t>(n));
            std::vector<int> rest;
            for (int i = from; i < n; ++i) {
                rest.push_back(i);
                for (int j = 0; j < v; ++j)
                    if (feasible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) edges[static_cast<std::size_t>(i)].push_back(j);
            }
            return detail::SlotMatcher(std::move(edges), cap).perfect(rest);
        };
        if (!completable(0)) continue;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < v; ++j) {
                if (!feasible[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] || cap[static_cast<std::size_t>(j)] == 0) continue;
                --cap[static_cast<std::size_t>(j)];
                if (completable(i + 1)) {
                    slot_of[static_cast<std::size_t>(i)] = j;
                    break;
                }
                ++cap[static_cast<std::size_t>(j)];
            }
            if (slot_of[static_cast<std::size_t>(i)] < 0) throw std::logic_error("matching lost feasibility");
        }

        // Canonical form: blocks ordered by smallest member; probabilities follow their block.
        std::vector<std::pair<std::vector<int>, Rational>> blocks(static_cast<std::size_t>(v));
        for (int j = 0; j < v; ++j) blocks[static_cast<std::size_t>(j)].second = q->values[static_cast<std::size_t>(j)];
        for (int i = 0; i < n; ++i) blocks[static_cast<std::size_t>(slot_of[static_cast<std::size_t>(i)])].first.push_back(i + 1);
        std::sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

        SearchResult res;
        for (auto& [members, prob] : blocks) {
            res.params.partition.blocks.push_back(members);
            res.params.probabilities.values.push_back(prob);
        }
        if (auto why = partition_violation(res.params.partition, n, m); !why.empty())
            throw std::logic_error("search produced an invalid partition: " + why);
        for (int i = 1; i <= n; ++i) {
            const auto& ev = memo.at(res.params.probability_of(i))[static_cast<std::size_t>(i - 1)];
            res.evidence.push_back(*ev);
        }
        outcome.status = SearchStatus::found;
        outcome.result = std::move(res);
        return outcome;
    }
    outcome.status = SearchStatus::infeasible;
    return outcome;
}

class SynthesisRequired : public std::invalid_argument {
public:
    SynthesisRequired() : std::invalid_argument("synthesis required first: every plant needs a gain K") {}
};

/// Certificate oracle for plants with fixed gains.
inline FeasibilityOracle certificate_oracle(const NcsConfig& config, double kappa) {
    for (const auto& plant : config.plants)
        if (!plant.has_gain()) throw SynthesisRequired();
    std::vector<ModeMatrices> modes;
    for (const auto& plant : config.plants) modes.push_back(mode_matrices(plant));
    return [modes = std::move(modes), kappa](int plant, const Rational& p) -> std::optional<PlantEvidence> {
        const auto& mm = modes[static_cast<std::size_t>(plant - 1)];
        auto cert = find_certificate(mm.stable, mm.unstable, p, kappa);
        if (!cert) return std::nullopt;
        return PlantEvidence{std::move(*cert), std::nullopt};
    };
}

/// Gain-design oracle: the plant is feasible at p iff synthesis succeeds there.
inline FeasibilityOracle synthesis_oracle(const NcsConfig& config, double kappa) {
    return [plants = config.plants, kappa](int plant, const Rational& p) -> std::optional<PlantEvidence> {
        auto s = synthesize_plant(plants[static_cast<std::size_t>(plant - 1)], p, kappa);
        if (!s.ok()) return std::nullopt;
        return PlantEvidence{std::move(*s.certificate), std::move(s.K)};
    };
}

/// Selection of blocks and probabilities for plants whose gains are already set.
inline SearchOutcome search_schedule_parameters(const NcsConfig& config, const Rational& h,
                                                const SearchOptions& opts = {}) {
    config.validate();
    return search_with_oracle(config.size(), config.capacity, h, certificate_oracle(config, opts.kappa), opts);
}

/// Joint selection where each candidate runs controller synthesis (plants need no gains).
inline SearchOutcome search_with_synthesis(const NcsConfig& config, const Rational& h, const SearchOptions& opts = {}) {
    config.validate();
    return search_with_oracle(config.size(), config.capacity, h, synthesis_oracle(config, opts.kappa), opts);
}

}  // namespace netsched

#endif  // NETSCHED_SEARCH_HPP
