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
#ifndef NETSCHED_PARTITION_HPP
#define NETSCHED_PARTITION_HPP

#include "netsched/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace netsched {

/**
 * @brief Disjoint blocks c_1..c_v of M plants each covering {1..N}.
 *
 * Blocks are sorted internally and ordered by their smallest element.
 */
struct Partition {
    std::vector<std::vector<int>> blocks;

    [[nodiscard]] int block_count() const { return static_cast<int>(blocks.size()); }

    /// 1-based index of the block containing plant, or nullopt.
    [[nodiscard]] std::optional<int> block_of(int plant) const {
        for (std::size_t j = 0; j < blocks.size(); ++j)
            if (std::binary_search(blocks[j].begin(), blocks[j].end(), plant)) return static_cast<int>(j + 1);
        return std::nullopt;
    }

    friend bool operator==(const Partition&, const Partition&) = default;
};

/**
 * Checks that blocks have size M, are pairwise disjoint, cover exactly 1..N
 * and that every plant lies in exactly one block. Returns an empty string when
 * valid, otherwise a description of the first violation.
 */
inline std::string partition_violation(const Partition& part, int n, int m) {
    std::vector<int> seen(static_cast<std::size_t>(n + 1), 0);
    for (const auto& block : part.blocks) {
        if (static_cast<int>(block.size()) != m) return "block size differs from capacity";
        for (int plant : block) {
            if (plant < 1 || plant > n) return "plant id out of range";
            if (++seen[static_cast<std::size_t>(plant)] > 1) return "plant " + std::to_string(plant) + " in two blocks";
        }
    }
    for (int i = 1; i <= n; ++i)
        if (seen[static_cast<std::size_t>(i)] != 1) return "plant " + std::to_string(i) + " not covered";
    return {};
}

/// Puts blocks in canonical form: each block sorted, blocks ordered by smallest element.
inline Partition canonical(Partition part) {
    for (auto& b : part.blocks) std::sort(b.begin(), b.end());
    std::sort(part.blocks.begin(), part.blocks.end());
    return part;
}

inline void require_divisible_capacity(int n, int m) {
    if (m <= 0 || m >= n) throw std::domain_error("capacity must satisfy 0<M<N");
    if (n % m != 0) throw std::domain_error("N % M must be 0 (N=" + std::to_string(n) + ", M=" + std::to_string(m) + ")");
}

/**
 * @brief Lazy enumeration of all unordered partitions of {1..N} into N/M
 * blocks of size M, each produced once in canonical form.
 *
 * Order: block 1 is {1} plus an (M-1)-combination of the rest in lexicographic
 * order, block 2 starts at the smallest unused plant, and so on (depth-first).
 */
class PartitionEnumerator {
public:
    PartitionEnumerator(int n, int m) : n_(n), m_(m) {
        require_divisible_capacity(n, m);
        v_ = n / m;
    }

    /// Next partition, or nullopt when exhausted.
    std::optional<Partition> next() {
        if (done_) return std::nullopt;
        if (!started_) {
            started_ = true;
            combos_.assign(static_cast<std::size_t>(v_), {});
            for (int j = 0; j < v_; ++j) fill_block(j, 0);
            return current();
        }
        // Advance the deepest block that still has a next combination.
        for (int j = v_ - 2; j >= 0; --j) {
            if (advance_block(j)) {
                for (int k = j + 1; k < v_; ++k) fill_block(k, 0);
                return current();
            }
        }
        done_ = true;
        return std::nullopt;
    }

    /// Total count N! / ((M!)^v v!), computed exactly; throws on 64-bit overflow.
    static std::uint64_t count(int n, int m) {
        require_divisible_capacity(n, m);
        // Product over blocks of C(remaining - 1, m - 1).
        unsigned __int128 total = 1;
        for (int remaining = n; remaining > 0; remaining -= m) {
            total *= binomial(remaining - 1, m - 1);
            if (total > static_cast<unsigned __int128>(UINT64_MAX)) throw std::overflow_error("partition count overflow");
        }
        return static_cast<std::uint64_t>(total);
    }

    static std::uint64_t binomial(int n, int k) {
        if (k < 0 || k > n) return 0;
        k = std::min(k, n - k);
        unsigned __int128 r = 1;
        for (int i = 1; i <= k; ++i) {
            r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
            if (r > static_cast<unsigned __int128>(UINT64_MAX)) throw std::overflow_error("binomial overflow");
        }
        return static_cast<std::uint64_t>(r);
    }

private:
    // Pool of plants still available for block j (excluding blocks 0..j-1).
    std::vector<int> pool_for(int j) const {
        std::vector<bool> used(static_cast<std::size_t>(n_ + 1), false);
        for (int k = 0; k < j; ++k)
            for (int p : block(k)) used[static_cast<std::size_t>(p)] = true;
        std::vector<int> pool;
        for (int i = 1; i <= n_; ++i)
            if (!used[static_cast<std::size_t>(i)]) pool.push_back(i);
        return pool;
    }

    std::vector<int> block(int k) const {
        const auto& c = combos_[static_cast<std::size_t>(k)];
        std::vector<int> out;
        out.push_back(pools_[static_cast<std::size_t>(k)].front());
        for (int idx : c) out.push_back(pools_[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx)]);
        return out;
    }

    // First combination of block j: pool positions 1..M-1.
    void fill_block(int j, int) {
        if (static_cast<int>(pools_.size()) < v_) pools_.resize(static_cast<std::size_t>(v_));
        pools_[static_cast<std::size_t>(j)] = pool_for(j);
        auto& c = combos_[static_cast<std::size_t>(j)];
        c.clear();
        for (int i = 1; i < m_; ++i) c.push_back(i);
    }

    // Lexicographic successor of the (M-1)-combination over pool positions 1..size-1.
    bool advance_block(int j) {
        auto& c = combos_[static_cast<std::size_t>(j)];
        const int size = static_cast<int>(pools_[static_cast<std::size_t>(j)].size());
        const int k = static_cast<int>(c.size());
        for (int i = k - 1; i >= 0; --i) {
            if (c[static_cast<std::size_t>(i)] < size - (k - i)) {
                ++c[static_cast<std::size_t>(i)];
                for (int t = i + 1; t < k; ++t) c[static_cast<std::size_t>(t)] = c[static_cast<std::size_t>(t - 1)] + 1;
                return true;
            }
        }
        return false;
    }

    Partition current() const {
        Partition p;
        for (int j = 0; j < v_; ++j) {
            auto b = block(j);
            std::sort(b.begin(), b.end());
            p.blocks.push_back(std::move(b));
        }
        return p;
    }

    int n_;
    int m_;
    int v_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::vector<std::vector<int>> pools_;
    std::vector<std::vector<int>> combos_;
};

/// Materialises every partition; intended for small N.
inline std::vector<Partition> enumerate_partitions(int n, int m) {
    PartitionEnumerator it(n, m);
    std::vector<Partition> out;
    while (auto p = it.next()) out.push_back(std::move(*p));
    return out;
}

/// Activation probabilities p_1..p_v, each a positive multiple of the grid step h.
struct ProbabilityVector {
    std::vector<Rational> values;

    [[nodiscard]] Rational sum() const {
        Rational s(0);
        for (const auto& v : values) s += v;
        return s;
    }
    [[nodiscard]] int size() const { return static_cast<int>(values.size()); }

    friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;
};

/// Largest integer r with r h < 1.
inline std::int64_t grid_top(const Rational& h) {
    if (h <= Rational(0) || h >= Rational(1)) throw std::domain_error("step h must lie in ]0,1[");
    // r h < 1  <=>  r < den/num.
    const std::int64_t q = h.den() / h.num();
    return (h.den() % h.num() == 0) ? q - 1 : q;
}

/**
 * @brief Lazy enumeration of all ordered v-tuples (k_1 h, ..., k_v h) with
 * 1 <= k_j <= r and exact sum 1, in lexicographic order.
 *
 * With nondecreasing = true only sorted tuples are produced (one per multiset).
 */
class ProbabilityGrid {
public:
    ProbabilityGrid(int v, Rational h, bool nondecreasing = false) : v_(v), h_(h), sorted_(nondecreasing) {
        if (v < 2) throw std::domain_error("need at least two blocks");
        r_ = grid_top(h);
        // sum k_j h = 1 requires h = 1/K for integer K after reduction.
        feasible_ = (h_.num() == 1);
        total_ = feasible_ ? h_.den() : 0;
    }

    [[nodiscard]] std::int64_t top() const { return r_; }

    std::optional<ProbabilityVector> next() {
        if (!feasible_ || done_) return std::nullopt;
        if (!started_) {
            started_ = true;
            ks_.assign(static_cast<std::size_t>(v_), 0);
            if (!fill_from(0, total_, 1)) {
                done_ = true;
                return std::nullopt;
            }
            return current();
        }
        for (int i = v_ - 2; i >= 0; --i) {
            std::int64_t prefix = 0;
            for (int t = 0; t < i; ++t) prefix += ks_[static_cast<std::size_t>(t)];
            for (std::int64_t k = ks_[static_cast<std::size_t>(i)] + 1; k <= r_; ++k) {
                ks_[static_cast<std::size_t>(i)] = k;
                if (fill_from(i + 1, total_ - prefix - k, sorted_ ? k : 1)) return current();
            }
        }
        done_ = true;
        return std::nullopt;
    }

private:
    // Smallest lexicographic completion of positions i..v-1 summing to rest with each k >= lo.
    bool fill_from(int i, std::int64_t rest, std::int64_t lo) {
        const int slots = v_ - i;
        if (slots == 0) return rest == 0;
        for (std::int64_t k = lo; k <= r_; ++k) {
            const std::int64_t after = rest - k;
            const int left = slots - 1;
            const std::int64_t next_lo = sorted_ ? k : 1;
            if (left == 0) {
                if (after == 0) {
                    ks_[static_cast<std::size_t>(i)] = k;
                    return true;
                }
                continue;
            }
            if (after < next_lo * left) break;
            if (after > r_ * left) continue;
            ks_[static_cast<std::size_t>(i)] = k;
            if (fill_from(i + 1, after, next_lo)) return true;
        }
        return false;
    }

    ProbabilityVector current() const {
        ProbabilityVector p;
        for (auto k : ks_) p.values.push_back(Rational(k) * h_);
        return p;
    }

    int v_;
    Rational h_;
    bool sorted_;
    std::int64_t r_ = 0;
    bool feasible_ = false;
    std::int64_t total_ = 0;
    bool started_ = false;
    bool done_ = false;
    std::vector<std::int64_t> ks_;
};

inline std::vector<ProbabilityVector> enumerate_probability_vectors(int v, const Rational& h) {
    ProbabilityGrid grid(v, h);
    std::vector<ProbabilityVector> out;
    while (auto p = grid.next()) out.push_back(std::move(*p));
    return out;
}

/// Inputs of the probabilistic scheduler: blocks and their activation probabilities.
struct ScheduleParameters {
    Partition partition;
    ProbabilityVector probabilities;

    [[nodiscard]] int block_count() const { return partition.block_count(); }

    /// Probability that plant is served at a given step.
    [[nodiscard]] Rational probability_of(int plant) const {
        auto j = partition.block_of(plant);
        if (!j) throw std::out_of_range("plant " + std::to_string(plant) + " is in no block");
        return probabilities.values[static_cast<std::size_t>(*j - 1)];
    }

    void validate(int n, int m) const {
        require_divisible_capacity(n, m);
        if (partition.block_count() != n / m) throw std::invalid_argument("partition must have N/M blocks");
        if (auto why = partition_violation(partition, n, m); !why.empty()) throw std::invalid_argument(why);
        if (probabilities.size() != partition.block_count())
            throw std::invalid_argument("need one probability per block");
        for (const auto& p : probabilities.values)
            if (p <= Rational(0) || p >= Rational(1)) throw std::invalid_argument("probabilities must lie in ]0,1[");
        if (probabilities.sum() != Rational(1)) throw std::invalid_argument("probabilities must sum to 1");
    }
};

}  // namespace netsched

#endif  // NETSCHED_PARTITION_HPP
