#pragma once

#include <cstdint>
#include <vector>

#include "ksep/state.hpp"

namespace ksep {

/// Division of the subsystem labels 1..n into disjoint non-empty blocks. Each
/// block is sorted and blocks are ordered by their smallest member, so every set
/// partition has exactly one representation.
class Partition {
public:
    explicit Partition(std::vector<std::vector<int>> blocks);

    [[nodiscard]] const std::vector<std::vector<int>>& blocks() const { return blocks_; }
    [[nodiscard]] int k() const { return static_cast<int>(blocks_.size()); }
    [[nodiscard]] int n() const { return n_; }

    friend bool operator==(const Partition&, const Partition&) = default;

private:
    std::vector<std::vector<int>> blocks_;
    int n_ = 0;
};

/// Every set partition of {1..n} into exactly k blocks, in restricted-growth order.
std::vector<Partition> enumerate_partitions(int n, int k);

/// Partition count from block-size patterns: for every integer partition of n into
/// k parts, n!/prod(m_i!) divided by the factorial of each repeated size's
/// multiplicity.
std::uint64_t count_partitions_formula(int n, int k);

/// Convex mixture of `terms` pure k-separable states of n subsystems with local
/// dimension d. Each term draws its own uniformly random k-block partition and
/// Gaussian block states; mixture weights are uniform draws, normalized.
/// Deterministic for a given seed. Dense internally, so d^n is capped at 4096.
DensityMatrix random_k_separable_state(int n, int k, int d, int terms, std::uint64_t seed);

}  // namespace ksep
