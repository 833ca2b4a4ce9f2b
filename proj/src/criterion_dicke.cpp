#include <algorithm>
#include <stdexcept>

#include "ksep/criteria.hpp"

namespace ksep {

namespace {

// Subsets of bit positions are bitmasks; bit p is the p-th subsystem counted
// from the last one, so the 1-based matrix index of a mask is mask + 1.
Index index_of(std::uint64_t mask) { return mask + 1; }

std::vector<std::uint64_t> subsets_of_size(int n, int m) {
    std::vector<std::uint64_t> out;
    const std::uint64_t end = std::uint64_t{1} << n;
    // Gosper's hack: next larger integer with the same popcount
    for (std::uint64_t mask = (std::uint64_t{1} << m) - 1; mask < end;) {
        out.push_back(mask);
        const std::uint64_t low = mask & (~mask + 1);
        const std::uint64_t ripple = mask + low;
        mask = (((ripple ^ mask) >> 2) / low) | ripple;
    }
    return out;
}

}  // namespace

IndexSets index_sets_criterion1(int n, int m) {
    if (n < 1 || n > 30) throw std::invalid_argument("index_sets_criterion1: need 1 <= n <= 30");
    IndexSets sets;
    sets.family = CriterionFamily::dicke;
    sets.n = n;
    sets.d = 2;
    sets.m = m;
    if (m < 1 || m > n - 1) {
        sets.degenerate = true;
        return sets;
    }

    const auto level = subsets_of_size(n, m);
    struct Term {
        IndexPair lhs;
        IndexPair sqrt;
    };
    std::vector<Term> terms;
    for (std::uint64_t p : level) {
        sets.diag_indices.push_back(index_of(p));
        // Q = P with one member a moved to a non-member b
        for (int a = 0; a < n; ++a) {
            if (!(p >> a & 1U)) continue;
            for (int b = 0; b < n; ++b) {
                if (p >> b & 1U) continue;
                const std::uint64_t q = (p & ~(std::uint64_t{1} << a)) | (std::uint64_t{1} << b);
                if (q <= p) continue;
                terms.push_back({{index_of(p), index_of(q)}, {index_of(p & q), index_of(p | q)}});
            }
        }
    }
    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.lhs < y.lhs; });
    sets.lhs_pairs.reserve(terms.size());
    sets.sqrt_pairs.reserve(terms.size());
    for (const auto& t : terms) {
        sets.lhs_pairs.push_back(t.lhs);
        sets.sqrt_pairs.push_back(t.sqrt);
    }
    return sets;
}

CriterionReport evaluate_criterion1(const DensityMatrix& rho, int n, int m, int k, double tolerance) {
    if (rho.d() != 2 || rho.n() != n) {
        throw std::invalid_argument("evaluate_criterion1: density matrix is not an n-qubit state");
    }
    const auto sets = index_sets_criterion1(n, m);
    return evaluate_index_sets(sets, k, tolerance, [&rho](Index r, Index c) { return rho.element(r, c); });
}

}  // namespace ksep
