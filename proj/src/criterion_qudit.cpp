#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "ksep/criteria.hpp"

namespace ksep {

namespace {

Index index_of(const std::vector<int>& digits, int d) {
    Index idx = 0;
    for (int v : digits) idx = idx * static_cast<Index>(d) + static_cast<Index>(v);
    return idx + 1;
}

}  // namespace

IndexSets index_sets_criterion2(int n) {
    if (n < 2) throw std::invalid_argument("index_sets_criterion2: n must be >= 2");
    if (n > 9) throw std::invalid_argument("index_sets_criterion2: n must be <= 9");
    const int d = n;
    IndexSets sets;
    sets.family = CriterionFamily::qudit_w;
    sets.n = n;
    sets.d = d;

    struct Term {
        IndexPair lhs;
        IndexPair sqrt;
    };
    std::vector<Term> terms;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
        const Index p = index_of(perm, d);
        sets.diag_indices.push_back(p);
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                // the lower-index member of the pair has the smaller digit first
                const int a = perm[static_cast<std::size_t>(i)];
                const int b = perm[static_cast<std::size_t>(j)];
                if (a > b) continue;
                auto q = perm;
                std::swap(q[static_cast<std::size_t>(i)], q[static_cast<std::size_t>(j)]);
                auto low = perm;
                low[static_cast<std::size_t>(j)] = a;
                auto high = perm;
                high[static_cast<std::size_t>(i)] = b;
                terms.push_back({{p, index_of(q, d)}, {index_of(low, d), index_of(high, d)}});
            }
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    std::sort(terms.begin(), terms.end(), [](const Term& x, const Term& y) { return x.lhs < y.lhs; });
    for (const auto& t : terms) {
        sets.lhs_pairs.push_back(t.lhs);
        sets.sqrt_pairs.push_back(t.sqrt);
    }
    return sets;
}

CriterionReport evaluate_criterion2(const DensityMatrix& rho, int n, int k, double tolerance) {
    if (rho.n() != n || rho.d() != n) {
        throw std::invalid_argument("evaluate_criterion2: density matrix is not an n-qudit state with d = n");
    }
    const auto sets = index_sets_criterion2(n);
    return evaluate_index_sets(sets, k, tolerance, [&rho](Index r, Index c) { return rho.element(r, c); });
}

}  // namespace ksep
