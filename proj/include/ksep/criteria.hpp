#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ksep/state.hpp"

namespace ksep {

/// Default absolute margin above which a criterion reports a violation.
inline constexpr double kViolationTolerance = 1e-9;

struct IndexPair {
    Index row;
    Index col;
    friend bool operator==(const IndexPair&, const IndexPair&) = default;
    friend auto operator<=>(const IndexPair&, const IndexPair&) = default;
};

enum class CriterionFamily { dicke, qudit_w };

/// Matrix-element index sets of one criterion instance.
///
/// `lhs_pairs[i]` and `sqrt_pairs[i]` belong together: the off-diagonal element at
/// lhs_pairs[i] is bounded by the geometric mean of the two diagonal elements at
/// sqrt_pairs[i] whenever its two differing subsystems sit in different blocks.
/// `lhs_pairs` is sorted; every pair has row < col.
struct IndexSets {
    CriterionFamily family;
    int n = 0;
    int d = 2;
    int m = 0;  ///< excitation count, Dicke family only
    std::vector<IndexPair> lhs_pairs;
    std::vector<IndexPair> sqrt_pairs;
    std::vector<Index> diag_indices;
    bool degenerate = false;
};

struct CriterionReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< lhs - rhs
    bool violated = false;
    int k = 0;
    double tolerance = kViolationTolerance;
    std::string note;
};

/// Qubit criterion index sets for n qubits and excitation m. For m outside
/// [1, n-1] the sets are empty and `degenerate` is set.
///
/// lhs pairs: unordered pairs of m-subsets P, Q of bit positions with |P & Q| = m-1.
/// sqrt pairs: (index of P & Q, index of P | Q) for the same pair.
/// diagonal: every m-subset.
IndexSets index_sets_criterion1(int n, int m);

/// Qudit W criterion index sets for n subsystems with d = n.
///
/// lhs pairs: permutations of 0..n-1 that differ by one transposition (a, b),
/// a < b. sqrt pairs: the same label with both swapped positions set to a, and
/// set to b. diagonal: every permutation.
IndexSets index_sets_criterion2(int n);

using ElementAccess = std::function<Complex(Index row, Index col)>;

/// Evaluates  sum |rho_lhs| <= sum sqrt(rho_aa rho_bb) + (n-k)/2 sum rho_rr
/// with elements supplied by `element`. Throws MalformedState when a referenced
/// diagonal is below -tolerance.
CriterionReport evaluate_index_sets(const IndexSets& sets, int k, double tolerance, const ElementAccess& element);

CriterionReport evaluate_criterion1(const DensityMatrix& rho, int n, int m, int k,
                                    double tolerance = kViolationTolerance);

CriterionReport evaluate_criterion2(const DensityMatrix& rho, int n, int k,
                                    double tolerance = kViolationTolerance);

}  // namespace ksep
