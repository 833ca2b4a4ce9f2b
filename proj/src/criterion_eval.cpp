#include <cmath>
#include <stdexcept>
#include <string>

#include "ksep/criteria.hpp"

namespace ksep {

CriterionReport evaluate_index_sets(const IndexSets& sets, int k, double tolerance, const ElementAccess& element) {
    if (k < 2 || k > sets.n) throw std::invalid_argument("criterion: need 2 <= k <= n");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("criterion: tolerance must be non-negative");

    CriterionReport report;
    report.k = k;
    report.tolerance = tolerance;
    if (sets.degenerate) {
        report.note = "degenerate: excitation " + std::to_string(sets.m) + " leaves no element pairs; "
                      "inequality holds vacuously";
        return report;
    }

    auto diagonal = [&](Index i) {
        const double v = element(i, i).real();
        if (v < -tolerance) {
            throw MalformedState("criterion: negative diagonal element at index " + std::to_string(i));
        }
        return v > 0.0 ? v : 0.0;
    };

    double lhs = 0.0;
    for (const auto& pr : sets.lhs_pairs) lhs += std::abs(element(pr.row, pr.col));

    double geometric = 0.0;
    for (const auto& pr : sets.sqrt_pairs) geometric += std::sqrt(diagonal(pr.row) * diagonal(pr.col));

    double diag_sum = 0.0;
    for (Index r : sets.diag_indices) diag_sum += diagonal(r);

    report.lhs = lhs;
    report.rhs = geometric + 0.5 * static_cast<double>(sets.n - k) * diag_sum;
    report.margin = report.lhs - report.rhs;
    report.violated = report.margin > tolerance;
    return report;
}

}  // namespace ksep
