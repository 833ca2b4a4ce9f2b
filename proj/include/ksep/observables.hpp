#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ksep/criteria.hpp"
#include "ksep/state.hpp"

namespace ksep {

enum class OpKind { identity, pauli_x, pauli_y, pauli_z, ggm_lambda, ggm_mu, ggm_eta, projector };

/// Single-subsystem operator label. Pauli kinds are qubit-only; for the GGM kinds
/// lambda/mu carry 0 <= j < k <= d-1 and eta carries l in j (0 <= l <= d-2); the
/// projector |j><j| carries j.
struct LocalOp {
    OpKind kind = OpKind::identity;
    int j = 0;
    int k = 0;

    static LocalOp I() { return {OpKind::identity}; }
    static LocalOp X() { return {OpKind::pauli_x}; }
    static LocalOp Y() { return {OpKind::pauli_y}; }
    static LocalOp Z() { return {OpKind::pauli_z}; }
    static LocalOp lambda(int j, int k) { return {OpKind::ggm_lambda, j, k}; }
    static LocalOp mu(int j, int k) { return {OpKind::ggm_mu, j, k}; }
    static LocalOp eta(int l) { return {OpKind::ggm_eta, l, 0}; }
    static LocalOp proj(int j) { return {OpKind::projector, j, 0}; }

    /// "I", "X", "Y", "Z", "L(j,k)", "M(j,k)", "E(l)" or "P(j)".
    [[nodiscard]] std::string label() const;

    friend bool operator==(const LocalOp&, const LocalOp&) = default;
    friend auto operator<=>(const LocalOp&, const LocalOp&) = default;
};

using Pattern = std::vector<LocalOp>;

struct ObservableTerm {
    double coefficient;
    Pattern factors;  ///< one factor per subsystem, subsystem 1 first
};

enum class ElementPart { real, imag, diagonal };

/// Sum of local terms whose expectation reconstructs one matrix element:
///   part == diagonal:  <set> = rho(row, row)
///   part == real:      <set> = 2 Re rho(row, col)
///   part == imag:      <set> = 2 Im rho(row, col)
struct ObservableSet {
    IndexPair target;
    ElementPart part;
    int n;
    int d;
    std::vector<ObservableTerm> terms;
};

/// Number of subsystems where the basis digit is 1 and the pattern holds sigma_z.
/// The pattern may contain only identity and sigma_z.
int sign_exponent(const BasisLabel& basis, std::span<const LocalOp> pattern);

/// D for a diagonal element of an n-qubit matrix: all 2^n identity/sigma_z
/// patterns, coefficient (-1)^sign_exponent / 2^n. Ordered by number of
/// identities, then lexicographically with I before Z.
ObservableSet pauli_diag_observable(int n, Index row);

/// O and O~ for an element whose labels differ in exactly two qubits i < j with
/// bits (0,1) in the row label and (1,0) in the column label:
///   O  = (X_i X_j + Y_i Y_j) (x) signed I/Z patterns / 2^(n-1)
///   O~ = (X_i Y_j - Y_i X_j) (x) signed I/Z patterns / 2^(n-1)
/// The I/Z patterns expand the projector onto the shared bits of the other qubits.
std::pair<ObservableSet, ObservableSet> pauli_offdiag_observables(int n, Index row, Index col);

struct GgmMatrix {
    LocalOp label;
    Eigen::MatrixXcd matrix;
};

/// Generalized Gell-Mann matrices: lambda^{jk} and mu^{jk} for j < k in
/// lexicographic order, then eta^l for l = 0..d-2.
std::vector<GgmMatrix> ggm_basis(int d);

/// Dense d x d matrix of a local operator.
Eigen::MatrixXcd local_matrix(const LocalOp& op, int d);

struct WeightedOp {
    Complex coefficient;
    LocalOp op;
};

/// |j><k| as a linear combination of GGM matrices and the identity.
std::vector<WeightedOp> ketbra_decomposition(int j, int k, int d);

/// How the subsystems outside the measured pair are expressed in qudit observables.
enum class FactorBasis {
    projector,  ///< |j><j| factors as they are
    ggm,        ///< |j><j| expanded into eta and identity
};

/// D_d = (x)_i |j_i><j_i| for the label of `row`.
ObservableSet qudit_observables(int n, int d, Index row, FactorBasis basis = FactorBasis::projector);

/// Q (real part) and Q~ (imaginary part) for labels differing in exactly two
/// positions a < b whose digits are swapped between row and column. The other
/// subsystems carry the shared projectors |j><j|.
std::pair<ObservableSet, ObservableSet> qudit_observables(int n, int d, Index row, Index col);

/// (n-m)(m/2)C(n,m)2^(n-1) + 2^n.
std::uint64_t observable_count_dicke(int n, int m);

/// 2n n!/(n-2)! + d^n.
std::uint64_t observable_count_qudit(int n, int d);

/// Distinct local-operator patterns needed to evaluate the qubit criterion:
/// O and O~ patterns of every left-hand element plus D patterns of every
/// referenced diagonal.
std::vector<Pattern> observable_inventory_dicke(int n, int m);

/// Distinct patterns for the qudit criterion: Q and Q~ patterns of every
/// left-hand element plus the GGM-expanded D_d patterns of every referenced
/// diagonal.
std::vector<Pattern> observable_inventory_qudit(int n);

/// Tr(rho T) for one term (coefficient included).
Complex expectation(const ObservableTerm& term, int d, const DensityMatrix& rho);

/// Sum of term expectations; the imaginary part vanishes for Hermitian sets and
/// is dropped.
double expectation(const ObservableSet& set, const DensityMatrix& rho);

/// Dense matrix of the full observable (d^n <= 4096).
Eigen::MatrixXcd assemble(const ObservableSet& set);

/// Criterion evaluation where every matrix element is rebuilt from observable
/// expectations instead of being read from rho.
CriterionReport evaluate_criterion1_via_observables(const DensityMatrix& rho, int n, int m, int k,
                                                    double tolerance = kViolationTolerance);
CriterionReport evaluate_criterion2_via_observables(const DensityMatrix& rho, int n, int k,
                                                    double tolerance = kViolationTolerance);

}  // namespace ksep
