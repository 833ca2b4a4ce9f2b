#include "ksep/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>

namespace ksep {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kDropBelow = 1e-15;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_op(const LocalOp& op, int d) {
    require(d >= 2, "local operator: d must be >= 2");
    switch (op.kind) {
        case OpKind::identity:
            return;
        case OpKind::pauli_x:
        case OpKind::pauli_y:
        case OpKind::pauli_z:
            require(d == 2, "local operator: Pauli operators need d = 2");
            return;
        case OpKind::ggm_lambda:
        case OpKind::ggm_mu:
            require(op.j >= 0 && op.j < op.k && op.k <= d - 1, "local operator: need 0 <= j < k <= d-1");
            return;
        case OpKind::ggm_eta:
            require(op.j >= 0 && op.j <= d - 2, "local operator: need 0 <= l <= d-2");
            return;
        case OpKind::projector:
            require(op.j >= 0 && op.j <= d - 1, "local operator: projector level out of range");
            return;
    }
}

// Every supported local operator has at most one nonzero per row.
struct RowEntry {
    int col = -1;
    Complex value;
};

RowEntry row_entry(const LocalOp& op, int row) {
    switch (op.kind) {
        case OpKind::identity:
            return {row, 1.0};
        case OpKind::pauli_x:
            return {1 - row, 1.0};
        case OpKind::pauli_y:
            return row == 0 ? RowEntry{1, -kI} : RowEntry{0, kI};
        case OpKind::pauli_z:
            return {row, row == 0 ? 1.0 : -1.0};
        case OpKind::ggm_lambda:
            if (row == op.j) return {op.k, 1.0};
            if (row == op.k) return {op.j, 1.0};
            return {};
        case OpKind::ggm_mu:
            if (row == op.j) return {op.k, -kI};
            if (row == op.k) return {op.j, kI};
            return {};
        case OpKind::ggm_eta: {
            const int l = op.j;
            const double scale = std::sqrt(2.0 / ((l + 1.0) * (l + 2.0)));
            if (row <= l) return {row, scale};
            if (row == l + 1) return {row, -(l + 1.0) * scale};
            return {};
        }
        case OpKind::projector:
            return row == op.j ? RowEntry{row, 1.0} : RowEntry{};
    }
    return {};
}

BasisLabel qubit_label(int n, Index index) { return BasisLabel::from_index(index, n, 2); }

// Two labels differing in exactly two positions; returns them (a < b) or throws.
std::pair<int, int> differing_pair(const BasisLabel& row, const BasisLabel& col, const char* what) {
    std::vector<int> diff;
    for (int i = 0; i < row.n(); ++i) {
        if (row[static_cast<std::size_t>(i)] != col[static_cast<std::size_t>(i)]) diff.push_back(i);
    }
    require(diff.size() == 2, what);
    const auto a = static_cast<std::size_t>(diff[0]);
    const auto b = static_cast<std::size_t>(diff[1]);
    require(row[a] == col[b] && row[b] == col[a], what);
    return {diff[0], diff[1]};
}

// All I/Z patterns over `free` positions of an n-site pattern whose other
// positions are already filled, ordered by identity count then lexicographically
// (I before Z).
std::vector<Pattern> identity_z_patterns(const Pattern& base, const std::vector<int>& free) {
    const int f = static_cast<int>(free.size());
    std::vector<Pattern> out;
    out.reserve(std::size_t{1} << f);
    for (int identities = 0; identities <= f; ++identities) {
        std::vector<bool> is_identity(static_cast<std::size_t>(f), false);
        std::fill(is_identity.begin(), is_identity.begin() + identities, true);
        // is_identity sorted descending gives I-first lexicographic order
        do {
            Pattern p = base;
            for (int t = 0; t < f; ++t) {
                p[static_cast<std::size_t>(free[static_cast<std::size_t>(t)])] =
                    is_identity[static_cast<std::size_t>(t)] ? LocalOp::I() : LocalOp::Z();
            }
            out.push_back(std::move(p));
        } while (std::prev_permutation(is_identity.begin(), is_identity.end()));
    }
    return out;
}

Index power(int d, int n) { return basis_dimension(n, d); }

}  // namespace

std::string LocalOp::label() const {
    switch (kind) {
        case OpKind::identity:
            return "I";
        case OpKind::pauli_x:
            return "X";
        case OpKind::pauli_y:
            return "Y";
        case OpKind::pauli_z:
            return "Z";
        case OpKind::ggm_lambda:
            return "L(" + std::to_string(j) + "," + std::to_string(k) + ")";
        case OpKind::ggm_mu:
            return "M(" + std::to_string(j) + "," + std::to_string(k) + ")";
        case OpKind::ggm_eta:
            return "E(" + std::to_string(j) + ")";
        case OpKind::projector:
            return "P(" + std::to_string(j) + ")";
    }
    return "?";
}

// ── Pauli decompositions ──────────────────────────────────────────────────────

int sign_exponent(const BasisLabel& basis, std::span<const LocalOp> pattern) {
    require(basis.d() == 2, "sign_exponent: qubit labels only");
    require(pattern.size() == static_cast<std::size_t>(basis.n()), "sign_exponent: pattern length mismatch");
    int total = 0;
    for (std::size_t i = 0; i < pattern.size(); ++i) {
        const auto kind = pattern[i].kind;
        require(kind == OpKind::identity || kind == OpKind::pauli_z, "sign_exponent: pattern must be I/Z only");
        if (basis[i] == 1 && kind == OpKind::pauli_z) ++total;
    }
    return total;
}

ObservableSet pauli_diag_observable(int n, Index row) {
    require(n >= 1 && n <= 20, "pauli_diag_observable: need 1 <= n <= 20");
    const auto label = qubit_label(n, row);
    std::vector<int> all(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i)] = i;

    ObservableSet set{{row, row}, ElementPart::diagonal, n, 2, {}};
    const double scale = std::ldexp(1.0, -n);
    for (auto& p : identity_z_patterns(Pattern(static_cast<std::size_t>(n)), all)) {
        const double sign = sign_exponent(label, p) % 2 == 0 ? 1.0 : -1.0;
        set.terms.push_back({sign * scale, std::move(p)});
    }
    return set;
}

std::pair<ObservableSet, ObservableSet> pauli_offdiag_observables(int n, Index row, Index col) {
    require(n >= 2 && n <= 20, "pauli_offdiag_observables: need 2 <= n <= 20");
    require(row < col, "pauli_offdiag_observables: need row < col");
    const auto r = qubit_label(n, row);
    const auto c = qubit_label(n, col);
    const auto [i, j] = differing_pair(r, c, "pauli_offdiag_observables: labels must differ by one exchanged 0/1 pair");

    std::vector<int> others;
    for (int s = 0; s < n; ++s) {
        if (s != i && s != j) others.push_back(s);
    }
    const double scale = std::ldexp(1.0, -(n - 1));
    ObservableSet re{{row, col}, ElementPart::real, n, 2, {}};
    ObservableSet im{{row, col}, ElementPart::imag, n, 2, {}};

    // |col><row| = |1><0|_i (x) |0><1|_j (x) projectors; row < col forces bits (0,1) at (i,j)
    struct Pair {
        LocalOp at_i;
        LocalOp at_j;
        double sign;
    };
    const Pair real_pairs[] = {{LocalOp::X(), LocalOp::X(), 1.0}, {LocalOp::Y(), LocalOp::Y(), 1.0}};
    const Pair imag_pairs[] = {{LocalOp::X(), LocalOp::Y(), 1.0}, {LocalOp::Y(), LocalOp::X(), -1.0}};

    auto emit = [&](ObservableSet& set, const Pair& pr) {
        Pattern base(static_cast<std::size_t>(n));
        base[static_cast<std::size_t>(i)] = pr.at_i;
        base[static_cast<std::size_t>(j)] = pr.at_j;
        for (auto& p : identity_z_patterns(base, others)) {
            int exponent = 0;
            for (int s : others) {
                const auto u = static_cast<std::size_t>(s);
                if (r[u] == 1 && p[u].kind == OpKind::pauli_z) ++exponent;
            }
            const double sign = exponent % 2 == 0 ? 1.0 : -1.0;
            set.terms.push_back({pr.sign * sign * scale, std::move(p)});
        }
    };
    for (const auto& pr : real_pairs) emit(re, pr);
    for (const auto& pr : imag_pairs) emit(im, pr);
    return {std::move(re), std::move(im)};
}

// ── Generalized Gell-Mann ─────────────────────────────────────────────────────

Eigen::MatrixXcd local_matrix(const LocalOp& op, int d) {
    check_op(op, d);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (int r = 0; r < d; ++r) {
        const auto e = row_entry(op, r);
        if (e.col >= 0) m(r, e.col) = e.value;
    }
    return m;
}

std::vector<GgmMatrix> ggm_basis(int d) {
    require(d >= 2, "ggm_basis: d must be >= 2");
    std::vector<GgmMatrix> out;
    out.reserve(static_cast<std::size_t>(d * d - 1));
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) out.push_back({LocalOp::lambda(j, k), local_matrix(LocalOp::lambda(j, k), d)});
    }
    for (int j = 0; j < d; ++j) {
        for (int k = j + 1; k < d; ++k) out.push_back({LocalOp::mu(j, k), local_matrix(LocalOp::mu(j, k), d)});
    }
    for (int l = 0; l <= d - 2; ++l) out.push_back({LocalOp::eta(l), local_matrix(LocalOp::eta(l), d)});
    return out;
}

std::vector<WeightedOp> ketbra_decomposition(int j, int k, int d) {
    require(d >= 2, "ketbra_decomposition: d must be >= 2");
    require(j >= 0 && j < d && k >= 0 && k < d, "ketbra_decomposition: level out of range");
    if (j < k) return {{0.5, LocalOp::lambda(j, k)}, {0.5 * kI, LocalOp::mu(j, k)}};
    if (j > k) return {{0.5, LocalOp::lambda(k, j)}, {-0.5 * kI, LocalOp::mu(k, j)}};

    std::vector<WeightedOp> out;
    if (j >= 1) out.push_back({-std::sqrt(j / (2.0 * (j + 1))), LocalOp::eta(j - 1)});
    for (int m = 0; m <= d - j - 2; ++m) {
        out.push_back({1.0 / std::sqrt(2.0 * (j + m + 1) * (j + m + 2)), LocalOp::eta(j + m)});
    }
    out.push_back({1.0 / d, LocalOp::I()});
    return out;
}

// ── Qudit observables ─────────────────────────────────────────────────────────

namespace {

void check_qudit_shape(int n, int d) {
    require(n >= 1 && d >= 2, "qudit_observables: need n >= 1 and d >= 2");
    (void)basis_dimension(n, d);
}

// Expands projector factors into eta/identity terms, merging equal patterns.
std::vector<ObservableTerm> expand_projectors(const std::vector<ObservableTerm>& terms, int d) {
    std::map<Pattern, double> merged;
    std::vector<Pattern> order;
    for (const auto& t : terms) {
        std::vector<std::pair<double, Pattern>> partial{{t.coefficient, Pattern{}}};
        for (const auto& f : t.factors) {
            std::vector<std::pair<double, Pattern>> next;
            if (f.kind == OpKind::projector) {
                for (const auto& [coef, pat] : partial) {
                    for (const auto& w : ketbra_decomposition(f.j, f.j, d)) {
                        auto p = pat;
                        p.push_back(w.op);
                        next.emplace_back(coef * w.coefficient.real(), std::move(p));
                    }
                }
            } else {
                for (auto& [coef, pat] : partial) {
                    pat.push_back(f);
                    next.emplace_back(coef, std::move(pat));
                }
            }
            partial = std::move(next);
        }
        for (auto& [coef, pat] : partial) {
            auto [it, fresh] = merged.emplace(pat, coef);
            if (fresh) {
                order.push_back(std::move(pat));
            } else {
                it->second += coef;
            }
        }
    }
    std::vector<ObservableTerm> out;
    for (auto& p : order) {
        const double coef = merged[p];
        if (std::abs(coef) > kDropBelow) out.push_back({coef, std::move(p)});
    }
    return out;
}

}  // namespace

ObservableSet qudit_observables(int n, int d, Index row, FactorBasis basis) {
    check_qudit_shape(n, d);
    const auto label = BasisLabel::from_index(row, n, d);
    Pattern p;
    p.reserve(static_cast<std::size_t>(n));
    for (int v : label.digits()) p.push_back(LocalOp::proj(v));
    ObservableSet set{{row, row}, ElementPart::diagonal, n, d, {{1.0, std::move(p)}}};
    if (basis == FactorBasis::ggm) set.terms = expand_projectors(set.terms, d);
    return set;
}

std::pair<ObservableSet, ObservableSet> qudit_observables(int n, int d, Index row, Index col) {
    check_qudit_shape(n, d);
    require(n >= 2, "qudit_observables: need n >= 2 for an element pair");
    require(row < col, "qudit_observables: need row < col");
    const auto r = BasisLabel::from_index(row, n, d);
    const auto c = BasisLabel::from_index(col, n, d);
    const auto [a, b] = differing_pair(r, c, "qudit_observables: labels must differ by one swapped digit pair");
    const int x = r[static_cast<std::size_t>(a)];
    const int y = r[static_cast<std::size_t>(b)];

    // |col><row| = |y><x|_a (x) |x><y|_b (x) projectors; split c_t T_t into the
    // Hermitian parts 2 Re(c_t) T_t and 2 Im(c_t) T_t
    ObservableSet re{{row, col}, ElementPart::real, n, d, {}};
    ObservableSet im{{row, col}, ElementPart::imag, n, d, {}};
    for (const auto& wa : ketbra_decomposition(y, x, d)) {
        for (const auto& wb : ketbra_decomposition(x, y, d)) {
            const Complex coef = wa.coefficient * wb.coefficient;
            Pattern p;
            p.reserve(static_cast<std::size_t>(n));
            for (int s = 0; s < n; ++s) {
                if (s == a) {
                    p.push_back(wa.op);
                } else if (s == b) {
                    p.push_back(wb.op);
                } else {
                    p.push_back(LocalOp::proj(r[static_cast<std::size_t>(s)]));
                }
            }
            if (std::abs(coef.real()) > kDropBelow) re.terms.push_back({2.0 * coef.real(), p});
            if (std::abs(coef.imag()) > kDropBelow) im.terms.push_back({2.0 * coef.imag(), p});
        }
    }
    return {std::move(re), std::move(im)};
}

// ── Counts and inventories ────────────────────────────────────────────────────

std::uint64_t observable_count_dicke(int n, int m) {
    require(n >= 2 && n <= 40, "observable_count_dicke: need 2 <= n <= 40");
    require(m >= 1 && m <= n - 1, "observable_count_dicke: need 1 <= m <= n-1");
    std::uint64_t binom = 1;
    for (int i = 1; i <= m; ++i) binom = binom * static_cast<std::uint64_t>(n - m + i) / static_cast<std::uint64_t>(i);
    // (n-m)(m/2) C(n,m) 2^(n-1) = (n-m) m C(n,m) 2^(n-2)
    const std::uint64_t off = static_cast<std::uint64_t>(n - m) * static_cast<std::uint64_t>(m) * binom
                              << static_cast<unsigned>(n - 2);
    return off + (std::uint64_t{1} << n);
}

std::uint64_t observable_count_qudit(int n, int d) {
    require(n >= 2 && n <= 20, "observable_count_qudit: need 2 <= n <= 20");
    require(d == n, "observable_count_qudit: need d = n");
    // n!/(n-2)! = n (n-1)
    const auto nn = static_cast<std::uint64_t>(n);
    return 2 * nn * nn * (nn - 1) + power(d, n);
}

namespace {

template <typename Sets>
std::vector<Index> referenced_diagonals(const Sets& sets) {
    std::set<Index> diag(sets.diag_indices.begin(), sets.diag_indices.end());
    for (const auto& pr : sets.sqrt_pairs) {
        diag.insert(pr.row);
        diag.insert(pr.col);
    }
    return {diag.begin(), diag.end()};
}

}  // namespace

std::vector<Pattern> observable_inventory_dicke(int n, int m) {
    require(m >= 1 && m <= n - 1, "observable_inventory_dicke: need 1 <= m <= n-1");
    const auto sets = index_sets_criterion1(n, m);
    std::set<Pattern> patterns;
    for (const auto& pr : sets.lhs_pairs) {
        const auto [re, im] = pauli_offdiag_observables(n, pr.row, pr.col);
        for (const auto& t : re.terms) patterns.insert(t.factors);
        for (const auto& t : im.terms) patterns.insert(t.factors);
    }
    for (Index r : referenced_diagonals(sets)) {
        for (const auto& t : pauli_diag_observable(n, r).terms) patterns.insert(t.factors);
    }
    return {patterns.begin(), patterns.end()};
}

std::vector<Pattern> observable_inventory_qudit(int n) {
    const auto sets = index_sets_criterion2(n);
    std::set<Pattern> patterns;
    for (const auto& pr : sets.lhs_pairs) {
        const auto [re, im] = qudit_observables(n, n, pr.row, pr.col);
        for (const auto& t : re.terms) patterns.insert(t.factors);
        for (const auto& t : im.terms) patterns.insert(t.factors);
    }
    for (Index r : referenced_diagonals(sets)) {
        for (const auto& t : qudit_observables(n, n, r, FactorBasis::ggm).terms) patterns.insert(t.factors);
    }
    return {patterns.begin(), patterns.end()};
}

// ── Evaluation ────────────────────────────────────────────────────────────────

Complex expectation(const ObservableTerm& term, int d, const DensityMatrix& rho) {
    const int n = rho.n();
    require(rho.d() == d && static_cast<int>(term.factors.size()) == n, "expectation: shape mismatch");
    for (const auto& f : term.factors) check_op(f, d);

    // Tr(rho T) = sum_c T(c, r(c)) rho(r(c), c), r(c) the single nonzero column of row c
    const Index dim = rho.dim();
    std::vector<int> digits(static_cast<std::size_t>(n));
    Complex total{};
    for (Index c = 0; c < dim; ++c) {
        Index rest = c;
        for (int i = n - 1; i >= 0; --i) {
            digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<Index>(d));
            rest /= static_cast<Index>(d);
        }
        Complex value{1.0, 0.0};
        Index r = 0;
        bool zero = false;
        for (int i = 0; i < n; ++i) {
            const auto e = row_entry(term.factors[static_cast<std::size_t>(i)], digits[static_cast<std::size_t>(i)]);
            if (e.col < 0) {
                zero = true;
                break;
            }
            value *= e.value;
            r = r * static_cast<Index>(d) + static_cast<Index>(e.col);
        }
        if (!zero) total += value * rho.element(r + 1, c + 1);
    }
    return term.coefficient * total;
}

double expectation(const ObservableSet& set, const DensityMatrix& rho) {
    require(rho.n() == set.n && rho.d() == set.d, "expectation: shape mismatch");
    Complex total{};
    for (const auto& t : set.terms) total += expectation(t, set.d, rho);
    return total.real();
}

Eigen::MatrixXcd assemble(const ObservableSet& set) {
    const Index dim = power(set.d, set.n);
    require(dim <= 4096, "assemble: dimension too large");
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (const auto& t : set.terms) {
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
        for (const auto& f : t.factors) {
            const auto local = local_matrix(f, set.d);
            Eigen::MatrixXcd next(acc.rows() * set.d, acc.cols() * set.d);
            for (Eigen::Index i = 0; i < acc.rows(); ++i) {
                for (Eigen::Index j = 0; j < acc.cols(); ++j) {
                    next.block(i * set.d, j * set.d, set.d, set.d) = acc(i, j) * local;
                }
            }
            acc = std::move(next);
        }
        total += t.coefficient * acc;
    }
    return total;
}

namespace {

template <typename Diag, typename OffDiag>
ElementAccess reconstructing_access(Diag diag, OffDiag offdiag, const DensityMatrix& rho) {
    auto cache = std::make_shared<std::map<IndexPair, Complex>>();
    return [=, &rho](Index r, Index c) -> Complex {
        if (r > c) {
            const Index t = r;
            r = c;
            c = t;
            auto it = cache->find({r, c});
            if (it != cache->end()) return std::conj(it->second);
        } else {
            auto it = cache->find({r, c});
            if (it != cache->end()) return it->second;
        }
        Complex value;
        if (r == c) {
            value = expectation(diag(r), rho);
        } else {
            const auto [re, im] = offdiag(r, c);
            value = 0.5 * Complex{expectation(re, rho), expectation(im, rho)};
        }
        cache->emplace(IndexPair{r, c}, value);
        return value;
    };
}

}  // namespace

CriterionReport evaluate_criterion1_via_observables(const DensityMatrix& rho, int n, int m, int k, double tolerance) {
    require(rho.d() == 2 && rho.n() == n, "evaluate_criterion1_via_observables: not an n-qubit state");
    const auto sets = index_sets_criterion1(n, m);
    auto access = reconstructing_access([n](Index r) { return pauli_diag_observable(n, r); },
                                        [n](Index r, Index c) { return pauli_offdiag_observables(n, r, c); }, rho);
    return evaluate_index_sets(sets, k, tolerance, access);
}

CriterionReport evaluate_criterion2_via_observables(const DensityMatrix& rho, int n, int k, double tolerance) {
    require(rho.d() == n && rho.n() == n, "evaluate_criterion2_via_observables: not an n-qudit state with d = n");
    const auto sets = index_sets_criterion2(n);
    auto access = reconstructing_access([n](Index r) { return qudit_observables(n, n, r, FactorBasis::ggm); },
                                        [n](Index r, Index c) { return qudit_observables(n, n, r, c); }, rho);
    return evaluate_index_sets(sets, k, tolerance, access);
}

}  // namespace ksep
