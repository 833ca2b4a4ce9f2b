#include "ksep/state.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ksep {

namespace {

constexpr Index kMaxDimension = Index{1} << 32;

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return std::round(c);
}

}  // namespace

// ── BasisLabel ────────────────────────────────────────────────────────────────

BasisLabel::BasisLabel(std::vector<int> digits, int d) : digits_(std::move(digits)), d_(d) {
    require(d >= 1, "BasisLabel: local dimension must be >= 1");
    require(!digits_.empty(), "BasisLabel: empty label");
    for (int v : digits_) require(v >= 0 && v < d, "BasisLabel: digit out of range");
}

BasisLabel BasisLabel::from_index(Index one_based, int n, int d) {
    const Index dim = basis_dimension(n, d);
    require(one_based >= 1 && one_based <= dim, "BasisLabel: index out of range");
    std::vector<int> digits(static_cast<std::size_t>(n));
    Index rest = one_based - 1;
    for (int i = n - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<Index>(d));
        rest /= static_cast<Index>(d);
    }
    return BasisLabel(std::move(digits), d);
}

BasisLabel BasisLabel::parse(const std::string& text, int d) {
    std::vector<int> digits;
    digits.reserve(text.size());
    for (char ch : text) {
        require(ch >= '0' && ch <= '9', "BasisLabel: expected decimal digits");
        digits.push_back(ch - '0');
    }
    return BasisLabel(std::move(digits), d);
}

Index BasisLabel::one_based_index() const {
    Index idx = 0;
    for (int v : digits_) idx = idx * static_cast<Index>(d_) + static_cast<Index>(v);
    return idx + 1;
}

std::string BasisLabel::str() const {
    std::string out;
    for (int v : digits_) {
        if (v < 10) {
            out.push_back(static_cast<char>('0' + v));
        } else {
            out += "(" + std::to_string(v) + ")";
        }
    }
    return out;
}

Index basis_dimension(int n, int d) {
    require(n >= 1, "dimension: subsystem count must be >= 1");
    require(d >= 1, "dimension: local dimension must be >= 1");
    Index dim = 1;
    for (int i = 0; i < n; ++i) {
        require(dim <= kMaxDimension / static_cast<Index>(d), "dimension: d^n exceeds 2^32");
        dim *= static_cast<Index>(d);
    }
    return dim;
}

// ── PureState ─────────────────────────────────────────────────────────────────

PureState::PureState(int n, int d, std::vector<Amplitude> amplitudes)
    : n_(n), d_(d), amplitudes_(std::move(amplitudes)) {
    (void)basis_dimension(n, d);
    for (const auto& a : amplitudes_) {
        require(a.label.n() == n && a.label.d() == d, "PureState: label shape mismatch");
    }
    std::sort(amplitudes_.begin(), amplitudes_.end(), [](const Amplitude& a, const Amplitude& b) {
        return a.label.one_based_index() < b.label.one_based_index();
    });
    for (std::size_t i = 1; i < amplitudes_.size(); ++i) {
        require(amplitudes_[i - 1].label != amplitudes_[i].label, "PureState: duplicate label");
    }
    const double norm = std::accumulate(amplitudes_.begin(), amplitudes_.end(), 0.0,
                                        [](double s, const Amplitude& a) { return s + std::norm(a.value); });
    if (std::abs(norm - 1.0) > kStateTolerance) throw MalformedState("PureState: not normalized");
}

Complex PureState::amplitude(const BasisLabel& label) const {
    for (const auto& a : amplitudes_) {
        if (a.label == label) return a.value;
    }
    return {};
}

// ── DensityMatrix ─────────────────────────────────────────────────────────────

DensityMatrix::DensityMatrix(int n, int d) : n_(n), d_(d), dim_(basis_dimension(n, d)) {}

DensityMatrix::DensityMatrix(int n, int d, std::span<const Entry> entries) : DensityMatrix(n, d) {
    entries_.reserve(entries.size());
    for (const auto& e : entries) {
        require(e.row >= 1 && e.row <= dim_ && e.col >= 1 && e.col <= dim_,
                "DensityMatrix: entry index out of range");
        if (e.row <= e.col) {
            insert(e.row, e.col, e.value);
        } else {
            insert(e.col, e.row, std::conj(e.value));
        }
    }
    validate();
}

void DensityMatrix::insert(Index row, Index col, Complex value) {
    auto [it, fresh] = entries_.emplace(key(row, col), value);
    require(fresh, "DensityMatrix: entry given twice");
}

void DensityMatrix::validate() const {
    double tr = 0.0;
    for (const auto& [k, v] : entries_) {
        if (k / dim_ == k % dim_) {
            if (std::abs(v.imag()) > kStateTolerance) {
                throw MalformedState("DensityMatrix: diagonal entry is not real");
            }
            tr += v.real();
        }
    }
    if (std::abs(tr - 1.0) > kStateTolerance) throw MalformedState("DensityMatrix: trace is not 1");
}

DensityMatrix DensityMatrix::from_dense(int n, int d, std::span<const Complex> dense) {
    DensityMatrix rho(n, d);
    const Index dim = rho.dim_;
    require(dense.size() == dim * dim, "DensityMatrix::from_dense: buffer size mismatch");
    for (Index r = 0; r < dim; ++r) {
        for (Index c = r; c < dim; ++c) {
            const Complex v = dense[r * dim + c];
            if (std::abs(v - std::conj(dense[c * dim + r])) > kStateTolerance) {
                throw MalformedState("DensityMatrix::from_dense: not Hermitian");
            }
            if (v != Complex{}) rho.entries_.emplace(r * dim + c, r == c ? Complex{v.real(), 0.0} : v);
        }
    }
    rho.validate();
    return rho;
}

Complex DensityMatrix::element(Index row, Index col) const {
    require(row >= 1 && row <= dim_ && col >= 1 && col <= dim_, "DensityMatrix: index out of range");
    if (row <= col) {
        auto it = entries_.find(key(row, col));
        return it == entries_.end() ? Complex{} : it->second;
    }
    auto it = entries_.find(key(col, row));
    return it == entries_.end() ? Complex{} : std::conj(it->second);
}

double DensityMatrix::trace() const {
    double tr = 0.0;
    for (const auto& [k, v] : entries_) {
        if (k / dim_ == k % dim_) tr += v.real();
    }
    return tr;
}

std::vector<DensityMatrix::Entry> DensityMatrix::upper_entries() const {
    std::vector<Entry> out;
    out.reserve(entries_.size());
    for (const auto& [k, v] : entries_) out.push_back({k / dim_ + 1, k % dim_ + 1, v});
    std::sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    return out;
}

std::vector<Complex> DensityMatrix::to_dense() const {
    require(dim_ <= 4096, "DensityMatrix::to_dense: dimension too large");
    std::vector<Complex> dense(dim_ * dim_);
    for (const auto& [k, v] : entries_) {
        const Index r = k / dim_;
        const Index c = k % dim_;
        dense[r * dim_ + c] = v;
        dense[c * dim_ + r] = std::conj(v);
    }
    return dense;
}

// ── Constructors ──────────────────────────────────────────────────────────────

PureState dicke_state(int n, int m) {
    require(n >= 1, "dicke_state: n must be >= 1");
    require(m >= 0 && m <= n, "dicke_state: need 0 <= m <= n");
    require(n <= 32, "dicke_state: n must be <= 32");
    const double amp = 1.0 / std::sqrt(binomial(n, m));

    // Walk m-subsets of positions in lexicographic order; position 0 is subsystem 1.
    std::vector<Amplitude> amps;
    std::vector<int> digits(static_cast<std::size_t>(n), 0);
    std::fill(digits.end() - m, digits.end(), 1);
    do {
        amps.push_back({BasisLabel(digits, 2), Complex{amp, 0.0}});
    } while (std::next_permutation(digits.begin(), digits.end()));
    return PureState(n, 2, std::move(amps));
}

PureState qudit_w_state(int n) {
    require(n >= 1, "qudit_w_state: n must be >= 1");
    require(n <= 10, "qudit_w_state: n must be <= 10");
    const int d = n;
    double count = 1.0;
    for (int i = 2; i <= n; ++i) count *= i;
    const double amp = 1.0 / std::sqrt(count);

    std::vector<int> digits(static_cast<std::size_t>(n));
    std::iota(digits.begin(), digits.end(), 0);
    std::vector<Amplitude> amps;
    do {
        amps.push_back({BasisLabel(digits, d), Complex{amp, 0.0}});
    } while (std::next_permutation(digits.begin(), digits.end()));
    return PureState(n, d, std::move(amps));
}

PureState anti_w_state(int n) {
    require(n >= 1, "anti_w_state: n must be >= 1");
    return dicke_state(n, n - 1);
}

DensityMatrix projector(const PureState& psi) {
    return white_noise_mixture(psi, 0.0);
}

DensityMatrix white_noise_mixture(const PureState& psi, double p) {
    require(p >= 0.0 && p <= 1.0, "white_noise_mixture: p must lie in [0, 1]");
    const Index dim = psi.dim();
    const auto& amps = psi.amplitudes();
    const double noise = p / static_cast<double>(dim);

    std::map<std::pair<Index, Index>, Complex> acc;
    if (p < 1.0) {
        for (std::size_t i = 0; i < amps.size(); ++i) {
            const Index r = amps[i].label.one_based_index();
            for (std::size_t j = i; j < amps.size(); ++j) {
                const Index c = amps[j].label.one_based_index();
                acc[{r, c}] += (1.0 - p) * amps[i].value * std::conj(amps[j].value);
            }
        }
    }
    if (p > 0.0) {
        require(dim <= (Index{1} << 26), "white_noise_mixture: noisy matrix too large to store");
        for (Index i = 1; i <= dim; ++i) acc[{i, i}] += noise;
    }

    std::vector<DensityMatrix::Entry> entries;
    entries.reserve(acc.size());
    for (const auto& [rc, v] : acc) {
        entries.push_back({rc.first, rc.second, rc.first == rc.second ? Complex{v.real(), 0.0} : v});
    }
    return DensityMatrix(psi.n(), psi.d(), entries);
}

DensityMatrix mix(std::span<const DensityMatrix> states, std::span<const double> weights) {
    require(!states.empty() && states.size() == weights.size(), "mix: need one weight per state");
    const int n = states.front().n();
    const int d = states.front().d();
    double total = 0.0;
    for (double w : weights) total += w;
    require(std::abs(total - 1.0) <= kStateTolerance, "mix: weights must sum to 1");
    std::map<std::pair<Index, Index>, Complex> acc;
    for (std::size_t i = 0; i < states.size(); ++i) {
        require(states[i].n() == n && states[i].d() == d, "mix: shape mismatch");
        require(weights[i] >= 0.0, "mix: negative weight");
        for (const auto& e : states[i].upper_entries()) acc[{e.row, e.col}] += weights[i] * e.value;
    }
    std::vector<DensityMatrix::Entry> entries;
    entries.reserve(acc.size());
    for (const auto& [rc, v] : acc) entries.push_back({rc.first, rc.second, v});
    return DensityMatrix(n, d, entries);
}

}  // namespace ksep
