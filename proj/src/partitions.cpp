#include "ksep/partitions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ksep {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

void check_nk(int n, int k) {
    require(n >= 1, "partitions: n must be >= 1");
    require(k >= 1 && k <= n, "partitions: need 1 <= k <= n");
}

__extension__ using u128 = unsigned __int128;

u128 factorial128(int n) {
    u128 f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<u128>(i);
    return f;
}

// Integer partitions of `rest` into exactly `parts` parts, each <= `cap`, in
// non-increasing order.
template <typename Visit>
void integer_partitions(int rest, int parts, int cap, std::vector<int>& prefix, Visit&& visit) {
    if (parts == 0) {
        if (rest == 0) visit(prefix);
        return;
    }
    // remaining parts are each >= 1 and <= size
    for (int size = std::min(cap, rest - (parts - 1)); size >= 1; --size) {
        if (size * parts < rest) break;
        prefix.push_back(size);
        integer_partitions(rest - size, parts - 1, size, prefix, visit);
        prefix.pop_back();
    }
}

// S(i, j) for 0 <= j <= i <= n, as long double (only ratios are used).
std::vector<std::vector<long double>> stirling_table(int n) {
    std::vector<std::vector<long double>> s(static_cast<std::size_t>(n) + 1,
                                            std::vector<long double>(static_cast<std::size_t>(n) + 1, 0.0L));
    s[0][0] = 1.0L;
    for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= i; ++j) {
            s[i][j] = static_cast<long double>(j) * s[i - 1][j] + s[i - 1][j - 1];
        }
    }
    return s;
}

std::vector<std::vector<int>> sample_blocks(int n, int k, std::mt19937_64& rng) {
    static constexpr int kNewBlock = -1;
    const auto s = stirling_table(n);
    std::vector<int> choice(static_cast<std::size_t>(n) + 1, kNewBlock);
    std::uniform_real_distribution<long double> unit(0.0L, 1.0L);
    int j = k;
    for (int i = n; i >= 1; --i) {
        const long double p_single = s[i - 1][j - 1] / s[i][j];
        if (unit(rng) < p_single) {
            choice[i] = kNewBlock;
            --j;
        } else {
            choice[i] = std::uniform_int_distribution<int>(0, j - 1)(rng);
        }
    }
    std::vector<std::vector<int>> blocks;
    for (int i = 1; i <= n; ++i) {
        if (choice[i] == kNewBlock) {
            blocks.push_back({i});
        } else {
            blocks[static_cast<std::size_t>(choice[i])].push_back(i);
        }
    }
    return blocks;
}

}  // namespace

Partition::Partition(std::vector<std::vector<int>> blocks) : blocks_(std::move(blocks)) {
    require(!blocks_.empty(), "Partition: no blocks");
    std::vector<int> seen;
    for (auto& b : blocks_) {
        require(!b.empty(), "Partition: empty block");
        std::sort(b.begin(), b.end());
        seen.insert(seen.end(), b.begin(), b.end());
    }
    std::sort(blocks_.begin(), blocks_.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::sort(seen.begin(), seen.end());
    n_ = static_cast<int>(seen.size());
    for (int i = 0; i < n_; ++i) {
        require(seen[static_cast<std::size_t>(i)] == i + 1, "Partition: blocks must cover 1..n exactly once");
    }
}

std::vector<Partition> enumerate_partitions(int n, int k) {
    check_nk(n, k);
    require(n <= 20, "enumerate_partitions: n must be <= 20");
    std::vector<Partition> out;
    // restricted growth string: label[i] <= max(label[0..i-1]) + 1
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    auto recurse = [&](auto&& self, int i, int used) -> void {
        if (used + (n - i) < k) return;
        if (i == n) {
            if (used != k) return;
            std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
            for (int e = 0; e < n; ++e) blocks[static_cast<std::size_t>(label[e])].push_back(e + 1);
            out.emplace_back(std::move(blocks));
            return;
        }
        for (int b = 0; b <= std::min(used, k - 1); ++b) {
            label[static_cast<std::size_t>(i)] = b;
            self(self, i + 1, std::max(used, b + 1));
        }
    };
    label[0] = 0;
    recurse(recurse, 1, 1);
    return out;
}

std::uint64_t count_partitions_formula(int n, int k) {
    check_nk(n, k);
    require(n <= 30, "count_partitions_formula: n must be <= 30");
    const u128 n_fact = factorial128(n);
    u128 total = 0;
    std::vector<int> parts;
    integer_partitions(n, k, n, parts, [&](const std::vector<int>& sizes) {
        u128 denom = 1;
        for (int m : sizes) denom *= factorial128(m);
        // sizes are non-increasing, so equal sizes are adjacent
        for (std::size_t i = 0; i < sizes.size();) {
            std::size_t j = i;
            while (j < sizes.size() && sizes[j] == sizes[i]) ++j;
            denom *= factorial128(static_cast<int>(j - i));
            i = j;
        }
        total += n_fact / denom;
    });
    if (total > static_cast<u128>(UINT64_MAX)) throw std::overflow_error("count_partitions_formula: overflow");
    return static_cast<std::uint64_t>(total);
}

DensityMatrix random_k_separable_state(int n, int k, int d, int terms, std::uint64_t seed) {
    check_nk(n, k);
    require(d >= 2, "random_k_separable_state: d must be >= 2");
    require(terms >= 1, "random_k_separable_state: terms must be >= 1");
    const Index dim = basis_dimension(n, d);
    require(dim <= 4096, "random_k_separable_state: d^n must be <= 4096");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<double> weights(static_cast<std::size_t>(terms));
    for (auto& w : weights) w = 1.0 - unit(rng);  // (0, 1]
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    for (auto& w : weights) w /= wsum;

    std::vector<Complex> acc(dim * dim);
    std::vector<Complex> psi(dim);
    std::vector<int> digits(static_cast<std::size_t>(n));

    for (int t = 0; t < terms; ++t) {
        const auto blocks = sample_blocks(n, k, rng);
        std::vector<std::vector<Complex>> block_states;
        for (const auto& b : blocks) {
            std::vector<Complex> v(basis_dimension(static_cast<int>(b.size()), d));
            double norm = 0.0;
            for (auto& a : v) {
                const double re = gauss(rng);
                const double im = gauss(rng);
                a = {re, im};
                norm += re * re + im * im;
            }
            const double scale = 1.0 / std::sqrt(norm);
            for (auto& a : v) a *= scale;
            block_states.push_back(std::move(v));
        }

        for (Index x = 0; x < dim; ++x) {
            Index rest = x;
            for (int i = n - 1; i >= 0; --i) {
                digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % static_cast<Index>(d));
                rest /= static_cast<Index>(d);
            }
            Complex amp{1.0, 0.0};
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                std::size_t local = 0;
                for (int member : blocks[b]) {
                    local = local * static_cast<std::size_t>(d) + static_cast<std::size_t>(digits[member - 1]);
                }
                amp *= block_states[b][local];
            }
            psi[x] = amp;
        }

        const double w = weights[static_cast<std::size_t>(t)];
        for (Index r = 0; r < dim; ++r) {
            acc[r * dim + r] += w * std::norm(psi[r]);
            for (Index c = r + 1; c < dim; ++c) acc[r * dim + c] += w * psi[r] * std::conj(psi[c]);
        }
    }

    std::vector<DensityMatrix::Entry> entries;
    entries.reserve(dim * (dim + 1) / 2);
    for (Index r = 0; r < dim; ++r) {
        for (Index c = r; c < dim; ++c) {
            const Complex v = acc[r * dim + c];
            if (v != Complex{}) entries.push_back({r + 1, c + 1, v});
        }
    }
    return DensityMatrix(n, d, entries);
}

}  // namespace ksep
