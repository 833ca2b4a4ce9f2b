// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "../unit/oracles.hpp"
#include "ksep/criteria.hpp"
#include "ksep/noise.hpp"
#include "ksep/observables.hpp"
#include "ksep/partitions.hpp"
#include "ksep/state.hpp"

using namespace ksep;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void expect(bool ok, const std::string& what) {
        if (!ok && pass) detail = what;
        pass = pass && ok;
    }
};

std::string fmt(const char* pattern, double v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

std::vector<IndexPair> pairs(std::initializer_list<std::pair<Index, Index>> list) {
    std::vector<IndexPair> out;
    for (auto [r, c] : list) out.push_back({r, c});
    return out;
}

std::set<IndexPair> as_set(const std::vector<IndexPair>& v) { return {v.begin(), v.end()}; }

bool relative_close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

// ── criteria ────────────────────────────────────────────────────────────────

Outcome golden_index_sets() {
    Outcome o;
    const auto s1 = index_sets_criterion1(4, 2);
    o.expect(s1.lhs_pairs == pairs({{4, 6}, {4, 7}, {4, 10}, {4, 11}, {6, 7}, {6, 10}, {6, 13}, {7, 11}, {7, 13},
                                    {10, 11}, {10, 13}, {11, 13}}),
             "qubit lhs pairs differ");
    o.expect(s1.sqrt_pairs.size() == 12 &&
                 as_set(s1.sqrt_pairs) == as_set(pairs({{2, 8}, {3, 8}, {2, 12}, {3, 12}, {5, 8}, {2, 14}, {5, 14},
                                                        {3, 15}, {5, 15}, {9, 12}, {9, 14}, {9, 15}})),
             "qubit sqrt pairs differ");
    o.expect(s1.diag_indices == std::vector<Index>{4, 6, 7, 10, 11, 13}, "qubit diagonal differs");

    const auto s2 = index_sets_criterion2(3);
    o.expect(s2.lhs_pairs ==
                 pairs({{6, 8}, {6, 12}, {6, 22}, {8, 16}, {8, 20}, {12, 16}, {12, 20}, {16, 22}, {20, 22}}),
             "qudit lhs pairs differ");
    o.expect(s2.sqrt_pairs.size() == 9 &&
                 as_set(s2.sqrt_pairs) == as_set(pairs({{5, 9}, {3, 15}, {4, 24}, {7, 17}, {2, 26}, {10, 18},
                                                        {11, 21}, {13, 25}, {19, 23}})),
             "qudit sqrt pairs differ");
    o.expect(s2.diag_indices == std::vector<Index>{6, 8, 12, 16, 20, 22}, "qudit diagonal differs");
    if (o.pass) o.detail = "qubit 12/12/6, qudit 9/9/6";
    return o;
}

Outcome reference_thresholds() {
    Outcome o;
    const double td = noise_threshold_dicke(4, 2, 2);
    const double tw = noise_threshold_qudit_w(3, 3, 2);
    o.expect(std::abs(td - 0.4706) <= 0.0005, "dicke threshold " + fmt("%.12g", td));
    o.expect(std::abs(tw - 0.6923) <= 0.0005, "qudit threshold " + fmt("%.12g", tw));
    o.expect(std::abs(td - noise_threshold_dicke_bisection(4, 2, 2)) <= 1e-9, "dicke bisection disagrees");
    o.expect(std::abs(tw - noise_threshold_qudit_w_bisection(3, 3, 2)) <= 1e-9, "qudit bisection disagrees");
    if (o.pass) o.detail = "dicke " + fmt("%.6f", td) + ", qudit " + fmt("%.6f", tw);
    return o;
}

Outcome closed_form_vs_direct() {
    Outcome o;
    double worst = 0.0;
    for (int n = 2; n <= 8; ++n) {
        for (int m = 1; m <= n - 1; ++m) {
            const auto psi = dicke_state(n, m);
            for (int step = 1; step <= 9; ++step) {
                const double p = step / 10.0;
                const auto rho = white_noise_mixture(psi, p);
                for (int k = 2; k <= n; ++k) {
                    const auto r = evaluate_criterion1(rho, n, m, k);
                    const double g = gamma(n, m, k, p);
                    const double ratio = r.rhs / r.lhs;
                    worst = std::max(worst, std::abs(g - ratio) / std::abs(ratio));
                    o.expect(relative_close(g, ratio, 1e-10),
                             "gamma mismatch at n=" + std::to_string(n) + " m=" + std::to_string(m));
                }
            }
        }
    }
    for (int n = 3; n <= 4; ++n) {
        const auto psi = qudit_w_state(n);
        for (int step = 1; step <= 9; ++step) {
            const double p = step / 10.0;
            const auto rho = white_noise_mixture(psi, p);
            for (int k = 2; k <= n; ++k) {
                const auto r = evaluate_criterion2(rho, n, k);
                const double dl = delta(n, n, k, p);
                const double ratio = r.rhs / r.lhs;
                worst = std::max(worst, std::abs(dl - ratio) / std::abs(ratio));
                o.expect(relative_close(dl, ratio, 1e-10), "delta mismatch at n=" + std::to_string(n));
            }
        }
    }
    if (o.pass) o.detail = "max relative deviation " + fmt("%.3g", worst);
    return o;
}

Outcome excitation_orderings() {
    Outcome o;
    for (bool full : {false, true}) {
        auto t = [&](int n, int m) { return noise_threshold_dicke(n, m, full ? n : 2); };
        const std::string tag = full ? " (k=n)" : " (k=2)";
        o.expect(t(9, 2) > t(9, 6) && t(9, 6) > t(9, 4), "n=9 ordering" + tag);
        o.expect(t(10, 2) > t(10, 4) && std::abs(t(10, 4) - t(10, 6)) <= 1e-12, "n=10 ordering" + tag);
        o.expect(t(11, 2) > t(11, 4) && t(11, 4) > t(11, 6), "n=11 ordering" + tag);
    }
    if (o.pass) o.detail = "k = 2 and k = n";
    return o;
}

Outcome asymptotics() {
    Outcome o;
    const double t20 = noise_threshold_dicke(20, 2, 2);
    o.expect(t20 >= 0.999, "dicke (20,2,2) = " + fmt("%.12g", t20));
    double lowest = 1.0;
    for (int k = 2; k <= 12; ++k) {
        const double t = noise_threshold_qudit_w(12, 12, k);
        lowest = std::min(lowest, t);
        o.expect(t >= 0.999, "qudit (12,12," + std::to_string(k) + ") = " + fmt("%.12g", t));
    }
    if (o.pass) o.detail = "dicke " + fmt("%.6f", t20) + ", qudit min " + fmt("%.6f", lowest);
    return o;
}

Outcome partition_counts() {
    Outcome o;
    o.expect(count_partitions_formula(6, 3) == 90, "(6,3) != 90");
    for (int n = 1; n <= 10; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto s = oracle::stirling2(n, k);
            o.expect(count_partitions_formula(n, k) == s && enumerate_partitions(n, k).size() == s,
                     "count mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
    }
    if (o.pass) o.detail = "(6,3) = 90, formula = enumeration = Stirling for n <= 10";
    return o;
}

Outcome separable_soundness() {
    Outcome o;
    constexpr int kSamples = 1000;
    double max_margin = -1e300;
    int configs = 0;
    auto run = [&](int n, int k, int d, int m) {
        ++configs;
        for (int i = 0; i < kSamples; ++i) {
            const std::uint64_t seed = 1000003ULL * static_cast<std::uint64_t>(configs) + static_cast<std::uint64_t>(i);
            const auto rho = random_k_separable_state(n, k, d, 1 + i % 3, seed);
            const auto r = d == 2 ? evaluate_criterion1(rho, n, m, k) : evaluate_criterion2(rho, n, k);
            max_margin = std::max(max_margin, r.margin);
            o.expect(r.margin <= 1e-9, "violation at n=" + std::to_string(n) + " k=" + std::to_string(k) +
                                           " d=" + std::to_string(d) + " margin " + fmt("%.3g", r.margin));
        }
    };
    for (int n = 2; n <= 6; ++n) {
        for (int k = 2; k <= n; ++k) {
            for (int m = 1; m <= std::min(2, n - 1); ++m) run(n, k, 2, m);
        }
    }
    for (int k = 2; k <= 3; ++k) run(3, k, 3, 0);
    if (o.pass) {
        o.detail = std::to_string(configs) + " configurations x " + std::to_string(kSamples) +
                   " samples, max margin " + fmt("%.3g", max_margin);
    }
    return o;
}

Outcome observable_reconstruction() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    double worst = 0.0;
    auto compare = [&](const CriterionReport& a, const CriterionReport& b) {
        const double dev = std::max(std::abs(a.lhs - b.lhs), std::abs(a.rhs - b.rhs));
        worst = std::max(worst, dev);
        o.expect(dev <= 1e-10, "observable evaluation deviates by " + fmt("%.3g", dev));
    };
    for (int trial = 0; trial < 100; ++trial) {
        for (int n = 2; n <= 5; ++n) {
            const auto rho = oracle::to_sparse(oracle::random_density(rng, Eigen::Index{1} << n, 1 + trial % 4), n, 2);
            for (int m = 1; m <= n - 1; ++m) {
                for (int k = 2; k <= n; ++k) {
                    compare(evaluate_criterion1(rho, n, m, k), evaluate_criterion1_via_observables(rho, n, m, k));
                }
            }
        }
        const auto rho = oracle::to_sparse(oracle::random_density(rng, 27, 1 + trial % 4), 3, 3);
        for (int k = 2; k <= 3; ++k) compare(evaluate_criterion2(rho, 3, k), evaluate_criterion2_via_observables(rho, 3, k));
    }

    const Pattern target{LocalOp::I(), LocalOp::Z(), LocalOp::I(), LocalOp::Z(), LocalOp::Z()};
    bool found = false;
    for (const auto& t : pauli_diag_observable(5, 7).terms) {
        if (t.factors == target) found = t.coefficient == -1.0 / 32;
    }
    o.expect(found, "IZIZZ coefficient at row 7 is not -1/32");

    const auto inv_d = observable_inventory_dicke(4, 2).size();
    const auto inv_q = observable_inventory_qudit(3).size();
    o.expect(inv_d == 112 && observable_count_dicke(4, 2) == 112, "qubit inventory " + std::to_string(inv_d));
    o.expect(inv_q == 63 && observable_count_qudit(3, 3) == 63, "qudit inventory " + std::to_string(inv_q));
    if (o.pass) o.detail = "max deviation " + fmt("%.3g", worst) + ", inventories 112 and 63";
    return o;
}

PureState random_class_state(std::mt19937_64& rng, int n, int d, const std::vector<BasisLabel>& support) {
    std::normal_distribution<double> g;
    std::vector<Amplitude> amps;
    double norm = 0.0;
    for (const auto& label : support) {
        const Complex a{g(rng), g(rng)};
        norm += std::norm(a);
        amps.push_back({label, a});
    }
    for (auto& a : amps) a.value /= std::sqrt(norm);
    return PureState(n, d, std::move(amps));
}

std::vector<BasisLabel> support_of(const PureState& psi) {
    std::vector<BasisLabel> out;
    for (const auto& a : psi.amplitudes()) out.push_back(a.label);
    return out;
}

Outcome monotonicity() {
    Outcome o;
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int violating_states = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const bool qubit = trial % 2 == 0;
        const int n = qubit ? 3 + (trial / 2) % 4 : 3 + (trial / 2) % 2;
        const int d = qubit ? 2 : n;
        const int m = qubit ? 1 + static_cast<int>(u(rng) * (n - 1)) : 0;
        const int terms = 1 + trial % 3;

        std::vector<DensityMatrix> parts;
        std::vector<double> weights;
        double total = 0.0;
        for (int t = 0; t < terms; ++t) {
            const auto base = qubit ? dicke_state(n, t == 0 ? m : 1 + static_cast<int>(u(rng) * (n - 1)))
                                    : qudit_w_state(n);
            const auto psi = t == 0 ? base : random_class_state(rng, n, d, support_of(base));
            parts.push_back(white_noise_mixture(psi, u(rng)));
            weights.push_back(0.1 + u(rng));
            total += weights.back();
        }
        for (auto& w : weights) w /= total;
        const auto rho = mix(parts, weights);

        bool seen = false;
        for (int k = 2; k <= n; ++k) {
            const auto r = qubit ? evaluate_criterion1(rho, n, m, k) : evaluate_criterion2(rho, n, k);
            o.expect(!seen || r.violated, "monotonicity broken at trial " + std::to_string(trial));
            seen = seen || r.violated;
        }
        violating_states += seen ? 1 : 0;
    }
    if (o.pass) o.detail = "200 mixtures, " + std::to_string(violating_states) + " detected at some k";
    return o;
}

struct Criterion {
    const char* id;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "golden index sets", 1.0, golden_index_sets},
        {"AC2", "reference noise thresholds", 1.0, reference_thresholds},
        {"AC3", "closed form equals direct evaluation", 120.0, closed_form_vs_direct},
        {"AC4", "threshold orderings for n = 9, 10, 11", 1.0, excitation_orderings},
        {"AC5", "noise tolerance approaches one", 1.0, asymptotics},
        {"AC6", "partition counts", 10.0, partition_counts},
        {"AC7", "random k-separable states never violate", 300.0, separable_soundness},
        {"AC8", "observable reconstruction", 120.0, observable_reconstruction},
        {"AC9", "violation is monotone in k", 60.0, monotonicity},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (seconds > c.limit_seconds) {
            outcome.pass = false;
            outcome.detail = "took " + fmt("%.2f", seconds) + " s, limit " + fmt("%.0f", c.limit_seconds) + " s";
        }
        std::printf("%s %s %s: %s (%.3f s)\n", c.id, outcome.pass ? "PASS" : "FAIL", c.title, outcome.detail.c_str(),
                    seconds);
        failures += outcome.pass ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
