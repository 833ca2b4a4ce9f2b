#include "ksep/noise.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ksep/format.hpp"

namespace ksep {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

double binomial(int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// n! / d^n, accumulated as a product of ratios.
double factorial_over_power(int n, int d) {
    double r = 1.0;
    for (int i = 1; i <= n; ++i) r *= static_cast<double>(i) / d;
    return r;
}

void check_dicke(int n, int m, int k) {
    require(n >= 2 && n <= 60, "dicke family: need 2 <= n <= 60");
    require(m >= 1 && m <= n - 1, "dicke family: need 1 <= m <= n-1");
    require(k >= 2 && k <= n, "dicke family: need 2 <= k <= n");
}

void check_qudit(int n, int d, int k) {
    require(n >= 2 && n <= 30, "qudit family: need 2 <= n <= 30");
    require(d == n, "qudit family: local dimension must equal n");
    require(k >= 2 && k <= n, "qudit family: need 2 <= k <= n");
}

void check_p(double p) { require(p >= 0.0 && p <= 1.0, "noise: p must lie in [0, 1]"); }

// Thresholds are open bounds: a sample sitting on the boundary up to rounding
// counts as not detected.
constexpr double kBoundaryGuard = 1e-12;

}  // namespace

double gamma(int n, int m, int k, double p) {
    check_dicke(n, m, k);
    check_p(p);
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    const double pairs_per_label = (n - m) * 0.5 * m;  // lhs terms per support label
    const double penalty = 0.5 * (n - k);
    const double support = binomial(n, m);
    const double noise = p / std::ldexp(1.0, n);
    const double rhs = (pairs_per_label * noise + penalty * ((1.0 - p) / support + noise)) * support;
    return rhs / (pairs_per_label * (1.0 - p));
}

double delta(int n, int d, int k, double p) {
    check_qudit(n, d, k);
    check_p(p);
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    const double odds = p / (1.0 - p);
    const double fact_ratio = factorial_over_power(n, d);           // n!/d^n
    const double pair_ratio = fact_ratio / (static_cast<double>(n) * (n - 1));  // (n-2)!/d^n
    return fact_ratio * odds + 2.0 * (n - k) / (static_cast<double>(n) * (n - 1)) + 2.0 * (n - k) * pair_ratio * odds;
}

double noise_threshold_dicke(int n, int m, int k) {
    check_dicke(n, m, k);
    const double pairs_per_label = (n - m) * 0.5 * m;
    const double penalty = 0.5 * (n - k);
    const double support = binomial(n, m);
    const double numerator = pairs_per_label - penalty;
    if (numerator <= 0.0) return 0.0;
    const double denominator = (n - m) / std::ldexp(1.0, n) * 0.5 * m * support - penalty +
                               (n - k) / std::ldexp(1.0, n + 1) * support + pairs_per_label;
    return numerator / denominator;
}

double noise_threshold_qudit_w(int n, int d, int k) {
    check_qudit(n, d, k);
    // both terms of the closed form carry d^n; divide it out
    const double numerator = 2.0 * k + (n - 3.0) * n;
    if (numerator <= 0.0) return 0.0;
    const double noise_term = (static_cast<double>(n) * n + n - 2.0 * k) * factorial_over_power(n, d);
    return numerator / (numerator + noise_term);
}

double bisect_unit_root(const std::function<double(double)>& f, double width) {
    if (f(0.0) >= 1.0) return 0.0;
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 1.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double noise_threshold_dicke_bisection(int n, int m, int k) {
    check_dicke(n, m, k);
    return bisect_unit_root([=](double p) { return gamma(n, m, k, p); });
}

double noise_threshold_qudit_w_bisection(int n, int d, int k) {
    check_qudit(n, d, k);
    return bisect_unit_root([=](double p) { return delta(n, d, k, p); });
}

// ── Sweeps ────────────────────────────────────────────────────────────────────

namespace {

template <typename Visit>
void for_each_combination(const SweepSpec& spec, Visit&& visit) {
    require(!spec.n_values.empty(), "sweep: no n values");
    require(!spec.k_values.empty(), "sweep: no k values");
    const bool dicke = spec.family == CriterionFamily::dicke;
    if (dicke) require(!spec.m_values.empty(), "sweep: no m values");
    bool any = false;
    for (int n : spec.n_values) {
        const std::vector<int> ms = dicke ? spec.m_values : std::vector<int>{0};
        for (int m : ms) {
            if (dicke && (m < 1 || m > n - 1)) continue;
            for (int k_raw : spec.k_values) {
                const int k = k_raw == SweepSpec::kFullSeparation ? n : k_raw;
                if (k < 2 || k > n) continue;
                if (dicke ? (n > 60) : (n < 2 || n > 30)) continue;
                any = true;
                visit(n, m, k);
            }
        }
    }
    require(any, "sweep: no valid parameter combination");
}

}  // namespace

std::vector<NoiseCurve> sweep_curves(const SweepSpec& spec) {
    require(!spec.p_grid.empty(), "sweep: empty p grid");
    for (std::size_t i = 0; i < spec.p_grid.size(); ++i) {
        const double p = spec.p_grid[i];
        require(p >= 0.0 && p < 1.0, "sweep: p values must lie in [0, 1)");
        require(i == 0 || p > spec.p_grid[i - 1], "sweep: p grid must be strictly increasing");
    }
    const bool dicke = spec.family == CriterionFamily::dicke;
    std::vector<NoiseCurve> curves;
    for_each_combination(spec, [&](int n, int m, int k) {
        NoiseCurve curve{spec.family, n, dicke ? m : 0, dicke ? 0 : n, k, {}};
        curve.samples.reserve(spec.p_grid.size());
        for (double p : spec.p_grid) {
            const double v = dicke ? gamma(n, m, k, p) : delta(n, n, k, p);
            curve.samples.push_back({p, v, v < 1.0 - kBoundaryGuard});
        }
        curves.push_back(std::move(curve));
    });
    return curves;
}

std::vector<ThresholdRow> threshold_table(const SweepSpec& spec) {
    const bool dicke = spec.family == CriterionFamily::dicke;
    std::vector<ThresholdRow> rows;
    for_each_combination(spec, [&](int n, int m, int k) {
        if (dicke) {
            rows.push_back({spec.family, n, m, 0, k, noise_threshold_dicke(n, m, k),
                            noise_threshold_dicke_bisection(n, m, k)});
        } else {
            rows.push_back({spec.family, n, 0, n, k, noise_threshold_qudit_w(n, n, k),
                            noise_threshold_qudit_w_bisection(n, n, k)});
        }
    });
    return rows;
}

const char* family_name(CriterionFamily family) {
    return family == CriterionFamily::dicke ? "dicke" : "wqudit";
}

namespace {

std::string optional_int(int v) { return v == 0 ? std::string{} : std::to_string(v); }

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<NoiseCurve>& curves) {
    out << "family,n,m,d,k,p,value,violated\n";
    for (const auto& c : curves) {
        for (const auto& s : c.samples) {
            out << family_name(c.family) << ',' << c.n << ',' << optional_int(c.m) << ',' << optional_int(c.d)
                << ',' << c.k << ',' << format_number(s.p) << ',' << format_number(s.value) << ','
                << (s.violated ? "true" : "false") << '\n';
        }
    }
}

void write_thresholds_csv(std::ostream& out, const std::vector<ThresholdRow>& rows) {
    out << "family,n,m,d,k,threshold,bisection\n";
    for (const auto& r : rows) {
        out << family_name(r.family) << ',' << r.n << ',' << optional_int(r.m) << ',' << optional_int(r.d) << ','
            << r.k << ',' << format_number(r.threshold) << ',' << format_number(r.bisection) << '\n';
    }
}

}  // namespace ksep
