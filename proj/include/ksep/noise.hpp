#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "ksep/criteria.hpp"

namespace ksep {

/// Detection function of the qubit criterion on (1-p)|D_m^n><D_m^n| + p I/2^n:
/// the ratio rhs/lhs. Values below 1 certify non-k-separability. Returns +inf at
/// p = 1.
double gamma(int n, int m, int k, double p);

/// Detection function of the qudit criterion on (1-p)|W_n^n><W_n^n| + p I/d^n
/// (d must equal n). Returns +inf at p = 1.
double delta(int n, int d, int k, double p);

/// Closed-form white-noise tolerance for the Dicke family: the criterion detects
/// non-k-separability for every p strictly below the returned value. Returns 0
/// when the criterion never detects.
double noise_threshold_dicke(int n, int m, int k);

/// Closed-form white-noise tolerance for the qudit W family.
double noise_threshold_qudit_w(int n, int d, int k);

/// Root of f(p) = 1 on [0, 1) for f increasing with f -> +inf as p -> 1. Returns 0
/// when f(0) >= 1. Bracket width on return is below `width`.
double bisect_unit_root(const std::function<double(double)>& f, double width = 1e-14);

/// Same thresholds found by bisection on gamma / delta instead of the closed forms.
double noise_threshold_dicke_bisection(int n, int m, int k);
double noise_threshold_qudit_w_bisection(int n, int d, int k);

struct NoiseSample {
    double p;
    double value;
    bool violated;  ///< value < 1, with values within 1e-12 of 1 counted as not detected
};

struct NoiseCurve {
    CriterionFamily family;
    int n;
    int m;  ///< Dicke only, 0 otherwise
    int d;  ///< qudit only, 0 otherwise
    int k;
    std::vector<NoiseSample> samples;
};

struct ThresholdRow {
    CriterionFamily family;
    int n;
    int m;
    int d;
    int k;
    double threshold;
    double bisection;
};

/// Cartesian sweep description. A k value of kFullSeparation stands for k = n.
/// Combinations outside the valid ranges (m in [1, n-1], k in [2, n]) are skipped;
/// m_values is ignored for the qudit family.
struct SweepSpec {
    static constexpr int kFullSeparation = 0;

    CriterionFamily family = CriterionFamily::dicke;
    std::vector<int> n_values;
    std::vector<int> m_values;
    std::vector<int> k_values;
    std::vector<double> p_grid;  ///< strictly increasing, within [0, 1)
};

/// Samples gamma or delta on p_grid for every valid (n, m, k). Throws
/// std::invalid_argument on an empty grid, a malformed grid, or when no valid
/// combination remains.
std::vector<NoiseCurve> sweep_curves(const SweepSpec& spec);

/// Closed-form and bisection thresholds for every valid (n, m, k); p_grid unused.
std::vector<ThresholdRow> threshold_table(const SweepSpec& spec);

/// CSV header `family,n,m,d,k,p,value,violated`; m is empty for qudit rows, d is
/// empty for Dicke rows.
void write_curves_csv(std::ostream& out, const std::vector<NoiseCurve>& curves);

/// CSV header `family,n,m,d,k,threshold,bisection`.
void write_thresholds_csv(std::ostream& out, const std::vector<ThresholdRow>& rows);

const char* family_name(CriterionFamily family);

}  // namespace ksep
