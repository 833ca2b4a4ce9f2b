#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "ksep/criteria.hpp"
#include "ksep/format.hpp"
#include "ksep/noise.hpp"
#include "ksep/observables.hpp"
#include "ksep/partitions.hpp"
#include "ksep/state.hpp"

namespace ksep::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitBreach = 1;
constexpr int kExitInvalid = 2;

struct Invalid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw Invalid(what);
}

Json number(double v) {
    if (std::isfinite(v)) return round_significant(v);
    return format_number(v);
}

int parse_int(const std::string& token) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(token, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    require(used == token.size() && !token.empty(), "not an integer: '" + token + "'");
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(text);
    while (std::getline(in, cur, sep)) parts.push_back(cur);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

// Output goes to --output when given, stdout otherwise.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary | std::ios::trunc);
            require(file_.good(), "cannot open output file '" + path + "'");
            out_ = &file_;
        }
    }
    std::ostream& stream() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

void emit_json(const Json& j, const std::string& path, std::ostream& out) {
    Sink sink(path, out);
    sink.stream() << j.dump(2) << '\n';
}

Json report_json(const std::string& criterion, const CriterionReport& r, Json params) {
    Json j;
    j["criterion"] = criterion;
    j["lhs"] = number(r.lhs);
    j["rhs"] = number(r.rhs);
    j["margin"] = number(r.margin);
    j["violated"] = r.violated;
    j["params"] = std::move(params);
    j["tolerance"] = number(r.tolerance);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

CriterionFamily parse_family(const std::string& s) {
    if (s == "dicke") return CriterionFamily::dicke;
    if (s == "wqudit") return CriterionFamily::qudit_w;
    throw Invalid("unknown family '" + s + "' (expected dicke or wqudit)");
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30U)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27U)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31U);
}

// ── per-command option blocks ────────────────────────────────────────────────

struct CriterionOpts {
    int n = 0;
    int m = 0;
    int k = 0;
    double p = 0.0;
    double tolerance = kViolationTolerance;
    std::string output;
};

struct ThresholdOpts {
    std::string family;
    int n = 0;
    std::optional<int> m;
    std::optional<int> d;
    int k = 0;
    std::string format = "json";
    std::string output;
};

struct SweepOpts {
    std::string family;
    std::string n;
    std::string m;
    std::string k;
    std::string p;
    std::optional<int> p_points;
    std::string mode = "curves";
    std::string output;
};

struct OracleOpts {
    int n = 0;
    int k = 0;
    std::optional<int> m;
    std::optional<int> d;
    int samples = 0;
    std::optional<std::uint64_t> seed;
    int terms = 2;
    double tolerance = kViolationTolerance;
    std::string output;
};

struct PartitionOpts {
    int n = 0;
    int k = 0;
    bool list = false;
    std::string output;
};

struct ObservableOpts {
    std::string family;
    int n = 0;
    std::optional<int> m;
    std::optional<int> d;
    std::optional<Index> row;
    std::optional<Index> col;
    std::string part;
    std::string basis = "projector";
    bool inventory = false;
    std::string output;
};

// ── commands ─────────────────────────────────────────────────────────────────

int cmd_criterion1(const CriterionOpts& o, std::ostream& out) {
    require(o.n >= 2, "--n must be >= 2");
    require(o.m >= 0 && o.m <= o.n, "--m must lie in [0, n]");
    require(o.k >= 2 && o.k <= o.n, "--k must lie in [2, n]");
    require(o.p >= 0.0 && o.p <= 1.0, "--p must lie in [0, 1]");
    require(o.tolerance >= 0.0, "--tolerance must be non-negative");
    const auto rho = white_noise_mixture(dicke_state(o.n, o.m), o.p);
    const auto r = evaluate_criterion1(rho, o.n, o.m, o.k, o.tolerance);
    Json params{{"n", o.n}, {"m", o.m}, {"d", 2}, {"k", o.k}, {"p", number(o.p)}, {"state", "dicke"}};
    emit_json(report_json("criterion1", r, std::move(params)), o.output, out);
    return 0;
}

int cmd_criterion2(const CriterionOpts& o, std::ostream& out) {
    require(o.n >= 2, "--n must be >= 2");
    require(o.k >= 2 && o.k <= o.n, "--k must lie in [2, n]");
    require(o.p >= 0.0 && o.p <= 1.0, "--p must lie in [0, 1]");
    require(o.tolerance >= 0.0, "--tolerance must be non-negative");
    const auto rho = white_noise_mixture(qudit_w_state(o.n), o.p);
    const auto r = evaluate_criterion2(rho, o.n, o.k, o.tolerance);
    Json params{{"n", o.n}, {"d", o.n}, {"k", o.k}, {"p", number(o.p)}, {"state", "wqudit"}};
    emit_json(report_json("criterion2", r, std::move(params)), o.output, out);
    return 0;
}

int cmd_threshold(const ThresholdOpts& o, std::ostream& out) {
    const auto family = parse_family(o.family);
    require(o.format == "json" || o.format == "csv", "--format must be json or csv");
    require(o.n >= 2, "--n must be >= 2");
    require(o.k >= 2 && o.k <= o.n, "--k must lie in [2, n]");

    ThresholdRow row{family, o.n, 0, 0, o.k, 0.0, 0.0};
    std::string note;
    if (family == CriterionFamily::dicke) {
        require(o.m.has_value(), "--m is required for the dicke family");
        require(!o.d.has_value() || *o.d == 2, "--d must be 2 for the dicke family");
        require(*o.m >= 0 && *o.m <= o.n, "--m must lie in [0, n]");
        row.m = *o.m;
        if (row.m < 1 || row.m > o.n - 1) {
            note = "degenerate: excitation " + std::to_string(row.m) +
                   " leaves no element pairs, so the criterion never detects";
        } else {
            row.threshold = noise_threshold_dicke(o.n, row.m, o.k);
            row.bisection = noise_threshold_dicke_bisection(o.n, row.m, o.k);
        }
    } else {
        require(!o.m.has_value(), "--m is not used by the wqudit family");
        row.d = o.d.value_or(o.n);
        require(row.d == o.n, "--d must equal n for the wqudit family");
        row.threshold = noise_threshold_qudit_w(o.n, row.d, o.k);
        row.bisection = noise_threshold_qudit_w_bisection(o.n, row.d, o.k);
    }
    if (note.empty() && row.threshold == 0.0) note = "criterion never detects for these parameters";

    Sink sink(o.output, out);
    if (o.format == "csv") {
        write_thresholds_csv(sink.stream(), {row});
        return 0;
    }
    Json params{{"n", row.n}};
    if (family == CriterionFamily::dicke) params["m"] = row.m;
    params["d"] = family == CriterionFamily::dicke ? 2 : row.d;
    params["k"] = row.k;
    Json j{{"family", family_name(family)},
           {"params", std::move(params)},
           {"threshold", number(row.threshold)},
           {"bisection", number(row.bisection)}};
    if (!note.empty()) j["note"] = note;
    sink.stream() << j.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const SweepOpts& o, std::ostream& out) {
    SweepSpec spec;
    spec.family = parse_family(o.family);
    const bool dicke = spec.family == CriterionFamily::dicke;
    require(o.mode == "curves" || o.mode == "thresholds", "--mode must be curves or thresholds");
    require(!o.n.empty(), "--n is required");
    spec.n_values = parse_int_list(o.n);
    const int n_max = *std::max_element(spec.n_values.begin(), spec.n_values.end());

    if (dicke) {
        require(!o.m.empty(), "--m is required for the dicke family");
        if (o.m == "all") {
            for (int m = 1; m <= n_max - 1; ++m) spec.m_values.push_back(m);
        } else {
            spec.m_values = parse_int_list(o.m);
        }
    } else {
        require(o.m.empty(), "--m is not used by the wqudit family");
    }

    require(!o.k.empty(), "--k is required");
    if (o.k == "all") {
        for (int k = 2; k <= n_max; ++k) spec.k_values.push_back(k);
    } else {
        spec.k_values = parse_int_list(o.k, true);
    }

    if (o.mode == "curves") {
        require(o.p.empty() != !o.p_points.has_value(), "give exactly one of --p or --p-points");
        if (o.p_points) {
            require(*o.p_points >= 1 && *o.p_points <= 1000000, "--p-points must lie in [1, 1000000]");
            for (int i = 0; i < *o.p_points; ++i) spec.p_grid.push_back(static_cast<double>(i) / *o.p_points);
        } else {
            spec.p_grid = parse_real_list(o.p);
        }
        const auto curves = sweep_curves(spec);
        Sink sink(o.output, out);
        write_curves_csv(sink.stream(), curves);
    } else {
        require(o.p.empty() && !o.p_points, "--p/--p-points are not used in thresholds mode");
        const auto rows = threshold_table(spec);
        Sink sink(o.output, out);
        write_thresholds_csv(sink.stream(), rows);
    }
    return 0;
}

int cmd_oracle(const OracleOpts& o, std::ostream& out) {
    require(o.seed.has_value(), "--seed is required");
    require(o.samples >= 1, "--samples must be >= 1");
    require(o.terms >= 1 && o.terms <= 64, "--terms must lie in [1, 64]");
    require(o.n >= 2, "--n must be >= 2");
    require(o.k >= 2 && o.k <= o.n, "--k must lie in [2, n]");
    require(o.tolerance >= 0.0, "--tolerance must be non-negative");
    require(o.m.has_value() || o.d.has_value(), "give --m (qubit criterion) or --d equal to n (qudit criterion)");
    require(!o.m.has_value() || !o.d.has_value() || *o.d == 2, "--d must be 2 with --m");

    const bool qubit = o.m.has_value();
    const int d = qubit ? 2 : *o.d;
    if (qubit) {
        require(*o.m >= 1 && *o.m <= o.n - 1, "--m must lie in [1, n-1]");
    } else {
        require(d == o.n, "--d must equal n for the qudit criterion");
    }
    require(static_cast<double>(std::pow(d, o.n)) <= 4096.0, "state dimension d^n must not exceed 4096");

    double max_margin = -std::numeric_limits<double>::infinity();
    int violations = 0;
    for (int i = 0; i < o.samples; ++i) {
        const auto rho = random_k_separable_state(o.n, o.k, d, o.terms,
                                                  splitmix64(*o.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
        const auto r = qubit ? evaluate_criterion1(rho, o.n, *o.m, o.k, o.tolerance)
                             : evaluate_criterion2(rho, o.n, o.k, o.tolerance);
        max_margin = std::max(max_margin, r.margin);
        if (r.violated) ++violations;
    }

    Json params{{"n", o.n}, {"k", o.k}};
    if (qubit) params["m"] = *o.m;
    params["d"] = d;
    params["terms"] = o.terms;
    params["seed"] = *o.seed;
    Json j{{"criterion", qubit ? "criterion1" : "criterion2"},
           {"params", std::move(params)},
           {"samples", o.samples},
           {"max_margin", number(max_margin)},
           {"violations", violations},
           {"tolerance", number(o.tolerance)},
           {"pass", violations == 0}};
    emit_json(j, o.output, out);
    return violations == 0 ? 0 : kExitBreach;
}

int cmd_partitions(const PartitionOpts& o, std::ostream& out) {
    require(o.n >= 1 && o.n <= 30, "--n must lie in [1, 30]");
    require(o.k >= 1 && o.k <= o.n, "--k must lie in [1, n]");
    require(!o.list || o.n <= 12, "--list needs n <= 12");
    Json j{{"n", o.n}, {"k", o.k}, {"count", count_partitions_formula(o.n, o.k)}};
    if (o.n <= 12) {
        const auto parts = enumerate_partitions(o.n, o.k);
        j["enumerated"] = parts.size();
        if (o.list) {
            Json list = Json::array();
            for (const auto& p : parts) list.push_back(p.blocks());
            j["partitions"] = std::move(list);
        }
    }
    emit_json(j, o.output, out);
    return 0;
}

Json pattern_json(const Pattern& p) {
    Json f = Json::array();
    for (const auto& op : p) f.push_back(op.label());
    return f;
}

int cmd_observables(const ObservableOpts& o, std::ostream& out) {
    const auto family = parse_family(o.family);
    const bool dicke = family == CriterionFamily::dicke;
    require(o.n >= 1, "--n must be >= 1");

    if (o.inventory) {
        require(!o.row && !o.col, "--row/--col are not used with --inventory");
        Json j{{"family", family_name(family)}, {"n", o.n}};
        std::vector<Pattern> patterns;
        if (dicke) {
            require(o.m.has_value(), "--m is required for the dicke inventory");
            require(*o.m >= 1 && *o.m <= o.n - 1, "--m must lie in [1, n-1]");
            require(o.n >= 2 && o.n <= 12, "--n must lie in [2, 12] for the dicke inventory");
            patterns = observable_inventory_dicke(o.n, *o.m);
            j["m"] = *o.m;
            j["formula"] = observable_count_dicke(o.n, *o.m);
        } else {
            require(!o.d || *o.d == o.n, "--d must equal n for the wqudit inventory");
            require(o.n >= 2 && o.n <= 5, "--n must lie in [2, 5] for the wqudit inventory");
            patterns = observable_inventory_qudit(o.n);
            j["d"] = o.n;
            j["formula"] = observable_count_qudit(o.n, o.n);
        }
        j["count"] = patterns.size();
        Json list = Json::array();
        for (const auto& p : patterns) list.push_back(pattern_json(p));
        j["patterns"] = std::move(list);
        emit_json(j, o.output, out);
        return 0;
    }

    require(o.row.has_value(), "--row is required (or use --inventory)");
    const Index row = *o.row;
    const Index col = o.col.value_or(row);
    const int d = dicke ? 2 : o.d.value_or(o.n);
    require(!dicke || !o.d || *o.d == 2, "--d must be 2 for the dicke family");
    const Index dim = basis_dimension(o.n, d);
    require(row >= 1 && row <= dim && col >= 1 && col <= dim, "--row/--col out of range");
    require(o.basis == "projector" || o.basis == "ggm", "--basis must be projector or ggm");

    ObservableSet set;
    if (row == col) {
        require(o.part.empty() || o.part == "diagonal", "--part must be diagonal when row = col");
        set = dicke ? pauli_diag_observable(o.n, row)
                    : qudit_observables(o.n, d, row, o.basis == "ggm" ? FactorBasis::ggm : FactorBasis::projector);
    } else {
        require(o.part == "real" || o.part == "imag", "--part must be real or imag for an off-diagonal element");
        require(row < col, "--row must be smaller than --col");
        auto pair = dicke ? pauli_offdiag_observables(o.n, row, col) : qudit_observables(o.n, d, row, col);
        set = o.part == "real" ? std::move(pair.first) : std::move(pair.second);
    }

    Json terms = Json::array();
    for (const auto& t : set.terms) {
        terms.push_back(Json{{"coefficient", number(t.coefficient)}, {"factors", pattern_json(t.factors)}});
    }
    emit_json(terms, o.output, out);
    return 0;
}

}  // namespace

std::vector<int> parse_int_list(const std::string& text, bool allow_n) {
    require(!text.empty(), "empty integer list");
    std::vector<int> values;
    for (const auto& item : split(text, ',')) {
        if (allow_n && item == "n") {
            values.push_back(SweepSpec::kFullSeparation);
            continue;
        }
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            values.push_back(parse_int(item));
            continue;
        }
        std::string hi_part = item.substr(dash + 1);
        int step = 1;
        if (const auto colon = hi_part.find(':'); colon != std::string::npos) {
            step = parse_int(hi_part.substr(colon + 1));
            hi_part = hi_part.substr(0, colon);
        }
        const int lo = parse_int(item.substr(0, dash));
        const int hi = parse_int(hi_part);
        require(step >= 1 && lo <= hi, "bad range '" + item + "'");
        require(hi - lo <= 100000, "range too long '" + item + "'");
        for (int v = lo; v <= hi; v += step) values.push_back(v);
    }
    return values;
}

std::vector<double> parse_real_list(const std::string& text) {
    require(!text.empty(), "empty number list");
    std::vector<double> values;
    for (const auto& item : split(text, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == item.size() && !item.empty() && std::isfinite(v), "not a number: '" + item + "'");
        values.push_back(v);
    }
    return values;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"k-separability criteria for Dicke-class and qudit W-class states"};
    app.name("ksep");
    app.require_subcommand(1);

    CriterionOpts c1;
    auto* criterion1 = app.add_subcommand("criterion1", "qubit criterion on a noisy Dicke state");
    criterion1->add_option("--n", c1.n, "number of qubits")->required();
    criterion1->add_option("--m", c1.m, "excitation number")->required();
    criterion1->add_option("--k", c1.k, "separability level to test")->required();
    criterion1->add_option("--p", c1.p, "white noise fraction")->capture_default_str();
    criterion1->add_option("--tolerance", c1.tolerance, "violation tolerance")->capture_default_str();
    criterion1->add_option("--output", c1.output, "write to this file instead of stdout");

    CriterionOpts c2;
    auto* criterion2 = app.add_subcommand("criterion2", "qudit criterion on a noisy W state (d = n)");
    criterion2->add_option("--n", c2.n, "number of qudits")->required();
    criterion2->add_option("--k", c2.k, "separability level to test")->required();
    criterion2->add_option("--p", c2.p, "white noise fraction")->capture_default_str();
    criterion2->add_option("--tolerance", c2.tolerance, "violation tolerance")->capture_default_str();
    criterion2->add_option("--output", c2.output, "write to this file instead of stdout");

    ThresholdOpts th;
    auto* threshold = app.add_subcommand("threshold", "white-noise tolerance of one parameter set");
    threshold->add_option("--family", th.family, "dicke or wqudit")->required();
    threshold->add_option("--n", th.n)->required();
    threshold->add_option("--m", th.m, "excitation number (dicke)");
    threshold->add_option("--d", th.d, "local dimension (wqudit, must equal n)");
    threshold->add_option("--k", th.k)->required();
    threshold->add_option("--format", th.format, "json or csv")->capture_default_str();
    threshold->add_option("--output", th.output);

    SweepOpts sw;
    auto* sweep = app.add_subcommand("sweep", "CSV curves or threshold tables over parameter grids");
    sweep->add_option("--family", sw.family, "dicke or wqudit")->required();
    sweep->add_option("--n", sw.n, "list such as 4,6 or 4-24 or 4-24:2")->required();
    sweep->add_option("--m", sw.m, "excitation list or 'all' (dicke)");
    sweep->add_option("--k", sw.k, "k list; 'n' means k = n; or 'all'")->required();
    sweep->add_option("--p", sw.p, "comma-separated p grid");
    sweep->add_option("--p-points", sw.p_points, "uniform grid i/N for i = 0..N-1");
    sweep->add_option("--mode", sw.mode, "curves or thresholds")->capture_default_str();
    sweep->add_option("--output", sw.output);

    OracleOpts orc;
    auto* oracle = app.add_subcommand("oracle", "random k-separable states must never violate the criterion");
    oracle->add_option("--n", orc.n)->required();
    oracle->add_option("--k", orc.k)->required();
    oracle->add_option("--m", orc.m, "excitation number (qubit criterion)");
    oracle->add_option("--d", orc.d, "local dimension equal to n (qudit criterion)");
    oracle->add_option("--samples", orc.samples)->required();
    oracle->add_option("--seed", orc.seed);
    oracle->add_option("--terms", orc.terms, "pure terms per sampled mixture")->capture_default_str();
    oracle->add_option("--tolerance", orc.tolerance)->capture_default_str();
    oracle->add_option("--output", orc.output);

    PartitionOpts pa;
    auto* partitions = app.add_subcommand("partitions", "count set partitions of n subsystems into k blocks");
    partitions->add_option("--n", pa.n)->required();
    partitions->add_option("--k", pa.k)->required();
    partitions->add_flag("--list", pa.list, "list every partition");
    partitions->add_option("--output", pa.output);

    ObservableOpts ob;
    auto* observables = app.add_subcommand("observables", "local-observable decomposition of matrix elements");
    observables->add_option("--family", ob.family, "dicke or wqudit")->required();
    observables->add_option("--n", ob.n)->required();
    observables->add_option("--m", ob.m, "excitation number (dicke inventory)");
    observables->add_option("--d", ob.d, "local dimension (wqudit, defaults to n)");
    observables->add_option("--row", ob.row, "1-based row index");
    observables->add_option("--col", ob.col, "1-based column index (defaults to row)");
    observables->add_option("--part", ob.part, "real or imag for off-diagonal elements");
    observables->add_option("--basis", ob.basis, "projector or ggm factors for qudit diagonals")
        ->capture_default_str();
    observables->add_flag("--inventory", ob.inventory, "distinct patterns needed by the criterion");
    observables->add_option("--output", ob.output);

    std::ostringstream help_out;
    std::ostringstream help_err;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, help_out, help_err);
        out << help_out.str();
        err << help_err.str();
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (criterion1->parsed()) return cmd_criterion1(c1, out);
        if (criterion2->parsed()) return cmd_criterion2(c2, out);
        if (threshold->parsed()) return cmd_threshold(th, out);
        if (sweep->parsed()) return cmd_sweep(sw, out);
        if (oracle->parsed()) return cmd_oracle(orc, out);
        if (partitions->parsed()) return cmd_partitions(pa, out);
        if (observables->parsed()) return cmd_observables(ob, out);
    } catch (const std::exception& e) {
        err << "ksep: " << e.what() << '\n';
        return kExitInvalid;
    }
    err << "ksep: no command given\n";
    return kExitInvalid;
}

}  // namespace ksep::cli
