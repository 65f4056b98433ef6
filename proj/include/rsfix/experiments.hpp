#pragma once

// Monte Carlo harness: seeded trials over an n-ladder, per-trial CSV records,
// order-independent summary statistics, rescalings and two-sample KS.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsfix/keyvalue.hpp"
#include "rsfix/permutation.hpp"
#include "rsfix/random.hpp"
#include "rsfix/samplers.hpp"
#include "rsfix/shape_geometry.hpp"
#include "rsfix/young_diagram.hpp"

namespace rsfix {

inline constexpr int kTrialSchemaVersion = 1;

enum class Measurement : unsigned {
    shape_distance = 1u << 0,
    ell = 1u << 1,
    lambda1 = 1u << 2,
    lambda2 = 1u << 3,
    cycle_stats = 1u << 4,
};

struct MeasurementSet {
    unsigned bits = 0;
    bool has(Measurement m) const noexcept { return bits & static_cast<unsigned>(m); }
    MeasurementSet& add(Measurement m) noexcept {
        bits |= static_cast<unsigned>(m);
        return *this;
    }
    static MeasurementSet all() noexcept { return MeasurementSet{0x1fu}; }
    friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;
};

inline MeasurementSet parse_measurements(const std::string& text) {
    MeasurementSet set;
    std::string tok;
    auto flush = [&] {
        auto t = trim(tok);
        tok.clear();
        if (t.empty()) return;
        if (t == "shape_distance") set.add(Measurement::shape_distance);
        else if (t == "ell") set.add(Measurement::ell);
        else if (t == "lambda1") set.add(Measurement::lambda1);
        else if (t == "lambda2") set.add(Measurement::lambda2);
        else if (t == "cycle_stats") set.add(Measurement::cycle_stats);
        else if (t == "all") set = MeasurementSet::all();
        else throw std::invalid_argument("unknown measurement '" + t + "'");
    };
    for (char ch : text) {
        if (ch == ',') flush();
        else tok += ch;
    }
    flush();
    return set;
}

struct ExperimentConfig {
    RegimeSpec regime;
    std::vector<std::size_t> n_ladder;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    MeasurementSet measurements = MeasurementSet::all();
    std::string output_path;  // CSV; the summary goes next to it as <path>.summary.json
    unsigned workers = 1;
    bool record_timing = false;  // wall_time_s column, off by default so reruns are byte-identical
};

inline void validate(const ExperimentConfig& cfg) {
    validate(cfg.regime);
    if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (cfg.n_ladder.empty()) throw std::invalid_argument("n_ladder is empty");
    for (std::size_t i = 0; i < cfg.n_ladder.size(); ++i) {
        if (cfg.n_ladder[i] < 1) throw std::invalid_argument("n_ladder entries must be >= 1");
        if (i && cfg.n_ladder[i] <= cfg.n_ladder[i - 1]) throw std::invalid_argument("n_ladder must be strictly increasing");
    }
    if (cfg.workers < 1) throw std::invalid_argument("workers must be >= 1");
}

/// Reads regime keys plus n_ladder, trials, seed, measurements, out, workers, timing.
inline ExperimentConfig config_from_key_values(const KeyValues& kv) {
    ExperimentConfig cfg;
    cfg.regime = regime_from_key_values(kv);
    for (const auto& [key, value] : kv) {
        if (key == "n_ladder" || key == "n") {
            auto raw = parse_uint_list(key, value);
            cfg.n_ladder.assign(raw.begin(), raw.end());
        } else if (key == "trials") cfg.trials = parse_uint(key, value);
        else if (key == "seed") cfg.seed = parse_uint(key, value);
        else if (key == "measurements") cfg.measurements = parse_measurements(value);
        else if (key == "out") cfg.output_path = value;
        else if (key == "workers") cfg.workers = static_cast<unsigned>(parse_uint(key, value));
        else if (key == "timing") cfg.record_timing = value == "1" || value == "true";
    }
    validate(cfg);
    return cfg;
}

struct TrialRecord {
    std::size_t n = 0;
    std::size_t trial_index = 0;
    std::size_t fix_count = 0;  // measured #fix(sigma)
    std::size_t num_cycles = 0;
    std::size_t two_cycles = 0;
    std::size_t fixed_points_of_square = 0;
    std::optional<double> shape_distance;
    std::optional<std::size_t> ell;
    std::optional<std::size_t> lambda1;
    std::optional<std::size_t> lambda2;
    double wall_time_s = 0;

    /// (#cycles - #fix) / n^{1/6}
    double cycles_ratio() const {
        return static_cast<double>(num_cycles - fix_count) / std::pow(static_cast<double>(n), 1.0 / 6.0);
    }
    /// (n - #fix(sigma^2)) / n^{1/6}
    double square_ratio() const {
        return static_cast<double>(n - fixed_points_of_square) / std::pow(static_cast<double>(n), 1.0 / 6.0);
    }

    friend bool operator==(const TrialRecord& a, const TrialRecord& b) {
        return a.n == b.n && a.trial_index == b.trial_index && a.fix_count == b.fix_count &&
               a.num_cycles == b.num_cycles && a.two_cycles == b.two_cycles &&
               a.fixed_points_of_square == b.fixed_points_of_square && a.shape_distance == b.shape_distance &&
               a.ell == b.ell && a.lambda1 == b.lambda1 && a.lambda2 == b.lambda2;
    }
};

/// One trial: derive the stream from (seed, n, trial_index), sample, measure.
inline TrialRecord run_trial(const RegimeSpec& regime, MeasurementSet what, std::uint64_t seed, std::size_t n,
                             std::size_t trial_index) {
    const auto start = std::chrono::steady_clock::now();
    auto rng = derive_stream(seed, n, trial_index);
    const auto sigma = sample_regime(regime, n, rng);
    const auto cs = cycle_stats(sigma);

    TrialRecord r;
    r.n = n;
    r.trial_index = trial_index;
    r.fix_count = cs.fixed_points;
    r.num_cycles = cs.num_cycles;
    r.two_cycles = cs.two_cycles;
    r.fixed_points_of_square = cs.fixed_points_of_square;

    if (what.has(Measurement::shape_distance) || what.has(Measurement::lambda2)) {
        const auto shape = schensted_shape(sigma);
        r.ell = shape.length();
        r.lambda1 = shape.first_row();
        r.lambda2 = shape.part(1);
        if (what.has(Measurement::shape_distance)) r.shape_distance = scaled_sup_distance(shape, n, cs.fixed_points);
        if (!what.has(Measurement::lambda2)) r.lambda2.reset();
    } else {
        if (what.has(Measurement::ell)) r.ell = lds(sigma);
        if (what.has(Measurement::lambda1)) r.lambda1 = lis(sigma);
    }
    if (!what.has(Measurement::ell)) r.ell.reset();
    if (!what.has(Measurement::lambda1)) r.lambda1.reset();

    r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string trial_csv_header(bool timing) {
    std::string h =
        "schema_version,n,trial_index,fix_count,num_cycles,two_cycles,fixed_points_of_square,"
        "cycles_ratio,square_ratio,shape_distance,ell,lambda1,lambda2";
    if (timing) h += ",wall_time_s";
    return h;
}

inline std::string format_real(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string trial_csv_row(const TrialRecord& r, bool timing) {
    std::ostringstream os;
    auto opt = [&](const auto& v) {
        os << ',';
        if (v) os << *v;
    };
    os << kTrialSchemaVersion << ',' << r.n << ',' << r.trial_index << ',' << r.fix_count << ',' << r.num_cycles
       << ',' << r.two_cycles << ',' << r.fixed_points_of_square << ',' << format_real(r.cycles_ratio()) << ','
       << format_real(r.square_ratio()) << ',';
    if (r.shape_distance) os << format_real(*r.shape_distance);
    opt(r.ell);
    opt(r.lambda1);
    opt(r.lambda2);
    if (timing) os << ',' << format_real(r.wall_time_s);
    return os.str();
}

inline std::vector<TrialRecord> read_trial_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("trial CSV: missing header");
    if (line.rfind(trial_csv_header(false), 0) != 0) throw std::runtime_error("trial CSV: unexpected header");
    std::vector<TrialRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.emplace_back();
        if (cells.size() < 13) throw std::runtime_error("trial CSV: short row");
        if (cells[0] != std::to_string(kTrialSchemaVersion)) throw std::runtime_error("trial CSV: schema version");
        TrialRecord r;
        r.n = parse_uint("n", cells[1]);
        r.trial_index = parse_uint("trial_index", cells[2]);
        r.fix_count = parse_uint("fix_count", cells[3]);
        r.num_cycles = parse_uint("num_cycles", cells[4]);
        r.two_cycles = parse_uint("two_cycles", cells[5]);
        r.fixed_points_of_square = parse_uint("fixed_points_of_square", cells[6]);
        if (!cells[9].empty()) r.shape_distance = parse_double("shape_distance", cells[9]);
        if (!cells[10].empty()) r.ell = parse_uint("ell", cells[10]);
        if (!cells[11].empty()) r.lambda1 = parse_uint("lambda1", cells[11]);
        if (!cells[12].empty()) r.lambda2 = parse_uint("lambda2", cells[12]);
        if (cells.size() > 13 && !cells[13].empty()) r.wall_time_s = parse_double("wall_time_s", cells[13]);
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Summary statistics

struct StatSummary {
    std::size_t count = 0;
    double mean = 0, sd = 0;
    double q05 = 0, q25 = 0, q50 = 0, q75 = 0, q95 = 0;
};

/// Linear-interpolation quantile of sorted data (type 7).
inline double sorted_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Sorts first, so the result does not depend on input order.
inline StatSummary summarize(std::vector<double> values) {
    StatSummary s;
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.count = values.size();
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.count);
    if (s.count > 1) {
        double ss = 0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.count - 1));
    }
    s.q05 = sorted_quantile(values, 0.05);
    s.q25 = sorted_quantile(values, 0.25);
    s.q50 = sorted_quantile(values, 0.50);
    s.q75 = sorted_quantile(values, 0.75);
    s.q95 = sorted_quantile(values, 0.95);
    return s;
}

// (n, statistic name) -> summary
using SummaryStats = std::map<std::pair<std::size_t, std::string>, StatSummary>;

inline SummaryStats summarize_records(const std::vector<TrialRecord>& records) {
    std::map<std::pair<std::size_t, std::string>, std::vector<double>> columns;
    for (const auto& r : records) {
        auto put = [&](const char* name, double v) { columns[{r.n, name}].push_back(v); };
        put("fix_count", static_cast<double>(r.fix_count));
        put("num_cycles", static_cast<double>(r.num_cycles));
        put("fixed_points_of_square", static_cast<double>(r.fixed_points_of_square));
        if (r.shape_distance) put("shape_distance", *r.shape_distance);
        if (r.ell) put("ell", static_cast<double>(*r.ell));
        if (r.lambda1) put("lambda1", static_cast<double>(*r.lambda1));
        if (r.lambda2) put("lambda2", static_cast<double>(*r.lambda2));
    }
    SummaryStats out;
    for (auto& [key, values] : columns) out[key] = summarize(std::move(values));
    return out;
}

inline nlohmann::json summary_json(const SummaryStats& stats, const ExperimentConfig& cfg) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& [key, s] : stats) {
        rows.push_back({{"n", key.first},
                        {"statistic", key.second},
                        {"count", s.count},
                        {"mean", s.mean},
                        {"sd", s.sd},
                        {"quantiles", {{"5", s.q05}, {"25", s.q25}, {"50", s.q50}, {"75", s.q75}, {"95", s.q95}}}});
    }
    return {{"schema_version", kTrialSchemaVersion},
            {"regime", format_regime(cfg.regime)},
            {"seed", cfg.seed},
            {"trials", cfg.trials},
            {"n_ladder", cfg.n_ladder},
            {"stats", rows}};
}

// ---------------------------------------------------------------------------
// Runner

struct ExperimentResult {
    std::vector<TrialRecord> records;  // ordered by (n, trial_index)
    SummaryStats summary;
};

/// Runs every (n, trial) task on cfg.workers threads. Records reach `csv`
/// in canonical order as soon as their predecessors are done.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* csv = nullptr) {
    validate(cfg);
    const std::size_t total = cfg.n_ladder.size() * cfg.trials;
    std::vector<std::optional<TrialRecord>> slots(total);
    std::atomic<std::size_t> next_task{0};
    std::mutex emit_mutex;
    std::size_t next_emit = 0;
    std::exception_ptr failure;

    if (csv) *csv << trial_csv_header(cfg.record_timing) << '\n';

    auto worker = [&] {
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= total) return;
            const std::size_t n = cfg.n_ladder[task / cfg.trials];
            const std::size_t trial = task % cfg.trials;
            TrialRecord rec;
            try {
                rec = run_trial(cfg.regime, cfg.measurements, cfg.seed, n, trial);
            } catch (...) {
                std::lock_guard lock(emit_mutex);
                if (!failure) failure = std::current_exception();
                next_task = total;
                return;
            }
            std::lock_guard lock(emit_mutex);
            slots[task] = rec;
            while (next_emit < total && slots[next_emit]) {
                if (csv) *csv << trial_csv_row(*slots[next_emit], cfg.record_timing) << '\n';
                ++next_emit;
            }
        }
    };

    const unsigned nthreads = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(total)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    if (csv) csv->flush();

    ExperimentResult result;
    result.records.reserve(total);
    for (auto& s : slots) result.records.push_back(*s);
    result.summary = summarize_records(result.records);
    return result;
}

/// Runs and writes <out> and <out>.summary.json.
inline ExperimentResult run_experiment_to_files(const ExperimentConfig& cfg) {
    if (cfg.output_path.empty()) throw std::invalid_argument("experiment needs an output path");
    std::ofstream csv(cfg.output_path);
    if (!csv) throw std::runtime_error("cannot write " + cfg.output_path);
    auto result = run_experiment(cfg, &csv);
    if (!csv) throw std::runtime_error("write failed for " + cfg.output_path);
    std::ofstream js(cfg.output_path + ".summary.json");
    if (!js) throw std::runtime_error("cannot write " + cfg.output_path + ".summary.json");
    js << summary_json(result.summary, cfg).dump(2) << '\n';
    if (!js) throw std::runtime_error("write failed for " + cfg.output_path + ".summary.json");
    return result;
}

// ---------------------------------------------------------------------------
// Rescalings and tests

enum class Rescaling { tw2, tw1, tw4, lln, corW_l1 };

inline Rescaling parse_rescaling(const std::string& s) {
    if (s == "tw2") return Rescaling::tw2;
    if (s == "tw1") return Rescaling::tw1;
    if (s == "tw4") return Rescaling::tw4;
    if (s == "lln") return Rescaling::lln;
    if (s == "corW_l1") return Rescaling::corW_l1;
    throw std::invalid_argument("unknown rescaling '" + s + "'");
}

///   tw2      (ell - 2 sqrt(n-m)) / (n-m)^{1/6}
///   tw1      (ell - 2 sqrt n) / n^{1/6}
///   tw4      (lambda1 - 2 sqrt n) / n^{1/6}
///   lln      ell / sqrt(n-m)
///   corW_l1  lambda1 log(n) / (theta n)
inline double rescale_statistic(const TrialRecord& r, Rescaling mode, double theta = 1.0) {
    const double n = static_cast<double>(r.n);
    const double free = static_cast<double>(r.n) - static_cast<double>(r.fix_count);
    auto need = [](const std::optional<std::size_t>& v, const char* name) {
        if (!v) throw std::invalid_argument(std::string("record has no ") + name);
        return static_cast<double>(*v);
    };
    auto need_free = [&] {
        if (r.fix_count >= r.n) throw std::domain_error("division by zero: every point is fixed (n == m)");
    };
    switch (mode) {
        case Rescaling::tw2: {
            need_free();
            const double ell = need(r.ell, "ell");
            return (ell - 2.0 * std::sqrt(free)) / std::pow(free, 1.0 / 6.0);
        }
        case Rescaling::tw1: return (need(r.ell, "ell") - 2.0 * std::sqrt(n)) / std::pow(n, 1.0 / 6.0);
        case Rescaling::tw4: return (need(r.lambda1, "lambda1") - 2.0 * std::sqrt(n)) / std::pow(n, 1.0 / 6.0);
        case Rescaling::lln: {
            need_free();
            return need(r.ell, "ell") / std::sqrt(free);
        }
        case Rescaling::corW_l1:
            if (!(theta > 0)) throw std::invalid_argument("corW_l1 needs theta > 0");
            return need(r.lambda1, "lambda1") * std::log(n) / (theta * n);
    }
    throw std::logic_error("unreachable");
}

/// sup_x |F_x(x) - F_y(x)| over the pooled sample.
inline double ks_two_sample(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) ++i;
        while (j < y.size() && y[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    return d;
}

/// Asymptotic p-value of a two-sample KS statistic (Kolmogorov series).
inline double ks_pvalue(double d, std::size_t nx, std::size_t ny) {
    const double ne = static_cast<double>(nx) * static_cast<double>(ny) / static_cast<double>(nx + ny);
    const double sq = std::sqrt(ne);
    const double lambda = (sq + 0.12 + 0.11 / sq) * d;
    if (lambda < 1e-3) return 1.0;
    double sum = 0, sign = 1;
    for (int k = 1; k <= 100; ++k) {
        const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

/// User-supplied CDF table "x,F" sorted by x; compared by linear interpolation.
struct CdfTable {
    std::vector<double> x, f;
};

inline CdfTable read_cdf_table(std::istream& in) {
    CdfTable t;
    std::string line;
    while (std::getline(in, line)) {
        auto body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        auto comma = body.find(',');
        if (comma == std::string::npos) throw std::runtime_error("CDF table: expected 'x,F' rows");
        const auto xs = trim(std::string_view(body).substr(0, comma));
        const auto fs = trim(std::string_view(body).substr(comma + 1));
        if (t.x.empty() && !xs.empty() && !(std::isdigit(static_cast<unsigned char>(xs[0])) || xs[0] == '-' || xs[0] == '.'))
            continue;  // header
        t.x.push_back(parse_double("x", xs));
        t.f.push_back(parse_double("F", fs));
        if (t.x.size() > 1 && t.x.back() <= t.x[t.x.size() - 2]) throw std::runtime_error("CDF table: x must increase");
    }
    if (t.x.size() < 2) throw std::runtime_error("CDF table: need at least two rows");
    return t;
}

inline double cdf_at(const CdfTable& t, double x) {
    if (x <= t.x.front()) return t.f.front();
    if (x >= t.x.back()) return t.f.back();
    const auto it = std::upper_bound(t.x.begin(), t.x.end(), x);
    const auto j = static_cast<std::size_t>(it - t.x.begin());
    const double w = (x - t.x[j - 1]) / (t.x[j] - t.x[j - 1]);
    return t.f[j - 1] + w * (t.f[j] - t.f[j - 1]);
}

/// One-sample KS distance of `sample` against the tabulated CDF.
inline double ks_against_table(std::vector<double> sample, const CdfTable& t) {
    if (sample.empty()) throw std::invalid_argument("ks_against_table: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double F = cdf_at(t, sample[i]);
        d = std::max({d, std::abs(static_cast<double>(i + 1) / n - F), std::abs(static_cast<double>(i) / n - F)});
    }
    return d;
}

/// Fraction of records with 2 - eps < lambda2 / sqrt(n) < 4 + eps. Records
/// without lambda2 are ignored.
inline double lambda2_window(const std::vector<TrialRecord>& records, double eps) {
    std::size_t total = 0, inside = 0;
    for (const auto& r : records) {
        if (!r.lambda2) continue;
        ++total;
        const double v = static_cast<double>(*r.lambda2) / std::sqrt(static_cast<double>(r.n));
        if (v > 2.0 - eps && v < 4.0 + eps) ++inside;
    }
    return total ? static_cast<double>(inside) / static_cast<double>(total) : 0.0;
}

}  // namespace rsfix
