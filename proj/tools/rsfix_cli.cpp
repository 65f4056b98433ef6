// rsfix: command-line front end.
//
// Exit codes: 0 success, 1 usage or validation error, 2 a verification suite failed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rsfix/rsfix.hpp"

namespace {

using namespace rsfix;

constexpr int kExitVerifyFailed = 2;

struct RegimeFlags {
    std::string ensemble;
    std::string core;
    std::string fix_rule;
    std::optional<double> theta, beta, p, c;
    std::string cycle_type;

    void attach(CLI::App& cmd) {
        cmd.add_option("--regime", ensemble,
                       "uniform | uniform_involution | fpf_involution | n_cycle | cycle_type | composite");
        cmd.add_option("--core", core, "composite core: n_cycle | fpf_involution | derangement");
        cmd.add_option("--fix-rule", fix_rule, "composite fixed-point rule: constant | theta_log | power | proportion");
        cmd.add_option("--theta", theta, "theta for fix_rule theta_log");
        cmd.add_option("--beta", beta, "exponent for fix_rule power");
        cmd.add_option("--p", p, "fraction for fix_rule proportion");
        cmd.add_option("--c", c, "constant for fix_rule constant / power");
        cmd.add_option("--cycle-type", cycle_type, "parts for --regime cycle_type, e.g. 3,2,2");
    }

    // Flags override whatever the key-value block set.
    void apply(KeyValues& kv) const {
        auto put = [&](const char* key, const std::string& v) {
            if (!v.empty()) kv[key] = v;
        };
        auto put_num = [&](const char* key, const std::optional<double>& v) {
            if (v) kv[key] = format_real(*v);
        };
        put("ensemble", ensemble);
        put("core", core);
        put("fix_rule", fix_rule);
        put("cycle_type", cycle_type);
        put_num("theta", theta);
        put_num("beta", beta);
        put_num("p", p);
        put_num("c", c);
        // "composite" is implied when only composite knobs are given
        if (ensemble.empty() && !kv.count("ensemble") && (!core.empty() || !fix_rule.empty())) kv["ensemble"] = "composite";
    }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t s = (std::uint64_t{rd()} << 32) ^ rd();
    std::cerr << "seed = " << s << '\n';
    return s;
}

std::vector<double> read_numbers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        auto body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        out.push_back(parse_double(path, body));
    }
    return out;
}

std::vector<double> read_rescaled(const std::string& path, Rescaling mode, double theta) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<double> out;
    for (const auto& r : read_trial_csv(in)) out.push_back(rescale_statistic(r, mode, theta));
    return out;
}

int run(int argc, char** argv) {
    CLI::App app{"Robinson-Schensted shapes of permutations with many fixed points"};
    app.require_subcommand(1);

    // sample
    auto* sample = app.add_subcommand("sample", "draw permutations, one per line");
    RegimeFlags sample_regime_flags;
    sample_regime_flags.attach(*sample);
    std::size_t sample_n = 0, sample_trials = 1, sample_first = 0;
    std::optional<std::uint64_t> sample_seed;
    std::string sample_config;
    sample->add_option("--n", sample_n, "size")->required();
    sample->add_option("--trials", sample_trials, "number of draws");
    sample->add_option("--first-trial", sample_first, "index of the first draw");
    sample->add_option("--seed", sample_seed, "64-bit seed");
    sample->add_option("--config", sample_config, "key-value file holding the regime");

    // shape
    auto* shape = app.add_subcommand("shape", "Robinson-Schensted shape; reads stdin when --perm is absent");
    std::string shape_perm;
    shape->add_option("--perm", shape_perm, "one-line notation, e.g. \"5 3 2 1 4 6\"");

    // profile
    auto* profile = app.add_subcommand("profile", "height profile CSV of a diagram");
    std::string profile_diagram;
    std::optional<std::size_t> profile_m;
    profile->add_option("--diagram", profile_diagram, "parts, e.g. 7,5,2,1,1")->required();
    profile->add_option("--m", profile_m, "fixed points; switches to the scaled dump s,F_n,Phi_p");

    // distance
    auto* distance = app.add_subcommand("distance", "profile distances");
    std::string dist_a;
    std::optional<std::string> dist_b;
    std::optional<std::size_t> dist_m;
    distance->add_option("--a", dist_a, "first diagram")->required();
    distance->add_option("--b", dist_b, "second diagram (sup distance and its bound); \"\" is the empty diagram");
    distance->add_option("--m", dist_m, "fixed points (scaled distance of --a to the limit curve)");

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Monte Carlo run over an n-ladder");
    RegimeFlags exp_regime_flags;
    exp_regime_flags.attach(*experiment);
    std::string exp_config, exp_n, exp_out, exp_measure;
    std::optional<std::size_t> exp_trials;
    std::optional<std::uint64_t> exp_seed;
    std::optional<unsigned> exp_workers;
    bool exp_timing = false;
    experiment->add_option("--config", exp_config, "key-value config file");
    experiment->add_option("--n", exp_n, "n-ladder, e.g. 1000,4000,16000");
    experiment->add_option("--trials", exp_trials, "trials per n");
    experiment->add_option("--seed", exp_seed, "64-bit seed");
    experiment->add_option("--out", exp_out, "trial CSV path; summary goes to <out>.summary.json");
    experiment->add_option("--workers", exp_workers, "worker threads");
    experiment->add_option("--measure", exp_measure, "shape_distance,ell,lambda1,lambda2,cycle_stats | all");
    experiment->add_flag("--timing", exp_timing, "add a wall_time_s column (not reproducible)");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run self-verification suites");
    std::string verify_suite = "all";
    std::size_t verify_count = 0;
    std::optional<std::uint64_t> verify_seed;
    verify_cmd->add_option("--suite", verify_suite, "greene | lemma15 | lemma34 | convention | samplers | all");
    verify_cmd->add_option("--pairs,--count", verify_count, "override the suite's sample count");
    verify_cmd->add_option("--seed", verify_seed, "64-bit seed");

    // ks
    auto* ks = app.add_subcommand("ks", "two-sample Kolmogorov-Smirnov distance");
    std::string ks_x, ks_y, ks_table, ks_rescale;
    double ks_theta = 1.0;
    ks->add_option("--x", ks_x, "first sample (numbers per line, or trial CSV with --rescale)")->required();
    ks->add_option("--y", ks_y, "second sample");
    ks->add_option("--table", ks_table, "reference CDF table x,F instead of --y");
    ks->add_option("--rescale", ks_rescale, "tw2 | tw1 | tw4 | lln | corW_l1 applied to trial CSVs");
    ks->add_option("--theta", ks_theta, "theta for corW_l1");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (*sample) {
        KeyValues kv = sample_config.empty() ? KeyValues{} : read_key_value_file(sample_config);
        sample_regime_flags.apply(kv);
        const auto spec = regime_from_key_values(kv);
        const auto seed = resolve_seed(sample_seed);
        for (std::size_t k = sample_first; k < sample_first + sample_trials; ++k) {
            auto rng = derive_stream(seed, sample_n, k);
            std::cout << format_permutation(sample_regime(spec, sample_n, rng)) << '\n';
        }
        return 0;
    }

    if (*shape) {
        if (!shape_perm.empty()) {
            std::cout << format_diagram(schensted_shape(parse_permutation(shape_perm))) << '\n';
            return 0;
        }
        std::string line;
        while (std::getline(std::cin, line)) {
            if (trim(line).empty()) continue;
            std::cout << format_diagram(schensted_shape(parse_permutation(line))) << '\n';
        }
        return 0;
    }

    if (*profile) {
        const auto d = parse_diagram(profile_diagram);
        if (profile_m)
            write_scaled_profile_csv(std::cout, d, *profile_m);
        else
            write_profile_csv(std::cout, d);
        return 0;
    }

    if (*distance) {
        const auto a = parse_diagram(dist_a);
        std::cout.precision(12);
        if (dist_b) {
            const auto b = parse_diagram(*dist_b);
            const auto r = oracles::verify_lemma34(a, b);
            std::cout << "sup_distance," << r.sup << "\nlemma34_bound," << r.bound << "\nslack," << r.slack << '\n';
            return r.pass ? 0 : kExitVerifyFailed;
        }
        if (!dist_m) throw std::invalid_argument("distance needs --b or --m");
        std::cout << "scaled_sup_distance," << scaled_sup_distance(a, a.size(), *dist_m) << '\n';
        return 0;
    }

    if (*experiment) {
        KeyValues kv = exp_config.empty() ? KeyValues{} : read_key_value_file(exp_config);
        exp_regime_flags.apply(kv);
        if (!exp_n.empty()) kv["n_ladder"] = exp_n;
        if (exp_trials) kv["trials"] = std::to_string(*exp_trials);
        if (!exp_out.empty()) kv["out"] = exp_out;
        if (exp_workers) kv["workers"] = std::to_string(*exp_workers);
        if (!exp_measure.empty()) kv["measurements"] = exp_measure;
        if (exp_timing) kv["timing"] = "1";
        if (exp_seed)
            kv["seed"] = std::to_string(*exp_seed);
        else if (!kv.count("seed"))
            kv["seed"] = std::to_string(resolve_seed(std::nullopt));
        const auto cfg = config_from_key_values(kv);
        const auto result = run_experiment_to_files(cfg);
        std::cerr << result.records.size() << " trials written to " << cfg.output_path << '\n';
        return 0;
    }

    if (*verify_cmd) {
        const auto seed = resolve_seed(verify_seed);
        std::vector<std::string> suites =
            verify_suite == "all" ? verify::suite_names() : std::vector<std::string>{verify_suite};
        bool ok = true;
        for (const auto& name : suites) {
            const auto rep = verify::run_suite(name, seed, verify_count);
            ok = ok && rep.pass();
            std::cout << verify::to_json(rep).dump() << '\n';
        }
        return ok ? 0 : kExitVerifyFailed;
    }

    if (*ks) {
        std::vector<double> x, y;
        if (!ks_rescale.empty()) {
            const auto mode = parse_rescaling(ks_rescale);
            x = read_rescaled(ks_x, mode, ks_theta);
            if (!ks_y.empty()) y = read_rescaled(ks_y, mode, ks_theta);
        } else {
            x = read_numbers(ks_x);
            if (!ks_y.empty()) y = read_numbers(ks_y);
        }
        std::cout.precision(12);
        if (!ks_table.empty()) {
            std::ifstream in(ks_table);
            if (!in) throw std::runtime_error("cannot open " + ks_table);
            std::cout << "ks_table," << ks_against_table(x, read_cdf_table(in)) << '\n';
        }
        if (!y.empty()) {
            const double d = ks_two_sample(x, y);
            std::cout << "ks," << d << "\np_value," << ks_pvalue(d, x.size(), y.size()) << '\n';
        }
        if (ks_table.empty() && y.empty()) throw std::invalid_argument("ks needs --y or --table");
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
