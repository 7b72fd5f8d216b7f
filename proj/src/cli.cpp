#include "specount/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specount/asymptotics.hpp"
#include "specount/potential.hpp"
#include "specount/spectral.hpp"
#include "format_util.hpp"

namespace specount::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;
constexpr int kExitPropertyFailed = 3;

// Merges a JSON config file into the argument list: every key that is not
// already present as --key gets appended, so explicit flags win.
std::vector<std::string> apply_config(std::vector<std::string> args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (path.empty()) return args;

    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    nlohmann::json cfg = nlohmann::json::parse(in);
    if (!cfg.is_object()) throw std::invalid_argument("config must be a JSON object");

    auto has_flag = [&args](const std::string& flag) {
        for (const auto& a : args)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };

    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        if (has_flag(flag)) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
        } else if (value.is_string()) {
            args.push_back(flag);
            args.push_back(value.get<std::string>());
        } else if (value.is_number()) {
            args.push_back(flag);
            args.push_back(fmt17(value.get<double>()));
        } else if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ',';
                joined += item.is_string() ? item.get<std::string>()
                                           : fmt17(item.get<double>());
            }
            args.push_back(flag);
            args.push_back(joined);
        } else {
            throw std::invalid_argument("config key '" + key + "' has an unsupported type");
        }
    }
    return args;
}

struct EngineFlags {
    std::string method = "nodes";
    double safety = 4.0;
    std::int64_t l_min = 1024;
    std::int64_t l_max = std::int64_t{1} << 31;
    bool strict = false;

    CountOptions options() const {
        CountOptions opts;
        opts.method = method_from_name(method);
        opts.safety = safety;
        opts.l_min = l_min;
        opts.l_max = l_max;
        return opts;
    }
};

void add_engine_flags(CLI::App* cmd, EngineFlags* flags, bool with_method = true) {
    if (with_method)
        cmd->add_option("--method", flags->method, "Counting method")
            ->default_val("nodes")
            ->check(CLI::IsMember({"sturm", "nodes"}));
    cmd->add_option("--safety", flags->safety,
                    "Initial truncation factor K (L0 = K sqrt(c_eff/E))")
        ->default_val(4.0)
        ->check(CLI::Range(1.0, 1e6));
    cmd->add_option("--lmin", flags->l_min, "Smallest truncation")
        ->default_val(std::int64_t{1024})
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lmax", flags->l_max, "Largest truncation")
        ->default_val(std::int64_t{1} << 31)
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--strict", flags->strict,
                  "Exit with status 2 when any result is not converged");
}

void add_config_flag(CLI::App* cmd) {
    std::string dummy;
    cmd->add_option("--config", dummy,
                    "JSON file whose keys mirror the flag names");
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << contents;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::vector<std::int64_t> parse_cutoffs(const std::string& text) {
    std::vector<std::int64_t> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        double v = std::stod(tok, &used);  // accepts 1e6 as well as 1000000
        if (used != tok.size() || !(v >= 1.0) || v > 9e15 ||
            v != std::floor(v))
            throw std::invalid_argument("--cutoffs: bad cutoff '" + tok + "'");
        out.push_back(static_cast<std::int64_t>(v));
    }
    if (out.empty()) throw std::invalid_argument("--cutoffs: empty list");
    return out;
}

std::vector<std::int64_t> log_spaced(std::int64_t n_min, std::int64_t n_max,
                                     int points) {
    if (n_min < 1 || n_max <= n_min)
        throw std::invalid_argument("nodes: need 1 <= nmin < nmax");
    if (points < 2) throw std::invalid_argument("nodes: need at least 2 points");
    std::vector<std::int64_t> out;
    double lo = std::log10(static_cast<double>(n_min));
    double hi = std::log10(static_cast<double>(n_max));
    for (int j = 0; j < points; ++j) {
        double x = lo + (hi - lo) * j / (points - 1);
        auto n = static_cast<std::int64_t>(std::llround(std::pow(10.0, x)));
        n = std::max<std::int64_t>(1, n);
        if (out.empty() || n > out.back()) out.push_back(n);
    }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Bound-state counting for half-line discrete Schrodinger operators"};
    app.require_subcommand(1);

    // --- count -----------------------------------------------------------
    auto* count_cmd = app.add_subcommand(
        "count", "Count eigenvalues <= -E on an adaptive truncation");
    std::string count_potential;
    double count_energy = 0.0;
    EngineFlags count_flags;
    count_cmd->add_option("--potential", count_potential, "Potential spec")->required();
    count_cmd->add_option("--energy", count_energy, "Energy E > 0")->required();
    add_engine_flags(count_cmd, &count_flags);
    add_config_flag(count_cmd);

    // --- curve -----------------------------------------------------------
    auto* curve_cmd = app.add_subcommand(
        "curve", "Sample N_E over a geometric energy grid, write CSV");
    std::string curve_potential, curve_out;
    EnergyGrid curve_grid{0.0, 0.0, 3};
    EngineFlags curve_flags;
    curve_cmd->add_option("--potential", curve_potential, "Potential spec")->required();
    curve_cmd->add_option("--emin", curve_grid.e_min, "Smallest energy")->required();
    curve_cmd->add_option("--emax", curve_grid.e_max, "Largest energy")->required();
    curve_cmd->add_option("--per-decade", curve_grid.points_per_decade,
                          "Grid points per decade")
        ->default_val(3);
    curve_cmd->add_option("--out", curve_out, "Output CSV path")->required();
    add_engine_flags(curve_cmd, &curve_flags);
    add_config_flag(curve_cmd);

    // --- slope -----------------------------------------------------------
    auto* slope_cmd = app.add_subcommand(
        "slope", "OLS slope of count against -ln E, with the theoretical value");
    std::string slope_in, slope_potential;
    double slope_c = 0.0;
    bool slope_c_given = false;
    EnergyGrid slope_grid{0.0, 0.0, 3};
    bool slope_grid_given = false;
    EngineFlags slope_flags;
    slope_cmd->add_option("--in", slope_in, "Curve CSV produced by `curve`");
    slope_cmd->add_option("--c", slope_c, "Coupling c for the theoretical slope")
        ->each([&slope_c_given](const std::string&) { slope_c_given = true; });
    slope_cmd->add_option("--potential", slope_potential,
                          "Potential spec (defaults to inverse_square(c=<c>))");
    slope_cmd->add_option("--emin", slope_grid.e_min, "Smallest energy")
        ->each([&slope_grid_given](const std::string&) { slope_grid_given = true; });
    slope_cmd->add_option("--emax", slope_grid.e_max, "Largest energy");
    slope_cmd->add_option("--per-decade", slope_grid.points_per_decade,
                          "Grid points per decade")
        ->default_val(3);
    add_engine_flags(slope_cmd, &slope_flags);
    add_config_flag(slope_cmd);

    // --- nodes -----------------------------------------------------------
    auto* nodes_cmd = app.add_subcommand(
        "nodes", "Sign-flip growth of the zero-energy solution, write CSV");
    double nodes_c = 0.0;
    std::int64_t nodes_nmax = 0, nodes_nmin = 1000;
    int nodes_points = 10;
    std::string nodes_out;
    nodes_cmd->add_option("--c", nodes_c, "Coupling c > 1/4")->required();
    nodes_cmd->add_option("--nmax", nodes_nmax, "Largest N")->required();
    nodes_cmd->add_option("--nmin", nodes_nmin, "Smallest N")->default_val(std::int64_t{1000});
    nodes_cmd->add_option("--points", nodes_points, "Number of log-spaced N values")
        ->default_val(10);
    nodes_cmd->add_option("--out", nodes_out, "Output CSV path")->required();
    add_config_flag(nodes_cmd);

    // --- verify-lemma ------------------------------------------------------
    auto* lemma_cmd = app.add_subcommand(
        "verify-lemma",
        "Randomized check of the splitting inequalities; one JSON report per line");
    std::uint64_t lemma_seed = 42;
    int lemma_instances = 200;
    lemma_cmd->add_option("--seed", lemma_seed, "RNG seed")->default_val(std::uint64_t{42});
    lemma_cmd->add_option("--instances", lemma_instances, "Number of instances")
        ->default_val(200)
        ->check(CLI::PositiveNumber);
    add_config_flag(lemma_cmd);

    // --- kneser ------------------------------------------------------------
    auto* kneser_cmd = app.add_subcommand(
        "kneser", "Classify the discrete spectrum tail: Finite/Infinite/Undetermined");
    std::string kneser_potential;
    EnergyGrid kneser_grid{1e-10, 1e-2, 1};
    int kneser_window = 5;
    EngineFlags kneser_flags;
    kneser_cmd->add_option("--potential", kneser_potential, "Potential spec")->required();
    kneser_cmd->add_option("--emin", kneser_grid.e_min, "Smallest energy")
        ->default_val(1e-10);
    kneser_cmd->add_option("--emax", kneser_grid.e_max, "Largest energy")
        ->default_val(1e-2);
    kneser_cmd->add_option("--per-decade", kneser_grid.points_per_decade,
                           "Grid points per decade")
        ->default_val(1);
    kneser_cmd->add_option("--window", kneser_window, "Saturation window")
        ->default_val(5);
    add_engine_flags(kneser_cmd, &kneser_flags);
    add_config_flag(kneser_cmd);

    // --- box ---------------------------------------------------------------
    auto* box_cmd = app.add_subcommand(
        "box", "Explicitly solvable box count: engine vs closed form");
    double box_c = 0.0, box_eps = 0.0, box_energy = 0.0;
    box_cmd->add_option("--c", box_c, "Coupling c > 1/4")->required();
    box_cmd->add_option("--eps", box_eps, "Splitting parameter in (0,1)")->required();
    box_cmd->add_option("--energy", box_energy, "Energy E > 0")->required();
    add_config_flag(box_cmd);

    // --- hypothesis ----------------------------------------------------------
    auto* hyp_cmd = app.add_subcommand(
        "hypothesis", "Partial sums of n|W(n)| as a summability proxy");
    std::string hyp_potential;
    std::string hyp_cutoffs = "1000,10000,100000,1000000";
    hyp_cmd->add_option("--potential", hyp_potential, "Potential spec")->required();
    hyp_cmd->add_option("--cutoffs", hyp_cutoffs, "Comma-separated cutoff list")
        ->default_val("1000,10000,100000,1000000");
    add_config_flag(hyp_cmd);

    try {
        std::vector<std::string> args = apply_config(raw_args);
        // CLI11 parses argv-style vectors in reverse.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (count_cmd->parsed()) {
            Potential pot = Potential::parse(count_potential);
            CountResult r = count_bound_states(pot, count_energy, count_flags.options());
            out << to_json(r) << "\n";
            return (count_flags.strict && !r.converged) ? kExitNotConverged : kExitOk;
        }

        if (curve_cmd->parsed()) {
            Potential pot = Potential::parse(curve_potential);
            CountingCurve curve = counting_curve(pot, curve_grid, curve_flags.options());
            write_file(curve_out, to_csv(curve));
            if (curve_flags.strict)
                for (const auto& p : curve.entries)
                    if (!p.result.converged) return kExitNotConverged;
            return kExitOk;
        }

        if (slope_cmd->parsed()) {
            CountingCurve curve;
            if (!slope_in.empty()) {
                std::ifstream in(slope_in);
                if (!in) throw std::invalid_argument("cannot open '" + slope_in + "'");
                curve = curve_from_csv(in);
            } else {
                if (!slope_grid_given)
                    throw std::invalid_argument(
                        "slope: supply --in or a grid (--emin/--emax)");
                Potential pot = slope_potential.empty()
                                    ? (slope_c_given
                                           ? Potential::inverse_square(slope_c)
                                           : throw std::invalid_argument(
                                                 "slope: supply --potential or --c"))
                                    : Potential::parse(slope_potential);
                curve = counting_curve(pot, slope_grid, slope_flags.options());
            }
            std::optional<double> c;
            if (slope_c_given) c = slope_c;
            SlopeReport rep = slope_estimate(curve, c);
            out << to_json(rep) << "\n";
            if (slope_flags.strict)
                for (const auto& p : curve.entries)
                    if (!p.result.converged) return kExitNotConverged;
            return kExitOk;
        }

        if (nodes_cmd->parsed()) {
            auto ns = log_spaced(nodes_nmin, nodes_nmax, nodes_points);
            auto growth = node_growth_curve(nodes_c, ns);
            std::string csv = "lnN,count\n";
            for (const auto& [ln_n, cnt] : growth) {
                csv += fmt17(ln_n);
                csv += ',';
                csv += std::to_string(cnt);
                csv += '\n';
            }
            write_file(nodes_out, csv);
            return kExitOk;
        }

        if (lemma_cmd->parsed()) {
            std::mt19937_64 rng(lemma_seed);
            std::uniform_int_distribution<int> support_len(1, 8);
            std::uniform_int_distribution<std::int64_t> trunc(20, 200);
            std::uniform_real_distribution<double> depth(-3.0, 0.0);
            std::uniform_real_distribution<double> log_e(std::log(1e-3), std::log(1.0));
            std::uniform_int_distribution<int> eps_step(1, 9);
            bool all_hold = true;
            for (int i = 0; i < lemma_instances; ++i) {
                auto draw = [&]() {
                    std::vector<double> vals(static_cast<std::size_t>(support_len(rng)));
                    for (double& v : vals) v = depth(rng);
                    return Potential::compact_support(std::move(vals));
                };
                Potential v = draw();
                Potential w = draw();
                double e = std::exp(log_e(rng));
                double eps = 0.1 * eps_step(rng);
                std::int64_t l = trunc(rng);
                LemmaReport rep = verify_splitting_inequalities(v, w, e, eps, l);
                out << to_json(rep) << "\n";
                if (!rep.upper_holds || !rep.lower_holds) all_hold = false;
            }
            return all_hold ? kExitOk : kExitPropertyFailed;
        }

        if (kneser_cmd->parsed()) {
            Potential pot = Potential::parse(kneser_potential);
            Kneser verdict =
                kneser_classify(pot, kneser_grid, kneser_window, kneser_flags.options());
            out << kneser_name(verdict) << "\n";
            return kExitOk;
        }

        if (box_cmd->parsed()) {
            BoxCount b = explicit_box_count(box_energy, box_eps, box_c);
            out << to_json(b) << "\n";
            return kExitOk;
        }

        if (hyp_cmd->parsed()) {
            Potential pot = Potential::parse(hyp_potential);
            out << "cutoff,weight\n";
            for (std::int64_t cutoff : parse_cutoffs(hyp_cutoffs)) {
                out << cutoff << ',' << fmt17(hypothesis_weight(pot, cutoff)) << "\n";
            }
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    err << "error: no subcommand\n";
    return kExitUsage;
}

}  // namespace specount::cli
