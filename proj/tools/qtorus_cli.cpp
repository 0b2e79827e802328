// Experiment driver: named, reproducible desk-scale experiments over the
// quantum-torus library, emitting JSON or CSV reports with embedded
// configuration and a config hash.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qtorus/qtorus.hpp"

namespace {

struct CommonFlags {
    std::string config_file;
    std::string theta, p, symbol, gamma;
    std::optional<long long> degree, grid, budget, trials, period, n_max;
    std::optional<int> restarts, ladder, horizon, count;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::string format = "json";
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_file, "JSON config file (flags override file values)");
    cmd->add_option("--theta", f.theta, "angle: a/b, decimal, sqrt2-1, golden");
    cmd->add_option("--p", f.p, "exponent: 1, 2, 4, ... or inf");
    cmd->add_option("--symbol", f.symbol, "builtin symbol spec, e.g. fejer:4, pisier:7:5");
    cmd->add_option("--gamma", f.gamma, "second angle for relation searches");
    cmd->add_option("--degree", f.degree, "coefficient box half-width");
    cmd->add_option("--grid", f.grid, "quadrature grid override");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--restarts", f.restarts, "optimizer restarts");
    cmd->add_option("--ladder", f.ladder, "convergent ladder depth");
    cmd->add_option("--budget", f.budget, "search budget");
    cmd->add_option("--trials", f.trials, "ensemble size");
    cmd->add_option("--horizon", f.horizon, "sequence horizon");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--format", f.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
}

// file config first, then flags on top
qtorus::json resolve(const CommonFlags& f) {
    qtorus::json user = qtorus::json::object();
    if (!f.config_file.empty()) {
        std::ifstream in(f.config_file);
        if (!in) throw std::invalid_argument("config: cannot open '" + f.config_file + "'");
        try {
            in >> user;
        } catch (const std::exception& e) {
            throw std::invalid_argument("config: cannot parse '" + f.config_file +
                                        "': " + e.what());
        }
        if (!user.is_object())
            throw std::invalid_argument("config: '" + f.config_file + "' must hold an object");
        // files may spell values either way; the experiments want text for
        // angles/exponents/symbols and numbers for counts
        for (const char* k : {"theta", "p", "symbol", "gamma", "pair_gamma"})
            if (user.contains(k) && user[k].is_number()) user[k] = user[k].dump();
        for (const char* k : {"degree", "grid", "seed", "restarts", "iterations", "ladder",
                              "budget", "trials", "horizon", "count", "period", "n_max",
                              "pair_eps"})
            if (user.contains(k) && user[k].is_string()) {
                try {
                    user[k] = qtorus::json::parse(user[k].get<std::string>());
                } catch (const std::exception&) {
                    throw std::invalid_argument(std::string("config: key '") + k +
                                                "' must be numeric");
                }
            }
    }
    if (!f.theta.empty()) user["theta"] = f.theta;
    if (!f.p.empty()) user["p"] = f.p;
    if (!f.symbol.empty()) user["symbol"] = f.symbol;
    if (!f.gamma.empty()) user["gamma"] = f.gamma;
    if (f.degree) user["degree"] = *f.degree;
    if (f.grid) user["grid"] = *f.grid;
    if (f.seed) user["seed"] = *f.seed;
    if (f.restarts) user["restarts"] = *f.restarts;
    if (f.ladder) user["ladder"] = *f.ladder;
    if (f.budget) user["budget"] = *f.budget;
    if (f.trials) user["trials"] = *f.trials;
    if (f.horizon) user["horizon"] = *f.horizon;
    return user;
}

int emit(const qtorus::Report& rep, const CommonFlags& f) {
    const std::string text = f.format == "csv" ? qtorus::report_to_csv(rep)
                                               : qtorus::report_to_json(rep).dump(2) + "\n";
    if (f.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(f.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write '" << f.out << "'\n";
            return 4;
        }
        out << text;
    }
    return rep.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-torus harmonic analysis experiments"};
    app.require_subcommand(1);

    const std::vector<std::string> names{"disc-check", "norm-scan", "sidon-check",
                                         "measure-check", "relation-check"};
    std::vector<CommonFlags> flags(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) {
        CLI::App* cmd = app.add_subcommand(names[i]);
        add_common(cmd, flags[i]);
    }

    CLI11_PARSE(app, argc, argv);

    for (std::size_t i = 0; i < names.size(); ++i) {
        if (!app.get_subcommand(names[i])->parsed()) continue;
        try {
            const qtorus::json user = resolve(flags[i]);
            const qtorus::Report rep = qtorus::run_experiment(names[i], user);
            return emit(rep, flags[i]);
        } catch (const qtorus::BudgetError& e) {
            std::cerr << "budget error: " << e.what() << "\n";
            return 3;
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 4;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 2;
        }
    }
    return 4;
}
