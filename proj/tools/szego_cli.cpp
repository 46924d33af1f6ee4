// szego: sweeps, the acceptance suite and the preset registry from the shell.

#include "szego/acceptance.hpp"
#include "szego/error.hpp"
#include "szego/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

namespace {

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size()) throw std::invalid_argument("bad integer '" + item + "'");
        out.push_back(v);
    }
    return out;
}

// Fits worth printing after a sweep: Szego error and the two asymptotic
// residuals, each wherever there are enough points.
std::vector<szego::NamedFit> sweep_fits(const std::vector<szego::ConvergenceRecord>& records) {
    std::map<std::string, std::vector<szego::ConvergenceRecord>> groups;
    for (const auto& r : records) {
        if (r.status != "INFO" || r.mu != szego::cplx(1.0)) continue;
        if (r.quantity == "szego_rel_err") groups["szego_rel_err"].push_back(r);
        if (r.quantity == "leading" || r.quantity == "f_tilde") {
            groups[r.quantity + " kappa=" + std::to_string(r.kappa)].push_back(r);
        }
    }
    std::vector<szego::NamedFit> fits;
    for (const auto& [name, rows] : groups) {
        try {
            fits.push_back({name, szego::fit_rate(rows, "n", "abs_err")});
        } catch (const szego::Error&) {
            // too few or non-positive points: nothing to fit
        }
    }
    return fits;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toeplitz determinant identities: sweeps and checks"};
    app.require_subcommand(1);

    auto* sweep = app.add_subcommand("sweep", "run a sweep and write CSV");
    std::string config_path, out_path, kappa_text, preset_name;
    int nmax = 0, level = 0, jobs = 0;
    std::uint64_t seed = 0;
    sweep->add_option("--config", config_path, "JSON sweep config");
    sweep->add_option("--out", out_path, "CSV output path (stdout if omitted)");
    sweep->add_option("--preset", preset_name, "preset name, default parameters");
    auto* nmax_opt = sweep->add_option("--nmax", nmax, "use n = 1..nmax")->check(CLI::PositiveNumber);
    auto* kappa_opt = sweep->add_option("--kappa", kappa_text, "comma-separated kappa list");
    auto* level_opt = sweep->add_option("--level", level, "target section level")->check(CLI::PositiveNumber);
    auto* seed_opt = sweep->add_option("--seed", seed, "seed for random presets");
    auto* jobs_opt = sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* check = app.add_subcommand("check", "run the built-in acceptance suite");
    auto* presets = app.add_subcommand("presets", "list presets and default parameters");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*presets) {
        for (auto p : {szego::PresetParams::geom(0.5, 0.3), szego::PresetParams::exp2(0.4, 0.2),
                       szego::PresetParams::cbeta(1.5, 7, 0.2), szego::PresetParams::monomial(0)}) {
            std::cout << szego::to_string(p.name) << ' ' << szego::preset_params_json(p) << '\n';
        }
        return 0;
    }

    if (*check) {
        bool ok = true;
        szego::run_acceptance_suite([&](const szego::CriterionResult& r) {
            std::cout << szego::format_result(r) << std::endl;
            ok = ok && r.pass;
        });
        return ok ? 0 : 1;
    }

    szego::SweepConfig config;
    std::vector<szego::ConvergenceRecord> records;
    try {
        if (!config_path.empty()) {
            config = szego::load_config(config_path);
        } else {
            config.n_list = {1, 2, 3, 4, 5, 6, 7, 8};
        }
        if (!preset_name.empty()) {
            config.preset = szego::PresetParams{};
            config.preset.name = szego::preset_name_from_string(preset_name);
            config.seed = config.preset.seed;
        }
        if (*nmax_opt) {
            config.n_list.resize(static_cast<std::size_t>(nmax));
            std::iota(config.n_list.begin(), config.n_list.end(), 1);
        }
        if (*kappa_opt) config.kappa_list = parse_int_list(kappa_text);
        if (*level_opt) config.level_policy.target_level = level;
        if (*seed_opt) config.seed = seed;
        if (*jobs_opt) config.jobs = jobs;
        if (!out_path.empty()) config.out_path = out_path;
        config.validate();
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        records = szego::run_sweep(config);
        if (config.out_path.empty()) {
            szego::write_csv(records, std::cout);
        } else {
            szego::write_csv_file(records, config.out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "sweep failed: " << e.what() << '\n';
        return 2;
    }
    const szego::Summary summary = szego::report(records, sweep_fits(records));
    (config.out_path.empty() ? std::cerr : std::cout) << summary.text;
    return summary.exit_code;
}
