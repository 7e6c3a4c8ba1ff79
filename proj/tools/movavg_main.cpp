#include <CLI11.hpp>

#include "movavg/cli.hpp"
#include "movavg/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"moving box averages over torus actions: cone verdicts, towers, "
                 "sweepout constructions and submanifold experiments"};
    app.require_subcommand(1);

    std::string config_path, out, seed, threads;

    // flags shared by every command; per-command flags mirror config keys and
    // override the file
    std::map<std::string, std::map<std::string, std::string>> overrides;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "config file (key = value lines)");
        auto& store = overrides[sub->get_name()];
        auto opt = [&store, sub](const std::string& flag, const std::string& key,
                                 const std::string& help) {
            sub->add_option_function<std::string>(
                flag, [&store, key](const std::string& v) { store[key] = v; }, help);
        };
        opt("--out", "out", "output directory (default $MOVAVG_OUT or ./out)");
        opt("--seed", "seed", "RNG seed");
        opt("--threads", "threads", "OpenMP thread count (0 = library default)");
        return opt;
    };

    {
        auto* sub = app.add_subcommand("cones", "cross-section CSV for a box family");
        auto opt = add_common(sub);
        opt("--family", "family", "generator, e.g. linear:r=2, sqrt, squares_unit");
        opt("--K", "K", "prefix length");
        opt("--axis", "axis", "axis (1-based)");
        opt("--alpha-grid", "alpha_grid", "comma list of apertures");
        opt("--lambda-grid", "lambda_grid", "comma list of heights");
        opt("--lambda-max", "lambda_max", "geometric height grid bound");
    }
    {
        auto* sub = app.add_subcommand("verdict", "empirical cone-condition verdict");
        auto opt = add_common(sub);
        opt("--family", "family", "generator spec");
        opt("--K", "K", "prefix length");
        opt("--axis", "axis", "axis (1-based)");
        opt("--alpha-grid", "alpha_grid", "comma list of apertures");
        opt("--lambda-grid", "lambda_grid", "comma list of heights");
        opt("--lambda-max", "lambda_max", "geometric height grid bound");
    }
    {
        auto* sub = app.add_subcommand("average", "a single box average");
        auto opt = add_common(sub);
        opt("--mode", "mode", "discrete | continuous");
        opt("--theta", "theta", "rotation angle (golden, sqrt2m1, or exact expression)");
        opt("--obs", "obs", "character:xi=..., indicator:box=lo..hi, const:c=...");
        opt("--x", "x", "base point");
        opt("--corner", "corner", "box corner");
        opt("--len", "len", "box length");
        opt("--gamma", "gamma", "canonical suspension gamma (continuous)");
        opt("--w", "w", "continuous box corner, comma list");
        opt("--s", "s", "continuous box sides, comma list");
        opt("--method", "method", "exact | quad");
    }
    {
        auto* sub = app.add_subcommand("converge", "pointwise convergence experiment");
        auto opt = add_common(sub);
        opt("--family", "family", "generator spec");
        opt("--K", "K", "prefix length");
        opt("--theta", "theta", "rotation angle");
        opt("--obs", "obs", "observable");
        opt("--samples", "samples", "sample count");
        opt("--override", "override", "run even when the cone condition fails");
        opt("--parallel", "parallel", "true|false");
    }
    {
        auto* sub = app.add_subcommand("tower", "build and verify a rotation tower");
        auto opt = add_common(sub);
        opt("--theta", "theta", "rotation angle");
        opt("--N", "N", "tower height");
        opt("--delta", "delta", "coverage gap target in (0,1)");
        opt("--require-coverage", "require_coverage", "fail when 1-delta is unreachable");
    }
    {
        auto* sub = app.add_subcommand("sweepout", "strong-sweeping-out construction and checks");
        auto opt = add_common(sub);
        opt("--family", "family", "generator spec (default squares_unit)");
        opt("--K", "K", "prefix length");
        opt("--p", "p", "target ratio");
        opt("--theta", "theta", "rotation angle");
        opt("--eps", "eps", "maximal-operator threshold");
        opt("--samples", "samples", "oscillation samples");
        opt("--ratio-samples", "ratio_samples", "sampling cross-check size");
        opt("--scan-K", "scan_K", "oscillation window end");
        opt("--pad", "pad", "pad N_1 by one (default true)");
    }
    {
        auto* sub = app.add_subcommand("submanifold", "flat-piece genericity failure experiment");
        auto opt = add_common(sub);
        opt("--u", "u", "flat piece offset, comma list");
        opt("--v", "v", "flat piece direction, comma list");
        opt("--eps", "eps", "target mu(E_eps)");
        opt("--p", "p", "sweepout ratio (0 = auto from eps)");
        opt("--samples", "samples", "sample points");
        opt("--gamma", "gamma", "override the suspension gamma");
        opt("--vol-factor", "vol_factor", "vol_m(M) as a multiple of the Gram factor");
        opt("--pass-threshold", "pass_threshold", "flat-average success threshold");
    }

    CLI11_PARSE(app, argc, argv);

    auto* sub = app.get_subcommands().front();
    movavg::Config cfg;
    try {
        if (!config_path.empty()) cfg = movavg::Config::from_file(config_path);
    } catch (const movavg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    }
    for (const auto& [k, v] : overrides[sub->get_name()]) cfg.set(k, v);
    return movavg::run_command(sub->get_name(), cfg);
}
