#include "movavg/cli.hpp"

#include <filesystem>
#include <iostream>

#include "movavg/averaging.hpp"
#include "movavg/cone.hpp"
#include "movavg/errors.hpp"
#include "movavg/parallel.hpp"
#include "movavg/submanifold.hpp"
#include "movavg/sweepout.hpp"
#include "movavg/towers.hpp"

namespace movavg {

namespace {

using nlohmann::json;

ExactScalar theta_by_name(const std::string& text) {
    if (text == "golden") return ExactScalar::parse("(sqrt(5)-1)/2");
    if (text == "sqrt2m1") return ExactScalar::parse("sqrt(2)-1");
    if (text == "sqrt3m1") return ExactScalar::parse("sqrt(3)-1");
    return ExactScalar::parse(text);
}

Rational parse_rational(const std::string& text) {
    return ExactScalar::parse(text).as_rational();
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        auto next = s.find(sep, pos);
        if (next == std::string::npos) {
            out.push_back(s.substr(pos));
            break;
        }
        out.push_back(s.substr(pos, next - pos));
        pos = next + 1;
    }
    return out;
}

std::vector<Rational> parse_rational_list(const std::string& s) {
    std::vector<Rational> out;
    for (const auto& tok : split(s, ','))
        if (!tok.empty()) out.push_back(parse_rational(tok));
    return out;
}

std::string out_dir(const Config& cfg) {
    std::string dir = cfg.get("out", "");
    if (dir.empty()) {
        const char* env = std::getenv("MOVAVG_OUT");
        dir = env ? env : "out";
    }
    std::filesystem::create_directories(dir);
    return dir;
}

json base_report(const std::string& command, const Config& cfg) {
    json j;
    j["command"] = command;
    j["version"] = kVersion;
    j["seed"] = cfg.get_int("seed", 1);
    j["config"] = config_json(cfg);
    return j;
}

void emit(const json& j, const std::string& dir, const std::string& command) {
    write_text_file(dir + "/" + command + "_report.json", j.dump(2) + "\n");
}

// Observable from config text: "character:xi=1,0", "indicator:box=0..1/2;...",
// "const:c=2.5".
Observable parse_observable(const std::string& text, int m) {
    auto colon = text.find(':');
    std::string kind = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto eq = rest.find('=');
    std::string arg = eq == std::string::npos ? "" : rest.substr(eq + 1);
    if (kind == "character") {
        std::vector<std::int64_t> xi;
        for (const auto& tok : split(arg, ','))
            if (!tok.empty()) xi.push_back(std::stoll(tok));
        if (int(xi.size()) != m) throw ConfigError("character frequency needs " + std::to_string(m) + " components");
        return Observable::character(std::move(xi));
    }
    if (kind == "indicator") {
        TorusSet set(m);
        for (const auto& box_tok : split(arg, ';')) {
            if (box_tok.empty()) continue;
            std::vector<Interval> sides;
            for (const auto& side_tok : split(box_tok, 'x')) {
                auto dots = side_tok.find("..");
                if (dots == std::string::npos)
                    throw ConfigError("indicator box side must look like lo..hi, got " + side_tok);
                sides.push_back({ExactScalar::parse(side_tok.substr(0, dots)),
                                 ExactScalar::parse(side_tok.substr(dots + 2))});
            }
            if (int(sides.size()) != m)
                throw ConfigError("indicator box needs " + std::to_string(m) + " sides");
            set.add_box(sides);
        }
        return Observable::indicator(std::move(set));
    }
    if (kind == "const") {
        double c = arg.empty() ? 1.0 : std::stod(arg);
        return Observable::trig_poly({{std::vector<std::int64_t>(std::size_t(m), 0), c}});
    }
    throw ConfigError("unknown observable '" + text + "'");
}

json verdict_json(const ConeVerdict& v) {
    json rows = json::array();
    for (const auto& row : v.rows) {
        json probes = json::array();
        for (const auto& p : row.probes)
            probes.push_back({{"lambda", rational_json(p.lambda)},
                              {"size", rational_json(p.size)},
                              {"ratio", rational_json(p.ratio)}});
        rows.push_back({{"alpha", rational_json(row.alpha)},
                        {"max_ratio", rational_json(row.max_ratio)},
                        {"blowup", row.blowup},
                        {"exponent", row.exponent},
                        {"probes", probes}});
    }
    return {{"verdict", to_string(v.verdict)},
            {"axis", v.axis + 1},
            {"witness_A", rational_json(v.witness_A)},
            {"witness_alpha", rational_json(v.witness_alpha)},
            {"growth_exponent", v.growth_exponent},
            {"coverage_lambda", rational_json(v.coverage_lambda)},
            {"rows", rows}};
}

int cmd_cones(const Config& cfg) {
    std::string dir = out_dir(cfg);
    auto spec = GeneratorSpec::parse(cfg.require("family"));
    BoxFamily fam = orthant_split(generate_family(spec, cfg.get_int("K", 1000)));
    int axis = int(cfg.get_int("axis", 1)) - 1;
    auto alphas = parse_rational_list(cfg.get("alpha_grid", "1"));
    std::vector<Rational> lambdas;
    if (cfg.has("lambda_grid")) {
        lambdas = parse_rational_list(cfg.require("lambda_grid"));
    } else {
        for (std::int64_t l = 1; l <= cfg.get_int("lambda_max", 256); l *= 2)
            lambdas.push_back(Rational(l));
    }
    CsvWriter csv(dir + "/cones.csv", {"alpha", "lambda", "size", "ratio"});
    std::size_t rows = 0;
    for (const auto& a : alphas)
        for (const auto& l : lambdas) {
            ConeCrossSection cs = cross_section(fam, axis, a, l);
            csv.row({a.str(), l.str(), cs.size.str(), format_double((cs.size / l).to_double())});
            ++rows;
        }
    json j = base_report("cones", cfg);
    j["rows"] = rows;
    j["csv"] = "cones.csv";
    emit(j, dir, "cones");
    std::cout << "cones: wrote " << rows << " cross-sections to " << dir << "/cones.csv\n";
    return 0;
}

int cmd_verdict(const Config& cfg) {
    std::string dir = out_dir(cfg);
    auto spec = GeneratorSpec::parse(cfg.require("family"));
    BoxFamily fam = orthant_split(generate_family(spec, cfg.get_int("K", 2000)));
    int axis = int(cfg.get_int("axis", 1)) - 1;
    VerdictConfig vc;
    if (cfg.has("alpha_grid")) vc.alpha_grid = parse_rational_list(cfg.require("alpha_grid"));
    if (cfg.has("lambda_grid")) vc.lambda_grid = parse_rational_list(cfg.require("lambda_grid"));
    else if (cfg.has("lambda_max")) {
        vc.lambda_grid.clear();
        for (std::int64_t l = 1; l <= cfg.get_int("lambda_max", 512); l *= 2)
            vc.lambda_grid.push_back(Rational(l));
    }
    ConeVerdict v = condition_verdict(fam, axis, vc);
    json j = base_report("verdict", cfg);
    j["result"] = verdict_json(v);
    emit(j, dir, "verdict");
    std::cout << "verdict: " << to_string(v.verdict) << " (witness_A = " << v.witness_A.str()
              << " at alpha = " << v.witness_alpha.str() << ", growth exponent "
              << v.growth_exponent << ")\n";
    return 0;
}

int cmd_average(const Config& cfg) {
    std::string dir = out_dir(cfg);
    std::string mode = cfg.get("mode", "discrete");
    json j = base_report("average", cfg);
    if (mode == "discrete") {
        ExactScalar theta = theta_by_name(cfg.get("theta", "golden"));
        TorusSystem sys = TorusSystem::product_rotation({theta});
        Observable obs = parse_observable(cfg.get("obs", "indicator:box=0..1/2"), 1);
        DPoint x = {cfg.get_double("x", 0.0)};
        BoxEntry box{{parse_rational(cfg.get("corner", "0"))}, {parse_rational(cfg.get("len", "1"))}};
        CVal v = discrete_box_average(sys, obs, x, box);
        j["value"] = {{"re", v.real()}, {"im", v.imag()}};
    } else if (mode == "continuous") {
        Rational gamma = parse_rational(cfg.get("gamma", "1/8"));
        TorusSystem sys = TorusSystem::suspension_canonical(
            ExactScalar(gamma), ExactScalar(gamma) * ExactScalar::sqrt_of(2),
            ExactScalar(gamma) * ExactScalar::sqrt_of(3));
        Observable obs = parse_observable(cfg.get("obs", "indicator:box=0..1/2x0..1x0..1"), 3);
        XPoint x(3, ExactScalar(0));
        std::vector<Rational> w = parse_rational_list(cfg.get("w", "0,0"));
        std::vector<Rational> s = parse_rational_list(cfg.get("s", "1,1"));
        auto method = cfg.get("method", "exact") == "exact" ? ContinuousMethod::ExactIndicator
                                                            : ContinuousMethod::TensorMidpoint;
        ContinuousAverage v = continuous_box_average(sys, obs, x, w, s, method);
        j["value"] = {{"re", v.value.real()}, {"im", v.value.imag()}};
        if (v.exact) j["exact"] = exact_json(*v.exact);
    } else {
        throw ConfigError("average mode must be discrete or continuous");
    }
    emit(j, dir, "average");
    std::cout << "average: " << j["value"].dump() << "\n";
    return 0;
}

int cmd_converge(const Config& cfg) {
    std::string dir = out_dir(cfg);
    ExactScalar theta = theta_by_name(cfg.get("theta", "golden"));
    TorusSystem sys = TorusSystem::product_rotation({theta});
    auto spec = GeneratorSpec::parse(cfg.get("family", "linear:r=1"));
    std::int64_t K = cfg.get_int("K", 10000);
    BoxFamily fam = orthant_split(generate_family(spec, K));
    Observable obs = parse_observable(cfg.get("obs", "indicator:box=0..1/2"), 1);

    ConeVerdict verdict;
    bool certified = false;
    try {
        VerdictConfig vc;
        if (cfg.has("lambda_grid")) {
            vc.lambda_grid = parse_rational_list(cfg.require("lambda_grid"));
        } else {
            // geometric grid capped by what the prefix certifies
            auto tail = fam.tail_min_length(0);
            Rational cap = tail ? *tail : Rational(2);
            vc.lambda_grid.clear();
            for (Rational l(1); l < cap && vc.lambda_grid.size() < 16; l *= Rational(2))
                vc.lambda_grid.push_back(l);
            if (vc.lambda_grid.empty()) vc.lambda_grid.push_back(Rational(1));
        }
        verdict = condition_verdict(fam, 0, vc);
        certified = verdict.verdict == ConeCondition::Holds;
    } catch (const InsufficientPrefixError&) {
        certified = false;
    }

    ConvergenceOptions opts;
    opts.samples = std::size_t(cfg.get_int("samples", 100));
    opts.seed = std::uint64_t(cfg.get_int("seed", 1));
    opts.policy = cfg.get_bool("parallel", true) ? ExecPolicy::Parallel : ExecPolicy::Serial;
    opts.condition_certified = certified;
    opts.override_condition = cfg.get_bool("override", false);
    ConvergenceReport rep = convergence_experiment(sys, obs, fam, opts);

    CsvWriter csv(dir + "/converge.csv", {"k", "deviation", "argmax_sample"});
    for (std::size_t k = 0; k < rep.deviation.size(); ++k)
        csv.row({std::to_string(k + 1), format_double(rep.deviation[k]), std::to_string(rep.argmax[k])});

    json j = base_report("converge", cfg);
    j["verdict"] = to_string(verdict.verdict);
    j["mu"] = {{"re", rep.mu.real()}, {"im", rep.mu.imag()}};
    j["final_deviation"] = rep.final_deviation;
    j["max_deviation"] = rep.max_deviation;
    j["condition_overridden"] = rep.condition_overridden;
    j["samples"] = rep.samples;
    j["csv"] = "converge.csv";
    emit(j, dir, "converge");
    std::cout << "converge: final sup deviation " << rep.final_deviation << " after K = " << K
              << "\n";
    return 0;
}

int cmd_tower(const Config& cfg) {
    std::string dir = out_dir(cfg);
    ExactScalar theta = theta_by_name(cfg.get("theta", "golden"));
    std::int64_t N = cfg.get_int("N", 5);
    Rational delta = parse_rational(cfg.get("delta", "1/2"));
    DiscreteTower tower = rotation_tower(theta, N, delta, cfg.get_bool("require_coverage", false));
    TowerReport rep = verify_tower(tower);

    json j = base_report("tower", cfg);
    j["theta"] = theta.str();
    j["heights"] = tower.heights;
    j["base"] = torus_set_json(tower.base);
    j["coverage"] = exact_json(tower.coverage);
    j["coverage_met"] = tower.coverage_met;
    j["disjoint"] = rep.disjoint;
    j["pairs_checked"] = rep.pairs_checked;
    emit(j, dir, "tower");
    std::cout << "tower: N = " << N << ", coverage " << tower.coverage.to_double()
              << (tower.coverage_met ? " (target met)" : " (below target)") << ", disjoint = "
              << (rep.disjoint ? "true" : "false") << "\n";
    return rep.disjoint ? 0 : 2;
}

int cmd_sweepout(const Config& cfg) {
    std::string dir = out_dir(cfg);
    auto spec = GeneratorSpec::parse(cfg.get("family", "squares_unit"));
    std::int64_t K = cfg.get_int("K", 200);
    BoxFamily fam = orthant_split(generate_family(spec, K));
    if (fam.dim() != 1) throw ConfigError("the sweepout command drives d = 1 families");
    std::int64_t p = cfg.get_int("p", 1);
    ExactScalar theta = theta_by_name(cfg.get("theta", "golden"));

    SweepoutPlan plan = sweepout_plan(fam, 0, p, cfg.get_bool("pad", true));
    DiscreteTower tower = rotation_tower(theta, plan.N[0], Rational(1, 2), false);
    TowerReport trep = verify_tower(tower);
    CounterexampleSets sets = build_counterexample_set(plan, tower);

    RatioCheckOptions ropts;
    ropts.eps = cfg.get_double("eps", 0.05);
    ropts.samples = std::size_t(cfg.get_int("ratio_samples", 20000));
    ropts.seed = std::uint64_t(cfg.get_int("seed", 11));
    RatioReport ratio = ratio_check(plan, sets, tower, ropts);

    auto winfo = sweepout_witness_points(plan, sets, tower);
    std::vector<XPoint> witnesses;
    for (auto& [pt, k] : winfo) witnesses.push_back(pt);
    OscillationOptions oopts;
    oopts.samples = std::size_t(cfg.get_int("samples", 1000));
    oopts.seed = std::uint64_t(cfg.get_int("seed", 11)) + 1;
    oopts.eps = ropts.eps;
    oopts.k_lo = 0;
    oopts.k_hi = std::size_t(std::min<std::int64_t>(K, cfg.get_int("scan_K", 60))) - 1;
    oopts.plan_window_end = plan.K_p - 1;
    OscillationReport osc = oscillation_scan(tower.system, sets.Hp, fam, oopts, witnesses);

    CsvWriter csv(dir + "/sweepout_delta.csv", {"z", "witness_entry"});
    for (const auto& [z, k] : plan.witnesses) csv.row({std::to_string(z), std::to_string(k + 1)});

    json j = base_report("sweepout", cfg);
    j["plan"] = {{"p", plan.p},
                 {"lambda_p", rational_json(plan.lambda_p)},
                 {"K_p", plan.K_p},
                 {"delta_size", rational_json(plan.delta_size)},
                 {"delta_sup", rational_json(plan.delta_sup)},
                 {"N", plan.N},
                 {"pad", plan.pad}};
    j["tower"] = {{"coverage", exact_json(tower.coverage)},
                  {"disjoint", trep.disjoint},
                  {"mu_base", exact_json(sets.mu_base)}};
    j["sets"] = {{"mu_Hp", exact_json(sets.mu_Hp)},
                 {"mu_Fp", exact_json(sets.mu_Fp)},
                 {"measure_identity_ok", sets.measure_identity_ok}};
    j["ratio"] = {{"mu_union", exact_json(ratio.mu_union)},
                  {"ratio", exact_json(ratio.ratio)},
                  {"bound", rational_json(ratio.bound)},
                  {"ratio_ok", ratio.ratio_ok},
                  {"translates_disjoint", ratio.translates_disjoint},
                  {"containment_ok", ratio.containment_ok},
                  {"sampled_maximal_fraction", ratio.sampled_maximal_fraction},
                  {"sampling_consistent", ratio.sampling_consistent}};
    json wit = json::array();
    for (const auto& w : osc.witnesses)
        wit.push_back({{"attains_one_exactly", w.attains_one_exactly},
                       {"k_at_one", w.k_at_one + 1},
                       {"tail_below_eps", w.tail_below_eps},
                       {"tail_max", w.tail_max}});
    j["oscillation"] = {{"set_measure", osc.set_measure},
                        {"frac_max_above", osc.frac_max_above},
                        {"frac_min_below", osc.frac_min_below},
                        {"best_max", osc.best_max},
                        {"best_min", osc.best_min},
                        {"witnesses", wit}};
    emit(j, dir, "sweepout");

    bool ok = trep.disjoint && sets.measure_identity_ok && ratio.ratio_ok && ratio.containment_ok;
    std::cout << "sweepout: ratio " << ratio.ratio.to_double() << " >= " << ratio.bound.str()
              << (ratio.ratio_ok ? " OK" : " VIOLATED") << ", mu(H_p) = " << sets.mu_Hp.to_double()
              << "\n";
    return ok ? 0 : 2;
}

int cmd_submanifold(const Config& cfg) {
    std::string dir = out_dir(cfg);
    GenericityConfig gc;
    if (cfg.has("u")) gc.u = parse_rational_list(cfg.require("u"));
    if (cfg.has("v")) gc.V = {parse_rational_list(cfg.require("v"))};
    gc.eps = cfg.get_double("eps", 0.1);
    gc.p = cfg.get_int("p", 0);
    gc.samples = std::size_t(cfg.get_int("samples", 8));
    gc.seed = std::uint64_t(cfg.get_int("seed", 17));
    gc.pass_threshold = cfg.get_double("pass_threshold", 0.95);
    gc.margin = cfg.get_double("margin", 0.5);
    gc.vol_factor = cfg.get_double("vol_factor", 1.0);
    if (cfg.has("gamma")) gc.gamma = parse_rational(cfg.require("gamma"));
    GenericityReport rep = genericity_failure_experiment(gc);

    CsvWriter csv(dir + "/submanifold_scan.csv", {"t", "sample", "average"});
    for (const auto& row : rep.rows)
        csv.row({format_double(row.t), std::to_string(row.sample), format_double(row.average)});

    json j = base_report("submanifold", cfg);
    j["axis_condition"] = rep.axis_condition;
    j["p"] = rep.p;
    j["lambda_p"] = rational_json(rep.lambda_p);
    j["K_p"] = rep.K_p;
    j["gamma"] = rational_json(rep.gamma);
    j["E"] = torus_set_json(rep.E);
    j["mu_E"] = exact_json(rep.mu_E);
    j["mu_Y"] = exact_json(rep.mu_Y);
    j["mu_E_within_eps"] = rep.mu_E_within_eps;
    j["system"] = {{"ergodic", rep.system_ergodic}, {"aperiodic", rep.system_aperiodic}};
    j["ratio_bounds"] = {{"p_over_3_pow", rep.ratio_bound3_ok}, {"p_over_2_pow", rep.ratio_bound2_ok}};
    j["hits"] = rep.hits.size();
    j["best_average"] = rep.best_average;
    j["best_t"] = rep.best_t;
    j["lower_bound"] = rep.lower_bound;
    j["contradiction"] = rep.contradiction;
    j["no_oscillation_found"] = rep.no_oscillation_found;
    j["csv"] = "submanifold_scan.csv";
    emit(j, dir, "submanifold");
    std::cout << "submanifold: mu(E) = " << rep.mu_E.to_double() << ", best flat average "
              << rep.best_average << " at t = " << rep.best_t
              << (rep.contradiction ? " (contradiction witnessed)" : "") << "\n";
    return rep.mu_E_within_eps ? 0 : 2;
}

} // namespace

ExactScalar parse_theta(const std::string& text) { return theta_by_name(text); }

int run_command(const std::string& command, const Config& cfg) {
    try {
        set_threads(int(cfg.get_int("threads", 0)));
        if (command == "cones") return cmd_cones(cfg);
        if (command == "verdict") return cmd_verdict(cfg);
        if (command == "average") return cmd_average(cfg);
        if (command == "converge") return cmd_converge(cfg);
        if (command == "tower") return cmd_tower(cfg);
        if (command == "sweepout") return cmd_sweepout(cfg);
        if (command == "submanifold") return cmd_submanifold(cfg);
        throw ConfigError("unknown command '" + command + "'");
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const InsufficientPrefixError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const NoWitnessError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const UncertifiableParametersError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const RationalRotationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const WrapViolationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const TowerDoesNotFitError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "invariant violated: " << e.what() << "\n";
        return 2;
    }
}

} // namespace movavg
