// Acceptance suite: one line per criterion, every tolerance pinned in code.
// Exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "movavg/averaging.hpp"
#include "movavg/cone.hpp"
#include "movavg/rng.hpp"
#include "movavg/submanifold.hpp"
#include "movavg/sweepout.hpp"
#include "movavg/towers.hpp"
#include "movavg/report.hpp"
#include "oracles.hpp"

using namespace movavg;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& what, double seconds) {
    std::printf("%s  criterion %2d: %s (%.2fs)\n", ok ? "PASS" : "FAIL", id, what.c_str(), seconds);
    if (!ok) ++failures;
}

template <typename F>
void criterion(int id, const std::string& what, F&& body) {
    auto t0 = clock_type::now();
    bool ok = false;
    std::string note;
    try {
        ok = body(note);
    } catch (const std::exception& e) {
        ok = false;
        note = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(clock_type::now() - t0).count();
    std::string line = what;
    if (!note.empty()) line += " -- " + note;
    report(id, ok, line, secs);
}

ExactScalar q(const char* s) { return ExactScalar::parse(s); }

} // namespace

int main() {
    std::printf("acceptance suite (%s)\n\n", kVersion);

    criterion(1, "cone oracle equivalence: 200 random families, lambda <= 50, alpha in {1/2,1,2}",
              [](std::string& note) {
                  SplitMix64 rng(1001);
                  const Rational alphas[] = {Rational(1, 2), Rational(1), Rational(2)};
                  std::size_t checked = 0;
                  for (int fam_i = 0; fam_i < 200; ++fam_i) {
                      BoxFamily f = oracles::random_family(rng, 1, 1 + rng.below(50), 100, 20);
                      for (std::int64_t lambda = 1; lambda <= 50; ++lambda) {
                          for (const auto& alpha : alphas) {
                              ConeCrossSection cs = cross_section(f, 0, alpha, Rational(lambda));
                              std::int64_t brute =
                                  oracles::brute_cross_section_count(f, 0, alpha, Rational(lambda));
                              if (cs.size != Rational(brute)) {
                                  note = "mismatch at family " + std::to_string(fam_i) +
                                         ", lambda " + std::to_string(lambda);
                                  return false;
                              }
                              ++checked;
                          }
                      }
                  }
                  note = std::to_string(checked) + " cross-sections equal";
                  return true;
              });

    criterion(2, "dichotomy: (k,rk) holds with ratio <= 4 at alpha = 1; (k,ceil sqrt k) fails",
              [](std::string& note) {
                  VerdictConfig vc;
                  vc.lambda_grid = {Rational(10), Rational(20), Rational(40), Rational(80),
                                    Rational(160), Rational(320), Rational(500)};
                  for (std::int64_t r : {1, 2, 3}) {
                      BoxFamily f = generate_family(
                          GeneratorSpec::parse("linear:r=" + std::to_string(r)), 2000);
                      ConeVerdict v = condition_verdict(f, 0, vc);
                      if (v.verdict != ConeCondition::Holds) {
                          note = "r = " + std::to_string(r) + " not Holds";
                          return false;
                      }
                      for (const auto& row : v.rows)
                          if (row.alpha == Rational(1) && !(row.max_ratio <= Rational(4))) {
                              note = "alpha=1 ratio " + row.max_ratio.str() + " > 4";
                              return false;
                          }
                  }
                  VerdictConfig sc;
                  sc.lambda_grid = {Rational(10), Rational(20), Rational(40), Rational(80),
                                    Rational(100)};
                  BoxFamily s = generate_family(GeneratorSpec::parse("sqrt"), 10000);
                  ConeVerdict v = condition_verdict(s, 0, sc);
                  if (v.verdict != ConeCondition::FailsEmpirically) {
                      note = "sqrt family verdict not FailsEmpirically";
                      return false;
                  }
                  double expo = 0;
                  for (const auto& row : v.rows) expo = std::max(expo, row.exponent);
                  if (v.growth_exponent < 1.5) {
                      note = "growth exponent " + std::to_string(v.growth_exponent) + " < 1.5";
                      return false;
                  }
                  note = "growth exponent " + std::to_string(v.growth_exponent);
                  return true;
              });

    criterion(3, "convergence at desk scale: sup deviation <= 0.05 at k = 10^4 (summed-area path)",
              [](std::string& note) {
                  TorusSystem sys = TorusSystem::product_rotation({q("(sqrt(5)-1)/2")});
                  TorusSet half(1);
                  half.add_box({{q("0"), q("1/2")}});
                  Observable obs = Observable::indicator(half);
                  BoxFamily fam = generate_family(GeneratorSpec::parse("linear:r=1"), 10000);
                  ConvergenceOptions opts;
                  opts.samples = 100;
                  opts.seed = 1;
                  ConvergenceReport rep = convergence_experiment(sys, obs, fam, opts);
                  note = "final deviation " + std::to_string(rep.final_deviation);
                  return rep.final_deviation <= 0.05;
              });

    criterion(4, "batch kernel equals naive: 50 random families per d in {1,2,3}",
              [](std::string& note) {
                  SplitMix64 rng(4004);
                  const std::int64_t span[] = {256, 48, 12};
                  const std::int64_t len[] = {64, 16, 8};
                  for (int d = 1; d <= 3; ++d) {
                      std::vector<ExactScalar> angles = {q("(sqrt(5)-1)/2"), q("sqrt(2)-1"),
                                                         q("sqrt(3)-1")};
                      angles.resize(std::size_t(d));
                      TorusSystem sys = TorusSystem::product_rotation(angles);
                      std::vector<std::int64_t> xi = {1, -2, 1};
                      xi.resize(std::size_t(d));
                      Observable chi = Observable::character(xi);
                      TorusSet set(d);
                      {
                          std::vector<Interval> sides;
                          for (int a = 0; a < d; ++a) sides.push_back({q("1/8"), q("5/8")});
                          set.add_box(sides);
                      }
                      for (int fam_i = 0; fam_i < 50; ++fam_i) {
                          BoxFamily f = oracles::random_family(rng, d, 6, span[d - 1], len[d - 1]);
                          DPoint x;
                          for (int a = 0; a < d; ++a) x.push_back(rng.uniform());
                          auto batch = batch_box_averages(sys, chi, x, f);
                          for (std::size_t k = 0; k < f.size(); ++k) {
                              CVal naive = discrete_box_average(sys, chi, x, f.entry(k));
                              if (std::abs(batch[k] - naive) > 1e-12) {
                                  note = "character mismatch, d = " + std::to_string(d);
                                  return false;
                              }
                          }
                          IndicatorBatch b = batch_indicator_counts(sys, set, x, f);
                          for (std::size_t k = 0; k < f.size(); ++k) {
                              if (b.counts[k] !=
                                  discrete_box_indicator_count(sys, set, x, f.entry(k))) {
                                  note = "indicator count mismatch, d = " + std::to_string(d);
                                  return false;
                              }
                          }
                      }
                  }
                  return true;
              });

    criterion(5, "composition bound: defect * l_k below one run constant; zero for constants",
              [](std::string& note) {
                  TorusSystem sys = TorusSystem::product_rotation({q("sqrt(2)-1")});
                  TorusSet half(1);
                  half.add_box({{q("0"), q("1/2")}});
                  Observable obs = Observable::indicator(half);
                  Observable constant = Observable::trig_poly({{{0}, 1.0}});
                  BoxEntry hbox{{Rational(1)}, {Rational(2)}};
                  const double run_constant = 6.0; // 2 (|n_h| + l_h) ||f||_inf
                  double worst = 0;
                  for (std::int64_t k = 1; k <= 1000; ++k) {
                      BoxEntry kbox{{Rational(k)}, {Rational(k)}};
                      CompositionDefect r = composition_defect(sys, obs, {0.123}, hbox, kbox);
                      worst = std::max(worst, r.defect * double(k));
                      if (r.defect != r.defect_alt) {
                          note = "two routes disagree at k = " + std::to_string(k);
                          return false;
                      }
                  }
                  CompositionDefect c = composition_defect(sys, constant, {0.5}, hbox,
                                                           {{Rational(0)}, {Rational(64)}});
                  if (c.defect != 0.0) {
                      note = "constant observable produced a nonzero defect";
                      return false;
                  }
                  note = "max defect * l_k = " + std::to_string(worst) + " <= " +
                         std::to_string(run_constant);
                  return worst <= run_constant;
              });

    criterion(6, "tower exactness: golden N = 5 coverage and exact disjointness with witness",
              [](std::string& note) {
                  DiscreteTower t = rotation_tower(q("(sqrt(5)-1)/2"), 5, Rational(1, 2));
                  if (t.coverage != q("(35-15*sqrt(5))/2")) {
                      note = "coverage " + t.coverage.str() + " not 5 ||3 theta||";
                      return false;
                  }
                  if (std::abs(t.coverage.to_double() - 0.72949) > 1e-4) return false;
                  TowerReport rep = verify_tower(t);
                  if (!rep.disjoint || rep.pairs_checked != 10) {
                      note = "pairwise disjointness failed";
                      return false;
                  }
                  DiscreteTower bad = t;
                  TorusSet bigger(1);
                  bigger.add_box({{q("0"), t.base.boxes()[0].sides[0].hi * ExactScalar(4)}});
                  bad.base = bigger;
                  TowerReport brep = verify_tower(bad);
                  if (brep.disjoint || !brep.has_witness) {
                      note = "corrupted tower not detected";
                      return false;
                  }
                  note = "coverage = " + std::to_string(t.coverage.to_double());
                  return true;
              });

    criterion(7, "sweepout ratio >= p for p in {1,2,3} with exact measures; oscillation witnessed",
              [](std::string& note) {
                  BoxFamily fam = generate_family(GeneratorSpec::parse("squares_unit"), 100);
                  ExactScalar golden = q("(sqrt(5)-1)/2");
                  for (std::int64_t p : {1, 2, 3}) {
                      auto t0 = clock_type::now();
                      SweepoutPlan plan = sweepout_plan(fam, 0, p);
                      DiscreteTower tower = rotation_tower(golden, plan.N[0], Rational(1, 2));
                      CounterexampleSets sets = build_counterexample_set(plan, tower);
                      if (!sets.measure_identity_ok) {
                          note = "mu(H_p) identity failed at p = " + std::to_string(p);
                          return false;
                      }
                      RatioCheckOptions opts;
                      opts.samples = 20000;
                      RatioReport rep = ratio_check(plan, sets, tower, opts);
                      if (!(rep.translates_disjoint && rep.containment_ok && rep.ratio_ok &&
                            ExactScalar(Rational(p)) <= rep.ratio)) {
                          note = "ratio check failed at p = " + std::to_string(p);
                          return false;
                      }
                      if (!rep.sampling_consistent) {
                          note = "sampled maximal fraction below the exact union";
                          return false;
                      }
                      double secs =
                          std::chrono::duration<double>(clock_type::now() - t0).count();
                      if (secs > 10.0) {
                          note = "p = " + std::to_string(p) + " took " + std::to_string(secs) + "s";
                          return false;
                      }
                  }
                  // oscillation at p = 3: a witness attains A_k = 1 exactly and
                  // stays <= eps beyond the construction window
                  SweepoutPlan plan = sweepout_plan(fam, 0, 3);
                  DiscreteTower tower = rotation_tower(golden, plan.N[0], Rational(1, 2));
                  CounterexampleSets sets = build_counterexample_set(plan, tower);
                  auto winfo = sweepout_witness_points(plan, sets, tower);
                  std::vector<XPoint> witnesses;
                  for (auto& [pt, k] : winfo) witnesses.push_back(pt);
                  OscillationOptions oopts;
                  oopts.samples = 500;
                  oopts.eps = 0.05;
                  oopts.k_lo = 0;
                  oopts.k_hi = 59;
                  oopts.plan_window_end = plan.K_p - 1;
                  OscillationReport osc =
                      oscillation_scan(tower.system, sets.Hp, fam, oopts, witnesses);
                  for (const auto& w : osc.witnesses)
                      if (w.attains_one_exactly && w.tail_below_eps) {
                          note = "witness at k = " + std::to_string(w.k_at_one + 1);
                          return true;
                      }
                  note = "no witness attained A_k = 1 with a clean tail";
                  return false;
              });

    criterion(8, "continuous tower: mu(H_p) = (4 lambda_p / L_1) mu(Y) exactly",
              [](std::string& note) {
                  BoxFamily fam = generate_family(GeneratorSpec::parse("flat_slab:m=1"), 256);
                  SweepoutPlan plan = sweepout_plan(fam, 0, 4);
                  Rational gamma = Rational(1) / (Rational(3) * plan.L[1]);
                  TorusSystem sys = TorusSystem::suspension_canonical(
                      ExactScalar(gamma), ExactScalar(gamma) * q("sqrt(2)"),
                      ExactScalar(gamma) * q("sqrt(3)"));
                  SuspensionTower tower =
                      suspension_tower(sys, {plan.L[0], Rational(3) * plan.L[1]});
                  ContinuousCounterexample cc = build_continuous_counterexample(plan, tower);
                  note = "mu(H_p) = " + cc.mu_Hp.str() + ", mu(Y) = " + cc.mu_Y.str();
                  return cc.measure_identity_ok && cc.bound3_ok;
              });

    criterion(9, "submanifold reduction: both paths agree over 100 random configurations",
              [](std::string& note) {
                  TorusSystem sys = TorusSystem::suspension_canonical(q("1/8"), q("sqrt(2)/8"),
                                                                      q("sqrt(3)/8"));
                  SplitMix64 rng(9009);
                  int done = 0;
                  for (int trial = 0; trial < 200 && done < 100; ++trial) {
                      std::vector<Rational> v = {
                          Rational(std::int64_t(rng.below(7)) - 3, 1 + std::int64_t(rng.below(2))),
                          Rational(std::int64_t(rng.below(7)) - 3, 1 + std::int64_t(rng.below(2)))};
                      std::vector<Rational> u = {-v[1] + Rational(2), v[0] + Rational(3)};
                      FlatPiece piece;
                      try {
                          piece = flat_piece(u, {v});
                      } catch (const DependentDirectionsError&) {
                          continue;
                      }
                      XPoint x = {ExactScalar(Rational(std::int64_t(rng.below(64)), 64)),
                                  ExactScalar(Rational(std::int64_t(rng.below(64)), 64)),
                                  ExactScalar(Rational(std::int64_t(rng.below(64)), 64))};
                      Rational t(1 + std::int64_t(rng.below(12)), 2);
                      if (done % 2 == 0) {
                          TorusSet set(3);
                          set.add_box({{q("0"), q("1/2")}, {q("1/3"), q("5/6")}, {q("0"), q("1")}});
                          Observable obs = Observable::indicator(set);
                          ReductionReport rep = reduction_check(sys, obs, x, piece, t,
                                                                ContinuousMethod::ExactIndicator);
                          if (!rep.exact_equal) {
                              note = "indicator path differed at trial " + std::to_string(trial);
                              return false;
                          }
                      } else {
                          Observable chi = Observable::character({0, 1, 1});
                          Quadrature quad;
                          quad.abs_tol = 1e-10;
                          ReductionReport rep = reduction_check(
                              sys, chi, x, piece, t, ContinuousMethod::TensorMidpoint, quad);
                          if (rep.difference > 1e-8) {
                              note = "character difference " + std::to_string(rep.difference);
                              return false;
                          }
                      }
                      ++done;
                  }
                  if (done < 100) {
                      note = "only " + std::to_string(done) + " configurations ran";
                      return false;
                  }
                  // Jacobian factor t^m sqrt(det V^T V), exact and randomized
                  for (int trial = 0; trial < 20; ++trial) {
                      std::vector<Rational> v = {Rational(1 + std::int64_t(rng.below(5))),
                                                 Rational(std::int64_t(rng.below(9)) - 4)};
                      std::vector<Rational> u = {-v[1] + Rational(1), v[0] + Rational(2)};
                      FlatPiece piece;
                      try {
                          piece = flat_piece(u, {v});
                      } catch (const DependentDirectionsError&) {
                          continue;
                      }
                      Rational t(3 + std::int64_t(rng.below(9)), 2);
                      if (flat_volume_factor_sq(piece, t) !=
                          t * t * (v[0] * v[0] + v[1] * v[1])) {
                          note = "volume factor mismatch";
                          return false;
                      }
                  }
                  return true;
              });

    criterion(10, "genericity failure: exact mu(E) <= 0.1, flat average >= 0.95, gap >= 0.5",
              [](std::string& note) {
                  GenericityConfig cfg;
                  cfg.samples = 8;
                  GenericityReport rep = genericity_failure_experiment(cfg);
                  note = "mu(E) = " + rep.mu_E.str() + ", best average " +
                         std::to_string(rep.best_average) + " at t = " + std::to_string(rep.best_t);
                  if (!rep.mu_E_within_eps) return false;
                  if (rep.hits.empty() || rep.best_average < 0.95) return false;
                  if (rep.lower_bound < rep.mu_E.to_double() + 0.5) return false;
                  return rep.contradiction;
              });

    std::printf("\n%d of 10 criteria passed\n", 10 - failures);
    return failures == 0 ? 0 : 1;
}
