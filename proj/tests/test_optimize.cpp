#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "scma/factor_graph.hpp"
#include "scma/optimize.hpp"
#include "scma/pnmetrics.hpp"

using namespace scma;

namespace {

DesignProblem problem_4x6() {
  DesignProblem pb;
  pb.fg = FactorGraph::preset_4x6();
  pb.M = 4;
  pb.T = 2;
  return pb;
}

double energy_sum(const DesignSpace& x) {
  return std::accumulate(x.energy.begin(), x.energy.end(), 0.0);
}

}  // namespace

TEST_CASE("flatten/unflatten round trip") {
  DesignSpace x;
  x.theta = {0.1, 0.2, 0.3};
  x.energy = {1.5, 2.0, 2.5};
  x.alpha = {1.7};
  const std::vector<double> v = x.flatten();
  CHECK(v.size() == 7);
  const DesignSpace y = DesignSpace::unflatten(v, 3, 1);
  CHECK(y.theta == x.theta);
  CHECK(y.energy == x.energy);
  CHECK(y.alpha == x.alpha);
}

TEST_CASE("default corner sits inside the feasible set") {
  const DesignProblem pb = problem_4x6();
  const DesignSpace c = pb.default_corner();
  CHECK(c.theta == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(energy_sum(c) == doctest::Approx(pb.budget()));
  CHECK(c.energy[0] == doctest::Approx(c.energy[1]));
  CHECK(c.alpha.empty());  // T = 2 has no free ratios
}

TEST_CASE("projection clamps boxes and restores the budget") {
  const DesignProblem pb = problem_4x6();
  DesignSpace x;
  x.theta = {-1.0, 5.0, 1.0};
  x.energy = {10.0, 20.0, 30.0};
  x.alpha = {};
  const DesignSpace y = project(x, pb);
  CHECK(y.theta[0] == 0.0);
  CHECK(y.theta[1] == doctest::Approx(3.14159265358979323846));
  CHECK(y.theta[2] == 1.0);
  CHECK(energy_sum(y) == doctest::Approx(pb.budget()).epsilon(1e-12));
  // The simplex rescale is multiplicative, so ratios survive.
  CHECK(y.energy[1] / y.energy[0] == doctest::Approx(2.0).epsilon(1e-12));
  // Idempotence.
  const DesignSpace z = project(y, pb);
  for (int i = 0; i < 3; ++i) {
    CHECK(z.theta[i] == doctest::Approx(y.theta[i]).epsilon(1e-15));
    CHECK(z.energy[i] == doctest::Approx(y.energy[i]).epsilon(1e-12));
  }
}

TEST_CASE("projection keeps alpha in its box") {
  DesignProblem pb = problem_4x6();
  pb.T = 4;
  pb.alpha_max = 4.0;
  DesignSpace x = pb.default_corner();
  REQUIRE(x.alpha.size() == 1);
  x.alpha[0] = 9.0;
  CHECK(project(x, pb).alpha[0] == 4.0);
  x.alpha[0] = 0.2;
  CHECK(project(x, pb).alpha[0] == 1.0);
}

TEST_CASE("objective is a deterministic finite function at the corner") {
  const DesignProblem pb = problem_4x6();
  ObjectiveConfig oc;
  oc.sigma_p2 = 0.03;
  oc.eb_n0_db = 10.0;
  const DesignObjective obj(pb, oc);
  CHECK(obj.effective_q() >= 2);
  DesignSpace x = pb.default_corner();
  // Identical angles collapse the superimposed constellation heavily but the
  // value must still be reproducible.
  x.theta = {0.3, 1.1, 2.2};
  const double a = obj(x);
  const double b = obj(x);
  CHECK(a == b);
  CHECK(std::isfinite(a));
}

TEST_CASE("objective rejects colliding designs") {
  const DesignProblem pb = problem_4x6();
  const DesignObjective obj(pb, ObjectiveConfig{});
  DesignSpace x = pb.default_corner();
  // Equal angles make users on a resource indistinguishable up to amplitude;
  // with equal energies the superimposed words collide.
  x.theta = {0.0, 0.0, 0.0};
  CHECK(obj(x) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("realize matches the objective's scoring") {
  const DesignProblem pb = problem_4x6();
  ObjectiveConfig oc;
  oc.sigma_p2 = 0.01;
  oc.eb_n0_db = 12.0;
  const DesignObjective obj(pb, oc);
  DesignSpace x = pb.default_corner();
  x.theta = {0.2, 1.0, 2.4};
  x.energy = {1.3, 0.8, 0.9};
  x = project(x, pb);
  const CodebookSet cbs = obj.realize(x);
  const SuperimposedConstellation sc = enumerate_superimposed(cbs);
  const PnChannelParams p = params_from_ebn0(cbs, oc.sigma_p2, oc.eb_n0_db);
  CHECK(obj(x) == doctest::Approx(mpnm_objective(sc, p, obj.effective_q())).epsilon(1e-12));
  // The amplitude simplex is respected by construction.
  CHECK(energy_sum(x) == doctest::Approx(pb.budget()).epsilon(1e-12));
}

TEST_CASE("optimize: budget of one returns the scored corner") {
  OptimizerConfig cfg;
  cfg.max_evaluations = 1;
  cfg.population = 4;
  cfg.objective.sigma_p2 = 0.01;
  cfg.objective.eb_n0_db = 12.0;
  cfg.report.mode = MpnmOptions::Mode::pruned;
  cfg.report.q = 2;
  cfg.report.samples = 0;
  const OptimizeResult r = optimize(cfg, problem_4x6());
  CHECK(r.evaluations == 1);
  CHECK(r.trace.size() == 1);
  CHECK(r.best_objective == r.trace.back().best);
  CHECK(r.codebooks.M == 4);
}

TEST_CASE("optimize: trace is non-decreasing and seeds are reproducible") {
  OptimizerConfig cfg;
  cfg.max_evaluations = 120;
  cfg.population = 10;
  cfg.rng_seed = 5;
  cfg.objective.sigma_p2 = 0.03;
  cfg.objective.eb_n0_db = 10.0;
  cfg.report.mode = MpnmOptions::Mode::pruned;
  cfg.report.q = 2;
  cfg.report.samples = 5000;
  const DesignProblem pb = problem_4x6();
  const OptimizeResult a = optimize(cfg, pb);
  CHECK(a.evaluations <= cfg.max_evaluations);
  for (size_t i = 1; i < a.trace.size(); ++i) CHECK(a.trace[i].best >= a.trace[i - 1].best);
  const OptimizeResult b = optimize(cfg, pb);
  CHECK(a.best_objective == b.best_objective);
  CHECK(a.best.flatten() == b.best.flatten());

  // A modest search already beats the (collision-free) starting region.
  DesignObjective obj(pb, cfg.objective);
  DesignSpace probe = pb.default_corner();
  probe.theta = {0.1, 0.2, 0.3};
  CHECK(a.best_objective >= obj(project(probe, pb)));

  // The emitted codebook is the scored design, re-measured by the report.
  const SuperimposedConstellation sc = enumerate_superimposed(a.codebooks);
  const PnChannelParams p = params_from_ebn0(a.codebooks, 0.03, 10.0);
  CHECK(mpnm_objective(sc, p, obj.effective_q()) ==
        doctest::Approx(a.best_objective).epsilon(1e-9));
  CHECK(a.report.mpnm <= a.best_objective + 1e-9);
}

TEST_CASE("optimize: multistart strategy also improves on the corner") {
  OptimizerConfig cfg;
  cfg.strategy = OptimizerConfig::Strategy::multistart_local;
  cfg.max_evaluations = 120;
  cfg.rng_seed = 2;
  cfg.objective.sigma_p2 = 0.01;
  cfg.objective.eb_n0_db = 12.0;
  cfg.report.mode = MpnmOptions::Mode::pruned;
  cfg.report.q = 2;
  cfg.report.samples = 0;
  const OptimizeResult r = optimize(cfg, problem_4x6());
  CHECK(std::isfinite(r.best_objective));
  CHECK(r.best_objective > 0.0);
  for (size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i].best >= r.trace[i - 1].best);
}
