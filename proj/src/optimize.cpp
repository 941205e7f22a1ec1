#include "scma/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "scma/rng.hpp"

namespace scma {

std::vector<double> DesignSpace::flatten() const {
  std::vector<double> v;
  v.insert(v.end(), theta.begin(), theta.end());
  v.insert(v.end(), energy.begin(), energy.end());
  v.insert(v.end(), alpha.begin(), alpha.end());
  return v;
}

DesignSpace DesignSpace::unflatten(std::span<const double> v, int df, int n_alpha) {
  if (static_cast<int>(v.size()) != 2 * df + n_alpha)
    throw std::invalid_argument("design vector size mismatch");
  DesignSpace x;
  x.theta.assign(v.begin(), v.begin() + df);
  x.energy.assign(v.begin() + df, v.begin() + 2 * df);
  x.alpha.assign(v.begin() + 2 * df, v.end());
  return x;
}

DesignSpace DesignProblem::default_corner() const {
  DesignSpace x;
  x.theta.assign(fg.df(), 0.0);
  x.energy.assign(fg.df(), budget() / fg.df());
  x.alpha.assign(n_alpha(), 1.0);
  return x;
}

DesignSpace project(DesignSpace x, const DesignProblem& pb) {
  const double pi = 3.14159265358979323846;
  for (double& t : x.theta) t = std::clamp(t, 0.0, pi);
  for (double& a : x.alpha) a = std::clamp(a, 1.0, pb.alpha_max);
  double sum = 0.0;
  for (double& e : x.energy) {
    e = std::max(e, 1e-9);
    sum += e;
  }
  const double s = pb.budget() / sum;
  for (double& e : x.energy) e *= s;
  return x;
}

DesignObjective::DesignObjective(DesignProblem pb, ObjectiveConfig cfg)
    : pb_(std::move(pb)), cfg_(cfg) {
  if (cfg_.q > 0) {
    q_ = cfg_.q;
  } else {
    // Deepest pruning depth whose per-evaluation pair count stays cheap.
    // Depth s costs about C(J,s) * (M(M-1))^s * cap moment lookups, where
    // cap is the objective's interferer-group stride limit. Depth >= 2 is
    // essential (two colliding users on a shared resource is the natural
    // degenerate mode the search would otherwise exploit) and depth 3
    // additionally covers a full d_f-sized collision at M = 4.
    const int J = pb_.fg.J();
    const double M = pb_.M;
    double cost = 0.0;
    q_ = 2;
    for (int s = 1; s <= std::min(J, 4); ++s) {
      double comb = 1.0;
      for (int t = 0; t < s; ++t) comb = comb * (J - t) / (t + 1);
      cost += comb * std::pow(M * (M - 1.0), s) * 64.0;
      if (cost > 8e6) break;
      q_ = std::max(q_, s);
    }
  }
  if (pb_.n_alpha() == 0) {
    PermutationSearchConfig pc{cfg_.bsa_restarts, 200, cfg_.bsa_seed};
    fixed_mc_ = binary_switching(build_lppam({pb_.M, pb_.T, {}}), pb_.fg.N(), pc);
  }
}

MotherConstellation DesignObjective::mother_for(const std::vector<double>& alpha,
                                                int restarts) const {
  if (fixed_mc_ && restarts == cfg_.bsa_restarts) return *fixed_mc_;
  PermutationSearchConfig pc{restarts, 200, cfg_.bsa_seed};
  return binary_switching(build_lppam({pb_.M, pb_.T, alpha}), pb_.fg.N(), pc);
}

CodebookSet DesignObjective::realize(const DesignSpace& x, int bsa_restarts) const {
  const MotherConstellation mc =
      mother_for(x.alpha, bsa_restarts > 0 ? bsa_restarts : cfg_.bsa_restarts);
  OperatorSet ops{x.energy, x.theta};
  return build_codebooks(mc, ops, pb_.fg);
}

double DesignObjective::operator()(const DesignSpace& x) const {
  const MotherConstellation mc = mother_for(x.alpha, cfg_.bsa_restarts);
  if (!codeword_distinctness_check(mc).distinct)
    return -std::numeric_limits<double>::infinity();
  OperatorSet ops{x.energy, x.theta};
  const CodebookSet cbs = build_codebooks(mc, ops, pb_.fg);
  const SuperimposedConstellation sc = enumerate_superimposed(cbs);
  const PnChannelParams p = params_from_ebn0(cbs, cfg_.sigma_p2, cfg_.eb_n0_db);
  return mpnm_objective(sc, p, q_);
}

namespace {

struct SearchState {
  const DesignObjective& obj;
  const DesignProblem& pb;
  std::uint64_t budget;
  std::uint64_t used = 0;
  double best = -std::numeric_limits<double>::infinity();
  DesignSpace best_x;
  std::vector<TracePoint> trace;

  bool exhausted() const { return used >= budget; }

  double eval(const DesignSpace& x) {
    if (exhausted()) return -std::numeric_limits<double>::infinity();
    const double v = obj(x);
    ++used;
    if (v > best) {
      best = v;
      best_x = x;
    }
    trace.push_back({used, best});
    return v;
  }
};

DesignSpace random_design(const DesignProblem& pb, SplitMix64& rng) {
  const double pi = 3.14159265358979323846;
  DesignSpace x;
  x.theta.resize(pb.fg.df());
  x.energy.resize(pb.fg.df());
  x.alpha.resize(pb.n_alpha());
  for (double& t : x.theta) t = pi * rng.uniform();
  for (double& e : x.energy) e = 0.05 + rng.uniform();
  for (double& a : x.alpha) a = 1.0 + (pb.alpha_max - 1.0) * rng.uniform();
  return project(std::move(x), pb);
}

void run_de(SearchState& st, const OptimizerConfig& cfg, std::uint64_t de_budget,
            SplitMix64& rng) {
  const DesignProblem& pb = st.pb;
  const int dim = 2 * pb.fg.df() + pb.n_alpha();
  const int np = std::max(cfg.population, 4);

  std::vector<std::vector<double>> pop;
  std::vector<double> fit;
  pop.push_back(pb.default_corner().flatten());  // evaluation #1: feasible corner
  while (static_cast<int>(pop.size()) < np) pop.push_back(random_design(pb, rng).flatten());
  for (const auto& ind : pop) {
    if (st.used >= de_budget) break;
    fit.push_back(st.eval(DesignSpace::unflatten(ind, pb.fg.df(), pb.n_alpha())));
  }
  fit.resize(pop.size(), -std::numeric_limits<double>::infinity());

  std::vector<double> trial(dim);
  while (st.used < de_budget) {
    for (int i = 0; i < np && st.used < de_budget; ++i) {
      int r1, r2, r3;
      do r1 = static_cast<int>(rng.below(np)); while (r1 == i);
      do r2 = static_cast<int>(rng.below(np)); while (r2 == i || r2 == r1);
      do r3 = static_cast<int>(rng.below(np)); while (r3 == i || r3 == r2 || r3 == r1);
      const int jrand = static_cast<int>(rng.below(dim));
      for (int d = 0; d < dim; ++d) {
        if (d == jrand || rng.uniform() < cfg.de_crossover)
          trial[d] = pop[r1][d] + cfg.de_weight * (pop[r2][d] - pop[r3][d]);
        else
          trial[d] = pop[i][d];
      }
      const DesignSpace cand =
          project(DesignSpace::unflatten(trial, pb.fg.df(), pb.n_alpha()), pb);
      const double v = st.eval(cand);
      if (v >= fit[i]) {
        pop[i] = cand.flatten();
        fit[i] = v;
      }
    }
  }
}

// Nelder-Mead with every vertex projected back onto the feasible set.
void run_nelder_mead(SearchState& st, const DesignSpace& start, SplitMix64& rng) {
  const DesignProblem& pb = st.pb;
  const int dim = 2 * pb.fg.df() + pb.n_alpha();
  const double pi = 3.14159265358979323846;

  auto evalv = [&](const std::vector<double>& v) {
    return st.eval(project(DesignSpace::unflatten(v, pb.fg.df(), pb.n_alpha()), pb));
  };

  std::vector<std::vector<double>> simplex;
  std::vector<double> f;
  simplex.push_back(project(start, pb).flatten());
  f.push_back(evalv(simplex[0]));
  for (int d = 0; d < dim && !st.exhausted(); ++d) {
    std::vector<double> v = simplex[0];
    const double step = d < pb.fg.df() ? 0.15 * pi : 0.15 * std::max(std::abs(v[d]), 0.5);
    v[d] += step * (rng.uniform() < 0.5 ? 1.0 : -1.0);
    simplex.push_back(v);
    f.push_back(evalv(v));
  }
  if (simplex.size() < static_cast<size_t>(dim) + 1) return;

  while (!st.exhausted()) {
    // Sort descending (maximization).
    std::vector<int> ord(simplex.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return f[a] > f[b]; });
    std::vector<std::vector<double>> s2;
    std::vector<double> f2;
    for (int o : ord) {
      s2.push_back(simplex[o]);
      f2.push_back(f[o]);
    }
    simplex.swap(s2);
    f.swap(f2);

    if (f[0] - f[dim] < 1e-10 * (1.0 + std::abs(f[0]))) break;

    std::vector<double> centroid(dim, 0.0);
    for (int i = 0; i < dim; ++i)
      for (int d = 0; d < dim; ++d) centroid[d] += simplex[i][d] / dim;

    auto combine = [&](double coef) {
      std::vector<double> v(dim);
      for (int d = 0; d < dim; ++d) v[d] = centroid[d] + coef * (centroid[d] - simplex[dim][d]);
      return v;
    };

    const std::vector<double> refl = combine(1.0);
    const double fr = evalv(refl);
    if (fr > f[0]) {
      const std::vector<double> exp_v = combine(2.0);
      const double fe = evalv(exp_v);
      if (fe > fr) {
        simplex[dim] = exp_v;
        f[dim] = fe;
      } else {
        simplex[dim] = refl;
        f[dim] = fr;
      }
    } else if (fr > f[dim - 1]) {
      simplex[dim] = refl;
      f[dim] = fr;
    } else {
      const std::vector<double> con = combine(-0.5);
      const double fc = evalv(con);
      if (fc > f[dim]) {
        simplex[dim] = con;
        f[dim] = fc;
      } else {
        for (int i = 1; i <= dim && !st.exhausted(); ++i) {
          for (int d = 0; d < dim; ++d) simplex[i][d] = 0.5 * (simplex[i][d] + simplex[0][d]);
          f[i] = evalv(simplex[i]);
        }
      }
    }
  }
}

}  // namespace

OptimizeResult optimize(const OptimizerConfig& cfg, const DesignProblem& pb) {
  if (cfg.max_evaluations < 1) throw std::invalid_argument("optimize: need a positive budget");
  DesignObjective obj(pb, cfg.objective);
  SearchState st{obj, pb, cfg.max_evaluations};
  SplitMix64 rng(cfg.rng_seed);

  if (cfg.strategy == OptimizerConfig::Strategy::differential_evolution) {
    const std::uint64_t de_budget =
        cfg.max_evaluations -
        static_cast<std::uint64_t>(cfg.polish_fraction * cfg.max_evaluations);
    run_de(st, cfg, de_budget, rng);
    if (!st.exhausted() && std::isfinite(st.best)) run_nelder_mead(st, st.best_x, rng);
  } else {
    st.eval(pb.default_corner());
    while (!st.exhausted()) {
      const DesignSpace start = st.trace.size() <= 1 ? pb.default_corner() : random_design(pb, rng);
      run_nelder_mead(st, start, rng);
    }
  }
  // Spend any leftover budget on fresh Nelder-Mead starts.
  while (!st.exhausted()) run_nelder_mead(st, random_design(pb, rng), rng);

  OptimizeResult out;
  out.best = std::isfinite(st.best) ? st.best_x : pb.default_corner();
  out.best_objective = st.best;
  out.trace = std::move(st.trace);
  out.evaluations = st.used;
  out.budget_exhausted = st.exhausted();
  // Realize with the same permutation search the objective used, so the
  // emitted codebook is exactly the design that earned best_objective.
  out.codebooks = obj.realize(out.best, cfg.objective.bsa_restarts);
  const PnChannelParams p =
      params_from_ebn0(out.codebooks, cfg.objective.sigma_p2, cfg.objective.eb_n0_db);
  MpnmOptions report = cfg.report;
  const std::uint64_t total = out.codebooks.codeword_count();
  if (report.mode == MpnmOptions::Mode::exact &&
      total * (total - 1) > report.max_exact_pairs)
    report.mode = MpnmOptions::Mode::pruned;
  out.report = mpnm(out.codebooks, p, report);
  return out;
}

}  // namespace scma
