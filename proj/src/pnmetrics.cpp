#include "scma/pnmetrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "scma/rng.hpp"

namespace scma {

PnChannelParams PnChannelParams::from_n0(double sigma_p2, double n0) {
  if (sigma_p2 < 0.0) throw std::invalid_argument("sigma_p2 must be >= 0");
  if (n0 <= 0.0) throw std::invalid_argument("N0 must be > 0");
  return PnChannelParams{sigma_p2, n0, 0.0};
}

PnChannelParams params_from_ebn0(double avg_energy, int J, int bits_per_user, double sigma_p2,
                                 double eb_n0_db) {
  if (sigma_p2 < 0.0) throw std::invalid_argument("sigma_p2 must be >= 0");
  const double eb = avg_energy / (static_cast<double>(J) * bits_per_user);
  const double n0 = eb * std::pow(10.0, -eb_n0_db / 10.0);
  return PnChannelParams{sigma_p2, n0, eb_n0_db};
}

PnChannelParams params_from_ebn0(const CodebookSet& cbs, double sigma_p2, double eb_n0_db) {
  return params_from_ebn0(average_superimposed_energy(cbs), cbs.J(), cbs.bits_per_user(),
                          sigma_p2, eb_n0_db);
}

double q_function(double t) { return 0.5 * std::erfc(t * 0.7071067811865475244); }

double pn_decision_metric(std::span<const cplx> r, std::span<const cplx> w,
                          const PnChannelParams& p) {
  if (r.size() != w.size()) throw std::invalid_argument("pn_decision_metric: size mismatch");
  const double hn = 0.5 * p.n0;
  double l = 0.0;
  for (size_t k = 0; k < w.size(); ++k) {
    const double aw = std::abs(w[k]);
    // arg{0} := 0, so a zero symbol leaves r_k unrotated.
    const cplx rot = aw > 0.0 ? r[k] * std::conj(w[k]) / aw : r[k];
    const double sv = p.sigma_p2 * aw * aw + hn;
    const double re = rot.real() - aw;
    const double im = rot.imag();
    l += re * re / hn + im * im / sv + std::log(sv);
  }
  return l;
}

void eta_resource_moments(double aw, double ah, double delta, double sigma_p2, double n0,
                          double& mean_out, double& var_out) {
  const double hn = 0.5 * n0;
  const double sw = sigma_p2 * aw * aw + hn;
  const double sh = sigma_p2 * ah * ah + hn;
  const double cd = std::cos(delta), sd = std::sin(delta);
  const double s2 = sd * sd, c2 = cd * cd;
  const double ev1 = ((aw * cd - ah) * (aw * cd - ah) + aw * aw * s2 * sigma_p2 + hn) / hn;
  const double ev2 = (aw * aw * (s2 + sigma_p2 * c2) + hn) / sh;
  mean_out = 2.0 + std::log(sw / sh) - ev1 - ev2;
  const double a = (aw * aw * s2 * sigma_p2 + hn) / hn;
  const double b = (aw * cd - ah) * (aw * cd - ah) / hn;
  const double c = (aw * aw * c2 * sigma_p2 + hn) / sh;
  const double d = aw * aw * s2 / sh;
  const double e = aw * aw * s2 * sigma_p2 / sh;
  const double f = aw * aw * c2 * sigma_p2 / hn;
  const double g = (ah * ah - aw * aw * c2) / hn;
  const double h = sw / hn;
  const double i = sh / hn;
  var_out = 4.0 + 2 * a * a + 4 * a * b + 2 * c * c + 4 * c * d + 4 * e * f + 4 * e * g -
            4 * b * e - 4 * s2 * (h + 1.0 / i) - 4 * c2 * (1.0 + h / i);
}

PairStats pair_stats(std::span<const cplx> w, std::span<const cplx> what,
                     const PnChannelParams& p) {
  if (w.size() != what.size()) throw std::invalid_argument("pair_stats: size mismatch");
  PairStats st;
  st.per_resource.resize(w.size());
  const double hn = 0.5 * p.n0;
  for (size_t k = 0; k < w.size(); ++k) {
    ResourcePairTerm& t = st.per_resource[k];
    const double aw = std::abs(w[k]);
    const double ah = std::abs(what[k]);
    const double argw = aw > 0.0 ? std::arg(w[k]) : 0.0;
    const double argh = ah > 0.0 ? std::arg(what[k]) : 0.0;
    t.delta_w = argw - argh;
    if (w[k] == what[k]) {
      // Identical symbols cancel exactly in the metric difference.
      t.mean = t.variance = 0.0;
      t.ev1 = t.ev2 = 1.0;
      continue;
    }
    eta_resource_moments(aw, ah, t.delta_w, p.sigma_p2, p.n0, t.mean, t.variance);
    const double cd = std::cos(t.delta_w), sd = std::sin(t.delta_w);
    const double s2 = sd * sd, c2 = cd * cd;
    const double sw = p.sigma_p2 * aw * aw + hn;
    const double sh = p.sigma_p2 * ah * ah + hn;
    t.ev1 = ((aw * cd - ah) * (aw * cd - ah) + aw * aw * s2 * p.sigma_p2 + hn) / hn;
    t.ev2 = (aw * aw * (s2 + p.sigma_p2 * c2) + hn) / sh;
    t.a = (aw * aw * s2 * p.sigma_p2 + hn) / hn;
    t.b = (aw * cd - ah) * (aw * cd - ah) / hn;
    t.c = (aw * aw * c2 * p.sigma_p2 + hn) / sh;
    t.d = aw * aw * s2 / sh;
    t.e = aw * aw * s2 * p.sigma_p2 / sh;
    t.f = aw * aw * c2 * p.sigma_p2 / hn;
    t.g = (ah * ah - aw * aw * c2) / hn;
    t.h = sw / hn;
    t.i = sh / hn;
    st.mean += t.mean;
    st.variance += t.variance;
  }
  if (!(st.variance > 0.0))
    throw std::runtime_error("pair_stats: non-positive variance (identical pair or fault)");
  st.q_arg = -st.mean / std::sqrt(st.variance);
  return st;
}

double pairwise_pep(std::span<const cplx> w, std::span<const cplx> what,
                    const PnChannelParams& p) {
  return q_function(pair_stats(w, what, p).q_arg);
}

EnumerationBudgetError::EnumerationBudgetError(std::uint64_t req, std::uint64_t bud)
    : std::runtime_error("exact enumeration needs " + std::to_string(req) +
                         " ordered pairs, budget is " + std::to_string(bud)),
      required(req),
      budget(bud) {}

namespace {

// Per-resource pairwise statistics of the superimposed alphabet, either
// tabulated or computed on demand. Identical alphabet values (same dedup id)
// contribute exactly zero. Tables are keyed by the deduplicated value ids —
// the LP overlap makes the distinct-value count far smaller than M^df, so
// this costs a fraction of a full combo-indexed table.
class StatEvaluator {
public:
  StatEvaluator(const SuperimposedConstellation& sc, const PnChannelParams& p, bool build_tables)
      : sc_(sc), p_(p) {
    const size_t A = sc.alphabet[0].size();
    mag_.resize(sc.K);
    arg_.resize(sc.K);
    nvals_.resize(sc.K);
    for (int k = 0; k < sc.K; ++k) {
      mag_[k].resize(A);
      arg_[k].resize(A);
      int nv = 0;
      for (size_t c = 0; c < A; ++c) {
        const cplx v = sc.alphabet[k][c];
        mag_[k][c] = std::abs(v);
        arg_[k][c] = mag_[k][c] > 0.0 ? std::arg(v) : 0.0;
        nv = std::max(nv, sc.value_id[k][c] + 1);
      }
      nvals_[k] = nv;
    }
    if (build_tables) {
      std::uint64_t cells = 0;
      for (int k = 0; k < sc.K; ++k) cells += static_cast<std::uint64_t>(nvals_[k]) * nvals_[k];
      if (cells > (std::uint64_t(1) << 22)) build_tables = false;
    }
    if (build_tables) {
      tmean_.resize(sc.K);
      tvar_.resize(sc.K);
      tdist2_.resize(sc.K);
      for (int k = 0; k < sc.K; ++k) {
        const size_t V = nvals_[k];
        // One representative combo per value id.
        std::vector<std::uint32_t> rep(V, 0);
        for (size_t c = A; c-- > 0;) rep[sc.value_id[k][c]] = static_cast<std::uint32_t>(c);
        tmean_[k].assign(V * V, 0.0);
        tvar_[k].assign(V * V, 0.0);
        tdist2_[k].assign(V * V, 0.0);
        for (size_t iw = 0; iw < V; ++iw)
          for (size_t ih = 0; ih < V; ++ih) {
            if (iw == ih) continue;
            const size_t idx = iw * V + ih;
            const std::uint32_t cw = rep[iw], ch = rep[ih];
            tdist2_[k][idx] = std::norm(sc.alphabet[k][cw] - sc.alphabet[k][ch]);
            eta_resource_moments(mag_[k][cw], mag_[k][ch], arg_[k][cw] - arg_[k][ch],
                                 p.sigma_p2, p.n0, tmean_[k][idx], tvar_[k][idx]);
          }
      }
      has_tables_ = true;
    }
  }

  int value_id(int k, std::uint32_t c) const { return sc_.value_id[k][c]; }

  bool identical(int k, std::uint32_t cw, std::uint32_t ch) const {
    return sc_.value_id[k][cw] == sc_.value_id[k][ch];
  }

  void moments(int k, std::uint32_t cw, std::uint32_t ch, double& mean, double& var) const {
    const int iw = sc_.value_id[k][cw], ih = sc_.value_id[k][ch];
    if (iw == ih) {
      mean = var = 0.0;
      return;
    }
    if (has_tables_) {
      const size_t idx = static_cast<size_t>(iw) * nvals_[k] + ih;
      mean = tmean_[k][idx];
      var = tvar_[k][idx];
      return;
    }
    eta_resource_moments(mag_[k][cw], mag_[k][ch], arg_[k][cw] - arg_[k][ch], p_.sigma_p2,
                         p_.n0, mean, var);
  }

  double dist2(int k, std::uint32_t cw, std::uint32_t ch) const {
    const int iw = sc_.value_id[k][cw], ih = sc_.value_id[k][ch];
    if (has_tables_)
      return tdist2_[k][static_cast<size_t>(iw) * nvals_[k] + ih];
    return std::norm(sc_.alphabet[k][cw] - sc_.alphabet[k][ch]);
  }

private:
  const SuperimposedConstellation& sc_;
  PnChannelParams p_;
  bool has_tables_ = false;
  std::vector<size_t> nvals_;
  std::vector<std::vector<double>> mag_, arg_;
  std::vector<std::vector<double>> tmean_, tvar_, tdist2_;
};

struct EnumerationAccumulator {
  double min_q = std::numeric_limits<double>::infinity();
  std::vector<int> argmin_w, argmin_what;
  double bound_sum = 0.0;          // sum of multiplicity * Q(q_arg)
  double min_dist2 = std::numeric_limits<double>::infinity();
  std::uint64_t pairs = 0;
  std::uint64_t identical = 0;
  bool want_bound = true;
  bool want_med = true;

  void feed(double mean, double var, double d2, std::uint64_t mult,
            const std::vector<int>* lw, const std::vector<int>* lh) {
    pairs += mult;
    // Both moments are sums of O(1) terms; below ~1e-12 the closed-form
    // variance is pure cancellation noise, which happens exactly when the
    // two codewords numerically coincide. Count those pairs as collisions.
    if (var <= 1e-12) {
      if (std::abs(mean) > 1e-6) throw std::runtime_error("mpnm: inconsistent pair moments");
      identical += mult;
      return;
    }
    const double q = -mean / std::sqrt(var);
    if (q < min_q) {
      min_q = q;
      if (lw) argmin_w = *lw;
      if (lh) argmin_what = *lh;
    }
    if (want_bound) bound_sum += static_cast<double>(mult) * q_function(q);
    if (want_med && d2 < min_dist2 && d2 > 0.0) min_dist2 = d2;
  }
};

// All ordered pairs whose label tuples differ in exactly the user subset S.
void enumerate_subset(const SuperimposedConstellation& sc, const FactorGraph& fg,
                      const StatEvaluator& ev, const std::vector<int>& subset,
                      EnumerationAccumulator& acc, bool track_argmin,
                      std::uint64_t group_cap = 0) {
  const int M = sc.M;
  // Resources touched by the subset.
  std::vector<int> res;
  for (int j : subset)
    for (int k : fg.user_resources(j)) res.push_back(k);
  std::sort(res.begin(), res.end());
  res.erase(std::unique(res.begin(), res.end()), res.end());

  // Interfering users on those resources (labels equal in w and w^).
  std::vector<int> interf;
  for (int k : res)
    for (int u : sc.users[k])
      if (std::find(subset.begin(), subset.end(), u) == subset.end()) interf.push_back(u);
  std::sort(interf.begin(), interf.end());
  interf.erase(std::unique(interf.begin(), interf.end()), interf.end());

  const int ns = static_cast<int>(subset.size());
  const int ni = static_cast<int>(interf.size());

  // Mixed-radix weight of each relevant user inside each touched resource.
  struct Contrib {
    int res_pos;      // index into res
    std::uint32_t w;  // radix weight
  };
  std::vector<std::vector<Contrib>> sub_contrib(ns), int_contrib(ni);
  for (size_t rp = 0; rp < res.size(); ++rp) {
    const auto& users = sc.users[res[rp]];
    std::uint32_t weight = 1;
    for (int u : users) {
      auto si = std::find(subset.begin(), subset.end(), u);
      if (si != subset.end())
        sub_contrib[si - subset.begin()].push_back({static_cast<int>(rp), weight});
      else {
        auto ii = std::find(interf.begin(), interf.end(), u);
        int_contrib[ii - interf.begin()].push_back({static_cast<int>(rp), weight});
      }
      weight *= M;
    }
  }

  std::uint64_t mult = 1;  // labels of users untouched by these resources
  for (int t = 0; t < sc.J - ns - ni; ++t) mult *= M;

  std::vector<int> ilabel(std::max(ni, 1), 0);
  std::vector<int> wl(ns, 0), hl(ns, 0);
  std::vector<std::uint32_t> base(res.size(), 0), cw(res.size()), chh(res.size());
  std::vector<int> full_w, full_h;

  const std::uint64_t icombos = [&] {
    std::uint64_t n = 1;
    for (int t = 0; t < ni; ++t) n *= M;
    return n;
  }();

  // Values add per resource, so interferer label combinations whose base
  // sums share the same value ids yield identical statistics for every
  // subset labeling. Group them and enumerate one representative per group.
  struct Group {
    std::vector<std::uint32_t> base;
    std::uint64_t rep_ic = 0;
    std::uint64_t count = 0;
  };
  std::map<std::vector<int>, Group> groups;
  std::vector<int> key(res.size());
  for (std::uint64_t ic = 0; ic < icombos; ++ic) {
    std::uint64_t t = ic;
    std::fill(base.begin(), base.end(), 0u);
    for (int u = 0; u < ni; ++u) {
      const int lab = static_cast<int>(t % M);
      t /= M;
      for (const Contrib& c : int_contrib[u]) base[c.res_pos] += c.w * lab;
    }
    for (size_t rp = 0; rp < res.size(); ++rp)
      key[rp] = ev.value_id(res[rp], base[rp]);
    Group& g = groups[key];
    if (g.count == 0) {
      g.base = base;
      g.rep_ic = ic;
    }
    ++g.count;
  }

  // A nonzero cap strides across the interferer groups instead of visiting
  // all of them — a collision between the subset's labelings shows up under
  // every interferer context, so a spread of representatives suffices for
  // ranking designs. Caps are for the design objective; reports never cap.
  const std::uint64_t stride =
      group_cap > 0 ? std::max<std::uint64_t>(1, (groups.size() + group_cap - 1) / group_cap)
                    : 1;
  std::uint64_t gi = 0;
  for (const auto& [gkey, grp] : groups) {
    if (gi++ % stride != 0) continue;
    std::copy(grp.base.begin(), grp.base.end(), base.begin());
    {
      std::uint64_t t = grp.rep_ic;
      for (int u = 0; u < ni; ++u) {
        ilabel[u] = static_cast<int>(t % M);
        t /= M;
      }
    }
    const std::uint64_t gmult = mult * grp.count;
    // Ordered label pairs of the subset users, every user differing.
    std::fill(wl.begin(), wl.end(), 0);
    std::fill(hl.begin(), hl.end(), 1 % M);
    while (true) {
      std::copy(base.begin(), base.end(), cw.begin());
      std::copy(base.begin(), base.end(), chh.begin());
      for (int s = 0; s < ns; ++s)
        for (const Contrib& c : sub_contrib[s]) {
          cw[c.res_pos] += c.w * wl[s];
          chh[c.res_pos] += c.w * hl[s];
        }
      double mean = 0.0, var = 0.0, d2 = 0.0;
      for (size_t rp = 0; rp < res.size(); ++rp) {
        double m, v;
        ev.moments(res[rp], cw[rp], chh[rp], m, v);
        mean += m;
        var += v;
        if (acc.want_med) d2 += ev.dist2(res[rp], cw[rp], chh[rp]);
      }
      const std::vector<int>* pw = nullptr;
      const std::vector<int>* ph = nullptr;
      if (track_argmin) {
        full_w.assign(sc.J, 0);
        full_h.assign(sc.J, 0);
        for (int u = 0; u < ni; ++u) full_w[interf[u]] = full_h[interf[u]] = ilabel[u];
        for (int s = 0; s < ns; ++s) {
          full_w[subset[s]] = wl[s];
          full_h[subset[s]] = hl[s];
        }
        pw = &full_w;
        ph = &full_h;
      }
      acc.feed(mean, var, d2, gmult, pw, ph);

      // Advance the (wl, hl) odometer; hl[s] skips wl[s].
      int s = 0;
      for (; s < ns; ++s) {
        ++hl[s];
        if (hl[s] == wl[s]) ++hl[s];
        if (hl[s] < M) break;
        ++wl[s];
        if (wl[s] < M) {
          hl[s] = wl[s] == 0 ? 1 : 0;
          break;
        }
        wl[s] = 0;
        hl[s] = 1;
      }
      if (s == ns) break;
    }
  }
}

// Users connected through shared resources, treating the subset as a graph.
bool subset_connected(const FactorGraph& fg, const std::vector<int>& subset) {
  const int n = static_cast<int>(subset.size());
  if (n <= 1) return true;
  auto share = [&](int a, int b) {
    for (int ka : fg.user_resources(a))
      for (int kb : fg.user_resources(b))
        if (ka == kb) return true;
    return false;
  };
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int a = stack.back();
    stack.pop_back();
    for (int b = 0; b < n; ++b)
      if (!seen[b] && share(subset[a], subset[b])) {
        seen[b] = 1;
        ++reached;
        stack.push_back(b);
      }
  }
  return reached == n;
}

// All user subsets of size 1..q, each visited exactly once. With
// connected_only, subsets splitting into resource-disjoint parts are skipped:
// their Q-argument cannot undercut the parts' own minima (the parts' means
// and variances add, and sqrt(v1) + sqrt(v2) >= sqrt(v1 + v2)) as long as
// every part's Q-argument is nonnegative — true for any design worth
// ranking, so the cheap objective uses it while reports do not.
void enumerate_pruned(const SuperimposedConstellation& sc, const FactorGraph& fg,
                      const StatEvaluator& ev, int q, EnumerationAccumulator& acc,
                      bool track_argmin, bool connected_only = false,
                      std::uint64_t group_cap = 0) {
  std::vector<int> subset;
  auto gen = [&](auto&& self, int start, int depth) -> void {
    for (int j = start; j < sc.J; ++j) {
      subset.push_back(j);
      if (!connected_only || subset_connected(fg, subset))
        enumerate_subset(sc, fg, ev, subset, acc, track_argmin,
                         subset.size() > 1 ? group_cap : 0);
      if (depth + 1 < q) self(self, j + 1, depth + 1);
      subset.pop_back();
    }
  };
  gen(gen, 0, 0);
}

std::string mode_string(const MpnmOptions& opt) {
  if (opt.mode == MpnmOptions::Mode::exact) return "exact";
  return "pruned(q=" + std::to_string(opt.q) + ",samples=" + std::to_string(opt.samples) + ")";
}

}  // namespace

MetricReport mpnm(const SuperimposedConstellation& sc, const PnChannelParams& p,
                  const MpnmOptions& opt) {
  // Per-resource tables pay off for every reporting-size problem; the
  // evaluator skips them itself when they would not fit in memory.
  const bool tables = true;

  MetricReport rep;
  rep.sigma_p2 = p.sigma_p2;
  rep.eb_n0_db = p.eb_n0_db;
  rep.n0 = p.n0;
  rep.mode = mode_string(opt);
  rep.pairs_total = sc.size * (sc.size - 1);

  EnumerationAccumulator acc;

  if (opt.mode == MpnmOptions::Mode::exact) {
    if (rep.pairs_total > opt.max_exact_pairs)
      throw EnumerationBudgetError(rep.pairs_total, opt.max_exact_pairs);
    StatEvaluator ev(sc, p, tables);
    // Combo index of every codeword at every resource.
    std::vector<std::vector<std::uint32_t>> combo(sc.K,
                                                  std::vector<std::uint32_t>(sc.size));
    for (std::uint64_t i = 0; i < sc.size; ++i) {
      const std::vector<int> labels = sc.labels_of(i);
      for (int k = 0; k < sc.K; ++k) combo[k][i] = sc.combo_index(k, labels);
    }
    std::uint64_t arg_w = 0, arg_h = 0;
    double min_q = std::numeric_limits<double>::infinity();
    for (std::uint64_t i = 0; i < sc.size; ++i) {
      for (std::uint64_t j = 0; j < sc.size; ++j) {
        if (i == j) continue;
        double mean = 0.0, var = 0.0, d2 = 0.0;
        for (int k = 0; k < sc.K; ++k) {
          double m, v;
          ev.moments(k, combo[k][i], combo[k][j], m, v);
          mean += m;
          var += v;
          d2 += ev.dist2(k, combo[k][i], combo[k][j]);
        }
        acc.feed(mean, var, d2, 1, nullptr, nullptr);
        if (var > 1e-12) {
          const double qv = -mean / std::sqrt(var);
          if (qv < min_q) {
            min_q = qv;
            arg_w = i;
            arg_h = j;
          }
        }
      }
    }
    rep.argmin_w = sc.labels_of(arg_w);
    rep.argmin_what = sc.labels_of(arg_h);
  } else {
    StatEvaluator ev(sc, p, tables);
    // Reconstruct the incidence from the per-resource user lists.
    std::vector<std::uint8_t> inc(static_cast<size_t>(sc.K) * sc.J, 0);
    for (int k = 0; k < sc.K; ++k)
      for (int u : sc.users[k]) inc[static_cast<size_t>(k) * sc.J + u] = 1;
    const FactorGraph graph(sc.K, sc.J, std::move(inc));
    enumerate_pruned(sc, graph, ev, opt.q, acc, true);

    if (opt.samples > 0) {
      SplitMix64 rng(opt.rng_seed);
      std::vector<std::uint32_t> cw(sc.K), ch(sc.K);
      for (std::uint64_t s = 0; s < opt.samples; ++s) {
        const std::uint64_t i = rng.below(sc.size);
        const std::uint64_t j = rng.below(sc.size);
        if (i == j) continue;
        const std::vector<int> lw = sc.labels_of(i);
        const std::vector<int> lh = sc.labels_of(j);
        double mean = 0.0, var = 0.0;
        for (int k = 0; k < sc.K; ++k) {
          double m, v;
          ev.moments(k, sc.combo_index(k, lw), sc.combo_index(k, lh), m, v);
          mean += m;
          var += v;
        }
        if (var <= 1e-12) continue;
        const double qv = -mean / std::sqrt(var);
        if (qv < acc.min_q) {
          acc.min_q = qv;
          acc.argmin_w = lw;
          acc.argmin_what = lh;
        }
      }
    }
    rep.argmin_w = acc.argmin_w;
    rep.argmin_what = acc.argmin_what;
  }

  rep.mpnm = acc.min_q;
  rep.med = std::sqrt(acc.min_dist2);
  rep.pep_bound = acc.bound_sum / static_cast<double>(sc.size);
  rep.pairs_enumerated = acc.pairs;
  rep.identical_pairs = acc.identical;
  return rep;
}

MetricReport mpnm(const CodebookSet& cbs, const PnChannelParams& p, const MpnmOptions& opt) {
  return mpnm(enumerate_superimposed(cbs), p, opt);
}

double pep_union_bound(const CodebookSet& cbs, const PnChannelParams& p,
                       const MpnmOptions& opt) {
  return mpnm(cbs, p, opt).pep_bound;
}

double mpnm_objective(const SuperimposedConstellation& sc, const PnChannelParams& p, int q) {
  StatEvaluator ev(sc, p, true);
  std::vector<std::uint8_t> inc(static_cast<size_t>(sc.K) * sc.J, 0);
  for (int k = 0; k < sc.K; ++k)
    for (int u : sc.users[k]) inc[static_cast<size_t>(k) * sc.J + u] = 1;
  FactorGraph graph(sc.K, sc.J, std::move(inc));
  EnumerationAccumulator acc;
  acc.want_bound = false;
  acc.want_med = false;
  enumerate_pruned(sc, graph, ev, q, acc, false, /*connected_only=*/true,
                   /*group_cap=*/64);
  if (acc.identical > 0) return -std::numeric_limits<double>::infinity();
  return acc.min_q;
}

nlohmann::json metric_report_to_json(const MetricReport& r) {
  nlohmann::json j;
  j["mpnm"] = r.mpnm;
  j["med"] = r.med;
  j["pep_bound"] = r.pep_bound;
  j["mode"] = r.mode;
  j["argmin_w"] = r.argmin_w;
  j["argmin_what"] = r.argmin_what;
  j["pairs_enumerated"] = r.pairs_enumerated;
  j["pairs_total"] = r.pairs_total;
  j["identical_pairs"] = r.identical_pairs;
  j["sigma_p2"] = r.sigma_p2;
  j["eb_n0_db"] = r.eb_n0_db;
  j["n0"] = r.n0;
  return j;
}

}  // namespace scma
