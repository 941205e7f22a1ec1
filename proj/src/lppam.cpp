#include "scma/lppam.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace scma {

double PamMultiset::average_energy() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return s / values.size();
}

int PamMultiset::distinct_count() const {
  int n = values.empty() ? 0 : 1;
  for (size_t i = 1; i < values.size(); ++i)
    if (values[i] != values[i - 1]) ++n;
  return n;
}

int alpha_count(int T) {
  if (T < 2) throw std::invalid_argument("lppam: T must be >= 2");
  const int even = (T % 2 == 0) ? T : T - 1;
  return even / 2 - 1;
}

std::vector<double> build_ct(int T, const std::vector<double>& alpha) {
  if (T < 2) throw std::invalid_argument("lppam: T must be >= 2");
  if (static_cast<int>(alpha.size()) != alpha_count(T))
    throw std::invalid_argument("lppam: alpha length mismatch for T");
  for (double a : alpha)
    if (!(a >= 1.0)) throw std::invalid_argument("lppam: alpha entries must be >= 1");

  std::vector<double> levels;  // r_1, r_2, ...
  levels.push_back(1.0);
  for (double a : alpha) levels.push_back(a);

  std::vector<double> ct;
  if (T % 2 == 1) ct.push_back(0.0);
  for (double r : levels) {
    ct.push_back(r);
    ct.push_back(-r);
  }
  std::sort(ct.begin(), ct.end());
  return ct;
}

PamMultiset overlap_to_cm(const std::vector<double>& ct, int M) {
  const int T = static_cast<int>(ct.size());
  if (M < T) throw std::invalid_argument("lppam: M must be >= T");

  bool has_zero = false;
  std::vector<double> positives;  // ascending
  for (double v : ct) {
    if (v == 0.0) has_zero = true;
    else if (v > 0.0) positives.push_back(v);
  }
  std::sort(positives.begin(), positives.end());

  int extra = M - T;
  if (extra % 2 == 1 && !has_zero)
    throw std::invalid_argument("lppam: odd overlap count needs a zero point for symmetry");

  // Lowest-|value|-first: zero absorbs extras for free, the smallest
  // symmetric pair takes the rest two at a time.
  std::map<double, int> mult;
  if (has_zero) mult[0.0] = 1;
  for (double v : positives) {
    mult[v] = 1;
    mult[-v] = 1;
  }
  if (has_zero) {
    mult[0.0] += extra;
    extra = 0;
  }
  while (extra > 0) {
    mult[positives.front()] += 1;
    mult[-positives.front()] += 1;
    extra -= 2;
  }

  PamMultiset pm;
  for (const auto& [v, c] : mult)
    for (int i = 0; i < c; ++i) pm.values.push_back(v);
  return pm;
}

PamMultiset normalize_unit_energy(const PamMultiset& pm, double* scale_out) {
  const double e = pm.average_energy();
  if (e <= 0.0) throw std::invalid_argument("lppam: cannot normalize an all-zero multiset");
  const double s = 1.0 / std::sqrt(e);
  PamMultiset out = pm;
  for (double& v : out.values) v *= s;
  if (scale_out) *scale_out = s;
  return out;
}

PamMultiset build_lppam(const LpPamSpec& spec) {
  return normalize_unit_energy(overlap_to_cm(build_ct(spec.T, spec.alpha), spec.M));
}

}  // namespace scma
