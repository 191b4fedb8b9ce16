#include "recon/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "recon/error.hpp"

namespace recon {

namespace {

constexpr double kSumTolerance = 1e-12;

double log_in(double x, LogBase base) { return base == LogBase::two ? std::log2(x) : std::log(x); }

void require_same_scheme(const Distribution& p, const Distribution& q, const char* op) {
  if (!(p.scheme() == q.scheme())) throw InputError(std::string(op) + ": scheme mismatch");
}

}  // namespace

Distribution::Distribution(Scheme scheme, std::vector<double> probs)
    : scheme_(std::move(scheme)), probs_(std::move(probs)) {
  if (probs_.size() != scheme_.cell_count()) {
    throw InputError("distribution has " + std::to_string(probs_.size()) + " cells, scheme has " +
                     std::to_string(scheme_.cell_count()));
  }
  double sum = 0.0;
  for (double v : probs_) {
    if (!std::isfinite(v) || v < 0.0) throw InputError("probabilities must be finite and non-negative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InputError("probabilities sum to " + std::to_string(sum) + ", not 1");
  }
}

Distribution Distribution::from_weights(Scheme scheme, std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw InputError("weights must be finite and non-negative");
    sum += w;
  }
  if (!(sum > 0.0)) throw InputError("weights have zero total mass");
  if (std::abs(sum - 1.0) > kSumTolerance) {
    for (double& w : weights) w /= sum;
  }
  return Distribution(std::move(scheme), std::move(weights));
}

Distribution Distribution::uniform(Scheme scheme) {
  const std::size_t n = scheme.cell_count();
  return Distribution(std::move(scheme), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(Scheme scheme, std::size_t cell) {
  if (cell >= scheme.cell_count()) throw InputError("point mass cell out of range");
  std::vector<double> probs(scheme.cell_count(), 0.0);
  probs[cell] = 1.0;
  return Distribution(std::move(scheme), std::move(probs));
}

Distribution project(const Distribution& p, VarSet subset) {
  const Scheme& scheme = p.scheme();
  Scheme sub = scheme.restrict(subset);
  if (subset == scheme.all()) return p;
  const auto index = scheme.marginal_index(subset);
  std::vector<double> out(sub.cell_count(), 0.0);
  const auto probs = p.probs();
  for (std::size_t cell = 0; cell < probs.size(); ++cell) out[index[cell]] += probs[cell];
  return Distribution::from_weights(std::move(sub), std::move(out));
}

Distribution project(const Distribution& p, std::span<const std::string> names) {
  return project(p, p.scheme().var_set(names));
}

double entropy(const Distribution& p, LogBase base) {
  double h = 0.0;
  for (double v : p.probs()) {
    if (v > 0.0) h -= v * log_in(v, base);
  }
  return std::max(h, 0.0);
}

double divergence(const Distribution& p, const Distribution& q, LogBase base) {
  require_same_scheme(p, q, "divergence");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = p[i];
    if (a <= 0.0) continue;
    const double b = q[i];
    if (b <= 0.0) return std::numeric_limits<double>::infinity();
    d += a * log_in(a / b, base);
  }
  return std::max(d, 0.0);
}

double hamming(const Distribution& p, const Distribution& q) {
  require_same_scheme(p, q, "hamming");
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) h += std::abs(p[i] - q[i]);
  return h;
}

double max_abs_diff(const Distribution& p, const Distribution& q) {
  require_same_scheme(p, q, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m = std::max(m, std::abs(p[i] - q[i]));
  return m;
}

Distribution sample_relative_frequency(const Distribution& p, std::size_t n, Rng& rng) {
  if (n == 0) throw InputError("sample size must be at least 1");
  const auto probs = p.probs();
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  const double total = cdf.back();
  std::vector<std::size_t> counts(probs.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  std::vector<double> freq(probs.size());
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < freq.size(); ++i) freq[i] = static_cast<double>(counts[i]) / dn;
  return Distribution::from_weights(p.scheme(), std::move(freq));
}

Distribution random_distribution(const Scheme& scheme, Rng& rng) {
  std::vector<double> w(scheme.cell_count());
  for (double& x : w) x = rng.exponential();
  return Distribution::from_weights(scheme, std::move(w));
}

Distribution perturb_with_signs(const Distribution& p0, double epsilon, std::span<const int> signs) {
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw InputError("epsilon must be finite and non-negative");
  if (signs.size() != p0.size()) throw InputError("perturb: one sign per cell required");
  if (epsilon == 0.0) return p0;
  std::vector<double> w(p0.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (signs[i] != 1 && signs[i] != -1) throw InputError("perturb: signs must be +1 or -1");
    w[i] = std::max(0.0, p0[i] + signs[i] * epsilon);
    sum += w[i];
  }
  if (!(sum > 0.0)) throw NumericError("perturbation removed all probability mass", 0.0);
  return Distribution::from_weights(p0.scheme(), std::move(w));
}

Distribution perturb(const Distribution& p0, double epsilon, Rng& rng) {
  std::vector<int> signs(p0.size());
  for (int& s : signs) s = rng.coin() ? 1 : -1;
  return perturb_with_signs(p0, epsilon, signs);
}

}  // namespace recon
