#include "scengen/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace scengen {

namespace {

std::vector<double> sorted_copy(std::span<const double> x, const char* what) {
  if (x.size() < 2) throw std::invalid_argument(std::string(what) + ": at least 2 values required");
  std::vector<double> s(x.begin(), x.end());
  for (double v : s)
    if (std::isnan(v)) throw std::invalid_argument(std::string(what) + ": NaN value");
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

double ks_one_sample(std::span<const double> samples, const std::function<double(double)>& cdf_left,
                     const std::function<double(double)>& cdf_right) {
  const auto s = sorted_copy(samples, "ks_one_sample");
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < s.size()) {
    std::size_t j = i;
    while (j + 1 < s.size() && s[j + 1] == s[i]) ++j;
    // Empirical CDF just below and at the value s[i].
    const double below = static_cast<double>(i) / n;
    const double at = static_cast<double>(j + 1) / n;
    d = std::max({d, std::fabs(below - cdf_left(s[i])), std::fabs(at - cdf_right(s[i]))});
    i = j + 1;
  }
  return std::min(d, 1.0);
}

double ks_uniform(std::span<const double> samples) {
  auto u = [](double x) { return std::clamp(x, 0.0, 1.0); };
  return ks_one_sample(samples, u, u);
}

double ks_statistic(std::span<const double> a, const EmpiricalMarginal& m) {
  return ks_one_sample(
      a, [&](double x) { return m.cdf_left(x); }, [&](double x) { return m.cdf_right(x); });
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  const auto sa = sorted_copy(a, "ks_statistic");
  const auto sb = sorted_copy(b, "ks_statistic");
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace scengen
