#include "scengen/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scengen {

EmpiricalMarginal EmpiricalMarginal::fit(std::string name, std::span<const double> samples) {
  if (samples.size() < 2)
    throw std::invalid_argument("marginal '" + name + "': at least 2 samples required, got " +
                                std::to_string(samples.size()));
  for (double s : samples)
    if (!std::isfinite(s)) throw std::invalid_argument("marginal '" + name + "': non-finite sample");

  EmpiricalMarginal m;
  m.name_ = std::move(name);
  m.sorted_.assign(samples.begin(), samples.end());
  std::sort(m.sorted_.begin(), m.sorted_.end());

  const double n = static_cast<double>(m.sorted_.size());
  std::size_t i = 0;
  while (i < m.sorted_.size()) {
    std::size_t j = i;
    while (j + 1 < m.sorted_.size() && m.sorted_[j + 1] == m.sorted_[i]) ++j;
    m.knots_.push_back(m.sorted_[i]);
    m.lo_.push_back((static_cast<double>(i) + 0.5) / n);
    m.hi_.push_back((static_cast<double>(j) + 0.5) / n);
    i = j + 1;
  }
  return m;
}

std::vector<double> EmpiricalMarginal::plotting_positions() const {
  const double n = static_cast<double>(sorted_.size());
  std::vector<double> u(sorted_.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = (static_cast<double>(i) + 0.5) / n;
  return u;
}

std::ptrdiff_t EmpiricalMarginal::locate(double x, bool& exact) const {
  // First knot strictly greater than x.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  std::ptrdiff_t k = (it - knots_.begin()) - 1;
  exact = k >= 0 && knots_[static_cast<std::size_t>(k)] == x;
  return k;
}

double EmpiricalMarginal::cdf(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("cdf: x must be finite");
  if (x < knots_.front()) return 0.0;
  if (x > knots_.back()) return 1.0;
  bool exact = false;
  auto k = static_cast<std::size_t>(locate(x, exact));
  if (exact) return 0.5 * (lo_[k] + hi_[k]);
  const double t = (x - knots_[k]) / (knots_[k + 1] - knots_[k]);
  return hi_[k] + t * (lo_[k + 1] - hi_[k]);
}

double EmpiricalMarginal::cdf_left(double x) const {
  if (x <= knots_.front()) return 0.0;
  if (x > knots_.back()) return 1.0;
  bool exact = false;
  auto k = static_cast<std::size_t>(locate(x, exact));
  if (exact) return lo_[k];
  return cdf(x);
}

double EmpiricalMarginal::cdf_right(double x) const {
  if (x < knots_.front()) return 0.0;
  if (x >= knots_.back()) return 1.0;
  bool exact = false;
  auto k = static_cast<std::size_t>(locate(x, exact));
  if (exact) return hi_[k];
  return cdf(x);
}

double EmpiricalMarginal::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw std::domain_error("quantile: u must lie in [0, 1]");
  if (u <= lo_.front()) return knots_.front();
  if (u >= hi_.back()) return knots_.back();
  // First block whose lower plotting position exceeds u; the block before it
  // either contains u or ends below it.
  auto it = std::upper_bound(lo_.begin(), lo_.end(), u);
  auto k = static_cast<std::size_t>((it - lo_.begin()) - 1);
  if (u <= hi_[k]) return knots_[k];
  const double t = (u - hi_[k]) / (lo_[k + 1] - hi_[k]);
  return knots_[k] + t * (knots_[k + 1] - knots_[k]);
}

std::vector<double> EmpiricalMarginal::pit(std::span<const double> samples) const {
  std::vector<double> out;
  out.reserve(samples.size());
  for (double x : samples) {
    if (!std::isfinite(x)) throw std::invalid_argument("pit: non-finite sample");
    out.push_back(cdf(x));
  }
  return out;
}

}  // namespace scengen
