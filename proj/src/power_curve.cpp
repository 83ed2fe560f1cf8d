#include "scengen/power_curve.hpp"

#include <cmath>
#include <stdexcept>

namespace scengen {

void PowerCurve::validate() const {
  if (!(cut_in >= 0.0 && cut_in < rated_speed && rated_speed < cut_out && std::isfinite(cut_out)))
    throw std::invalid_argument("power curve requires 0 <= cut_in < rated_speed < cut_out");
  if (!(rated_power > 0.0 && std::isfinite(rated_power)))
    throw std::invalid_argument("power curve requires rated_power > 0");
}

double wind_power_curve(double speed, const PowerCurve& curve) {
  curve.validate();
  if (!(speed >= 0.0)) throw std::domain_error("wind speed must be non-negative");
  if (speed < curve.cut_in || speed >= curve.cut_out) return 0.0;
  if (speed >= curve.rated_speed) return curve.rated_power;
  const double ci3 = curve.cut_in * curve.cut_in * curve.cut_in;
  const double r3 = curve.rated_speed * curve.rated_speed * curve.rated_speed;
  return curve.rated_power * (speed * speed * speed - ci3) / (r3 - ci3);
}

}  // namespace scengen
