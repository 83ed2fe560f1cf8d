#pragma once

namespace scengen {

/// Piecewise wind-turbine power curve: zero below cut-in and from cut-out on,
/// cubic ramp between cut-in and rated speed, flat at rated power up to
/// cut-out.
struct PowerCurve {
  double cut_in = 0.0;       // m/s
  double rated_speed = 0.0;  // m/s
  double cut_out = 0.0;      // m/s
  double rated_power = 0.0;  // MW

  /// Throws std::invalid_argument unless 0 <= cut_in < rated_speed < cut_out
  /// and rated_power > 0.
  void validate() const;
};

double wind_power_curve(double speed, const PowerCurve& curve);

}  // namespace scengen
