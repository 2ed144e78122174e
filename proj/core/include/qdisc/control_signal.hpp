#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace qdisc {

/// Real control sampled on the uniform grid t_i = i·T/M, i = 0..M, with
/// piecewise-linear interpolation in between.
///
/// A signal may carry its exact derivative on the same grid (controls built by
/// integrating a synthesised w = v̇ do). Without it, derivatives come from
/// central differences with one-sided second-order stencils at the ends.
class ControlSignal {
 public:
  ControlSignal(double horizon, std::vector<double> samples,
                std::optional<std::vector<double>> derivative = std::nullopt);

  static ControlSignal zero(double horizon, int intervals);
  static ControlSignal from_function(double horizon, int intervals,
                                     const std::function<double(double)>& value,
                                     const std::function<double(double)>& derivative = {});

  double horizon() const { return horizon_; }
  int intervals() const { return static_cast<int>(samples_.size()) - 1; }
  double step() const { return horizon_ / intervals(); }
  double time(int i) const { return horizon_ * i / intervals(); }

  const std::vector<double>& samples() const { return samples_; }
  bool has_derivative() const { return derivative_.has_value(); }
  /// Carried derivative, or finite differences of the samples.
  std::vector<double> derivative_samples() const;

  double value(double t) const;
  double derivative(double t) const;

  double max_abs() const;
  /// Trapezoid integral of the samples (exact for the interpolant).
  double trapezoid() const;

  /// Ḣ¹₀ membership: zero end values and |∫| ≤ tol·T·max|samples|.
  bool admissible(double tol = 1e-10) const;
  /// Throws ConstraintError with the violated condition.
  void require_admissible(double tol = 1e-10) const;

  ControlSignal scaled(double factor) const;
  /// Pointwise sum; both signals must share the grid.
  ControlSignal operator+(const ControlSignal& other) const;

 private:
  double interpolate(const std::vector<double>& data, double t) const;

  double horizon_;
  std::vector<double> samples_;
  std::optional<std::vector<double>> derivative_;
};

}  // namespace qdisc
