#include "qdisc/control_signal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {

ControlSignal::ControlSignal(double horizon, std::vector<double> samples,
                             std::optional<std::vector<double>> derivative)
    : horizon_(horizon), samples_(std::move(samples)), derivative_(std::move(derivative)) {
  if (!(horizon_ > 0.0)) throw DomainError("ControlSignal: horizon must be positive");
  if (samples_.size() < 2) throw DomainError("ControlSignal: need at least two samples");
  if (derivative_ && derivative_->size() != samples_.size()) {
    throw DomainError("ControlSignal: derivative grid differs from sample grid");
  }
}

ControlSignal ControlSignal::zero(double horizon, int intervals) {
  if (intervals < 1) throw DomainError("ControlSignal: intervals must be positive");
  const std::size_t n = static_cast<std::size_t>(intervals) + 1;
  return ControlSignal(horizon, std::vector<double>(n, 0.0), std::vector<double>(n, 0.0));
}

ControlSignal ControlSignal::from_function(double horizon, int intervals,
                                           const std::function<double(double)>& value,
                                           const std::function<double(double)>& derivative) {
  if (intervals < 1) throw DomainError("ControlSignal: intervals must be positive");
  std::vector<double> v(static_cast<std::size_t>(intervals) + 1);
  std::optional<std::vector<double>> d;
  if (derivative) d.emplace(v.size());
  for (int i = 0; i <= intervals; ++i) {
    const double t = horizon * i / intervals;
    v[i] = value(t);
    if (d) (*d)[i] = derivative(t);
  }
  return ControlSignal(horizon, std::move(v), std::move(d));
}

std::vector<double> ControlSignal::derivative_samples() const {
  if (derivative_) return *derivative_;
  const int m = intervals();
  const double h = step();
  std::vector<double> d(samples_.size());
  if (m == 1) {
    d[0] = d[1] = (samples_[1] - samples_[0]) / h;
    return d;
  }
  d[0] = (-3.0 * samples_[0] + 4.0 * samples_[1] - samples_[2]) / (2.0 * h);
  for (int i = 1; i < m; ++i) d[i] = (samples_[i + 1] - samples_[i - 1]) / (2.0 * h);
  d[m] = (3.0 * samples_[m] - 4.0 * samples_[m - 1] + samples_[m - 2]) / (2.0 * h);
  return d;
}

double ControlSignal::interpolate(const std::vector<double>& data, double t) const {
  if (t <= 0.0) return data.front();
  if (t >= horizon_) return data.back();
  const double x = t / step();
  const int i = std::min(static_cast<int>(x), intervals() - 1);
  const double frac = x - i;
  return (1.0 - frac) * data[i] + frac * data[i + 1];
}

double ControlSignal::value(double t) const { return interpolate(samples_, t); }

double ControlSignal::derivative(double t) const {
  if (derivative_) return interpolate(*derivative_, t);
  return interpolate(derivative_samples(), t);
}

double ControlSignal::max_abs() const {
  double m = 0.0;
  for (double s : samples_) m = std::max(m, std::abs(s));
  return m;
}

double ControlSignal::trapezoid() const {
  double sum = 0.5 * (samples_.front() + samples_.back());
  for (std::size_t i = 1; i + 1 < samples_.size(); ++i) sum += samples_[i];
  return sum * step();
}

bool ControlSignal::admissible(double tol) const {
  const double scale = max_abs();
  if (scale == 0.0) return true;
  return std::abs(samples_.front()) <= tol * scale && std::abs(samples_.back()) <= tol * scale &&
         std::abs(trapezoid()) <= tol * horizon_ * scale;
}

void ControlSignal::require_admissible(double tol) const {
  if (admissible(tol)) return;
  std::ostringstream os;
  os << "ControlSignal: not admissible (v(0)=" << samples_.front() << ", v(T)=" << samples_.back()
     << ", integral=" << trapezoid() << ", max|v|=" << max_abs() << ")";
  throw ConstraintError(os.str());
}

ControlSignal ControlSignal::scaled(double factor) const {
  std::vector<double> v(samples_);
  for (auto& x : v) x *= factor;
  std::optional<std::vector<double>> d;
  if (derivative_) {
    d = *derivative_;
    for (auto& x : *d) x *= factor;
  }
  return ControlSignal(horizon_, std::move(v), std::move(d));
}

ControlSignal ControlSignal::operator+(const ControlSignal& other) const {
  if (other.samples_.size() != samples_.size() || other.horizon_ != horizon_) {
    throw DomainError("ControlSignal: cannot add signals on different grids");
  }
  std::vector<double> v(samples_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.samples_[i];
  std::optional<std::vector<double>> d;
  if (derivative_ || other.derivative_) {
    d = derivative_samples();
    const auto od = other.derivative_samples();
    for (std::size_t i = 0; i < d->size(); ++i) (*d)[i] += od[i];
  }
  return ControlSignal(horizon_, std::move(v), std::move(d));
}

}  // namespace qdisc
