#include "qdisc/moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {
namespace {

constexpr Complex kI{0.0, 1.0};
constexpr int kReanchor = 256;

double lambda(const bessel::ZeroTable& table, int n) {
  const double j = table.zero(0, n);
  return j * j;
}

double packet_gap_of(const bessel::ZeroTable& table) {
  if (table.k_max() < 3) throw DomainError("frequency set needs a zero table with k_max >= 3");
  const double l1 = lambda(table, 1), l2 = lambda(table, 2), l3 = lambda(table, 3);
  return std::min(l3 - l2, l2 - l1);
}

std::vector<Frequency> raw_frequencies(const bessel::ZeroTable& table, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be at least 1");
  if (n_max > table.k_max()) {
    throw DomainError("n_max = " + std::to_string(n_max) + " exceeds zero table bound " +
                      std::to_string(table.k_max()));
  }
  std::vector<Frequency> out{{0.0, 0, 0}};
  for (int p = 1; p <= 3; ++p) {
    for (int n = p + 1; n <= n_max; ++n) {
      out.push_back({lambda(table, n) - lambda(table, p), n, p});
    }
  }
  return out;
}

}  // namespace

FrequencySet::FrequencySet(std::vector<Frequency> entries, double packet_gap)
    : entries_(std::move(entries)), packet_gap_(packet_gap) {
  if (entries_.empty() || entries_.front().omega != 0.0) {
    throw DomainError("FrequencySet: must start with the zero frequency");
  }
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (!(entries_[i].omega > entries_[i - 1].omega)) {
      throw DomainError("FrequencySet: frequencies must be strictly increasing");
    }
  }
}

std::vector<double> FrequencySet::omegas() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const auto& f : entries_) out.push_back(f.omega);
  return out;
}

int FrequencySet::mode_bound() const {
  int m = 0;
  for (const auto& f : entries_) m = std::max(m, f.n);
  return m;
}

std::optional<int> FrequencySet::index_of(int n, int p) const {
  for (int i = 0; i < size(); ++i) {
    if (entries_[i].n == n && entries_[i].p == p) return i;
  }
  return std::nullopt;
}

FrequencySet build_frequencies(const bessel::ZeroTable& table, int n_max) {
  auto entries = raw_frequencies(table, n_max);
  std::sort(entries.begin(), entries.end(),
            [](const Frequency& a, const Frequency& b) { return a.omega < b.omega; });
  const double threshold = 10.0 * table.tol();
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].omega - entries[i - 1].omega < threshold) {
      std::ostringstream os;
      os << "non-resonance violated: (" << entries[i - 1].n << "," << entries[i - 1].p << ") and ("
         << entries[i].n << "," << entries[i].p << ") differ by "
         << entries[i].omega - entries[i - 1].omega;
      throw NumericalError(os.str());
    }
  }
  return FrequencySet(std::move(entries), packet_gap_of(table));
}

NonresonanceReport check_nonresonance(const bessel::ZeroTable& table, int n_max) {
  const auto entries = raw_frequencies(table, n_max);
  NonresonanceReport report;
  report.packet_gap = packet_gap_of(table);
  report.min_gap = std::numeric_limits<double>::infinity();
  report.within_packet_min_gap = std::numeric_limits<double>::infinity();
  const double threshold = 10.0 * table.tol();
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (std::size_t j = i + 1; j < entries.size(); ++j) {
      const double gap = std::abs(entries[i].omega - entries[j].omega);
      if (gap < report.min_gap) {
        report.min_gap = gap;
        report.min_gap_left = entries[i];
        report.min_gap_right = entries[j];
      }
      if (entries[i].n == entries[j].n && entries[i].n > 0) {
        report.within_packet_min_gap = std::min(report.within_packet_min_gap, gap);
      }
      if (gap < threshold) report.collisions.emplace_back(entries[i], entries[j]);
    }
  }
  return report;
}

std::vector<double> symmetric_omegas(const FrequencySet& freqs) {
  std::vector<double> out;
  out.reserve(2 * freqs.size() - 1);
  for (int i = freqs.size() - 1; i >= 1; --i) out.push_back(-freqs[i].omega);
  for (int i = 0; i < freqs.size(); ++i) out.push_back(freqs[i].omega);
  return out;
}

std::vector<DensityEstimate> upper_density(const FrequencySet& freqs,
                                           const std::vector<double>& r_values, double lambda3) {
  const auto points = symmetric_omegas(freqs);
  std::vector<DensityEstimate> out;
  for (double r : r_values) {
    if (!(r > 0.0)) throw DomainError("upper_density: window length must be positive");
    int best = 0;
    std::size_t hi = 0;
    for (std::size_t lo = 0; lo < points.size(); ++lo) {
      hi = std::max(hi, lo);
      while (hi + 1 < points.size() && points[hi + 1] <= points[lo] + r) ++hi;
      best = std::max(best, static_cast<int>(hi - lo + 1));
    }
    out.push_back({r, best, best / r, 3.0 * std::sqrt(r + lambda3) / r});
  }
  return out;
}

Complex exp_integral(double a, double horizon) {
  // T e^{ix/2} sin(x/2)/(x/2) avoids the cancellation in (e^{ix} − 1)/(ia).
  const double half = 0.5 * a * horizon;
  const double sinc = half == 0.0 ? 1.0 : std::sin(half) / half;
  return horizon * sinc * std::polar(1.0, half);
}

Complex t_exp_integral(double a, double horizon) {
  const double x = a * horizon;
  if (std::abs(x) < 1.0) {
    // T² Σ (ix)^n / (n! (n + 2))
    const Complex z = kI * x;
    Complex power = 1.0, sum = 0.5;
    for (int n = 1; n <= 24; ++n) {
      power *= z / static_cast<double>(n);
      sum += power / static_cast<double>(n + 2);
    }
    return horizon * horizon * sum;
  }
  const Complex e = std::polar(1.0, x);
  return horizon * e / (kI * a) + (e - 1.0) / (a * a);
}

Eigen::MatrixXcd gram_matrix(const std::vector<double>& omegas, double horizon, bool with_linear) {
  if (!(horizon > 0.0)) throw DomainError("gram_matrix: horizon must be positive");
  const int n = static_cast<int>(omegas.size());
  const int size = n + (with_linear ? 1 : 0);
  Eigen::MatrixXcd g(size, size);
  for (int j = 0; j < n; ++j) {
    g(j, j) = horizon;
    for (int k = j + 1; k < n; ++k) {
      const Complex value = exp_integral(omegas[j] - omegas[k], horizon);
      g(j, k) = value;
      g(k, j) = std::conj(value);
    }
  }
  if (with_linear) {
    for (int j = 0; j < n; ++j) {
      const Complex value = t_exp_integral(omegas[j], horizon);
      g(j, n) = value;
      g(n, j) = std::conj(value);
    }
    g(n, n) = horizon * horizon * horizon / 3.0;
  }
  return g;
}

Eigen::MatrixXcd gram_matrix(const FrequencySet& freqs, double horizon, bool with_linear) {
  return gram_matrix(symmetric_omegas(freqs), horizon, with_linear);
}

GramDiagnostics gram_diagnostics(const Eigen::MatrixXcd& gram) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("gram_diagnostics: eigensolver failed");
  GramDiagnostics d;
  d.size = static_cast<int>(gram.rows());
  d.min_eigenvalue = eig.eigenvalues().minCoeff();
  d.max_eigenvalue = eig.eigenvalues().maxCoeff();
  d.condition = d.min_eigenvalue > 0.0 ? d.max_eigenvalue / d.min_eigenvalue
                                       : std::numeric_limits<double>::infinity();
  return d;
}

void MomentProblem::validate() const {
  if (static_cast<int>(d.size()) != freqs.size()) {
    throw DomainError("MomentProblem: d has " + std::to_string(d.size()) + " entries, expected " +
                      std::to_string(freqs.size()));
  }
  if (!(horizon > 0.0)) throw DomainError("MomentProblem: horizon must be positive");
  if (std::abs(d.front().imag()) > 1e-12 * (1.0 + std::abs(d.front()))) {
    throw DomainError("MomentProblem: d_0 must be real");
  }
  for (const auto& v : d) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw DomainError("MomentProblem: non-finite right-hand side");
    }
  }
}

ExponentialSum::ExponentialSum(std::vector<double> omegas, std::vector<Complex> coeffs,
                               Complex linear, double horizon)
    : omegas_(std::move(omegas)), coeffs_(std::move(coeffs)), linear_(linear), horizon_(horizon) {
  if (omegas_.size() != coeffs_.size()) {
    throw DomainError("ExponentialSum: frequency and coefficient counts differ");
  }
}

Complex ExponentialSum::complex_value(double t) const {
  Complex sum = linear_ * t;
  for (std::size_t j = 0; j < omegas_.size(); ++j) sum += coeffs_[j] * std::polar(1.0, -omegas_[j] * t);
  return sum;
}

Complex ExponentialSum::antiderivative(double t) const {
  Complex sum = linear_ * (0.5 * t * t);
  for (std::size_t j = 0; j < omegas_.size(); ++j) sum += coeffs_[j] * exp_integral(-omegas_[j], t);
  return sum;
}

std::vector<Complex> ExponentialSum::sample_sum(const std::vector<Complex>& a, int intervals) const {
  const double h = horizon_ / intervals;
  std::vector<Complex> out(static_cast<std::size_t>(intervals) + 1, Complex{});
  for (std::size_t j = 0; j < omegas_.size(); ++j) {
    if (a[j] == Complex{}) continue;
    const Complex rotate = std::polar(1.0, -omegas_[j] * h);
    Complex phase{};
    for (int i = 0; i <= intervals; ++i) {
      if (i % kReanchor == 0) phase = a[j] * std::polar(1.0, -omegas_[j] * h * i);
      out[i] += phase;
      phase *= rotate;
    }
  }
  return out;
}

std::vector<double> ExponentialSum::sample(int intervals, double* max_imag) const {
  if (intervals < 1) throw DomainError("ExponentialSum: intervals must be positive");
  auto values = sample_sum(coeffs_, intervals);
  std::vector<double> out(values.size());
  double imag = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Complex v = values[i] + linear_ * (horizon_ * i / intervals);
    out[i] = v.real();
    imag = std::max(imag, std::abs(v.imag()));
  }
  if (max_imag) *max_imag = imag;
  return out;
}

std::vector<double> ExponentialSum::sample_antiderivative(int intervals, double* max_imag) const {
  if (intervals < 1) throw DomainError("ExponentialSum: intervals must be positive");
  // ∫₀ᵗ e^{−iωs} ds = (e^{−iωt} − 1)/(−iω) for ω ≠ 0, t for ω = 0.
  std::vector<Complex> a(coeffs_.size());
  Complex constant{};
  Complex zero_mode{};
  for (std::size_t j = 0; j < omegas_.size(); ++j) {
    if (omegas_[j] == 0.0) {
      zero_mode += coeffs_[j];
      continue;
    }
    a[j] = coeffs_[j] / (-kI * omegas_[j]);
    constant += a[j];
  }
  auto values = sample_sum(a, intervals);
  std::vector<double> out(values.size());
  double imag = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double t = horizon_ * i / intervals;
    const Complex v = values[i] - constant + zero_mode * t + linear_ * (0.5 * t * t);
    out[i] = v.real();
    imag = std::max(imag, std::abs(v.imag()));
  }
  if (max_imag) *max_imag = imag;
  return out;
}

MomentSolution solve_moment(const MomentProblem& problem, const MomentOptions& options) {
  problem.validate();
  const auto& freqs = problem.freqs;
  const double horizon = problem.horizon;
  const auto omegas = symmetric_omegas(freqs);
  const int n = static_cast<int>(omegas.size());
  const int k = freqs.size();

  Eigen::VectorXcd rhs(n + 1);
  for (int i = 1; i < k; ++i) {
    rhs(k - 1 - i) = std::conj(problem.d[i]);
    rhs(k - 1 + i) = problem.d[i];
  }
  rhs(k - 1) = problem.d[0].real();
  rhs(n) = problem.d_tilde;

  MomentSolution out;
  const Eigen::MatrixXcd g = gram_matrix(omegas, horizon, true);
  out.gram = gram_diagnostics(g);
  if (!(out.gram.condition <= options.max_condition)) {
    std::ostringstream os;
    os << "Gram matrix condition number " << out.gram.condition << " exceeds "
       << options.max_condition << " (gap " << freqs.packet_gap() << ", T " << horizon << ", K "
       << k << "); use a larger T or fewer frequencies";
    throw ConditioningError(os.str());
  }
  if (horizon < 2.0 * std::numbers::pi / freqs.packet_gap()) {
    out.warnings.push_back("horizon below 2*pi/gap; Gram conditioning may degrade");
  }

  Eigen::LLT<Eigen::MatrixXcd> llt(g);
  if (llt.info() != Eigen::Success) {
    const double jitter = 1e-14 * g.diagonal().real().maxCoeff();
    llt.compute(g + jitter * Eigen::MatrixXcd::Identity(n + 1, n + 1));
    out.jittered = true;
    if (llt.info() != Eigen::Success) {
      throw ConditioningError("Gram matrix not positive definite after jitter");
    }
  }
  Eigen::VectorXcd x = llt.solve(rhs);
  x += llt.solve(rhs - g * x);
  out.max_residual = (g * x - rhs).cwiseAbs().maxCoeff();

  std::vector<Complex> coeffs(x.data(), x.data() + n);
  out.w = ExponentialSum(omegas, std::move(coeffs), x(n), horizon);
  auto samples = out.w.sample(options.intervals, &out.max_imag);
  out.samples = ControlSignal(horizon, std::move(samples));
  return out;
}

double low_frequency_constant(const RadialState& psi_f, const TargetParams& params,
                              double horizon, const Basis& basis) {
  const auto amp = params.amplitudes();
  auto f = [&](int k) { return k <= psi_f.size() ? psi_f(k) : Complex{}; };
  auto e = [&](int k) { return std::polar(1.0, basis.eigenvalue(k) * horizon); };
  const Complex y = amp[0] * f(1) * e(1) + amp[1] * std::conj(f(2) * e(2)) +
                    amp[2] * std::conj(f(3) * e(3));
  return y.imag() / (2.0 * amp[1] * amp[2] * coupling_closed_form(2, 3, basis));
}

MomentProblem build_rhs(const RadialState& psi_f, const TargetParams& params, double horizon,
                        const FrequencySet& freqs, const Basis& basis) {
  if (!(horizon > 0.0)) throw DomainError("build_rhs: horizon must be positive");
  const int bound = freqs.mode_bound();
  if (bound < 3) throw DomainError("build_rhs: frequency set must cover modes 1..3");
  for (int k = bound + 1; k <= psi_f.size(); ++k) {
    if (psi_f(k) != Complex{}) {
      throw DomainError("build_rhs: target excites mode " + std::to_string(k) +
                        " beyond frequency coverage " + std::to_string(bound));
    }
  }
  const double tangent =
      inner(psi_f, wave_packet(params, horizon, basis, std::max(3, psi_f.size()))).real();
  if (std::abs(tangent) > 1e-8) {
    std::ostringstream os;
    os << "build_rhs: target not tangent to the reference trajectory (Re<f, psi_T> = " << tangent
       << ")";
    throw ConstraintError(os.str());
  }

  const auto amp = params.amplitudes();
  auto f = [&](int k) { return k <= psi_f.size() ? psi_f(k) : Complex{}; };
  auto e = [&](int k) { return std::polar(1.0, basis.eigenvalue(k) * horizon); };
  const Complex c{low_frequency_constant(psi_f, params, horizon, basis), 0.0};
  const double m12 = coupling_closed_form(1, 2, basis);
  const double m13 = coupling_closed_form(1, 3, basis);
  const double m23 = coupling_closed_form(2, 3, basis);

  MomentProblem problem{freqs, std::vector<Complex>(freqs.size()), 0.0, horizon};
  for (int i = 0; i < freqs.size(); ++i) {
    const auto& slot = freqs[i];
    Complex value{};
    if (slot.n == 0) {
      value = 0.0;
    } else if (slot.n == 2 && slot.p == 1) {
      value = (kI * f(2) * e(2) - amp[2] * m23 * std::conj(c)) / (m12 * amp[0]);
    } else if (slot.n == 3 && slot.p == 1) {
      value = (kI * f(3) * e(3) - amp[1] * m23 * c) / (m13 * amp[0]);
    } else if (slot.n == 3 && slot.p == 2) {
      value = c;
    } else {
      value = kI * amp[slot.p - 1] * f(slot.n) * e(slot.n) /
              coupling_closed_form(slot.n, slot.p, basis);
    }
    problem.d[i] = value;
  }
  return problem;
}

double default_horizon(const FrequencySet& freqs) {
  return std::max(1.0, 2.0 * std::numbers::pi / freqs.packet_gap());
}

}  // namespace qdisc
