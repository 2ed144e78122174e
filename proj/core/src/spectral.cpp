#include "qdisc/spectral.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "qdisc/errors.hpp"

namespace qdisc {

double RadialState::l2_norm() const {
  double sum = 0.0;
  for (const auto& c : coeffs_) sum += std::norm(c);
  return std::sqrt(sum);
}

RadialState RadialState::normalized() const {
  const double n = l2_norm();
  if (n == 0.0) throw DomainError("RadialState: cannot normalise the zero state");
  RadialState out(*this);
  out *= 1.0 / n;
  return out;
}

RadialState RadialState::resized(int n) const {
  std::vector<Complex> c(static_cast<std::size_t>(n), Complex{});
  for (int k = 0; k < std::min(n, size()); ++k) c[k] = coeffs_[k];
  return RadialState(std::move(c));
}

Eigen::VectorXcd RadialState::to_vector() const {
  return Eigen::Map<const Eigen::VectorXcd>(coeffs_.data(), size());
}

RadialState RadialState::from_vector(const Eigen::VectorXcd& v) {
  return RadialState(std::vector<Complex>(v.data(), v.data() + v.size()));
}

RadialState& RadialState::operator+=(const RadialState& other) {
  if (other.size() > size()) coeffs_.resize(other.coeffs_.size());
  for (int k = 0; k < other.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

RadialState& RadialState::operator-=(const RadialState& other) {
  if (other.size() > size()) coeffs_.resize(other.coeffs_.size());
  for (int k = 0; k < other.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

RadialState& RadialState::operator*=(Complex scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

RadialState operator+(RadialState a, const RadialState& b) { return a += b; }
RadialState operator-(RadialState a, const RadialState& b) { return a -= b; }
RadialState operator*(Complex s, RadialState a) { return a *= s; }

Complex inner(const RadialState& a, const RadialState& b) {
  Complex sum{};
  const int n = std::min(a.size(), b.size());
  for (int k = 1; k <= n; ++k) sum += a(k) * std::conj(b(k));
  return sum;
}

TargetParams::TargetParams(double theta2, double theta3) : theta2_(theta2), theta3_(theta3) {
  if (!(theta2 > 0.0) || !(theta3 > 0.0) || !(theta2 + theta3 < 1.0)) {
    std::ostringstream os;
    os << "TargetParams: (theta2, theta3) = (" << theta2 << ", " << theta3
       << ") outside {theta2, theta3 > 0, theta2 + theta3 < 1}";
    throw DomainError(os.str());
  }
}

std::array<double, 3> TargetParams::amplitudes() const {
  return {std::sqrt(1.0 - theta2_ - theta3_), std::sqrt(theta2_), std::sqrt(theta3_)};
}

Basis::Basis(std::shared_ptr<const bessel::ZeroTable> table) : table_(std::move(table)) {
  if (!table_) throw DomainError("Basis: null zero table");
  zeros_ = table_->zeros_of_order(0);
  j1_at_zero_.reserve(zeros_.size());
  for (double j : zeros_) j1_at_zero_.push_back(bessel::bessel_j(1, j));
}

Basis Basis::with_modes(int k_max, double tol) {
  return Basis(std::make_shared<const bessel::ZeroTable>(bessel::compute_zeros(0, k_max, tol)));
}

void Basis::require_index(int k) const {
  if (k < 1 || k > size()) {
    throw DomainError("Basis: mode " + std::to_string(k) + " outside table (1.." +
                      std::to_string(size()) + ")");
  }
}

double Basis::zero(int k) const {
  require_index(k);
  return zeros_[k - 1];
}

double Basis::eigenvalue(int k) const {
  const double j = zero(k);
  return j * j;
}

double Basis::boundary_value(int k) const {
  require_index(k);
  return j1_at_zero_[k - 1];
}

double Basis::mode(int k, double r) const {
  require_index(k);
  return std::numbers::sqrt2 * bessel::bessel_j(0, zeros_[k - 1] * r) /
         std::abs(j1_at_zero_[k - 1]);
}

Complex Basis::evaluate(const RadialState& state, double r) const {
  Complex sum{};
  for (int k = 1; k <= state.size(); ++k) {
    if (state(k) != Complex{}) sum += state(k) * mode(k, r);
  }
  return sum;
}

double hs_norm(const RadialState& state, double s, const Basis& basis) {
  if (s < 0.0) throw DomainError("hs_norm: s must be non-negative");
  double sum = 0.0;
  for (int k = 1; k <= state.size(); ++k) {
    const double weight = s == 0.0 ? 1.0 : std::pow(basis.zero(k), s);
    sum += std::norm(weight * state(k));
  }
  return std::sqrt(sum);
}

RadialState phi_sharp(const TargetParams& params, int n) {
  if (n < 3) throw DomainError("phi_sharp: need at least 3 modes");
  RadialState state(n);
  const auto amp = params.amplitudes();
  for (int k = 1; k <= 3; ++k) state(k) = amp[k - 1];
  return state;
}

RadialState wave_packet(const TargetParams& params, double tau, const Basis& basis, int n) {
  RadialState state = phi_sharp(params, n);
  for (int k = 1; k <= 3; ++k) state(k) *= std::polar(1.0, -basis.eigenvalue(k) * tau);
  return state;
}

double coupling_closed_form(int l, int k, const Basis& basis) {
  if (l == k) throw DomainError("coupling_closed_form: diagonal entries need coupling_diagonal");
  const double jl = basis.zero(l);
  const double jk = basis.zero(k);
  const double diff = jk * jk - jl * jl;
  const double sign = (basis.boundary_value(l) * basis.boundary_value(k) > 0.0) ? 1.0 : -1.0;
  return sign * 8.0 * jl * jk / (diff * diff);
}

double coupling_quadrature(int l, int k, const Basis& basis, const QuadratureRule& rule) {
  const double jl = basis.zero(l);
  const double jk = basis.zero(k);
  const double norm = 2.0 / (std::abs(basis.boundary_value(l)) * std::abs(basis.boundary_value(k)));
  const Complex value = weighted_integral(
      [&](double r) {
        return r * r * bessel::bessel_j(0, jl * r) * bessel::bessel_j(0, jk * r);
      },
      rule);
  return norm * value.real();
}

double coupling_diagonal(int k, const Basis& basis, const QuadratureRule& rule) {
  return coupling_quadrature(k, k, basis, rule);
}

Eigen::MatrixXd coupling_matrix(int n, const Basis& basis, const QuadratureRule& rule) {
  if (n < 1 || n > basis.size()) throw DomainError("coupling_matrix: size outside basis");
  Eigen::MatrixXd m(n, n);
  for (int k = 1; k <= n; ++k) {
    m(k - 1, k - 1) = coupling_diagonal(k, basis, rule);
    for (int l = 1; l < k; ++l) {
      const double value = coupling_closed_form(l, k, basis);
      m(k - 1, l - 1) = value;
      m(l - 1, k - 1) = value;
    }
  }
  return m;
}

std::string coupling_matrix_csv(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "k,l,value\n";
  for (int k = 0; k < m.rows(); ++k) {
    for (int l = 0; l < m.cols(); ++l) os << k + 1 << ',' << l + 1 << ',' << m(k, l) << '\n';
  }
  return os.str();
}

}  // namespace qdisc
