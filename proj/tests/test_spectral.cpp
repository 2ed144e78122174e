#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "qdisc/errors.hpp"
#include "qdisc/spectral.hpp"
#include "support.hpp"

using namespace qdisc;
using test_support::basis;

namespace {

// ⟨r² φ̂_l, φ̂_k⟩ with Boost's J₀ and 30-point Gauss on 24 panels; shares
// nothing with the library beyond the zero values.
double reference_coupling(int l, int k) {
  const double jl = basis().zero(l), jk = basis().zero(k);
  const double nl = std::sqrt(2.0) / std::abs(boost::math::cyl_bessel_j(1, jl));
  const double nk = std::sqrt(2.0) / std::abs(boost::math::cyl_bessel_j(1, jk));
  auto f = [&](double r) {
    return r * r * r * boost::math::cyl_bessel_j(0, jl * r) * boost::math::cyl_bessel_j(0, jk * r);
  };
  double sum = 0.0;
  for (int p = 0; p < 24; ++p) sum += boost::math::quadrature::gauss<double, 30>::integrate(f, p / 24.0, (p + 1) / 24.0);
  return nl * nk * sum;
}

}  // namespace

TEST_CASE("modes vanish at the boundary and are orthonormal") {
  for (int k : {1, 2, 7, 40, 300}) CHECK(std::abs(basis().mode(k, 1.0)) <= 1e-10);
  const auto& rule = default_rule();
  const auto ip = [&](int a, int b) {
    return weighted_integral([&](double r) { return basis().mode(a, r) * basis().mode(b, r); }, rule).real();
  };
  CHECK(ip(1, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(ip(1, 2)) <= 1e-9);
  CHECK(ip(17, 17) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(ip(5, 17)) <= 1e-9);
}

TEST_CASE("boundary values alternate in sign") {
  for (int k = 1; k <= 50; ++k) CHECK((basis().boundary_value(k) > 0) == (k % 2 == 1));
  CHECK(basis().eigenvalue(1) == doctest::Approx(2.404825557695773 * 2.404825557695773));
  CHECK_THROWS_AS(basis().zero(0), DomainError);
  CHECK_THROWS_AS(basis().zero(501), DomainError);
}

TEST_CASE("hs_norm") {
  RadialState pure(3);
  pure(1) = 1.0;
  CHECK(hs_norm(pure, 2, basis()) == doctest::Approx(basis().eigenvalue(1)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  const auto s = test_support::random_state(12, rng);
  CHECK(hs_norm(s, 0, basis()) == doctest::Approx(s.l2_norm()).epsilon(1e-14));

  // Hand-summed: c = (1, (λ₁/λ₂)^{3/2}) gives an H³ norm of j₁³·√2.
  RadialState c(2);
  c(1) = 1.0;
  c(2) = std::pow(basis().eigenvalue(1) / basis().eigenvalue(2), 1.5);
  const double j1 = basis().zero(1);
  CHECK(hs_norm(c, 3, basis()) == doctest::Approx(j1 * j1 * j1 * std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("RadialState arithmetic") {
  RadialState a(std::vector<Complex>{{1, 2}, {3, -1}});
  RadialState b(std::vector<Complex>{{0, 1}});
  CHECK(inner(a, b) == Complex(2, -1));
  const auto sum = a + b;
  CHECK(sum(1) == Complex(1, 3));
  CHECK(sum(2) == Complex(3, -1));
  CHECK((a - a).l2_norm() == 0.0);
  CHECK(a.normalized().l2_norm() == doctest::Approx(1.0));
  CHECK(a.resized(5).size() == 5);
  CHECK(a.resized(1).l2_norm() == doctest::Approx(std::sqrt(5.0)));
  CHECK(RadialState::from_vector(a.to_vector()).coeffs() == a.coeffs());
  CHECK_THROWS(RadialState(2).normalized());
}

TEST_CASE("target parameters") {
  const TargetParams p(0.25, 0.25);
  const auto phi = phi_sharp(p, 5);
  CHECK(phi(1).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(phi(2).real() == doctest::Approx(0.5));
  CHECK(phi(3).real() == doctest::Approx(0.5));
  CHECK(phi(4) == Complex{});
  CHECK(phi.l2_norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_sharp(TargetParams(0.1, 0.6)).l2_norm() == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(TargetParams(0.0, 0.0), DomainError);
  CHECK_THROWS_AS(TargetParams(0.0, 0.5), DomainError);
  CHECK_THROWS_AS(TargetParams(0.5, 0.5), DomainError);
  CHECK_THROWS_AS(TargetParams(-0.1, 0.5), DomainError);
  CHECK_THROWS_AS(TargetParams(std::nan(""), 0.5), DomainError);
}

TEST_CASE("wave packet phases") {
  const TargetParams p(0.25, 0.25);
  CHECK((wave_packet(p, 0.0, basis()) - phi_sharp(p)).l2_norm() == 0.0);
  for (double tau : {0.3, 1.7, 25.0}) {
    const auto packet = wave_packet(p, tau, basis());
    CHECK(packet.l2_norm() == doctest::Approx(1.0).epsilon(1e-15));
    for (int k = 1; k <= 3; ++k) {
      const Complex expected = phi_sharp(p)(k) * std::exp(Complex(0, -basis().eigenvalue(k) * tau));
      CHECK(std::abs(packet(k) - expected) <= 1e-14);
    }
  }
}

TEST_CASE("closed-form coupling agrees with an independent quadrature") {
  double worst = 0.0;
  for (int k = 2; k <= 40; ++k) {
    for (int l = 1; l < k; ++l) {
      worst = std::max(worst, std::abs(coupling_closed_form(l, k, basis()) - reference_coupling(l, k)));
    }
  }
  CHECK(worst <= 1e-10);
  CHECK(coupling_closed_form(1, 2, basis()) == doctest::Approx(reference_coupling(1, 2)).epsilon(1e-12));
}

TEST_CASE("closed-form coupling agrees with the library quadrature") {
  double worst = 0.0;
  for (int k = 2; k <= 40; ++k) {
    for (int l = 1; l < k; ++l) {
      worst = std::max(worst, std::abs(coupling_closed_form(l, k, basis()) - coupling_quadrature(l, k, basis())));
    }
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("coupling symmetry and sign") {
  for (int l = 1; l <= 12; ++l) {
    for (int k = 1; k <= 12; ++k) {
      if (l == k) continue;
      CHECK(coupling_closed_form(l, k, basis()) == coupling_closed_form(k, l, basis()));
      // sign(J₁(j_l)J₁(j_k)) = (−1)^{l+k}.
      CHECK((coupling_closed_form(l, k, basis()) > 0) == ((l + k) % 2 == 0));
    }
  }
  CHECK_THROWS_AS(coupling_closed_form(3, 3, basis()), DomainError);
}

TEST_CASE("scaled couplings to the first three modes stay between fixed bounds") {
  // Measured over 4 ≤ k ≤ 200 and frozen.
  const double lower[3] = {19.239169537340672, 44.16745978700501, 69.2561611332723};
  const double upper[3] = {20.944700542017276, 72.42769317674446, 325.1897280333729};
  for (int p = 1; p <= 3; ++p) {
    double lo = INFINITY, hi = 0.0;
    for (int k = 4; k <= 200; ++k) {
      const double j = basis().zero(k);
      const double value = j * j * j * std::abs(coupling_closed_form(p, k, basis()));
      lo = std::min(lo, value);
      hi = std::max(hi, value);
    }
    CHECK(lo == doctest::Approx(lower[p - 1]).epsilon(1e-10));
    CHECK(hi == doctest::Approx(upper[p - 1]).epsilon(1e-10));
  }
  // From k = 2 the mode-1 values stay in a positive, finite band.
  double lo = INFINITY, hi = 0.0;
  for (int k = 2; k <= 200; ++k) {
    const double j = basis().zero(k);
    const double value = j * j * j * std::abs(coupling_closed_form(1, k, basis()));
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  CHECK(lo > 0.0);
  CHECK(hi < 2 * lo);
}

TEST_CASE("diagonal couplings") {
  for (int k : {1, 2, 3, 9, 64}) {
    const double value = coupling_diagonal(k, basis());
    CHECK((value > 0.0 && value < 1.0));
    CHECK(std::abs(value - coupling_diagonal(k, basis(), gauss_legendre(128))) <= 1e-10);
  }
  // The trend approaches 1/3 from below as 1/3 − 2/(3λ_k).
  CHECK(coupling_diagonal(1, basis()) == doctest::Approx(0.21805662064623643).epsilon(1e-12));
  double previous = 0.0;
  for (int k = 1; k <= 64; ++k) {
    const double value = coupling_diagonal(k, basis());
    CHECK(value > previous);
    CHECK(std::abs(value - (1.0 / 3.0 - 2.0 / (3.0 * basis().eigenvalue(k)))) <= 1e-12);
    previous = value;
  }
}

TEST_CASE("coupling matrix") {
  const auto m = coupling_matrix(30, basis());
  CHECK(m.rows() == 30);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
  // r² ≤ 1 makes M a contraction with positive spectrum.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  CHECK(eig.eigenvalues().minCoeff() > 0.0);
  CHECK(eig.eigenvalues().maxCoeff() < 1.0);
  const auto csv = coupling_matrix_csv(coupling_matrix(3, basis()));
  CHECK(csv.rfind("k,l,value\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 9);
}

TEST_CASE("evaluate reconstructs a mode sum") {
  RadialState s(3);
  s(1) = {1, 0};
  s(3) = {0, 2};
  const double r = 0.37;
  const Complex expected = basis().mode(1, r) + Complex(0, 2) * basis().mode(3, r);
  CHECK(std::abs(basis().evaluate(s, r) - expected) <= 1e-15);
}
