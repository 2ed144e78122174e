#include <doctest.h>

#include <filesystem>
#include <random>

#include "qdisc/control.hpp"
#include "qdisc/errors.hpp"
#include "qdisc/io.hpp"
#include "support.hpp"

using namespace qdisc;
using qdisc::io::json;

TEST_CASE("zero tables round-trip through JSON") {
  const auto table = bessel::compute_zeros(2, 10);
  const json j = io::to_json(table);
  CHECK(j.at("zeros").size() == 30);
  const auto back = io::zero_table_from_json(json::parse(j.dump()));
  CHECK(back.nu_max() == 2);
  CHECK(back.k_max() == 10);
  CHECK(back.tol() == table.tol());
  for (int nu = 0; nu <= 2; ++nu) CHECK(back.zeros_of_order(nu) == table.zeros_of_order(nu));

  json missing = j;
  missing["zeros"].erase(missing["zeros"].begin());
  CHECK_THROWS_AS(io::zero_table_from_json(missing), DomainError);
  json outside = j;
  outside["zeros"][0]["k"] = 11;
  CHECK_THROWS_AS(io::zero_table_from_json(outside), DomainError);
  CHECK_THROWS_AS(io::zero_table_from_json(json::array()), DomainError);
}

TEST_CASE("radial states round-trip through JSON") {
  std::mt19937_64 rng(1);
  const auto s = test_support::random_state(7, rng);
  const auto back = io::radial_state_from_json(json::parse(io::to_json(s).dump()));
  CHECK(back.coeffs() == s.coeffs());
  CHECK_THROWS_AS(io::radial_state_from_json(json::object()), DomainError);
  CHECK_THROWS_AS(io::radial_state_from_json(json::parse("[[1, 2, 3]]")), DomainError);
  CHECK_THROWS_AS(io::radial_state_from_json(json::parse("[[\"a\", 2]]")), DomainError);
}

TEST_CASE("moment objects serialise") {
  const auto freqs = build_frequencies(test_support::basis().table(), 4);
  MomentProblem p;
  p.freqs = freqs;
  p.d.assign(7, Complex{0.5, -0.25});
  p.d[0] = 0.0;
  const json j = io::to_json(p);
  CHECK(j.at("frequencies").size() == 7);
  CHECK(j.at("d").size() == 7);
  const auto sol = solve_moment(p, {64, 1e12});
  const json s = io::to_json(sol);
  CHECK(s.at("coefficients").size() == 13);
  CHECK(s.at("gram").at("size") == 14);
}

TEST_CASE("control CSV parsing") {
  const auto v = io::control_from_csv("t,v,w\n0,0,1\n0.5,0.5,0\n1,0,-1\n");
  CHECK(v.horizon() == 1.0);
  CHECK(v.intervals() == 2);
  CHECK(v.has_derivative());
  CHECK(v.derivative_samples()[2] == -1.0);
  const auto u = io::control_from_csv("t,u\n0,0\n0.25,1\n0.5,0\n");
  CHECK_FALSE(u.has_derivative());
  CHECK(u.value(0.125) == 0.5);

  // control_csv output parses back to the same grid.
  const auto w = ControlSignal::from_function(2.0, 16, [](double t) { return t * (2 - t); });
  const auto again = io::control_from_csv(control_csv(w));
  CHECK(again.intervals() == 16);
  for (int i = 0; i <= 16; ++i) CHECK(again.samples()[i] == doctest::Approx(w.samples()[i]).epsilon(1e-15));

  CHECK_THROWS_AS(io::control_from_csv(""), DomainError);
  CHECK_THROWS_AS(io::control_from_csv("t,u\n0,0\n"), DomainError);
  CHECK_THROWS_AS(io::control_from_csv("t,u\n0,0\n0.5,x\n"), DomainError);
  CHECK_THROWS_AS(io::control_from_csv("t,u\n0,0\n0.5,1\n0.7,0\n"), DomainError);
  CHECK_THROWS_AS(io::control_from_csv("t,u\n0\n1\n"), DomainError);
}

TEST_CASE("FNV-1a") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(io::fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("file helpers") {
  const auto dir = std::filesystem::temp_directory_path() / "qdisc_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_json(dir / "x.json", json{{"a", 1}});
  CHECK(io::read_text(dir / "x.json").back() == '\n');
  CHECK(io::read_json(dir / "x.json").at("a") == 1);
  io::write_text(dir / "bad.json", "{");
  CHECK_THROWS_AS(io::read_json(dir / "bad.json"), DomainError);
  CHECK_THROWS_AS(io::read_text(dir / "none.txt"), DomainError);
  std::filesystem::remove_all(dir.parent_path());
}
