#include <doctest.h>

#include <cmath>
#include <vector>

#include <json.hpp>

#include "birkhoff/error.hpp"
#include "birkhoff/growth.hpp"
#include "birkhoff/simulator.hpp"

using namespace birkhoff;

namespace {

NormSeq stretched(std::int64_t n, double a = 0.5) {
  return NormSeq::generate(n, [a](std::int64_t k) { return std::pow(static_cast<double>(k), a); });
}
NormSeq power(std::int64_t n, double e) {
  return NormSeq::generate(n, [e](std::int64_t k) { return e * std::log(static_cast<double>(k)); });
}
NormSeq expo(std::int64_t n, double base) {
  return NormSeq::generate(n, [base](std::int64_t k) { return std::log(base) * static_cast<double>(k); });
}
NormSeq parity(std::int64_t n, double a = 0.5) {
  return NormSeq::generate(n, [a](std::int64_t k) { return parity_log_normalization(k, a); });
}
NormSeq shifted(const NormSeq& s, double log_c) {
  std::vector<double> v(s.log_values().begin(), s.log_values().end());
  for (auto& x : v) x += log_c;
  return NormSeq(std::move(v));
}

}  // namespace

TEST_SUITE("growth") {

TEST_CASE("sequence construction checks") {
  CHECK_THROWS_AS(NormSeq({1.0, std::nan("")}), InvalidArgument);
  CHECK_THROWS_AS(NormSeq(std::vector<double>(10, 1.0)).require_fit_length(), InvalidArgument);
  CHECK_THROWS_AS(ratio_and_doubling(NormSeq(std::vector<double>(15, 1.0))), InvalidArgument);
  const std::vector<double> raw{1.0, 2.0, 4.0};
  CHECK(NormSeq::from_values(raw).log_at(3) == doctest::Approx(std::log(4.0)));
  CHECK_THROWS_AS(NormSeq::from_values(std::vector<double>{1.0, -2.0}), InvalidArgument);
}

TEST_CASE("ratio and doubling for n^2") {
  const auto r = ratio_and_doubling(power(10000, 2.0));
  CHECK(r.profile.converges);
  CHECK(r.profile.limit_estimate == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(r.doubling_sup == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("ratio and doubling for e^sqrt(n)") {
  const std::int64_t n = 10000;
  const auto r = ratio_and_doubling(stretched(n));
  CHECK(r.profile.converges);
  CHECK(r.profile.limit_estimate == doctest::Approx(1.0).epsilon(0.01));
  CHECK(r.doubling_argmax == n / 2);
  CHECK(std::log(r.doubling_sup) == doctest::Approx((std::sqrt(2.0) - 1.0) * std::sqrt(n / 2.0)).epsilon(1e-9));
}

TEST_CASE("parity ratios oscillate between 1/2 and 2") {
  const std::int64_t n = 10000;
  const auto r = ratio_and_doubling(parity(n));
  CHECK_FALSE(r.profile.converges);
  const double step = std::exp(std::sqrt(static_cast<double>(n)) - std::sqrt(n - 1.0));
  CHECK(r.profile.tail_min == doctest::Approx(0.5).epsilon(0.02));
  CHECK(r.profile.tail_max == doctest::Approx(2.0 * step).epsilon(0.02));
}

TEST_CASE("polynomial fits") {
  const auto cube = poly_fit(power(10000, 3.0));
  CHECK(cube.exponent == doctest::Approx(3.0).epsilon(0.01 / 3.0));
  CHECK_FALSE(cube.superpolynomial);
  const auto nl = poly_fit(NormSeq::generate(10000, [](std::int64_t k) {
    const double x = static_cast<double>(k);
    return 2.0 * std::log(x) + std::log(std::log(x + 1.0));
  }));
  CHECK(std::abs(nl.exponent - 2.0) <= 0.2);
  CHECK_FALSE(nl.superpolynomial);
  CHECK(poly_fit(stretched(10000)).superpolynomial);
}

TEST_CASE("stretched fits") {
  const auto s = stretched_fit(stretched(10000));
  CHECK(s.alpha >= 0.45);
  CHECK(s.alpha <= 0.55);
  CHECK(s.stretched);
  const auto e = stretched_fit(expo(1000, 2.0));
  CHECK(e.alpha == doctest::Approx(1.0).epsilon(0.01));
  CHECK(e.residual_rms < 0.1);
  const auto rep = growth_report(power(10000, 2.0));
  CHECK(rep.has_verdict("polynomial regime"));
  CHECK_THROWS_AS(stretched_fit(NormSeq(std::vector<double>(40, 0.0))), InvalidArgument);
}

TEST_CASE("subexponential check") {
  const std::vector<double> grid{0.01};
  const auto s = subexp_check(stretched(40000), grid);
  CHECK(s.rows[0].pass);
  CHECK_FALSE(s.exponential);
  const std::vector<double> grid2{0.1, 0.01, 0.001};
  const auto e = subexp_check(expo(1000, 2.0), grid2);
  CHECK(e.exponential);
  for (const auto& row : e.rows) CHECK(row.max_log_over_n == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  const auto p = subexp_check(parity(1000000), grid2);
  for (const auto& row : p.rows) CHECK(row.pass);
}

TEST_CASE("max ratio bounds") {
  const std::vector<double> ls{1.5, 2.0, 3.0};
  const auto s = max_ratio_bounds(stretched(10000), ls);
  CHECK(s.global_c == doctest::Approx(std::exp(std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK(s.global_c_index == 1);
  const auto e = max_ratio_bounds(expo(1000, 2.0), ls);
  CHECK(e.density[0].second == 1.0);
  const auto p = max_ratio_bounds(parity(10000), ls);
  CHECK(p.density[2].second < 0.01);
  for (const auto* m : {&s, &e, &p}) {
    for (std::size_t i = 1; i < m->density.size(); ++i) CHECK(m->density[i].second <= m->density[i - 1].second);
    for (const auto& [l, d] : m->density) {
      if (l > m->global_c) CHECK(d == 0.0);
    }
  }
}

TEST_CASE("fits are invariant under B_n -> C B_n") {
  const NormSeq base = stretched(5000);
  const NormSeq moved = shifted(base, 7.25);
  const auto a = growth_report(base);
  const auto b = growth_report(moved);
  CHECK(a.poly.exponent == doctest::Approx(b.poly.exponent).epsilon(1e-9));
  REQUIRE(a.stretched_alpha.has_value());
  REQUIRE(b.stretched_alpha.has_value());
  CHECK(*a.stretched_alpha == doctest::Approx(*b.stretched_alpha).epsilon(1e-9));
  CHECK(a.ratio_profile.limit_estimate == doctest::Approx(b.ratio_profile.limit_estimate).epsilon(1e-9));
  for (std::size_t i = 0; i < a.density_violation.size(); ++i) {
    CHECK(a.density_violation[i].second == b.density_violation[i].second);
  }
}

TEST_CASE("two point fit") {
  const std::vector<double> ones(50, 1.0);
  const auto f = two_point_fit(ones);
  CHECK(f.mass_low == 0.0);
  CHECK(f.mass_high == 1.0);
  REQUIRE(f.loc_high.has_value());
  CHECK(*f.loc_high == 1.0);
  const std::vector<double> zeros(10, 0.0);
  const auto z = two_point_fit(zeros);
  CHECK_FALSE(z.loc_high.has_value());
  CHECK(z.mass_low + z.mass_high == 1.0);
  std::vector<double> mix{0.0, 0.1, 0.2, 0.9, 1.0, 1.1};
  const auto m = two_point_fit(mix);
  CHECK(m.mass_low + m.mass_high == 1.0);
  CHECK(m.mass_low == doctest::Approx(0.5));
}

TEST_CASE("ks distance") {
  const std::vector<double> one{0.5};
  const auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_distance(one, uniform) == doctest::Approx(0.5));
  RandomStream r(3);
  std::vector<double> u(100000);
  for (auto& x : u) x = r.uniform();
  const double d = ks_distance(u, uniform);
  CHECK(d >= 0.0);
  CHECK(d < 0.01);
  // Samples at the midpoints (i - 1/2)/m attain the minimum 1/(2m).
  std::vector<double> mid{0.125, 0.375, 0.625, 0.875};
  CHECK(ks_distance(mid, uniform) == doctest::Approx(0.125));
  CHECK(ks_distance(std::vector<double>{2.0}, uniform) == doctest::Approx(1.0));
  CHECK(ks_two_sample(u, u) == 0.0);
}

TEST_CASE("growth report verdicts and JSON") {
  const auto e = growth_report(stretched(10000));
  CHECK(e.has_verdict("stretched-exponential growth"));
  CHECK(e.has_verdict("subexponential"));
  CHECK(e.has_verdict("converges"));
  const auto x = growth_report(expo(1000, 2.0));
  CHECK(x.has_verdict("exponential growth: inconsistent with conservative limit theorem"));
  REQUIRE(x.density_at(1.5).has_value());
  CHECK(*x.density_at(1.5) == 1.0);
  const auto p = growth_report(parity(10000));
  CHECK(p.has_verdict("ratio does not converge"));
  CHECK(*p.density_at(3.0) < 0.01);

  const auto doc = nlohmann::json::parse(to_json(e));
  for (const char* key : {"ratio_limit_estimate", "doubling_sup", "poly_exponent", "stretched_alpha",
                          "subexp_margin", "global_C", "density_violation", "verdicts", "thresholds"}) {
    CHECK(doc.contains(key));
  }
  CHECK(doc["poly_exponent"] == "superpolynomial");
  CHECK(nlohmann::json::parse(to_json(p))["ratio_limit_estimate"] == "divergent/oscillating");
  CHECK(to_json(e) == to_json(growth_report(stretched(10000))));
}

}
