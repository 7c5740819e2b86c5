#include <doctest.h>

#include <cmath>
#include <vector>

#include "birkhoff/error.hpp"
#include "birkhoff/renewal.hpp"
#include "oracles.hpp"

using namespace birkhoff;

namespace {

const RenewalTable& small_table() {
  static const RenewalTable t(ExcursionLaw(LawSpec::log_squared(), 4096), 4000);
  return t;
}

}  // namespace

TEST_SUITE("renewal") {

TEST_CASE("u matches composition enumeration for s <= 30") {
  for (const LawSpec spec : {LawSpec::log_squared(), LawSpec::log_squared_even(), LawSpec::power(2.5)}) {
    const ExcursionLaw law(spec, 64);
    const RenewalTable t(law, 30);
    CHECK(t.u(0) == 1.0);
    CHECK(t.u(1) == 0.0);
    CHECK(t.u(4) == doctest::Approx(law.pmf(4) + law.pmf(2) * law.pmf(2)).epsilon(1e-14));
    double worst = 0.0;
    for (std::int64_t s = 0; s <= 30; ++s) {
      const auto ref = oracle::composition_mass([&](std::int64_t k) { return law.pmf(k); }, s);
      worst = std::max(worst, std::abs(t.u(s) - static_cast<double>(ref)));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("completeness identity for every n") {
  const RenewalTable& t = small_table();
  double worst = 0.0;
  for (std::int64_t n = 0; n <= t.horizon(); ++n) worst = std::max(worst, std::abs(completeness_defect(t, n)));
  CHECK(worst <= 1e-9);
}

TEST_CASE("height distribution small cases") {
  const RenewalTable& t = small_table();
  const auto h0 = height_distribution(t, 0);
  REQUIRE(h0.probs.size() == 1);
  CHECK(h0.probs[0] == 1.0);
  const auto h2 = height_distribution(t, 2);
  const ExcursionLaw& law = t.law();
  CHECK(h2.probs[0] == doctest::Approx(law.pmf(2)).epsilon(1e-15));
  CHECK(h2.probs[1] == 0.0);
  CHECK(h2.probs[2] == doctest::Approx(law.tail(2)).epsilon(1e-15));
  CHECK_THROWS_AS(height_distribution(t, t.horizon() + 1), OutOfHorizon);
}

TEST_CASE("height distribution matches a hazard-driven walk") {
  const std::int64_t n = 200;
  const RenewalTable& t = small_table();
  const auto exact = height_distribution(t, n);
  RandomStream rng(77);
  const int walks = 200000;
  std::vector<double> counts(static_cast<std::size_t>(n + 1), 0.0);
  for (int i = 0; i < walks; ++i) counts[static_cast<std::size_t>(oracle::hazard_walk(t.law(), n, rng))] += 1.0;
  const auto bin = oracle::quantile_bins(exact.probs, 20);
  std::vector<double> obs(20, 0.0);
  std::vector<double> exp(20, 0.0);
  for (std::int64_t k = 0; k <= n; ++k) {
    obs[static_cast<std::size_t>(bin[static_cast<std::size_t>(k)])] += counts[static_cast<std::size_t>(k)];
    exp[static_cast<std::size_t>(bin[static_cast<std::size_t>(k)])] += walks * exact.probs[static_cast<std::size_t>(k)];
  }
  std::vector<double> o;
  std::vector<double> e;
  for (std::size_t b = 0; b < 20; ++b) {
    if (exp[b] > 0.0) {
      o.push_back(obs[b]);
      e.push_back(exp[b]);
    }
  }
  CHECK(oracle::chi_square_pvalue(o, e) > 0.01);
}

TEST_CASE("height masses are nonnegative") {
  const RenewalTable& t = small_table();
  for (const std::int64_t n : {1, 17, 500, 4000}) {
    const auto h = height_distribution(t, n);
    bool ok = true;
    for (const double p : h.probs) ok = ok && p >= 0.0;
    CHECK(ok);
  }
}

TEST_CASE("window mass is monotone in beta and reaches 1 - T(n) at beta = 1") {
  const RenewalTable& t = small_table();
  const std::int64_t n = 4000;
  double prev = 0.0;
  for (const double b : {0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const double m = window_mass(t, n, b);
    CHECK(m >= prev);
    CHECK(m > 0.0);
    CHECK(m < 1.0);
    prev = m;
  }
  CHECK(window_mass(t, n, 1.0) == doctest::Approx(1.0 - t.law().tail(n)).epsilon(1e-9));
  CHECK_THROWS_AS(window_mass(t, n, 0.0), InvalidArgument);
  CHECK_THROWS_AS(window_mass(t, n, 1.5), InvalidArgument);
}

TEST_CASE("window mass equals a direct sum over the height law") {
  const RenewalTable& t = small_table();
  const std::int64_t n = 3000;
  const auto h = height_distribution(t, n);
  for (const double b : {0.3, 0.5}) {
    const auto lo = static_cast<std::int64_t>(std::ceil(n - std::pow(static_cast<double>(n), b)));
    double direct = 0.0;
    for (std::int64_t k = lo; k < n; ++k) direct += h.probs[static_cast<std::size_t>(k)];
    CHECK(window_mass(t, n, b) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("nagaev ratio at s = 2 and on odd s of the even law") {
  const RenewalTable& t = small_table();
  const double t2 = t.law().tail(2);
  CHECK(nagaev_ratio(t, 2) == doctest::Approx(t2 * t2).epsilon(1e-14));
  const RenewalTable even(ExcursionLaw(LawSpec::log_squared_even(), 128), 100);
  CHECK_THROWS_AS(nagaev_ratio(even, 51), InvalidArgument);
  CHECK_NOTHROW(nagaev_ratio(even, 50));
}

TEST_CASE("power-law nagaev ratio is bounded (reported only)") {
  const RenewalTable t(ExcursionLaw(LawSpec::power(2.0), 4096), 4000);
  for (const std::int64_t s : {100, 1000, 4000}) {
    const double r = nagaev_ratio(t, s);
    MESSAGE("gamma = 2 nagaev ratio at s = " << s << ": " << r);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
  }
}

TEST_CASE("dominant ratio law against direct summation") {
  const RenewalTable& t = small_table();
  const std::int64_t n = 4000;
  const double alpha = 0.5;
  const auto h = height_distribution(t, n);
  const std::vector<double> grid{0.01, 0.1, 0.5, 0.9, 1.0};
  const auto law = dominant_ratio_law(t, n, alpha, grid);
  REQUIRE(law.size() == grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double direct = 0.0;
    for (std::int64_t k = 0; k <= n; ++k) {
      const double lr = std::pow(static_cast<double>(k), alpha) - std::pow(static_cast<double>(n), alpha);
      if (lr <= std::log(grid[i])) direct += h.probs[static_cast<std::size_t>(k)];
    }
    CHECK(law[i] == doctest::Approx(direct).epsilon(1e-9));
    if (i > 0) CHECK(law[i] >= law[i - 1]);
    CHECK(law[i] >= 0.0);
    CHECK(law[i] <= 1.0 + 1e-12);
  }
  CHECK(law.back() >= 1.0 - t.law().tail(n) - 1e-12);
}

TEST_CASE("dominant ratio law past the table horizon uses the complement") {
  const RenewalTable big(ExcursionLaw(LawSpec::log_squared(), 20002), 20000);
  const RenewalTable small(ExcursionLaw(LawSpec::log_squared(), 20002), 2000);
  const std::vector<double> grid{0.5};
  for (const std::int64_t n : {12000, 20000}) {
    const double direct = dominant_ratio_law(big, n, 0.5, grid)[0];
    const double complement = dominant_ratio_law(small, n, 0.5, grid)[0];
    CHECK(complement == doctest::Approx(direct).epsilon(1e-9));
  }
  const std::vector<double> tiny{1e-30};
  CHECK_THROWS_AS(dominant_ratio_law(small, 20000, 0.5, tiny), OutOfHorizon);
}

TEST_CASE("dominant-term mass above 0.5 drifts toward 1 - alpha") {
  const RenewalTable t(ExcursionLaw(LawSpec::log_squared(), 100002), 100000);
  const std::vector<double> grid{0.5};
  double prev = 1.0;
  for (const std::int64_t n : {1000, 10000, 100000}) {
    const double above = 1.0 - dominant_ratio_law(t, n, 0.5, grid)[0];
    CHECK(std::abs(above - 0.5) < prev);
    prev = std::abs(above - 0.5);
  }
}

TEST_CASE("renewal budget is enforced") {
  RenewalBudget tight;
  tight.max_operations = 1e4;
  CHECK_THROWS_AS(RenewalTable(ExcursionLaw(LawSpec::log_squared(), 1024), 1000, tight), CapacityError);
}

}
