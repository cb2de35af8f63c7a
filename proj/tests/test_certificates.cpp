#include <doctest.h>

#include "fogndt/certificates.hpp"
#include "support.hpp"

using namespace fogndt;
using fogndt::test::exact;

namespace {

VerifyGrid small_grid() {
  VerifyGrid g;
  g.max_ens = 2;
  g.max_users = 3;
  g.mu_step = Rational(1, 20);
  g.r_step = Rational(1, 4);
  return g;
}

}  // namespace

TEST_SUITE("certificates") {
  TEST_CASE("offline certificate passes a grid and reports the worst ratio") {
    std::vector<ExactNetworkConfig> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(exact(2, 2, 2, fogndt::Rational(i, 20), Rational(3, 2), Rational(0)));
    const auto report = offline_gap_certificate<Rational>(grid);
    CHECK(report.entries.size() == grid.size());
    CHECK(report.max_ratio > 1);
    CHECK(report.max_ratio < 2);
  }

  TEST_CASE("multiplicative certificate skips points outside its precondition") {
    std::vector<ExactNetworkConfig> grid{exact(2, 2, 4, "0", "1.5", "0.5"), exact(2, 2, 4, "0.3", "3", "0.5"),
                                         exact(2, 3, 3, "0.5", "1", "1")};
    const auto report = multiplicative_gap_certificate<Rational>(grid);
    CHECK(report.checked == 2);
    CHECK(report.skipped == 1);
    REQUIRE(report.min_slack);
    CHECK(*report.min_slack > 0);
  }

  TEST_CASE("bound ordering at a reference point") {
    const auto pt = evaluate_bound_ordering(exact(2, 2, 4, "0.25", "1.5", "0.5"));
    CHECK(pt.offline_achievable == 1);
    CHECK(pt.offline_lower_bound == 1);
    CHECK(pt.online_lower_bound_basic == Rational(11, 24));
    CHECK(pt.online_lower_bound_refined == Rational(5, 8));
    CHECK(pt.offline_ordered());
    CHECK(pt.basic_below_refined());
    CHECK(pt.refined_below_achievable());
  }

  TEST_CASE("grid enumeration") {
    const auto blocks = grid_blocks(small_grid());
    // Four (M, K) pairs with min(M,K) = 1 take r = 1/4, 1/2, 3/4; the two
    // with min(M,K) = 2 take seven steps up to 7/4.
    CHECK(blocks.size() == 4 * 3 + 2 * 7);
    CHECK(blocks.front().ens == 1);
    CHECK(blocks.front().users == 1);
    CHECK(blocks.front().r == Rational(1, 4));
    CHECK(unit_interval_grid(Rational(1, 4)).size() == 5);
    CHECK(unit_interval_grid(Rational(3, 10)).back() == Rational(9, 10));
  }

  TEST_CASE("malformed grids are rejected") {
    auto g = small_grid();
    g.max_ens = 0;
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.mu_step = 0;
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.r_step = -1;
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.churn_values.clear();
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.churn_values = {Rational(3, 2)};
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.library_factors = {0};
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
    g = small_grid();
    g.r_max = Rational(1, 10);
    CHECK_THROWS_AS(run_verification(g), std::invalid_argument);
  }

  TEST_CASE("verification counts every point and is independent of the thread count") {
    const auto g = small_grid();
    const auto serial = run_verification(g, 1);
    const auto parallel = run_verification(g, 3);
    const std::uint64_t mus = 21, churn = 4, factors = 2, blocks = 26;
    CHECK(serial.points == blocks * mus * churn * factors);
    REQUIRE(serial.certificates.size() == kCertificateNames.size());
    for (std::size_t i = 0; i < serial.certificates.size(); ++i) {
      const auto& a = serial.certificates[i];
      const auto& b = parallel.certificates[i];
      CHECK(a.name == kCertificateNames[i]);
      CHECK(a.checked == b.checked);
      CHECK(a.failed == b.failed);
      CHECK(a.skipped == b.skipped);
      CHECK(a.first_violation == b.first_violation);
    }
    const auto& ordering = serial.find("offline_bound_ordering");
    CHECK(ordering.checked == blocks * mus);
    CHECK(ordering.passed());
    CHECK(serial.find("offline_ratio_below_two").passed());
    CHECK(serial.find("offline_tightness").passed());
    CHECK(serial.find("online_low_cache_identity").passed());
    CHECK(serial.find("online_extended_bound").passed());
    CHECK(serial.find("online_full_caching_identity").passed());
    CHECK(serial.find("online_multiplicative_gap").passed());
    CHECK(serial.find("online_lower_bounds_ordered").passed());
    CHECK_THROWS_AS(serial.find("no_such_certificate"), std::out_of_range);
  }

  TEST_CASE("points beyond the precondition are skipped, not failed") {
    auto g = small_grid();
    g.max_ens = 2;
    g.max_users = 2;
    g.r_max = Rational(5, 2);
    const auto report = run_verification(g);
    const auto& mult = report.find("online_multiplicative_gap");
    CHECK(mult.skipped > 0);
    CHECK(mult.passed());
  }

  TEST_CASE("a failing certificate records its first violation in grid order") {
    VerifyGrid g;
    g.max_ens = 2;
    g.max_users = 2;
    g.mu_step = Rational(1, 100);
    g.churn_values = {Rational(0)};
    g.library_factors = {1};
    const auto report = run_verification(g);
    const auto& mid = report.find("online_intermediate_bound");
    CHECK_FALSE(mid.passed());
    CHECK(mid.first_violation == "M=2 K=2 N=2 mu=0.47 r=0.1 p=0: difference 9/2170 > 0");
    CHECK_FALSE(report.all_passed());
  }
}
