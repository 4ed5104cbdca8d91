#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "mgl/error.hpp"
#include "mgl/verify.hpp"

using namespace mgl;

namespace {

// three-term recursion with the wrong sign on the P_{n-2} term
double plus_sign_legendre(int d, int n, double t) {
  if (n == 0) return 1.0;
  double prev = 1.0, cur = t;
  for (int k = 2; k <= n; ++k) {
    const double next = ((2.0 * k + d - 4) * t * cur + (k - 1.0) * prev) / (k + d - 3.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

const verify::CheckResult* find(const verify::SuiteReport& r, const std::string& name) {
  const auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const auto& c) { return c.name == name; });
  return it == r.checks.end() ? nullptr : &*it;
}

}  // namespace

TEST_CASE("orthopoly suite passes") {
  const auto r = verify::verify_orthopoly();
  for (const auto& c : r.checks) {
    CAPTURE(verify::summary_line(c));
    CHECK(c.passed);
    CHECK(c.cases > 0);
  }
  CHECK(r.passed());
}

TEST_CASE("a sign error in the recursion is caught") {
  const auto r = verify::verify_orthopoly(plus_sign_legendre);
  CHECK_FALSE(r.passed());
  const auto* sup = find(r, "legendre sup norm <= 1");
  REQUIRE(sup != nullptr);
  CHECK_FALSE(sup->passed);
  CHECK(sup->failures > 0);
  CHECK_FALSE(sup->counterexample.is_null());
  CHECK(sup->counterexample.contains("t"));
}

TEST_CASE("geometry and changes-slowly suites pass") {
  for (const auto& r : {verify::verify_geometry(), verify::verify_changes_slowly(200)}) {
    for (const auto& c : r.checks) {
      CAPTURE(verify::summary_line(c));
      CHECK(c.passed);
    }
  }
}

TEST_CASE("suite names") {
  CHECK(verify::verify_lemmas("orthopoly").size() == 1);
  CHECK_THROWS_AS(verify::verify_lemmas("nonsense"), DomainError);
  const auto j = verify::to_json(verify::verify_geometry());
  CHECK(j["suite"] == "geometry");
  CHECK(j["checks"].is_array());
}
