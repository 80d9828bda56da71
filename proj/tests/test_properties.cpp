#include "checks.hpp"
#include "doctest.h"

using namespace xroads::checks;

namespace {

void require(const Outcome& o) {
  INFO(o.detail);
  CHECK(o.pass);
}

}  // namespace

TEST_SUITE("analytic properties") {
  TEST_CASE("closed form alpha=4 matches quadrature") { require(closed_form_alpha4()); }
  TEST_CASE("closed form alpha=2 matches quadrature") { require(closed_form_alpha2()); }
  TEST_CASE("derivatives match finite differences") { require(derivative_finite_difference()); }
  TEST_CASE("complete monotonicity sign pattern") { require(complete_monotonicity()); }
  TEST_CASE("transform range, L(0)=1, monotone in s") { require(laplace_basic_properties()); }
  TEST_CASE("m=1 reduces to the product of transforms") { require(m1_product_reduction()); }
  TEST_CASE("road relabelling symmetry") { require(road_swap_symmetry()); }
  TEST_CASE("coincident lanes add intensities") { require(multilane_additivity()); }
  TEST_CASE("outage monotone in every parameter") { require(outage_monotonicity()); }
  TEST_CASE("highway never worse than intersection") { require(highway_dominance()); }
  TEST_CASE("far from the intersection the second road vanishes") { require(far_field_limit()); }
  TEST_CASE("outage, success and throughput bookkeeping") { require(outage_bookkeeping()); }
}

TEST_SUITE("monte-carlo properties") {
  TEST_CASE("estimate independent of worker count") { require(mc_determinism()); }
  TEST_CASE("empty or silent field never fails") { require(mc_empty_field()); }
  TEST_CASE("Aloha thinning equals reduced intensity") { require(mc_thinning_equivalence()); }
  TEST_CASE("road truncation at 1000 m is harmless for alpha=4") { require(mc_truncation_sanity()); }
}
