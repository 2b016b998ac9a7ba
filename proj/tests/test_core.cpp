#include <cmath>

#include "doctest.h"
#include "scalelaw/core.hpp"
#include "scalelaw/rng.hpp"

using namespace scalelaw;

TEST_SUITE("core") {

TEST_CASE("accuracy/error conversion") {
  CHECK(error_from_accuracy(0.6233) == doctest::Approx(0.3767).epsilon(1e-12));
  CHECK(error_from_accuracy(0.5) == 0.5);
  CHECK(error_from_accuracy(0.6831) == doctest::Approx(0.3169).epsilon(1e-12));
  CHECK(accuracy_from_error(0.3767) == doctest::Approx(0.6233).epsilon(1e-12));
  CHECK(error_from_accuracy(0.0) == 1.0);
  CHECK(error_from_accuracy(1.0) == 0.0);

  CHECK_THROWS_AS(error_from_accuracy(-0.001), Error);
  CHECK_THROWS_AS(error_from_accuracy(1.001), Error);
  CHECK_THROWS_AS(error_from_accuracy(std::nan("")), Error);
  CHECK_THROWS_AS(accuracy_from_error(1.2), Error);
}

TEST_CASE("conversion is an exact involution on the canonical grid") {
  rng::SplitMix64 g{12345};
  for (int i = 0; i < 2000; ++i) {
    const double x = g.next_unit();  // multiple of 2^-53
    CHECK(error_from_accuracy(accuracy_from_error(x)) == x);
  }
  for (double x : {0.0, 0.5, 1.0, 0.6233, 0.6478, 0.6599, 0.6831}) {
    CHECK(error_from_accuracy(accuracy_from_error(x)) == x);
  }
}

TEST_CASE("validate_points sorts ascending by n") {
  std::vector<ObservationPoint> pts{
      {1000000, std::nullopt, 0.3169, std::nullopt, 1},
      {20000, std::nullopt, 0.3767, 0.0084, 5},
      {200000, std::nullopt, 0.3401, 0.0009, 5},
      {100000, std::nullopt, 0.3522, 0.0054, 5},
  };
  const auto sorted = validate_points(pts);
  REQUIRE(sorted.size() == 4);
  CHECK(sorted[0].n == 20000);
  CHECK(sorted[1].n == 100000);
  CHECK(sorted[2].n == 200000);
  CHECK(sorted[3].n == 1000000);
  CHECK(sorted[0].error == doctest::Approx(0.3767));
}

TEST_CASE("validate_points is idempotent and keeps duplicates") {
  std::vector<ObservationPoint> pts{
      {100, std::nullopt, 0.4, std::nullopt, 1},
      {100, std::nullopt, 0.41, std::nullopt, 1},
      {50, std::nullopt, 0.45, std::nullopt, 1},
  };
  const auto once = validate_points(pts);
  const auto twice = validate_points(once);
  CHECK(once == twice);
  CHECK(once.size() == 3);
  CHECK(once[1].error == 0.4);   // stable order among equal n
  CHECK(once[2].error == 0.41);
}

TEST_CASE("validate_points rejects invariant violations") {
  CHECK_THROWS_WITH_AS(validate_points({}), "empty observation set", Error);
  CHECK_THROWS_WITH_AS(validate_points({{100, std::nullopt, 1.2, std::nullopt, 1}}),
                       "error out of range [0, 1]", Error);
  CHECK_THROWS_AS(validate_points({{0, std::nullopt, 0.4, std::nullopt, 1}}), Error);
  CHECK_THROWS_AS(validate_points({{100, 0, 0.4, std::nullopt, 1}}), Error);
  CHECK_THROWS_AS(validate_points({{100, std::nullopt, 0.4, -0.1, 1}}), Error);
  CHECK_THROWS_AS(validate_points({{100, std::nullopt, 0.4, std::nullopt, 0}}), Error);
  CHECK_THROWS_AS(validate_points({{100, std::nullopt, -0.01, std::nullopt, 1}}), Error);
}

TEST_CASE("param invariants") {
  CHECK_THROWS_AS(require_valid(DataLawParams{0.0, 0.1, 0.0}), Error);
  CHECK_THROWS_AS(require_valid(DataLawParams{0.5, 0.0, 0.0}), Error);
  CHECK_THROWS_AS(require_valid(DataLawParams{0.5, 0.1, -0.1}), Error);
  CHECK_NOTHROW(require_valid(DataLawParams{0.5, 0.1, 0.0}));
  CHECK_THROWS_AS(require_valid(JointLawParams{0.5, 0.1, 0.0, 0.1, 0.0}), Error);
  CHECK_NOTHROW(require_valid(JointLawParams{0.5, 0.1, 0.3, 0.2, 0.1}));
  CHECK_THROWS_AS(require_valid(EnvelopeParams{0.0, 0.1}), Error);
  CHECK_THROWS_AS(require_valid(EnvelopeParams{1.1, 0.1}), Error);
  CHECK_THROWS_AS(require_valid(EnvelopeParams{0.5, 0.0}), Error);
  CHECK_NOTHROW(require_valid(EnvelopeParams{0.5, 0.05}));
}

}  // TEST_SUITE
