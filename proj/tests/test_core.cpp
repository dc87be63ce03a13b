#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>

#include "ccp/core.hpp"

using namespace ccp;

namespace {

Example small_example() {
  Example e;
  e.id = "q1";
  e.candidates = {{0, {1.0, 2.0}}, {1, {0.5, 0.1}}, {2, {3.0, 1.0}}};
  e.admissible = {0, 1};
  e.answers = {1};
  return e;
}

Dataset small_dataset() {
  Dataset d;
  d.layer_count = 2;
  d.examples = {small_example()};
  return d;
}

}  // namespace

TEST_CASE("tolerance accepts the open interval only") {
  CHECK(Tolerance(0.5).epsilon() == 0.5);
  CHECK(Tolerance(0.001).epsilon() == 0.001);
  CHECK_THROWS_AS(Tolerance(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Tolerance(1.0), std::invalid_argument);
  CHECK_THROWS_AS(Tolerance(-0.2), std::invalid_argument);
  CHECK_THROWS_AS(Tolerance(1.7), std::invalid_argument);
  CHECK_THROWS_AS(Tolerance(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("well-formed dataset has no violations") {
  CHECK(validate_dataset(small_dataset()).empty());
}

TEST_CASE("answer outside admissible is flagged") {
  Dataset d = small_dataset();
  d.examples[0].answers = {2};
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("q1") != std::string::npos);
  CHECK(v[0].find("answer") != std::string::npos);
}

TEST_CASE("empty answers are flagged") {
  Dataset d = small_dataset();
  d.examples[0].answers.clear();
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("answers") != std::string::npos);
}

TEST_CASE("score length mismatch is flagged") {
  Dataset d = small_dataset();
  d.examples[0].candidates[1].scores.push_back(4.0);
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("expected 2") != std::string::npos);
}

TEST_CASE("admissible label missing from candidates is flagged") {
  Dataset d = small_dataset();
  d.examples[0].admissible.push_back(9);
  const auto v = validate_dataset(d);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("admissible label 9") != std::string::npos);
}

TEST_CASE("duplicates are flagged everywhere they can occur") {
  Dataset d = small_dataset();
  d.examples.push_back(small_example());  // duplicate id
  d.examples[1].candidates.push_back({0, {1.0, 1.0}});
  d.examples[1].admissible = {0, 0};
  d.examples[1].answers = {0, 0};
  const auto v = validate_dataset(d);
  CHECK(v.size() == 4);
}

TEST_CASE("non-finite scores and bad layer counts are flagged") {
  Dataset d = small_dataset();
  d.examples[0].candidates[0].scores[1] = std::numeric_limits<double>::infinity();
  CHECK(validate_dataset(d).size() == 1);

  Dataset empty_layers = small_dataset();
  empty_layers.layer_count = 0;
  const auto v = validate_dataset(empty_layers);
  CHECK(!v.empty());
  CHECK(v[0].find("layer_count") != std::string::npos);
}
