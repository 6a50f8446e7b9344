#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "cfl/multiindex.hpp"

using namespace cfl;

namespace {

// Brute-force oracle: every d-tuple with entries in [0, k] summing to k,
// found by an odometer walk; independent of the recursive enumeration.
std::vector<std::vector<int>> brute_force_layer(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  while (true) {
    int sum = 0;
    for (int e : cur) sum += e;
    if (sum == k) out.push_back(cur);
    int pos = d - 1;
    while (pos >= 0 && cur[pos] == k) cur[pos--] = 0;
    if (pos < 0) break;
    ++cur[pos];
  }
  return out;
}

}  // namespace

TEST_CASE("layer enumeration matches the small exhaustive cases") {
  auto l22 = enumerate_layer(2, 2);
  REQUIRE(l22.size() == 3);
  CHECK(l22[0] == MultiIndex{2, 0});
  CHECK(l22[1] == MultiIndex{1, 1});
  CHECK(l22[2] == MultiIndex{0, 2});

  auto l15 = enumerate_layer(1, 5);
  REQUIRE(l15.size() == 1);
  CHECK(l15[0] == MultiIndex{5});

  CHECK(enumerate_layer(3, 2).size() == brute_force_layer(3, 2).size());
  CHECK(enumerate_layer(3, 2).size() == 6);
}

TEST_CASE("layer enumeration agrees with the brute-force oracle as a set") {
  for (int d = 1; d <= 4; ++d)
    for (int k = 1; k <= 5; ++k) {
      auto fast = enumerate_layer(d, k);
      auto slow = brute_force_layer(d, k);
      REQUIRE(fast.size() == slow.size());
      std::set<std::vector<int>> seen;
      for (const auto& m : fast) {
        CHECK(m.order() == k);
        CHECK(seen.insert(m.entries()).second);  // no duplicates
      }
      for (const auto& s : slow) CHECK(seen.count(s) == 1);
    }
}

TEST_CASE("enumeration order is graded-lex descending and deterministic") {
  auto a = enumerate_layer(3, 4);
  auto b = enumerate_layer(3, 4);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(b[i - 1].entries() > b[i].entries());
}

TEST_CASE("layer sizes") {
  CHECK(layer_size(3, 2) == 6);
  CHECK(layer_size(2, 7) == 8);
  CHECK(layer_size(4, 3) == static_cast<std::int64_t>(brute_force_layer(4, 3).size()));
  CHECK(layer_size(4, 3) == 20);
  CHECK(layer_size(3, 0) == 1);
}

TEST_CASE("total dimension") {
  std::int64_t sum = 0;
  for (int k = 1; k <= 10; ++k) sum += layer_size(3, k);
  CHECK(total_dimension(3, 10) == sum);
  CHECK(total_dimension(3, 10) == 285);
  CHECK(total_dimension(1, 7) == 7);
  CHECK(total_dimension(4, 10) == 1000);
}

TEST_CASE("partition property: layer sizes sum to the total dimension") {
  for (int d = 1; d <= 5; ++d)
    for (int N = 1; N <= 12; ++N) {
      std::int64_t sum = 0;
      for (int k = 1; k <= N; ++k) sum += layer_size(d, k);
      CHECK(sum == total_dimension(d, N));
    }
}

TEST_CASE("basis positions") {
  GradedBasis basis(2, 3);
  CHECK(basis.total() == total_dimension(2, 3));
  CHECK(basis.position_of(MultiIndex{0, 1}) == 1);
  CHECK(basis.position_of(MultiIndex{1, 1}) == 3);
  CHECK_THROWS_AS(basis.position_of(MultiIndex{0, 4}), error);
  try {
    basis.position_of(MultiIndex{0, 4});
  } catch (const error& e) {
    CHECK(e.kind() == "not-found");
  }
}

TEST_CASE("round trip: position_of inverts the flat enumeration") {
  for (int d : {1, 2, 3, 4}) {
    GradedBasis basis(d, 6);
    for (int p = 0; p < basis.total(); ++p) CHECK(basis.position_of(basis.at(p)) == p);
    for (int k = 1; k <= 6; ++k) {
      auto layer = basis.layer(k);
      CHECK(static_cast<std::int64_t>(layer.size()) == layer_size(d, k));
      for (std::size_t i = 0; i < layer.size(); ++i)
        CHECK(basis.position_of(layer[i]) == basis.layer_offset(k) + static_cast<int>(i));
    }
  }
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(enumerate_layer(0, 2), error);
  CHECK_THROWS_AS(enumerate_layer(2, 0), error);
  CHECK_THROWS_AS(GradedBasis(0, 3), error);
}
