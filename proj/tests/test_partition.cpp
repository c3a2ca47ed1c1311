#include "dmdgp/partition.hpp"

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

using namespace dmdgp;

namespace {

// Naive list-of-sets oracle.
struct ListPartition {
  std::vector<std::set<int>> groups;

  explicit ListPartition(int k, int n) {
    for (int v = k + 1; v <= n; ++v) groups.push_back({v});
  }

  std::size_t locate(int v) const {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].count(v)) return g;
    }
    return groups.size();
  }

  void merge_interval(int a, int b) {
    std::set<int> merged;
    std::vector<std::set<int>> rest;
    for (auto& g : groups) {
      bool touches = false;
      for (int v = a; v <= b; ++v) {
        if (g.count(v)) {
          touches = true;
          break;
        }
      }
      if (touches) {
        merged.insert(g.begin(), g.end());
      } else {
        rest.push_back(std::move(g));
      }
    }
    rest.push_back(std::move(merged));
    groups = std::move(rest);
  }
};

}  // namespace

TEST_CASE("fresh partition is all singletons") {
  ComponentPartition p(2, 9);
  CHECK(p.component_count() == 7);
  CHECK(p.find(5) != p.find(6));
  CHECK(p.first(7) == 7);
  CHECK(p.last(7) == 7);
  CHECK_THROWS_AS((void)p.find(2), std::invalid_argument);
  CHECK_THROWS_AS((void)p.find(10), std::invalid_argument);
}

TEST_CASE("interval merges") {
  ComponentPartition p(2, 12);
  p.merge_interval(5, 9);
  CHECK(p.find(5) == p.find(9));
  CHECK(p.first(8) == 5);
  CHECK(p.last(6) == 9);
  CHECK(p.component_count() == 12 - 2 - 4);
  SUBCASE("merging again is a no-op") {
    const int before = p.component_count();
    p.merge_interval(5, 9);
    CHECK(p.component_count() == before);
  }
  SUBCASE("overlapping merge absorbs whole components") {
    p.merge_interval(8, 10);
    CHECK(p.find(5) == p.find(10));
    CHECK(p.first(10) == 5);
  }
}

TEST_CASE("merge rule for a pruning edge: components meeting [i+K, j]") {
  // K = 2, edge {1,6}: the merged component is exactly {3,...,6}.
  ComponentPartition p(2, 8);
  p.merge_interval(1 + 2, 6);
  CHECK(p.same(3, 6));
  CHECK(p.first(6) == 3);
  CHECK_FALSE(p.same(6, 7));
}

TEST_CASE("random merge scripts agree with the list oracle") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 3);
    const int n = k + 5 + static_cast<int>(rng() % 40);
    ComponentPartition p(k, n);
    ListPartition oracle(k, n);
    for (int op = 0; op < 25; ++op) {
      int a = k + 1 + static_cast<int>(rng() % (n - k));
      int b = k + 1 + static_cast<int>(rng() % (n - k));
      if (a > b) std::swap(a, b);
      p.merge_interval(a, b);
      oracle.merge_interval(a, b);

      CHECK(p.component_count() == static_cast<int>(oracle.groups.size()));
      for (int v = k + 1; v <= n; ++v) {
        for (int w = v; w <= n; ++w) {
          CHECK(p.same(v, w) == (oracle.locate(v) == oracle.locate(w)));
        }
        const auto& group = oracle.groups[oracle.locate(v)];
        CHECK(p.first(v) == *group.begin());
        CHECK(p.last(v) == *group.rbegin());
        CHECK(p.first(p.find(v)) <= v);
      }
    }
  }
}
