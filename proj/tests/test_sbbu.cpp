#include "dmdgp/sbbu.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "dmdgp/bp.hpp"
#include "dmdgp/genio.hpp"
#include "dmdgp/geometry.hpp"
#include "dmdgp/realization.hpp"
#include "test_util.hpp"

using namespace dmdgp;
using test::max_coord_dist;

namespace {

bool member_of(const Realization& x, const std::vector<Realization>& set,
               double tol) {
  for (const auto& y : set) {
    if (max_coord_dist(x, y) < tol) return true;
  }
  return false;
}

Realization all_minus_realization(const DmdgpInstance& g) {
  SbbuState state(g);
  initialize_positions(state, g, g.n());
  return state.x;
}

}  // namespace

TEST_CASE("initialize_positions grows a valid chain") {
  auto synthetic = generate_synthetic(12, 3, 1e-9, 8);
  const auto& g = synthetic.instance;
  SbbuState state(g);
  SUBCASE("full growth satisfies every discretization edge") {
    initialize_positions(state, g, g.n());
    CHECK(state.t == g.n());
    auto part = classify_edges(g);
    CHECK(max_relative_residual(state.x, part.discretization) < 1e-9);
    CHECK(mde(state.x, g) < 1e-9);
  }
  SUBCASE("second call never touches existing positions") {
    initialize_positions(state, g, 7);
    Realization snapshot(state.x.begin(), state.x.begin() + 7);
    initialize_positions(state, g, 12);
    for (int v = 0; v < 7; ++v) {
      CHECK(state.x[v] == snapshot[v]);  // bitwise identical
    }
    CHECK(state.t == 12);
  }
  SUBCASE("shrinking j is a no-op") {
    initialize_positions(state, g, 10);
    initialize_positions(state, g, 4);
    CHECK(state.t == 10);
  }
}

TEST_CASE("solve_subproblem handles a binary choice") {
  // One pruning edge with |S^ij| = 1: exactly two candidates are scanned.
  auto synthetic = generate_synthetic(7, 3, 1e-9, 14);
  auto& g = synthetic.instance;
  const auto& y = synthetic.ground_truth;
  g.add_edge(2, 7, (y[1] - y[6]).norm());
  g.add_edge(1, 6, (y[0] - y[5]).norm());
  // order: {1,6} then {2,7}; after {1,6} merges [4,6], the second
  // subproblem only frees vertex 7.
  auto result = sbbu_solve(g, SbbuOptions{1e-7, 62});
  REQUIRE(result.status == SolveStatus::success);
  REQUIRE(result.stats.trace.size() == 2);
  const auto& second = result.stats.trace[1];
  CHECK(second.i == 2);
  CHECK(second.j == 7);
  CHECK(second.s_size == 1);
  CHECK(second.candidates == 2);
  CHECK(second.s_vertices == std::vector<int>{7});
}

TEST_CASE("solve_subproblem keeps every prior constraint satisfied") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 15; ++trial) {
    const int k = 2 + static_cast<int>(rng() % 2);
    const int n = k + 4 + static_cast<int>(rng() % 10);
    const double cutoff = 1.5 + 0.002 * static_cast<double>(rng() % 1000);
    auto synthetic = generate_synthetic(n, k, cutoff, 900 + trial);
    const auto& g = synthetic.instance;
    auto order = order_pruning_edges(classify_edges(g));
    SbbuState state(g);
    initialize_positions(state, g, k);
    std::vector<Edge> handled;
    for (const Edge& e : order) {
      if (state.partition.same(e.i + k, e.j)) {
        handled.push_back(e);
        continue;
      }
      initialize_positions(state, g, e.j);
      solve_subproblem(state, g, e, SbbuOptions{1e-7, 62});
      handled.push_back(e);
      // Lemma-style prefix validity: discretization plus all handled
      // pruning edges restricted to initialized vertices.
      auto part = classify_edges(g);
      CHECK(max_relative_residual(state.x, part.discretization, state.t) <
            1e-8);
      CHECK(max_relative_residual(state.x, handled, state.t) < 1e-8);
    }
  }
}

TEST_CASE("four positions of the fourth vertex arise from one path") {
  // K = 2 chain of four vertices: the tree has four leaves, and the
  // leftmost one generates every fourth-vertex position through its two
  // induced reflections.
  auto synthetic = generate_synthetic(4, 2, 1e-9, 29);
  const auto& g = synthetic.instance;
  auto out = enumerate_all_solutions(g, 1e-7);
  REQUIRE(out.solutions.size() == 4);
  const Realization& x = out.solutions.front();
  const Point a = x[3];
  auto r3 = build_reflector(std::span<const Point>(&x[0], 2));
  auto r4 = build_reflector(std::span<const Point>(&x[1], 2));
  std::vector<Point> generated{a, reflect(r4, a), reflect(r3, a),
                               reflect(r3, reflect(r4, a))};
  for (const auto& sol : out.solutions) {
    bool found = false;
    for (const Point& cand : generated) {
      if ((cand - sol[3]).norm() < 1e-9) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("sbbu_solve") {
  SUBCASE("no pruning edges: pure growth, zero work") {
    auto synthetic = generate_synthetic(15, 3, 1e-9, 33);
    auto result = sbbu_solve(synthetic.instance);
    REQUIRE(result.status == SolveStatus::success);
    CHECK(result.stats.work == 0);
    CHECK(result.stats.max_work == 0);
    CHECK(result.mde < 1e-9);
  }
  SUBCASE("single edge {1,n}: one subproblem frees everything") {
    const int n = 11;
    const int k = 3;
    auto synthetic = generate_synthetic(n, k, 1e-9, 35);
    auto& g = synthetic.instance;
    const auto& y = synthetic.ground_truth;
    g.add_edge(1, n, (y[0] - y[n - 1]).norm());
    auto result = sbbu_solve(g, SbbuOptions{1e-7, 62});
    REQUIRE(result.status == SolveStatus::success);
    REQUIRE(result.stats.trace.size() == 1);
    CHECK(result.stats.trace[0].s_size == n - k - 1);
    CHECK(result.stats.work == (std::uint64_t{1} << (n - k - 1)));
    CHECK(result.stats.max_work == result.stats.work);
    auto enumerated = enumerate_all_solutions(g, 1e-7);
    REQUIRE(enumerated.solutions.size() == 2);
    CHECK(member_of(result.x, enumerated.solutions, 1e-6));
  }
  SUBCASE("output lies in the enumerated solution set") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 12; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 2);
      const int n = k + 4 + static_cast<int>(rng() % 12);
      const double cutoff = 1.0 + 0.003 * static_cast<double>(rng() % 1000);
      auto synthetic = generate_synthetic(n, k, cutoff, 700 + trial);
      auto result = sbbu_solve(synthetic.instance, SbbuOptions{1e-7, 62});
      REQUIRE(result.status == SolveStatus::success);
      CHECK(result.mde < 1e-7);
      auto enumerated = enumerate_all_solutions(synthetic.instance, 1e-7);
      CHECK(member_of(result.x, enumerated.solutions, 1e-6));
    }
  }
  SUBCASE("work identity and trace consistency") {
    auto synthetic = generate_synthetic(18, 3, 2.5, 71);
    auto result = sbbu_solve(synthetic.instance, SbbuOptions{1e-7, 62});
    REQUIRE(result.status == SolveStatus::success);
    std::uint64_t work = 0;
    std::uint64_t max_work = 0;
    for (const auto& entry : result.stats.trace) {
      if (entry.skipped) {
        CHECK(entry.s_size == 0);
        CHECK(entry.residual < 1e-7);
        continue;
      }
      CHECK(entry.candidates == (std::uint64_t{1} << entry.s_size));
      work += entry.candidates;
      max_work = std::max(max_work, entry.candidates);
    }
    CHECK(result.stats.work == work);
    CHECK(result.stats.max_work == max_work);
    CHECK(work >= max_work);
    CHECK(max_work >= 2);
  }
  SUBCASE("partition-derived symmetry vertices match the brute force") {
    std::mt19937_64 rng(73);
    for (int trial = 0; trial < 10; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 2);
      const int n = k + 5 + static_cast<int>(rng() % 10);
      auto synthetic = generate_synthetic(n, k, 3.0, 800 + trial);
      const auto& g = synthetic.instance;
      auto result = sbbu_solve(g, SbbuOptions{1e-7, 62});
      REQUIRE(result.status == SolveStatus::success);
      auto order = order_pruning_edges(classify_edges(g));
      for (const auto& entry : result.stats.trace) {
        if (entry.skipped) continue;
        const Edge e{entry.i, entry.j, g.distance(entry.i, entry.j)};
        auto preceding = preceding_edges(order, e);
        CHECK(entry.s_vertices == local_symmetry_vertices(g, e, preceding));
      }
    }
  }
  SUBCASE("unique matching composition on generic data") {
    auto synthetic = generate_synthetic(16, 3, 3.0, 81);
    const auto& g = synthetic.instance;
    const double tol = 1e-7;
    auto result = sbbu_solve(g, SbbuOptions{tol, 62});
    REQUIRE(result.status == SolveStatus::success);
    for (const auto& entry : result.stats.trace) {
      if (entry.skipped || entry.candidates < 2) continue;
      const double d = g.distance(entry.i, entry.j);
      CHECK(entry.residual <= tol * std::max(1.0, d));
      CHECK(entry.second_residual > 10 * tol * std::max(1.0, d));
      CHECK_FALSE(entry.tie);
    }
  }
  SUBCASE("an inconsistent pruning distance fails honestly") {
    auto synthetic = generate_synthetic(9, 3, 1e-9, 91);
    auto& g = synthetic.instance;
    const auto& y = synthetic.ground_truth;
    g.add_edge(1, 9, (y[0] - y[8]).norm() + 0.37);
    auto result = sbbu_solve(g);
    CHECK(result.status == SolveStatus::failure);
    CHECK_FALSE(result.message.empty());
  }
}

TEST_CASE("solve_subproblem preconditions") {
  auto synthetic = generate_synthetic(9, 3, 1e-9, 95);
  auto& g = synthetic.instance;
  const auto& y = synthetic.ground_truth;
  g.add_edge(1, 9, (y[0] - y[8]).norm());
  const Edge e{1, 9, g.distance(1, 9)};
  SUBCASE("positions must reach j") {
    SbbuState state(g);
    initialize_positions(state, g, 5);
    CHECK_THROWS_AS(solve_subproblem(state, g, e), std::invalid_argument);
  }
  SUBCASE("endpoints must be in different components") {
    SbbuState state(g);
    initialize_positions(state, g, 9);
    state.partition.merge_interval(4, 9);
    CHECK_THROWS_AS(solve_subproblem(state, g, e), std::invalid_argument);
  }
  SUBCASE("non-pruning edges are rejected") {
    SbbuState state(g);
    initialize_positions(state, g, 9);
    CHECK_THROWS_AS(solve_subproblem(state, g, Edge{2, 4, g.distance(2, 4)}),
                    std::invalid_argument);
  }
}

TEST_CASE("sbbu_conceptual_solve") {
  SUBCASE("no pruning edges returns x0 unchanged") {
    auto synthetic = generate_synthetic(10, 3, 1e-9, 101);
    auto x0 = all_minus_realization(synthetic.instance);
    auto result = sbbu_conceptual_solve(synthetic.instance, x0, 1e-7);
    REQUIRE(result.status == SolveStatus::success);
    CHECK(max_coord_dist(result.x, x0) == 0.0);
    CHECK(result.stats.work == 0);
  }
  SUBCASE("agrees with the practical solver on the solution set") {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 8; ++trial) {
      const int k = 2 + static_cast<int>(rng() % 2);
      const int n = k + 4 + static_cast<int>(rng() % 8);
      const double cutoff = 1.5 + 0.002 * static_cast<double>(rng() % 1000);
      auto synthetic = generate_synthetic(n, k, cutoff, 1100 + trial);
      const auto& g = synthetic.instance;
      auto x0 = all_minus_realization(g);
      auto conceptual = sbbu_conceptual_solve(g, x0, 1e-7);
      REQUIRE(conceptual.status == SolveStatus::success);
      CHECK(conceptual.mde < 1e-8);
      auto practical = sbbu_solve(g, SbbuOptions{1e-7, 62});
      REQUIRE(practical.status == SolveStatus::success);
      auto enumerated = enumerate_all_solutions(g, 1e-7);
      CHECK(member_of(conceptual.x, enumerated.solutions, 1e-6));
      CHECK(member_of(practical.x, enumerated.solutions, 1e-6));
    }
  }
  SUBCASE("flips on global symmetry vertices keep the realization valid") {
    std::mt19937_64 rng(107);
    auto synthetic = generate_synthetic(12, 2, 2.5, 113);
    const auto& g = synthetic.instance;
    auto result = sbbu_solve(g, SbbuOptions{1e-7, 62});
    REQUIRE(result.status == SolveStatus::success);
    const auto s = symmetry_vertices(g);
    const int k = g.dim();
    std::vector<HyperplaneReflector> base(g.n() + 1);
    for (int v = k + 1; v <= g.n(); ++v) {
      base[v] =
          build_reflector(std::span<const Point>(&result.x[v - k - 1], k));
    }
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<int> chosen;
      for (int v : s) {
        if (rng() % 2) chosen.push_back(v);
      }
      Realization flipped = result.x;
      for (int v = 1; v <= g.n(); ++v) {
        for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
          if (*it <= v) reflect_in_place(base[*it], flipped[v - 1]);
        }
      }
      CHECK(max_relative_residual(flipped, g.edges()) < 1e-8);
    }
  }
  SUBCASE("guard refuses large instances") {
    auto synthetic = generate_synthetic(30, 3, 1e-9, 115);
    auto x0 = all_minus_realization(synthetic.instance);
    CHECK_THROWS_AS(
        (void)sbbu_conceptual_solve(synthetic.instance, x0, 1e-7),
        std::invalid_argument);
  }
}
