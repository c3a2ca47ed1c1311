#include "dmdgp/bp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "dmdgp/geometry.hpp"
#include "dmdgp/realization.hpp"

namespace dmdgp {

namespace {

using Clock = std::chrono::steady_clock;

struct Frame {
  Point plus;
  Point minus;
  int next = 0;  // 0: try plus, 1: try minus, 2: exhausted
  bool tangent = false;
};

struct Search {
  const DmdgpInstance& g;
  int n;
  int k;
  double tol;
  int depth_limit;  // vertices beyond this are never placed
  bool use_pruning;
  BpLimits limits;

  Realization x;
  std::vector<Frame> frames;
  // Pruning predecessors per vertex: edges {h, i} with i - h > K.
  std::vector<std::vector<std::pair<int, double>>> prune_pred;
  std::vector<double> radii;
  BpStats stats;
  Clock::time_point start;
  std::uint64_t ticks = 0;

  Search(const DmdgpInstance& g, double tol, int depth_limit, bool use_pruning,
         BpLimits limits)
      : g(g),
        n(g.n()),
        k(g.dim()),
        tol(tol),
        depth_limit(depth_limit),
        use_pruning(use_pruning),
        limits(limits),
        x(g.n()),
        frames(g.n() + 1),
        prune_pred(g.n() + 1),
        radii(g.dim()) {
    if (use_pruning) {
      for (const Edge& e : g.edges()) {
        if (e.j - e.i > k) prune_pred[e.j].emplace_back(e.i, e.d);
      }
    }
  }

  bool out_of_budget() {
    if (limits.max_nodes && stats.nodes_expanded > limits.max_nodes) {
      return true;
    }
    if (limits.max_seconds > 0.0 && (++ticks & 0x3ff) == 0) {
      const double elapsed =
          std::chrono::duration<double>(Clock::now() - start).count();
      if (elapsed > limits.max_seconds) return true;
    }
    return false;
  }

  bool feasible(int i, const Point& cand) {
    for (const auto& [h, d] : prune_pred[i]) {
      const double res = std::abs((cand - x[h - 1]).norm() - d);
      if (res > tol * std::max(1.0, d)) return false;
    }
    return true;
  }

  void expand(int i) {
    auto& f = frames[i];
    auto sol = [&] {
      for (int l = 0; l < k; ++l) {
        radii[l] = g.distance(i - k + l, i);
      }
      try {
        return k_laterate(std::span<const Point>(&x[i - k - 1], k), radii,
                          tol * std::max(1.0, *std::max_element(radii.begin(),
                                                                radii.end())));
      } catch (const DegeneracyError&) {
        std::ostringstream msg;
        msg << "degenerate K-lateration at vertex " << i;
        throw DegeneracyError(msg.str());
      }
    }();
    f.plus = std::move(sol.plus);
    f.minus = std::move(sol.minus);
    f.tangent = sol.tangent;
    f.next = 0;
  }

  // Runs the DFS; calls leaf(x) at depth depth_limit and continues when it
  // returns true (enumeration) or stops when it returns false.
  template <typename Leaf>
  SolveStatus run(Leaf&& leaf) {
    start = Clock::now();
    auto clique = canonical_clique(g);
    for (int v = 0; v < k; ++v) x[v] = std::move(clique[v]);
    if (depth_limit <= k) {
      ++stats.solutions_found;
      leaf(x);
      return SolveStatus::success;
    }

    int i = k + 1;
    bool entering = true;
    while (i > k) {
      if (out_of_budget()) return SolveStatus::timeout;
      if (entering) {
        try {
          expand(i);
        } catch (const InfeasibleError&) {
          // No real sphere intersection along this path: both children die.
          ++stats.prunes;
          --i;
          entering = false;
          continue;
        }
      }
      auto& f = frames[i];
      bool descended = false;
      while (f.next < 2) {
        const bool take_plus = f.next == 0;
        ++f.next;
        if (!take_plus && f.tangent) continue;  // collapsed pair: one branch
        const Point& cand = take_plus ? f.plus : f.minus;
        if (!feasible(i, cand)) {
          ++stats.prunes;
          continue;
        }
        ++stats.nodes_expanded;
        x[i - 1] = cand;
        if (i == depth_limit) {
          ++stats.solutions_found;
          if (!leaf(x)) return SolveStatus::success;
          continue;  // keep scanning siblings
        }
        ++i;
        descended = true;
        entering = true;
        break;
      }
      if (!descended && f.next >= 2) {
        --i;
        entering = false;
      }
    }
    return SolveStatus::infeasible;
  }
};

void require_valid(const DmdgpInstance& g) {
  auto report = validate_dmdgp(g);
  if (!report.ok()) {
    throw ValidationError("instance is not structurally valid: " +
                          report.summary());
  }
}

}  // namespace

BpResult bp_solve(const DmdgpInstance& g, double tolerance, BpLimits limits) {
  require_valid(g);
  BpResult result;
  Search search(g, tolerance, g.n(), true, limits);
  try {
    result.status = search.run([&](const Realization& x) {
      result.x = x;
      return false;  // first solution only
    });
  } catch (const DegeneracyError& e) {
    result.status = SolveStatus::degenerate;
    result.message = e.what();
  } catch (const InfeasibleError& e) {
    result.status = SolveStatus::infeasible;
    result.message = e.what();
  }
  search.stats.wall_time =
      std::chrono::duration<double>(Clock::now() - search.start).count();
  result.stats = search.stats;
  if (result.status == SolveStatus::success) {
    result.mde = mde(result.x, g);
  } else if (result.message.empty()) {
    result.message = result.status == SolveStatus::timeout
                         ? "node or time budget exhausted"
                         : "search space exhausted without a solution";
  }
  return result;
}

BpEnumeration enumerate_all_solutions(const DmdgpInstance& g,
                                      double tolerance) {
  if (g.n() - g.dim() > 24) {
    throw std::invalid_argument(
        "enumerate_all_solutions: refusing instances with n - K > 24");
  }
  require_valid(g);
  BpEnumeration out;
  Search search(g, tolerance, g.n(), true, BpLimits{});
  search.run([&](const Realization& x) {
    out.solutions.push_back(x);
    return true;
  });
  search.stats.wall_time =
      std::chrono::duration<double>(Clock::now() - search.start).count();
  out.stats = search.stats;
  return out;
}

std::vector<double> distance_value_set(const DmdgpInstance& g, int i, int j,
                                       double dedup_tol) {
  if (g.n() - g.dim() > 24) {
    throw std::invalid_argument(
        "distance_value_set: refusing instances with n - K > 24");
  }
  if (i < 1 || j <= i || j > g.n()) {
    throw std::invalid_argument("distance_value_set: need 1 <= i < j <= n");
  }
  require_valid(g);
  std::vector<double> values;
  // Discretization-only tree, truncated at depth j.
  Search search(g, dedup_tol, j, false, BpLimits{});
  search.run([&](const Realization& x) {
    values.push_back((x[j - 1] - x[i - 1]).norm());
    return true;
  });
  std::sort(values.begin(), values.end());
  std::vector<double> distinct;
  for (double v : values) {
    if (distinct.empty() || v - distinct.back() > dedup_tol * v) {
      distinct.push_back(v);
    }
  }
  return distinct;
}

}  // namespace dmdgp
