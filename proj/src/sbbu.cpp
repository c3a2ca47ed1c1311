#include "dmdgp/sbbu.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>

#include "dmdgp/geometry.hpp"
#include "dmdgp/realization.hpp"

namespace dmdgp {

namespace {

using Clock = std::chrono::steady_clock;

double edge_residual(const Realization& x, const Edge& e) {
  return std::abs((x[e.i - 1] - x[e.j - 1]).norm() - e.d);
}

// Lexicographically smaller bit string s_1 s_2 ... s_k, bit b of the masks
// holding s_{b+1}.
bool lex_less(std::uint64_t a, std::uint64_t b, int bits) {
  for (int p = 0; p < bits; ++p) {
    const int ba = static_cast<int>((a >> p) & 1u);
    const int bb = static_cast<int>((b >> p) & 1u);
    if (ba != bb) return ba < bb;
  }
  return false;
}

}  // namespace

void initialize_positions(SbbuState& state, const DmdgpInstance& g, int j) {
  const int k = g.dim();
  if (j < 1 || j > g.n()) {
    throw std::invalid_argument("initialize_positions: j out of range");
  }
  if (state.t >= j) return;
  if (state.t == 0) {
    auto clique = canonical_clique(g);
    for (int v = 0; v < k; ++v) state.x[v] = std::move(clique[v]);
    state.t = k;
  }
  std::vector<double> radii(k);
  for (int i = state.t + 1; i <= j; ++i) {
    double rmax = 0.0;
    for (int l = 0; l < k; ++l) {
      if (!g.has_edge(i - k + l, i)) {
        std::ostringstream msg;
        msg << "missing discretization distance {" << i - k + l << "," << i
            << "}";
        throw ValidationError(msg.str());
      }
      radii[l] = g.distance(i - k + l, i);
      rmax = std::max(rmax, radii[l]);
    }
    try {
      auto sol = k_laterate(std::span<const Point>(&state.x[i - k - 1], k),
                            radii, 1e-6 * std::max(1.0, rmax));
      state.x[i - 1] = std::move(sol.minus);
    } catch (const DegeneracyError&) {
      std::ostringstream msg;
      msg << "degenerate predecessors at vertex " << i;
      throw DegeneracyError(msg.str());
    }
  }
  state.t = std::max(state.t, j);
}

void solve_subproblem(SbbuState& state, const DmdgpInstance& g, const Edge& e,
                      const SbbuOptions& options) {
  const int k = g.dim();
  const int i = e.i;
  const int j = e.j;
  if (j - i <= k) {
    throw std::invalid_argument("solve_subproblem: not a pruning edge");
  }
  if (state.t < j) {
    throw std::invalid_argument(
        "solve_subproblem: positions 1..j must be initialized");
  }
  const int c0 = state.partition.find(i + k);
  if (c0 == state.partition.find(j)) {
    throw std::invalid_argument(
        "solve_subproblem: endpoints already share a component");
  }

  // S^ij is the set of first vertices of the components (other than the one
  // holding v_{i+K}) met while walking v_{i+K+1}..v_j. Components are
  // intervals, so one find per component suffices.
  std::vector<int> sym;
  for (int l = i + k + 1; l <= j;) {
    const int root = state.partition.find(l);
    if (root != c0) sym.push_back(state.partition.first(root));
    l = state.partition.last(root) + 1;
  }
  const int bits = static_cast<int>(sym.size());
  if (bits > options.max_symmetry_bits) {
    std::ostringstream msg;
    msg << "subproblem {" << i << "," << j << "}: " << bits
        << " symmetry vertices exceed the tractable scan limit";
    throw SubproblemFailure(msg.str(), e, std::numeric_limits<double>::infinity(),
                            bits);
  }

  std::vector<HyperplaneReflector> reflectors(bits);
  for (int b = 0; b < bits; ++b) {
    const int v = sym[b];
    try {
      reflectors[b] =
          build_reflector(std::span<const Point>(&state.x[v - k - 1], k));
    } catch (const DegeneracyError&) {
      std::ostringstream msg;
      msg << "degenerate reflector at vertex " << v;
      throw DegeneracyError(msg.str());
    }
  }

  // Exhaustive Gray-code scan over the compositions applied to x_j. The
  // suffix cache holds partial compositions: suffix[b] applies the selected
  // reflectors with index >= b to x_j, so flipping bit p only recomputes
  // suffix[p..0]; the low bit flips most often, giving O(1) amortized
  // reflector applications per candidate.
  const Point& xi = state.x[i - 1];
  const std::uint64_t total = bits >= 64 ? 0 : (std::uint64_t{1} << bits);
  std::vector<Point> suffix(bits + 1);
  suffix[bits] = state.x[j - 1];
  for (int b = bits - 1; b >= 0; --b) suffix[b] = suffix[bits];

  std::uint64_t mask = 0;
  std::uint64_t best_mask = 0;
  double best = std::abs((xi - suffix[0]).norm() - e.d);
  double second = std::numeric_limits<double>::infinity();
  bool tie = false;
  for (std::uint64_t c = 1; c < total; ++c) {
    const int p = std::countr_zero(c);
    mask ^= std::uint64_t{1} << p;
    for (int b = p; b >= 0; --b) {
      if ((mask >> b) & 1u) {
        suffix[b] = reflect(reflectors[b], suffix[b + 1]);
      } else {
        suffix[b] = suffix[b + 1];
      }
    }
    const double res = std::abs((xi - suffix[0]).norm() - e.d);
    if (res < best) {
      second = best;
      best = res;
      best_mask = mask;
      tie = false;
    } else {
      if (res == best) {
        tie = true;
        if (lex_less(mask, best_mask, bits)) best_mask = mask;
      }
      second = std::min(second, res);
    }
  }

  SbbuEdgeTrace entry;
  entry.i = i;
  entry.j = j;
  entry.s_size = bits;
  entry.s_vertices = sym;
  entry.candidates = total;
  entry.residual = best;
  entry.second_residual = second;
  entry.tie = tie;

  if (best > options.tolerance * std::max(1.0, e.d)) {
    state.stats.trace.push_back(std::move(entry));
    std::ostringstream msg;
    msg << "subproblem {" << i << "," << j << "}: best residual " << best
        << " over " << total << " candidates exceeds tolerance";
    throw SubproblemFailure(msg.str(), e, best, bits);
  }

  // Apply the winning composition to every position past the hinge, the
  // reflector of largest index innermost. The reflectors stay fixed to the
  // pre-update positions.
  std::vector<int> selected;
  for (int b = 0; b < bits; ++b) {
    if ((best_mask >> b) & 1u) selected.push_back(b);
  }
  for (int l = i + k + 1; l <= state.t; ++l) {
    for (auto it = selected.rbegin(); it != selected.rend(); ++it) {
      if (sym[*it] <= l) reflect_in_place(reflectors[*it], state.x[l - 1]);
    }
  }

  state.partition.merge_interval(i + k, j);
  std::uint64_t w = state.stats.work + total;
  state.stats.work = w < state.stats.work
                         ? std::numeric_limits<std::uint64_t>::max()
                         : w;
  state.stats.max_work = std::max(state.stats.max_work, total);
  state.stats.trace.push_back(std::move(entry));
}

SbbuResult sbbu_solve(const DmdgpInstance& g, const SbbuOptions& options) {
  SbbuResult result;
  const auto start = Clock::now();
  {
    auto report = validate_dmdgp(g);
    if (!report.ok()) {
      throw ValidationError("instance is not structurally valid: " +
                            report.summary());
    }
  }
  SbbuState state(g);
  const int k = g.dim();
  auto order = order_pruning_edges(classify_edges(g));
  try {
    initialize_positions(state, g, k);
    for (const Edge& e : order) {
      if (state.partition.same(e.i + k, e.j)) {
        // Implicitly solved; record the residual instead of assuming it.
        SbbuEdgeTrace entry;
        entry.i = e.i;
        entry.j = e.j;
        entry.skipped = true;
        entry.residual = edge_residual(state.x, e);
        const bool violated =
            entry.residual > options.tolerance * std::max(1.0, e.d);
        state.stats.trace.push_back(std::move(entry));
        if (violated) {
          result.status = SolveStatus::failure;
          std::ostringstream msg;
          msg << "skipped edge {" << e.i << "," << e.j
              << "} violates its distance";
          result.message = msg.str();
          result.stats = std::move(state.stats);
          result.stats.wall_time =
              std::chrono::duration<double>(Clock::now() - start).count();
          return result;
        }
        continue;
      }
      initialize_positions(state, g, e.j);
      solve_subproblem(state, g, e, options);
    }
    if (state.t < g.n()) {
      initialize_positions(state, g, g.n());
    }
    result.x = std::move(state.x);
    result.mde = mde(result.x, g);
    result.status = result.mde <= options.tolerance ? SolveStatus::success
                                                    : SolveStatus::failure;
    if (result.status == SolveStatus::failure) {
      result.message = "final realization exceeds the MDE tolerance";
    }
  } catch (const SubproblemFailure& f) {
    result.status = SolveStatus::failure;
    result.message = f.what();
  } catch (const DegeneracyError& d) {
    result.status = SolveStatus::degenerate;
    result.message = d.what();
  } catch (const InfeasibleError& inf) {
    result.status = SolveStatus::infeasible;
    result.message = inf.what();
  }
  result.stats = std::move(state.stats);
  result.stats.wall_time =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

SbbuResult sbbu_conceptual_solve(const DmdgpInstance& g, const Realization& x0,
                                 double tolerance) {
  const int n = g.n();
  const int k = g.dim();
  if (n - k > 20) {
    throw std::invalid_argument(
        "sbbu_conceptual_solve: refusing instances with n - K > 20");
  }
  if (static_cast<int>(x0.size()) < n) {
    throw std::invalid_argument("sbbu_conceptual_solve: x0 must cover 1..n");
  }
  auto part = classify_edges(g);
  if (max_relative_residual(x0, part.discretization) > tolerance) {
    throw std::invalid_argument(
        "sbbu_conceptual_solve: x0 violates discretization distances");
  }

  SbbuResult result;
  const auto start = Clock::now();

  // Reflectors are built once from x0; Proposition-style commutation lets
  // every x(s) be expressed through them alone.
  std::vector<HyperplaneReflector> base(n + 1);
  for (int v = k + 1; v <= n; ++v) {
    base[v] = build_reflector(std::span<const Point>(&x0[v - k - 1], k));
  }

  std::vector<std::uint8_t> s(n + 1, 0);  // s[v] for vertex v in K+1..n

  // Position of vertex v under a binary vector: reflectors of set vertices
  // up to v, the one of largest index applied first (innermost).
  auto position_of = [&](int v, const std::vector<std::uint8_t>& bits) {
    Point p = x0[v - 1];
    for (int w = std::min(v, n); w >= k + 1; --w) {
      if (bits[w]) reflect_in_place(base[w], p);
    }
    return p;
  };

  auto order = order_pruning_edges(part);
  for (const Edge& e : order) {
    const auto preceding = preceding_edges(order, e);
    const auto sym = local_symmetry_vertices(g, e, preceding);
    SbbuEdgeTrace entry;
    entry.i = e.i;
    entry.j = e.j;
    entry.s_size = static_cast<int>(sym.size());
    entry.s_vertices = sym;
    if (sym.empty()) {
      entry.skipped = true;
      const Point pi = position_of(e.i, s);
      const Point pj = position_of(e.j, s);
      entry.residual = std::abs((pi - pj).norm() - e.d);
      const bool violated = entry.residual > tolerance * std::max(1.0, e.d);
      result.stats.trace.push_back(std::move(entry));
      if (violated) {
        result.status = SolveStatus::failure;
        result.message = "implicitly solved edge violates its distance";
        result.stats.wall_time =
            std::chrono::duration<double>(Clock::now() - start).count();
        return result;
      }
      continue;
    }

    // Exhaustive search over the free components of s (those whose vertex
    // lies in S^ij); all other components stay fixed.
    const int bits = static_cast<int>(sym.size());
    const std::uint64_t total = std::uint64_t{1} << bits;
    const Point pi = position_of(e.i, s);  // free bits all exceed i
    std::vector<std::uint8_t> trial = s;
    std::vector<std::uint8_t> best_bits = s;
    double best = std::numeric_limits<double>::infinity();
    double second = std::numeric_limits<double>::infinity();
    for (std::uint64_t c = 0; c < total; ++c) {
      for (int b = 0; b < bits; ++b) {
        trial[sym[b]] = static_cast<std::uint8_t>((c >> b) & 1u);
      }
      const Point pj = position_of(e.j, trial);
      const double res = std::abs((pi - pj).norm() - e.d);
      if (res < best) {
        second = best;
        best = res;
        best_bits = trial;
      } else {
        second = std::min(second, res);
      }
    }
    entry.candidates = total;
    entry.residual = best;
    entry.second_residual = second;
    result.stats.trace.push_back(std::move(entry));
    if (best > tolerance * std::max(1.0, e.d)) {
      result.status = SolveStatus::failure;
      std::ostringstream msg;
      msg << "no binary vector matches edge {" << e.i << "," << e.j
          << "} (best residual " << best << ")";
      result.message = msg.str();
      result.stats.wall_time =
          std::chrono::duration<double>(Clock::now() - start).count();
      return result;
    }
    s = best_bits;
    result.stats.work += total;
    result.stats.max_work = std::max(result.stats.max_work, total);
  }

  result.x.assign(n, Point());
  for (int v = 1; v <= n; ++v) {
    result.x[v - 1] = position_of(v, s);
  }
  result.mde = mde(result.x, g);
  result.status =
      result.mde <= tolerance ? SolveStatus::success : SolveStatus::failure;
  if (result.status == SolveStatus::failure) {
    result.message = "final realization exceeds the MDE tolerance";
  }
  result.stats.wall_time =
      std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

}  // namespace dmdgp
