#include "dmdgp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dmdgp {

DmdgpInstance::DmdgpInstance(int n, int K) : n_(n), k_(K) {
  if (K < 1 || n <= K) {
    throw ValidationError("instance requires n > K >= 1");
  }
}

std::uint64_t DmdgpInstance::key(int i, int j) {
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j);
}

void DmdgpInstance::add_edge(int i, int j, double d) {
  if (i < 1 || j < 1 || i >= j || j > n_) {
    std::ostringstream msg;
    msg << "edge {" << i << "," << j << "}: vertices must satisfy 1 <= i < j <= "
        << n_;
    throw ValidationError(msg.str());
  }
  if (!(d > 0.0) || !std::isfinite(d)) {
    std::ostringstream msg;
    msg << "edge {" << i << "," << j << "}: distance must be finite and positive";
    throw ValidationError(msg.str());
  }
  if (!index_.emplace(key(i, j), d).second) {
    std::ostringstream msg;
    msg << "duplicate edge {" << i << "," << j << "}";
    throw ValidationError(msg.str());
  }
  edges_.push_back(Edge{i, j, d});
}

bool DmdgpInstance::has_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  return index_.count(key(i, j)) != 0;
}

double DmdgpInstance::distance(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = index_.find(key(i, j));
  if (it == index_.end()) {
    std::ostringstream msg;
    msg << "no edge {" << i << "," << j << "}";
    throw std::invalid_argument(msg.str());
  }
  return it->second;
}

EdgePartition classify_edges(const DmdgpInstance& g) {
  EdgePartition out;
  for (const Edge& e : g.edges()) {
    if (e.j - e.i <= g.dim()) {
      out.discretization.push_back(e);
    } else {
      out.pruning.push_back(e);
    }
  }
  return out;
}

std::string ValidationReport::summary() const {
  if (ok()) return "valid";
  std::ostringstream msg;
  if (!missing_edges.empty()) {
    msg << missing_edges.size() << " missing discretization edge(s):";
    for (const auto& [i, j] : missing_edges) {
      msg << " {" << i << "," << j << "}";
    }
  }
  if (!triangle_violations.empty()) {
    if (!missing_edges.empty()) msg << "; ";
    msg << triangle_violations.size() << " triangle violation(s):";
    for (const auto& v : triangle_violations) {
      msg << " (" << v.a << "," << v.b << "," << v.c << ")";
    }
  }
  return msg.str();
}

ValidationReport validate_dmdgp(const DmdgpInstance& g) {
  ValidationReport report;
  const int n = g.n();
  const int k = g.dim();
  for (int i = 1; i < n; ++i) {
    for (int j = i + 1; j <= std::min(n, i + k); ++j) {
      if (!g.has_edge(i, j)) {
        report.missing_edges.emplace_back(i, j);
      }
    }
  }
  // Triangle inequality inside each window of K+1 consecutive vertices;
  // windows with missing edges are already reported above.
  for (int w = 1; w + k <= n; ++w) {
    bool complete = true;
    for (int a = w; a <= w + k && complete; ++a) {
      for (int b = a + 1; b <= w + k && complete; ++b) {
        complete = g.has_edge(a, b);
      }
    }
    if (!complete) continue;
    for (int a = w; a <= w + k; ++a) {
      for (int b = a + 1; b <= w + k; ++b) {
        for (int c = b + 1; c <= w + k; ++c) {
          const double dab = g.distance(a, b);
          const double dac = g.distance(a, c);
          const double dbc = g.distance(b, c);
          const double longest = std::max({dab, dac, dbc});
          const double excess = 2.0 * longest - (dab + dac + dbc);
          if (excess > 1e-12 * longest) {
            report.triangle_violations.push_back({a, b, c, excess});
          }
        }
      }
    }
  }
  return report;
}

PruningOrder order_pruning_edges(const EdgePartition& partition) {
  PruningOrder order = partition.pruning;
  std::stable_sort(order.begin(), order.end(), [](const Edge& a, const Edge& b) {
    if (a.j != b.j) return a.j < b.j;
    return a.i > b.i;
  });
  return order;
}

std::vector<Edge> preceding_edges(const PruningOrder& order, const Edge& e) {
  auto it = std::find(order.begin(), order.end(), e);
  if (it == order.end()) {
    std::ostringstream msg;
    msg << "edge {" << e.i << "," << e.j << "} is not in the pruning order";
    throw std::invalid_argument(msg.str());
  }
  return std::vector<Edge>(order.begin(), it);
}

std::vector<int> symmetry_vertices(const DmdgpInstance& g) {
  const int n = g.n();
  const int k = g.dim();
  std::vector<char> covered(n + 1, 0);
  for (const Edge& e : g.edges()) {
    for (int l = std::max(e.i + k + 1, k + 1); l <= e.j; ++l) {
      covered[l] = 1;
    }
  }
  std::vector<int> s;
  for (int l = k + 1; l <= n; ++l) {
    if (!covered[l]) s.push_back(l);
  }
  return s;
}

std::vector<int> local_symmetry_vertices(const DmdgpInstance& g, const Edge& e,
                                         std::span<const Edge> preceding) {
  const int k = g.dim();
  std::vector<int> s;
  for (int l = e.i + k + 1; l <= e.j; ++l) {
    bool covered = false;
    for (const Edge& p : preceding) {
      if (p.i + k < l && l <= p.j) {
        covered = true;
        break;
      }
    }
    if (!covered) s.push_back(l);
  }
  return s;
}

}  // namespace dmdgp
