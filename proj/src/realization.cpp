#include "dmdgp/realization.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "text_util.hpp"

namespace dmdgp {

std::vector<Point> canonical_clique(const DmdgpInstance& g) {
  const int k = g.dim();
  std::vector<Point> x(k, Point::Zero(k));
  for (int m = 2; m <= k; ++m) {
    // Distances to the already placed x_1..x_{m-1} pin x_m in the first
    // m-1 coordinates; the system is lower triangular in this frame.
    const double d1m = g.distance(1, m);
    Point c = Point::Zero(k);
    for (int l = 2; l < m; ++l) {
      const Point& p = x[l - 1];
      const double dlm = g.distance(l, m);
      double acc = 0.5 * (p.squaredNorm() + d1m * d1m - dlm * dlm);
      for (int t = 0; t < l - 2; ++t) {
        acc -= p(t) * c(t);
      }
      const double pivot = p(l - 2);
      if (std::abs(pivot) <= 1e-12 * (1.0 + p.norm())) {
        throw DegeneracyError("canonical_clique: degenerate root clique");
      }
      c(l - 2) = acc / pivot;
    }
    double s2 = d1m * d1m;
    for (int t = 0; t < m - 2; ++t) {
      s2 -= c(t) * c(t);
    }
    if (s2 < -1e-9 * d1m * d1m) {
      throw InfeasibleError("canonical_clique: clique distances infeasible");
    }
    c(m - 2) = std::sqrt(std::max(0.0, s2));
    x[m - 1] = c;
  }
  return x;
}

double mde(const Realization& x, const DmdgpInstance& g) {
  if (static_cast<int>(x.size()) < g.n()) {
    throw std::invalid_argument("mde: realization does not cover all vertices");
  }
  const int k = g.dim();
  for (int v = 0; v < g.n(); ++v) {
    if (x[v].size() != k || !x[v].allFinite()) {
      std::ostringstream msg;
      msg << "mde: missing position for vertex " << v + 1;
      throw std::invalid_argument(msg.str());
    }
  }
  double sum = 0.0;
  for (const Edge& e : g.edges()) {
    sum += std::abs((x[e.i - 1] - x[e.j - 1]).norm() - e.d) / e.d;
  }
  return sum / static_cast<double>(g.edge_count());
}

double max_relative_residual(const Realization& x, std::span<const Edge> edges,
                             int up_to) {
  double worst = 0.0;
  for (const Edge& e : edges) {
    if (up_to > 0 && e.j > up_to) continue;
    const double res = std::abs((x[e.i - 1] - x[e.j - 1]).norm() - e.d);
    worst = std::max(worst, res / std::max(1.0, e.d));
  }
  return worst;
}

std::string write_realization(const Realization& x) {
  std::string out;
  for (std::size_t v = 0; v < x.size(); ++v) {
    out += std::to_string(v + 1);
    for (Eigen::Index c = 0; c < x[v].size(); ++c) {
      out += ' ';
      out += detail::format_double(x[v](c));
    }
    out += '\n';
  }
  return out;
}

Realization read_realization(std::string_view text) {
  Realization out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  int k = -1;
  std::vector<std::pair<int, Point>> rows;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) continue;
    if (k < 0) {
      k = static_cast<int>(tokens.size()) - 1;
      if (k < 1) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected a vertex index and K coordinates");
      }
    }
    if (static_cast<int>(tokens.size()) != k + 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected " + std::to_string(k + 1) + " fields");
    }
    auto v = detail::parse_int(tokens[0]);
    if (!v || *v < 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": bad vertex index '" + std::string(tokens[0]) + "'");
    }
    Point p(k);
    for (int c = 0; c < k; ++c) {
      auto val = detail::parse_double(tokens[c + 1]);
      if (!val) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad coordinate '" + std::string(tokens[c + 1]) +
                         "'");
      }
      p(c) = *val;
    }
    rows.emplace_back(*v, std::move(p));
  }
  if (rows.empty()) {
    throw ParseError("no vertex lines found");
  }
  int n = 0;
  for (const auto& [v, p] : rows) n = std::max(n, v);
  out.assign(n, Point());
  for (auto& [v, p] : rows) {
    if (out[v - 1].size() != 0) {
      throw ParseError("duplicate vertex " + std::to_string(v));
    }
    out[v - 1] = std::move(p);
  }
  for (int v = 0; v < n; ++v) {
    if (out[v].size() == 0) {
      throw ParseError("missing vertex " + std::to_string(v + 1));
    }
  }
  return out;
}

}  // namespace dmdgp
