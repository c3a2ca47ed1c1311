#include "dmdgp/genio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "dmdgp/geometry.hpp"
#include "text_util.hpp"

namespace dmdgp {

namespace {

constexpr double kWindowDegeneracy = 1e-6;

bool standard_residue(std::string_view name) {
  static constexpr std::array<std::string_view, 20> kNames = {
      "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
      "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_coord(std::string_view field) {
  return detail::parse_double(trim(field));
}

}  // namespace

DmdgpInstance instance_from_points(std::span<const Point> points, int K,
                                   double cutoff) {
  const int n = static_cast<int>(points.size());
  DmdgpInstance g(n, K);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d = (points[i] - points[j]).norm();
      if (j - i <= K || d < cutoff) {
        g.add_edge(i + 1, j + 1, d);
      }
    }
  }
  return g;
}

SyntheticInstance generate_synthetic(int n, int K, double cutoff,
                                     std::uint64_t seed) {
  if (K < 1 || n <= K) {
    throw std::invalid_argument("generate_synthetic: need n > K >= 1");
  }
  if (!(cutoff > 0.0)) {
    throw std::invalid_argument("generate_synthetic: cutoff must be positive");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(1.0, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Realization pts;
  pts.reserve(n);
  pts.push_back(Point::Zero(K));
  constexpr int kMaxAttempts = 256;
  for (int m = 1; m < n; ++m) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      Point dir(K);
      for (int c = 0; c < K; ++c) dir(c) = gauss(rng);
      const double norm = dir.norm();
      if (norm < 1e-12) continue;
      Point cand = pts.back() + (step(rng) / norm) * dir;
      if (m >= K - 1) {
        std::vector<Point> window(pts.end() - (K - 1), pts.end());
        window.push_back(cand);
        if (scaled_cayley_menger(window) <= kWindowDegeneracy) continue;
      }
      pts.push_back(std::move(cand));
      placed = true;
    }
    if (!placed) {
      std::ostringstream msg;
      msg << "rejection budget exhausted at vertex " << m + 1
          << "; retry with a different seed";
      throw GenerationError(msg.str());
    }
  }
  return SyntheticInstance{instance_from_points(pts, K, cutoff),
                           std::move(pts)};
}

RawStructure parse_pdb(std::string_view text) {
  RawStructure out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool saw_model = false;
  bool chain_fixed = false;
  char chain0 = ' ';
  int model_id = 1;
  std::size_t hetatm_skipped = 0;
  std::size_t icode_skipped = 0;
  std::size_t nonstandard_skipped = 0;

  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (line.size() < 3) continue;
    const std::string_view rec = line.substr(0, std::min<std::size_t>(6, line.size()));

    if (rec.starts_with("MODEL")) {
      if (saw_model || !out.atoms.empty()) break;  // first model only
      saw_model = true;
      if (line.size() >= 14) {
        if (auto id = detail::parse_int(trim(line.substr(10, 4)))) {
          model_id = *id;
        }
      }
      continue;
    }
    if (rec.starts_with("ENDMDL")) break;
    if (rec.starts_with("TER")) {
      if (!out.atoms.empty()) break;  // first chain ended
      continue;
    }
    if (rec.starts_with("HETATM")) {
      ++hetatm_skipped;
      continue;
    }
    if (!rec.starts_with("ATOM")) continue;

    if (line.size() < 54) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": ATOM record shorter than the coordinate columns");
    }
    const std::string name(trim(line.substr(12, 4)));
    if (name != "N" && name != "CA" && name != "C") continue;
    const char alt_loc = line[16];
    if (alt_loc != ' ' && alt_loc != 'A') continue;
    const std::string res_name(trim(line.substr(17, 3)));
    if (!standard_residue(res_name)) {
      ++nonstandard_skipped;
      continue;
    }
    const char icode = line[26];
    if (icode != ' ') {
      ++icode_skipped;
      continue;
    }
    const char chain = line[21];
    if (chain_fixed && chain != chain0) continue;

    const auto x = parse_coord(line.substr(30, 8));
    const auto y = parse_coord(line.substr(38, 8));
    const auto z = parse_coord(line.substr(46, 8));
    if (!x || !y || !z) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unreadable coordinate field");
    }
    AtomRecord atom;
    if (auto serial = detail::parse_int(trim(line.substr(6, 5)))) {
      atom.serial = *serial;
    }
    atom.name = name;
    if (auto rs = detail::parse_int(trim(line.substr(22, 4)))) {
      atom.res_seq = *rs;
    }
    atom.chain_id = chain;
    atom.model_id = model_id;
    atom.pos = Point(3);
    atom.pos << *x, *y, *z;
    if (!chain_fixed) {
      chain_fixed = true;
      chain0 = chain;
    }
    out.atoms.push_back(std::move(atom));
  }

  if (hetatm_skipped > 0) {
    out.warnings.push_back("skipped " + std::to_string(hetatm_skipped) +
                           " HETATM record(s)");
  }
  if (icode_skipped > 0) {
    out.warnings.push_back("skipped " + std::to_string(icode_skipped) +
                           " atom(s) with insertion codes");
  }
  if (nonstandard_skipped > 0) {
    out.warnings.push_back("skipped " + std::to_string(nonstandard_skipped) +
                           " atom(s) of non-standard residues");
  }
  if (out.atoms.empty()) {
    throw ValidationError("no backbone atoms (N, CA, C) found");
  }
  return out;
}

BuiltInstance build_instance(const RawStructure& structure,
                             double cutoff_angstrom) {
  const int n = static_cast<int>(structure.atoms.size());
  if (n < 4) {
    throw ValidationError("need at least 4 backbone atoms for K = 3");
  }
  Realization pts;
  pts.reserve(n);
  for (const auto& atom : structure.atoms) pts.push_back(atom.pos);

  BuiltInstance out{instance_from_points(pts, 3, cutoff_angstrom), {}};
  for (int w = 0; w + 3 <= n; ++w) {
    std::span<const Point> triple(&pts[w], 3);
    if (scaled_cayley_menger(triple) <= kSimplexDegeneracyThreshold) {
      std::ostringstream msg;
      msg << "vertices " << w + 1 << ".." << w + 3 << " are nearly collinear";
      out.warnings.push_back(msg.str());
    }
  }
  return out;
}

std::string write_instance(const DmdgpInstance& g) {
  std::string out = "DMDGP " + std::to_string(g.dim()) + " " +
                    std::to_string(g.n()) + "\n";
  for (const Edge& e : g.edges()) {
    out += std::to_string(e.i);
    out += ' ';
    out += std::to_string(e.j);
    out += ' ';
    out += detail::format_double(e.d);
    out += '\n';
  }
  return out;
}

DmdgpInstance read_instance(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  std::optional<DmdgpInstance> g;
  bool any_edge = false;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    auto tokens = detail::split_ws(detail::strip_comment(line));
    if (tokens.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (!g) {
      if (tokens[0] != "DMDGP" || tokens.size() != 3) {
        throw ParseError(where + ": expected header 'DMDGP <K> <n>'");
      }
      const auto k = detail::parse_int(tokens[1]);
      const auto n = detail::parse_int(tokens[2]);
      if (!k || !n || *k < 1 || *n <= *k) {
        throw ParseError(where + ": header requires integers n > K >= 1");
      }
      g.emplace(*n, *k);
      continue;
    }
    const auto i = detail::parse_int(tokens[0]);
    if (!i) {
      throw ParseError(where + ": unknown directive '" +
                       std::string(tokens[0]) + "'");
    }
    if (tokens.size() != 3) {
      throw ParseError(where + ": expected '<i> <j> <d>'");
    }
    const auto j = detail::parse_int(tokens[1]);
    const auto d = detail::parse_double(tokens[2]);
    if (!j || !d) {
      throw ParseError(where + ": expected '<i> <j> <d>'");
    }
    try {
      g->add_edge(*i, *j, *d);
    } catch (const ValidationError& err) {
      throw ParseError(where + ": " + err.what());
    }
    any_edge = true;
  }
  if (!g) {
    throw ParseError("missing 'DMDGP <K> <n>' header");
  }
  if (!any_edge) {
    throw ParseError("no edges");
  }
  return std::move(*g);
}

DmdgpInstance read_instance_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return read_instance(buffer.str());
}

void write_instance_file(const DmdgpInstance& g,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw ParseError("cannot open " + path.string() + " for writing");
  }
  out << write_instance(g);
}

}  // namespace dmdgp
