#ifndef DMDGP_GENIO_HPP
#define DMDGP_GENIO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "dmdgp/instance.hpp"
#include "dmdgp/types.hpp"

namespace dmdgp {

/// Instance built from an explicit point chain: every pair at index distance
/// <= K becomes an edge, plus every farther pair strictly below the cutoff.
DmdgpInstance instance_from_points(std::span<const Point> points, int K,
                                   double cutoff);

struct SyntheticInstance {
  DmdgpInstance instance;
  Realization ground_truth;
};

/// Random chain with step lengths uniform in [1,2) and directions rejection
/// sampled so every window of K consecutive points stays nondegenerate
/// (scaled Cayley-Menger above 1e-6). Deterministic for a fixed seed.
/// Throws GenerationError when the rejection budget runs out.
SyntheticInstance generate_synthetic(int n, int K, double cutoff,
                                     std::uint64_t seed);

struct AtomRecord {
  int serial = 0;
  std::string name;  // N, CA or C
  int res_seq = 0;
  char chain_id = ' ';
  int model_id = 1;
  Point pos;  // Angstrom
};

struct RawStructure {
  std::vector<AtomRecord> atoms;
  std::vector<std::string> warnings;
};

/// Backbone atoms (N, CA, C) of the first model and first chain of a PDB
/// text, in file order. Alternate locations other than blank or 'A',
/// HETATM records, insertion codes and non-standard residues are skipped
/// (the last three with a warning). Throws ParseError on malformed ATOM
/// records (with the line number) and ValidationError when nothing is left.
RawStructure parse_pdb(std::string_view text);

struct BuiltInstance {
  DmdgpInstance instance;
  std::vector<std::string> warnings;
};

/// K = 3 instance over the backbone order: pairs within three positions in
/// the chain get their coordinate distance, farther pairs only when strictly
/// below the cutoff. Nearly collinear consecutive triples produce a
/// degeneracy warning naming the vertices.
BuiltInstance build_instance(const RawStructure& structure,
                             double cutoff_angstrom);

/// Line-oriented text format. Header `DMDGP <K> <n>`, then one `<i> <j> <d>`
/// per edge with the shortest round-trip decimal for d; `#` starts a
/// comment. read_instance(write_instance(g)) reproduces g exactly.
std::string write_instance(const DmdgpInstance& g);
DmdgpInstance read_instance(std::string_view text);

DmdgpInstance read_instance_file(const std::filesystem::path& path);
void write_instance_file(const DmdgpInstance& g,
                         const std::filesystem::path& path);

}  // namespace dmdgp

#endif
