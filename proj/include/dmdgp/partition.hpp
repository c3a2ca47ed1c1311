#ifndef DMDGP_PARTITION_HPP
#define DMDGP_PARTITION_HPP

#include <vector>

namespace dmdgp {

/// Union-find over the vertex range [K+1, n] with per-root minimum and
/// maximum tracking. Merges always cover a contiguous vertex interval, so
/// every component is an interval; merge_interval exploits that to touch
/// each absorbed component once. Weighted union plus path compression keeps
/// find at O(log n) worst case and O(n) memory.
class ComponentPartition {
 public:
  ComponentPartition(int K, int n);

  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int component_count() const { return count_; }

  /// Canonical component id (a root vertex index), stable between merges.
  int find(int v);

  /// Smallest vertex of the component containing id.
  int first(int id);
  /// Largest vertex of the component containing id.
  int last(int id);

  bool same(int a, int b);

  /// Merge every component intersecting [a, b] into one.
  void merge_interval(int a, int b);

 private:
  int idx(int v) const { return v - lo_; }
  void check(int v) const;
  int unite(int ra, int rb);

  int lo_;
  int hi_;
  int count_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<int> min_;
  std::vector<int> max_;
};

}  // namespace dmdgp

#endif
