#include "dmdgp/partition.hpp"

#include <sstream>
#include <stdexcept>

namespace dmdgp {

ComponentPartition::ComponentPartition(int K, int n)
    : lo_(K + 1), hi_(n), count_(n - K) {
  if (K < 1 || n <= K) {
    throw std::invalid_argument("partition requires n > K >= 1");
  }
  const int m = count_;
  parent_.resize(m);
  size_.assign(m, 1);
  min_.resize(m);
  max_.resize(m);
  for (int p = 0; p < m; ++p) {
    parent_[p] = p;
    min_[p] = lo_ + p;
    max_[p] = lo_ + p;
  }
}

void ComponentPartition::check(int v) const {
  if (v < lo_ || v > hi_) {
    std::ostringstream msg;
    msg << "vertex " << v << " outside partition range [" << lo_ << "," << hi_
        << "]";
    throw std::invalid_argument(msg.str());
  }
}

int ComponentPartition::find(int v) {
  check(v);
  int p = idx(v);
  while (parent_[p] != p) {
    parent_[p] = parent_[parent_[p]];  // path halving
    p = parent_[p];
  }
  return lo_ + p;
}

int ComponentPartition::first(int id) { return min_[idx(find(id))]; }

int ComponentPartition::last(int id) { return max_[idx(find(id))]; }

bool ComponentPartition::same(int a, int b) { return find(a) == find(b); }

int ComponentPartition::unite(int ra, int rb) {
  int a = idx(ra);
  int b = idx(rb);
  if (a == b) return ra;
  if (size_[a] < size_[b]) std::swap(a, b);
  parent_[b] = a;
  size_[a] += size_[b];
  if (min_[b] < min_[a]) min_[a] = min_[b];
  if (max_[b] > max_[a]) max_[a] = max_[b];
  --count_;
  return lo_ + a;
}

void ComponentPartition::merge_interval(int a, int b) {
  check(a);
  check(b);
  if (a > b) {
    throw std::invalid_argument("merge_interval: a must not exceed b");
  }
  int root = find(a);
  int v = max_[idx(root)] + 1;
  while (v <= b) {
    root = unite(root, find(v));
    v = max_[idx(root)] + 1;
  }
}

}  // namespace dmdgp
