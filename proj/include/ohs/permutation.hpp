#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ohs {

// A permutation of {0, ..., n-1}, stored by images. Composition is
// (a * b)(i) = a(b(i)).
class Permutation {
public:
  Permutation() = default;
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  static Permutation transposition(int n, int i, int j);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  std::span<const int> images() const { return images_; }

  Permutation inverse() const;
  Permutation operator*(const Permutation &rhs) const;
  bool is_identity() const;

  friend bool operator==(const Permutation &, const Permutation &) = default;
  friend auto operator<=>(const Permutation &, const Permutation &) = default;

  std::string to_string() const;

private:
  std::vector<int> images_;
};

// All permutations of n letters in lexicographic order of their image lists.
const std::vector<Permutation> &all_permutations(int n);
// Position of p in all_permutations(p.size()).
int permutation_rank(const Permutation &p);

// tau_1 (+) ... (+) tau_k: the image of the tuple under the block inclusion
// Sigma_{j_1} x ... x Sigma_{j_k} -> Sigma_{j_1+...+j_k}.
Permutation block_sum(std::span<const Permutation> blocks);

// sigma(j_1, ..., j_k): moves position a of block s (blocks sized by `sizes`)
// to position a of block sigma(s) in the arrangement whose block u has size
// sizes[sigma^{-1}(u)].
Permutation block_permutation(const Permutation &sigma, std::span<const int> sizes);

} // namespace ohs
