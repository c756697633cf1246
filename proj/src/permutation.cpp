#include "ohs/permutation.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>

#include "ohs/error.hpp"

namespace ohs {

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)])
      throw Error("not a permutation: " + to_string());
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  return Permutation(std::move(img));
}

Permutation Permutation::transposition(int n, int i, int j) {
  auto img = identity(n).images_;
  std::swap(img[static_cast<std::size_t>(i)], img[static_cast<std::size_t>(j)]);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> img(images_.size());
  for (int i = 0; i < size(); ++i) img[static_cast<std::size_t>(images_[static_cast<std::size_t>(i)])] = i;
  Permutation p;
  p.images_ = std::move(img);
  return p;
}

Permutation Permutation::operator*(const Permutation &rhs) const {
  if (size() != rhs.size()) throw Error("composing permutations of different sizes");
  Permutation p;
  p.images_.resize(images_.size());
  for (int i = 0; i < size(); ++i) p.images_[static_cast<std::size_t>(i)] = (*this)(rhs(i));
  return p;
}

bool Permutation::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

std::string Permutation::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(images_[i]);
  }
  return s + "]";
}

namespace {

struct PermTables {
  std::mutex mutex;
  std::map<int, std::vector<Permutation>> lists;
  std::map<std::vector<int>, int> ranks;
};

PermTables &tables() {
  static PermTables t;
  return t;
}

} // namespace

const std::vector<Permutation> &all_permutations(int n) {
  auto &t = tables();
  std::lock_guard lock(t.mutex);
  auto it = t.lists.find(n);
  if (it != t.lists.end()) return it->second;
  if (n > 8) throw BudgetExceeded("refusing to enumerate Sigma_" + std::to_string(n));
  std::vector<Permutation> out;
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 0);
  do {
    t.ranks.emplace(img, static_cast<int>(out.size()));
    out.emplace_back(img);
  } while (std::next_permutation(img.begin(), img.end()));
  return t.lists.emplace(n, std::move(out)).first->second;
}

int permutation_rank(const Permutation &p) {
  all_permutations(p.size());
  auto &t = tables();
  std::lock_guard lock(t.mutex);
  return t.ranks.at(std::vector<int>(p.images().begin(), p.images().end()));
}

Permutation block_sum(std::span<const Permutation> blocks) {
  std::vector<int> img;
  int offset = 0;
  for (const auto &b : blocks) {
    for (int a = 0; a < b.size(); ++a) img.push_back(offset + b(a));
    offset += b.size();
  }
  return Permutation(std::move(img));
}

Permutation block_permutation(const Permutation &sigma, std::span<const int> sizes) {
  const int k = sigma.size();
  if (static_cast<int>(sizes.size()) != k) throw Error("block_permutation: size mismatch");
  const Permutation inv = sigma.inverse();
  std::vector<int> off(static_cast<std::size_t>(k) + 1, 0), permuted_off(static_cast<std::size_t>(k) + 1, 0);
  for (int s = 0; s < k; ++s) off[s + 1] = off[s] + sizes[s];
  for (int u = 0; u < k; ++u) permuted_off[u + 1] = permuted_off[u] + sizes[inv(u)];
  std::vector<int> img(static_cast<std::size_t>(off[k]));
  for (int s = 0; s < k; ++s)
    for (int a = 0; a < sizes[s]; ++a) img[off[s] + a] = permuted_off[sigma(s)] + a;
  return Permutation(std::move(img));
}

} // namespace ohs
