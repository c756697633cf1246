#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ohs/error.hpp"

namespace ohs {

// Malformed documents and semantic errors. `path` is a JSON pointer into the
// job document; `offset` is set for syntax errors.
class JobError : public Error {
public:
  JobError(std::string path, const std::string &message, std::optional<std::size_t> offset = {});
  const std::string &path() const { return path_; }
  std::optional<std::size_t> offset() const { return offset_; }

private:
  std::string path_;
  std::optional<std::size_t> offset_;
};

struct ObjectSpec {
  std::string name;
  // One of: as, com, barratt-eccles, monoid, abelian-monoid, product,
  // product-over-as, free-algebra, nerve, sphere0, point, complex.
  std::string builtin;
  std::string path;

  // operads and monoid operads; 0 means "as the command needs"
  int arity = 0;
  int dim = 0;
  std::vector<std::string> of; // product factors, nerve monoid

  // monoids: exactly one presentation
  std::optional<std::vector<std::vector<int>>> table;
  int cyclic = 0;
  int symmetric_group = 0;
  int naturals = -1;
  int symmetric_groups = 0; // coprod_{n <= k} B Sigma_n, only for group-complete
  std::vector<int> generators;

  // free algebras
  std::string operad, on;
  int n_max = 3;
  int w_max = -1;

  // complexes: ordered facets by vertex lists
  std::vector<std::vector<int>> simplices;
  std::optional<int> basepoint;

  bool is_monoid() const { return builtin == "monoid" || builtin == "abelian-monoid"; }
  bool is_operad() const;
  bool is_space() const;
};

struct CommandSpec {
  // check-operad, homology, ohs-check, group-complete, splitting, bar, rectify
  std::string kind;
  std::string of, on;
  std::string mu = "canonical";
  int n_max = 3;
  int q_max = 1;
  int G = 6;
  int window = 2;
  int p_max = 3;
  int stages = 4;
  std::vector<int> degrees;
  std::optional<std::uint64_t> s_tilde0;
};

struct JobSpec {
  std::vector<ObjectSpec> objects; // in document order
  CommandSpec command;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  std::uint64_t max_cases = 20'000'000;
  std::uint64_t samples = 200'000;
  std::optional<std::string> output;

  const ObjectSpec &object(const std::string &name) const;
};

// Strict: unknown keys, wrong types and dangling references are errors.
JobSpec parse_jobspec(const std::string &document);

} // namespace ohs
