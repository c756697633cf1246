#pragma once

// Shared by the law checkers: a family of cases, each a box of indices.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ohs/operad.hpp"

namespace ohs::detail {

using Values = std::vector<Index>;
using Check = std::function<std::optional<std::string>(const Values &)>;

struct Case {
  std::vector<std::uint64_t> sizes;
  Check check;
};

// Exhaustive when the family fits the budget, otherwise seeded sampling.
FamilyResult run_family(const std::string &name, const std::vector<Case> &cases, const CheckBudget &budget,
                        std::uint64_t salt);
// Tuples of length k with entries >= 0 and sum <= max_sum.
std::vector<std::vector<int>> compositions(int k, int max_sum);
std::string join(const Values &v);

} // namespace ohs::detail
