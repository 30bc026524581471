#pragma once

// Seeded synthetic sequences with constructed witnesses, used to check every
// combinator against the property it claims. All comparisons are exact.

#include "genvam/verdict.hpp"

#include <cstdint>
#include <vector>

namespace genvam {

inline constexpr std::uint64_t kDefaultSuiteSeed = 20240531;

struct SuiteOptions {
  std::uint64_t seed = kDefaultSuiteSeed;
  std::uint64_t cases = 100;
  std::uint64_t horizon = 200;  ///< k <= horizon and window offsets <= horizon
};

/// One verdict per combinator (and per kind where a combinator has several).
std::vector<Verdict> run_moduli_suite(const SuiteOptions& opt = {});

/// s_{n+1} = (1 - gamma a_{n+1}) s_n + (a_n - a_{n+1}) c_n against J L / (gamma (n + J)), exact.
Verdict run_sabach_shtern_suite(std::uint64_t seed = kDefaultSuiteSeed, std::uint64_t cases = 50,
                                std::uint64_t n_max = 1000);

}  // namespace genvam
