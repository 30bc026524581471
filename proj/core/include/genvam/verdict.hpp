#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace genvam {

enum class Status { Pass, Fail, Partial };

std::string to_string(Status s);

/// Indices and values of the first violation; replayable from the trace.
struct Violation {
  std::uint64_t k = 0;
  std::uint64_t n = 0;
  double measured = 0.0;
  double bound = 0.0;
  std::string where;  ///< axiom name, window, column ...
};

/// Outcome of one check.
struct Verdict {
  std::string id;
  Status status = Status::Pass;
  std::optional<Violation> violation;
  std::string detail;
  double slack = 0.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t samples = 0;
  /// Smallest (bound - measured) seen; negative means a violation.
  std::optional<double> worst_margin;
  /// Largest k for which every requested index was covered and passed.
  std::optional<std::uint64_t> max_verified_k;
  /// Metastability: one "k,g -> N" entry per certified pair.
  std::vector<std::string> certificates;

  bool pass() const noexcept { return status == Status::Pass; }
  void note_margin(double m) {
    if (!worst_margin || m < *worst_margin) worst_margin = m;
  }
  void fail(Violation v, std::string why = {});
  void partial(std::string why);
};

/// Pass beats nothing, Partial beats Pass, Fail beats everything.
Status combine(Status a, Status b);

}  // namespace genvam
