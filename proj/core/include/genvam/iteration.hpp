#pragma once

// genVAM runs x_{n+1} = W(f(x_n), T_n x_n, 1 - alpha_n), the implicit
// companions y_n and the anchored runs w_n(x).

#include "genvam/operators.hpp"
#include "genvam/schedule.hpp"
#include "genvam/verdict.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace genvam {

inline constexpr double kDefaultMetricTol = 1e-9;
inline constexpr double kDefaultBrowderTol = 1e-10;

struct IterationConfig {
  Family family;
  ContractionSpec f;
  Schedule schedule;
  Point x0;
  Point z;  ///< common fixed point of the family
  std::uint64_t budget = 1'000'000;
  double metric_tol = kDefaultMetricTol;
  double eps_fp = kDefaultBrowderTol;
  std::vector<std::uint64_t> tm_indices;  ///< m for the d(x_n, T_m x_n) columns
  bool record_tilde = true;               ///< needs a lambda limit in the schedule
  bool record_browder = false;            ///< solve y_n for every row

  const Space& space() const { return family.space(); }
  double alpha() const { return contraction_factor(f); }
  std::optional<double> lambda_limit() const;

  /// x0, z in C, z fixed by sampled T_n; throws std::invalid_argument.
  void validate() const;
};

struct BoundConstant {
  Nat K;
  double d_x0_z = 0.0;
  double d_fz_z = 0.0;
  double alpha = 0.0;
  std::string describe() const;
};

/// K = max{1, ceil(max{d(x0,z), d(f(z),z)/(1-alpha)})}
BoundConstant compute_Kz(const IterationConfig& c);

struct Trace {
  std::vector<Point> iterates;  ///< x_0 .. x_N
  // Residual rows n = 0 .. N-1.
  std::vector<double> alpha;
  std::vector<double> lambda;
  std::vector<double> step;  ///< d(x_n, x_{n+1})
  std::vector<double> tn;    ///< d(x_n, T_n x_n)
  std::map<std::uint64_t, std::vector<double>> tm;  ///< d(x_n, T_m x_n)
  std::vector<double> tilde;         ///< d(x_n, T~ x_n); empty when not recorded
  std::vector<double> browder_gap;   ///< d(x_n, y_n); empty when not recorded
  std::vector<Point> browder;        ///< y_n
  std::string config_hash;

  std::size_t rows() const noexcept { return step.size(); }
};

/// Runs n_max steps. Failures are rethrown as std::runtime_error naming the index.
Trace run_genvam(const IterationConfig& c, std::uint64_t n_max);

/// y with d(y, S_n y) <= eps_fp, S_n(y) = W(f(y), T~ y, 1 - alpha_n); optional warm start.
Point browder_point(const IterationConfig& c, std::uint64_t n, double eps_fp, const Point* warm = nullptr);

/// Anchored run w_0 = x, w_{n+1} = W(x, T_n w_n, 1 - alpha_n); returns w_0 .. w_{n_max}.
std::vector<Point> w_sequence(const IterationConfig& c, const Point& x, std::uint64_t n_max);

/// Boundedness and residual inequalities every genVAM trace must satisfy.
Verdict check_trace_invariants(const IterationConfig& c, const Trace& t, const BoundConstant& K);

}  // namespace genvam
