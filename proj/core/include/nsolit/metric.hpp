#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nsolit/expr.hpp"

namespace nsolit::expr {

struct Interval {
  double lo = 0.2;
  double hi = 1.2;
};

/// Base metric g_ij(x) read from the DSL.
///
///   dim 2; coords x1, x2;
///   box x1 in [0.3, 2.8];      # optional sample box, default [0.2, 1.2]
///   g[1][1] = 1;
///   g[2][2] = sin(x1)^2;
struct MetricSpec {
  std::size_t n = 0;
  std::vector<std::string> coords;
  Matrix g;  // symmetric; g[j][i] shares the node of g[i][j]
  std::vector<Interval> box;
  std::string signature;  // e.g. "(+,+)", evaluated at the box centre
};

[[nodiscard]] MetricSpec parse_metric(std::string_view text);
[[nodiscard]] MetricSpec load_metric(const std::string& path);

/// Builds a metric from entries directly (tests, constant configurations).
[[nodiscard]] MetricSpec make_metric(std::vector<std::string> coords, Matrix g,
                                     std::vector<Interval> box = {});

}  // namespace nsolit::expr
