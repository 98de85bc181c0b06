#pragma once

#include <iosfwd>

#include "quadswe/solver.hpp"

namespace quadswe {

/// Per-benchmark knobs that are not plain RunConfig fields.
struct BenchmarkOptions {
  double ex3_eps = 0.01;          // strip perturbation height
  bool ex6_flat_bottom = false;   // flat channel instead of the two humps
};

/// Built-in setups ex1..ex6: accuracy test over a smooth bump, circular
/// dam break, steady-state perturbation, submerged plateau, cylindrical
/// dam break over a bottom step, and the contracting channel.
RunConfig make_benchmark(const std::string& id, const BenchmarkOptions& opts = {});

bool is_benchmark_id(const std::string& id);

/// Flat `key = value` run description ('#' comments, unknown keys are
/// errors). A `benchmark` key loads the preset first; every other key
/// overrides it. See README for the key list.
RunConfig parse_config(std::istream& is);

}  // namespace quadswe
