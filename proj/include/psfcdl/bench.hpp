#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psfcdl/driver.hpp"
#include "psfcdl/metric.hpp"

namespace psfcdl {

struct BenchOptions {
  int size = 256;
  int resolution = 50;  // metric N_R
  bool noise = true;
  int jobs = 1;
  std::optional<int> offsets_per_axis;  // override M
  std::optional<int> lanczos_order;     // override K
};

struct BenchRow {
  Shape shape = Shape::narrow;
  int density = 0;
  std::vector<double> seed_snr_db;  // one per seed, NaN on failure
  std::vector<double> seed_runtime_s;
  double median_snr_db = 0.0;
  double mean_runtime_s = 0.0;
  CdlParams params;
  std::string error;  // non-empty if every seed failed
};

// simulate -> estimate -> evaluate for every (shape, density) cell and seed;
// cells run concurrently when jobs > 1. Per-cell failures are recorded, not
// propagated.
std::vector<BenchRow> run_benchmark(const std::vector<Shape>& shapes,
                                    const std::vector<int>& densities,
                                    const std::vector<std::uint64_t>& seeds,
                                    const BenchOptions& options);

std::string benchmark_csv(const std::vector<BenchRow>& rows);
std::string benchmark_summary(const std::vector<BenchRow>& rows);

}  // namespace psfcdl
