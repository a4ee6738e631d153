#include "psfcdl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <thread>

#include "psfcdl/simulate.hpp"

namespace psfcdl {
namespace {

double median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return std::nan("");
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::vector<BenchRow> run_benchmark(const std::vector<Shape>& shapes,
                                    const std::vector<int>& densities,
                                    const std::vector<std::uint64_t>& seeds,
                                    const BenchOptions& options) {
  std::vector<BenchRow> rows;
  for (Shape shape : shapes) {
    for (int density : densities) {
      BenchRow row;
      row.shape = shape;
      row.density = density;
      row.params = params_for(shape, density);
      if (options.offsets_per_axis)
        row.params.offsets_per_axis = *options.offsets_per_axis;
      if (options.lanczos_order)
        row.params.lanczos_order = *options.lanczos_order;
      row.seed_snr_db.assign(seeds.size(), std::nan(""));
      row.seed_runtime_s.assign(seeds.size(), 0.0);
      rows.push_back(std::move(row));
    }
  }

  struct Task {
    size_t row;
    size_t seed_index;
  };
  std::vector<Task> tasks;
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t s = 0; s < seeds.size(); ++s) tasks.push_back({r, s});

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      BenchRow& row = rows[tasks[i].row];
      size_t si = tasks[i].seed_index;
      try {
        SceneSpec spec;
        spec.width = options.size;
        spec.height = options.size;
        spec.density = row.density;
        spec.seed = seeds[si];
        spec.noise = options.noise;
        auto [image, truth] = render_scene(spec, row.shape);
        EstimationResult est = run_cdl(image, row.params);
        ReferencePsf ref = make_reference_psf(row.shape);
        MetricResult metric =
            evaluate_psf(ref, est.psf, options.resolution);
        row.seed_snr_db[si] = metric.snr_db;
        row.seed_runtime_s[si] = est.total_seconds;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };

  int jobs = std::max(1, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& row : rows) {
    row.median_snr_db = median(row.seed_snr_db);
    double sum = 0.0;
    int n = 0;
    for (double t : row.seed_runtime_s)
      if (t > 0) {
        sum += t;
        ++n;
      }
    row.mean_runtime_s = n ? sum / n : 0.0;
    if (std::isfinite(row.median_snr_db)) row.error.clear();
  }
  return rows;
}

std::string benchmark_csv(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "shape,density,median_snr_db,mean_runtime_s,seed_snrs_db,"
         "m,k,lambda_a,lambda_g,rho_a,l_g,sigma0,status\n";
  out << std::setprecision(10);
  for (const auto& row : rows) {
    out << to_string(row.shape) << "," << row.density << ","
        << row.median_snr_db << "," << row.mean_runtime_s << ",";
    for (size_t i = 0; i < row.seed_snr_db.size(); ++i)
      out << (i ? ";" : "") << row.seed_snr_db[i];
    out << "," << row.params.offsets_per_axis << ","
        << row.params.lanczos_order << "," << row.params.lambda_a << ","
        << row.params.lambda_g << "," << row.params.rho_a << ","
        << row.params.inv_step << "," << row.params.sigma0 << ","
        << (row.error.empty() ? "ok" : row.error) << "\n";
  }
  return out.str();
}

std::string benchmark_summary(const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2);
  out << "shape     density  snr_db   runtime_s\n";
  for (const auto& row : rows) {
    out << std::left << std::setw(10) << to_string(row.shape) << std::right
        << std::setw(7) << row.density << std::setw(9) << row.median_snr_db
        << std::setw(11) << row.mean_runtime_s;
    if (!row.error.empty()) out << "  FAILED: " << row.error;
    out << "\n";
  }
  return out.str();
}

}  // namespace psfcdl
