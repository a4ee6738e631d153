#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "psfcdl/bench.hpp"
#include "psfcdl/driver.hpp"
#include "psfcdl/metric.hpp"
#include "psfcdl/simulate.hpp"
#include "psfcdl/tile_io.hpp"

namespace fs = std::filesystem;
using namespace psfcdl;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitIo = 4;

fs::path default_out_dir() {
  if (const char* env = std::getenv("PSFCDL_OUT_DIR")) return fs::path(env);
  return fs::current_path();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::istringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) parts.push_back(item);
  return parts;
}

// Structured key-value config: `key value` per line, '#' comments, optional
// `section.key` prefixes (the last path component is what matters here).
std::map<std::string, std::string> read_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key, value;
    if (!(ls >> key >> value)) continue;
    auto dot = key.rfind('.');
    if (dot != std::string::npos) key.erase(0, dot + 1);
    kv[key] = value;
  }
  return kv;
}

void apply_config(CdlParams& p, const std::map<std::string, std::string>& kv) {
  auto geti = [&](const char* k, int& dst) {
    if (kv.count(k)) dst = std::stoi(kv.at(k));
  };
  auto getd = [&](const char* k, double& dst) {
    if (kv.count(k)) dst = std::stod(kv.at(k));
  };
  auto getb = [&](const char* k, bool& dst) {
    if (kv.count(k)) dst = (kv.at(k) == "1" || kv.at(k) == "true");
  };
  geti("m", p.offsets_per_axis);
  geti("k", p.lanczos_order);
  getd("lambda_a", p.lambda_a);
  getd("lambda_g", p.lambda_g);
  getd("rho_a", p.rho_a);
  getd("l_g", p.inv_step);
  getd("sigma0", p.sigma0);
  geti("n_iter0", p.warmup_iters);
  geti("n_iter", p.main_iters);
  geti("support", p.support);
  getb("coeff_nonneg", p.coeff_nonneg);
  geti("inner_admm", p.inner_admm);
  geti("inner_fista", p.inner_fista);
  getb("cold_start", p.cold_start);
  getd("input_scale", p.input_scale);
  getd("normalize_target", p.normalize_target);
}

std::string params_config(const CdlParams& p) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "solver.m " << p.offsets_per_axis << "\n"
      << "solver.k " << p.lanczos_order << "\n"
      << "solver.lambda_a " << p.lambda_a << "\n"
      << "solver.lambda_g " << p.lambda_g << "\n"
      << "solver.rho_a " << p.rho_a << "\n"
      << "solver.l_g " << p.inv_step << "\n"
      << "solver.sigma0 " << p.sigma0 << "\n"
      << "solver.n_iter0 " << p.warmup_iters << "\n"
      << "solver.n_iter " << p.main_iters << "\n"
      << "solver.support " << p.support << "\n"
      << "solver.coeff_nonneg " << (p.coeff_nonneg ? 1 : 0) << "\n"
      << "solver.inner_admm " << p.inner_admm << "\n"
      << "solver.inner_fista " << p.inner_fista << "\n"
      << "solver.cold_start " << (p.cold_start ? 1 : 0) << "\n"
      << "solver.input_scale " << p.input_scale << "\n"
      << "solver.normalize_target " << p.normalize_target << "\n";
  return out.str();
}

struct CommonArgs {
  std::string shape = "narrow";
  int density = 10;
  std::uint64_t seed = 0;
  int size = 256;
  std::string params_file;
  int m = 0;  // 0 = keep default
  int k = 0;
  bool no_noise = false;
  int resolution = 50;
  std::string out;
  int jobs = 1;
  bool fits = false;
};

CdlParams resolve_params(const CommonArgs& args) {
  CdlParams p = params_for(shape_from_string(args.shape), args.density);
  if (!args.params_file.empty()) apply_config(p, read_config(args.params_file));
  if (args.m > 0) p.offsets_per_axis = args.m;
  if (args.k > 0) p.lanczos_order = args.k;
  p.validate();
  return p;
}

fs::path out_dir(const CommonArgs& args) {
  fs::path dir = args.out.empty() ? default_out_dir() : fs::path(args.out);
  fs::create_directories(dir);
  return dir;
}

int cmd_simulate(const CommonArgs& args) {
  SceneSpec spec;
  spec.width = args.size;
  spec.height = args.size;
  spec.density = args.density;
  spec.seed = args.seed;
  spec.noise = !args.no_noise;
  auto [image, truth] = render_scene(spec, shape_from_string(args.shape));

  fs::path dir = out_dir(args);
  std::map<std::string, std::string> header;
  header["kind"] = "tile";
  header["shape"] = args.shape;
  header["density"] = std::to_string(args.density);
  header["seed"] = std::to_string(args.seed);
  header["background"] = std::to_string(spec.background);
  header["inverse_gain"] = std::to_string(spec.inverse_gain);
  header["oversample"] = std::to_string(spec.oversample);
  header["noise"] = spec.noise ? "1" : "0";
  write_tile(dir / "tile.psft", image, header);
  if (args.fits) write_fits(dir / "tile.fits", image);

  std::ostringstream csv;
  csv << std::setprecision(10) << "x,y,flux\n";
  for (const auto& s : truth.stars)
    csv << s.x << "," << s.y << "," << s.flux << "\n";
  write_text_atomic(dir / "truth.csv", csv.str());

  std::ostringstream cfg;
  cfg << "scene.shape " << args.shape << "\nscene.density " << args.density
      << "\nscene.seed " << args.seed << "\nscene.size " << args.size
      << "\nscene.noise " << (spec.noise ? 1 : 0) << "\n";
  write_text_atomic(dir / "simulate_config.txt", cfg.str());
  std::cout << "wrote " << (dir / "tile.psft").string() << " ("
            << truth.stars.size() << " stars)\n";
  return 0;
}

int cmd_estimate(const CommonArgs& args, const std::string& tile_path) {
  TileFile tile = read_tile(tile_path);
  CommonArgs resolved = args;
  // Shape/density from the tile header when not given explicitly.
  if (tile.header.count("shape") && resolved.shape.empty())
    resolved.shape = tile.header.at("shape");
  CdlParams params = resolve_params(resolved);

  EstimationResult result = run_cdl(tile.samples, params);

  fs::path dir = out_dir(args);
  std::map<std::string, std::string> header;
  header["kind"] = "psf";
  header["shape"] = resolved.shape;
  header["support"] = std::to_string(result.psf.support_size);
  write_tile(dir / "psf.psft", result.psf.values, header);
  if (args.fits) write_fits(dir / "psf.fits", result.psf.values);

  std::ostringstream trace;
  trace << std::setprecision(12) << "iteration,phase,objective\n";
  for (size_t i = 0; i < result.objective_trace.size(); ++i)
    trace << i << "," << result.trace_phase[i] << ","
          << result.objective_trace[i] << "\n";
  write_text_atomic(dir / "trace.csv", trace.str());
  write_text_atomic(dir / "estimate_config.txt", params_config(params));

  std::cout << "wrote " << (dir / "psf.psft").string() << " in "
            << std::fixed << std::setprecision(2) << result.total_seconds
            << " s (sparse " << result.sparse_seconds << " s, dict "
            << result.dict_seconds << " s)\n";
  return 0;
}

int cmd_evaluate(const CommonArgs& args, const std::string& psf_path) {
  TileFile psf = read_tile(psf_path);
  if (psf.samples.rows() != psf.samples.cols())
    throw std::invalid_argument("evaluate: PSF file must be square");
  PsfKernel kernel{static_cast<int>(psf.samples.rows()), psf.samples};
  ReferencePsf ref = make_reference_psf(shape_from_string(args.shape));
  MetricResult res = evaluate_psf(ref, kernel, args.resolution);
  std::cout << std::setprecision(10)
            << "snr_db,offset_row,offset_col,scale,correlation\n"
            << res.snr_db << "," << res.best_row_offset << ","
            << res.best_col_offset << "," << res.scale << ","
            << res.correlation << "\n";
  return 0;
}

int cmd_benchmark(const CommonArgs& args, const std::string& shapes_arg,
                  const std::string& densities_arg,
                  const std::string& seeds_arg) {
  std::vector<Shape> shapes;
  for (const auto& s : split(shapes_arg, ','))
    shapes.push_back(shape_from_string(s));
  std::vector<int> densities;
  for (const auto& d : split(densities_arg, ','))
    densities.push_back(std::stoi(d));
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split(seeds_arg, ',')) seeds.push_back(std::stoull(s));
  if (shapes.empty() || densities.empty() || seeds.empty())
    throw std::invalid_argument("benchmark: empty shape/density/seed list");

  BenchOptions options;
  options.size = args.size;
  options.resolution = args.resolution;
  options.noise = !args.no_noise;
  options.jobs = args.jobs;
  if (args.m > 0) options.offsets_per_axis = args.m;
  if (args.k > 0) options.lanczos_order = args.k;

  auto rows = run_benchmark(shapes, densities, seeds, options);
  fs::path dir = out_dir(args);
  write_text_atomic(dir / "benchmark.csv", benchmark_csv(rows));
  write_text_atomic(dir / "benchmark_summary.txt", benchmark_summary(rows));
  std::cout << benchmark_summary(rows);
  return 0;
}

int cmd_export_slices(const CommonArgs& args, const std::string& psf_path) {
  TileFile psf = read_tile(psf_path);
  PsfKernel kernel{static_cast<int>(psf.samples.rows()), psf.samples};
  ReferencePsf ref = make_reference_psf(shape_from_string(args.shape));
  MetricResult res = evaluate_psf(ref, kernel, args.resolution);

  const int support = kernel.support_size;
  const int half = (support - 1) / 2;
  const double dr = static_cast<double>(res.best_row_offset) / args.resolution;
  const double dc = static_cast<double>(res.best_col_offset) / args.resolution;

  std::ostringstream csv;
  csv << std::setprecision(10)
      << "index,row_estimate,row_reference,row_difference,"
         "col_estimate,col_reference,col_difference\n";
  for (int i = -half; i <= half; ++i) {
    double row_est = kernel.values(half, i + half);
    double row_ref = res.scale * ref.evaluate(i + dc, dr);
    double col_est = kernel.values(i + half, half);
    double col_ref = res.scale * ref.evaluate(dc, i + dr);
    csv << i << "," << row_est << "," << row_ref << ","
        << (row_est - row_ref) << "," << col_est << "," << col_ref << ","
        << (col_est - col_ref) << "\n";
  }
  fs::path dir = out_dir(args);
  write_text_atomic(dir / "slices.csv", csv.str());
  std::cout << "wrote " << (dir / "slices.csv").string() << " (snr "
            << std::setprecision(4) << res.snr_db << " dB)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sub-pixel PSF estimation from crowded star fields"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string tile_path, psf_path;
  std::string shapes_arg = "narrow,wide,elong,complex";
  std::string densities_arg = "1,10,25,50,100";
  std::string seeds_arg = "0";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--shape", args.shape, "PSF shape");
    cmd->add_option("--density", args.density, "pixels per star");
    cmd->add_option("--seed", args.seed, "RNG seed");
    cmd->add_option("--size", args.size, "tile side in pixels");
    cmd->add_option("--params", args.params_file, "parameter file");
    cmd->add_option("--m", args.m, "offsets per axis");
    cmd->add_option("--k", args.k, "Lanczos order");
    cmd->add_flag("--no-noise", args.no_noise, "disable Poisson noise");
    cmd->add_option("--nr", args.resolution, "metric sub-pixel resolution");
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--jobs", args.jobs, "concurrent benchmark cells");
    cmd->add_flag("--fits", args.fits, "also write FITS images");
  };

  CLI::App* sim = app.add_subcommand("simulate", "generate a benchmark tile");
  add_common(sim);
  CLI::App* est = app.add_subcommand("estimate", "estimate the PSF of a tile");
  add_common(est);
  est->add_option("--tile", tile_path, "input tile file")->required();
  CLI::App* eval = app.add_subcommand("evaluate", "score a PSF estimate");
  add_common(eval);
  eval->add_option("--psf", psf_path, "PSF file")->required();
  CLI::App* bench = app.add_subcommand("benchmark", "run the full grid");
  add_common(bench);
  bench->add_option("--shapes", shapes_arg, "comma-separated shapes");
  bench->add_option("--densities", densities_arg, "comma-separated densities");
  bench->add_option("--seeds", seeds_arg, "comma-separated seeds");
  CLI::App* slices =
      app.add_subcommand("export-slices", "emit plot-ready slice CSV");
  add_common(slices);
  slices->add_option("--psf", psf_path, "PSF file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sim->parsed()) return cmd_simulate(args);
    if (est->parsed()) return cmd_estimate(args, tile_path);
    if (eval->parsed()) return cmd_evaluate(args, psf_path);
    if (bench->parsed())
      return cmd_benchmark(args, shapes_arg, densities_arg, seeds_arg);
    if (slices->parsed()) return cmd_export_slices(args, psf_path);
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
