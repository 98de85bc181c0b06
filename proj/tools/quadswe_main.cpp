#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "quadswe/benchmarks.hpp"
#include "quadswe/threading.hpp"

namespace fs = std::filesystem;
using namespace quadswe;

namespace {

SourceMode parse_source_mode(const std::string& v) {
  if (v == "well-balanced") return SourceMode::well_balanced;
  if (v == "naive-as-printed") return SourceMode::naive_as_printed;
  if (v == "naive-y-fixed") return SourceMode::naive_y_fixed;
  throw config_error("unknown source mode: " + v);
}

void write_solution_file(const Simulation& sim, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  dump_solution(sim.grid(), sim.state(), sim.bathy(), f, sim.time());
}

int run_simulation(RunConfig cfg, const std::string& out_dir, int sample_nx, int sample_ny) {
  if (!out_dir.empty()) {
    cfg.out_dir = out_dir;
    fs::create_directories(out_dir);
  }

  Simulation sim(std::move(cfg));
  const RunConfig& c = sim.config();

  {
    std::ostringstream initial;
    sim.grid().dump(initial);
    if (!c.out_dir.empty()) {
      std::ofstream f(fs::path(c.out_dir) / (c.name + "_grid_initial.txt"));
      f << initial.str();
    }
  }
  std::cout << "# " << c.name << ": m=" << c.m << " c_seed=" << c.c_seed << " g=" << c.g
            << " t_end=" << c.t_end << " cells=" << sim.grid().num_leaves() << "\n";
  std::cout << "# step t dt min_h mass max_w cells\n";

  int dumps = 0;
  while (!sim.done()) {
    const StepInfo info = sim.step();
    std::cout << diagnostics_line(info.step, info.t, info.dt, info.min_h, info.mass, info.max_w,
                                  info.cells)
              << "\n";
    if (info.regridded) {
      const RegridReport& r = info.regrid;
      std::cout << "# regrid " << r.old_cells << " -> " << r.new_cells << " copied=" << r.copied
                << " prolonged=" << r.prolonged << " restricted=" << r.restricted
                << " mass_delta=" << (r.mass_after - r.mass_before) << "\n";
    }
    if (!c.out_dir.empty() && c.output_every > 0 && info.step % c.output_every == 0) {
      char name[128];
      std::snprintf(name, sizeof name, "%s_%05d.csv", c.name.c_str(), ++dumps);
      write_solution_file(sim, fs::path(c.out_dir) / name);
    }
  }

  if (!c.out_dir.empty()) {
    write_solution_file(sim, fs::path(c.out_dir) / (c.name + "_final.csv"));
    if (sample_nx > 0 && sample_ny > 0) {
      std::ofstream f(fs::path(c.out_dir) / (c.name + "_sample.txt"));
      write_sample_matrix(sim.grid(), sim.state(), sample_nx, sample_ny, f);
    }
    std::ofstream f(fs::path(c.out_dir) / (c.name + "_grid_final.txt"));
    sim.grid().dump(f);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive central-upwind shallow-water solver on quadtree grids"};
  app.require_subcommand(1);

  std::string config_path, out_dir, source_mode_str;
  std::string bench_id;
  int m_override = -1;
  double cseed_override = -1.0;
  std::vector<int> sample;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--m", m_override, "max refinement level");
    sub->add_option("--cseed", cseed_override, "seeding threshold");
    sub->add_option("--source-mode", source_mode_str,
                    "well-balanced | naive-as-printed | naive-y-fixed");
    sub->add_option("--sample", sample, "raster sample size NX NY")->expected(2);
    sub->add_option("--threads", threads, "worker threads (0 = default)");
  };

  CLI::App* run = app.add_subcommand("run", "run a config file");
  run->add_option("--config", config_path, "flat key = value config file")->required();
  add_common(run);

  CLI::App* bench = app.add_subcommand("bench", "run a built-in benchmark (ex1..ex6)");
  bench->add_option("id", bench_id, "benchmark id")->required();
  add_common(bench);

  CLI11_PARSE(app, argc, argv);

  try {
    threading::set_num_threads(threads);
    RunConfig cfg;
    if (app.got_subcommand(run)) {
      std::ifstream f(config_path);
      if (!f) throw config_error("cannot open config file: " + config_path);
      cfg = parse_config(f);
    } else {
      if (!is_benchmark_id(bench_id)) throw config_error("unknown benchmark: " + bench_id);
      cfg = make_benchmark(bench_id);
    }
    if (m_override > 0) cfg.m = m_override;
    if (cseed_override > 0) cfg.c_seed = cseed_override;
    if (!source_mode_str.empty()) cfg.source_mode = parse_source_mode(source_mode_str);
    const int snx = sample.size() == 2 ? sample[0] : 0;
    const int sny = sample.size() == 2 ? sample[1] : 0;
    return run_simulation(std::move(cfg), out_dir, snx, sny);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
