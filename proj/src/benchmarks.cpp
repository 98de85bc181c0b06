#include "quadswe/benchmarks.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace quadswe {

namespace {

RunConfig base_config(const std::string& name) {
  RunConfig c;
  c.name = name;
  c.sigma = 0.9;
  c.regrid_every = 1;
  return c;
}

RunConfig make_ex1() {
  RunConfig c = base_config("ex1");
  c.domain = {0, 0, 2, 1};
  c.m = 7;
  c.c_seed = 0.0005;
  c.g = 1.0;
  c.t_end = 0.07;
  c.init_level = 5;
  c.bottom = {[](double x, double y) {
                return 0.5 * std::exp(-25.0 * (x - 1.0) * (x - 1.0) - 50.0 * (y - 0.5) * (y - 0.5));
              },
              true};
  c.w0 = [](double, double) { return 1.0; };
  c.u0 = [](double, double) { return 0.3; };
  c.bc = BoundarySpec::all(BcKind::zero_order);
  return c;
}

RunConfig make_ex2() {
  RunConfig c = base_config("ex2");
  c.domain = {0, 0, 2, 2};
  c.m = 8;
  c.c_seed = 0.1;
  c.g = 1.0;
  c.t_end = 0.2;
  c.init_level = 5;
  c.w0 = [](double x, double y) {
    return (x - 1.0) * (x - 1.0) + (y - 1.0) * (y - 1.0) < 0.25 ? 1.0 : 1e-16;
  };
  c.bc = BoundarySpec::all(BcKind::zero_order);
  return c;
}

RunConfig make_ex3(double eps) {
  RunConfig c = base_config("ex3");
  c.domain = {0, 0, 2, 1};
  c.m = 8;
  c.c_seed = 0.02;
  c.g = 1.0;
  c.t_end = 1.8;
  c.init_level = 5;
  c.bottom = {[](double x, double y) {
                return 0.8 * std::exp(-5.0 * (x - 0.9) * (x - 0.9) - 50.0 * (y - 0.5) * (y - 0.5));
              },
              true};
  c.w0 = [eps](double x, double) { return (0.05 < x && x < 0.15) ? 1.0 + eps : 1.0; };
  c.bc.left = {BcKind::zero_order, 0, 0, 0};
  c.bc.right = {BcKind::zero_order, 0, 0, 0};
  c.bc.bottom = {BcKind::wall, 0, 0, 0};
  c.bc.top = {BcKind::wall, 0, 0, 0};
  return c;
}

RunConfig make_ex4() {
  RunConfig c = base_config("ex4");
  const double eps = 1e-4;
  c.domain = {0, 0, 1, 1};
  c.m = 8;
  c.c_seed = 0.0002;
  c.g = 1.0;
  c.t_end = 0.65;
  c.init_level = 5;
  c.bottom = {[eps](double x, double y) {
                const double r = std::sqrt((x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5));
                if (r <= 0.1) return 1.0 - 2.0 * eps;
                if (r <= 0.2) return 10.0 * (1.0 - 2.0 * eps) * (0.2 - r);
                return 0.0;
              },
              true};
  c.w0 = [eps](double x, double) { return (0.1 <= x && x <= 0.2) ? 1.0 + eps : 1.0; };
  c.bc.left = {BcKind::zero_order, 0, 0, 0};
  c.bc.right = {BcKind::zero_order, 0, 0, 0};
  c.bc.bottom = {BcKind::wall, 0, 0, 0};
  c.bc.top = {BcKind::wall, 0, 0, 0};
  return c;
}

RunConfig make_ex5() {
  RunConfig c = base_config("ex5");
  c.domain = {0, 0, 4, 4};
  c.m = 8;
  c.c_seed = 0.1;
  c.g = 9.8;
  c.t_end = 0.2;
  c.init_level = 6;
  c.bottom = {[](double x, double y) {
                const double r2 = (x - 2.0) * (x - 2.0) + (y - 2.0) * (y - 2.0);
                return r2 <= 1.0 ? -0.2 : 0.0;
              },
              false};
  // w = B + h: 0.8 inside the column, 0.5 outside
  c.w0 = [](double x, double y) {
    const double r2 = (x - 2.0) * (x - 2.0) + (y - 2.0) * (y - 2.0);
    return r2 <= 1.0 ? 0.8 : 0.5;
  };
  c.bc = BoundarySpec::all(BcKind::zero_order);
  return c;
}

RunConfig make_ex6(bool flat) {
  RunConfig c = base_config("ex6");
  c.domain = {0, 0, 3, 1};
  c.m = 8;
  c.c_seed = 2.0;
  c.g = 1.0;
  c.t_end = 2.0;
  c.init_level = 5;
  if (!flat) {
    c.bottom = {[](double x, double y) {
                  return 0.95 * (std::exp(-10.0 * (x - 1.9) * (x - 1.9) - 50.0 * (y - 0.7) * (y - 0.7)) +
                                 std::exp(-20.0 * (x - 2.2) * (x - 2.2) - 50.0 * (y - 0.3) * (y - 0.3)));
                },
                true};
  }
  c.w0 = [](double, double) { return 1.0; };
  c.u0 = [](double, double) { return 2.0; };
  c.mask = [](double x, double y) {
    const double yb = x <= 1.0 ? 0.5 : 0.4;
    return std::abs(y - 0.5) <= yb;
  };
  c.bc.left = {BcKind::inflow, 1.0, 2.0, 0.0};
  c.bc.right = {BcKind::zero_order, 0, 0, 0};
  c.bc.bottom = {BcKind::wall, 0, 0, 0};
  c.bc.top = {BcKind::wall, 0, 0, 0};
  return c;
}

}  // namespace

bool is_benchmark_id(const std::string& id) {
  return id == "ex1" || id == "ex2" || id == "ex3" || id == "ex4" || id == "ex5" || id == "ex6";
}

RunConfig make_benchmark(const std::string& id, const BenchmarkOptions& opts) {
  if (id == "ex1") return make_ex1();
  if (id == "ex2") return make_ex2();
  if (id == "ex3") return make_ex3(opts.ex3_eps);
  if (id == "ex4") return make_ex4();
  if (id == "ex5") return make_ex5();
  if (id == "ex6") return make_ex6(opts.ex6_flat_bottom);
  throw config_error("unknown benchmark id: " + id);
}

namespace {

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: bad number for " + key + ": " + v);
  }
}

int to_int(const std::string& key, const std::string& v) {
  try {
    size_t pos = 0;
    const int x = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw config_error("config: bad integer for " + key + ": " + v);
  }
}

BcRule to_bc(const std::string& key, const std::string& v) {
  std::istringstream s(v);
  std::string kind;
  s >> kind;
  if (kind == "wall") return {BcKind::wall, 0, 0, 0};
  if (kind == "zero-order") return {BcKind::zero_order, 0, 0, 0};
  if (kind == "inflow") {
    BcRule r{BcKind::inflow, 0, 0, 0};
    if (!(s >> r.w_in >> r.u_in >> r.v_in))
      throw config_error("config: inflow needs `inflow W U V` for " + key);
    return r;
  }
  throw config_error("config: bad boundary rule for " + key + ": " + v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

RunConfig parse_config(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::vector<std::string> order;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw config_error("config line " + std::to_string(lineno) + ": empty key or value");
    kv[key] = val;
    order.push_back(key);
  }

  BenchmarkOptions opts;
  if (kv.count("ex3_eps")) opts.ex3_eps = to_double("ex3_eps", kv["ex3_eps"]);
  if (kv.count("ex6_bottom")) {
    const std::string v = kv["ex6_bottom"];
    if (v == "flat") opts.ex6_flat_bottom = true;
    else if (v == "humps") opts.ex6_flat_bottom = false;
    else throw config_error("config: ex6_bottom must be flat or humps");
  }

  RunConfig cfg;
  if (kv.count("benchmark")) {
    cfg = make_benchmark(kv["benchmark"], opts);
  } else {
    cfg = RunConfig{};
    cfg.name = "custom";
  }

  for (const auto& [key, val] : kv) {
    if (key == "benchmark" || key == "ex3_eps" || key == "ex6_bottom") continue;
    if (key == "domain") {
      std::istringstream s(val);
      if (!(s >> cfg.domain.x0 >> cfg.domain.y0 >> cfg.domain.width >> cfg.domain.height))
        throw config_error("config: domain needs `x0 y0 width height`");
    } else if (key == "m") cfg.m = to_int(key, val);
    else if (key == "c_seed") cfg.c_seed = to_double(key, val);
    else if (key == "g") cfg.g = to_double(key, val);
    else if (key == "t_end") cfg.t_end = to_double(key, val);
    else if (key == "sigma") cfg.sigma = to_double(key, val);
    else if (key == "dt_cap") cfg.dt_cap = to_double(key, val);
    else if (key == "regrid_every") cfg.regrid_every = to_int(key, val);
    else if (key == "init_level") cfg.init_level = to_int(key, val);
    else if (key == "output_every") cfg.output_every = to_int(key, val);
    else if (key == "w0") {
      const double c = to_double(key, val);
      cfg.w0 = [c](double, double) { return c; };
    } else if (key == "u0") {
      const double c = to_double(key, val);
      cfg.u0 = [c](double, double) { return c; };
    } else if (key == "v0") {
      const double c = to_double(key, val);
      cfg.v0 = [c](double, double) { return c; };
    } else if (key == "bottom") {
      if (val == "flat") {
        cfg.bottom = {[](double, double) { return 0.0; }, true};
      } else if (val.rfind("raster ", 0) == 0) {
        const std::string path = trim(val.substr(7));
        std::ifstream f(path);
        if (!f) throw config_error("config: cannot open raster file " + path);
        cfg.bottom = load_raster_bottom(f);
      } else {
        throw config_error("config: bottom must be `flat` or `raster <path>`");
      }
    } else if (key == "bc_left") cfg.bc.left = to_bc(key, val);
    else if (key == "bc_right") cfg.bc.right = to_bc(key, val);
    else if (key == "bc_bottom") cfg.bc.bottom = to_bc(key, val);
    else if (key == "bc_top") cfg.bc.top = to_bc(key, val);
    else if (key == "source_mode") {
      if (val == "well-balanced") cfg.source_mode = SourceMode::well_balanced;
      else if (val == "naive-as-printed") cfg.source_mode = SourceMode::naive_as_printed;
      else if (val == "naive-y-fixed") cfg.source_mode = SourceMode::naive_y_fixed;
      else throw config_error("config: unknown source_mode " + val);
    } else {
      throw config_error("config: unknown key " + key);
    }
  }
  return cfg;
}

}  // namespace quadswe
