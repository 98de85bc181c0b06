#include "quadswe/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace quadswe {

ErrorReport error_norms(const LatticeField& field, const LatticeField& reference) {
  const auto& a = field.rect;
  const auto& b = reference.rect;
  if (field.nx != reference.nx || field.ny != reference.ny || a.x0 != b.x0 || a.y0 != b.y0 ||
      a.width != b.width || a.height != b.height)
    throw std::invalid_argument("error_norms: fields cover different lattices");
  ErrorReport rep;
  const double area = field.cell_area();
  for (size_t k = 0; k < field.v.size(); ++k) {
    const double d = std::abs(field.v[k] - reference.v[k]);
    rep.l1 += d * area;
    rep.linf = std::max(rep.linf, d);
  }
  return rep;
}

LatticeField sample_w(const QuadtreeGrid& grid, const GridState& state, int nx, int ny) {
  LatticeField f;
  f.nx = nx;
  f.ny = ny;
  f.rect = grid.root();
  f.v.resize(size_t(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const CellRef c = grid.locate(f.center_x(i), f.center_y(j));
      f.at(i, j) = state.w[grid.leaf_index(c)];
    }
  return f;
}

void dump_solution(const QuadtreeGrid& grid, const GridState& state, const BathymetryData& bathy,
                   std::ostream& os, double t) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "# quadswe-solution v1 t=%.17g\n", t);
  os << buf;
  for (int i = 0; i < grid.num_leaves(); ++i) {
    const CellRef& c = grid.leaves()[i];
    std::snprintf(buf, sizeof buf,
                  "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", c.level, c.ix,
                  c.iy, grid.center_x(c), grid.center_y(c), grid.dx(c), grid.dy(c), state.w[i],
                  state.hu[i], state.hv[i], bathy.center(i));
    os << buf;
  }
  if (!os) throw std::runtime_error("dump_solution: write failed");
}

SolutionData load_solution(std::istream& is) {
  std::string header;
  std::getline(is, header);
  double t = 0.0;
  if (std::sscanf(header.c_str(), "# quadswe-solution v1 t=%lg", &t) != 1)
    throw config_error("solution file: bad header: " + header);

  struct Row {
    CellRef c;
    double xc, yc, dx, dy, w, hu, hv, b;
  };
  std::vector<Row> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    Row r;
    if (std::sscanf(line.c_str(), "%d,%d,%d,%lg,%lg,%lg,%lg,%lg,%lg,%lg,%lg", &r.c.level, &r.c.ix,
                    &r.c.iy, &r.xc, &r.yc, &r.dx, &r.dy, &r.w, &r.hu, &r.hv, &r.b) != 11)
      throw config_error("solution file: bad row: " + line);
    rows.push_back(r);
  }
  if (rows.empty()) throw config_error("solution file: no rows");

  int m = 1;
  for (const Row& r : rows) m = std::max(m, r.c.level);
  const Row& r0 = rows.front();
  const double w_dom = r0.dx * double(1 << r0.c.level);
  const double h_dom = r0.dy * double(1 << r0.c.level);

  std::ostringstream grid_text;
  char buf[256];
  std::snprintf(buf, sizeof buf, "# quadswe-grid v1 %.17g %.17g %d\n", w_dom, h_dom, m);
  grid_text << buf;
  for (const Row& r : rows) {
    std::snprintf(buf, sizeof buf, "%d %d %d %.17g %.17g %.17g %.17g 1\n", r.c.level, r.c.ix,
                  r.c.iy, r.xc, r.yc, r.dx, r.dy);
    grid_text << buf;
  }
  std::istringstream grid_in(grid_text.str());
  SolutionData out{QuadtreeGrid::load(grid_in), {}, {}, t};

  const int n = out.grid.num_leaves();
  out.state = GridState::zeros(n, 1.0);
  out.b_center.resize(n);
  for (const Row& r : rows) {
    const int i = out.grid.leaf_index(r.c);
    out.state.w[i] = r.w;
    out.state.hu[i] = r.hu;
    out.state.hv[i] = r.hv;
    out.b_center[i] = r.b;
  }
  return out;
}

void write_sample_matrix(const QuadtreeGrid& grid, const GridState& state, int nx, int ny,
                         std::ostream& os) {
  const LatticeField f = sample_w(grid, state, nx, ny);
  char buf[64];
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      std::snprintf(buf, sizeof buf, "%s%.17g", i ? " " : "", f.at(i, j));
      os << buf;
    }
    os << "\n";
  }
}

std::string diagnostics_line(int step, double t, double dt, double min_h, double mass, double max_w,
                             int cells) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%d %.12g %.12g %.12g %.15g %.12g %d", step, t, dt, min_h, mass,
                max_w, cells);
  return buf;
}

}  // namespace quadswe
