#pragma once

/// Parameter-plane analysis for tree networks with fixed child couplings.
///
/// With the couplings frozen, the admissibility inequalities depend on (a, z)
/// only through the sheared coordinates s = a-1+z and t = a-1-z, where every
/// region boundary is an axis-parallel line through a signed coupling sum.
/// This header builds that exact cell decomposition, sweeps rectangular
/// (a, z) grids classifying entropy and criticality, and serializes the
/// results as CSV or SVG.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "cayley/ctnn.hpp"
#include "cayley/errors.hpp"

namespace cayley {

/// One open cell of the (a, z)-plane partition, rectangular in (s, t).
struct PlaneCell {
  RegionCode code;
  double s_lo = 0.0;  ///< open bounds in s = a-1+z; +-infinity at the rim
  double s_hi = 0.0;
  double t_lo = 0.0;  ///< open bounds in t = a-1-z
  double t_hi = 0.0;
  double rep_a = 0.0;  ///< an interior representative, back in (a, z)
  double rep_z = 0.0;
};

struct PlanePartition {
  ChildCouplings cc;
  std::vector<PlaneCell> cells;  ///< p ascending, then q ascending
  bool degenerate = false;
};

namespace detail {

struct AxisInterval {
  double lo;
  double hi;
  int count;  ///< patterns admitted anywhere inside the interval
};

/// Cut one axis at the given breakpoints. `counts[i]` is the pattern count
/// for the i-th interval, ascending.
inline std::vector<AxisInterval> cut_axis(const std::vector<double>& breaks,
                                          const std::vector<int>& counts) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<AxisInterval> out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double lo = i == 0 ? -inf : breaks[i - 1];
    const double hi = i == counts.size() - 1 ? inf : breaks[i];
    out.push_back(AxisInterval{lo, hi, counts[i]});
  }
  return out;
}

inline double interior_point(double lo, double hi) {
  if (std::isinf(lo) && std::isinf(hi)) return 0.0;
  if (std::isinf(lo)) return hi - 1.0;
  if (std::isinf(hi)) return lo + 1.0;
  return (lo + hi) / 2.0;
}

}  // namespace detail

/// Decompose the (a, z) plane into the open cells on which the basic set is
/// constant. With m distinct signed coupling sums there are (m+1)^2 cells;
/// each carries its region code and an interior representative.
inline PlanePartition partition_plane(const ChildCouplings& cc) {
  PlanePartition partition;
  partition.cc = cc;
  partition.degenerate = cc.degenerate;
  const std::size_t m = cc.distinct.size();
  const int total = static_cast<int>(cc.sums.size());

  // Multiplicity of each distinct sum, then cumulative pattern counts.
  std::vector<int> mult(m, 0);
  {
    std::size_t at = 0;
    for (double value : cc.sums) {
      while (cc.distinct[at] != value) ++at;
      ++mult[at];
    }
  }
  // p(s) = #{v : alpha.v > -s} jumps at s = -sum, so the s-axis breakpoints
  // are the negated distinct sums in ascending order.
  std::vector<double> s_breaks(m);
  for (std::size_t i = 0; i < m; ++i) s_breaks[i] = -cc.distinct[m - 1 - i];
  std::vector<int> p_counts(m + 1, 0);
  for (std::size_t i = 1; i <= m; ++i)
    p_counts[i] = p_counts[i - 1] + mult[m - i];
  // q(t) = #{v : alpha.v < t} jumps at t = sum.
  std::vector<int> q_counts(m + 1, 0);
  for (std::size_t i = 1; i <= m; ++i) q_counts[i] = q_counts[i - 1] + mult[i - 1];
  if (p_counts.back() != total || q_counts.back() != total)
    throw InternalInconsistencyError("partition_plane: multiplicity bookkeeping broke");

  const auto s_axis = detail::cut_axis(s_breaks, p_counts);
  const auto t_axis = detail::cut_axis(cc.distinct, q_counts);
  for (const auto& s_cell : s_axis) {
    for (const auto& t_cell : t_axis) {
      PlaneCell cell;
      cell.code = RegionCode{s_cell.count, t_cell.count};
      cell.s_lo = s_cell.lo;
      cell.s_hi = s_cell.hi;
      cell.t_lo = t_cell.lo;
      cell.t_hi = t_cell.hi;
      const double s = detail::interior_point(cell.s_lo, cell.s_hi);
      const double t = detail::interior_point(cell.t_lo, cell.t_hi);
      cell.rep_a = 1.0 + (s + t) / 2.0;
      cell.rep_z = (s - t) / 2.0;
      partition.cells.push_back(cell);
    }
  }
  return partition;
}

/// One classified sample of a sweep. Boundary samples carry p = q = -1 and a
/// NaN entropy and are excluded from any statistics.
struct SweepPoint {
  double a = 0.0;
  double z = 0.0;
  int p = -1;
  int q = -1;
  double entropy = std::numeric_limits<double>::quiet_NaN();
  bool critical = false;
  bool boundary = false;
};

struct SweepGrid {
  std::vector<double> a_values;
  std::vector<double> z_values;
  std::vector<SweepPoint> points;  ///< row-major with z outer: points[zi * |a| + ai]
};

/// Classify every node of a rectangular (a, z) grid: region code, entropy,
/// criticality (within `tol`, default one a-step), boundary flag. Rows are
/// distributed over `workers` threads; the output is identical for any
/// worker count because every point lands at its own index.
inline SweepGrid sweep(const ChildCouplings& cc, std::pair<double, double> a_range,
                       std::pair<double, double> z_range, int resolution, int workers = 1,
                       std::optional<double> tol = std::nullopt) {
  if (resolution < 2) throw std::invalid_argument("sweep: resolution must be >= 2");
  if (!(a_range.first < a_range.second) || !(z_range.first < z_range.second))
    throw std::invalid_argument("sweep: ranges must be nonempty");
  if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
  const int n = resolution;
  const double a_step = (a_range.second - a_range.first) / (n - 1);
  const double z_step = (z_range.second - z_range.first) / (n - 1);
  const double critical_tol = tol.value_or(a_step);
  if (!(critical_tol > 0.0)) throw std::invalid_argument("sweep: tolerance must be positive");

  SweepGrid grid;
  for (int i = 0; i < n; ++i) grid.a_values.push_back(a_range.first + a_step * i);
  for (int i = 0; i < n; ++i) grid.z_values.push_back(z_range.first + z_step * i);
  grid.points.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), SweepPoint{});

  const int degree = static_cast<int>(cc.alpha.size());
  auto run_rows = [&](int row_begin, int row_end, std::exception_ptr& failure) {
    try {
      for (int zi = row_begin; zi < row_end; ++zi) {
        const double z = grid.z_values[static_cast<std::size_t>(zi)];
        const double curve = critical_a(cc, z);
        for (int ai = 0; ai < n; ++ai) {
          const double a = grid.a_values[static_cast<std::size_t>(ai)];
          SweepPoint point;
          point.a = a;
          point.z = z;
          point.critical = std::abs(a - curve) <= critical_tol;
          try {
            const CtnnEntropy result = ctnn_entropy(Template{degree, a, cc.alpha, z});
            point.p = result.code.p;
            point.q = result.code.q;
            point.entropy = result.entropy;
          } catch (const BoundaryParameterError&) {
            point.boundary = true;
          }
          grid.points[static_cast<std::size_t>(zi) * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(ai)] = point;
        }
      }
    } catch (...) {
      failure = std::current_exception();
    }
  };

  const int thread_count = std::min(workers, n);
  if (thread_count == 1) {
    std::exception_ptr failure;
    run_rows(0, n, failure);
    if (failure) std::rethrow_exception(failure);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(thread_count));
    const int chunk = (n + thread_count - 1) / thread_count;
    for (int w = 0; w < thread_count; ++w) {
      const int begin = w * chunk;
      const int end = std::min(n, begin + chunk);
      threads.emplace_back(run_rows, begin, end, std::ref(failures[static_cast<std::size_t>(w)]));
    }
    for (auto& thread : threads) thread.join();
    for (const auto& failure : failures)
      if (failure) std::rethrow_exception(failure);
  }
  return grid;
}

namespace detail {

inline std::string format_real(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

}  // namespace detail

/// Render a sweep as CSV: header a,z,p,q,entropy,critical,boundary, one data
/// row per grid point with z varying slowest, %.12g reals, LF endings, and
/// the literal "nan" as the entropy of boundary rows.
inline std::string to_csv(const SweepGrid& grid) {
  std::string out = "a,z,p,q,entropy,critical,boundary\n";
  for (const SweepPoint& point : grid.points) {
    out += detail::format_real(point.a);
    out += ',';
    out += detail::format_real(point.z);
    out += ',';
    out += std::to_string(point.p);
    out += ',';
    out += std::to_string(point.q);
    out += ',';
    out += point.boundary ? "nan" : detail::format_real(point.entropy);
    out += ',';
    out += point.critical ? '1' : '0';
    out += ',';
    out += point.boundary ? '1' : '0';
    out += '\n';
  }
  return out;
}

/// Render a sweep as a static SVG: one cell per grid point colored by
/// entropy class (positive entropy dark, zero light, boundary gray) with the
/// closed-form critical curve overlaid as a red polyline.
inline std::string to_svg(const SweepGrid& grid, const ChildCouplings& cc) {
  const int width = 800;
  const int height = 640;
  const int margin = 60;
  const double plot_w = width - 2.0 * margin;
  const double plot_h = height - 2.0 * margin;
  const double a_lo = grid.a_values.front();
  const double a_hi = grid.a_values.back();
  const double z_lo = grid.z_values.front();
  const double z_hi = grid.z_values.back();
  auto x_of = [&](double a) { return margin + (a - a_lo) / (a_hi - a_lo) * plot_w; };
  auto y_of = [&](double z) { return margin + (z_hi - z) / (z_hi - z_lo) * plot_h; };
  const double cell_w = plot_w / (grid.a_values.size() - 1);
  const double cell_h = plot_h / (grid.z_values.size() - 1);

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(width) + "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " +
         std::to_string(width) + " " + std::to_string(height) + "\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  for (const SweepPoint& point : grid.points) {
    const char* fill = "#dce9f5";
    if (point.boundary)
      fill = "#9e9e9e";
    else if (point.entropy > 1e-9)
      fill = "#1f4e79";
    out += "<rect x=\"" + detail::format_real(x_of(point.a) - cell_w / 2.0) + "\" y=\"" +
           detail::format_real(y_of(point.z) - cell_h / 2.0) + "\" width=\"" +
           detail::format_real(cell_w) + "\" height=\"" + detail::format_real(cell_h) +
           "\" fill=\"" + fill + "\"/>\n";
  }
  out += "<polyline fill=\"none\" stroke=\"#cc0000\" stroke-width=\"2\" points=\"";
  const int samples = 4 * static_cast<int>(grid.z_values.size());
  for (int i = 0; i <= samples; ++i) {
    const double z = z_lo + (z_hi - z_lo) * i / samples;
    const double a = std::clamp(critical_a(cc, z), a_lo, a_hi);
    if (i > 0) out += ' ';
    out += detail::format_real(x_of(a)) + "," + detail::format_real(y_of(z));
  }
  out += "\"/>\n";
  out += "<text x=\"" + std::to_string(width / 2) + "\" y=\"" + std::to_string(height - margin / 3) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">a</text>\n";
  out += "<text x=\"" + std::to_string(margin / 3) + "\" y=\"" + std::to_string(height / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">z</text>\n";
  out += "</svg>\n";
  return out;
}

enum class DiagramFormat { kCsv, kSvg };

/// Write a sweep to disk in the chosen format.
inline void emit_diagram(const SweepGrid& grid, const ChildCouplings& cc, DiagramFormat format,
                         const std::string& path) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw Error("emit_diagram: cannot open '" + path + "' for writing");
  stream << (format == DiagramFormat::kCsv ? to_csv(grid) : to_svg(grid, cc));
  stream.flush();
  if (!stream) throw Error("emit_diagram: failed while writing '" + path + "'");
}

/// Census of the basic sets reachable from a family of coupling profiles:
/// per-profile distinct counts (evaluated at every cell representative of
/// that profile's partition) and the global catalog across all profiles.
struct BasicSetCatalog {
  std::vector<std::size_t> per_profile;
  std::size_t total = 0;
  std::vector<BasicSet> catalog;  ///< sorted, duplicates removed
};

inline BasicSetCatalog distinct_basic_sets(const std::vector<std::vector<double>>& profiles) {
  if (profiles.empty()) throw std::invalid_argument("distinct_basic_sets: no profiles");
  BasicSetCatalog result;
  std::set<BasicSet> global;
  for (const auto& alpha : profiles) {
    const ChildCouplings cc = child_couplings(alpha);
    const PlanePartition partition = partition_plane(cc);
    std::set<BasicSet> local;
    for (const PlaneCell& cell : partition.cells) {
      const int degree = static_cast<int>(alpha.size());
      const BasicSet basic =
          admissible_patterns(Template{degree, cell.rep_a, alpha, cell.rep_z});
      local.insert(basic);
      global.insert(basic);
    }
    result.per_profile.push_back(local.size());
  }
  result.total = global.size();
  result.catalog.assign(global.begin(), global.end());
  return result;
}

}  // namespace cayley
