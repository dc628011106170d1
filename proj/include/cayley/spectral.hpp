#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "cayley/errors.hpp"

namespace cayley {

struct SpectralOptions {
  /// Absolute tolerance on the returned Perron root.
  double tol = 1e-12;
  /// Power-iteration budget per irreducible block.
  int max_iterations = 100'000;
};

namespace detail {

/// Strongly connected components of the digraph with an edge i -> j whenever
/// matrix[i][j] > 0, via iterative Tarjan. Returns one vertex list per
/// component.
inline std::vector<std::vector<int>> strong_components(const std::vector<std::vector<double>>& matrix) {
  const int n = static_cast<int>(matrix.size());
  std::vector<int> index(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<std::size_t>(n), false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int vertex;
    int edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    index[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] = next_index++;
    stack.push_back(root);
    on_stack[static_cast<std::size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& frame = frames.back();
      const int v = frame.vertex;
      if (frame.edge < n) {
        const int w = frame.edge++;
        if (matrix[static_cast<std::size_t>(v)][static_cast<std::size_t>(w)] <= 0.0) continue;
        if (index[static_cast<std::size_t>(w)] == -1) {
          index[static_cast<std::size_t>(w)] = low[static_cast<std::size_t>(w)] = next_index++;
          stack.push_back(w);
          on_stack[static_cast<std::size_t>(w)] = true;
          frames.push_back(Frame{w, 0});
        } else if (on_stack[static_cast<std::size_t>(w)]) {
          low[static_cast<std::size_t>(v)] =
              std::min(low[static_cast<std::size_t>(v)], index[static_cast<std::size_t>(w)]);
        }
        continue;
      }
      if (low[static_cast<std::size_t>(v)] == index[static_cast<std::size_t>(v)]) {
        std::vector<int> component;
        while (true) {
          const int w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          component.push_back(w);
          if (w == v) break;
        }
        components.push_back(std::move(component));
      }
      frames.pop_back();
      if (!frames.empty()) {
        const int parent = frames.back().vertex;
        low[static_cast<std::size_t>(parent)] =
            std::min(low[static_cast<std::size_t>(parent)], low[static_cast<std::size_t>(v)]);
      }
    }
  }
  return components;
}

/// Perron root of an irreducible nonnegative block by power iteration on
/// block + I (the shift makes the iteration primitive, so the Collatz
/// bounds min_i (Ax)_i/x_i <= rho(A) <= max_i (Ax)_i/x_i close geometrically).
inline double irreducible_perron_root(const std::vector<std::vector<double>>& matrix,
                                      const std::vector<int>& vertices,
                                      const SpectralOptions& options) {
  const std::size_t size = vertices.size();
  std::vector<std::vector<double>> shifted(size, std::vector<double>(size, 0.0));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j)
      shifted[i][j] = matrix[static_cast<std::size_t>(vertices[i])][static_cast<std::size_t>(vertices[j])];
    shifted[i][i] += 1.0;
  }
  std::vector<double> x(size, 1.0);
  std::vector<double> y(size, 0.0);
  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    double peak = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < size; ++j) acc += shifted[i][j] * x[j];
      y[i] = acc;
      const double ratio = acc / x[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      peak = std::max(peak, acc);
    }
    if (hi - lo <= options.tol) return 0.5 * (lo + hi) - 1.0;
    for (std::size_t i = 0; i < size; ++i) x[i] = y[i] / peak;
  }
  throw NumericalFailureError("spectral_radius: power iteration exceeded its budget");
}

}  // namespace detail

/// Spectral radius of a square nonnegative matrix. The matrix is split into
/// strongly connected components; single vertices contribute their diagonal
/// entry exactly and every larger (irreducible) block is handled by shifted
/// power iteration, so reducible and periodic inputs converge too.
inline double spectral_radius(const std::vector<std::vector<double>>& matrix,
                              const SpectralOptions& options = {}) {
  const std::size_t n = matrix.size();
  for (const auto& row : matrix) {
    if (row.size() != n) throw std::invalid_argument("spectral_radius: matrix must be square");
    for (double value : row) {
      if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("spectral_radius: entries must be finite and nonnegative");
    }
  }
  if (n == 0) return 0.0;
  double radius = 0.0;
  for (const auto& component : detail::strong_components(matrix)) {
    if (component.size() == 1) {
      const std::size_t v = static_cast<std::size_t>(component.front());
      radius = std::max(radius, matrix[v][v]);
    } else {
      radius = std::max(radius, detail::irreducible_perron_root(matrix, component, options));
    }
  }
  return radius;
}

/// Convenience overload for integer matrices.
inline double spectral_radius(const std::vector<std::vector<int>>& matrix,
                              const SpectralOptions& options = {}) {
  std::vector<std::vector<double>> converted(matrix.size());
  for (std::size_t i = 0; i < matrix.size(); ++i)
    converted[i].assign(matrix[i].begin(), matrix[i].end());
  return spectral_radius(converted, options);
}

}  // namespace cayley
