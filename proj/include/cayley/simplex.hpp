#pragma once

/// Exact linear programming over the rationals.
///
/// A small dense two-phase simplex solver on GMP rationals. Every pivot is
/// exact, so feasibility and optimality are decided without tolerances;
/// Bland's anti-cycling rule guarantees termination. Intended for the small
/// programs that arise when separating corner sets of a cube, not for large
/// scale optimization.

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace cayley {

using Rational = mpq_class;

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

/// Outcome of solve_lp. `objective` and `x` are meaningful only when the
/// status is kOptimal.
struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  Rational objective;
  std::vector<Rational> x;
};

namespace detail {

/// One simplex pivot on (row, col): scale the pivot row to a unit pivot and
/// eliminate the pivot column from every other row, the objective included.
inline void pivot(std::vector<std::vector<Rational>>& rows, std::vector<Rational>& objective,
                  std::vector<int>& basis, std::size_t row, std::size_t col) {
  auto& pivot_row = rows[row];
  const Rational inverse = 1 / pivot_row[col];
  for (auto& value : pivot_row) value *= inverse;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == row) continue;
    const Rational factor = rows[i][col];
    if (factor == 0) continue;
    for (std::size_t j = 0; j < rows[i].size(); ++j) rows[i][j] -= factor * pivot_row[j];
  }
  const Rational factor = objective[col];
  if (factor != 0)
    for (std::size_t j = 0; j < objective.size(); ++j) objective[j] -= factor * pivot_row[j];
  basis[row] = static_cast<int>(col);
}

/// Run simplex iterations until no reduced cost is positive. Columns at or
/// beyond `usable` never enter the basis. Returns false when an improving
/// column has no positive entry, i.e. the objective is unbounded.
inline bool improve(std::vector<std::vector<Rational>>& rows, std::vector<Rational>& objective,
                    std::vector<int>& basis, std::size_t usable) {
  const std::size_t rhs = objective.size() - 1;
  while (true) {
    std::size_t entering = rhs;
    for (std::size_t j = 0; j < usable; ++j) {
      if (objective[j] > 0) {
        entering = j;
        break;
      }
    }
    if (entering == rhs) return true;
    std::size_t leaving = rows.size();
    Rational best_ratio;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i][entering] <= 0) continue;
      Rational ratio = rows[i][rhs] / rows[i][entering];
      if (leaving == rows.size() || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[leaving])) {
        leaving = i;
        best_ratio = ratio;
      }
    }
    if (leaving == rows.size()) return false;
    pivot(rows, objective, basis, leaving, entering);
  }
}

}  // namespace detail

/// Maximize `c . x` subject to `A x <= b` and `x >= 0`, exactly.
///
/// `a` is a dense constraint matrix with one row per constraint; `b` may be
/// negative, in which case a phase-one search establishes feasibility first.
inline LpResult solve_lp(const std::vector<std::vector<Rational>>& a,
                         const std::vector<Rational>& b, const std::vector<Rational>& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  if (b.size() != m) throw std::invalid_argument("solve_lp: rhs size mismatch");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("solve_lp: row size mismatch");

  // Columns: n originals, m slacks, then one artificial per negated row.
  std::vector<std::size_t> artificial_rows;
  for (std::size_t i = 0; i < m; ++i)
    if (b[i] < 0) artificial_rows.push_back(i);
  const std::size_t plain_cols = n + m;
  const std::size_t total_cols = plain_cols + artificial_rows.size();

  std::vector<std::vector<Rational>> rows(m, std::vector<Rational>(total_cols + 1, Rational(0)));
  std::vector<int> basis(m, -1);
  std::size_t next_artificial = plain_cols;
  for (std::size_t i = 0; i < m; ++i) {
    const bool negate = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) rows[i][j] = negate ? -a[i][j] : a[i][j];
    rows[i][n + i] = negate ? Rational(-1) : Rational(1);
    rows[i][total_cols] = negate ? -b[i] : b[i];
    if (negate) {
      rows[i][next_artificial] = 1;
      basis[i] = static_cast<int>(next_artificial++);
    } else {
      basis[i] = static_cast<int>(n + i);
    }
  }

  if (!artificial_rows.empty()) {
    // Phase one: maximize minus the artificial sum; feasible iff it reaches 0.
    std::vector<Rational> objective(total_cols + 1, Rational(0));
    for (std::size_t col = plain_cols; col < total_cols; ++col) objective[col] = -1;
    for (std::size_t i : artificial_rows)
      for (std::size_t j = 0; j <= total_cols; ++j) objective[j] += rows[i][j];
    detail::improve(rows, objective, basis, plain_cols);
    if (objective[total_cols] != 0) return LpResult{LpStatus::kInfeasible, Rational(0), {}};

    // Pivot any artificial still in the basis out (it sits at level zero);
    // a row with no eligible pivot is redundant and is dropped.
    for (std::size_t i = 0; i < rows.size();) {
      if (basis[i] < static_cast<int>(plain_cols)) {
        ++i;
        continue;
      }
      std::size_t col = plain_cols;
      for (std::size_t j = 0; j < plain_cols; ++j)
        if (rows[i][j] != 0) {
          col = j;
          break;
        }
      if (col < plain_cols) {
        detail::pivot(rows, objective, basis, i, col);
        ++i;
      } else {
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
    // Drop the artificial columns; nothing references them any more.
    for (auto& row : rows)
      row.erase(row.begin() + static_cast<std::ptrdiff_t>(plain_cols),
                row.begin() + static_cast<std::ptrdiff_t>(total_cols));
  }

  // Phase two: the real objective, with basic columns eliminated.
  std::vector<Rational> objective(plain_cols + 1, Rational(0));
  for (std::size_t j = 0; j < n; ++j) objective[j] = c[j];
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Rational factor = objective[static_cast<std::size_t>(basis[i])];
    if (factor == 0) continue;
    for (std::size_t j = 0; j <= plain_cols; ++j) objective[j] -= factor * rows[i][j];
  }
  if (!detail::improve(rows, objective, basis, plain_cols))
    return LpResult{LpStatus::kUnbounded, Rational(0), {}};

  LpResult result;
  result.status = LpStatus::kOptimal;
  result.objective = -objective[plain_cols];
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (basis[i] >= 0 && static_cast<std::size_t>(basis[i]) < n)
      result.x[static_cast<std::size_t>(basis[i])] = rows[i][plain_cols];
  return result;
}

}  // namespace cayley
