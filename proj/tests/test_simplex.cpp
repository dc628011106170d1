#include "cayley/simplex.hpp"

#include <gtest/gtest.h>

#include <optional>
#include <random>
#include <vector>

namespace cayley {
namespace {

using Matrix = std::vector<std::vector<Rational>>;
using Vector = std::vector<Rational>;

Rational dot(const Vector& a, const Vector& b) {
  Rational sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

TEST(SolveLp, BoxMaximum) {
  const auto result = solve_lp({{1, 0}, {0, 1}}, {1, 2}, {1, 1});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(3));
  EXPECT_EQ(result.x, (Vector{1, 2}));
}

TEST(SolveLp, VertexOptimum) {
  const auto result = solve_lp({{1, 1}, {1, 3}}, {4, 6}, {2, 3});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(9));
  EXPECT_EQ(result.x, (Vector{3, 1}));
}

TEST(SolveLp, InfeasibleBound) {
  const auto result = solve_lp({{1}}, {-1}, {1});
  EXPECT_EQ(result.status, LpStatus::kInfeasible);
}

TEST(SolveLp, UnboundedRay) {
  EXPECT_EQ(solve_lp({{-1, 1}}, {1}, {1, 0}).status, LpStatus::kUnbounded);
  EXPECT_EQ(solve_lp({}, {}, {1}).status, LpStatus::kUnbounded);
}

TEST(SolveLp, NoConstraintsNonpositiveObjective) {
  const auto result = solve_lp({}, {}, {-1, 0});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(0));
  EXPECT_EQ(result.x, (Vector{0, 0}));
}

TEST(SolveLp, EqualityThroughOpposedInequalities) {
  // x + y = 2 encoded as a pair of inequalities; phase one must fire.
  const auto result = solve_lp({{1, 1}, {-1, -1}}, {2, -2}, {1, 0});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(2));
  EXPECT_EQ(result.x, (Vector{2, 0}));
}

TEST(SolveLp, RedundantEqualitiesDropRows) {
  const Matrix a{{1, 1}, {-1, -1}, {2, 2}, {-2, -2}};
  const auto result = solve_lp(a, {1, -1, 2, -2}, {0, 1});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(1));
}

TEST(SolveLp, NegativeRhsThenMinimize) {
  const auto result = solve_lp({{-1}, {1}}, {-1, 3}, {-1});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(-1));
  EXPECT_EQ(result.x, (Vector{1}));
}

TEST(SolveLp, ExactFractions) {
  const auto result = solve_lp({{Rational(1, 3)}}, {Rational(1, 7)}, {1});
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(3, 7));
}

TEST(SolveLp, CyclingProneInstanceTerminates) {
  // A classic degenerate instance on which naive pivoting cycles forever.
  const Matrix a{{Rational(1, 4), -60, Rational(-1, 25), 9},
                 {Rational(1, 2), -90, Rational(-1, 50), 3},
                 {0, 0, 1, 0}};
  const Vector b{0, 0, 1};
  const Vector c{Rational(3, 4), -150, Rational(1, 50), -6};
  const auto result = solve_lp(a, b, c);
  ASSERT_EQ(result.status, LpStatus::kOptimal);
  EXPECT_EQ(result.objective, Rational(1, 20));
  EXPECT_EQ(result.x, (Vector{Rational(1, 25), 0, 1, 0}));
}

// Independent oracle: enumerate every basic point of {A x <= b, x >= 0} by
// solving all n-subsets of tight constraints with exact Gaussian elimination,
// keep the feasible ones, and take the best objective.
std::optional<Vector> solve_square(Matrix m, Vector rhs) {
  const std::size_t n = rhs.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const Rational factor = m[row][col] / m[col][col];
      for (std::size_t j = col; j < n; ++j) m[row][j] -= factor * m[col][j];
      rhs[row] -= factor * rhs[col];
    }
  }
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

struct VertexScan {
  bool any_feasible = false;
  bool have_best = false;
  Rational best;
};

VertexScan scan_vertices(const Matrix& a, const Vector& b, const Vector& c) {
  const std::size_t m = a.size();
  const std::size_t n = c.size();
  // Constraint list: m inequality rows then n sign constraints -x_i <= 0.
  const std::size_t total = m + n;
  VertexScan scan;
  std::vector<std::size_t> pick(n, 0);
  std::vector<bool> chosen(total, false);
  auto feasible = [&](const Vector& x) {
    for (const Rational& v : x)
      if (v < 0) return false;
    for (std::size_t i = 0; i < m; ++i)
      if (dot(a[i], x) > b[i]) return false;
    return true;
  };
  // Iterate over all n-subsets of the constraints.
  std::vector<std::size_t> subset;
  auto recurse = [&](auto&& self, std::size_t from) -> void {
    if (subset.size() == n) {
      Matrix sys(n, Vector(n, Rational(0)));
      Vector rhs(n, Rational(0));
      for (std::size_t r = 0; r < n; ++r) {
        const std::size_t idx = subset[r];
        if (idx < m) {
          sys[r] = a[idx];
          rhs[r] = b[idx];
        } else {
          sys[r][idx - m] = -1;
        }
      }
      const auto x = solve_square(sys, rhs);
      if (x && feasible(*x)) {
        scan.any_feasible = true;
        const Rational value = dot(c, *x);
        if (!scan.have_best || value > scan.best) {
          scan.have_best = true;
          scan.best = value;
        }
      }
      return;
    }
    for (std::size_t i = from; i < total; ++i) {
      subset.push_back(i);
      self(self, i + 1);
      subset.pop_back();
    }
  };
  recurse(recurse, 0);
  return scan;
}

TEST(SolveLp, AgreesWithVertexEnumerationOracle) {
  std::mt19937_64 rng(2024);
  auto draw = [&](int lo, int hi) {
    return static_cast<long>(lo) + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  int optimal_seen = 0;
  int infeasible_seen = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 3);
    const std::size_t m = 1 + static_cast<std::size_t>(rng() % 4);
    Matrix a(m, Vector(n));
    Vector b(m);
    Vector c(n);
    for (auto& row : a)
      for (auto& value : row) value = draw(-2, 2);
    for (auto& value : b) value = draw(-1, 3);
    for (auto& value : c) value = draw(-2, 2);
    const auto result = solve_lp(a, b, c);
    const auto scan = scan_vertices(a, b, c);
    if (result.status == LpStatus::kOptimal) {
      ++optimal_seen;
      // The reported point must be feasible and match the claimed value.
      Rational check = dot(c, result.x);
      EXPECT_EQ(check, result.objective);
      for (const Rational& v : result.x) EXPECT_GE(sgn(v), 0);
      for (std::size_t i = 0; i < m; ++i) EXPECT_LE(sgn(dot(a[i], result.x) - b[i]), 0);
      ASSERT_TRUE(scan.have_best) << "trial " << trial;
      EXPECT_EQ(result.objective, scan.best) << "trial " << trial;
    } else if (result.status == LpStatus::kInfeasible) {
      ++infeasible_seen;
      EXPECT_FALSE(scan.any_feasible) << "trial " << trial;
    } else {
      // Unbounded: the region must at least be nonempty.
      EXPECT_TRUE(scan.any_feasible) << "trial " << trial;
    }
  }
  EXPECT_GT(optimal_seen, 20);
  EXPECT_GT(infeasible_seen, 5);
}

}  // namespace
}  // namespace cayley
