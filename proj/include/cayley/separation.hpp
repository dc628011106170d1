#pragma once

/// Linear separation on the discrete cube and template learning.
///
/// Separability of a vertex subset is decided exactly: maximize the margin t
/// subject to the separation inequalities and unit box bounds, with rational
/// simplex arithmetic, and accept iff the optimum is strictly positive. The
/// same machinery inverts the pattern-generation map: given a prescribed
/// basic set, a linear program over the template parameters either produces
/// a template realizing it or proves that none exists.

#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "cayley/ctnn.hpp"
#include "cayley/simplex.hpp"

namespace cayley {

enum class SeparationMode { kAffine, kHomogeneous };

/// A strict separator: weights . v + bias >= margin on the member set and
/// <= -margin off it, with margin > 0 and all coefficients in [-1, 1].
struct SeparatingFunctional {
  std::vector<Rational> weights;
  Rational bias;
  Rational margin;
};

namespace detail {

inline void validate_vertices(int degree, const std::set<SignVector>& members) {
  if (degree < 1 || degree > 10)
    throw std::invalid_argument("separation: need 1 <= degree <= 10");
  for (const SignVector& v : members) {
    if (static_cast<int>(v.size()) != degree)
      throw std::invalid_argument("separation: vertex arity does not match degree");
    for (int sign : v)
      if (sign != 1 && sign != -1)
        throw std::invalid_argument("separation: vertex entries must be +1 or -1");
  }
}

}  // namespace detail

/// Decide whether `members` and its complement in {-1,+1}^degree can be
/// strictly separated by an affine functional (or a linear one through the
/// origin in homogeneous mode). Empty and full member sets are separable by
/// a constant functional. Returns the maximum-margin separator, or nothing.
inline std::optional<SeparatingFunctional> is_linearly_separable(
    int degree, const std::set<SignVector>& members,
    SeparationMode mode = SeparationMode::kAffine) {
  detail::validate_vertices(degree, members);
  const bool affine = mode == SeparationMode::kAffine;
  // Shifted variables: u_i = c_i + 1 in [0,2], w = b + 1 in [0,2], then t.
  const std::size_t n = static_cast<std::size_t>(degree) + (affine ? 2 : 1);
  const std::size_t t_col = n - 1;
  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (const SignVector& v : sign_vectors(degree)) {
    long vertex_sum = 0;
    for (int sign : v) vertex_sum += sign;
    std::vector<Rational> row(n, Rational(0));
    const bool inside = members.count(v) > 0;
    // inside:  c.v + b >= t  <=>  -sum u_i v_i - w + t <= -(sum v_i) - 1
    // outside: c.v + b <= -t <=>   sum u_i v_i + w + t <=  (sum v_i) + 1
    const long sign = inside ? -1 : 1;
    for (int i = 0; i < degree; ++i)
      row[static_cast<std::size_t>(i)] = Rational(sign * v[static_cast<std::size_t>(i)]);
    if (affine) row[static_cast<std::size_t>(degree)] = Rational(sign);
    row[t_col] = 1;
    a.push_back(std::move(row));
    b.push_back(Rational(sign * vertex_sum + (affine ? sign : 0)));
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<Rational> row(n, Rational(0));
    row[i] = 1;
    a.push_back(std::move(row));
    b.push_back(Rational(2));
  }
  std::vector<Rational> objective(n, Rational(0));
  objective[t_col] = 1;
  const LpResult lp = solve_lp(a, b, objective);
  if (lp.status != LpStatus::kOptimal)
    throw InternalInconsistencyError("is_linearly_separable: separation program must be solvable");
  if (lp.objective <= 0) return std::nullopt;
  SeparatingFunctional functional;
  for (int i = 0; i < degree; ++i)
    functional.weights.push_back(lp.x[static_cast<std::size_t>(i)] - 1);
  functional.bias = affine ? lp.x[static_cast<std::size_t>(degree)] - 1 : Rational(0);
  functional.margin = lp.objective;
  return functional;
}

/// Which closed-form realizability condition a basic set satisfies.
enum class RealizableVia { kNone, kInv1, kInv2 };

struct RealizabilityCheck {
  bool realizable = false;
  RealizableVia condition = RealizableVia::kNone;
};

/// Check the two-sided criterion for a basic set to come from a template:
/// either the negated plus-set lies inside the minus-set and the minus-set
/// is separable (Inv1), or symmetrically with the roles swapped (Inv2).
inline RealizabilityCheck check_realizable(const BasicSet& basic) {
  detail::validate_vertices(basic.degree, basic.plus);
  detail::validate_vertices(basic.degree, basic.minus);
  auto contained = [](const std::set<SignVector>& inner, const std::set<SignVector>& outer) {
    for (const SignVector& v : inner)
      if (!outer.count(v)) return false;
    return true;
  };
  RealizabilityCheck check;
  if (contained(negate_all(basic.plus), basic.minus) &&
      is_linearly_separable(basic.degree, basic.minus)) {
    check.realizable = true;
    check.condition = RealizableVia::kInv1;
  } else if (contained(negate_all(basic.minus), basic.plus) &&
             is_linearly_separable(basic.degree, basic.plus)) {
    check.realizable = true;
    check.condition = RealizableVia::kInv2;
  }
  return check;
}

/// A learned template together with the exact margin it achieves.
struct RealizeResult {
  bool realizable = false;
  Template tmpl;
  Rational margin;
};

/// Invert admissible_patterns: search for template parameters (a, z, alpha)
/// whose strict inequalities admit exactly the prescribed plus- and
/// minus-sets, maximizing the slack margin, with all parameters confined to
/// [-10, 10]. The program is solved exactly; success means the returned
/// template reproduces the basic set with margin to spare.
inline RealizeResult realize(const BasicSet& basic) {
  detail::validate_vertices(basic.degree, basic.plus);
  detail::validate_vertices(basic.degree, basic.minus);
  const int d = basic.degree;
  // Shifted unknowns, all in [0, 20]: A = a+10, Z = z+10, U_i = alpha_i+10,
  // then the margin t. Membership in the plus-set demands
  // a-1+z+alpha.v >= t, membership in the minus-set a-1-z-alpha.v >= t, and
  // non-membership the corresponding <= -t.
  const std::size_t n = static_cast<std::size_t>(d) + 3;
  const std::size_t a_col = 0;
  const std::size_t z_col = 1;
  const std::size_t t_col = n - 1;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  auto add_row = [&](long a_sign, long z_sign, long alpha_sign, const SignVector& v, long bound) {
    std::vector<Rational> row(n, Rational(0));
    row[a_col] = Rational(a_sign);
    row[z_col] = Rational(z_sign);
    long vertex_sum = 0;
    for (int i = 0; i < d; ++i) {
      row[static_cast<std::size_t>(2 + i)] = Rational(alpha_sign * v[static_cast<std::size_t>(i)]);
      vertex_sum += v[static_cast<std::size_t>(i)];
    }
    row[t_col] = 1;
    rows.push_back(std::move(row));
    // Translate the shift by 10 of every parameter into the right-hand side.
    rhs.push_back(Rational(bound + 10 * (a_sign + z_sign + alpha_sign * vertex_sum)));
  };
  for (const SignVector& v : sign_vectors(d)) {
    if (basic.plus.count(v))
      add_row(-1, -1, -1, v, -1);  // -(a + z + alpha.v) + t <= -1
    else
      add_row(1, 1, 1, v, 1);  // a + z + alpha.v + t <= 1
    if (basic.minus.count(v))
      add_row(-1, 1, 1, v, -1);  // -a + z + alpha.v + t <= -1
    else
      add_row(1, -1, -1, v, 1);  // a - z - alpha.v + t <= 1
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::vector<Rational> row(n, Rational(0));
    row[i] = 1;
    rows.push_back(std::move(row));
    rhs.push_back(Rational(20));
  }
  std::vector<Rational> objective(n, Rational(0));
  objective[t_col] = 1;
  const LpResult lp = solve_lp(rows, rhs, objective);
  RealizeResult result;
  if (lp.status != LpStatus::kOptimal || lp.objective <= 0) return result;
  result.realizable = true;
  result.margin = lp.objective;
  result.tmpl.degree = d;
  result.tmpl.a = Rational(lp.x[a_col] - 10).get_d();
  result.tmpl.z = Rational(lp.x[z_col] - 10).get_d();
  for (int i = 0; i < d; ++i)
    result.tmpl.alpha.push_back(Rational(lp.x[static_cast<std::size_t>(2 + i)] - 10).get_d());
  return result;
}

}  // namespace cayley
