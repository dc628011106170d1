#pragma once

/// Neural networks on rooted d-ary Cayley trees.
///
/// A template holds the self-feedback weight `a`, the child coupling weights
/// a_1..a_d, and the threshold `z`. A stationary mosaic state assigns +1 or
/// -1 to every node, and the strict inequalities satisfied by its equilibria
/// select which two-level patterns can appear. This header derives those
/// admissible pattern sets, the induced tree-shift and its entropy, and the
/// closed-form critical curve in the (a, z) parameter plane.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "cayley/entropy.hpp"
#include "cayley/errors.hpp"
#include "cayley/tree_shift.hpp"

namespace cayley {

/// A vertex of the discrete cube {-1,+1}^d, listing one sign per child.
using SignVector = std::vector<int>;

/// Network parameters on the d-ary tree.
struct Template {
  int degree = 0;
  double a = 0.0;
  std::vector<double> alpha;
  double z = 0.0;
};

inline void validate_template(const Template& t) {
  if (t.degree < 1) throw std::invalid_argument("template: degree must be >= 1");
  if (static_cast<int>(t.alpha.size()) != t.degree)
    throw std::invalid_argument("template: alpha size must equal degree");
  if (!std::isfinite(t.a) || !std::isfinite(t.z))
    throw std::invalid_argument("template: parameters must be finite");
  for (double value : t.alpha)
    if (!std::isfinite(value)) throw std::invalid_argument("template: couplings must be finite");
}

/// All 2^d sign vectors in a fixed canonical order: the leading child varies
/// slowest and +1 precedes -1, so the first vector is all-plus.
inline std::vector<SignVector> sign_vectors(int degree) {
  if (degree < 1 || degree > 20) throw std::invalid_argument("sign_vectors: need 1 <= d <= 20");
  const std::uint32_t total = 1u << degree;
  std::vector<SignVector> out;
  out.reserve(total);
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    SignVector v(static_cast<std::size_t>(degree));
    for (int j = 0; j < degree; ++j)
      v[static_cast<std::size_t>(j)] = (mask >> (degree - 1 - j)) & 1u ? -1 : 1;
    out.push_back(std::move(v));
  }
  return out;
}

inline double dot(const std::vector<double>& alpha, const SignVector& v) {
  double sum = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) sum += alpha[i] * static_cast<double>(v[i]);
  return sum;
}

/// The profile of a coupling vector: every signed sum of the weights, the two
/// leading distinct values K1 >= K2, and the index of the weakest coupling.
/// The profile is degenerate when signed sums collide (repeated or zero
/// magnitudes), in which case K2 falls back to the second largest distinct
/// sum and closed-form curve statements should be treated with care.
struct ChildCouplings {
  std::vector<double> alpha;
  std::vector<double> sums;      ///< all 2^d values of alpha . v, ascending
  std::vector<double> distinct;  ///< distinct sums, ascending
  double k1 = 0.0;
  double k2 = 0.0;
  int ell = 0;
  bool degenerate = false;
};

inline ChildCouplings child_couplings(const std::vector<double>& alpha) {
  if (alpha.empty()) throw std::invalid_argument("child_couplings: empty coupling vector");
  for (double value : alpha)
    if (!std::isfinite(value))
      throw std::invalid_argument("child_couplings: couplings must be finite");
  ChildCouplings cc;
  cc.alpha = alpha;
  const int d = static_cast<int>(alpha.size());
  for (const SignVector& v : sign_vectors(d)) cc.sums.push_back(dot(alpha, v));
  std::sort(cc.sums.begin(), cc.sums.end());
  for (double value : cc.sums)
    if (cc.distinct.empty() || cc.distinct.back() != value) cc.distinct.push_back(value);
  cc.k1 = cc.distinct.back();
  cc.k2 = cc.distinct.size() >= 2 ? cc.distinct[cc.distinct.size() - 2] : cc.k1;
  cc.ell = 0;
  for (int i = 1; i < d; ++i)
    if (std::abs(alpha[static_cast<std::size_t>(i)]) <
        std::abs(alpha[static_cast<std::size_t>(cc.ell)]))
      cc.ell = i;
  cc.degenerate = cc.distinct.size() < cc.sums.size() ||
                  alpha[static_cast<std::size_t>(cc.ell)] == 0.0;
  return cc;
}

/// Admissible child-sign patterns under a +1 root (`plus`) and a -1 root
/// (`minus`). The code [p, q] records the two cardinalities.
struct BasicSet {
  int degree = 0;
  std::set<SignVector> plus;
  std::set<SignVector> minus;
};

struct RegionCode {
  int p = 0;
  int q = 0;
};

inline bool operator==(const RegionCode& lhs, const RegionCode& rhs) {
  return lhs.p == rhs.p && lhs.q == rhs.q;
}

inline bool operator==(const BasicSet& lhs, const BasicSet& rhs) {
  return lhs.degree == rhs.degree && lhs.plus == rhs.plus && lhs.minus == rhs.minus;
}

inline bool operator<(const BasicSet& lhs, const BasicSet& rhs) {
  if (lhs.degree != rhs.degree) return lhs.degree < rhs.degree;
  if (lhs.plus != rhs.plus) return lhs.plus < rhs.plus;
  return lhs.minus < rhs.minus;
}

inline RegionCode region_code(const BasicSet& basic) {
  return RegionCode{static_cast<int>(basic.plus.size()), static_cast<int>(basic.minus.size())};
}

/// Evaluate the strict admissibility inequalities of a template: a sign
/// vector v is admissible under a +1 root when a - 1 + z + alpha.v > 0, and
/// under a -1 root when a - 1 - z - alpha.v > 0. Parameters within
/// `boundary_tol` of an equality lie on a wall of the parameter partition,
/// where membership is undefined, and are rejected.
inline BasicSet admissible_patterns(const Template& t, double boundary_tol = 1e-12) {
  validate_template(t);
  BasicSet basic;
  basic.degree = t.degree;
  for (const SignVector& v : sign_vectors(t.degree)) {
    const double coupling = dot(t.alpha, v);
    const double plus_margin = t.a - 1.0 + t.z + coupling;
    const double minus_margin = t.a - 1.0 - t.z - coupling;
    if (std::abs(plus_margin) < boundary_tol || std::abs(minus_margin) < boundary_tol)
      throw BoundaryParameterError("admissible_patterns: parameter lies on a region boundary");
    if (plus_margin > 0.0) basic.plus.insert(v);
    if (minus_margin > 0.0) basic.minus.insert(v);
  }
  return basic;
}

/// Assemble the Markov tree-shift generated by a basic set, on the two-symbol
/// alphabet {+, -} with +1 mapped to "+" (symbol 0) and -1 to "-" (symbol 1).
inline MarkovTreeShift tsft_from_basic(const BasicSet& basic) {
  if (basic.degree < 1) throw std::invalid_argument("tsft_from_basic: degree must be >= 1");
  Alphabet alphabet({"+", "-"});
  std::set<TwoBlock> allowed;
  auto add = [&](Symbol root, const SignVector& v) {
    TwoBlock block;
    block.root = root;
    block.children.reserve(v.size());
    for (int sign : v) block.children.push_back(sign > 0 ? 0 : 1);
    allowed.insert(std::move(block));
  };
  for (const SignVector& v : basic.plus) add(0, v);
  for (const SignVector& v : basic.minus) add(1, v);
  return MarkovTreeShift(std::move(alphabet), basic.degree, std::move(allowed));
}

/// Entropy of the pattern space of a template, with its classification data.
struct CtnnEntropy {
  BasicSet basic;
  RegionCode code;
  double entropy = 0.0;
  TsftEntropy spectral;
};

/// Compute the template's basic set, run the spectral entropy algorithm on
/// the induced tree-shift, and cross-check the result against the region
/// code rule: the entropy vanishes exactly when min{p,q} = 0 or max{p,q} = 1,
/// and equals ln d otherwise. The two computations disagreeing would mean a
/// defect in one of them, so that case throws rather than picking a side.
inline CtnnEntropy ctnn_entropy(const Template& t, double boundary_tol = 1e-12) {
  CtnnEntropy result;
  result.basic = admissible_patterns(t, boundary_tol);
  result.code = region_code(result.basic);
  result.spectral = entropy_tsft(tsft_from_basic(result.basic));
  result.entropy = result.spectral.entropy;
  const bool rule_zero =
      std::min(result.code.p, result.code.q) == 0 || std::max(result.code.p, result.code.q) == 1;
  const double expected = rule_zero ? 0.0 : std::log(static_cast<double>(t.degree));
  if (std::abs(result.entropy - expected) > 1e-9)
    throw InternalInconsistencyError("ctnn_entropy: spectral value contradicts the region rule");
  return result;
}

/// The critical self-feedback value for a given threshold z: the `a` at
/// which arbitrarily small parameter moves can toggle the entropy between 0
/// and ln d. Closed form: a = 1 + ||z| - |a_ell|| - sum_{i != ell} |a_i|,
/// with ell the index of the weakest coupling.
inline double critical_a(const ChildCouplings& cc, double z) {
  double others = 0.0;
  for (std::size_t i = 0; i < cc.alpha.size(); ++i)
    if (static_cast<int>(i) != cc.ell) others += std::abs(cc.alpha[i]);
  return 1.0 + std::abs(std::abs(z) - std::abs(cc.alpha[static_cast<std::size_t>(cc.ell)])) -
         others;
}

/// The same curve expressed through the two leading signed sums K1 and K2:
/// a = 1 + ||z| - (K1-K2)/2| - (K1+K2)/2. Equivalent to critical_a whenever
/// the coupling magnitudes are distinct and nonzero.
inline double critical_a_k_form(const ChildCouplings& cc, double z) {
  const double half_gap = (cc.k1 - cc.k2) / 2.0;
  return 1.0 + std::abs(std::abs(z) - half_gap) - (cc.k1 + cc.k2) / 2.0;
}

/// Whether the template sits within `tol` of the critical curve.
inline bool is_critical(const Template& t, double tol) {
  validate_template(t);
  if (!(tol > 0.0)) throw std::invalid_argument("is_critical: tolerance must be positive");
  const ChildCouplings cc = child_couplings(t.alpha);
  return std::abs(t.a - critical_a(cc, t.z)) <= tol;
}

/// Definition-level criticality probe: sample the radius-r disk around
/// (a, z) and report whether both entropy classes occur among the samples.
/// Samples that land on a region boundary are skipped. The generator and the
/// uniform mapping are fixed here so results are reproducible across
/// platforms for a given seed.
inline bool verify_critical_by_definition(const ChildCouplings& cc, double a, double z, double r,
                                          int samples, std::uint64_t seed = 0) {
  if (!(r > 0.0)) throw std::invalid_argument("verify_critical_by_definition: need r > 0");
  if (samples < 2) throw std::invalid_argument("verify_critical_by_definition: need samples >= 2");
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const int degree = static_cast<int>(cc.alpha.size());
  const double full = std::log(static_cast<double>(degree));
  bool seen_zero = false;
  bool seen_full = false;
  for (int i = 0; i < samples && !(seen_zero && seen_full); ++i) {
    double dx = 0.0;
    double dy = 0.0;
    do {
      dx = 2.0 * uniform() - 1.0;
      dy = 2.0 * uniform() - 1.0;
    } while (dx * dx + dy * dy > 1.0);
    Template probe{degree, a + r * dx, cc.alpha, z + r * dy};
    try {
      const CtnnEntropy result = ctnn_entropy(probe);
      if (result.entropy > full / 2.0)
        seen_full = true;
      else
        seen_zero = true;
    } catch (const BoundaryParameterError&) {
      continue;
    }
  }
  return seen_zero && seen_full;
}

/// A complete labeled d-ary tree in heap order: the children of slot w are
/// the slots w*d+1 .. w*d+d, labels are +1 or -1.
struct LabeledTree {
  int degree = 0;
  std::vector<int> labels;
};

inline void validate_labeled_tree(const LabeledTree& tree) {
  if (tree.degree < 1) throw std::invalid_argument("labeled tree: degree must be >= 1");
  for (int label : tree.labels)
    if (label != 1 && label != -1)
      throw std::invalid_argument("labeled tree: labels must be +1 or -1");
  // Completeness: node count must be 1 + d + d^2 + ... + d^h for some h >= 1.
  std::size_t level = 1;
  std::size_t total = 1;
  int height = 0;
  while (total < tree.labels.size()) {
    level *= static_cast<std::size_t>(tree.degree);
    total += level;
    ++height;
  }
  if (total != tree.labels.size() || height < 1)
    throw std::invalid_argument("labeled tree: node count is not a complete tree of height >= 1");
}

/// Result of checking a labeled tree against a template: per-node equilibrium
/// inputs x_w (NaN at leaves, whose constraints are vacuous) and the verdict.
struct MosaicCheck {
  bool ok = true;
  std::vector<double> states;
};

/// Verify that a labeled tree is the output pattern of a stationary mosaic
/// state: at every node with all children present, the equilibrium input
/// x_w = z + a y_w + sum_i a_i y_{wi} must exceed 1 when y_w = +1 and fall
/// below -1 when y_w = -1.
inline MosaicCheck verify_mosaic(const Template& t, const LabeledTree& tree) {
  validate_template(t);
  validate_labeled_tree(tree);
  if (tree.degree != t.degree)
    throw std::invalid_argument("verify_mosaic: tree degree does not match template");
  MosaicCheck check;
  check.states.assign(tree.labels.size(), std::numeric_limits<double>::quiet_NaN());
  const std::size_t internal = (tree.labels.size() - 1) / static_cast<std::size_t>(t.degree);
  for (std::size_t w = 0; w < internal; ++w) {
    double x = t.z + t.a * static_cast<double>(tree.labels[w]);
    for (int i = 0; i < t.degree; ++i)
      x += t.alpha[static_cast<std::size_t>(i)] *
           static_cast<double>(tree.labels[w * static_cast<std::size_t>(t.degree) +
                                           static_cast<std::size_t>(i) + 1]);
    check.states[w] = x;
    const bool node_ok = tree.labels[w] > 0 ? x > 1.0 : x < -1.0;
    if (!node_ok) check.ok = false;
  }
  return check;
}

/// The mirror template (a, alpha, -z). Its basic set is the sign-flipped
/// mirror of the input's: plus patterns map onto negated minus patterns and
/// vice versa, so the region code [p, q] becomes [q, p] while the entropy is
/// unchanged.
inline Template dual_template(const Template& t) {
  validate_template(t);
  return Template{t.degree, t.a, t.alpha, -t.z};
}

/// Negate every vector in a set (the involution pairing dual basic sets).
inline std::set<SignVector> negate_all(const std::set<SignVector>& vectors) {
  std::set<SignVector> out;
  for (const SignVector& v : vectors) {
    SignVector flipped(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) flipped[i] = -v[i];
    out.insert(std::move(flipped));
  }
  return out;
}

}  // namespace cayley
