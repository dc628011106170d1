#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cayley/errors.hpp"

namespace cayley {

using BigInt = mpz_class;

/// Index of a symbol inside an Alphabet.
using Symbol = int;

/// Ordered list of distinct symbol names. All other types address symbols by
/// their index in this list, so the order is part of the identity.
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
    std::set<std::string> seen;
    for (const auto& name : names_) {
      if (name.empty()) throw std::invalid_argument("alphabet: empty symbol name");
      if (!seen.insert(name).second)
        throw std::invalid_argument("alphabet: duplicate symbol '" + name + "'");
    }
  }

  [[nodiscard]] int size() const { return static_cast<int>(names_.size()); }
  [[nodiscard]] bool empty() const { return names_.empty(); }
  [[nodiscard]] const std::string& name(Symbol s) const { return names_.at(static_cast<std::size_t>(s)); }
  [[nodiscard]] const std::vector<std::string>& names() const { return names_; }

  [[nodiscard]] std::optional<Symbol> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<Symbol>(i);
    return std::nullopt;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
};

/// A two-block: a root symbol together with the d ordered child symbols
/// directly below it.
struct TwoBlock {
  Symbol root = 0;
  std::vector<Symbol> children;

  friend bool operator==(const TwoBlock&, const TwoBlock&) = default;
  friend bool operator<(const TwoBlock& a, const TwoBlock& b) {
    if (a.root != b.root) return a.root < b.root;
    return a.children < b.children;
  }
};

/// Markov tree-shift on the rooted d-ary tree: the set of labelings of the
/// full tree whose two-blocks all belong to a fixed allowed set.
class MarkovTreeShift {
 public:
  MarkovTreeShift(Alphabet alphabet, int degree, std::set<TwoBlock> allowed)
      : alphabet_(std::move(alphabet)), degree_(degree), allowed_(std::move(allowed)) {
    if (degree_ < 1) throw std::invalid_argument("tree-shift: degree must be >= 1");
    for (const auto& block : allowed_) {
      if (block.root < 0 || block.root >= alphabet_.size())
        throw std::invalid_argument("tree-shift: block root out of range");
      if (static_cast<int>(block.children.size()) != degree_)
        throw std::invalid_argument("tree-shift: block arity does not match degree");
      for (Symbol child : block.children)
        if (child < 0 || child >= alphabet_.size())
          throw std::invalid_argument("tree-shift: block child out of range");
    }
    by_root_.assign(static_cast<std::size_t>(std::max(alphabet_.size(), 0)), {});
    for (const auto& block : allowed_) by_root_[static_cast<std::size_t>(block.root)].push_back(block);
  }

  /// Tree-shift with every two-block allowed.
  static MarkovTreeShift full_shift(Alphabet alphabet, int degree) {
    std::set<TwoBlock> allowed;
    for (Symbol root = 0; root < alphabet.size(); ++root)
      append_all_blocks(alphabet.size(), degree, root, allowed);
    return MarkovTreeShift(std::move(alphabet), degree, std::move(allowed));
  }

  /// Tree-shift defined by a forbidden set: the allowed set is its complement.
  static MarkovTreeShift from_forbidden(Alphabet alphabet, int degree,
                                        const std::set<TwoBlock>& forbidden,
                                        std::uint64_t cap = 10'000'000) {
    const double total = static_cast<double>(alphabet.size()) *
                         std::pow(static_cast<double>(alphabet.size()), degree);
    if (total > static_cast<double>(cap))
      throw CapExceededError("from_forbidden: two-block complement exceeds cap");
    std::set<TwoBlock> allowed;
    for (Symbol root = 0; root < alphabet.size(); ++root)
      append_all_blocks(alphabet.size(), degree, root, allowed);
    for (const auto& block : forbidden) allowed.erase(block);
    return MarkovTreeShift(std::move(alphabet), degree, std::move(allowed));
  }

  [[nodiscard]] const Alphabet& alphabet() const { return alphabet_; }
  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] int symbol_count() const { return alphabet_.size(); }
  [[nodiscard]] bool empty() const { return alphabet_.empty(); }
  [[nodiscard]] const std::set<TwoBlock>& allowed() const { return allowed_; }

  /// Allowed two-blocks rooted at a given symbol, in canonical (sorted) order.
  [[nodiscard]] const std::vector<TwoBlock>& blocks_rooted_at(Symbol s) const {
    return by_root_.at(static_cast<std::size_t>(s));
  }

  [[nodiscard]] bool is_allowed(const TwoBlock& block) const { return allowed_.count(block) > 0; }

 private:
  static void append_all_blocks(int symbol_count, int degree, Symbol root,
                                std::set<TwoBlock>& out) {
    std::vector<Symbol> children(static_cast<std::size_t>(degree), 0);
    while (true) {
      out.insert(TwoBlock{root, children});
      int pos = degree - 1;
      while (pos >= 0 && children[static_cast<std::size_t>(pos)] == symbol_count - 1) {
        children[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
      ++children[static_cast<std::size_t>(pos)];
    }
  }

  Alphabet alphabet_;
  int degree_ = 1;
  std::set<TwoBlock> allowed_;
  std::vector<std::vector<TwoBlock>> by_root_;
};

/// Result of removing dead symbols: the surviving sub-shift together with the
/// names of the removed symbols.
struct PruneResult {
  MarkovTreeShift shift;
  std::vector<std::string> removed;
};

/// Repeatedly delete symbols that root no allowed two-block, together with
/// every block mentioning them. The result contains exactly the symbols that
/// can appear in some labeling of the full tree.
inline PruneResult prune_dead_symbols(const MarkovTreeShift& shift) {
  const int k = shift.symbol_count();
  std::vector<bool> alive(static_cast<std::size_t>(k), true);
  std::vector<TwoBlock> blocks(shift.allowed().begin(), shift.allowed().end());
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> roots(static_cast<std::size_t>(k), 0);
    for (const auto& block : blocks) ++roots[static_cast<std::size_t>(block.root)];
    for (Symbol s = 0; s < k; ++s) {
      if (alive[static_cast<std::size_t>(s)] && roots[static_cast<std::size_t>(s)] == 0) {
        alive[static_cast<std::size_t>(s)] = false;
        changed = true;
      }
    }
    std::erase_if(blocks, [&](const TwoBlock& block) {
      if (!alive[static_cast<std::size_t>(block.root)]) return true;
      for (Symbol child : block.children)
        if (!alive[static_cast<std::size_t>(child)]) return true;
      return false;
    });
  }

  std::vector<std::string> kept_names;
  std::vector<std::string> removed;
  std::vector<Symbol> remap(static_cast<std::size_t>(k), -1);
  for (Symbol s = 0; s < k; ++s) {
    if (alive[static_cast<std::size_t>(s)]) {
      remap[static_cast<std::size_t>(s)] = static_cast<Symbol>(kept_names.size());
      kept_names.push_back(shift.alphabet().name(s));
    } else {
      removed.push_back(shift.alphabet().name(s));
    }
  }
  std::set<TwoBlock> renamed;
  for (const auto& block : blocks) {
    TwoBlock copy;
    copy.root = remap[static_cast<std::size_t>(block.root)];
    copy.children.reserve(block.children.size());
    for (Symbol child : block.children) copy.children.push_back(remap[static_cast<std::size_t>(child)]);
    renamed.insert(std::move(copy));
  }
  return PruneResult{MarkovTreeShift(Alphabet(std::move(kept_names)), shift.degree(), std::move(renamed)),
                     std::move(removed)};
}

/// Symbols whose n-block count exceeds 1 for some n, computed as a least
/// fixpoint: a symbol is essential when it roots at least two allowed blocks,
/// or when its unique rooted block has an essential child. Expects a pruned
/// shift (every symbol roots at least one block).
inline std::vector<Symbol> essential_symbols(const MarkovTreeShift& shift) {
  const int k = shift.symbol_count();
  std::vector<bool> essential(static_cast<std::size_t>(k), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (Symbol s = 0; s < k; ++s) {
      if (essential[static_cast<std::size_t>(s)]) continue;
      const auto& blocks = shift.blocks_rooted_at(s);
      bool now = blocks.size() >= 2;
      if (!now && blocks.size() == 1) {
        for (Symbol child : blocks.front().children)
          if (essential[static_cast<std::size_t>(child)]) { now = true; break; }
      }
      if (now) {
        essential[static_cast<std::size_t>(s)] = true;
        changed = true;
      }
    }
  }
  std::vector<Symbol> result;
  for (Symbol s = 0; s < k; ++s)
    if (essential[static_cast<std::size_t>(s)]) result.push_back(s);
  return result;
}

/// Exact and log-space block counts per symbol, indexed by block depth:
/// entry m of either field holds the counts for (m+1)-blocks.
struct BlockCountSeries {
  std::vector<std::vector<BigInt>> exact;
  std::vector<std::vector<double>> log_space;

  /// Exact number of n-blocks over all root symbols.
  [[nodiscard]] BigInt total(int n) const {
    BigInt sum = 0;
    for (const BigInt& value : exact.at(static_cast<std::size_t>(n - 1))) sum += value;
    return sum;
  }

  /// ln of the number of n-blocks, assembled with log-sum-exp.
  [[nodiscard]] double log_total(int n) const {
    const auto& row = log_space.at(static_cast<std::size_t>(n - 1));
    double peak = -std::numeric_limits<double>::infinity();
    for (double value : row) peak = std::max(peak, value);
    if (!(peak > -std::numeric_limits<double>::infinity())) return peak;
    double acc = 0.0;
    for (double value : row) acc += std::exp(value - peak);
    return peak + std::log(acc);
  }
};

struct CountOptions {
  /// Compute exact big-integer counts. Defaults to n <= 12; the log-space
  /// recursion is always filled and is the only path for deep prefixes.
  std::optional<bool> exact;
  /// Maximum decimal digits any exact count may reach.
  std::size_t digit_budget = 1'000'000;
};

/// Per-symbol n-block counts for n = 1..depth via the two-block recursion
/// gamma_{i;n} = sum over allowed blocks rooted at i of the product of the
/// children's (n-1)-counts.
inline BlockCountSeries count_blocks(const MarkovTreeShift& shift, int depth,
                                     const CountOptions& options = {}) {
  if (depth < 1) throw std::invalid_argument("count_blocks: depth must be >= 1");
  const int k = shift.symbol_count();
  const bool want_exact = options.exact.value_or(depth <= 12);
  BlockCountSeries series;
  series.log_space.reserve(static_cast<std::size_t>(depth));
  if (want_exact) series.exact.reserve(static_cast<std::size_t>(depth));

  std::vector<double> log_row(static_cast<std::size_t>(k), 0.0);
  std::vector<BigInt> exact_row(static_cast<std::size_t>(k), BigInt(1));
  series.log_space.push_back(log_row);
  if (want_exact) series.exact.push_back(exact_row);

  for (int n = 2; n <= depth; ++n) {
    std::vector<double> next_log(static_cast<std::size_t>(k), -std::numeric_limits<double>::infinity());
    std::vector<BigInt> next_exact;
    if (want_exact) next_exact.assign(static_cast<std::size_t>(k), BigInt(0));
    for (Symbol s = 0; s < k; ++s) {
      // Log-space: log-sum-exp over the rooted blocks of the summed child logs.
      double peak = -std::numeric_limits<double>::infinity();
      std::vector<double> terms;
      terms.reserve(shift.blocks_rooted_at(s).size());
      for (const auto& block : shift.blocks_rooted_at(s)) {
        double term = 0.0;
        for (Symbol child : block.children) term += log_row[static_cast<std::size_t>(child)];
        terms.push_back(term);
        peak = std::max(peak, term);
      }
      if (peak > -std::numeric_limits<double>::infinity()) {
        double acc = 0.0;
        for (double term : terms) acc += std::exp(term - peak);
        next_log[static_cast<std::size_t>(s)] = peak + std::log(acc);
      }
      if (want_exact) {
        BigInt sum = 0;
        for (const auto& block : shift.blocks_rooted_at(s)) {
          BigInt product = 1;
          for (Symbol child : block.children) {
            product *= exact_row[static_cast<std::size_t>(child)];
            if (product == 0) break;
          }
          sum += product;
        }
        if (mpz_sizeinbase(sum.get_mpz_t(), 10) > options.digit_budget)
          throw CapExceededError("count_blocks: digit budget exceeded at depth " + std::to_string(n));
        next_exact[static_cast<std::size_t>(s)] = std::move(sum);
      }
    }
    log_row = std::move(next_log);
    series.log_space.push_back(log_row);
    if (want_exact) {
      exact_row = std::move(next_exact);
      series.exact.push_back(exact_row);
    }
  }
  return series;
}

/// Number of vertices of the rooted d-ary tree with depth at most n-1, i.e.
/// the support of an n-block.
inline std::uint64_t block_support_size(int degree, int depth) {
  std::uint64_t nodes = 0;
  std::uint64_t level = 1;
  for (int i = 0; i < depth; ++i) {
    nodes += level;
    if (level > (std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(degree)) / 2)
      throw CapExceededError("block support size overflows");
    level *= static_cast<std::uint64_t>(degree);
  }
  return nodes;
}

/// Labeling of the complete d-ary tree of height `height`, stored in
/// breadth-first (heap) order: the children of slot w are slots w*d+1..w*d+d.
struct TreePattern {
  int degree = 1;
  int height = 0;
  std::vector<Symbol> labels;
};

/// All n-blocks of the shift, by direct enumeration of labelings of the
/// support. Intended as the ground-truth oracle for count_blocks on small
/// depths; the candidate space k^|support| must stay within the cap.
inline std::vector<TreePattern> enumerate_blocks(const MarkovTreeShift& shift, int depth,
                                                 std::uint64_t cap = 10'000'000) {
  if (depth < 1) throw std::invalid_argument("enumerate_blocks: depth must be >= 1");
  const int k = shift.symbol_count();
  const std::uint64_t support = block_support_size(shift.degree(), depth);
  if (k == 0) return {};
  if (support > cap ||
      static_cast<double>(support) * std::log(static_cast<double>(k)) >
          std::log(static_cast<double>(cap)) + 1e-9)
    throw CapExceededError("enumerate_blocks: candidate space exceeds cap");

  const std::uint64_t internal =
      depth >= 2 ? block_support_size(shift.degree(), depth - 1) : 0;
  const int d = shift.degree();
  std::vector<TreePattern> result;
  std::vector<Symbol> labels(support, 0);
  while (true) {
    bool ok = true;
    for (std::uint64_t w = 0; w < internal && ok; ++w) {
      TwoBlock block;
      block.root = labels[w];
      block.children.reserve(static_cast<std::size_t>(d));
      for (int j = 1; j <= d; ++j)
        block.children.push_back(labels[w * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(j)]);
      ok = shift.is_allowed(block);
    }
    if (ok) result.push_back(TreePattern{d, depth - 1, labels});

    std::uint64_t pos = support;
    while (pos > 0 && labels[pos - 1] == k - 1) labels[--pos] = 0;
    if (pos == 0) break;
    ++labels[pos - 1];
  }
  return result;
}

/// Finite-depth entropy estimate ln(ln |B_n|) / n, evaluated in log space so
/// that depths far beyond exact-counting range stay cheap. When |B_n| <= 1
/// the double logarithm is undefined; the estimate is reported as 0 with the
/// degenerate flag set. Small positive prefixes legitimately give negative
/// estimates and are returned as-is.
struct EntropyEstimate {
  double value = 0.0;
  bool degenerate = false;
};

inline EntropyEstimate entropy_estimate(const MarkovTreeShift& shift, int depth) {
  if (depth < 1) throw std::invalid_argument("entropy_estimate: depth must be >= 1");
  CountOptions options;
  options.exact = false;
  const BlockCountSeries series = count_blocks(shift, depth, options);
  const double log_count = series.log_total(depth);
  if (!(log_count > 1e-12)) return EntropyEstimate{0.0, true};
  return EntropyEstimate{std::log(log_count) / static_cast<double>(depth), false};
}

/// Render a pattern as a nested list, e.g. (0 (1 0 0) (0 0 1)).
inline std::string render_pattern(const Alphabet& alphabet, const TreePattern& pattern) {
  const int d = pattern.degree;
  auto render = [&](auto&& self, std::uint64_t node, int level) -> std::string {
    const std::string label = alphabet.name(pattern.labels.at(node));
    if (level == pattern.height) return label;
    std::string out = "(" + label;
    for (int j = 1; j <= d; ++j) {
      out += ' ';
      out += self(self, node * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(j), level + 1);
    }
    out += ')';
    return out;
  };
  return render(render, 0, 0);
}

}  // namespace cayley
