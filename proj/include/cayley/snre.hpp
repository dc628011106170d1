#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cayley/errors.hpp"
#include "cayley/tree_shift.hpp"

namespace cayley {

/// One term r * prod_j gamma_j^{c_j} of a counting recursion row. The
/// exponents have one entry per symbol and sum to the tree degree; the
/// coefficient counts the ordered two-blocks sharing that child multiset.
struct Monomial {
  long long coeff = 1;
  std::vector<int> exponents;

  friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Recursion system of degree (d, k) attached to a Markov tree-shift: one
/// polynomial row per symbol, mapping the (n-1)-block counts to the n-block
/// counts. Rows keep their monomials sorted lexicographically descending by
/// exponent vector, which fixes every enumeration order downstream.
struct Snre {
  int degree = 1;
  int symbol_count = 0;
  std::vector<std::string> symbols;
  std::vector<std::vector<Monomial>> rows;
  std::vector<BigInt> init;
};

/// Build the counting recursion of a (pruned) tree-shift by grouping the
/// allowed two-blocks rooted at each symbol by their child multiset.
inline Snre snre_from_tsft(const MarkovTreeShift& shift) {
  Snre snre;
  snre.degree = shift.degree();
  snre.symbol_count = shift.symbol_count();
  snre.symbols = shift.alphabet().names();
  snre.rows.resize(static_cast<std::size_t>(shift.symbol_count()));
  snre.init.assign(static_cast<std::size_t>(shift.symbol_count()), BigInt(1));
  for (Symbol s = 0; s < shift.symbol_count(); ++s) {
    std::map<std::vector<int>, long long, std::greater<>> groups;
    for (const auto& block : shift.blocks_rooted_at(s)) {
      std::vector<int> exponents(static_cast<std::size_t>(shift.symbol_count()), 0);
      for (Symbol child : block.children) ++exponents[static_cast<std::size_t>(child)];
      ++groups[std::move(exponents)];
    }
    auto& row = snre.rows[static_cast<std::size_t>(s)];
    row.reserve(groups.size());
    for (auto& [exponents, count] : groups) row.push_back(Monomial{count, exponents});
  }
  return snre;
}

/// Evaluate the recursion exactly for depths 1..depth; row m holds the
/// (m+1)-block counts. The digit budget bounds every intermediate value.
inline std::vector<std::vector<BigInt>> evaluate_snre(const Snre& snre, int depth,
                                                      std::size_t digit_budget = 1'000'000) {
  if (depth < 1) throw std::invalid_argument("evaluate_snre: depth must be >= 1");
  std::vector<std::vector<BigInt>> table;
  table.reserve(static_cast<std::size_t>(depth));
  table.push_back(snre.init);
  for (int n = 2; n <= depth; ++n) {
    const auto& prev = table.back();
    std::vector<BigInt> next(prev.size(), BigInt(0));
    for (std::size_t i = 0; i < snre.rows.size(); ++i) {
      BigInt sum = 0;
      for (const Monomial& monomial : snre.rows[i]) {
        BigInt term = static_cast<long>(monomial.coeff);
        for (std::size_t j = 0; j < monomial.exponents.size(); ++j)
          for (int e = 0; e < monomial.exponents[j]; ++e) term *= prev[j];
        sum += term;
      }
      if (mpz_sizeinbase(sum.get_mpz_t(), 10) > digit_budget)
        throw CapExceededError("evaluate_snre: digit budget exceeded");
      next[i] = std::move(sum);
    }
    table.push_back(std::move(next));
  }
  return table;
}

/// All exponent vectors of length `symbol_count` summing to `degree`,
/// lexicographically descending. These label the indicator-matrix columns.
inline std::vector<std::vector<int>> exponent_vectors(int degree, int symbol_count) {
  std::vector<std::vector<int>> result;
  if (symbol_count <= 0) return result;
  std::vector<int> current(static_cast<std::size_t>(symbol_count), 0);
  auto recurse = [&](auto&& self, int position, int remaining) -> void {
    if (position == symbol_count - 1) {
      current[static_cast<std::size_t>(position)] = remaining;
      result.push_back(current);
      return;
    }
    for (int value = remaining; value >= 0; --value) {
      current[static_cast<std::size_t>(position)] = value;
      self(self, position + 1, remaining - value);
    }
  };
  recurse(recurse, 0, degree);
  return result;
}

/// Coefficient matrix of a recursion system: one row per symbol, one column
/// per exponent vector (descending lexicographic order), entry = coefficient
/// of that monomial in the row, 0 when absent.
struct IndicatorMatrix {
  std::vector<std::vector<int>> columns;
  std::vector<std::vector<long long>> entries;
};

inline IndicatorMatrix indicator_matrix(const Snre& snre) {
  IndicatorMatrix matrix;
  matrix.columns = exponent_vectors(snre.degree, snre.symbol_count);
  matrix.entries.assign(snre.rows.size(),
                        std::vector<long long>(matrix.columns.size(), 0));
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t c = 0; c < matrix.columns.size(); ++c) index[matrix.columns[c]] = c;
  for (std::size_t i = 0; i < snre.rows.size(); ++i)
    for (const Monomial& monomial : snre.rows[i])
      matrix.entries[i][index.at(monomial.exponents)] = monomial.coeff;
  return matrix;
}

/// A reduced system: one monomial chosen from every row of a parent SNRE,
/// with its coefficient replaced by 1. `selection[i]` indexes into the
/// parent's row i; `chosen[i]` is the selected exponent vector.
struct ReducedSnre {
  std::vector<int> selection;
  std::vector<std::vector<int>> chosen;
};

/// Number of reduced systems (the product of the row sizes).
inline std::uint64_t reduced_count(const Snre& snre) {
  std::uint64_t count = 1;
  for (const auto& row : snre.rows) {
    if (row.empty()) return 0;
    if (count > std::numeric_limits<std::uint64_t>::max() / row.size())
      return std::numeric_limits<std::uint64_t>::max();
    count *= row.size();
  }
  return count;
}

/// Visit every reduced system in lexicographic order of the selection tuple.
/// Throws when the total count exceeds the cap.
template <typename Visitor>
void for_each_reduced(const Snre& snre, std::uint64_t cap, Visitor&& visit) {
  const std::uint64_t total = reduced_count(snre);
  if (total > cap) throw CapExceededError("reduced-system enumeration exceeds cap");
  if (total == 0) return;
  const std::size_t k = snre.rows.size();
  ReducedSnre reduced;
  reduced.selection.assign(k, 0);
  reduced.chosen.resize(k);
  for (std::size_t i = 0; i < k; ++i) reduced.chosen[i] = snre.rows[i].front().exponents;
  while (true) {
    visit(static_cast<const ReducedSnre&>(reduced));
    std::size_t pos = k;
    while (pos > 0) {
      std::size_t i = pos - 1;
      if (reduced.selection[i] + 1 < static_cast<int>(snre.rows[i].size())) {
        ++reduced.selection[i];
        reduced.chosen[i] = snre.rows[i][static_cast<std::size_t>(reduced.selection[i])].exponents;
        break;
      }
      reduced.selection[i] = 0;
      reduced.chosen[i] = snre.rows[i].front().exponents;
      --pos;
    }
    if (pos == 0) break;
  }
}

inline std::vector<ReducedSnre> enumerate_reduced(const Snre& snre,
                                                  std::uint64_t cap = 1'000'000) {
  std::vector<ReducedSnre> result;
  for_each_reduced(snre, cap, [&](const ReducedSnre& reduced) { result.push_back(reduced); });
  return result;
}

/// Weighted adjacency matrix of a reduced system: entry (i, j) is the
/// exponent of symbol j in row i's chosen monomial. Every row sums to the
/// tree degree.
inline std::vector<std::vector<int>> weighted_adjacency(const ReducedSnre& reduced) {
  return reduced.chosen;
}

/// Binary indicator of a reduced system against the parent's column order:
/// exactly one 1 per row, in the column of the chosen exponent vector.
inline std::vector<std::vector<int>> reduced_indicator(const Snre& snre,
                                                       const ReducedSnre& reduced) {
  const auto columns = exponent_vectors(snre.degree, snre.symbol_count);
  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t c = 0; c < columns.size(); ++c) index[columns[c]] = c;
  std::vector<std::vector<int>> matrix(reduced.chosen.size(),
                                       std::vector<int>(columns.size(), 0));
  for (std::size_t i = 0; i < reduced.chosen.size(); ++i)
    matrix[i][index.at(reduced.chosen[i])] = 1;
  return matrix;
}

}  // namespace cayley
