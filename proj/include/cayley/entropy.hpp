#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cayley/errors.hpp"
#include "cayley/snre.hpp"
#include "cayley/spectral.hpp"
#include "cayley/tree_shift.hpp"

namespace cayley {

/// Full classification record of a tree-shift's topological entropy.
struct TsftEntropy {
  double entropy = 0.0;
  /// Pruning removed every symbol; the shift has no labelings at all.
  bool empty = false;
  std::vector<std::string> pruned_symbols;
  std::vector<std::string> essential;
  std::vector<std::string> inessential;
  /// Recursion system of the pruned shift.
  Snre snre;
  /// Maximizing reduced system (lexicographically first among exact ties).
  ReducedSnre argmax;
  /// Weighted adjacency of the argmax, restricted to essential rows/columns.
  std::vector<std::vector<int>> argmax_matrix;
  std::uint64_t reduced_considered = 0;
};

struct EntropyOptions {
  std::uint64_t reduced_cap = 1'000'000;
  SpectralOptions spectral;
};

namespace detail {

/// Restrict a weighted adjacency matrix to the given (sorted) symbol subset.
inline std::vector<std::vector<int>> restrict_matrix(const std::vector<std::vector<int>>& matrix,
                                                     const std::vector<Symbol>& keep) {
  std::vector<std::vector<int>> out(keep.size(), std::vector<int>(keep.size(), 0));
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = 0; j < keep.size(); ++j)
      out[i][j] = matrix[static_cast<std::size_t>(keep[i])][static_cast<std::size_t>(keep[j])];
  return out;
}

}  // namespace detail

/// Topological entropy of a Markov tree-shift: the maximum of ln rho over the
/// weighted adjacency matrices of all reduced systems, each restricted to the
/// essential symbols. Empty or acyclic essential parts contribute 0, so the
/// result is never negative. Dead symbols are pruned first and reported.
inline TsftEntropy entropy_tsft(const MarkovTreeShift& input, const EntropyOptions& options = {}) {
  TsftEntropy result;
  PruneResult pruned = prune_dead_symbols(input);
  result.pruned_symbols = pruned.removed;
  const MarkovTreeShift& shift = pruned.shift;
  if (shift.empty()) {
    result.empty = true;
    return result;
  }

  const std::vector<Symbol> essential = essential_symbols(shift);
  std::set<Symbol> essential_set(essential.begin(), essential.end());
  for (Symbol s = 0; s < shift.symbol_count(); ++s) {
    if (essential_set.count(s))
      result.essential.push_back(shift.alphabet().name(s));
    else
      result.inessential.push_back(shift.alphabet().name(s));
  }

  result.snre = snre_from_tsft(shift);
  double best = -1.0;
  for_each_reduced(result.snre, options.reduced_cap, [&](const ReducedSnre& reduced) {
    ++result.reduced_considered;
    const auto matrix = detail::restrict_matrix(weighted_adjacency(reduced), essential);
    double value = 0.0;
    if (!matrix.empty()) {
      const double rho = spectral_radius(matrix, options.spectral);
      value = rho > 1.0 ? std::log(rho) : 0.0;
    }
    if (value > best) {
      best = value;
      result.argmax = reduced;
      result.argmax_matrix = matrix;
    }
  });
  result.entropy = std::max(best, 0.0);
  return result;
}

/// One attainable entropy value together with a witness adjacency matrix.
struct SpectrumEntry {
  double entropy = 0.0;
  double rho = 0.0;
  std::vector<std::vector<int>> witness;
};

namespace detail {

/// All integer vectors of length `len` with sum <= bound (bound >= each
/// entry >= 0), lexicographically descending.
inline std::vector<std::vector<int>> bounded_vectors(int len, int bound) {
  std::vector<std::vector<int>> result;
  std::vector<int> current(static_cast<std::size_t>(len), 0);
  auto recurse = [&](auto&& self, int position, int remaining) -> void {
    if (position == len) {
      result.push_back(current);
      return;
    }
    for (int value = remaining; value >= 0; --value) {
      current[static_cast<std::size_t>(position)] = value;
      self(self, position + 1, remaining - value);
    }
  };
  recurse(recurse, 0, bound);
  return result;
}

}  // namespace detail

/// The set of entropies attainable by tree-shifts of degree d on k symbols,
/// as sorted deduplicated values. A matrix of dimension l < k with row sums
/// at most d is realized with an inessential sink symbol absorbing the slack;
/// at dimension l = k every symbol is essential, which forces full row sums
/// and the single value ln d. Perron roots below 1 collapse to entropy 0.
inline std::vector<SpectrumEntry> entropy_spectrum(int degree, int symbol_count,
                                                   std::uint64_t cap = 10'000'000,
                                                   const SpectralOptions& spectral = {}) {
  if (degree < 1 || symbol_count < 1)
    throw std::invalid_argument("entropy_spectrum: degree and symbol count must be >= 1");

  // Count the enumeration up front so oversized requests fail fast.
  long double planned = 0.0L;
  for (int dim = 1; dim < symbol_count; ++dim) {
    const auto rows = detail::bounded_vectors(dim, degree);
    long double block = 1.0L;
    for (int i = 0; i < dim; ++i) block *= static_cast<long double>(rows.size());
    planned += block;
  }
  {
    const auto rows = exponent_vectors(degree, symbol_count);
    long double block = 1.0L;
    for (int i = 0; i < symbol_count; ++i) block *= static_cast<long double>(rows.size());
    planned += block;
  }
  if (planned > static_cast<long double>(cap))
    throw CapExceededError("entropy_spectrum: enumeration exceeds cap");

  // Dedup on rho with tolerance 1e-9, bucketed so membership tests stay cheap
  // even for large enumerations.
  std::vector<SpectrumEntry> found;
  std::map<long long, std::vector<double>> buckets;
  auto record = [&](double rho, const std::vector<std::vector<int>>& witness) {
    const long long key = static_cast<long long>(std::floor(rho * 1e9));
    for (long long probe = key - 1; probe <= key + 1; ++probe) {
      auto it = buckets.find(probe);
      if (it == buckets.end()) continue;
      for (double seen : it->second)
        if (std::abs(seen - rho) <= 1e-9) return;
    }
    buckets[key].push_back(rho);
    SpectrumEntry entry;
    entry.rho = rho;
    entry.entropy = rho > 1.0 ? std::log(rho) : 0.0;
    entry.witness = witness;
    found.push_back(std::move(entry));
  };

  auto enumerate_dim = [&](int dim, const std::vector<std::vector<int>>& row_choices) {
    std::vector<std::size_t> pick(static_cast<std::size_t>(dim), 0);
    std::vector<std::vector<int>> matrix(static_cast<std::size_t>(dim));
    while (true) {
      for (int i = 0; i < dim; ++i) matrix[static_cast<std::size_t>(i)] = row_choices[pick[static_cast<std::size_t>(i)]];
      record(spectral_radius(matrix, spectral), matrix);
      int pos = dim;
      while (pos > 0) {
        std::size_t i = static_cast<std::size_t>(pos - 1);
        if (pick[i] + 1 < row_choices.size()) {
          ++pick[i];
          break;
        }
        pick[i] = 0;
        --pos;
      }
      if (pos == 0) break;
    }
  };

  for (int dim = 1; dim < symbol_count; ++dim) enumerate_dim(dim, detail::bounded_vectors(dim, degree));
  enumerate_dim(symbol_count, exponent_vectors(degree, symbol_count));

  // Collapse rho < 1 witnesses onto the entropy-0 class and sort.
  std::vector<SpectrumEntry> result;
  for (SpectrumEntry& entry : found) {
    bool duplicate = false;
    for (const SpectrumEntry& kept : result)
      if (std::abs(kept.entropy - entry.entropy) <= 1e-12) { duplicate = true; break; }
    if (!duplicate) result.push_back(std::move(entry));
  }
  std::sort(result.begin(), result.end(),
            [](const SpectrumEntry& a, const SpectrumEntry& b) { return a.entropy < b.entropy; });
  return result;
}

/// Two-symbol tree-shift of degree d with entropy exactly ln c, 1 <= c <= d:
/// symbol a1 roots one block with c children a1 and d-c children a2 plus the
/// all-a2 block, and a2 roots only the all-a2 block.
inline MarkovTreeShift construct_tsft_with_entropy(int degree, int c) {
  if (degree < 1) throw std::invalid_argument("construct_tsft_with_entropy: degree must be >= 1");
  if (c < 1 || c > degree)
    throw std::invalid_argument("construct_tsft_with_entropy: need 1 <= c <= degree");
  Alphabet alphabet({"a1", "a2"});
  std::set<TwoBlock> allowed;
  TwoBlock mixed;
  mixed.root = 0;
  mixed.children.assign(static_cast<std::size_t>(degree), 1);
  for (int i = 0; i < c; ++i) mixed.children[static_cast<std::size_t>(i)] = 0;
  allowed.insert(std::move(mixed));
  TwoBlock sink0{0, std::vector<Symbol>(static_cast<std::size_t>(degree), 1)};
  TwoBlock sink1{1, std::vector<Symbol>(static_cast<std::size_t>(degree), 1)};
  allowed.insert(sink0);
  allowed.insert(sink1);
  return MarkovTreeShift(std::move(alphabet), degree, std::move(allowed));
}

/// Witnessed test for full entropy ln d: it holds exactly when some nonempty
/// subset of the essential symbols is closed in the sense that each member
/// roots an allowed block whose children all stay inside the subset. The
/// greatest such subset is computed by deleting unsupported symbols until
/// stable and returned as the witness.
struct LnDCriterion {
  bool holds = false;
  std::vector<std::string> witness;
};

inline LnDCriterion check_ln_d_criterion(const MarkovTreeShift& input) {
  const PruneResult pruned = prune_dead_symbols(input);
  const MarkovTreeShift& shift = pruned.shift;
  LnDCriterion result;
  if (shift.empty()) return result;
  const std::vector<Symbol> essential = essential_symbols(shift);
  std::set<Symbol> subset(essential.begin(), essential.end());
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = subset.begin(); it != subset.end();) {
      bool supported = false;
      for (const auto& block : shift.blocks_rooted_at(*it)) {
        bool inside = true;
        for (Symbol child : block.children)
          if (!subset.count(child)) { inside = false; break; }
        if (inside) { supported = true; break; }
      }
      if (!supported) {
        it = subset.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  result.holds = !subset.empty();
  for (Symbol s : subset) result.witness.push_back(shift.alphabet().name(s));
  return result;
}

}  // namespace cayley
