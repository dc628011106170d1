#pragma once

/// JSON document formats: tree-shifts, recursion systems, templates, basic
/// sets, pattern trees, sweep configurations, and the structured reports the
/// command-line tool prints. Every reader throws ParseError on malformed or
/// inconsistent input; writers emit canonical documents that the readers
/// accept back unchanged.

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cayley/ctnn.hpp"
#include "cayley/entropy.hpp"
#include "cayley/errors.hpp"
#include "cayley/separation.hpp"
#include "cayley/snre.hpp"
#include "cayley/tree_shift.hpp"

namespace cayley {

using Json = nlohmann::json;

namespace detail {

inline Json parse_document(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& error) {
    throw ParseError(std::string("invalid document: ") + error.what());
  }
}

inline const Json& member(const Json& doc, const std::string& key) {
  if (!doc.is_object()) throw ParseError("expected an object with field '" + key + "'");
  auto it = doc.find(key);
  if (it == doc.end()) throw ParseError("missing field '" + key + "'");
  return *it;
}

inline int as_int(const Json& value, const std::string& what) {
  if (!value.is_number_integer()) throw ParseError(what + " must be an integer");
  return value.get<int>();
}

inline double as_double(const Json& value, const std::string& what) {
  if (!value.is_number()) throw ParseError(what + " must be a number");
  return value.get<double>();
}

inline std::string as_string(const Json& value, const std::string& what) {
  if (!value.is_string()) throw ParseError(what + " must be a string");
  return value.get<std::string>();
}

inline const Json& as_array(const Json& value, const std::string& what) {
  if (!value.is_array()) throw ParseError(what + " must be an array");
  return value;
}

inline std::vector<double> as_double_list(const Json& value, const std::string& what) {
  std::vector<double> out;
  for (const Json& item : as_array(value, what)) out.push_back(as_double(item, what + " entry"));
  return out;
}

inline std::pair<double, double> as_range(const Json& value, const std::string& what) {
  const auto list = as_double_list(value, what);
  if (list.size() != 2) throw ParseError(what + " must be a [lo, hi] pair");
  return {list[0], list[1]};
}

inline SignVector as_sign_vector(const Json& value, int degree, const std::string& what) {
  SignVector v;
  for (const Json& item : as_array(value, what)) {
    const int entry = as_int(item, what + " entry");
    if (entry != 1 && entry != -1) throw ParseError(what + " entries must be +1 or -1");
    v.push_back(entry);
  }
  if (static_cast<int>(v.size()) != degree)
    throw ParseError(what + " must have exactly one entry per child");
  return v;
}

}  // namespace detail

/// Read UTF-8 text from disk; missing or unreadable files raise Error.
inline std::string read_text_file(const std::string& path) {
  std::ifstream stream(path, std::ios::binary);
  if (!stream) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << stream.rdbuf();
  return out.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream stream(path, std::ios::binary);
  if (!stream) throw Error("cannot open '" + path + "' for writing");
  stream << content;
  stream.flush();
  if (!stream) throw Error("failed while writing '" + path + "'");
}

/// Parse a tree-shift document {d, alphabet, allowed|forbidden}. Exactly one
/// of the two block lists must be present; each record is
/// {root, children: [d symbol names]}.
inline MarkovTreeShift tree_shift_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  const int degree = detail::as_int(detail::member(doc, "d"), "d");
  if (degree < 1) throw ParseError("d must be >= 1");

  std::vector<std::string> names;
  for (const Json& item : detail::as_array(detail::member(doc, "alphabet"), "alphabet"))
    names.push_back(detail::as_string(item, "alphabet entry"));
  Alphabet alphabet;
  try {
    alphabet = Alphabet(std::move(names));
  } catch (const std::invalid_argument& error) {
    throw ParseError(error.what());
  }

  const bool has_allowed = doc.is_object() && doc.contains("allowed");
  const bool has_forbidden = doc.is_object() && doc.contains("forbidden");
  if (has_allowed == has_forbidden)
    throw ParseError("exactly one of 'allowed' and 'forbidden' must be present");

  auto parse_blocks = [&](const Json& list, const std::string& what) {
    std::set<TwoBlock> blocks;
    for (const Json& record : detail::as_array(list, what)) {
      const std::string root_name = detail::as_string(detail::member(record, "root"), "root");
      const auto root = alphabet.index_of(root_name);
      if (!root) throw ParseError("unknown symbol '" + root_name + "'");
      TwoBlock block;
      block.root = *root;
      for (const Json& child : detail::as_array(detail::member(record, "children"), "children")) {
        const std::string child_name = detail::as_string(child, "child");
        const auto symbol = alphabet.index_of(child_name);
        if (!symbol) throw ParseError("unknown symbol '" + child_name + "'");
        block.children.push_back(*symbol);
      }
      if (static_cast<int>(block.children.size()) != degree)
        throw ParseError("each block needs exactly d children");
      blocks.insert(std::move(block));
    }
    return blocks;
  };

  try {
    if (has_allowed)
      return MarkovTreeShift(std::move(alphabet), degree, parse_blocks(doc["allowed"], "allowed"));
    return MarkovTreeShift::from_forbidden(std::move(alphabet), degree,
                                           parse_blocks(doc["forbidden"], "forbidden"));
  } catch (const std::invalid_argument& error) {
    throw ParseError(error.what());
  }
}

/// Serialize a tree-shift in the allowed-set form.
inline std::string tree_shift_to_json(const MarkovTreeShift& shift) {
  Json doc;
  doc["d"] = shift.degree();
  doc["alphabet"] = shift.alphabet().names();
  Json blocks = Json::array();
  for (const TwoBlock& block : shift.allowed()) {
    Json record;
    record["root"] = shift.alphabet().name(block.root);
    Json children = Json::array();
    for (Symbol child : block.children) children.push_back(shift.alphabet().name(child));
    record["children"] = std::move(children);
    blocks.push_back(std::move(record));
  }
  doc["allowed"] = std::move(blocks);
  return doc.dump(2) + "\n";
}

/// Parse a recursion system {d, k, rows: [[{r, c: [...]}, ...], ...],
/// init: [...]}. Rows are normalized to descending lexicographic order of
/// exponent vectors; `init` defaults to all ones.
inline Snre snre_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  Snre snre;
  snre.degree = detail::as_int(detail::member(doc, "d"), "d");
  snre.symbol_count = detail::as_int(detail::member(doc, "k"), "k");
  if (snre.degree < 1) throw ParseError("d must be >= 1");
  if (snre.symbol_count < 1) throw ParseError("k must be >= 1");
  for (int i = 1; i <= snre.symbol_count; ++i) snre.symbols.push_back("a" + std::to_string(i));

  const Json& rows = detail::as_array(detail::member(doc, "rows"), "rows");
  if (static_cast<int>(rows.size()) != snre.symbol_count)
    throw ParseError("rows must contain exactly k lists");
  for (const Json& row : rows) {
    std::vector<Monomial> monomials;
    std::set<std::vector<int>> seen;
    for (const Json& term : detail::as_array(row, "row")) {
      Monomial monomial;
      monomial.coeff = detail::as_int(detail::member(term, "r"), "r");
      if (monomial.coeff < 1) throw ParseError("coefficients must be positive");
      int total = 0;
      for (const Json& exponent : detail::as_array(detail::member(term, "c"), "c")) {
        const int e = detail::as_int(exponent, "exponent");
        if (e < 0) throw ParseError("exponents must be nonnegative");
        monomial.exponents.push_back(e);
        total += e;
      }
      if (static_cast<int>(monomial.exponents.size()) != snre.symbol_count)
        throw ParseError("each exponent vector must have k entries");
      if (total != snre.degree) throw ParseError("exponents in each term must sum to d");
      if (!seen.insert(monomial.exponents).second)
        throw ParseError("duplicate exponent vector within a row");
      monomials.push_back(std::move(monomial));
    }
    std::sort(monomials.begin(), monomials.end(),
              [](const Monomial& a, const Monomial& b) { return a.exponents > b.exponents; });
    snre.rows.push_back(std::move(monomials));
  }

  if (doc.is_object() && doc.contains("init")) {
    for (const Json& value : detail::as_array(doc["init"], "init")) {
      const int entry = detail::as_int(value, "init entry");
      if (entry < 1) throw ParseError("initial conditions must be positive");
      snre.init.push_back(BigInt(entry));
    }
    if (snre.init.size() != snre.rows.size())
      throw ParseError("init must contain exactly k entries");
  } else {
    snre.init.assign(snre.rows.size(), BigInt(1));
  }
  return snre;
}

inline std::string snre_to_json(const Snre& snre) {
  Json doc;
  doc["d"] = snre.degree;
  doc["k"] = snre.symbol_count;
  Json rows = Json::array();
  for (const auto& row : snre.rows) {
    Json terms = Json::array();
    for (const Monomial& monomial : row) {
      Json term;
      term["r"] = monomial.coeff;
      term["c"] = monomial.exponents;
      terms.push_back(std::move(term));
    }
    rows.push_back(std::move(terms));
  }
  doc["rows"] = std::move(rows);
  Json init = Json::array();
  for (const BigInt& value : snre.init) init.push_back(value.get_si());
  doc["init"] = std::move(init);
  return doc.dump(2) + "\n";
}

/// Parse a network template {d, a, alpha: [...], z}.
inline Template template_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  Template tmpl;
  tmpl.degree = detail::as_int(detail::member(doc, "d"), "d");
  tmpl.a = detail::as_double(detail::member(doc, "a"), "a");
  tmpl.alpha = detail::as_double_list(detail::member(doc, "alpha"), "alpha");
  tmpl.z = detail::as_double(detail::member(doc, "z"), "z");
  try {
    validate_template(tmpl);
  } catch (const std::invalid_argument& error) {
    throw ParseError(error.what());
  }
  return tmpl;
}

inline std::string template_to_json(const Template& tmpl) {
  Json doc;
  doc["d"] = tmpl.degree;
  doc["a"] = tmpl.a;
  doc["alpha"] = tmpl.alpha;
  doc["z"] = tmpl.z;
  return doc.dump(2) + "\n";
}

/// Parse a basic-set document {d, plus: [[+-1...], ...], minus: [...]}.
inline BasicSet basic_set_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  BasicSet basic;
  basic.degree = detail::as_int(detail::member(doc, "d"), "d");
  if (basic.degree < 1) throw ParseError("d must be >= 1");
  for (const Json& item : detail::as_array(detail::member(doc, "plus"), "plus"))
    basic.plus.insert(detail::as_sign_vector(item, basic.degree, "plus vector"));
  for (const Json& item : detail::as_array(detail::member(doc, "minus"), "minus"))
    basic.minus.insert(detail::as_sign_vector(item, basic.degree, "minus vector"));
  return basic;
}

inline std::string basic_set_to_json(const BasicSet& basic) {
  Json doc;
  doc["d"] = basic.degree;
  doc["plus"] = Json::array();
  for (const SignVector& v : basic.plus) doc["plus"].push_back(v);
  doc["minus"] = Json::array();
  for (const SignVector& v : basic.minus) doc["minus"].push_back(v);
  return doc.dump(2) + "\n";
}

namespace detail {

inline void flatten_pattern_tree(const Json& node, int degree, int depth, int max_depth,
                                 std::vector<std::vector<int>>& levels) {
  if (depth > max_depth) throw ParseError("pattern tree is deeper than its first branch");
  const int label = as_int(member(node, "label"), "label");
  if (label != 1 && label != -1) throw ParseError("labels must be +1 or -1");
  levels[static_cast<std::size_t>(depth)].push_back(label);
  const Json* children = nullptr;
  if (node.is_object() && node.contains("children")) children = &node.at("children");
  const std::size_t child_count =
      children == nullptr ? 0 : as_array(*children, "children").size();
  if (child_count == 0) {
    if (depth != max_depth) throw ParseError("pattern tree must be complete: short branch found");
    return;
  }
  if (static_cast<int>(child_count) != degree)
    throw ParseError("every internal node needs exactly d children");
  for (const Json& child : *children) flatten_pattern_tree(child, degree, depth + 1, max_depth, levels);
}

}  // namespace detail

/// Parse a nested pattern tree {label, children: [...]} into the level-order
/// layout used by the mosaic checker. The tree must be complete: every
/// internal node has exactly d children and all leaves share one depth.
inline LabeledTree pattern_tree_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  const Json* probe = &doc;
  int degree = 0;
  int max_depth = 0;
  while (probe->is_object() && probe->contains("children") &&
         !detail::as_array(probe->at("children"), "children").empty()) {
    const Json& children = probe->at("children");
    if (degree == 0) degree = static_cast<int>(children.size());
    ++max_depth;
    probe = &children.at(0);
  }
  if (max_depth == 0) throw ParseError("pattern tree needs height >= 1");

  std::vector<std::vector<int>> levels(static_cast<std::size_t>(max_depth) + 1);
  detail::flatten_pattern_tree(doc, degree, 0, max_depth, levels);

  LabeledTree tree;
  tree.degree = degree;
  std::size_t expected = 1;
  for (const auto& level : levels) {
    if (level.size() != expected) throw ParseError("pattern tree must be complete at every level");
    for (int label : level) tree.labels.push_back(label);
    expected *= static_cast<std::size_t>(degree);
  }
  return tree;
}

inline std::string pattern_tree_to_json(const LabeledTree& tree) {
  validate_labeled_tree(tree);
  const std::size_t internal = (tree.labels.size() - 1) / static_cast<std::size_t>(tree.degree);
  const auto build = [&](auto&& self, std::size_t node) -> Json {
    Json record;
    record["label"] = tree.labels[node];
    Json children = Json::array();
    if (node < internal)
      for (int j = 0; j < tree.degree; ++j)
        children.push_back(self(self, node * static_cast<std::size_t>(tree.degree) + 1 +
                                          static_cast<std::size_t>(j)));
    record["children"] = std::move(children);
    return record;
  };
  return build(build, 0).dump(2) + "\n";
}

/// One reproducible sweep request {d, alpha, a_range, z_range, resolution,
/// tol}; `tol` is optional (default: one a-axis grid step).
struct SweepConfig {
  int degree = 0;
  std::vector<double> alpha;
  std::pair<double, double> a_range{0.0, 0.0};
  std::pair<double, double> z_range{0.0, 0.0};
  int resolution = 0;
  std::optional<double> tol;
};

inline SweepConfig sweep_config_from_json(const std::string& text) {
  const Json doc = detail::parse_document(text);
  SweepConfig config;
  config.degree = detail::as_int(detail::member(doc, "d"), "d");
  config.alpha = detail::as_double_list(detail::member(doc, "alpha"), "alpha");
  if (static_cast<int>(config.alpha.size()) != config.degree)
    throw ParseError("alpha must list exactly d couplings");
  config.a_range = detail::as_range(detail::member(doc, "a_range"), "a_range");
  config.z_range = detail::as_range(detail::member(doc, "z_range"), "z_range");
  config.resolution = detail::as_int(detail::member(doc, "resolution"), "resolution");
  if (config.resolution < 2) throw ParseError("resolution must be >= 2");
  if (!(config.a_range.first < config.a_range.second) ||
      !(config.z_range.first < config.z_range.second))
    throw ParseError("ranges must satisfy lo < hi");
  if (doc.is_object() && doc.contains("tol")) {
    const double tol = detail::as_double(doc["tol"], "tol");
    if (!(tol > 0.0)) throw ParseError("tol must be positive");
    config.tol = tol;
  }
  return config;
}

inline std::string sweep_config_to_json(const SweepConfig& config) {
  Json doc;
  doc["d"] = config.degree;
  doc["alpha"] = config.alpha;
  doc["a_range"] = {config.a_range.first, config.a_range.second};
  doc["z_range"] = {config.z_range.first, config.z_range.second};
  doc["resolution"] = config.resolution;
  if (config.tol) doc["tol"] = *config.tol;
  return doc.dump(2) + "\n";
}

/// Structured entropy report: the value, the maximizing selection, its
/// restricted adjacency matrix, and the symbol classification.
inline Json entropy_report(const TsftEntropy& result) {
  Json doc;
  doc["entropy"] = result.entropy;
  doc["argmax_selection"] = result.argmax.selection;
  doc["matrix"] = result.argmax_matrix;
  doc["essential"] = result.essential;
  doc["pruned_symbols"] = result.pruned_symbols;
  return doc;
}

inline std::string entropy_report_json(const TsftEntropy& result) {
  return entropy_report(result).dump(2) + "\n";
}

/// Structured realization report {realizable, condition, template?, margin}.
inline Json realization_report(const RealizabilityCheck& check, const RealizeResult& result) {
  Json doc;
  doc["realizable"] = result.realizable;
  switch (check.condition) {
    case RealizableVia::kInv1:
      doc["condition"] = "Inv1";
      break;
    case RealizableVia::kInv2:
      doc["condition"] = "Inv2";
      break;
    default:
      doc["condition"] = "none";
      break;
  }
  doc["margin"] = result.margin.get_d();
  if (result.realizable) {
    doc["template"] = Json::parse(template_to_json(result.tmpl));
  }
  return doc;
}

inline std::string realization_report_json(const RealizabilityCheck& check,
                                           const RealizeResult& result) {
  return realization_report(check, result).dump(2) + "\n";
}

}  // namespace cayley
