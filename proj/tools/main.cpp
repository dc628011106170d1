/// Command-line front end: tree-shift entropy, block counting, entropy
/// spectra, and the tree-network pattern/learning/bifurcation commands.
///
/// Every command prints a short human-readable report followed by one final
/// line containing a compact JSON record with the same data, so scripts never
/// have to scrape prose. Exit codes: 0 success, 2 malformed input or usage,
/// 3 resource cap exceeded, 4 boundary template parameter, 5 internal
/// cross-check failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cayley/bifurcation.hpp"
#include "cayley/ctnn.hpp"
#include "cayley/entropy.hpp"
#include "cayley/errors.hpp"
#include "cayley/io.hpp"
#include "cayley/separation.hpp"
#include "cayley/snre.hpp"
#include "cayley/spectral.hpp"
#include "cayley/tree_shift.hpp"

namespace {

using cayley::Json;

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.6f", value);
  return buffer;
}

std::string join(const std::vector<std::string>& items, const std::string& separator) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += separator;
    out += items[i];
  }
  return out;
}

std::string block_text(int root_sign, const cayley::SignVector& children) {
  std::string out = "(";
  out += root_sign > 0 ? "+" : "-";
  out += ";";
  for (std::size_t i = 0; i < children.size(); ++i) {
    if (i > 0) out += ",";
    out += children[i] > 0 ? "+" : "-";
  }
  return out + ")";
}

std::string matrix_text(const std::vector<std::vector<int>>& matrix) {
  std::string out = "[";
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (i > 0) out += ", ";
    out += "[";
    for (std::size_t j = 0; j < matrix[i].size(); ++j) {
      if (j > 0) out += ",";
      out += std::to_string(matrix[i][j]);
    }
    out += "]";
  }
  return out + "]";
}

/// Shared emission path: prose lines, optional report file, and the final
/// machine-parsable JSON line.
void emit(const std::vector<std::string>& prose, Json record, const std::string& out_path) {
  for (const std::string& line : prose) std::cout << line << "\n";
  if (!out_path.empty()) cayley::write_text_file(out_path, record.dump(2) + "\n");
  std::cout << record.dump() << std::endl;
}

struct Options {
  std::string input;
  std::string extra_input;
  std::string out_path;
  std::string format = "text";
  int n = 1;
  int spectrum_degree = 1;
  int spectrum_symbols = 1;
  double tol = 0.0;
  bool tol_set = false;
  std::uint64_t cap = 0;
  bool cap_set = false;
  std::uint64_t seed = 0;
  int workers = 1;
  bool mode_exact = false;
  bool mode_log = false;
  bool mode_enumerate = false;
};

void run_tsft_entropy(const Options& opt) {
  const cayley::MarkovTreeShift shift =
      cayley::tree_shift_from_json(cayley::read_text_file(opt.input));
  cayley::EntropyOptions entropy_options;
  if (opt.cap_set) entropy_options.reduced_cap = opt.cap;
  const cayley::TsftEntropy result = cayley::entropy_tsft(shift, entropy_options);

  std::vector<std::string> prose;
  prose.push_back("entropy = " + format_number(result.entropy) + " (= ln " +
                  format_number(std::exp(result.entropy)) + ")");
  if (result.empty) prose.push_back("the shift is empty: pruning removed every symbol");
  prose.push_back("essential symbols: " +
                  (result.essential.empty() ? "(none)" : join(result.essential, " ")));
  prose.push_back("pruned symbols: " +
                  (result.pruned_symbols.empty() ? "(none)" : join(result.pruned_symbols, " ")));
  prose.push_back("maximizing reduced system: matrix " + matrix_text(result.argmax_matrix) +
                  " over " + std::to_string(result.reduced_considered) + " candidates");

  Json record = cayley::entropy_report(result);
  record["command"] = "tsft entropy";
  record["empty"] = result.empty;
  emit(prose, std::move(record), opt.out_path);
}

void run_tsft_blocks(const Options& opt) {
  const cayley::MarkovTreeShift shift =
      cayley::tree_shift_from_json(cayley::read_text_file(opt.input));
  const int n = opt.n;
  std::vector<std::string> prose;
  Json record;
  record["command"] = "tsft blocks";
  record["n"] = n;

  if (opt.mode_enumerate) {
    if (n > 3) throw std::invalid_argument("blocks: enumeration is limited to n <= 3");
    const std::uint64_t cap = opt.cap_set ? opt.cap : 10'000'000;
    const auto patterns = cayley::enumerate_blocks(shift, n, cap);
    // Exhaustive listing and the counting recursion must agree exactly.
    cayley::CountOptions count_options;
    count_options.exact = true;
    const auto series = cayley::count_blocks(shift, n, count_options);
    if (series.total(n) != cayley::BigInt(static_cast<long>(patterns.size())))
      throw cayley::InternalInconsistencyError("blocks: enumeration disagrees with counts");
    prose.push_back("enumerated " + std::to_string(patterns.size()) + " " + std::to_string(n) +
                    "-blocks:");
    Json listing = Json::array();
    for (const auto& pattern : patterns) {
      const std::string rendered = cayley::render_pattern(shift.alphabet(), pattern);
      prose.push_back("  " + rendered);
      listing.push_back(rendered);
    }
    record["mode"] = "enumerate";
    record["patterns"] = std::move(listing);
    record["total"] = std::to_string(patterns.size());
    emit(prose, std::move(record), opt.out_path);
    return;
  }

  const bool exact = opt.mode_exact || (!opt.mode_log && n <= 12);
  cayley::CountOptions count_options;
  count_options.exact = exact;
  if (opt.cap_set) count_options.digit_budget = opt.cap;
  const auto series = cayley::count_blocks(shift, n, count_options);
  const auto& names = shift.alphabet().names();

  if (exact) {
    Json per_symbol = Json::object();
    const auto& row = series.exact[static_cast<std::size_t>(n - 1)];
    for (std::size_t i = 0; i < row.size(); ++i) {
      prose.push_back("gamma(" + names[i] + "; n=" + std::to_string(n) +
                      ") = " + row[i].get_str());
      per_symbol[names[i]] = row[i].get_str();
    }
    prose.push_back("total " + std::to_string(n) + "-blocks: " + series.total(n).get_str());
    record["mode"] = "exact";
    record["per_symbol"] = std::move(per_symbol);
    record["total"] = series.total(n).get_str();
  } else {
    Json per_symbol = Json::object();
    const auto& row = series.log_space[static_cast<std::size_t>(n - 1)];
    double max_log = -std::numeric_limits<double>::infinity();
    for (double value : row) max_log = std::max(max_log, value);
    double sum = 0.0;
    for (double value : row) sum += std::exp(value - max_log);
    const double log_total = max_log + std::log(sum);
    for (std::size_t i = 0; i < row.size(); ++i) {
      prose.push_back("ln gamma(" + names[i] + "; n=" + std::to_string(n) +
                      ") = " + format_number(row[i]));
      per_symbol[names[i]] = row[i];
    }
    prose.push_back("ln total " + std::to_string(n) + "-blocks: " + format_number(log_total));
    record["mode"] = "log";
    record["per_symbol"] = std::move(per_symbol);
    record["ln_total"] = log_total;
  }
  emit(prose, std::move(record), opt.out_path);
}

void run_tsft_spectrum(const Options& opt) {
  const std::uint64_t cap = opt.cap_set ? opt.cap : 10'000'000;
  const auto entries = cayley::entropy_spectrum(opt.spectrum_degree, opt.spectrum_symbols, cap);
  std::vector<std::string> prose;
  prose.push_back("entropy spectrum for degree " + std::to_string(opt.spectrum_degree) +
                  ", alphabet size " + std::to_string(opt.spectrum_symbols) + " (" +
                  std::to_string(entries.size()) + " values):");
  Json listing = Json::array();
  for (const auto& entry : entries) {
    prose.push_back("  h = " + format_number(entry.entropy) + " (rho = " +
                    format_number(entry.rho) + ", witness " + matrix_text(entry.witness) + ")");
    Json item;
    item["entropy"] = entry.entropy;
    item["rho"] = entry.rho;
    item["witness"] = entry.witness;
    listing.push_back(std::move(item));
  }
  Json record;
  record["command"] = "tsft spectrum";
  record["d"] = opt.spectrum_degree;
  record["k"] = opt.spectrum_symbols;
  record["values"] = Json::array();
  for (const auto& entry : entries) record["values"].push_back(entry.entropy);
  record["entries"] = std::move(listing);
  emit(prose, std::move(record), opt.out_path);
}

Json basic_set_record(const cayley::BasicSet& basic) {
  Json doc;
  doc["d"] = basic.degree;
  doc["plus"] = Json::array();
  for (const auto& v : basic.plus) doc["plus"].push_back(v);
  doc["minus"] = Json::array();
  for (const auto& v : basic.minus) doc["minus"].push_back(v);
  return doc;
}

void run_ctnn_patterns(const Options& opt) {
  const cayley::Template tmpl = cayley::template_from_json(cayley::read_text_file(opt.input));
  const double tol = opt.tol_set ? opt.tol : 1e-12;
  const cayley::BasicSet basic = cayley::admissible_patterns(tmpl, tol);
  const cayley::RegionCode code = cayley::region_code(basic);

  std::vector<std::string> prose;
  prose.push_back("region code [" + std::to_string(code.p) + "," + std::to_string(code.q) +
                  "]; " + std::to_string(basic.plus.size() + basic.minus.size()) +
                  " admissible blocks:");
  for (const auto& v : basic.plus) prose.push_back("  " + block_text(+1, v));
  for (const auto& v : basic.minus) prose.push_back("  " + block_text(-1, v));

  Json record = basic_set_record(basic);
  record["command"] = "ctnn patterns";
  record["p"] = code.p;
  record["q"] = code.q;
  emit(prose, std::move(record), opt.out_path);
}

void run_ctnn_entropy(const Options& opt) {
  const cayley::Template tmpl = cayley::template_from_json(cayley::read_text_file(opt.input));
  const cayley::CtnnEntropy result = cayley::ctnn_entropy(tmpl);
  std::vector<std::string> prose;
  prose.push_back("region code [" + std::to_string(result.code.p) + "," +
                  std::to_string(result.code.q) + "]; entropy = " +
                  format_number(result.entropy) +
                  (result.entropy > 0.0
                       ? " (= ln " + format_number(std::exp(result.entropy)) + ")"
                       : " (zero)"));
  Json record = basic_set_record(result.basic);
  record["command"] = "ctnn entropy";
  record["p"] = result.code.p;
  record["q"] = result.code.q;
  record["entropy"] = result.entropy;
  emit(prose, std::move(record), opt.out_path);
}

void run_ctnn_critical(const Options& opt) {
  const cayley::Template tmpl = cayley::template_from_json(cayley::read_text_file(opt.input));
  const cayley::ChildCouplings cc = cayley::child_couplings(tmpl.alpha);
  const double curve = cayley::critical_a(cc, tmpl.z);
  const double tol = opt.tol_set ? opt.tol : 1e-9;
  const bool flagged = cayley::is_critical(tmpl, tol);
  const double radius = 0.05;
  const int samples = 400;
  const bool probe =
      cayley::verify_critical_by_definition(cc, tmpl.a, tmpl.z, radius, samples, opt.seed);

  std::vector<std::string> prose;
  prose.push_back("critical self-feedback at z = " + format_number(tmpl.z) +
                  ": a* = " + format_number(curve));
  prose.push_back("distance |a - a*| = " + format_number(std::abs(tmpl.a - curve)) +
                  (flagged ? "; critical" : "; not critical") + " at tolerance " +
                  cayley::detail::format_real(tol));
  prose.push_back(std::string("definition-level probe (radius ") + format_number(radius) + ", " +
                  std::to_string(samples) + " samples, seed " + std::to_string(opt.seed) +
                  "): " + (probe ? "both entropy classes found" : "single entropy class"));
  if (cc.degenerate)
    prose.push_back("note: couplings are degenerate; the closed form is reported as-is");

  Json record;
  record["command"] = "ctnn critical";
  record["z"] = tmpl.z;
  record["a"] = tmpl.a;
  record["a_critical"] = curve;
  record["distance"] = std::abs(tmpl.a - curve);
  record["tol"] = tol;
  record["is_critical"] = flagged;
  record["probe_critical"] = probe;
  record["radius"] = radius;
  record["samples"] = samples;
  record["seed"] = opt.seed;
  record["degenerate"] = cc.degenerate;
  emit(prose, std::move(record), opt.out_path);
}

void run_ctnn_realize(const Options& opt) {
  const cayley::BasicSet basic = cayley::basic_set_from_json(cayley::read_text_file(opt.input));
  const cayley::RealizabilityCheck check = cayley::check_realizable(basic);
  const cayley::RealizeResult result = cayley::realize(basic);
  if (check.realizable != result.realizable)
    throw cayley::InternalInconsistencyError("realize: criterion and search disagree");

  std::vector<std::string> prose;
  if (result.realizable) {
    // The returned template must regenerate the requested set exactly.
    if (!(cayley::admissible_patterns(result.tmpl) == basic))
      throw cayley::InternalInconsistencyError("realize: template does not reproduce the set");
    std::string alphas;
    for (std::size_t i = 0; i < result.tmpl.alpha.size(); ++i) {
      if (i > 0) alphas += ", ";
      alphas += format_number(result.tmpl.alpha[i]);
    }
    prose.push_back(std::string("realizable via inclusion condition ") +
                    (check.condition == cayley::RealizableVia::kInv1 ? "1" : "2"));
    prose.push_back("template: a = " + format_number(result.tmpl.a) + ", alpha = (" + alphas +
                    "), z = " + format_number(result.tmpl.z));
    prose.push_back("margin = " + result.margin.get_str() + " (" +
                    format_number(result.margin.get_d()) + ")");
  } else {
    prose.push_back("not realizable: no template admits exactly this pattern set");
  }

  Json record = cayley::realization_report(check, result);
  record["command"] = "ctnn realize";
  emit(prose, std::move(record), opt.out_path);
}

void run_ctnn_sweep(const Options& opt) {
  const cayley::SweepConfig config =
      cayley::sweep_config_from_json(cayley::read_text_file(opt.input));
  const cayley::ChildCouplings cc = cayley::child_couplings(config.alpha);
  const cayley::SweepGrid grid = cayley::sweep(cc, config.a_range, config.z_range,
                                               config.resolution, opt.workers, config.tol);

  std::size_t boundary = 0;
  std::size_t positive = 0;
  std::size_t zero = 0;
  std::size_t critical = 0;
  for (const auto& point : grid.points) {
    if (point.boundary)
      ++boundary;
    else if (point.entropy > 0.0)
      ++positive;
    else
      ++zero;
    if (point.critical) ++critical;
  }

  const cayley::DiagramFormat format =
      opt.format == "svg" ? cayley::DiagramFormat::kSvg : cayley::DiagramFormat::kCsv;
  if (opt.out_path.empty()) throw std::invalid_argument("sweep: -o PATH is required");
  cayley::emit_diagram(grid, cc, format, opt.out_path);

  std::vector<std::string> prose;
  prose.push_back("swept " + std::to_string(config.resolution) + "x" +
                  std::to_string(config.resolution) + " grid: " + std::to_string(positive) +
                  " full-entropy, " + std::to_string(zero) + " zero-entropy, " +
                  std::to_string(boundary) + " boundary, " + std::to_string(critical) +
                  " near-critical");
  prose.push_back("wrote " + opt.format + " diagram to " + opt.out_path);

  Json record;
  record["command"] = "ctnn sweep";
  record["resolution"] = config.resolution;
  record["points"] = grid.points.size();
  record["positive"] = positive;
  record["zero"] = zero;
  record["boundary"] = boundary;
  record["critical"] = critical;
  record["format"] = opt.format;
  record["output"] = opt.out_path;
  record["workers"] = opt.workers;
  // The final record intentionally omits per-point data; the diagram file
  // carries it.
  for (const std::string& line : prose) std::cout << line << "\n";
  std::cout << record.dump() << std::endl;
}

void run_ctnn_verify_mosaic(const Options& opt) {
  const cayley::Template tmpl = cayley::template_from_json(cayley::read_text_file(opt.input));
  const cayley::LabeledTree tree =
      cayley::pattern_tree_from_json(cayley::read_text_file(opt.extra_input));
  const cayley::MosaicCheck check = cayley::verify_mosaic(tmpl, tree);

  const std::size_t internal =
      (tree.labels.size() - 1) / static_cast<std::size_t>(tree.degree);
  std::vector<std::string> prose;
  if (check.ok) {
    prose.push_back("mosaic equilibrium check passed on " + std::to_string(internal) +
                    " interior nodes");
  } else {
    for (std::size_t i = 0; i < internal; ++i) {
      const double state = check.states[i];
      const bool fine = tree.labels[i] > 0 ? state > 1.0 : state < -1.0;
      if (fine) continue;
      prose.push_back("mosaic equilibrium check failed at node " + std::to_string(i) +
                      ": state " + format_number(state) + " does not certify label " +
                      std::to_string(tree.labels[i]));
      break;
    }
  }

  Json record;
  record["command"] = "ctnn verify-mosaic";
  record["ok"] = check.ok;
  record["internal_nodes"] = internal;
  record["states"] = check.states;  // leaves serialize as null
  emit(prose, std::move(record), opt.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological entropy of tree-shifts of finite type and tree-network tools"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* tsft = app.add_subcommand("tsft", "Tree-shift analysis");
  tsft->require_subcommand(1);
  CLI::App* ctnn = app.add_subcommand("ctnn", "Tree-network template tools");
  ctnn->require_subcommand(1);

  auto add_common = [&](CLI::App* cmd, bool with_cap) {
    cmd->add_option("-o,--output", opt.out_path, "also write the JSON report to PATH");
    if (with_cap)
      cmd->add_option("--cap", opt.cap, "enumeration / digit budget cap")
          ->envname("CAYLEY_ENTROPY_CAP")
          ->check(CLI::PositiveNumber)
          ->each([&](const std::string&) { opt.cap_set = true; });
  };

  CLI::App* tsft_entropy = tsft->add_subcommand("entropy", "Topological entropy of a tree-shift");
  tsft_entropy->add_option("file", opt.input, "tree-shift document")->required();
  add_common(tsft_entropy, true);
  tsft_entropy->callback([&] { run_tsft_entropy(opt); });

  CLI::App* tsft_blocks = tsft->add_subcommand("blocks", "Count or list n-blocks");
  tsft_blocks->add_option("file", opt.input, "tree-shift document")->required();
  tsft_blocks->add_option("-n", opt.n, "block depth (n >= 1)")
      ->required()
      ->check(CLI::PositiveNumber);
  auto* flag_exact = tsft_blocks->add_flag("--exact", opt.mode_exact, "force exact counting");
  auto* flag_log = tsft_blocks->add_flag("--log", opt.mode_log, "force log-space counting");
  auto* flag_enum =
      tsft_blocks->add_flag("--enumerate", opt.mode_enumerate, "list the blocks (n <= 3)");
  flag_exact->excludes(flag_log)->excludes(flag_enum);
  flag_log->excludes(flag_enum);
  add_common(tsft_blocks, true);
  tsft_blocks->callback([&] { run_tsft_blocks(opt); });

  CLI::App* tsft_spectrum =
      tsft->add_subcommand("spectrum", "All entropy values over a degree/alphabet family");
  tsft_spectrum->add_option("d", opt.spectrum_degree, "tree degree")
      ->required()
      ->check(CLI::PositiveNumber);
  tsft_spectrum->add_option("k", opt.spectrum_symbols, "alphabet size")
      ->required()
      ->check(CLI::PositiveNumber);
  add_common(tsft_spectrum, true);
  tsft_spectrum->callback([&] { run_tsft_spectrum(opt); });

  CLI::App* ctnn_patterns =
      ctnn->add_subcommand("patterns", "Admissible two-blocks of a template");
  ctnn_patterns->add_option("file", opt.input, "template document")->required();
  ctnn_patterns->add_option("--tol", opt.tol, "boundary rejection tolerance")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { opt.tol_set = true; });
  add_common(ctnn_patterns, false);
  ctnn_patterns->callback([&] { run_ctnn_patterns(opt); });

  CLI::App* ctnn_entropy_cmd =
      ctnn->add_subcommand("entropy", "Entropy of the template's pattern family");
  ctnn_entropy_cmd->add_option("file", opt.input, "template document")->required();
  add_common(ctnn_entropy_cmd, false);
  ctnn_entropy_cmd->callback([&] { run_ctnn_entropy(opt); });

  CLI::App* ctnn_critical =
      ctnn->add_subcommand("critical", "Closed-form critical curve and neighborhood probe");
  ctnn_critical->add_option("file", opt.input, "template document")->required();
  ctnn_critical->add_option("--tol", opt.tol, "criticality tolerance (default 1e-9)")
      ->check(CLI::PositiveNumber)
      ->each([&](const std::string&) { opt.tol_set = true; });
  ctnn_critical->add_option("--seed", opt.seed, "probe RNG seed (default 0)");
  add_common(ctnn_critical, false);
  ctnn_critical->callback([&] { run_ctnn_critical(opt); });

  CLI::App* ctnn_realize =
      ctnn->add_subcommand("realize", "Learn a template from a basic-set file");
  ctnn_realize->add_option("file", opt.input, "basic-set document")->required();
  add_common(ctnn_realize, false);
  ctnn_realize->callback([&] { run_ctnn_realize(opt); });

  CLI::App* ctnn_sweep = ctnn->add_subcommand("sweep", "Classify an (a, z) parameter grid");
  ctnn_sweep->add_option("file", opt.input, "run-config document")->required();
  ctnn_sweep->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"csv", "svg"}))
      ->default_val("csv");
  ctnn_sweep->add_option("-o,--output", opt.out_path, "diagram output path")->required();
  ctnn_sweep->add_option("--workers", opt.workers, "row-parallel worker threads")
      ->check(CLI::PositiveNumber);
  ctnn_sweep->callback([&] { run_ctnn_sweep(opt); });

  CLI::App* ctnn_mosaic =
      ctnn->add_subcommand("verify-mosaic", "Check a labeled tree as a mosaic equilibrium");
  ctnn_mosaic->add_option("template", opt.input, "template document")->required();
  ctnn_mosaic->add_option("tree", opt.extra_input, "pattern-tree document")->required();
  add_common(ctnn_mosaic, false);
  ctnn_mosaic->callback([&] { run_ctnn_verify_mosaic(opt); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    app.exit(error);
    return 2;
  } catch (const cayley::ParseError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const cayley::CapExceededError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  } catch (const cayley::NumericalFailureError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 3;
  } catch (const cayley::BoundaryParameterError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 4;
  } catch (const cayley::InternalInconsistencyError& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 5;
  } catch (const cayley::Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 2;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
