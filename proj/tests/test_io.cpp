#include "cayley/io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "test_util.hpp"

namespace {

using cayley::BasicSet;
using cayley::MarkovTreeShift;
using cayley::ParseError;
using cayley::Snre;
using cayley::Template;

std::string fixture_path(const std::string& name) {
  const char* dir = std::getenv("CAYLEY_FIXTURES");
  EXPECT_NE(dir, nullptr) << "CAYLEY_FIXTURES must point at the fixture directory";
  return std::string(dir) + "/" + name;
}

std::string fixture(const std::string& name) {
  return cayley::read_text_file(fixture_path(name));
}

TEST(TreeShiftIo, ForbiddenFormMatchesHandBuiltShift) {
  const MarkovTreeShift parsed = cayley::tree_shift_from_json(fixture("golden_mean.json"));
  const MarkovTreeShift expected = cayley::testing::golden_mean_shift();
  EXPECT_EQ(parsed.degree(), expected.degree());
  EXPECT_EQ(parsed.alphabet().names(), expected.alphabet().names());
  EXPECT_EQ(parsed.allowed(), expected.allowed());
}

TEST(TreeShiftIo, AllowedFormRoundTrips) {
  const MarkovTreeShift shift = cayley::testing::tribonacci_like_shift();
  const std::string text = cayley::tree_shift_to_json(shift);
  const MarkovTreeShift reparsed = cayley::tree_shift_from_json(text);
  EXPECT_EQ(reparsed.degree(), shift.degree());
  EXPECT_EQ(reparsed.alphabet().names(), shift.alphabet().names());
  EXPECT_EQ(reparsed.allowed(), shift.allowed());

  const MarkovTreeShift fixture_shift = cayley::tree_shift_from_json(fixture("tribonacci.json"));
  EXPECT_EQ(fixture_shift.allowed(), shift.allowed());
}

TEST(TreeShiftIo, RejectsMalformedDocuments) {
  EXPECT_THROW(cayley::tree_shift_from_json(fixture("malformed.json")), ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json("not json at all"), ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json(R"({"alphabet": ["0"], "allowed": []})"), ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json(R"({"d": 2, "allowed": []})"), ParseError);
  // Exactly one of allowed/forbidden.
  EXPECT_THROW(
      cayley::tree_shift_from_json(R"({"d": 2, "alphabet": ["0"], "allowed": [], "forbidden": []})"),
      ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json(R"({"d": 2, "alphabet": ["0"]})"), ParseError);
  // Unknown symbols and arity mismatches.
  EXPECT_THROW(cayley::tree_shift_from_json(
                   R"({"d": 2, "alphabet": ["0"], "allowed": [{"root": "7", "children": ["0", "0"]}]})"),
               ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json(
                   R"({"d": 2, "alphabet": ["0"], "allowed": [{"root": "0", "children": ["0"]}]})"),
               ParseError);
  EXPECT_THROW(cayley::tree_shift_from_json(R"({"d": 0, "alphabet": ["0"], "allowed": []})"),
               ParseError);
  EXPECT_THROW(
      cayley::tree_shift_from_json(R"({"d": 2, "alphabet": ["0", "0"], "allowed": []})"),
      ParseError);
}

TEST(SnreIo, RoundTripsAndNormalizesRowOrder) {
  // Rows given in ascending order come back sorted descending by exponents.
  const std::string text = R"({
    "d": 2, "k": 2,
    "rows": [[{"r": 1, "c": [0, 2]}, {"r": 1, "c": [2, 0]}, {"r": 2, "c": [1, 1]}],
             [{"r": 1, "c": [2, 0]}]]
  })";
  const Snre snre = cayley::snre_from_json(text);
  EXPECT_EQ(snre.degree, 2);
  EXPECT_EQ(snre.symbol_count, 2);
  ASSERT_EQ(snre.rows.size(), 2u);
  ASSERT_EQ(snre.rows[0].size(), 3u);
  EXPECT_EQ(snre.rows[0][0].exponents, (std::vector<int>{2, 0}));
  EXPECT_EQ(snre.rows[0][1].exponents, (std::vector<int>{1, 1}));
  EXPECT_EQ(snre.rows[0][1].coeff, 2);
  EXPECT_EQ(snre.rows[0][2].exponents, (std::vector<int>{0, 2}));
  EXPECT_EQ(snre.init, (std::vector<cayley::BigInt>{1, 1}));

  const Snre reparsed = cayley::snre_from_json(cayley::snre_to_json(snre));
  EXPECT_EQ(reparsed.rows, snre.rows);
  EXPECT_EQ(reparsed.init, snre.init);

  // The serialized recursion of a shift evaluates identically after reload.
  const Snre from_shift = cayley::snre_from_tsft(cayley::testing::golden_mean_shift());
  const Snre reloaded = cayley::snre_from_json(cayley::snre_to_json(from_shift));
  EXPECT_EQ(reloaded.rows, from_shift.rows);
  EXPECT_EQ(cayley::evaluate_snre(reloaded, 4), cayley::evaluate_snre(from_shift, 4));
}

TEST(SnreIo, RejectsInconsistentSystems) {
  EXPECT_THROW(cayley::snre_from_json(R"({"d": 2, "k": 2, "rows": [[]]})"), ParseError);
  EXPECT_THROW(cayley::snre_from_json(
                   R"({"d": 2, "k": 1, "rows": [[{"r": 0, "c": [2]}]]})"),
               ParseError);
  EXPECT_THROW(cayley::snre_from_json(
                   R"({"d": 2, "k": 1, "rows": [[{"r": 1, "c": [3]}]]})"),
               ParseError);
  EXPECT_THROW(cayley::snre_from_json(
                   R"({"d": 2, "k": 2, "rows": [[{"r": 1, "c": [2]}], [{"r": 1, "c": [0, 2]}]]})"),
               ParseError);
  // Duplicate exponent vector within one row.
  EXPECT_THROW(cayley::snre_from_json(
                   R"({"d": 2, "k": 1, "rows": [[{"r": 1, "c": [2]}, {"r": 2, "c": [2]}]]})"),
               ParseError);
  // Wrong init length.
  EXPECT_THROW(cayley::snre_from_json(
                   R"({"d": 2, "k": 1, "rows": [[{"r": 1, "c": [2]}]], "init": [1, 1]})"),
               ParseError);
}

TEST(TemplateIo, ParsesWorkedExampleFile) {
  const Template tmpl = cayley::template_from_json(fixture("template_32.json"));
  EXPECT_EQ(tmpl.degree, 2);
  EXPECT_DOUBLE_EQ(tmpl.a, 1.375);
  EXPECT_DOUBLE_EQ(tmpl.z, 0.375);
  ASSERT_EQ(tmpl.alpha.size(), 2u);
  EXPECT_DOUBLE_EQ(tmpl.alpha[0], -0.25);
  EXPECT_DOUBLE_EQ(tmpl.alpha[1], 0.75);

  const Template reparsed = cayley::template_from_json(cayley::template_to_json(tmpl));
  EXPECT_EQ(reparsed.degree, tmpl.degree);
  EXPECT_EQ(reparsed.alpha, tmpl.alpha);

  // The file feeds straight into pattern generation.
  const BasicSet basic = cayley::admissible_patterns(tmpl);
  EXPECT_EQ(cayley::region_code(basic), (cayley::RegionCode{3, 2}));
}

TEST(TemplateIo, RejectsInvalidTemplates) {
  EXPECT_THROW(cayley::template_from_json(R"({"d": 2, "a": 1.0, "alpha": [0.5], "z": 0.0})"),
               ParseError);
  EXPECT_THROW(cayley::template_from_json(R"({"d": 2, "alpha": [0.5, 0.5], "z": 0.0})"),
               ParseError);
  EXPECT_THROW(cayley::template_from_json(R"({"d": 2, "a": "one", "alpha": [0.5, 0.5], "z": 0})"),
               ParseError);
}

TEST(BasicSetIo, RoundTripsWorkedExample) {
  const BasicSet basic = cayley::basic_set_from_json(fixture("basic_32.json"));
  EXPECT_EQ(basic.degree, 2);
  const std::set<cayley::SignVector> plus = {{-1, 1}, {1, 1}, {-1, -1}};
  const std::set<cayley::SignVector> minus = {{1, -1}, {-1, -1}};
  EXPECT_EQ(basic.plus, plus);
  EXPECT_EQ(basic.minus, minus);
  EXPECT_EQ(basic, cayley::admissible_patterns(
                       cayley::template_from_json(fixture("template_32.json"))));

  const BasicSet reparsed = cayley::basic_set_from_json(cayley::basic_set_to_json(basic));
  EXPECT_EQ(reparsed, basic);
}

TEST(BasicSetIo, RejectsBadVectors) {
  EXPECT_THROW(cayley::basic_set_from_json(R"({"d": 2, "plus": [[1, 0]], "minus": []})"),
               ParseError);
  EXPECT_THROW(cayley::basic_set_from_json(R"({"d": 2, "plus": [[1]], "minus": []})"), ParseError);
  EXPECT_THROW(cayley::basic_set_from_json(R"({"d": 2, "plus": [[1, 1]]})"), ParseError);
}

TEST(PatternTreeIo, ParsesNestedCompleteTree) {
  const cayley::LabeledTree tree = cayley::pattern_tree_from_json(fixture("mosaic_tree.json"));
  EXPECT_EQ(tree.degree, 2);
  EXPECT_EQ(tree.labels, std::vector<int>(7, 1));

  // Level order is preserved exactly.
  const std::string mixed = R"({
    "label": 1,
    "children": [
      {"label": 1, "children": [{"label": -1, "children": []}, {"label": -1, "children": []}]},
      {"label": -1, "children": [{"label": 1, "children": []}, {"label": 1, "children": []}]}
    ]
  })";
  const cayley::LabeledTree ordered = cayley::pattern_tree_from_json(mixed);
  EXPECT_EQ(ordered.labels, (std::vector<int>{1, 1, -1, -1, -1, 1, 1}));

  const cayley::LabeledTree reparsed =
      cayley::pattern_tree_from_json(cayley::pattern_tree_to_json(ordered));
  EXPECT_EQ(reparsed.degree, ordered.degree);
  EXPECT_EQ(reparsed.labels, ordered.labels);

  // The fixture tree is a valid equilibrium pattern for the worked template.
  const cayley::MosaicCheck check = cayley::verify_mosaic(
      cayley::template_from_json(fixture("template_32.json")), tree);
  EXPECT_TRUE(check.ok);
  EXPECT_DOUBLE_EQ(check.states[0], 2.25);
}

TEST(PatternTreeIo, RejectsIncompleteTrees) {
  EXPECT_THROW(cayley::pattern_tree_from_json(R"({"label": 1, "children": []})"), ParseError);
  // One branch is shorter than the other.
  EXPECT_THROW(cayley::pattern_tree_from_json(R"({
    "label": 1,
    "children": [
      {"label": 1, "children": [{"label": 1, "children": []}, {"label": 1, "children": []}]},
      {"label": -1, "children": []}
    ]
  })"),
               ParseError);
  // Arity changes mid-tree.
  EXPECT_THROW(cayley::pattern_tree_from_json(R"({
    "label": 1,
    "children": [
      {"label": 1, "children": [{"label": 1, "children": []}]},
      {"label": -1, "children": [{"label": 1, "children": []}]}
    ]
  })"),
               ParseError);
  EXPECT_THROW(cayley::pattern_tree_from_json(R"({"label": 3, "children": [
    {"label": 1, "children": []}, {"label": 1, "children": []}]})"),
               ParseError);
}

TEST(SweepConfigIo, ParsesAndValidates) {
  const cayley::SweepConfig config = cayley::sweep_config_from_json(fixture("sweep_config.json"));
  EXPECT_EQ(config.degree, 2);
  EXPECT_EQ(config.alpha, (std::vector<double>{-0.25, 0.75}));
  EXPECT_DOUBLE_EQ(config.a_range.first, -2.0);
  EXPECT_DOUBLE_EQ(config.a_range.second, 3.0);
  EXPECT_DOUBLE_EQ(config.z_range.first, -2.0);
  EXPECT_DOUBLE_EQ(config.z_range.second, 2.0);
  EXPECT_EQ(config.resolution, 41);
  EXPECT_FALSE(config.tol.has_value());

  const cayley::SweepConfig reparsed =
      cayley::sweep_config_from_json(cayley::sweep_config_to_json(config));
  EXPECT_EQ(reparsed.resolution, config.resolution);
  EXPECT_EQ(reparsed.alpha, config.alpha);

  EXPECT_THROW(cayley::sweep_config_from_json(
                   R"({"d": 2, "alpha": [0.5], "a_range": [0, 1], "z_range": [0, 1], "resolution": 5})"),
               ParseError);
  EXPECT_THROW(
      cayley::sweep_config_from_json(
          R"({"d": 1, "alpha": [0.5], "a_range": [1, 0], "z_range": [0, 1], "resolution": 5})"),
      ParseError);
  EXPECT_THROW(
      cayley::sweep_config_from_json(
          R"({"d": 1, "alpha": [0.5], "a_range": [0, 1], "z_range": [0, 1], "resolution": 1})"),
      ParseError);
  EXPECT_THROW(cayley::sweep_config_from_json(
                   R"({"d": 1, "alpha": [0.5], "a_range": [0, 1], "z_range": [0, 1],
                       "resolution": 5, "tol": 0})"),
               ParseError);
}

TEST(ReportIo, EntropyRecordCarriesAllFields) {
  const cayley::TsftEntropy result =
      cayley::entropy_tsft(cayley::tree_shift_from_json(fixture("tribonacci.json")));
  const cayley::Json doc = cayley::entropy_report(result);
  EXPECT_NEAR(doc.at("entropy").get<double>(), std::log(1.8392867552), 1e-6);
  EXPECT_EQ(doc.at("argmax_selection").get<std::vector<int>>(), result.argmax.selection);
  EXPECT_EQ(doc.at("matrix").get<std::vector<std::vector<int>>>(),
            (std::vector<std::vector<int>>{{1, 1, 0}, {0, 0, 1}, {2, 1, 0}}));
  EXPECT_EQ(doc.at("essential").get<std::vector<std::string>>(),
            (std::vector<std::string>{"a1", "a2", "a3"}));
  EXPECT_EQ(doc.at("pruned_symbols").get<std::vector<std::string>>(), std::vector<std::string>{});

  // The JSON text form parses back to the same record.
  const cayley::Json reparsed = cayley::Json::parse(cayley::entropy_report_json(result));
  EXPECT_EQ(reparsed, doc);
}

TEST(ReportIo, RealizationRecordMatchesOutcome) {
  const BasicSet worked = cayley::basic_set_from_json(fixture("basic_32.json"));
  const cayley::RealizabilityCheck check = cayley::check_realizable(worked);
  const cayley::RealizeResult result = cayley::realize(worked);
  const cayley::Json doc = cayley::realization_report(check, result);
  EXPECT_TRUE(doc.at("realizable").get<bool>());
  EXPECT_EQ(doc.at("condition").get<std::string>(), "Inv2");
  EXPECT_GT(doc.at("margin").get<double>(), 0.0);
  ASSERT_TRUE(doc.contains("template"));
  EXPECT_EQ(doc.at("template").at("d").get<int>(), 2);

  const BasicSet bad = cayley::basic_set_from_json(fixture("nonrealizable.json"));
  const cayley::Json rejected =
      cayley::realization_report(cayley::check_realizable(bad), cayley::realize(bad));
  EXPECT_FALSE(rejected.at("realizable").get<bool>());
  EXPECT_EQ(rejected.at("condition").get<std::string>(), "none");
  EXPECT_FALSE(rejected.contains("template"));
}

TEST(FileIo, ReadWriteAndMissingFile) {
  const std::string path = ::testing::TempDir() + "cayley_io_probe.txt";
  cayley::write_text_file(path, "round trip\n");
  EXPECT_EQ(cayley::read_text_file(path), "round trip\n");
  std::remove(path.c_str());
  EXPECT_THROW(cayley::read_text_file("/no_such_dir_xyz/missing.json"), cayley::Error);
  EXPECT_THROW(cayley::write_text_file("/no_such_dir_xyz/out.json", "x"), cayley::Error);
}

}  // namespace
