#include "ellab/report.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ellab;

namespace {

const char* kToml = R"(
seed = 5
workers = 2

[quadrature]
circle_nodes = 128

[[problems]]
name = "ball"
dimension = 3
lambda = 1.0

[[functionals]]
kind = "hardy"
field = "solution:ball"

[[functionals]]
name = "lip"
kind = "lipschitz"
field = "x1"
dimension = 2
pairs = 200

[[checks]]
theorem = "thm-1.4"
field = "radial-yukawa"
dimension = 2
r_count = 8

[[checks]]
theorem = "lem-lemx"
draws = 500
)";

const ReportItem& item_named(const Report& r, const std::string& name) {
  auto it = std::find_if(r.items.begin(), r.items.end(), [&](const ReportItem& i) { return i.name == name; });
  if (it == r.items.end()) throw std::runtime_error("no item " + name);
  return *it;
}

}  // namespace

TEST(Config, TomlAndJsonAgree) {
  const RunConfig a = parse_config(kToml);
  EXPECT_EQ(a.seed, 5u);
  EXPECT_EQ(a.workers, 2u);
  EXPECT_EQ(a.orders.circle_nodes, 128);
  ASSERT_EQ(a.problems.size(), 1u);
  ASSERT_EQ(a.functionals.size(), 2u);
  EXPECT_EQ(a.functionals[0].name, "hardy-0");
  EXPECT_EQ(a.functionals[1].name, "lip");
  ASSERT_EQ(a.checks.size(), 2u);
  EXPECT_EQ(a.checks[1].theorem, "lem-lemx");
  const RunConfig b = parse_config(config_to_json(a));
  EXPECT_EQ(config_to_json(a), config_to_json(b));
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("seed = "), Error);
  EXPECT_THROW(parse_config("{\"seed\": -1}"), Error);
  EXPECT_THROW(parse_config("colour = 3"), Error);
  EXPECT_THROW(parse_config("[[checks]]\nfield = \"x1\"\n"), Error);
  EXPECT_THROW(parse_config("[quadrature]\nrings = 3\n"), Error);
}

TEST(Config, DefaultCoversEveryTheorem) {
  const RunConfig c = default_config();
  for (const auto& id : theorem_ids()) {
    const bool found = std::any_of(c.checks.begin(), c.checks.end(), [&](const CheckRequest& r) { return r.theorem == id; });
    EXPECT_TRUE(found) << id;
  }
}

TEST(Params, TracksUnusedKeys) {
  Params p;
  p.set("nu", 2.0);
  p.set("typo", 1.0);
  EXPECT_EQ(p.number("nu", 0.0), 2.0);
  EXPECT_EQ(p.number("absent", 3.5), 3.5);
  EXPECT_EQ(p.unused(), std::vector<std::string>{"typo"});
  p.set("omega", std::string("sqrt"));
  EXPECT_THROW(p.number("omega", 0.0), Error);
}

TEST(Run, FullReportAndRoundTrip) {
  const Report r = run(parse_config(kToml));
  ASSERT_EQ(r.items.size(), 5u);
  EXPECT_EQ(r.items[0].kind, "solve");
  EXPECT_EQ(r.items[0].status, "ok");
  EXPECT_EQ(item_named(r, "hardy-0").status, "ok");
  // u = sinh|x|/|x| normalized to 1 on the sphere, so the sup of the means stays below 1
  EXPECT_LT(item_named(r, "hardy-0").values[0].second, 1.0);
  EXPECT_NEAR(item_named(r, "lip").values[0].second, 1.0, 1e-9);
  EXPECT_EQ(item_named(r, "thm-1.4-0").status, "pass");
  EXPECT_EQ(r.exit_code(), 0);

  const std::string json = report_to_json(r);
  const Report back = report_from_json(json);
  EXPECT_EQ(report_to_json(back), json);
}

TEST(Run, DeterministicAcrossWorkerCounts) {
  RunConfig c = parse_config(kToml);
  RunOptions one, four;
  one.workers = 1;
  four.workers = 4;
  EXPECT_EQ(report_to_json(run(c, one), false), report_to_json(run(c, four), false));
  RunOptions reseeded;
  reseeded.seed = 6;
  EXPECT_NE(report_to_json(run(c, one), false), report_to_json(run(c, reseeded), false));
}

TEST(Run, ItemErrorsDoNotAbortTheBatch) {
  RunConfig c;
  Params bad;
  bad.set("field", std::string("x1"));
  c.checks.push_back({"bogus", "thm-9.9", bad});
  Params typo;
  typo.set("draws", 100.0);
  typo.set("drawz", 100.0);
  c.checks.push_back({"typo", "lem-5", typo});
  Params ok;
  ok.set("draws", 100.0);
  c.checks.push_back({"fine", "lem-5", ok});
  const Report r = run(c);
  ASSERT_EQ(r.items.size(), 3u);
  EXPECT_EQ(r.items[0].status, "error");
  EXPECT_NE(r.items[0].message.find("thm-9.9"), std::string::npos);
  EXPECT_EQ(r.items[1].status, "error");
  EXPECT_NE(r.items[1].message.find("drawz"), std::string::npos);
  EXPECT_EQ(r.items[2].status, "pass");
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(Run, ExitCodeTwoForFailedChecks) {
  RunConfig c;
  Params p;
  p.set("dimension", 2.0);
  p.set("a2", 3.0);  // above 2n/nu
  c.checks.push_back({"gate", "thm-1.5", p});
  const Report r = run(c);
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].status, "hypothesis-error");
  EXPECT_EQ(r.exit_code(), 2);
}

TEST(Run, TheoremFilter) {
  RunOptions o;
  o.theorem = "lem-lemx";
  const Report r = run(default_config(), o);
  ASSERT_EQ(r.items.size(), 1u);
  EXPECT_EQ(r.items[0].verdict->theorem, "lem-lemx");
}

TEST(Report, NonFiniteValuesSurviveJson) {
  Report r;
  r.config_json = "{}";
  ReportItem it;
  it.kind = "norm";
  it.name = "x";
  it.status = "ok";
  it.values = {{"value", std::numeric_limits<double>::infinity()}};
  r.items.push_back(it);
  const std::string s = report_to_json(r, false);
  EXPECT_NE(s.find("\"inf\""), std::string::npos);
  EXPECT_EQ(s.find("volatile"), std::string::npos);
  EXPECT_TRUE(std::isinf(report_from_json(s).items[0].values[0].second));
}

TEST(Report, CsvAndSvg) {
  const Table t{"growth", {"r", "M_nu", "rhs_bound"}, {{0.0, 1.0, 1.0}, {0.5, 1.1, 1.3}, {0.9, 1.4, 1.8}}};
  const std::string csv = table_to_csv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "r,M_nu,rhs_bound");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const std::string svg = table_to_svg(t, {"M_nu", "rhs_bound"});
  std::size_t polylines = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++polylines;
  EXPECT_EQ(polylines, 2u);
  EXPECT_THROW(table_to_svg(t, {"missing"}), Error);
}

TEST(Report, EmitWritesFiles) {
  RunOptions o;
  o.theorem = "thm-1.4";
  const Report r = run(default_config(), o);
  const auto dir = std::filesystem::temp_directory_path() / "ellab-emit-test";
  std::filesystem::remove_all(dir);
  const auto paths = emit(r, dir.string());
  EXPECT_TRUE(std::filesystem::exists(dir / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "tables" / "000-thm-1.4.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "plots" / "000-thm-1.4.svg"));
  EXPECT_EQ(paths.size(), 3u);
  std::ifstream in(dir / "report.json");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(report_from_json(ss.str()).items.size(), 1u);
  std::filesystem::remove_all(dir);
}
