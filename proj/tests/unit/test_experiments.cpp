#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dimercff/experiments.hpp"

using namespace dimercff;

TEST_CASE("graph spec json round trip") {
  const auto j = nlohmann::json::parse(R"({
    "topology": "cylinder", "k": 4, "tau": 1.0, "style": "DD",
    "punctures": [], "holes": []
  })");
  const GraphSpec s = GraphSpec::from_json(j);
  CHECK(s.topology == Topology::Cylinder);
  CHECK(s.k == 4);
  CHECK(s.style == CylinderStyle::DD);
  const GraphSpec back = GraphSpec::from_json(s.to_json());
  CHECK(back.k == s.k);
  CHECK(back.tau == s.tau);

  const auto holed = nlohmann::json::parse(R"({
    "topology": "multiholed", "cols": 10, "rows": 10,
    "holes": [[4,4,2,2]], "punctures": [[0,0],[3,4]],
    "monodromy": {"regions": [-1]}
  })");
  const GraphSpec hs = GraphSpec::from_json(holed);
  const DimerGraph g = hs.build();
  CHECK(g.vertex_count() == 94);
  CHECK(hs.monodromy(g).around_regions.at(0) == Complex{-1.0, 0.0});

  CHECK_THROWS_AS(GraphSpec::from_json(nlohmann::json::parse(R"({"topology":"moebius"})")),
                  ConfigError);
}

TEST_CASE("kenyon sweep reports are deterministic and pass") {
  KenyonSweepConfig cfg;
  cfg.instances = {GraphSpec::from_json(nlohmann::json::parse(R"({"topology":"rectangle","cols":4,"rows":4})")),
                   GraphSpec::from_json(nlohmann::json::parse(
                       R"({"topology":"cylinder","k":2,"tau":1.0,"style":"ND"})"))};
  const Report a = run_kenyon_sweep(cfg);
  const Report b = run_kenyon_sweep(cfg);
  CHECK(a.pass());
  REQUIRE(a.rows.size() == b.rows.size());
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].instance == b.rows[i].instance);
    CHECK(a.rows[i].key == b.rows[i].key);
    CHECK(a.rows[i].value_a == b.rows[i].value_a);
  }
  // Provenance on every row.
  for (const ReportRow& r : a.rows) {
    CHECK_FALSE(r.instance.empty());
    CHECK_FALSE(r.operation.empty());
    CHECK(r.tolerance > 0.0);
  }
}

TEST_CASE("a corrupted weight fails with a localized diagnostic") {
  KenyonSweepConfig cfg;
  auto spec = GraphSpec::from_json(
      nlohmann::json::parse(R"({"topology":"rectangle","cols":4,"rows":4,"id":"tampered"})"));
  spec.inject_fault = true;
  cfg.instances = {spec};
  const Report report = run_kenyon_sweep(cfg);
  CHECK_FALSE(report.pass());
  bool localized = false;
  for (const ReportRow& r : report.rows)
    if (!r.pass && r.instance == "tampered" && r.operation == "kenyon-moment") localized = true;
  CHECK(localized);
}

TEST_CASE("gap study structure") {
  GapStudyConfig cfg;
  cfg.ks = {2, 3};
  const Report report = run_gap_study(cfg);
  CHECK(report.pass());
  int half_offsets = 0, trends = 0, swaps = 0;
  for (const ReportRow& r : report.rows) {
    if (r.operation == "gap-half-offset") ++half_offsets;
    if (r.operation == "gap-moment-trend") ++trends;
    if (r.operation == "gap-shift-swap") ++swaps;
  }
  CHECK(half_offsets == 2);
  CHECK(trends == 2);  // one per style for the k=2 -> k=3 step
  CHECK(swaps == 2);

  GapStudyConfig bad;
  bad.ks = {3, 2};
  CHECK_THROWS_AS(run_gap_study(bad), ConfigError);
}

TEST_CASE("u2 convergence on a short sweep") {
  U2ConvergenceConfig cfg;
  cfg.ks = {4, 8};
  const Report report = run_u2_convergence(cfg);
  int moments = 0;
  for (const ReportRow& r : report.rows) {
    if (r.operation == "u2-path-moment") ++moments;
    if (r.operation == "u2-reflection-symmetry") CHECK(r.pass);
    if (r.operation == "u2-style-distinguishability") CHECK(r.pass);
  }
  CHECK(moments == 2);
}

TEST_CASE("report csv and summary") {
  const auto dir = std::filesystem::temp_directory_path() / "dimercff-test-report";
  std::filesystem::create_directories(dir);
  Report r;
  r.suite = "demo";
  r.rows.push_back(ReportRow{"inst", "op", "key", 1.0, 1.0, 0.0, 1e-9, true, "note"});
  r.write_csv(dir / "demo.csv");
  std::ifstream in(dir / "demo.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "instance,operation,key,value_a,value_b,abs_error,tolerance,pass,note");
  CHECK(r.summary()["pass"] == true);
  CHECK(r.summary()["rows"] == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("thread cap respects the environment") {
  // Cannot assume a fresh environment; just sanity-check the bounds.
  CHECK(thread_cap() >= 1);
}
