#pragma once

// Experiment orchestration: Kenyon-identity verification sweeps over graph
// suites, cylinder gap-law studies against the discrete Gaussian prediction,
// and discrete-to-continuum convergence tables for the two-point structure.
// Reports are deterministic given the configuration; instances run in a
// work pool capped by DIMER_CFF_THREADS.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "dimercff/dgauss.hpp"
#include "dimercff/height.hpp"
#include "dimercff/kasteleyn.hpp"
#include "dimercff/lattice_graph.hpp"
#include "dimercff/matchings.hpp"
#include "dimercff/torus.hpp"

namespace dimercff {

// Declarative graph description, also the JSON wire format of the CLI.
struct GraphSpec {
  std::string id;
  Topology topology = Topology::PlanarRectangle;
  int cols = 2, rows = 2;
  int k = 2;
  double tau = 1.0;
  CylinderStyle style = CylinderStyle::DD;
  std::vector<HoleRect> holes;
  std::vector<VertexId> punctures;
  bool auto_monodromy = true;  // use counting_monodromy
  Complex cylinder_monodromy{1.0, 0.0};
  std::vector<Complex> region_monodromies;
  bool inject_fault = false;  // corrupt one weight, for diagnostics tests

  DimerGraph build() const;
  Monodromy monodromy(const DimerGraph& g) const;
  static GraphSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ReportRow {
  std::string instance;
  std::string operation;
  std::string key;
  double value_a = 0.0;  // determinant / discrete / measured side
  double value_b = 0.0;  // oracle / law / continuum side
  double abs_error = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  std::string note;
};

struct Report {
  std::string suite;
  std::vector<ReportRow> rows;

  bool pass() const;
  double max_error() const;
  void write_csv(const std::filesystem::path& path) const;
  nlohmann::json summary() const;
};

struct KenyonSweepConfig {
  std::vector<GraphSpec> instances;
  int tuples_per_m = 4;
  double tolerance = 1e-9;
  std::uint64_t enumeration_limit = kDefaultEnumerationLimit;
};

// Default suite: rectangles 2x2 through 6x6, DD and ND cylinders at
// k = 2, 3, and the punctured one-hole 10x10 domain.
KenyonSweepConfig default_kenyon_suite();

// Per instance and tuple: determinant moment vs the exact oracle
// (enumeration when feasible, otherwise inclusion-exclusion over the
// counting oracle). Also checks round(|det K|) against the exact count.
Report run_kenyon_sweep(const KenyonSweepConfig& cfg);

struct GapStudyConfig {
  std::vector<int> ks{2, 3, 4};
  double tau = 1.0;
  std::uint64_t enumeration_limit = kDefaultEnumerationLimit;
};

// Gap distributions of DD and ND cylinders vs the discrete Gaussian law
// with energy 2/tau and shifts 1/2 (DD) and 0 (ND): centered moments 2 and
// 4, error trends in k, the exact half-offset of the centered supports, and
// a c0-swap sanity inversion.
Report run_gap_study(const GapStudyConfig& cfg);

struct U2ConvergenceConfig {
  std::vector<int> ks{8, 16, 32};
  double tau = 1.0;
  CylinderStyle style = CylinderStyle::ND;
  // Continuum anchors of the two vertical increment paths (periodic x in
  // [0,1), heights in (0, tau/2)); lattice positions snap to even indices.
  double x1 = 0.25, x2 = 0.625;
  double y_lo = 0.125, y_hi = 0.375;
};

// Discrete two-point path moments vs the continuum double path integral of
// U_2; passes iff the error strictly decreases along the k sweep. Includes
// the reflected-pair symmetry check and the DD/ND distinguishability check.
Report run_u2_convergence(const U2ConvergenceConfig& cfg);

// Entry point for `dimer-cff run <config.json>`: dispatches on "suite"
// ("kenyon", "gap", "u2" or "all"), writes one CSV per suite plus a JSON
// summary into outdir, and returns the merged report.
Report run_from_config(const nlohmann::json& config, const std::filesystem::path& outdir);

// Worker-pool width: DIMER_CFF_THREADS, clamped to [1, hardware].
int thread_cap();

}  // namespace dimercff
