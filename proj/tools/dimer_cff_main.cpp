// dimer-cff: command-line front end. Builds lattice dimer instances, runs
// the verification suites, and exposes the individual solvers as
// subcommands emitting CSV. Exit code 0 iff all configured assertions pass.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dimercff/experiments.hpp"

using namespace dimercff;
namespace fs = std::filesystem;

namespace {

nlohmann::json load_json_arg(const std::string& arg) {
  if (!arg.empty() && (arg.front() == '{' || arg.front() == '[')) return nlohmann::json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw ConfigError("cannot open " + arg);
  nlohmann::json j;
  in >> j;
  return j;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

std::ostream& open_or_stdout(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw ConfigError("cannot open " + path);
  return file;
}

int report_result(const Report& report) {
  std::cout << report.summary().dump() << '\n';
  for (const ReportRow& r : report.rows)
    if (!r.pass)
      std::cerr << "[FAIL] " << r.instance << " " << r.operation << " " << r.key << " err="
                << r.abs_error << " tol=" << r.tolerance << " " << r.note << '\n';
  return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dimer-cff: dimer height correlations and compactified free field laws"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", graph_json, tuples_json, out_file;
  std::string ks_list, style = "ND", law_json;
  double tau = 1.0, tolerance = 1e-9;
  int grid = 16;
  double q_re = 0.55, q_im = -1.0;
  std::uint64_t limit = kDefaultEnumerationLimit;
  bool list_matchings = false;
  std::uint64_t seed = 0;
  int samples = 0;

  auto* run = app.add_subcommand("run", "run the configured verification suites");
  run->add_option("config", config_path, "JSON config file or inline JSON")->required();
  run->add_option("--out", out_dir, "output directory");

  auto* kv = app.add_subcommand("kenyon-verify",
                                "determinant moments vs the exact oracle per edge tuple");
  kv->add_option("--graph", graph_json, "graph spec JSON (file or inline)")->required();
  kv->add_option("--tuples", tuples_json,
                 "JSON list of edge tuples [[[wx,wy],[bx,by]],...]; auto-generated if absent");
  kv->add_option("--tolerance", tolerance, "pass tolerance");
  kv->add_option("--out", out_file, "CSV output path (default stdout)");

  auto* gap = app.add_subcommand("gap-study", "cylinder gap law vs the discrete Gaussian");
  gap->add_option("--ks", ks_list, "comma-separated k sweep (default 2,3,4)");
  gap->add_option("--tau", tau, "cylinder modulus");
  gap->add_option("--out", out_dir, "output directory");

  auto* u2 = app.add_subcommand("u2-convergence", "discrete vs continuum two-point structure");
  u2->add_option("--ks", ks_list, "comma-separated k sweep (default 8,16,32)");
  u2->add_option("--tau", tau, "cylinder modulus");
  u2->add_option("--style", style, "DD or ND");
  u2->add_option("--out", out_dir, "output directory");

  auto* law = app.add_subcommand("cff-law", "discrete Gaussian law queries");
  law->add_option("--config", law_json,
                  "JSON: {c0:[...], Q:[[...]] or domain:{...}, twist:[...], moments:[[...]]}")
      ->required();
  law->add_option("--out", out_file, "CSV output path (default stdout)");

  auto* cu2 = app.add_subcommand("continuum-u2", "U_2 on a point grid");
  cu2->add_option("--tau", tau, "cylinder modulus");
  cu2->add_option("--style", style, "DD or ND");
  cu2->add_option("--grid", grid, "points per side");
  cu2->add_option("--q-re", q_re, "fixed second point, real part");
  cu2->add_option("--q-im", q_im, "fixed second point, imaginary part (default 0.7*tau/2)");
  cu2->add_option("--out", out_file, "CSV output path (default stdout)");

  auto* det = app.add_subcommand("det", "log|det K| and phase of a graph spec");
  det->add_option("--graph", graph_json, "graph spec JSON")->required();
  det->add_option("--out", out_file, "CSV output path (default stdout)");

  auto* probs = app.add_subcommand("edge-probs", "edge occupation probabilities as CSV");
  probs->add_option("--graph", graph_json, "graph spec JSON")->required();
  probs->add_option("--out", out_file, "CSV output path (default stdout)");

  auto* enumerate = app.add_subcommand("enumerate", "count (and list) perfect matchings");
  enumerate->add_option("--graph", graph_json, "graph spec JSON")->required();
  enumerate->add_option("--limit", limit, "enumeration guard");
  enumerate->add_flag("--list", list_matchings, "emit matchings as JSON lines");
  enumerate->add_option("--sample", samples, "emit n uniform samples instead of the full list");
  enumerate->add_option("--seed", seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      return report_result(run_from_config(load_json_arg(config_path), out_dir));
    }

    if (*kv) {
      const GraphSpec spec = GraphSpec::from_json(load_json_arg(graph_json));
      KenyonSweepConfig cfg;
      cfg.instances = {spec};
      cfg.tolerance = tolerance;
      Report report;
      if (tuples_json.empty()) {
        report = run_kenyon_sweep(cfg);
      } else {
        const DimerGraph g = spec.build();
        const KasteleynSystem ks = KasteleynSystem::assemble(g, spec.monodromy(g));
        const auto all = enumerate_matchings(g);
        report.suite = "kenyon";
        int tuple_id = 0;
        for (const auto& jt : load_json_arg(tuples_json)) {
          std::vector<DualEdge> tuple;
          for (const auto& je : jt) {
            const VertexId a{je[0][0], je[0][1]}, b{je[1][0], je[1][1]};
            const Edge e = (vertex_color(a) == Color::White) ? Edge{a, b} : Edge{b, a};
            tuple.push_back(g.dual_of(e));
          }
          ReportRow r;
          r.instance = spec.id;
          r.operation = "kenyon-moment";
          r.key = "tuple" + std::to_string(tuple_id++);
          r.value_a = kenyon_moment(ks, KenyonMomentRequest{tuple});
          r.value_b = empirical_moment(g, tuple, all);
          r.abs_error = std::abs(r.value_a - r.value_b);
          r.tolerance = tolerance;
          r.pass = r.abs_error < tolerance;
          report.rows.push_back(r);
        }
      }
      std::ofstream file;
      auto& out = open_or_stdout(file, out_file);
      out << "tuple,determinant,enumeration,abs_diff,pass\n" << std::setprecision(17);
      for (const ReportRow& r : report.rows)
        out << r.key << ',' << r.value_a << ',' << r.value_b << ',' << r.abs_error << ','
            << (r.pass ? "true" : "false") << '\n';
      return report.pass() ? 0 : 1;
    }

    if (*gap) {
      GapStudyConfig cfg;
      if (!ks_list.empty()) cfg.ks = parse_int_list(ks_list);
      cfg.tau = tau;
      const Report report = run_gap_study(cfg);
      fs::create_directories(out_dir);
      report.write_csv(fs::path(out_dir) / "gap.csv");
      std::ofstream(fs::path(out_dir) / "gap-summary.json") << report.summary().dump(2) << '\n';
      return report_result(report);
    }

    if (*u2) {
      U2ConvergenceConfig cfg;
      if (!ks_list.empty()) cfg.ks = parse_int_list(ks_list);
      cfg.tau = tau;
      cfg.style = (style == "DD") ? CylinderStyle::DD : CylinderStyle::ND;
      const Report report = run_u2_convergence(cfg);
      fs::create_directories(out_dir);
      report.write_csv(fs::path(out_dir) / "u2.csv");
      std::ofstream(fs::path(out_dir) / "u2-summary.json") << report.summary().dump(2) << '\n';
      return report_result(report);
    }

    if (*law) {
      const nlohmann::json j = load_json_arg(law_json);
      Eigen::VectorXd c0;
      {
        const auto v = j.value("c0", std::vector<double>{0.0});
        c0 = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
      }
      Eigen::MatrixXd q;
      if (j.contains("Q")) {
        const auto rows = j["Q"].get<std::vector<std::vector<double>>>();
        q.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
        for (size_t i = 0; i < rows.size(); ++i)
          for (size_t l = 0; l < rows[i].size(); ++l) q(static_cast<Eigen::Index>(i),
                                                       static_cast<Eigen::Index>(l)) = rows[i][l];
      } else if (j.contains("domain")) {
        const auto& dj = j["domain"];
        ContinuumDomain dom;
        if (dj.value("kind", "cylinder") == "cylinder") {
          dom.kind = ContinuumDomain::Kind::Cylinder;
          dom.tau = dj.value("tau", 1.0);
        } else {
          dom.kind = ContinuumDomain::Kind::HoledRectangle;
          dom.width = dj.value("width", 1.0);
          dom.height = dj.value("height", 1.0);
          for (const auto& h : dj.value("holes", nlohmann::json::array()))
            dom.holes.push_back(ContinuumHole{h[0], h[1], h[2], h[3]});
        }
        const auto grid_spec = dj.value("grid", std::vector<int>{256, 128});
        q = (3.14159265358979323846 / 2.0) * energy_matrix(dom, grid_spec[0], grid_spec[1]);
      } else {
        throw ConfigError("cff-law: need Q or domain");
      }
      const DiscreteGaussianLaw dgl(c0, q);
      Eigen::VectorXi twist = Eigen::VectorXi::Zero(dgl.dimension());
      if (j.contains("twist")) {
        const auto t = j["twist"].get<std::vector<int>>();
        twist = Eigen::Map<const Eigen::VectorXi>(t.data(), static_cast<Eigen::Index>(t.size()));
      }
      std::ofstream file;
      auto& out = open_or_stdout(file, out_file);
      out << "quantity,key,value\n" << std::setprecision(17);
      out << "normalizer,," << dgl.normalizer() << '\n';
      out << "truncation,," << dgl.truncation() << '\n';
      out << "twist_weight,," << dgl.twist_weight(twist) << '\n';
      for (const auto& mj : j.value("moments", nlohmann::json::array())) {
        const auto powers = mj.get<std::vector<int>>();
        std::ostringstream key;
        for (size_t i = 0; i < powers.size(); ++i) key << (i ? "," : "") << powers[i];
        const Complex v = dgl.twisted_expectation(twist, PolynomialMoment::monomial(powers));
        out << "twisted_moment,\"c^(" << key.str() << ")\"," << v.real() << '\n';
      }
      const auto var = dgl.variance_test(twist);
      out << "variance_min_eigenvalue,," << var.min_eigenvalue << '\n';
      out << "variance_positive,," << (var.positive_definite ? 1 : 0) << '\n';
      return 0;
    }

    if (*cu2) {
      const CylinderComponents cont(tau, style == "DD" ? CylStyle::DD : CylStyle::ND);
      if (q_im < 0.0) q_im = 0.7 * tau / 2.0;
      const Complex q_point{q_re, q_im};
      std::ofstream file;
      auto& out = open_or_stdout(file, out_file);
      out << "re_p,im_p,re_q,im_q,u2\n" << std::setprecision(17);
      for (int iy = 1; iy < grid; ++iy)
        for (int ix = 0; ix < grid; ++ix) {
          const Complex p{static_cast<double>(ix) / grid, (tau / 2.0) * iy / grid};
          if (std::abs(p - q_point) < 1e-9) continue;
          out << p.real() << ',' << p.imag() << ',' << q_point.real() << ',' << q_point.imag()
              << ',' << cont.u_m({p, q_point}) << '\n';
        }
      return 0;
    }

    if (*det) {
      const GraphSpec spec = GraphSpec::from_json(load_json_arg(graph_json));
      const DimerGraph g = spec.build();
      const KasteleynSystem ks = KasteleynSystem::assemble(g, spec.monodromy(g));
      std::ofstream file;
      auto& out = open_or_stdout(file, out_file);
      out << "instance,log_abs_det,phase_re,phase_im,abs_det\n" << std::setprecision(17);
      out << spec.id << ',' << ks.log_abs_det() << ',' << ks.det_phase().real() << ','
          << ks.det_phase().imag() << ',' << ks.abs_det() << '\n';
      return 0;
    }

    if (*probs) {
      const GraphSpec spec = GraphSpec::from_json(load_json_arg(graph_json));
      const DimerGraph g = spec.build();
      const KasteleynSystem ks = KasteleynSystem::assemble(g, spec.monodromy(g));
      std::ofstream file;
      auto& out = open_or_stdout(file, out_file);
      out << "white_x,white_y,black_x,black_y,probability\n" << std::setprecision(17);
      for (const Edge& e : g.edges())
        out << e.white.x << ',' << e.white.y << ',' << e.black.x << ',' << e.black.y << ','
            << ks.edge_probability(e) << '\n';
      return 0;
    }

    if (*enumerate) {
      const GraphSpec spec = GraphSpec::from_json(load_json_arg(graph_json));
      const DimerGraph g = spec.build();
      auto matching_to_json = [&](const Matching& m) {
        auto edges = nlohmann::json::array();
        for (int ei : m.edge_ids) {
          const Edge& e = g.edge(ei);
          edges.push_back({{e.white.x, e.white.y}, {e.black.x, e.black.y}});
        }
        return nlohmann::json{{"edges", edges}};
      };
      if (samples > 0) {
        for (const Matching& m : sample_uniform(g, seed, samples, limit))
          std::cout << matching_to_json(m).dump() << '\n';
        return 0;
      }
      std::uint64_t count = 0;
      if (list_matchings) {
        count = for_each_matching(
            g, [&](const Matching& m) { std::cout << matching_to_json(m).dump() << '\n'; },
            limit);
      } else {
        count = for_each_matching(g, [](const Matching&) {}, limit);
      }
      std::cout << nlohmann::json{{"instance", spec.id}, {"count", count}}.dump() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
