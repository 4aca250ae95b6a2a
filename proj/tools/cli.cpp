#include "cli.hpp"

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "whembed/halfplane.hpp"
#include "whembed/strip.hpp"
#include "whembed/suites.hpp"
#include "whembed/wedge.hpp"

namespace whembed::cli {

namespace {

constexpr double kDeg = kPi / 180.0;
constexpr const char* kUsage =
    "usage: whembed {halfplane|strip|wedge|all|report} <command> [options] (run with --help for details)";

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 16);
  return std::string(buf, r.ptr);
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

nlohmann::json complex_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

struct Command {
  std::string echo;
  nlohmann::json parameters = nlohmann::json::object();
  std::string json_path;
  std::function<EmbeddingReport()> verify;
  std::function<int(std::ostream&)> produce;
};

int finish_verify(const Command& cmd, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const EmbeddingReport rep = cmd.verify();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  for (const auto& c : rep.checks)
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " " << short_number(c.value) << " < "
        << short_number(c.tolerance) << "\n";
  for (const auto& c : rep.calibrations)
    out << "calibration " << c.name << " = " << number(c.value.real()) << (c.value.imag() < 0 ? " - " : " + ")
        << number(std::abs(c.value.imag())) << "i\n";
  for (const auto& n : rep.notes) out << "note " << n << "\n";
  out << (rep.passed() ? "PASSED" : "FAILED") << " " << rep.name << " (" << rep.checks.size() << " checks, "
      << short_number(wall) << " s)\n";
  if (!cmd.json_path.empty()) {
    nlohmann::json j;
    j["command"] = cmd.echo;
    j["parameters"] = cmd.parameters;
    j["report"] = to_json(rep);
    j["wall_time_s"] = wall;
    write_atomic(cmd.json_path, j.dump(2) + "\n");
  }
  return rep.passed() ? 0 : 1;
}

DirectivityGrid sample_directivity(const std::function<cplx(double, double)>& S, double theta_max, int n,
                                   double theta_i) {
  DirectivityGrid g;
  g.theta.resize(n);
  for (int j = 0; j < n; ++j) g.theta[j] = (j + 0.5) * theta_max / n;
  g.theta_i = {theta_i};
  g.S.resize(n, 1);
  for (int j = 0; j < n; ++j) {
    try {
      g.S(j, 0) = S(g.theta[j], theta_i);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::optical_boundary) throw;
      g.S(j, 0) = cplx(std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN());
    }
  }
  return g;
}

}  // namespace

std::string format_csv(const DirectivityGrid& grid) {
  std::string s = std::string(kCsvHeader) + "\n";
  for (size_t n = 0; n < grid.theta_i.size(); ++n)
    for (size_t m = 0; m < grid.theta.size(); ++m) {
      const cplx v = grid.S(static_cast<int>(m), static_cast<int>(n));
      s += number(grid.theta[m] / kDeg) + "," + number(grid.theta_i[n] / kDeg) + "," + number(v.real()) + "," +
           number(v.imag()) + "," + number(std::abs(v)) + "\n";
    }
  return s;
}

void emit_csv(const DirectivityGrid& grid, const std::string& path) { write_atomic(path, format_csv(grid)); }

std::vector<CsvRow> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error(ErrorCode::io, path + ": unexpected CSV header");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[5];
    std::istringstream ls(line);
    std::string field;
    for (int j = 0; j < 5; ++j) {
      if (!std::getline(ls, field, ',')) throw Error(ErrorCode::io, path + ": short CSV row");
      v[j] = std::strtod(field.c_str(), nullptr);
    }
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  return rows;
}

nlohmann::json to_json(const EmbeddingReport& report) {
  nlohmann::json j;
  j["name"] = report.name;
  j["passed"] = report.passed();
  j["checks"] = nlohmann::json::array();
  for (const auto& c : report.checks)
    j["checks"].push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"passed", c.passed}});
  j["calibrations"] = nlohmann::json::array();
  for (const auto& c : report.calibrations)
    j["calibrations"].push_back({{"name", c.name}, {"value", complex_json(c.value)}, {"provenance", c.provenance}});
  j["metrics"] = nlohmann::json::object();
  for (const auto& [name, value] : report.metrics) j["metrics"][name] = value;
  j["notes"] = report.notes;
  return j;
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::io, "cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw Error(ErrorCode::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error(ErrorCode::io, "cannot move output into " + path + ": " + ec.message());
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string json_path;
  // `report --json FILE <verify command>` is the same as `<verify command> --json FILE`.
  if (!args.empty() && args[0] == "report") {
    if (args.size() < 3 || args[1] != "--json") {
      err << kUsage << "\n";
      return 2;
    }
    json_path = args[2];
    args.erase(args.begin(), args.begin() + 3);
    args.push_back("--json");
    args.push_back(json_path);
  }
  std::string echo = "whembed";
  for (const auto& a : args) echo += " " + a;

  CLI::App app{"Wiener-Hopf embedding formulas: directivities and verification suites", "whembed"};
  app.require_subcommand(1);
  Command cmd;
  cmd.echo = echo;
  auto add_json = [&](CLI::App* c) { c->add_option("--json", cmd.json_path, "write the JSON report to FILE"); };

  // halfplane
  suites::HalfPlaneSuiteOptions hp;
  double theta_i_deg = 0.0;
  int grid = 180;
  std::string out_path;
  auto* half = app.add_subcommand("halfplane", "half-plane embedding")->require_subcommand(1);
  auto* hp_verify = half->add_subcommand("verify", "oracle, numeric Wiener-Hopf and plane-wave normal checks");
  hp_verify->add_option("--tol", hp.oracle.tolerance, "oracle and closed-form tolerance")->capture_default_str();
  hp_verify->add_option("--grid", hp.oracle.grid, "oracle grid size")->capture_default_str()->check(CLI::Range(10, 2000));
  hp_verify->add_option("--numeric-tol", hp.numeric.tolerance, "numeric solve tolerance")->capture_default_str();
  hp_verify->add_option("--nodes", hp.numeric.nodes, "contour nodes")->capture_default_str()->check(CLI::Range(64, 200000));
  add_json(hp_verify);
  auto* hp_dir = half->add_subcommand("directivity", "S(theta, theta_i) for theta in (0, 180) degrees");
  hp_dir->add_option("--theta-i", theta_i_deg, "incidence angle in degrees")->required()->check(CLI::Range(0.0, 180.0));
  hp_dir->add_option("--out", out_path, "CSV output file")->required();
  hp_dir->add_option("--grid", grid, "observation angles")->capture_default_str()->check(CLI::Range(1, 100000));

  // strip
  suites::StripSuiteOptions st;
  int modes = 0;
  double theta_1 = 60.0, theta_2 = 120.0, theta_star = 75.0;
  auto* strip_cmd = app.add_subcommand("strip", "finite strip")->require_subcommand(1);
  auto add_ka = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--ka", st.ka, "dimensionless strip size ka")->check(CLI::Range(0.1, 100.0));
    if (required) o->required();
    else o->capture_default_str();
    c->add_option("--modes", modes, "Chebyshev modes (default max(40, 20 + ceil(2 ka)))");
  };
  auto* st_solve = strip_cmd->add_subcommand("solve", "solve one incidence and emit S(theta) as CSV");
  add_ka(st_solve, true);
  st_solve->add_option("--theta-i", theta_i_deg, "incidence angle in degrees")->required()->check(CLI::Range(0.0, 180.0));
  st_solve->add_option("--out", out_path, "CSV output file")->required();
  st_solve->add_option("--grid", grid, "observation angles in (0, 180)")->capture_default_str()->check(CLI::Range(1, 100000));
  auto* st_verify = strip_cmd->add_subcommand("verify", "full strip suite");
  add_ka(st_verify, false);
  st_verify->add_option("--grid", st.grid, "square grid size")->capture_default_str()->check(CLI::Range(32, 400));
  st_verify->add_option("--residual-tol", st.residual_tolerance)->capture_default_str();
  st_verify->add_option("--reciprocity-tol", st.reciprocity_tolerance)->capture_default_str();
  st_verify->add_option("--optical-tol", st.optical_tolerance)->capture_default_str();
  st_verify->add_option("--rank-tol", st.rank_tolerance)->capture_default_str();
  st_verify->add_option("--embed-tol", st.embed_tolerance)->capture_default_str();
  st_verify->add_option("--reflection-tol", st.reflection_tolerance)->capture_default_str();
  add_json(st_verify);
  auto* st_rank = strip_cmd->add_subcommand("verify-rank2", "rank-2 structure of the weighted directivity");
  add_ka(st_rank, true);
  st_rank->add_option("--grid", st.grid, "square grid size")->capture_default_str()->check(CLI::Range(32, 400));
  st_rank->add_option("--tol", st.rank_tolerance, "sigma3/sigma1 tolerance")->capture_default_str();
  add_json(st_rank);
  auto* st_embed = strip_cmd->add_subcommand("embed", "plane-wave embedding from two incidences");
  add_ka(st_embed, true);
  st_embed->add_option("--theta1", theta_1, "first base incidence, degrees")->required()->check(CLI::Range(0.0, 180.0));
  st_embed->add_option("--theta2", theta_2, "second base incidence, degrees")->required()->check(CLI::Range(0.0, 180.0));
  st_embed->add_option("--theta-star", theta_star, "target incidence, degrees")->required()->check(CLI::Range(0.0, 180.0));
  st_embed->add_option("--tol", st.embed_tolerance, "masked relative error tolerance")->capture_default_str();
  add_json(st_embed);
  auto* st_fig = strip_cmd->add_subcommand("figure3", "directivity panels at theta_i = 45 and 90 degrees");
  add_ka(st_fig, false);
  st_fig->add_option("--out", out_path, "CSV output file")->required();
  st_fig->add_option("--grid", grid, "observation angles per panel")->capture_default_str()->check(CLI::Range(1, 100000));

  // wedge
  suites::WedgeSuiteOptions wd;
  int wedge_grid = 40;
  auto* wedge_cmd = app.add_subcommand("wedge", "right-angled wedge")->require_subcommand(1);
  auto* wd_fact = wedge_cmd->add_subcommand("verify-factorization", "kernel, projection, DK factors, normal matrix");
  wd_fact->add_option("--tol", wd.tolerance)->capture_default_str();
  add_json(wd_fact);
  auto* wd_can = wedge_cmd->add_subcommand("verify-canonical", "canonical embedding against the closed form");
  wd_can->add_option("--tol", wd.tolerance)->capture_default_str();
  wd_can->add_option("--grid", wedge_grid)->capture_default_str()->check(CLI::Range(4, 1000));
  add_json(wd_can);
  auto* wd_map = wedge_cmd->add_subcommand("verify-mapped", "mapped scalar route against the closed form");
  wd_map->add_option("--tol", wd.tolerance)->capture_default_str();
  add_json(wd_map);
  auto* wd_verify = wedge_cmd->add_subcommand("verify", "full wedge suite");
  wd_verify->add_option("--tol", wd.tolerance)->capture_default_str();
  wd_verify->add_option("--q-tol", wd.q_tolerance)->capture_default_str();
  add_json(wd_verify);
  auto* wd_embed = wedge_cmd->add_subcommand("embed", "plane-wave embedding, angles in (90, 180) degrees");
  wd_embed->add_option("--theta1", wd.theta_1_deg)->required()->check(CLI::Range(90.0, 180.0));
  wd_embed->add_option("--theta2", wd.theta_2_deg)->required()->check(CLI::Range(90.0, 180.0));
  wd_embed->add_option("--theta-i", wd.theta_i_deg)->required()->check(CLI::Range(90.0, 180.0));
  wd_embed->add_option("--tol", wd.tolerance)->capture_default_str();
  add_json(wd_embed);
  auto* wd_dir = wedge_cmd->add_subcommand("directivity", "closed-form S(theta, theta_i), theta in (0, 270) degrees");
  wd_dir->add_option("--theta-i", theta_i_deg, "incidence angle in degrees")->required()->check(CLI::Range(0.0, 270.0));
  wd_dir->add_option("--out", out_path, "CSV output file")->required();
  wd_dir->add_option("--grid", grid, "observation angles")->capture_default_str()->check(CLI::Range(1, 100000));

  auto* all = app.add_subcommand("all", "every suite")->require_subcommand(1);
  auto* all_verify = all->add_subcommand("verify", "half-plane, strip and wedge suites");
  add_json(all_verify);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "error: " << e.what() << "\n" << kUsage << "\n";
    return 2;
  }

  const int strip_modes = modes > 0 ? modes : strip::default_modes(st.ka);
  auto csv_done = [&](const DirectivityGrid& g, std::ostream& o) {
    emit_csv(g, out_path);
    o << "wrote " << g.theta.size() * g.theta_i.size() << " rows to " << out_path << "\n";
    return 0;
  };
  auto& P = cmd.parameters;

  if (hp_verify->parsed()) {
    P = {{"tol", hp.oracle.tolerance}, {"grid", hp.oracle.grid}, {"numeric_tol", hp.numeric.tolerance},
         {"nodes", hp.numeric.nodes}};
    hp.demo_tolerance = hp.oracle.tolerance;
    cmd.verify = [hp] { return suites::halfplane_suite(hp); };
  } else if (hp_dir->parsed()) {
    cmd.produce = [&](std::ostream& o) {
      const MediumConfig m{1.0, 0.0};
      return csv_done(sample_directivity([m](double t, double ti) { return halfplane::directivity(t, ti, m); }, kPi,
                                         grid, theta_i_deg * kDeg),
                      o);
    };
  } else if (st_solve->parsed()) {
    cmd.produce = [&](std::ostream& o) {
      const strip::StripConfig cfg = strip::StripConfig::from_ka(st.ka);
      const strip::BieOperator op(cfg, strip_modes);
      std::vector<double> th(grid);
      for (int j = 0; j < grid; ++j) th[j] = (j + 0.5) * kPi / grid;
      const strip::DensitySolution d = op.solve(theta_i_deg * kDeg);
      o << "boundary residual " << short_number(d.boundary_residual) << " with " << strip_modes << " modes\n";
      return csv_done(strip::directivity_grid(op, th, {theta_i_deg * kDeg}), o);
    };
  } else if (st_verify->parsed()) {
    st.modes = strip_modes;
    P = {{"ka", st.ka}, {"modes", st.modes}, {"grid", st.grid}, {"residual_tol", st.residual_tolerance},
         {"reciprocity_tol", st.reciprocity_tolerance}, {"optical_tol", st.optical_tolerance},
         {"rank_tol", st.rank_tolerance}, {"embed_tol", st.embed_tolerance},
         {"reflection_tol", st.reflection_tolerance}};
    cmd.verify = [st] { return suites::strip_suite(st); };
  } else if (st_rank->parsed()) {
    P = {{"ka", st.ka}, {"modes", strip_modes}, {"grid", st.grid}, {"tol", st.rank_tolerance}};
    cmd.verify = [st, strip_modes] {
      const strip::BieOperator op(strip::StripConfig::from_ka(st.ka), strip_modes);
      const std::vector<double> th = strip::interior_angles(st.grid);
      const DirectivityGrid g = strip::directivity_grid(op, th, th);
      strip::Rank2Options r;
      r.rank_tolerance = st.rank_tolerance;
      EmbeddingReport rep = strip::rank2_embedding_check(g, r);
      rep.check("reciprocity", strip::reciprocity_defect(g), 1e-8);
      return rep;
    };
  } else if (st_embed->parsed()) {
    P = {{"ka", st.ka}, {"modes", strip_modes}, {"theta1", theta_1}, {"theta2", theta_2},
         {"theta_star", theta_star}, {"tol", st.embed_tolerance}};
    cmd.verify = [=] {
      const strip::BieOperator op(strip::StripConfig::from_ka(st.ka), strip_modes);
      strip::PlaneWaveStripOptions o;
      o.tolerance = st.embed_tolerance;
      return strip::plane_wave_embed(theta_1 * kDeg, theta_2 * kDeg, theta_star * kDeg, op, o);
    };
  } else if (st_fig->parsed()) {
    cmd.produce = [&](std::ostream& o) { return csv_done(strip::figure3_grid(st.ka, grid, strip_modes), o); };
  } else if (wd_fact->parsed()) {
    P = {{"tol", wd.tolerance}};
    cmd.verify = [wd] {
      wedge::FactorizationOptions f;
      f.dk_tolerance = f.relation_tolerance = wd.tolerance;
      return wedge::factorization_checks(MediumConfig::identity_checks(1.0), f);
    };
  } else if (wd_can->parsed()) {
    P = {{"tol", wd.tolerance}, {"grid", wedge_grid}};
    cmd.verify = [wd, wedge_grid] {
      return wedge::canonical_embedding_check(MediumConfig::identity_checks(1.0), {wedge_grid, wd.tolerance});
    };
  } else if (wd_map->parsed()) {
    P = {{"tol", wd.tolerance}};
    cmd.verify = [wd] {
      EmbeddingReport rep = wedge::mapped_route_check({30, 10, wd.tolerance});
      rep.absorb(suites::wedge_gtd({40, wd.tolerance}));
      return rep;
    };
  } else if (wd_verify->parsed()) {
    P = {{"tol", wd.tolerance}, {"q_tol", wd.q_tolerance}};
    cmd.verify = [wd] { return suites::wedge_suite(wd); };
  } else if (wd_embed->parsed()) {
    P = {{"theta1", wd.theta_1_deg}, {"theta2", wd.theta_2_deg}, {"theta_i", wd.theta_i_deg}, {"tol", wd.tolerance}};
    cmd.verify = [wd] {
      wedge::PlaneWaveOptions o;
      o.tolerance = wd.tolerance;
      return wedge::plane_wave_embed_wedge(wd.theta_1_deg * kDeg, wd.theta_2_deg * kDeg, wd.theta_i_deg * kDeg, o);
    };
  } else if (wd_dir->parsed()) {
    cmd.produce = [&](std::ostream& o) {
      return csv_done(sample_directivity(wedge::closed_form_directivity, 1.5 * kPi, grid, theta_i_deg * kDeg), o);
    };
  } else if (all_verify->parsed()) {
    cmd.verify = [] {
      EmbeddingReport rep;
      rep.name = "all";
      rep.absorb(suites::halfplane_suite());
      rep.absorb(suites::strip_suite());
      rep.absorb(suites::wedge_suite());
      return rep;
    };
  }

  try {
    if (cmd.verify) return finish_verify(cmd, out);
    return cmd.produce(out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == ErrorCode::invalid_argument) {
      err << kUsage << "\n";
      return 2;
    }
    return 1;
  }
}

}  // namespace whembed::cli
