// Acceptance criteria 1-6 at their stated tolerances. Usage: acceptance <path-to-whembed>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "whembed/suites.hpp"

using namespace whembed;

namespace {

struct Requirement {
  std::string suffix;
  double tolerance;
};

// Every check whose name ends in `suffix` must be below `tolerance`, and at least one must exist.
bool meets(const EmbeddingReport& rep, const Requirement& req, std::string& why) {
  int found = 0;
  for (const auto& c : rep.checks) {
    const auto& n = c.name;
    if (n.size() < req.suffix.size() || n.compare(n.size() - req.suffix.size(), req.suffix.size(), req.suffix) != 0)
      continue;
    ++found;
    if (!(c.value < req.tolerance)) {
      char buf[256];
      std::snprintf(buf, sizeof buf, "%s=%.3e >= %.1e; ", n.c_str(), c.value, req.tolerance);
      why += buf;
      return false;
    }
  }
  if (found == 0) why += "missing " + req.suffix + "; ";
  return found > 0;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool passed = true;
  std::string why;
};

Outcome judge(const EmbeddingReport& rep, const std::vector<Requirement>& reqs, double seconds, double limit) {
  Outcome o;
  if (!rep.passed()) {
    o.passed = false;
    for (const auto& c : rep.checks)
      if (!c.passed) o.why += "failed " + c.name + "; ";
  }
  for (const auto& r : reqs) o.passed = meets(rep, r, o.why) && o.passed;
  if (!(seconds < limit)) {
    o.passed = false;
    o.why += "runtime " + std::to_string(seconds) + " s over " + std::to_string(limit) + " s; ";
  }
  return o;
}

int failures = 0;

void report_line(int id, const std::string& title, const Outcome& o, double seconds) {
  std::printf("%s criterion %d: %s (%.2f s)%s%s\n", o.passed ? "PASS" : "FAIL", id, title.c_str(), seconds,
              o.why.empty() ? "" : " -- ", o.why.c_str());
  std::fflush(stdout);
  if (!o.passed) ++failures;
}

void run_criterion(int id, const std::string& title, double limit, const std::function<EmbeddingReport()>& body,
                   const std::vector<Requirement>& reqs) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  double s = 0.0;
  try {
    const EmbeddingReport rep = body();
    s = seconds_since(t0);
    o = judge(rep, reqs, s, limit);
  } catch (const std::exception& e) {
    s = seconds_since(t0);
    o = {false, std::string("exception: ") + e.what()};
  }
  report_line(id, title, o, s);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <whembed executable>\n";
    return 2;
  }

  run_criterion(1, "half-plane embedding vs Sommerfeld, 60x60", 1.0,
                [] { return suites::halfplane_oracle({60, 1e-12}); },
                {{"ratio_deviation_from_anchor", 1e-12}, {"ratio_deviation_from_mean", 1e-12}});

  run_criterion(2, "half-plane numeric WH, 2000 nodes, T = 40k", 30.0,
                [] { return suites::halfplane_numeric({2000, 40.0, 1e-6}); },
                {{"max_relative_error", 1e-6}, {"inverse_reduction_factor", 0.25 + 1e-15}});

  run_criterion(3, "scalar plane-wave normal-set demo, 50 points", 30.0,
                [] { return suites::halfplane_demo(1e-12); }, {{"max_deviation_from_closed_form", 1e-12}});

  run_criterion(4, "strip ka = 10", 300.0,
                [] {
                  suites::StripSuiteOptions o;
                  o.ka = 10.0;
                  o.modes = 40;
                  o.grid = 48;
                  return suites::strip_suite(o);
                },
                {{"bie_boundary_residual", 1e-10},
                 {"reciprocity", 1e-8},
                 {"optical_theorem", 1e-6},
                 {"sigma3_over_sigma1", 1e-5},
                 {"masked_relative_error", 1e-5},
                 {"edge_reflection_residual", 1e-4}});

  run_criterion(5, "wedge 3pi/2", 30.0, [] { return suites::wedge_suite({1e-10, 1e-13, 100.0, 150.0, 125.0}); },
                {{"det_K_plus_one", 1e-14},
                 {"dk_residual", 1e-10},
                 {"relation_residual", 1e-10},
                 {"det_X_over_z_constancy", 1e-10},
                 {"canonical_vs_closed_form", 1e-10},
                 {"mapped_over_closed_form_constancy", 1e-10},
                 {"weighted_embedding_residual", 1e-10},
                 {"systems_agree", 1e-10},
                 {"gtd_ratio_deviation", 1e-10},
                 {"Q_z_vs_Q_alpha", 1e-13}});

  {
    const auto t0 = std::chrono::steady_clock::now();
    const std::string cmd = std::string("\"") + argv[1] + "\" all verify > /dev/null";
    const int status = std::system(cmd.c_str());
    const double s = seconds_since(t0);
    Outcome o;
    if (status != 0) o = {false, "exit status " + std::to_string(status) + "; "};
    if (!(s < 600.0)) o = {false, o.why + "runtime over 600 s; "};
    report_line(6, "all verify exits 0", o, s);
  }

  std::printf("%s: %d of 6 criteria failed\n", failures ? "FAILED" : "PASSED", failures);
  return failures ? 1 : 0;
}
