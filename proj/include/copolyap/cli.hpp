#pragma once

/**
 * @file cli.hpp
 * @brief The copolyap command line: synth, verify and simulate.
 *
 * Exit codes: 0 success / certified, 1 not found / falsified, 2 unknown,
 * 64 malformed input or arguments.
 */

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "copolyap/json_io.hpp"
#include "copolyap/sim.hpp"
#include "copolyap/synth_disc.hpp"
#include "copolyap/synth_polya.hpp"
#include "copolyap/verify.hpp"

namespace copolyap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitNegative = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitUsage = 64;

namespace detail {

inline Vector parse_point(const std::string& text, int n) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw io::ParseError("x0", "not a number: \"" + item + "\"");
    }
  }
  if (static_cast<int>(vals.size()) != n) throw io::ParseError("x0", "expected " + std::to_string(n) + " values");
  return Eigen::Map<Vector>(vals.data(), n);
}

inline void print_report(std::ostream& out, const VerificationReport& r) {
  auto line = [&](const PolynomialVerdict& v) {
    out << "  " << v.name << ": " << to_string(v.combined.status) << " (" << v.combined.method << ", "
        << v.combined.param << ")\n";
  };
  line(r.h);
  line(r.s0);
  for (const auto& f : r.faces) line(f);
  if (r.sampling) {
    out << "  sampling: " << r.sampling->num_points << " points, max derivative " << r.sampling->max_derivative
        << (r.sampling->violation ? " (violation)" : "") << '\n';
  }
  out << "overall: " << to_string(r.overall) << '\n';
}

inline int status_exit(CheckStatus s) {
  switch (s) {
    case CheckStatus::Certified: return kExitOk;
    case CheckStatus::Falsified: return kExitNegative;
    case CheckStatus::Unknown: return kExitUnknown;
  }
  return kExitUnknown;
}

}  // namespace detail

/// Runs the CLI; diagnostics go to `err`, summaries to `out`.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Copositive Lyapunov function synthesis and verification on the nonnegative orthant"};
  app.require_subcommand(1);
  app.footer("Environment: COPOLYAP_THREADS caps the worker count.");

  std::string input;
  std::string out_path;

  // synth
  auto* synth = app.add_subcommand("synth", "Search for a certificate V = h / ||x||^{2r}");
  std::string method = "disc";
  std::string mode = "conservative";
  int d_min = 1;
  int d_max = 6;
  std::optional<int> r_min;
  int r_max = 2;
  double delta_min = 1.0 / 64.0;
  int polya_d_max = 8;
  double margin = 1e-6;
  synth->add_option("--input", input, "Problem JSON")->required();
  synth->add_option("--method", method, "disc or polya")->check(CLI::IsMember({"disc", "polya"}))->capture_default_str();
  synth->add_option("--dmin", d_min, "Smallest degree of h")->capture_default_str();
  synth->add_option("--dmax", d_max, "Largest degree of h")->capture_default_str();
  synth->add_option("--rmin", r_min, "Smallest r (default 0 for disc, 1 for polya)");
  synth->add_option("--rmax", r_max, "Largest r")->capture_default_str();
  synth->add_option("--delta-min", delta_min, "Smallest nominal partition diameter (disc)")->capture_default_str();
  synth->add_option("--polya-dmax", polya_d_max, "Largest Polya lift degree (polya)")->capture_default_str();
  synth->add_option("--margin", margin, "Lower bound on h tuples or coefficients")->capture_default_str();
  synth->add_option("--mode", mode, "Face constraints (disc)")
      ->check(CLI::IsMember({"conservative", "sign_split"}))
      ->capture_default_str();
  synth->add_option("--out", out_path, "Certificate JSON output");

  // verify
  auto* verify = app.add_subcommand("verify", "Verify a certificate");
  std::string cert_path;
  VerifyBudget budget;
  verify->add_option("--input", input, "Problem JSON")->required();
  verify->add_option("--cert", cert_path, "Certificate JSON")->required();
  verify->add_option("--samples", budget.num_samples, "Sample points per region")->capture_default_str();
  verify->add_option("--seed", budget.seed, "Sampling sequence offset")->capture_default_str();
  verify->add_option("--max-level", budget.max_level, "Tensor checker refinement budget")->capture_default_str();
  verify->add_option("--polya-dmax", budget.polya_d_max, "Polya checker lift budget")->capture_default_str();
  verify->add_option("--out", out_path, "Report JSON output");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "Projected Euler simulation to CSV");
  std::string x0_text;
  double horizon = 0.0;
  double dt = 1e-3;
  std::string sim_cert;
  simulate_cmd->add_option("--input", input, "Problem JSON")->required();
  simulate_cmd->add_option("--x0", x0_text, "Initial state, comma separated")->required();
  simulate_cmd->add_option("--T", horizon, "Final time")->required()->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--dt", dt, "Step size")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--out", out_path, "CSV output")->required();
  simulate_cmd->add_option("--cert", sim_cert, "Certificate whose V is appended as a column");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    const ProblemSpec problem = io::problem_from_json(io::read_json_file(input));

    if (synth->parsed()) {
      SynthesisResult result;
      if (method == "disc") {
        disc::DiscOptions o;
        o.d_min = d_min;
        o.d_max = d_max;
        o.r_min = r_min.value_or(0);
        o.r_max = r_max;
        o.delta_min = delta_min;
        o.margin = margin;
        o.mode = mode == "sign_split" ? FaceMode::SignSplit : FaceMode::Conservative;
        try {
          disc::validate(o);
        } catch (const std::invalid_argument& e) {
          throw io::ParseError("options", e.what());
        }
        result = disc::synthesize(problem, o);
      } else {
        polya::PolyaOptions o;
        o.q_min = d_min;
        o.q_max = d_max;
        o.r_min = r_min.value_or(1);
        o.r_max = r_max;
        o.d_max = polya_d_max;
        o.margin = margin;
        try {
          polya::validate(o);
        } catch (const std::invalid_argument& e) {
          throw io::ParseError("options", e.what());
        }
        result = polya::synthesize(problem, o);
      }
      out << "nodes visited: " << result.nodes.size() << '\n';
      if (!result.found()) {
        out << "not found\n";
        return kExitNegative;
      }
      const Certificate& cert = *result.certificate;
      const io::json j = io::to_json(cert);
      if (out_path.empty()) out << j.dump(2) << '\n';
      else io::write_json_file(out_path, j);
      out << "found: degree " << cert.h.degree() << ", r = " << cert.r << '\n';
      detail::print_report(out, *cert.report);
      return kExitOk;
    }

    if (verify->parsed()) {
      const Certificate cert = io::certificate_from_json(io::read_json_file(cert_path), problem.dim());
      const VerificationReport report = verify_full(problem, cert, budget);
      if (!out_path.empty()) io::write_json_file(out_path, io::to_json(report));
      detail::print_report(out, report);
      return detail::status_exit(report.overall);
    }

    if (simulate_cmd->parsed()) {
      const Vector x0 = detail::parse_point(x0_text, problem.dim());
      const Trajectory traj = simulate(problem, x0, horizon, dt);
      std::optional<std::vector<double>> values;
      if (!sim_cert.empty()) {
        const Certificate cert = io::certificate_from_json(io::read_json_file(sim_cert), problem.dim());
        values = evaluate_along(cert, traj).values;
      }
      std::ofstream csv(out_path);
      if (!csv) throw std::runtime_error(out_path + ": cannot open for writing");
      write_trajectory_csv(csv, traj, values);
      out << "steps: " << traj.states.size() - 1 << (traj.blew_up ? " (blow-up, truncated)" : "") << '\n';
      return kExitOk;
    }
  } catch (const io::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace copolyap::cli
