#pragma once

#include <string>
#include <vector>

#include "relayline/deploy.hpp"
#include "relayline/mdp.hpp"

namespace relayline {

/// Fixed six-decimal formatting ("%.6f", '.' separator) used by every CSV
/// and JSON emitter so files round-trip identically across locales.
std::string format_fixed(double value);

/// Policy table as CSV: header "s,J,a_star", one row per grid state.
std::string format_policy_csv(const MdpSolution& solution);
void write_policy_csv(const MdpSolution& solution, const std::string& path);

struct PolicyRow {
  double s = 0.0;
  double J = 0.0;
  double a_star = 0.0;
};

/// Parses a policy CSV produced by format_policy_csv. Throws
/// std::runtime_error on a malformed header or row.
std::vector<PolicyRow> read_policy_csv(const std::string& path);

/// Deployment traces as CSV: header
/// "sample_index,length,n_relays,H_seq,H_off,e_percent".
std::string format_trace_csv(const std::vector<DeploymentTrace>& traces);
void write_trace_csv(const std::vector<DeploymentTrace>& traces,
                     const std::string& path);

struct TraceRow {
  long sample_index = 0;
  double length = 0.0;
  int n_relays = 0;
  double h_seq = 0.0;
  double h_off = 0.0;
  double e_percent = 0.0;
};

std::vector<TraceRow> read_trace_csv(const std::string& path);

/// Monte-Carlo comparison report as pretty-printed JSON (snake_case keys,
/// insertion order preserved).
std::string format_report_json(const ComparisonReport& report);
void write_report_json(const ComparisonReport& report,
                       const std::string& path);
ComparisonReport read_report_json(const std::string& path);

/// Run metadata for a solved policy (grid geometry, convergence, tie-break
/// convention) as JSON.
std::string format_policy_metadata_json(const MdpSolution& solution);

void write_text_file(const std::string& path, const std::string& contents);

}  // namespace relayline
