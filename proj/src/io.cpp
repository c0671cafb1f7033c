#include "relayline/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace relayline {

namespace {

// Round to the emitted precision so JSON numbers match their CSV rendering.
double fixed6(double value) {
  return std::isnan(value) ? value : std::round(value * 1e6) / 1e6;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& field, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(field, &used);
    if (used != field.size()) {
      throw std::invalid_argument(field);
    }
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed " + what + " value: '" + field + "'");
  }
}

long parse_long(const std::string& field, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(field, &used);
    if (used != field.size()) {
      throw std::invalid_argument(field);
    }
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("malformed " + what + " value: '" + field + "'");
  }
}

std::vector<std::string> csv_lines(const std::string& text,
                                   const std::string& expected_header,
                                   const std::string& what) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> rows;
  if (!std::getline(in, line) || line != expected_header) {
    throw std::runtime_error("malformed " + what + " header: '" + line + "'");
  }
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(line);
  }
  return rows;
}

}  // namespace

std::string format_fixed(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

std::string format_policy_csv(const MdpSolution& solution) {
  std::string out = "s,J,a_star\n";
  const int k = static_cast<int>(solution.states.size());
  for (int i = 0; i < k; ++i) {
    out += format_fixed(solution.states[i]);
    out += ',';
    out += format_fixed(solution.J[i]);
    out += ',';
    out += format_fixed(solution.policy[i]);
    out += '\n';
  }
  return out;
}

void write_policy_csv(const MdpSolution& solution, const std::string& path) {
  write_text_file(path, format_policy_csv(solution));
}

std::vector<PolicyRow> read_policy_csv(const std::string& path) {
  const auto rows =
      csv_lines(read_text_file(path), "s,J,a_star", "policy CSV");
  std::vector<PolicyRow> out;
  out.reserve(rows.size());
  for (const std::string& line : rows) {
    const auto f = split_fields(line);
    if (f.size() != 3) {
      throw std::runtime_error("malformed policy CSV row: '" + line + "'");
    }
    out.push_back({parse_double(f[0], "s"), parse_double(f[1], "J"),
                   parse_double(f[2], "a_star")});
  }
  return out;
}

std::string format_trace_csv(const std::vector<DeploymentTrace>& traces) {
  std::string out = "sample_index,length,n_relays,H_seq,H_off,e_percent\n";
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const DeploymentTrace& t = traces[i];
    out += std::to_string(i);
    out += ',';
    out += format_fixed(t.line_length);
    out += ',';
    out += std::to_string(t.relay_count);
    out += ',';
    out += format_fixed(t.h_sequential);
    out += ',';
    out += format_fixed(t.h_offline);
    out += ',';
    out += format_fixed(t.e_percent);
    out += '\n';
  }
  return out;
}

void write_trace_csv(const std::vector<DeploymentTrace>& traces,
                     const std::string& path) {
  write_text_file(path, format_trace_csv(traces));
}

std::vector<TraceRow> read_trace_csv(const std::string& path) {
  const auto rows = csv_lines(
      read_text_file(path), "sample_index,length,n_relays,H_seq,H_off,e_percent",
      "trace CSV");
  std::vector<TraceRow> out;
  out.reserve(rows.size());
  for (const std::string& line : rows) {
    const auto f = split_fields(line);
    if (f.size() != 6) {
      throw std::runtime_error("malformed trace CSV row: '" + line + "'");
    }
    TraceRow row;
    row.sample_index = parse_long(f[0], "sample_index");
    row.length = parse_double(f[1], "length");
    row.n_relays = static_cast<int>(parse_long(f[2], "n_relays"));
    row.h_seq = parse_double(f[3], "H_seq");
    row.h_off = parse_double(f[4], "H_off");
    row.e_percent = parse_double(f[5], "e_percent");
    out.push_back(row);
  }
  return out;
}

std::string format_report_json(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["Lambda"] = fixed6(report.Lambda);
  j["xi"] = fixed6(report.xi);
  j["sample_count"] = report.sample_count;
  j["seed"] = report.seed;
  j["mean_percent_error"] = fixed6(report.mean_percent_error);
  j["mean_relays"] = fixed6(report.mean_relays);
  j["zero_relay_cases"] = report.zero_relay_cases;
  j["max_percent_error"] = fixed6(report.max_percent_error);
  return j.dump(2) + "\n";
}

void write_report_json(const ComparisonReport& report,
                       const std::string& path) {
  write_text_file(path, format_report_json(report));
}

ComparisonReport read_report_json(const std::string& path) {
  ComparisonReport report;
  try {
    const auto j = nlohmann::json::parse(read_text_file(path));
    report.Lambda = j.at("Lambda").get<double>();
    report.xi = j.at("xi").get<double>();
    report.sample_count = j.at("sample_count").get<int>();
    report.seed = j.at("seed").get<std::uint64_t>();
    report.mean_percent_error = j.at("mean_percent_error").get<double>();
    report.mean_relays = j.at("mean_relays").get<double>();
    report.zero_relay_cases = j.at("zero_relay_cases").get<int>();
    report.max_percent_error = j.at("max_percent_error").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed report JSON (" + path +
                             "): " + e.what());
  }
  return report;
}

std::string format_policy_metadata_json(const MdpSolution& solution) {
  const MdpConfig& cfg = solution.config;
  nlohmann::ordered_json j;
  j["Lambda"] = cfg.Lambda;
  j["xi"] = cfg.xi;
  j["state_step"] = cfg.state_step;
  j["action_step"] = cfg.action_step;
  j["a_max"] = cfg.resolved_a_max();
  j["state_count"] = cfg.state_count();
  j["tie_break"] = "smallest-action";
  j["iterations"] = solution.iterations;
  j["final_sup_diff"] = solution.final_sup_diff;
  j["converged"] = solution.converged;
  j["monotone_iterates"] = solution.monotone_iterates;
  j["boundary_minimizer"] = solution.diagnostics.boundary_minimizer;
  j["no_relay_preferred"] = solution.diagnostics.no_relay_preferred;
  if (solution.theta.has_value()) {
    j["theta"] = *solution.theta;
  }
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out.write(contents.data(),
            static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw std::runtime_error("short write: " + path);
  }
}

}  // namespace relayline
