#include "fsco/telemetry.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fsco/errors.hpp"
#include "fsco/serialize.hpp"

namespace fsco {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type begin = 0;
  while (true) {
    const auto comma = line.find(',', begin);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return fields;
}

}  // namespace

void write_telemetry(const std::vector<CycleRecord>& records,
                     const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << kTelemetryHeader << "\n";
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.g_loss) << ','
        << format_double(r.d_loss) << ',' << format_double(r.action_u) << ','
        << format_double(r.eta_fsco_d) << ',' << format_double(r.reward) << "\n";
  }
  if (!out) throw IoError("write failed on " + path.string());
}

std::vector<CycleRecord> read_telemetry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ": empty file, expected telemetry header");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kTelemetryHeader) {
    throw FormatError(path.string() + ":1: bad header '" + line + "'");
  }

  std::vector<CycleRecord> records;
  long long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 6) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) +
                        ": expected 6 fields, got " +
                        std::to_string(fields.size()));
    }
    CycleRecord r;
    try {
      r.step = parse_int(fields[0]);
      r.g_loss = parse_double(fields[1]);
      r.d_loss = parse_double(fields[2]);
      r.action_u = parse_double(fields[3]);
      r.eta_fsco_d = parse_double(fields[4]);
      r.reward = parse_double(fields[5]);
    } catch (const Error& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " +
                        e.what());
    }
    records.push_back(r);
  }
  return records;
}

CheckReport check_records(const std::vector<CycleRecord>& records,
                          double eta_d_base, double u_floor) {
  CheckReport report;
  long long row = 0;
  for (const auto& r : records) {
    ++row;
    report.rows_checked = row;

    const double expected_reward = -std::fabs(r.g_loss - r.d_loss);
    if (r.reward != expected_reward) {
      report.violations.push_back(
          {row, "row " + std::to_string(row) + ": reward " +
                    format_double(r.reward) + " != -|g_loss - d_loss| = " +
                    format_double(expected_reward)});
    }
    const double expected_eta = eta_d_base * r.action_u;
    if (r.eta_fsco_d != expected_eta) {
      report.violations.push_back(
          {row, "row " + std::to_string(row) + ": eta_fsco_d " +
                    format_double(r.eta_fsco_d) + " != eta_d_base * action_u = " +
                    format_double(expected_eta)});
    }
    if (!(r.action_u >= u_floor && r.action_u <= 1.0)) {
      report.violations.push_back(
          {row, "row " + std::to_string(row) + ": action_u " +
                    format_double(r.action_u) + " outside [" +
                    format_double(u_floor) + ", 1]"});
    }
  }
  return report;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  nlohmann::json j;
  j["config"] = m.config_text;
  j["seed"] = m.seed;
  j["mode"] = m.mode;
  j["started_at"] = m.started_at;
  j["finished_at"] = m.finished_at;
  j["output_dir"] = m.output_dir;
  j["status"] = m.status;

  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failed on " + path.string());
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  RunManifest m;
  try {
    m.config_text = j.at("config").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.mode = j.at("mode").get<std::string>();
    m.started_at = j.at("started_at").get<std::string>();
    m.finished_at = j.at("finished_at").get<std::string>();
    m.output_dir = j.at("output_dir").get<std::string>();
    m.status = j.at("status").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
  return m;
}

std::string timestamp_utc() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fsco
