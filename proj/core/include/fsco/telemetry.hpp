#ifndef FSCO_TELEMETRY_HPP
#define FSCO_TELEMETRY_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fsco/controller.hpp"

namespace fsco {

inline constexpr const char* kTelemetryHeader =
    "step,g_loss,d_loss,action_u,eta_fsco_d,reward";

/// One row per cycle under the exact header above, floats serialized with 17
/// significant digits so parsing recovers every value bit-exactly.
void write_telemetry(const std::vector<CycleRecord>& records,
                     const std::filesystem::path& path);

/// Strict inverse of write_telemetry; malformed rows or a wrong header are
/// format errors naming the line.
std::vector<CycleRecord> read_telemetry(const std::filesystem::path& path);

struct CheckViolation {
  long long row = 0;  // 1-based data row, header not counted
  std::string message;
};

struct CheckReport {
  long long rows_checked = 0;
  std::vector<CheckViolation> violations;

  bool ok() const { return violations.empty(); }
};

/// Audits the identities every emitted CSV must satisfy on each row:
/// eta_fsco_d == eta_d_base * action_u and reward == -|g_loss - d_loss|,
/// both as exact 64-bit equalities, plus action_u within [u_floor, 1].
/// Pass u_floor = 0 to skip the floor bound when it is unknown.
CheckReport check_records(const std::vector<CycleRecord>& records,
                          double eta_d_base, double u_floor);

/// Written once per run next to the telemetry. The embedded config snapshot
/// reparses to the exact config the run used.
struct RunManifest {
  std::string config_text;
  std::uint64_t seed = 0;
  std::string mode;  // fsco | baseline
  std::string started_at;
  std::string finished_at;
  std::string output_dir;
  std::string status;  // completed | numeric-abort | io-error
};

void write_manifest(const RunManifest& m, const std::filesystem::path& path);
RunManifest read_manifest(const std::filesystem::path& path);

/// Current time as ISO 8601 UTC ("2026-08-14T12:30:05Z").
std::string timestamp_utc();

}  // namespace fsco

#endif  // FSCO_TELEMETRY_HPP
