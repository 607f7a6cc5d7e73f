#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hrm/config.hpp"
#include "hrm/solver.hpp"

namespace hrm {

inline constexpr const char* kVersion = "0.1.0";

std::string format_g17(double v);

std::uint64_t fnv1a64(const std::string& bytes);
std::string checksum_file(const std::string& path);

/// Write via a temp file and rename, so readers never see partial content.
void write_file_atomic(const std::string& path, const std::string& content);

/// One block per snapshot, separated by '# t=<time>' lines.
std::string fields_csv(const SolutionField& field, const EosModel& eos);

/// Per-snapshot scalar series derived from the run.
std::string series_csv(const SolutionField& field, const EosModel& eos);

/// Key-value report document; keys are emitted in insertion order.
class Report {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, const char* value);
  void set(const std::string& key, double value);
  void set(const std::string& key, bool value);
  std::string text() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

struct Manifest {
  RunConfig config;
  std::string status = "ok";
  std::string error;
  double wall_start = 0.0;
  double wall_end = 0.0;
  std::map<std::string, std::string> file_checksums;  // name -> hex checksum
  std::vector<std::pair<std::string, std::string>> verdicts;

  std::string text() const;
};

void write_manifest(const std::string& path, const Manifest& m);

}  // namespace hrm
