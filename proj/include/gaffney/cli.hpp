#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gaffney {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every subcommand.
enum ExitCode { kOk = 0, kSuiteFailure = 1, kInvalidInput = 2 };

/// One run description; parses from a single JSON document with unknown
/// keys rejected, then individual fields may be overridden by flags.
struct JobConfig {
  std::string command;
  std::string domain = "square";
  int k = 2;
  int levels = 3;
  std::string spec;    ///< boundary spec: inline JSON or a file path
  std::string family;
  std::vector<int> ns = {1, 2, 4, 8};
  std::string lambda;  ///< rectify: "f1,f2" expression
  std::array<double, 2> x0 = {0.0, 0.0};
  double r = 0.5;
  double eps = 1.0;
  int grid = 5;        ///< rectify: samples per axis
  std::string out;     ///< output path; empty writes to stdout
  std::uint64_t seed = 20250811;
  std::vector<std::string> fields;  ///< verify corpus
  bool fields_given = false;        ///< true: use `fields` even when empty

  static JobConfig from_json_string(const std::string& text);
  static JobConfig from_json_file(const std::string& path);
};

/// Dispatches cfg.command; returns the process exit code. Reports are
/// written to `out` (or the configured file) and errors to `err`.
int run_command(const JobConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_constant(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_blowup(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rectify(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_mesh(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_trace(const JobConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gaffney
