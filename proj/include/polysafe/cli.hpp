#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace polysafe {

// exit codes shared by every subcommand:
//   0 success, 1 failed certification or invariance violations / early exits,
//   2 malformed scenario or IO error, 3 --force run of an uncertified scenario
inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitBadInput = 2;
inline constexpr int kExitForcedUncertified = 3;

struct CliOptions {
  bool force = false;
  std::optional<std::uint64_t> seed_override;
  std::optional<double> dt_override;
  std::optional<std::string> policy_override;
  std::string out_dir = "out";
};

int cmd_check(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_gamma(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
              std::ostream& err);
int cmd_run(const std::string& scenario_path, const CliOptions& opts, std::ostream& out,
            std::ostream& err);
int cmd_plot(const std::string& trajectory_csv, const std::string& scenario_path,
             const std::string& out_svg, std::ostream& out, std::ostream& err);

}  // namespace polysafe
