#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "flucto/cli/config.hpp"

namespace flucto::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;

struct RunOptions {
  /// Result file; stdout when empty. A metadata sidecar <out>.meta is
  /// written next to it.
  std::string out;
  std::optional<std::uint64_t> seed;
  /// 0 selects the hardware concurrency.
  unsigned threads = 1;
};

/// Names accepted by run().
const std::vector<std::string>& command_names();

/// Every configuration key understood by the runner.
const std::vector<std::string>& known_keys();

/// Executes one subcommand (ft, sweep, tpm, entanglement, bk-scan) and returns
/// its exit status. Results go to options.out or `out`; diagnostics to `err`.
/// Divergent physics is reported in the results, never as a failure.
int run(std::string_view command, const Config& config, const RunOptions& options,
        std::ostream& out, std::ostream& err);

/// Formats a real with 17 significant digits.
std::string format_real(double value);

}  // namespace flucto::cli
