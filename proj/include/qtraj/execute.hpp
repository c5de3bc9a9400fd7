#ifndef QTRAJ_EXECUTE_HPP
#define QTRAJ_EXECUTE_HPP

#include <iosfwd>
#include <string>

#include "qtraj/config.hpp"

namespace qtraj {

/// Exit codes shared by the library dispatcher and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceExceeded = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;

/// Run one validated config: writes the CSV series, its metadata document
/// and (mode-dependent) the comparison report into config.output.
/// Never throws; failures map onto the exit codes above and a diagnostic on `log`.
int execute(const RunConfig& config, std::ostream& log, int threads = 0);

}  // namespace qtraj

#endif
