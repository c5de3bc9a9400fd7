#ifndef QTRAJ_TRAJECTORY_HPP
#define QTRAJ_TRAJECTORY_HPP

#include <cstdint>
#include <vector>

#include "qtraj/types.hpp"

namespace qtraj {

/// Per-step posterior record of one realization. All statistics are the
/// normalized ratios read off the current unnormalized state; norm2_log is
/// the log of the true unnormalized norm^2 (renormalization-corrected).
struct Trajectory {
  TimeGrid grid;
  std::vector<double> times;
  std::vector<double> mean_x, mean_y, mean_n, dx, dy, norm2_log;
  std::vector<std::uint8_t> jump;    // 1 where a count fired at this recorded step
  std::vector<double> jump_times;    // counting modes only; strictly increasing, on-grid
  std::vector<Vec> states;           // populated only when record_states is set

  std::size_t size() const { return times.size(); }
};

struct RunOptions {
  int record_every = 1;            // record every k-th step (steps 0 and n always kept)
  bool record_states = false;      // keep the unnormalized state at recorded steps
  bool force_jump_records = true;  // also record off-stride steps where a count fired;
                                   // ensembles disable this to keep rows aligned
};

}  // namespace qtraj

#endif
