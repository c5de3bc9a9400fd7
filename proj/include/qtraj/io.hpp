#ifndef QTRAJ_IO_HPP
#define QTRAJ_IO_HPP

#include <string>

#include "qtraj/config.hpp"
#include "qtraj/ensemble.hpp"
#include "qtraj/lindblad.hpp"
#include "qtraj/sde.hpp"
#include "qtraj/trajectory.hpp"

namespace qtraj::io {

/// Fixed %.17g rendering used by every CSV cell for bit-stable reruns.
std::string format_g17(double v);

/// Series schema shared by trajectory, ensemble and master-equation output:
/// t,meanX,meanY,meanN,dX,dY,norm2log,jump
extern const char* kSeriesHeader;

std::string trajectory_csv(const Trajectory& t);
std::string ensemble_csv(const ensemble::SeriesStats& s);
std::string master_csv(const lindblad::MasterSeries& s);
std::string survival_csv(const ensemble::SurvivalStats& s);

/// Self-describing companion document for every CSV.
struct RunMetadata {
  RunConfig config;
  int resolved_dim = 0;
  double tail_mass = 0.0;
  int threads = 1;
  std::string exec = "serial";
};
std::string metadata_json(const RunMetadata& m);

std::string report_json(const sde::ErrorReport& r);
std::string ensemble_stats_json(const ensemble::SeriesStats& s);

void write_file(const std::string& path, const std::string& content);

}  // namespace qtraj::io

#endif
