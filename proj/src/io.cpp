#include "qtraj/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qtraj/noise.hpp"
#include "qtraj/version.hpp"

namespace qtraj::io {

using nlohmann::json;

const char* kSeriesHeader = "t,meanX,meanY,meanN,dX,dY,norm2log,jump";

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void append_row(std::string& out, std::initializer_list<double> cells, int jump) {
  bool first = true;
  for (double c : cells) {
    if (!first) out += ',';
    out += format_g17(c);
    first = false;
  }
  out += ',';
  out += std::to_string(jump);
  out += '\n';
}

}  // namespace

std::string trajectory_csv(const Trajectory& t) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (std::size_t i = 0; i < t.size(); ++i)
    append_row(out, {t.times[i], t.mean_x[i], t.mean_y[i], t.mean_n[i], t.dx[i], t.dy[i],
                     t.norm2_log[i]},
               t.jump[i]);
  return out;
}

std::string ensemble_csv(const ensemble::SeriesStats& s) {
  // norm2log column carries log of the ensemble-mean unnormalized norm^2
  std::string out = kSeriesHeader;
  out += '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i)
    append_row(out, {s.times[i], s.mean_x[i], s.mean_y[i], s.mean_n[i], s.mean_dx[i],
                     s.mean_dy[i], std::log(s.mean_norm2[i])},
               0);
  return out;
}

std::string master_csv(const lindblad::MasterSeries& s) {
  std::string out = kSeriesHeader;
  out += '\n';
  for (std::size_t i = 0; i < s.times.size(); ++i)
    append_row(out, {s.times[i], s.mean_x[i], s.mean_y[i], s.mean_n[i], s.dx[i], s.dy[i],
                     s.trace_log[i]},
               0);
  return out;
}

std::string survival_csv(const ensemble::SurvivalStats& s) {
  std::string out = "t,survivalClosed,zeroJumpFreq,binomSE,meanJumps\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    out += format_g17(s.times[i]) + ',' + format_g17(s.closed_form[i]) + ',' +
           format_g17(s.frequency[i]) + ',' + format_g17(s.binom_se[i]) + ',' +
           format_g17(s.mean_jumps[i]) + '\n';
  }
  return out;
}

std::string metadata_json(const RunMetadata& m) {
  json doc;
  doc["tool"] = "qtraj";
  doc["version"] = kVersion;
  doc["mode"] = mode_name(m.config.mode);
  doc["config"] = json::parse(emit_config(m.config));
  doc["resolved"] = {{"dim", m.resolved_dim},
                     {"tail_mass", m.tail_mass},
                     {"generator", noise::kGeneratorName},
                     {"stream_policy", "stream_id = trajectory index"},
                     {"hbar", kHbar},
                     {"threads", m.threads},
                     {"exec", m.exec}};
  doc["seed"] = m.config.seed;
  return doc.dump(2) + "\n";
}

std::string report_json(const sde::ErrorReport& r) {
  json doc;
  doc["pass"] = r.pass();
  json items = json::array();
  for (const auto& i : r.items)
    items.push_back({{"observable", i.name},
                     {"max_dev", i.max_dev},
                     {"rms_dev", i.rms_dev},
                     {"tolerance", i.tol},
                     {"pass", i.pass}});
  doc["observables"] = items;
  return doc.dump(2) + "\n";
}

std::string ensemble_stats_json(const ensemble::SeriesStats& s) {
  json doc;
  doc["n_trajectories"] = s.n_trajectories;
  doc["times"] = s.times;
  doc["meanX"] = s.mean_x;
  doc["seX"] = s.se_x;
  doc["meanY"] = s.mean_y;
  doc["seY"] = s.se_y;
  doc["meanN"] = s.mean_n;
  doc["seN"] = s.se_n;
  doc["meanDX"] = s.mean_dx;
  doc["meanDY"] = s.mean_dy;
  doc["meanNorm2"] = s.mean_norm2;
  doc["seNorm2"] = s.se_norm2;
  return doc.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& content) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw NumericalError("cannot open output file " + path);
  f << content;
  if (!f) throw NumericalError("failed writing output file " + path);
}

}  // namespace qtraj::io
