// Wall-time comparison of the serial reference ensemble loop against the
// OpenMP path, plus a bitwise agreement check on the aggregated output.

#include <cstdlib>
#include <iostream>

#include <omp.h>

#include "qtraj/ensemble.hpp"
#include "qtraj/states.hpp"

using namespace qtraj;

namespace {

double time_run(ensemble::Exec exec, const InitialState& s, const ModelParams& p,
                const TimeGrid& grid, ensemble::Options opt, ensemble::SeriesStats& out) {
  opt.exec = exec;
  const double t0 = omp_get_wtime();
  out = ensemble::run_diffusive_ensemble(s, p, grid, opt);
  return omp_get_wtime() - t0;
}

bool identical(const ensemble::SeriesStats& a, const ensemble::SeriesStats& b) {
  auto eq = [](const std::vector<double>& u, const std::vector<double>& v) {
    if (u.size() != v.size()) return false;
    for (std::size_t i = 0; i < u.size(); ++i)
      if (u[i] != v[i]) return false;
    return true;
  };
  return eq(a.mean_x, b.mean_x) && eq(a.mean_y, b.mean_y) && eq(a.mean_n, b.mean_n) &&
         eq(a.se_x, b.se_x) && eq(a.mean_norm2, b.mean_norm2);
}

}  // namespace

int main(int argc, char** argv) {
  int n_traj = argc > 1 ? std::atoi(argv[1]) : 2000;
  const auto s = InitialState::squeezed_coherent(SqueezeParams::make(0.5, 0.7), {1.0, 0.0});
  const ModelParams p{1.0, 0.5, 0};
  const TimeGrid grid{1.0, 1000};

  ensemble::Options opt;
  opt.n_trajectories = n_traj;
  opt.record_every = 250;
  opt.seed = 7;

  ensemble::SeriesStats serial_out, omp_out;
  const double t_serial = time_run(ensemble::Exec::Serial, s, p, grid, opt, serial_out);
  const double t_omp = time_run(ensemble::Exec::OpenMP, s, p, grid, opt, omp_out);

  std::cout << "trajectories:        " << n_traj << "\n"
            << "threads:             " << omp_get_max_threads() << "\n"
            << "serial reference:    " << t_serial << " s\n"
            << "openmp:              " << t_omp << " s\n"
            << "speedup:             " << t_serial / t_omp << "x\n"
            << "bitwise identical:   " << (identical(serial_out, omp_out) ? "yes" : "NO") << "\n";
  return identical(serial_out, omp_out) ? 0 : 1;
}
