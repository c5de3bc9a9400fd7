#ifndef QTRAJ_NOISE_HPP
#define QTRAJ_NOISE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "qtraj/types.hpp"

namespace qtraj::noise {

inline constexpr const char* kGeneratorName = "philox4x64-10";

/// Philox 4x64, 10 rounds: one 256-bit block per (counter, key) pair.
std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key);

/// Draw purposes keep independent counter lanes so one stream can feed
/// several kinds of variates without collisions.
enum class Purpose : std::uint64_t { Wiener = 0, Poisson = 1, Threshold = 2 };

/// Sequential view over the counter-based generator for one
/// (seed, stream_id, purpose) triple. Each trajectory owns stream_id =
/// trajectory index; identical inputs give identical draws regardless of
/// execution order.
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_id, Purpose purpose);

  std::uint64_t next_u64();

  /// Uniform in open (0, 1); 53-bit resolution, never exactly 0 or 1.
  double next_uniform();

  /// Standard normal pair via Box-Muller (consumes exactly two uniforms).
  std::pair<double, double> next_gaussian_pair();

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t purpose_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> buffer_{};
  int lane_ = 4;
};

/// Complex Wiener increments dW = dW1 + i dW2 with
/// Var(dW1) = Var(dW2) = dt/2, independent across steps and streams.
struct NoisePath {
  TimeGrid grid;
  std::vector<Complex> dw;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

NoisePath wiener_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream_id);

/// Merge groups of `factor` consecutive increments (same Brownian path seen
/// on a coarser grid); used by convergence studies. n_steps must divide evenly.
NoisePath coarsen(const NoisePath& fine, int factor);

/// Reference counting-process path: each step jumps with probability
/// intensity * dt. Requires dt <= 0.01.
struct PoissonPath {
  TimeGrid grid;
  std::vector<std::uint8_t> jumps;
  double intensity = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

PoissonPath poisson_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream_id,
                         double intensity = 1.0);

/// Uniform threshold draws for the jump (MCWF) simulation.
class UniformStream {
 public:
  UniformStream(std::uint64_t seed, std::uint64_t stream_id)
      : s_(seed, stream_id, Purpose::Threshold) {}
  double next() { return s_.next_uniform(); }

 private:
  CounterStream s_;
};

}  // namespace qtraj::noise

#endif
