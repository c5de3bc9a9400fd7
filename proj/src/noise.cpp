#include "qtraj/noise.hpp"

#include <cmath>

namespace qtraj::noise {

namespace {

constexpr std::uint64_t kM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  lo = static_cast<std::uint64_t>(p);
  hi = static_cast<std::uint64_t>(p >> 64);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64_10(const std::array<std::uint64_t, 4>& counter,
                                           const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> c = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kM0, c[0], hi0, lo0);
    mulhilo(kM1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kW0;
    k[1] += kW1;
  }
  return c;
}

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_id, Purpose purpose)
    : key_{seed, stream_id}, purpose_(static_cast<std::uint64_t>(purpose)) {}

std::uint64_t CounterStream::next_u64() {
  if (lane_ == 4) {
    ++block_;
    buffer_ = philox4x64_10({block_, purpose_, 0, 0}, key_);
    lane_ = 0;
  }
  return buffer_[lane_++];
}

double CounterStream::next_uniform() {
  // (k + 1/2) * 2^-53 with k in [0, 2^53): strictly inside (0, 1)
  const std::uint64_t k = next_u64() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterStream::next_gaussian_pair() {
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

NoisePath wiener_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream_id) {
  grid.validate();
  NoisePath path{grid, {}, seed, stream_id};
  path.dw.resize(grid.n_steps);
  CounterStream s(seed, stream_id, Purpose::Wiener);
  const double scale = std::sqrt(grid.dt() / 2.0);
  for (int k = 0; k < grid.n_steps; ++k) {
    auto [z1, z2] = s.next_gaussian_pair();
    path.dw[k] = Complex{scale * z1, scale * z2};
  }
  return path;
}

NoisePath coarsen(const NoisePath& fine, int factor) {
  if (factor < 1 || fine.grid.n_steps % factor != 0)
    throw ConfigError("coarsen: factor must divide n_steps evenly");
  NoisePath out{TimeGrid{fine.grid.t_max, fine.grid.n_steps / factor}, {}, fine.seed,
                fine.stream_id};
  out.dw.resize(out.grid.n_steps);
  for (int k = 0; k < out.grid.n_steps; ++k) {
    Complex sum{0, 0};
    for (int j = 0; j < factor; ++j) sum += fine.dw[k * factor + j];
    out.dw[k] = sum;
  }
  return out;
}

PoissonPath poisson_path(const TimeGrid& grid, std::uint64_t seed, std::uint64_t stream_id,
                         double intensity) {
  grid.validate();
  if (!(intensity > 0.0)) throw ConfigError("poisson_path: intensity must be > 0");
  if (grid.dt() > 0.01 + 1e-15)
    throw ConfigError("poisson_path: dt = " + std::to_string(grid.dt()) +
                      " exceeds the 0.01 step guard");
  PoissonPath path{grid, {}, intensity, seed, stream_id};
  path.jumps.resize(grid.n_steps);
  CounterStream s(seed, stream_id, Purpose::Poisson);
  const double p = intensity * grid.dt();
  for (int k = 0; k < grid.n_steps; ++k) path.jumps[k] = (s.next_uniform() < p) ? 1 : 0;
  return path;
}

}  // namespace qtraj::noise
