#pragma once

#include <array>
#include <cstdint>

namespace dgff {

// Counter-based random stream (Philox4x32-10).  A stream is fully determined
// by (master_seed, stream_id); distinct stream ids give independent streams,
// so replicas can run in any order or thread without changing output.
// Normal variates use the inverse-CDF method so the byte stream of results is
// identical across platforms with IEEE doubles.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

  std::uint64_t next_u64();
  // Strictly inside (0,1).
  double next_uniform();
  // Standard normal via the inverse CDF.
  double next_normal();

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  void refill();

  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int buffer_pos_ = 4;  // empty
};

// Inverse of the standard normal CDF (Wichura's AS 241, double precision).
double inverse_normal_cdf(double p);

}  // namespace dgff
