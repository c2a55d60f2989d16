// Copyright 2026 The ktdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KTD_RNG_HPP
#define KTD_RNG_HPP

#include <array>
#include <cstdint>
#include <optional>

namespace ktd {

/// Seeded pseudo-random stream: xoshiro256** seeded through SplitMix64.
///
/// Streams are fully specified by (seed, stream) and produce the same
/// sequence on every platform. Normal variates use the Marsaglia polar
/// method so no implementation-defined std:: distribution is involved.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  /// Child stream for parallel or per-iteration work.
  [[nodiscard]] static Rng derive(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream); }

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer on [0, bound), bound > 0, without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);
  double normal();
  double normal(double mean, double std) { return mean + std * normal(); }

  [[nodiscard]] std::uint64_t seed() const { return seed_; }
  [[nodiscard]] std::uint64_t stream() const { return stream_; }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::optional<double> spare_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace ktd

#endif  // KTD_RNG_HPP
