// Copyright 2026 The PrivHP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVHP_NOISE_H_
#define PRIVHP_NOISE_H_

#include <cstdint>
#include <random>
#include <vector>

#include "absl/status/statusor.h"
#include "privhp/domain.h"

namespace privhp {

// Mixes `stream` into `master` to produce an independent child seed
// (splitmix64 finalizer).
uint64_t DeriveSeed(uint64_t master, uint64_t stream);

// Seeded uniform source. Output depends only on the seed: the 64-bit
// Mersenne Twister sequence is fixed by the standard and the conversion to
// reals is done here rather than by a library distribution.
class RandomStream {
 public:
  explicit RandomStream(uint64_t seed) : engine_(seed) {}

  uint64_t NextBits() { return engine_(); }
  // Uniform on the open interval (0, 1).
  double NextOpenUnit();
  // Uniform on [0, 1).
  double NextUnit();
  // Uniform integer in [0, n).
  uint64_t NextBelow(uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Inverse CDF of Laplace(0, scale) at centred uniform u in (-1/2, 1/2):
// -scale * sign(u) * ln(1 - 2|u|).
double LaplaceFromCentredUniform(double scale, double u);

// One Laplace(0, scale) draw. A scale of 0 returns 0 without consuming
// randomness (noiseless mode).
double SampleLaplace(double scale, RandomStream& rng);

// Per-level privacy shares sigma_0..sigma_L with sum equal to epsilon.
struct BudgetPlan {
  double epsilon = 0.0;
  int pruning_level = 0;  // L_star
  int depth = 0;          // L
  int sketch_depth = 1;   // j
  int k = 1;
  std::vector<double> sigmas;
  // Non-private oracle mode: every noise scale is zero.
  bool noiseless = false;
};

// Optimal allocation of epsilon across levels: sigma_l is proportional to
// sqrt(Gamma_{l-1}) for l <= L_star and to sqrt(j * k * gamma_{l-1}) above,
// with Gamma_{-1} = Gamma_0.
absl::StatusOr<BudgetPlan> AllocateBudget(double epsilon, int pruning_level,
                                          int depth, int sketch_depth, int k,
                                          const LevelGeometry& geometry);

enum class NoiseTarget {
  kTreeCounter,  // one draw per tree counter
  kSketchCell,   // one draw per sketch cell
};

struct LevelNoise {
  double scale = 0.0;  // Laplace scale; 0 means no noise
  NoiseTarget target = NoiseTarget::kTreeCounter;
};

// Laplace(1/sigma_l) per tree counter for l <= L_star, Laplace(j/sigma_l) per
// sketch cell above.
LevelNoise PerLevelNoise(const BudgetPlan& plan, int level);

}  // namespace privhp

#endif  // PRIVHP_NOISE_H_
