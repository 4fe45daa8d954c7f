// Copyright 2026 The iset-lab Authors
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

#ifndef ISETLAB_PARAMS_H_
#define ISETLAB_PARAMS_H_

#include <cstdint>

namespace isetlab {

// Floor and ceiling that absorb floating-point noise around integers, so
// that e.g. 0.75 * log2(4096) rounds as the exact value 9 would.
long long floor_snap(double x);
long long ceil_snap(double x);

// log_b(x) with b = 1 / (1 - p), i.e. log(x) / -log(1 - p).
double log_base_b(double x, double p);

// Scale constants of the threshold log_b(np) and the derived constants
// used by the lower-bound machinery.
struct LogParams {
  std::uint64_t n = 0;
  double p = 0.0;
  double eps = 0.0;

  double b = 0.0;        // 1 / (1 - p)
  double L = 0.0;        // log_b(np), unrounded
  double ell_log = 0.0;  // log(np)
  double gamma = 0.0;    // 1 - eps / 2
  long long N = 0;       // ceil(gamma * L)
  double c = 0.0;        // eps^2 / 8
  double xi = 0.0;       // eps^2 / 64
  long long m = 0;       // ceil(16 / eps^2)

  double size_floor() const { return (1.0 + eps) * L; }
  double budget_cap() const { return c * L * L; }
};

// Requires 0 < p < 1, np > 1 and 0 < eps <= 1; throws DomainError otherwise.
LogParams log_params(std::uint64_t n, double p, double eps);

// The fixed constant behind logb_lower_bound().
inline constexpr double kLogbLowerBoundConstant = 1.0 / 9.0;

// Lower bound c0 * log(d) / p on log_b(np), valid on the band
// d/n <= p <= 1 - n^(-1/d). Throws DomainError outside the band.
double logb_lower_bound(std::uint64_t n, double p, double d);

}  // namespace isetlab

#endif  // ISETLAB_PARAMS_H_
