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

#include "isetlab/params.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "isetlab/errors.h"

namespace isetlab {
namespace {

constexpr double kSnapTolerance = 1e-9;

// Relative, but never wide enough to swallow a genuine fraction.
double snap_slack(double x) { return std::min(1e-3, kSnapTolerance * std::max(1.0, std::abs(x))); }

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(17);
  out << x;
  return out.str();
}

}  // namespace

// Values within tolerance of an integer snap to it; others round normally.
long long floor_snap(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= snap_slack(x)) return static_cast<long long>(nearest);
  return static_cast<long long>(std::floor(x));
}

long long ceil_snap(double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= snap_slack(x)) return static_cast<long long>(nearest);
  return static_cast<long long>(std::ceil(x));
}

double log_base_b(double x, double p) {
  const long double num = std::log(static_cast<long double>(x));
  const long double den = -std::log1p(-static_cast<long double>(p));
  return static_cast<double>(num / den);
}

LogParams log_params(std::uint64_t n, double p, double eps) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("log_params: p must lie in (0, 1), got " + fmt(p));
  }
  const double np = static_cast<double>(n) * p;
  if (!(np > 1.0)) {
    throw DomainError("log_params: need n * p > 1, got " + fmt(np));
  }
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw DomainError("log_params: eps must lie in (0, 1], got " + fmt(eps));
  }
  LogParams out;
  out.n = n;
  out.p = p;
  out.eps = eps;
  out.b = 1.0 / (1.0 - p);
  out.ell_log = static_cast<double>(std::log(static_cast<long double>(np)));
  out.L = log_base_b(np, p);
  out.gamma = 1.0 - eps / 2.0;
  out.N = ceil_snap(out.gamma * out.L);
  out.c = eps * eps / 8.0;
  out.xi = eps * eps / 64.0;
  out.m = ceil_snap(16.0 / (eps * eps));
  return out;
}

double logb_lower_bound(std::uint64_t n, double p, double d) {
  if (!(d > 1.0)) throw DomainError("logb_lower_bound: need d > 1");
  const double dn = static_cast<double>(n);
  const double lower = d / dn;
  const double upper = -std::expm1(-std::log(dn) / d);  // 1 - n^(-1/d)
  if (!(p >= lower)) {
    throw DomainError("logb_lower_bound: violates d/n <= p (d/n = " +
                      fmt(lower) + ", p = " + fmt(p) + ")");
  }
  if (!(p <= upper)) {
    throw DomainError("logb_lower_bound: violates p <= 1 - n^(-1/d) (bound = " +
                      fmt(upper) + ", p = " + fmt(p) + ")");
  }
  return kLogbLowerBoundConstant * std::log(d) / p;
}

}  // namespace isetlab
