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

#ifndef ISETLAB_ERRORS_H_
#define ISETLAB_ERRORS_H_

#include <stdexcept>
#include <string>

namespace isetlab {

// Bad arguments: out-of-range vertices, malformed pairs, bad config fields.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numeric argument outside the domain of a formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// The online round structure was not respected by an algorithm.
class ProtocolViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A check that must hold by construction failed. Always a bug.
class InvariantBreach : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Look-ahead parameters cannot be realized for the given (n, p, eps).
class InfeasibleParams : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An exhaustive routine refused an input above its configured size limit.
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace isetlab

#endif  // ISETLAB_ERRORS_H_
