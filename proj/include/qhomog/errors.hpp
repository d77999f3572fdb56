// Copyright 2026 The qhomog Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace qhomog {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not line up (dims, wire indices, sequence lengths).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A precondition on a value was violated (out-of-range probability, bad angle, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A configuration object failed validation before any simulation ran.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical invariant broke on an output. This always indicates a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

// Least-squares system without a unique solution.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

}  // namespace qhomog
