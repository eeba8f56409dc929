// Copyright 2026 The posgsolve Authors
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

#ifndef POSGSOLVE_ERRORS_H_
#define POSGSOLVE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace posg {

// Base class for every domain error thrown by the library. The C API layer
// translates these into status codes plus a retrievable message.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A particle reweight left every particle with zero posterior weight.
class ParticleDepletionError : public Error {
 public:
  explicit ParticleDepletionError(const std::string& msg) : Error(msg) {}
};

// An exact Bayes update was asked to condition on an observation with zero
// probability under the predicted belief.
class ImpossibleObservationError : public Error {
 public:
  explicit ImpossibleObservationError(const std::string& msg) : Error(msg) {}
};

// An information-set mixture was requested for a key with no member nodes.
class EmptyMixtureError : public Error {
 public:
  explicit EmptyMixtureError(const std::string& msg) : Error(msg) {}
};

// A pure-policy or history enumeration would exceed its size guard.
class EnumerationTooLargeError : public Error {
 public:
  explicit EnumerationTooLargeError(const std::string& msg) : Error(msg) {}
};

// A closed-form bound was evaluated outside the regime it is stated for.
class StipulationViolatedError : public Error {
 public:
  explicit StipulationViolatedError(const std::string& msg) : Error(msg) {}
};

// A malformed or out-of-range configuration entry. `key` names the offender.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& key, const std::string& msg)
      : Error("config key '" + key + "': " + msg), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

// A caller violated an interface contract (e.g. stepped a terminal state).
class ContractViolationError : public Error {
 public:
  explicit ContractViolationError(const std::string& msg) : Error(msg) {}
};

}  // namespace posg

#endif  // POSGSOLVE_ERRORS_H_
