// Copyright 2026 The dlmem Authors
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

#ifndef DLMEM_ERRORS_HPP
#define DLMEM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dlmem {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violates a type invariant. `field()` names the offending field.
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Base for failures that happen while computing, not while configuring.
class SimulationError : public Error {
 public:
  using Error::Error;
};

/// A closed-form expression hit a pole or an undefined quantity.
class SingularityError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class DivergenceError : public SimulationError {
 public:
  DivergenceError(std::size_t z_index, std::size_t t_index, const std::string& what)
      : SimulationError("integration diverged at (z index " + std::to_string(z_index) +
                        ", t index " + std::to_string(t_index) + "): " + what),
        z_index_(z_index),
        t_index_(t_index) {}
  std::size_t z_index() const noexcept { return z_index_; }
  std::size_t t_index() const noexcept { return t_index_; }

 private:
  std::size_t z_index_;
  std::size_t t_index_;
};

/// The pulse was still leaving the medium when the time window closed.
class TruncationError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

/// A figure of merit is undefined, e.g. a window without energy.
class UndefinedMetricError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dlmem

#endif  // DLMEM_ERRORS_HPP
