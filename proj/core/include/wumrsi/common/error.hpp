/*
 * Copyright 2026 The wumrsi Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wumrsi {

/// Root of all exceptions thrown by the library.
class Error : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (shape, range, finiteness).
class InvalidArgument : public Error
{
 public:
  using Error::Error;
};

/// File-system or format failure; the message carries the offending path.
class IoError : public Error
{
 public:
  using Error::Error;
};

/// A numerical routine failed (SVD breakdown, divergence, non-finite result).
class NumericalError : public Error
{
 public:
  using Error::Error;
};

/// Raised when a monotone search cannot reach its target; reports what is reachable.
class TargetUnreachable : public Error
{
 public:
  TargetUnreachable(std::string what, double achievable_low, double achievable_high)
      : Error(std::move(what)), low_(achievable_low), high_(achievable_high)
  {
  }

  [[nodiscard]] double achievable_low() const noexcept { return low_; }
  [[nodiscard]] double achievable_high() const noexcept { return high_; }

 private:
  double low_;
  double high_;
};

/// Training-pair normalization energy vanished; callers resample.
class DegenerateEnergy : public Error
{
 public:
  using Error::Error;
};

/// Wraps a failure inside a multi-stage pipeline with the stage name.
class StageError : public Error
{
 public:
  StageError(std::string stage, const std::string &message)
      : Error(stage + ": " + message), stage_(std::move(stage))
  {
  }

  [[nodiscard]] const std::string &stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace wumrsi
