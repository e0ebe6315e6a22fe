// Copyright 2026 The qmedr Authors.
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
#pragma once

#include <stdexcept>
#include <string>

namespace qmedr {

/// Bad input: wrong shapes, out-of-range parameters, malformed files.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that cannot produce a trustworthy result (degenerate
/// eigenvalue cut, fixed-point overflow, phase wraparound).
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Fixed-point register too narrow for the values it must hold.
class OverflowError : public NumericalError {
  public:
    OverflowError(const std::string &what, int required_integer_bits)
        : NumericalError(what), required_integer_bits_(required_integer_bits) {}
    [[nodiscard]] int required_integer_bits() const noexcept {
        return required_integer_bits_;
    }

  private:
    int required_integer_bits_;
};

} // namespace qmedr
