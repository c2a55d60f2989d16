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

#ifndef KTD_ERRORS_HPP
#define KTD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ktd {

/// Bad argument supplied by the caller (wrong dimension, out-of-range value).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input dimensions do not agree.
class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Operation is not defined for the given kernel family or metric.
class Unsupported : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numerical guard failed (non-PSD Gram, negative radicand, non-finite loss...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The real-symmetric and complex difference-kernel routes disagree.
class SpectralMismatch : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ktd

#endif  // KTD_ERRORS_HPP
