/*
 * Copyright 2026 The dynloc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DYNLOC_CORE_ERROR_HPP_
#define DYNLOC_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dynloc {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration or argument values (unknown method, bad delta, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Input that cannot be used at all, e.g. an empty session.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

// Scans handed to a stateful filter with non-increasing timestamps.
class OutOfOrderError : public Error {
 public:
  using Error::Error;
};

// Paired inputs that do not correspond, e.g. trajectories of different length.
class MismatchError : public Error {
 public:
  using Error::Error;
};

// Persisted data that cannot be decoded.
class FormatError : public Error {
 public:
  using Error::Error;
};

class VersionMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedFileError : public FormatError {
 public:
  using FormatError::FormatError;
};

class CountMismatchError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace dynloc

#endif  // DYNLOC_CORE_ERROR_HPP_
