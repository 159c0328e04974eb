/* Copyright 2026 The EdgeSlice Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef EDGESLICE_ERRORS_HPP_
#define EDGESLICE_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace edgeslice {

// Base for every error raised by the library. The CLI maps the concrete
// subclasses onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a structural invariant (cycle, several
// sources, unreachable layer, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The instance cannot be partitioned or placed under the physical limits.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of an analytic function.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sequences that must be parallel have different lengths.
class LengthMismatchError : public Error {
 public:
  using Error::Error;
};

// Exhaustive search refused because the instance exceeds the guard.
class InstanceTooLargeError : public Error {
 public:
  using Error::Error;
};

// No conforming k-path at any threshold.
class NoPathError : public Error {
 public:
  using Error::Error;
};

// K-path matching could not place one run of a transfer-size class.
class MatchingError : public Error {
 public:
  MatchingError(int transfer_class, std::size_t run_start,
                std::size_t run_length, const std::string& what)
      : Error(what),
        transfer_class_(transfer_class),
        run_start_(run_start),
        run_length_(run_length) {}

  int transfer_class() const { return transfer_class_; }
  std::size_t run_start() const { return run_start_; }
  std::size_t run_length() const { return run_length_; }

 private:
  int transfer_class_;
  std::size_t run_start_;
  std::size_t run_length_;
};

}  // namespace edgeslice

#endif  // EDGESLICE_ERRORS_HPP_
