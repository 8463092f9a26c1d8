/*
 * Copyright 2026 The kgrank Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KGRANK_ERRORS_HPP_
#define KGRANK_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgrank {

// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments violate a documented precondition (NaN score, bad index, ...).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A scorer returned the wrong number of scores or a non-finite score.
class ScorerContractError : public Error {
 public:
  using Error::Error;
};

// The requested statistic is undefined for the given data, e.g. AMRI over
// candidate sets that all have a single element.
class DegenerateEvaluationError : public Error {
 public:
  using Error::Error;
};

// Experiment configuration failed validation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. `line()` is 1-based; 0 means "whole file".
class ParseError : public Error {
 public:
  ParseError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line > 0 ? ":" + std::to_string(line) : std::string()) +
              ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace kgrank

#endif  // KGRANK_ERRORS_HPP_
