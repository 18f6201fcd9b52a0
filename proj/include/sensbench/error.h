/*
 * Copyright 2026 The Sensbench Authors.
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

#ifndef SENSBENCH_ERROR_H_
#define SENSBENCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace sensbench {

// Root of every error the engine raises. Callers that only need a message
// catch this; the subclasses let the CLI and the grid runner tell apart
// configuration mistakes, bad data, and failures of a single model.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A configured column or key does not exist.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Input data violates a panel invariant (spacing, missing values, ...).
class DataError : public Error {
 public:
  using Error::Error;
};

// No entity is long enough for one (lookback + horizon) window.
class EmptyWindowSetError : public DataError {
 public:
  using DataError::DataError;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

// A caller broke a precondition of a model or method (shape, NaN input, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

// The model produced a non-finite output while being evaluated.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Failure talking to an out-of-process model.
class AdapterError : public Error {
 public:
  using Error::Error;
};

// The adapter answered the handshake with a spec that does not match.
class HandshakeError : public AdapterError {
 public:
  using AdapterError::AdapterError;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Spearman correlation with a zero-variance ranking.
class UndefinedCorrelationError : public InputError {
 public:
  using InputError::InputError;
};

class ReportError : public Error {
 public:
  using Error::Error;
};

}  // namespace sensbench

#endif  // SENSBENCH_ERROR_H_
