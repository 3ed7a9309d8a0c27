// Copyright (c) 2026 The PopEval Toolkit Authors. All Rights Reserved.
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
#include <vector>

namespace popeval {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed annotation, detection, vocabulary or human-score input.
/// Carries the source name (file path or label) and 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::string source, int line, const std::string& message)
        : Error(source + ":" + std::to_string(line) + ": " + message),
          source_(std::move(source)),
          line_(line) {}

    const std::string& source() const noexcept { return source_; }
    int line() const noexcept { return line_; }

private:
    std::string source_;
    int line_;
};

/// Invalid evaluation configuration (out-of-range threshold, metric that
/// needs confidence values run without them, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// File system failure; message includes the offending path.
class IoError : public Error {
public:
    using Error::Error;
};

/// Mismatch between two per-image tables (e.g. human scores vs corpus).
class AlignmentError : public Error {
public:
    AlignmentError(const std::string& message, std::vector<std::string> missing_ids)
        : Error(message), missing_ids_(std::move(missing_ids)) {}

    const std::vector<std::string>& missing_ids() const noexcept { return missing_ids_; }

private:
    std::vector<std::string> missing_ids_;
};

/// Pearson correlation requested on a zero-variance sequence.
class CorrelationError : public Error {
public:
    using Error::Error;
};

}  // namespace popeval
