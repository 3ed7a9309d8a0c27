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

#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace popeval::report {

/// Fixed 6-decimal rendering used for every score in reports and summary
/// lines: truncation toward zero, with values within 1e-9 of a 6-decimal
/// boundary snapping to it (so 6/7 prints "0.857142" and 3/5 prints
/// "0.600000").
std::string fixed6(double v);

std::string json_escape(std::string_view s);

/// Minimal JSON document model for evaluation reports. Object keys are kept
/// sorted and numbers render deterministically (scores via fixed6), so two
/// runs over the same inputs produce byte-identical documents.
class Value {
public:
    Value() : node_(nullptr) {}

    static Value null() { return Value(); }
    static Value boolean(bool b);
    static Value integer(long long n);
    /// Score-like real; rendered with fixed6.
    static Value fixed(double v);
    /// General real (config scalars like the intersection epsilon);
    /// rendered with shortest %g form.
    static Value number(double v);
    static Value text(std::string s);
    static Value array(std::vector<Value> items = {});

    /// Object access; creates the object/key as needed.
    Value& operator[](const std::string& key);

    void push_back(Value v);

    bool is_object() const;

    /// Serializes with 2-space indentation and a trailing newline.
    std::string dump() const;

private:
    struct Fixed {
        double v;
    };
    struct Number {
        double v;
    };
    using Array = std::vector<Value>;
    using Object = std::map<std::string, Value>;

    std::variant<std::nullptr_t, bool, long long, Fixed, Number, std::string, Array, Object> node_;

    void write(std::string& out, int depth) const;
};

/// Writes the rendered document; failures raise IoError naming the path.
void write_report(const Value& document, const std::filesystem::path& destination);

void write_text_file(const std::filesystem::path& path, std::string_view contents);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace popeval::report
