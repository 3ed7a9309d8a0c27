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

#include "popeval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "popeval/errors.hpp"

namespace popeval::report {

std::string fixed6(double v) {
    const bool negative = std::signbit(v) && v != 0.0;
    const double magnitude = std::abs(v);
    // Snap values a hair below a 6-decimal boundary before truncating.
    const double scaled = std::floor(magnitude * 1e6 + 1e-3);
    const long long whole = static_cast<long long>(scaled / 1e6);
    const long long frac = static_cast<long long>(scaled - static_cast<double>(whole) * 1e6);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", negative ? "-" : "", whole, frac);
    return buf;
}

std::string json_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\f': out += "\\f"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(c);
                }
        }
    }
    return out;
}

Value Value::boolean(bool b) {
    Value v;
    v.node_ = b;
    return v;
}

Value Value::integer(long long n) {
    Value v;
    v.node_ = n;
    return v;
}

Value Value::fixed(double d) {
    Value v;
    v.node_ = Fixed{d};
    return v;
}

Value Value::number(double d) {
    Value v;
    v.node_ = Number{d};
    return v;
}

Value Value::text(std::string s) {
    Value v;
    v.node_ = std::move(s);
    return v;
}

Value Value::array(std::vector<Value> items) {
    Value v;
    v.node_ = std::move(items);
    return v;
}

Value& Value::operator[](const std::string& key) {
    if (!std::holds_alternative<Object>(node_)) node_ = Object{};
    return std::get<Object>(node_)[key];
}

void Value::push_back(Value v) {
    if (!std::holds_alternative<Array>(node_)) node_ = Array{};
    std::get<Array>(node_).push_back(std::move(v));
}

bool Value::is_object() const { return std::holds_alternative<Object>(node_); }

void Value::write(std::string& out, int depth) const {
    const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
    const std::string inner_pad(static_cast<std::size_t>(depth + 1) * 2, ' ');
    if (std::holds_alternative<std::nullptr_t>(node_)) {
        out += "null";
    } else if (const bool* b = std::get_if<bool>(&node_)) {
        out += *b ? "true" : "false";
    } else if (const long long* n = std::get_if<long long>(&node_)) {
        out += std::to_string(*n);
    } else if (const Fixed* f = std::get_if<Fixed>(&node_)) {
        out += fixed6(f->v);
    } else if (const Number* g = std::get_if<Number>(&node_)) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.12g", g->v);
        out += buf;
    } else if (const std::string* s = std::get_if<std::string>(&node_)) {
        out += '"';
        out += json_escape(*s);
        out += '"';
    } else if (const Array* arr = std::get_if<Array>(&node_)) {
        if (arr->empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < arr->size(); ++i) {
            out += inner_pad;
            (*arr)[i].write(out, depth + 1);
            if (i + 1 < arr->size()) out += ',';
            out += '\n';
        }
        out += pad;
        out += ']';
    } else {
        const Object& obj = std::get<Object>(node_);
        if (obj.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        std::size_t i = 0;
        for (const auto& [key, value] : obj) {
            out += inner_pad;
            out += '"';
            out += json_escape(key);
            out += "\": ";
            value.write(out, depth + 1);
            if (++i < obj.size()) out += ',';
            out += '\n';
        }
        out += pad;
        out += '}';
    }
}

std::string Value::dump() const {
    std::string out;
    write(out, 0);
    out += '\n';
    return out;
}

void write_report(const Value& document, const std::filesystem::path& destination) {
    write_text_file(destination, document.dump());
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed reading '" + path.string() + "'");
    return buffer.str();
}

}  // namespace popeval::report
