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

#include "popeval/text.hpp"

#include <algorithm>

#include "popeval/errors.hpp"

namespace popeval {

namespace {

bool is_ascii_space(char32_t c) {
    return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == U'\f' || c == U'\v';
}

bool is_ascii_alnum(char32_t c) {
    return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

// Returns the decoded codepoint and advances i, or throws.
char32_t decode_one(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    const unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int extra;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        extra = 1;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        extra = 2;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        extra = 3;
        cp = b0 & 0x07;
    } else {
        throw Error("invalid UTF-8 lead byte");
    }
    if (i + static_cast<std::size_t>(extra) >= s.size()) throw Error("truncated UTF-8 sequence");
    for (int k = 1; k <= extra; ++k) {
        const unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) throw Error("invalid UTF-8 continuation byte");
        cp = (cp << 6) | (bk & 0x3F);
    }
    // Overlong encodings and surrogates are malformed.
    static constexpr char32_t kMin[4] = {0, 0x80, 0x800, 0x10000};
    if (cp < kMin[extra]) throw Error("overlong UTF-8 sequence");
    if (cp >= 0xD800 && cp <= 0xDFFF) throw Error("UTF-8 encoded surrogate");
    if (cp > 0x10FFFF) throw Error("UTF-8 codepoint out of range");
    i += static_cast<std::size_t>(extra) + 1;
    return cp;
}

}  // namespace

bool utf8_valid(std::string_view s) {
    std::size_t i = 0;
    try {
        while (i < s.size()) decode_one(s, i);
    } catch (const Error&) {
        return false;
    }
    return true;
}

std::u32string utf8_decode(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) out.push_back(decode_one(s, i));
    return out;
}

std::string utf8_encode(std::u32string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char32_t cp : s) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

std::u32string normalize_codepoints(std::u32string text, const NormalizeConfig& cfg) {
    if (cfg.case_fold) {
        for (char32_t& c : text) {
            if (c >= U'A' && c <= U'Z') c += U'a' - U'A';
        }
    }
    if (cfg.strip_surrounding_whitespace) {
        std::size_t b = 0;
        std::size_t e = text.size();
        while (b < e && is_ascii_space(text[b])) ++b;
        while (e > b && is_ascii_space(text[e - 1])) --e;
        text = text.substr(b, e - b);
    }
    if (cfg.alphanumeric_only) {
        std::u32string kept;
        kept.reserve(text.size());
        std::copy_if(text.begin(), text.end(), std::back_inserter(kept), is_ascii_alnum);
        text = std::move(kept);
    }
    return text;
}

std::string normalize_transcript(std::string_view text, const NormalizeConfig& cfg) {
    return utf8_encode(normalize_codepoints(utf8_decode(text), cfg));
}

}  // namespace popeval
