/*
 * Copyright 2026 The Procurisk Authors.
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

#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "procurisk/error.hpp"

namespace procurisk::csv {

// Picks ',' or ';' by counting unquoted occurrences in the header line.
// Ties go to ','.
inline char detect_delimiter(std::string_view header_line) {
  std::size_t commas = 0;
  std::size_t semicolons = 0;
  bool quoted = false;
  for (char ch : header_line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (!quoted) {
      if (ch == ',') ++commas;
      if (ch == ';') ++semicolons;
    }
  }
  return semicolons > commas ? ';' : ',';
}

struct Record {
  std::vector<std::string> fields;
  // 1-based physical line on which the record starts.
  std::size_t line = 0;
};

// RFC 4180 style reader: quoted fields, doubled quotes, embedded delimiters
// and newlines, CRLF endings. Blank lines are skipped. Lines beginning with
// `comment` (when non-zero) are skipped too.
class Reader {
 public:
  Reader(std::istream& in, char delimiter, char comment = '\0')
      : in_(in), delimiter_(delimiter), comment_(comment) {}

  // Returns false at end of input.
  bool next(Record& record) {
    std::string& buf = line_;
    while (true) {
      if (!std::getline(in_, buf)) return false;
      ++physical_line_;
      if (physical_line_ == 1 && buf.starts_with("\xEF\xBB\xBF")) {
        buf.erase(0, 3);
      }
      if (!buf.empty() && buf.back() == '\r') buf.pop_back();
      if (buf.empty()) continue;
      if (comment_ != '\0' && buf.front() == comment_) continue;
      break;
    }
    record.line = physical_line_;
    split(record);
    return true;
  }

  std::size_t physical_line() const { return physical_line_; }

 private:
  void split(Record& record) {
    std::size_t count = 0;
    auto field = [&]() -> std::string& {
      if (record.fields.size() <= count) record.fields.emplace_back();
      std::string& f = record.fields[count++];
      f.clear();
      return f;
    };

    std::string* current = &field();
    bool quoted = false;
    std::size_t i = 0;
    while (true) {
      if (i == line_.size()) {
        if (!quoted) break;
        // Quoted field continues on the next physical line.
        std::string more;
        if (!std::getline(in_, more)) {
          throw DataError("unterminated quoted field starting on line " +
                          std::to_string(record.line));
        }
        ++physical_line_;
        if (!more.empty() && more.back() == '\r') more.pop_back();
        line_.push_back('\n');
        const std::size_t resume = line_.size();
        line_ += more;
        current->push_back('\n');
        i = resume;
        continue;
      }
      const char ch = line_[i];
      if (quoted) {
        if (ch == '"') {
          if (i + 1 < line_.size() && line_[i + 1] == '"') {
            current->push_back('"');
            ++i;
          } else {
            quoted = false;
          }
        } else {
          current->push_back(ch);
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == delimiter_) {
        current = &field();
      } else {
        current->push_back(ch);
      }
      ++i;
    }
    record.fields.resize(count);
  }

  std::istream& in_;
  char delimiter_;
  char comment_;
  std::string line_;
  std::size_t physical_line_ = 0;
};

inline void write_field(std::ostream& out, std::string_view value,
                        char delimiter) {
  if (value.find_first_of(std::string{delimiter, '"', '\n', '\r'}) ==
      std::string_view::npos) {
    out << value;
    return;
  }
  out << '"';
  for (char ch : value) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}

template <typename Range>
void write_row(std::ostream& out, const Range& fields, char delimiter = ',') {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << delimiter;
    first = false;
    write_field(out, std::string_view(f), delimiter);
  }
  out << '\n';
}

inline void write_row(std::ostream& out,
                      std::initializer_list<std::string_view> fields,
                      char delimiter = ',') {
  write_row<std::initializer_list<std::string_view>>(out, fields, delimiter);
}

}  // namespace procurisk::csv
