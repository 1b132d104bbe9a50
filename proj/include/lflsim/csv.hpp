// Copyright 2026 the lflsim authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "lflsim/common.hpp"

namespace lflsim::csv {

std::vector<std::string_view> split(std::string_view line, char sep = ',');

// Iterates non-empty lines of a delimiter-separated table, checking the
// header against `header` and invoking fn(line_number, fields).
template <class Fn>
void for_each_row(const std::string& text, std::string_view header, Fn&& fn) {
  size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (!saw_header) {
      if (line != header)
        throw ParseError("line 1: expected header '" + std::string(header) +
                         "', got '" + std::string(line) + "'");
      saw_header = true;
      continue;
    }
    fn(line_no, split(line));
  }
  if (!saw_header) throw ParseError("empty table: missing header row");
}

double to_double(std::string_view s, int line_no, std::string_view field);
long to_long(std::string_view s, int line_no, std::string_view field);

// Fixed, locale-independent float formatting used by all output tables.
std::string fmt(double v);

}  // namespace lflsim::csv
