// Copyright 2026 The Haggle Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "haggle/tokenizer.h"

#include <cctype>
#include <string>

namespace haggle {
namespace {

bool IsDigit(char c) { return c >= '0' && c <= '9'; }
bool IsWordByte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalnum(u) || u >= 0x80;
}
bool IsWordStart(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isalpha(u) || u >= 0x80;
}

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Reads a number starting at `i` (which points at a digit or a "$" followed
// by a digit). Returns one past the last byte consumed.
std::size_t ScanNumber(std::string_view text, std::size_t i, Token& token) {
  const std::size_t n = text.size();
  if (text[i] == '$') {
    token.has_dollar = true;
    ++i;
  }
  std::string digits;
  while (i < n && IsDigit(text[i])) digits += text[i++];
  // Thousands separators: a comma followed by exactly three digits.
  while (i + 3 < n && text[i] == ',' && IsDigit(text[i + 1]) && IsDigit(text[i + 2]) &&
         IsDigit(text[i + 3]) && (i + 4 == n || !IsDigit(text[i + 4]))) {
    digits.append(text.substr(i + 1, 3));
    i += 4;
  }
  if (i + 1 < n && text[i] == '.' && IsDigit(text[i + 1])) {
    digits += '.';
    ++i;
    while (i < n && IsDigit(text[i])) digits += text[i++];
  }
  double value = std::stod(digits);
  if (i < n && (text[i] == 'k' || text[i] == 'K') && (i + 1 == n || !IsWordByte(text[i + 1]))) {
    value *= 1000.0;
    ++i;
  }
  if (i < n && text[i] == '$') {
    token.has_dollar = true;
    ++i;
  }
  token.value = value;
  return i;
}

}  // namespace

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    Token token;
    token.begin = i;
    std::size_t j;
    if (IsDigit(c) || (c == '$' && i + 1 < n && IsDigit(text[i + 1]))) {
      token.kind = TokenKind::kNumber;
      j = ScanNumber(text, i, token);
    } else if (IsWordStart(c)) {
      token.kind = TokenKind::kWord;
      j = i + 1;
      while (j < n) {
        if (IsWordByte(text[j])) {
          ++j;
        } else if ((text[j] == '\'' || text[j] == '-') && j + 1 < n && IsWordStart(text[j + 1])) {
          j += 2;
        } else {
          break;
        }
      }
    } else {
      token.kind = TokenKind::kPunctuation;
      j = i + 1;
    }
    token.end = j;
    token.surface = Lower(text.substr(i, j - i));
    tokens.push_back(std::move(token));
    i = j;
  }
  return tokens;
}

}  // namespace haggle
