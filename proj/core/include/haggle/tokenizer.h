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

#ifndef HAGGLE_TOKENIZER_H_
#define HAGGLE_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace haggle {

enum class TokenKind { kWord, kNumber, kPunctuation };

struct Token {
  std::string surface;  // lowercased
  std::size_t begin = 0;
  std::size_t end = 0;  // one past the last byte in the source text
  TokenKind kind = TokenKind::kWord;
  // Numbers only: value in dollars (commas stripped, "k" applied) and whether
  // a "$" led or trailed the digits.
  double value = 0;
  bool has_dollar = false;

  std::string_view Original(std::string_view text) const {
    return text.substr(begin, end - begin);
  }
};

// Splits text into lowercased word, number and punctuation tokens. Numbers
// take an optional leading or trailing "$", thousands commas, a decimal part
// and a "k" suffix (x1000). Bytes >= 0x80 are treated as word characters.
std::vector<Token> Tokenize(std::string_view text);

}  // namespace haggle

#endif  // HAGGLE_TOKENIZER_H_
