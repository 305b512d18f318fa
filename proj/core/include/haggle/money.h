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

#ifndef HAGGLE_MONEY_H_
#define HAGGLE_MONEY_H_

#include <compare>
#include <cstdint>
#include <string>

namespace haggle {

// Non-negative dollar amount held as an integer number of cents.
class Money {
 public:
  constexpr Money() = default;

  static Money FromCents(std::int64_t cents);
  // Rounds half away from zero to the nearest cent. Rejects negative and
  // non-finite input.
  static Money FromDollars(double dollars);

  constexpr std::int64_t cents() const { return cents_; }
  double dollars() const { return static_cast<double>(cents_) / 100.0; }

  // "197.50"; always two fractional digits.
  std::string ToString() const;
  // "$197.50", or "$197" when the cents are zero.
  std::string ToPriceText() const;

  Money operator+(Money other) const;
  // Throws if the result would be negative.
  Money operator-(Money other) const;

  constexpr auto operator<=>(const Money&) const = default;

 private:
  explicit constexpr Money(std::int64_t cents) : cents_(cents) {}
  std::int64_t cents_ = 0;
};

// Arithmetic mean rounded half away from zero to the cent.
Money Midpoint(Money a, Money b);

}  // namespace haggle

#endif  // HAGGLE_MONEY_H_
