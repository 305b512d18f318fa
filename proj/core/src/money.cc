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

#include "haggle/money.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "haggle/error.h"

namespace haggle {

Money Money::FromCents(std::int64_t cents) {
  if (cents < 0) throw HaggleError("negative money amount");
  return Money(cents);
}

Money Money::FromDollars(double dollars) {
  if (!std::isfinite(dollars)) throw HaggleError("non-finite money amount");
  // Nudge by a relative epsilon so that decimal halves such as 0.005 that are
  // stored slightly below the half still round away from zero.
  double scaled = dollars * 100.0;
  scaled += std::copysign(std::abs(scaled) * 1e-12, scaled);
  const double rounded = std::round(scaled);
  if (rounded < 0) throw HaggleError("negative money amount");
  return Money(static_cast<std::int64_t>(rounded));
}

std::string Money::ToString() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%lld.%02lld", static_cast<long long>(cents_ / 100),
                static_cast<long long>(cents_ % 100));
  return buf;
}

std::string Money::ToPriceText() const {
  if (cents_ % 100 == 0) return "$" + std::to_string(cents_ / 100);
  return "$" + ToString();
}

Money Money::operator+(Money other) const { return Money(cents_ + other.cents_); }

Money Money::operator-(Money other) const {
  if (other.cents_ > cents_) throw HaggleError("negative money amount");
  return Money(cents_ - other.cents_);
}

Money Midpoint(Money a, Money b) {
  const std::int64_t sum = a.cents() + b.cents();
  return Money::FromCents(sum / 2 + sum % 2);
}

}  // namespace haggle
