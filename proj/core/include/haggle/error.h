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

#ifndef HAGGLE_ERROR_H_
#define HAGGLE_ERROR_H_

#include <stdexcept>
#include <string>

namespace haggle {

// All recoverable engine failures surface as HaggleError. The message names
// the violated contract; callers that need a category inspect the subclass.
class HaggleError : public std::runtime_error {
 public:
  explicit HaggleError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a file or JSON payload does not match its schema.
class SchemaError : public HaggleError {
 public:
  explicit SchemaError(const std::string& what) : HaggleError(what) {}
};

}  // namespace haggle

#endif  // HAGGLE_ERROR_H_
