// Copyright 2026 The DIP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef DIP_ERROR_HPP_
#define DIP_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace dip {

/// Raised when input data cannot be processed: malformed CSV, values outside
/// a declared support, schema mismatches. Precondition violations on API
/// arguments use std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dip

#endif  // DIP_ERROR_HPP_
