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

#ifndef DIP_DIP_HPP_
#define DIP_DIP_HPP_

#include "dip/audit.hpp"
#include "dip/baselines.hpp"
#include "dip/continualize.hpp"
#include "dip/csv.hpp"
#include "dip/distributions.hpp"
#include "dip/error.hpp"
#include "dip/harness.hpp"
#include "dip/metrics.hpp"
#include "dip/multivariate.hpp"
#include "dip/noise.hpp"
#include "dip/random.hpp"
#include "dip/table.hpp"
#include "dip/univariate.hpp"

#endif  // DIP_DIP_HPP_
