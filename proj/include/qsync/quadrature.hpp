// Copyright 2026 The qsync Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qsync/core_types.hpp"

namespace qsync {

/// n equally spaced nodes from start to stop inclusive. Node j is computed as
/// start + (stop - start) * j / (n - 1) so symmetric ranges hit 0 exactly.
inline std::vector<double> linspace(double start, double stop, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {start};
  std::vector<double> out(n);
  const double span = stop - start;
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = j + 1 == n ? stop : start + span * (static_cast<double>(j) / static_cast<double>(n - 1));
  }
  return out;
}

/// Composite Simpson rule on uniformly spaced samples; needs an odd count >= 3.
inline double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  if (n < 3 || n % 2 == 0) throw InvalidArgument("Simpson rule needs an odd number (>= 3) of samples");
  double odd = 0.0;
  double even = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) (i % 2 == 1 ? odd : even) += f[i];
  return h / 3.0 * (f.front() + f.back() + 4.0 * odd + 2.0 * even);
}

inline double trapezoid(std::span<const double> f, double h) {
  if (f.size() < 2) throw InvalidArgument("trapezoid rule needs at least 2 samples");
  double sum = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) sum += f[i];
  return h * sum;
}

}  // namespace qsync
