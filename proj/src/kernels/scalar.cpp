// Copyright 2026 The alignaudit Authors.
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

#include "alignaudit/kernels.hpp"

namespace alignaudit::kernels {

DotNorms dot_norms_scalar(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  const size_t n4 = n - n % 4;
  double d[4] = {0, 0, 0, 0};
  double na[4] = {0, 0, 0, 0};
  double nb[4] = {0, 0, 0, 0};
  for (size_t i = 0; i < n4; i += 4) {
    for (size_t l = 0; l < 4; ++l) {
      d[l] += a[i + l] * b[i + l];
      na[l] += a[i + l] * a[i + l];
      nb[l] += b[i + l] * b[i + l];
    }
  }
  DotNorms r{(d[0] + d[1]) + (d[2] + d[3]), (na[0] + na[1]) + (na[2] + na[3]),
             (nb[0] + nb[1]) + (nb[2] + nb[3])};
  for (size_t i = n4; i < n; ++i) {
    r.dot += a[i] * b[i];
    r.a_sq += a[i] * a[i];
    r.b_sq += b[i] * b[i];
  }
  return r;
}

void add_signs_scalar(std::span<double> out, std::uint64_t bits, double weight) {
  for (size_t j = 0; j < out.size(); ++j) {
    out[j] += ((bits >> j) & 1u) ? weight : -weight;
  }
}

}  // namespace alignaudit::kernels
