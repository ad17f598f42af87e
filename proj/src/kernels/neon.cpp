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

// AArch64 only. Two float64x2 accumulators stand in for the four scalar
// lanes; vmulq + vaddq, never vfmaq, to stay bit-identical with scalar.

#include <arm_neon.h>

#include "alignaudit/kernels.hpp"

namespace alignaudit::kernels {

DotNorms dot_norms_neon(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  const size_t n4 = n - n % 4;
  float64x2_t d01 = vdupq_n_f64(0.0), d23 = vdupq_n_f64(0.0);
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  float64x2_t b01 = vdupq_n_f64(0.0), b23 = vdupq_n_f64(0.0);
  for (size_t i = 0; i < n4; i += 4) {
    float64x2_t x0 = vld1q_f64(a.data() + i), x1 = vld1q_f64(a.data() + i + 2);
    float64x2_t y0 = vld1q_f64(b.data() + i), y1 = vld1q_f64(b.data() + i + 2);
    d01 = vaddq_f64(d01, vmulq_f64(x0, y0));
    d23 = vaddq_f64(d23, vmulq_f64(x1, y1));
    a01 = vaddq_f64(a01, vmulq_f64(x0, x0));
    a23 = vaddq_f64(a23, vmulq_f64(x1, x1));
    b01 = vaddq_f64(b01, vmulq_f64(y0, y0));
    b23 = vaddq_f64(b23, vmulq_f64(y1, y1));
  }
  auto reduce = [](float64x2_t lo, float64x2_t hi) {
    return (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) + (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  };
  DotNorms r{reduce(d01, d23), reduce(a01, a23), reduce(b01, b23)};
  for (size_t i = n4; i < n; ++i) {
    r.dot += a[i] * b[i];
    r.a_sq += a[i] * a[i];
    r.b_sq += b[i] * b[i];
  }
  return r;
}

void add_signs_neon(std::span<double> out, std::uint64_t bits, double weight) {
  const size_t n = out.size();
  const size_t n2 = n - n % 2;
  for (size_t j = 0; j < n2; j += 2) {
    const double s0 = ((bits >> j) & 1u) ? weight : -weight;
    const double s1 = ((bits >> (j + 1)) & 1u) ? weight : -weight;
    const double pair[2] = {s0, s1};
    vst1q_f64(out.data() + j, vaddq_f64(vld1q_f64(out.data() + j), vld1q_f64(pair)));
  }
  for (size_t j = n2; j < n; ++j) out[j] += ((bits >> j) & 1u) ? weight : -weight;
}

}  // namespace alignaudit::kernels
