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

// Built with -mavx2 (no -mfma); only called after a runtime CPU check.

#include <immintrin.h>

#include "alignaudit/kernels.hpp"

namespace alignaudit::kernels {
namespace {

inline double reduce4(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

// Sign patterns for four consecutive bits, lane 0 = lowest bit.
struct SignTable {
  alignas(32) double v[16][4];
  constexpr SignTable() : v{} {
    for (int m = 0; m < 16; ++m)
      for (int l = 0; l < 4; ++l) v[m][l] = ((m >> l) & 1) ? 1.0 : -1.0;
  }
};
constexpr SignTable kSigns{};

}  // namespace

DotNorms dot_norms_avx2(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  const size_t n4 = n - n % 4;
  __m256d d = _mm256_setzero_pd();
  __m256d na = _mm256_setzero_pd();
  __m256d nb = _mm256_setzero_pd();
  for (size_t i = 0; i < n4; i += 4) {
    __m256d va = _mm256_loadu_pd(a.data() + i);
    __m256d vb = _mm256_loadu_pd(b.data() + i);
    d = _mm256_add_pd(d, _mm256_mul_pd(va, vb));
    na = _mm256_add_pd(na, _mm256_mul_pd(va, va));
    nb = _mm256_add_pd(nb, _mm256_mul_pd(vb, vb));
  }
  DotNorms r{reduce4(d), reduce4(na), reduce4(nb)};
  for (size_t i = n4; i < n; ++i) {
    r.dot += a[i] * b[i];
    r.a_sq += a[i] * a[i];
    r.b_sq += b[i] * b[i];
  }
  return r;
}

void add_signs_avx2(std::span<double> out, std::uint64_t bits, double weight) {
  const size_t n = out.size();
  const size_t n4 = n - n % 4;
  const __m256d w = _mm256_set1_pd(weight);
  for (size_t j = 0; j < n4; j += 4) {
    const __m256d s = _mm256_load_pd(kSigns.v[(bits >> j) & 0xF]);
    __m256d o = _mm256_loadu_pd(out.data() + j);
    _mm256_storeu_pd(out.data() + j, _mm256_add_pd(o, _mm256_mul_pd(s, w)));
  }
  for (size_t j = n4; j < n; ++j) out[j] += ((bits >> j) & 1u) ? weight : -weight;
}

}  // namespace alignaudit::kernels
