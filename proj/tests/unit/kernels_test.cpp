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

#include <bit>
#include <random>
#include <vector>

#include <gtest/gtest.h>

namespace alignaudit::kernels {
namespace {

struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { set_isa(saved); }
};

std::vector<Isa> supported() {
  std::vector<Isa> out;
  for (Isa i : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
    if (isa_supported(i)) out.push_back(i);
  }
  return out;
}

std::vector<double> random_vec(std::mt19937_64& rng, size_t n) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

TEST(DotNorms, ScalarMatchesNaiveSum) {
  std::mt19937_64 rng(1);
  for (size_t n = 0; n < 70; ++n) {
    auto a = random_vec(rng, n);
    auto b = random_vec(rng, n);
    long double dot = 0, aa = 0, bb = 0;
    for (size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(a[i]) * b[i];
      aa += static_cast<long double>(a[i]) * a[i];
      bb += static_cast<long double>(b[i]) * b[i];
    }
    const auto r = dot_norms_scalar(a, b);
    const double scale = static_cast<double>(aa + bb) + 1.0;
    EXPECT_NEAR(r.dot, static_cast<double>(dot), 1e-12 * scale);
    EXPECT_NEAR(r.a_sq, static_cast<double>(aa), 1e-12 * scale);
    EXPECT_NEAR(r.b_sq, static_cast<double>(bb), 1e-12 * scale);
  }
}

TEST(DotNorms, EveryIsaIsBitIdenticalToScalar) {
  IsaGuard guard;
  std::mt19937_64 rng(2);
  for (Isa isa : supported()) {
    set_isa(isa);
    EXPECT_EQ(active_isa(), isa);
    for (size_t n : {0, 1, 3, 4, 5, 7, 8, 63, 64, 65, 256, 384, 1001}) {
      auto a = random_vec(rng, n);
      auto b = random_vec(rng, n);
      const auto want = dot_norms_scalar(a, b);
      const auto got = dot_norms(a, b);
      EXPECT_TRUE(same_bits(got.dot, want.dot)) << to_string(isa) << " n=" << n;
      EXPECT_TRUE(same_bits(got.a_sq, want.a_sq)) << to_string(isa) << " n=" << n;
      EXPECT_TRUE(same_bits(got.b_sq, want.b_sq)) << to_string(isa) << " n=" << n;
    }
  }
}

TEST(AddSigns, ScalarFollowsBits) {
  std::vector<double> out(64, 0.5);
  const std::uint64_t bits = 0x8000000000000005ULL;
  add_signs_scalar(out, bits, 2.0);
  EXPECT_EQ(out[0], 2.5);
  EXPECT_EQ(out[1], -1.5);
  EXPECT_EQ(out[2], 2.5);
  EXPECT_EQ(out[3], -1.5);
  EXPECT_EQ(out[63], 2.5);
}

TEST(AddSigns, EveryIsaIsBitIdenticalToScalar) {
  IsaGuard guard;
  std::mt19937_64 rng(3);
  for (Isa isa : supported()) {
    set_isa(isa);
    for (size_t n = 0; n <= 64; ++n) {
      auto base = random_vec(rng, n);
      const std::uint64_t bits = rng();
      const double w = std::uniform_real_distribution<double>(-5, 5)(rng);
      auto want = base;
      add_signs_scalar(want, bits, w);
      auto got = base;
      add_signs(got, bits, w);
      for (size_t j = 0; j < n; ++j) EXPECT_TRUE(same_bits(got[j], want[j])) << to_string(isa) << " j=" << j;
    }
  }
}

TEST(Dispatch, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_supported(Isa::Scalar));
  EXPECT_TRUE(isa_supported(active_isa()));
  EXPECT_EQ(to_string(Isa::Avx2), "avx2");
}

}  // namespace
}  // namespace alignaudit::kernels
