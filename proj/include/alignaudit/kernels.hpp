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

// Vector kernels behind embedding and similarity code.
//
// Every kernel has a scalar reference and SIMD variants (AVX2 on x86-64,
// NEON on AArch64). The variant is picked once at startup from CPU features;
// ALIGNAUDIT_ISA=scalar|avx2|neon overrides it.
//
// The scalar reference keeps four interleaved partial sums and reduces them
// as (s0 + s1) + (s2 + s3), then adds the tail in order. SIMD variants use
// the same lane layout and no fused multiply-add, so all variants return
// bit-identical results. Rankings therefore never depend on the host CPU.

#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace alignaudit::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa);

struct DotNorms {
  double dot = 0.0;
  double a_sq = 0.0;  // sum a[i]^2
  double b_sq = 0.0;  // sum b[i]^2
};

/// a and b must have equal length.
DotNorms dot_norms_scalar(std::span<const double> a, std::span<const double> b);
/// out[j] += (bit j of bits) ? weight : -weight, for j < out.size() <= 64.
void add_signs_scalar(std::span<double> out, std::uint64_t bits, double weight);

#if defined(__x86_64__) || defined(_M_X64)
DotNorms dot_norms_avx2(std::span<const double> a, std::span<const double> b);
void add_signs_avx2(std::span<double> out, std::uint64_t bits, double weight);
#endif

#if defined(__aarch64__)
DotNorms dot_norms_neon(std::span<const double> a, std::span<const double> b);
void add_signs_neon(std::span<double> out, std::uint64_t bits, double weight);
#endif

bool isa_supported(Isa isa);
Isa active_isa();
/// Pins the dispatch target; throws std::invalid_argument if unsupported.
void set_isa(Isa isa);

DotNorms dot_norms(std::span<const double> a, std::span<const double> b);
void add_signs(std::span<double> out, std::uint64_t bits, double weight);

}  // namespace alignaudit::kernels
