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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "alignaudit/kernels.hpp"

namespace alignaudit::kernels {
namespace {

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64)
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2")) return Isa::Avx2;
#elif defined(__aarch64__)
  return Isa::Neon;
#endif
  return Isa::Scalar;
}

Isa initial() {
  if (const char* env = std::getenv("ALIGNAUDIT_ISA")) {
    std::string v(env);
    Isa want = v == "avx2" ? Isa::Avx2 : v == "neon" ? Isa::Neon : Isa::Scalar;
    if (isa_supported(want)) return want;
  }
  return detect();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial()};
  return isa;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "?";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(__aarch64__)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("ISA not supported: " + std::string(to_string(isa)));
  current().store(isa, std::memory_order_relaxed);
}

DotNorms dot_norms(std::span<const double> a, std::span<const double> b) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: return dot_norms_avx2(a, b);
#endif
#if defined(__aarch64__)
    case Isa::Neon: return dot_norms_neon(a, b);
#endif
    default: return dot_norms_scalar(a, b);
  }
}

void add_signs(std::span<double> out, std::uint64_t bits, double weight) {
  switch (active_isa()) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::Avx2: add_signs_avx2(out, bits, weight); return;
#endif
#if defined(__aarch64__)
    case Isa::Neon: add_signs_neon(out, bits, weight); return;
#endif
    default: add_signs_scalar(out, bits, weight); return;
  }
}

}  // namespace alignaudit::kernels
