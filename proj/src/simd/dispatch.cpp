// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cstdlib>
#include <cstring>
#include <string>

#include "irsec/errors.hpp"
#include "irsec/simd/kernels.hpp"

namespace irsec::simd {
namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(IRSEC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(IRSEC_HAVE_NEON)
      return true;  // mandatory on aarch64
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& select() {
  if (const char* env = std::getenv("IRS_EC_SIMD"); env != nullptr && *env != '\0') {
    const std::string want(env);
    for (const Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa)) {
        if (const KernelTable* t = kernels_for(isa)) return *t;
        return scalar_kernels();
      }
    }
    throw ConfigError("IRS_EC_SIMD: unknown variant '" + want + "'");
  }
  const auto isas = available_isas();
  return *kernels_for(isas.back());
}

}  // namespace

const KernelTable* kernels_for(Isa isa) {
  if (!cpu_has(isa)) return nullptr;
  switch (isa) {
    case Isa::scalar:
      return &scalar_kernels();
    case Isa::avx2:
#if defined(IRSEC_HAVE_AVX2)
      return &detail::avx2_kernels();
#else
      return nullptr;
#endif
    case Isa::neon:
#if defined(IRSEC_HAVE_NEON)
      return &detail::neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (const Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
    if (cpu_has(isa)) out.push_back(isa);
  }
  return out;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "?";
}

}  // namespace irsec::simd
