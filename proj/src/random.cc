//
// Copyright 2026 The EDDA Toolkit Authors
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
//

#include "edda/random.h"

#include <numeric>

namespace edda {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

uint64_t Fnv1a(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

SeedDeriver::SeedDeriver(uint64_t base) : state_(SplitMix64(base)) {}

SeedDeriver& SeedDeriver::Add(std::string_view key) {
  // Length is folded in so that ("ab", "c") and ("a", "bc") differ.
  state_ = SplitMix64(state_ ^ Fnv1a(key));
  state_ = SplitMix64(state_ ^ key.size());
  return *this;
}

SeedDeriver& SeedDeriver::Add(uint64_t key) {
  state_ = SplitMix64(state_ ^ SplitMix64(key + 0x632be59bd9b4e019ULL));
  return *this;
}

size_t Rng::UniformIndex(size_t n) {
  const uint64_t range = static_cast<uint64_t>(n);
  // Rejection sampling over the largest multiple of range.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<size_t>(x % range);
}

double Rng::UniformReal() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<size_t> Rng::SampleWithoutReplacement(size_t n, size_t k) {
  if (k > n) k = n;
  std::vector<size_t> pool(n);
  std::iota(pool.begin(), pool.end(), size_t{0});
  for (size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + UniformIndex(n - i)]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace edda
