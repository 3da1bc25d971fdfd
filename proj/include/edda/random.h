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

#ifndef EDDA_RANDOM_H_
#define EDDA_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace edda {

// Mixes a base seed with a sequence of string and integer keys into a new
// 64-bit seed. The mapping is fixed across platforms and releases: outputs of
// the toolkit are reproducible only as long as this function does not change.
class SeedDeriver {
 public:
  explicit SeedDeriver(uint64_t base);

  SeedDeriver& Add(std::string_view key);
  SeedDeriver& Add(uint64_t key);

  uint64_t seed() const { return state_; }

 private:
  uint64_t state_;
};

// Seeded generator with portable sampling helpers. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so sampling is done here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform integer in [0, n). n must be positive.
  size_t UniformIndex(size_t n);

  // Uniform real in [0, 1).
  double UniformReal();

  // k distinct indices drawn uniformly from [0, n) in draw order.
  std::vector<size_t> SampleWithoutReplacement(size_t n, size_t k);

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[UniformIndex(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edda

#endif  // EDDA_RANDOM_H_
