/*
 * lvseg : left-ventricle segmentation and volume estimation toolkit
 *
 * Copyright 2026 lvseg contributors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef LVSEG_UNET_RNG_HPP
#define LVSEG_UNET_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace lvseg {

/// Seeded RNG that avoids the implementation-defined standard
/// distributions, so every draw is reproducible across toolchains.
class rng {
public:
    explicit rng(uint64_t seed) : gen_(seed) {}

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [0, n)
    uint64_t integer(uint64_t n) {
        return static_cast<uint64_t>((static_cast<__uint128_t>(gen_()) * n) >> 64);
    }

    bool coin(double p = 0.5) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[integer(i)]);
    }

    uint64_t fork() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

} // namespace lvseg

#endif
