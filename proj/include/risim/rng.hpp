// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "risim/common.hpp"

namespace risim {

// Counter-based seed splitting: substreams are derived by mixing the parent
// seed with an index, so per-trial streams are independent of execution order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

    RandomStream substream(std::uint64_t index) const {
        return RandomStream(splitmix64(seed_ ^ splitmix64(index + 1)));
    }

    double uniform() { return unif_(gen_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * unif_(gen_); }
    double normal() { return norm_(gen_); }

    // CN(0,1)
    cplx cnormal() {
        const double re = norm_(gen_);
        const double im = norm_(gen_);
        return cplx(re, im) / std::sqrt(2.0);
    }

    CVec cnormal_vec(Eigen::Index n) {
        CVec v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cnormal();
        return v;
    }

    CMat cnormal_mat(Eigen::Index rows, Eigen::Index cols) {
        CMat m(rows, cols);
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = cnormal();
        return m;
    }

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> norm_{0.0, 1.0};
};

} // namespace risim
