#pragma once

#include <cstdint>
#include <functional>

#include "slicebound/decomp.hpp"

namespace slicebound::detail {

struct SampleSums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::int64_t count = 0;
};

inline constexpr std::int64_t kBlockSize = 65536;

std::uint64_t splitmix64(std::uint64_t x);

/// Draws samples uniformly from the centered ball of radius r in R^k and sums f.
/// Blocks use independent generators, so the result does not depend on the thread count.
SampleSums sample_ball(int k, double r, std::int64_t samples, std::uint64_t seed,
                       const std::function<double(const Vector&)>& f);

/// While alive, sample_ball on this thread runs without spawning workers.
class SerialScope {
public:
    SerialScope();
    ~SerialScope();
    SerialScope(const SerialScope&) = delete;
    SerialScope& operator=(const SerialScope&) = delete;

private:
    bool previous_;
};

/// Uniform point on the unit sphere of R^k.
Vector random_direction(int k, std::mt19937_64& rng);

}  // namespace slicebound::detail
