#pragma once

namespace slicebound {

struct Tolerances {
    double unit = 1e-9;
    double identity = 1e-8;
    double proj = 1e-9;
};

// c~_j at or above 1 - kUnitWeightGap counts as c~_j = 1.
inline constexpr double kUnitWeightGap = 1e-9;
inline constexpr double kGateSlack = 1e-12;

}  // namespace slicebound
