#include "mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace slicebound::detail {

namespace {
thread_local bool serial_mc = false;
}

SerialScope::SerialScope() : previous_(serial_mc) { serial_mc = true; }
SerialScope::~SerialScope() { serial_mc = previous_; }

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Vector random_direction(int k, std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    Vector g(k);
    do {
        for (int i = 0; i < k; ++i) g(i) = normal(rng);
    } while (g.norm() == 0.0);
    return g / g.norm();
}

SampleSums sample_ball(int k, double r, std::int64_t samples, std::uint64_t seed,
                       const std::function<double(const Vector&)>& f) {
    const std::int64_t blocks = (samples + kBlockSize - 1) / kBlockSize;
    std::vector<SampleSums> partial(static_cast<std::size_t>(blocks));
    std::atomic<std::int64_t> next{0};

    auto worker = [&] {
        for (std::int64_t b = next++; b < blocks; b = next++) {
            std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(b))));
            std::uniform_real_distribution<double> unif(0.0, 1.0);
            const std::int64_t n = std::min(kBlockSize, samples - b * kBlockSize);
            SampleSums s;
            for (std::int64_t i = 0; i < n; ++i) {
                Vector y = random_direction(k, rng) * (r * std::pow(unif(rng), 1.0 / k));
                double v = f(y);
                s.sum += v;
                s.sum_sq += v * v;
            }
            s.count = n;
            partial[static_cast<std::size_t>(b)] = s;
        }
    };
    const auto threads =
        serial_mc ? std::int64_t{1} : static_cast<std::int64_t>(std::max(1u, std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::int64_t t = 1; t < std::min(threads, blocks); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    SampleSums total;
    for (const auto& s : partial) {
        total.sum += s.sum;
        total.sum_sq += s.sum_sq;
        total.count += s.count;
    }
    return total;
}

}  // namespace slicebound::detail
