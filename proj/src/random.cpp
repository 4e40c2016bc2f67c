#include "gbe/random.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gbe::randsrc {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::atomic<std::uint64_t> g_underflow_clamps{0};

} // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
    key_ = mix64(mix64(seed + kGolden) ^ mix64(stream_index * 0xD1B54A32D192ED03ULL + kGolden));
}

RandomStream RandomStream::substream(std::uint64_t tag) const {
    RandomStream s(seed_, stream_index_);
    s.key_ = mix64(key_ ^ mix64(tag * 0x8CB92BA72F3D8DD7ULL + kGolden));
    return s;
}

std::uint64_t RandomStream::next_u64() {
    counter_ += 1;
    return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform01() {
    // 53 random bits, offset by half an ulp so the value is strictly inside (0,1).
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double normal(RandomStream& stream) {
    for (;;) {
        double u = 2.0 * stream.uniform01() - 1.0;
        double v = 2.0 * stream.uniform01() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            return u * std::sqrt(-2.0 * std::log(s) / s);
        }
    }
}

namespace {

// Marsaglia-Tsang for shape >= 1.
double gamma_ge1(double shape, RandomStream& stream) {
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal(stream);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = stream.uniform01();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
    }
}

} // namespace

double gamma(double shape, RandomStream& stream) {
    if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
    if (shape >= 1.0) return gamma_ge1(shape, stream);

    // Boost in log space: log X = log Gam(shape+1) + log(U)/shape.
    double g = gamma_ge1(shape + 1.0, stream);
    double logx = std::log(g) + std::log(stream.uniform01()) / shape;
    double x = std::exp(logx);
    if (x < std::numeric_limits<double>::min()) {
        g_underflow_clamps.fetch_add(1, std::memory_order_relaxed);
        return std::numeric_limits<double>::min();
    }
    return x;
}

double chi_tilde(double dof, RandomStream& stream) {
    if (!(dof > 0.0)) throw std::invalid_argument("chi_tilde: dof must be positive");
    return std::sqrt(gamma(dof / 2.0, stream));
}

std::vector<double> dirichlet(std::size_t count, double concentration, RandomStream& stream) {
    if (count < 1) throw std::invalid_argument("dirichlet: count must be >= 1");
    if (!(concentration > 0.0)) throw std::invalid_argument("dirichlet: concentration must be positive");
    std::vector<double> w(count);
    double total = 0.0;
    for (auto& wi : w) {
        wi = gamma(concentration, stream);
        total += wi;
    }
    for (auto& wi : w) wi /= total;
    return w;
}

std::uint64_t underflow_clamp_count() { return g_underflow_clamps.load(std::memory_order_relaxed); }
void reset_underflow_clamp_count() { g_underflow_clamps.store(0, std::memory_order_relaxed); }

} // namespace gbe::randsrc
