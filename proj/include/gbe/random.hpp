#pragma once

#include <cstdint>
#include <vector>

namespace gbe::randsrc {

// Counter-based random stream keyed on (seed, stream_index). Output i is a
// strong 64-bit hash of (key, i), so two streams with equal keys replay the
// same sequence no matter which thread draws from them, and replicas can be
// scheduled in any order. A stream is a value: copy it freely, but do not
// share one instance between threads.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    // Derived stream for a separate purpose within the same replica
    // (e.g. Dirichlet weights drawn independently of the matrix entries).
    RandomStream substream(std::uint64_t tag) const;

    std::uint64_t next_u64();

    // Uniform on the open interval (0,1); never returns 0 or 1.
    double uniform01();

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// Standard normal variate (Marsaglia polar method; the antithetic partner is
// discarded so the stream has no hidden cache state).
double normal(RandomStream& stream);

// Gamma(shape, 1) variate. Shape >= 1 uses the Marsaglia-Tsang squeeze;
// shape < 1 uses the boost Gam(a,1) = Gam(a+1,1) * U^{1/a} evaluated in log
// space so shapes as small as 1e-4 do not round to zero. Results that would
// underflow are clamped to the smallest positive normal double and counted
// (see underflow_clamp_count).
double gamma(double shape, RandomStream& stream);

// (1/sqrt(2))-chi variate with `dof` degrees of freedom: sqrt(Gam(dof/2, 1)).
double chi_tilde(double dof, RandomStream& stream);

// Symmetric Dirichlet weight vector: `count` coordinates, all with the given
// concentration, renormalized to sum to exactly the computed total.
std::vector<double> dirichlet(std::size_t count, double concentration, RandomStream& stream);

// Number of gamma draws clamped to the smallest positive normal double since
// process start (or the last reset). Shared across threads.
std::uint64_t underflow_clamp_count();
void reset_underflow_clamp_count();

} // namespace gbe::randsrc
