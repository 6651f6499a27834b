// Deterministic random streams.
//
// All randomness in the library flows through Rng, which layers portable
// uniform/gaussian transforms over std::mt19937_64 (the engine itself is
// fully specified by the standard; the std distributions are not, so we
// avoid them). Stream seeds are a pure splitmix-style mix of a global seed
// and a stream index, so per-sample work can be farmed out to any number
// of workers without changing results.

#ifndef DIMSCOPE_RNG_HPP
#define DIMSCOPE_RNG_HPP

#include <cstdint>
#include <random>

#include "dimscope/common.hpp"

namespace dimscope {

/// Mixes (global_seed, stream_index) into an independent stream seed.
/// Pure function; identical on every platform.
std::uint64_t stream_seed(std::uint64_t global_seed, std::uint64_t stream_index);

/// Seeding contract for a whole run. Sample i of a batch draws from the
/// stream `stream_seed(global_seed, i)`; auxiliary streams (e.g. the basis
/// of a synthetic manifold) use reserved indices counted down from 2^64-1.
struct SeedPolicy {
    std::uint64_t global_seed = 0;

    std::uint64_t sample_stream(std::uint64_t index) const {
        return stream_seed(global_seed, index);
    }
    std::uint64_t auxiliary_stream(std::uint64_t tag) const {
        return stream_seed(global_seed, ~tag);
    }
};

/// Seeded generator with portable uniform and gaussian draws.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on (0, 1].
    double uniform_open_closed() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// Unbiased uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n);

    /// Standard normal via Box-Muller; consumes two uniforms per pair.
    double gaussian();

    /// Fills column by column with independent N(0,1) draws.
    Matrix gaussian_matrix(Index rows, Index cols);
    Vector gaussian_vector(Index n);

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace dimscope

#endif  // DIMSCOPE_RNG_HPP
