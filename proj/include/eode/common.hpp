#ifndef EODE_COMMON_HPP
#define EODE_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eode {

/// Raised when data violates a documented invariant (bad labels, NaN cells,
/// empty masks, dimension mismatches).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on malformed input files; the message carries row/column context.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Raised on invalid parameters (population too small, k < 2, bad fractions).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

/// Sub-seed derivation: every component of a run draws its randomness from
/// the master seed through a fixed label, so components are independently
/// reproducible.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
    return splitmix64(master ^ fnv1a(label));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
    return splitmix64(derive_seed(master, label) ^
                      splitmix64(index + 0x9E3779B97F4A7C15ULL));
}

/// Seeded generator with pinned uniform/normal mappings (no reliance on
/// distribution internals).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform on [0, 1): top 53 bits of the generator output.
    double u01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n). Rejection sampling, no modulo bias.
    int uniform_int(int n) {
        const auto un = static_cast<std::uint64_t>(n);
        const std::uint64_t bound = UINT64_MAX - UINT64_MAX % un;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= bound);
        return static_cast<int>(x % un);
    }

    /// Standard normal via Box-Muller (cached spare).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = 1.0 - u01();  // (0, 1]
        double u2 = u01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Fisher-Yates with the pinned uniform_int mapping.
template <typename T>
void shuffle_in_place(std::vector<T>& v, Rng& rng) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
        int j = rng.uniform_int(i + 1);
        std::swap(v[static_cast<std::size_t>(i)], v[static_cast<std::size_t>(j)]);
    }
}

}  // namespace eode

#endif
