#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dvpp {

// Reproducible random stream. Raw bits come from std::mt19937_64, whose output sequence is fixed by the
// C++ standard; uniforms and normals are derived here (53-bit mantissa, Box-Muller with the sine sample
// cached) so sequences do not depend on the standard library's distribution implementations.
class RandomStream {
public:
    static constexpr std::string_view kAlgorithmId = "mt19937_64+splitmix64-substreams/u53/box-muller-v1";

    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Independent sub-stream for (master seed, node, signal tag).
    static RandomStream substream(std::uint64_t master_seed, int node, std::string_view tag);

    double uniform();  // [0, 1)
    double normal();   // N(0, 1)

private:
    std::mt19937_64 engine_;
    std::optional<double> cached_normal_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct PrbsConfig {
    int components = 8;     // N_nu
    double magnitude = 0.002;  // h
    double switching_scale = 1e4;  // s_f

    std::vector<std::string> violations() const;
    bool operator==(const PrbsConfig&) const = default;
};

// a^1 = h, a^k = h / (2(k-1)) for k >= 2; k is 1-based.
double prbs_amplitude(int k, double magnitude);
// p^k = k / s_f
double prbs_flip_probability(int k, double switching_scale);

// Advances each component once: component k flips sign with probability flip_probability[k].
// `signs` holds +-1 per component. Returns the summed output.
double prbs_step(std::span<int> signs, std::span<const double> amplitudes, std::span<const double> flip_probability,
                 RandomStream& rng);

class PrbsGenerator {
public:
    PrbsGenerator(const PrbsConfig& config, RandomStream rng);

    double value() const;  // current output; before any step this is the sum of amplitudes
    double step();
    const std::vector<int>& signs() const noexcept { return signs_; }
    const std::vector<double>& amplitudes() const noexcept { return amplitudes_; }
    const std::vector<double>& flip_probabilities() const noexcept { return flip_probs_; }

private:
    std::vector<int> signs_;
    std::vector<double> amplitudes_;
    std::vector<double> flip_probs_;
    RandomStream rng_;
};

struct BmrConfig {
    double sigma = 0.005;
    double reset_threshold = 0.02;  // theta_TH
    double decay = 0.5;             // lambda_r
    double dt = 5e-4;
    // Write the decayed value back into the walk state (otherwise only the output is decayed).
    bool reset_state = false;

    std::vector<std::string> violations() const;
    bool operator==(const BmrConfig&) const = default;
};

struct BmrSample {
    double walk;    // walk state carried into the next step
    double output;  // nu_RES
};

// Soft reset applied to a walk value.
double bmr_output(double walk, const BmrConfig& config);

BmrSample bmr_step(double walk_prev, const BmrConfig& config, RandomStream& rng);

class BmrGenerator {
public:
    BmrGenerator(const BmrConfig& config, RandomStream rng) : config_(config), rng_(std::move(rng)) {}

    double value() const noexcept { return output_; }
    double walk() const noexcept { return walk_; }
    double step();

private:
    BmrConfig config_;
    RandomStream rng_;
    double walk_ = 0.0;
    double output_ = 0.0;
};

}  // namespace dvpp
