#include "dvpp/stochastic.hpp"

#include <cmath>
#include <numbers>

#include "dvpp/errors.hpp"

namespace dvpp {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, int node, std::string_view tag) {
    // FNV-1a over the tag keeps the derivation independent of std::hash.
    std::uint64_t tag_hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        tag_hash ^= c;
        tag_hash *= 0x100000001b3ULL;
    }
    std::uint64_t s = splitmix64(master_seed);
    s = splitmix64(s ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(node)));
    s = splitmix64(s ^ tag_hash);
    return RandomStream(s);
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() {
    if (cached_normal_) {
        const double z = *cached_normal_;
        cached_normal_.reset();
        return z;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(phase);
    return r * std::cos(phase);
}

std::vector<std::string> PrbsConfig::violations() const {
    std::vector<std::string> out;
    if (components < 1) out.emplace_back("prbs: N_nu must be at least 1");
    if (!(magnitude > 0.0) || !std::isfinite(magnitude)) out.emplace_back("prbs: h must be positive");
    if (!(switching_scale > 0.0) || !std::isfinite(switching_scale)) {
        out.emplace_back("prbs: s_f must be positive");
    } else if (components >= 1 && !(static_cast<double>(components) / switching_scale < 1.0)) {
        out.emplace_back("prbs: flip probability N_nu/s_f must be below 1");
    }
    return out;
}

double prbs_amplitude(int k, double magnitude) {
    if (k < 1) throw ParameterError("prbs component index is 1-based");
    return k == 1 ? magnitude : magnitude / (2.0 * (k - 1));
}

double prbs_flip_probability(int k, double switching_scale) {
    return static_cast<double>(k) / switching_scale;
}

double prbs_step(std::span<int> signs, std::span<const double> amplitudes, std::span<const double> flip_probability,
                 RandomStream& rng) {
    if (signs.size() != amplitudes.size() || signs.size() != flip_probability.size())
        throw ParameterError("prbs_step: component vectors differ in length");
    double sum = 0.0;
    for (std::size_t k = 0; k < signs.size(); ++k) {
        if (rng.uniform() < flip_probability[k]) signs[k] = -signs[k];
        sum += signs[k] * amplitudes[k];
    }
    return sum;
}

PrbsGenerator::PrbsGenerator(const PrbsConfig& config, RandomStream rng) : rng_(std::move(rng)) {
    if (auto v = config.violations(); !v.empty()) throw ValidationError(std::move(v));
    for (int k = 1; k <= config.components; ++k) {
        signs_.push_back(1);
        amplitudes_.push_back(prbs_amplitude(k, config.magnitude));
        flip_probs_.push_back(prbs_flip_probability(k, config.switching_scale));
    }
}

double PrbsGenerator::value() const {
    double sum = 0.0;
    for (std::size_t k = 0; k < signs_.size(); ++k) sum += signs_[k] * amplitudes_[k];
    return sum;
}

double PrbsGenerator::step() {
    return prbs_step(signs_, amplitudes_, flip_probs_, rng_);
}

std::vector<std::string> BmrConfig::violations() const {
    std::vector<std::string> out;
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) out.emplace_back("bmr: sigma must be non-negative");
    if (!(reset_threshold > 0.0) || !std::isfinite(reset_threshold))
        out.emplace_back("bmr: reset threshold must be positive");
    if (!(decay >= 0.0 && decay <= 1.0)) out.emplace_back("bmr: decay factor must lie in [0, 1]");
    if (!(dt > 0.0) || !std::isfinite(dt)) out.emplace_back("bmr: dt must be positive");
    return out;
}

double bmr_output(double walk, const BmrConfig& config) {
    return std::abs(walk) > config.reset_threshold ? (1.0 - config.decay) * walk : walk;
}

BmrSample bmr_step(double walk_prev, const BmrConfig& config, RandomStream& rng) {
    const double walk = walk_prev + config.sigma * std::sqrt(config.dt) * rng.normal();
    const double out = bmr_output(walk, config);
    return BmrSample{config.reset_state ? out : walk, out};
}

double BmrGenerator::step() {
    const auto s = bmr_step(walk_, config_, rng_);
    walk_ = s.walk;
    output_ = s.output;
    return output_;
}

}  // namespace dvpp
