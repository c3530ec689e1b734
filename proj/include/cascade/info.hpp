#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cascade/game.hpp"

namespace cascade {

// Constraint satisfaction absorbs floating error: slack >= -kRateSlackTol.
inline constexpr double kRateSlackTol = 1e-9;

inline double log2_safe(double x) { return std::log2(x); }

// Shannon entropy in bits, 0 log 0 = 0.
inline double entropy_bits(const std::vector<double>& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return h;
}

inline double binary_entropy_bits(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

// I(X;Y) in bits for X ~ input_dist and Y | X ~ channel.
inline double mutual_information_bits(const std::vector<double>& input_dist, const Kernel& channel) {
    if (channel.rows != input_dist.size())
        throw std::invalid_argument("mutual_information: input length does not match channel");
    std::vector<double> out(channel.cols, 0.0);
    for (std::size_t a = 0; a < channel.rows; ++a)
        for (std::size_t b = 0; b < channel.cols; ++b) out[b] += input_dist[a] * channel(a, b);
    double i = 0.0;
    for (std::size_t a = 0; a < channel.rows; ++a) {
        if (input_dist[a] <= 0.0) continue;
        for (std::size_t b = 0; b < channel.cols; ++b) {
            double joint = input_dist[a] * channel(a, b);
            if (joint > 0.0) i += joint * std::log2(channel(a, b) / out[b]);
        }
    }
    return std::max(0.0, i);
}

enum class MutualInfoKind { u_w1, u_w2, w1_w2 };

struct RateConstraint {
    MutualInfoKind kind;
    double bound_bits;
    double info_bits;
    double slack_bits() const { return bound_bits - info_bits; }
    bool satisfied() const { return slack_bits() >= -kRateSlackTol; }
};

enum class Regime {
    cooperative,
    unconstrained,
    relay_restricted,
    encoder_restricted,
    encoder_relay_coop,
    relay_decoder_coop,
};

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::cooperative: return "cooperative";
        case Regime::unconstrained: return "unconstrained";
        case Regime::relay_restricted: return "relay-restricted";
        case Regime::encoder_restricted: return "encoder-restricted";
        case Regime::encoder_relay_coop: return "encoder-relay";
        case Regime::relay_decoder_coop: return "relay-decoder";
    }
    throw std::invalid_argument("unknown regime");
}

inline Regime regime_from_name(const std::string& s) {
    if (s == "cooperative") return Regime::cooperative;
    if (s == "unconstrained") return Regime::unconstrained;
    if (s == "relay-restricted") return Regime::relay_restricted;
    if (s == "encoder-restricted") return Regime::encoder_restricted;
    if (s == "encoder-relay") return Regime::encoder_relay_coop;
    if (s == "relay-decoder") return Regime::relay_decoder_coop;
    throw std::invalid_argument("unknown regime '" + s + "'");
}

struct FeasibilityReport {
    bool feasible = true;
    std::vector<RateConstraint> constraints;
};

// Rate feasibility of an (encoder, relay) kernel pair for a regime's
// constraint set. The cooperative profile constrains the composed link
// U -> W2; the restricted profiles constrain their own hop.
inline FeasibilityReport is_feasible(const GameSpec& spec, const Kernel& encoder, const Kernel& relay, Regime regime) {
    FeasibilityReport rep;
    auto add = [&](MutualInfoKind kind, double bound, double info) {
        rep.constraints.push_back({kind, bound, info});
        if (!rep.constraints.back().satisfied()) rep.feasible = false;
    };
    switch (regime) {
        case Regime::cooperative: {
            Kernel uw2 = compose(encoder, relay);
            add(MutualInfoKind::u_w2, std::min(spec.r1, spec.r2), mutual_information_bits(spec.prior, uw2));
            break;
        }
        case Regime::unconstrained:
            break;
        case Regime::relay_restricted: {
            std::vector<double> w1(encoder.cols, 0.0);
            for (std::size_t u = 0; u < encoder.rows; ++u)
                for (std::size_t w = 0; w < encoder.cols; ++w) w1[w] += spec.prior[u] * encoder(u, w);
            add(MutualInfoKind::w1_w2, spec.r2, mutual_information_bits(w1, relay));
            break;
        }
        case Regime::encoder_restricted:
            add(MutualInfoKind::u_w1, spec.r1, mutual_information_bits(spec.prior, encoder));
            break;
        case Regime::encoder_relay_coop:
        case Regime::relay_decoder_coop: {
            add(MutualInfoKind::u_w1, spec.r1, mutual_information_bits(spec.prior, encoder));
            std::vector<double> w1(encoder.cols, 0.0);
            for (std::size_t u = 0; u < encoder.rows; ++u)
                for (std::size_t w = 0; w < encoder.cols; ++w) w1[w] += spec.prior[u] * encoder(u, w);
            add(MutualInfoKind::w1_w2, spec.r2, mutual_information_bits(w1, relay));
            break;
        }
    }
    return rep;
}

} // namespace cascade
