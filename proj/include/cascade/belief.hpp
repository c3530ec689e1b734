#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cascade/game.hpp"

namespace cascade {

inline constexpr double kBayesPlausibleTol = 1e-9;

enum class BeliefSpace { source, relay_input }; // over U, or over W1

// Point in the probability simplex of a named alphabet.
struct Belief {
    BeliefSpace space = BeliefSpace::source;
    std::vector<double> p;

    Belief() = default;
    Belief(BeliefSpace s, std::vector<double> probs) : space(s), p(std::move(probs)) {
        if (!is_probability_vector(p)) throw std::invalid_argument("belief is not a probability vector");
    }
    // Binary belief from its parameter: probability of symbol 1.
    static Belief binary(double p1, BeliefSpace s = BeliefSpace::source) { return Belief(s, {1.0 - p1, p1}); }

    std::size_t size() const { return p.size(); }
    double operator[](std::size_t i) const { return p[i]; }
    // Belief parameter in the binary case.
    double param() const {
        if (p.size() != 2) throw std::logic_error("belief parameter only defined for binary alphabets");
        return p[1];
    }
    bool operator==(const Belief& o) const { return space == o.space && p == o.p; }
};

// Weighted set of posteriors whose barycenter is the prior they split.
struct Splitting {
    struct Atom {
        double weight;
        Belief posterior;
    };
    std::vector<Atom> atoms;

    std::size_t size() const { return atoms.size(); }

    Belief barycenter() const {
        if (atoms.empty()) throw std::logic_error("empty splitting");
        std::vector<double> m(atoms[0].posterior.size(), 0.0);
        for (const auto& a : atoms)
            for (std::size_t i = 0; i < m.size(); ++i) m[i] += a.weight * a.posterior[i];
        Belief b;
        b.space = atoms[0].posterior.space;
        b.p = std::move(m);
        return b;
    }

    double weight_total() const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight;
        return s;
    }

    // Bayes plausibility relative to a declared prior.
    bool plausible_for(const Belief& prior, double tol = kBayesPlausibleTol) const {
        if (atoms.empty()) return false;
        if (std::abs(weight_total() - 1.0) > kProbDerivedTol) return false;
        Belief b = barycenter();
        if (b.size() != prior.size()) return false;
        for (std::size_t i = 0; i < b.size(); ++i)
            if (std::abs(b[i] - prior[i]) > tol) return false;
        return true;
    }
};

// Bayes posterior P(input | observation) under prior and channel.
// An observation with zero marginal probability has no posterior.
inline Belief posterior(const Belief& prior, const Kernel& channel, std::size_t observation) {
    if (channel.rows != prior.size()) throw std::invalid_argument("posterior: prior length does not match channel input");
    if (observation >= channel.cols) throw std::invalid_argument("posterior: observation index out of range");
    std::vector<double> q(prior.size());
    double z = 0.0;
    for (std::size_t a = 0; a < prior.size(); ++a) {
        q[a] = prior[a] * channel(a, observation);
        z += q[a];
    }
    if (z <= 0.0)
        throw std::domain_error("unreachable observation " + std::to_string(observation) +
                                ": zero probability under prior and channel");
    for (double& x : q) x /= z;
    Belief b;
    b.space = prior.space;
    b.p = std::move(q);
    return b;
}

// Marginal probability of the relay-input symbol x^1_1 under a binary
// encoder with crossover parameters (alpha, beta): (1-p0)a + p0(1-b).
inline double induced_w1_marginal(double p0, double alpha, double beta) {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!in01(p0) || !in01(alpha) || !in01(beta))
        throw std::invalid_argument("induced_w1_marginal: arguments must lie in [0,1]");
    return (1.0 - p0) * alpha + p0 * (1.0 - beta);
}

namespace detail {

// Min-norm weights for the barycenter system restricted to a support set,
// via complete orthogonal decomposition. Returns empty if inconsistent.
inline std::vector<double> min_norm_weights(const Belief& prior, const std::vector<Belief>& posteriors,
                                            const std::vector<std::size_t>& support) {
    const std::size_t k = prior.size();
    Eigen::MatrixXd A(k + 1, support.size());
    Eigen::VectorXd b(k + 1);
    for (std::size_t j = 0; j < support.size(); ++j) {
        for (std::size_t i = 0; i < k; ++i) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = posteriors[support[j]][i];
        A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = 1.0;
    }
    for (std::size_t i = 0; i < k; ++i) b(static_cast<Eigen::Index>(i)) = prior[i];
    b(static_cast<Eigen::Index>(k)) = 1.0;
    Eigen::VectorXd w = A.completeOrthogonalDecomposition().solve(b);
    if ((A * w - b).lpNorm<Eigen::Infinity>() > 1e-9) return {};
    return std::vector<double>(w.data(), w.data() + w.size());
}

} // namespace detail

// Weights making the posteriors a Bayes-plausible splitting of the prior.
// Underdetermined systems resolve to minimum-norm weights; when those turn
// negative, the smallest-norm nonnegative support is searched instead.
inline Splitting split_weights(const Belief& prior, const std::vector<Belief>& posteriors) {
    if (posteriors.empty()) throw std::invalid_argument("split_weights: need at least one posterior");
    for (const auto& q : posteriors)
        if (q.size() != prior.size()) throw std::invalid_argument("split_weights: posterior dimension mismatch");
    const std::size_t n = posteriors.size();
    if (n > 16) throw std::invalid_argument("split_weights: too many posteriors");

    const double neg_tol = 1e-10;
    std::vector<std::size_t> all(n);
    for (std::size_t j = 0; j < n; ++j) all[j] = j;

    auto assemble = [&](const std::vector<std::size_t>& support, const std::vector<double>& w) {
        Splitting s;
        s.atoms.reserve(n);
        std::vector<double> full(n, 0.0);
        for (std::size_t j = 0; j < support.size(); ++j) full[support[j]] = std::max(0.0, w[j]);
        for (std::size_t j = 0; j < n; ++j) s.atoms.push_back({full[j], posteriors[j]});
        return s;
    };

    std::vector<double> w = detail::min_norm_weights(prior, posteriors, all);
    if (!w.empty() && std::all_of(w.begin(), w.end(), [&](double x) { return x >= -neg_tol; }))
        return assemble(all, w);

    // Enumerate supports, smallest norm wins; ties resolve to the
    // lexicographically first support for determinism.
    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> best_support;
    std::vector<double> best_w;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::vector<std::size_t> support;
        for (std::size_t j = 0; j < n; ++j)
            if (mask & (std::size_t{1} << j)) support.push_back(j);
        std::vector<double> ws = detail::min_norm_weights(prior, posteriors, support);
        if (ws.empty()) continue;
        if (!std::all_of(ws.begin(), ws.end(), [&](double x) { return x >= -neg_tol; })) continue;
        double nrm = 0.0;
        for (double x : ws) nrm += x * x;
        if (nrm < best_norm - 1e-15) {
            best_norm = nrm;
            best_support = support;
            best_w = ws;
        }
    }
    if (best_support.empty())
        throw std::domain_error("split_weights: prior is not in the convex hull of the posteriors");
    return assemble(best_support, best_w);
}

// Relay crossover parameters (gamma, delta) realizing the binary splitting
// (q0, q1) of the relay-input marginal p1:
//   gamma = (1-q1)(p1-q0) / ((1-p1)(q1-q0)),  delta = q0(q1-p1) / (p1(q1-q0)).
// Pushing p1 through Kernel::binary-style rows ((1-g, g), (d, 1-d)) then
// reproduces the posteriors exactly.
inline std::pair<double, double> relay_params_for_split(double p1, double q0, double q1) {
    if (!(p1 > 0.0 && p1 < 1.0)) throw std::domain_error("relay_params_for_split: p1 must be interior");
    if (!(q0 >= 0.0 && q1 <= 1.0 && q0 < q1 && q0 <= p1 && p1 <= q1))
        throw std::domain_error("relay_params_for_split: need 0 <= q0 <= p1 <= q1 <= 1 with q0 < q1");
    double gamma = (1.0 - q1) * (p1 - q0) / ((1.0 - p1) * (q1 - q0));
    double delta = q0 * (q1 - p1) / (p1 * (q1 - q0));
    gamma = std::clamp(gamma, 0.0, 1.0);
    delta = std::clamp(delta, 0.0, 1.0);
    return {gamma, delta};
}

// Kernel from a splitting by Bayes inversion: k(y|x) = w_y q_y(x) / prior(x).
// Rows for zero-probability inputs carry no mass and default to uniform.
inline Kernel splitting_to_kernel(const Belief& prior, const Splitting& split) {
    const std::size_t n = prior.size();
    const std::size_t m = split.size();
    if (m == 0) throw std::invalid_argument("splitting_to_kernel: empty splitting");
    Kernel k(n, m);
    for (std::size_t x = 0; x < n; ++x) {
        if (prior[x] <= 0.0) {
            for (std::size_t y = 0; y < m; ++y) k(x, y) = 1.0 / static_cast<double>(m);
            continue;
        }
        double s = 0.0;
        for (std::size_t y = 0; y < m; ++y) {
            double val = split.atoms[y].weight * split.atoms[y].posterior[x] / prior[x];
            k(x, y) = std::max(0.0, val);
            s += k(x, y);
        }
        // renormalize away rounding drift
        if (s > 0.0)
            for (std::size_t y = 0; y < m; ++y) k(x, y) /= s;
        else
            for (std::size_t y = 0; y < m; ++y) k(x, y) = 1.0 / static_cast<double>(m);
    }
    return k;
}

// Splitting induced by pushing a prior through a channel: one atom per
// reachable output, weighted by the output marginal.
inline Splitting induced_splitting(const Belief& prior, const Kernel& channel) {
    if (channel.rows != prior.size()) throw std::invalid_argument("induced_splitting: dimension mismatch");
    Splitting s;
    for (std::size_t y = 0; y < channel.cols; ++y) {
        double w = 0.0;
        for (std::size_t x = 0; x < prior.size(); ++x) w += prior[x] * channel(x, y);
        if (w <= 0.0) continue;
        s.atoms.push_back({w, posterior(prior, channel, y)});
    }
    return s;
}

} // namespace cascade
