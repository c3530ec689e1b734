#pragma once

#include <random>
#include <vector>

#include "cascade/game.hpp"

namespace test_support {

// Reference binary game: u/v binary, prior (0.6, 0.4), encoder and decoder
// share the cost table, relay pays per action. Two relay variants ship:
// the one printed in the tables (prefers v1) and the one consistent with
// the worked numbers (prefers v0); see data/.
inline cascade::GameSpec binary_example(bool relay_prefers_v0 = false) {
    cascade::GameSpec s;
    s.u_size = s.v_size = s.w1_size = s.w2_size = 2;
    s.prior = {0.6, 0.4};
    s.cost1 = cascade::Matrix::from_rows({{9, 0}, {4, 10}});
    s.cost3 = cascade::Matrix::from_rows({{9, 0}, {4, 10}});
    if (relay_prefers_v0)
        s.cost2 = cascade::Matrix::from_rows({{0, 1}, {0, 1}});
    else
        s.cost2 = cascade::Matrix::from_rows({{1, 0}, {1, 0}});
    s.r1 = s.r2 = 1.0;
    s.validate();
    return s;
}

inline cascade::GameSpec cooperative_binary_example() {
    cascade::GameSpec s = binary_example();
    s.cost2 = s.cost1;
    return s;
}

inline std::vector<double> random_prob_vector(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> unif(0.05, 1.0);
    std::vector<double> p(n);
    double s = 0.0;
    for (auto& x : p) {
        x = unif(rng);
        s += x;
    }
    for (auto& x : p) x /= s;
    return p;
}

inline cascade::Kernel random_kernel(std::mt19937& rng, std::size_t rows, std::size_t cols) {
    cascade::Kernel k(rows, cols);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (std::size_t r = 0; r < rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            k(r, c) = unif(rng) + 1e-3;
            s += k(r, c);
        }
        for (std::size_t c = 0; c < cols; ++c) k(r, c) /= s;
    }
    return k;
}

inline cascade::Matrix random_cost(std::mt19937& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
    cascade::Matrix m(rows, cols);
    std::uniform_real_distribution<double> unif(0.0, scale);
    for (auto& x : m.data) x = unif(rng);
    return m;
}

// Random full game on binary alphabets; costs in [0,1], rates in [0.2, 1.2].
inline cascade::GameSpec random_binary_game(std::mt19937& rng) {
    cascade::GameSpec s;
    s.u_size = s.v_size = s.w1_size = s.w2_size = 2;
    std::uniform_real_distribution<double> pr(0.15, 0.85);
    double p0 = pr(rng);
    s.prior = {1.0 - p0, p0};
    s.cost1 = random_cost(rng, 2, 2);
    s.cost2 = random_cost(rng, 2, 2);
    s.cost3 = random_cost(rng, 2, 2);
    std::uniform_real_distribution<double> rate(0.2, 1.2);
    s.r1 = rate(rng);
    s.r2 = rate(rng);
    s.validate();
    return s;
}

} // namespace test_support
