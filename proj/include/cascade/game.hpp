#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cascade {

inline constexpr double kProbInputTol = 1e-12;   // on user-supplied distributions
inline constexpr double kProbDerivedTol = 1e-10; // on products of distributions
inline constexpr double kMarkovTol = 1e-9;

// Dense row-major matrix, small alphabets only.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}
    static Matrix from_rows(const std::vector<std::vector<double>>& rws) {
        if (rws.empty()) throw std::invalid_argument("matrix needs at least one row");
        Matrix m(rws.size(), rws[0].size());
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != m.cols) throw std::invalid_argument("ragged matrix rows");
            std::copy(rws[i].begin(), rws[i].end(), m.data.begin() + static_cast<std::ptrdiff_t>(i * m.cols));
        }
        return m;
    }
    double& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
    bool operator==(const Matrix& o) const { return rows == o.rows && cols == o.cols && data == o.data; }
};

inline bool is_probability_vector(const std::vector<double>& p, double tol = kProbInputTol) {
    double s = 0.0;
    for (double x : p) {
        if (!(x >= 0.0) || !std::isfinite(x)) return false;
        s += x;
    }
    return std::abs(s - 1.0) <= tol;
}

// Row-stochastic conditional distribution: p(b|a) = p[a][b].
// Holds coding strategies as well as auxiliary channels.
struct Kernel {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> p;

    Kernel() = default;
    Kernel(std::size_t r, std::size_t c) : rows(r), cols(c), p(r * c, 0.0) {}

    static Kernel from_rows(const std::vector<std::vector<double>>& rws) {
        Kernel k(rws.size(), rws.empty() ? 0 : rws[0].size());
        for (std::size_t i = 0; i < rws.size(); ++i) {
            if (rws[i].size() != k.cols) throw std::invalid_argument("ragged kernel rows");
            std::copy(rws[i].begin(), rws[i].end(), k.p.begin() + static_cast<std::ptrdiff_t>(i * k.cols));
        }
        k.validate();
        return k;
    }
    static Kernel identity(std::size_t n) {
        Kernel k(n, n);
        for (std::size_t i = 0; i < n; ++i) k.p[i * n + i] = 1.0;
        return k;
    }
    static Kernel constant_to(std::size_t rows, std::size_t cols, std::size_t target) {
        Kernel k(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) k.p[i * cols + target] = 1.0;
        return k;
    }
    static Kernel uniform(std::size_t rows, std::size_t cols) {
        Kernel k(rows, cols);
        std::fill(k.p.begin(), k.p.end(), 1.0 / static_cast<double>(cols));
        return k;
    }
    // Binary-input/binary-output channel from its two crossover probabilities:
    //   row 0 = (1-a, a), row 1 = (b, 1-b).
    static Kernel binary(double a, double b) {
        Kernel k(2, 2);
        k.p = {1.0 - a, a, b, 1.0 - b};
        return k;
    }

    double& operator()(std::size_t a, std::size_t b) { return p[a * cols + b]; }
    double operator()(std::size_t a, std::size_t b) const { return p[a * cols + b]; }
    bool operator==(const Kernel& o) const { return rows == o.rows && cols == o.cols && p == o.p; }

    void validate(double tol = kProbInputTol) const {
        if (rows == 0 || cols == 0) throw std::invalid_argument("kernel must be non-empty");
        for (std::size_t a = 0; a < rows; ++a) {
            double s = 0.0;
            for (std::size_t b = 0; b < cols; ++b) {
                double x = p[a * cols + b];
                if (!(x >= 0.0) || !std::isfinite(x))
                    throw std::invalid_argument("kernel row " + std::to_string(a) + " has a negative or non-finite entry");
                s += x;
            }
            if (std::abs(s - 1.0) > tol)
                throw std::invalid_argument("kernel row " + std::to_string(a) + " does not sum to 1");
        }
    }
};

// k2 after k1: (k1*k2)(c|a) = sum_b k1(b|a) k2(c|b).
inline Kernel compose(const Kernel& k1, const Kernel& k2) {
    if (k1.cols != k2.rows) throw std::invalid_argument("compose: inner dimensions do not match");
    Kernel out(k1.rows, k2.cols);
    for (std::size_t a = 0; a < k1.rows; ++a)
        for (std::size_t b = 0; b < k1.cols; ++b) {
            double w = k1(a, b);
            if (w == 0.0) continue;
            for (std::size_t c = 0; c < k2.cols; ++c) out(a, c) += w * k2(b, c);
        }
    return out;
}

// A complete game instance: alphabets, source prior, the three cost tables
// and the rate pair (bits per source symbol).
struct GameSpec {
    std::size_t u_size = 2;
    std::size_t v_size = 2;
    std::size_t w1_size = 2;
    std::size_t w2_size = 2;
    std::vector<double> prior;
    Matrix cost1, cost2, cost3;
    double r1 = 1.0;
    double r2 = 1.0;

    void validate() const {
        if (u_size < 2) throw std::invalid_argument("u_size: must be at least 2");
        if (v_size < 2) throw std::invalid_argument("v_size: must be at least 2");
        if (w1_size < 1 || w2_size < 1) throw std::invalid_argument("w1_size/w2_size: must be positive");
        if (prior.size() != u_size) throw std::invalid_argument("prior: length must equal u_size");
        if (!is_probability_vector(prior)) throw std::invalid_argument("prior: entries must be nonnegative and sum to 1");
        auto check_cost = [&](const Matrix& c, const char* name) {
            if (c.rows != u_size || c.cols != v_size)
                throw std::invalid_argument(std::string(name) + ": shape must be u_size x v_size");
            for (double x : c.data)
                if (!std::isfinite(x)) throw std::invalid_argument(std::string(name) + ": entries must be finite");
        };
        check_cost(cost1, "cost1");
        check_cost(cost2, "cost2");
        check_cost(cost3, "cost3");
        if (!(r1 >= 0.0) || !std::isfinite(r1)) throw std::invalid_argument("r1: must be a nonnegative rate");
        if (!(r2 >= 0.0) || !std::isfinite(r2)) throw std::invalid_argument("r2: must be a nonnegative rate");
    }

    bool costs_equal(const Matrix& a, const Matrix& b, double tol = 0.0) const {
        if (a.rows != b.rows || a.cols != b.cols) return false;
        for (std::size_t i = 0; i < a.data.size(); ++i)
            if (std::abs(a.data[i] - b.data[i]) > tol) return false;
        return true;
    }
};

// Product distribution over (u, w1, w2, v) induced by the chain
// prior -> k1 -> k2 -> k3. Factorizes by construction; the Markov
// residual checks below guard against corrupted tables.
struct JointDistribution {
    std::size_t nu = 0, nw1 = 0, nw2 = 0, nv = 0;
    std::vector<double> p; // index ((u*nw1 + w1)*nw2 + w2)*nv + v

    double at(std::size_t u, std::size_t w1, std::size_t w2, std::size_t v) const {
        return p[((u * nw1 + w1) * nw2 + w2) * nv + v];
    }
    double total() const {
        double s = 0.0;
        for (double x : p) s += x;
        return s;
    }
    Matrix marginal_uv() const {
        Matrix m(nu, nv);
        std::size_t idx = 0;
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t w1 = 0; w1 < nw1; ++w1)
                for (std::size_t w2 = 0; w2 < nw2; ++w2)
                    for (std::size_t v = 0; v < nv; ++v, ++idx) m(u, v) += p[idx];
        return m;
    }
    std::vector<double> marginal_u() const {
        std::vector<double> m(nu, 0.0);
        std::size_t idx = 0;
        for (std::size_t u = 0; u < nu; ++u)
            for (std::size_t w1 = 0; w1 < nw1; ++w1)
                for (std::size_t w2 = 0; w2 < nw2; ++w2)
                    for (std::size_t v = 0; v < nv; ++v, ++idx) m[u] += p[idx];
        return m;
    }

    // Largest conditional-independence violation over the two chain links:
    // max |P(v|w2,w1) - P(v|w2)| and |P(w2|w1,u) - P(w2|w1)|.
    double markov_residual() const {
        double worst = 0.0;
        // P(v|w2) and P(v|w1,w2)
        for (std::size_t w2 = 0; w2 < nw2; ++w2) {
            std::vector<double> pv(nv, 0.0);
            double pw2 = 0.0;
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t w1 = 0; w1 < nw1; ++w1)
                    for (std::size_t v = 0; v < nv; ++v) {
                        double x = at(u, w1, w2, v);
                        pv[v] += x;
                        pw2 += x;
                    }
            if (pw2 <= 0.0) continue;
            for (std::size_t w1 = 0; w1 < nw1; ++w1) {
                std::vector<double> pvw(nv, 0.0);
                double pw = 0.0;
                for (std::size_t u = 0; u < nu; ++u)
                    for (std::size_t v = 0; v < nv; ++v) {
                        double x = at(u, w1, w2, v);
                        pvw[v] += x;
                        pw += x;
                    }
                if (pw <= 0.0) continue;
                for (std::size_t v = 0; v < nv; ++v)
                    worst = std::max(worst, std::abs(pvw[v] / pw - pv[v] / pw2));
            }
        }
        // P(w2|w1) and P(w2|u,w1)
        for (std::size_t w1 = 0; w1 < nw1; ++w1) {
            std::vector<double> pw2c(nw2, 0.0);
            double pw1 = 0.0;
            for (std::size_t u = 0; u < nu; ++u)
                for (std::size_t w2 = 0; w2 < nw2; ++w2)
                    for (std::size_t v = 0; v < nv; ++v) {
                        double x = at(u, w1, w2, v);
                        pw2c[w2] += x;
                        pw1 += x;
                    }
            if (pw1 <= 0.0) continue;
            for (std::size_t u = 0; u < nu; ++u) {
                std::vector<double> pw2u(nw2, 0.0);
                double puw1 = 0.0;
                for (std::size_t w2 = 0; w2 < nw2; ++w2)
                    for (std::size_t v = 0; v < nv; ++v) {
                        double x = at(u, w1, w2, v);
                        pw2u[w2] += x;
                        puw1 += x;
                    }
                if (puw1 <= 0.0) continue;
                for (std::size_t w2 = 0; w2 < nw2; ++w2)
                    worst = std::max(worst, std::abs(pw2u[w2] / puw1 - pw2c[w2] / pw1));
            }
        }
        return worst;
    }
};

inline JointDistribution build_joint(const std::vector<double>& prior, const Kernel& k1, const Kernel& k2,
                                     const Kernel& k3) {
    if (!is_probability_vector(prior)) throw std::invalid_argument("prior is not a probability vector");
    if (k1.rows != prior.size()) throw std::invalid_argument("build_joint: prior length does not match k1 input size");
    if (k1.cols != k2.rows || k2.cols != k3.rows)
        throw std::invalid_argument("build_joint: kernel dimensions do not chain");
    JointDistribution j;
    j.nu = prior.size();
    j.nw1 = k1.cols;
    j.nw2 = k2.cols;
    j.nv = k3.cols;
    j.p.assign(j.nu * j.nw1 * j.nw2 * j.nv, 0.0);
    std::size_t idx = 0;
    for (std::size_t u = 0; u < j.nu; ++u)
        for (std::size_t w1 = 0; w1 < j.nw1; ++w1) {
            double a = prior[u] * k1(u, w1);
            for (std::size_t w2 = 0; w2 < j.nw2; ++w2) {
                double b = a * k2(w1, w2);
                for (std::size_t v = 0; v < j.nv; ++v, ++idx) j.p[idx] = b * k3(w2, v);
            }
        }
    return j;
}

// E[cost(U,V)] under the joint, marginalizing the middle stages.
inline double expected_cost(const JointDistribution& joint, const Matrix& cost) {
    if (cost.rows != joint.nu || cost.cols != joint.nv)
        throw std::invalid_argument("expected_cost: cost shape does not match joint alphabets");
    double s = 0.0;
    std::size_t idx = 0;
    for (std::size_t u = 0; u < joint.nu; ++u)
        for (std::size_t w1 = 0; w1 < joint.nw1; ++w1)
            for (std::size_t w2 = 0; w2 < joint.nw2; ++w2)
                for (std::size_t v = 0; v < joint.nv; ++v, ++idx) s += joint.p[idx] * cost(u, v);
    return s;
}

// Single-pass E[c(U,V)] for a strategy triple without materializing the table.
inline double expected_cost(const std::vector<double>& prior, const Kernel& k1, const Kernel& k2, const Kernel& k3,
                            const Matrix& cost) {
    Kernel uv = compose(compose(k1, k2), k3);
    double s = 0.0;
    for (std::size_t u = 0; u < uv.rows; ++u)
        for (std::size_t v = 0; v < uv.cols; ++v) s += prior[u] * uv(u, v) * cost(u, v);
    return s;
}

} // namespace cascade
