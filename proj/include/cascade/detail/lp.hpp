#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace cascade::detail {

// Dense two-phase simplex for tiny problems:
//   min c.x  s.t.  A x = b, x >= 0
// Bland's rule, so it terminates; row counts here never exceed ~10.
struct LpResult {
    enum class Status { optimal, infeasible, unbounded } status = Status::infeasible;
    std::vector<double> x;
    double objective = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::size_t> basis;
};

class SimplexLp {
  public:
    SimplexLp(std::size_t m, std::size_t n) : m_(m), n_(n), a_(m * n, 0.0), b_(m, 0.0), c_(n, 0.0) {}

    double& a(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double& b(std::size_t i) { return b_[i]; }
    double& c(std::size_t j) { return c_[j]; }

    LpResult solve() const {
        const double tol = 1e-9;
        const std::size_t total = n_ + m_; // structural + artificial
        std::vector<double> tab((m_ + 1) * (total + 1), 0.0);
        const std::size_t w = total + 1;
        auto at = [&](std::size_t i, std::size_t j) -> double& { return tab[i * w + j]; };

        for (std::size_t i = 0; i < m_; ++i) {
            double sign = b_[i] < 0.0 ? -1.0 : 1.0;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign * a_[i * n_ + j];
            at(i, n_ + i) = 1.0;
            at(i, total) = sign * b_[i];
        }
        std::vector<std::size_t> basis(m_);
        for (std::size_t i = 0; i < m_; ++i) basis[i] = n_ + i;

        // phase-1 objective: minimize sum of artificials
        for (std::size_t j = 0; j <= total; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < m_; ++i) s += at(i, j);
            at(m_, j) = -s;
        }
        for (std::size_t i = 0; i < m_; ++i) at(m_, n_ + i) = 0.0;

        auto pivot = [&](std::size_t pr, std::size_t pc) {
            double pv = at(pr, pc);
            for (std::size_t j = 0; j <= total; ++j) at(pr, j) /= pv;
            for (std::size_t i = 0; i <= m_; ++i) {
                if (i == pr) continue;
                double f = at(i, pc);
                if (f == 0.0) continue;
                for (std::size_t j = 0; j <= total; ++j) at(i, j) -= f * at(pr, j);
            }
            basis[pr] = pc;
        };

        auto run = [&](bool allow_artificial) -> bool {
            for (;;) {
                std::size_t pc = total;
                for (std::size_t j = 0; j < (allow_artificial ? total : n_); ++j) {
                    if (at(m_, j) < -tol) {
                        pc = j;
                        break; // Bland: first improving column
                    }
                }
                if (pc == total) return true;
                std::size_t pr = m_;
                double best = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < m_; ++i) {
                    if (at(i, pc) > tol) {
                        double ratio = at(i, total) / at(i, pc);
                        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && (pr == m_ || basis[i] < basis[pr]))) {
                            best = ratio;
                            pr = i;
                        }
                    }
                }
                if (pr == m_) return false; // unbounded
                pivot(pr, pc);
            }
        };

        LpResult res;
        if (!run(true)) {
            res.status = LpResult::Status::infeasible;
            return res;
        }
        if (at(m_, total) < -tol) { // artificials still carry value
            res.status = LpResult::Status::infeasible;
            return res;
        }
        // drive lingering artificials out of the basis where possible
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis[i] >= n_) {
                std::size_t pc = total;
                for (std::size_t j = 0; j < n_; ++j)
                    if (std::abs(at(i, j)) > tol) {
                        pc = j;
                        break;
                    }
                if (pc != total) pivot(i, pc);
            }
        }
        // phase 2
        for (std::size_t j = 0; j <= total; ++j) at(m_, j) = 0.0;
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = c_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis[i] < n_) {
                double f = c_[basis[i]];
                if (f == 0.0) continue;
                for (std::size_t j = 0; j <= total; ++j) at(m_, j) -= f * at(i, j);
            }
        }
        if (!run(false)) {
            res.status = LpResult::Status::unbounded;
            return res;
        }
        res.status = LpResult::Status::optimal;
        res.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i)
            if (basis[i] < n_) res.x[basis[i]] = at(i, total);
        res.objective = 0.0;
        for (std::size_t j = 0; j < n_; ++j) res.objective += c_[j] * res.x[j];
        res.basis = basis;
        return res;
    }

  private:
    std::size_t m_, n_;
    std::vector<double> a_, b_, c_;
};

} // namespace cascade::detail
