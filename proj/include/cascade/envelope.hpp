#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascade/belief.hpp"
#include "cascade/detail/lp.hpp"
#include "cascade/game.hpp"
#include "cascade/info.hpp"

namespace cascade {

inline constexpr double kDefaultTieTol = 1e-9;

// How decider-indifference beliefs resolve: in the decider's favor
// (argmin of the read-out cost) or against it (argmax).
enum class TieRule { favorable, adversarial };

// Belief-indexed cost q -> sum_x q(x) own(x, v*(q)) where v*(q) minimizes
// the decider cost. Piecewise affine with switching surfaces where the
// decider's argmin changes. A raw callable can stand in for the tables.
class BeliefCostFunction {
  public:
    static BeliefCostFunction from_tables(Matrix own, Matrix decider, TieRule tie = TieRule::favorable,
                                          double tie_tol = kDefaultTieTol) {
        if (own.rows != decider.rows || own.cols != decider.cols)
            throw std::invalid_argument("belief cost: own/decider shape mismatch");
        BeliefCostFunction f;
        f.own_ = std::move(own);
        f.decider_ = std::move(decider);
        f.tie_ = tie;
        f.tie_tol_ = tie_tol;
        f.dim_ = f.own_.rows;
        return f;
    }

    static BeliefCostFunction from_function(std::size_t dim, std::function<double(const Belief&)> fn) {
        BeliefCostFunction f;
        f.fn_ = std::move(fn);
        f.dim_ = dim;
        return f;
    }

    std::size_t dim() const { return dim_; }
    bool table_based() const { return !fn_; }
    TieRule tie_rule() const { return tie_; }
    double tie_tol() const { return tie_tol_; }
    const Matrix& own_costs() const { return own_; }
    const Matrix& decider_costs() const { return decider_; }

    double action_value(const Belief& q, std::size_t v) const {
        double s = 0.0;
        for (std::size_t x = 0; x < dim_; ++x) s += q[x] * own_(x, v);
        return s;
    }

    std::vector<std::size_t> br_actions(const Belief& q) const {
        std::vector<double> ev(decider_.cols, 0.0);
        for (std::size_t v = 0; v < decider_.cols; ++v)
            for (std::size_t x = 0; x < dim_; ++x) ev[v] += q[x] * decider_(x, v);
        double best = *std::min_element(ev.begin(), ev.end());
        std::vector<std::size_t> out;
        for (std::size_t v = 0; v < ev.size(); ++v)
            if (ev[v] <= best + tie_tol_) out.push_back(v);
        return out;
    }

    double value(const Belief& q) const {
        if (fn_) return fn_(q);
        auto br = br_actions(q);
        double out = tie_ == TieRule::favorable ? std::numeric_limits<double>::infinity()
                                                : -std::numeric_limits<double>::infinity();
        for (std::size_t v : br) {
            double val = action_value(q, v);
            out = tie_ == TieRule::favorable ? std::min(out, val) : std::max(out, val);
        }
        return out;
    }

    double value_param(double t) const { return value(Belief::binary(t)); }

    // Belief parameters in (0,1) where some pair of decider actions crosses;
    // superset of the argmin switch points. Binary alphabets only.
    std::vector<double> crossings_1d() const {
        if (dim_ != 2) throw std::logic_error("crossings_1d requires a binary alphabet");
        if (fn_) return {};
        std::vector<double> out;
        for (std::size_t v = 0; v < decider_.cols; ++v)
            for (std::size_t w = v + 1; w < decider_.cols; ++w) {
                double a0 = decider_(0, v) - decider_(0, w); // value gap at t=0
                double a1 = decider_(1, v) - decider_(1, w); // at t=1
                double d = a0 - a1;
                if (std::abs(d) < 1e-15) continue;
                double t = a0 / d;
                if (t > 0.0 && t < 1.0) out.push_back(t);
            }
        std::sort(out.begin(), out.end());
        return out;
    }

  private:
    Matrix own_, decider_;
    TieRule tie_ = TieRule::favorable;
    double tie_tol_ = kDefaultTieTol;
    std::size_t dim_ = 0;
    std::function<double(const Belief&)> fn_;
};

// Lower convex envelope of a belief cost. 1-D instances carry the hull
// breakpoints; higher dimensions carry the touching points and a
// supporting hyperplane at the queried prior.
struct Envelope {
    std::vector<std::pair<double, double>> hull; // (param, value), 1-D only
    std::vector<Belief> support_points;
    std::vector<double> support_values;
    std::vector<double> hyperplane; // h(q) = sum h[i] q[i] + h[k]
    Belief prior;
    double value = std::numeric_limits<double>::quiet_NaN();
    Splitting split;

    double value_at(double t) const {
        if (hull.size() < 2) throw std::logic_error("envelope hull not built");
        if (t <= hull.front().first) return hull.front().second;
        if (t >= hull.back().first) return hull.back().second;
        for (std::size_t i = 1; i < hull.size(); ++i) {
            if (t <= hull[i].first) {
                auto [x0, y0] = hull[i - 1];
                auto [x1, y1] = hull[i];
                double lam = (t - x0) / (x1 - x0);
                return (1.0 - lam) * y0 + lam * y1;
            }
        }
        return hull.back().second;
    }
};

namespace detail {

inline std::vector<std::pair<double, double>> lower_hull_1d(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    // collapse duplicate params to their lowest value
    std::vector<std::pair<double, double>> uniq;
    for (const auto& pt : pts) {
        if (!uniq.empty() && std::abs(uniq.back().first - pt.first) < 1e-15)
            uniq.back().second = std::min(uniq.back().second, pt.second);
        else
            uniq.push_back(pt);
    }
    if (uniq.size() < 2) throw std::invalid_argument("lower hull needs at least 2 distinct breakpoints");
    std::vector<std::pair<double, double>> h;
    for (const auto& pt : uniq) {
        while (h.size() >= 2) {
            auto [x1, y1] = h[h.size() - 2];
            auto [x2, y2] = h[h.size() - 1];
            // drop middle point when it lies on or above the chord
            if ((y2 - y1) * (pt.first - x1) >= (pt.second - y1) * (x2 - x1) - 1e-15)
                h.pop_back();
            else
                break;
        }
        h.push_back(pt);
    }
    return h;
}

// All lattice beliefs n/res over a k-simplex.
inline void simplex_lattice(std::size_t k, std::size_t res, std::vector<std::vector<double>>& out) {
    std::vector<std::size_t> counts(k, 0);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t left) {
        if (pos + 1 == k) {
            counts[pos] = left;
            std::vector<double> q(k);
            for (std::size_t i = 0; i < k; ++i) q[i] = static_cast<double>(counts[i]) / static_cast<double>(res);
            out.push_back(std::move(q));
            return;
        }
        for (std::size_t c = 0; c <= left; ++c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, res);
}

// min sum w_j values[j]  s.t.  sum w_j points[j] = prior, sum w_j = 1,
// optionally sum w_j entropies[j] >= min_avg_entropy. Returns nullopt-style
// failure as an infeasible LpResult.
inline LpResult envelope_lp(const std::vector<Belief>& points, const std::vector<double>& values, const Belief& prior,
                            const std::vector<double>* entropies = nullptr,
                            double min_avg_entropy = 0.0, const std::vector<double>* objective_override = nullptr,
                            bool maximize = false, const std::vector<double>* cap_values = nullptr,
                            double cap = 0.0) {
    const std::size_t k = prior.size();
    const std::size_t n = points.size();
    std::size_t rows = (k - 1) + 1 + (entropies ? 1 : 0) + (cap_values ? 1 : 0);
    std::size_t cols = n + (entropies ? 1 : 0) + (cap_values ? 1 : 0);
    SimplexLp lp(rows, cols);
    std::size_t r = 0;
    for (std::size_t i = 0; i + 1 < k; ++i, ++r) {
        for (std::size_t j = 0; j < n; ++j) lp.a(r, j) = points[j][i];
        lp.b(r) = prior[i];
    }
    for (std::size_t j = 0; j < n; ++j) lp.a(r, j) = 1.0;
    lp.b(r) = 1.0;
    ++r;
    std::size_t slack = n;
    if (entropies) {
        for (std::size_t j = 0; j < n; ++j) lp.a(r, j) = (*entropies)[j];
        lp.a(r, slack) = -1.0; // surplus
        lp.b(r) = min_avg_entropy;
        ++r;
        ++slack;
    }
    if (cap_values) {
        for (std::size_t j = 0; j < n; ++j) lp.a(r, j) = (*cap_values)[j];
        lp.a(r, slack) = 1.0; // slack
        lp.b(r) = cap;
        ++r;
    }
    const std::vector<double>& obj = objective_override ? *objective_override : values;
    for (std::size_t j = 0; j < n; ++j) lp.c(j) = maximize ? -obj[j] : obj[j];
    LpResult res = lp.solve();
    if (maximize && res.status == LpResult::Status::optimal) res.objective = -res.objective;
    return res;
}

} // namespace detail

// Lower convex hull of explicit (param, value) breakpoints; exact for
// piecewise-affine inputs whose switch beliefs are listed.
inline Envelope envelope_1d(const std::vector<std::pair<double, double>>& values_at_breakpoints) {
    Envelope env;
    env.hull = detail::lower_hull_1d(values_at_breakpoints);
    return env;
}

// Lower convex envelope of f evaluated at the prior, with a Bayes-plausible
// splitting achieving it. Exact in 1-D for table-backed costs (breakpoints
// come from the decider crossings); sampled with refinement otherwise.
inline Envelope convex_envelope(const BeliefCostFunction& f, const Belief& prior, std::size_t sample_res = 400) {
    const std::size_t k = f.dim();
    if (prior.size() != k) throw std::invalid_argument("convex_envelope: prior dimension mismatch");
    Envelope env;
    env.prior = prior;

    if (k == 2) {
        std::vector<double> params{0.0, 1.0, prior.param()};
        if (f.table_based()) {
            for (double t : f.crossings_1d()) params.push_back(t);
        } else {
            for (std::size_t i = 0; i <= sample_res; ++i)
                params.push_back(static_cast<double>(i) / static_cast<double>(sample_res));
        }
        std::sort(params.begin(), params.end());
        params.erase(std::unique(params.begin(), params.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-15; }),
                     params.end());
        std::vector<std::pair<double, double>> pts;
        pts.reserve(params.size());
        for (double t : params) pts.emplace_back(t, f.value_param(t));
        env.hull = detail::lower_hull_1d(pts);

        double t = prior.param();
        env.value = env.value_at(t);
        // contact vertices around the prior
        std::size_t hi = 0;
        while (hi + 1 < env.hull.size() && env.hull[hi].first < t - 1e-15) ++hi;
        if (std::abs(env.hull[hi].first - t) < 1e-12) {
            env.split.atoms.push_back({1.0, Belief::binary(env.hull[hi].first, prior.space)});
        } else {
            auto [x0, y0] = env.hull[hi - 1];
            auto [x1, y1] = env.hull[hi];
            double lam1 = (t - x0) / (x1 - x0);
            env.split.atoms.push_back({1.0 - lam1, Belief::binary(x0, prior.space)});
            env.split.atoms.push_back({lam1, Belief::binary(x1, prior.space)});
        }
        for (const auto& a : env.split.atoms) {
            env.support_points.push_back(a.posterior);
            env.support_values.push_back(f.value(a.posterior));
        }
        return env;
    }

    // general dimension: lattice sample + LP over the sampled graph
    std::size_t res = sample_res;
    if (k >= 4 && res > 24) res = 24;
    if (k == 3 && res > 60) res = 60;
    std::vector<std::vector<double>> lattice;
    detail::simplex_lattice(k, res, lattice);
    std::vector<Belief> pts;
    pts.reserve(lattice.size() + 1);
    for (auto& q : lattice) pts.emplace_back(prior.space, std::move(q));
    pts.push_back(prior);
    std::vector<double> vals(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) vals[j] = f.value(pts[j]);
    detail::LpResult lp = detail::envelope_lp(pts, vals, prior);
    if (lp.status != detail::LpResult::Status::optimal)
        throw std::runtime_error("convex_envelope: lattice LP failed");
    env.value = lp.objective;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (lp.x[j] > 1e-12) {
            env.split.atoms.push_back({lp.x[j], pts[j]});
            env.support_points.push_back(pts[j]);
            env.support_values.push_back(vals[j]);
        }
    }
    // supporting hyperplane via least squares through the contact points
    if (!env.support_points.empty()) {
        Eigen::MatrixXd A(env.support_points.size(), k + 1);
        Eigen::VectorXd b(env.support_points.size());
        for (std::size_t i = 0; i < env.support_points.size(); ++i) {
            for (std::size_t j = 0; j < k; ++j) A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = env.support_points[i][j];
            A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0;
            b(static_cast<Eigen::Index>(i)) = env.support_values[i];
        }
        Eigen::VectorXd h = A.completeOrthogonalDecomposition().solve(b);
        env.hyperplane.assign(h.data(), h.data() + h.size());
    }
    return env;
}

} // namespace cascade
