#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cascade/belief.hpp"
#include "cascade/envelope.hpp"
#include "cascade/game.hpp"
#include "cascade/info.hpp"

namespace cascade {

// Argmin correspondence: every member's objective lies within tie_tol of
// the set minimum. Non-empty whenever the feasible region is.
template <typename T>
struct ResponseSet {
    struct Entry {
        T item;
        double value;
    };
    std::vector<Entry> members;
    double tie_tol = kDefaultTieTol;

    bool empty() const { return members.empty(); }
    std::size_t size() const { return members.size(); }
    double best_value() const {
        double b = std::numeric_limits<double>::infinity();
        for (const auto& e : members) b = std::min(b, e.value);
        return b;
    }
};

// All actions minimizing expected cost under the belief, within tie_tol.
inline ResponseSet<std::size_t> decoder_best_action(const Belief& belief, const Matrix& cost,
                                                    double tie_tol = kDefaultTieTol) {
    if (cost.rows != belief.size()) throw std::invalid_argument("decoder_best_action: belief/cost shape mismatch");
    std::vector<double> ev(cost.cols, 0.0);
    for (std::size_t v = 0; v < cost.cols; ++v)
        for (std::size_t x = 0; x < cost.rows; ++x) ev[v] += belief[x] * cost(x, v);
    double best = *std::min_element(ev.begin(), ev.end());
    ResponseSet<std::size_t> out;
    out.tie_tol = tie_tol;
    for (std::size_t v = 0; v < ev.size(); ++v)
        if (ev[v] <= best + tie_tol) out.members.push_back({v, ev[v]});
    return out;
}

// Cost tables re-read at the relay's input: c_i^x(x1, v) = sum_u P(u|x1) c_i(u, v).
// Rows for unreachable relay-input symbols are flagged and zero-filled;
// they carry no probability and must be skipped downstream.
struct ProjectedGame {
    Matrix c1x, c2x, c3x;
    std::vector<bool> reachable;
    std::vector<double> w1_marginal;
    std::vector<Belief> posterior_u; // P(U | x1), empty belief when unreachable
};

inline ProjectedGame project_costs(const GameSpec& spec, const Kernel& encoder) {
    if (encoder.rows != spec.u_size || encoder.cols != spec.w1_size)
        throw std::invalid_argument("project_costs: encoder shape does not match spec");
    ProjectedGame pg;
    const std::size_t m = spec.w1_size, nv = spec.v_size, nu = spec.u_size;
    pg.c1x = Matrix(m, nv);
    pg.c2x = Matrix(m, nv);
    pg.c3x = Matrix(m, nv);
    pg.reachable.assign(m, false);
    pg.w1_marginal.assign(m, 0.0);
    pg.posterior_u.resize(m);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t u = 0; u < nu; ++u) pg.w1_marginal[x] += spec.prior[u] * encoder(u, x);
    for (std::size_t x = 0; x < m; ++x) {
        if (pg.w1_marginal[x] <= 0.0) continue;
        pg.reachable[x] = true;
        std::vector<double> pu(nu);
        for (std::size_t u = 0; u < nu; ++u) pu[u] = spec.prior[u] * encoder(u, x) / pg.w1_marginal[x];
        pg.posterior_u[x] = Belief(BeliefSpace::source, pu);
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t u = 0; u < nu; ++u) {
                pg.c1x(x, v) += pu[u] * spec.cost1(u, v);
                pg.c2x(x, v) += pu[u] * spec.cost2(u, v);
                pg.c3x(x, v) += pu[u] * spec.cost3(u, v);
            }
    }
    return pg;
}

// Belief parameter (P of relay-input symbol 1) at which the decoder swaps
// actions; the formal crossing of the two projected cost lines. Falls back
// to a dominant-action result when the crossing leaves [0,1].
struct ThresholdResult {
    bool has_crossing = false;
    double g = std::numeric_limits<double>::quiet_NaN();
    std::size_t dominant_action = 0;
};

inline ThresholdResult decoder_threshold(const GameSpec& spec, const Kernel& encoder) {
    if (spec.w1_size != 2 || spec.v_size != 2)
        throw std::invalid_argument("decoder_threshold: defined for binary relay-input and action alphabets");
    ProjectedGame pg = project_costs(spec, encoder);
    if (!pg.reachable[0] || !pg.reachable[1])
        throw std::domain_error("decoder_threshold: both relay-input symbols must be reachable");
    // gap(t) = E_t[c3x(.,0)] - E_t[c3x(.,1)], affine in t
    double g0 = pg.c3x(0, 0) - pg.c3x(0, 1);
    double g1 = pg.c3x(1, 0) - pg.c3x(1, 1);
    ThresholdResult res;
    double d = g0 - g1;
    if (std::abs(d) < 1e-15) {
        res.dominant_action = g0 <= 0.0 ? 0 : 1;
        return res;
    }
    double t = g0 / d;
    res.g = t;
    if (t >= 0.0 && t <= 1.0) {
        res.has_crossing = true;
    } else {
        double mid0 = 0.5 * (g0 + g1);
        res.dominant_action = mid0 <= 0.0 ? 0 : 1;
    }
    return res;
}

// One admissible relay play: a splitting of the relay-input marginal with
// a decoder best response chosen at each posterior.
struct RelayDecoderOption {
    Splitting split;
    Kernel relay;
    Kernel decoder;
    std::vector<std::size_t> actions; // per splitting atom
    double relay_cost = 0.0;
    double encoder_cost = 0.0;
    double decoder_cost = 0.0;
    double info_w1w2 = 0.0; // bits, from the splitting
    bool uninformative = false;
};

struct BestResponseOptions {
    double tie_tol = kDefaultTieTol;
    std::size_t grid = 101;         // posterior grid when the rate bound is active (binary)
    std::size_t refine_passes = 2;  // local 10x zooms around the incumbent
    std::size_t lattice_res = 24;   // posterior lattice for non-binary relay inputs
    std::size_t max_members = 64;
};

namespace detail {

struct PosteriorColumn {
    double t; // binary belief parameter
    std::size_t action;
    double f1, f2, f3;
    double entropy;
};

inline void binary_columns_at(const ProjectedGame& pg, double t, double tie_tol,
                              std::vector<PosteriorColumn>& out) {
    double ev0 = (1.0 - t) * pg.c3x(0, 0) + t * pg.c3x(1, 0);
    std::size_t nv = pg.c3x.cols;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> ev(nv);
    for (std::size_t v = 0; v < nv; ++v) {
        ev[v] = (1.0 - t) * pg.c3x(0, v) + t * pg.c3x(1, v);
        best = std::min(best, ev[v]);
    }
    (void)ev0;
    for (std::size_t v = 0; v < nv; ++v) {
        if (ev[v] > best + tie_tol) continue;
        PosteriorColumn col;
        col.t = t;
        col.action = v;
        col.f1 = (1.0 - t) * pg.c1x(0, v) + t * pg.c1x(1, v);
        col.f2 = (1.0 - t) * pg.c2x(0, v) + t * pg.c2x(1, v);
        col.f3 = ev[v];
        col.entropy = binary_entropy_bits(t);
        out.push_back(col);
    }
}

} // namespace detail

// Relay best responses to an encoder: splittings of the relay-input belief
// minimizing expected relay cost, each paired with the decoder responses its
// posteriors induce. Decoder ties resolve inside the relay's argmin; the full
// near-optimal set propagates so the encoder's worst case can be taken later.
// With rate2_active only splittings with I(W1;W2) <= r2 are admitted; the
// uninformative splitting keeps the feasible set non-empty at any rate.
inline ResponseSet<RelayDecoderOption> relay_best_response(const GameSpec& spec, const Kernel& encoder,
                                                           bool rate2_active = false,
                                                           const BestResponseOptions& opt = {}) {
    ProjectedGame pg = project_costs(spec, encoder);
    ResponseSet<RelayDecoderOption> out;
    out.tie_tol = opt.tie_tol;

    std::vector<std::size_t> reach;
    for (std::size_t x = 0; x < spec.w1_size; ++x)
        if (pg.reachable[x]) reach.push_back(x);
    if (reach.empty()) throw std::domain_error("relay_best_response: encoder output has no support");

    auto belief_from_param = [&](double t) {
        std::vector<double> q(spec.w1_size, 0.0);
        if (reach.size() == 1) {
            q[reach[0]] = 1.0;
        } else {
            q[reach[0]] = 1.0 - t;
            q[reach[1]] = t;
        }
        return Belief(BeliefSpace::relay_input, q);
    };

    auto finish_option = [&](const std::vector<double>& params, const std::vector<std::size_t>& actions,
                             const std::vector<double>& weights, double f2, double f1, double f3,
                             double info_bits, bool uninformative) {
        RelayDecoderOption o;
        o.actions = actions;
        o.relay_cost = f2;
        o.encoder_cost = f1;
        o.decoder_cost = f3;
        o.info_w1w2 = info_bits;
        o.uninformative = uninformative;
        for (std::size_t i = 0; i < params.size(); ++i)
            o.split.atoms.push_back({weights[i], belief_from_param(params[i])});
        Belief w1_prior(BeliefSpace::relay_input, pg.w1_marginal);
        o.relay = splitting_to_kernel(w1_prior, o.split);
        // pad the relay kernel out to w2_size outputs
        if (o.relay.cols < spec.w2_size) {
            Kernel k(spec.w1_size, spec.w2_size);
            for (std::size_t r = 0; r < k.rows; ++r)
                for (std::size_t c = 0; c < o.relay.cols; ++c) k(r, c) = o.relay(r, c);
            o.relay = k;
        }
        o.decoder = Kernel(spec.w2_size, spec.v_size);
        for (std::size_t w2 = 0; w2 < spec.w2_size; ++w2) {
            std::size_t act = w2 < actions.size() ? actions[w2] : actions.back();
            o.decoder(w2, act) = 1.0;
        }
        return o;
    };

    if (reach.size() <= 2) {
        // belief space over reachable inputs is an interval (or a point)
        double p1 = reach.size() == 1 ? 1.0 : pg.w1_marginal[reach[1]] / (pg.w1_marginal[reach[0]] + pg.w1_marginal[reach[1]]);
        Matrix c1r(reach.size(), spec.v_size), c2r(reach.size(), spec.v_size), c3r(reach.size(), spec.v_size);
        for (std::size_t i = 0; i < reach.size(); ++i)
            for (std::size_t v = 0; v < spec.v_size; ++v) {
                c1r(i, v) = pg.c1x(reach[i], v);
                c2r(i, v) = pg.c2x(reach[i], v);
                c3r(i, v) = pg.c3x(reach[i], v);
            }

        if (reach.size() == 1) {
            // single atom: decoder ties propagate as separate members
            Belief q(BeliefSpace::relay_input, {1.0});
            auto br = decoder_best_action(q, c3r, opt.tie_tol);
            double bestf2 = std::numeric_limits<double>::infinity();
            for (const auto& e : br.members) bestf2 = std::min(bestf2, c2r(0, e.item));
            for (const auto& e : br.members) {
                if (c2r(0, e.item) > bestf2 + opt.tie_tol) continue;
                out.members.push_back(
                    {finish_option({1.0}, {e.item}, {1.0}, c2r(0, e.item), c1r(0, e.item), c3r(0, e.item), 0.0, true),
                     c2r(0, e.item)});
            }
            return out;
        }

        ProjectedGame pr;
        pr.c1x = c1r;
        pr.c2x = c2r;
        pr.c3x = c3r;

        // candidate posteriors: interval ends, decoder switch beliefs, the prior,
        // plus a grid (refined around the incumbent) when the rate bound binds
        std::vector<double> params{0.0, 1.0, p1};
        {
            BeliefCostFunction f3 = BeliefCostFunction::from_tables(c3r, c3r, TieRule::favorable, opt.tie_tol);
            for (double t : f3.crossings_1d()) params.push_back(t);
        }
        double hp = binary_entropy_bits(p1);
        double min_avg_entropy = rate2_active ? hp - spec.r2 : -1.0;
        bool need_grid = rate2_active && min_avg_entropy > kRateSlackTol;
        if (need_grid)
            for (std::size_t i = 0; i <= opt.grid; ++i)
                params.push_back(static_cast<double>(i) / static_cast<double>(opt.grid));

        auto run_pass = [&](const std::vector<double>& ps) {
            std::vector<detail::PosteriorColumn> cols;
            for (double t : ps) detail::binary_columns_at(pr, t, opt.tie_tol, cols);
            return cols;
        };

        std::vector<double> sorted_params = params;
        std::sort(sorted_params.begin(), sorted_params.end());
        sorted_params.erase(std::unique(sorted_params.begin(), sorted_params.end(),
                                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                            sorted_params.end());
        std::vector<detail::PosteriorColumn> cols = run_pass(sorted_params);

        struct Candidate {
            double f2, f1, f3, info;
            std::vector<double> params;
            std::vector<std::size_t> actions;
            std::vector<double> weights;
            bool uninformative;
        };

        auto scan = [&](const std::vector<detail::PosteriorColumn>& cs, double keep_above,
                        std::vector<Candidate>* collect, double* best_f2, Candidate* best_c) {
            // singletons at the prior
            for (const auto& c : cs) {
                if (std::abs(c.t - p1) > 1e-14) continue;
                Candidate cand{c.f2, c.f1, c.f3, 0.0, {c.t}, {c.action}, {1.0}, true};
                if (cand.f2 < *best_f2 - 1e-15) {
                    *best_f2 = cand.f2;
                    *best_c = cand;
                }
                if (collect && cand.f2 <= keep_above) collect->push_back(cand);
            }
            for (std::size_t i = 0; i < cs.size(); ++i) {
                if (cs[i].t > p1 + 1e-14) continue;
                for (std::size_t j = 0; j < cs.size(); ++j) {
                    if (cs[j].t < p1 - 1e-14 || cs[j].t <= cs[i].t + 1e-14) continue;
                    double lam1 = (p1 - cs[i].t) / (cs[j].t - cs[i].t);
                    double lam0 = 1.0 - lam1;
                    double avg_h = lam0 * cs[i].entropy + lam1 * cs[j].entropy;
                    if (rate2_active && avg_h < min_avg_entropy - kRateSlackTol) continue;
                    double f2 = lam0 * cs[i].f2 + lam1 * cs[j].f2;
                    Candidate cand{f2,
                                   lam0 * cs[i].f1 + lam1 * cs[j].f1,
                                   lam0 * cs[i].f3 + lam1 * cs[j].f3,
                                   std::max(0.0, hp - avg_h),
                                   {cs[i].t, cs[j].t},
                                   {cs[i].action, cs[j].action},
                                   {lam0, lam1},
                                   false};
                    if (f2 < *best_f2 - 1e-15) {
                        *best_f2 = f2;
                        *best_c = cand;
                    }
                    if (collect && f2 <= keep_above) collect->push_back(cand);
                }
            }
        };

        double best_f2 = std::numeric_limits<double>::infinity();
        Candidate incumbent;
        scan(cols, -std::numeric_limits<double>::infinity(), nullptr, &best_f2, &incumbent);

        if (need_grid) {
            double step = 1.0 / static_cast<double>(opt.grid);
            for (std::size_t pass = 0; pass < opt.refine_passes; ++pass) {
                std::vector<double> extra = sorted_params;
                for (double center : incumbent.params) {
                    for (int s = -10; s <= 10; ++s) {
                        double t = center + static_cast<double>(s) * step / 10.0;
                        if (t >= 0.0 && t <= 1.0) extra.push_back(t);
                    }
                }
                std::sort(extra.begin(), extra.end());
                extra.erase(std::unique(extra.begin(), extra.end(),
                                        [](double a, double b) { return std::abs(a - b) < 1e-14; }),
                            extra.end());
                cols = run_pass(extra);
                scan(cols, -std::numeric_limits<double>::infinity(), nullptr, &best_f2, &incumbent);
                step /= 10.0;
                sorted_params = std::move(extra);
            }
        }

        std::vector<Candidate> ties;
        double dummy_best = std::numeric_limits<double>::infinity();
        Candidate dummy;
        scan(cols, best_f2 + opt.tie_tol, &ties, &dummy_best, &dummy);

        // deterministic order: uninformative first, then by posterior params and actions
        std::sort(ties.begin(), ties.end(), [](const Candidate& a, const Candidate& b) {
            if (a.uninformative != b.uninformative) return a.uninformative;
            if (a.params != b.params) return a.params < b.params;
            return a.actions < b.actions;
        });
        ties.erase(std::unique(ties.begin(), ties.end(),
                               [](const Candidate& a, const Candidate& b) {
                                   return a.params == b.params && a.actions == b.actions;
                               }),
                   ties.end());

        // keep the encoder's worst case in the stored set even when capped
        std::size_t worst_idx = 0;
        for (std::size_t i = 1; i < ties.size(); ++i)
            if (ties[i].f1 > ties[worst_idx].f1 + 1e-15) worst_idx = i;

        for (std::size_t i = 0; i < ties.size(); ++i) {
            if (out.members.size() >= opt.max_members && i != worst_idx) continue;
            const Candidate& c = ties[i];
            out.members.push_back(
                {finish_option(c.params, c.actions, c.weights, c.f2, c.f1, c.f3, c.info, c.uninformative), c.f2});
        }
        return out;
    }

    // general relay-input alphabet: lattice LP over the reachable sub-simplex
    const std::size_t kr = reach.size();
    std::vector<double> prior_r(kr);
    double tot = 0.0;
    for (std::size_t i = 0; i < kr; ++i) tot += pg.w1_marginal[reach[i]];
    for (std::size_t i = 0; i < kr; ++i) prior_r[i] = pg.w1_marginal[reach[i]] / tot;
    Belief prior_belief(BeliefSpace::relay_input, prior_r);

    std::vector<std::vector<double>> lattice;
    detail::simplex_lattice(kr, opt.lattice_res, lattice);
    lattice.push_back(prior_r);

    std::vector<Belief> pts;
    std::vector<double> f1s, f2s, f3s, hs;
    std::vector<std::size_t> acts;
    Matrix c3r(kr, spec.v_size);
    for (std::size_t i = 0; i < kr; ++i)
        for (std::size_t v = 0; v < spec.v_size; ++v) c3r(i, v) = pg.c3x(reach[i], v);
    for (const auto& q : lattice) {
        Belief b(BeliefSpace::relay_input, q);
        auto br = decoder_best_action(b, c3r, opt.tie_tol);
        for (const auto& e : br.members) {
            double f1 = 0.0, f2 = 0.0;
            for (std::size_t i = 0; i < kr; ++i) {
                f1 += q[i] * pg.c1x(reach[i], e.item);
                f2 += q[i] * pg.c2x(reach[i], e.item);
            }
            pts.push_back(b);
            f1s.push_back(f1);
            f2s.push_back(f2);
            f3s.push_back(e.value);
            hs.push_back(entropy_bits(q));
            acts.push_back(e.item);
        }
    }

    double hp = entropy_bits(prior_r);
    double min_h = hp - spec.r2;
    const std::vector<double>* hrow = (rate2_active && min_h > kRateSlackTol) ? &hs : nullptr;

    detail::LpResult lp1 = detail::envelope_lp(pts, f2s, prior_belief, hrow, min_h);
    if (lp1.status != detail::LpResult::Status::optimal)
        throw std::runtime_error("relay_best_response: relay LP failed");
    double c2star = lp1.objective;
    detail::LpResult lp2 = detail::envelope_lp(pts, f2s, prior_belief, hrow, min_h, &f1s, /*maximize=*/true, &f2s,
                                               c2star + opt.tie_tol);

    auto emit = [&](const detail::LpResult& lp) {
        std::vector<double> params; // unused for general dim
        RelayDecoderOption o;
        double f1 = 0.0, f2 = 0.0, f3 = 0.0, avg_h = 0.0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (lp.x[j] <= 1e-12) continue;
            o.split.atoms.push_back({lp.x[j], pts[j]});
            o.actions.push_back(acts[j]);
            f1 += lp.x[j] * f1s[j];
            f2 += lp.x[j] * f2s[j];
            f3 += lp.x[j] * f3s[j];
            avg_h += lp.x[j] * hs[j];
        }
        o.relay_cost = f2;
        o.encoder_cost = f1;
        o.decoder_cost = f3;
        o.info_w1w2 = std::max(0.0, hp - avg_h);
        o.uninformative = o.split.size() == 1;
        // expand posteriors back to the full relay-input alphabet
        for (auto& a : o.split.atoms) {
            std::vector<double> full(spec.w1_size, 0.0);
            for (std::size_t i = 0; i < kr; ++i) full[reach[i]] = a.posterior[i];
            a.posterior = Belief(BeliefSpace::relay_input, full);
        }
        Belief w1_prior(BeliefSpace::relay_input, pg.w1_marginal);
        o.relay = splitting_to_kernel(w1_prior, o.split);
        if (o.relay.cols < spec.w2_size) {
            Kernel k(spec.w1_size, spec.w2_size);
            for (std::size_t r2 = 0; r2 < k.rows; ++r2)
                for (std::size_t c2 = 0; c2 < o.relay.cols; ++c2) k(r2, c2) = o.relay(r2, c2);
            o.relay = k;
        }
        o.decoder = Kernel(std::max<std::size_t>(spec.w2_size, o.split.size()), spec.v_size);
        for (std::size_t w2 = 0; w2 < o.decoder.rows; ++w2) {
            std::size_t act = w2 < o.actions.size() ? o.actions[w2] : (o.actions.empty() ? 0 : o.actions.back());
            o.decoder(w2, act) = 1.0;
        }
        return o;
    };

    out.members.push_back({emit(lp1), c2star});
    if (lp2.status == detail::LpResult::Status::optimal) {
        RelayDecoderOption adv = emit(lp2);
        if (std::abs(adv.encoder_cost - out.members[0].item.encoder_cost) > 1e-12 ||
            adv.split.size() != out.members[0].item.split.size())
            out.members.push_back({std::move(adv), lp2.x.empty() ? c2star : out.members[0].value});
    }
    return out;
}

// Worst case for the encoder over a best-response set: the member with the
// largest projected value, ties in the set's own objective included.
template <typename T, typename F>
std::pair<double, const T*> adversarial_select(const ResponseSet<T>& responses, F&& objective) {
    if (responses.empty()) throw std::invalid_argument("adversarial_select: empty response set");
    double best = -std::numeric_limits<double>::infinity();
    const T* witness = nullptr;
    for (const auto& e : responses.members) {
        double val = objective(e.item);
        if (val > best) {
            best = val;
            witness = &e.item;
        }
    }
    return {best, witness};
}

inline std::pair<double, const RelayDecoderOption*> adversarial_select(const ResponseSet<RelayDecoderOption>& responses) {
    return adversarial_select(responses, [](const RelayDecoderOption& o) { return o.encoder_cost; });
}

} // namespace cascade
