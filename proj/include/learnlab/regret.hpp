#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "learnlab/adversarial.hpp"
#include "learnlab/classes.hpp"
#include "learnlab/learners.hpp"
#include "learnlab/parallel.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

// ---------------------------------------------------------------------------
// Estimates
// ---------------------------------------------------------------------------

struct RegretEstimate {
    double mean = 0.0;
    double stderr_ = 0.0;  // sample std / sqrt(reps)
    int reps = 0;
    std::uint64_t seed = 0;
    bool lower_estimate = false;  // search stood in for a supremum
    std::vector<double> values;   // per-replicate values, replicate order

    static RegretEstimate summarize(std::vector<double> vals, std::uint64_t seed) {
        RegretEstimate est;
        est.seed = seed;
        est.reps = static_cast<int>(vals.size());
        if (vals.empty()) return est;
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double ss = 0.0;
        for (double v : vals) ss += (v - mean) * (v - mean);
        est.mean = mean;
        est.stderr_ = vals.size() > 1
                          ? std::sqrt(ss / (vals.size() - 1)) / std::sqrt(double(vals.size()))
                          : 0.0;
        est.values = std::move(vals);
        return est;
    }
};

/// Replicate r of a run seeded with s draws its path from path_seed(s, r)
/// and any rule/tie-break randomness from aux_seed(s, r).
inline std::uint64_t path_seed(std::uint64_t seed, int rep) { return derive_seed(seed, 2 * rep); }
inline std::uint64_t aux_seed(std::uint64_t seed, int rep) { return derive_seed(seed, 2 * rep + 1); }

// ---------------------------------------------------------------------------
// Pointwise regrets
// ---------------------------------------------------------------------------

/// ell(P, f) - min_{f'} ell(P, f').
inline double p_regret(const FiniteFunctionClass& cls, const Loss& loss, const OutcomeSpace& space,
                       const Distribution& p, int j) {
    const double own = expected_loss(loss, cls, space, p, j);
    double best = own;
    for (int f = 0; f < cls.size(); ++f)
        best = std::min(best, expected_loss(loss, cls, space, p, f));
    return own - best;
}

namespace detail {

/// ell(P_t, f) for every step of a realized path; row t, column f.
inline std::vector<std::vector<double>> conditional_loss_matrix(const FiniteFunctionClass& cls,
                                                                const Loss& loss,
                                                                const OutcomeSpace& space,
                                                                const Path& path) {
    const int n = path.horizon();
    std::vector<std::vector<double>> m(n, std::vector<double>(cls.size(), 0.0));
    for (int t = 0; t < n; ++t) {
        const Distribution& pt = path.step_dists[t];
        for (int j = 0; j < cls.size(); ++j) {
            double acc = 0.0;
            for (int z = 0; z < space.size(); ++z)
                if (pt[z] > 0.0) acc += pt[z] * loss_eval(loss, cls, space.at(z), j);
            m[t][j] = acc;
        }
    }
    return m;
}

inline double min_mean_column(const std::vector<std::vector<double>>& m, int nf) {
    std::vector<double> cum(nf, 0.0);
    for (const auto& row : m)
        for (int j = 0; j < nf; ++j) cum[j] += row[j];
    const double n = static_cast<double>(m.size());
    double best = cum.front() / n;
    for (int j = 1; j < nf; ++j) best = std::min(best, cum[j] / n);
    return best;
}

}  // namespace detail

/// R_n(Z_{1:n}, f) = (1/n) sum_t [ell(P_t, f) - min_g ell(P_t, g)], using
/// the conditionals cached along the realized path.
inline double process_regret(const FiniteFunctionClass& cls, const Loss& loss,
                             const OutcomeSpace& space, const Path& path, int j) {
    const auto m = detail::conditional_loss_matrix(cls, loss, space, path);
    double acc = 0.0;
    for (const auto& row : m) {
        double best = row.front();
        for (double v : row) best = std::min(best, v);
        acc += row[j] - best;
    }
    return acc / path.horizon();
}

// ---------------------------------------------------------------------------
// Batch value estimators
// ---------------------------------------------------------------------------

/// Monte-Carlo estimate of E[ R_n(Z, erm(Z)) - min_f R_n(Z, f) ]. The
/// per-step comparator terms cancel in the difference, so each replicate
/// evaluates (1/n) sum_t ell(P_t, fhat) - min_f (1/n) sum_t ell(P_t, f).
inline RegretEstimate gen_value_estimate(const FiniteFunctionClass& cls, const Loss& loss,
                                         const ProcessKernel& kernel, TieBreak tie, int reps,
                                         std::uint64_t seed) {
    const OutcomeSpace& space = kernel.outcomes();
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const Path path = kernel.sample_path(path_seed(seed, r));
        Rng rule_rng(aux_seed(seed, r));
        const int fhat = erm(cls, loss, space, path.z, tie, &rule_rng);
        const auto m = detail::conditional_loss_matrix(cls, loss, space, path);
        std::vector<double> cum(cls.size(), 0.0);
        for (const auto& row : m)
            for (int j = 0; j < cls.size(); ++j) cum[j] += row[j];
        const double n = static_cast<double>(path.horizon());
        double best = cum.front() / n;
        for (int j = 1; j < cls.size(); ++j) best = std::min(best, cum[j] / n);
        vals[r] = cum[fhat] / n - best;
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

/// The iid-regret estimator E[pregret(P, erm(Z))] for the product process
/// with marginal P, sharing the path/rule seed derivation with
/// gen_value_estimate so the two coincide replicate-by-replicate there.
inline RegretEstimate iid_value_estimate(const FiniteFunctionClass& cls, const Loss& loss,
                                         const OutcomeSpace& space, const Distribution& p, int n,
                                         TieBreak tie, int reps, std::uint64_t seed) {
    const ProductKernel kernel(space, p, n);
    std::vector<double> precomputed(cls.size());
    for (int j = 0; j < cls.size(); ++j) precomputed[j] = expected_loss(loss, cls, space, p, j);
    double best = precomputed.front();
    for (double v : precomputed) best = std::min(best, v);

    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const Path path = kernel.sample_path(path_seed(seed, r));
        Rng rule_rng(aux_seed(seed, r));
        const int fhat = erm(cls, loss, space, path.z, tie, &rule_rng);
        vals[r] = precomputed[fhat] - best;
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

// ---------------------------------------------------------------------------
// Prequential and online estimators
// ---------------------------------------------------------------------------

/// Normalized regret of a prequential trajectory:
///   (1/n) sum_t E_{f~q_t} ell(P_t, f) - min_f (1/n) sum_t ell(P_t, f).
inline double preq_regret_of_trajectory(const FiniteFunctionClass& cls, const Loss& loss,
                                        const OutcomeSpace& space, const Trajectory& traj) {
    const int n = static_cast<int>(traj.steps.size());
    double acc = 0.0;
    for (const auto& step : traj.steps) acc += step.conditional_risk;
    const auto m = detail::conditional_loss_matrix(cls, loss, space, traj.path);
    return acc / n - detail::min_mean_column(m, cls.size());
}

inline RegretEstimate preq_value_estimate(const FiniteFunctionClass& cls, const Loss& loss,
                                          const ProcessKernel& kernel, const RuleFactory& factory,
                                          int reps, std::uint64_t seed) {
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        auto rule = factory(aux_seed(seed, r));
        const Trajectory traj = run_prequential(*rule, cls, loss, kernel, path_seed(seed, r));
        vals[r] = preq_regret_of_trajectory(cls, loss, kernel.outcomes(), traj);
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

/// Expected normalized individual-sequence regret of a rule on a fixed
/// sequence (expectation over the rule's prediction distributions).
inline double online_regret_on_sequence(const FiniteFunctionClass& cls, const Loss& loss,
                                        const OutcomeSpace& space, OnlineRule& rule,
                                        std::span<const int> seq) {
    const int n = static_cast<int>(seq.size());
    double acc = 0.0;
    std::vector<double> cum(cls.size(), 0.0);
    for (int z : seq) {
        const auto& q = rule.predict();
        const Outcome& o = space.at(z);
        double step_total = 0.0;  // per-step subtotal, matching the prequential accumulation
        for (int j = 0; j < cls.size(); ++j) {
            if (q[j] == 0.0) continue;
            step_total += q[j] * (1.0 * loss_eval(loss, cls, o, j));
        }
        acc += step_total;
        for (int j = 0; j < cls.size(); ++j) cum[j] += 1.0 * loss_eval(loss, cls, o, j);
        rule.update(z);
    }
    const double nn = static_cast<double>(n);
    double best = cum.front() / nn;
    for (int j = 1; j < cls.size(); ++j) best = std::min(best, cum[j] / nn);
    return acc / nn - best;
}

/// Worst-case expected regret over sequences: exhaustive when |Z|^n fits
/// the budget, otherwise randomized greedy ascent flagged as a lower
/// estimate. The rule is re-instantiated per candidate sequence with a
/// fixed seed so randomized tie-breaks stay comparable.
inline RegretEstimate online_worst_case(const FiniteFunctionClass& cls, const Loss& loss,
                                        const OutcomeSpace& space, const RuleFactory& factory,
                                        int n, bool exact, std::uint64_t seed,
                                        std::size_t budget = 1'000'000) {
    const int nz = space.size();
    auto eval = [&](const std::vector<int>& seq) {
        auto rule = factory(seed);
        return online_regret_on_sequence(cls, loss, space, *rule, seq);
    };
    RegretEstimate est;
    est.seed = seed;
    if (exact) {
        double count = 1;
        for (int t = 0; t < n; ++t) count *= nz;
        if (count > static_cast<double>(budget))
            throw ResourceBudgetError("online_worst_case: |Z|^n exceeds budget " +
                                      std::to_string(budget));
        std::vector<int> seq(n, 0);
        double worst = -1e300;
        for (;;) {
            worst = std::max(worst, eval(seq));
            int pos = n - 1;
            while (pos >= 0 && ++seq[pos] == nz) seq[pos--] = 0;
            if (pos < 0) break;
        }
        est.mean = worst;
        est.reps = static_cast<int>(count);
        return est;
    }
    Rng rng(seed);
    double worst = -1e300;
    const int restarts = 30;
    for (int r = 0; r < restarts; ++r) {
        std::vector<int> seq(n);
        for (int t = 0; t < n; ++t) seq[t] = static_cast<int>(rng.below(nz));
        double cur = eval(seq);
        bool improved = true;
        while (improved) {
            improved = false;
            for (int t = 0; t < n; ++t) {
                int best_z = seq[t];
                double best_v = cur;
                const int keep = seq[t];
                for (int z = 0; z < nz; ++z) {
                    if (z == keep) continue;
                    seq[t] = z;
                    const double v = eval(seq);
                    if (v > best_v + 1e-15) {
                        best_v = v;
                        best_z = z;
                    }
                }
                seq[t] = best_z;
                if (best_z != keep) {
                    cur = best_v;
                    improved = true;
                }
            }
        }
        worst = std::max(worst, cur);
    }
    est.mean = worst;
    est.reps = restarts;
    est.lower_estimate = true;
    return est;
}

// ---------------------------------------------------------------------------
// Native estimators for the adversarial threshold construction
// ---------------------------------------------------------------------------

/// gen-value of ERM over the full threshold class on the adversarial
/// process. By realizability the comparator infimum is zero along every
/// path, so the value equals the mean per-step conditional risk.
inline RegretEstimate adversarial_gen_risk_estimate(const AdversarialProcess& proc, TieBreak tie,
                                                    int reps, std::uint64_t seed) {
    const int bits = (1 << proc.n) + 1;
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const AdversarialPath path = proc.sample(path_seed(seed, r));
        Rng rule_rng(aux_seed(seed, r));
        const BitVec theta = threshold_erm(adversarial_sample(path), bits, tie, &rule_rng);
        vals[r] = adversarial_mean_step_risk(path, theta);
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

/// Absolute-loss analogue after the label transform 1 -> u, 0 -> u'.
/// Absolute-loss ERM over the transformed thresholds selects the same
/// consistency interval as the binary ERM.
inline RegretEstimate adversarial_regression_risk_estimate(const AdversarialProcess& proc,
                                                           const RegressionLevels& levels,
                                                           TieBreak tie, int reps,
                                                           std::uint64_t seed) {
    const int bits = (1 << proc.n) + 1;
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const AdversarialPath path = proc.sample(path_seed(seed, r));
        Rng rule_rng(aux_seed(seed, r));
        const BitVec theta = threshold_erm(adversarial_sample(path), bits, tie, &rule_rng);
        vals[r] = adversarial_regression_mean_step_risk(path, theta, levels.u, levels.uprime);
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

// ---------------------------------------------------------------------------
// Uniform martingale deviations
// ---------------------------------------------------------------------------

/// Monte-Carlo mean of sup_f |(1/n) sum_t (f(X_t) - E[f(X_t) | Z_{1:t-1}])|
/// with conditional means computed exactly from the kernel along the path.
inline RegretEstimate martingale_deviation(const ProcessKernel& kernel,
                                           const FiniteFunctionClass& cls, int reps,
                                           std::uint64_t seed) {
    if (!(kernel.outcomes().domain() == cls.domain()))
        throw std::invalid_argument("martingale_deviation: kernel/class domain mismatch");
    const OutcomeSpace& space = kernel.outcomes();
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const Path path = kernel.sample_path(path_seed(seed, r));
        const int n = path.horizon();
        double best = 0.0;
        for (int j = 0; j < cls.size(); ++j) {
            double acc = 0.0;
            for (int t = 0; t < n; ++t) {
                double cond_mean = 0.0;
                const Distribution& pt = path.step_dists[t];
                for (int z = 0; z < space.size(); ++z)
                    if (pt[z] > 0.0) cond_mean += pt[z] * cls.value(j, space.at(z).x);
                acc += cls.value(j, space.at(path.z[t]).x) - cond_mean;
            }
            best = std::max(best, std::abs(acc / n));
        }
        vals[r] = best;
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

/// The corresponding iid deviation sup_f |(1/n) sum_t f(X_t) - Pf| with
/// Pf computed once from the first-step marginal. Shares the path seeds
/// with martingale_deviation, to which it reduces on product kernels.
inline RegretEstimate ulln_deviation(const ProcessKernel& kernel, const FiniteFunctionClass& cls,
                                     int reps, std::uint64_t seed) {
    if (!(kernel.outcomes().domain() == cls.domain()))
        throw std::invalid_argument("ulln_deviation: kernel/class domain mismatch");
    const OutcomeSpace& space = kernel.outcomes();
    std::vector<double> vals(reps);
    parallel_for_index(reps, [&](int r) {
        const Path path = kernel.sample_path(path_seed(seed, r));
        const int n = path.horizon();
        double best = 0.0;
        for (int j = 0; j < cls.size(); ++j) {
            double mean_f = 0.0;
            const Distribution& p1 = path.step_dists.front();
            for (int z = 0; z < space.size(); ++z)
                if (p1[z] > 0.0) mean_f += p1[z] * cls.value(j, space.at(z).x);
            double acc = 0.0;
            for (int t = 0; t < n; ++t) acc += cls.value(j, space.at(path.z[t]).x) - mean_f;
            best = std::max(best, std::abs(acc / n));
        }
        vals[r] = best;
    });
    return RegretEstimate::summarize(std::move(vals), seed);
}

// ---------------------------------------------------------------------------
// Three-term prequential decomposition
// ---------------------------------------------------------------------------

struct DecompositionReport {
    RegretEstimate term_martingale;  // (I): conditional minus realized loss of the predictions
    RegretEstimate term_online;      // (II): individual-sequence regret
    RegretEstimate term_comparator;  // (III): empirical minimizer minus conditional minimizer
    RegretEstimate total;
    double max_sum_mismatch = 0.0;  // max_r |I_r + II_r + III_r - total_r|
};

inline DecompositionReport decomposition_report(const FiniteFunctionClass& cls, const Loss& loss,
                                                const ProcessKernel& kernel,
                                                const RuleFactory& factory, int reps,
                                                std::uint64_t seed) {
    const OutcomeSpace& space = kernel.outcomes();
    std::vector<double> v1(reps), v2(reps), v3(reps), vt(reps), gap(reps);
    parallel_for_index(reps, [&](int r) {
        auto rule = factory(aux_seed(seed, r));
        const Trajectory traj = run_prequential(*rule, cls, loss, kernel, path_seed(seed, r));
        const int n = static_cast<int>(traj.steps.size());
        double cond_pred = 0.0, realized_pred = 0.0;
        std::vector<double> cum_emp(cls.size(), 0.0);
        for (const auto& step : traj.steps) {
            cond_pred += step.conditional_risk;
            realized_pred += step.realized_loss;
            const Outcome& o = space.at(step.z);
            for (int j = 0; j < cls.size(); ++j) cum_emp[j] += loss_eval(loss, cls, o, j);
        }
        const auto m = detail::conditional_loss_matrix(cls, loss, space, traj.path);
        const double nn = static_cast<double>(n);
        double min_emp = cum_emp.front() / nn;
        for (int j = 1; j < cls.size(); ++j) min_emp = std::min(min_emp, cum_emp[j] / nn);
        const double min_cond = detail::min_mean_column(m, cls.size());
        v1[r] = cond_pred / nn - realized_pred / nn;
        v2[r] = realized_pred / nn - min_emp;
        v3[r] = min_emp - min_cond;
        vt[r] = cond_pred / nn - min_cond;
        gap[r] = std::abs(v1[r] + v2[r] + v3[r] - vt[r]);
    });
    DecompositionReport rep;
    rep.term_martingale = RegretEstimate::summarize(std::move(v1), seed);
    rep.term_online = RegretEstimate::summarize(std::move(v2), seed);
    rep.term_comparator = RegretEstimate::summarize(std::move(v3), seed);
    rep.total = RegretEstimate::summarize(std::move(vt), seed);
    rep.max_sum_mismatch = *std::max_element(gap.begin(), gap.end());
    return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic stationarity gap
// ---------------------------------------------------------------------------

struct StationaryGapReport {
    double sup_gap = 0.0;    // sup_f |ell(P*, f) - ell(Pbar, f)|
    double tv = 0.0;         // total variation distance between P* and Pbar
    double loss_bound = 0.0;
    bool bound_holds = false;  // sup_gap <= B * tv
};

inline StationaryGapReport stationary_gap(const FiniteFunctionClass& cls, const Loss& loss,
                                          const ProcessKernel& kernel, const Path& path,
                                          const Distribution& p_star) {
    const OutcomeSpace& space = kernel.outcomes();
    const Distribution pbar = conditional_average(kernel, path);
    StationaryGapReport rep;
    rep.loss_bound = loss.bound(cls.labels());
    rep.tv = total_variation(p_star, pbar);
    for (int j = 0; j < cls.size(); ++j) {
        const double gap = std::abs(expected_loss(loss, cls, space, p_star, j) -
                                    expected_loss(loss, cls, space, pbar, j));
        rep.sup_gap = std::max(rep.sup_gap, gap);
    }
    rep.bound_holds = rep.sup_gap <= rep.loss_bound * rep.tv + 1e-12;
    return rep;
}

}  // namespace learnlab
