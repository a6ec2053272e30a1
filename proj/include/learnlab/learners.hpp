#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

// ---------------------------------------------------------------------------
// Batch rules
// ---------------------------------------------------------------------------

namespace detail {

inline int pick_argmin(const std::vector<double>& scores, TieBreak tie, Rng* rng,
                       double tol = 1e-12) {
    double best = scores.front();
    for (double s : scores) best = std::min(best, s);
    std::vector<int> argmins;
    for (int j = 0; j < static_cast<int>(scores.size()); ++j)
        if (scores[j] <= best + tol) argmins.push_back(j);
    switch (tie) {
        case TieBreak::lowest_index: return argmins.front();
        case TieBreak::highest_index: return argmins.back();
        case TieBreak::seeded_random:
            if (!rng) throw std::invalid_argument("pick_argmin: seeded_random requires an rng");
            return argmins[rng->below(argmins.size())];
    }
    return argmins.front();
}

}  // namespace detail

/// Empirical risk minimization over a finite class: argmin_f sum_t l(z_t, f)
/// with the stated tie-break. An empty sample ties the whole class.
inline int erm(const FiniteFunctionClass& cls, const Loss& loss, const OutcomeSpace& space,
               std::span<const int> sample, TieBreak tie = TieBreak::lowest_index,
               Rng* rng = nullptr) {
    std::vector<double> cum(cls.size(), 0.0);
    for (int z : sample) {
        if (z < 0 || z >= space.size()) throw std::invalid_argument("erm: outcome out of range");
        const Outcome& o = space.at(z);
        for (int j = 0; j < cls.size(); ++j) cum[j] += loss_eval(loss, cls, o, j);
    }
    return detail::pick_argmin(cum, tie, rng);
}

/// Offset-class ERM under squared loss. For each base index theta the
/// optimal offset has the closed form c_theta = mean(y - f_theta(x));
/// the returned pair minimizes the residual sum of squares (ties go to
/// the lowest theta).
struct OffsetFit {
    int theta = 0;
    double offset = 0.0;
    double rss = 0.0;
};

inline OffsetFit erm_offset(const OffsetClass& cls,
                            std::span<const std::pair<int, double>> sample) {
    if (sample.empty()) throw std::invalid_argument("erm_offset: empty sample (offset undefined)");
    const FiniteFunctionClass& base = cls.base;
    OffsetFit best;
    bool first = true;
    for (int theta = 0; theta < base.size(); ++theta) {
        double mean_resid = 0.0;
        for (const auto& [x, y] : sample) mean_resid += y - base.value(theta, x);
        mean_resid /= static_cast<double>(sample.size());
        double rss = 0.0;
        for (const auto& [x, y] : sample) {
            const double r = y - base.value(theta, x) - mean_resid;
            rss += r * r;
        }
        if (first || rss < best.rss - 1e-12) {
            best = OffsetFit{theta, mean_resid, rss};
            first = false;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Online rules
// ---------------------------------------------------------------------------

/// An online rule is a state machine: predict() returns the distribution
/// over class members played at the current step (depending only on the
/// outcomes fed to update() so far plus internal seed randomness).
class OnlineRule {
public:
    virtual ~OnlineRule() = default;
    virtual const std::vector<double>& predict() = 0;
    virtual void update(int outcome_index) = 0;
};

using RuleFactory = std::function<std::unique_ptr<OnlineRule>(std::uint64_t seed)>;

/// Exponential weights over a finite class: w_f proportional to
/// exp(-eta_t * cumulative loss of f), with the anytime schedule
/// eta_t = sqrt(8 ln|F| / t) / B by default.
class Hedge : public OnlineRule {
public:
    Hedge(const FiniteFunctionClass& cls, Loss loss, const OutcomeSpace& space,
          std::function<double(int)> eta_schedule = nullptr)
        : cls_(&cls), loss_(loss), space_(&space), cum_(cls.size(), 0.0), weights_(cls.size()) {
        if (!loss.compatible_with(cls.labels()))
            throw std::invalid_argument("Hedge: loss incompatible with labels");
        const double bound = loss.bound(cls.labels());
        const double logn = std::log(std::max(2, cls.size()));
        eta_ = eta_schedule ? std::move(eta_schedule) : [bound, logn](int t) {
            return std::sqrt(8.0 * logn / t) / std::max(bound, 1e-12);
        };
    }

    const std::vector<double>& predict() override {
        const double eta = eta_(t_);
        double min_cum = cum_.front();
        for (double c : cum_) min_cum = std::min(min_cum, c);
        double total = 0.0;
        for (std::size_t j = 0; j < cum_.size(); ++j) {
            weights_[j] = std::exp(-eta * (cum_[j] - min_cum));
            total += weights_[j];
        }
        for (auto& w : weights_) w /= total;
        return weights_;
    }

    void update(int z) override {
        const Outcome& o = space_->at(z);
        for (int j = 0; j < cls_->size(); ++j) cum_[j] += loss_eval(loss_, *cls_, o, j);
        ++t_;
    }

private:
    const FiniteFunctionClass* cls_;
    Loss loss_;
    const OutcomeSpace* space_;
    std::function<double(int)> eta_;
    std::vector<double> cum_;
    std::vector<double> weights_;
    int t_ = 1;
};

/// Follow-the-leader: plays a point mass on the ERM of the prefix.
class FollowTheLeader : public OnlineRule {
public:
    FollowTheLeader(const FiniteFunctionClass& cls, Loss loss, const OutcomeSpace& space,
                    TieBreak tie = TieBreak::lowest_index)
        : cls_(&cls), loss_(loss), space_(&space), tie_(tie), cum_(cls.size(), 0.0),
          weights_(cls.size(), 0.0) {}

    const std::vector<double>& predict() override {
        std::fill(weights_.begin(), weights_.end(), 0.0);
        weights_[detail::pick_argmin(cum_, tie_, nullptr)] = 1.0;
        return weights_;
    }

    void update(int z) override {
        const Outcome& o = space_->at(z);
        for (int j = 0; j < cls_->size(); ++j) cum_[j] += loss_eval(loss_, *cls_, o, j);
    }

private:
    const FiniteFunctionClass* cls_;
    Loss loss_;
    const OutcomeSpace* space_;
    TieBreak tie_;
    std::vector<double> cum_;
    std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Prequential runner
// ---------------------------------------------------------------------------

struct PrequentialStep {
    std::vector<double> q;        // predict() before seeing z_t (this is fhat_{t-1})
    int z = 0;                    // realized outcome
    double realized_loss = 0.0;   // E_{f~q} l(z_t, f)
    double conditional_risk = 0.0;  // E_{f~q} l(P_t, f)
};

struct Trajectory {
    Path path;
    std::vector<PrequentialStep> steps;
};

/// Samples a path and replays it prequentially: the rule predicts before
/// each outcome is revealed, so predictions depend only on z_{1:t-1}.
inline Trajectory run_prequential(OnlineRule& rule, const FiniteFunctionClass& cls,
                                  const Loss& loss, const ProcessKernel& kernel,
                                  std::uint64_t seed) {
    if (!(kernel.outcomes().domain() == cls.domain()))
        throw std::invalid_argument("run_prequential: kernel/class domain mismatch");
    Trajectory traj;
    traj.path = kernel.sample_path(seed);
    const OutcomeSpace& space = kernel.outcomes();
    for (int t = 0; t < kernel.horizon(); ++t) {
        PrequentialStep step;
        step.q = rule.predict();
        step.z = traj.path.z[t];
        const Outcome& o = space.at(step.z);
        const Distribution& pt = traj.path.step_dists[t];
        for (int j = 0; j < cls.size(); ++j) {
            if (step.q[j] == 0.0) continue;
            step.realized_loss += step.q[j] * loss_eval(loss, cls, o, j);
            double cond = 0.0;
            for (int z = 0; z < space.size(); ++z)
                if (pt[z] > 0.0) cond += pt[z] * loss_eval(loss, cls, space.at(z), j);
            step.conditional_risk += step.q[j] * cond;
        }
        rule.update(step.z);
        traj.steps.push_back(std::move(step));
    }
    return traj;
}

}  // namespace learnlab
