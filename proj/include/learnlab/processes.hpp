#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

/// Latent record drawn per path (mixture component, bit vector, offset).
/// Exposed to evaluators only; learners never see it.
struct Hidden {
    virtual ~Hidden() = default;
};
using HiddenPtr = std::shared_ptr<const Hidden>;

/// A realized path: outcomes z_{1:n} with the conditional distribution
/// P_t cached at every step along the realized prefix.
struct Path {
    std::uint64_t seed = 0;
    HiddenPtr hidden;
    std::vector<int> z;                    // outcome indices
    std::vector<Distribution> step_dists;  // step_dists[t-1] = P_t(.|z_{1:t-1})

    int horizon() const { return static_cast<int>(z.size()); }
};

/// A stochastic process over a finite outcome space, described by its
/// explicit conditional distributions P_t(.|z_{1:t-1}). Kernels are
/// immutable; sampling draws only from `conditional`.
class ProcessKernel {
public:
    ProcessKernel(OutcomeSpace outcomes, int horizon)
        : outcomes_(std::move(outcomes)), horizon_(horizon) {
        if (horizon < 1) throw std::invalid_argument("ProcessKernel: horizon must be >= 1");
    }
    virtual ~ProcessKernel() = default;

    int horizon() const { return horizon_; }
    const OutcomeSpace& outcomes() const { return outcomes_; }
    virtual bool finite() const { return true; }
    virtual std::string name() const = 0;

    virtual HiddenPtr draw_hidden(Rng&) const { return nullptr; }

    virtual Distribution conditional(const HiddenPtr& hidden, std::span<const int> prefix) const = 0;

    virtual Path sample_path(std::uint64_t seed) const {
        Rng rng(seed);
        Path path;
        path.seed = seed;
        path.hidden = draw_hidden(rng);
        path.z.reserve(horizon_);
        path.step_dists.reserve(horizon_);
        for (int t = 1; t <= horizon_; ++t) {
            Distribution p = conditional(path.hidden, path.z);
            const int z = rng.categorical(p);
            path.step_dists.push_back(std::move(p));
            path.z.push_back(z);
        }
        return path;
    }

private:
    OutcomeSpace outcomes_;
    int horizon_;
};

// ---------------------------------------------------------------------------
// IID product process
// ---------------------------------------------------------------------------

class ProductKernel : public ProcessKernel {
public:
    ProductKernel(OutcomeSpace outcomes, Distribution p, int n)
        : ProcessKernel(std::move(outcomes), n), p_(std::move(p)) {
        if (static_cast<int>(p_.size()) != this->outcomes().size())
            throw std::invalid_argument("ProductKernel: distribution size mismatch");
        check_distribution(p_);
    }

    std::string name() const override { return "iid"; }
    const Distribution& marginal() const { return p_; }

    Distribution conditional(const HiddenPtr&, std::span<const int>) const override { return p_; }

private:
    Distribution p_;
};

// ---------------------------------------------------------------------------
// Two-component mixture of iid processes with disjoint supports
// ---------------------------------------------------------------------------

/// P_1 = lambda P + (1-lambda) Q; after the first outcome the component is
/// identified (supports are disjoint), so P_t = P or Q for all t > 1.
class MixtureIidKernel : public ProcessKernel {
public:
    MixtureIidKernel(OutcomeSpace outcomes, double lambda, Distribution p, Distribution q, int n)
        : ProcessKernel(std::move(outcomes), n),
          lambda_(lambda),
          p_(std::move(p)),
          q_(std::move(q)) {
        if (lambda < 0.0 || lambda > 1.0)
            throw std::invalid_argument("MixtureIidKernel: lambda must be in [0,1]");
        if (static_cast<int>(p_.size()) != this->outcomes().size() || p_.size() != q_.size())
            throw std::invalid_argument("MixtureIidKernel: distribution size mismatch");
        check_distribution(p_);
        check_distribution(q_);
        for (std::size_t i = 0; i < p_.size(); ++i)
            if (p_[i] > 0.0 && q_[i] > 0.0)
                throw std::invalid_argument("MixtureIidKernel: supports must be disjoint");
    }

    std::string name() const override { return "mixture"; }
    double lambda() const { return lambda_; }
    const Distribution& p() const { return p_; }
    const Distribution& q() const { return q_; }

    Distribution conditional(const HiddenPtr&, std::span<const int> prefix) const override {
        if (prefix.empty()) {
            Distribution mix(p_.size());
            for (std::size_t i = 0; i < p_.size(); ++i)
                mix[i] = lambda_ * p_[i] + (1.0 - lambda_) * q_[i];
            return mix;
        }
        return p_[prefix.front()] > 0.0 ? p_ : q_;
    }

    /// Component realized on a path (0 for P, 1 for Q); measurable from
    /// the first outcome because the supports are disjoint.
    int component_of(const Path& path) const {
        if (path.z.empty()) throw std::invalid_argument("component_of: empty path");
        return p_[path.z.front()] > 0.0 ? 0 : 1;
    }

private:
    double lambda_;
    Distribution p_, q_;
};

// ---------------------------------------------------------------------------
// Asymptotically stationary drift (independent non-identical steps)
// ---------------------------------------------------------------------------

struct DriftSchedule {
    enum class Kind { linear, power, immediate } kind = Kind::linear;
    double exponent = 1.0;  // for power

    /// Mixing weight w_t in [0,1]; w_1 = 0 for linear/power so the process
    /// starts exactly at P_start, and w_t increases towards 1.
    double weight(int t, int n) const {
        switch (kind) {
            case Kind::immediate: return 1.0;
            case Kind::linear: return static_cast<double>(t - 1) / n;
            case Kind::power: return std::pow(static_cast<double>(t - 1) / n, exponent);
        }
        return 1.0;
    }

    static DriftSchedule parse(const std::string& s, double exponent = 1.0) {
        if (s == "linear") return {Kind::linear, 1.0};
        if (s == "immediate") return {Kind::immediate, 1.0};
        if (s == "power") return {Kind::power, exponent};
        throw std::invalid_argument("DriftSchedule: unknown rate '" + s + "'");
    }
};

class DriftingKernel : public ProcessKernel {
public:
    DriftingKernel(OutcomeSpace outcomes, Distribution p_start, Distribution p_end, int n,
                   DriftSchedule schedule = {})
        : ProcessKernel(std::move(outcomes), n),
          p_start_(std::move(p_start)),
          p_end_(std::move(p_end)),
          schedule_(schedule) {
        if (static_cast<int>(p_start_.size()) != this->outcomes().size() ||
            p_start_.size() != p_end_.size())
            throw std::invalid_argument("DriftingKernel: distribution size mismatch");
        check_distribution(p_start_);
        check_distribution(p_end_);
    }

    std::string name() const override { return "drifting"; }
    const Distribution& p_end() const { return p_end_; }

    Distribution step_distribution(int t) const {
        const double w = schedule_.weight(t, horizon());
        Distribution out(p_start_.size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = (1.0 - w) * p_start_[i] + w * p_end_[i];
        return out;
    }

    Distribution conditional(const HiddenPtr&, std::span<const int> prefix) const override {
        return step_distribution(static_cast<int>(prefix.size()) + 1);
    }

private:
    Distribution p_start_, p_end_;
    DriftSchedule schedule_;
};

// ---------------------------------------------------------------------------
// Point mass at a fixed sequence
// ---------------------------------------------------------------------------

class PointMassKernel : public ProcessKernel {
public:
    PointMassKernel(OutcomeSpace outcomes, std::vector<int> sequence)
        : ProcessKernel(std::move(outcomes), static_cast<int>(sequence.size())),
          seq_(std::move(sequence)) {
        for (int z : seq_)
            if (z < 0 || z >= this->outcomes().size())
                throw std::invalid_argument("PointMassKernel: outcome index out of range");
    }

    std::string name() const override { return "point-mass"; }
    const std::vector<int>& sequence() const { return seq_; }

    Distribution conditional(const HiddenPtr&, std::span<const int> prefix) const override {
        Distribution p(outcomes().size(), 0.0);
        p[seq_[prefix.size()]] = 1.0;
        return p;
    }

private:
    std::vector<int> seq_;
};

// ---------------------------------------------------------------------------
// Path-level helpers
// ---------------------------------------------------------------------------

/// The averaged conditional law P-bar = (1/n) sum_t P_t along a realized path.
inline Distribution conditional_average(const ProcessKernel& kernel, const Path& path) {
    if (!kernel.finite())
        throw std::invalid_argument("conditional_average: finite-outcome kernels only");
    if (path.step_dists.empty()) throw std::invalid_argument("conditional_average: empty path");
    Distribution avg(kernel.outcomes().size(), 0.0);
    for (const auto& p : path.step_dists)
        for (std::size_t i = 0; i < avg.size(); ++i) avg[i] += p[i];
    for (auto& v : avg) v /= static_cast<double>(path.step_dists.size());
    return avg;
}

/// Exhaustively checks that every reachable prefix yields a normalized
/// conditional, as long as the outcome tree stays within `budget` nodes.
inline bool check_kernel_conditionals(const ProcessKernel& kernel, const HiddenPtr& hidden,
                                      std::size_t budget = 100'000) {
    std::vector<int> prefix;
    std::size_t visited = 0;
    auto walk = [&](auto&& self) -> bool {
        if (static_cast<int>(prefix.size()) == kernel.horizon()) return true;
        if (++visited > budget) throw ResourceBudgetError("check_kernel_conditionals: budget");
        Distribution p = kernel.conditional(hidden, prefix);
        check_distribution(p);
        for (int z = 0; z < static_cast<int>(p.size()); ++z) {
            if (p[z] <= 0.0) continue;
            prefix.push_back(z);
            const bool ok = self(self);
            prefix.pop_back();
            if (!ok) return false;
        }
        return true;
    };
    return walk(walk);
}

}  // namespace learnlab
