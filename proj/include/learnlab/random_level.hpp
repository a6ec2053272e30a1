#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

/// The long-range-dependent regression process: X_t iid from P_X,
/// Y_t = f*(X_t) + xi_t + xi_0 with standard normal noise and a shared
/// level xi_0 drawn once. Labels are continuous, so this kernel is the
/// one exception to the finite-outcome interface: evaluation goes through
/// the closed-form conditional risk below rather than explicit P_t tables.
class RandomLevelKernel {
public:
    RandomLevelKernel(FiniteFunctionClass base, int theta_star, Distribution p_x, int n)
        : base_(std::move(base)), theta_star_(theta_star), p_x_(std::move(p_x)), n_(n) {
        if (base_.labels().is_binary())
            throw std::invalid_argument("RandomLevelKernel: base must be real valued");
        if (theta_star < 0 || theta_star >= base_.size())
            throw std::invalid_argument("RandomLevelKernel: theta_star out of range");
        if (static_cast<int>(p_x_.size()) != base_.num_points())
            throw std::invalid_argument("RandomLevelKernel: P_X size mismatch");
        check_distribution(p_x_);
        if (n < 1) throw std::invalid_argument("RandomLevelKernel: n must be >= 1");
    }

    struct RlPath {
        double xi0 = 0.0;
        std::vector<int> xs;      // domain indices
        std::vector<double> ys;   // real labels
    };

    /// zero_noise is a test hook forcing xi_0 = xi_t = 0.
    RlPath sample(std::uint64_t seed, bool zero_noise = false) const {
        Rng rng(seed);
        RlPath path;
        path.xi0 = zero_noise ? 0.0 : rng.normal();
        path.xs.reserve(n_);
        path.ys.reserve(n_);
        for (int t = 0; t < n_; ++t) {
            const int x = rng.categorical(p_x_);
            const double xi = zero_noise ? 0.0 : rng.normal();
            path.xs.push_back(x);
            path.ys.push_back(base_.value(theta_star_, x) + xi + path.xi0);
        }
        return path;
    }

    int horizon() const { return n_; }
    const FiniteFunctionClass& base() const { return base_; }
    int theta_star() const { return theta_star_; }
    const Distribution& p_x() const { return p_x_; }

    /// U_{t-1} = sum_{i<t} (Y_i - f*(X_i)) / t, the posterior mean of xi_0
    /// given the first t-1 observations (posterior variance 1/t).
    double u_statistic(const RlPath& path, int t) const {
        if (t < 1 || t > n_ + 1) throw std::invalid_argument("u_statistic: t out of range");
        double s = 0.0;
        for (int i = 0; i < t - 1; ++i)
            s += path.ys[i] - base_.value(theta_star_, path.xs[i]);
        return s / t;
    }

    /// Squared-loss conditional risk of the offset-class member f_theta + c:
    ///   1 + 1/t + sum_x P_X(x) (f*(x) - f_theta(x) - c + U_{t-1})^2.
    double conditional_risk(int theta, double c, int t, double u) const {
        double acc = 0.0;
        for (int x = 0; x < base_.num_points(); ++x) {
            const double r = base_.value(theta_star_, x) - base_.value(theta, x) - c + u;
            acc += p_x_[x] * r * r;
        }
        return 1.0 + 1.0 / t + acc;
    }

    /// (1/n) sum_t of the conditional risk along a realized path.
    double mean_conditional_risk(const RlPath& path, int theta, double c) const {
        double acc = 0.0;
        double resid_sum = 0.0;  // sum_{i<t} (y_i - f*(x_i))
        for (int t = 1; t <= n_; ++t) {
            acc += conditional_risk(theta, c, t, resid_sum / t);
            resid_sum += path.ys[t - 1] - base_.value(theta_star_, path.xs[t - 1]);
        }
        return acc / n_;
    }

private:
    FiniteFunctionClass base_;
    int theta_star_;
    Distribution p_x_;
    int n_;
};

}  // namespace learnlab
