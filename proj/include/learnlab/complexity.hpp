#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/rng.hpp"
#include "learnlab/trees.hpp"

namespace learnlab {

struct ComplexityValue {
    double value = 0.0;
    bool exact = true;
    double stderr_ = 0.0;   // 0 for exact
    int n = 0;
    bool lower_estimate = false;  // set when a search stands in for a supremum
};

// ---------------------------------------------------------------------------
// Exact integer scaling
// ---------------------------------------------------------------------------

namespace detail {

/// Best rational approximation p/q with q <= max_den (continued fractions).
inline bool rationalize(double v, std::int64_t max_den, std::int64_t& num, std::int64_t& den) {
    double x = v;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        const std::int64_t ai = static_cast<std::int64_t>(a);
        std::int64_t p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > max_den || q2 <= 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        if (std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-12) {
            num = p1;
            den = q1;
            return true;
        }
        const double frac = x - a;
        if (frac < 1e-15) break;
        x = 1.0 / frac;
    }
    if (q1 > 0 && std::abs(v - static_cast<double>(p1) / static_cast<double>(q1)) < 1e-9) {
        num = p1;
        den = q1;
        return true;
    }
    return false;
}

/// Function values as exact integers over a common denominator. Duplicate
/// rows are dropped (they cannot change a supremum over f).
struct ScaledClass {
    std::vector<std::vector<std::int64_t>> rows;  // deduped, rows[j][x]
    std::int64_t denom = 1;
};

inline ScaledClass scale_class(const FiniteFunctionClass& cls) {
    ScaledClass out;
    std::int64_t lcm = 1;
    for (int j = 0; j < cls.size(); ++j)
        for (int x = 0; x < cls.num_points(); ++x) {
            std::int64_t num = 0, den = 1;
            if (!rationalize(cls.value(j, x), 1'000'000, num, den))
                throw ResourceBudgetError(
                    "scale_class: value is not a small rational; exact mode unavailable");
            lcm = std::lcm(lcm, den);
            if (lcm > 1'000'000'000)
                throw ResourceBudgetError("scale_class: common denominator exceeds 1e9");
        }
    out.denom = lcm;
    std::set<std::vector<std::int64_t>> seen;
    for (int j = 0; j < cls.size(); ++j) {
        std::vector<std::int64_t> row(cls.num_points());
        for (int x = 0; x < cls.num_points(); ++x)
            row[x] = static_cast<std::int64_t>(std::llround(cls.value(j, x) * lcm));
        if (seen.insert(row).second) out.rows.push_back(std::move(row));
    }
    return out;
}

/// Distinct columns of a scaled class (identical columns are equivalent
/// choices for the tree/sample maximization).
inline std::vector<std::vector<std::int64_t>> distinct_columns(const ScaledClass& sc) {
    const int nf = static_cast<int>(sc.rows.size());
    const int nx = static_cast<int>(sc.rows.front().size());
    std::set<std::vector<std::int64_t>> seen;
    std::vector<std::vector<std::int64_t>> cols;
    for (int x = 0; x < nx; ++x) {
        std::vector<std::int64_t> col(nf);
        for (int j = 0; j < nf; ++j) col[j] = sc.rows[j][x];
        if (seen.insert(col).second) cols.push_back(std::move(col));
    }
    return cols;
}

struct StateHash {
    std::size_t operator()(const std::vector<std::int64_t>& v) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto x : v) {
            h ^= static_cast<std::size_t>(x);
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

}  // namespace detail

// ---------------------------------------------------------------------------
// Classical Rademacher complexity
// ---------------------------------------------------------------------------

struct ComplexityOptions {
    int exact_path_limit = 20;           // enumerate all 2^n sign vectors up to this n
    int mc_reps = 20000;                 // Monte-Carlo replicates beyond it
    std::uint64_t seed = 1;
    std::size_t state_budget = 4'000'000;      // DP memo entries
    std::size_t sample_enum_budget = 1'000'000;  // |X|^n cap for exact worst case
    int search_restarts = 50;            // hill search restarts beyond the cap
};

/// E_eps sup_f (1/n) sum_t eps_t f(x_t), exact by sign enumeration (Gray
/// code) for n <= exact_path_limit, Monte-Carlo with stderr beyond.
inline ComplexityValue rademacher_fixed_sample(const FiniteFunctionClass& cls,
                                               const std::vector<int>& sample,
                                               const ComplexityOptions& opts = {}) {
    const int n = static_cast<int>(sample.size());
    if (n < 1) throw std::invalid_argument("rademacher_fixed_sample: empty sample");
    for (int x : sample)
        if (x < 0 || x >= cls.num_points())
            throw std::invalid_argument("rademacher_fixed_sample: point out of range");

    const int nf = cls.size();
    if (n <= opts.exact_path_limit) {
        // Gray-code walk over all sign vectors; one sign flip per step.
        std::vector<double> sums(nf, 0.0);
        for (int j = 0; j < nf; ++j)
            for (int t = 0; t < n; ++t) sums[j] += cls.value(j, sample[t]);
        double acc = 0.0;
        const std::uint64_t total = std::uint64_t{1} << n;
        std::uint64_t gray = 0;
        for (std::uint64_t i = 0;; ++i) {
            acc += *std::max_element(sums.begin(), sums.end());
            if (i + 1 == total) break;
            const std::uint64_t next_gray = (i + 1) ^ ((i + 1) >> 1);
            const int bit = __builtin_ctzll(gray ^ next_gray);
            const double delta = (next_gray >> bit) & 1u ? -2.0 : 2.0;  // bit set means eps -> -1
            for (int j = 0; j < nf; ++j) sums[j] += delta * cls.value(j, sample[bit]);
            gray = next_gray;
        }
        return {acc / static_cast<double>(total) / n, true, 0.0, n, false};
    }

    Rng rng(opts.seed);
    double mean = 0.0, m2 = 0.0;
    for (int r = 0; r < opts.mc_reps; ++r) {
        std::vector<double> sums(nf, 0.0);
        for (int t = 0; t < n; ++t) {
            const double eps = rng.bernoulli(0.5) ? +1.0 : -1.0;
            for (int j = 0; j < nf; ++j) sums[j] += eps * cls.value(j, sample[t]);
        }
        const double v = *std::max_element(sums.begin(), sums.end()) / n;
        const double d = v - mean;
        mean += d / (r + 1);
        m2 += d * (v - mean);
    }
    const double sd = opts.mc_reps > 1 ? std::sqrt(m2 / (opts.mc_reps - 1)) : 0.0;
    return {mean, false, sd / std::sqrt(static_cast<double>(opts.mc_reps)), n, false};
}

/// Max over deterministic samples x_{1:n} of the fixed-sample value. This
/// upper-bounds sup_P Rad_n(P, F); exact enumeration within budget, else
/// randomized greedy ascent flagged as a lower estimate.
inline ComplexityValue rademacher_worst_case(const FiniteFunctionClass& cls, int n,
                                             const ComplexityOptions& opts = {}) {
    if (n < 1) throw std::invalid_argument("rademacher_worst_case: n must be >= 1");
    const int nx = cls.num_points();
    double space = 1;
    for (int t = 0; t < n; ++t) space *= nx;
    const bool exact_samples = space <= static_cast<double>(opts.sample_enum_budget);
    if (exact_samples && n <= opts.exact_path_limit) {
        std::vector<int> sample(n, 0);
        double best = -1e300;
        for (;;) {
            best = std::max(best, rademacher_fixed_sample(cls, sample, opts).value);
            int pos = n - 1;
            while (pos >= 0 && ++sample[pos] == nx) sample[pos--] = 0;
            if (pos < 0) break;
        }
        return {best, true, 0.0, n, false};
    }
    Rng rng(opts.seed);
    double best = -1e300;
    for (int r = 0; r < opts.search_restarts; ++r) {
        std::vector<int> sample(n);
        for (int t = 0; t < n; ++t) sample[t] = static_cast<int>(rng.below(nx));
        double cur = rademacher_fixed_sample(cls, sample, opts).value;
        bool improved = true;
        while (improved) {
            improved = false;
            for (int t = 0; t < n; ++t) {
                int best_x = sample[t];
                double best_v = cur;
                const int keep = sample[t];
                for (int x = 0; x < nx; ++x) {
                    if (x == keep) continue;
                    sample[t] = x;
                    const double v = rademacher_fixed_sample(cls, sample, opts).value;
                    if (v > best_v + 1e-15) {
                        best_v = v;
                        best_x = x;
                    }
                }
                sample[t] = best_x;
                if (best_x != keep) {
                    cur = best_v;
                    improved = true;
                }
            }
        }
        best = std::max(best, cur);
    }
    return {best, false, 0.0, n, true};
}

// ---------------------------------------------------------------------------
// Sequential Rademacher complexity
// ---------------------------------------------------------------------------

/// E over sign paths of sup_f (1/n) sum_t eps_t f(x_t(eps_{1:t-1})) for a
/// fixed tree of domain points; exact for depth <= exact_path_limit.
inline ComplexityValue seq_rademacher_fixed_tree(const FiniteFunctionClass& cls,
                                                 const SignTree<int>& tree,
                                                 const ComplexityOptions& opts = {}) {
    const int n = tree.depth();
    tree.for_each_node([&](int, std::uint32_t, int x) {
        if (x < 0 || x >= cls.num_points())
            throw std::invalid_argument("seq_rademacher_fixed_tree: tree label out of range");
    });
    const int nf = cls.size();
    if (n <= opts.exact_path_limit) {
        std::vector<double> sums(nf, 0.0);
        double acc = 0.0;
        // DFS over sign paths with incremental per-function sums.
        auto walk = [&](auto&& self, int t, std::uint32_t path) -> void {
            if (t > n) {
                acc += *std::max_element(sums.begin(), sums.end());
                return;
            }
            const int x = tree.at(t, path);
            for (int sign = 0; sign < 2; ++sign) {
                const double eps = sign ? +1.0 : -1.0;
                for (int j = 0; j < nf; ++j) sums[j] += eps * cls.value(j, x);
                self(self, t + 1, sign ? (path | (1u << (t - 1))) : path);
                for (int j = 0; j < nf; ++j) sums[j] -= eps * cls.value(j, x);
            }
        };
        walk(walk, 1, 0);
        return {acc / std::pow(2.0, n) / n, true, 0.0, n, false};
    }
    Rng rng(opts.seed);
    double mean = 0.0, m2 = 0.0;
    for (int r = 0; r < opts.mc_reps; ++r) {
        std::vector<double> sums(nf, 0.0);
        std::uint32_t path = 0;
        for (int t = 1; t <= n; ++t) {
            const bool plus = rng.bernoulli(0.5);
            const int x = tree.at(t, path);
            for (int j = 0; j < nf; ++j) sums[j] += (plus ? 1.0 : -1.0) * cls.value(j, x);
            if (plus) path |= (1u << (t - 1));
        }
        const double v = *std::max_element(sums.begin(), sums.end()) / n;
        const double d = v - mean;
        mean += d / (r + 1);
        m2 += d * (v - mean);
    }
    const double sd = opts.mc_reps > 1 ? std::sqrt(m2 / (opts.mc_reps - 1)) : 0.0;
    return {mean, false, sd / std::sqrt(static_cast<double>(opts.mc_reps)), n, false};
}

/// Exact supremum over all complete binary trees by backward induction on
/// the vector of accumulated signed sums:
///   V_n(s) = max_f s(f),   V_t(s) = max_x (V_{t+1}(s + col(x)) + V_{t+1}(s - col(x))) / 2.
/// Function values are scaled to integers, so states are exact integer
/// vectors and the memo never rounds. The sign-path-dependent argmax
/// choices implicitly define the optimal tree.
inline ComplexityValue seq_rademacher_sup(const FiniteFunctionClass& cls, int n,
                                          const ComplexityOptions& opts = {}) {
    if (n < 1) throw std::invalid_argument("seq_rademacher_sup: n must be >= 1");
    const detail::ScaledClass sc = detail::scale_class(cls);
    const auto cols = detail::distinct_columns(sc);
    const int nf = static_cast<int>(sc.rows.size());

    std::int64_t max_abs = 0;
    for (const auto& row : sc.rows)
        for (auto v : row) max_abs = std::max(max_abs, std::abs(v));
    const std::int64_t sum_bound = max_abs * n;

    std::size_t entries = 0;
    const auto check_budget = [&] {
        if (++entries > opts.state_budget)
            throw ResourceBudgetError("seq_rademacher_sup: state budget " +
                                      std::to_string(opts.state_budget) + " exceeded");
    };

    double scaled = 0.0;
    if (nf <= 8 && sum_bound <= 127) {
        // Accumulated sums fit one signed byte per function: pack the
        // state into a 64-bit key.
        std::vector<std::unordered_map<std::uint64_t, double>> memo(n);
        std::vector<std::int64_t> s(nf, 0);
        auto pack = [&] {
            std::uint64_t key = 0;
            for (int j = 0; j < nf; ++j)
                key |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(s[j] + 128)) << (8 * j);
            return key;
        };
        auto dp = [&](auto&& self, int t) -> double {
            if (t == n) return static_cast<double>(*std::max_element(s.begin(), s.end()));
            auto& level = memo[t];
            const std::uint64_t key = pack();
            auto it = level.find(key);
            if (it != level.end()) return it->second;
            double best = -1e300;
            for (const auto& col : cols) {
                for (int j = 0; j < nf; ++j) s[j] += col[j];
                const double up = self(self, t + 1);
                for (int j = 0; j < nf; ++j) s[j] -= 2 * col[j];
                const double down = self(self, t + 1);
                for (int j = 0; j < nf; ++j) s[j] += col[j];
                best = std::max(best, 0.5 * (up + down));
            }
            check_budget();
            level.emplace(key, best);
            return best;
        };
        scaled = dp(dp, 0);
    } else {
        using State = std::vector<std::int64_t>;
        std::vector<std::unordered_map<State, double, detail::StateHash>> memo(n);
        auto dp = [&](auto&& self, int t, State& s) -> double {
            if (t == n) return static_cast<double>(*std::max_element(s.begin(), s.end()));
            auto& level = memo[t];
            auto it = level.find(s);
            if (it != level.end()) return it->second;
            double best = -1e300;
            State child(nf);
            for (const auto& col : cols) {
                for (int j = 0; j < nf; ++j) child[j] = s[j] + col[j];
                const double up = self(self, t + 1, child);
                for (int j = 0; j < nf; ++j) child[j] = s[j] - col[j];
                const double down = self(self, t + 1, child);
                best = std::max(best, 0.5 * (up + down));
            }
            check_budget();
            level.emplace(s, best);
            return best;
        };
        State zero(nf, 0);
        scaled = dp(dp, 0, zero);
    }
    return {scaled / static_cast<double>(sc.denom) / n, true, 0.0, n, false};
}

/// Sequential Rademacher complexity of the loss class (supremum over
/// outcome-labeled trees).
inline ComplexityValue seq_rademacher_loss_class(const FiniteFunctionClass& cls, const Loss& loss,
                                                 int n, const ComplexityOptions& opts = {}) {
    return seq_rademacher_sup(loss_class(cls, loss), n, opts);
}

// ---------------------------------------------------------------------------
// Sign bijection (the transformed-signs identity)
// ---------------------------------------------------------------------------

/// Verifies that eps_{1:n} -> (eps_t * s_t(eps_{1:t-1}))_t is a bijection
/// of {+-1}^n for a fixed +-1-valued tree s, by exhausting all 2^n inputs.
inline bool sign_bijection_check(const SignTree<int>& witness) {
    const int n = witness.depth();
    if (n > 20) throw std::invalid_argument("sign_bijection_check: depth must be <= 20");
    witness.for_each_node([](int, std::uint32_t, int v) {
        if (v != +1 && v != -1)
            throw std::invalid_argument("sign_bijection_check: labels must be +-1");
    });
    std::vector<bool> hit(std::size_t{1} << n, false);
    for (std::uint32_t eps = 0; eps < (std::uint32_t{1} << n); ++eps) {
        std::uint32_t out = 0, prefix = 0;
        for (int t = 1; t <= n; ++t) {
            const int e = (eps >> (t - 1)) & 1u ? +1 : -1;
            const int mapped = e * witness.at(t, prefix);
            if (mapped == +1) out |= (1u << (t - 1));
            if ((eps >> (t - 1)) & 1u) prefix |= (1u << (t - 1));
        }
        if (hit[out]) return false;
        hit[out] = true;
    }
    return true;
}

}  // namespace learnlab
