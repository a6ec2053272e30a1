#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

// ---------------------------------------------------------------------------
// Fixed-width bit vectors, most-significant bit first
// ---------------------------------------------------------------------------

/// Bit vector of fixed length, ordered MSB-first so that lexicographic
/// word comparison equals integer comparison with left zero padding.
class BitVec {
public:
    explicit BitVec(int nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {
        if (nbits < 1) throw std::invalid_argument("BitVec: nbits must be >= 1");
    }

    static BitVec zeros(int nbits) { return BitVec(nbits); }

    static BitVec ones(int nbits) {
        BitVec v(nbits);
        for (auto& w : v.words_) w = ~std::uint64_t{0};
        v.mask_tail();
        return v;
    }

    static BitVec random(int nbits, Rng& rng) {
        BitVec v(nbits);
        for (auto& w : v.words_) w = rng.next_u64();
        v.mask_tail();
        return v;
    }

    int size() const { return nbits_; }

    /// Bit i, 1-based from the most significant end.
    bool get(int i) const {
        const int k = (i - 1) >> 6, s = 63 - ((i - 1) & 63);
        return (words_[k] >> s) & 1u;
    }

    void set(int i, bool v) {
        const int k = (i - 1) >> 6, s = 63 - ((i - 1) & 63);
        if (v) words_[k] |= (std::uint64_t{1} << s);
        else words_[k] &= ~(std::uint64_t{1} << s);
    }

    /// -1 / 0 / +1 as integers (equal lengths required).
    static int compare(const BitVec& a, const BitVec& b) {
        if (a.nbits_ != b.nbits_) throw std::invalid_argument("BitVec::compare: length mismatch");
        for (std::size_t k = 0; k < a.words_.size(); ++k) {
            if (a.words_[k] < b.words_[k]) return -1;
            if (a.words_[k] > b.words_[k]) return +1;
        }
        return 0;
    }

    bool operator==(const BitVec& o) const { return nbits_ == o.nbits_ && words_ == o.words_; }
    bool operator<=(const BitVec& o) const { return compare(*this, o) <= 0; }
    bool operator<(const BitVec& o) const { return compare(*this, o) < 0; }

    BitVec plus(const BitVec& o) const {
        BitVec out(nbits_);
        unsigned __int128 carry = 0;
        for (int k = static_cast<int>(words_.size()) - 1; k >= 0; --k) {
            const unsigned __int128 s =
                static_cast<unsigned __int128>(words_[k]) + o.words_[k] + carry;
            out.words_[k] = static_cast<std::uint64_t>(s);
            carry = s >> 64;
        }
        out.mask_tail();
        return out;
    }

    /// this - o; requires this >= o.
    BitVec minus(const BitVec& o) const {
        if (compare(*this, o) < 0) throw std::invalid_argument("BitVec::minus: would underflow");
        BitVec out(nbits_);
        std::uint64_t borrow = 0;
        for (int k = static_cast<int>(words_.size()) - 1; k >= 0; --k) {
            const std::uint64_t a = words_[k], b = o.words_[k];
            const std::uint64_t d1 = a - b;
            const std::uint64_t d2 = d1 - borrow;
            borrow = (a < b) || (d1 < borrow) ? 1 : 0;
            out.words_[k] = d2;
        }
        out.mask_tail();
        return out;
    }

    BitVec minus_one() const {
        BitVec one(nbits_);
        one.set(nbits_, true);
        return minus(one);
    }

    BitVec plus_one() const {
        BitVec one(nbits_);
        one.set(nbits_, true);
        return plus(one);
    }

    bool is_zero() const {
        for (auto w : words_)
            if (w) return false;
        return true;
    }

    /// 1-based index of the most significant set bit; 0 when zero.
    int top_bit() const {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k]) return static_cast<int>(k) * 64 + __builtin_clzll(words_[k]) + 1;
        return 0;
    }

    /// Uniform in the inclusive interval [lo, hi] by rejection on the
    /// bit width of hi - lo.
    static BitVec uniform_in(const BitVec& lo, const BitVec& hi, Rng& rng) {
        const BitVec width = hi.minus(lo);
        if (width.is_zero()) return lo;
        const int msb = width.top_bit();
        for (;;) {
            BitVec r = BitVec::random(width.size(), rng);
            for (int i = 1; i < msb; ++i) r.set(i, false);
            if (compare(r, width) <= 0) return lo.plus(r);
        }
    }

    std::string to_string() const {
        std::string s(nbits_, '0');
        for (int i = 1; i <= nbits_; ++i)
            if (get(i)) s[i - 1] = '1';
        return s;
    }

    static BitVec from_string(const std::string& s) {
        BitVec v(static_cast<int>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("BitVec: bad bit char");
            v.set(static_cast<int>(i) + 1, s[i] == '1');
        }
        return v;
    }

private:
    void mask_tail() {
        const int used = nbits_ & 63;
        if (used) words_.back() &= ~std::uint64_t{0} << (64 - used);
    }

    int nbits_;
    std::vector<std::uint64_t> words_;
};

// ---------------------------------------------------------------------------
// The adversarial threshold process
// ---------------------------------------------------------------------------

/// One step of the construction: the conditional law puts mass 1/2 on a
/// low-resolution outcome (counter stays at l_{t-1}) and mass 1/2 on a
/// high-resolution one (counter advances by 2^{n-t}).
struct AdversarialStep {
    std::int64_t l_low = 0, l_high = 0;
    int y_low = 0, y_high = 0;  // labels in {0,1}
    int eps = 0;                // realized sign: +1 picks high
};

struct AdversarialPath {
    int n = 0;
    BitVec b;                              // hidden bit vector, length 2^n
    std::vector<AdversarialStep> steps;    // one per t
    std::vector<std::int64_t> realized_l;  // l_t along the path

    AdversarialPath() : b(1) {}
};

/// X emitted when the counter is l: length-(2^n + 1) vector with the same
/// l-bit prefix as b, bit l+1 set, zeros after. Its last set bit is at
/// position l+1 <= 2^n, so every emitted X encodes an even integer.
inline BitVec adversarial_x_for_level(const BitVec& b, std::int64_t l) {
    const int L = b.size() + 1;
    BitVec x(L);
    for (int i = 1; i <= static_cast<int>(l); ++i) x.set(i, b.get(i));
    x.set(static_cast<int>(l) + 1, true);
    return x;
}

/// The realizable truth: threshold at b followed by a trailing 1 (odd).
inline BitVec adversarial_truth(const BitVec& b) {
    BitVec t(b.size() + 1);
    for (int i = 1; i <= b.size(); ++i) t.set(i, b.get(i));
    t.set(b.size() + 1, true);
    return t;
}

struct AdversarialProcess {
    int n;
    std::optional<BitVec> fixed_b;  // when absent, b is drawn fresh per path

    explicit AdversarialProcess(int n_, std::optional<BitVec> b = std::nullopt)
        : n(n_), fixed_b(std::move(b)) {
        if (n < 1 || n > 24) throw std::invalid_argument("AdversarialProcess: n must be in [1,24]");
        if (fixed_b && fixed_b->size() != (1 << n))
            throw std::invalid_argument("AdversarialProcess: fixed b must have length 2^n");
    }

    AdversarialPath sample(std::uint64_t seed) const {
        Rng rng(seed);
        AdversarialPath path;
        path.n = n;
        path.b = fixed_b ? *fixed_b : BitVec::random(1 << n, rng);
        std::int64_t l = 0;
        for (int t = 1; t <= n; ++t) {
            AdversarialStep step;
            step.l_low = l;
            step.l_high = l + (std::int64_t{1} << (n - t));
            step.y_low = path.b.get(static_cast<int>(step.l_low) + 1) ? 1 : 0;
            step.y_high = path.b.get(static_cast<int>(step.l_high) + 1) ? 1 : 0;
            step.eps = rng.bernoulli(0.5) ? +1 : -1;
            l = step.eps > 0 ? step.l_high : step.l_low;
            path.realized_l.push_back(l);
            path.steps.push_back(step);
        }
        return path;
    }
};

/// Deterministic path for a given hidden vector and sign sequence.
inline AdversarialPath adversarial_path_for_signs(const BitVec& b, const std::vector<int>& signs) {
    const int n = static_cast<int>(signs.size());
    if (b.size() != (1 << n))
        throw std::invalid_argument("adversarial_path_for_signs: |b| must be 2^n");
    AdversarialPath path;
    path.n = n;
    path.b = b;
    std::int64_t l = 0;
    for (int t = 1; t <= n; ++t) {
        AdversarialStep step;
        step.l_low = l;
        step.l_high = l + (std::int64_t{1} << (n - t));
        step.y_low = path.b.get(static_cast<int>(step.l_low) + 1) ? 1 : 0;
        step.y_high = path.b.get(static_cast<int>(step.l_high) + 1) ? 1 : 0;
        step.eps = signs[t - 1] > 0 ? +1 : -1;
        l = step.eps > 0 ? step.l_high : step.l_low;
        path.realized_l.push_back(l);
        path.steps.push_back(step);
    }
    return path;
}

// ---------------------------------------------------------------------------
// ERM over the full threshold class {x -> 1{x <= theta}}
// ---------------------------------------------------------------------------

/// Empirical risk minimization over all 2^L thresholds on L-bit inputs.
/// The zero-one-minimizing thresholds form the consistency interval
/// [max{X : Y=1}, min{X : Y=0} - 1]; the tie-break picks inside it.
/// Requires a realizable sample (the adversarial process guarantees it).
inline BitVec threshold_erm(const std::vector<std::pair<BitVec, int>>& sample, int nbits,
                            TieBreak mode, Rng* rng = nullptr) {
    BitVec lo = BitVec::zeros(nbits);
    BitVec hi = BitVec::ones(nbits);
    for (const auto& [x, y] : sample) {
        if (y == 1) {
            if (BitVec::compare(x, lo) > 0) lo = x;
        } else {
            const BitVec upper = x.minus_one();
            if (BitVec::compare(upper, hi) < 0) hi = upper;
        }
    }
    if (BitVec::compare(lo, hi) > 0)
        throw std::invalid_argument("threshold_erm: sample is not realizable by a threshold");
    switch (mode) {
        case TieBreak::lowest_index: return lo;
        case TieBreak::highest_index: return hi;
        case TieBreak::seeded_random:
            if (!rng) throw std::invalid_argument("threshold_erm: seeded_random requires an rng");
            return BitVec::uniform_in(lo, hi, *rng);
    }
    return lo;
}

inline int threshold_predict(const BitVec& theta, const BitVec& x) {
    return BitVec::compare(x, theta) <= 0 ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Per-step conditional risks of a fitted threshold
// ---------------------------------------------------------------------------

/// (1/n) sum_t l(P_t, f_theta) for zero-one loss: each P_t weighs its two
/// support outcomes by 1/2. The comparator infimum is identically zero
/// because the hidden truth labels every support outcome correctly.
inline double adversarial_mean_step_risk(const AdversarialPath& path, const BitVec& theta) {
    double total = 0.0;
    for (const auto& step : path.steps) {
        const BitVec x_low = adversarial_x_for_level(path.b, step.l_low);
        const BitVec x_high = adversarial_x_for_level(path.b, step.l_high);
        total += 0.5 * (threshold_predict(theta, x_low) != step.y_low) +
                 0.5 * (threshold_predict(theta, x_high) != step.y_high);
    }
    return total / path.n;
}

/// Absolute-loss analogue after mapping labels 1 -> u, 0 -> u'; the
/// regression predictor is the transformed threshold x -> u 1{x<=theta} + u' 1{x>theta}.
inline double adversarial_regression_mean_step_risk(const AdversarialPath& path,
                                                    const BitVec& theta, double u, double uprime) {
    double total = 0.0;
    for (const auto& step : path.steps) {
        const BitVec x_low = adversarial_x_for_level(path.b, step.l_low);
        const BitVec x_high = adversarial_x_for_level(path.b, step.l_high);
        const double pred_low = threshold_predict(theta, x_low) ? u : uprime;
        const double pred_high = threshold_predict(theta, x_high) ? u : uprime;
        const double y_low = step.y_low ? u : uprime;
        const double y_high = step.y_high ? u : uprime;
        total += 0.5 * std::abs(pred_low - y_low) + 0.5 * std::abs(pred_high - y_high);
    }
    return total / path.n;
}

/// Sample seen by the learner: realized (X_t, Y_t) pairs.
inline std::vector<std::pair<BitVec, int>> adversarial_sample(const AdversarialPath& path) {
    std::vector<std::pair<BitVec, int>> out;
    out.reserve(path.steps.size());
    for (std::size_t t = 0; t < path.steps.size(); ++t) {
        const auto& step = path.steps[t];
        const std::int64_t l = path.realized_l[t];
        const int y = step.eps > 0 ? step.y_high : step.y_low;
        out.emplace_back(adversarial_x_for_level(path.b, l), y);
    }
    return out;
}

/// Levels for the regression transform; requires u > u' and |u-u'| >= gamma/5.
struct RegressionLevels {
    double u, uprime, gamma;

    RegressionLevels(double u_, double uprime_, double gamma_) : u(u_), uprime(uprime_), gamma(gamma_) {
        if (!(u > uprime)) throw std::invalid_argument("RegressionLevels: need u > u'");
        if (u - uprime < gamma / 5.0 - kDefaultTol)
            throw std::invalid_argument("RegressionLevels: need u - u' >= gamma/5");
    }
};

// ---------------------------------------------------------------------------
// Finite materialization for small n (fixed hidden bit vector)
// ---------------------------------------------------------------------------

/// Materializes the adversarial process for a fixed b as an ordinary
/// finite kernel: the X support is {x(l) : 0 <= l < 2^n} and labels are
/// +-1. Used where estimators need an explicit outcome space.
class AdversarialFiniteKernel : public ProcessKernel {
public:
    AdversarialFiniteKernel(int n, const BitVec& b)
        : ProcessKernel(make_outcomes(n, b), n), n_(n), b_(b) {
        if (n > 10) throw ResourceBudgetError("AdversarialFiniteKernel: n > 10 not materializable");
        for (std::int64_t l = 0; l < (std::int64_t{1} << n_); ++l) {
            const std::string s = adversarial_x_for_level(b_, l).to_string();
            level_to_x_[l] = outcomes().domain().index_of(s);
            x_to_level_[outcomes().domain().index_of(s)] = l;
        }
    }

    std::string name() const override { return "adversarial-threshold"; }
    const BitVec& hidden_b() const { return b_; }
    int level_point(std::int64_t l) const { return level_to_x_.at(l); }

    Distribution conditional(const HiddenPtr&, std::span<const int> prefix) const override {
        const int t = static_cast<int>(prefix.size()) + 1;
        std::int64_t l_prev = 0;
        if (!prefix.empty()) l_prev = x_to_level_.at(outcomes().at(prefix.back()).x);
        const std::int64_t l_high = l_prev + (std::int64_t{1} << (n_ - t));
        Distribution p(outcomes().size(), 0.0);
        p[outcome_for_level(l_prev)] = 0.5;
        p[outcome_for_level(l_high)] = 0.5;
        return p;
    }

    /// Outcome index of (x(l), label of bit l+1).
    int outcome_for_level(std::int64_t l) const {
        const double y = b_.get(static_cast<int>(l) + 1) ? +1.0 : -1.0;
        return outcomes().index_of(level_to_x_.at(l), y);
    }

private:
    static OutcomeSpace make_outcomes(int n, const BitVec& b) {
        if (n < 1 || n > 10) throw std::invalid_argument("AdversarialFiniteKernel: n in [1,10]");
        if (b.size() != (1 << n))
            throw std::invalid_argument("AdversarialFiniteKernel: b must have length 2^n");
        std::vector<BitVec> xs;
        for (std::int64_t l = 0; l < (std::int64_t{1} << n); ++l)
            xs.push_back(adversarial_x_for_level(b, l));
        std::sort(xs.begin(), xs.end(), [](const BitVec& a, const BitVec& c) { return a < c; });
        std::vector<std::string> points;
        points.reserve(xs.size());
        for (const auto& x : xs) points.push_back(x.to_string());
        return OutcomeSpace(Domain(std::move(points)), LabelSpace::binary());
    }

    int n_;
    BitVec b_;
    std::map<std::int64_t, int> level_to_x_;
    std::map<int, std::int64_t> x_to_level_;
};

/// Thresholds restricted to the kernel's X support: with points sorted
/// ascending, every threshold restricts to a prefix-of-(+1) pattern, so
/// there are exactly |X|+1 distinct functions (the truth among them).
inline FiniteFunctionClass adversarial_restricted_threshold_class(
    const AdversarialFiniteKernel& kernel) {
    const Domain& dom = kernel.outcomes().domain();
    const int k = dom.size();
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    for (int i = 0; i <= k; ++i) {
        std::vector<double> row(k);
        for (int x = 0; x < k; ++x) row[x] = x < i ? +1.0 : -1.0;
        rows.push_back(std::move(row));
        names.push_back("le" + std::to_string(i));
    }
    return FiniteFunctionClass(dom, LabelSpace::binary(), std::move(rows), std::move(names));
}

// ---------------------------------------------------------------------------
// Generic regression transform of a finite binary kernel
// ---------------------------------------------------------------------------

/// Remaps labels of a finite binary kernel: +1 -> u, -1 -> u'. The label
/// order is preserved (u' < u), so outcome indices carry over unchanged.
class RegressionTransformKernel : public ProcessKernel {
public:
    RegressionTransformKernel(std::shared_ptr<const ProcessKernel> inner, RegressionLevels levels)
        : ProcessKernel(transformed_outcomes(*inner, levels), inner->horizon()),
          inner_(std::move(inner)),
          levels_(levels) {}

    std::string name() const override { return "regression-transform(" + inner_->name() + ")"; }
    const RegressionLevels& levels() const { return levels_; }

    HiddenPtr draw_hidden(Rng& rng) const override { return inner_->draw_hidden(rng); }

    Distribution conditional(const HiddenPtr& hidden, std::span<const int> prefix) const override {
        return inner_->conditional(hidden, prefix);
    }

private:
    static OutcomeSpace transformed_outcomes(const ProcessKernel& inner, RegressionLevels levels) {
        if (!inner.outcomes().labels().is_binary())
            throw std::invalid_argument("RegressionTransformKernel: inner kernel must be binary");
        return OutcomeSpace(inner.outcomes().domain(),
                            LabelSpace::grid({levels.uprime, levels.u}, /*relaxed=*/true));
    }

    std::shared_ptr<const ProcessKernel> inner_;
    RegressionLevels levels_;
};

}  // namespace learnlab
