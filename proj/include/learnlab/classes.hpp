#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace learnlab {

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kProbTol = 1e-12;

/// Thrown when an exact computation would exceed its configured budget.
/// The CLI maps this to exit code 3.
struct ResourceBudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Domains and label spaces
// ---------------------------------------------------------------------------

/// Ordered finite input space. Points are opaque identifiers; all code
/// below works with their indices.
struct Domain {
    std::vector<std::string> points;

    explicit Domain(std::vector<std::string> pts) : points(std::move(pts)) {
        if (points.empty()) throw std::invalid_argument("Domain: must be nonempty");
        std::set<std::string> seen(points.begin(), points.end());
        if (seen.size() != points.size())
            throw std::invalid_argument("Domain: point identifiers must be distinct");
    }

    /// Numbered points "1".."k".
    static Domain numbered(int k) {
        if (k < 1) throw std::invalid_argument("Domain::numbered: k must be >= 1");
        std::vector<std::string> pts;
        pts.reserve(k);
        for (int i = 1; i <= k; ++i) pts.push_back(std::to_string(i));
        return Domain(std::move(pts));
    }

    int size() const { return static_cast<int>(points.size()); }

    int index_of(const std::string& p) const {
        for (int i = 0; i < size(); ++i)
            if (points[i] == p) return i;
        throw std::invalid_argument("Domain: unknown point '" + p + "'");
    }

    bool operator==(const Domain& o) const { return points == o.points; }
};

enum class LabelKind { binary, real_grid };

struct LabelSpace {
    LabelKind kind;
    std::vector<double> values;  // binary: exactly {-1,+1}; grid: strictly increasing

    static LabelSpace binary() { return LabelSpace{LabelKind::binary, {-1.0, +1.0}}; }

    /// Finite increasing grid within [-1,+1]. `relaxed` lifts the range
    /// restriction for derived (loss) classes.
    static LabelSpace grid(std::vector<double> vals, bool relaxed = false) {
        if (vals.empty()) throw std::invalid_argument("LabelSpace: grid must be nonempty");
        for (std::size_t i = 0; i + 1 < vals.size(); ++i)
            if (!(vals[i] < vals[i + 1]))
                throw std::invalid_argument("LabelSpace: grid values must be strictly increasing");
        if (!relaxed && (vals.front() < -1.0 - kDefaultTol || vals.back() > 1.0 + kDefaultTol))
            throw std::invalid_argument("LabelSpace: grid values must lie within [-1,+1]");
        return LabelSpace{LabelKind::real_grid, std::move(vals)};
    }

    bool is_binary() const { return kind == LabelKind::binary; }

    bool contains(double v, double tol = kDefaultTol) const {
        for (double w : values)
            if (std::abs(v - w) <= tol) return true;
        return false;
    }

    double span() const { return values.back() - values.front(); }

    bool operator==(const LabelSpace& o) const { return kind == o.kind && values == o.values; }
};

// ---------------------------------------------------------------------------
// Losses
// ---------------------------------------------------------------------------

enum class LossKind { zero_one, absolute, squared };

struct Loss {
    LossKind kind;

    static Loss zero_one() { return Loss{LossKind::zero_one}; }
    static Loss absolute() { return Loss{LossKind::absolute}; }
    static Loss squared() { return Loss{LossKind::squared}; }

    /// Pointwise loss of predicting fx against observed label y.
    double operator()(double y, double fx) const {
        switch (kind) {
            case LossKind::zero_one: return std::abs(y - fx) > kDefaultTol ? 1.0 : 0.0;
            case LossKind::absolute: return std::abs(y - fx);
            case LossKind::squared: return (y - fx) * (y - fx);
        }
        return 0.0;
    }

    /// Upper bound B on the loss for labels/predictions from this space.
    double bound(const LabelSpace& labels) const {
        const double s = labels.span();
        switch (kind) {
            case LossKind::zero_one: return 1.0;
            case LossKind::absolute: return s;
            case LossKind::squared: return s * s;
        }
        return 0.0;
    }

    bool compatible_with(const LabelSpace& labels) const {
        return kind != LossKind::zero_one || labels.is_binary();
    }

    std::string name() const {
        switch (kind) {
            case LossKind::zero_one: return "zero-one";
            case LossKind::absolute: return "absolute";
            case LossKind::squared: return "squared";
        }
        return "?";
    }

    static Loss parse(const std::string& s) {
        if (s == "zero-one" || s == "01" || s == "zo") return zero_one();
        if (s == "absolute" || s == "abs") return absolute();
        if (s == "squared" || s == "sq") return squared();
        throw std::invalid_argument("Loss: unknown kind '" + s + "'");
    }
};

// ---------------------------------------------------------------------------
// Finite function classes
// ---------------------------------------------------------------------------

/// A finite class of functions over a finite domain, stored as the
/// |F| x |X| value matrix. User-built classes reject duplicate rows;
/// derived classes (loss classes) keep them and set the `derived` flag.
class FiniteFunctionClass {
public:
    FiniteFunctionClass(Domain domain, LabelSpace labels,
                        std::vector<std::vector<double>> values,
                        std::vector<std::string> names = {}, bool derived = false)
        : domain_(std::move(domain)),
          labels_(std::move(labels)),
          derived_(derived) {
        const int nx = domain_.size();
        if (values.empty()) throw std::invalid_argument("FiniteFunctionClass: |F| must be >= 1");
        for (const auto& row : values) {
            if (static_cast<int>(row.size()) != nx)
                throw std::invalid_argument("FiniteFunctionClass: row width must equal |X|");
            for (double v : row)
                if (!labels_.contains(v))
                    throw std::invalid_argument("FiniteFunctionClass: value " + format_value(v) +
                                                " is not a member of the label space");
        }
        if (!derived_) {
            std::set<std::vector<double>> rows(values.begin(), values.end());
            if (rows.size() != values.size())
                throw std::invalid_argument("FiniteFunctionClass: duplicate function rows rejected");
        }
        if (!names.empty() && names.size() != values.size())
            throw std::invalid_argument("FiniteFunctionClass: names/rows size mismatch");
        if (names.empty()) {
            names.reserve(values.size());
            for (std::size_t j = 0; j < values.size(); ++j) names.push_back("f" + std::to_string(j));
        }
        names_ = std::move(names);
        nf_ = static_cast<int>(values.size());
        nx_ = nx;
        flat_.reserve(static_cast<std::size_t>(nf_) * nx_);
        for (const auto& row : values) flat_.insert(flat_.end(), row.begin(), row.end());
    }

    int size() const { return nf_; }
    int num_points() const { return nx_; }
    const Domain& domain() const { return domain_; }
    const LabelSpace& labels() const { return labels_; }
    bool derived() const { return derived_; }
    const std::string& name(int j) const { return names_[j]; }
    const std::vector<std::string>& names() const { return names_; }

    double value(int j, int i) const { return flat_[static_cast<std::size_t>(j) * nx_ + i]; }

    std::span<const double> row(int j) const {
        return {flat_.data() + static_cast<std::size_t>(j) * nx_, static_cast<std::size_t>(nx_)};
    }

    std::vector<double> row_copy(int j) const {
        auto r = row(j);
        return {r.begin(), r.end()};
    }

    bool is_binary() const { return labels_.is_binary(); }

private:
    Domain domain_;
    LabelSpace labels_;
    std::vector<std::string> names_;
    std::vector<double> flat_;
    int nf_ = 0, nx_ = 0;
    bool derived_ = false;
};

/// Threshold functions on {1..k}: f_theta(x) = +1 iff x > theta, theta in {0..k}.
inline FiniteFunctionClass make_threshold_class(int k) {
    if (k < 1) throw std::invalid_argument("make_threshold_class: k must be >= 1");
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    for (int theta = 0; theta <= k; ++theta) {
        std::vector<double> row(k);
        for (int x = 1; x <= k; ++x) row[x - 1] = x > theta ? +1.0 : -1.0;
        rows.push_back(std::move(row));
        names.push_back("theta=" + std::to_string(theta));
    }
    return FiniteFunctionClass(Domain::numbered(k), LabelSpace::binary(), std::move(rows),
                               std::move(names));
}

/// All functions {1..grid_size} -> value_grid with total variation
/// sum_i |f(x_{i+1}) - f(x_i)| at most V.
inline FiniteFunctionClass make_bounded_variation_class(int grid_size, double V,
                                                        const LabelSpace& value_grid,
                                                        std::size_t budget = 2'000'000) {
    if (grid_size < 1) throw std::invalid_argument("make_bounded_variation_class: grid_size >= 1");
    if (V < 0) throw std::invalid_argument("make_bounded_variation_class: V must be >= 0");
    if (value_grid.kind != LabelKind::real_grid)
        throw std::invalid_argument("make_bounded_variation_class: value_grid must be real-grid");
    const auto& levels = value_grid.values;
    double total = 1;
    for (int i = 0; i < grid_size; ++i) {
        total *= static_cast<double>(levels.size());
        if (total > static_cast<double>(budget))
            throw ResourceBudgetError("make_bounded_variation_class: |grid|^grid_size exceeds budget " +
                                      std::to_string(budget));
    }
    std::vector<std::vector<double>> rows;
    std::vector<int> idx(grid_size, 0);
    for (;;) {
        double tv = 0;
        for (int i = 0; i + 1 < grid_size; ++i) tv += std::abs(levels[idx[i + 1]] - levels[idx[i]]);
        if (tv <= V + kDefaultTol) {
            std::vector<double> row(grid_size);
            for (int i = 0; i < grid_size; ++i) row[i] = levels[idx[i]];
            rows.push_back(std::move(row));
        }
        int pos = grid_size - 1;
        while (pos >= 0 && ++idx[pos] == static_cast<int>(levels.size())) idx[pos--] = 0;
        if (pos < 0) break;
    }
    return FiniteFunctionClass(Domain::numbered(grid_size), value_grid, std::move(rows));
}

// ---------------------------------------------------------------------------
// Outcome spaces and distributions
// ---------------------------------------------------------------------------

struct Outcome {
    int x;     // domain point index
    double y;  // label value

    bool operator==(const Outcome& o) const { return x == o.x && y == o.y; }
};

/// Z = X x Y, materialized in x-major order.
class OutcomeSpace {
public:
    OutcomeSpace(Domain domain, LabelSpace labels)
        : domain_(std::move(domain)), labels_(std::move(labels)) {
        for (int i = 0; i < domain_.size(); ++i)
            for (double y : labels_.values) pairs_.push_back(Outcome{i, y});
    }

    int size() const { return static_cast<int>(pairs_.size()); }
    const Outcome& at(int i) const { return pairs_[i]; }
    const Domain& domain() const { return domain_; }
    const LabelSpace& labels() const { return labels_; }

    int index_of(int x, double y, double tol = kDefaultTol) const {
        for (int i = 0; i < size(); ++i)
            if (pairs_[i].x == x && std::abs(pairs_[i].y - y) <= tol) return i;
        throw std::invalid_argument("OutcomeSpace: outcome not found");
    }

    std::string name_of(int i) const {
        const Outcome& z = pairs_[i];
        return domain_.points[z.x] + "|" + format_value(z.y);
    }

    bool operator==(const OutcomeSpace& o) const {
        return domain_ == o.domain_ && labels_ == o.labels_;
    }

private:
    Domain domain_;
    LabelSpace labels_;
    std::vector<Outcome> pairs_;
};

/// Finite distribution over an OutcomeSpace (or any indexed set).
using Distribution = std::vector<double>;

inline void check_distribution(const Distribution& p, double tol = kProbTol) {
    double sum = 0;
    for (double v : p) {
        if (v < -tol) throw std::invalid_argument("distribution: negative mass");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
        throw std::invalid_argument("distribution: masses sum to " + format_value(sum) +
                                    ", expected 1");
}

inline double total_variation(const Distribution& p, const Distribution& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

// ---------------------------------------------------------------------------
// Loss evaluation
// ---------------------------------------------------------------------------

/// ell(z, f_j) for z = (x, y).
inline double loss_eval(const Loss& loss, const FiniteFunctionClass& cls, const Outcome& z, int j) {
    if (!loss.compatible_with(cls.labels()))
        throw std::invalid_argument("loss_eval: zero-one loss requires binary labels");
    return loss(z.y, cls.value(j, z.x));
}

/// ell(P, f_j) = sum_z P(z) ell(z, f_j). P must be normalized (1e-12).
inline double expected_loss(const Loss& loss, const FiniteFunctionClass& cls,
                            const OutcomeSpace& space, const Distribution& p, int j) {
    if (static_cast<int>(p.size()) != space.size())
        throw std::invalid_argument("expected_loss: distribution size mismatch");
    check_distribution(p);
    double acc = 0;
    for (int i = 0; i < space.size(); ++i) {
        if (p[i] == 0.0) continue;
        acc += p[i] * loss_eval(loss, cls, space.at(i), j);
    }
    return acc;
}

/// The loss class ell o F: one function per row of `cls`, defined over the
/// outcome space as domain. Duplicate rows are retained (derived flag).
inline FiniteFunctionClass loss_class(const FiniteFunctionClass& cls, const Loss& loss) {
    if (!loss.compatible_with(cls.labels()))
        throw std::invalid_argument("loss_class: loss incompatible with labels");
    OutcomeSpace space(cls.domain(), cls.labels());
    std::vector<std::string> zpoints;
    zpoints.reserve(space.size());
    for (int i = 0; i < space.size(); ++i) zpoints.push_back(space.name_of(i));

    std::vector<std::vector<double>> rows(cls.size(), std::vector<double>(space.size()));
    std::set<double> achieved;
    for (int j = 0; j < cls.size(); ++j)
        for (int i = 0; i < space.size(); ++i) {
            rows[j][i] = loss_eval(loss, cls, space.at(i), j);
            achieved.insert(rows[j][i]);
        }
    LabelSpace grid =
        LabelSpace::grid(std::vector<double>(achieved.begin(), achieved.end()), /*relaxed=*/true);
    return FiniteFunctionClass(Domain(std::move(zpoints)), std::move(grid), std::move(rows),
                               cls.names(), /*derived=*/true);
}

/// Subclass {f in F : f(x) = y}; empty result is signalled by nullopt.
inline std::optional<FiniteFunctionClass> restrict(const FiniteFunctionClass& cls, int x, double y,
                                                   double tol = kDefaultTol) {
    if (x < 0 || x >= cls.num_points()) throw std::invalid_argument("restrict: point out of range");
    if (!cls.labels().contains(y, tol)) throw std::invalid_argument("restrict: label not in space");
    std::vector<std::vector<double>> rows;
    std::vector<std::string> names;
    for (int j = 0; j < cls.size(); ++j) {
        if (std::abs(cls.value(j, x) - y) <= tol) {
            rows.push_back(cls.row_copy(j));
            names.push_back(cls.name(j));
        }
    }
    if (rows.empty()) return std::nullopt;
    return FiniteFunctionClass(cls.domain(), cls.labels(), std::move(rows), std::move(names),
                               cls.derived());
}

// ---------------------------------------------------------------------------
// Tie-breaking for argmin rules
// ---------------------------------------------------------------------------

enum class TieBreak { lowest_index, highest_index, seeded_random };

inline TieBreak parse_tie_break(const std::string& s) {
    if (s == "lowest-index") return TieBreak::lowest_index;
    if (s == "highest-index") return TieBreak::highest_index;
    if (s == "seeded-random") return TieBreak::seeded_random;
    throw std::invalid_argument("tie_break: unknown mode '" + s + "'");
}

inline std::string tie_break_name(TieBreak t) {
    switch (t) {
        case TieBreak::lowest_index: return "lowest-index";
        case TieBreak::highest_index: return "highest-index";
        case TieBreak::seeded_random: return "seeded-random";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Offset class {f_theta + c : theta in base, c in R}
// ---------------------------------------------------------------------------

struct OffsetClass {
    FiniteFunctionClass base;

    explicit OffsetClass(FiniteFunctionClass b) : base(std::move(b)) {
        if (base.labels().is_binary())
            throw std::invalid_argument("OffsetClass: base must have real-grid labels");
    }

    double value(int theta, double offset, int x) const { return base.value(theta, x) + offset; }
};

}  // namespace learnlab
