#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "learnlab/adversarial.hpp"
#include "learnlab/classes.hpp"
#include "learnlab/complexity.hpp"
#include "learnlab/dims.hpp"
#include "learnlab/learners.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/random_level.hpp"
#include "learnlab/regret.hpp"
#include "learnlab/rng.hpp"

namespace learnlab {

struct CheckResult {
    std::string name;
    std::string claim;
    nlohmann::ordered_json measured;
    std::string threshold;
    bool pass = false;
};

struct VerifyReport {
    std::string suite;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool pass = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["suite"] = suite;
        j["seed"] = seed;
        j["pass"] = pass;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json cj;
            cj["name"] = c.name;
            cj["claim"] = c.claim;
            cj["measured"] = c.measured;
            cj["threshold"] = c.threshold;
            cj["pass"] = c.pass;
            j["checks"].push_back(std::move(cj));
        }
        return j;
    }
};

namespace verify_detail {

// ---------------------------------------------------------------------------
// Random class generators
// ---------------------------------------------------------------------------

inline FiniteFunctionClass random_class_from_values(Rng& rng, int max_points, int max_functions,
                                                    const std::vector<double>& levels,
                                                    LabelSpace labels) {
    const int nx = 1 + static_cast<int>(rng.below(max_points));
    double distinct_rows = 1;
    for (int i = 0; i < nx; ++i) distinct_rows *= static_cast<double>(levels.size());
    const int cap = distinct_rows < max_functions ? static_cast<int>(distinct_rows) : max_functions;
    const int nf = 1 + static_cast<int>(rng.below(cap));
    std::set<std::vector<double>> rows;
    while (static_cast<int>(rows.size()) < nf) {
        std::vector<double> row(nx);
        for (int i = 0; i < nx; ++i) row[i] = levels[rng.below(levels.size())];
        rows.insert(std::move(row));
    }
    return FiniteFunctionClass(Domain::numbered(nx), std::move(labels),
                               {rows.begin(), rows.end()});
}

inline FiniteFunctionClass random_binary_class(Rng& rng, int max_points, int max_functions) {
    return random_class_from_values(rng, max_points, max_functions, {-1.0, +1.0},
                                    LabelSpace::binary());
}

inline FiniteFunctionClass random_grid_class(Rng& rng, int max_points, int max_functions,
                                             std::vector<double> grid) {
    return random_class_from_values(rng, max_points, max_functions, grid,
                                    LabelSpace::grid(grid));
}

// ---------------------------------------------------------------------------
// Brute-force oracles (exhaustive tree enumeration)
// ---------------------------------------------------------------------------

/// Exact E_eps sup_f (1/n) sum eps_t f(x_t(eps)) for a flat-labeled tree.
inline double tree_value_flat(const FiniteFunctionClass& cls, const std::vector<int>& labels,
                              int depth) {
    const int nf = cls.size();
    std::vector<double> sums(nf, 0.0);
    double acc = 0.0;
    auto walk = [&](auto&& self, int t, std::uint32_t bits) -> void {
        if (t > depth) {
            acc += *std::max_element(sums.begin(), sums.end());
            return;
        }
        const int x = labels[(std::size_t{1} << (t - 1)) - 1 + bits];
        for (int sign = 0; sign < 2; ++sign) {
            const double eps = sign ? +1.0 : -1.0;
            for (int j = 0; j < nf; ++j) sums[j] += eps * cls.value(j, x);
            self(self, t + 1, sign ? (bits | (1u << (t - 1))) : bits);
            for (int j = 0; j < nf; ++j) sums[j] -= eps * cls.value(j, x);
        }
    };
    walk(walk, 1, 0);
    return acc / std::pow(2.0, depth) / depth;
}

/// Supremum over all complete binary trees by full enumeration.
inline double enumerate_tree_sup(const FiniteFunctionClass& cls, int depth,
                                 std::size_t budget = 5'000'000) {
    const int nx = cls.num_points();
    const std::size_t m = (std::size_t{1} << depth) - 1;
    double count = 1;
    for (std::size_t i = 0; i < m; ++i) count *= nx;
    if (count > static_cast<double>(budget))
        throw ResourceBudgetError("enumerate_tree_sup: tree space exceeds budget");
    std::vector<int> labels(m, 0);
    double best = -1e300;
    for (;;) {
        best = std::max(best, tree_value_flat(cls, labels, depth));
        std::size_t p = m;
        while (p > 0 && ++labels[p - 1] == nx) labels[--p] = 0;
        if (p == 0) break;
    }
    return best;
}

/// Whether some depth-d tree is shattered, by enumerating all trees with
/// per-node candidate-function masks.
inline bool exists_shattered_tree_enum(const FiniteFunctionClass& cls, int depth,
                                       std::size_t budget = 3'000'000) {
    const int nx = cls.num_points();
    const int nf = cls.size();
    if (nf > 64) throw ResourceBudgetError("exists_shattered_tree_enum: |F| > 64");
    const std::size_t m = (std::size_t{1} << depth) - 1;
    double count = 1;
    for (std::size_t i = 0; i < m; ++i) count *= nx;
    if (count > static_cast<double>(budget))
        throw ResourceBudgetError("exists_shattered_tree_enum: tree space exceeds budget");

    std::vector<std::uint64_t> plus(nx, 0), minus(nx, 0);
    for (int x = 0; x < nx; ++x)
        for (int j = 0; j < nf; ++j)
            (cls.value(j, x) > 0 ? plus[x] : minus[x]) |= std::uint64_t{1} << j;

    std::vector<int> labels(m, 0);
    auto shattered = [&](auto&& self, int t, std::uint32_t bits, std::uint64_t mask) -> bool {
        if (mask == 0) return false;
        if (t > depth) return true;
        const int x = labels[(std::size_t{1} << (t - 1)) - 1 + bits];
        return self(self, t + 1, bits, mask & minus[x]) &&
               self(self, t + 1, bits | (1u << (t - 1)), mask & plus[x]);
    };
    const std::uint64_t full = nf == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nf) - 1;
    for (;;) {
        if (shattered(shattered, 1, 0, full)) return true;
        std::size_t p = m;
        while (p > 0 && ++labels[p - 1] == nx) labels[--p] = 0;
        if (p == 0) break;
    }
    return false;
}

/// Exhaustive Littlestone dimension: deepen while an enumerated shattered
/// tree exists. When the enumeration for depth d+1 would blow the budget,
/// the cardinality bound (a shattered depth-m tree uses 2^m distinct
/// functions) must already rule it out, else this oracle gives up.
inline int oracle_ldim(const FiniteFunctionClass& cls, std::size_t budget = 3'000'000) {
    const int nx = cls.num_points();
    int d = 0;
    for (;;) {
        const std::size_t m = (std::size_t{1} << (d + 1)) - 1;
        double count = 1;
        for (std::size_t i = 0; i < m; ++i) count *= nx;
        if (count <= static_cast<double>(budget)) {
            if (exists_shattered_tree_enum(cls, d + 1, budget)) ++d;
            else return d;
        } else {
            if ((std::int64_t{1} << (d + 1)) > cls.size()) return d;
            throw ResourceBudgetError("oracle_ldim: enumeration budget exceeded");
        }
    }
}

// ---------------------------------------------------------------------------
// Shared fixtures
// ---------------------------------------------------------------------------

inline FiniteFunctionClass fixture_threshold2() { return make_threshold_class(2); }

inline FiniteFunctionClass fixture_full_binary_2pts() {
    return FiniteFunctionClass(Domain::numbered(2), LabelSpace::binary(),
                               {{-1, -1}, {-1, +1}, {+1, -1}, {+1, +1}});
}

inline FiniteFunctionClass fixture_two_indicators() {
    return FiniteFunctionClass(Domain::numbered(2), LabelSpace::binary(), {{+1, -1}, {-1, +1}},
                               {"left", "right"});
}

inline Distribution dyadic_product_p(const OutcomeSpace& space) {
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(0, -1.0)] = 0.125;
    p[space.index_of(1, -1.0)] = 0.25;
    p[space.index_of(1, +1.0)] = 0.125;
    return p;
}

inline Distribution mixture_p(const OutcomeSpace& space) {
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.75;
    p[space.index_of(0, -1.0)] = 0.25;
    return p;
}

inline Distribution mixture_q(const OutcomeSpace& space) {
    Distribution q(space.size(), 0.0);
    q[space.index_of(1, -1.0)] = 0.75;
    q[space.index_of(1, +1.0)] = 0.25;
    return q;
}

inline RuleFactory hedge_factory(const FiniteFunctionClass& cls, Loss loss,
                                 const OutcomeSpace& space) {
    return [&cls, loss, &space](std::uint64_t) { return std::make_unique<Hedge>(cls, loss, space); };
}

}  // namespace verify_detail

// ---------------------------------------------------------------------------
// Acceptance checks (one per criterion)
// ---------------------------------------------------------------------------

/// |SeqRad(l01 o F) - SeqRad(F)/2| <= 1e-9 over random binary classes,
/// both sides exact DP.
inline CheckResult check_halving_identity(std::uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0x11));
    double max_gap = 0.0;
    const int classes = 50;
    for (int i = 0; i < classes; ++i) {
        const auto cls = verify_detail::random_binary_class(rng, 3, 5);
        for (int n = 1; n <= 4; ++n) {
            const double lhs = seq_rademacher_loss_class(cls, Loss::zero_one(), n).value;
            const double rhs = 0.5 * seq_rademacher_sup(cls, n).value;
            max_gap = std::max(max_gap, std::abs(lhs - rhs));
        }
    }
    CheckResult res;
    res.name = "halving-identity";
    res.claim = "zero-one loss class halves the sequential Rademacher complexity";
    res.measured = {{"classes", classes}, {"depths", "1..4"}, {"max_discrepancy", max_gap}};
    res.threshold = "max discrepancy <= 1e-9";
    res.pass = max_gap <= 1e-9;
    return res;
}

/// DP supremum equals exhaustive enumeration over all trees.
inline CheckResult check_dp_vs_brute(std::uint64_t seed) {
    Rng rng(splitmix64(seed ^ 0x22));
    double max_gap = 0.0;
    const int classes = 20;
    for (int i = 0; i < classes; ++i) {
        const auto cls = (i % 2 == 0)
                             ? verify_detail::random_binary_class(rng, 3, 4)
                             : verify_detail::random_grid_class(rng, 3, 4, {-1.0, 0.0, 1.0});
        for (int n = 1; n <= 3; ++n) {
            const double dp = seq_rademacher_sup(cls, n).value;
            const double brute = verify_detail::enumerate_tree_sup(cls, n);
            max_gap = std::max(max_gap, std::abs(dp - brute));
        }
    }
    CheckResult res;
    res.name = "dp-vs-brute";
    res.claim = "backward-induction supremum equals full tree enumeration";
    res.measured = {{"classes", classes}, {"depths", "1..3"}, {"max_discrepancy", max_gap}};
    res.threshold = "max discrepancy <= 1e-12";
    res.pass = max_gap <= 1e-12;
    return res;
}

/// ERM on the adversarial threshold process keeps mean per-step risk
/// at or above 1/8 for every tie-break mode.
inline CheckResult check_lower_bound_1_8(std::uint64_t seed, int n = 8, int reps = 20000) {
    const AdversarialProcess proc(n);
    CheckResult res;
    res.name = "lower-bound-1-8";
    res.claim = "per-step conditional risk of ERM on the threshold process is at least 1/8";
    res.threshold = "mean >= 0.125 - 3*stderr for each tie-break";
    res.pass = true;
    res.measured = nlohmann::ordered_json::object();
    for (TieBreak tie :
         {TieBreak::lowest_index, TieBreak::highest_index, TieBreak::seeded_random}) {
        const auto est = adversarial_gen_risk_estimate(proc, tie, reps, seed);
        const bool ok = est.mean >= 0.125 - 3.0 * est.stderr_;
        res.measured[tie_break_name(tie)] = {{"mean", est.mean}, {"stderr", est.stderr_}};
        res.pass = res.pass && ok;
    }
    res.measured["n"] = n;
    res.measured["reps"] = reps;
    return res;
}

/// gen-value of ERM is at most 4x the sequential Rademacher complexity of
/// the loss class, on each of the five kernel families.
inline CheckResult check_erm_upper_bound(std::uint64_t seed, int reps = 5000) {
    using namespace verify_detail;
    const Loss loss = Loss::zero_one();
    CheckResult res;
    res.name = "erm-upper-bound";
    res.claim = "gen value of ERM <= 4 * SeqRad(loss class)";
    res.threshold = "mean <= 4*seqrad + 3*stderr on every kernel";
    res.pass = true;
    res.measured = nlohmann::ordered_json::object();

    const auto run_one = [&](const std::string& label, const FiniteFunctionClass& cls,
                             const ProcessKernel& kernel, std::uint64_t sub_seed) {
        const auto est = gen_value_estimate(cls, loss, kernel, TieBreak::lowest_index, reps,
                                            sub_seed);
        const double rad = seq_rademacher_loss_class(cls, loss, kernel.horizon()).value;
        const bool ok = est.mean <= 4.0 * rad + 3.0 * est.stderr_;
        res.measured[label] = {{"gen_mean", est.mean},
                               {"stderr", est.stderr_},
                               {"four_seqrad_loss", 4.0 * rad}};
        res.pass = res.pass && ok;
    };

    const auto cls = fixture_threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const int n = 8;
    run_one("product", cls, ProductKernel(space, dyadic_product_p(space), n),
            derive_seed(seed, 101));
    run_one("mixture", cls, MixtureIidKernel(space, 0.5, mixture_p(space), mixture_q(space), n),
            derive_seed(seed, 102));
    {
        Distribution start(space.size(), 0.0), end(space.size(), 0.0);
        start[space.index_of(0, +1.0)] = 0.5;
        start[space.index_of(1, -1.0)] = 0.5;
        end[space.index_of(0, -1.0)] = 0.5;
        end[space.index_of(1, +1.0)] = 0.5;
        run_one("drifting", cls, DriftingKernel(space, start, end, n), derive_seed(seed, 103));
    }
    {
        std::vector<int> seq;
        for (int t = 0; t < n; ++t) {
            const int x = t % 2;
            const double y = (t % 3 == 0) ? -1.0 : +1.0;
            seq.push_back(space.index_of(x, y));
        }
        run_one("point-mass", cls, PointMassKernel(space, seq), derive_seed(seed, 104));
    }
    {
        Rng brng(derive_seed(seed, 105));
        const BitVec b = BitVec::random(1 << 2, brng);
        const AdversarialFiniteKernel kernel(2, b);
        const auto adv_cls = adversarial_restricted_threshold_class(kernel);
        res.measured["adversarial_class_size"] = adv_cls.size();
        run_one("adversarial", adv_cls, kernel, derive_seed(seed, 106));
    }
    return res;
}

/// Exact replicate-wise reductions: product/gen to iid, point-mass/preq
/// to individual-sequence regret.
inline CheckResult check_reductions_exact(std::uint64_t seed) {
    using namespace verify_detail;
    const Loss loss = Loss::zero_one();
    const auto cls = fixture_threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const int n = 8;

    double max_gap_product = 0.0;
    {
        const Distribution p = dyadic_product_p(space);
        const ProductKernel kernel(space, p, n);
        const int reps = 2000;
        const auto gen = gen_value_estimate(cls, loss, kernel, TieBreak::lowest_index, reps, seed);
        const auto iid =
            iid_value_estimate(cls, loss, space, p, n, TieBreak::lowest_index, reps, seed);
        for (int r = 0; r < reps; ++r)
            max_gap_product = std::max(max_gap_product, std::abs(gen.values[r] - iid.values[r]));
    }

    double max_gap_pointmass = 0.0;
    {
        Rng rng(splitmix64(seed ^ 0x55));
        for (int k = 0; k < 50; ++k) {
            std::vector<int> seq(n);
            for (int t = 0; t < n; ++t) seq[t] = static_cast<int>(rng.below(space.size()));
            const PointMassKernel kernel(space, seq);
            const std::uint64_t sub_seed = derive_seed(seed, 500 + k);
            const auto preq =
                preq_value_estimate(cls, loss, kernel, hedge_factory(cls, loss, space), 1, sub_seed);
            Hedge direct(cls, loss, space);
            const double online = online_regret_on_sequence(cls, loss, space, direct, seq);
            max_gap_pointmass = std::max(max_gap_pointmass, std::abs(preq.values[0] - online));
        }
    }

    CheckResult res;
    res.name = "reductions-exact";
    res.claim = "product kernels reduce gen to iid regret; point masses reduce preq to sequence regret";
    res.measured = {{"max_gap_product", max_gap_product},
                    {"max_gap_point_mass", max_gap_pointmass}};
    res.threshold = "replicate-wise gaps exactly 0";
    res.pass = max_gap_product == 0.0 && max_gap_pointmass == 0.0;
    return res;
}

/// Three-term prequential decomposition: martingale term centered, the
/// comparator term controlled by 2*SeqRad(loss class), terms sum exactly.
inline CheckResult check_preq_decomposition(std::uint64_t seed, int n = 32, int reps = 5000) {
    using namespace verify_detail;
    const Loss loss = Loss::zero_one();
    const auto cls = fixture_threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const double rad = seq_rademacher_loss_class(cls, loss, n).value;

    CheckResult res;
    res.name = "preq-decomposition";
    res.claim = "prequential regret splits into martingale, sequence-regret, comparator terms";
    res.threshold = "|I| <= 3*stderr; III <= 2*seqrad + 3*stderr; terms sum within 1e-9";
    res.pass = true;
    res.measured = nlohmann::ordered_json::object();
    res.measured["two_seqrad_loss"] = 2.0 * rad;

    const auto run_one = [&](const std::string& label, const ProcessKernel& kernel,
                             std::uint64_t sub_seed) {
        const auto rep =
            decomposition_report(cls, loss, kernel, hedge_factory(cls, loss, space), reps, sub_seed);
        const bool ok_i = std::abs(rep.term_martingale.mean) <= 3.0 * rep.term_martingale.stderr_;
        const bool ok_iii =
            rep.term_comparator.mean <= 2.0 * rad + 3.0 * rep.term_comparator.stderr_;
        const bool ok_sum = rep.max_sum_mismatch <= 1e-9;
        res.measured[label] = {{"term_I_mean", rep.term_martingale.mean},
                               {"term_I_stderr", rep.term_martingale.stderr_},
                               {"term_II_mean", rep.term_online.mean},
                               {"term_III_mean", rep.term_comparator.mean},
                               {"term_III_stderr", rep.term_comparator.stderr_},
                               {"max_sum_mismatch", rep.max_sum_mismatch}};
        res.pass = res.pass && ok_i && ok_iii && ok_sum;
    };

    run_one("product", ProductKernel(space, dyadic_product_p(space), n), derive_seed(seed, 201));
    run_one("mixture", MixtureIidKernel(space, 0.5, mixture_p(space), mixture_q(space), n),
            derive_seed(seed, 202));
    return res;
}

/// Sign-transformed Rademacher sequences remain uniform: the map is a
/// bijection for every witness tree.
inline CheckResult check_sign_bijection(std::uint64_t seed, int trees = 100, int depth = 10) {
    Rng rng(splitmix64(seed ^ 0x77));
    int ok_count = 0;
    for (int i = 0; i < trees; ++i) {
        const auto tree = random_sign_tree(depth, rng);
        if (sign_bijection_check(tree)) ++ok_count;
    }
    CheckResult res;
    res.name = "sign-bijection";
    res.claim = "eps -> eps_t * s_t(eps_prefix) permutes the sign hypercube";
    res.measured = {{"trees", trees}, {"depth", depth}, {"bijective", ok_count}};
    res.threshold = "all trees bijective";
    res.pass = ok_count == trees;
    return res;
}

/// Dimension orderings and threshold-class formulas.
inline CheckResult check_dims_order(std::uint64_t seed) {
    using namespace verify_detail;
    Rng rng(splitmix64(seed ^ 0x88));
    CheckResult res;
    res.name = "dims-order";
    res.claim = "vc <= ldim, fat <= sfat, threshold classes match closed forms";
    res.threshold = "all orderings and formula matches hold";

    int vc_le_ldim = 0;
    const int binary_classes = 200;
    for (int i = 0; i < binary_classes; ++i) {
        const auto cls = random_binary_class(rng, 4, 6);
        if (vc_dimension(cls).value <= littlestone_dimension(cls).value) ++vc_le_ldim;
    }

    int fat_le_sfat = 0;
    const int grid_classes = 100;
    const std::vector<double> gammas = {0.25, 0.5, 1.0};
    for (int i = 0; i < grid_classes; ++i) {
        const auto cls = random_grid_class(rng, 3, 6, {-1.0, -0.5, 0.0, 0.5, 1.0});
        bool all = true;
        for (double g : gammas)
            all = all && fat_shattering(cls, g).value <= seq_fat_shattering(cls, g).value;
        if (all) ++fat_le_sfat;
    }

    bool ldim_formula = true;
    for (int k = 1; k <= 7; ++k) {
        const auto cls = make_threshold_class(k);
        const int expect = static_cast<int>(std::floor(std::log2(k + 1)));
        const int got = littlestone_dimension(cls).value;
        const int oracle = oracle_ldim(cls);
        ldim_formula = ldim_formula && got == expect && got == oracle;
    }

    bool vc_formula = true;
    for (int k = 1; k <= 10; ++k)
        vc_formula = vc_formula && vc_dimension(make_threshold_class(k)).value == 1;

    res.measured = {{"vc_le_ldim", vc_le_ldim},
                    {"binary_classes", binary_classes},
                    {"fat_le_sfat", fat_le_sfat},
                    {"grid_classes", grid_classes},
                    {"ldim_formula_ok", ldim_formula},
                    {"vc_formula_ok", vc_formula}};
    res.pass = vc_le_ldim == binary_classes && fat_le_sfat == grid_classes && ldim_formula &&
               vc_formula;
    return res;
}

/// Offset-ERM on the shared-level process: mean conditional risk near its
/// floor of 1 and shrinking with n; the level posterior concentrates.
inline CheckResult check_random_level(std::uint64_t seed, int reps = 1000) {
    const FiniteFunctionClass base(Domain::numbered(2), LabelSpace::grid({-1.0, 0.0, 1.0}),
                                   {{0.0, 0.0}, {1.0, -1.0}}, {"flat", "step"});
    const OffsetClass offset_cls(base);
    const Distribution p_x = {0.5, 0.5};

    CheckResult res;
    res.name = "random-level";
    res.claim = "offset-ERM risk stays in [1, 1+10/n], decreases in n; U_n approaches the level";
    res.threshold = "risk in [1, 1+10/n] per n; risk and |U_n - xi0| decreasing from n=50 to 200";
    res.measured = nlohmann::ordered_json::object();

    std::map<int, double> risk_mean, udev_mean;
    for (const int n : {50, 200}) {
        const RandomLevelKernel kernel(base, 0, p_x, n);
        std::vector<double> risks(reps), udevs(reps);
        parallel_for_index(reps, [&](int r) {
            const auto path = kernel.sample(path_seed(seed ^ n, r));
            std::vector<std::pair<int, double>> sample(n);
            for (int t = 0; t < n; ++t) sample[t] = {path.xs[t], path.ys[t]};
            const OffsetFit fit = erm_offset(offset_cls, sample);
            risks[r] = kernel.mean_conditional_risk(path, fit.theta, fit.offset);
            udevs[r] = std::abs(kernel.u_statistic(path, n + 1) - path.xi0);
        });
        const auto risk = RegretEstimate::summarize(std::move(risks), seed);
        const auto udev = RegretEstimate::summarize(std::move(udevs), seed);
        risk_mean[n] = risk.mean;
        udev_mean[n] = udev.mean;
        res.measured["n" + std::to_string(n)] = {{"risk_mean", risk.mean},
                                                 {"risk_stderr", risk.stderr_},
                                                 {"upper", 1.0 + 10.0 / n},
                                                 {"u_dev_mean", udev.mean}};
    }
    const bool in_window_50 = risk_mean[50] >= 1.0 && risk_mean[50] <= 1.0 + 10.0 / 50;
    const bool in_window_200 = risk_mean[200] >= 1.0 && risk_mean[200] <= 1.0 + 10.0 / 200;
    const bool risk_decreasing = risk_mean[50] > risk_mean[200];
    const bool udev_decreasing = udev_mean[50] > udev_mean[200];
    res.measured["in_window_50"] = in_window_50;
    res.measured["in_window_200"] = in_window_200;
    res.measured["risk_decreasing"] = risk_decreasing;
    res.measured["udev_decreasing"] = udev_decreasing;
    res.pass = in_window_50 && in_window_200 && risk_decreasing && udev_decreasing;
    return res;
}

/// The comparator of the mixture process is the component minimizer: the
/// argmin of R_n equals f*_P with frequency lambda.
inline CheckResult check_mixture_fraction(std::uint64_t seed, int reps = 10000, int n = 8) {
    using namespace verify_detail;
    const Loss loss = Loss::zero_one();
    const auto cls = fixture_two_indicators();
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.0), q(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 1.0;
    q[space.index_of(1, +1.0)] = 1.0;
    const double lambda = 0.3;
    const MixtureIidKernel kernel(space, lambda, p, q, n);

    // f*_P minimizes ell(P, .): the "left" indicator.
    int fstar_p = 0;
    {
        double best = 1e300;
        for (int j = 0; j < cls.size(); ++j) {
            const double v = expected_loss(loss, cls, space, p, j);
            if (v < best) {
                best = v;
                fstar_p = j;
            }
        }
    }

    std::vector<double> hits(reps);
    parallel_for_index(reps, [&](int r) {
        const Path path = kernel.sample_path(path_seed(seed, r));
        const auto m = detail::conditional_loss_matrix(cls, loss, space, path);
        std::vector<double> cum(cls.size(), 0.0);
        for (const auto& row : m)
            for (int j = 0; j < cls.size(); ++j) cum[j] += row[j];
        int argmin = 0;
        for (int j = 1; j < cls.size(); ++j)
            if (cum[j] < cum[argmin]) argmin = j;
        hits[r] = argmin == fstar_p ? 1.0 : 0.0;
    });
    const auto est = RegretEstimate::summarize(std::move(hits), seed);
    CheckResult res;
    res.name = "mixture-fraction";
    res.claim = "argmin of the averaged conditional risk is f*_P with frequency lambda";
    res.measured = {{"fraction", est.mean}, {"stderr", est.stderr_}, {"lambda", lambda},
                    {"reps", reps}};
    res.threshold = "|fraction - lambda| <= 3*stderr";
    res.pass = std::abs(est.mean - lambda) <= 3.0 * est.stderr_;
    return res;
}

/// Regression transform of the adversarial process: per-step absolute
/// risk of ERM at least gamma/80.
inline CheckResult check_regression_lower_bound(std::uint64_t seed, int n = 8, int reps = 20000) {
    const double gamma = 0.5;
    const RegressionLevels levels(0.05, -0.05, gamma);  // u - u' = gamma/5
    const AdversarialProcess proc(n);
    CheckResult res;
    res.name = "regression-lower-bound";
    res.claim = "absolute-loss risk of ERM on the transformed process is at least gamma/80";
    res.threshold = "mean >= gamma/80 - 3*stderr for each tie-break";
    res.pass = true;
    res.measured = nlohmann::ordered_json::object();
    res.measured["gamma"] = gamma;
    res.measured["gamma_over_80"] = gamma / 80.0;
    for (TieBreak tie :
         {TieBreak::lowest_index, TieBreak::highest_index, TieBreak::seeded_random}) {
        const auto est = adversarial_regression_risk_estimate(proc, levels, tie, reps, seed);
        const bool ok = est.mean >= gamma / 80.0 - 3.0 * est.stderr_;
        res.measured[tie_break_name(tie)] = {{"mean", est.mean}, {"stderr", est.stderr_}};
        res.pass = res.pass && ok;
    }
    return res;
}

/// Uniform martingale deviations shrink with n and reduce exactly to the
/// iid deviation on product kernels.
inline CheckResult check_umlln(std::uint64_t seed, int reps = 10000) {
    using namespace verify_detail;
    const auto cls = fixture_full_binary_2pts();
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.25);

    CheckResult res;
    res.name = "umlln-decreasing";
    res.claim = "uniform martingale deviation decreases in n and matches the iid deviation";
    res.threshold = "strictly decreasing over n in {8,16,32}; replicate-wise match <= 1e-12";
    res.measured = nlohmann::ordered_json::object();

    std::vector<double> means;
    double max_gap = 0.0;
    for (const int n : {8, 16, 32}) {
        const ProductKernel kernel(space, p, n);
        const std::uint64_t sub_seed = derive_seed(seed, 600 + n);
        const auto mart = martingale_deviation(kernel, cls, reps, sub_seed);
        const auto ulln = ulln_deviation(kernel, cls, reps, sub_seed);
        for (int r = 0; r < reps; ++r)
            max_gap = std::max(max_gap, std::abs(mart.values[r] - ulln.values[r]));
        means.push_back(mart.mean);
        res.measured["n" + std::to_string(n)] = {{"umlln_mean", mart.mean},
                                                 {"stderr", mart.stderr_},
                                                 {"ulln_mean", ulln.mean}};
    }
    res.measured["max_match_gap"] = max_gap;
    const bool decreasing = means[0] > means[1] && means[1] > means[2];
    res.measured["strictly_decreasing"] = decreasing;
    res.pass = decreasing && max_gap <= 1e-12;
    return res;
}

// ---------------------------------------------------------------------------
// Suite registry
// ---------------------------------------------------------------------------

inline const std::vector<std::pair<std::string, CheckResult (*)(std::uint64_t)>>&
verify_suites() {
    static const std::vector<std::pair<std::string, CheckResult (*)(std::uint64_t)>> suites = {
        {"halving", [](std::uint64_t s) { return check_halving_identity(s); }},
        {"dp-brute", [](std::uint64_t s) { return check_dp_vs_brute(s); }},
        {"lower-1/8", [](std::uint64_t s) { return check_lower_bound_1_8(s, 8, 20000); }},
        {"erm-upper", [](std::uint64_t s) { return check_erm_upper_bound(s, 5000); }},
        {"reductions", [](std::uint64_t s) { return check_reductions_exact(s); }},
        {"preq-decomp", [](std::uint64_t s) { return check_preq_decomposition(s, 32, 5000); }},
        {"bijection", [](std::uint64_t s) { return check_sign_bijection(s, 100, 10); }},
        {"dims-order", [](std::uint64_t s) { return check_dims_order(s); }},
        {"random-level", [](std::uint64_t s) { return check_random_level(s, 1000); }},
        {"mixture", [](std::uint64_t s) { return check_mixture_fraction(s, 10000, 8); }},
        {"regression-lower",
         [](std::uint64_t s) { return check_regression_lower_bound(s, 8, 20000); }},
        {"umlln", [](std::uint64_t s) { return check_umlln(s, 10000); }},
    };
    return suites;
}

inline std::vector<std::string> verify_suite_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : verify_suites()) names.push_back(name);
    names.push_back("all");
    return names;
}

inline VerifyReport run_verify_suite(const std::string& name, std::uint64_t seed) {
    VerifyReport report;
    report.suite = name;
    report.seed = seed;
    bool found = false;
    for (const auto& [suite_name, fn] : verify_suites()) {
        if (name == "all" || name == suite_name) {
            report.checks.push_back(fn(seed));
            found = true;
        }
    }
    if (!found) throw std::invalid_argument("verify: unknown suite '" + name + "'");
    report.pass = true;
    for (const auto& c : report.checks) report.pass = report.pass && c.pass;
    return report;
}

}  // namespace learnlab
