#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "learnlab/regret.hpp"
#include "learnlab/verify.hpp"

using namespace learnlab;

namespace {

RuleFactory hedge_factory(const FiniteFunctionClass& cls, Loss loss, const OutcomeSpace& space) {
    return [&cls, loss, &space](std::uint64_t) { return std::make_unique<Hedge>(cls, loss, space); };
}

}  // namespace

TEST_CASE("p-regret") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());

    // At the minimizer the regret vanishes.
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(1, -1.0)] = 0.5;
    int best = 0;
    double best_loss = 1e300;
    for (int j = 0; j < cls.size(); ++j) {
        const double v = expected_loss(Loss::zero_one(), cls, space, p, j);
        if (v < best_loss) {
            best_loss = v;
            best = j;
        }
    }
    CHECK(p_regret(cls, Loss::zero_one(), space, p, best) == 0.0);

    // Point mass: pointwise losses minus the pointwise minimum.
    Distribution point(space.size(), 0.0);
    const int z = space.index_of(0, -1.0);
    point[z] = 1.0;
    for (int j = 0; j < cls.size(); ++j) {
        double min_loss = 1e300;
        for (int f = 0; f < cls.size(); ++f)
            min_loss = std::min(min_loss, loss_eval(Loss::zero_one(), cls, space.at(z), f));
        CHECK(p_regret(cls, Loss::zero_one(), space, point, j) ==
              loss_eval(Loss::zero_one(), cls, space.at(z), j) - min_loss);
    }

    // Uniform labels make every function's zero-one risk 1/2.
    Distribution uniform(space.size(), 0.0);
    uniform[space.index_of(0, -1.0)] = 0.5;
    uniform[space.index_of(0, +1.0)] = 0.5;
    for (int j = 0; j < cls.size(); ++j)
        CHECK(p_regret(cls, Loss::zero_one(), space, uniform, j) == 0.0);
}

TEST_CASE("process regret") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(1, -1.0)] = 0.25;
    p[space.index_of(1, +1.0)] = 0.25;

    // Product kernel: equals the P-regret on every path.
    const ProductKernel kernel(space, p, 6);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto path = kernel.sample_path(seed);
        for (int j = 0; j < cls.size(); ++j)
            CHECK(process_regret(cls, Loss::zero_one(), space, path, j) ==
                  p_regret(cls, Loss::zero_one(), space, p, j));
    }

    // Point-mass kernel: direct computation.
    const std::vector<int> seq = {0, 3, 1};
    const PointMassKernel pm(space, seq);
    const auto path = pm.sample_path(1);
    for (int j = 0; j < cls.size(); ++j) {
        double acc = 0.0;
        for (int z : seq) {
            double min_loss = 1e300;
            for (int f = 0; f < cls.size(); ++f)
                min_loss = std::min(min_loss, loss_eval(Loss::zero_one(), cls, space.at(z), f));
            acc += loss_eval(Loss::zero_one(), cls, space.at(z), j) - min_loss;
        }
        CHECK(process_regret(cls, Loss::zero_one(), space, path, j) == acc / 3.0);
    }
}

TEST_CASE("adversarial gen estimate is the mean per-step risk") {
    const AdversarialProcess proc(4);
    const auto est = adversarial_gen_risk_estimate(proc, TieBreak::lowest_index, 400, 11);
    CHECK(est.reps == 400);
    CHECK(est.mean >= 0.0);
    CHECK(est.mean <= 1.0);
    // Replays are deterministic given the seed.
    const auto again = adversarial_gen_risk_estimate(proc, TieBreak::lowest_index, 400, 11);
    CHECK(est.values == again.values);
}

TEST_CASE("gen and iid estimators coincide on a product kernel") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(0, -1.0)] = 0.125;
    p[space.index_of(1, -1.0)] = 0.25;
    p[space.index_of(1, +1.0)] = 0.125;
    const ProductKernel kernel(space, p, 8);
    const auto gen = gen_value_estimate(cls, Loss::zero_one(), kernel, TieBreak::lowest_index,
                                        300, 17);
    const auto iid = iid_value_estimate(cls, Loss::zero_one(), space, p, 8,
                                        TieBreak::lowest_index, 300, 17);
    CHECK(gen.values == iid.values);
}

TEST_CASE("preq on point mass equals the sequence regret") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    const std::vector<int> seq = {0, 2, 3, 1, 0, 2};
    const PointMassKernel kernel(space, seq);
    const auto preq = preq_value_estimate(cls, Loss::zero_one(), kernel,
                                          hedge_factory(cls, Loss::zero_one(), space), 1, 23);
    Hedge rule(cls, Loss::zero_one(), space);
    CHECK(preq.values[0] == online_regret_on_sequence(cls, Loss::zero_one(), space, rule, seq));
}

TEST_CASE("preq with a singleton class is zero") {
    const FiniteFunctionClass single(Domain::numbered(2), LabelSpace::binary(), {{1, -1}});
    const OutcomeSpace space(single.domain(), single.labels());
    Distribution p(space.size(), 0.25);
    const ProductKernel kernel(space, p, 10);
    const auto est = preq_value_estimate(single, Loss::zero_one(), kernel,
                                         hedge_factory(single, Loss::zero_one(), space), 50, 5);
    CHECK(est.mean == 0.0);
}

TEST_CASE("online worst case budget") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    CHECK_THROWS_AS(online_worst_case(cls, Loss::zero_one(), space,
                                      hedge_factory(cls, Loss::zero_one(), space), 4,
                                      /*exact=*/true, 1, /*budget=*/10),
                    ResourceBudgetError);
    // Search mode is flagged as a lower estimate and never exceeds exact.
    const auto exact = online_worst_case(cls, Loss::zero_one(), space,
                                         hedge_factory(cls, Loss::zero_one(), space), 3,
                                         /*exact=*/true, 1);
    const auto search = online_worst_case(cls, Loss::zero_one(), space,
                                          hedge_factory(cls, Loss::zero_one(), space), 3,
                                          /*exact=*/false, 1);
    CHECK(search.lower_estimate);
    CHECK(search.mean <= exact.mean + 1e-12);
}

TEST_CASE("martingale deviation") {
    const FiniteFunctionClass cls(Domain::numbered(2), LabelSpace::binary(),
                                  {{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
    const OutcomeSpace space(cls.domain(), cls.labels());

    // Deterministic kernel: every summand is exactly zero.
    const PointMassKernel pm(space, std::vector<int>{0, 3, 1, 2});
    const auto zero = martingale_deviation(pm, cls, 20, 3);
    CHECK(zero.mean == 0.0);

    // Product kernel: reduces to the iid deviation replicate by replicate.
    Distribution p(space.size(), 0.25);
    const ProductKernel prod(space, p, 16);
    const auto mart = martingale_deviation(prod, cls, 200, 7);
    const auto ulln = ulln_deviation(prod, cls, 200, 7);
    CHECK(mart.values == ulln.values);

    // Deviations shrink as the horizon grows.
    const ProductKernel prod8(space, p, 8), prod32(space, p, 32);
    CHECK(martingale_deviation(prod32, cls, 2000, 9).mean <
          martingale_deviation(prod8, cls, 2000, 9).mean);
}

TEST_CASE("decomposition report") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());

    // Point-mass process: terms (I) and (III) vanish identically.
    const std::vector<int> seq = {0, 3, 1, 2, 0, 1, 2, 3};
    const PointMassKernel pm(space, seq);
    const auto rep = decomposition_report(cls, Loss::zero_one(), pm,
                                          hedge_factory(cls, Loss::zero_one(), space), 10, 3);
    CHECK(rep.term_martingale.mean == 0.0);
    CHECK(rep.term_comparator.mean == 0.0);
    CHECK(rep.max_sum_mismatch <= 1e-9);

    // Stochastic kernel: the martingale term is centered and the pieces
    // sum to the total.
    Distribution p(space.size(), 0.25);
    const ProductKernel prod(space, p, 16);
    const auto rep2 = decomposition_report(cls, Loss::zero_one(), prod,
                                           hedge_factory(cls, Loss::zero_one(), space), 2000, 5);
    CHECK(std::abs(rep2.term_martingale.mean) <= 3.0 * rep2.term_martingale.stderr_);
    CHECK(rep2.max_sum_mismatch <= 1e-9);
}

TEST_CASE("stationary gap") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.25);

    // Product kernel with P* = P: no gap.
    const ProductKernel prod(space, p, 8);
    const auto path = prod.sample_path(3);
    const auto rep = stationary_gap(cls, Loss::zero_one(), prod, path, p);
    CHECK(rep.sup_gap == 0.0);
    CHECK(rep.tv == 0.0);
    CHECK(rep.bound_holds);

    // Drifting kernel: the gap decreases with the horizon and respects
    // sup_f gap <= B * TV (and a fortiori <= 2 TV for unit-bounded loss).
    Distribution start(space.size(), 0.0), end(space.size(), 0.0);
    start[space.index_of(0, +1.0)] = 1.0;
    end[space.index_of(1, -1.0)] = 1.0;
    double prev = 1e300;
    for (const int n : {4, 8, 16}) {
        const DriftingKernel kernel(space, start, end, n);
        const auto kpath = kernel.sample_path(1);
        const auto krep = stationary_gap(cls, Loss::zero_one(), kernel, kpath, end);
        CHECK(krep.bound_holds);
        CHECK(krep.sup_gap <= 2.0 * krep.tv + 1e-12);
        CHECK(krep.sup_gap < prev);
        prev = krep.sup_gap;
    }
}

TEST_CASE("estimates are nonnegative in expectation for standard rules") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(0, -1.0)] = 0.125;
    p[space.index_of(1, -1.0)] = 0.25;
    p[space.index_of(1, +1.0)] = 0.125;
    const ProductKernel kernel(space, p, 8);
    const auto gen = gen_value_estimate(cls, Loss::zero_one(), kernel, TieBreak::lowest_index,
                                        2000, 3);
    const auto preq = preq_value_estimate(cls, Loss::zero_one(), kernel,
                                          hedge_factory(cls, Loss::zero_one(), space), 2000, 3);
    CHECK(gen.mean >= -3.0 * gen.stderr_);
    CHECK(preq.mean >= -3.0 * preq.stderr_);
}
