#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "learnlab/learners.hpp"
#include "learnlab/regret.hpp"
#include "learnlab/verify.hpp"

using namespace learnlab;

namespace {

RuleFactory hedge_factory(const FiniteFunctionClass& cls, Loss loss, const OutcomeSpace& space) {
    return [&cls, loss, &space](std::uint64_t) { return std::make_unique<Hedge>(cls, loss, space); };
}

}  // namespace

TEST_CASE("erm basics") {
    const auto k3 = make_threshold_class(3);
    const OutcomeSpace space(k3.domain(), k3.labels());

    // Sample [(1,-1),(3,+1)]: theta in {1,2} fit perfectly; lowest wins.
    const std::vector<int> sample = {space.index_of(0, -1.0), space.index_of(2, +1.0)};
    CHECK(erm(k3, Loss::zero_one(), space, sample) == 1);
    CHECK(erm(k3, Loss::zero_one(), space, sample, TieBreak::highest_index) == 2);

    Rng rng(3);
    const int random_pick = erm(k3, Loss::zero_one(), space, sample, TieBreak::seeded_random, &rng);
    CHECK((random_pick == 1 || random_pick == 2));

    // Singleton class: always that function.
    const FiniteFunctionClass single(Domain::numbered(3), LabelSpace::binary(), {{1, -1, 1}});
    const OutcomeSpace sspace(single.domain(), single.labels());
    CHECK(erm(single, Loss::zero_one(), sspace, sample) == 0);

    // Empty sample ties the whole class.
    CHECK(erm(k3, Loss::zero_one(), space, std::vector<int>{}) == 0);
    CHECK(erm(k3, Loss::zero_one(), space, std::vector<int>{}, TieBreak::highest_index) ==
          k3.size() - 1);
}

TEST_CASE("erm attains the empirical minimum") {
    Rng rng(5);
    const auto cls = verify_detail::random_binary_class(rng, 3, 6);
    const OutcomeSpace space(cls.domain(), cls.labels());
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<int> sample(6);
        for (auto& z : sample) z = static_cast<int>(rng.below(space.size()));
        const int fhat = erm(cls, Loss::zero_one(), space, sample);
        double best = 1e300, own = 0.0;
        for (int j = 0; j < cls.size(); ++j) {
            double cum = 0.0;
            for (int z : sample) cum += loss_eval(Loss::zero_one(), cls, space.at(z), j);
            best = std::min(best, cum);
            if (j == fhat) own = cum;
        }
        CHECK(own == best);
    }
}

TEST_CASE("offset erm") {
    const FiniteFunctionClass base(Domain::numbered(2), LabelSpace::grid({-1.0, 0.0, 1.0}),
                                   {{0.0, 0.0}, {1.0, -1.0}});
    const OffsetClass oc(base);

    // Labels exactly f_1 + 5: recovered with zero residual.
    std::vector<std::pair<int, double>> shifted = {{0, 6.0}, {1, 4.0}, {0, 6.0}};
    const auto fit = erm_offset(oc, shifted);
    CHECK(fit.theta == 1);
    CHECK(fit.offset == 5.0);
    CHECK(fit.rss == 0.0);

    // Constant base, labels {1,3}: offset is the mean 2.
    const OffsetClass constant(FiniteFunctionClass(Domain::numbered(1),
                                                   LabelSpace::grid({0.0, 1.0}), {{0.0}}));
    std::vector<std::pair<int, double>> pair = {{0, 1.0}, {0, 3.0}};
    CHECK(erm_offset(constant, pair).offset == 2.0);

    CHECK_THROWS_AS(erm_offset(oc, std::vector<std::pair<int, double>>{}),
                    std::invalid_argument);

    // Noisy sample: the closed-form offset beats a fine offset grid for
    // every theta, and the returned pair minimizes the residual.
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::pair<int, double>> sample;
        for (int i = 0; i < 12; ++i)
            sample.emplace_back(static_cast<int>(rng.below(2)), rng.normal() * 0.5);
        const auto got = erm_offset(oc, sample);
        double best_grid = 1e300;
        int best_theta = -1;
        double best_c = 0.0;
        for (int theta = 0; theta < base.size(); ++theta) {
            for (double c = -3.0; c <= 3.0; c += 1e-3) {
                double rss = 0.0;
                for (const auto& [x, y] : sample) {
                    const double r = y - base.value(theta, x) - c;
                    rss += r * r;
                }
                if (rss < best_grid) {
                    best_grid = rss;
                    best_theta = theta;
                    best_c = c;
                }
            }
        }
        CHECK(got.theta == best_theta);
        CHECK(std::abs(got.offset - best_c) <= 2e-3);
        CHECK(got.rss <= best_grid + 1e-9);
    }
}

TEST_CASE("hedge weights") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    Hedge hedge(cls, Loss::zero_one(), space);

    // Uniform before any update.
    const auto& q0 = hedge.predict();
    for (double w : q0) CHECK(std::abs(w - 1.0 / cls.size()) <= 1e-12);

    // A probability distribution after every update.
    Rng rng(9);
    for (int t = 0; t < 10; ++t) {
        hedge.update(static_cast<int>(rng.below(space.size())));
        const auto& q = hedge.predict();
        double sum = 0.0;
        for (double w : q) {
            CHECK(w >= 0.0);
            sum += w;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }

    // Replay equivalence: identical prefixes give identical predictions.
    Hedge a(cls, Loss::zero_one(), space), b(cls, Loss::zero_one(), space);
    const std::vector<int> prefix = {0, 3, 1, 2, 0};
    for (int z : prefix) {
        a.update(z);
        b.update(z);
    }
    CHECK(a.predict() == b.predict());
}

TEST_CASE("hedge worst-case regret bound at |F|=2, n=4") {
    // Exhaustive over all outcome sequences: normalized regret stays
    // below sqrt(n ln 2 / 2)/n.
    const FiniteFunctionClass cls(Domain::numbered(2), LabelSpace::binary(), {{1, 1}, {1, -1}});
    const OutcomeSpace space(cls.domain(), cls.labels());
    const int n = 4;
    const auto est = online_worst_case(cls, Loss::zero_one(), space,
                                       hedge_factory(cls, Loss::zero_one(), space), n,
                                       /*exact=*/true, 1);
    CHECK(est.mean <= std::sqrt(n * std::log(2.0) / 2.0) / n);
    CHECK_FALSE(est.lower_estimate);
}

TEST_CASE("singleton class has zero regret") {
    const FiniteFunctionClass single(Domain::numbered(2), LabelSpace::binary(), {{1, -1}});
    const OutcomeSpace space(single.domain(), single.labels());
    const auto est = online_worst_case(single, Loss::zero_one(), space,
                                       hedge_factory(single, Loss::zero_one(), space), 3,
                                       /*exact=*/true, 1);
    CHECK(est.mean == 0.0);
}

TEST_CASE("follow-the-leader pays on adversarial sequences") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());
    const RuleFactory ftl = [&](std::uint64_t) {
        return std::make_unique<FollowTheLeader>(cls, Loss::zero_one(), space);
    };
    const auto est = online_worst_case(cls, Loss::zero_one(), space, ftl, 4, /*exact=*/true, 1);
    CHECK(est.mean > 0.0);
}

TEST_CASE("prequential runner") {
    const auto cls = make_threshold_class(2);
    const OutcomeSpace space(cls.domain(), cls.labels());

    // Point-mass process: recorded losses equal the sequence losses.
    const std::vector<int> seq = {0, 3, 2, 1};
    const PointMassKernel kernel(space, seq);
    Hedge rule(cls, Loss::zero_one(), space);
    const auto traj = run_prequential(rule, cls, Loss::zero_one(), kernel, 3);
    REQUIRE(traj.steps.size() == seq.size());
    for (std::size_t t = 0; t < seq.size(); ++t) {
        CHECK(traj.steps[t].z == seq[t]);
        CHECK(traj.steps[t].realized_loss == traj.steps[t].conditional_risk);
    }

    // Singleton class: trajectory losses equal that function's losses.
    const FiniteFunctionClass single(Domain::numbered(2), LabelSpace::binary(), {{1, -1}});
    const OutcomeSpace sspace(single.domain(), single.labels());
    const PointMassKernel skernel(sspace, std::vector<int>{0, 1, 2, 3});
    Hedge srule(single, Loss::zero_one(), sspace);
    const auto straj = run_prequential(srule, single, Loss::zero_one(), skernel, 3);
    for (std::size_t t = 0; t < 4; ++t)
        CHECK(straj.steps[t].realized_loss ==
              loss_eval(Loss::zero_one(), single, sspace.at(straj.steps[t].z), 0));

    // Product kernel: cumulative hedge loss stays within the regret bound
    // of the best fixed function, path by path.
    Distribution p(space.size(), 0.25);
    const ProductKernel prod(space, p, 50);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        Hedge h(cls, Loss::zero_one(), space);
        const auto tr = run_prequential(h, cls, Loss::zero_one(), prod, seed);
        double hedge_loss = 0.0;
        std::vector<double> cum(cls.size(), 0.0);
        for (const auto& step : tr.steps) {
            hedge_loss += step.realized_loss;
            for (int j = 0; j < cls.size(); ++j)
                cum[j] += loss_eval(Loss::zero_one(), cls, space.at(step.z), j);
        }
        const double best = *std::min_element(cum.begin(), cum.end());
        const double bound = std::sqrt(50.0 * std::log(cls.size()) / 2.0) +
                             std::sqrt(std::log(cls.size()) / 8.0);
        CHECK(hedge_loss <= best + 2.0 * bound);
    }
}
