#include <catch2/catch_amalgamated.hpp>

#include "learnlab/adversarial.hpp"
#include "learnlab/processes.hpp"
#include "learnlab/random_level.hpp"
#include "learnlab/regret.hpp"

using namespace learnlab;

namespace {

FiniteFunctionClass threshold2() { return make_threshold_class(2); }

Distribution simple_p(const OutcomeSpace& space) {
    Distribution p(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.5;
    p[space.index_of(1, -1.0)] = 0.25;
    p[space.index_of(1, +1.0)] = 0.25;
    return p;
}

}  // namespace

TEST_CASE("product kernel") {
    const auto cls = threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const ProductKernel kernel(space, simple_p(space), 5);

    // Conditional is the marginal for every prefix.
    const auto path = kernel.sample_path(3);
    for (const auto& d : path.step_dists) CHECK(d == simple_p(space));

    // Same seed reproduces an identical path.
    const auto again = kernel.sample_path(3);
    CHECK(path.z == again.z);

    // Expected loss is constant in t.
    for (int j = 0; j < cls.size(); ++j) {
        const double e0 = expected_loss(Loss::zero_one(), cls, space, path.step_dists[0], j);
        for (const auto& d : path.step_dists)
            CHECK(expected_loss(Loss::zero_one(), cls, space, d, j) == e0);
    }

    CHECK(check_kernel_conditionals(kernel, nullptr));
    CHECK(conditional_average(kernel, path) == simple_p(space));
}

TEST_CASE("mixture kernel") {
    const auto cls = threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution p(space.size(), 0.0), q(space.size(), 0.0);
    p[space.index_of(0, +1.0)] = 0.75;
    p[space.index_of(0, -1.0)] = 0.25;
    q[space.index_of(1, -1.0)] = 1.0;

    // Overlapping supports rejected.
    CHECK_THROWS_AS(MixtureIidKernel(space, 0.5, p, p, 4), std::invalid_argument);

    const MixtureIidKernel kernel(space, 0.3, p, q, 6);
    CHECK(check_kernel_conditionals(kernel, nullptr));

    // lambda = 1 (or 0) behaves as the corresponding product process.
    const MixtureIidKernel pure_p(space, 1.0, p, q, 6);
    const ProductKernel prod_p(space, p, 6);
    const auto mix_path = pure_p.sample_path(11);
    const auto prod_path = prod_p.sample_path(11);
    for (int t = 1; t < 6; ++t) CHECK(mix_path.step_dists[t] == p);
    CHECK(prod_path.step_dists[0] == p);

    // After a P-support outcome the conditional is exactly P.
    std::vector<int> prefix = {space.index_of(0, +1.0)};
    CHECK(kernel.conditional(nullptr, prefix) == p);
    prefix.push_back(space.index_of(0, -1.0));
    CHECK(kernel.conditional(nullptr, prefix) == p);

    // Averaged conditional on a P-component path: ((lambda P + (1-lambda) Q) + (n-1) P)/n.
    Path path = kernel.sample_path(2);
    while (kernel.component_of(path) != 0) path = kernel.sample_path(path.seed + 1);
    const auto avg = conditional_average(kernel, path);
    for (int i = 0; i < space.size(); ++i) {
        const double first = 0.3 * p[i] + 0.7 * q[i];
        const double expect = (first + 5.0 * p[i]) / 6.0;
        CHECK(std::abs(avg[i] - expect) <= 1e-15);
    }
}

TEST_CASE("drifting kernel") {
    const auto cls = threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    Distribution start(space.size(), 0.0), end(space.size(), 0.0);
    start[space.index_of(0, +1.0)] = 1.0;
    end[space.index_of(1, -1.0)] = 1.0;

    // Immediate schedule: the process is already the end distribution.
    const DriftingKernel immediate(space, start, end, 4,
                                   DriftSchedule{DriftSchedule::Kind::immediate, 1.0});
    const auto ipath = immediate.sample_path(5);
    for (const auto& d : ipath.step_dists) CHECK(d == end);

    // Linear schedule: TV(Pbar, P_end) = 0.5 * ||start-end||_1 * (n+1)/(2n), decreasing in n.
    double prev = 1e300;
    for (const int n : {4, 8, 16}) {
        const DriftingKernel kernel(space, start, end, n);
        const auto path = kernel.sample_path(7);
        const auto pbar = conditional_average(kernel, path);
        const double tv = total_variation(pbar, end);
        double l1 = 0.0;
        for (int i = 0; i < space.size(); ++i) l1 += std::abs(start[i] - end[i]);
        const double expect = 0.5 * l1 * (n + 1.0) / (2.0 * n);
        CHECK(std::abs(tv - expect) <= 1e-12);
        CHECK(tv < prev);
        prev = tv;
        CHECK(check_kernel_conditionals(kernel, nullptr));
    }
}

TEST_CASE("point mass kernel") {
    const auto cls = threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const std::vector<int> seq = {0, 3, 1, 2};
    const PointMassKernel kernel(space, seq);

    const auto path = kernel.sample_path(1);
    CHECK(path.z == seq);  // sampling is deterministic
    for (int t = 0; t < 4; ++t) {
        CHECK(path.step_dists[t][seq[t]] == 1.0);
        for (int j = 0; j < cls.size(); ++j)
            CHECK(expected_loss(Loss::zero_one(), cls, space, path.step_dists[t], j) ==
                  loss_eval(Loss::zero_one(), cls, space.at(seq[t]), j));
    }

    // Averaged conditional is the empirical distribution of the sequence.
    const auto avg = conditional_average(kernel, path);
    CHECK(avg[0] == 0.25);
    CHECK(avg[1] == 0.25);
    CHECK(avg[2] == 0.25);
    CHECK(avg[3] == 0.25);
}

TEST_CASE("adversarial construction traces the counter recursion") {
    // n=2, b=1011: signs (+1,-1) keep l at 2, emit X=10100 with label b[3]=1.
    const BitVec b = BitVec::from_string("1011");
    const auto path = adversarial_path_for_signs(b, {+1, -1});
    CHECK(path.realized_l[0] == 2);
    CHECK(path.realized_l[1] == 2);
    const auto sample = adversarial_sample(path);
    CHECK(sample[0].first.to_string() == "10100");
    CHECK(sample[0].second == 1);
    CHECK(sample[1].first.to_string() == "10100");
    CHECK(sample[1].second == 1);
}

TEST_CASE("all-plus sign path saturates the counter") {
    Rng rng(23);
    const BitVec b = BitVec::random(1 << 4, rng);
    const auto path = adversarial_path_for_signs(b, {+1, +1, +1, +1});
    CHECK(path.realized_l.back() == (1 << 4) - 1);
}

TEST_CASE("adversarial invariants") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull}) {
        const AdversarialProcess proc(5);
        const auto path = proc.sample(seed);
        const BitVec truth = adversarial_truth(path.b);

        for (const auto l : path.realized_l) CHECK(l <= (1 << 5) - 1);

        // Labels follow the threshold rule Y = 1{X <= b1}, and emitted X
        // values are even (trailing bit zero) while the truth is odd.
        for (const auto& [x, y] : adversarial_sample(path)) {
            CHECK(y == (BitVec::compare(x, truth) <= 0 ? 1 : 0));
            CHECK_FALSE(x.get(x.size()));
        }
        CHECK(truth.get(truth.size()));

        // The hidden truth is consistent with both support outcomes at
        // every step, so its per-step risk vanishes (realizability).
        CHECK(adversarial_mean_step_risk(path, truth) == 0.0);
    }
}

TEST_CASE("adversarial finite materialization") {
    Rng rng(5);
    const BitVec b = BitVec::random(4, rng);
    const AdversarialFiniteKernel kernel(2, b);
    CHECK(kernel.outcomes().domain().size() == 4);
    CHECK(check_kernel_conditionals(kernel, nullptr));

    const auto cls = adversarial_restricted_threshold_class(kernel);
    CHECK(cls.size() == 5);

    // Realizability carries over: some member has zero conditional risk
    // at every step of every path.
    const auto path = kernel.sample_path(9);
    bool some_zero = false;
    for (int j = 0; j < cls.size(); ++j) {
        double total = 0.0;
        for (const auto& d : path.step_dists)
            total += expected_loss(Loss::zero_one(), cls, kernel.outcomes(), d, j);
        some_zero = some_zero || total == 0.0;
    }
    CHECK(some_zero);
}

TEST_CASE("adversarial horizon range") {
    CHECK_THROWS_AS(AdversarialProcess(0), std::invalid_argument);
    CHECK_THROWS_AS(AdversarialProcess(25), std::invalid_argument);
    CHECK_NOTHROW(AdversarialProcess(1));
}

TEST_CASE("regression risk is the margin-scaled classification risk") {
    // The transformed predictor takes values in {u, u'}, so each per-step
    // absolute loss is |u - u'| times the corresponding zero-one loss.
    const AdversarialProcess proc(5);
    const double u = 0.05, uprime = -0.05;
    for (const std::uint64_t seed : {3ull, 4ull, 5ull}) {
        const auto path = proc.sample(seed);
        Rng rng(seed);
        const BitVec theta =
            threshold_erm(adversarial_sample(path), (1 << 5) + 1, TieBreak::lowest_index, &rng);
        const double reg = adversarial_regression_mean_step_risk(path, theta, u, uprime);
        const double cls = adversarial_mean_step_risk(path, theta);
        CHECK(std::abs(reg - (u - uprime) * cls) <= 1e-15);
    }
}

TEST_CASE("bit vector arithmetic") {
    const BitVec a = BitVec::from_string("01011");
    const BitVec b = BitVec::from_string("00111");
    CHECK(BitVec::compare(a, b) > 0);
    CHECK(a.minus(b).to_string() == "00100");
    CHECK(b.plus(BitVec::from_string("00001")).to_string() == "01000");
    CHECK(a.minus_one().to_string() == "01010");
    CHECK(BitVec::ones(3).to_string() == "111");

    Rng rng(17);
    const BitVec lo = BitVec::from_string("0010000");
    const BitVec hi = BitVec::from_string("0110001");
    for (int i = 0; i < 200; ++i) {
        const BitVec r = BitVec::uniform_in(lo, hi, rng);
        CHECK(BitVec::compare(lo, r) <= 0);
        CHECK(BitVec::compare(r, hi) <= 0);
    }
}

TEST_CASE("regression transform") {
    const auto cls = threshold2();
    const OutcomeSpace space(cls.domain(), cls.labels());
    const auto inner = std::make_shared<ProductKernel>(space, simple_p(space), 4);

    CHECK_THROWS_AS(RegressionLevels(0.0, 0.05, 0.5), std::invalid_argument);   // u <= u'
    CHECK_THROWS_AS(RegressionLevels(0.05, 0.0, 0.5), std::invalid_argument);   // margin too small
    CHECK_NOTHROW(RegressionLevels(0.05, -0.05, 0.5));

    const RegressionTransformKernel kernel(inner, RegressionLevels(1.0, 0.0, 0.5));
    CHECK(kernel.outcomes().labels().values == std::vector<double>{0.0, 1.0});
    const auto path = kernel.sample_path(3);
    const auto inner_path = inner->sample_path(3);
    CHECK(path.z == inner_path.z);  // indices carry over; labels are remapped
    for (int t = 0; t < 4; ++t) {
        const Outcome& z = kernel.outcomes().at(path.z[t]);
        const Outcome& zi = space.at(inner_path.z[t]);
        CHECK(z.x == zi.x);
        CHECK(z.y == (zi.y > 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("random level process") {
    const FiniteFunctionClass base(Domain::numbered(2), LabelSpace::grid({-1.0, 0.0, 1.0}),
                                   {{0.0, 0.0}, {1.0, -1.0}});
    const RandomLevelKernel kernel(base, 0, {0.5, 0.5}, 30);

    // Zero-noise hook: labels equal f*(x) and U vanishes identically.
    const auto clean = kernel.sample(4, /*zero_noise=*/true);
    for (int t = 0; t < 30; ++t) CHECK(clean.ys[t] == base.value(0, clean.xs[t]));
    for (int t = 1; t <= 31; ++t) CHECK(kernel.u_statistic(clean, t) == 0.0);

    // Closed-form risk: f = f*, U = 0, t = 4 gives 1.25; absorbing U into
    // the offset leaves exactly 1 + 1/t.
    CHECK(kernel.conditional_risk(0, 0.0, 4, 0.0) == 1.25);
    CHECK(kernel.conditional_risk(0, 0.7, 5, 0.7) == 1.2);

    // U_{t-1} approaches xi0 in mean square as t grows.
    const int reps = 400;
    double err_small = 0.0, err_big = 0.0;
    for (int r = 0; r < reps; ++r) {
        const auto path = kernel.sample(derive_seed(100, r));
        const double u5 = kernel.u_statistic(path, 6);
        const double u30 = kernel.u_statistic(path, 31);
        err_small += (u5 - path.xi0) * (u5 - path.xi0);
        err_big += (u30 - path.xi0) * (u30 - path.xi0);
    }
    CHECK(err_big / reps < err_small / reps);
}
