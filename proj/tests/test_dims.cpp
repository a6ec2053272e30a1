#include <catch2/catch_amalgamated.hpp>

#include "learnlab/dims.hpp"
#include "learnlab/verify.hpp"
#include "oracles.hpp"

using namespace learnlab;

namespace {

FiniteFunctionClass full_binary(int nx) {
    std::vector<std::vector<double>> rows;
    for (int m = 0; m < (1 << nx); ++m) {
        std::vector<double> row(nx);
        for (int x = 0; x < nx; ++x) row[x] = (m >> x) & 1 ? +1.0 : -1.0;
        rows.push_back(std::move(row));
    }
    return FiniteFunctionClass(Domain::numbered(nx), LabelSpace::binary(), std::move(rows));
}

FiniteFunctionClass constants_class() {
    return FiniteFunctionClass(Domain::numbered(2), LabelSpace::grid({-1.0, 0.0, 1.0}),
                               {{-1, -1}, {0, 0}, {1, 1}});
}

}  // namespace

TEST_CASE("vc dimension") {
    const FiniteFunctionClass single(Domain::numbered(3), LabelSpace::binary(), {{1, -1, 1}});
    CHECK(vc_dimension(single).value == 0);
    CHECK(vc_dimension(full_binary(3)).value == 3);
    CHECK(vc_dimension(make_threshold_class(5)).value == 1);

    const auto rep = vc_dimension(make_threshold_class(4), /*want_witness=*/true);
    REQUIRE(rep.sequence_witness.has_value());
    CHECK(is_shattered_sequence(make_threshold_class(4), rep.sequence_witness->points));

    CHECK_THROWS_AS(vc_dimension(constants_class()), std::invalid_argument);
}

TEST_CASE("littlestone dimension") {
    const FiniteFunctionClass single(Domain::numbered(2), LabelSpace::binary(), {{1, -1}});
    CHECK(littlestone_dimension(single).value == 0);
    CHECK(littlestone_dimension(full_binary(3)).value == 3);
    CHECK(verify_detail::oracle_ldim(full_binary(3)) == 3);

    const auto k3 = make_threshold_class(3);
    CHECK(littlestone_dimension(k3).value == 2);
    CHECK(verify_detail::oracle_ldim(k3) == 2);

    // Witness trees pass the shattering predicate they claim.
    const auto rep = littlestone_dimension(k3, /*want_witness=*/true);
    REQUIRE(rep.tree_witness.has_value());
    CHECK(rep.tree_witness->depth() == 2);
    CHECK(is_shattered_tree(k3, *rep.tree_witness));

    // Growth over k: 1,1,2,2,2,2,3.
    const std::vector<int> expected = {1, 1, 2, 2, 2, 2, 3};
    for (int k = 1; k <= 7; ++k)
        CHECK(littlestone_dimension(make_threshold_class(k)).value == expected[k - 1]);
}

TEST_CASE("vc <= ldim on random classes") {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        const auto cls = verify_detail::random_binary_class(rng, 4, 6);
        const int vc = vc_dimension(cls).value;
        const int ld = littlestone_dimension(cls).value;
        CHECK(vc <= ld);
        CHECK(vc == oracles::vc_by_enumeration(cls));
    }
}

TEST_CASE("fat shattering") {
    CHECK_THROWS_AS(fat_shattering(constants_class(), 0.0), std::invalid_argument);

    // gamma above half the spread: nothing shatters.
    CHECK(fat_shattering(constants_class(), 1.1).value == 0);

    // Constants {-1,0,1}: a single point is 0.5-shattered, two are not.
    CHECK(fat_shattering(constants_class(), 0.5).value == 1);

    // Binary classes at gamma=1 reduce to VC (the only feasible witness is 0).
    Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const auto cls = verify_detail::random_binary_class(rng, 3, 5);
        CHECK(fat_shattering(cls, 1.0).value == vc_dimension(cls).value);
    }

    // Witnesses check out.
    const auto rep = fat_shattering(constants_class(), 0.5, /*want_witness=*/true);
    REQUIRE(rep.sequence_witness.has_value());
    CHECK(is_gamma_shattered_sequence(constants_class(), rep.sequence_witness->points,
                                      rep.sequence_witness->witnesses, 0.5));
}

TEST_CASE("fat shattering matches enumeration oracle") {
    Rng rng(13);
    for (int i = 0; i < 40; ++i) {
        const auto cls = verify_detail::random_grid_class(rng, 3, 5, {-1.0, -0.5, 0.0, 0.5, 1.0});
        for (double gamma : {0.25, 0.5, 1.0})
            CHECK(fat_shattering(cls, gamma).value == oracles::fat_by_enumeration(cls, gamma));
    }
}

TEST_CASE("sequential fat shattering") {
    const FiniteFunctionClass single(Domain::numbered(2), LabelSpace::grid({-1.0, 0.0, 1.0}),
                                     {{0, 1}});
    CHECK(seq_fat_shattering(single, 0.5).value == 0);
    CHECK(seq_fat_shattering(constants_class(), 1.1).value == 0);

    // Binary classes at gamma=1 reduce to Littlestone.
    Rng rng(14);
    for (int i = 0; i < 50; ++i) {
        const auto cls = verify_detail::random_binary_class(rng, 3, 5);
        CHECK(seq_fat_shattering(cls, 1.0).value == littlestone_dimension(cls).value);
    }

    // Witness trees pass the predicate.
    const auto bv = make_bounded_variation_class(3, 1.0, LabelSpace::grid({-1.0, 0.0, 1.0}));
    const auto rep = seq_fat_shattering(bv, 0.5, /*want_witness=*/true);
    if (rep.value > 0) {
        REQUIRE(rep.tree_witness.has_value());
        CHECK(is_gamma_shattered_tree(bv, *rep.tree_witness, 0.5));
    }
}

TEST_CASE("sfat matches tree enumeration oracle on small classes") {
    Rng rng(15);
    for (int i = 0; i < 8; ++i) {
        const auto cls = verify_detail::random_grid_class(rng, 2, 4, {-1.0, 0.0, 1.0});
        for (double gamma : {0.5, 1.0}) {
            const int got = seq_fat_shattering(cls, gamma).value;
            const int capped = std::min(got, 2);
            CHECK(capped == oracles::sfat_by_enumeration(cls, gamma, 2));
        }
    }
}

TEST_CASE("dimension monotonicity") {
    Rng rng(16);
    for (int i = 0; i < 25; ++i) {
        const auto cls = verify_detail::random_grid_class(rng, 3, 6, {-1.0, -0.5, 0.0, 0.5, 1.0});
        // Nonincreasing in gamma.
        CHECK(fat_shattering(cls, 0.25).value >= fat_shattering(cls, 0.5).value);
        CHECK(fat_shattering(cls, 0.5).value >= fat_shattering(cls, 1.0).value);
        CHECK(seq_fat_shattering(cls, 0.25).value >= seq_fat_shattering(cls, 0.5).value);
        CHECK(seq_fat_shattering(cls, 0.5).value >= seq_fat_shattering(cls, 1.0).value);
        // fat <= sfat.
        for (double g : {0.25, 0.5, 1.0})
            CHECK(fat_shattering(cls, g).value <= seq_fat_shattering(cls, g).value);
    }
    // A subclass never exceeds its superclass.
    for (int i = 0; i < 25; ++i) {
        const auto cls = verify_detail::random_binary_class(rng, 3, 6);
        if (cls.size() < 2) continue;
        std::vector<std::vector<double>> rows;
        for (int j = 0; j + 1 < cls.size(); ++j) rows.push_back(cls.row_copy(j));
        const FiniteFunctionClass sub(cls.domain(), cls.labels(), std::move(rows));
        CHECK(vc_dimension(sub).value <= vc_dimension(cls).value);
        CHECK(littlestone_dimension(sub).value <= littlestone_dimension(cls).value);
    }
}

TEST_CASE("bounded variation class has small fat dimension") {
    // fat_gamma < 1 + V/gamma for the variation-budgeted class.
    for (const double V : {0.5, 1.0}) {
        const auto cls =
            make_bounded_variation_class(3, V, LabelSpace::grid({-1.0, -0.5, 0.0, 0.5, 1.0}));
        for (const double gamma : {0.25, 0.5}) {
            const int fat = fat_shattering(cls, gamma).value;
            CHECK(static_cast<double>(fat) < 1.0 + V / gamma);
        }
    }
    const auto wide = make_bounded_variation_class(4, 1.0, LabelSpace::grid({-1.0, 0.0, 1.0}));
    CHECK(static_cast<double>(fat_shattering(wide, 0.5).value) < 3.0);
}
