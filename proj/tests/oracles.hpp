// Test-side oracles, kept independent of the implementation paths they
// check: everything here derives values straight from definitions by
// exhaustive enumeration.
#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/dims.hpp"

namespace oracles {

using learnlab::FiniteFunctionClass;

/// All pairwise midpoints plus achieved values at x; sufficient witness
/// candidates for gamma-shattering any subclass (a feasible witness
/// interval is always bracketed by two achieved values).
inline std::vector<double> all_pair_witnesses(const FiniteFunctionClass& cls, int x) {
    std::set<double> vals;
    for (int j = 0; j < cls.size(); ++j) vals.insert(cls.value(j, x));
    std::vector<double> v(vals.begin(), vals.end());
    std::set<double> cands(vals.begin(), vals.end());
    for (std::size_t a = 0; a < v.size(); ++a)
        for (std::size_t b = a + 1; b < v.size(); ++b) cands.insert(0.5 * (v[a] + v[b]));
    return {cands.begin(), cands.end()};
}

/// Fat shattering by full enumeration of point subsets and witness
/// combinations, checked with the definitional predicate.
inline int fat_by_enumeration(const FiniteFunctionClass& cls, double gamma) {
    const int nx = cls.num_points();
    std::vector<std::vector<double>> cands(nx);
    for (int x = 0; x < nx; ++x) cands[x] = all_pair_witnesses(cls, x);

    int best = 0;
    for (int mask = 1; mask < (1 << nx); ++mask) {
        std::vector<int> points;
        for (int x = 0; x < nx; ++x)
            if (mask & (1 << x)) points.push_back(x);
        const int m = static_cast<int>(points.size());
        if (m <= best) continue;
        std::vector<std::size_t> pick(m, 0);
        bool found = false;
        for (;;) {
            std::vector<double> witnesses(m);
            for (int t = 0; t < m; ++t) witnesses[t] = cands[points[t]][pick[t]];
            if (learnlab::is_gamma_shattered_sequence(cls, points, witnesses, gamma)) {
                found = true;
                break;
            }
            int p = m - 1;
            while (p >= 0 && ++pick[p] == cands[points[p]].size()) pick[p--] = 0;
            if (p < 0) break;
        }
        if (found) best = m;
    }
    return best;
}

/// Whether some depth-d tree labeled with (point, witness) pairs is
/// gamma-shattered, by enumerating every tree over the candidate alphabet.
inline bool sfat_tree_exists_by_enumeration(const FiniteFunctionClass& cls, double gamma,
                                            int depth) {
    const int nx = cls.num_points();
    std::vector<std::pair<int, double>> alphabet;
    for (int x = 0; x < nx; ++x)
        for (double s : all_pair_witnesses(cls, x)) alphabet.emplace_back(x, s);
    const std::size_t nodes = (std::size_t{1} << depth) - 1;
    std::vector<std::size_t> pick(nodes, 0);
    for (;;) {
        learnlab::SignTree<learnlab::TreeNodeLabel> tree(depth);
        std::size_t idx = 0;
        for (int t = 1; t <= depth; ++t)
            for (std::uint32_t b = 0; b < tree.width(t); ++b, ++idx)
                tree.at(t, b) = {alphabet[pick[idx]].first, alphabet[pick[idx]].second};
        if (learnlab::is_gamma_shattered_tree(cls, tree, gamma)) return true;
        std::size_t p = nodes;
        while (p > 0 && ++pick[p - 1] == alphabet.size()) pick[--p] = 0;
        if (p == 0) break;
    }
    return false;
}

inline int sfat_by_enumeration(const FiniteFunctionClass& cls, double gamma, int max_depth) {
    int d = 0;
    while (d < max_depth && sfat_tree_exists_by_enumeration(cls, gamma, d + 1)) ++d;
    return d;
}

/// VC dimension straight from the definition (subset + pattern scan).
inline int vc_by_enumeration(const FiniteFunctionClass& cls) {
    const int nx = cls.num_points();
    int best = 0;
    for (int mask = 1; mask < (1 << nx); ++mask) {
        std::vector<int> points;
        for (int x = 0; x < nx; ++x)
            if (mask & (1 << x)) points.push_back(x);
        if (static_cast<int>(points.size()) > best &&
            learnlab::is_shattered_sequence(cls, points))
            best = static_cast<int>(points.size());
    }
    return best;
}

}  // namespace oracles
