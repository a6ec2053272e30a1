#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "learnlab/classes.hpp"
#include "learnlab/trees.hpp"

namespace learnlab {

// ---------------------------------------------------------------------------
// Witness payloads
// ---------------------------------------------------------------------------

/// A gamma-shattered sequence: points plus (for fat shattering) witness values.
struct SequenceWitness {
    std::vector<int> points;
    std::vector<double> witnesses;  // empty for plain VC shattering
};

/// Node of a shattered tree: a point, plus a witness value for sfat.
struct TreeNodeLabel {
    int point = 0;
    double witness = 0.0;
};

struct DimensionReport {
    std::string kind;  // "vc" | "ldim" | "fat" | "sfat"
    std::optional<double> gamma;
    int value = 0;
    std::optional<SequenceWitness> sequence_witness;
    std::optional<SignTree<TreeNodeLabel>> tree_witness;
};

// ---------------------------------------------------------------------------
// Shattering predicates (shared with tests as ground-truth checkers)
// ---------------------------------------------------------------------------

/// Binary shattering: every sign pattern on `points` is realized by some f.
inline bool is_shattered_sequence(const FiniteFunctionClass& cls, const std::vector<int>& points) {
    const int m = static_cast<int>(points.size());
    if (m == 0) return true;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << m); ++pat) {
        bool found = false;
        for (int j = 0; j < cls.size() && !found; ++j) {
            bool ok = true;
            for (int t = 0; t < m && ok; ++t) {
                const double want = (pat >> t) & 1u ? +1.0 : -1.0;
                ok = std::abs(cls.value(j, points[t]) - want) <= kDefaultTol;
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

/// gamma-shattering with witnesses s: for every sign pattern some f has
/// eps_t (f(x_t) - s_t) >= gamma at every t.
inline bool is_gamma_shattered_sequence(const FiniteFunctionClass& cls,
                                        const std::vector<int>& points,
                                        const std::vector<double>& witnesses, double gamma) {
    const int m = static_cast<int>(points.size());
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << m); ++pat) {
        bool found = false;
        for (int j = 0; j < cls.size() && !found; ++j) {
            bool ok = true;
            for (int t = 0; t < m && ok; ++t) {
                const double eps = (pat >> t) & 1u ? +1.0 : -1.0;
                ok = eps * (cls.value(j, points[t]) - witnesses[t]) >= gamma - kDefaultTol;
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

/// Tree shattering in the Littlestone sense: along every sign path some f
/// matches eps_t at the level-t node.
inline bool is_shattered_tree(const FiniteFunctionClass& cls, const SignTree<TreeNodeLabel>& tree) {
    const int n = tree.depth();
    for (std::uint32_t path = 0; path < (std::uint32_t{1} << n); ++path) {
        bool found = false;
        for (int j = 0; j < cls.size() && !found; ++j) {
            bool ok = true;
            std::uint32_t prefix = 0;
            for (int t = 1; t <= n && ok; ++t) {
                const double eps = (path >> (t - 1)) & 1u ? +1.0 : -1.0;
                ok = std::abs(cls.value(j, tree.at(t, prefix).point) - eps) <= kDefaultTol;
                if ((path >> (t - 1)) & 1u) prefix |= (1u << (t - 1));
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

/// Tree gamma-shattering with a witness value per node.
inline bool is_gamma_shattered_tree(const FiniteFunctionClass& cls,
                                    const SignTree<TreeNodeLabel>& tree, double gamma) {
    const int n = tree.depth();
    for (std::uint32_t path = 0; path < (std::uint32_t{1} << n); ++path) {
        bool found = false;
        for (int j = 0; j < cls.size() && !found; ++j) {
            bool ok = true;
            std::uint32_t prefix = 0;
            for (int t = 1; t <= n && ok; ++t) {
                const double eps = (path >> (t - 1)) & 1u ? +1.0 : -1.0;
                const TreeNodeLabel& node = tree.at(t, prefix);
                ok = eps * (cls.value(j, node.point) - node.witness) >= gamma - kDefaultTol;
                if ((path >> (t - 1)) & 1u) prefix |= (1u << (t - 1));
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// VC dimension
// ---------------------------------------------------------------------------

namespace detail {

inline bool next_combination(std::vector<int>& c, int n) {
    const int m = static_cast<int>(c.size());
    int i = m - 1;
    while (i >= 0 && c[i] == n - m + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < m; ++j) c[j] = c[j - 1] + 1;
    return true;
}

}  // namespace detail

/// Largest n such that some n distinct points are shattered. Searches
/// subset sizes in increasing order and stops at the first size with no
/// shattered set (shattering is downward closed over subsets).
inline DimensionReport vc_dimension(const FiniteFunctionClass& cls, bool want_witness = false) {
    if (!cls.is_binary()) throw std::invalid_argument("vc_dimension: binary labels required");
    DimensionReport rep{"vc", std::nullopt, 0, std::nullopt, std::nullopt};
    const int nx = cls.num_points();
    for (int m = 1; m <= nx; ++m) {
        std::vector<int> comb(m);
        for (int i = 0; i < m; ++i) comb[i] = i;
        bool any = false;
        do {
            if (is_shattered_sequence(cls, comb)) {
                any = true;
                rep.value = m;
                if (want_witness) rep.sequence_witness = SequenceWitness{comb, {}};
                break;
            }
        } while (detail::next_combination(comb, nx));
        if (!any) break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Littlestone dimension
// ---------------------------------------------------------------------------

namespace detail {

/// Subclasses are subsets of the original rows; the memo key is the
/// canonical sorted row-index set packed into 64-bit words.
struct RowMask {
    std::vector<std::uint64_t> words;

    explicit RowMask(int nf) : words((nf + 63) / 64, 0) {}
    void set(int j) { words[j >> 6] |= (std::uint64_t{1} << (j & 63)); }
    bool test(int j) const { return (words[j >> 6] >> (j & 63)) & 1u; }
    bool any() const {
        for (auto w : words)
            if (w) return true;
        return false;
    }
    int count() const {
        int c = 0;
        for (auto w : words) c += __builtin_popcountll(w);
        return c;
    }
    bool operator==(const RowMask& o) const { return words == o.words; }
};

struct RowMaskHash {
    std::size_t operator()(const RowMask& m) const {
        std::size_t h = 0xcbf29ce484222325ULL;
        for (auto w : m.words) {
            h ^= w;
            h *= 0x100000001b3ULL;
        }
        return h;
    }
};

struct LdimCtx {
    const FiniteFunctionClass& cls;
    std::unordered_map<RowMask, int, RowMaskHash> memo;

    int run(const RowMask& mask) {
        if (mask.count() <= 1) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int best = 0;
        for (int x = 0; x < cls.num_points(); ++x) {
            RowMask plus(cls.size()), minus(cls.size());
            bool has_plus = false, has_minus = false;
            for (int j = 0; j < cls.size(); ++j) {
                if (!mask.test(j)) continue;
                if (cls.value(j, x) > 0) {
                    plus.set(j);
                    has_plus = true;
                } else {
                    minus.set(j);
                    has_minus = true;
                }
            }
            if (!has_plus || !has_minus) continue;
            best = std::max(best, 1 + std::min(run(plus), run(minus)));
        }
        memo.emplace(mask, best);
        return best;
    }

    /// Best split point at `mask`, or -1 when no point splits it.
    int argbest(const RowMask& mask, RowMask& out_plus, RowMask& out_minus) {
        const int target = run(mask);
        if (target == 0) return -1;
        for (int x = 0; x < cls.num_points(); ++x) {
            RowMask plus(cls.size()), minus(cls.size());
            bool has_plus = false, has_minus = false;
            for (int j = 0; j < cls.size(); ++j) {
                if (!mask.test(j)) continue;
                if (cls.value(j, x) > 0) {
                    plus.set(j);
                    has_plus = true;
                } else {
                    minus.set(j);
                    has_minus = true;
                }
            }
            if (!has_plus || !has_minus) continue;
            if (1 + std::min(run(plus), run(minus)) == target) {
                out_plus = plus;
                out_minus = minus;
                return x;
            }
        }
        return -1;
    }
};

inline void build_ldim_witness(LdimCtx& ctx, const RowMask& mask, SignTree<TreeNodeLabel>& tree,
                               int t, std::uint32_t path) {
    if (t > tree.depth()) return;
    RowMask plus(ctx.cls.size()), minus(ctx.cls.size());
    const int x = ctx.argbest(mask, plus, minus);
    tree.at(t, path) = TreeNodeLabel{x < 0 ? 0 : x, 0.0};
    if (x < 0) return;
    build_ldim_witness(ctx, minus, tree, t + 1, path);                       // eps_t = -1
    build_ldim_witness(ctx, plus, tree, t + 1, path | (1u << (t - 1)));      // eps_t = +1
}

}  // namespace detail

/// Littlestone dimension by the split recursion
///   Ldim(F) = max_x { 1 + min(Ldim(F_x^+), Ldim(F_x^-)) } over splitting x,
/// memoized on canonical row sets. Equals the depth of the deepest
/// shattered tree (validated against the enumeration oracle in tests).
inline DimensionReport littlestone_dimension(const FiniteFunctionClass& cls,
                                             bool want_witness = false) {
    if (!cls.is_binary())
        throw std::invalid_argument("littlestone_dimension: binary labels required");
    detail::LdimCtx ctx{cls, {}};
    detail::RowMask all(cls.size());
    for (int j = 0; j < cls.size(); ++j) all.set(j);
    DimensionReport rep{"ldim", std::nullopt, ctx.run(all), std::nullopt, std::nullopt};
    if (want_witness && rep.value > 0) {
        SignTree<TreeNodeLabel> tree(rep.value);
        detail::build_ldim_witness(ctx, all, tree, 1, 0);
        rep.tree_witness = std::move(tree);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Fat shattering (scale gamma)
// ---------------------------------------------------------------------------

namespace detail {

/// Witness candidates at a point: achieved values plus midpoints of all
/// pairs of achieved values. Only the above/below partition a witness
/// induces matters, and any feasible witness interval [b + gamma, a - gamma]
/// is bracketed by two achieved values a, b, so their midpoint realizes the
/// same partition. (Consecutive midpoints alone are not enough: with
/// achieved values {-1, -0.5, 1} and gamma = 1 the only feasible witness
/// is the non-consecutive midpoint 0.)
inline std::vector<double> witness_candidates(const FiniteFunctionClass& cls,
                                              const std::vector<int>& rows, int x) {
    std::set<double> achieved;
    if (rows.empty()) {
        for (int j = 0; j < cls.size(); ++j) achieved.insert(cls.value(j, x));
    } else {
        for (int j : rows) achieved.insert(cls.value(j, x));
    }
    std::vector<double> vals(achieved.begin(), achieved.end());
    std::set<double> cands(achieved.begin(), achieved.end());
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (std::size_t k = i + 1; k < vals.size(); ++k) cands.insert(0.5 * (vals[i] + vals[k]));
    return {cands.begin(), cands.end()};
}

/// Function masks above/below a witness at x, restricted to `rows`
/// (all rows when empty). Rows are limited to 64 for mask arithmetic in
/// the sequence search; classes here are small by construction.
struct AboveBelow {
    std::uint64_t above = 0, below = 0;
};

inline std::vector<AboveBelow> distinct_partitions(const FiniteFunctionClass& cls, int x,
                                                   double gamma) {
    std::vector<AboveBelow> out;
    std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
    for (double s : witness_candidates(cls, {}, x)) {
        AboveBelow ab;
        for (int j = 0; j < cls.size(); ++j) {
            if (cls.value(j, x) >= s + gamma - kDefaultTol) ab.above |= std::uint64_t{1} << j;
            if (cls.value(j, x) <= s - gamma + kDefaultTol) ab.below |= std::uint64_t{1} << j;
        }
        if (!ab.above || !ab.below) continue;
        if (seen.insert({ab.above, ab.below}).second) out.push_back(ab);
    }
    return out;
}

struct FatSearch {
    const FiniteFunctionClass& cls;
    double gamma;
    std::vector<std::vector<AboveBelow>> parts;       // per point
    std::vector<std::vector<double>> part_witnesses;  // parallel witness values
    std::vector<int> chosen_points;
    std::vector<double> chosen_witnesses;

    /// All 2^m patterns over the chosen prefix must stay realizable:
    /// maintain one candidate-function mask per pattern.
    bool extend(const std::vector<int>& points, std::size_t t, std::vector<std::uint64_t>& masks) {
        if (t == points.size()) {
            return true;
        }
        const int x = points[t];
        for (std::size_t c = 0; c < parts[x].size(); ++c) {
            const AboveBelow& ab = parts[x][c];
            std::vector<std::uint64_t> next(masks.size() * 2);
            bool ok = true;
            for (std::size_t p = 0; p < masks.size() && ok; ++p) {
                next[2 * p] = masks[p] & ab.below;      // eps_{t+1} = -1
                next[2 * p + 1] = masks[p] & ab.above;  // eps_{t+1} = +1
                ok = next[2 * p] && next[2 * p + 1];
            }
            if (!ok) continue;
            chosen_witnesses[t] = part_witnesses[x][c];
            if (extend(points, t + 1, next)) return true;
        }
        return false;
    }
};

}  // namespace detail

/// Fat shattering dimension at scale gamma (exhaustive over distinct
/// point subsets and the sufficient witness candidates).
inline DimensionReport fat_shattering(const FiniteFunctionClass& cls, double gamma,
                                      bool want_witness = false) {
    if (gamma <= 0) throw std::invalid_argument("fat_shattering: gamma must be positive");
    if (cls.size() > 64) throw ResourceBudgetError("fat_shattering: |F| > 64 not supported");
    DimensionReport rep{"fat", gamma, 0, std::nullopt, std::nullopt};

    detail::FatSearch search{cls, gamma, {}, {}, {}, {}};
    search.parts.resize(cls.num_points());
    search.part_witnesses.resize(cls.num_points());
    for (int x = 0; x < cls.num_points(); ++x) {
        std::set<std::pair<std::uint64_t, std::uint64_t>> seen;
        for (double s : detail::witness_candidates(cls, {}, x)) {
            detail::AboveBelow ab;
            for (int j = 0; j < cls.size(); ++j) {
                if (cls.value(j, x) >= s + gamma - kDefaultTol) ab.above |= std::uint64_t{1} << j;
                if (cls.value(j, x) <= s - gamma + kDefaultTol) ab.below |= std::uint64_t{1} << j;
            }
            if (!ab.above || !ab.below) continue;
            if (seen.insert({ab.above, ab.below}).second) {
                search.parts[x].push_back(ab);
                search.part_witnesses[x].push_back(s);
            }
        }
    }

    const int nx = cls.num_points();
    const std::uint64_t full =
        cls.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cls.size()) - 1;
    for (int m = 1; m <= nx; ++m) {
        std::vector<int> comb(m);
        for (int i = 0; i < m; ++i) comb[i] = i;
        bool any = false;
        do {
            search.chosen_witnesses.assign(m, 0.0);
            std::vector<std::uint64_t> masks{full};
            if (search.extend(comb, 0, masks)) {
                any = true;
                rep.value = m;
                if (want_witness)
                    rep.sequence_witness = SequenceWitness{comb, search.chosen_witnesses};
                break;
            }
        } while (detail::next_combination(comb, nx));
        if (!any) break;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Sequential fat shattering
// ---------------------------------------------------------------------------

namespace detail {

struct SfatCtx {
    const FiniteFunctionClass& cls;
    double gamma;
    std::unordered_map<RowMask, int, RowMaskHash> memo;

    std::vector<int> rows_of(const RowMask& mask) const {
        std::vector<int> rows;
        for (int j = 0; j < cls.size(); ++j)
            if (mask.test(j)) rows.push_back(j);
        return rows;
    }

    int run(const RowMask& mask) {
        if (mask.count() <= 1) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        const std::vector<int> rows = rows_of(mask);
        int best = 0;
        for (int x = 0; x < cls.num_points(); ++x) {
            for (double s : witness_candidates(cls, rows, x)) {
                RowMask above(cls.size()), below(cls.size());
                bool has_above = false, has_below = false;
                for (int j : rows) {
                    if (cls.value(j, x) >= s + gamma - kDefaultTol) {
                        above.set(j);
                        has_above = true;
                    } else if (cls.value(j, x) <= s - gamma + kDefaultTol) {
                        below.set(j);
                        has_below = true;
                    }
                }
                if (!has_above || !has_below) continue;
                best = std::max(best, 1 + std::min(run(above), run(below)));
            }
        }
        memo.emplace(mask, best);
        return best;
    }

    bool argbest(const RowMask& mask, int& out_x, double& out_s, RowMask& out_above,
                 RowMask& out_below) {
        const int target = run(mask);
        if (target == 0) return false;
        const std::vector<int> rows = rows_of(mask);
        for (int x = 0; x < cls.num_points(); ++x) {
            for (double s : witness_candidates(cls, rows, x)) {
                RowMask above(cls.size()), below(cls.size());
                bool has_above = false, has_below = false;
                for (int j : rows) {
                    if (cls.value(j, x) >= s + gamma - kDefaultTol) {
                        above.set(j);
                        has_above = true;
                    } else if (cls.value(j, x) <= s - gamma + kDefaultTol) {
                        below.set(j);
                        has_below = true;
                    }
                }
                if (!has_above || !has_below) continue;
                if (1 + std::min(run(above), run(below)) == target) {
                    out_x = x;
                    out_s = s;
                    out_above = above;
                    out_below = below;
                    return true;
                }
            }
        }
        return false;
    }
};

inline void build_sfat_witness(SfatCtx& ctx, const RowMask& mask, SignTree<TreeNodeLabel>& tree,
                               int t, std::uint32_t path) {
    if (t > tree.depth()) return;
    int x = 0;
    double s = 0;
    RowMask above(ctx.cls.size()), below(ctx.cls.size());
    if (!ctx.argbest(mask, x, s, above, below)) {
        tree.at(t, path) = TreeNodeLabel{0, 0.0};
        return;
    }
    tree.at(t, path) = TreeNodeLabel{x, s};
    build_sfat_witness(ctx, below, tree, t + 1, path);
    build_sfat_witness(ctx, above, tree, t + 1, path | (1u << (t - 1)));
}

}  // namespace detail

/// Sequential fat shattering dimension at scale gamma via the split
/// recursion over (point, witness) pairs, memoized on row sets.
inline DimensionReport seq_fat_shattering(const FiniteFunctionClass& cls, double gamma,
                                          bool want_witness = false) {
    if (gamma <= 0) throw std::invalid_argument("seq_fat_shattering: gamma must be positive");
    detail::SfatCtx ctx{cls, gamma, {}};
    detail::RowMask all(cls.size());
    for (int j = 0; j < cls.size(); ++j) all.set(j);
    DimensionReport rep{"sfat", gamma, ctx.run(all), std::nullopt, std::nullopt};
    if (want_witness && rep.value > 0) {
        SignTree<TreeNodeLabel> tree(rep.value);
        detail::build_sfat_witness(ctx, all, tree, 1, 0);
        rep.tree_witness = std::move(tree);
    }
    return rep;
}

}  // namespace learnlab
