#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "learnlab/rng.hpp"

namespace learnlab {

/// Complete binary tree of depth n whose node at level t is addressed by
/// the sign path eps_{1:t-1}. Bit s-1 of the path index encodes eps_s
/// (+1 -> 1, -1 -> 0), so the root of level t=1 is the single entry of
/// level 0's successor with empty path.
template <typename T>
class SignTree {
public:
    explicit SignTree(int depth) : depth_(depth) {
        if (depth < 1) throw std::invalid_argument("SignTree: depth must be >= 1");
        levels_.resize(depth);
        for (int t = 1; t <= depth; ++t) levels_[t - 1].resize(std::size_t{1} << (t - 1));
    }

    int depth() const { return depth_; }

    /// Node at level t (1-based) reached by sign path bits eps_{1:t-1}.
    T& at(int t, std::uint32_t path_bits) { return levels_[t - 1][path_bits]; }
    const T& at(int t, std::uint32_t path_bits) const { return levels_[t - 1][path_bits]; }

    /// Number of nodes at level t.
    std::size_t width(int t) const { return levels_[t - 1].size(); }

    /// Path-bits helper: sign eps_s read from a packed path.
    static int sign_at(std::uint32_t path_bits, int s) {
        return (path_bits >> (s - 1)) & 1u ? +1 : -1;
    }

    /// Path string ("", "+", "-", "++", "+-", ...) to (level, bits).
    static std::pair<int, std::uint32_t> parse_path(const std::string& s) {
        std::uint32_t bits = 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '+') bits |= (1u << i);
            else if (s[i] != '-') throw std::invalid_argument("SignTree: bad path char in '" + s + "'");
        }
        return {static_cast<int>(s.size()) + 1, bits};
    }

    static std::string path_string(int t, std::uint32_t path_bits) {
        std::string s;
        for (int i = 0; i < t - 1; ++i) s += (path_bits >> i) & 1u ? '+' : '-';
        return s;
    }

    template <typename Fn>
    void for_each_node(Fn&& fn) const {
        for (int t = 1; t <= depth_; ++t)
            for (std::uint32_t b = 0; b < width(t); ++b) fn(t, b, at(t, b));
    }

private:
    int depth_;
    std::vector<std::vector<T>> levels_;
};

/// Uniformly random +/-1 witness tree.
inline SignTree<int> random_sign_tree(int depth, Rng& rng) {
    SignTree<int> tree(depth);
    for (int t = 1; t <= depth; ++t)
        for (std::uint32_t b = 0; b < tree.width(t); ++b) tree.at(t, b) = rng.bernoulli(0.5) ? +1 : -1;
    return tree;
}

}  // namespace learnlab
