#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <utility>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"

namespace parahoric {

// Permutation of {0,..,n-1} in one-line notation (img_[i] is the image of
// i). JSON serialization is 1-based; everything internal is 0-based.
class Permutation {
public:
    explicit Permutation(std::vector<int> images) : img_(std::move(images)) {
        std::vector<bool> seen(img_.size(), false);
        for (int x : img_) {
            if (x < 0 || x >= static_cast<int>(img_.size()) || seen[x])
                throw ShapeError("not a permutation");
            seen[x] = true;
        }
    }
    static Permutation identity(std::size_t n) {
        std::vector<int> v(n);
        std::iota(v.begin(), v.end(), 0);
        return Permutation(std::move(v));
    }
    static Permutation longest(std::size_t n) {
        std::vector<int> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<int>(n - 1 - i);
        return Permutation(std::move(v));
    }
    // Adjacent transposition swapping i and i+1 (0-based i in [0, n-2]).
    static Permutation simple(std::size_t n, std::size_t i) {
        if (i + 1 >= n) throw ShapeError("simple reflection index out of range");
        Permutation p = identity(n);
        std::swap(p.img_[i], p.img_[i + 1]);
        return p;
    }
    static Permutation transposition(std::size_t n, std::size_t a, std::size_t b) {
        if (a >= n || b >= n) throw ShapeError("transposition index out of range");
        Permutation p = identity(n);
        std::swap(p.img_[a], p.img_[b]);
        return p;
    }

    std::size_t size() const { return img_.size(); }
    int operator()(int i) const { return img_.at(i); }
    const std::vector<int>& images() const { return img_; }

    bool is_identity() const {
        for (std::size_t i = 0; i < img_.size(); ++i)
            if (img_[i] != static_cast<int>(i)) return false;
        return true;
    }

    // (a.compose(b))(i) = a(b(i)): apply b first.
    Permutation compose(const Permutation& b) const {
        if (size() != b.size()) throw ShapeError("permutation size mismatch");
        std::vector<int> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[i] = img_[b.img_[i]];
        return Permutation(std::move(v));
    }
    Permutation inverse() const {
        std::vector<int> v(size());
        for (std::size_t i = 0; i < size(); ++i) v[img_[i]] = static_cast<int>(i);
        return Permutation(std::move(v));
    }

    std::size_t length() const {
        std::size_t inv = 0;
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = i + 1; j < size(); ++j)
                if (img_[i] > img_[j]) ++inv;
        return inv;
    }

    bool operator==(const Permutation& o) const { return img_ == o.img_; }
    bool operator!=(const Permutation& o) const { return img_ != o.img_; }
    bool operator<(const Permutation& o) const { return img_ < o.img_; }

    std::string str() const {
        std::string s = "[";
        for (std::size_t i = 0; i < img_.size(); ++i)
            s += (i ? "," : "") + std::to_string(img_[i] + 1);
        return s + "]";
    }

private:
    std::vector<int> img_;
};

inline std::vector<Permutation> all_permutations(std::size_t n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<Permutation> out;
    do {
        out.emplace_back(v);
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

// Composition of n into positive parts; fixes the standard parabolic
// subgroup S_mu of block-preserving permutations.
class Composition {
public:
    explicit Composition(std::vector<int> parts) : parts_(std::move(parts)) {
        n_ = 0;
        for (int p : parts_) {
            if (p < 1) throw ShapeError("composition parts must be positive");
            n_ += p;
        }
        if (parts_.empty()) throw ShapeError("empty composition");
    }

    std::size_t n() const { return static_cast<std::size_t>(n_); }
    std::size_t num_blocks() const { return parts_.size(); }
    int part(std::size_t j) const { return parts_.at(j); }
    const std::vector<int>& parts() const { return parts_; }

    // Half-open block j as [begin, end) of 0-based positions.
    std::pair<int, int> block_range(std::size_t j) const {
        if (j >= parts_.size()) throw ShapeError("block index out of range");
        int b = 0;
        for (std::size_t t = 0; t < j; ++t) b += parts_[t];
        return {b, b + parts_[j]};
    }
    std::size_t block_of(int pos) const {
        int b = 0;
        for (std::size_t j = 0; j < parts_.size(); ++j) {
            b += parts_[j];
            if (pos < b) return j;
        }
        throw ShapeError("position out of range");
    }

    bool contains(const Permutation& w) const {
        if (w.size() != n()) return false;
        for (std::size_t i = 0; i < n(); ++i)
            if (block_of(static_cast<int>(i)) != block_of(w(static_cast<int>(i)))) return false;
        return true;
    }

    // Simple reflections inside blocks: Coxeter generators of S_mu.
    std::vector<Permutation> parabolic_generators() const {
        std::vector<Permutation> gens;
        for (std::size_t j = 0; j < parts_.size(); ++j) {
            auto [b, e] = block_range(j);
            for (int i = b; i + 1 < e; ++i)
                gens.push_back(Permutation::simple(n(), static_cast<std::size_t>(i)));
        }
        return gens;
    }

    // All elements of S_mu (product of per-block symmetric groups).
    std::vector<Permutation> parabolic_elements() const {
        std::vector<Permutation> out{Permutation::identity(n())};
        for (std::size_t j = 0; j < parts_.size(); ++j) {
            auto [b, e] = block_range(j);
            std::vector<int> block(static_cast<std::size_t>(e - b));
            std::iota(block.begin(), block.end(), b);
            std::vector<Permutation> next;
            do {
                for (const auto& w : out) {
                    std::vector<int> img = w.images();
                    for (int i = b; i < e; ++i) img[i] = block[static_cast<std::size_t>(i - b)];
                    next.emplace_back(std::move(img));
                }
            } while (std::next_permutation(block.begin(), block.end()));
            out = std::move(next);
        }
        return out;
    }

    bool operator==(const Composition& o) const { return parts_ == o.parts_; }
    bool operator!=(const Composition& o) const { return !(*this == o); }

private:
    std::vector<int> parts_;
    int n_;
};

// Non-negative integer matrix with prescribed row sums Q and column sums P:
// the combinatorial shadow of a (W_Q, W_P) double coset.
struct PartitionMatrix {
    Composition row_comp;
    Composition col_comp;
    std::vector<std::vector<int>> entries;

    PartitionMatrix(Composition q, Composition p, std::vector<std::vector<int>> m)
        : row_comp(std::move(q)), col_comp(std::move(p)), entries(std::move(m)) {
        if (row_comp.n() != col_comp.n())
            throw ShapeError("partition matrix composition size mismatch");
        if (entries.size() != row_comp.num_blocks())
            throw ShapeError("partition matrix row count mismatch");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            if (entries[i].size() != col_comp.num_blocks())
                throw ShapeError("partition matrix column count mismatch");
            int rs = 0;
            for (int x : entries[i]) {
                if (x < 0) throw ShapeError("negative partition matrix entry");
                rs += x;
            }
            if (rs != row_comp.part(i)) throw ShapeError("partition matrix row sum mismatch");
        }
        for (std::size_t j = 0; j < col_comp.num_blocks(); ++j) {
            int cs = 0;
            for (std::size_t i = 0; i < entries.size(); ++i) cs += entries[i][j];
            if (cs != col_comp.part(j)) throw ShapeError("partition matrix column sum mismatch");
        }
    }

    bool operator==(const PartitionMatrix& o) const {
        return row_comp == o.row_comp && col_comp == o.col_comp && entries == o.entries;
    }
};

// Minimal-length representatives of W_Q \ S_n / W_P, one per double coset,
// sorted lexicographically. Cosets are found by exhaustive orbit partition,
// which doubles as the correctness oracle at this scale.
inline std::vector<Permutation> double_coset_reps(const Composition& q_comp,
                                                  const Composition& p_comp) {
    if (q_comp.n() != p_comp.n()) throw ShapeError("compositions of different n");
    std::size_t n = q_comp.n();
    auto all = all_permutations(n);
    std::map<Permutation, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i], i);

    auto qgens = q_comp.parabolic_generators();
    auto pgens = p_comp.parabolic_generators();

    std::vector<std::size_t> cls(all.size());
    std::iota(cls.begin(), cls.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (cls[x] != x) { cls[x] = cls[cls[x]]; x = cls[x]; }
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) { cls[find(a)] = find(b); };

    for (std::size_t i = 0; i < all.size(); ++i) {
        for (const auto& u : qgens) unite(i, index.at(u.compose(all[i])));
        for (const auto& v : pgens) unite(i, index.at(all[i].compose(v)));
    }

    std::map<std::size_t, Permutation> best;
    for (std::size_t i = 0; i < all.size(); ++i) {
        std::size_t root = find(i);
        auto it = best.find(root);
        if (it == best.end()) {
            best.emplace(root, all[i]);
            continue;
        }
        const Permutation& cur = it->second;
        std::size_t li = all[i].length(), lc = cur.length();
        if (li < lc || (li == lc && all[i] < cur)) it->second = all[i];
    }

    std::vector<Permutation> reps;
    reps.reserve(best.size());
    for (auto& [root, w] : best) reps.push_back(w);
    std::sort(reps.begin(), reps.end());
    return reps;
}

// Entry (i, j) counts how much of the j-th P-block lands in the i-th
// Q-block.
inline PartitionMatrix rep_to_matrix(const Permutation& w, const Composition& q_comp,
                                     const Composition& p_comp) {
    if (q_comp.n() != p_comp.n() || w.size() != q_comp.n())
        throw ShapeError("size mismatch in rep_to_matrix");
    std::vector<std::vector<int>> m(q_comp.num_blocks(),
                                    std::vector<int>(p_comp.num_blocks(), 0));
    for (std::size_t pos = 0; pos < w.size(); ++pos) {
        std::size_t j = p_comp.block_of(static_cast<int>(pos));
        std::size_t i = q_comp.block_of(w(static_cast<int>(pos)));
        ++m[i][j];
    }
    return PartitionMatrix(q_comp, p_comp, std::move(m));
}

// Inverse construction: within each P-block (scanned left to right) the
// positions are mapped into Q-blocks top to bottom, always taking the
// smallest unused targets in increasing order. This produces the unique
// minimal-length representative with the given partition matrix.
inline Permutation matrix_to_rep(const PartitionMatrix& pm) {
    const Composition& q_comp = pm.row_comp;
    const Composition& p_comp = pm.col_comp;
    std::size_t n = q_comp.n();
    std::vector<int> next_free(q_comp.num_blocks());
    for (std::size_t i = 0; i < q_comp.num_blocks(); ++i)
        next_free[i] = q_comp.block_range(i).first;
    std::vector<int> img(n, -1);
    for (std::size_t j = 0; j < p_comp.num_blocks(); ++j) {
        int pos = p_comp.block_range(j).first;
        for (std::size_t i = 0; i < q_comp.num_blocks(); ++i)
            for (int t = 0; t < pm.entries[i][j]; ++t) img[pos++] = next_free[i]++;
    }
    return Permutation(std::move(img));
}

} // namespace parahoric
