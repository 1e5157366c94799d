#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/hecke.hpp"
#include "parahoric/matrix.hpp"
#include "parahoric/rational.hpp"
#include "parahoric/weyl.hpp"

namespace parahoric {

// ---------------------------------------------------------------------------
// Exact model of GL_n over a local field with residue characteristic ell.
// Group elements are global rational matrices, so valuations are exact and no
// precision truncation exists anywhere. The uniformizer is ell itself.
// ---------------------------------------------------------------------------

// Valuation sentinel for 0: large but safe to add without overflow.
inline constexpr long kValInfinity = std::numeric_limits<long>::max() / 4;

inline long local_val(const Rational& x, long ell) {
    if (x == 0) return kValInfinity;
    return rat_valuation(x, ell);
}

inline bool is_prime_long(long v) {
    if (v < 2) return false;
    for (long d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

// A rational number remembered together with the ambient residue prime.
struct LocalScalar {
    Rational value;
    long ell;

    LocalScalar(Rational v, long l) : value(std::move(v)), ell(l) {
        if (!is_prime_long(ell)) throw ValidationError("residue characteristic must be prime");
    }
    long valuation() const {
        if (value == 0) throw ShapeError("valuation of zero");
        return rat_valuation(value, ell);
    }
    bool integral() const { return value == 0 || rat_valuation(value, ell) >= 0; }
    bool unit() const { return value != 0 && rat_valuation(value, ell) == 0; }
};

// Invertible n x n rational matrix with its ambient residue prime and cached
// determinant.
class LocalMatrix {
public:
    LocalMatrix(Matrix<Rational> entries, long ell)
        : m_(std::move(entries)), ell_(ell), det_(0) {
        if (m_.rows() != m_.cols()) throw ShapeError("local matrix must be square");
        if (!is_prime_long(ell_)) throw ValidationError("residue characteristic must be prime");
        det_ = m_.det();
        if (det_ == 0) throw UnitError("local matrix must be invertible");
    }

    static LocalMatrix identity(std::size_t n, long ell) {
        return LocalMatrix(Matrix<Rational>::identity(n, Rational(0)), ell);
    }
    static LocalMatrix from_rows(const std::vector<std::vector<Rational>>& rows, long ell) {
        return LocalMatrix(Matrix<Rational>::from_rows(rows), ell);
    }

    std::size_t n() const { return m_.rows(); }
    long ell() const { return ell_; }
    const Matrix<Rational>& mat() const { return m_; }
    const Rational& det() const { return det_; }

    LocalMatrix mul(const LocalMatrix& o) const {
        same(o);
        return LocalMatrix(m_ * o.m_, ell_);
    }
    LocalMatrix inv() const { return LocalMatrix(m_.inverse(), ell_); }

    bool integral() const {
        for (std::size_t i = 0; i < n(); ++i)
            for (std::size_t j = 0; j < n(); ++j)
                if (local_val(m_.at(i, j), ell_) < 0) return false;
        return true;
    }

    bool operator==(const LocalMatrix& o) const { return ell_ == o.ell_ && m_ == o.m_; }
    bool operator!=(const LocalMatrix& o) const { return !(*this == o); }
    std::string str() const { return m_.str(); }

private:
    void same(const LocalMatrix& o) const {
        if (n() != o.n() || ell_ != o.ell_) throw ShapeError("mixed local matrix parameters");
    }

    Matrix<Rational> m_;
    long ell_;
    Rational det_;
};

enum class ParahoricLevel { parahoric, parahoric_1 };

// Open compact subgroup selector: the parahoric attached to mu at residue
// prime ell, optionally refined to the determinant-one-in-the-p-part level.
struct ParahoricSpec {
    Composition mu;
    long ell;
    ParahoricLevel level;
    long p;

    ParahoricSpec(Composition mu_, long ell_, ParahoricLevel level_ = ParahoricLevel::parahoric,
                  long p_ = 0)
        : mu(std::move(mu_)), ell(ell_), level(level_), p(p_) {
        if (!is_prime_long(ell)) throw ValidationError("residue characteristic must be prime");
        if (level == ParahoricLevel::parahoric_1) {
            if (!is_prime_long(p)) throw ValidationError("coefficient characteristic must be prime");
            if ((ell - 1) % p != 0)
                throw ValidationError("level requires ell = 1 mod p");
        }
    }

    bool iwahori() const {
        for (int part : mu.parts())
            if (part != 1) return false;
        return true;
    }
};

// p-part of ell-1: the largest power of p dividing ell-1.
inline long p_part(long ell, long p) {
    long pa = 1;
    while ((ell - 1) % (pa * p) == 0) pa *= p;
    return pa;
}

// Membership in the parahoric: integral, invertible over the valuation ring,
// block-upper modulo ell; at level parahoric_1 additionally the last diagonal
// block's determinant must be a p_part(ell,p)-th power residue, decided by
// raising to (ell-1)/p_part.
inline bool membership(const LocalMatrix& g, const ParahoricSpec& spec) {
    const std::size_t n = g.n();
    if (n != spec.mu.n()) throw ShapeError("matrix size does not match composition");
    if (g.ell() != spec.ell) throw ShapeError("mixed residue characteristics");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long v = local_val(g.mat().at(i, j), spec.ell);
            if (v < 0) return false;
            if (spec.mu.block_of(static_cast<int>(i)) > spec.mu.block_of(static_cast<int>(j)) &&
                v < 1)
                return false;
        }
    if (local_val(g.det(), spec.ell) != 0) return false;
    if (spec.level == ParahoricLevel::parahoric_1) {
        auto [b, e] = spec.mu.block_range(spec.mu.num_blocks() - 1);
        Matrix<Rational> blk(static_cast<std::size_t>(e - b), static_cast<std::size_t>(e - b),
                             Rational(0));
        for (int i = b; i < e; ++i)
            for (int j = b; j < e; ++j)
                blk.at(static_cast<std::size_t>(i - b), static_cast<std::size_t>(j - b)) =
                    g.mat().at(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        // the block pattern plus the unit determinant force this to be a unit
        mpz_class r = rat_mod_power(blk.det(), spec.ell, 1);
        long pa = p_part(spec.ell, spec.p);
        return mod_pow_i64(r.get_si(), (spec.ell - 1) / pa, spec.ell) == 1;
    }
    return true;
}

// g = b * w * k with b upper triangular over the field, w a permutation
// matrix and k Iwahori. Rows are reduced bottom-up: lower rows are already
// monomial and may be added to higher rows freely (the b side), then the
// row's minimal-valuation entry among unused columns becomes the pivot and
// clears the rest of the row by right Iwahori column operations. Ties pick
// the leftmost column: entries left of the pivot then carry strictly larger
// valuation, which is exactly what pushes their elimination scalars into
// ell*O as the Iwahori shape requires.
struct BruhatIwahori {
    LocalMatrix b;
    Permutation w;
    LocalMatrix k;
};

inline BruhatIwahori bruhat_iwahori(const LocalMatrix& g) {
    const std::size_t n = g.n();
    const long ell = g.ell();
    Matrix<Rational> A = g.mat();
    Matrix<Rational> Binv = Matrix<Rational>::identity(n, Rational(0));
    Matrix<Rational> Kinv = Matrix<Rational>::identity(n, Rational(0));
    std::vector<std::size_t> pivcol(n, n);
    std::vector<char> col_used(n, 0);
    for (std::size_t i = n; i-- > 0;) {
        // clear the pivot columns of the rows below, which are monomial
        for (std::size_t r = i + 1; r < n; ++r) {
            std::size_t pc = pivcol[r];
            if (is_zero(A.at(i, pc))) continue;
            Rational c = A.at(i, pc) / A.at(r, pc);
            for (std::size_t j = 0; j < n; ++j) A.at(i, j) = A.at(i, j) - c * A.at(r, j);
            for (std::size_t x = 0; x < n; ++x)
                Binv.at(x, r) = Binv.at(x, r) + Binv.at(x, i) * c;
        }
        // pivot: minimal valuation among unused columns, leftmost on ties
        std::size_t piv = n;
        long best = kValInfinity;
        for (std::size_t j = 0; j < n; ++j) {
            if (col_used[j]) continue;
            long v = local_val(A.at(i, j), ell);
            if (v < best) {
                best = v;
                piv = j;
            }
        }
        if (piv == n) throw InternalError("singular matrix slipped into bruhat_iwahori");
        pivcol[i] = piv;
        col_used[piv] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (col_used[j] || is_zero(A.at(i, j))) continue;
            Rational c = A.at(i, j) / A.at(i, piv);
            for (std::size_t x = 0; x < n; ++x) A.at(x, j) = A.at(x, j) - A.at(x, piv) * c;
            for (std::size_t y = 0; y < n; ++y)
                Kinv.at(piv, y) = Kinv.at(piv, y) + c * Kinv.at(j, y);
        }
    }
    std::vector<int> img(n);
    for (std::size_t i = 0; i < n; ++i) img[pivcol[i]] = static_cast<int>(i);
    Matrix<Rational> b = Binv;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t i = 0; i < n; ++i) b.at(x, i) = b.at(x, i) * A.at(i, pivcol[i]);
    return BruhatIwahori{LocalMatrix(std::move(b), ell), Permutation(img),
                         LocalMatrix(std::move(Kinv), ell)};
}

// The monomial matrix diag(ell^lambda) * P_w attached to an affine element.
inline LocalMatrix aff_matrix(const AffElem& x, long ell) {
    const std::size_t n = x.size();
    Matrix<Rational> m(n, n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) {
        std::size_t r = static_cast<std::size_t>(x.w(static_cast<int>(j)));
        m.at(r, j) = rat_pow(Rational(ell), x.lambda[r]);
    }
    return LocalMatrix(std::move(m), ell);
}

// The affine element labelling the Iwahori double coset of g: two-sided
// reduction to a monomial matrix. Pivots take the minimal remaining
// valuation; among ties the bottom-most row then leftmost column, so that
// row clearing below the pivot and column clearing left of it stay inside
// Iwahori.
inline AffElem iwahori_label(const LocalMatrix& g) {
    const std::size_t n = g.n();
    const long ell = g.ell();
    Matrix<Rational> A = g.mat();
    std::vector<char> row_used(n, 0), col_used(n, 0);
    std::vector<int> lambda(n, 0), img(n, 0);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t br = n, bc = n;
        long best = kValInfinity;
        for (std::size_t r = 0; r < n; ++r) {
            if (row_used[r]) continue;
            for (std::size_t c = 0; c < n; ++c) {
                if (col_used[c]) continue;
                long v = local_val(A.at(r, c), ell);
                if (v < best || (v == best && (r > br || (r == br && c < bc)))) {
                    best = v;
                    br = r;
                    bc = c;
                }
            }
        }
        if (best >= kValInfinity) throw InternalError("singular matrix in iwahori_label");
        // clear the pivot row, then the pivot column
        for (std::size_t c = 0; c < n; ++c) {
            if (col_used[c] || c == bc || is_zero(A.at(br, c))) continue;
            Rational f = A.at(br, c) / A.at(br, bc);
            for (std::size_t r = 0; r < n; ++r) A.at(r, c) = A.at(r, c) - A.at(r, bc) * f;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (row_used[r] || r == br || is_zero(A.at(r, bc))) continue;
            Rational f = A.at(r, bc) / A.at(br, bc);
            for (std::size_t c = 0; c < n; ++c) A.at(r, c) = A.at(r, c) - A.at(br, c) * f;
        }
        row_used[br] = 1;
        col_used[bc] = 1;
        lambda[br] = static_cast<int>(best);
        img[bc] = static_cast<int>(br);
    }
    return AffElem(std::move(lambda), Permutation(img));
}

// Right Iwahori coset representatives of Iw * x * Iw: along a reduced word
// the coset families of the letters multiply, giving ell^length(x) matrices.
inline std::vector<LocalMatrix> enumerate_cosets_affine(const AffElem& x, long ell) {
    const std::size_t n = x.size();
    if (!is_prime_long(ell)) throw ValidationError("residue characteristic must be prime");
    AffWord word = aff_word(x);
    std::vector<Matrix<Rational>> reps = {aff_matrix(aff_omega_pow(n, word.omega_pow), ell).mat()};
    for (std::size_t t = word.letters.size(); t-- > 0;) {
        std::size_t j = word.letters[t];
        Matrix<Rational> gen = aff_matrix(aff_gen(n, j), ell).mat();
        std::vector<Matrix<Rational>> next;
        next.reserve(reps.size() * static_cast<std::size_t>(ell));
        for (const auto& r : reps)
            for (long s = 0; s < ell; ++s) {
                Matrix<Rational> u = Matrix<Rational>::identity(n, Rational(0));
                if (j == 0)
                    u.at(n - 1, 0) = Rational(s * ell);
                else
                    u.at(j - 1, j) = Rational(s);
                next.push_back(r * (u * gen));
            }
        reps = std::move(next);
    }
    std::vector<LocalMatrix> out;
    out.reserve(reps.size());
    for (auto& m : reps) out.emplace_back(std::move(m), ell);
    return out;
}

namespace detail {

// All permutations preserving the blocks of mu.
inline std::vector<Permutation> parabolic_elements(const Composition& mu) {
    const std::size_t n = mu.n();
    std::vector<std::vector<int>> imgs = {std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) imgs[0][i] = static_cast<int>(i);
    for (std::size_t j = 0; j < mu.num_blocks(); ++j) {
        auto [b, e] = mu.block_range(j);
        std::vector<int> blk;
        for (int t = b; t < e; ++t) blk.push_back(t);
        std::vector<std::vector<int>> grown;
        std::sort(blk.begin(), blk.end());
        do {
            for (const auto& base : imgs) {
                std::vector<int> img = base;
                for (int t = b; t < e; ++t) img[static_cast<std::size_t>(t)] = blk[static_cast<std::size_t>(t - b)];
                grown.push_back(std::move(img));
            }
        } while (std::next_permutation(blk.begin(), blk.end()));
        imgs = std::move(grown);
    }
    std::vector<Permutation> out;
    out.reserve(imgs.size());
    for (auto& img : imgs) out.emplace_back(std::move(img));
    return out;
}

// Topological generators of the parahoric, enough to generate its image in
// any finite truncation: elementary matrices respecting the block pattern
// and one diagonal unit per position. unit_lift must generate the units of
// Z/ell^k for every k needed; a primitive root modulo ell^2 does.
inline std::vector<LocalMatrix> parahoric_generators(const ParahoricSpec& spec) {
    const std::size_t n = spec.mu.n();
    std::vector<LocalMatrix> gens;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            if (r == c) continue;
            Matrix<Rational> m = Matrix<Rational>::identity(n, Rational(0));
            bool below = spec.mu.block_of(static_cast<int>(r)) >
                         spec.mu.block_of(static_cast<int>(c));
            m.at(r, c) = Rational(below ? spec.ell : 1);
            gens.emplace_back(std::move(m), spec.ell);
        }
    // units: generators of Z_ell^x modulo every power of ell. For odd ell a
    // primitive root mod ell lifted to one mod ell^2 works; the units mod 2^k
    // are not cyclic and need the pair {-1, 5}.
    std::vector<long> units;
    if (spec.ell == 2) {
        units = {-1, 5};
    } else {
        long root = 1;
        for (long cand = 2; cand < spec.ell; ++cand) {
            bool primitive = true;
            for (long d = 1; d < spec.ell - 1; ++d)
                if (mod_pow_i64(cand, d, spec.ell) == 1) {
                    primitive = false;
                    break;
                }
            if (primitive) {
                root = cand;
                break;
            }
        }
        if (mod_pow_i64(root, spec.ell - 1, spec.ell * spec.ell) == 1) root += spec.ell;
        units = {root};
    }
    for (std::size_t i = 0; i < n; ++i)
        for (long u : units) {
            Matrix<Rational> m = Matrix<Rational>::identity(n, Rational(0));
            m.at(i, i) = Rational(u);
            gens.emplace_back(std::move(m), spec.ell);
        }
    return gens;
}

} // namespace detail

// Right coset representatives of [spec . m . spec] / spec for a diagonal
// ell-power matrix m whose exponents are non increasing within each block of
// spec.mu (the canonical shape under the block permutation group). For a
// globally dominant m at Iwahori level the closed family applies: upper
// unipotents u with entry (r, c) running over lifts modulo ell^(a_r - a_c),
// times m; this reproduces the classical corner shape for minuscule m.
// Otherwise the orbit of m*spec under left multiplication by generators of
// the parahoric is closed off by breadth first search with exact coset
// identity tests. Output is sorted, so the order is deterministic.
inline std::vector<LocalMatrix> enumerate_cosets(const LocalMatrix& m, const ParahoricSpec& spec) {
    const std::size_t n = m.n();
    if (n != spec.mu.n()) throw ShapeError("matrix size does not match composition");
    if (m.ell() != spec.ell) throw ShapeError("mixed residue characteristics");
    std::vector<long> a(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !is_zero(m.mat().at(i, j)))
                throw ShapeError("coset enumeration requires a diagonal matrix");
        const Rational& d = m.mat().at(i, i);
        long v = local_val(d, spec.ell);
        if (!(d == rat_pow(Rational(spec.ell), v)))
            throw ShapeError("diagonal entries must be powers of the uniformizer");
        a[i] = v;
    }
    bool dominant = true;
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (a[i] < a[i + 1]) dominant = false;
    for (std::size_t j = 0; j < spec.mu.parts().size(); ++j) {
        auto [b, e] = spec.mu.block_range(j);
        for (int i = b; i + 1 < e; ++i)
            if (a[static_cast<std::size_t>(i)] < a[static_cast<std::size_t>(i) + 1])
                throw ShapeError("coset enumeration requires block dominant exponents");
    }

    std::vector<LocalMatrix> reps;
    if (spec.iwahori() && dominant) {
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        std::vector<long> radix;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c)
                if (a[r] > a[c]) {
                    slots.emplace_back(r, c);
                    long width = 1;
                    for (long t = 0; t < a[r] - a[c]; ++t) width *= spec.ell;
                    radix.push_back(width);
                }
        std::vector<long> digit(slots.size(), 0);
        while (true) {
            Matrix<Rational> u = Matrix<Rational>::identity(n, Rational(0));
            for (std::size_t t = 0; t < slots.size(); ++t)
                u.at(slots[t].first, slots[t].second) = Rational(digit[t]);
            reps.emplace_back(u * m.mat(), spec.ell);
            std::size_t t = 0;
            while (t < slots.size() && ++digit[t] == radix[t]) digit[t++] = 0;
            if (t == slots.size()) break;
        }
    } else {
        std::vector<LocalMatrix> gens = detail::parahoric_generators(spec);
        std::deque<LocalMatrix> frontier;
        reps.push_back(m);
        frontier.push_back(m);
        while (!frontier.empty()) {
            LocalMatrix z = frontier.front();
            frontier.pop_front();
            for (const auto& g : gens) {
                LocalMatrix cand = g.mul(z);
                bool known = false;
                for (const auto& r : reps)
                    if (membership(r.inv().mul(cand), spec)) {
                        known = true;
                        break;
                    }
                if (!known) {
                    reps.push_back(cand);
                    frontier.push_back(cand);
                }
            }
        }
    }
    std::sort(reps.begin(), reps.end(), [](const LocalMatrix& x, const LocalMatrix& y) {
        for (std::size_t i = 0; i < x.n(); ++i)
            for (std::size_t j = 0; j < x.n(); ++j) {
                if (x.mat().at(i, j) < y.mat().at(i, j)) return true;
                if (y.mat().at(i, j) < x.mat().at(i, j)) return false;
            }
        return false;
    });
    return reps;
}

// The closed-form right coset count for the Iwahori family above.
inline mpz_class iwahori_coset_index(const LocalMatrix& m) {
    const std::size_t n = m.n();
    mpz_class idx = 1;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c) {
            long d = local_val(m.mat().at(r, r), m.ell()) - local_val(m.mat().at(c, c), m.ell());
            for (long t = 0; t < d; ++t) idx *= m.ell();
        }
    return idx;
}

// Structure constants of the product of two bi-invariant indicator functions,
// expanded over double cosets labelled by their affine elements. A and B
// must be full right-coset lists (as produced by enumerate_cosets*): the
// product function is then constant on every double coset, and the constant
// is the number of rep pairs landing in any fixed right coset of it.
inline std::map<AffElem, long> convolve_indicators(const std::vector<LocalMatrix>& A,
                                                   const std::vector<LocalMatrix>& B,
                                                   const ParahoricSpec& spec) {
    if (A.empty() || B.empty()) throw ShapeError("empty coset list");
    std::vector<LocalMatrix> cosets;
    std::vector<long> mult;
    for (const auto& x : A)
        for (const auto& y : B) {
            LocalMatrix z = x.mul(y);
            bool found = false;
            for (std::size_t i = 0; i < cosets.size(); ++i)
                if (membership(cosets[i].inv().mul(z), spec)) {
                    ++mult[i];
                    found = true;
                    break;
                }
            if (!found) {
                cosets.push_back(z);
                mult.push_back(1);
            }
        }
    // group right cosets into double cosets: orbits of the left generator
    // action; multiplicity must be constant along each orbit
    std::vector<LocalMatrix> gens = detail::parahoric_generators(spec);
    std::vector<std::size_t> group(cosets.size());
    for (std::size_t i = 0; i < cosets.size(); ++i) group[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t i) {
        while (group[i] != i) i = group[i] = group[group[i]];
        return i;
    };
    for (std::size_t i = 0; i < cosets.size(); ++i)
        for (const auto& g : gens) {
            LocalMatrix z = g.mul(cosets[i]);
            bool matched = false;
            for (std::size_t j = 0; j < cosets.size(); ++j)
                if (membership(cosets[j].inv().mul(z), spec)) {
                    std::size_t a = find(i), b = find(j);
                    if (a != b) group[a] = b;
                    matched = true;
                    break;
                }
            if (!matched)
                throw InternalError("coset lists do not cover whole double cosets");
        }
    // canonical double-coset name: the Iwahori label of any point, minimized
    // over sandwiching by the finite block group on both sides. All points of
    // one double coset give the same minimum, which the loop verifies.
    std::vector<Permutation> wmu = detail::parabolic_elements(spec.mu);
    auto canonical = [&](const LocalMatrix& z) {
        AffElem lab = iwahori_label(z);
        AffElem best = lab;
        for (const auto& u : wmu)
            for (const auto& v : wmu) {
                AffElem cand = aff_mul(aff_finite(u), aff_mul(lab, aff_finite(v)));
                if (cand < best) best = cand;
            }
        return best;
    };
    std::map<std::size_t, AffElem> label;
    std::map<std::size_t, long> value;
    for (std::size_t i = 0; i < cosets.size(); ++i) {
        std::size_t root = find(i);
        AffElem lab = canonical(cosets[i]);
        auto it = label.find(root);
        if (it == label.end()) {
            label.emplace(root, lab);
            value[root] = mult[i];
        } else {
            if (!(lab == it->second))
                throw InternalError("double coset label is not well defined");
            if (value[root] != mult[i])
                throw InternalError("indicator product not constant on a double coset");
        }
    }
    std::map<AffElem, long> out;
    for (const auto& [root, lab] : label) out.emplace(lab, value[root]);
    return out;
}

} // namespace parahoric
