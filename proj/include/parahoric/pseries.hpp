#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/hecke.hpp"
#include "parahoric/localmodel.hpp"
#include "parahoric/matrix.hpp"
#include "parahoric/unipoly.hpp"
#include "parahoric/vij_constants.hpp"
#include "parahoric/weyl.hpp"

// Unramified principal series in the function model: an invariant vector is
// its list of values at the permutation matrices, one coordinate per Weyl
// element, and every other value follows from the b * w * k decomposition.
// Double cosets act by summing right translates over coset representatives.

namespace parahoric {

// x^e in the coefficient field; negative exponents go through division, so x
// must be a unit when e < 0.
template <typename K>
K scalar_pow(const K& x, long e) {
    const K one = ring_one(x);
    K base = x;
    unsigned long m;
    if (e < 0) {
        base = one / x;
        m = static_cast<unsigned long>(-(e + 1)) + 1;
    } else {
        m = static_cast<unsigned long>(e);
    }
    K acc = one;
    while (m > 0) {
        if (m & 1) acc = acc * base;
        base = base * base;
        m >>= 1;
    }
    return acc;
}

// e_deg of a finite multiset of field values, by the one-row recurrence.
template <typename K>
K elementary_symmetric(const std::vector<K>& xs, long deg) {
    if (xs.empty()) throw ShapeError("elementary symmetric of an empty set");
    if (deg < 0 || static_cast<std::size_t>(deg) > xs.size())
        throw ShapeError("elementary symmetric degree out of range");
    const K zero = ring_zero(xs.front());
    std::vector<K> e(static_cast<std::size_t>(deg) + 1, zero);
    e[0] = ring_one(xs.front());
    for (const K& x : xs)
        for (std::size_t d = e.size(); d-- > 1;) e[d] = e[d] + x * e[d - 1];
    return e.back();
}

namespace detail {

inline void partitions_rec(const std::vector<int>& pool, const std::vector<int>& parts,
                           std::size_t j, std::vector<std::vector<int>>& cur,
                           std::vector<std::vector<std::vector<int>>>& out) {
    if (j == parts.size()) {
        out.push_back(cur);
        return;
    }
    std::vector<int> mask(pool.size(), 0);
    std::fill(mask.begin(), mask.begin() + parts[j], 1);
    do {
        std::vector<int> taken, rest;
        for (std::size_t t = 0; t < pool.size(); ++t)
            (mask[t] ? taken : rest).push_back(pool[t]);
        cur[j] = std::move(taken);
        partitions_rec(rest, parts, j + 1, cur, out);
    } while (std::prev_permutation(mask.begin(), mask.end()));
}

} // namespace detail

// Ordered set partitions of {0..n-1} into labeled blocks of sizes mu, each
// block listed increasing. These index the unramified components at level mu.
inline std::vector<std::vector<std::vector<int>>> labeled_partitions(const Composition& mu) {
    std::vector<int> pool(mu.n());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
    std::vector<std::vector<int>> cur(mu.parts().size());
    std::vector<std::vector<std::vector<int>>> out;
    detail::partitions_rec(pool, mu.parts(), 0, cur, out);
    return out;
}

template <typename K>
struct PSeriesChar {
    std::vector<K> values;  // chi_i at the uniformizer
    long ell;               // residue count q
    bool normalized;
    K sqrt_q;               // designated square root of q in normalized mode

    PSeriesChar(std::vector<K> vals, long ell_in)
        : values(std::move(vals)), ell(ell_in), normalized(false), sqrt_q(validate(values, ell_in)) {}

    PSeriesChar(std::vector<K> vals, long ell_in, const K& root)
        : values(std::move(vals)), ell(ell_in), normalized(true), sqrt_q(validate(values, ell_in)) {
        if (!(root * root == q())) throw ValidationError("sqrt_q does not square to the residue count");
        sqrt_q = root;
    }

    std::size_t n() const { return values.size(); }
    K q() const { return scalar_from_int(values.front(), ell); }

private:
    static K validate(const std::vector<K>& vals, long ell_in) {
        if (vals.empty()) throw ShapeError("character needs at least one value");
        if (!is_prime_long(ell_in)) throw ValidationError("residue count must be prime");
        for (const K& v : vals)
            if (is_zero(v)) throw ValidationError("character values must be units");
        if (is_zero(scalar_from_int(vals.front(), ell_in)))
            throw ValidationError("residue count must be a unit in the coefficient ring");
        return ring_one(vals.front());
    }
};

template <typename K>
using PSeriesVec = std::vector<K>;

// Diagonal exponent pattern with i uniformizer entries at the start of
// block j (0-based block index).
inline std::vector<int> vij_exponents(const Composition& mu, long i, std::size_t j) {
    auto [b, e] = mu.block_range(j);
    if (i < 1 || i > e - b) throw ShapeError("elementary symmetric degree out of range");
    std::vector<int> a(mu.n(), 0);
    for (long t = 0; t < i; ++t) a[static_cast<std::size_t>(b + t)] = 1;
    return a;
}

// Iwahori cells of the level-mu double coset of t_lambda: the set product
// W_mu t_lambda W_mu.
inline std::vector<AffElem> parahoric_cells(const Composition& mu, const std::vector<int>& lambda) {
    if (lambda.size() != mu.n()) throw ShapeError("weight size mismatch");
    std::vector<Permutation> wmu = detail::parabolic_elements(mu);
    std::set<AffElem> cells;
    AffElem t = aff_translation(lambda);
    for (const auto& u : wmu)
        for (const auto& v : wmu) cells.insert(aff_mul(aff_finite(u), aff_mul(t, aff_finite(v))));
    return std::vector<AffElem>(cells.begin(), cells.end());
}

// Indicator of the level-mu double coset as a T-basis sum over its cells.
template <typename K>
HeckeT<K> vij_t_element(const Composition& mu, long i, std::size_t j, const K& q) {
    HeckeT<K> h(mu.n(), q);
    for (const AffElem& y : parahoric_cells(mu, vij_exponents(mu, i, j)))
        h.add_term(y, ring_one(q));
    return h;
}

template <typename K>
class PSeriesModel {
public:
    explicit PSeriesModel(PSeriesChar<K> chi) : chi_(std::move(chi)), perms_(all_permutations(chi_.n())) {
        anchors_.reserve(perms_.size());
        for (std::size_t i = 0; i < perms_.size(); ++i) {
            index_.emplace(perms_[i], i);
            anchors_.push_back(aff_matrix(aff_finite(perms_[i]), chi_.ell));
        }
    }

    std::size_t n() const { return chi_.n(); }
    std::size_t dim() const { return perms_.size(); }
    const PSeriesChar<K>& chi() const { return chi_; }
    const std::vector<Permutation>& basis() const { return perms_; }
    K q() const { return chi_.q(); }
    K zero() const { return ring_zero(chi_.values.front()); }
    K one() const { return ring_one(chi_.values.front()); }

    std::size_t index_of(const Permutation& w) const {
        auto it = index_.find(w);
        if (it == index_.end()) throw ShapeError("permutation outside the basis");
        return it->second;
    }

    // f(b w k) = chi(b) * (delta^{1/2}(b) in normalized mode) * v[w], where
    // chi(b) multiplies the chi_i powers of the diagonal valuations of b.
    K evaluate(const PSeriesVec<K>& v, const LocalMatrix& g) const {
        if (v.size() != dim()) throw ShapeError("coefficient count mismatch");
        if (g.n() != n() || g.ell() != chi_.ell) throw ShapeError("matrix shape mismatch");
        BruhatIwahori dec = bruhat_iwahori(g);
        K s = one();
        long half = 0;
        for (std::size_t i = 0; i < n(); ++i) {
            long val = local_val(dec.b.mat().at(i, i), chi_.ell);
            s = s * scalar_pow(chi_.values[i], val);
            half -= val * (static_cast<long>(n()) - 1 - 2 * static_cast<long>(i));
        }
        if (chi_.normalized) s = s * scalar_pow(chi_.sqrt_q, half);
        return s * v[index_of(dec.w)];
    }

    // (X v)(g) = sum over representatives of v(g x_i).
    PSeriesVec<K> act_cosets(const std::vector<LocalMatrix>& reps, const PSeriesVec<K>& v) const {
        if (reps.empty()) throw ShapeError("empty coset list");
        PSeriesVec<K> out(dim(), zero());
        for (std::size_t wi = 0; wi < dim(); ++wi) {
            K acc = zero();
            for (const auto& r : reps) acc = acc + evaluate(v, anchors_[wi].mul(r));
            out[wi] = acc;
        }
        return out;
    }

    const std::vector<LocalMatrix>& cosets_of(const AffElem& x) const {
        auto it = cache_.find(x);
        if (it == cache_.end()) it = cache_.emplace(x, enumerate_cosets_affine(x, chi_.ell)).first;
        return it->second;
    }

    PSeriesVec<K> act_affine(const AffElem& x, const PSeriesVec<K>& v) const {
        return act_cosets(cosets_of(x), v);
    }

    PSeriesVec<K> act_t(const HeckeT<K>& h, const PSeriesVec<K>& v) const {
        if (h.n() != n()) throw ShapeError("algebra rank mismatch");
        if (!(h.q() == q())) throw ValidationError("algebra parameter must equal the residue count");
        PSeriesVec<K> out(dim(), zero());
        for (const auto& [x, c] : h.terms()) {
            PSeriesVec<K> part = act_affine(x, v);
            for (std::size_t i = 0; i < dim(); ++i) out[i] = out[i] + c * part[i];
        }
        return out;
    }

    Matrix<K> matrix_of_t(const HeckeT<K>& h) const {
        Matrix<K> m(dim(), dim(), zero());
        for (std::size_t j = 0; j < dim(); ++j) {
            PSeriesVec<K> e(dim(), zero());
            e[j] = one();
            PSeriesVec<K> col = act_t(h, e);
            for (std::size_t i = 0; i < dim(); ++i) m.at(i, j) = col[i];
        }
        return m;
    }

    // Operator of a fixed representative list on the full space. The result
    // depends on the representatives themselves, not only on their double
    // coset, unless it is applied to vectors with the matching invariance.
    Matrix<K> act_matrix(const std::vector<LocalMatrix>& reps) const {
        Matrix<K> m(dim(), dim(), zero());
        for (std::size_t j = 0; j < dim(); ++j) {
            PSeriesVec<K> e(dim(), zero());
            e[j] = one();
            PSeriesVec<K> col = act_cosets(reps, e);
            for (std::size_t i = 0; i < dim(); ++i) m.at(i, j) = col[i];
        }
        return m;
    }

    // Operator of a convolution table (cell -> multiplicity), multiplicities
    // reduced into the coefficient field.
    Matrix<K> matrix_of_counts(const std::map<AffElem, long>& counts) const {
        HeckeT<K> h(n(), q());
        for (const auto& [x, c] : counts) h.add_term(x, scalar_from_int(zero(), c));
        return matrix_of_t(h);
    }

    // Bare cell-sum operator of the level-mu double coset on the full
    // space; integral, and poincare_index(mu, q) times the volume-1
    // convolution (see vij_constants.hpp).
    Matrix<K> vij_cell_matrix(const Composition& mu, long i, std::size_t j) const {
        return matrix_of_t(vij_t_element(mu, i, j, q()));
    }

    // Volume-1 convolution operator of the level-mu double coset on the
    // full space: the cell sum divided by the parahoric index. Restricted
    // to the level-mu invariants it equals vij_invariant_matrix.
    Matrix<K> vij_full_matrix(const Composition& mu, long i, std::size_t j) const {
        K pindex = poincare_index(mu, q());
        if (is_zero(pindex)) throw ValidationError("parahoric index is not a unit");
        K inv = one() / pindex;
        Matrix<K> m = vij_cell_matrix(mu, i, j);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = m.at(r, c) * inv;
        return m;
    }

    // Operator of a double coset on an invariant column space: each column
    // acts through the right coset representatives and the result is
    // expressed in the basis again.
    Matrix<K> coset_op(const std::vector<LocalMatrix>& reps, const Matrix<K>& b) const {
        if (b.rows() != dim()) throw ShapeError("restriction shape mismatch");
        Matrix<K> u(dim(), b.cols(), zero());
        for (std::size_t c = 0; c < b.cols(); ++c) {
            PSeriesVec<K> col(dim(), zero());
            for (std::size_t r = 0; r < dim(); ++r) col[r] = b.at(r, c);
            PSeriesVec<K> img = act_cosets(reps, col);
            for (std::size_t r = 0; r < dim(); ++r) u.at(r, c) = img[r];
        }
        return solve_in_basis(u, b);
    }

    // Representative-sum operator of the level-mu double coset on the
    // invariants: the delta-normalized block operator.
    Matrix<K> vij_invariant_matrix(const Composition& mu, long i, std::size_t j,
                                   const Matrix<K>& basis) const {
        LocalMatrix m = diagonal_power(vij_exponents(mu, i, j));
        return coset_op(enumerate_cosets(m, ParahoricSpec(mu, chi_.ell)), basis);
    }

    LocalMatrix diagonal_power(const std::vector<int>& a) const {
        Matrix<Rational> m = Matrix<Rational>::identity(a.size(), Rational(0));
        for (std::size_t i = 0; i < a.size(); ++i) m.at(i, i) = rat_pow(Rational(chi_.ell), a[i]);
        return LocalMatrix(m, chi_.ell);
    }

    // Columns span the level-mu invariants: the intersection of the
    // eigenvalue-q spaces of the block generators. This avoids dividing by
    // the parabolic index, which can vanish in small characteristic.
    Matrix<K> invariant_basis(const Composition& mu) const {
        if (mu.n() != n()) throw ShapeError("composition size mismatch");
        auto gens = mu.parabolic_generators();
        if (gens.empty()) return Matrix<K>::identity(dim(), zero());
        Matrix<K> stack(gens.size() * dim(), dim(), zero());
        for (std::size_t gi = 0; gi < gens.size(); ++gi) {
            Matrix<K> ms = matrix_of_t(HeckeT<K>::basis(aff_finite(gens[gi]), q()));
            for (std::size_t r = 0; r < dim(); ++r)
                for (std::size_t c = 0; c < dim(); ++c)
                    stack.at(gi * dim() + r, c) = ms.at(r, c) - (r == c ? q() : zero());
        }
        return stack.nullspace();
    }

    // A with m * b = b * A for a full-column-rank invariant column space b.
    Matrix<K> restricted(const Matrix<K>& m, const Matrix<K>& b) const {
        if (b.rows() != dim() || m.rows() != dim() || m.cols() != dim())
            throw ShapeError("restriction shape mismatch");
        return solve_in_basis(m * b, b);
    }

    // Coordinates of full-space column vectors in the given column basis;
    // errors if a column falls outside its span.
    Matrix<K> coordinates_in(const Matrix<K>& vectors, const Matrix<K>& b) const {
        if (b.rows() != dim() || vectors.rows() != dim())
            throw ShapeError("coordinate shape mismatch");
        return solve_in_basis(vectors, b);
    }

private:
    // A with u = b * A; solved on a pivot row selection of b, then verified
    // in full, so u outside the column space of b is an error.
    Matrix<K> solve_in_basis(const Matrix<K>& u, const Matrix<K>& b) const {
        const std::size_t d = b.cols();
        if (d == 0) return Matrix<K>(0, 0, zero());
        Matrix<K> bt = b.transpose();
        auto piv = bt.rref_in_place();
        if (piv.size() != d) throw ShapeError("subspace basis is not independent");
        Matrix<K> s(d, d, zero()), r(d, u.cols(), zero());
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t jj = 0; jj < d; ++jj) s.at(i, jj) = b.at(piv[i], jj);
            for (std::size_t jj = 0; jj < u.cols(); ++jj) r.at(i, jj) = u.at(piv[i], jj);
        }
        Matrix<K> a = s.solve(r);
        if (!(u == b * a)) throw InternalError("operator does not preserve the subspace");
        return a;
    }
    PSeriesChar<K> chi_;
    std::vector<Permutation> perms_;
    std::vector<LocalMatrix> anchors_;
    std::map<Permutation, std::size_t> index_;
    mutable std::map<AffElem, std::vector<LocalMatrix>> cache_;
};

// Action of a double coset given by its representative list.
template <typename K>
PSeriesVec<K> hecke_act(const PSeriesModel<K>& model, const std::vector<LocalMatrix>& coset_reps,
                        const PSeriesVec<K>& v) {
    return model.act_cosets(coset_reps, v);
}

template <typename K>
struct SteinbergReport {
    bool ok = true;
    std::vector<std::tuple<long, std::size_t, long>> exponents;  // (i, block, sqrt-q power)
    std::string detail;
};

// Spectral check of all block operators on the level-mu invariants of a
// regular character. Two routes per operator, each against its own frozen
// sqrt(q) power table:
//   1. per-operator characteristic polynomials, for both the representative
//      sum and the Bernstein-side orbit sum, match the elementary symmetric
//      values over labeled partitions (skipped when the field characteristic
//      is too small to divide by the dimension);
//   2. the joint generalized eigenspace of every predicted eigenvalue tuple
//      of the (commuting) Bernstein-side operators has exactly its
//      predicted multiplicity, an unconditional multiset check.
// The joint part runs on the Bernstein side only: the raw representative
// sums commute with each other only after the q-powers separating the two
// routes collapse (q = 1 in K), so they need not share eigenvectors here.
// Requires the normalized model or q = 1 in the coefficient field, since
// otherwise the eigenvalues are not sqrt(q)-power multiples of the
// elementary symmetric values.
template <typename K>
SteinbergReport<K> steinberg_eigencheck(const PSeriesModel<K>& model, const Composition& mu) {
    const PSeriesChar<K>& chi = model.chi();
    for (std::size_t a = 0; a < chi.n(); ++a)
        for (std::size_t b = a + 1; b < chi.n(); ++b)
            if (chi.values[a] == chi.values[b])
                throw ValidationError("eigenvalue check requires a regular character");
    if (!chi.normalized && !(model.q() == model.one()))
        throw ValidationError("eigenvalue check needs the normalized model or q = 1");

    SteinbergReport<K> rep;
    const K zero = model.zero();
    const K one = model.one();
    const K q = model.q();
    Matrix<K> basis = model.invariant_basis(mu);
    auto parts = labeled_partitions(mu);
    const std::size_t d = basis.cols();
    if (d != parts.size()) {
        rep.ok = false;
        rep.detail = "invariant dimension does not match the component count";
        return rep;
    }

    bool char_big_enough = true;
    for (std::size_t t = 2; t <= d; ++t)
        if (is_zero(scalar_from_int(zero, static_cast<long>(t)))) char_big_enough = false;

    std::vector<Matrix<K>> ops;                 // Bernstein-side operators
    std::vector<std::vector<K>> expected;       // one value per partition, per operator
    for (std::size_t j = 0; j < mu.parts().size(); ++j) {
        for (long i = 1; i <= mu.parts()[j]; ++i) {
            Matrix<K> vrep = model.vij_invariant_matrix(mu, i, j, basis);
            Matrix<K> vth = model.restricted(
                model.matrix_of_t(bern_to_t(vij_element(mu, static_cast<int>(i), j, q))), basis);

            long crep = chi.normalized ? vij_sqrtq_exponent(mu, i, j) : 0;
            long cth = chi.normalized ? vij_theta_sqrtq_exponent(mu, i, j) : 0;
            K norm_rep = chi.normalized ? scalar_pow(chi.sqrt_q, crep) : one;
            K norm_th = chi.normalized ? scalar_pow(chi.sqrt_q, cth) : one;
            std::vector<K> base_vals, th_vals;
            for (const auto& part : parts) {
                std::vector<K> xs;
                for (int idx : part[j]) xs.push_back(chi.values[static_cast<std::size_t>(idx)]);
                K e = elementary_symmetric(xs, i);
                base_vals.push_back(norm_rep * e);
                th_vals.push_back(norm_th * e);
            }
            if (char_big_enough) {
                if (!(UniPoly<K>::from_roots(base_vals, zero) == char_poly(vrep))) {
                    rep.ok = false;
                    rep.detail = "operator (" + std::to_string(i) + ", " + std::to_string(j + 1) +
                                 ") spectrum mismatch";
                    return rep;
                }
                if (!(UniPoly<K>::from_roots(th_vals, zero) == char_poly(vth))) {
                    rep.ok = false;
                    rep.detail = "orbit sum (" + std::to_string(i) + ", " + std::to_string(j + 1) +
                                 ") spectrum mismatch";
                    return rep;
                }
            }
            rep.exponents.emplace_back(i, j, crep);
            ops.push_back(std::move(vth));
            expected.push_back(std::move(th_vals));
        }
    }

    // group the predicted tuples with multiplicity
    std::vector<std::pair<std::vector<K>, std::size_t>> groups;
    for (std::size_t a = 0; a < parts.size(); ++a) {
        std::vector<K> tau;
        tau.reserve(ops.size());
        for (std::size_t t = 0; t < ops.size(); ++t) tau.push_back(expected[t][a]);
        bool found = false;
        for (auto& g : groups)
            if (g.first == tau) {
                ++g.second;
                found = true;
                break;
            }
        if (!found) groups.emplace_back(std::move(tau), 1);
    }

    std::size_t covered = 0;
    for (const auto& [tau, mult] : groups) {
        Matrix<K> stack(ops.size() * d, d, zero);
        for (std::size_t t = 0; t < ops.size(); ++t) {
            Matrix<K> shifted = ops[t];
            for (std::size_t i = 0; i < d; ++i) shifted.at(i, i) = shifted.at(i, i) - tau[t];
            Matrix<K> pw = shifted.pow(static_cast<long>(d));
            for (std::size_t r = 0; r < d; ++r)
                for (std::size_t c2 = 0; c2 < d; ++c2) stack.at(t * d + r, c2) = pw.at(r, c2);
        }
        std::size_t got = stack.nullspace().cols();
        if (got != mult) {
            rep.ok = false;
            rep.detail = "a joint eigenspace has dimension " + std::to_string(got) +
                         ", expected " + std::to_string(mult);
            return rep;
        }
        covered += got;
    }
    if (covered != d) {
        rep.ok = false;
        rep.detail = "joint eigenspaces do not fill the invariant space";
    }
    return rep;
}

// Root data of the projector at a candidate value alpha for a two-block
// level: P[j] collects the degree-(j+1) elementary symmetric values over all
// second-block-sized subsets (scaled by the frozen sqrt(q) power in
// normalized mode), R[j] is the power of (T - binom * alpha^(j+1)) matching
// the root multiplicity, and Q[j] the complementary factor. The roots are
// the eigenvalues of the volume-1 block operators on the invariants.
template <typename K>
struct AlphaData {
    K alpha;
    Composition mu;
    std::vector<UniPoly<K>> P, Q, R;
};

template <typename K>
AlphaData<K> build_alpha_data(const PSeriesChar<K>& chi, const K& alpha, const Composition& mu) {
    if (mu.parts().size() != 2) throw ShapeError("alpha data requires a two block composition");
    if (mu.n() != chi.n()) throw ShapeError("composition size mismatch");
    if (is_zero(alpha)) throw ValidationError("alpha must be a unit");
    const K zero = ring_zero(alpha);
    const long n2 = mu.parts()[1];
    const std::size_t n = chi.n();

    std::vector<std::vector<K>> subsets;
    {
        std::vector<int> mask(n, 0);
        std::fill(mask.begin(), mask.begin() + n2, 1);
        do {
            std::vector<K> xs;
            for (std::size_t t = 0; t < n; ++t)
                if (mask[t]) xs.push_back(chi.values[t]);
            subsets.push_back(std::move(xs));
        } while (std::prev_permutation(mask.begin(), mask.end()));
    }

    AlphaData<K> data{alpha, mu, {}, {}, {}};
    for (long jj = 1; jj <= n2; ++jj) {
        K norm = chi.normalized ? scalar_pow(chi.sqrt_q, vij_sqrtq_exponent(mu, jj, 1))
                                : ring_one(alpha);
        std::vector<K> roots;
        roots.reserve(subsets.size());
        for (const auto& xs : subsets) roots.push_back(norm * elementary_symmetric(xs, jj));

        long binom = 1;
        for (long t = 1; t <= jj; ++t) binom = binom * (n2 - jj + t) / t;
        K target = norm * scalar_from_int(zero, binom) * scalar_pow(alpha, jj);

        std::vector<K> qroots;
        std::size_t k = 0;
        for (const K& r : roots) {
            if (r == target)
                ++k;
            else
                qroots.push_back(r);
        }
        UniPoly<K> pj = UniPoly<K>::from_roots(roots, zero);
        UniPoly<K> rj = UniPoly<K>::from_roots(std::vector<K>(k, target), zero);
        UniPoly<K> qj = UniPoly<K>::from_roots(qroots, zero);
        if (!(qj * rj == pj)) throw InternalError("factor split failed");
        if (k > 0 && is_zero(qj.evaluate(target))) throw InternalError("factors are not coprime");
        data.P.push_back(std::move(pj));
        data.Q.push_back(std::move(qj));
        data.R.push_back(std::move(rj));
    }
    return data;
}

// The chain a, a^2!, a^3!, ... stabilizes to the idempotent with the same
// eventual image and kernel once the factorial clears every spectral unit
// order and the nilpotency degree; plain squaring can cycle when a unit
// order has an odd factor, so the factorial ladder is used instead.
template <typename K>
Matrix<K> stabilize_factorial_power(const Matrix<K>& a, std::size_t bound) {
    Matrix<K> prev = a;
    for (std::size_t m = 2; m <= bound; ++m) {
        Matrix<K> next = prev.pow(static_cast<long>(m));
        if (next == prev && next * next == next) return next;
        prev = next;
    }
    throw ConvergenceError("projector powers failed to stabilize");
}

// Triangular translates of diag(1^{n1}, pi^{n2}) at the two-block level: the
// uniformizer block on the diagonal plus entries pi * c, c over the residues,
// in the first-block rows of the uniformizer columns. Conjugating such a
// unipotent factor across the diagonal deepens its entries, so every
// translate lies in the single right coset of the diagonal itself; this is a
// pinned translate family, not a coset system. On parahoric invariants the
// translate sum collapses to a multiple of that one coset, while on the rest
// of the Iwahori-invariant space it separates the translates, which is the
// operator the full-space projector needs.
inline std::vector<LocalMatrix> block2_upper_reps(const Composition& mu, long ell) {
    if (mu.parts().size() != 2) throw ShapeError("two block composition required");
    const std::size_t n = mu.n();
    const std::size_t n1 = static_cast<std::size_t>(mu.parts()[0]);
    const std::size_t slots = n1 * static_cast<std::size_t>(mu.parts()[1]);
    std::vector<LocalMatrix> out;
    std::vector<long> c(slots, 0);
    while (true) {
        Matrix<Rational> m = Matrix<Rational>::identity(n, Rational(0));
        for (std::size_t col = n1; col < n; ++col) m.at(col, col) = Rational(ell);
        std::size_t s = 0;
        for (std::size_t r = 0; r < n1; ++r)
            for (std::size_t col = n1; col < n; ++col) m.at(r, col) = Rational(ell * c[s++]);
        out.emplace_back(std::move(m), ell);
        std::size_t t = 0;
        while (t < slots && c[t] == ell - 1) c[t++] = 0;
        if (t == slots) break;
        ++c[t];
    }
    return out;
}

// Projector onto the alpha part, as a matrix on the full Iwahori-invariant
// space. Built from the translate sum of block2_upper_reps rather than from
// a coset sum: on vectors invariant only under the Iwahori a representative
// sum depends on the representatives, and the coordinate-support property
// (image spanned by the coordinate vectors of wprime_set) holds for that
// pinned family. One-slot second blocks only: with distinct character
// values a larger second block leaves no qualifying permutations and the
// projector vanishes, which build_e_alpha already covers on the invariants.
template <typename K>
Matrix<K> e_alpha_full(const PSeriesModel<K>& model, const AlphaData<K>& data) {
    if (data.mu.parts()[1] != 1)
        throw ShapeError("full-space projector requires a one-slot second block");
    Matrix<K> v = model.act_matrix(block2_upper_reps(data.mu, model.chi().ell));
    Matrix<K> e = substitute_matrix(data.Q[0], v);
    return stabilize_factorial_power(e, 2 * model.dim() + 8);
}

// Same projector computed on the level-mu invariants in the given column
// basis.
template <typename K>
Matrix<K> build_e_alpha(const PSeriesModel<K>& model, const AlphaData<K>& data, const Matrix<K>& basis) {
    Matrix<K> e = Matrix<K>::identity(basis.cols(), model.zero());
    for (long jj = 1; jj <= data.mu.parts()[1]; ++jj)
        e = e * substitute_matrix(data.Q[static_cast<std::size_t>(jj - 1)],
                                  model.vij_invariant_matrix(data.mu, jj, 1, basis));
    return stabilize_factorial_power(e, 2 * model.dim() + 8);
}

// Permutations whose image of the second block is exactly the given position
// set. The image orientation (rather than preimage) is the one the rank and
// coordinate tests single out.
inline std::vector<Permutation> wprime_set(const Composition& mu, const std::vector<int>& positions) {
    if (mu.parts().size() != 2) throw ShapeError("two block composition required");
    auto [b, e] = mu.block_range(1);
    std::set<int> tgt(positions.begin(), positions.end());
    if (tgt.size() != static_cast<std::size_t>(e - b))
        throw ShapeError("position count does not match the second block");
    std::vector<Permutation> out;
    for (const auto& w : all_permutations(mu.n())) {
        bool ok = true;
        for (int t = b; t < e; ++t)
            if (!tgt.count(w(t))) ok = false;
        if (ok) out.push_back(w);
    }
    return out;
}

} // namespace parahoric
