#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/rational.hpp"

namespace parahoric {

// Multivariate Laurent polynomial in a fixed number of variables X_1..X_n
// over an exact scalar ring K. Terms are kept in a map ordered
// lexicographically by exponent vector, so iteration order (and hence
// printing) is canonical. Exponents are capped at |e| <= 64; crossing the
// cap throws LimitError rather than silently wrapping.
template <typename K>
class LaurentPoly {
public:
    static constexpr int kMaxExp = 64;
    using Exps = std::vector<int>;

    LaurentPoly(std::size_t arity, const K& exemplar)
        : arity_(arity), zero_(ring_zero(exemplar)) {}

    static LaurentPoly constant(std::size_t arity, const K& c) {
        LaurentPoly p(arity, c);
        p.add_term(Exps(arity, 0), c);
        return p;
    }
    static LaurentPoly monomial(const Exps& e, const K& c) {
        LaurentPoly p(e.size(), c);
        p.add_term(e, c);
        return p;
    }
    static LaurentPoly variable(std::size_t arity, std::size_t i, const K& exemplar) {
        if (i >= arity) throw ShapeError("variable index out of range");
        Exps e(arity, 0);
        e[i] = 1;
        return monomial(e, ring_one(exemplar));
    }

    std::size_t arity() const { return arity_; }
    const K& zero_scalar() const { return zero_; }
    const std::map<Exps, K>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        if (terms_.empty()) return true;
        return terms_.size() == 1 && terms_.begin()->first == Exps(arity_, 0);
    }
    K constant_value() const {
        if (terms_.empty()) return zero_;
        if (!is_constant()) throw ShapeError("non-constant polynomial");
        return terms_.begin()->second;
    }

    void add_term(const Exps& e, const K& c) {
        if (e.size() != arity_) throw ShapeError("exponent arity mismatch");
        for (int x : e)
            if (x > kMaxExp || x < -kMaxExp) throw LimitError("Laurent exponent out of range");
        if (detail::coeff_is_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (detail::coeff_is_zero(it->second)) terms_.erase(it);
        }
    }

    LaurentPoly operator+(const LaurentPoly& o) const {
        same(o);
        LaurentPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, c);
        return r;
    }
    LaurentPoly operator-(const LaurentPoly& o) const {
        same(o);
        LaurentPoly r = *this;
        for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
        return r;
    }
    LaurentPoly operator-() const {
        LaurentPoly r(arity_, zero_);
        for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
        return r;
    }
    LaurentPoly operator*(const LaurentPoly& o) const {
        same(o);
        LaurentPoly r(arity_, zero_);
        for (const auto& [e1, c1] : terms_)
            for (const auto& [e2, c2] : o.terms_) {
                Exps e(arity_);
                for (std::size_t i = 0; i < arity_; ++i) e[i] = e1[i] + e2[i];
                r.add_term(e, c1 * c2);
            }
        return r;
    }
    LaurentPoly scaled(const K& c) const {
        LaurentPoly r(arity_, zero_);
        for (const auto& [e, k] : terms_) r.add_term(e, k * c);
        return r;
    }

    bool operator==(const LaurentPoly& o) const {
        return arity_ == o.arity_ && terms_ == o.terms_;
    }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    // Substitute scalar values for the variables. Negative exponents demand
    // invertible values (UnitError surfaces from the scalar division).
    K substitute(const std::vector<K>& values) const {
        if (values.size() != arity_) throw ShapeError("substitution arity mismatch");
        K acc = zero_;
        for (const auto& [e, c] : terms_) {
            K term = c;
            for (std::size_t i = 0; i < arity_; ++i) {
                int k = e[i];
                K f = values[i];
                if (k < 0) {
                    if (detail::coeff_is_zero(f)) throw UnitError("zero raised to negative exponent");
                    f = ring_one(zero_) / f;
                    k = -k;
                }
                for (int s = 0; s < k; ++s) term = term * f;
            }
            acc = acc + term;
        }
        return acc;
    }

    // Apply a permutation of the variables: X_i -> X_{perm[i]} (0-based
    // images).
    LaurentPoly permuted(const std::vector<int>& perm) const {
        if (perm.size() != arity_) throw ShapeError("permutation arity mismatch");
        LaurentPoly r(arity_, zero_);
        for (const auto& [e, c] : terms_) {
            Exps f(arity_, 0);
            for (std::size_t i = 0; i < arity_; ++i) f[perm[i]] = e[i];
            r.add_term(f, c);
        }
        return r;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [e, c] : terms_) {
            if (!s.empty()) s += " + ";
            s += "(" + scalar_str(c) + ")";
            for (std::size_t i = 0; i < arity_; ++i)
                if (e[i] != 0) s += "*X" + std::to_string(i + 1) + "^" + std::to_string(e[i]);
        }
        return s;
    }

private:
    void same(const LaurentPoly& o) const {
        if (arity_ != o.arity_) throw ShapeError("mixed polynomial arities");
    }

    std::size_t arity_;
    K zero_;
    std::map<Exps, K> terms_;
};

template <typename K>
LaurentPoly<K> ring_zero(const LaurentPoly<K>& x) {
    return LaurentPoly<K>(x.arity(), x.zero_scalar());
}
template <typename K>
LaurentPoly<K> ring_one(const LaurentPoly<K>& x) {
    return LaurentPoly<K>::constant(x.arity(), ring_one(x.zero_scalar()));
}
template <typename K>
bool is_zero(const LaurentPoly<K>& x) { return x.is_zero(); }
template <typename K>
std::string scalar_str(const LaurentPoly<K>& x) { return x.str(); }
template <typename K>
LaurentPoly<K> scalar_from_int(const LaurentPoly<K>& x, long v) {
    return LaurentPoly<K>::constant(x.arity(), scalar_from_int(x.zero_scalar(), v));
}

// Exact quotient a / b in the Laurent ring. In a Laurent polynomial ring the
// lex-leading monomial of a product is the product of the lex-leading
// monomials, so when b divides a the quotient is built by repeatedly
// cancelling the leading term. The iteration count equals the number of
// quotient terms; the cap only trips if the division was not exact.
template <typename K>
LaurentPoly<K> divexact(const LaurentPoly<K>& a, const LaurentPoly<K>& b) {
    if (b.is_zero()) throw UnitError("exact division by zero polynomial");
    LaurentPoly<K> rem = a;
    LaurentPoly<K> quot(a.arity(), a.zero_scalar());
    auto lead_b = std::prev(b.terms().end());
    std::size_t guard = 200000;  // = number of quotient terms when exact
    while (!rem.is_zero()) {
        if (guard-- == 0) throw InternalError("non-exact Laurent division");
        auto lead_r = std::prev(rem.terms().end());
        typename LaurentPoly<K>::Exps e(a.arity());
        for (std::size_t i = 0; i < a.arity(); ++i)
            e[i] = lead_r->first[i] - lead_b->first[i];
        K c = divexact(lead_r->second, lead_b->second);
        LaurentPoly<K> t = LaurentPoly<K>::monomial(e, c);
        quot = quot + t;
        rem = rem - t * b;
    }
    return quot;
}

// Elementary symmetric polynomial e_j in the variables listed in `vars`
// (0-based indices into an arity-n Laurent ring).
template <typename K>
LaurentPoly<K> elementary_symmetric(std::size_t arity, const std::vector<int>& vars,
                                    std::size_t j, const K& exemplar) {
    // Dynamic programming over e_0..e_j.
    std::vector<LaurentPoly<K>> e;
    e.reserve(j + 1);
    e.push_back(LaurentPoly<K>::constant(arity, ring_one(exemplar)));
    for (std::size_t t = 1; t <= j; ++t) e.push_back(LaurentPoly<K>(arity, exemplar));
    for (int v : vars) {
        LaurentPoly<K> x = LaurentPoly<K>::variable(arity, static_cast<std::size_t>(v), exemplar);
        for (std::size_t t = std::min(j, e.size() - 1); t >= 1; --t)
            e[t] = e[t] + e[t - 1] * x;
    }
    return e[j];
}

} // namespace parahoric
