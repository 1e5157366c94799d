#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/rational.hpp"
#include "parahoric/weyl.hpp"

namespace parahoric {

// ---------------------------------------------------------------------------
// Extended affine Weyl group for GL_n: pairs (lambda, w) in Z^n x S_n,
// labelling the monomial matrix diag(pi^lambda) * P_w where P_w e_j =
// e_{w(j)}. The group law follows matrix multiplication.
// ---------------------------------------------------------------------------

// r[w(i)] = v[i], i.e. r_i = v_{w^{-1}(i)}.
inline std::vector<int> push_forward(const Permutation& w, const std::vector<int>& v) {
    if (w.size() != v.size()) throw ShapeError("push_forward size mismatch");
    std::vector<int> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[static_cast<std::size_t>(w(static_cast<int>(i)))] = v[i];
    return r;
}

struct AffElem {
    std::vector<int> lambda;
    Permutation w;

    AffElem(std::vector<int> l, Permutation p) : lambda(std::move(l)), w(std::move(p)) {
        if (lambda.size() != w.size()) throw ShapeError("affine element size mismatch");
    }
    std::size_t size() const { return lambda.size(); }

    bool operator==(const AffElem& o) const { return lambda == o.lambda && w == o.w; }
    bool operator!=(const AffElem& o) const { return !(*this == o); }
    bool operator<(const AffElem& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        return w < o.w;
    }
    std::string str() const {
        std::string s = "t[";
        for (std::size_t i = 0; i < lambda.size(); ++i)
            s += (i ? "," : "") + std::to_string(lambda[i]);
        return s + "]*" + w.str();
    }
};

inline AffElem aff_identity(std::size_t n) {
    return AffElem(std::vector<int>(n, 0), Permutation::identity(n));
}
inline AffElem aff_translation(const std::vector<int>& lambda) {
    return AffElem(lambda, Permutation::identity(lambda.size()));
}
inline AffElem aff_finite(const Permutation& w) {
    return AffElem(std::vector<int>(w.size(), 0), w);
}

inline AffElem aff_mul(const AffElem& a, const AffElem& b) {
    if (a.size() != b.size()) throw ShapeError("affine product size mismatch");
    std::vector<int> l = push_forward(a.w, b.lambda);
    for (std::size_t i = 0; i < l.size(); ++i) l[i] += a.lambda[i];
    return AffElem(std::move(l), a.w.compose(b.w));
}

inline AffElem aff_inv(const AffElem& a) {
    Permutation winv = a.w.inverse();
    std::vector<int> l = push_forward(winv, a.lambda);
    for (auto& x : l) x = -x;
    return AffElem(std::move(l), std::move(winv));
}

// Iwahori-Matsumoto length. For each pair i < j the contribution depends on
// whether w inverts the pair; the sign convention matches the matrix
// labelling above (checked against Iwahori coset counts).
inline std::size_t aff_length(const AffElem& x) {
    std::size_t n = x.size(), len = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            int wi = x.w(static_cast<int>(i)), wj = x.w(static_cast<int>(j));
            int c = x.lambda[static_cast<std::size_t>(wj)] - x.lambda[static_cast<std::size_t>(wi)];
            if (wi > wj) c += 1;
            len += static_cast<std::size_t>(std::abs(c));
        }
    return len;
}

// Affine simple reflection s_0 = label of the matrix with pi^{-1} in the
// corner, t_{e_1 - e_n}-twisted transposition (1 n).
inline AffElem aff_s0(std::size_t n) {
    if (n < 2) throw ShapeError("s_0 needs n >= 2");
    std::vector<int> l(n, 0);
    l[0] = -1;
    l[n - 1] = 1;
    return AffElem(std::move(l), Permutation::transposition(n, 0, n - 1));
}

// Length-zero rotation: omega^n = t_{(1,..,1)}, conjugation by omega rotates
// the affine Dynkin diagram.
inline AffElem aff_omega(std::size_t n) {
    std::vector<int> l(n, 0);
    l[n - 1] = 1;
    std::vector<int> img(n);
    img[0] = static_cast<int>(n - 1);
    for (std::size_t i = 1; i < n; ++i) img[i] = static_cast<int>(i - 1);
    return AffElem(std::move(l), Permutation(std::move(img)));
}

inline AffElem aff_omega_pow(std::size_t n, long k) {
    AffElem w = aff_omega(n), acc = aff_identity(n);
    AffElem g = k >= 0 ? w : aff_inv(w);
    for (long t = 0; t < std::abs(k); ++t) acc = aff_mul(acc, g);
    return acc;
}

// Generator k: 0 is the affine reflection, 1..n-1 the finite simples.
inline AffElem aff_gen(std::size_t n, std::size_t k) {
    if (k == 0) return aff_s0(n);
    return aff_finite(Permutation::simple(n, k - 1));
}

// Reduced expression x = omega^{omega_pow} * s_{letters[m-1]} * ... *
// s_{letters[0]}; letters are stored in peeling order (letters[0] is the
// rightmost factor).
struct AffWord {
    long omega_pow = 0;
    std::vector<std::size_t> letters;
};

inline AffWord aff_word(const AffElem& x) {
    std::size_t n = x.size();
    AffWord word;
    AffElem cur = x;
    std::size_t len = aff_length(cur);
    while (len > 0) {
        bool found = false;
        for (std::size_t k = 0; k < n; ++k) {
            AffElem nxt = aff_mul(cur, aff_gen(n, k));
            std::size_t nl = aff_length(nxt);
            if (nl < len) {
                word.letters.push_back(k);
                cur = std::move(nxt);
                len = nl;
                found = true;
                break;
            }
        }
        if (!found) throw InternalError("no descent on positive-length element");
    }
    long k = 0;
    for (int v : cur.lambda) k += v;
    if (!(cur == aff_omega_pow(n, k))) throw InternalError("length-zero part is not a rotation power");
    word.omega_pow = k;
    return word;
}

inline bool is_dominant(const std::vector<int>& lambda) {
    for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
        if (lambda[i] < lambda[i + 1]) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Iwahori-Hecke algebra in the T-basis indexed by the extended affine Weyl
// group. Products are computed by the braid-respecting rewriting rules
//   T_x T_s = T_{xs}            if l(xs) > l(x),
//   T_x T_s = (q-1) T_x + q T_{xs}  otherwise,
//   T_x T_omega^k = T_{x omega^k}.
// ---------------------------------------------------------------------------

template <typename K>
class HeckeT {
public:
    HeckeT(std::size_t n, const K& q) : n_(n), q_(q) {
        if (is_zero(q)) throw UnitError("Hecke parameter must be a unit");
    }
    static HeckeT unit(std::size_t n, const K& q) {
        HeckeT h(n, q);
        h.add_term(aff_identity(n), ring_one(q));
        return h;
    }
    static HeckeT basis(const AffElem& x, const K& q) {
        HeckeT h(x.size(), q);
        h.add_term(x, ring_one(q));
        return h;
    }

    std::size_t n() const { return n_; }
    const K& q() const { return q_; }
    const std::map<AffElem, K>& terms() const { return c_; }
    bool is_zero_elem() const { return c_.empty(); }

    void add_term(const AffElem& x, const K& c) {
        if (x.size() != n_) throw ShapeError("term size mismatch");
        if (is_zero(c)) return;
        auto it = c_.find(x);
        if (it == c_.end()) {
            c_.emplace(x, c);
        } else {
            it->second = it->second + c;
            if (is_zero(it->second)) c_.erase(it);
        }
    }

    HeckeT operator+(const HeckeT& o) const {
        same(o);
        HeckeT r = *this;
        for (const auto& [x, c] : o.c_) r.add_term(x, c);
        return r;
    }
    HeckeT operator-(const HeckeT& o) const {
        same(o);
        HeckeT r = *this;
        for (const auto& [x, c] : o.c_) r.add_term(x, -c);
        return r;
    }
    HeckeT scaled(const K& k) const {
        HeckeT r(n_, q_);
        for (const auto& [x, c] : c_) r.add_term(x, c * k);
        return r;
    }
    bool operator==(const HeckeT& o) const { same(o); return c_ == o.c_; }
    bool operator!=(const HeckeT& o) const { return !(*this == o); }

    HeckeT mul_gen_right(std::size_t k) const {
        AffElem s = aff_gen(n_, k);
        HeckeT r(n_, q_);
        K one = ring_one(q_);
        for (const auto& [x, c] : c_) {
            AffElem xs = aff_mul(x, s);
            if (aff_length(xs) > aff_length(x)) {
                r.add_term(xs, c);
            } else {
                r.add_term(x, c * (q_ - one));
                r.add_term(xs, c * q_);
            }
        }
        return r;
    }

    HeckeT mul_omega_right(long k) const {
        AffElem om = aff_omega_pow(n_, k);
        HeckeT r(n_, q_);
        for (const auto& [x, c] : c_) r.add_term(aff_mul(x, om), c);
        return r;
    }

    // this * T_x for a basis element.
    HeckeT mul_basis_right(const AffElem& x) const {
        AffWord word = aff_word(x);
        HeckeT r = mul_omega_right(word.omega_pow);
        for (std::size_t t = word.letters.size(); t-- > 0;)
            r = r.mul_gen_right(word.letters[t]);
        return r;
    }

    HeckeT mul(const HeckeT& o) const {
        same(o);
        HeckeT r(n_, q_);
        for (const auto& [y, d] : o.c_) {
            HeckeT part = mul_basis_right(y).scaled(d);
            for (const auto& [x, c] : part.c_) r.add_term(x, c);
        }
        return r;
    }

    // (T_x)^{-1} via the reduced word; each letter contributes
    // T_s^{-1} = q^{-1} T_s + (q^{-1} - 1).
    static HeckeT basis_inverse(const AffElem& x, const K& q) {
        std::size_t n = x.size();
        AffWord word = aff_word(x);
        K one = ring_one(q);
        K qinv = one / q;
        HeckeT r = unit(n, q);
        for (std::size_t t = 0; t < word.letters.size(); ++t) {
            HeckeT ts = r.mul_gen_right(word.letters[t]).scaled(qinv);
            HeckeT rest = r.scaled(qinv - one);
            r = ts + rest;
        }
        return r.mul_omega_right(-word.omega_pow);
    }

private:
    void same(const HeckeT& o) const {
        if (n_ != o.n_ || !(q_ == o.q_)) throw ShapeError("mixed Hecke algebra parameters");
    }

    std::size_t n_;
    K q_;
    std::map<AffElem, K> c_;
};

// ---------------------------------------------------------------------------
// Bernstein basis {theta_lambda T_w : lambda in Z^n, w in S_n} of the same
// algebra. theta is the monoid homomorphism lambda -> theta_lambda with
// theta_lambda = T_{t_lambda} for dominant lambda. Products are rewritten by
//   theta_lambda theta_nu = theta_{lambda + nu},
//   T_s theta_lambda = q^k theta_{s(lambda)} T_s + (q-1) Tele(lambda, s),
// with k = <lambda, alpha^> and Tele the polynomial resolution of the
// quotient (theta_lambda - q^k theta_{s(lambda)}) / (1 - q theta_{-alpha^}):
//   k >= 0:  sum_{t=0}^{k-1}  q^t    theta_{lambda - t alpha^}
//   k <  0: -sum_{t=1}^{-k}   q^{-t} theta_{lambda + t alpha^}.
// The q-powers are forced by the unnormalized theta convention (theta equal
// to T on dominant translations, no square roots of q); the clean-coefficient
// form of the relation holds only for the q^{-l/2}-rescaled basis. Both the
// conversion round trip below and the coset-convolution oracle pin this down.
// ---------------------------------------------------------------------------

struct BernKey {
    std::vector<int> lambda;
    Permutation w;

    BernKey(std::vector<int> l, Permutation p) : lambda(std::move(l)), w(std::move(p)) {
        if (lambda.size() != w.size()) throw ShapeError("Bernstein key size mismatch");
    }
    bool operator==(const BernKey& o) const { return lambda == o.lambda && w == o.w; }
    bool operator<(const BernKey& o) const {
        if (lambda != o.lambda) return lambda < o.lambda;
        return w < o.w;
    }
};

template <typename K>
class HeckeElem {
public:
    HeckeElem(std::size_t n, const K& q) : n_(n), q_(q) {
        if (is_zero(q)) throw UnitError("Hecke parameter must be a unit");
    }
    static HeckeElem unit(std::size_t n, const K& q) {
        return basis(std::vector<int>(n, 0), Permutation::identity(n), q);
    }
    static HeckeElem basis(const std::vector<int>& lambda, const Permutation& w, const K& q) {
        HeckeElem h(lambda.size(), q);
        h.add_term(BernKey(lambda, w), ring_one(q));
        return h;
    }

    std::size_t n() const { return n_; }
    const K& q() const { return q_; }
    const std::map<BernKey, K>& terms() const { return c_; }
    bool is_zero_elem() const { return c_.empty(); }

    void add_term(const BernKey& k, const K& c) {
        if (k.lambda.size() != n_) throw ShapeError("term size mismatch");
        if (is_zero(c)) return;
        auto it = c_.find(k);
        if (it == c_.end()) {
            c_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (is_zero(it->second)) c_.erase(it);
        }
    }

    HeckeElem operator+(const HeckeElem& o) const {
        same(o);
        HeckeElem r = *this;
        for (const auto& [k, c] : o.c_) r.add_term(k, c);
        return r;
    }
    HeckeElem operator-(const HeckeElem& o) const {
        same(o);
        HeckeElem r = *this;
        for (const auto& [k, c] : o.c_) r.add_term(k, -c);
        return r;
    }
    HeckeElem scaled(const K& s) const {
        HeckeElem r(n_, q_);
        for (const auto& [k, c] : c_) r.add_term(k, c * s);
        return r;
    }
    bool operator==(const HeckeElem& o) const { same(o); return c_ == o.c_; }
    bool operator!=(const HeckeElem& o) const { return !(*this == o); }

    HeckeElem mul(const HeckeElem& o) const {
        same(o);
        HeckeElem r(n_, q_);
        for (const auto& [ka, ca] : c_)
            for (const auto& [kb, cb] : o.c_) {
                HeckeElem part = atom_mul(ka, kb);
                K f = ca * cb;
                for (const auto& [k, c] : part.c_) r.add_term(k, c * f);
            }
        return r;
    }

    // T_w * theta_nu rewritten into the Bernstein basis (w finite).
    HeckeElem tw_theta(const Permutation& w, const std::vector<int>& nu) const {
        if (w.is_identity()) return basis(nu, w, q_);
        // left descent: l(s w) < l(w)
        std::size_t n = n_;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Permutation s = Permutation::simple(n, i);
            Permutation rest = s.compose(w);
            if (rest.length() < w.length()) {
                HeckeElem inner = tw_theta(rest, nu);
                HeckeElem r(n_, q_);
                for (const auto& [k, c] : inner.c_) {
                    HeckeElem piece = ts_theta_tw(i, k.lambda, k.w);
                    for (const auto& [k2, c2] : piece.c_) r.add_term(k2, c2 * c);
                }
                return r;
            }
        }
        throw InternalError("finite permutation without left descent");
    }

private:
    // T_{s_i} * theta_lambda * T_u, for a finite simple reflection s_i.
    HeckeElem ts_theta_tw(std::size_t i, const std::vector<int>& lambda,
                          const Permutation& u) const {
        std::size_t n = n_;
        K one = ring_one(q_);
        Permutation s = Permutation::simple(n, i);
        std::vector<int> slam = lambda;
        std::swap(slam[i], slam[i + 1]);
        int k = lambda[i] - lambda[i + 1];
        K qk = one;
        if (k >= 0)
            for (int t = 0; t < k; ++t) qk = qk * q_;
        else {
            K qinv = one / q_;
            for (int t = 0; t < -k; ++t) qk = qk * qinv;
        }
        HeckeElem r(n_, q_);
        // q^k * theta_{s lambda} * (T_s T_u)
        {
            Permutation su = s.compose(u);
            if (su.length() > u.length()) {
                r.add_term(BernKey(slam, su), qk);
            } else {
                r.add_term(BernKey(slam, u), qk * (q_ - one));
                r.add_term(BernKey(slam, su), qk * q_);
            }
        }
        // (q-1) * Tele(lambda, s_i) * T_u
        K qm1 = q_ - one;
        if (k > 0) {
            std::vector<int> mu = lambda;
            K pw = one;
            for (int t = 0; t < k; ++t) {
                r.add_term(BernKey(mu, u), qm1 * pw);
                mu[i] -= 1;
                mu[i + 1] += 1;
                pw = pw * q_;
            }
        } else if (k < 0) {
            std::vector<int> mu = lambda;
            K qinv = one / q_;
            K pw = one;
            for (int t = 0; t < -k; ++t) {
                mu[i] += 1;
                mu[i + 1] -= 1;
                pw = pw * qinv;
                r.add_term(BernKey(mu, u), -(qm1 * pw));
            }
        }
        return r;
    }

    // (theta_a T_w) * (theta_b T_u) = theta_a * (T_w theta_b) * T_u.
    HeckeElem atom_mul(const BernKey& a, const BernKey& b) const {
        HeckeElem mid = tw_theta(a.w, b.lambda);
        HeckeElem r(n_, q_);
        for (const auto& [k, c] : mid.c_) {
            std::vector<int> lam = k.lambda;
            for (std::size_t t = 0; t < n_; ++t) lam[t] += a.lambda[t];
            // (theta_lam T_{k.w}) * T_{b.w}: finite product by right peeling
            HeckeElem part = finite_right_mul(BernKey(lam, k.w), b.w);
            for (const auto& [k2, c2] : part.c_) r.add_term(k2, c2 * c);
        }
        return r;
    }

    // (theta_lam T_w) * T_u for finite w, u.
    HeckeElem finite_right_mul(const BernKey& a, const Permutation& u) const {
        HeckeElem r(n_, q_);
        r.add_term(a, ring_one(q_));
        // peel u from the right: u = u' s with l(u') < l(u)
        std::vector<std::size_t> letters;
        Permutation rest = u;
        while (!rest.is_identity()) {
            bool found = false;
            for (std::size_t i = 0; i + 1 < n_; ++i) {
                Permutation s = Permutation::simple(n_, i);
                Permutation shorter = rest.compose(s);
                if (shorter.length() < rest.length()) {
                    letters.push_back(i);
                    rest = shorter;
                    found = true;
                    break;
                }
            }
            if (!found) throw InternalError("finite permutation without right descent");
        }
        K one = ring_one(q_);
        for (std::size_t t = letters.size(); t-- > 0;) {
            Permutation s = Permutation::simple(n_, letters[t]);
            HeckeElem next(n_, q_);
            for (const auto& [k, c] : r.c_) {
                Permutation ws = k.w.compose(s);
                if (ws.length() > k.w.length()) {
                    next.add_term(BernKey(k.lambda, ws), c);
                } else {
                    next.add_term(k, c * (q_ - one));
                    next.add_term(BernKey(k.lambda, ws), c * q_);
                }
            }
            r = std::move(next);
        }
        return r;
    }

    void same(const HeckeElem& o) const {
        if (n_ != o.n_ || !(q_ == o.q_)) throw ShapeError("mixed Hecke algebra parameters");
    }

    std::size_t n_;
    K q_;
    std::map<BernKey, K> c_;
};

template <typename K>
HeckeElem<K> hecke_mul(const HeckeElem<K>& a, const HeckeElem<K>& b) {
    return a.mul(b);
}

template <typename K>
HeckeElem<K> theta(const std::vector<int>& lambda, const K& q) {
    return HeckeElem<K>::basis(lambda, Permutation::identity(lambda.size()), q);
}

// T_w^{-1} for finite w, inside the Bernstein-basis representation (the
// image consists of finite atoms only).
template <typename K>
HeckeElem<K> finite_basis_inverse(const Permutation& w, const K& q) {
    std::size_t n = w.size();
    K one = ring_one(q);
    K qinv = one / q;
    HeckeElem<K> r = HeckeElem<K>::unit(n, q);
    // peel from the LEFT: w = s w', then T_w^{-1} = T_{w'}^{-1} T_s^{-1},
    // accumulating right-multiplications in peel order.
    std::vector<std::size_t> letters;
    Permutation rest = w;
    while (!rest.is_identity()) {
        bool found = false;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            Permutation s = Permutation::simple(n, i);
            Permutation shorter = rest.compose(s);
            if (shorter.length() < rest.length()) {
                letters.push_back(i);
                rest = shorter;
                found = true;
                break;
            }
        }
        if (!found) throw InternalError("finite permutation without right descent");
    }
    // w = rest * s_{letters.back()} * ... * s_{letters.front()} with rest=id,
    // so T_w^{-1} = T_{s_{letters[0]}}^{-1} * ... * T_{s_{letters.back()}}^{-1}.
    for (std::size_t t = 0; t < letters.size(); ++t) {
        Permutation s = Permutation::simple(n, letters[t]);
        HeckeElem<K> ts = r.mul(HeckeElem<K>::basis(std::vector<int>(n, 0), s, q)).scaled(qinv);
        HeckeElem<K> restpart = r.scaled(qinv - one);
        r = ts + restpart;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Basis conversions.
// ---------------------------------------------------------------------------

// theta_lambda T_w -> T-basis: split lambda = mu - nu into dominant parts
// using the staircase (n-1,..,1,0), then T_{t_mu} T_{t_nu}^{-1} T_w.
template <typename K>
HeckeT<K> bern_to_t(const HeckeElem<K>& e) {
    std::size_t n = e.n();
    HeckeT<K> out(n, e.q());
    for (const auto& [key, coeff] : e.terms()) {
        int c0 = 0;
        for (std::size_t i = 0; i + 1 < n; ++i)
            c0 = std::max(c0, key.lambda[i + 1] - key.lambda[i]);
        std::vector<int> nu(n), mu(n);
        for (std::size_t i = 0; i < n; ++i) {
            nu[i] = c0 * static_cast<int>(n - 1 - i);
            mu[i] = key.lambda[i] + nu[i];
        }
        HeckeT<K> part = HeckeT<K>::basis(aff_translation(mu), e.q());
        if (c0 > 0) part = part.mul(HeckeT<K>::basis_inverse(aff_translation(nu), e.q()));
        if (!key.w.is_identity()) part = part.mul_basis_right(aff_finite(key.w));
        out = out + part.scaled(coeff);
    }
    return out;
}

// T_x -> Bernstein basis via the reduced word of x; the images of the
// generators are
//   T_{s_i}   -> theta-free atom,
//   T_{s_0}   -> T_{(1 n)}^{-1} theta_{e_1 - e_n},
//   T_omega   -> T_{c}^{-1} theta_{e_1}   (c the n-cycle j -> j+1),
// each coming from a length-additive factorization of a dominant
// translation.
template <typename K>
HeckeElem<K> t_to_bern(const HeckeT<K>& h) {
    std::size_t n = h.n();
    const K& q = h.q();
    HeckeElem<K> out(n, q);

    HeckeElem<K> img_s0(n, q);
    if (n >= 2) {
        std::vector<int> thetavec(n, 0);
        thetavec[0] = 1;
        thetavec[n - 1] = -1;
        img_s0 = finite_basis_inverse(Permutation::transposition(n, 0, n - 1), q)
                     .mul(theta(thetavec, q));
    }
    std::vector<int> e0(n, 0);
    e0[0] = 1;
    std::vector<int> cyc(n);
    for (std::size_t j = 0; j < n; ++j) cyc[j] = static_cast<int>((j + 1) % n);
    Permutation wcyc(cyc);  // = omega-part inverse
    HeckeElem<K> img_omega = finite_basis_inverse(wcyc, q).mul(theta(e0, q));
    std::vector<int> me0(n, 0);
    me0[0] = -1;
    HeckeElem<K> img_omega_inv =
        theta(me0, q).mul(HeckeElem<K>::basis(std::vector<int>(n, 0), wcyc, q));

    for (const auto& [x, coeff] : h.terms()) {
        AffWord word = aff_word(x);
        HeckeElem<K> part = HeckeElem<K>::unit(n, q);
        const HeckeElem<K>& om = word.omega_pow >= 0 ? img_omega : img_omega_inv;
        for (long t = 0; t < std::abs(word.omega_pow); ++t) part = part.mul(om);
        for (std::size_t t = word.letters.size(); t-- > 0;) {
            std::size_t k = word.letters[t];
            if (k == 0)
                part = part.mul(img_s0);
            else
                part = part.mul(HeckeElem<K>::basis(std::vector<int>(n, 0),
                                                    Permutation::simple(n, k - 1), q));
        }
        out = out + part.scaled(coeff);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parahoric idempotent e_P = [p : Iw]^{-1} sum_{w in S_mu} T_w and the
// block-symmetric V operators.
// ---------------------------------------------------------------------------

template <typename K>
struct ParahoricIdem {
    Composition mu;
    HeckeElem<K> e;
    K index;
};

// Poincare value sum_{w in S_mu} q^{l(w)}.
template <typename K>
K poincare_index(const Composition& mu, const K& q) {
    K acc = ring_zero(q);
    for (const auto& w : mu.parabolic_elements()) {
        K term = ring_one(q);
        for (std::size_t t = 0; t < w.length(); ++t) term = term * q;
        acc = acc + term;
    }
    return acc;
}

template <typename K>
ParahoricIdem<K> parahoric_idem(const Composition& mu, const K& q) {
    K index = poincare_index(mu, q);
    if (is_zero(index))
        throw UnitError("parahoric index is not a unit in the coefficient ring");
    std::size_t n = mu.n();
    HeckeElem<K> e(n, q);
    K inv = ring_one(q) / index;
    for (const auto& w : mu.parabolic_elements())
        e.add_term(BernKey(std::vector<int>(n, 0), w), inv);
    return ParahoricIdem<K>{mu, e, index};
}

// Orbit of the 0/1 weight with i ones at the top of block j under S_mu: all
// 0/1 weights supported in block j with exactly i ones.
inline std::vector<std::vector<int>> block_weight_orbit(const Composition& mu, int i,
                                                        std::size_t j) {
    if (j >= mu.num_blocks()) throw ShapeError("block index out of range");
    if (i < 1 || i > mu.part(j)) throw ShapeError("weight index out of range");
    auto [b, e] = mu.block_range(j);
    int size = e - b;
    std::vector<std::vector<int>> orbit;
    for (int mask = 0; mask < (1 << size); ++mask) {
        if (__builtin_popcount(static_cast<unsigned>(mask)) != i) continue;
        std::vector<int> lam(mu.n(), 0);
        for (int t = 0; t < size; ++t)
            if (mask & (1 << t)) lam[static_cast<std::size_t>(b + t)] = 1;
        orbit.push_back(std::move(lam));
    }
    return orbit;
}

// S_mu-invariant theta element attached to the orbit of lambda: the sum
// q^{N(nu)} theta_nu over the block-wise rearrangements nu of lambda, where
// N(nu) = <lam+ - nu, (n-1, n-2, ..., 0)> and lam+ is the block-wise
// decreasing rearrangement. The exponents are nonnegative integers and the
// dominant representative enters with coefficient 1. These weights are what
// invariance means for the integral theta normalization used here: the
// unweighted sum commutes with the parahoric idempotent only in a
// q^{1/2}-rescaled basis, which this library avoids.
template <typename K>
HeckeElem<K> orbit_theta_sum(const Composition& mu, const std::vector<int>& lambda,
                             const K& q) {
    std::size_t n = mu.n();
    if (lambda.size() != n) throw ShapeError("weight size mismatch");
    std::vector<int> dom = lambda;
    for (std::size_t j = 0; j < mu.num_blocks(); ++j) {
        auto [b, e] = mu.block_range(j);
        std::sort(dom.begin() + b, dom.begin() + e, std::greater<int>());
    }
    std::vector<std::vector<int>> orbit = {dom};
    for (std::size_t j = 0; j < mu.num_blocks(); ++j) {
        auto [b, e] = mu.block_range(j);
        std::vector<std::vector<int>> grown;
        for (const auto& base : orbit) {
            std::vector<int> blk(base.begin() + b, base.begin() + e);
            std::sort(blk.begin(), blk.end());
            do {
                std::vector<int> nu = base;
                std::copy(blk.begin(), blk.end(), nu.begin() + b);
                grown.push_back(std::move(nu));
            } while (std::next_permutation(blk.begin(), blk.end()));
        }
        orbit = std::move(grown);
    }
    HeckeElem<K> z(n, q);
    for (const auto& nu : orbit) {
        long deg = 0;
        for (std::size_t t = 0; t < n; ++t)
            deg += static_cast<long>(dom[t] - nu[t]) * static_cast<long>(n - 1 - t);
        K coeff = ring_one(q);
        for (long t = 0; t < deg; ++t) coeff = coeff * q;
        z.add_term(BernKey(nu, Permutation::identity(n)), coeff);
    }
    return z;
}

// e_P * (invariant orbit sum of the i-th fundamental weight of block j) *
// e_P. Elements built this way commute with each other. On the level-mu
// invariants they have the spectrum of the representative-sum operators of
// the corresponding double cosets divided by the fixed power of q recorded
// in vij_constants.hpp (vij_theta_q_exponent); the operators themselves
// coincide only when that power collapses (offset 0, or q = 1 in K).
template <typename K>
HeckeElem<K> vij_element(const Composition& mu, int i, std::size_t j, const K& q) {
    if (j >= mu.num_blocks()) throw ShapeError("block index out of range");
    auto [b, e] = mu.block_range(j);
    if (i < 1 || i > e - b) throw ShapeError("weight index out of range");
    ParahoricIdem<K> ep = parahoric_idem(mu, q);
    std::vector<int> lam(mu.n(), 0);
    for (int t = 0; t < i; ++t) lam[static_cast<std::size_t>(b + t)] = 1;
    HeckeElem<K> z = orbit_theta_sum(mu, lam, q);
    return ep.e.mul(z).mul(ep.e);
}

} // namespace parahoric
