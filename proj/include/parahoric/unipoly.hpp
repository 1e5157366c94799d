#pragma once

#include <string>
#include <utility>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/matrix.hpp"

namespace parahoric {

// Univariate polynomial in T over an exact coefficient ring C. Coefficients
// are stored from degree 0 upward with trailing zeros trimmed, so the zero
// polynomial has no stored coefficients (degree -1).
template <typename C>
class UniPoly {
public:
    explicit UniPoly(const C& exemplar) : zero_(ring_zero(exemplar)) {}

    static UniPoly from_coeffs(std::vector<C> coeffs, const C& exemplar) {
        UniPoly p(exemplar);
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }
    static UniPoly constant(const C& c) {
        UniPoly p(c);
        p.c_.push_back(c);
        p.trim();
        return p;
    }
    static UniPoly monomial(const C& c, std::size_t deg) {
        UniPoly p(c);
        p.c_.assign(deg + 1, ring_zero(c));
        p.c_[deg] = c;
        p.trim();
        return p;
    }
    // prod (T - r_i)
    static UniPoly from_roots(const std::vector<C>& roots, const C& exemplar) {
        UniPoly p = constant(ring_one(exemplar));
        for (const C& r : roots) {
            UniPoly lin(exemplar);
            lin.c_ = {-r, ring_one(exemplar)};
            p = p * lin;
        }
        return p;
    }

    long degree() const { return static_cast<long>(c_.size()) - 1; }
    bool is_zero_poly() const { return c_.empty(); }
    const C& zero_coeff() const { return zero_; }
    C at(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
    const std::vector<C>& coeffs() const { return c_; }
    C leading() const {
        if (c_.empty()) throw ShapeError("leading coefficient of zero polynomial");
        return c_.back();
    }
    bool is_monic() const {
        return !c_.empty() && c_.back() == ring_one(zero_);
    }

    UniPoly operator+(const UniPoly& o) const {
        std::vector<C> r;
        std::size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.push_back(at(i) + o.at(i));
        return from_coeffs(std::move(r), zero_);
    }
    UniPoly operator-(const UniPoly& o) const {
        std::vector<C> r;
        std::size_t n = std::max(c_.size(), o.c_.size());
        r.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.push_back(at(i) - o.at(i));
        return from_coeffs(std::move(r), zero_);
    }
    UniPoly operator-() const {
        std::vector<C> r;
        r.reserve(c_.size());
        for (const C& x : c_) r.push_back(-x);
        return from_coeffs(std::move(r), zero_);
    }
    UniPoly operator*(const UniPoly& o) const {
        if (c_.empty() || o.c_.empty()) return UniPoly(zero_);
        std::vector<C> r(c_.size() + o.c_.size() - 1, zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (detail::coeff_is_zero(c_[i])) continue;
            for (std::size_t j = 0; j < o.c_.size(); ++j)
                r[i + j] = r[i + j] + c_[i] * o.c_[j];
        }
        return from_coeffs(std::move(r), zero_);
    }
    UniPoly scaled(const C& k) const {
        std::vector<C> r;
        r.reserve(c_.size());
        for (const C& x : c_) r.push_back(x * k);
        return from_coeffs(std::move(r), zero_);
    }
    UniPoly pow(long e) const {
        if (e < 0) throw ShapeError("negative polynomial power");
        UniPoly acc = constant(ring_one(zero_)), base = *this;
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    bool operator==(const UniPoly& o) const { return c_ == o.c_; }
    bool operator!=(const UniPoly& o) const { return !(*this == o); }

    C evaluate(const C& x) const {
        C acc = zero_;
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
        return acc;
    }

    // P(aT): multiplies coefficient i by a^i.
    UniPoly scale_argument(const C& a) const {
        std::vector<C> r;
        r.reserve(c_.size());
        C p = ring_one(zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            r.push_back(c_[i] * p);
            p = p * a;
        }
        return from_coeffs(std::move(r), zero_);
    }

    // X^n * P(1/X) for n >= deg P: coefficient list reversed inside degree n.
    UniPoly reversed(std::size_t n) const {
        if (static_cast<long>(n) < degree()) throw ShapeError("reversal degree too small");
        std::vector<C> r(n + 1, zero_);
        for (std::size_t i = 0; i < c_.size(); ++i) r[n - i] = c_[i];
        return from_coeffs(std::move(r), zero_);
    }

    // Euclidean division (field coefficients): returns (quotient, remainder).
    std::pair<UniPoly, UniPoly> divmod(const UniPoly& d) const {
        if (d.is_zero_poly()) throw UnitError("polynomial division by zero");
        UniPoly q(zero_), r = *this;
        C lead_inv = ring_one(zero_) / d.leading();
        while (!r.is_zero_poly() && r.degree() >= d.degree()) {
            std::size_t shift = static_cast<std::size_t>(r.degree() - d.degree());
            C f = r.leading() * lead_inv;
            UniPoly t = monomial(f, shift);
            q = q + t;
            r = r - t * d;
        }
        return {q, r};
    }

    std::string str() const {
        if (c_.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!s.empty()) s += " + ";
            s += "(" + scalar_str(c_[i]) + ")*T^" + std::to_string(i);
        }
        return s;
    }

private:
    void trim() {
        while (!c_.empty() && detail::coeff_is_zero(c_.back())) c_.pop_back();
    }
    C zero_;
    std::vector<C> c_;
};

// Horner evaluation of P at a square matrix.
template <typename C>
Matrix<C> substitute_matrix(const UniPoly<C>& p, const Matrix<C>& m) {
    if (m.rows() != m.cols()) throw ShapeError("polynomial of non-square matrix");
    Matrix<C> acc(m.rows(), m.cols(), m.zero());
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        acc = acc * m;
        for (std::size_t d = 0; d < m.rows(); ++d)
            acc.at(d, d) = acc.at(d, d) + p.coeffs()[i];
    }
    return acc;
}

// Monic characteristic polynomial det(T*I - A) by the trace recursion. Each
// step divides by 1..n, so the coefficient field must have characteristic 0
// or larger than the matrix dimension (UnitError otherwise).
template <typename C>
UniPoly<C> char_poly(const Matrix<C>& a) {
    if (a.rows() != a.cols()) throw ShapeError("characteristic polynomial of non-square matrix");
    const std::size_t n = a.rows();
    const C zero = a.zero();
    const C one = ring_one(zero);
    std::vector<C> coeff(n + 1, zero);
    coeff[n] = one;
    if (n == 0) return UniPoly<C>::from_coeffs(coeff, zero);
    Matrix<C> m = Matrix<C>::identity(n, zero);
    for (std::size_t k = 1; k <= n; ++k) {
        Matrix<C> am = a * m;
        C tr = zero;
        for (std::size_t i = 0; i < n; ++i) tr = tr + am.at(i, i);
        C ck = -(tr / scalar_from_int(zero, static_cast<long>(k)));
        coeff[n - k] = ck;
        if (k < n) {
            m = am;
            for (std::size_t i = 0; i < n; ++i) m.at(i, i) = m.at(i, i) + ck;
        }
    }
    return UniPoly<C>::from_coeffs(coeff, zero);
}

// Sylvester-matrix resultant without monicity restrictions. Determinant is
// computed fraction-free so polynomial coefficient rings are fine. Sign and
// scaling follow the classical convention
//   res(P, Q) = lc(P)^deg(Q) * lc(Q)^deg(P) * prod (alpha_i - beta_j).
template <typename C>
C resultant_general(const UniPoly<C>& p, const UniPoly<C>& q) {
    if (p.is_zero_poly() || q.is_zero_poly())
        throw ShapeError("resultant of zero polynomial");
    long m = p.degree(), n = q.degree();
    const C one = ring_one(p.zero_coeff());
    if (m == 0 && n == 0) return one;
    if (m == 0) {
        C acc = one;
        for (long i = 0; i < n; ++i) acc = acc * p.at(0);
        return acc;
    }
    if (n == 0) {
        C acc = one;
        for (long i = 0; i < m; ++i) acc = acc * q.at(0);
        return acc;
    }
    std::size_t size = static_cast<std::size_t>(m + n);
    Matrix<C> s(size, size, p.zero_coeff());
    for (long r = 0; r < n; ++r)
        for (long j = 0; j <= m; ++j)
            s.at(r, r + j) = p.at(static_cast<std::size_t>(m - j));
    for (long r = 0; r < m; ++r)
        for (long j = 0; j <= n; ++j)
            s.at(n + r, r + j) = q.at(static_cast<std::size_t>(n - j));
    return s.det();
}

// Resultant of monic polynomials; the monicity requirement is part of the
// calling convention and its violation reports ConventionError.
template <typename C>
C resultant(const UniPoly<C>& p, const UniPoly<C>& q) {
    if (!p.is_monic() || !q.is_monic())
        throw ConventionError("resultant requires monic inputs");
    return resultant_general(p, q);
}

// Given pairwise coprime monic polynomials P_1..P_r with deg P_i = m_i and
// N = sum m_i, returns the unique (Q_1..Q_r, R) with deg Q_i < m_i,
//   sum_i Q_i * prod_{j != i} P_j = R,   R = prod_{i<j} res(P_i, P_j).
// The coefficients of the Q_i solve an N x N linear system over C; it is
// solved by Cramer's rule with fraction-free determinants, and each division
// is exact because the polynomial solution exists and is unique.
template <typename C>
std::pair<std::vector<UniPoly<C>>, C> bezout_cofactors(const std::vector<UniPoly<C>>& ps) {
    if (ps.empty()) throw ShapeError("empty factor list");
    const C one = ring_one(ps[0].zero_coeff());
    C res = one;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!ps[i].is_monic()) throw ConventionError("factors must be monic");
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            res = res * resultant_general(ps[i], ps[j]);
    }
    std::size_t n = 0;
    for (const auto& p : ps) n += static_cast<std::size_t>(p.degree());
    if (ps.size() == 1) {
        // Single block: the identity reads Q_1 * 1 = 1.
        std::vector<UniPoly<C>> qs{UniPoly<C>::constant(one)};
        return {qs, res};
    }

    std::vector<UniPoly<C>> cof;  // G_i = prod_{j != i} P_j
    cof.reserve(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) {
        UniPoly<C> g = UniPoly<C>::constant(one);
        for (std::size_t j = 0; j < ps.size(); ++j)
            if (j != i) g = g * ps[j];
        cof.push_back(g);
    }

    // Column layout: coefficients of Q_1 (low degree first), then Q_2, ...
    Matrix<C> m(n, n, ps[0].zero_coeff());
    std::size_t col = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (long a = 0; a < ps[i].degree(); ++a, ++col)
            for (std::size_t row = 0; row < n; ++row) {
                long b = static_cast<long>(row) - a;
                if (b >= 0 && b <= cof[i].degree())
                    m.at(row, col) = cof[i].at(static_cast<std::size_t>(b));
            }
    }
    C det = m.det();
    if (detail::coeff_is_zero(det)) throw InternalError("singular cofactor system");

    std::vector<C> sol;
    sol.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Matrix<C> mk = m;
        for (std::size_t row = 0; row < n; ++row)
            mk.at(row, k) = row == 0 ? res : ring_zero(res);
        sol.push_back(divexact(mk.det(), det));
    }

    std::vector<UniPoly<C>> qs;
    qs.reserve(ps.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::vector<C> coeffs;
        for (long a = 0; a < ps[i].degree(); ++a) coeffs.push_back(sol[pos++]);
        qs.push_back(UniPoly<C>::from_coeffs(std::move(coeffs), ps[0].zero_coeff()));
    }

    // The defining identity is cheap to re-check and guards every caller.
    UniPoly<C> acc(ps[0].zero_coeff());
    for (std::size_t i = 0; i < ps.size(); ++i) acc = acc + qs[i] * cof[i];
    if (acc != UniPoly<C>::constant(res)) throw InternalError("cofactor identity failed");
    return {qs, res};
}

} // namespace parahoric
