#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "parahoric/errors.hpp"
#include "parahoric/rational.hpp"

namespace parahoric {

// Scalar rings with a runtime modulus. Every value carries its ring
// parameters; mixing values from different rings throws ShapeError. The
// generic containers (Matrix, polynomials) never default-construct scalars,
// they derive zeros and ones from an exemplar via ring_zero / ring_one.

// Prime field F_p, elements stored as canonical representatives in [0, p).
class Fp {
public:
    Fp(std::int64_t value, std::int64_t p) : p_(p) {
        if (p < 2) throw ShapeError("field characteristic must be >= 2");
        v_ = ((value % p) + p) % p;
    }

    std::int64_t value() const { return v_; }
    std::int64_t modulus() const { return p_; }
    bool is_zero() const { return v_ == 0; }

    Fp operator+(const Fp& o) const { same(o); return Fp(v_ + o.v_, p_); }
    Fp operator-(const Fp& o) const { same(o); return Fp(v_ - o.v_, p_); }
    Fp operator-() const { return Fp(-v_, p_); }
    Fp operator*(const Fp& o) const {
        same(o);
        return Fp(static_cast<std::int64_t>(static_cast<__int128>(v_) * o.v_ % p_), p_);
    }
    Fp inverse() const {
        if (v_ == 0) throw UnitError("inverse of zero in F_" + std::to_string(p_));
        return Fp(mod_inv_i64(v_, p_), p_);
    }
    Fp operator/(const Fp& o) const { return *this * o.inverse(); }
    Fp pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        return Fp(mod_pow_i64(v_, e, p_), p_);
    }

    bool operator==(const Fp& o) const { same(o); return v_ == o.v_; }
    bool operator!=(const Fp& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }

private:
    void same(const Fp& o) const {
        if (p_ != o.p_) throw ShapeError("mixed field characteristics");
    }
    std::int64_t v_;
    std::int64_t p_;
};

// Z / p^k, a local ring with maximal ideal (p). Used as a lifting target;
// only units are invertible.
class Zpk {
public:
    Zpk(std::int64_t value, std::int64_t p, int k) : p_(p), k_(k) {
        if (p < 2 || k < 1) throw ShapeError("invalid Z/p^k parameters");
        pk_ = 1;
        for (int i = 0; i < k; ++i) {
            if (pk_ > (std::int64_t(1) << 60) / p) throw LimitError("p^k too large");
            pk_ *= p;
        }
        v_ = ((value % pk_) + pk_) % pk_;
    }

    std::int64_t value() const { return v_; }
    std::int64_t p() const { return p_; }
    int k() const { return k_; }
    std::int64_t modulus() const { return pk_; }
    bool is_zero() const { return v_ == 0; }
    bool is_unit() const { return v_ % p_ != 0; }

    Zpk operator+(const Zpk& o) const { same(o); return with(v_ + o.v_); }
    Zpk operator-(const Zpk& o) const { same(o); return with(v_ - o.v_); }
    Zpk operator-() const { return with(-v_); }
    Zpk operator*(const Zpk& o) const {
        same(o);
        return with(static_cast<std::int64_t>(static_cast<__int128>(v_) * o.v_ % pk_));
    }
    Zpk inverse() const {
        if (!is_unit()) throw UnitError("non-unit in Z/p^k");
        return with(mod_inv_i64(v_, pk_));
    }
    Zpk operator/(const Zpk& o) const { return *this * o.inverse(); }

    // Generator of the maximal ideal.
    Zpk uniformizer() const { return with(p_); }
    // Reduction to the residue field R/(p) = F_p.
    Fp residue() const { return Fp(v_, p_); }
    // Canonical lift of a residue-field element.
    Zpk lift(const Fp& r) const {
        if (r.modulus() != p_) throw ShapeError("residue characteristic mismatch");
        return with(r.value());
    }

    bool operator==(const Zpk& o) const { same(o); return v_ == o.v_; }
    bool operator!=(const Zpk& o) const { return !(*this == o); }

    std::string str() const { return std::to_string(v_); }

private:
    void same(const Zpk& o) const {
        if (p_ != o.p_ || k_ != o.k_) throw ShapeError("mixed Z/p^k parameters");
    }
    Zpk with(std::int64_t raw) const {
        Zpk r = *this;
        r.v_ = ((raw % pk_) + pk_) % pk_;
        return r;
    }
    std::int64_t v_;
    std::int64_t p_;
    int k_;
    std::int64_t pk_;
};

// F_p[t] / (t^k), the equal-characteristic analogue of Z/p^k. Coefficients
// are stored from degree 0 upward, always exactly k of them.
class Fptk {
public:
    Fptk(std::vector<std::int64_t> coeffs, std::int64_t p, int k) : p_(p), k_(k) {
        if (p < 2 || k < 1) throw ShapeError("invalid F_p[t]/t^k parameters");
        coeffs.resize(k, 0);
        c_.reserve(k);
        for (int i = 0; i < k; ++i) c_.push_back(((coeffs[i] % p) + p) % p);
    }
    static Fptk constant(std::int64_t value, std::int64_t p, int k) {
        return Fptk(std::vector<std::int64_t>{value}, p, k);
    }

    const std::vector<std::int64_t>& coeffs() const { return c_; }
    std::int64_t p() const { return p_; }
    int k() const { return k_; }
    bool is_zero() const {
        for (auto c : c_) if (c != 0) return false;
        return true;
    }
    bool is_unit() const { return c_[0] != 0; }

    Fptk operator+(const Fptk& o) const {
        same(o);
        std::vector<std::int64_t> r(c_);
        for (int i = 0; i < k_; ++i) r[i] = (r[i] + o.c_[i]) % p_;
        return Fptk(std::move(r), p_, k_);
    }
    Fptk operator-(const Fptk& o) const {
        same(o);
        std::vector<std::int64_t> r(c_);
        for (int i = 0; i < k_; ++i) r[i] = ((r[i] - o.c_[i]) % p_ + p_) % p_;
        return Fptk(std::move(r), p_, k_);
    }
    Fptk operator-() const {
        std::vector<std::int64_t> r(c_);
        for (auto& x : r) x = (p_ - x) % p_;
        return Fptk(std::move(r), p_, k_);
    }
    Fptk operator*(const Fptk& o) const {
        same(o);
        std::vector<std::int64_t> r(k_, 0);
        for (int i = 0; i < k_; ++i) {
            if (c_[i] == 0) continue;
            for (int j = 0; i + j < k_; ++j)
                r[i + j] = (r[i + j] + c_[i] * o.c_[j]) % p_;
        }
        return Fptk(std::move(r), p_, k_);
    }
    Fptk inverse() const {
        if (!is_unit()) throw UnitError("non-unit in F_p[t]/t^k");
        // Graded Newton step: solve (sum a_i t^i)(sum b_j t^j) = 1 degree by
        // degree.
        std::vector<std::int64_t> b(k_, 0);
        b[0] = mod_inv_i64(c_[0], p_);
        for (int d = 1; d < k_; ++d) {
            std::int64_t acc = 0;
            for (int i = 1; i <= d; ++i) acc = (acc + c_[i] * b[d - i]) % p_;
            b[d] = (p_ - acc * b[0] % p_) % p_;
        }
        return Fptk(std::move(b), p_, k_);
    }
    Fptk operator/(const Fptk& o) const { return *this * o.inverse(); }

    Fptk uniformizer() const {
        std::vector<std::int64_t> t(k_, 0);
        if (k_ > 1) t[1] = 1;  // for k = 1 the ideal is (0)
        return Fptk(std::move(t), p_, k_);
    }
    Fp residue() const { return Fp(c_[0], p_); }
    Fptk lift(const Fp& r) const {
        if (r.modulus() != p_) throw ShapeError("residue characteristic mismatch");
        return constant(r.value(), p_, k_);
    }

    bool operator==(const Fptk& o) const { same(o); return c_ == o.c_; }
    bool operator!=(const Fptk& o) const { return !(*this == o); }

    std::string str() const {
        std::string s = "[";
        for (int i = 0; i < k_; ++i) s += (i ? "," : "") + std::to_string(c_[i]);
        return s + "]";
    }

private:
    void same(const Fptk& o) const {
        if (p_ != o.p_ || k_ != o.k_) throw ShapeError("mixed F_p[t]/t^k parameters");
    }
    std::vector<std::int64_t> c_;
    std::int64_t p_;
    int k_;
};

// Quadratic field extension F_p[u] / (u^2 - d) with d a non-residue mod p,
// elements a + b*u. Supplies fields of square order when the prime field
// has too few units, e.g. nine elements for characteristic-3 runs.
class Fp2 {
public:
    Fp2(std::int64_t a, std::int64_t b, std::int64_t p, std::int64_t d) : p_(p) {
        if (p < 3) throw ShapeError("quadratic extension needs an odd prime");
        d_ = ((d % p) + p) % p;
        if (mod_pow_i64(d_, (p - 1) / 2, p) != p - 1)
            throw ShapeError("extension constant must be a non-residue");
        a_ = ((a % p) + p) % p;
        b_ = ((b % p) + p) % p;
    }
    static Fp2 scalar(std::int64_t a, std::int64_t p, std::int64_t d) { return Fp2(a, 0, p, d); }
    static Fp2 gen(std::int64_t p, std::int64_t d) { return Fp2(0, 1, p, d); }

    std::int64_t a() const { return a_; }
    std::int64_t b() const { return b_; }
    std::int64_t modulus() const { return p_; }
    std::int64_t dconst() const { return d_; }
    bool is_zero() const { return a_ == 0 && b_ == 0; }

    Fp2 operator+(const Fp2& o) const { same(o); return Fp2(a_ + o.a_, b_ + o.b_, p_, d_); }
    Fp2 operator-(const Fp2& o) const { same(o); return Fp2(a_ - o.a_, b_ - o.b_, p_, d_); }
    Fp2 operator-() const { return Fp2(-a_, -b_, p_, d_); }
    Fp2 operator*(const Fp2& o) const {
        same(o);
        auto m = [this](std::int64_t x, std::int64_t y) {
            return static_cast<std::int64_t>(static_cast<__int128>(x) * y % p_);
        };
        return Fp2(m(a_, o.a_) + m(m(b_, o.b_), d_), m(a_, o.b_) + m(b_, o.a_), p_, d_);
    }
    Fp2 inverse() const {
        if (is_zero()) throw UnitError("inverse of zero in F_" + std::to_string(p_) + "^2");
        auto m = [this](std::int64_t x, std::int64_t y) {
            return static_cast<std::int64_t>(static_cast<__int128>(x) * y % p_);
        };
        std::int64_t nrm = ((m(a_, a_) - m(m(b_, b_), d_)) % p_ + p_) % p_;
        std::int64_t ni = mod_inv_i64(nrm, p_);
        return Fp2(m(a_, ni), m(p_ - b_, ni), p_, d_);
    }
    Fp2 operator/(const Fp2& o) const { return *this * o.inverse(); }
    Fp2 pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        Fp2 r = Fp2(1, 0, p_, d_), base = *this;
        for (; e > 0; e >>= 1) {
            if (e & 1) r = r * base;
            base = base * base;
        }
        return r;
    }

    bool operator==(const Fp2& o) const { same(o); return a_ == o.a_ && b_ == o.b_; }
    bool operator!=(const Fp2& o) const { return !(*this == o); }

    std::string str() const {
        if (b_ == 0) return std::to_string(a_);
        return std::to_string(a_) + "+" + std::to_string(b_) + "u";
    }

private:
    void same(const Fp2& o) const {
        if (p_ != o.p_ || d_ != o.d_) throw ShapeError("mixed quadratic extension parameters");
    }
    std::int64_t a_;
    std::int64_t b_;
    std::int64_t p_;
    std::int64_t d_;
};

// --- generic ring customization points -----------------------------------

inline Fp ring_zero(const Fp& x) { return Fp(0, x.modulus()); }
inline Fp ring_one(const Fp& x) { return Fp(1, x.modulus()); }
inline bool is_zero(const Fp& x) { return x.is_zero(); }
inline std::string scalar_str(const Fp& x) { return x.str(); }
inline Fp scalar_from_int(const Fp& x, long v) { return Fp(v, x.modulus()); }

inline Zpk ring_zero(const Zpk& x) { return Zpk(0, x.p(), x.k()); }
inline Zpk ring_one(const Zpk& x) { return Zpk(1, x.p(), x.k()); }
inline bool is_zero(const Zpk& x) { return x.is_zero(); }
inline std::string scalar_str(const Zpk& x) { return x.str(); }
inline Zpk scalar_from_int(const Zpk& x, long v) { return Zpk(v, x.p(), x.k()); }

inline Fptk ring_zero(const Fptk& x) { return Fptk::constant(0, x.p(), x.k()); }
inline Fptk ring_one(const Fptk& x) { return Fptk::constant(1, x.p(), x.k()); }
inline bool is_zero(const Fptk& x) { return x.is_zero(); }
inline std::string scalar_str(const Fptk& x) { return x.str(); }
inline Fptk scalar_from_int(const Fptk& x, long v) { return Fptk::constant(v, x.p(), x.k()); }

inline Fp2 ring_zero(const Fp2& x) { return Fp2(0, 0, x.modulus(), x.dconst()); }
inline Fp2 ring_one(const Fp2& x) { return Fp2(1, 0, x.modulus(), x.dconst()); }
inline bool is_zero(const Fp2& x) { return x.is_zero(); }
inline std::string scalar_str(const Fp2& x) { return x.str(); }
inline Fp2 scalar_from_int(const Fp2& x, long v) { return Fp2(v, 0, x.modulus(), x.dconst()); }

// Exact division for field-like scalars; polynomial coefficient rings
// override this with a term-cancellation algorithm.
inline Fp divexact(const Fp& a, const Fp& b) { return a / b; }
inline Fp2 divexact(const Fp2& a, const Fp2& b) { return a / b; }

} // namespace parahoric
