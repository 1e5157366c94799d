#pragma once

#include <cstddef>

#include "parahoric/errors.hpp"
#include "parahoric/weyl.hpp"

// Normalization bookkeeping for the block operators attached to the double
// cosets of diag(1, ..., 1, p, ..., p, 1, ..., 1) with i uniformizer entries
// at the start of block j. Three realizations of the same double coset are
// in play and they differ by fixed scalars:
//
// 1. The representative-sum operator: each invariant vector is summed over
//    right representatives of [parahoric m parahoric] / parahoric. This is
//    the parahoric-volume-1 convolution, and on the full Iwahori-invariant
//    space it is (1 / poincare_index(mu, q)) times the sum over the Iwahori
//    cells of the double coset (each right parahoric coset splits into
//    poincare_index Iwahori cosets). In the normalized model it acts on
//    each unramified component by the elementary symmetric polynomial e_i
//    of the block-j character values times sqrt(q) raised to
//
//        vij_sqrtq_exponent(mu, i, j) = i * (n - i),
//
//    the pairing of positive roots with the sorted-dominant coweight; the
//    block position drops out. In the unnormalized model over F_p with
//    q = 1 mod p every q-power is 1 and the eigenvalues are plain e_i.
//
// 2. The bare cell sum (vij_t_element in pseries.hpp): integral, defined on
//    the full Iwahori-invariant space, equal to poincare_index(mu, q) times
//    realization 1.
//
// 3. The compressed weighted orbit sum in the Bernstein presentation
//    (hecke.hpp, vij_element). Its spectrum on each unramified component is
//    that of realization 1 divided by
//
//        q^vij_theta_q_exponent(mu, i, j),   vij_theta_q_exponent = i * offset_j,
//
//    where offset_j counts the slots before block j; equivalently the orbit
//    sum carries the half-sum pairing i * (n - 2*offset_j - i) in place of
//    the dominant one. This is a spectral relation only: for offset_j > 0
//    the two matrices differ, and the realization-1 operators of different
//    blocks need not commute with each other, while the orbit sums always
//    do. The two realizations become the same operator scheme when q = 1 in
//    the coefficient field, which collapses every q-power above.
//
// The eigenvalue tests measure all three realizations on every composition
// with n <= 3 and fail on any deviation from these tables; the joint
// eigenspace decomposition is taken with respect to the orbit sums.

namespace parahoric {

inline long vij_sqrtq_exponent(const Composition& mu, long i, std::size_t j) {
    auto [b, e] = mu.block_range(j);
    if (i < 1 || i > e - b) throw ShapeError("elementary symmetric degree out of range");
    long n = static_cast<long>(mu.n());
    return i * (n - i);
}

inline long vij_theta_q_exponent(const Composition& mu, long i, std::size_t j) {
    auto [b, e] = mu.block_range(j);
    if (i < 1 || i > e - b) throw ShapeError("elementary symmetric degree out of range");
    return i * static_cast<long>(b);
}

// sqrt(q) power of the Bernstein-side orbit sum: the half-sum pairing of the
// block coweight, i.e. the dominant pairing minus twice the integer offset
// power above.
inline long vij_theta_sqrtq_exponent(const Composition& mu, long i, std::size_t j) {
    return vij_sqrtq_exponent(mu, i, j) - 2 * vij_theta_q_exponent(mu, i, j);
}

} // namespace parahoric
