#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <random>
#include <vector>

#include "parahoric/hecke.hpp"
#include "parahoric/localmodel.hpp"
#include "parahoric/rational.hpp"

using namespace parahoric;

namespace {

LocalMatrix lm(const std::vector<std::vector<long>>& rows, long ell) {
    std::vector<std::vector<Rational>> r;
    for (const auto& row : rows) {
        std::vector<Rational> rr;
        for (long x : row) rr.emplace_back(x);
        r.push_back(std::move(rr));
    }
    return LocalMatrix::from_rows(r, ell);
}

LocalMatrix diag_pow(const std::vector<long>& a, long ell) {
    std::size_t n = a.size();
    Matrix<Rational> m = Matrix<Rational>::identity(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = rat_pow(Rational(ell), a[i]);
    return LocalMatrix(std::move(m), ell);
}

LocalMatrix random_unit_integral(std::mt19937& rng, std::size_t n, long ell) {
    std::uniform_int_distribution<int> d(-9, 9);
    while (true) {
        std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
        for (auto& row : rows)
            for (auto& x : row) x = Rational(d(rng));
        try {
            LocalMatrix g = LocalMatrix::from_rows(rows, ell);
            if (rat_valuation(g.det(), ell) == 0) return g;
        } catch (const UnitError&) {
        }
    }
}

// Arbitrary Iwahori element: unit diagonal, integral above, ell * integral
// below. The block pattern forces the determinant to be a unit.
LocalMatrix random_iwahori(std::mt19937& rng, std::size_t n, long ell) {
    std::uniform_int_distribution<int> d(-6, 6);
    std::uniform_int_distribution<long> u(1, ell - 1);
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                rows[i][j] = Rational(u(rng) + ell * d(rng));
            else if (i < j)
                rows[i][j] = Rational(d(rng));
            else
                rows[i][j] = Rational(ell * d(rng));
        }
    return LocalMatrix::from_rows(rows, ell);
}

LocalMatrix random_upper(std::mt19937& rng, std::size_t n, long ell) {
    std::uniform_int_distribution<int> num(-5, 5), den(1, 3), e(-1, 1);
    std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            int a = num(rng);
            if (i == j && a == 0) a = 1;
            rows[i][j] = rat_frac(a, den(rng)) * rat_pow(Rational(ell), e(rng));
        }
    return LocalMatrix::from_rows(rows, ell);
}

AffElem random_aff(std::mt19937& rng, std::size_t n, int bound) {
    std::uniform_int_distribution<int> d(-bound, bound);
    std::vector<int> lambda(n), img(n);
    for (auto& x : lambda) x = d(rng);
    for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<int>(i);
    std::shuffle(img.begin(), img.end(), rng);
    return AffElem(lambda, Permutation(img));
}

// Independent index oracle: counts the images of the parahoric and of its
// intersection with the conjugated parahoric in GL_n(Z/ell^2) and divides.
// Exact as long as every entry constraint has depth at most 2 and the kernel
// of reduction lies in the intersection, which holds for exponent spread <= 1.
long exhaustive_index_mod_ell2(const std::vector<long>& a, const ParahoricSpec& spec) {
    const long ell = spec.ell;
    const long m2 = ell * ell;
    const std::size_t n = spec.mu.n();
    REQUIRE(a.size() == n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) REQUIRE(a[r] - a[c] <= 1);

    std::vector<long> depth_p(n * n, 0), depth_i(n * n, 0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
            long pat = spec.mu.block_of(static_cast<int>(r)) >
                               spec.mu.block_of(static_cast<int>(c))
                           ? 1
                           : 0;
            depth_p[r * n + c] = pat;
            depth_i[r * n + c] = std::max(pat, pat + a[c] - a[r]);
            REQUIRE(depth_i[r * n + c] <= 2);
        }

    std::vector<Permutation> perms = all_permutations(n);
    std::vector<long> signs;
    for (const auto& w : perms) signs.push_back(w.length() % 2 == 0 ? 1 : -1);

    std::vector<long> g(n * n, 0);
    long count_p = 0, count_i = 0;
    while (true) {
        bool ok_p = true, ok_i = true;
        for (std::size_t t = 0; t < n * n && (ok_p || ok_i); ++t) {
            long v = g[t] == 0 ? 2 : (g[t] % ell == 0 ? 1 : 0);
            if (v < depth_p[t]) ok_p = false;
            if (v < depth_i[t]) ok_i = false;
        }
        if (ok_p) {
            long det = 0;
            for (std::size_t k = 0; k < perms.size(); ++k) {
                long term = signs[k];
                for (std::size_t j = 0; j < n; ++j)
                    term = term * g[static_cast<std::size_t>(perms[k](static_cast<int>(j))) * n + j] % ell;
                det = (det + term) % ell;
            }
            if (det % ell == 0) ok_p = ok_i = false;
        } else {
            ok_i = false;
        }
        if (ok_p) ++count_p;
        if (ok_i) ++count_i;
        std::size_t t = 0;
        while (t < n * n && ++g[t] == m2) g[t++] = 0;
        if (t == n * n) break;
    }
    REQUIRE(count_i > 0);
    REQUIRE(count_p % count_i == 0);
    return count_p / count_i;
}

void check_family(const std::vector<LocalMatrix>& reps, const ParahoricSpec& spec) {
    for (std::size_t i = 0; i < reps.size(); ++i)
        for (std::size_t j = 0; j < reps.size(); ++j)
            if (i != j) REQUIRE(!membership(reps[i].inv().mul(reps[j]), spec));
}

long classify(const std::vector<LocalMatrix>& reps, const LocalMatrix& z,
              const ParahoricSpec& spec) {
    long hits = 0;
    for (const auto& r : reps)
        if (membership(r.inv().mul(z), spec)) ++hits;
    return hits;
}

void compare_with_algebra(const std::map<AffElem, long>& conv, const HeckeT<Rational>& prod) {
    REQUIRE(conv.size() == prod.terms().size());
    for (const auto& [x, c] : conv) {
        auto it = prod.terms().find(x);
        REQUIRE(it != prod.terms().end());
        REQUIRE(it->second == Rational(c));
    }
}

} // namespace

TEST_CASE("local scalars and matrices") {
    LocalScalar x(rat_frac(9, 2), 3);
    REQUIRE(x.valuation() == 2);
    REQUIRE(x.integral());
    REQUIRE(!x.unit());
    LocalScalar y(rat_frac(4, 3), 3);
    REQUIRE(y.valuation() == -1);
    REQUIRE(!y.integral());
    LocalScalar z(Rational(0), 5);
    REQUIRE(z.integral());
    REQUIRE(!z.unit());
    REQUIRE_THROWS_AS(z.valuation(), ShapeError);
    REQUIRE_THROWS_AS(LocalScalar(Rational(1), 4), ValidationError);
    REQUIRE_THROWS_AS(LocalScalar(Rational(1), 1), ValidationError);

    REQUIRE_THROWS_AS(LocalMatrix(Matrix<Rational>(2, 3, Rational(1)), 3), ShapeError);
    REQUIRE_THROWS_AS(lm({{1, 1}, {1, 1}}, 3), UnitError);
    REQUIRE_THROWS_AS(lm({{1, 0}, {0, 1}}, 6), ValidationError);

    LocalMatrix g = lm({{2, 1}, {1, 1}}, 3);
    REQUIRE(g.det() == Rational(1));
    REQUIRE(g.mul(g.inv()) == LocalMatrix::identity(2, 3));
    REQUIRE(g.integral());
    REQUIRE(!g.inv().mul(lm({{1, 0}, {0, 3}}, 3)).inv().integral());
}

TEST_CASE("parahoric membership") {
    ParahoricSpec iw2(Composition({1, 1}), 3);
    ParahoricSpec k2(Composition({2}), 3);
    ParahoricSpec p21(Composition({2, 1}), 5);
    ParahoricSpec deep(Composition({1, 1}), 7, ParahoricLevel::parahoric_1, 3);

    REQUIRE(membership(LocalMatrix::identity(2, 3), iw2));
    REQUIRE(membership(LocalMatrix::identity(2, 3), k2));
    REQUIRE(membership(LocalMatrix::identity(3, 5), p21));
    REQUIRE(membership(LocalMatrix::identity(2, 7), deep));

    // the antidiagonal mixes the Borel lines but stays in the full compact
    REQUIRE(!membership(lm({{0, 1}, {1, 0}}, 3), iw2));
    REQUIRE(membership(lm({{0, 1}, {1, 0}}, 3), k2));

    // non-integral, non-unit determinant, wrong block pattern
    REQUIRE(!membership(LocalMatrix::from_rows({{Rational(1), rat_frac(1, 3)},
                                                {Rational(0), Rational(1)}},
                                               3),
                        k2));
    REQUIRE(!membership(lm({{3, 0}, {0, 1}}, 3), k2));
    REQUIRE(membership(lm({{1, 0, 0}, {2, 1, 0}, {0, 5, 1}}, 5), p21));
    REQUIRE(!membership(lm({{1, 0, 0}, {0, 1, 0}, {1, 0, 1}}, 5), p21));
    REQUIRE(!membership(lm({{1, 0, 0}, {0, 1, 0}, {0, 1, 1}}, 5), p21));

    // determinant-in-the-p-part level: cubes modulo 7 are {1, 6}, tested on
    // the last diagonal block only
    REQUIRE(!membership(lm({{1, 0}, {0, 3}}, 7), deep));
    REQUIRE(membership(lm({{1, 0}, {0, 6}}, 7), deep));
    REQUIRE(!membership(lm({{1, 0}, {0, 2}}, 7), deep));
    REQUIRE(!membership(lm({{3, 0}, {0, 5}}, 7), deep));
    REQUIRE(membership(lm({{3, 0}, {0, 1}}, 7), deep));
    REQUIRE(membership(lm({{3, 1}, {7, 6}}, 7), deep));

    // mod-p determinant data survives the unit and offset parts
    REQUIRE(membership(lm({{1, 0}, {0, 13}}, 7), deep));
    REQUIRE(!membership(lm({{1, 0}, {0, 10}}, 7), deep));

    REQUIRE_THROWS_AS(membership(LocalMatrix::identity(3, 3), iw2), ShapeError);
    REQUIRE_THROWS_AS(membership(LocalMatrix::identity(2, 5), iw2), ShapeError);
    REQUIRE_THROWS_AS(ParahoricSpec(Composition({1, 1}), 5, ParahoricLevel::parahoric_1, 3),
                      ValidationError);
    REQUIRE_THROWS_AS(ParahoricSpec(Composition({1, 1}), 7, ParahoricLevel::parahoric_1, 4),
                      ValidationError);
    REQUIRE(ParahoricSpec(Composition({1, 1}), 7, ParahoricLevel::parahoric_1, 2).p == 2);
    REQUIRE(p_part(7, 3) == 3);
    REQUIRE(p_part(13, 2) == 4);
    REQUIRE(p_part(13, 3) == 3);
}

TEST_CASE("bruhat iwahori decomposition") {
    ParahoricSpec iw2(Composition({1, 1}), 3);
    ParahoricSpec iw3(Composition({1, 1, 1}), 3);

    // pinned small decomposition, all three factors exact
    BruhatIwahori d = bruhat_iwahori(lm({{3, 0}, {1, 1}}, 3));
    REQUIRE(d.b == lm({{-3, 3}, {0, 1}}, 3));
    REQUIRE(d.w == Permutation(std::vector<int>{1, 0}));
    REQUIRE(d.k == lm({{1, 1}, {0, 1}}, 3));

    // upper triangular input decomposes trivially
    LocalMatrix u = LocalMatrix::from_rows(
        {{Rational(2), Rational(5)}, {Rational(0), rat_frac(1, 3)}}, 3);
    BruhatIwahori du = bruhat_iwahori(u);
    REQUIRE(du.b == u);
    REQUIRE(du.w == Permutation::identity(2));
    REQUIRE(du.k == LocalMatrix::identity(2, 3));

    // antidiagonal permutation matrix is its own cell
    BruhatIwahori da = bruhat_iwahori(lm({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}, 3));
    REQUIRE(da.b == LocalMatrix::identity(3, 3));
    REQUIRE(da.w == Permutation(std::vector<int>{2, 1, 0}));
    REQUIRE(da.k == LocalMatrix::identity(3, 3));

    // the cell is detected by valuations, not by leading entries: this one
    // sits over the identity even though its top-left entry vanishes mod ell
    LocalMatrix tricky = LocalMatrix::from_rows(
        {{Rational(3), Rational(1)}, {Rational(1), rat_frac(1, 243)}}, 3);
    REQUIRE(bruhat_iwahori(tricky).w == Permutation::identity(2));

    std::mt19937 rng(101);
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        long ell = trial % 3 == 0 ? 5 : 3;
        LocalMatrix g = random_unit_integral(rng, n, ell);
        BruhatIwahori dec = bruhat_iwahori(g);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) REQUIRE(dec.b.mat().at(i, j) == Rational(0));
        ParahoricSpec iw(Composition(std::vector<int>(n, 1)), ell);
        REQUIRE(membership(dec.k, iw));
        REQUIRE(dec.b.mul(aff_matrix(aff_finite(dec.w), ell)).mul(dec.k) == g);
        ++checked;
    }
    REQUIRE(checked == 500);

    // the permutation is an invariant of the double coset B g Iw
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        LocalMatrix g = random_unit_integral(rng, n, 3);
        LocalMatrix bp = random_upper(rng, n, 3);
        LocalMatrix kp = random_iwahori(rng, n, 3);
        REQUIRE(bruhat_iwahori(bp.mul(g).mul(kp)).w == bruhat_iwahori(g).w);
    }
}

TEST_CASE("affine elements and monomial matrices") {
    std::mt19937 rng(202);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
        AffElem x = random_aff(rng, n, 3);
        AffElem y = random_aff(rng, n, 3);
        REQUIRE(aff_matrix(x, 3).mul(aff_matrix(y, 3)) == aff_matrix(aff_mul(x, y), 3));
        REQUIRE(aff_matrix(aff_inv(x), 3) == aff_matrix(x, 3).inv());
    }
    REQUIRE(aff_matrix(aff_omega(2), 3) == lm({{0, 1}, {3, 0}}, 3));
    REQUIRE(aff_matrix(aff_s0(2), 3) ==
            LocalMatrix::from_rows({{Rational(0), rat_frac(1, 3)}, {Rational(3), Rational(0)}},
                                   3));
}

TEST_CASE("iwahori labels") {
    // monomial matrices label themselves, and the label is constant on
    // Iwahori double cosets
    std::mt19937 rng(303);
    for (int trial = 0; trial < 60; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        long ell = trial % 2 == 0 ? 3 : 5;
        AffElem x = random_aff(rng, n, 3);
        LocalMatrix m = aff_matrix(x, ell);
        REQUIRE(iwahori_label(m) == x);
        LocalMatrix k1 = random_iwahori(rng, n, ell);
        LocalMatrix k2 = random_iwahori(rng, n, ell);
        REQUIRE(iwahori_label(k1.mul(m).mul(k2)) == x);
    }
    REQUIRE(iwahori_label(aff_matrix(aff_s0(2), 3)) == aff_s0(2));
    REQUIRE(iwahori_label(aff_matrix(aff_omega(3), 3)) == aff_omega(3));
}

TEST_CASE("coset enumeration for diagonal matrices") {
    ParahoricSpec iw2(Composition({1, 1}), 3);
    ParahoricSpec k2(Composition({2}), 3);

    // classical corner family at the Iwahori
    std::vector<LocalMatrix> reps = enumerate_cosets(diag_pow({1, 0}, 3), iw2);
    REQUIRE(reps.size() == 3);
    for (long s = 0; s < 3; ++s)
        REQUIRE(std::count(reps.begin(), reps.end(), lm({{3, s}, {0, 1}}, 3)) == 1);
    check_family(reps, iw2);
    REQUIRE(iwahori_coset_index(diag_pow({1, 0}, 3)) == 3);
    REQUIRE(exhaustive_index_mod_ell2({1, 0}, iw2) == 3);

    REQUIRE(enumerate_cosets(LocalMatrix::identity(2, 3), iw2).size() == 1);
    REQUIRE(enumerate_cosets(LocalMatrix::identity(2, 3), k2).size() == 1);

    // maximal compact: one extra coset beyond the corner family
    std::vector<LocalMatrix> kreps = enumerate_cosets(diag_pow({1, 0}, 3), k2);
    REQUIRE(kreps.size() == 4);
    check_family(kreps, k2);
    REQUIRE(exhaustive_index_mod_ell2({1, 0}, k2) == 4);
    for (const auto& r : kreps) {
        REQUIRE(r.integral());
        REQUIRE(rat_valuation(r.det(), 3) == 1);
        bool has_unit = false;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                if (local_val(r.mat().at(i, j), 3) == 0) has_unit = true;
        REQUIRE(has_unit);
    }

    ParahoricSpec iw2e(Composition({1, 1}), 5);
    REQUIRE(enumerate_cosets(diag_pow({1, 0}, 5), iw2e).size() == 5);
    REQUIRE(exhaustive_index_mod_ell2({1, 0}, iw2e) == 5);

    // n = 3: the corner family with residue lifts in the i x (n-i) block
    ParahoricSpec iw3(Composition({1, 1, 1}), 3);
    std::vector<LocalMatrix> reps3 = enumerate_cosets(diag_pow({1, 1, 0}, 3), iw3);
    REQUIRE(reps3.size() == 9);
    for (long s02 = 0; s02 < 3; ++s02)
        for (long s12 = 0; s12 < 3; ++s12)
            REQUIRE(std::count(reps3.begin(), reps3.end(),
                               lm({{3, 0, s02}, {0, 3, s12}, {0, 0, 1}}, 3)) == 1);
    check_family(reps3, iw3);

    ParahoricSpec iw3e(Composition({1, 1, 1}), 2);
    REQUIRE(enumerate_cosets(diag_pow({1, 0, 0}, 2), iw3e).size() == 4);
    REQUIRE(exhaustive_index_mod_ell2({1, 0, 0}, iw3e) == 4);
    REQUIRE(enumerate_cosets(diag_pow({1, 1, 0}, 2), iw3e).size() == 4);
    REQUIRE(exhaustive_index_mod_ell2({1, 1, 0}, iw3e) == 4);

    // deeper exponents certified against the closed index formula
    std::vector<LocalMatrix> deep = enumerate_cosets(diag_pow({2, 1, 0}, 3), iw3);
    REQUIRE(mpz_class(static_cast<long>(deep.size())) ==
            iwahori_coset_index(diag_pow({2, 1, 0}, 3)));
    REQUIRE(deep.size() == 81);
    check_family(deep, iw3);

    // block parahoric via orbit search, certified by the counting oracle
    ParahoricSpec p21(Composition({2, 1}), 2);
    std::vector<LocalMatrix> breps = enumerate_cosets(diag_pow({1, 1, 0}, 2), p21);
    REQUIRE(breps.size() == 4);
    check_family(breps, p21);
    REQUIRE(exhaustive_index_mod_ell2({1, 1, 0}, p21) == 4);

    // coverage: random points of the double coset land in exactly one coset
    std::mt19937 rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        LocalMatrix k1 = random_iwahori(rng, 2, 3);
        LocalMatrix k2m = random_iwahori(rng, 2, 3);
        REQUIRE(classify(reps, k1.mul(diag_pow({1, 0}, 3)).mul(k2m), iw2) == 1);
    }
    std::vector<LocalMatrix> gens = detail::parahoric_generators(k2);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    for (int trial = 0; trial < 20; ++trial) {
        LocalMatrix k1 = LocalMatrix::identity(2, 3);
        LocalMatrix k2m = LocalMatrix::identity(2, 3);
        for (int t = 0; t < 8; ++t) {
            k1 = k1.mul(gens[pick(rng)]);
            k2m = gens[pick(rng)].mul(k2m);
        }
        REQUIRE(membership(k1, k2));
        REQUIRE(membership(k2m, k2));
        REQUIRE(classify(kreps, k1.mul(diag_pow({1, 0}, 3)).mul(k2m), k2) == 1);
    }

    // non dominant exponents are legal at Iwahori level and fall back to the
    // breadth first search; the family still covers Iw m Iw exactly
    std::vector<LocalMatrix> low = enumerate_cosets(diag_pow({0, 1}, 3), iw2);
    REQUIRE(low.size() == 3);
    check_family(low, iw2);
    for (const auto& r : low) {
        AffElem lab = iwahori_label(r);
        REQUIRE(lab == aff_translation({0, 1}));
    }
    // but within a block the exponents must still be non increasing
    ParahoricSpec k2low(Composition({2}), 3);
    REQUIRE_THROWS_AS(enumerate_cosets(diag_pow({0, 1}, 3), k2low), ShapeError);
    REQUIRE_THROWS_AS(enumerate_cosets(lm({{3, 1}, {0, 1}}, 3), iw2), ShapeError);
    REQUIRE_THROWS_AS(enumerate_cosets(lm({{6, 0}, {0, 1}}, 3), iw2), ShapeError);
    REQUIRE_THROWS_AS(enumerate_cosets(LocalMatrix::identity(2, 5), iw2), ShapeError);
}

TEST_CASE("coset enumeration along reduced words") {
    // one generator: the affine family matches the diagonal one
    std::vector<LocalMatrix> s0 = enumerate_cosets_affine(aff_gen(2, 1), 3);
    REQUIRE(s0.size() == 3);
    for (long t = 0; t < 3; ++t)
        REQUIRE(std::count(s0.begin(), s0.end(), lm({{t, 1}, {1, 0}}, 3)) == 1);

    std::vector<LocalMatrix> a0 = enumerate_cosets_affine(aff_gen(2, 0), 3);
    REQUIRE(a0.size() == 3);
    for (long t = 0; t < 3; ++t)
        REQUIRE(std::count(a0.begin(), a0.end(),
                           LocalMatrix::from_rows(
                               {{Rational(0), rat_frac(1, 3)}, {Rational(3), Rational(t)}}, 3)) ==
                1);

    ParahoricSpec iw2(Composition({1, 1}), 3);
    std::mt19937 rng(505);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t n = 2 + static_cast<std::size_t>(trial % 2);
        AffElem x = random_aff(rng, n, 2);
        if (aff_length(x) > 3) continue;
        std::vector<LocalMatrix> reps = enumerate_cosets_affine(x, 3);
        long expect = 1;
        for (std::size_t t = 0; t < aff_length(x); ++t) expect *= 3;
        REQUIRE(static_cast<long>(reps.size()) == expect);
        ParahoricSpec iw(Composition(std::vector<int>(n, 1)), 3);
        check_family(reps, iw);
        for (const auto& r : reps) REQUIRE(iwahori_label(r) == x);
    }

    // dominant translations at Iwahori level agree with the diagonal family
    std::vector<LocalMatrix> d1 = enumerate_cosets_affine(aff_translation({1, 0}), 3);
    std::vector<LocalMatrix> d2 = enumerate_cosets(diag_pow({1, 0}, 3), iw2);
    REQUIRE(d1.size() == d2.size());
    for (const auto& r : d2) REQUIRE(classify(d1, r, iw2) == 1);
}

TEST_CASE("convolution oracle") {
    ParahoricSpec iw2(Composition({1, 1}), 3);
    const Rational q(3);
    Permutation s(std::vector<int>{1, 0});

    // quadratic relation of the generator, the product that fixes the
    // normalization of the whole algebra
    std::vector<LocalMatrix> cs = enumerate_cosets_affine(aff_finite(s), 3);
    std::map<AffElem, long> sq = convolve_indicators(cs, cs, iw2);
    REQUIRE(sq.size() == 2);
    REQUIRE(sq.at(aff_finite(s)) == 2);
    REQUIRE(sq.at(aff_identity(2)) == 3);

    // identity element
    std::vector<LocalMatrix> ce = enumerate_cosets_affine(aff_identity(2), 3);
    AffElem x0({1, -1}, s);
    std::vector<LocalMatrix> cx = enumerate_cosets_affine(x0, 3);
    std::map<AffElem, long> idp = convolve_indicators(ce, cx, iw2);
    REQUIRE(idp.size() == 1);
    REQUIRE(idp.at(x0) == 1);

    // dominant translations multiply without spreading out
    std::vector<LocalMatrix> t10 = enumerate_cosets_affine(aff_translation({1, 0}), 3);
    std::vector<LocalMatrix> t11 = enumerate_cosets_affine(aff_translation({1, 1}), 3);
    std::map<AffElem, long> tt = convolve_indicators(t10, t11, iw2);
    REQUIRE(tt.size() == 1);
    REQUIRE(tt.at(aff_translation({2, 1})) == 1);
    std::map<AffElem, long> t2 = convolve_indicators(t10, t10, iw2);
    REQUIRE(t2.size() == 1);
    REQUIRE(t2.at(aff_translation({2, 0})) == 1);

    // generator times dominant translation: the length drop produces the
    // rotation with multiplicity q
    std::map<AffElem, long> st = convolve_indicators(cs, t10, iw2);
    REQUIRE(st.size() == 2);
    REQUIRE(st.at(aff_translation({1, 0})) == 2);
    REQUIRE(st.at(aff_omega(2)) == 3);
    compare_with_algebra(st, HeckeT<Rational>::basis(aff_finite(s), q)
                                 .mul(HeckeT<Rational>::basis(aff_translation({1, 0}), q)));

    // random products against the rewriting engine at q = ell
    std::mt19937 rng(606);
    int done = 0;
    while (done < 12) {
        AffElem x = random_aff(rng, 2, 2);
        AffElem y = random_aff(rng, 2, 2);
        if (aff_length(x) + aff_length(y) > 4) continue;
        std::map<AffElem, long> conv = convolve_indicators(enumerate_cosets_affine(x, 3),
                                                           enumerate_cosets_affine(y, 3), iw2);
        compare_with_algebra(conv, HeckeT<Rational>::basis(x, q).mul(HeckeT<Rational>::basis(y, q)));
        ++done;
    }

    // a noncommuting pair in rank two
    ParahoricSpec iw3(Composition({1, 1, 1}), 3);
    std::vector<LocalMatrix> c1 = enumerate_cosets_affine(aff_gen(3, 1), 3);
    std::vector<LocalMatrix> c2 = enumerate_cosets_affine(aff_gen(3, 2), 3);
    std::map<AffElem, long> c12 = convolve_indicators(c1, c2, iw3);
    REQUIRE(c12.size() == 1);
    REQUIRE(c12.at(aff_mul(aff_gen(3, 1), aff_gen(3, 2))) == 1);
    compare_with_algebra(c12, HeckeT<Rational>::basis(aff_gen(3, 1), q)
                                  .mul(HeckeT<Rational>::basis(aff_gen(3, 2), q)));

    // spherical level: the classical quadratic relation of the radial
    // generator, with the central coset entering with multiplicity q + 1
    ParahoricSpec k2(Composition({2}), 3);
    std::vector<LocalMatrix> kt = enumerate_cosets(diag_pow({1, 0}, 3), k2);
    std::map<AffElem, long> ksq = convolve_indicators(kt, kt, k2);
    REQUIRE(ksq.size() == 2);
    REQUIRE(ksq.at(aff_translation({0, 2})) == 1);
    REQUIRE(ksq.at(aff_translation({1, 1})) == 4);

    REQUIRE_THROWS_AS(convolve_indicators({}, kt, k2), ShapeError);
}
