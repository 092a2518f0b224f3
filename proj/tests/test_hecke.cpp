#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "siegel/form_factory.hpp"
#include "siegel/hecke.hpp"

using namespace siegel;

namespace {

i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

Mat4 mul(const Mat4& x, const Mat4& y) {
    Mat4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int k = 0; k < 4; ++k) r[i][j] += x[i][k] * y[k][j];
    return r;
}

bool close(cplx x, cplx y, double tol = 1e-9) { return std::abs(x - y) <= tol * std::max(1.0, std::abs(x)); }

}  // namespace

TEST_CASE("coset representatives") {
    for (i64 p : {2, 3, 5}) {
        auto tp = coset_reps(HeckeKind::Tp, p);
        CHECK(tp.cosets.size() == std::size_t((1 + p) * (1 + p * p)));
        CHECK(i64(tp.cosets.size()) == lattice_count(HeckeKind::Tp, p));
        auto t1 = coset_reps(HeckeKind::T1p2, p);
        CHECK(i64(t1.cosets.size()) == lattice_count(HeckeKind::T1p2, p));
        for (const auto* op : {&tp, &t1}) {
            std::set<std::array<i64, 6>> seen;
            for (const auto& c : op->cosets) {
                auto g = c.matrix(op->lam);
                CHECK(is_similitude(g, op->lam));
                if (op->kind == HeckeKind::T1p2) CHECK(rank_mod_p(g, p) == 1);
                CHECK(seen.insert({c.d1, c.e, c.d2, c.x11, c.x12, c.x22}).second);
            }
            CHECK(op->det_growth() == p * p);
        }
        // distinct cosets: g_j g_i^{-1} is never integral
        for (std::size_t i = 0; i < tp.cosets.size(); ++i)
            for (std::size_t j = i + 1; j < tp.cosets.size(); ++j) {
                auto gi = tp.cosets[i].matrix(p), gj = tp.cosets[j].matrix(p);
                // lam g_i^{-1} = J^t g_i^t J
                Mat4 J{{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}}};
                Mat4 Jt{{{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 0, 0}, {0, 1, 0, 0}}};
                Mat4 git{};
                for (int r = 0; r < 4; ++r)
                    for (int s = 0; s < 4; ++s) git[r][s] = gi[s][r];
                auto m = mul(gj, mul(mul(Jt, git), J));
                bool integral = true;
                for (const auto& row : m)
                    for (i64 v : row) integral = integral && v % p == 0;
                CHECK_FALSE(integral);
            }
    }
    CHECK(!dump_cosets(coset_reps(HeckeKind::Tp, 2)).empty());
    Mat4 bad{{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 2, 0}, {0, 0, 0, 1}}};
    CHECK_FALSE(is_similitude(bad, 2));
}

TEST_CASE("Hecke action is linear and commutes") {
    auto a = sk_lift(plus_space_form("phi10E6", 4 * 64), 64);
    auto b = sk_lift(plus_space_form("phi12E4", 4 * 64), 64);
    auto tp = coset_reps(HeckeKind::Tp, 2), t1 = coset_reps(HeckeKind::T1p2, 2);

    auto mix = linear_combine({{2, &a}, {-3, &b}});
    auto lhs = apply(tp, mix);
    auto ta = apply(tp, a), tb = apply(tp, b);
    auto rhs = linear_combine({{2, &ta}, {-3, &tb}});
    CHECK(lhs == rhs);
    CHECK(lhs.det_bound == 16);

    FourierExpansion zero(16, 1, 64);
    CHECK(apply(tp, zero).is_zero());
    CHECK(apply(t1, a) == apply_serial(t1, a));

    auto x = apply(t1, apply(tp, a)), y = apply(tp, apply(t1, a));
    CHECK(x.det_bound == 4);
    for (const auto& T : keys_upto(4)) CHECK(x.coefficient(T) == y.coefficient(T));
    // a is not an eigenvector, so the check above is not vacuous
    CHECK_THROWS(eigenvalue(a, HeckeKind::Tp, 2));

    CHECK_THROWS_AS(hecke_coefficient(tp, a, {1, 0, 17}), std::out_of_range);
}

TEST_CASE("Igusa eigenvalues") {
    auto [c10, c12] = igusa_cusp_forms(144);
    struct Row {
        const FourierExpansion* f;
        i64 p;
        Rat lp, l1;
    };
    std::vector<Row> rows = {
        {&c10, 2, 240, -153600},
        {&c10, 3, 21960, 787320},
        {&c12, 2, 2784, 344064},
        {&c12, 3, 107352, Rat("-7044781896")},
    };
    for (const auto& r : rows) {
        auto e = eigenvalue(*r.f, HeckeKind::Tp, r.p);
        auto e1 = eigenvalue(*r.f, HeckeKind::T1p2, r.p);
        CHECK(e.value == r.lp);
        CHECK(e1.value == r.l1);
        CHECK(e.keys_checked >= 5);
        CHECK(e1.keys_checked >= 5);
        // Maass lift of g: lambda(p) = a_g(p) + p^{k-1} + p^{k-2}
        auto g = elliptic_eigenform(2 * r.f->k - 2, 5);
        CHECK(e.value == g.a[r.p] + ipow(r.p, r.f->k - 1) + ipow(r.p, r.f->k - 2));
        // non-tempered at p: one Satake parameter has absolute value sqrt(p)
        auto s = satake_from_eigenvalues(e.value.get_d(), e1.value.get_d(), r.f->k, r.p);
        CHECK(std::abs(s.a) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(s.b) == doctest::Approx(std::sqrt(double(r.p))).epsilon(1e-9));
    }
    FourierExpansion zero(10, 1, 16);
    CHECK_THROWS(eigenvalue(zero, HeckeKind::Tp, 2));
}

TEST_CASE("Satake parameters") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ang(0, kPi), mag(-1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        i64 p = std::vector<i64>{2, 3, 5, 7}[trial % 4];
        int k = 10 + 2 * (trial % 5);
        cplx a = std::polar(1.0, ang(rng)), b = std::polar(1.0, ang(rng));
        if (trial % 3 == 0) b = std::pow(double(p), 0.5 * std::abs(mag(rng)));
        auto [lp, l1] = eigenvalues_from_satake({a, b}, k, p);
        auto back = satake_from_eigenvalues(lp, l1, k, p);
        auto want = weyl_canonicalize(a, b);
        CHECK(close(back.a, want.a, 1e-6));
        CHECK(close(back.b, want.b, 1e-6));
        auto [lp2, l12] = eigenvalues_from_satake(back, k, p);
        CHECK(lp2 == doctest::Approx(lp).epsilon(1e-9).scale(std::pow(double(p), k - 1.5)));
        CHECK(l12 == doctest::Approx(l1).epsilon(1e-9).scale(std::pow(double(p), 2.0 * k - 4)));
    }
    // beyond sqrt(p)
    CHECK_THROWS(satake_from_eigenvalues(eigenvalues_from_satake({cplx(3), cplx(1)}, 10, 2).first,
                                         eigenvalues_from_satake({cplx(3), cplx(1)}, 10, 2).second, 10, 2));
}

TEST_CASE("Weyl group canonical form") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 10000; ++trial) {
        cplx a(nd(rng), nd(rng)), b(nd(rng), nd(rng));
        if (trial % 4 == 0) a = std::polar(1.0, nd(rng));
        if (trial % 8 == 0) b = std::conj(a);
        auto c = weyl_canonicalize(a, b);
        CHECK(std::abs(c.a) >= 1 - 1e-12);
        CHECK(std::abs(c.a) <= std::abs(c.b) + 1e-9);
        for (const auto& [x, y] : weyl_orbit(a, b)) {
            auto d = weyl_canonicalize(x, y);
            CHECK(close(d.a, c.a));
            CHECK(close(d.b, c.b));
        }
    }
    auto orbit = weyl_orbit(2, 3);
    std::set<std::pair<double, double>> distinct;
    for (const auto& [x, y] : orbit) distinct.insert({x.real(), y.real()});
    CHECK(distinct.size() == 8);
    CHECK_THROWS(weyl_canonicalize(0, 1));
}
