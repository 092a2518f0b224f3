#include <array>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "siegel/bessel_measure.hpp"
#include "siegel/density.hpp"
#include "siegel/equidist.hpp"
#include "siegel/form_factory.hpp"
#include "siegel/hecke.hpp"
#include "siegel/poincare.hpp"
#include "siegel/sk.hpp"

using namespace siegel;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
    std::vector<std::string> details;
};

void note(Outcome& o, const std::string& s) { o.details.push_back(s); }

const std::pair<FourierExpansion, FourierExpansion>& igusa64() {
    static const auto forms = igusa_cusp_forms(64);
    return forms;
}

SatakeParams satake_of(const FourierExpansion& f, i64 p) {
    double l = eigenvalue(f, HeckeKind::Tp, p).value.get_d();
    double l1 = eigenvalue(f, HeckeKind::T1p2, p).value.get_d();
    return satake_from_eigenvalues(l, l1, f.k, p);
}

Outcome plancherel_panel() {
    Outcome o;
    double worst = 0;
    int cells = 0;
    for (i64 d : {3, 4, 23}) {
        auto cg = class_group(d);
        for (std::size_t chi = 0; chi < cg.characters.size(); ++chi)
            for (i64 p : {2, 3, 5, 13}) {
                auto loc = local_bessel_data(cg, chi, p);
                for (auto idx : supported_indices()) {
                    auto r = integrate(loc, [&](double t1, double t2) { return sugano_U_angles(idx, loc, t1, t2); });
                    double err = std::abs(r.value - ((idx.l == 0 && idx.m == 0) ? 1.0 : 0.0));
                    worst = std::max(worst, err);
                    ++cells;
                }
            }
    }
    o.pass = worst <= 1e-8;
    o.summary = fmt::format("{} cells (l,m) x p x (d, Lambda), max |integral - delta| = {:.2e} (tol 1e-8)", cells, worst);
    return o;
}

Outcome central_identity() {
    Outcome o;
    auto cg = class_group(4);
    double worst = 0;
    int n = 0;
    const auto& [c10, c12] = igusa64();
    for (const auto* f : {&c10, &c12}) {
        std::map<i64, SatakeParams> s{{2, satake_of(*f, 2)}, {3, satake_of(*f, 3)}};
        // (L, M) = (2, 1), (3, 1), (4, 1)
        for (auto [p, l] : std::vector<std::pair<i64, int>>{{2, 1}, {3, 1}, {2, 2}}) {
            auto r = bessel_identity_check(*f, p, l, 0, cg, 0, s.at(p));
            worst = std::max(worst, r.rel_error);
            ++n;
            note(o, fmt::format("k={} L={} lhs={:.12g} rhs={:.12g} rel={:.2e}", f->k, l == 2 ? p * p : p, r.lhs.real(),
                                r.rhs.real(), r.rel_error));
        }
    }
    o.pass = worst <= 1e-9;
    o.summary = fmt::format("{} checks on chi10, chi12 (detBound 64), max relative error {:.2e} (tol 1e-9)", n, worst);
    return o;
}

Outcome hecke_structure() {
    Outcome o;
    bool ok = true;
    for (i64 p : {2, 3}) {
        auto op = coset_reps(HeckeKind::Tp, p);
        i64 expected = (p + 1) * (p * p + 1);
        bool good = i64(op.cosets.size()) == expected && lattice_count(HeckeKind::Tp, p) == expected;
        ok &= good;
        note(o, fmt::format("T({}) cosets {} lattices {} expected {}", p, op.cosets.size(),
                            lattice_count(HeckeKind::Tp, p), expected));
    }
    auto c10 = sk_lift(plus_space_form("phi10", 4 * 256), 256);
    auto tp = coset_reps(HeckeKind::Tp, 2), t1 = coset_reps(HeckeKind::T1p2, 2);
    auto x = apply(t1, apply(tp, c10)), y = apply(tp, apply(t1, c10));
    auto keys = keys_upto(x.det_bound);
    bool commute = !keys.empty();
    for (const auto& T : keys) commute &= x.coefficient(T) == y.coefficient(T);
    ok &= commute;
    note(o, fmt::format("T(2) T1(4) = T1(4) T(2) on {} keys: {}", keys.size(), commute ? "exact" : "differs"));
    std::size_t fewest = SIZE_MAX;
    for (auto [kind, p] : std::vector<std::pair<HeckeKind, i64>>{{HeckeKind::Tp, 2}, {HeckeKind::Tp, 3}, {HeckeKind::T1p2, 2}}) {
        auto e = eigenvalue(c10, kind, p);
        fewest = std::min(fewest, e.keys_checked);
        note(o, fmt::format("{}: eigenvalue {} on {} keys", coset_reps(kind, p).name(), e.value.get_str(), e.keys_checked));
    }
    ok &= fewest >= 5;
    o.pass = ok;
    o.summary = fmt::format("coset counts, exact commutation, eigenvalue ratio constant on >= {} keys", fewest);
    return o;
}

using Mat2 = std::array<std::array<Rat, 2>, 2>;

// matrix of op on span{a, b}, solved on two keys and verified on every reachable key
Mat2 hecke_matrix(const HeckeOperator& op, const FourierExpansion& a, const FourierExpansion& b, bool& verified) {
    auto ta = apply(op, a), tb = apply(op, b);
    auto keys = keys_upto(ta.det_bound);
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (std::size_t j = i + 1; j < keys.size(); ++j) {
            Rat a1 = a.coefficient(keys[i]), b1 = b.coefficient(keys[i]);
            Rat a2 = a.coefficient(keys[j]), b2 = b.coefficient(keys[j]);
            Rat det = a1 * b2 - a2 * b1;
            if (det == 0) continue;
            Mat2 m;
            for (int c = 0; c < 2; ++c) {
                const auto& t = c == 0 ? ta : tb;
                Rat y1 = t.coefficient(keys[i]), y2 = t.coefficient(keys[j]);
                m[0][c] = (y1 * b2 - y2 * b1) / det;
                m[1][c] = (a1 * y2 - a2 * y1) / det;
            }
            verified = true;
            for (const auto& T : keys)
                for (int c = 0; c < 2; ++c) {
                    const auto& t = c == 0 ? ta : tb;
                    verified &= t.coefficient(T) == m[0][c] * a.coefficient(T) + m[1][c] * b.coefficient(T);
                }
            return m;
        }
    throw std::runtime_error("hecke_matrix: no invertible pair of keys");
}

Outcome basis_independence() {
    Outcome o;
    const i64 bound = 256;
    auto a = sk_lift(plus_space_form("phi10E6", 4 * bound), bound);
    auto b = sk_lift(plus_space_form("phi12E4", 4 * bound), bound);
    std::map<std::pair<int, i64>, Mat2> mats;
    bool verified_all = true;
    for (i64 p : {2, 3})
        for (auto kind : {HeckeKind::Tp, HeckeKind::T1p2}) {
            bool v = false;
            mats[{int(kind), p}] = hecke_matrix(coset_reps(kind, p), a, b, v);
            verified_all &= v;
        }
    const auto& m = mats.at({int(HeckeKind::Tp), 2});
    Rat tr = m[0][0] + m[1][1], det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    // x^2 - 8640 x - 454569984 for T(2) on S_30 (tests/oracles/sk.py), shifted by 2^15 + 2^14
    Rat shift(49152);
    Rat tr_expected = 2 * shift + 8640, det_expected = shift * shift + 8640 * shift - 454569984;
    bool sk_match = tr == tr_expected && det == det_expected;
    note(o, fmt::format("T(2) on the weight-16 space: trace {} det {} (SK prediction {} {}), matrices verified on all keys: {}",
                        tr.get_str(), det.get_str(), tr_expected.get_str(), det_expected.get_str(), verified_all));
    double disc = Rat(tr * tr - 4 * det).get_d();
    std::vector<SpectralForm> basis;
    for (int sign : {1, -1}) {
        double lam = (tr.get_d() + sign * std::sqrt(disc)) / 2;
        std::array<double, 2> v{m[0][1].get_d(), lam - m[0][0].get_d()};
        double scale = std::max(std::abs(v[0]), std::abs(v[1]));
        v = {v[0] / scale, v[1] / scale};
        SpectralForm s;
        s.label = sign > 0 ? "F16+" : "F16-";
        s.f = linear_combine({{Rat(v[0]), &a}, {Rat(v[1]), &b}}, s.label);
        s.petersson_norm = 1;
        for (i64 p : {2, 3}) {
            std::array<double, 2> ev{};
            for (auto kind : {HeckeKind::Tp, HeckeKind::T1p2}) {
                const auto& mk = mats.at({int(kind), p});
                double w0 = mk[0][0].get_d() * v[0] + mk[0][1].get_d() * v[1];
                ev[kind == HeckeKind::Tp ? 0 : 1] = std::abs(v[0]) > 0.5 ? w0 / v[0]
                                                                           : (mk[1][0].get_d() * v[0] + mk[1][1].get_d() * v[1]) / v[1];
            }
            s.satake[p] = satake_from_eigenvalues(ev[0], ev[1], 16, p);
        }
        note(o, fmt::format("{}: lambda(2) = {:.6f}", s.label, lam));
        basis.push_back(std::move(s));
    }
    auto cg = class_group(4);
    double th = 0.7;
    std::array<std::array<cplx, 2>, 2> rot{{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}}};
    std::array<std::array<cplx, 2>, 2> phase{{{std::polar(1.0, 0.3), 0}, {0, std::polar(1.0, -1.1)}}};
    auto rel = [](const BasisCheck& r) {
        double scale = 0;
        for (const auto& e : r.before) scale = std::max(scale, std::abs(e.sum));
        return r.max_difference / scale;
    };
    auto within = basis_invariance_check(basis, 0, 1, phase, 16, 1, {2, 3}, cg, 0);
    auto trivial_algebra = basis_invariance_check(basis, 0, 1, rot, 16, 1, {}, cg, 0);
    bool rejected = false;
    try {
        basis_invariance_check(basis, 0, 1, rot, 16, 1, {2, 3}, cg, 0);
    } catch (const std::invalid_argument&) {
        rejected = true;
    }
    note(o, fmt::format("unitary phase remix of the eigenbasis, S = {{2,3}}: {} panel entries, max relative change {:.2e}",
                        within.before.size(), rel(within)));
    note(o, fmt::format("rotation by 0.7 with S empty (one eigenspace): max relative change {:.2e}", rel(trivial_algebra)));
    note(o, fmt::format("rotation across the distinct T(2) eigenspaces rejected: {}", rejected));
    note(o, "Petersson norms of the weight-16 eigenforms are stand-ins (1); the check is norm-independent");
    o.pass = sk_match && verified_all && rel(within) <= 1e-10 && rel(trivial_algebra) <= 1e-10 && rejected;
    o.summary = fmt::format("k=16 eigenbasis from the 2x2 Hecke matrices, remix changes panels by <= {:.2e}",
                            std::max(rel(within), rel(trivial_algebra)));
    return o;
}

Outcome poincare() {
    Outcome o;
    i64 bad = 0;
    for (i64 a = 1; a <= 50; ++a)
        for (i64 b = 1; b <= 50; ++b)
            for (i64 c = 1; c <= 50; ++c)
                if (gauss_sum_norm2(a, b, c) > Rat(2 * c * gcd(a, c))) ++bad;
    note(o, fmt::format("|G(a,b;c)|^2 <= 2 c (a,c) for a,b,c <= 50: {} violations", bad));
    auto brute = [](const QuadForm& q, const QuadForm& t) {
        i64 n = 0;
        for (i64 a = -4; a <= 4; ++a)
            for (i64 b = -4; b <= 4; ++b)
                for (i64 c = -4; c <= 4; ++c)
                    for (i64 d = -4; d <= 4; ++d)
                        if (std::abs(a * d - b * c) == 1 && q.eval(a, b) == t.a && q.bilinear2(a, b, c, d) == t.b &&
                            q.eval(c, d) == t.c)
                            ++n;
        return n;
    };
    int mismatches = 0, pairs = 0;
    for (const auto& T : keys_upto(6))
        for (const auto& q : {QuadForm{1, 1, 1}, QuadForm{1, 0, 1}, QuadForm{2, 1, 3}, QuadForm{1, 1, 2}}) {
            mismatches += rank0(T, q) != brute(q, T);
            ++pairs;
        }
    note(o, fmt::format("rank-0 term vs automorphism enumeration: {} of {} pairs differ", mismatches, pairs));
    bool ratio_ok = true;
    const auto& [c10, c12] = igusa64();
    for (const auto* f : {&c10, &c12}) {
        PoincareSpec s;
        s.Q = {1, 1, 1};
        s.k = f->k;
        s.c_max = 40;
        s.m_max = 40;
        auto r = ratio_oracle({1, 0, 1}, {1, 1, 1}, s, *f);
        bool ok = r.gap <= r.budget;
        ratio_ok &= ok;
        note(o, fmt::format("k={} ratio a(1_2)/a((1,1,1)): Poincare {:.6g} vs form {:.6g}, gap {:.4g}, budget {:.4g}: {}", f->k,
                            r.lhs, r.rhs, r.gap, r.budget, ok ? "within" : "outside"));
    }
    if (!ratio_ok)
        note(o, "the budget covers the rank-1 tail and the rank-2 scale N^-2 k^-2/3 |T|^(k/2-1/4); the rank-2 term itself is "
                "not evaluated, and at k = 10, 12 the gap exceeds that scale");
    o.pass = bad == 0 && mismatches == 0 && ratio_ok;
    o.summary = fmt::format("Gauss bound {}, rank-0 {}, ratio oracle {}", bad == 0 ? "exact" : "violated",
                            mismatches == 0 ? "matches" : "differs", ratio_ok ? "within budget" : "outside budget");
    return o;
}

Outcome density() {
    Outcome o;
    double beta = 0.2;
    auto phi = fejer_test_function(beta);
    bool ok = true;
    for (double logC : {20.0, 40.0}) {
        MeasureSampler mc;
        mc.d = 4;
        mc.draws = 100000;
        mc.seed = 20240601;
        auto t0 = std::chrono::steady_clock::now();
        auto r = one_level_density(mc, phi, logC);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        double phi0 = phi.phi(0);
        bool m1 = std::abs(r.m1.value - phi0) <= 3 * r.m1.sigma;
        bool m2 = std::abs(r.m2.value + phi0 / 2) <= 3 * r.m2.sigma;
        bool total = r.deviation <= 3 * r.sigma + 1 / logC;
        ok &= m1 && m2 && total;
        note(o, fmt::format("logC={:g} ({:.0f} s, {} draws per prime, {} primes)", logC, secs, mc.draws, r.m1.primes));
        note(o, fmt::format("  m=1: {:.5f} +- {:.5f} vs Phi(0) = {:g}: {}; exact finite-logC mu-expectation {:.5f} "
                            "({:.1f} sigma)",
                            r.m1.value, r.m1.sigma, phi0, m1 ? "within 3 sigma" : "outside", r.m1.expected,
                            std::abs(r.m1.value - r.m1.expected) / r.m1.sigma));
        note(o, fmt::format("  m=2: {:.5f} +- {:.5f} vs -Phi(0)/2 = {:g}: {}; exact finite-logC mu-expectation {:.5f} "
                            "({:.1f} sigma)",
                            r.m2.value, r.m2.sigma, -phi0 / 2, m2 ? "within 3 sigma" : "outside", r.m2.expected,
                            std::abs(r.m2.value - r.m2.expected) / r.m2.sigma));
        note(o, fmt::format("  D = {:.5f} vs Phi_hat(0) - Phi(0)/2 = {:g}, deviation {:.4f}, allowed {:.4f}; "
                            "archimedean correction {:.4f}",
                            r.total, r.predicted, r.deviation, 3 * r.sigma + 1 / logC, r.archimedean_correction));
    }
    note(o, "the sampler reproduces the exact mu-expectations; the gap to the limits is the O(Phi_hat(0)/logC) prime-sum "
            "bias (Mertens constants weighted by Phi_hat(0) = 1/beta = 5) and the archimedean constant, which shrink only "
            "like 1/logC");
    // family regression: normalized Weyl panels of chi10 and chi12 against mu
    auto cg = class_group(4);
    std::array<double, 2> err{};
    const auto& [c10, c12] = igusa64();
    int slot = 0;
    for (const auto* f : {&c10, &c12}) {
        WeightedFamily fam{f->k, 1, {2, 3}, {{f->label, {{2, satake_of(*f, 2)}, {3, satake_of(*f, 3)}}, 1.0}}};
        for (const auto& e : weyl_panel(fam, cg, 0)) err[slot] = std::max(err[slot], std::abs(e.sum - e.target));
        ++slot;
    }
    bool shrink = err[1] < err[0];
    note(o, fmt::format("k=10 -> 12 regression of the normalized one-form Weyl panel: max error {:.4g} -> {:.4g}: {}", err[0],
                        err[1], shrink ? "shrinks" : "grows"));
    ok &= shrink;
    o.pass = ok;
    o.summary = "Monte Carlo one-level density at beta = 0.2, logC = 20, 40";
    return o;
}

Outcome saito_kurokawa() {
    Outcome o;
    auto plus = plus_space_form("phi10", 4 * 324);
    auto lift = sk_lift(plus, 324);
    bool ok = true;
    auto cg = class_group(4);
    for (const auto& primes : std::vector<std::vector<i64>>{{}, {2}, {2, 3}}) {
        auto b = oldform_basis(lift, primes);
        std::size_t expected = 1;
        for (std::size_t i = 0; i < primes.size(); ++i) expected *= 3;
        i64 N = 1;
        for (i64 p : primes) N *= p;
        double mass = 0;
        bool zero = true;
        for (std::size_t i = 1; i < b.members.size(); ++i) {
            double w = weight_omega(b.members[i], N, cg, 0, 1.0);
            zero &= w == 0.0;
            mass += w;
        }
        ok &= b.members.size() == expected && b.full_rank() && zero;
        note(o, fmt::format("r={}: {} members, exact rank {} at detBound {}, omega of T1/T3 members {}", primes.size(),
                            b.members.size(), b.rank, b.det_bound, zero ? "exactly 0" : fmt::format("{:g}", mass)));
    }
    for (i64 p : {2, 3}) {
        auto s = satake_of(lift, p);
        bool flagged = detect_ramanujan_violation(s, p);
        double closest = 1e300;
        for (const auto& [a, b] : weyl_orbit(s.a, s.b))
            closest = std::min(closest, std::abs(std::abs(a) - 1) + std::abs(b - std::sqrt(double(p))));
        ok &= flagged && closest <= 1e-10;
        note(o, fmt::format("chi10 at p={}: violation detected {}, |b| - sqrt(p) in orbit {:.1e}", p, flagged, closest));
    }
    o.pass = ok;
    o.summary = "3^r oldforms with full rank for r <= 2, Ramanujan violation at p = 2, 3, zero weight off SK(g)";
    return o;
}

Outcome volume_oracle() {
    Outcome o;
    auto [order, borel] = sp4_enumerate(2);
    bool index_ok = order == 720 && order % borel == 0 && order / borel == gamma0_index(2);
    double lo = 1e300, hi = 0;
    for (i64 N : {1, 2, 3, 5, 6}) {
        double r = volume(N) / double(N * N * N) / volume_level_one();
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    note(o, fmt::format("|Sp4(F2)| = {}, C = 0 subgroup {}, index {} vs closed form {}", order, borel, order / borel,
                        gamma0_index(2)));
    note(o, fmt::format("volume(N) / (N^3 volume(1)) over N in {{1,2,3,5,6}}: [{:.4f}, {:.4f}]", lo, hi));
    o.pass = index_ok && lo >= 1 && hi <= 4;
    o.summary = fmt::format("Gamma0(2) index {} by enumeration, volume(N)/N^3 within [1, 4] volume(1)", order / borel);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
    std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"plancherel identity panel", plancherel_panel},
        {"central identity", central_identity},
        {"Hecke structure", hecke_structure},
        {"basis independence", basis_independence},
        {"Poincare series", poincare},
        {"one-level density", density},
        {"Saito-Kurokawa", saito_kurokawa},
        {"volume oracle", volume_oracle},
    };
    std::ostringstream report;
    int passed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        passed += o.pass;
        std::ostringstream block;
        block << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.summary << "\n";
        for (const auto& d : o.details) block << "    " << d << "\n";
        std::cout << block.str() << std::flush;
        report << block.str();
    }
    report << passed << "/" << criteria.size() << " criteria pass\n";
    std::cout << passed << "/" << criteria.size() << " criteria pass\n";
    std::ofstream("acceptance_report.txt") << report.str();
    return strict && passed != int(criteria.size()) ? 1 : 0;
}
