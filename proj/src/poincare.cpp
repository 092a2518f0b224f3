#include "siegel/poincare.hpp"

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <json.hpp>
#include <stdexcept>
#include <vector>

namespace siegel {

CycloSum gauss_sum(i64 a, i64 b, i64 c) {
    if (c < 1) throw std::domain_error("gauss_sum: modulus must be positive");
    CycloSum s(c);
    for (i64 x = 0; x < c; ++x) s.add(mod(mod(a, c) * x % c * x + mod(b, c) * x, c), 1);
    return s;
}

Rat gauss_sum_norm2(i64 a, i64 b, i64 c) {
    if (c < 1) throw std::domain_error("gauss_sum_norm2: modulus must be positive");
    // |S|^2 = c sum_{h mod c, c | 2ah} e((a h^2 + b h)/c)
    CycloSum s(c);
    for (i64 h = 0; h < c; ++h)
        if (mod(2 * a * h, c) == 0) s.add(mod(mod(a, c) * h % c * h + mod(b, c) * h, c), 1);
    return Rat(c) * s.to_rational();
}

double besselJ(double nu, double x) {
    if (nu < 0.5 || x < 0) throw std::domain_error("besselJ: need nu >= 1/2 and x >= 0");
    if (x == 0) return 0;
    return boost::math::cyl_bessel_j(nu, x);
}

void PoincareSpec::validate() const {
    if (k < 6 || k % 2) throw std::domain_error("PoincareSpec: k must be even and >= 6");
    if (N < 1) throw std::domain_error("PoincareSpec: N must be positive");
    if (!Q.positive_definite()) throw std::domain_error("PoincareSpec: Q must be positive definite");
    if (c_max < 1 || m_max < 1) throw std::domain_error("PoincareSpec: truncation bounds must be positive");
}

i64 rank0(const QuadForm& T, const QuadForm& Q) { return automorphism_count(Q, T); }

namespace {

struct Completion {
    i64 p1, p2, p4;
};

// U = [[u1, u2], [u3, u4]] with bottom row u and det 1; P = U Q U^t
Completion complete_U(const QuadForm& Q, i64 u3, i64 u4) {
    i64 x, y;
    ext_gcd(u4, -u3, x, y);  // u4 x - u3 y = 1, so (u1, u2) = (x, y)
    i64 u1 = x, u2 = y;
    return {Q.eval(u1, u2), Q.bilinear2(u1, u2, u3, u4), Q.eval(u3, u4)};
}

// V = [[v1, w1], [v2, w2]] with det 1; S = V^{-1} T V^{-t}, rows of V^{-1} are (w2, -w1), (-v2, v1)
Completion complete_V(const QuadForm& T, i64 v1, i64 v2, i64 shift) {
    i64 w1, w2;
    ext_gcd(v1, -v2, w2, w1);  // v1 w2 - v2 w1 = 1
    w1 += shift * v1;
    w2 += shift * v2;
    return {T.eval(w2, -w1), T.bilinear2(w2, -w1, -v2, v1), T.eval(-v2, v1)};
}

i64 mulmod(i64 a, i64 b, i64 m) { return i64((__int128)mod(a, m) * mod(b, m) % m); }

i64 inverse_mod(i64 a, i64 m) {
    if (m == 1) return 0;
    i64 x, y;
    if (ext_gcd(mod(a, m), m, x, y) != 1) throw std::logic_error("inverse_mod: not invertible");
    return mod(x, m);
}

// sum over d1 (coprime), d2 mod Nc and d4 = +-1 of the exponential in the rank-one term
cplx phase_sum(i64 Nc, const Completion& P, const Completion& S, i64 a1_shift, PhaseForm form) {
    i64 den = 2 * Nc * S.p4;
    cplx total = 0;
    for (i64 d1 = 0; d1 < Nc; ++d1) {
        if (gcd(d1, Nc) != 1) continue;
        i64 a1 = inverse_mod(d1, Nc) + a1_shift * Nc;
        for (i64 d4 : {1, -1})
            for (i64 d2 = 0; d2 < Nc; ++d2) {
                // 2 s4 (a1 s4 d2^2 - (a1 d4 p2 - s2) d2 + a1 p1 + d1 s1) - d4 p2 s2 over 2 N c s4
                i64 inner = mulmod(mulmod(a1, S.p4, den), mulmod(d2, d2, den), den);
                inner = mod(inner - mulmod(mod(mulmod(a1 * d4, P.p2, den) - S.p2, den), d2, den), den);
                inner = mod(inner + mulmod(a1, P.p1, den) + mulmod(d1, S.p1, den), den);
                i64 last = form == PhaseForm::Corrected ? d4 : d2;
                i64 num = mod(mulmod(2 * S.p4, inner, den) - mulmod(mulmod(last, P.p2, den), S.p2, den), den);
                total += std::polar(1.0, 2 * kPi * double(num) / double(den));
            }
    }
    return total;
}

struct RepData {
    std::vector<std::array<i64, 2>> u;  // Q, modulo sign
    std::vector<std::array<i64, 2>> v;  // T, both signs
};

RepData reps_for(const QuadForm& T, const QuadForm& Q, i64 m) {
    RepData r;
    for (const auto& x : representations(Q, m, true))
        if (x[0] > 0 || (x[0] == 0 && x[1] > 0)) r.u.push_back(x);
    if (r.u.empty()) return r;
    r.v = representations(T, m, true);
    return r;
}

double regime_bound(double x, double nu) {
    if (x <= std::sqrt(nu + 1)) return std::exp(nu * std::log(x) - std::lgamma(nu));
    return std::min(1.0, x / nu) * std::pow(nu, -1.0 / 3);
}

}  // namespace

Rank1Budget rank1_partial(const QuadForm& T, const PoincareSpec& spec) {
    spec.validate();
    if (!T.positive_definite()) throw std::domain_error("rank1_partial: T must be positive definite");
    const double nu = spec.k - 1.5;
    const double detT = T.det().get_d(), detQ = spec.Q.det().get_d();
    const double A = std::pow(detT / detQ, spec.k / 2.0 - 0.75);
    const double X = 4 * kPi * std::sqrt(detT * detQ) / double(spec.N);
    const double sign = (spec.k / 2) % 2 ? -1.0 : 1.0;
    Rank1Budget out;

    std::vector<RepData> reps(spec.m_max + 1);
    for (i64 m = 1; m <= spec.m_max; ++m) reps[m] = reps_for(T, spec.Q, m);

    std::vector<cplx> by_c(spec.c_max + 1, 0.0);
    std::vector<long> terms(spec.c_max + 1, 0);
#pragma omp parallel for schedule(dynamic, 1)
    for (i64 c = 1; c <= spec.c_max; ++c) {
        i64 Nc = spec.N * c;
        cplx acc = 0;
        for (i64 m = 1; m <= spec.m_max; ++m) {
            const auto& R = reps[m];
            if (R.u.empty() || R.v.empty()) continue;
            double amp = sign * std::sqrt(2.0) * kPi * A / std::sqrt(double(m)) * std::pow(double(Nc), -1.5) *
                         besselJ(nu, X / double(c * m));
            for (const auto& u : R.u) {
                auto P = complete_U(spec.Q, u[0], u[1]);
                for (const auto& v : R.v) {
                    auto S = complete_V(T, v[1], -v[0], spec.completion_shift);
                    acc += amp * phase_sum(Nc, P, S, spec.a1_shift, spec.phase);
                    ++terms[c];
                }
            }
        }
        by_c[c] = acc;
    }
    for (i64 c = 1; c <= spec.c_max; ++c) {
        out.partial += by_c[c].real();
        out.partial_imag += by_c[c].imag();
        out.terms += terms[c];
    }

    // tail over cells outside [1, c_max] x [1, m_max]
    const i64 c_lim = std::max<i64>(2048, 4 * spec.c_max), m_lim = std::max<i64>(2048, 4 * spec.m_max);
    std::vector<double> weight(m_lim + 1, 0.0);
    for (i64 m = 1; m <= m_lim; ++m) {
        auto R = m <= spec.m_max ? reps[m] : reps_for(T, spec.Q, m);
        weight[m] = double(R.u.size() * R.v.size());
    }
    double tail = 0;
    for (i64 m = 1; m <= m_lim; ++m) {
        if (weight[m] == 0) continue;
        for (i64 c = (m <= spec.m_max ? spec.c_max + 1 : 1); c <= c_lim; ++c) {
            double x = X / double(c * m);
            double mc = double(m * c);
            int regime = mc >= X ? 0 : (mc >= X / std::sqrt(double(spec.k)) ? 1 : 2);
            ++out.regime_cells[regime];
            tail += weight[m] / std::sqrt(double(m)) * std::sqrt(double(gcd(m, spec.N * c))) * regime_bound(x, nu);
        }
    }
    // beyond the window: r(m;T) r(m;Q) <= 72 m and x^nu / Gamma(nu) for x <= 1
    double head = std::exp(nu * std::log(X) - std::lgamma(nu));
    if (X / double(c_lim) <= 1 && X / double(m_lim) <= 1) {
        tail += 72 * head * boost::math::zeta(nu - 1) * std::pow(double(c_lim), 1 - nu) / (nu - 1);
        tail += 72 * head * boost::math::zeta(nu) * std::pow(double(m_lim), 2 - nu) / (nu - 2);
    } else {
        tail = INFINITY;
    }
    out.tail = A * tail;
    return out;
}

CoefficientEstimate coefficient_estimate(const QuadForm& T, const PoincareSpec& spec, double eps) {
    CoefficientEstimate e;
    e.rank0 = rank0(T, spec.Q);
    e.rank1 = rank1_partial(T, spec);
    e.rank2_scale = std::pow(double(spec.N), -2) * std::pow(double(spec.k), -2.0 / 3) *
                    std::pow(T.det().get_d(), spec.k / 2.0 - 0.25 + eps);
    e.value = double(e.rank0) + e.rank1.partial;
    e.budget = e.rank1.tail + e.rank2_scale;
    return e;
}

std::string to_json(const CoefficientEstimate& e, const QuadForm& T, const PoincareSpec& spec) {
    nlohmann::json j;
    j["rank0"] = e.rank0;
    j["rank1_partial"] = e.rank1.partial;
    j["rank1_tail"] = e.rank1.tail;
    j["rank1_regime_cells"] = {e.rank1.regime_cells[0], e.rank1.regime_cells[1], e.rank1.regime_cells[2]};
    j["rank2_scale"] = e.rank2_scale;
    j["total"] = e.value;
    j["budget"] = e.budget;
    j["note"] = "implied constants set to 1: scale, not certificate";
    j["params"] = {{"T", {T.a, T.b, T.c}}, {"Q", {spec.Q.a, spec.Q.b, spec.Q.c}}, {"N", spec.N},
                   {"k", spec.k},         {"c_max", spec.c_max},                 {"m_max", spec.m_max},
                   {"phase", spec.phase == PhaseForm::Corrected ? "corrected" : "as_printed"}};
    return j.dump(2);
}

RatioCheck ratio_oracle(const QuadForm& T1, const QuadForm& T2, const PoincareSpec& spec, const FourierExpansion& f) {
    RatioCheck r;
    Rat f2 = f.coefficient(T2);
    if (f2 == 0) throw std::domain_error("ratio_oracle: a(T2; f) = 0");
    r.rhs = Rat(f.coefficient(T1) / f2).get_d();
    r.e1 = coefficient_estimate(T1, spec);
    r.e2 = coefficient_estimate(T2, spec);
    if (r.e2.value == 0) throw std::domain_error("ratio_oracle: estimate at T2 vanishes");
    r.lhs = r.e1.value / r.e2.value;
    r.gap = std::abs(r.lhs - r.rhs);
    double room = std::abs(r.e2.value) - r.e2.budget;
    r.budget = room > 0 ? (r.e1.budget + std::abs(r.lhs) * r.e2.budget) / room : INFINITY;
    return r;
}

}  // namespace siegel
