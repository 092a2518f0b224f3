#include "siegel/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace siegel {

double volume_level_one() { return kPi * kPi * kPi / 270; }

i64 gamma0_index(i64 N) {
    if (N < 1) throw std::domain_error("gamma0_index: N must be positive");
    Rat idx = Rat(N) * N * N;
    for (auto [p, e] : factorize(N)) idx *= frac(p + 1, p) * frac(p * p + 1, p * p);
    if (idx.get_den() != 1) throw std::logic_error("gamma0_index: non-integral index");
    return idx.get_num().get_si();
}

double volume(i64 N) { return volume_level_one() * double(gamma0_index(N)); }

std::pair<i64, i64> sp4_enumerate(i64 N) {
    if (N < 1 || N > 3) throw std::domain_error("sp4_enumerate: N must be 1, 2 or 3");
    if (N == 1) return {1, 1};
    using Row = std::array<i64, 4>;
    // rows r_i of g satisfy omega(r_i, r_j) = J_ij with J = [[0, I], [-I, 0]]
    auto omega = [N](const Row& u, const Row& v) { return mod(u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1], N); };
    std::vector<Row> all;
    i64 n4 = N * N * N * N;
    for (i64 x = 0; x < n4; ++x) all.push_back({x % N, x / N % N, x / (N * N) % N, x / (N * N * N)});
    i64 total = 0, siegel = 0;
    for (const auto& r1 : all) {
        for (const auto& r2 : all) {
            if (omega(r1, r2) != 0) continue;
            for (const auto& r3 : all) {
                if (omega(r1, r3) != 1 || omega(r2, r3) != 0) continue;
                for (const auto& r4 : all) {
                    if (omega(r1, r4) != 0 || omega(r2, r4) != 1 || omega(r3, r4) != 0) continue;
                    ++total;
                    if (r3[0] == 0 && r3[1] == 0 && r4[0] == 0 && r4[1] == 0) ++siegel;
                }
            }
        }
    }
    return {total, siegel};
}

double c_k_d_Lambda(int k, const ClassGroupData& cg, std::size_t character) {
    if (k < 6 || k % 2) throw std::domain_error("c_k_d_Lambda: k must be even and >= 6");
    double lg = log_gamma_block(k) + (1.5 - k) * std::log(double(cg.d) / 4);
    return std::exp(lg) * cg.dLambda(character) / (double(cg.w) * double(cg.h()));
}

cplx a_d_Lambda(const FourierExpansion& f, const ClassGroupData& cg, std::size_t character,
                const std::vector<QuadForm>* reps) {
    const auto& forms = reps ? *reps : cg.elements;
    if (forms.size() != cg.h()) throw std::invalid_argument("a_d_Lambda: wrong number of representatives");
    cplx s = 0;
    for (std::size_t c = 0; c < forms.size(); ++c) {
        if (reps && reduce(forms[c]).form != cg.elements[c])
            throw std::invalid_argument("a_d_Lambda: representative " + forms[c].str() + " is not in class " +
                                        cg.elements[c].str());
        s += std::conj(cg.characters.at(character)(c)) * f.coefficient(forms[c]).get_d();
    }
    return s;
}

namespace {

// an SL2-equivalent form whose first coefficient is prime to p
QuadForm first_coeff_prime_to(const QuadForm& F, i64 p) {
    for (i64 r = 1;; ++r)
        for (i64 x = -r; x <= r; ++x)
            for (i64 y = -r; y <= r; ++y) {
                if (std::max(std::abs(x), std::abs(y)) != r || gcd(x, y) != 1 || F.eval(x, y) % p == 0) continue;
                i64 u, v;
                ext_gcd(x, y, u, v);  // x u + y v = 1
                Unimodular U;
                U.m = {{{x, y}, {-v, u}}};
                return transform(U, F);
            }
}

}  // namespace

RayClassData ray_class_group(const ClassGroupData& cg, i64 M) {
    RayClassData r;
    r.d = cg.d;
    r.M = M;
    if (M == 1) {
        r.forms = cg.elements;
        for (std::size_t i = 0; i < cg.h(); ++i) r.projection.push_back(i);
        return r;
    }
    if (!is_prime(M)) throw std::domain_error("ray_class_group: only M = 1 or M prime is supported");
    const i64 p = M;
    for (const auto& F : reduced_forms(-cg.d * p * p, true)) {
        QuadForm G = first_coeff_prime_to(F, p);
        bool found = false;
        for (i64 t = 0; t < 2 * p * p && !found; ++t) {
            QuadForm H{G.a, G.b + 2 * G.a * t, G.a * t * t + G.b * t + G.c};
            if (mod(H.b, p) || mod(H.c, p * p)) continue;
            // (A, p beta, p^2 gamma) ~ (p^2 gamma, -p beta, A), which is (gamma, -beta, A) scaled by (p, 1)
            QuadForm base{H.c / (p * p), -H.b / p, H.a};
            r.forms.push_back(QuadForm{H.c, -H.b, H.a});
            r.projection.push_back(cg.index_of(reduce(base).form));
            found = true;
        }
        if (!found) throw std::logic_error("ray_class_group: no normalized representative for " + F.str());
    }
    return r;
}

i64 ray_class_order_formula(const ClassGroupData& cg, i64 M) {
    if (M == 1) return i64(cg.h());
    Rat v = Rat(i64(cg.h())) * M;
    for (auto [p, e] : factorize(M)) v *= frac(p - cg.chi(p), p);
    v /= Rat(cg.w / 2);
    if (v.get_den() != 1) throw std::logic_error("ray_class_order_formula: non-integral order");
    return v.get_num().get_si();
}

double weight_omega(const FourierExpansion& f, i64 N, const ClassGroupData& cg, std::size_t character,
                    std::optional<double> petersson_norm) {
    if (!petersson_norm) throw std::invalid_argument("weight_omega: no Petersson norm for '" + f.label + "'");
    if (!(*petersson_norm > 0)) throw std::invalid_argument("weight_omega: Petersson norm must be positive");
    double a = std::abs(a_d_Lambda(f, cg, character));
    return c_k_d_Lambda(f.k, cg, character) / volume(N) * a * a / *petersson_norm;
}

WeylSumResult weyl_sum(const WeightedFamily& fam, const ClassGroupData& cg, std::size_t character,
                       const std::map<i64, SuganoIndex>& indices, double eps) {
    WeylSumResult r;
    r.indices = indices;
    bool trivial = true;
    for (const auto& [p, idx] : indices) {
        if (std::find(fam.S.begin(), fam.S.end(), p) == fam.S.end())
            throw std::invalid_argument("weyl_sum: prime " + std::to_string(p) + " not in S");
        if (!supported(idx)) throw std::invalid_argument("weyl_sum: unsupported Sugano index");
        for (int i = 0; i < idx.l; ++i) r.L *= p;
        for (int i = 0; i < idx.m; ++i) r.M *= p;
        if (idx.l || idx.m) trivial = false;
    }
    r.target = trivial ? 1.0 : 0.0;
    r.error_scale = 1.0 / double(fam.N) * std::pow(double(fam.k), -2.0 / 3) * std::pow(double(r.L), 1 + eps) *
                    std::pow(double(r.M), 1.5 + eps);
    std::vector<const FamilyMember*> order;
    for (const auto& m : fam.members) order.push_back(&m);
    std::sort(order.begin(), order.end(), [](auto x, auto y) { return x->label < y->label; });
    for (const auto* m : order) {
        cplx term = m->omega;
        for (const auto& [p, idx] : indices) {
            if (idx.l == 0 && idx.m == 0) continue;
            auto it = m->satake.find(p);
            if (it == m->satake.end())
                throw std::invalid_argument("weyl_sum: member '" + m->label + "' has no Satake data at " + std::to_string(p));
            term *= sugano_U(idx, local_bessel_data(cg, character, p), it->second.a, it->second.b);
        }
        r.sum += term;
    }
    return r;
}

std::vector<WeylSumResult> weyl_panel(const WeightedFamily& fam, const ClassGroupData& cg, std::size_t character) {
    std::vector<WeylSumResult> out;
    std::map<i64, SuganoIndex> cur;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == fam.S.size()) {
            out.push_back(weyl_sum(fam, cg, character, cur));
            return;
        }
        for (const auto& idx : supported_indices()) {
            cur[fam.S[i]] = idx;
            rec(i + 1);
        }
        cur.erase(fam.S[i]);
    };
    rec(0);
    return out;
}

std::string weyl_panel_csv(const std::vector<WeylSumResult>& panel) {
    std::ostringstream os;
    os.precision(15);
    os << "l,m,L,M,sum_re,sum_im,target,error_scale\n";
    for (const auto& r : panel) {
        std::string ls, ms;
        for (const auto& [p, idx] : r.indices) {
            ls += (ls.empty() ? "" : ";") + std::to_string(p) + ":" + std::to_string(idx.l);
            ms += (ms.empty() ? "" : ";") + std::to_string(p) + ":" + std::to_string(idx.m);
        }
        os << ls << "," << ms << "," << r.L << "," << r.M << "," << r.sum.real() << "," << r.sum.imag() << ","
           << r.target << "," << r.error_scale << "\n";
    }
    return os.str();
}

IdentityCheck bessel_identity_check(const FourierExpansion& f, i64 p, int l, int m, const ClassGroupData& cg,
                                    std::size_t character, const SatakeParams& satake) {
    if (!supported({l, m})) throw std::invalid_argument("bessel_identity_check: unsupported (l, m)");
    i64 L = 1, M = 1;
    for (int i = 0; i < l; ++i) L *= p;
    for (int i = 0; i < m; ++i) M *= p;
    auto ray = ray_class_group(cg, M);
    const auto& chi = cg.characters.at(character);
    IdentityCheck r;
    cplx s = 0;
    double mass = 0;
    for (std::size_t c = 0; c < ray.order(); ++c) {
        QuadForm S = ray.forms[c];
        QuadForm SLM{L * S.a, L * S.b, L * S.c};
        double v = f.coefficient(SLM).get_d();
        s += std::conj(chi(ray.projection[c])) * v;
        mass += std::abs(v);
    }
    r.lhs = s * double(cg.h()) / double(ray.order());
    r.term_scale = mass * double(cg.h()) / double(ray.order());
    cplx base = a_d_Lambda(f, cg, character);
    cplx U = sugano_U({l, m}, local_bessel_data(cg, character, p), satake.a, satake.b);
    r.rhs = std::pow(double(L), f.k - 1.5) * std::pow(double(M), f.k - 2.0) * base * U;
    r.abs_error = std::abs(r.lhs - r.rhs);
    double scale = std::max({std::abs(r.lhs), std::abs(r.rhs), r.term_scale});
    r.rel_error = scale == 0 ? 0 : r.abs_error / scale;
    return r;
}

namespace {

WeightedFamily family_from(const std::vector<SpectralForm>& basis, const std::vector<cplx>& a_vals,
                           const std::vector<double>& norms, int k, i64 N, const std::vector<i64>& S,
                           const ClassGroupData& cg, std::size_t character) {
    WeightedFamily fam;
    fam.k = k;
    fam.N = N;
    fam.S = S;
    double c = c_k_d_Lambda(k, cg, character) / volume(N);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        FamilyMember m;
        m.label = basis[i].label;
        m.satake = basis[i].satake;
        m.omega = c * std::norm(a_vals[i]) / norms[i];
        fam.members.push_back(m);
    }
    return fam;
}

}  // namespace

BasisCheck basis_invariance_check(const std::vector<SpectralForm>& basis, std::size_t i, std::size_t j,
                                  const std::array<std::array<cplx, 2>, 2>& U, int k, i64 N, const std::vector<i64>& S,
                                  const ClassGroupData& cg, std::size_t character) {
    if (i >= basis.size() || j >= basis.size() || i == j) throw std::invalid_argument("basis_invariance_check: bad indices");
    for (int r = 0; r < 2; ++r)
        for (int s = 0; s < 2; ++s) {
            cplx dot = U[r][0] * std::conj(U[s][0]) + U[r][1] * std::conj(U[s][1]);
            if (std::abs(dot - (r == s ? 1.0 : 0.0)) > 1e-12)
                throw std::invalid_argument("basis_invariance_check: mixing matrix is not unitary");
        }
    bool diagonal = std::abs(U[0][1]) < 1e-15 && std::abs(U[1][0]) < 1e-15;
    if (!diagonal)
        for (i64 p : S) {
            const auto &x = basis[i].satake.at(p), &y = basis[j].satake.at(p);
            if (std::abs(x.a - y.a) + std::abs(x.b - y.b) > 1e-8)
                throw std::invalid_argument("basis_invariance_check: '" + basis[i].label + "' and '" + basis[j].label +
                                            "' lie in different eigenspaces at p = " + std::to_string(p));
        }
    std::vector<cplx> a(basis.size());
    std::vector<double> n(basis.size());
    for (std::size_t t = 0; t < basis.size(); ++t) {
        a[t] = a_d_Lambda(basis[t].f, cg, character);
        n[t] = basis[t].petersson_norm;
    }
    BasisCheck out;
    out.before = weyl_panel(family_from(basis, a, n, k, N, S, cg, character), cg, character);
    // unit vectors w = v / sqrt(<v,v>), then u = U w, which again has norm 1
    cplx wi = a[i] / std::sqrt(n[i]), wj = a[j] / std::sqrt(n[j]);
    auto a2 = a;
    auto n2 = n;
    a2[i] = U[0][0] * wi + U[0][1] * wj;
    a2[j] = U[1][0] * wi + U[1][1] * wj;
    n2[i] = n2[j] = 1;
    out.after = weyl_panel(family_from(basis, a2, n2, k, N, S, cg, character), cg, character);
    for (std::size_t t = 0; t < out.before.size(); ++t)
        out.max_difference = std::max(out.max_difference, std::abs(out.before[t].sum - out.after[t].sum));
    return out;
}

}  // namespace siegel
