#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "siegel/bessel_measure.hpp"
#include "siegel/fourier.hpp"
#include "siegel/hecke.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

// vol(Sp4(Z)\H_2) = pi^3/270 for the measure det(Y)^{-3} dX dY
double volume_level_one();
// [Sp4(Z) : Gamma_0(N)] = N^3 prod_{p | N} (1 + 1/p)(1 + 1/p^2)
i64 gamma0_index(i64 N);
double volume(i64 N);
// |Sp4(Z/N)| and #{g in Sp4(Z/N) : C = 0}, by enumeration (N <= 3)
std::pair<i64, i64> sp4_enumerate(i64 N);

// sqrt(pi)(4pi)^{3-2k} Gamma(k-3/2) Gamma(k-2) (d/4)^{-k+3/2} d_Lambda / (w h)
double c_k_d_Lambda(int k, const ClassGroupData& cg, std::size_t character);

// sum_c conj(Lambda(c)) a(S_c; f); reps overrides the stored class representatives
cplx a_d_Lambda(const FourierExpansion& f, const ClassGroupData& cg, std::size_t character,
                const std::vector<QuadForm>* reps = nullptr);

// forms of discriminant -d M^2 (the order of conductor M) and their images in Cl_d; M = 1 or prime
struct RayClassData {
    i64 d = 0, M = 1;
    std::vector<QuadForm> forms;
    std::vector<std::size_t> projection;
    std::size_t order() const { return forms.size(); }
};

RayClassData ray_class_group(const ClassGroupData& cg, i64 M);
// h M prod_{p | M}(1 - (-d/p)/p) / [O^* : O_M^*]
i64 ray_class_order_formula(const ClassGroupData& cg, i64 M);

double weight_omega(const FourierExpansion& f, i64 N, const ClassGroupData& cg, std::size_t character,
                    std::optional<double> petersson_norm);

struct FamilyMember {
    std::string label;
    std::map<i64, SatakeParams> satake;
    double omega = 0;
};

struct WeightedFamily {
    int k = 10;
    i64 N = 1;
    std::vector<i64> S;
    std::vector<FamilyMember> members;
};

struct WeylSumResult {
    std::map<i64, SuganoIndex> indices;
    i64 L = 1, M = 1;
    cplx sum = 0;
    double target = 0;
    double error_scale = 0;  // N^{-1} k^{-2/3} L^{1+eps} M^{3/2+eps}, a scale only
};

WeylSumResult weyl_sum(const WeightedFamily& fam, const ClassGroupData& cg, std::size_t character,
                       const std::map<i64, SuganoIndex>& indices, double eps = 0.01);
// every index combination over S
std::vector<WeylSumResult> weyl_panel(const WeightedFamily& fam, const ClassGroupData& cg, std::size_t character);
std::string weyl_panel_csv(const std::vector<WeylSumResult>& panel);

struct IdentityCheck {
    cplx lhs = 0, rhs = 0;
    double term_scale = 0;  // h/|Cl_d(M)| sum |a(S_c^{L,M}; f)|
    // abs_error / max(|lhs|, |rhs|, term_scale)
    double abs_error = 0, rel_error = 0;
};

// lhs = h/|Cl_d(M)| sum conj(Lambda(c)) a(S_c^{L,M}; f), rhs = L^{k-3/2} M^{k-2} a(d,Lambda;f) U_p^{l,m}(a_p, b_p)
IdentityCheck bessel_identity_check(const FourierExpansion& f, i64 p, int l, int m, const ClassGroupData& cg,
                                    std::size_t character, const SatakeParams& satake);

// an eigenform with everything the weights need
struct SpectralForm {
    std::string label;
    FourierExpansion f;
    double petersson_norm = 1;
    std::map<i64, SatakeParams> satake;
};

struct BasisCheck {
    double max_difference = 0;
    std::vector<WeylSumResult> before, after;
};

// replaces members i, j of an orthogonal basis by the unitary remix U of their unit vectors and
// compares the weyl panels; throws if U is not unitary or the two forms have different Satake data
BasisCheck basis_invariance_check(const std::vector<SpectralForm>& basis, std::size_t i, std::size_t j,
                                  const std::array<std::array<cplx, 2>, 2>& U, int k, i64 N, const std::vector<i64>& S,
                                  const ClassGroupData& cg, std::size_t character);

}  // namespace siegel
