#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "siegel/fourier.hpp"

namespace siegel {

enum class HeckeKind { Tp, T1p2 };

using Mat4 = std::array<std::array<i64, 4>, 4>;

// g = [[lam D^{-T}, X D], [0, D]] with D = [[d1, e], [0, d2]] and X = x / lam symmetric
struct Coset {
    i64 d1 = 1, e = 0, d2 = 1;
    i64 x11 = 0, x12 = 0, x22 = 0;
    Mat4 matrix(i64 lam) const;
};

struct HeckeOperator {
    HeckeKind kind = HeckeKind::Tp;
    i64 p = 2;
    i64 lam = 2;  // multiplier: p or p^2
    std::vector<Coset> cosets;

    // largest det(T') / det(T) among the coefficients a(T') entering a(T; f|T)
    i64 det_growth() const;
    std::string name() const;
};

HeckeOperator coset_reps(HeckeKind kind, i64 p);
// g^t J g == lam J
bool is_similitude(const Mat4& g, i64 lam);
int rank_mod_p(const Mat4& g, i64 p);
std::string dump_cosets(const HeckeOperator& op);
// number of symplectic lattices between p L and L (resp. the T1 family) by counting subspaces
// of F_p^4; independent of the coset construction
i64 lattice_count(HeckeKind kind, i64 p);

// f|T on every key with det <= f.det_bound / det_growth
FourierExpansion apply(const HeckeOperator& op, const FourierExpansion& f);
FourierExpansion apply_serial(const HeckeOperator& op, const FourierExpansion& f);
// single coefficient of f|T; throws std::out_of_range if f is too short
Rat hecke_coefficient(const HeckeOperator& op, const FourierExpansion& f, const QuadForm& T);

struct EigenvalueResult {
    Rat value;
    std::size_t keys_checked = 0;
};

// ratio a(T; f|T) / a(T; f), required identical on all reachable keys
EigenvalueResult eigenvalue(const FourierExpansion& f, HeckeKind kind, i64 p);

struct SatakeParams {
    cplx a{1, 0}, b{1, 0};
};

SatakeParams weyl_canonicalize(cplx a, cplx b);
std::array<std::pair<cplx, cplx>, 8> weyl_orbit(cplx a, cplx b);

// sigma = p^{3/2-k} lambda(p), tau = p^{4-2k} lambda_1(p^2) + p^{-2}
SatakeParams satake_from_eigenvalues(double lambda_p, double lambda1_p2, int k, i64 p);
std::pair<double, double> eigenvalues_from_satake(const SatakeParams& s, int k, i64 p);

}  // namespace siegel
