#pragma once

#include <array>
#include <string>

#include "siegel/arith.hpp"
#include "siegel/fourier.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

// sum_{x mod c} e((a x^2 + b x)/c), exact
CycloSum gauss_sum(i64 a, i64 b, i64 c);
// |gauss_sum(a,b,c)|^2 as an exact rational
Rat gauss_sum_norm2(i64 a, i64 b, i64 c);

double besselJ(double nu, double x);
// frozen constants of the two regime inequalities
//   |J_nu(x)| <= kBesselSmallC x^nu / Gamma(nu + 1) for 0 <= x <= sqrt(nu + 1)
//   |J_nu(x)| <= kBesselLargeC nu^{-1/3} for x >= 1
inline constexpr double kBesselSmallC = 1.0;
inline constexpr double kBesselLargeC = 0.6749;

// last term of the rank-one phase: d4 p2 s2 (class invariant) or d2 p2 s2 as displayed
enum class PhaseForm { Corrected, AsPrinted };

struct PoincareSpec {
    QuadForm Q{1, 1, 1};
    i64 N = 1;
    int k = 10;
    i64 c_max = 20;
    i64 m_max = 20;
    i64 a1_shift = 0;  // replaces a1 by a1 + a1_shift * N c
    i64 completion_shift = 0;  // replaces the second column w of V by w + completion_shift * v
    PhaseForm phase = PhaseForm::Corrected;
    void validate() const;
};

i64 rank0(const QuadForm& T, const QuadForm& Q);

struct Rank1Budget {
    double partial = 0;
    double partial_imag = 0;
    double tail = 0;  // regime bounds over the cells (c, m) outside the box, constants 1
    std::array<long, 3> regime_cells{};  // R11, R12, R13 cells counted in the tail
    long terms = 0;
};

Rank1Budget rank1_partial(const QuadForm& T, const PoincareSpec& spec);

struct CoefficientEstimate {
    i64 rank0 = 0;
    Rank1Budget rank1;
    double rank2_scale = 0;  // N^{-2} k^{-2/3} |T|^{k/2 - 1/4 + eps}
    double value = 0;
    double budget = 0;  // rank1 tail + rank2 scale
};

CoefficientEstimate coefficient_estimate(const QuadForm& T, const PoincareSpec& spec, double eps = 0.01);
// {rank0, rank1_partial, rank1_tail, rank2_scale, total, params}
std::string to_json(const CoefficientEstimate& e, const QuadForm& T, const PoincareSpec& spec);

struct RatioCheck {
    double lhs = 0, rhs = 0, gap = 0, budget = 0;
    CoefficientEstimate e1, e2;
};

// a(T1; G_Q) / a(T2; G_Q) against a(T1; f) / a(T2; f) in a one-dimensional space
RatioCheck ratio_oracle(const QuadForm& T1, const QuadForm& T2, const PoincareSpec& spec, const FourierExpansion& f);

}  // namespace siegel
