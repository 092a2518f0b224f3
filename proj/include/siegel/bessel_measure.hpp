#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/quadform.hpp"

namespace siegel {

// local data at p for the Bessel model (d, Lambda): (-d/p) and lambda_p (always real)
struct LocalBesselData {
    i64 p = 2;
    i64 d = 4;
    int chi = 0;
    double lambda = 0;
};

LocalBesselData local_bessel_data(const ClassGroupData& cg, std::size_t character, i64 p);

struct SuganoIndex {
    int l = 0, m = 0;
};
bool supported(SuganoIndex idx);
const std::vector<SuganoIndex>& supported_indices();

// Corrected U^{2,0} integrates to zero; AsPrinted keeps "2 tau + 2"
enum class U20Form { Corrected, AsPrinted };

// sigma = a + b + 1/a + 1/b, tau = 1 + ab + b/a + a/b + 1/(ab)
std::pair<cplx, cplx> sigma_tau(cplx a, cplx b);

cplx sugano_U(SuganoIndex idx, const LocalBesselData& loc, cplx a, cplx b, U20Form form = U20Form::Corrected);
double sugano_U_angles(SuganoIndex idx, const LocalBesselData& loc, double t1, double t2,
                       U20Form form = U20Form::Corrected);

double delta_factor(const LocalBesselData& loc, double t1, double t2);
// (4/pi^2)(cos t1 - cos t2)^2 sin^2 t1 sin^2 t2
double sato_tate_density(double t1, double t2);

// Literal: the displayed density. Probability: scaled by 4 so the fundamental domain has mass 1.
enum class Normalization { Literal, Probability };
double mu_density(const LocalBesselData& loc, double t1, double t2, Normalization n = Normalization::Literal);
// smallest Delta on an n x n grid of [0, pi]^2
double delta_grid_minimum(const LocalBesselData& loc, int n = 256);

struct QuadratureResult {
    double value = 0;
    double error = 0;
    int panels = 0;
};

using AngleFn = std::function<double(double, double)>;

// adaptive tensor Gauss-Legendre over 0 <= t1 <= t2 <= pi
QuadratureResult integrate_triangle(const AngleFn& g, double tol = 1e-12, int max_panels = 1 << 16);
// integral of phi against the probability-normalized mu_{p,d,Lambda}
QuadratureResult integrate(const LocalBesselData& loc, const AngleFn& phi, double tol = 1e-10);
QuadratureResult integrate_sato_tate(const AngleFn& phi, double tol = 1e-10);

// i.i.d. draws (t1 <= t2) from mu_{p,d,Lambda}; deterministic in seed
std::vector<std::pair<double, double>> sample(const LocalBesselData& loc, std::size_t n, std::uint64_t seed);
std::vector<std::pair<double, double>> sample_serial(const LocalBesselData& loc, std::size_t n, std::uint64_t seed);

// rows "t1,t2,density" on an n x n grid of the fundamental domain
std::string density_csv(const LocalBesselData& loc, int n, Normalization norm = Normalization::Literal);

}  // namespace siegel
