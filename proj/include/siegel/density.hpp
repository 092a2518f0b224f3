#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siegel/arith.hpp"
#include "siegel/hecke.hpp"

namespace siegel {

cplx digamma(cplx z);

struct TestFunction {
    std::string name;
    double alpha = 0;  // phi_hat vanishes outside [-alpha, alpha]
    std::function<double(double)> phi, phi_hat;
    bool paper_regime() const { return alpha < 2.0 / 9; }
};

// phi(x) = (sin(pi b x) / (pi b x))^2, phi_hat(t) = max(0, 1 - |t|/b) / b
TestFunction fejer_test_function(double beta);
TestFunction zero_test_function(double alpha);

double symplectic_kernel(double x);
// integral of phi(x) (1 - sin(2 pi x)/(2 pi x)) for phi_hat supported in [-1, 1]
double symplectic_prediction(const TestFunction& phi);

inline constexpr double kDefaultTheta = 0.4375;

struct LFunctionLocalData {
    double k = 10;
    std::optional<double> conductor;
    bool cap = false;
    std::map<i64, std::array<cplx, 4>> alpha;
    std::vector<i64> ramified;

    bool is_ramified(i64 p) const;
    // max |alpha_i(p)| <= p^{1/2}, multiset closed under inversion where nonzero
    void validate(double tol = 1e-9) const;
};

std::array<cplx, 4> local_factors(const SatakeParams& s);
LFunctionLocalData local_data_from_satake(const std::map<i64, SatakeParams>& satake, double k,
                                          std::optional<double> conductor, bool cap);

double moment(const LFunctionLocalData& data, i64 p, int m);
double moment(const std::array<cplx, 4>& alpha, int m);

struct ArchimedeanTerm {
    double exact = 0;    // digamma quadrature
    double leading = 0;  // phi_hat(0) log k^2 / logC
    double tail = 0;     // integral beyond the last full period
};

ArchimedeanTerm gamma_term(double k, double logC, const TestFunction& phi, int periods = 4000);
// the same integral over the whole line, no symmetry folding
double gamma_term_full_line(double k, double logC, const TestFunction& phi, int periods = 4000);

struct DensityMember {
    std::string label;
    double omega = 1;
    LFunctionLocalData local;
};

struct DensityFamily {
    std::vector<DensityMember> members;
    double theta = kDefaultTheta;
    bool include_cap_ramified = true;
};

double log_conductor(const DensityFamily& fam);

// sampler mode: every prime gets i.i.d. draws from mu_{p,d,Lambda}
struct MeasureSampler {
    i64 d = 4;
    std::size_t character = 0;
    std::size_t draws = 100000;
    std::uint64_t seed = 1;
};

struct PrimeSum {
    double value = 0;
    double sigma = 0;  // Monte Carlo standard error, 0 in family mode
    double expected = 0;  // exact mu-expectation in sampler mode
    double ramified = 0;  // ramified-prime part of value
    long ramified_violations = 0;  // ramified terms above the theta-shaped bound
    std::size_t primes = 0;
};

// (2/logC) sum_p log p <c(pi, p^m)> p^{-m/2} phi_hat(m log p / logC), hard error unless p_max >= exp(alpha logC)
PrimeSum prime_sum(const DensityFamily& fam, int m, const TestFunction& phi, double logC, i64 p_max);
PrimeSum prime_sum(const MeasureSampler& mc, int m, const TestFunction& phi, double logC, i64 p_max);

struct DensityRunReport {
    double logC = 0;
    double phi_hat0 = 0, phi0 = 0;
    double conductor_term = 0;  // phi_hat(0) <log C(pi)> / logC
    ArchimedeanTerm archimedean;
    double archimedean_correction = 0;  // exact - leading
    PrimeSum m1, m2;
    double m3_sum = 0, m3_bound = 0;
    double total = 0;
    double sigma = 0;
    double predicted = 0;  // integral of phi W(Sp)
    double deviation = 0;  // |total - predicted|
    std::size_t members = 0;
    bool paper_regime = false;
    // (m log p / logC, (2/logC) log p <c(pi, p^m)> p^{-m/2}) for every term inside the support
    std::vector<std::pair<double, double>> lines;
};

DensityRunReport one_level_density(const DensityFamily& fam, const TestFunction& phi, double logC, i64 p_max = 0);
// synthetic family of mc.draws members, local parameters drawn from mu_{p,d,Lambda} at every prime,
// conductor 1 and weight exp(logC / 2)
DensityRunReport one_level_density(const MeasureSampler& mc, const TestFunction& phi, double logC, i64 p_max = 0);
DensityRunReport one_level_density_serial(const MeasureSampler& mc, const TestFunction& phi, double logC,
                                          i64 p_max = 0);

std::string to_json(const DensityRunReport& r);
// rows "x,wsp,wsp_band,empirical": W(Sp)(x), its band-limited version 1 - sin(2 pi alpha x)/(2 pi x) and
// conductor_term / phi_hat(0) - sum over lines of weight cos(2 pi x t), whose pairing with phi is the
// report total without the archimedean correction
std::string density_csv(const DensityRunReport& r, const TestFunction& phi, int n = 201);

}  // namespace siegel
