#include "siegel/density.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "siegel/bessel_measure.hpp"

namespace siegel {

cplx digamma(cplx z) {
    if (z.real() <= 0 && z.imag() == 0 && z.real() == std::floor(z.real()))
        throw std::domain_error("digamma: pole");
    if (z.real() < 0.5) return digamma(1.0 - z) - kPi / std::tan(kPi * z);
    cplx acc = 0;
    while (std::abs(z) < 12 || z.real() < 12) {
        acc -= 1.0 / z;
        z += 1.0;
    }
    // B_{2n} / (2n)
    static const double c[] = {1.0 / 12, -1.0 / 120, 1.0 / 252, -1.0 / 240, 1.0 / 132, -691.0 / 32760, 1.0 / 12};
    cplx w = 1.0 / (z * z), p = w, s = 0;
    for (double ci : c) {
        s += ci * p;
        p *= w;
    }
    return acc + std::log(z) - 0.5 / z - s;
}

TestFunction fejer_test_function(double beta) {
    if (!(beta > 0)) throw std::domain_error("fejer_test_function: beta must be positive");
    TestFunction t;
    t.name = "fejer";
    t.alpha = beta;
    t.phi = [beta](double x) {
        double u = kPi * beta * x;
        if (std::abs(u) < 1e-8) return 1.0 - u * u / 3;
        double s = std::sin(u) / u;
        return s * s;
    };
    t.phi_hat = [beta](double x) { return std::max(0.0, 1 - std::abs(x) / beta) / beta; };
    return t;
}

TestFunction zero_test_function(double alpha) {
    TestFunction t;
    t.name = "zero";
    t.alpha = alpha;
    t.phi = [](double) { return 0.0; };
    t.phi_hat = [](double) { return 0.0; };
    return t;
}

double symplectic_kernel(double x) {
    double u = 2 * kPi * x;
    if (std::abs(u) < 1e-6) return u * u / 6;
    return 1 - std::sin(u) / u;
}

double symplectic_prediction(const TestFunction& phi) {
    if (phi.alpha > 1) throw std::domain_error("symplectic_prediction: phi_hat support exceeds [-1, 1]");
    return phi.phi_hat(0) - 0.5 * phi.phi(0);
}

bool LFunctionLocalData::is_ramified(i64 p) const {
    return std::find(ramified.begin(), ramified.end(), p) != ramified.end();
}

void LFunctionLocalData::validate(double tol) const {
    for (const auto& [p, a] : alpha) {
        for (const auto& x : a)
            if (std::abs(x) > std::sqrt(double(p)) * (1 + tol))
                throw std::domain_error("LFunctionLocalData: |alpha| exceeds sqrt(p) at p = " + std::to_string(p));
        for (const auto& x : a) {
            if (std::abs(x) <= tol) continue;
            bool found = false;
            for (const auto& y : a) found = found || std::abs(x * y - 1.0) <= tol * std::max(1.0, std::abs(x));
            if (!found) throw std::domain_error("LFunctionLocalData: not closed under inversion at p = " + std::to_string(p));
        }
    }
}

std::array<cplx, 4> local_factors(const SatakeParams& s) { return {s.a, 1.0 / s.a, s.b, 1.0 / s.b}; }

LFunctionLocalData local_data_from_satake(const std::map<i64, SatakeParams>& satake, double k,
                                          std::optional<double> conductor, bool cap) {
    LFunctionLocalData d;
    d.k = k;
    d.conductor = conductor;
    d.cap = cap;
    for (const auto& [p, s] : satake) d.alpha[p] = local_factors(s);
    return d;
}

double moment(const std::array<cplx, 4>& alpha, int m) {
    if (m < 1) throw std::domain_error("moment: m must be positive");
    cplx s = 0;
    for (const auto& x : alpha) s += std::pow(x, m);
    return s.real();
}

double moment(const LFunctionLocalData& data, i64 p, int m) {
    auto it = data.alpha.find(p);
    if (it == data.alpha.end()) throw std::out_of_range("moment: no local data at p = " + std::to_string(p));
    return moment(it->second, m);
}

namespace {

using GL = boost::math::quadrature::gauss<double, 20>;

double gamma_integrand(double k, double logC, double x) {
    cplx iy(0, 2 * kPi * x / logC);
    return 2 * (digamma(1.0 + iy) + digamma(k - 1 + iy)).real() - 4 * std::log(2 * kPi);
}

// period-averaged phi far out: sin^2 -> 1/2 for the Fejer family
double phi_envelope(const TestFunction& phi, double x) {
    if (phi.name == "fejer") return 0.5 / std::pow(kPi * phi.alpha * x, 2);
    return 0;
}

double gamma_tail(double k, double logC, const TestFunction& phi, double X) {
    // x = X / u on (0, 1]
    double s = 0;
    for (int j = 0; j < 80; ++j) {
        double a = std::ldexp(1.0, -j - 1), b = std::ldexp(1.0, -j);
        s += GL::integrate(
            [&](double u) { return gamma_integrand(k, logC, X / u) * phi_envelope(phi, X / u) * X / (u * u); }, a, b);
    }
    return s;
}

void check_gamma_args(double k, double logC) {
    if (!(k >= 6)) throw std::domain_error("gamma_term: k must be >= 6");
    if (!(logC > 0)) throw std::domain_error("gamma_term: logC must be positive");
}

}  // namespace

ArchimedeanTerm gamma_term(double k, double logC, const TestFunction& phi, int periods) {
    check_gamma_args(k, logC);
    ArchimedeanTerm t;
    t.leading = phi.phi_hat(0) * std::log(k * k) / logC;
    double h = 1 / phi.alpha, s = 0;
    for (int j = 0; j < periods; ++j)
        s += GL::integrate([&](double x) { return gamma_integrand(k, logC, x) * phi.phi(x); }, j * h, (j + 1) * h);
    t.tail = gamma_tail(k, logC, phi, periods * h);
    t.exact = 2 * (s + t.tail) / logC;
    if (!std::isfinite(t.exact)) throw std::runtime_error("gamma_term: quadrature failure");
    return t;
}

double gamma_term_full_line(double k, double logC, const TestFunction& phi, int periods) {
    check_gamma_args(k, logC);
    double h = 1 / phi.alpha, s = 0;
    for (int j = -periods; j < periods; ++j)
        s += GL::integrate([&](double x) { return gamma_integrand(k, logC, x) * phi.phi(x); }, j * h, (j + 1) * h);
    s += 2 * gamma_tail(k, logC, phi, periods * h);
    return s / logC;
}

double log_conductor(const DensityFamily& fam) {
    if (fam.members.empty()) throw std::domain_error("log_conductor: empty family");
    double num = 0, den = 0;
    for (const auto& m : fam.members) {
        if (!m.local.conductor) throw std::domain_error("log_conductor: missing conductor for " + m.label);
        num += m.omega * std::log(*m.local.conductor * m.local.k * m.local.k);
        den += m.omega;
    }
    if (den == 0) throw std::domain_error("log_conductor: total weight is zero");
    return num / den;
}

namespace {

i64 support_limit(const TestFunction& phi, double logC) { return i64(std::floor(std::exp(phi.alpha * logC) + 1e-9)); }

void check_coverage(const TestFunction& phi, double logC, i64 p_max) {
    if (!(logC > 0)) throw std::domain_error("prime_sum: logC must be positive");
    if (p_max < support_limit(phi, logC))
        throw std::domain_error("prime_sum: p_max = " + std::to_string(p_max) + " does not cover exp(alpha logC) = " +
                                std::to_string(std::exp(phi.alpha * logC)));
}

double prime_weight(const TestFunction& phi, double logC, i64 p, int m) {
    double lp = std::log(double(p));
    return 2 / logC * lp * std::pow(double(p), -0.5 * m) * phi.phi_hat(m * lp / logC);
}

std::uint64_t shard_seed(std::uint64_t seed, i64 p) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * std::uint64_t(p);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double torus_moment(double t1, double t2, int m) { return 2 * std::cos(m * t1) + 2 * std::cos(m * t2); }

}  // namespace

PrimeSum prime_sum(const DensityFamily& fam, int m, const TestFunction& phi, double logC, i64 p_max) {
    if (m < 1) throw std::domain_error("prime_sum: m must be positive");
    check_coverage(phi, logC, p_max);
    PrimeSum out;
    double total_w = 0;
    for (const auto& f : fam.members) total_w += f.omega;
    if (fam.members.empty() || total_w == 0) return out;
    for (i64 p : primes_upto(p_max)) {
        double w = prime_weight(phi, logC, p, m);
        if (w == 0) continue;
        ++out.primes;
        double avg = 0, ram = 0;
        for (const auto& f : fam.members) {
            bool ramified = f.local.is_ramified(p);
            if (ramified && f.local.cap && !fam.include_cap_ramified) continue;
            double c = moment(f.local, p, m);
            avg += f.omega * c;
            if (ramified) {
                ram += f.omega * c;
                if (!f.local.cap && std::abs(c) > 4 * std::pow(double(p), m * fam.theta) * (1 + 1e-12))
                    ++out.ramified_violations;
            }
        }
        out.value += w * avg / total_w;
        out.ramified += w * ram / total_w;
    }
    return out;
}

PrimeSum prime_sum(const MeasureSampler& mc, int m, const TestFunction& phi, double logC, i64 p_max) {
    if (m < 1) throw std::domain_error("prime_sum: m must be positive");
    if (mc.draws < 2) throw std::domain_error("prime_sum: need at least two draws per prime");
    check_coverage(phi, logC, p_max);
    auto cg = class_group(mc.d);
    PrimeSum out;
    double var = 0;
    for (i64 p : primes_upto(p_max)) {
        double w = prime_weight(phi, logC, p, m);
        if (w == 0) continue;
        ++out.primes;
        auto loc = local_bessel_data(cg, mc.character, p);
        auto draws = sample(loc, mc.draws, shard_seed(mc.seed, p));
        double s = 0, s2 = 0;
        for (const auto& [t1, t2] : draws) {
            double c = torus_moment(t1, t2, m);
            s += c;
            s2 += c * c;
        }
        double n = double(draws.size()), mean = s / n;
        out.value += w * mean;
        var += w * w * (s2 / n - mean * mean) / (n - 1);
        out.expected += w * integrate(loc, [m](double t1, double t2) { return torus_moment(t1, t2, m); }).value;
    }
    out.sigma = std::sqrt(var);
    return out;
}

namespace {

// m >= 3 terms, summed and crudely bounded, for parameters of size at most A_p
template <class MomentFn, class SizeFn>
std::pair<double, double> higher_terms(const TestFunction& phi, double logC, i64 p_max, MomentFn moment_at, SizeFn size_at) {
    double sum = 0, bound = 0;
    for (i64 p : primes_upto(p_max))
        for (int m = 3;; ++m) {
            double w = prime_weight(phi, logC, p, m);
            if (w == 0) break;
            sum += w * moment_at(p, m);
            double lp = std::log(double(p));
            bound += 2 / logC * lp * 4 * std::pow(size_at(p) / std::sqrt(double(p)), m) * phi.phi_hat(0);
        }
    return {sum, bound};
}

void finish(DensityRunReport& r, const TestFunction& phi) {
    r.archimedean_correction = r.archimedean.exact - r.archimedean.leading;
    r.total = r.conductor_term + r.archimedean_correction - r.m1.value - r.m2.value - r.m3_sum;
    r.predicted = symplectic_prediction(phi);
    r.deviation = std::abs(r.total - r.predicted);
    r.paper_regime = phi.paper_regime();
}

DensityRunReport mc_density(const MeasureSampler& mc, const TestFunction& phi, double logC, i64 p_max, bool parallel) {
    if (p_max == 0) p_max = support_limit(phi, logC);
    check_coverage(phi, logC, p_max);
    if (mc.draws < 2) throw std::domain_error("one_level_density: need at least two members");
    auto cg = class_group(mc.d);
    DensityRunReport r;
    r.logC = logC;
    r.phi_hat0 = phi.phi_hat(0);
    r.phi0 = phi.phi(0);
    r.members = mc.draws;
    r.conductor_term = r.phi_hat0;
    r.archimedean = gamma_term(std::exp(logC / 2), logC, phi);

    const std::size_t n = mc.draws;
    std::vector<double> d1(n, 0.0), d2(n, 0.0), d3(n, 0.0);
    double e1 = 0, e2 = 0;
    for (i64 p : primes_upto(p_max)) {
        double w1 = prime_weight(phi, logC, p, 1);
        if (w1 == 0) continue;
        ++r.m1.primes;
        double w2 = prime_weight(phi, logC, p, 2);
        if (w2 != 0) ++r.m2.primes;
        auto loc = local_bessel_data(cg, mc.character, p);
        auto seed = shard_seed(mc.seed, p);
        auto draws = parallel ? sample(loc, n, seed) : sample_serial(loc, n, seed);
        std::vector<double> w;
        for (int m = 3;; ++m) {
            double x = prime_weight(phi, logC, p, m);
            if (x == 0) break;
            w.push_back(x);
        }
        double c1 = 0, c2 = 0;
        std::vector<double> ch(w.size(), 0.0);
        for (const auto& [t1, t2] : draws) {
            c1 += torus_moment(t1, t2, 1);
            c2 += torus_moment(t1, t2, 2);
            for (std::size_t j = 0; j < w.size(); ++j) ch[j] += torus_moment(t1, t2, int(j) + 3);
        }
        double lp = std::log(double(p));
        r.lines.push_back({lp / logC, 2 / logC * lp / std::sqrt(double(p)) * c1 / double(n)});
        if (w2 != 0) r.lines.push_back({2 * lp / logC, 2 / logC * lp / double(p) * c2 / double(n)});
        for (std::size_t j = 0; j < w.size(); ++j)
            r.lines.push_back({double(j + 3) * lp / logC, 2 / logC * lp * std::pow(double(p), -0.5 * double(j + 3)) * ch[j] / double(n)});
        auto member = [&](std::size_t i) {
            auto [t1, t2] = draws[i];
            d1[i] += w1 * torus_moment(t1, t2, 1);
            d2[i] += w2 * torus_moment(t1, t2, 2);
            for (std::size_t j = 0; j < w.size(); ++j) d3[i] += w[j] * torus_moment(t1, t2, int(j) + 3);
        };
        if (parallel) {
#pragma omp parallel for schedule(static)
            for (std::size_t i = 0; i < n; ++i) member(i);
        } else {
            for (std::size_t i = 0; i < n; ++i) member(i);
        }
        e1 += w1 * integrate(loc, [](double t1, double t2) { return torus_moment(t1, t2, 1); }).value;
        if (w2 != 0) e2 += w2 * integrate(loc, [](double t1, double t2) { return torus_moment(t1, t2, 2); }).value;
    }
    auto mean_sd = [n](const std::vector<double>& v) {
        double s = 0, s2 = 0;
        for (double x : v) {
            s += x;
            s2 += x * x;
        }
        double mean = s / double(n);
        return std::make_pair(mean, std::sqrt(std::max(0.0, s2 / double(n) - mean * mean) / double(n - 1)));
    };
    std::tie(r.m1.value, r.m1.sigma) = mean_sd(d1);
    std::tie(r.m2.value, r.m2.sigma) = mean_sd(d2);
    r.m1.expected = e1;
    r.m2.expected = e2;
    r.m3_sum = mean_sd(d3).first;
    r.m3_bound = higher_terms(phi, logC, p_max, [](i64, int) { return 0.0; }, [](i64) { return 1.0; }).second;
    std::vector<double> tot(n);
    for (std::size_t i = 0; i < n; ++i) tot[i] = d1[i] + d2[i] + d3[i];
    r.sigma = mean_sd(tot).second;
    finish(r, phi);
    return r;
}

}  // namespace

DensityRunReport one_level_density(const DensityFamily& fam, const TestFunction& phi, double logC, i64 p_max) {
    if (fam.members.empty()) throw std::domain_error("one_level_density: empty family");
    if (p_max == 0) p_max = support_limit(phi, logC);
    DensityRunReport r;
    r.logC = logC;
    r.phi_hat0 = phi.phi_hat(0);
    r.phi0 = phi.phi(0);
    r.members = fam.members.size();
    double total_w = 0;
    std::map<double, ArchimedeanTerm> arch;
    for (const auto& f : fam.members) {
        total_w += f.omega;
        if (!arch.count(f.local.k)) arch[f.local.k] = gamma_term(f.local.k, logC, phi);
    }
    if (total_w == 0) throw std::domain_error("one_level_density: total weight is zero");
    for (const auto& f : fam.members) {
        if (!f.local.conductor) throw std::domain_error("one_level_density: missing conductor for " + f.label);
        double c = f.omega / total_w;
        r.conductor_term += c * r.phi_hat0 * std::log(*f.local.conductor * f.local.k * f.local.k) / logC;
        r.archimedean.exact += c * arch[f.local.k].exact;
        r.archimedean.leading += c * arch[f.local.k].leading;
        r.archimedean.tail += c * arch[f.local.k].tail;
    }
    r.m1 = prime_sum(fam, 1, phi, logC, p_max);
    r.m2 = prime_sum(fam, 2, phi, logC, p_max);
    auto [s3, b3] = higher_terms(
        phi, logC, p_max,
        [&](i64 p, int m) {
            double avg = 0;
            for (const auto& f : fam.members) {
                if (f.local.cap && !fam.include_cap_ramified && f.local.is_ramified(p)) continue;
                avg += f.omega * moment(f.local, p, m);
            }
            return avg / total_w;
        },
        [&](i64 p) {
            double a = 0;
            for (const auto& f : fam.members)
                for (const auto& x : f.local.alpha.at(p)) a = std::max(a, std::abs(x));
            return a;
        });
    r.m3_sum = s3;
    r.m3_bound = b3;
    for (i64 p : primes_upto(p_max))
        for (int m = 1; prime_weight(phi, logC, p, m) != 0; ++m) {
            double avg = 0;
            for (const auto& f : fam.members) {
                if (f.local.cap && !fam.include_cap_ramified && f.local.is_ramified(p)) continue;
                avg += f.omega * moment(f.local, p, m);
            }
            double lp = std::log(double(p));
            r.lines.push_back({m * lp / logC, 2 / logC * lp * std::pow(double(p), -0.5 * m) * avg / total_w});
        }
    finish(r, phi);
    return r;
}

DensityRunReport one_level_density(const MeasureSampler& mc, const TestFunction& phi, double logC, i64 p_max) {
    return mc_density(mc, phi, logC, p_max, true);
}

DensityRunReport one_level_density_serial(const MeasureSampler& mc, const TestFunction& phi, double logC, i64 p_max) {
    return mc_density(mc, phi, logC, p_max, false);
}

std::string to_json(const DensityRunReport& r) {
    auto ps = [](const PrimeSum& s) {
        return nlohmann::json{{"value", s.value},       {"sigma", s.sigma},
                              {"expected", s.expected}, {"ramified", s.ramified},
                              {"primes", s.primes},     {"ramified_violations", s.ramified_violations}};
    };
    nlohmann::json j;
    j["logC"] = r.logC;
    j["phi_hat0"] = r.phi_hat0;
    j["phi0"] = r.phi0;
    j["conductor_term"] = r.conductor_term;
    j["archimedean"] = {{"exact", r.archimedean.exact},
                        {"leading", r.archimedean.leading},
                        {"tail", r.archimedean.tail},
                        {"correction", r.archimedean_correction}};
    j["m1"] = ps(r.m1);
    j["m2"] = ps(r.m2);
    j["m3"] = {{"sum", r.m3_sum}, {"bound", r.m3_bound}};
    j["total"] = r.total;
    j["sigma"] = r.sigma;
    j["predicted"] = r.predicted;
    j["deviation"] = r.deviation;
    j["members"] = r.members;
    j["paper_regime"] = r.paper_regime;
    j["note"] = "zeros are never computed: every term is the prime-sum side of the explicit formula";
    return j.dump(2);
}

std::string density_csv(const DensityRunReport& r, const TestFunction& phi, int n) {
    std::ostringstream os;
    os << "x,wsp,wsp_band,empirical\n";
    os.precision(12);
    double base = r.phi_hat0 == 0 ? 1 : r.conductor_term / r.phi_hat0;
    for (int i = 0; i < n; ++i) {
        double x = 3.0 * i / std::max(1, n - 1);
        double u = 2 * kPi * x;
        double band = std::abs(u) < 1e-9 ? 1 - phi.alpha : 1 - std::sin(phi.alpha * u) / u;
        double emp = base;
        for (const auto& [t, w] : r.lines) emp -= w * std::cos(u * t);
        os << x << ',' << symplectic_kernel(x) << ',' << band << ',' << emp << '\n';
    }
    return os.str();
}

}  // namespace siegel
