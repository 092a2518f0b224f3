#include "siegel/bessel_measure.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace siegel {

LocalBesselData local_bessel_data(const ClassGroupData& cg, std::size_t character, i64 p) {
    if (!is_prime(p)) throw std::domain_error("local_bessel_data: p must be prime");
    LocalBesselData loc;
    loc.p = p;
    loc.d = cg.d;
    loc.chi = cg.chi(p);
    loc.lambda = lambda_p(cg, character, p).real();
    return loc;
}

const std::vector<SuganoIndex>& supported_indices() {
    static const std::vector<SuganoIndex> idx = {{0, 0}, {1, 0}, {2, 0}, {0, 1}};
    return idx;
}

bool supported(SuganoIndex idx) {
    for (const auto& s : supported_indices())
        if (s.l == idx.l && s.m == idx.m) return true;
    return false;
}

std::pair<cplx, cplx> sigma_tau(cplx a, cplx b) {
    if (a == cplx(0) || b == cplx(0)) throw std::domain_error("sigma_tau: zero argument");
    cplx sigma = a + b + 1.0 / a + 1.0 / b;
    cplx tau = 1.0 + a * b + b / a + a / b + 1.0 / (a * b);
    return {sigma, tau};
}

cplx sugano_U(SuganoIndex idx, const LocalBesselData& loc, cplx a, cplx b, U20Form form) {
    auto [sigma, tau] = sigma_tau(a, b);
    double p = double(loc.p), sp = std::sqrt(p), lam = loc.lambda;
    int chi = loc.chi;
    if (idx.l == 0 && idx.m == 0) return 1.0;
    if (idx.l == 1 && idx.m == 0) return sigma - lam / sp;
    if (idx.l == 2 && idx.m == 0) {
        cplx sq = a * a + b * b + 1.0 / (a * a) + 1.0 / (b * b);
        cplx mid = form == U20Form::Corrected ? tau + 1.0 : 2.0 * tau + 2.0;
        return sq + mid - lam * sigma / sp + double(chi) / p;
    }
    if (idx.l == 0 && idx.m == 1)
        return tau - (sp * lam * sigma - double(chi) * (tau - 1.0) - lam * lam) / (p - chi);
    throw std::invalid_argument("sugano_U: unsupported index (" + std::to_string(idx.l) + "," +
                                std::to_string(idx.m) + ")");
}

double sugano_U_angles(SuganoIndex idx, const LocalBesselData& loc, double t1, double t2, U20Form form) {
    return sugano_U(idx, loc, std::polar(1.0, t1), std::polar(1.0, t2), form).real();
}

double delta_factor(const LocalBesselData& loc, double t1, double t2) {
    double p = double(loc.p), sp = std::sqrt(p), lam = loc.lambda;
    auto one = [&](double t) {
        double c = std::cos(t);
        if (loc.chi == -1) return (1 + 1 / p) * (1 + 1 / p) - 4 * c * c / p;
        if (loc.chi == 1) return (1 - 1 / p) * (1 - 1 / p) + (2 * c * sp - lam) * (2 * c / sp - lam) / p;
        return 1 - 2 * lam * c / sp + 1 / p;
    };
    return one(t1) * one(t2);
}

double sato_tate_density(double t1, double t2) {
    double dc = std::cos(t1) - std::cos(t2), s1 = std::sin(t1), s2 = std::sin(t2);
    return 4 / (kPi * kPi) * dc * dc * s1 * s1 * s2 * s2;
}

double mu_density(const LocalBesselData& loc, double t1, double t2, Normalization n) {
    double del = delta_factor(loc, t1, t2);
    if (!(del > 0))
        throw std::domain_error("mu_density: Delta = " + std::to_string(del) + " at (" + std::to_string(t1) + ", " +
                                std::to_string(t2) + ") for p=" + std::to_string(loc.p));
    double v = (1 - double(loc.chi) / double(loc.p)) / del * sato_tate_density(t1, t2);
    return n == Normalization::Probability ? 4 * v : v;
}

double delta_grid_minimum(const LocalBesselData& loc, int n) {
    double m = INFINITY;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double t1 = kPi * i / (n - 1), t2 = kPi * j / (n - 1);
            m = std::min(m, delta_factor(loc, t1, t2));
        }
    return m;
}

namespace {

using GL = boost::math::quadrature::gauss<double, 15>;

struct Panel {
    double x0, x1, y0, y1;
};

// the triangle t1 <= t2 is the image of [0,1] x [0,pi] under (u, t2) -> (u t2, t2)
double panel_rule(const AngleFn& g, const Panel& P) {
    const auto& xs = GL::abscissa();
    const auto& ws = GL::weights();
    double hx = (P.x1 - P.x0) / 2, cx = (P.x1 + P.x0) / 2;
    double hy = (P.y1 - P.y0) / 2, cy = (P.y1 + P.y0) / 2;
    auto node = [&](std::size_t i, int s, double c, double h) {
        double x = i == 0 ? xs[0] : s * xs[i];
        return c + h * x;
    };
    double total = 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (int si : {1, -1}) {
            if (i == 0 && si == -1) continue;
            double u = node(i, si, cx, hx);
            for (std::size_t j = 0; j < xs.size(); ++j)
                for (int sj : {1, -1}) {
                    if (j == 0 && sj == -1) continue;
                    double t2 = node(j, sj, cy, hy);
                    total += ws[i] * ws[j] * g(u * t2, t2) * t2;
                }
        }
    return total * hx * hy;
}

}  // namespace

QuadratureResult integrate_triangle(const AngleFn& g, double tol, int max_panels) {
    QuadratureResult r;
    struct Item {
        Panel P;
        double est;
    };
    std::vector<Item> stack;
    Panel root{0, 1, 0, kPi};
    stack.push_back({root, panel_rule(g, root)});
    r.panels = 1;
    double area_total = kPi;
    while (!stack.empty()) {
        Item it = stack.back();
        stack.pop_back();
        const Panel& P = it.P;
        double mx = (P.x0 + P.x1) / 2, my = (P.y0 + P.y1) / 2;
        Panel ch[4] = {{P.x0, mx, P.y0, my}, {mx, P.x1, P.y0, my}, {P.x0, mx, my, P.y1}, {mx, P.x1, my, P.y1}};
        double sub[4], sum = 0;
        for (int i = 0; i < 4; ++i) sum += sub[i] = panel_rule(g, ch[i]);
        r.panels += 4;
        double area = (P.x1 - P.x0) * (P.y1 - P.y0);
        double err = std::abs(sum - it.est);
        if (err <= tol * area / area_total || r.panels > max_panels) {
            r.value += sum;
            r.error += err;
            continue;
        }
        for (int i = 0; i < 4; ++i) stack.push_back({ch[i], sub[i]});
    }
    if (r.panels > max_panels && r.error > tol)
        throw std::runtime_error("integrate_triangle: tolerance " + std::to_string(tol) + " not reached (error " +
                                 std::to_string(r.error) + ")");
    return r;
}

QuadratureResult integrate(const LocalBesselData& loc, const AngleFn& phi, double tol) {
    return integrate_triangle(
        [&](double t1, double t2) { return phi(t1, t2) * mu_density(loc, t1, t2, Normalization::Probability); }, tol);
}

QuadratureResult integrate_sato_tate(const AngleFn& phi, double tol) {
    return integrate_triangle([&](double t1, double t2) { return 4 * phi(t1, t2) * sato_tate_density(t1, t2); }, tol);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr int kShards = 64;

// sup of mu / (sin^2 t1 sin^2 t2) over a grid, padded
double envelope_constant(const LocalBesselData& loc) {
    double m = 0;
    const int n = 400;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            double t1 = kPi * i / n, t2 = kPi * j / n;
            double dc = std::cos(t1) - std::cos(t2);
            double v = (1 - double(loc.chi) / double(loc.p)) / delta_factor(loc, t1, t2) * 4 / (kPi * kPi) * dc * dc;
            m = std::max(m, v);
        }
    return 1.2 * m;
}

void sample_shard(const LocalBesselData& loc, double c, std::size_t count, std::uint64_t seed,
                  std::pair<double, double>* out) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto sin2_draw = [&]() {
        for (;;) {
            double t = kPi * U(rng), s = std::sin(t);
            if (U(rng) < s * s) return t;
        }
    };
    for (std::size_t i = 0; i < count;) {
        double t1 = sin2_draw(), t2 = sin2_draw();
        double dc = std::cos(t1) - std::cos(t2);
        double ratio = (1 - double(loc.chi) / double(loc.p)) / delta_factor(loc, t1, t2) * 4 / (kPi * kPi) * dc * dc;
        if (ratio > c) throw std::runtime_error("sample: envelope constant too small");
        if (U(rng) * c < ratio) out[i++] = t1 <= t2 ? std::make_pair(t1, t2) : std::make_pair(t2, t1);
    }
}

std::vector<std::pair<double, double>> sample_impl(const LocalBesselData& loc, std::size_t n, std::uint64_t seed,
                                                   bool parallel) {
    std::vector<std::pair<double, double>> out(n);
    double c = envelope_constant(loc);
    std::vector<std::size_t> start(kShards + 1, 0);
    for (int s = 0; s < kShards; ++s) start[s + 1] = start[s] + n / kShards + (std::size_t(s) < n % kShards ? 1 : 0);
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (int s = 0; s < kShards; ++s)
            sample_shard(loc, c, start[s + 1] - start[s], splitmix(seed + s), out.data() + start[s]);
    } else {
        for (int s = 0; s < kShards; ++s)
            sample_shard(loc, c, start[s + 1] - start[s], splitmix(seed + s), out.data() + start[s]);
    }
    return out;
}

}  // namespace

std::vector<std::pair<double, double>> sample(const LocalBesselData& loc, std::size_t n, std::uint64_t seed) {
    return sample_impl(loc, n, seed, true);
}

std::vector<std::pair<double, double>> sample_serial(const LocalBesselData& loc, std::size_t n, std::uint64_t seed) {
    return sample_impl(loc, n, seed, false);
}

std::string density_csv(const LocalBesselData& loc, int n, Normalization norm) {
    std::ostringstream os;
    os.precision(12);
    os << "theta1,theta2,density\n";
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double t1 = kPi * i / (n - 1), t2 = kPi * j / (n - 1);
            os << t1 << "," << t2 << "," << mu_density(loc, t1, t2, norm) << "\n";
        }
    return os.str();
}

}  // namespace siegel
