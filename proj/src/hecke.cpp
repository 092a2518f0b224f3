#include "siegel/hecke.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace siegel {

Mat4 Coset::matrix(i64 lam) const {
    // lam D^{-T} = [[lam/d1, 0], [-lam e/(d1 d2), lam/d2]]
    Mat4 g{};
    g[0][0] = lam / d1;
    g[1][0] = -lam * e / (d1 * d2);
    g[1][1] = lam / d2;
    // X D with X = x / lam
    g[0][2] = x11 * d1 / lam;
    g[0][3] = (x11 * e + x12 * d2) / lam;
    g[1][2] = x12 * d1 / lam;
    g[1][3] = (x12 * e + x22 * d2) / lam;
    g[2][2] = d1;
    g[2][3] = e;
    g[3][3] = d2;
    return g;
}

bool is_similitude(const Mat4& g, i64 lam) {
    // J = [[0, I], [-I, 0]]
    auto omega = [](const std::array<i64, 4>& u, const std::array<i64, 4>& v) {
        return u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1];
    };
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::array<i64, 4> ci, cj;
            for (int r = 0; r < 4; ++r) {
                ci[r] = g[r][i];
                cj[r] = g[r][j];
            }
            i64 want = 0;
            if (i + 2 == j) want = lam;
            if (j + 2 == i) want = -lam;
            if (omega(ci, cj) != want) return false;
        }
    return true;
}

int rank_mod_p(const Mat4& g, i64 p) {
    Mat4 m;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m[i][j] = mod(g[i][j], p);
    int r = 0;
    for (int c = 0; c < 4 && r < 4; ++c) {
        int piv = -1;
        for (int i = r; i < 4; ++i)
            if (m[i][c]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(m[r], m[piv]);
        i64 x, y;
        ext_gcd(m[r][c], p, x, y);
        i64 inv = mod(x, p);
        for (auto& v : m[r]) v = v * inv % p;
        for (int i = 0; i < 4; ++i)
            if (i != r && m[i][c]) {
                i64 f = m[i][c];
                for (int j = 0; j < 4; ++j) m[i][j] = mod(m[i][j] - f * m[r][j], p);
            }
        ++r;
    }
    return r;
}

HeckeOperator coset_reps(HeckeKind kind, i64 p) {
    if (!is_prime(p)) throw std::domain_error("coset_reps: p must be prime");
    HeckeOperator op;
    op.kind = kind;
    op.p = p;
    op.lam = kind == HeckeKind::Tp ? p : p * p;
    i64 lam = op.lam;
    for (i64 d1 : divisors(lam))
        for (i64 d2 : divisors(lam))
            for (i64 e = 0; e < d2; ++e) {
                if ((lam * e) % (d1 * d2)) continue;
                for (i64 x11 = 0; x11 < lam; ++x11)
                    for (i64 x12 = 0; x12 < lam; ++x12)
                        for (i64 x22 = 0; x22 < lam; ++x22) {
                            // X D integral
                            if ((x11 * d1) % lam || (x12 * d1) % lam) continue;
                            if ((x11 * e + x12 * d2) % lam || (x12 * e + x22 * d2) % lam) continue;
                            Coset c{d1, e, d2, x11, x12, x22};
                            if (kind == HeckeKind::T1p2 && rank_mod_p(c.matrix(lam), p) != 1) continue;
                            op.cosets.push_back(c);
                        }
            }
    return op;
}

i64 HeckeOperator::det_growth() const {
    i64 g = 1;
    for (const auto& c : cosets) {
        i64 dd = c.d1 * c.d2;
        // det(D S D^t / lam) = dd^2 det S / lam^2
        if (dd * dd % (lam * lam)) {
            g = std::max(g, (dd * dd + lam * lam - 1) / (lam * lam));
        } else {
            g = std::max(g, dd * dd / (lam * lam));
        }
    }
    return g;
}

std::string HeckeOperator::name() const {
    return (kind == HeckeKind::Tp ? "T(" + std::to_string(p) + ")" : "T1(" + std::to_string(p) + "^2)");
}

std::string dump_cosets(const HeckeOperator& op) {
    std::ostringstream os;
    bool first = true;
    for (const auto& c : op.cosets) {
        if (!first) os << "\n";
        first = false;
        auto g = c.matrix(op.lam);
        for (const auto& row : g) os << row[0] << " " << row[1] << " " << row[2] << " " << row[3] << "\n";
    }
    return os.str();
}

i64 lattice_count(HeckeKind kind, i64 p) {
    if (!is_prime(p)) throw std::domain_error("lattice_count: p must be prime");
    i64 lam = kind == HeckeKind::Tp ? p : p * p;
    i64 vol = lam * lam;
    i64 count = 0;
    Mat4 H{};
    auto omega_ok = [&]() {
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) {
                const auto &u = H[i], &v = H[j];
                if ((u[0] * v[2] + u[1] * v[3] - u[2] * v[0] - u[3] * v[1]) % lam) return false;
            }
        return true;
    };
    // row Hermite normal forms: upper triangular, H[i][j] in [0, H[j][j]) above the diagonal
    std::vector<std::pair<int, int>> offdiag;
    for (int j = 1; j < 4; ++j)
        for (int i = 0; i < j; ++i) offdiag.push_back({i, j});
    std::function<void(std::size_t)> fill = [&](std::size_t idx) {
        if (idx == offdiag.size()) {
            if (!omega_ok()) return;
            if (kind == HeckeKind::T1p2 && rank_mod_p(H, p) != 1) return;
            ++count;
            return;
        }
        auto [i, j] = offdiag[idx];
        for (i64 v = 0; v < H[j][j]; ++v) {
            H[i][j] = v;
            fill(idx + 1);
        }
        H[i][j] = 0;
    };
    for (i64 h0 : divisors(vol))
        for (i64 h1 : divisors(vol / h0))
            for (i64 h2 : divisors(vol / (h0 * h1))) {
                H = Mat4{};
                H[0][0] = h0;
                H[1][1] = h1;
                H[2][2] = h2;
                H[3][3] = vol / (h0 * h1 * h2);
                fill(0);
            }
    return count;
}

namespace {

Rat coefficient_at(const HeckeOperator& op, const FourierExpansion& f, const QuadForm& S) {
    const i64 lam = op.lam;
    const int k = f.k;
    CycloSum acc(lam);
    Rat lam_pow = rpow(Rat(lam), 2 * k - 3);
    for (const auto& c : op.cosets) {
        // D S D^t / lam must be semi-integral
        i64 ta = c.d1 * c.d1 * S.a + c.d1 * c.e * S.b + c.e * c.e * S.c;
        i64 tb = c.d1 * c.d2 * S.b + 2 * c.e * c.d2 * S.c;
        i64 tc = c.d2 * c.d2 * S.c;
        if (ta % lam || tb % lam || tc % lam) continue;
        QuadForm T{ta / lam, tb / lam, tc / lam};
        Rat v = f.coefficient(T);
        if (v == 0) continue;
        i64 ph = T.a * c.x11 + T.b * c.x12 + T.c * c.x22;
        acc.add(ph, lam_pow * v / rpow(Rat(c.d1 * c.d2), k));
    }
    return acc.to_rational();
}

FourierExpansion apply_impl(const HeckeOperator& op, const FourierExpansion& f, bool parallel) {
    i64 bound = f.det_bound / op.det_growth();
    FourierExpansion out(f.k, f.N, bound, f.label + "|" + op.name());
    if (bound < 1) return out;
    auto keys = keys_upto(bound);
    std::vector<Rat> vals(keys.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::size_t i = 0; i < keys.size(); ++i) vals[i] = coefficient_at(op, f, keys[i]);
    } else {
        for (std::size_t i = 0; i < keys.size(); ++i) vals[i] = coefficient_at(op, f, keys[i]);
    }
    for (std::size_t i = 0; i < keys.size(); ++i)
        if (vals[i] != 0) out.coeffs.emplace(keys[i], vals[i]);
    return out;
}

}  // namespace

Rat hecke_coefficient(const HeckeOperator& op, const FourierExpansion& f, const QuadForm& T) {
    if (!T.positive_definite()) throw std::domain_error("hecke_coefficient: T not positive definite");
    if (T.det4() * op.det_growth() > 4 * f.det_bound)
        throw std::out_of_range("hecke_coefficient: " + op.name() + " at " + T.str() + " needs detBound " +
                                std::to_string((T.det4() * op.det_growth() + 3) / 4) + ", '" + f.label +
                                "' has " + std::to_string(f.det_bound));
    return coefficient_at(op, f, gl2_reduce(T));
}

FourierExpansion apply(const HeckeOperator& op, const FourierExpansion& f) { return apply_impl(op, f, true); }
FourierExpansion apply_serial(const HeckeOperator& op, const FourierExpansion& f) { return apply_impl(op, f, false); }

EigenvalueResult eigenvalue(const FourierExpansion& f, HeckeKind kind, i64 p) {
    auto op = coset_reps(kind, p);
    auto g = apply(op, f);
    EigenvalueResult r;
    bool have = false;
    for (const auto& T : keys_upto(g.det_bound)) {
        Rat a = f.coefficient(T), b = g.coefficient(T);
        if (a == 0) {
            if (b != 0) throw std::runtime_error("eigenvalue: '" + f.label + "' is not an eigenform (a(" + T.str() +
                                                 ") = 0 but image nonzero)");
            continue;
        }
        Rat ratio = b / a;
        if (!have) {
            r.value = ratio;
            have = true;
        } else if (ratio != r.value) {
            throw std::runtime_error("eigenvalue: '" + f.label + "' is not an eigenform for " + op.name() + " (ratio at " +
                                     T.str() + " is " + ratio.get_str() + ", expected " + r.value.get_str() + ")");
        }
        ++r.keys_checked;
    }
    if (!have)
        throw std::runtime_error("eigenvalue: no nonzero coefficient of '" + f.label + "' within reachable detBound " +
                                 std::to_string(g.det_bound));
    return r;
}

namespace {

constexpr double kUnitTol = 1e-9;

// z or 1/z with |z| >= 1; on the unit circle the one with arg in [0, pi]
cplx canonical_coordinate(cplx z) {
    double r = std::abs(z);
    if (std::abs(r - 1) <= kUnitTol) {
        z /= r;
        if (z.imag() < 0) z = std::conj(z);
        return z;
    }
    return r < 1 ? 1.0 / z : z;
}

bool pair_less(cplx x, cplx y) {
    double ax = std::abs(x), ay = std::abs(y);
    if (std::abs(ax - ay) > kUnitTol * std::max(1.0, ay)) return ax < ay;
    double gx = std::arg(x), gy = std::arg(y);
    return gx < gy - 1e-12;
}

}  // namespace

SatakeParams weyl_canonicalize(cplx a, cplx b) {
    if (a == cplx(0) || b == cplx(0)) throw std::domain_error("weyl_canonicalize: zero Satake parameter");
    cplx x = canonical_coordinate(a), y = canonical_coordinate(b);
    if (pair_less(y, x)) std::swap(x, y);
    return {x, y};
}

std::array<std::pair<cplx, cplx>, 8> weyl_orbit(cplx a, cplx b) {
    std::array<std::pair<cplx, cplx>, 8> out;
    int i = 0;
    for (int s = 0; s < 2; ++s)
        for (int ia = 0; ia < 2; ++ia)
            for (int ib = 0; ib < 2; ++ib) {
                cplx x = ia ? 1.0 / a : a, y = ib ? 1.0 / b : b;
                out[i++] = s ? std::make_pair(y, x) : std::make_pair(x, y);
            }
    return out;
}

SatakeParams satake_from_eigenvalues(double lambda_p, double lambda1_p2, int k, i64 p) {
    double pd = double(p);
    double sigma = std::pow(pd, 1.5 - k) * lambda_p;
    double tau = std::pow(pd, 4.0 - 2 * k) * lambda1_p2 + 1.0 / (pd * pd);
    // x = a + 1/a, y = b + 1/b are the roots of z^2 - sigma z + (tau - 1)
    cplx disc = std::sqrt(cplx(sigma * sigma - 4 * (tau - 1)));
    cplx x = (sigma + disc) / 2.0, y = (sigma - disc) / 2.0;
    auto root = [](cplx s) { return (s + std::sqrt(s * s - 4.0)) / 2.0; };
    SatakeParams sp = weyl_canonicalize(root(x), root(y));
    double bound = std::sqrt(pd) * (1 + 1e-8);
    if (std::abs(sp.a) > bound || std::abs(sp.b) > bound)
        throw std::runtime_error("satake_from_eigenvalues: parameters exceed sqrt(p) (|a| = " +
                                 std::to_string(std::abs(sp.a)) + ", |b| = " + std::to_string(std::abs(sp.b)) + ")");
    return sp;
}

std::pair<double, double> eigenvalues_from_satake(const SatakeParams& s, int k, i64 p) {
    double pd = double(p);
    cplx sigma = s.a + 1.0 / s.a + s.b + 1.0 / s.b;
    cplx tau = 1.0 + s.a * s.b + s.a / s.b + s.b / s.a + 1.0 / (s.a * s.b);
    return {sigma.real() * std::pow(pd, k - 1.5), (tau.real() - 1.0 / (pd * pd)) * std::pow(pd, 2.0 * k - 4)};
}

}  // namespace siegel
