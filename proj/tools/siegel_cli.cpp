#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "siegel/bessel_measure.hpp"
#include "siegel/config.hpp"
#include "siegel/density.hpp"
#include "siegel/equidist.hpp"
#include "siegel/form_factory.hpp"
#include "siegel/fourier.hpp"
#include "siegel/hecke.hpp"
#include "siegel/poincare.hpp"
#include "siegel/sk.hpp"

using namespace siegel;
using nlohmann::json;

namespace {

struct Run {
    std::string command;
    RunConfig cfg;
    std::string out = ".";
    std::uint64_t seed = 1;
    std::string hash;

    std::string data_dir() const { return cfg.get("data_dir", SIEGEL_DATA_DIR); }

    void write(const std::string& name, const std::string& body) const {
        std::filesystem::create_directories(out);
        auto path = std::filesystem::path(out) / name;
        std::ofstream os(path, std::ios::binary);
        if (!os) throw std::runtime_error("cannot write " + path.string());
        os << body;
        std::cout << path.string() << "\n";
    }

    json envelope(json result, bool pass) const {
        json j;
        j["command"] = command;
        j["version"] = kLibraryVersion;
        j["config_hash"] = hash;
        j["config"] = cfg.values;
        j["pass"] = pass;
        j["result"] = std::move(result);
        return j;
    }

    std::string csv_header() const {
        return "# siegel " + std::string(kLibraryVersion) + " " + command + " config " + hash + "\n";
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_names(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

QuadForm parse_key(const std::string& s) {
    auto v = split_names(s);
    if (v.size() != 3) throw std::invalid_argument("expected a form 'a,b,c', got '" + s + "'");
    return {std::stol(v[0]), std::stol(v[1]), std::stol(v[2])};
}

json to_json_value(const std::string& s) { return json::parse(s); }

json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

// chi10, chi12 and the weight-16 lifts by plus-space name; anything else is a plus-space file
FourierExpansion named_form(const std::string& name, i64 bound) {
    if (name == "chi10") return sk_lift(plus_space_form("phi10", 4 * bound), bound, "chi10");
    if (name == "chi12") return sk_lift(plus_space_form("phi12", 4 * bound), bound, "chi12");
    if (name == "phi10" || name == "phi12" || name == "phi10E6" || name == "phi12E4")
        return sk_lift(plus_space_form(name, 4 * bound), bound);
    auto plus = std::get<PlusSpaceData>(ingest(name, Schema::Plus));
    return sk_lift(plus, bound);
}

struct SKSource {
    int k;
    std::string plus, elliptic;
};

SKSource sk_source(const std::string& name) {
    if (name == "chi10") return {10, "phi10", "g18.txt"};
    if (name == "chi12") return {12, "phi12", "g22.txt"};
    throw std::invalid_argument("no elliptic source data for '" + name + "' (chi10 or chi12)");
}

EllipticFormData elliptic(const Run& run, const std::string& file) {
    auto path = run.data_dir() + "/" + file;
    return parse_elliptic(read_file(path), path);
}

std::map<i64, SatakeParams> satake_of(const FourierExpansion& f, const std::vector<i64>& primes) {
    std::map<i64, SatakeParams> s;
    for (i64 p : primes) {
        double lp = eigenvalue(f, HeckeKind::Tp, p).value.get_d();
        double l1 = eigenvalue(f, HeckeKind::T1p2, p).value.get_d();
        s[p] = satake_from_eigenvalues(lp, l1, f.k, p);
    }
    return s;
}

int cmd_build_forms(const Run& run) {
    i64 bound = run.cfg.get_int("detBound", 20);
    if (bound < 1) throw std::invalid_argument("detBound must be at least 1");
    auto names = split_names(run.cfg.get("forms", "chi10,chi12"));
    for (const auto& name : names) {
        auto f = named_form(name, bound);
        std::string stem = std::filesystem::path(f.label).filename().string();
        run.write(stem + ".fourier", run.csv_header() + to_text(f));
    }
    return 0;
}

int cmd_hecke_eigen(const Run& run) {
    auto f = named_form(run.cfg.get("form", "chi10"), run.cfg.get_int("detBound", 64));
    json res = json::array();
    bool pass = true;
    for (i64 p : run.cfg.get_ints("primes", {2, 3})) {
        for (auto kind : {HeckeKind::Tp, HeckeKind::T1p2}) {
            json e{{"p", p}, {"operator", coset_reps(kind, p).name()}};
            try {
                auto ev = eigenvalue(f, kind, p);
                e["eigenvalue"] = ev.value.get_str();
                e["keys_checked"] = ev.keys_checked;
            } catch (const std::runtime_error& err) {
                e["error"] = err.what();
                pass = false;
            }
            res.push_back(e);
        }
    }
    run.write("hecke_eigen.json", run.envelope({{"form", f.label}, {"detBound", f.det_bound}, {"eigenvalues", res}}, pass).dump(2));
    return pass ? 0 : 1;
}

int cmd_satake(const Run& run) {
    std::string name = run.cfg.get("form", "chi10");
    auto f = named_form(name, run.cfg.get_int("detBound", 64));
    json res = json::array();
    for (const auto& [p, s] : satake_of(f, run.cfg.get_ints("primes", {2, 3}))) {
        json e{{"p", p}, {"a", cplx_json(s.a)}, {"b", cplx_json(s.b)},
               {"ramanujan_violation", detect_ramanujan_violation(s, p)}};
        if (name == "chi10" || name == "chi12") {
            auto src = sk_source(name);
            auto sk = sk_satake(elliptic(run, src.elliptic), src.k, p);
            e["sk_prediction"] = {{"a", cplx_json(sk.a)}, {"b", cplx_json(sk.b)}};
        }
        res.push_back(e);
    }
    run.write("satake.json", run.envelope({{"form", f.label}, {"satake", res}}, true).dump(2));
    return 0;
}

int cmd_measure_check(const Run& run) {
    double tol = run.cfg.get_double("tol", 1e-8);
    std::vector<SuganoIndex> cells = supported_indices();
    if (run.cfg.has("l") || run.cfg.has("m"))
        cells = {{int(run.cfg.get_int("l", 0)), int(run.cfg.get_int("m", 0))}};
    for (auto c : cells)
        if (!supported(c)) throw std::invalid_argument("unsupported (l, m)");
    json res = json::array();
    bool pass = true;
    double worst = 0;
    for (i64 d : run.cfg.get_ints("d", {3, 4, 23})) {
        auto cg = class_group(d);
        for (std::size_t chi = 0; chi < cg.characters.size(); ++chi)
            for (i64 p : run.cfg.get_ints("primes", {2, 3, 5, 13})) {
                auto loc = local_bessel_data(cg, chi, p);
                for (auto idx : cells) {
                    auto r = integrate(loc, [&](double t1, double t2) { return sugano_U_angles(idx, loc, t1, t2); });
                    double target = (idx.l == 0 && idx.m == 0) ? 1.0 : 0.0;
                    double err = std::abs(r.value - target);
                    worst = std::max(worst, err);
                    pass &= err <= tol;
                    res.push_back({{"d", d}, {"character", chi}, {"p", p}, {"l", idx.l}, {"m", idx.m},
                                   {"integral", r.value}, {"target", target}, {"error", err}});
                }
            }
    }
    run.write("measure_check.json", run.envelope({{"tol", tol}, {"max_error", worst}, {"cells", res}}, pass).dump(2));
    return pass ? 0 : 1;
}

int cmd_equidist(const Run& run) {
    i64 bound = run.cfg.get_int("detBound", 64);
    auto S = run.cfg.get_ints("S", {2, 3});
    i64 d = run.cfg.get_int("d", 4);
    auto chi = static_cast<std::size_t>(run.cfg.get_int("character", 0));
    double tol = run.cfg.get_double("tol", 1e-9);
    auto cg = class_group(d);
    if (chi >= cg.characters.size()) throw std::invalid_argument("character index out of range");
    std::string csv = run.csv_header();
    json checks = json::array();
    bool pass = true;
    auto names = split_names(run.cfg.get("forms", "chi10,chi12"));
    if (names.empty()) csv += weyl_panel_csv({});
    for (const auto& name : names) {
        auto src = sk_source(name);
        auto f = named_form(name, bound);
        auto g = elliptic(run, src.elliptic);
        double norm = brown_norm(g, plus_space_form(src.plus, 64), src.k, 1, -4);
        WeightedFamily fam{src.k, 1, S, {}};
        FamilyMember m{f.label, satake_of(f, S), weight_omega(f, 1, cg, chi, norm)};
        fam.members.push_back(m);
        csv += "# " + f.label + "\n" + weyl_panel_csv(weyl_panel(fam, cg, chi));
        for (i64 p : S)
            for (auto idx : supported_indices()) {
                try {
                    auto c = bessel_identity_check(f, p, idx.l, idx.m, cg, chi, m.satake.at(p));
                    bool ok = c.rel_error <= tol;
                    pass &= ok;
                    checks.push_back({{"form", f.label}, {"p", p}, {"l", idx.l}, {"m", idx.m}, {"lhs", cplx_json(c.lhs)},
                                      {"rhs", cplx_json(c.rhs)}, {"rel_error", c.rel_error}, {"pass", ok}});
                } catch (const std::out_of_range& e) {
                    checks.push_back({{"form", f.label}, {"p", p}, {"l", idx.l}, {"m", idx.m}, {"skipped", e.what()}});
                }
            }
    }
    run.write("weyl_panel.csv", csv);
    run.write("identity_checks.json", run.envelope({{"tol", tol}, {"checks", checks}}, pass).dump(2));
    return pass ? 0 : 1;
}

int cmd_poincare(const Run& run) {
    PoincareSpec spec;
    spec.k = int(run.cfg.get_int("k", 10));
    spec.N = run.cfg.get_int("N", 1);
    spec.Q = parse_key(run.cfg.get("Q", "1,1,1"));
    spec.c_max = run.cfg.get_int("c_max", 40);
    spec.m_max = run.cfg.get_int("m_max", 40);
    std::string phase = run.cfg.get("phase", "corrected");
    if (phase != "corrected" && phase != "printed") throw std::invalid_argument("phase must be corrected or printed");
    spec.phase = phase == "corrected" ? PhaseForm::Corrected : PhaseForm::AsPrinted;
    spec.validate();
    auto T1 = parse_key(run.cfg.get("T1", "1,0,1")), T2 = parse_key(run.cfg.get("T2", "1,1,1"));
    json res;
    res["estimates"] = json::array();
    for (const auto& T : {T1, T2})
        res["estimates"].push_back(to_json_value(to_json(coefficient_estimate(T, spec), T, spec)));
    bool pass = true;
    if (spec.N == 1 && (spec.k == 10 || spec.k == 12)) {
        auto f = named_form(spec.k == 10 ? "chi10" : "chi12", 16);
        auto r = ratio_oracle(T1, T2, spec, f);
        pass = r.gap <= r.budget;
        res["ratio"] = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"gap", r.gap}, {"budget", r.budget}};
    }
    run.write("poincare.json", run.envelope(res, pass).dump(2));
    return pass ? 0 : 1;
}

int cmd_density(const Run& run) {
    double beta = run.cfg.get_double("beta", 0.2);
    auto phi = fejer_test_function(beta);
    std::string mode = run.cfg.get("mode", "mc");
    i64 p_max = run.cfg.get_int("p_max", 0);
    json reports = json::array();
    bool pass = true;
    std::string csv = run.csv_header();
    std::vector<double> logCs;
    for (i64 v : run.cfg.get_ints("logC", {20})) logCs.push_back(double(v));
    for (double logC : logCs) {
        DensityRunReport r;
        if (mode == "mc") {
            MeasureSampler mc;
            mc.d = run.cfg.get_int("d", 4);
            mc.character = static_cast<std::size_t>(run.cfg.get_int("character", 0));
            mc.draws = static_cast<std::size_t>(run.cfg.get_int("draws", 100000));
            mc.seed = run.seed;
            r = one_level_density(mc, phi, logC, p_max);
        } else if (mode == "family") {
            DensityFamily fam;
            fam.theta = run.cfg.get_double("theta", kDefaultTheta);
            for (const auto& name : split_names(run.cfg.get("forms", "chi10,chi12"))) {
                auto src = sk_source(name);
                auto g = elliptic(run, src.elliptic);
                std::map<i64, SatakeParams> s;
                for (i64 p : primes_upto(g.bound())) s[p] = sk_satake(g, src.k, p);
                fam.members.push_back({name, sk_omega_closed_form(g, src.k, 1), local_data_from_satake(s, src.k, 1.0, true)});
            }
            i64 cover = p_max ? p_max : static_cast<i64>(std::floor(std::exp(phi.alpha * logC)));
            r = one_level_density(fam, phi, logC, cover);
        } else {
            throw std::invalid_argument("mode must be mc or family");
        }
        double allowed = 3 * r.sigma + 1 / logC;
        bool ok = r.deviation <= allowed;
        pass &= ok;
        auto j = to_json_value(to_json(r));
        j["allowed"] = allowed;
        j["pass"] = ok;
        reports.push_back(j);
        csv += "# logC=" + std::to_string(logC) + "\n" + density_csv(r, phi);
    }
    run.write("density.json", run.envelope({{"mode", mode}, {"beta", beta}, {"reports", reports}}, pass).dump(2));
    run.write("density.csv", csv);
    return pass ? 0 : 1;
}

int cmd_sk_audit(const Run& run) {
    i64 N = run.cfg.get_int("N", 1);
    if (N < 1 || !squarefree(N)) throw std::invalid_argument("N must be squarefree");
    std::vector<i64> primes;
    for (auto [p, e] : factorize(N)) primes.push_back(p);
    i64 bound = run.cfg.get_int("detBound", 36 * (primes.empty() ? 1 : primes.back() * primes.back()));
    auto cg = class_group(4);
    json audits = json::array();
    bool pass = true;
    for (const auto& name : split_names(run.cfg.get("forms", "chi10,chi12"))) {
        auto src = sk_source(name);
        auto g = elliptic(run, src.elliptic);
        auto basis = oldform_basis(plus_space_form(src.plus, 8 * bound), primes, bound);
        i64 q = 2;
        while (N % q == 0) do
                ++q;
            while (!is_prime(q));
        bool violation = detect_ramanujan_violation(sk_satake(g, src.k, q), q);
        SKAudit a;
        a.k = src.k;
        a.N = N;
        a.budget = sk_weight_budget(N, src.k);
        for (std::size_t i = 0; i < basis.members.size(); ++i) {
            double omega = i == 0 ? volume(1) / volume(N) * sk_omega_closed_form(g, src.k, 1)
                                  : weight_omega(basis.members[i], N, cg, 0, 1.0);
            if (i > 0 && omega != 0) pass = false;
            a.flagged.push_back({basis.words[i] + name, omega, violation});
            a.omega_mass += omega;
        }
        auto j = to_json_value(to_json(a));
        j["basis_rank"] = basis.rank;
        j["basis_size"] = basis.members.size();
        j["detBound"] = basis.det_bound;
        j["mass_over_budget"] = a.omega_mass / a.budget;
        pass &= basis.full_rank();
        audits.push_back(j);
    }
    run.write("sk_audit.json", run.envelope({{"audits", audits}}, pass).dump(2));
    return pass ? 0 : 1;
}

const std::map<std::string, std::pair<std::set<std::string>, int (*)(const Run&)>>& commands() {
    static const std::map<std::string, std::pair<std::set<std::string>, int (*)(const Run&)>> c{
        {"build-forms", {{"forms", "detBound"}, cmd_build_forms}},
        {"hecke-eigen", {{"form", "detBound", "primes"}, cmd_hecke_eigen}},
        {"satake", {{"form", "detBound", "primes", "data_dir"}, cmd_satake}},
        {"measure-check", {{"d", "primes", "l", "m", "tol"}, cmd_measure_check}},
        {"equidist-run", {{"forms", "detBound", "S", "d", "character", "tol", "data_dir"}, cmd_equidist}},
        {"poincare-check", {{"k", "N", "Q", "T1", "T2", "c_max", "m_max", "phase"}, cmd_poincare}},
        {"density-run",
         {{"mode", "beta", "logC", "draws", "d", "character", "p_max", "theta", "forms", "data_dir", "seed"}, cmd_density}},
        {"sk-audit", {{"forms", "N", "detBound", "data_dir"}, cmd_sk_audit}},
    };
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree-2 Siegel modular form spectral data and equidistribution checks"};
    app.set_version_flag("--version", std::string(kLibraryVersion));
    std::string config_path, out = ".";
    std::uint64_t seed = 1;
    int threads = 0;
    app.add_option("--config", config_path, "key=value run configuration")->check(CLI::ExistingFile);
    app.add_option("--out", out, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
    std::map<std::string, CLI::App*> subs;
    app.fallthrough();
    for (const auto& [name, spec] : commands()) subs[name] = app.add_subcommand(name);
    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    if (threads > 0) omp_set_num_threads(threads);
    try {
        Run run;
        for (const auto& [name, sub] : subs)
            if (sub->parsed()) run.command = name;
        const auto& [keys, fn] = commands().at(run.command);
        if (!config_path.empty()) run.cfg = load_config(config_path, keys);
        run.out = out;
        run.seed = seed_opt->count() ? seed : run.cfg.get_u64("seed", 1);
        if (keys.count("seed")) run.cfg.set("seed", std::to_string(run.seed));
        run.hash = config_hash(run.cfg);
        return fn(run);
    } catch (const std::exception& e) {
        std::cerr << "siegel " << app.get_subcommands().front()->get_name() << ": " << e.what() << "\n";
        return 2;
    }
}
