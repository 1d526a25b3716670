#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "ybforge/classical.hpp"

namespace ybforge::cli {

namespace {

using nlohmann::json;
using scalars::Complex;
using scalars::Scalar;

struct JobConfig {
    std::string command;
    std::string spec_path;
    std::string out_path;
    std::string format = "json";
    int order = 3;
    int m_max = 1;
    int factors = 40;
    int n = 2;
    std::string eps, q, u;
    std::string tau = "1:2";
    std::string algebra = "sl";
    std::string basis = "gl";
    std::string form = "derived";
    double tol = 1e-10;
    bool verify_ybe = false;
    bool check_jacobi = false;
    bool extended = false;
    bool esoteric = false;
    bool elementary = false;
};

// Malformed input that passed the argument grammar.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Report {
    json body;
    bool verified = true;
    std::optional<std::string> csv;
};

json header(const std::string& command) { return {{"schema", "ybforge/1"}, {"command", command}}; }

int thread_cap() {
    int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("YBFORGE_THREADS")) {
        try {
            int v = std::stoi(env);
            if (v >= 1) return std::min(v, hw);
        } catch (const std::exception&) {
        }
        throw InputError("YBFORGE_THREADS must be a positive integer");
    }
    return hw;
}

// Decimal literals become exact rationals; anything else goes through the scalar grammar.
Scalar parse_scalar(const std::string& text) {
    static const std::regex decimal(R"(\s*(-?)(\d*)\.(\d+)\s*)");
    std::smatch m;
    if (std::regex_match(text, m, decimal)) {
        mpz_class num(m[2].str().empty() ? std::string("0") : m[2].str());
        mpz_class den = 1;
        for (long i = 0; i < m[3].length(); ++i) den *= 10;
        num = num * den + mpz_class(m[3].str());
        mpq_class v(num, den);
        v.canonicalize();
        return Scalar(m[1].length() ? mpq_class(-v) : v);
    }
    return Scalar::parse(text);
}

Complex parse_number(const std::string& text, const char* flag) {
    Scalar s = parse_scalar(text);
    if (!s.is_constant()) throw InputError(std::string(flag) + " must be numeric, got " + text);
    return scalars::evaluate_scalar(s, {});
}

cartan::CartanSpec load_spec(const std::string& path) {
    if (path.empty()) throw InputError("--spec is required");
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw InputError(path + ": " + e.what());
    }
    return cartan::spec_from_json(j);
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// Specs that carry a fundamental representation: sl(N) and its affine extension.
struct Fundamental {
    int n = 0;
    bool affine = false;
};

std::optional<Fundamental> match_fundamental(const cartan::CartanSpec& spec) {
    json j = cartan::spec_to_json(spec);
    for (int n = 2; n <= 6; ++n) {
        if (j == cartan::spec_to_json(cartan::slN_spec(n))) return Fundamental{n, false};
        if (j == cartan::spec_to_json(cartan::affine_slN(n).extended)) return Fundamental{n, true};
    }
    return std::nullopt;
}

reps::Representation fundamental_rep(const Fundamental& f) {
    auto V = reps::fundamental_slN(f.n);
    return f.affine ? reps::evaluation_rep(V) : V;
}

std::vector<std::string> spectral_names(const Fundamental& f) {
    if (f.affine) return {"lambda", "mu"};
    return {};
}

json ybe_entry(int degree, const freealg::TensorElement& r) {
    return {{"degree", degree}, {"zero", r.is_zero()}, {"terms", r.terms().size()}};
}

json rep_solution_json(const reps::RepSolution& sol, const Fundamental& f, bool verify, bool& verified) {
    json j = {{"representation", std::string(f.affine ? "evaluation " : "") + "fundamental sl(" + std::to_string(f.n) + ")"},
              {"R", reps::to_json(sol.R)},
              {"prefactor_entry", sol.prefactor_entry.str()}};
    if (verify) {
        bool zero = reps::matrix_ybe_residual(sol.R, static_cast<std::size_t>(f.n)).is_zero();
        j["ybe_zero"] = zero;
        verified = verified && zero;
    }
    return j;
}

// ------------------------------------------------------------ subcommands

Report cmd_classify(const JobConfig& cfg) {
    auto spec = load_spec(cfg.spec_path);
    auto gcm = cartan::generalized_cartan_matrix(spec);
    Report r;
    r.body = header(cfg.command);
    r.body["type"] = cartan::type_name(cartan::classify(gcm.A));
    r.body["gcm"] = gcm.A;
    r.body["symmetrizable"] = gcm.symmetrizable;
    json sym = json::array();
    for (auto& d : gcm.symmetrizer) sym.push_back(d.get_str());
    r.body["symmetrizer"] = sym;
    return r;
}

Report cmd_serre(const JobConfig& cfg) {
    auto spec = load_spec(cfg.spec_path);
    auto alg = freealg::Algebra::create(spec);
    auto fund = match_fundamental(spec);
    std::optional<reps::Representation> V;
    if (fund && !fund->affine) V = fundamental_rep(*fund);
    Report r;
    r.body = header(cfg.command);
    json rels = json::array();
    for (std::size_t a = 0; a < spec.rank_N(); ++a)
        for (std::size_t b = 0; b < spec.rank_N(); ++b) {
            if (a == b) continue;
            auto data = cartan::serre_coefficients(spec, a, b);
            auto el = freealg::serre_element(alg, data);
            json Q = json::array();
            for (auto& c : data.Q) Q.push_back(c.str());
            json e = {{"alpha", spec.root_labels[a]}, {"beta", spec.root_labels[b]}, {"k", data.k},
                      {"q", data.q.str()}, {"coefficients", Q}, {"element", el.str()}};
            if (V) {
                bool zero = reps::evaluate(el, *V).is_zero();
                e["vanishes_in_fundamental"] = zero;
                r.verified = r.verified && zero;
            }
            rels.push_back(e);
        }
    r.body["relations"] = rels;
    return r;
}

Report cmd_rmatrix(const JobConfig& cfg) {
    auto spec = load_spec(cfg.spec_path);
    auto alg = freealg::Algebra::create(spec);
    Report r;
    r.body = header(cfg.command);
    r.body["order"] = cfg.order;
    std::optional<rmatrix::RSeries> R;
    try {
        R = rmatrix::solve_standard(alg, cfg.order);
    } catch (const Error& e) {
        auto fund = match_fundamental(spec);
        if (e.kind() != ErrorKind::InconsistentSystem || !fund) throw;
        // The free algebra needs the Serre quotient; solve in the fundamental instead.
        auto V = fundamental_rep(*fund);
        auto sol = reps::solve_R_in_rep(V, V, spectral_names(*fund));
        r.body["fallback"] = {{"reason", e.what()}, {"method", "rep-solve"}};
        r.body["rep"] = rep_solution_json(sol, *fund, cfg.verify_ybe, r.verified);
        return r;
    }
    r.body["R"] = rmatrix::to_json(*R);
    if (cfg.verify_ybe) {
        json ybe = json::array();
        for (int d = 0; d <= cfg.order; ++d) {
            auto res = rmatrix::ybe_residual(*R, d);
            ybe.push_back(ybe_entry(d, res));
            r.verified = r.verified && res.is_zero();
        }
        r.body["ybe"] = ybe;
    }
    return r;
}

rmatrix::TwistData parse_tau(const std::string& text, const cartan::CartanSpec& spec) {
    rmatrix::TwistData data;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw InputError("--tau expects label:label pairs, got " + item);
        try {
            data.tau[spec.root_index(std::stoi(item.substr(0, colon)))] = spec.root_index(std::stoi(item.substr(colon + 1)));
        } catch (const std::logic_error&) {
            throw InputError("--tau has a malformed root label: " + item);
        }
    }
    if (data.tau.empty()) throw InputError("--tau is empty");
    return data;
}

Report cmd_twist(const JobConfig& cfg) {
    auto spec = load_spec(cfg.spec_path);
    auto alg = freealg::Algebra::create(spec);
    auto data = parse_tau(cfg.tau, spec);
    Report r;
    r.body = header(cfg.command);
    r.body["order"] = cfg.order;
    std::optional<freealg::TensorElement> F;
    if (cfg.elementary) {
        if (data.tau.size() != 1) throw InputError("--elementary takes a single sigma:rho pair");
        auto [sigma, rho] = *data.tau.begin();
        F = rmatrix::elementary_twist(alg, sigma, rho, cfg.order);
        r.body["twist"] = {{"kind", "elementary"}, {"F", F->str()}};
    } else {
        auto T = rmatrix::solve_twist(alg, data, cfg.order, cfg.m_max);
        F = T.twist(cfg.order);
        r.body["m_max"] = cfg.m_max;
        r.body["twist"] = rmatrix::to_json(T);
    }
    if (cfg.verify_ybe) {
        auto eq = rmatrix::twist_equation_residual(*F, cfg.order);
        r.body["twist_equation"] = {{"zero", eq.is_zero()}, {"terms", eq.terms().size()}};
        auto X = rmatrix::apply_twist(rmatrix::solve_standard(alg, cfg.order).body(cfg.order), *F, cfg.order);
        json ybe = json::array();
        bool ok = eq.is_zero();
        for (int d = 0; d <= cfg.order; ++d) {
            auto res = rmatrix::ybe_residual_body(X, d, cfg.order);
            ybe.push_back(ybe_entry(d, res));
            ok = ok && res.is_zero();
        }
        r.body["ybe"] = ybe;
        r.verified = ok;
    }
    return r;
}

classical::RootVectorBasis basis_for(const JobConfig& cfg) {
    if (cfg.n < 2) throw InputError("--n must be at least 2");
    if (cfg.basis == "gl") return classical::slN_basis(cfg.n);
    return classical::traceless_slN_basis(cfg.n);
}

// Loop r-matrix for --algebra sl (x = mu / lambda) or a22 and its dimension.
std::pair<classical::Matrix, std::size_t> loop_r(const JobConfig& cfg) {
    Scalar x = classical::spectral_ratio("mu", "lambda");
    if (cfg.algebra == "a22") return {classical::r_standard_twisted(classical::twisted_a22(), x), 3};
    auto b = basis_for(cfg);
    return {classical::r_standard_untwisted(b, x), b.n};
}

std::map<std::string, Complex> spectral_point(const JobConfig& cfg) {
    double u = cfg.u.empty() ? 0.23 : parse_number(cfg.u, "--u").real();
    return {{"lambda", std::exp(Complex(0, 2 * std::numbers::pi * u))}, {"mu", Complex(1)}};
}

Report cmd_classical_r(const JobConfig& cfg) {
    auto [r, n] = loop_r(cfg);
    Report rep;
    rep.body = header(cfg.command);
    rep.body["algebra"] = cfg.algebra;
    rep.body["x"] = "mu/lambda";
    rep.body["r"] = classical::to_json(r, n);
    if (cfg.format == "csv") rep.csv = reps::to_csv(r, spectral_point(cfg));
    return rep;
}

classical::Form parse_form(const std::string& s) {
    return s == "as-printed" ? classical::Form::AsPrinted : classical::Form::Derived;
}

Report cmd_cybe(const JobConfig& cfg) {
    Report rep;
    rep.body = header(cfg.command);
    rep.body["algebra"] = cfg.algebra;
    if (cfg.algebra == "elliptic") {
        Scalar eps = parse_scalar(cfg.eps.empty() ? "0.3" : cfg.eps);
        auto r = classical::elliptic_r_series(eps, cfg.order, parse_form(cfg.form));
        auto f = [&](Complex a, Complex b) { return classical::to_complex(r, {{"lambda", a}, {"mu", b}}); };
        double res = classical::cybe_residual_numeric(f, 2, std::exp(Complex(0, 1.1)), std::exp(Complex(0, 2.3)),
                                                      std::exp(Complex(0, -0.7)));
        rep.body["terms"] = cfg.order;
        rep.body["form"] = cfg.form;
        rep.body["residual"] = res;
        rep.body["tolerance"] = cfg.tol;
        rep.verified = res <= cfg.tol;
        return rep;
    }
    if (cfg.extended) {
        auto spec = cfg.algebra == "a22" ? classical::twisted_a22() : classical::untwisted_loop_spec(basis_for(cfg));
        Scalar u = cfg.u.empty() ? Scalar(mpq_class(1, 2)) : parse_scalar(cfg.u);
        auto e = classical::verify_extension(classical::loop_expand(spec, cfg.order), u);
        rep.body["extension"] = {{"u", u.str()},
                                 {"terms", cfg.order},
                                 {"plain_zero", e.plain_zero},
                                 {"cocycle_matches", e.cocycle_matches},
                                 {"cocycle_sign", e.cocycle_sign},
                                 {"identity_holds", e.identity_holds},
                                 {"rhat_zero", e.rhat_zero},
                                 {"terms_checked", e.terms_checked}};
        rep.verified = e.plain_zero && e.cocycle_matches && e.identity_holds && e.rhat_zero;
        return rep;
    }
    auto [r, n] = loop_r(cfg);
    auto res = classical::cybe_residual(r, n);
    rep.body["residual_zero"] = res.is_zero();
    rep.body["nonzero_entries"] = res.nonzeros();
    rep.verified = res.is_zero();
    return rep;
}

json triple_json(const classical::BDSetting& s, const classical::BDTriple& t) {
    // Simple roots are labelled 1..rank, the affine root 0.
    auto label = [&](std::size_t i) { return s.affine ? static_cast<int>(i) : static_cast<int>(i) + 1; };
    json g = json::array(), tau = json::array();
    for (auto i : t.gamma1) g.push_back(label(i));
    for (auto [a, b] : t.tau) tau.push_back({label(a), label(b)});
    return {{"gamma1", g}, {"tau", tau}};
}

Report cmd_bd_deform(const JobConfig& cfg) {
    Scalar eps = cfg.eps.empty() ? Scalar::variable("eps") : parse_scalar(cfg.eps);
    Report rep;
    rep.body = header(cfg.command);
    rep.body["eps"] = eps.str();
    if (cfg.esoteric) {
        if (cfg.n < 2) throw InputError("--n must be at least 2");
        auto s = classical::esoteric_setting(cfg.n);
        auto t = classical::esoteric_triple(cfg.n, eps);
        auto n = static_cast<std::size_t>(cfg.n);
        auto r0 = classical::setting_standard_r(s);
        auto r = classical::bd_deformed_r(r0, s, t);
        bool zero = classical::cybe_residual(r, n).is_zero();
        json j = triple_json(s, t);
        j["r"] = classical::to_json(r, n);
        j["principal_picture"] = classical::to_json(classical::principal_picture(r - r0, n), n);
        j["cybe_zero"] = zero;
        rep.body["setting"] = "affine";
        rep.body["triples"] = json::array({j});
        rep.verified = zero;
        return rep;
    }
    JobConfig traceless = cfg;
    traceless.basis = "traceless";
    auto s = classical::finite_setting(basis_for(traceless));
    json out = json::array();
    for (auto t : classical::enumerate_triples(s)) {
        t.eps = eps;
        auto st = s;
        st.basis = classical::with_phi(s.basis, classical::bd_phi(s, t));
        auto r = classical::bd_deformed_r(classical::setting_standard_r(st), st, t);
        bool zero = classical::cybe_residual(r, st.basis.n).is_zero();
        json j = triple_json(st, t);
        j["phi"] = classical::to_json(st.basis.phi, st.basis.n);
        j["r"] = classical::to_json(r, st.basis.n);
        j["cybe_zero"] = zero;
        out.push_back(j);
        rep.verified = rep.verified && zero;
    }
    rep.body["setting"] = "finite";
    rep.body["triples"] = out;
    return rep;
}

std::vector<double> fit_points() { return {0.1, 0.3}; }
std::vector<double> check_points() { return {0.05, 0.13, 0.19, 0.26, 0.34, 0.41, 0.47, 0.55, 0.62, 0.71}; }

Report cmd_elliptic(const JobConfig& cfg) {
    Complex eps = parse_number(cfg.eps.empty() ? "0.3" : cfg.eps, "--eps");
    Complex q = parse_number(cfg.q.empty() ? "1.7" : cfg.q, "--q");
    double u = cfg.u.empty() ? 0.23 : parse_number(cfg.u, "--u").real();
    auto form = parse_form(cfg.form);
    auto R = classical::elliptic_R_product(eps, q, u, cfg.factors, form);
    auto ratios = classical::elliptic_ratios(R);
    Report rep;
    rep.body = header(cfg.command);
    rep.body["eps"] = complex_json(eps);
    rep.body["q"] = complex_json(q);
    rep.body["factors"] = cfg.factors;
    rep.body["form"] = cfg.form;
    rep.body["u"] = u;
    rep.body["entries"] = {{"a", complex_json(R(0, 0))}, {"b", complex_json(R(1, 1))},
                           {"c", complex_json(R(1, 2))}, {"d", complex_json(R(0, 3))}};
    rep.body["ratios"] = {{"(a+d)/(a-d)", complex_json(ratios[0])},
                          {"(b+c)/(a-d)", complex_json(ratios[1])},
                          {"(b-c)/(a-d)", complex_json(ratios[2])}};
    std::ostringstream csv;
    csv.precision(17);
    csv << "u,ratio,re,im\n";
    const char* names[] = {"dn", "cn", "sn"};
    for (int k = 0; k < 3; ++k) csv << u << ',' << names[k] << ',' << ratios[k].real() << ',' << ratios[k].imag() << '\n';
    if (cfg.check_jacobi) {
        auto fit = classical::fit_elliptic(eps, q, cfg.factors, fit_points(), check_points(), form, thread_cap());
        json points = json::array();
        for (std::size_t i = 0; i < fit.check_points.size(); ++i)
            points.push_back({{"u", fit.check_points[i]}, {"deviation", fit.deviations[i]}});
        rep.body["jacobi"] = {{"nome", complex_json(fit.nome)},
                              {"rho", complex_json(fit.rho)},
                              {"fit_points", fit.fit_points},
                              {"fit_residual", fit.fit_residual},
                              {"checks", points},
                              {"max_deviation", fit.max_deviation},
                              {"tolerance", cfg.tol}};
        rep.verified = fit.max_deviation < cfg.tol;
        csv << "u,deviation\n";
        for (std::size_t i = 0; i < fit.check_points.size(); ++i)
            csv << fit.check_points[i] << ',' << fit.deviations[i] << '\n';
    }
    if (cfg.format == "csv") rep.csv = csv.str();
    return rep;
}

Report cmd_rep_solve(const JobConfig& cfg) {
    auto spec = load_spec(cfg.spec_path);
    auto fund = match_fundamental(spec);
    if (!fund) throw InputError("rep-solve needs an sl(N) or affine sl(N) spec (N <= 6)");
    auto V = fundamental_rep(*fund);
    auto sol = reps::solve_R_in_rep(V, V, spectral_names(*fund));
    Report rep;
    rep.body = header(cfg.command);
    rep.body["solution"] = rep_solution_json(sol, *fund, cfg.verify_ybe, rep.verified);
    if (cfg.format == "csv") {
        auto point = spectral_point(cfg);
        point["Q"] = parse_number(cfg.q.empty() ? "1.7" : cfg.q, "--q");
        rep.csv = reps::to_csv(sol.R, point);
    }
    return rep;
}

Report dispatch(const JobConfig& cfg) {
    static const std::map<std::string, Report (*)(const JobConfig&)> table = {
        {"classify", cmd_classify}, {"serre", cmd_serre},           {"rmatrix", cmd_rmatrix},
        {"twist", cmd_twist},       {"classical-r", cmd_classical_r}, {"cybe", cmd_cybe},
        {"bd-deform", cmd_bd_deform}, {"elliptic", cmd_elliptic},   {"rep-solve", cmd_rep_solve}};
    static const std::vector<std::string> csv_capable = {"classical-r", "elliptic", "rep-solve"};
    if (cfg.format == "csv" && std::find(csv_capable.begin(), csv_capable.end(), cfg.command) == csv_capable.end())
        throw InputError(cfg.command + " has no CSV output");
    return table.at(cfg.command)(cfg);
}

void emit(const JobConfig& cfg, const std::string& text, std::ostream& out) {
    if (cfg.out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.out_path);
    if (!f) throw InputError("cannot write " + cfg.out_path);
    f << text;
}

void build_app(CLI::App& app, JobConfig& cfg) {
    app.require_subcommand(1);
    auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->add_option("--out", cfg.out_path, "Report path (default stdout)");
        s->add_option("--format", cfg.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--tol", cfg.tol, "Tolerance for floating residuals")->check(CLI::PositiveNumber);
        return s;
    };
    auto spec = [&](CLI::App* s) { s->add_option("--spec", cfg.spec_path, "CartanSpec JSON")->required()->check(CLI::ExistingFile); };
    auto order = [&](CLI::App* s, const char* help) { s->add_option("--order", cfg.order, help)->check(CLI::PositiveNumber); };
    auto loop = [&](CLI::App* s) {
        s->add_option("--algebra", cfg.algebra, "sl, a22 (order-2 twisted sl(3)) or elliptic")
            ->check(CLI::IsMember({"sl", "a22", "elliptic"}));
        s->add_option("--n", cfg.n, "Rank + 1 of sl(N)")->check(CLI::PositiveNumber);
        s->add_option("--basis", cfg.basis, "Cartan data of sl(N): gl or traceless")->check(CLI::IsMember({"gl", "traceless"}));
    };

    spec(sub("classify", "Generalized Cartan matrix and its type"));
    spec(sub("serre", "Serre relations of every root pair"));

    auto* rm = sub("rmatrix", "Universal R-matrix by the linear recursion");
    spec(rm);
    order(rm, "Degree n_max of the series");
    rm->add_flag("--verify-ybe", cfg.verify_ybe, "Check the Yang-Baxter residual at every degree");

    auto* tw = sub("twist", "Twist series and the twisted R-matrix");
    spec(tw);
    order(tw, "Order in eps");
    tw->add_option("--m-max", cfg.m_max, "Number of factors F^m")->check(CLI::PositiveNumber);
    tw->add_option("--tau", cfg.tau, "Pairs sigma:tau(sigma) of root labels, comma separated");
    tw->add_flag("--elementary", cfg.elementary, "Use the closed-form elementary twist of one pair");
    tw->add_flag("--verify-ybe", cfg.verify_ybe, "Check the twist equation and the twisted Yang-Baxter residual");

    auto* cr = sub("classical-r", "Standard classical r-matrix of a loop algebra");
    loop(cr);
    cr->add_option("--u", cfg.u, "CSV point: lambda = exp(2 pi i u), mu = 1");

    auto* cy = sub("cybe", "Classical Yang-Baxter residual");
    loop(cy);
    order(cy, "Loop terms (extended) or series terms (elliptic)");
    cy->add_flag("--extended", cfg.extended, "Central extension by c and d");
    cy->add_option("--u", cfg.u, "Weight u of u c (x) d + (1 - u) d (x) c");
    cy->add_option("--eps", cfg.eps, "Deformation parameter of the elliptic series");
    cy->add_option("--form", cfg.form, "Elliptic series: derived or as-printed")->check(CLI::IsMember({"derived", "as-printed"}));

    auto* bd = sub("bd-deform", "Belavin-Drinfeld deformations");
    bd->add_option("--n", cfg.n, "sl(N)")->check(CLI::PositiveNumber);
    bd->add_option("--eps", cfg.eps, "Deformation parameter (default symbolic)");
    bd->add_flag("--esoteric", cfg.esoteric, "Cyclic triple on affine sl(N) omitting the affine root");

    auto* el = sub("elliptic", "Elliptic R-matrix as a product of twist factors");
    el->add_option("--eps", cfg.eps, "Deformation parameter, |eps| < 1");
    el->add_option("--q", cfg.q, "Quantum parameter");
    el->add_option("--u", cfg.u, "Spectral point, lambda / mu = exp(2 pi i u)");
    el->add_option("--factors", cfg.factors, "Number M of factors")->check(CLI::PositiveNumber);
    el->add_option("--form", cfg.form, "Factors: derived or as-printed")->check(CLI::IsMember({"derived", "as-printed"}));
    el->add_flag("--check-jacobi", cfg.check_jacobi, "Fit (nome, rho) and compare with Jacobi functions");

    auto* rs = sub("rep-solve", "R-matrix in the fundamental representation");
    spec(rs);
    rs->add_flag("--verify-ybe", cfg.verify_ybe, "Check the matrix Yang-Baxter residual");
    rs->add_option("--q", cfg.q, "CSV point: value of Q");
    rs->add_option("--u", cfg.u, "CSV point: lambda = exp(2 pi i u), mu = 1");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    JobConfig cfg;
    CLI::App app{"ybforge: quantum and classical R-matrices", "ybforge"};
    build_app(app, cfg);
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kInputError;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    try {
        Report rep = dispatch(cfg);
        rep.body["verified"] = rep.verified;
        emit(cfg, rep.csv ? *rep.csv : rep.body.dump(2) + "\n", out);
        return rep.verified ? kSuccess : kVerificationFailure;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
    } catch (const json::exception& e) {
        err << "input error: " << e.what() << "\n";
    }
    return kInputError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace ybforge::cli
