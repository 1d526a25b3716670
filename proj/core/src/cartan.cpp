#include "ybforge/cartan.hpp"

#include <algorithm>

namespace ybforge::cartan {

using scalars::Monomial;
using scalars::Polynomial;
using scalars::Var;

namespace {

std::string exp_name(const std::string& symbol) {
    if (symbol.rfind("log_", 0) == 0 && symbol.size() > 4) return symbol.substr(4);
    return "exp_" + symbol;
}

Scalar parse_entry(const nlohmann::json& v) {
    if (v.is_string()) return Scalar::parse(v.get<std::string>());
    if (v.is_number_integer()) return Scalar(v.get<long>());
    fail(ErrorKind::InvalidSpec, "matrix entries must be scalar strings or integers");
}

ScalarMatrix parse_matrix(const nlohmann::json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows)
        fail(ErrorKind::InvalidSpec, std::string(what) + " must have " + std::to_string(rows) + " rows");
    ScalarMatrix m(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols)
            fail(ErrorKind::InvalidSpec, std::string(what) + " row " + std::to_string(i) + " must have " + std::to_string(cols) + " entries");
        for (std::size_t k = 0; k < cols; ++k) m[i].push_back(parse_entry(j[i][k]));
    }
    return m;
}

Scalar dot3(const ScalarMatrix& phi, const ScalarMatrix& H, std::size_t alpha, std::size_t beta) {
    Scalar s;
    for (std::size_t a = 0; a < phi.size(); ++a) {
        if (H[a][alpha].is_zero()) continue;
        for (std::size_t b = 0; b < phi.size(); ++b) {
            if (phi[a][b].is_zero() || H[b][beta].is_zero()) continue;
            s += phi[a][b] * H[a][alpha] * H[b][beta];
        }
    }
    return s;
}

}  // namespace

bool is_linear_form(const Scalar& form) {
    if (!form.den().is_constant()) return false;
    for (auto& t : form.num().terms())
        if (t.mono.degree() > 1 || !t.mono.nonnegative()) return false;
    return true;
}

Scalar exp_linear(const Scalar& form) {
    if (form.is_zero()) return Scalar(1);
    if (!is_linear_form(form)) fail(ErrorKind::NonIntegralExponent, "not a linear form: " + form.str());
    const mpz_class& d = form.den().leading().coeff;
    Monomial m;
    for (auto& t : form.num().terms()) {
        if (t.mono.is_one()) fail(ErrorKind::NonIntegralExponent, "constant term in exponent: " + form.str());
        if (!mpz_divisible_p(t.coeff.get_mpz_t(), d.get_mpz_t()))
            fail(ErrorKind::NonIntegralExponent, "non-integer coefficient in exponent: " + form.str());
        mpz_class c = t.coeff / d;
        if (!c.fits_sint_p()) fail(ErrorKind::NonIntegralExponent, "exponent too large: " + form.str());
        Var s = t.mono.entries()[0].first;
        m = m * Monomial::variable(scalars::intern(exp_name(scalars::var_name(s))), static_cast<std::int32_t>(c.get_si()));
    }
    return Scalar::monomial(m);
}

Scalar CartanSpec::pairing(std::size_t alpha, std::size_t beta) const { return dot3(phi, H, alpha, beta); }

Scalar CartanSpec::exp_pairing(std::size_t alpha, std::size_t beta) const { return exp_linear(pairing(alpha, beta)); }

std::vector<Scalar> CartanSpec::left_form(std::size_t alpha) const {
    std::vector<Scalar> v(rank_M());
    for (std::size_t a = 0; a < rank_M(); ++a)
        if (!H[a][alpha].is_zero())
            for (std::size_t b = 0; b < rank_M(); ++b) v[b] += phi[a][b] * H[a][alpha];
    return v;
}

std::vector<Scalar> CartanSpec::right_form(std::size_t alpha) const {
    std::vector<Scalar> v(rank_M());
    for (std::size_t b = 0; b < rank_M(); ++b)
        if (!H[b][alpha].is_zero())
            for (std::size_t a = 0; a < rank_M(); ++a) v[a] += phi[a][b] * H[b][alpha];
    return v;
}

std::size_t CartanSpec::root_index(int label) const {
    auto it = std::find(root_labels.begin(), root_labels.end(), label);
    if (it == root_labels.end()) fail(ErrorKind::UnknownGenerator, "no root labelled " + std::to_string(label));
    return static_cast<std::size_t>(it - root_labels.begin());
}

void CartanSpec::validate() const {
    if (phi.size() != rank_M()) fail(ErrorKind::InvalidSpec, "phi must be |M| x |M|");
    for (auto& row : phi)
        if (row.size() != rank_M()) fail(ErrorKind::InvalidSpec, "phi must be |M| x |M|");
    if (H.size() != rank_M()) fail(ErrorKind::InvalidSpec, "H must be |M| x |N|");
    for (auto& row : H)
        if (row.size() != rank_N()) fail(ErrorKind::InvalidSpec, "H must be |M| x |N|");
    for (auto& row : phi)
        for (auto& x : row)
            if (!is_linear_form(x)) fail(ErrorKind::InvalidSpec, "phi entries must be linear forms: " + x.str());
    for (auto& row : H)
        for (auto& x : row)
            if (!x.is_constant()) fail(ErrorKind::InvalidSpec, "H entries must be rational numbers: " + x.str());
    std::vector<int> labels = root_labels;
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) fail(ErrorKind::InvalidSpec, "duplicate root labels");
    for (std::size_t alpha = 0; alpha < rank_N(); ++alpha)
        if (pairing(alpha, alpha).is_zero())
            fail(ErrorKind::InvalidSpec, "phi(alpha, alpha) vanishes for root " + std::to_string(root_labels[alpha]));
}

CartanSpec spec_from_json(const nlohmann::json& j) {
    if (!j.is_object()) fail(ErrorKind::InvalidSpec, "spec must be a JSON object");
    if (!j.contains("rank_M") || !j.contains("rank_N") || !j.contains("phi") || !j.contains("H"))
        fail(ErrorKind::InvalidSpec, "spec requires rank_M, rank_N, phi, H");
    long m = j.at("rank_M").get<long>(), n = j.at("rank_N").get<long>();
    if (m < 0 || n < 0) fail(ErrorKind::InvalidSpec, "negative rank");
    CartanSpec s;
    for (long a = 0; a < m; ++a) s.cartan_labels.push_back(std::to_string(a + 1));
    for (long b = 0; b < n; ++b) s.root_labels.push_back(static_cast<int>(b + 1));
    if (j.contains("cartan_labels")) s.cartan_labels = j.at("cartan_labels").get<std::vector<std::string>>();
    if (j.contains("root_labels")) s.root_labels = j.at("root_labels").get<std::vector<int>>();
    if (s.cartan_labels.size() != static_cast<std::size_t>(m) || s.root_labels.size() != static_cast<std::size_t>(n))
        fail(ErrorKind::InvalidSpec, "label lists must match ranks");
    s.phi = parse_matrix(j.at("phi"), static_cast<std::size_t>(m), static_cast<std::size_t>(m), "phi");
    s.H = parse_matrix(j.at("H"), static_cast<std::size_t>(m), static_cast<std::size_t>(n), "H");
    if (j.contains("relations")) {
        std::map<Var, Scalar> subst;
        for (auto& r : j.at("relations")) {
            if (!r.contains("symbol") || !r.contains("value")) fail(ErrorKind::InvalidSpec, "relations need symbol and value");
            Relation rel{r.at("symbol").get<std::string>(), parse_entry(r.at("value"))};
            subst[scalars::intern(rel.symbol)] = rel.value;
            s.relations.push_back(rel);
        }
        for (auto& row : s.phi)
            for (auto& x : row) x = x.substitute(subst);
        for (auto& row : s.H)
            for (auto& x : row) x = x.substitute(subst);
    }
    s.validate();
    return s;
}

nlohmann::json spec_to_json(const CartanSpec& s) {
    nlohmann::json j;
    j["rank_M"] = s.rank_M();
    j["rank_N"] = s.rank_N();
    j["cartan_labels"] = s.cartan_labels;
    j["root_labels"] = s.root_labels;
    auto mat = [](const ScalarMatrix& m) {
        nlohmann::json out = nlohmann::json::array();
        for (auto& row : m) {
            nlohmann::json r = nlohmann::json::array();
            for (auto& x : row) r.push_back(x.str());
            out.push_back(r);
        }
        return out;
    };
    j["phi"] = mat(s.phi);
    j["H"] = mat(s.H);
    j["relations"] = nlohmann::json::array();
    for (auto& r : s.relations) j["relations"].push_back({{"symbol", r.symbol}, {"value", r.value.str()}});
    return j;
}

GCM generalized_cartan_matrix(const CartanSpec& spec) {
    const std::size_t n = spec.rank_N();
    GCM g;
    g.A.assign(n, std::vector<long>(n, 0));
    for (std::size_t a = 0; a < n; ++a) {
        Scalar d = spec.pairing(a, a);
        if (d.is_zero()) fail(ErrorKind::NonIntegerRatio, "phi(alpha, alpha) vanishes");
        g.A[a][a] = 2;
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) continue;
            Scalar ratio = (spec.pairing(a, b) + spec.pairing(b, a)) / d;
            auto r = ratio.as_rational();
            if (!r || r->get_den() != 1 || !r->get_num().fits_slong_p())
                fail(ErrorKind::NonIntegerRatio, "ratio for roots " + std::to_string(spec.root_labels[a]) + "," +
                                                     std::to_string(spec.root_labels[b]) + " is " + ratio.str());
            g.A[a][b] = r->get_num().get_si();
        }
    }
    // Symmetrizer D with D A symmetric, propagated along the Dynkin graph.
    g.symmetrizer.assign(n, mpq_class(0));
    g.symmetrizable = true;
    for (std::size_t start = 0; start < n; ++start) {
        if (g.symmetrizer[start] != 0) continue;
        g.symmetrizer[start] = 1;
        std::vector<std::size_t> stack{start};
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j || (g.A[i][j] == 0 && g.A[j][i] == 0)) continue;
                if (g.A[i][j] == 0 || g.A[j][i] == 0) {
                    g.symmetrizable = false;
                    continue;
                }
                mpq_class dj = g.symmetrizer[i] * mpq_class(g.A[i][j]) / mpq_class(g.A[j][i]);
                if (g.symmetrizer[j] == 0) {
                    g.symmetrizer[j] = dj;
                    stack.push_back(j);
                } else if (g.symmetrizer[j] != dj) {
                    g.symmetrizable = false;
                }
            }
        }
    }
    for (auto& d : g.symmetrizer)
        if (d <= 0) g.symmetrizable = false;
    return g;
}

const char* type_name(CartanType t) {
    switch (t) {
        case CartanType::FiniteType: return "FiniteType";
        case CartanType::AffineType: return "AffineType";
        case CartanType::Other: return "Other";
    }
    return "Other";
}

mpq_class determinant(const IntMatrix& A, const std::vector<std::size_t>& rows) {
    const std::size_t n = rows.size();
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = A[rows[i]][rows[j]];
    mpq_class det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[c][c];
            for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

CartanType classify(const IntMatrix& A) {
    const std::size_t n = A.size();
    for (auto& row : A)
        if (row.size() != n) fail(ErrorKind::MalformedGCM, "matrix is not square");
    if (n > 20) fail(ErrorKind::MalformedGCM, "rank too large for principal-minor enumeration");
    for (std::size_t i = 0; i < n; ++i) {
        if (A[i][i] != 2) fail(ErrorKind::MalformedGCM, "diagonal entries must be 2");
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (A[i][j] > 0) fail(ErrorKind::MalformedGCM, "off-diagonal entries must be non-positive");
            if ((A[i][j] == 0) != (A[j][i] == 0)) fail(ErrorKind::MalformedGCM, "zero pattern must be symmetric");
        }
    }
    if (n == 0) return CartanType::FiniteType;
    bool proper_positive = true;
    const std::size_t full = (std::size_t{1} << n) - 1;
    for (std::size_t mask = 1; mask < full; ++mask) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) rows.push_back(i);
        if (determinant(A, rows) <= 0) {
            proper_positive = false;
            break;
        }
    }
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    mpq_class det = determinant(A, all);
    if (proper_positive && det > 0) return CartanType::FiniteType;
    if (proper_positive && det == 0) return CartanType::AffineType;
    return CartanType::Other;
}

Scalar serre_exponent(const CartanSpec& spec, std::size_t alpha, std::size_t beta, int k) {
    return spec.pairing(alpha, beta) + spec.pairing(beta, alpha) + Scalar(static_cast<long>(k - 1)) * spec.pairing(alpha, alpha);
}

SerreData serre_coefficients(const CartanSpec& spec, std::size_t alpha, std::size_t beta) {
    if (alpha >= spec.rank_N() || beta >= spec.rank_N()) fail(ErrorKind::UnknownGenerator, "root index out of range");
    Scalar d = spec.pairing(alpha, alpha);
    if (d.is_zero()) fail(ErrorKind::NoIntegerK, "phi(alpha, alpha) vanishes");
    Scalar ratio = (spec.pairing(alpha, beta) + spec.pairing(beta, alpha)) / d;
    auto r = ratio.as_rational();
    if (alpha == beta || !r || r->get_den() != 1 || *r > 0)
        fail(ErrorKind::NoIntegerK, "no positive integer k solves the exponent-zero relation; ratio = " + ratio.str());
    SerreData s;
    s.alpha = alpha;
    s.beta = beta;
    s.k = static_cast<int>(1 - r->get_num().get_si());
    s.q = spec.exp_pairing(alpha, alpha);
    Scalar e = spec.exp_pairing(alpha, beta);
    for (int m = 0; m <= s.k; ++m) {
        Scalar c = (m % 2 ? Scalar(-1) : Scalar(1)) * e.pow(m) * s.q.pow(m * (m - 1) / 2) * scalars::q_binomial(s.q, s.k, m);
        s.Q.push_back(c);
    }
    return s;
}

AffineExtension affine_extend(const CartanSpec& spec, const Scalar& u, const std::vector<Scalar>& extra_root) {
    if (extra_root.size() != spec.rank_M()) fail(ErrorKind::NotAffine, "extra root must have one entry per Cartan generator");
    AffineExtension ext;
    ext.base = spec;
    ext.u = u;
    ext.extra_root = extra_root;
    CartanSpec& e = ext.extended;
    const std::size_t m = spec.rank_M(), n = spec.rank_N();
    e.cartan_labels = spec.cartan_labels;
    e.cartan_labels.push_back("c");
    e.cartan_labels.push_back("d");
    e.root_labels.push_back(0);
    for (int l : spec.root_labels) {
        if (l == 0) fail(ErrorKind::NotAffine, "root label 0 is reserved for the extra root");
        e.root_labels.push_back(l);
    }
    ext.c_index = m;
    ext.d_index = m + 1;
    e.phi.assign(m + 2, std::vector<Scalar>(m + 2));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) e.phi[a][b] = spec.phi[a][b];
    e.phi[m][m + 1] = u;
    e.phi[m + 1][m] = Scalar(1) - u;
    e.H.assign(m + 2, std::vector<Scalar>(n + 1));
    for (std::size_t a = 0; a < m; ++a) {
        e.H[a][0] = extra_root[a];
        for (std::size_t b = 0; b < n; ++b) e.H[a][b + 1] = spec.H[a][b];
    }
    e.H[m + 1][0] = Scalar(1);
    e.relations = spec.relations;
    try {
        e.validate();
        GCM g = generalized_cartan_matrix(e);
        if (classify(g.A) != CartanType::AffineType) fail(ErrorKind::NotAffine, "extended Cartan matrix is not of affine type");
    } catch (const Error& err) {
        if (err.kind() == ErrorKind::NotAffine) throw;
        fail(ErrorKind::NotAffine, err.what());
    }
    return ext;
}

CartanSpec sl2_spec(const std::string& symbol) {
    CartanSpec s;
    s.cartan_labels = {"1"};
    s.root_labels = {1};
    s.phi = {{Scalar::variable(symbol)}};
    s.H = {{Scalar(1)}};
    s.validate();
    return s;
}

CartanSpec slN_spec(int n, const std::string& symbol) {
    if (n < 2) fail(ErrorKind::InvalidArgument, "sl(N) requires N >= 2");
    CartanSpec s;
    Scalar t = Scalar::variable(symbol);
    for (int a = 1; a <= n; ++a) s.cartan_labels.push_back(std::to_string(a));
    for (int i = 1; i < n; ++i) s.root_labels.push_back(i);
    s.phi.assign(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n)));
    s.H.assign(static_cast<std::size_t>(n), std::vector<Scalar>(static_cast<std::size_t>(n - 1)));
    for (int a = 0; a < n; ++a) {
        s.phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(a)] = t;
        for (int i = 0; i < n - 1; ++i) s.H[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = Scalar(long((a == i) - (a == i + 1)));
    }
    s.validate();
    return s;
}

CartanSpec generic_spec(int rank) {
    if (rank < 0) fail(ErrorKind::InvalidArgument, "negative rank");
    CartanSpec s;
    const std::size_t n = static_cast<std::size_t>(rank);
    for (std::size_t a = 0; a < n; ++a) s.cartan_labels.push_back(std::to_string(a + 1));
    for (std::size_t a = 0; a < n; ++a) s.cartan_labels.push_back(std::to_string(a + 1) + "'");
    for (std::size_t a = 0; a < n; ++a) s.root_labels.push_back(static_cast<int>(a + 1));
    s.phi.assign(2 * n, std::vector<Scalar>(2 * n));
    s.H.assign(2 * n, std::vector<Scalar>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) s.phi[a][b] = Scalar::variable("log_q" + std::to_string(a + 1) + std::to_string(b + 1));
        s.phi[a][n + a] = Scalar(1);
        s.H[a][a] = Scalar(1);
    }
    s.validate();
    return s;
}

AffineExtension affine_slN(int n, const Scalar& u, const std::string& symbol) {
    CartanSpec base = slN_spec(n, symbol);
    std::vector<Scalar> lowest(static_cast<std::size_t>(n));
    lowest.front() = Scalar(-1);
    lowest.back() = Scalar(1);
    return affine_extend(base, u, lowest);
}

CartanSpec twist_compatible_sl3(const std::string& symbol) {
    CartanSpec s = slN_spec(3, symbol);
    Scalar t = Scalar::variable(symbol);
    s.phi[0][2] = t;
    s.phi[2][0] = -t;
    s.validate();
    return s;
}

}  // namespace ybforge::cartan
