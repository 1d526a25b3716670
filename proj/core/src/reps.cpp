#include "ybforge/reps.hpp"

#include <sstream>

#include "ybforge/error.hpp"
#include "ybforge/linsolve.hpp"

namespace ybforge::reps {

using freealg::Algebra;
using freealg::CartanExp;
using freealg::Mono;

// ------------------------------------------------------------------ Matrix

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar(1);
    return m;
}

Matrix Matrix::unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j, const Scalar& c) {
    Matrix m(rows, cols);
    m(i, j) = c;
    return m;
}

Matrix Matrix::diagonal(const std::vector<Scalar>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

namespace {

void check_same(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::DimensionMismatch, "matrix shapes differ");
}

}  // namespace

Matrix Matrix::operator+(const Matrix& o) const {
    check_same(*this, o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!o.data_[i].is_zero()) r.data_[i] += o.data_[i];
    return r;
}

Matrix Matrix::operator-(const Matrix& o) const {
    check_same(*this, o);
    Matrix r = *this;
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!o.data_[i].is_zero()) r.data_[i] -= o.data_[i];
    return r;
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) fail(ErrorKind::DimensionMismatch, "inner matrix dimensions differ");
    Matrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Scalar& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) {
                const Scalar& b = o(k, j);
                if (!b.is_zero()) r(i, j) += a * b;
            }
        }
    return r;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

bool Matrix::is_zero() const {
    for (auto& x : data_)
        if (!x.is_zero()) return false;
    return true;
}

std::size_t Matrix::nonzeros() const {
    std::size_t n = 0;
    for (auto& x : data_) n += !x.is_zero();
    return n;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::map(const std::function<Scalar(const Scalar&)>& f) const {
    Matrix r = *this;
    for (auto& x : r.data_)
        if (!x.is_zero()) x = f(x);
    return r;
}

Matrix Matrix::substitute(const std::map<scalars::Var, Scalar>& values) const {
    return map([&](const Scalar& x) { return x.substitute(values); });
}

Matrix operator*(const Scalar& c, const Matrix& m) {
    return m.map([&](const Scalar& x) { return c * x; });
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const Scalar& x = a(i, j);
            if (x.is_zero()) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    if (!b(k, l).is_zero()) r(i * b.rows() + k, j * b.cols() + l) = x * b(k, l);
        }
    return r;
}

Matrix swap_matrix(std::size_t a, std::size_t b) {
    Matrix p(a * b, a * b);
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < b; ++j) p(j * a + i, i * b + j) = Scalar(1);
    return p;
}

// --------------------------------------------------------- representations

Matrix cartan_image(const Algebra& alg, const Representation& rep, const CartanExp& k) {
    auto form = alg.form(k);
    std::vector<Scalar> d(rep.dim);
    for (std::size_t v = 0; v < rep.dim; ++v) {
        Scalar L;
        for (std::size_t a = 0; a < form.size(); ++a) {
            if (form[a].is_zero()) continue;
            if (!rep.represented[a])
                fail(ErrorKind::MissingImage, "no image for H_" + rep.spec.cartan_labels[a]);
            if (rep.weights[v][a]) L += form[a] * Scalar(rep.weights[v][a]);
        }
        d[v] = cartan::exp_linear(L);
    }
    return Matrix::diagonal(d);
}

Matrix commutator_target(const Algebra& alg, const Representation& rep, std::size_t alpha) {
    return cartan_image(alg, rep, alg.A(alpha)) - cartan_image(alg, rep, alg.B(alpha).inverse());
}

namespace {

// s with s c = t.
Scalar scale_between(const Matrix& c, const Matrix& t) {
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = 0; j < c.cols(); ++j)
            if (!c(i, j).is_zero()) {
                Scalar s = t(i, j) / c(i, j);
                if (s * c != t) fail(ErrorKind::InvalidArgument, "commutator is not proportional to the Cartan target");
                return s;
            }
    fail(ErrorKind::InvalidArgument, "commutator vanishes");
}

Matrix bracket(const Matrix& a, const Matrix& b) { return a * b - b * a; }

std::vector<long> weight_difference(const Representation& rep, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero()) {
                std::vector<long> w(rep.weights[i].size());
                for (std::size_t a = 0; a < w.size(); ++a) w[a] = rep.weights[i][a] - rep.weights[j][a];
                return w;
            }
    fail(ErrorKind::NoHighestRoot, "root vector image vanishes");
}

}  // namespace

Representation fundamental_slN(int n, const std::string& symbol) {
    Representation rep;
    rep.spec = cartan::slN_spec(n, symbol);
    const std::size_t N = static_cast<std::size_t>(n);
    rep.dim = N;
    rep.weights.assign(N, std::vector<long>(N));
    for (std::size_t v = 0; v < N; ++v) rep.weights[v][v] = 1;
    rep.represented.assign(N, true);
    auto alg = Algebra::create(rep.spec);
    for (std::size_t i = 0; i + 1 < N; ++i) {
        Matrix up = Matrix::unit(N, N, i, i + 1);
        Matrix down = Matrix::unit(N, N, i + 1, i);
        rep.raising.push_back(up);
        rep.lowering.push_back(scale_between(bracket(up, down), commutator_target(*alg, rep, i)) * down);
    }
    rep.highest = Matrix::unit(N, N, 0, N - 1);
    rep.lowest = Matrix::unit(N, N, N - 1, 0);
    return rep;
}

Representation evaluation_rep(const Representation& rep, const std::string& spectral, const Scalar& u) {
    if (!rep.highest || !rep.lowest) fail(ErrorKind::NoHighestRoot, "representation has no highest root vector");
    auto extra = weight_difference(rep, *rep.lowest);
    std::vector<Scalar> extra_root;
    for (long x : extra) extra_root.emplace_back(x);
    auto ext = cartan::affine_extend(rep.spec, u, extra_root);
    Representation out;
    out.spec = ext.extended;
    out.dim = rep.dim;
    out.weights = rep.weights;
    for (auto& w : out.weights) {
        w.push_back(0);
        w.push_back(0);
    }
    out.represented = rep.represented;
    out.represented.push_back(true);
    out.represented.push_back(false);
    out.spectral = spectral;
    Scalar lam = Scalar::variable(spectral);
    Matrix e0 = lam * *rep.lowest;
    Matrix f0 = lam.inverse() * *rep.highest;
    out.raising.push_back(e0);
    out.lowering.push_back(f0);
    for (auto& m : rep.raising) out.raising.push_back(m);
    for (auto& m : rep.lowering) out.lowering.push_back(m);
    auto alg = Algebra::create(out.spec);
    out.lowering[0] = scale_between(bracket(e0, f0), commutator_target(*alg, out, 0)) * f0;
    out.highest = rep.highest;
    out.lowest = rep.lowest;
    return out;
}

Representation with_spectral(const Representation& rep, const std::string& spectral) {
    if (rep.spectral.empty() || spectral.empty() || spectral == rep.spectral) return rep;
    Representation out = rep;
    std::map<scalars::Var, Scalar> sub{{scalars::intern(rep.spectral), Scalar::variable(spectral)}};
    for (auto& m : out.raising) m = m.substitute(sub);
    for (auto& m : out.lowering) m = m.substitute(sub);
    out.spectral = spectral;
    return out;
}

std::vector<std::string> relation_failures(const Representation& rep) {
    std::vector<std::string> out;
    auto alg = Algebra::create(rep.spec);
    const std::size_t N = rep.spec.rank_N(), M = rep.spec.rank_M();
    for (std::size_t a = 0; a < M; ++a) {
        if (!rep.represented[a]) continue;
        std::vector<Scalar> d;
        for (std::size_t v = 0; v < rep.dim; ++v) d.emplace_back(rep.weights[v][a]);
        Matrix H = Matrix::diagonal(d);
        for (std::size_t al = 0; al < N; ++al) {
            const Scalar& h = rep.spec.H[a][al];
            if (bracket(H, rep.raising[al]) != h * rep.raising[al] || bracket(H, rep.lowering[al]) != (-h) * rep.lowering[al])
                out.push_back("[H_" + rep.spec.cartan_labels[a] + ", e_" + alg->root_name(al) + "]");
        }
    }
    for (std::size_t al = 0; al < N; ++al)
        for (std::size_t be = 0; be < N; ++be) {
            Matrix c = bracket(rep.raising[al], rep.lowering[be]);
            Matrix t = al == be ? commutator_target(*alg, rep, al) : Matrix(rep.dim, rep.dim);
            if (c != t) out.push_back("[e_" + alg->root_name(al) + ", e_-" + alg->root_name(be) + "]");
        }
    return out;
}

// -------------------------------------------------------------- evaluation

namespace {

void check_rep(const Algebra& alg, const Representation& rep) {
    if (alg.rank_N() != rep.raising.size() || alg.spec().rank_M() != rep.represented.size())
        fail(ErrorKind::DimensionMismatch, "representation does not match the algebra");
}

Matrix mono_image(const Algebra& alg, const Representation& rep, const Mono& m) {
    Matrix r = Matrix::identity(rep.dim);
    for (auto a : m.neg) r = r * rep.lowering[a];
    if (!m.k.is_one()) r = r * cartan_image(alg, rep, m.k);
    for (auto a : m.pos) r = r * rep.raising[a];
    return r;
}

}  // namespace

Matrix evaluate(const AlgebraElement& x, const Representation& rep) {
    const Algebra& alg = *x.algebra();
    check_rep(alg, rep);
    Matrix r(rep.dim, rep.dim);
    for (auto& [m, c] : x.terms()) r += c * mono_image(alg, rep, m);
    return r;
}

Matrix evaluate(const TensorElement& x, const std::vector<const Representation*>& reps,
                const std::vector<std::string>& spectral) {
    if (reps.size() != x.legs()) fail(ErrorKind::DimensionMismatch, "one representation per leg is required");
    const Algebra& alg = *x.algebra();
    std::vector<Representation> legs;
    std::size_t dim = 1;
    for (std::size_t l = 0; l < reps.size(); ++l) {
        check_rep(alg, *reps[l]);
        legs.push_back(l < spectral.size() ? with_spectral(*reps[l], spectral[l]) : *reps[l]);
        dim *= legs.back().dim;
    }
    std::vector<std::map<Mono, Matrix>> cache(legs.size());
    auto image = [&](std::size_t l, const Mono& m) -> const Matrix& {
        auto it = cache[l].find(m);
        if (it == cache[l].end()) it = cache[l].emplace(m, mono_image(alg, legs[l], m)).first;
        return it->second;
    };
    Matrix r(dim, dim);
    for (auto& [k, c] : x.terms()) {
        Matrix t = image(0, k[0]);
        for (std::size_t l = 1; l < legs.size(); ++l) t = kron(t, image(l, k[l]));
        r += c * t;
    }
    return r;
}

Matrix prefactor_image(const Representation& r1, const Representation& r2) {
    const auto& phi = r1.spec.phi;
    const std::size_t M = r1.spec.rank_M();
    if (r2.spec.rank_M() != M) fail(ErrorKind::DimensionMismatch, "representations use different Cartan ranks");
    std::vector<Scalar> d;
    for (std::size_t v = 0; v < r1.dim; ++v)
        for (std::size_t w = 0; w < r2.dim; ++w) {
            Scalar L;
            for (std::size_t a = 0; a < M; ++a)
                for (std::size_t b = 0; b < M; ++b) {
                    if (phi[a][b].is_zero()) continue;
                    long ha = r1.weights[v][a], hb = r2.weights[w][b];
                    if ((!r1.represented[a] && hb) || (!r2.represented[b] && ha))
                        fail(ErrorKind::MissingImage, "prefactor needs an unrepresented Cartan generator");
                    if (ha && hb) L += phi[a][b] * Scalar(ha * hb);
                }
            d.push_back(cartan::exp_linear(L));
        }
    return Matrix::diagonal(d);
}

Matrix evaluate_body_R(const TensorElement& body, const Representation& r1, const Representation& r2,
                       const std::vector<std::string>& spectral) {
    return prefactor_image(r1, r2) * evaluate(body, {&r1, &r2}, spectral);
}

Matrix evaluate_R(const rmatrix::RSeries& R, int degree, const Representation& r1, const Representation& r2,
                  const std::vector<std::string>& spectral) {
    return evaluate_body_R(R.body(degree), r1, r2, spectral);
}

// -------------------------------------------------------------- matrix YBE

Matrix matrix_ybe_residual(const Matrix& R, std::size_t d, const std::vector<std::string>& names) {
    if (R.rows() != d * d || R.cols() != d * d) fail(ErrorKind::DimensionMismatch, "R must act on C^d (x) C^d");
    std::vector<std::string> n = names.empty() ? std::vector<std::string>{"lambda", "mu", "nu"} : names;
    if (n.size() != 3) fail(ErrorKind::InvalidArgument, "three spectral names are required");
    auto var = [](const std::string& s) { return scalars::intern(s); };
    Matrix R13 = R.substitute({{var(n[1]), Scalar::variable(n[2])}});
    Matrix R23 = R.substitute({{var(n[0]), Scalar::variable(n[1])}, {var(n[1]), Scalar::variable(n[2])}});
    Matrix I = Matrix::identity(d);
    Matrix P23 = kron(I, swap_matrix(d, d));
    Matrix A12 = kron(R, I);
    Matrix A13 = P23 * kron(R13, I) * P23;
    Matrix A23 = kron(I, R23);
    return A12 * A13 * A23 - A23 * A13 * A12;
}

// ----------------------------------------------------------- intertwiners

namespace {

struct Ansatz {
    std::vector<std::pair<std::size_t, std::size_t>> entries;
};

Matrix solve_on(const std::vector<std::pair<Matrix, Matrix>>& pairs, std::size_t dim, const Ansatz& ans) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
    for (std::size_t u = 0; u < ans.entries.size(); ++u) index[ans.entries[u]] = u;
    linsolve::Matrix rows;
    for (auto& [D, Dp] : pairs) {
        // (D R - R D')_{ij} over the ansatz entries.
        std::map<std::pair<std::size_t, std::size_t>, std::map<std::size_t, Scalar>> eq;
        for (std::size_t u = 0; u < ans.entries.size(); ++u) {
            auto [k, j] = ans.entries[u];
            for (std::size_t i = 0; i < dim; ++i)
                if (!D(i, k).is_zero()) eq[{i, j}][u] += D(i, k);
            auto [i, kk] = ans.entries[u];
            for (std::size_t jj = 0; jj < dim; ++jj)
                if (!Dp(kk, jj).is_zero()) eq[{i, jj}][u] -= Dp(kk, jj);
        }
        for (auto& [pos, coeffs] : eq) {
            std::vector<Scalar> row(ans.entries.size());
            bool any = false;
            for (auto& [u, c] : coeffs)
                if (!c.is_zero()) {
                    row[u] = c;
                    any = true;
                }
            if (any) rows.push_back(std::move(row));
        }
    }
    auto basis = linsolve::nullspace(rows, ans.entries.size());
    if (basis.empty()) fail(ErrorKind::NoSolution, "no intertwiner exists");
    if (basis.size() > 1) fail(ErrorKind::IntertwinerNotUnique, "intertwiner space has dimension " + std::to_string(basis.size()));
    Matrix R(dim, dim);
    for (std::size_t u = 0; u < ans.entries.size(); ++u) R(ans.entries[u].first, ans.entries[u].second) = basis[0][u];
    if (R(0, 0).is_zero()) fail(ErrorKind::NoSolution, "intertwiner vanishes on the highest-weight product vector");
    return R.map([&, top = R(0, 0)](const Scalar& x) { return x / top; });
}

Ansatz weight_ansatz(std::size_t dim, const std::vector<std::vector<long>>& weights,
                     const std::function<bool(std::size_t, std::size_t)>& extra = nullptr) {
    Ansatz a;
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            if ((weights.empty() || weights[i] == weights[j]) && (!extra || extra(i, j))) a.entries.push_back({i, j});
    return a;
}

}  // namespace

Matrix solve_intertwiner(const std::vector<std::pair<Matrix, Matrix>>& pairs, std::size_t dim,
                         const std::vector<std::vector<long>>& weights) {
    return solve_on(pairs, dim, weight_ansatz(dim, weights));
}

RepSolution solve_R_in_rep(const Representation& r1, const Representation& r2, const std::vector<std::string>& spectral) {
    auto alg = Algebra::create(r1.spec);
    std::vector<const Representation*> reps{&r1, &r2};
    std::vector<std::pair<Matrix, Matrix>> pairs;
    for (std::size_t a = 0; a < alg->rank_N(); ++a)
        for (int s : {-1, 1}) {
            auto d = freealg::coproduct(AlgebraElement::generator(alg, s, a));
            pairs.push_back({evaluate(d, reps, spectral), evaluate(d.flip(), reps, spectral)});
        }
    const std::size_t dim = r1.dim * r2.dim;
    std::vector<std::vector<long>> weights;
    for (std::size_t v = 0; v < r1.dim; ++v)
        for (std::size_t w = 0; w < r2.dim; ++w) {
            std::vector<long> t;
            for (std::size_t a = 0; a < r1.represented.size(); ++a)
                t.push_back(r1.represented[a] ? r1.weights[v][a] + r2.weights[w][a] : 0);
            weights.push_back(t);
        }
    Matrix K0 = prefactor_image(r1, r2);
    Matrix R;
    try {
        R = solve_on(pairs, dim, weight_ansatz(dim, weights));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::IntertwinerNotUnique) throw;
        // Restrict to K0 (lowering (x) raising): leg 1 weight goes down, leg 2 weight goes up.
        auto height = [](const std::vector<long>& w) {
            long h = 0;
            for (std::size_t a = 0; a < w.size(); ++a) h += static_cast<long>(w.size() - a) * w[a];
            return h;
        };
        auto triangular = [&](std::size_t i, std::size_t j) {
            std::size_t i1 = i / r2.dim, j1 = j / r2.dim;
            if (i == j) return true;
            return height(r1.weights[i1]) < height(r1.weights[j1]);
        };
        R = solve_on(pairs, dim, weight_ansatz(dim, weights, triangular));
    }
    return {R, K0(0, 0)};
}

// -------------------------------------------------------------------- io

nlohmann::json to_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).str());
        rows.push_back(row);
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

std::string to_csv(const Matrix& m, const std::map<std::string, Complex>& point) {
    std::ostringstream out;
    out.precision(17);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j) out << ',';
            Complex z = scalars::evaluate_scalar(m(i, j), point);
            out << z.real();
            if (z.imag() != 0) out << (z.imag() > 0 ? "+" : "") << z.imag() << 'j';
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace ybforge::reps
