#include "ybforge/classical.hpp"

#include <algorithm>
#include <set>

namespace ybforge::classical {

namespace {

Scalar var(const std::string& name) { return Scalar::variable(name); }

// Inverse of a square matrix over the field.
linsolve::Matrix invert(const linsolve::Matrix& g) {
    std::size_t n = g.size();
    linsolve::Matrix inv(n, std::vector<Scalar>(n));
    for (std::size_t col = 0; col < n; ++col) {
        std::vector<linsolve::Row> rows;
        for (std::size_t i = 0; i < n; ++i) {
            linsolve::Row r;
            for (std::size_t j = 0; j < n; ++j)
                if (!g[i][j].is_zero()) r.coeffs[j] = g[i][j];
            r.rhs = Scalar(i == col ? 1 : 0);
            rows.push_back(std::move(r));
        }
        auto x = linsolve::solve_unique(rows, n);
        for (std::size_t i = 0; i < n; ++i) inv[i][col] = x[i];
    }
    return inv;
}

// Dual-basis tensor sum g^{ab} x_a (x) x_b of the given elements under the form.
Matrix dual_tensor(const std::vector<Matrix>& xs, const Scalar& scale) {
    std::size_t dim = xs.size();
    linsolve::Matrix g(dim, std::vector<Scalar>(dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) g[a][b] = trace(xs[a] * xs[b]) / scale;
    auto inv = invert(g);
    std::size_t n = xs.front().rows();
    Matrix out(n * n, n * n);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b)
            if (!inv[a][b].is_zero()) out += inv[a][b] * tensor(xs[a], xs[b]);
    return out;
}

bool diagonal(const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j && !m(i, j).is_zero()) return false;
    return true;
}

}  // namespace

// ------------------------------------------------------------ matrix tools

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

Scalar trace(const Matrix& a) {
    Scalar t;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

Matrix tensor(const Matrix& a, const Matrix& b) { return reps::kron(a, b); }

Matrix flip(const Matrix& t, std::size_t n) {
    Matrix p = reps::swap_matrix(n, n);
    return p * t * p;
}

Matrix transpose_legs(const Matrix& t, std::size_t n, const std::string& s1, const std::string& s2) {
    scalars::Var a = scalars::intern(s1), b = scalars::intern(s2);
    return flip(t, n).substitute({{a, Scalar::variable(s2)}, {b, Scalar::variable(s1)}});
}

Matrix adjoint_action(const Matrix& x, const Matrix& t) {
    Matrix one = Matrix::identity(x.rows());
    return commutator(tensor(x, one) + tensor(one, x), t);
}

Matrix apply_leg1(const std::function<Matrix(const Matrix&)>& f, const Matrix& t, std::size_t n) {
    Matrix out(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Matrix second(n, n);
            bool any = false;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    second(k, l) = t(i * n + k, j * n + l);
                    any = any || !second(k, l).is_zero();
                }
            if (any) out += tensor(f(Matrix::unit(n, n, i, j)), second);
        }
    return out;
}

std::vector<TensorTerm> tensor_terms(const Matrix& t, std::size_t n) {
    std::vector<TensorTerm> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const Scalar& c = t(i * n + k, j * n + l);
                    if (!c.is_zero()) out.push_back({i, j, k, l, c});
                }
    return out;
}

// ------------------------------------------------------------ root vectors

Scalar RootVectorBasis::form(const Matrix& a, const Matrix& b) const { return trace(a * b) / scale; }

Matrix RootVectorBasis::cartan_casimir() const { return dual_tensor(cartan, scale); }

std::vector<Matrix> RootVectorBasis::coroots() const {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < rank; ++i) out.push_back(commutator(roots[i].pos, roots[i].neg));
    return out;
}

Matrix RootVectorBasis::casimir() const {
    Matrix c = dual_tensor(coroots(), scale);
    for (auto& r : roots) c += tensor(r.neg, r.pos) + tensor(r.pos, r.neg);
    return c;
}

std::vector<Matrix> RootVectorBasis::elements() const {
    std::vector<Matrix> out = coroots();
    for (auto& r : roots) out.push_back(r.pos);
    for (auto& r : roots) out.push_back(r.neg);
    return out;
}

Scalar root_value(const Matrix& x, const Matrix& h) {
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!x(i, j).is_zero()) return h(i, i) - h(j, j);
    fail(ErrorKind::InvalidArgument, "root value of a zero element");
}

RootVectorBasis make_basis(std::size_t n, std::vector<Matrix> cartan, const std::vector<Matrix>& raising,
                           const std::vector<Matrix>& lowering, const Matrix& phi, const Scalar& scale) {
    if (raising.size() != lowering.size() || raising.empty())
        fail(ErrorKind::InvalidArgument, "raising and lowering generators must pair up");
    for (auto& h : cartan)
        if (!diagonal(h)) fail(ErrorKind::InvalidArgument, "Cartan elements must be diagonal");
    RootVectorBasis b;
    b.n = n;
    b.scale = scale;
    b.cartan = std::move(cartan);
    b.phi = phi;
    b.rank = raising.size();
    for (std::size_t i = 0; i < b.rank; ++i) {
        RootVector r;
        r.root.assign(b.rank, 0);
        r.root[i] = 1;
        r.height = 1;
        r.pos = raising[i];
        r.neg = lowering[i];
        b.roots.push_back(std::move(r));
    }
    // Extend by brackets with simple generators, one new vector per new root;
    // [E, e_i] keeps matrix units positive for sl(N).
    for (std::size_t front = 0; front < b.roots.size(); ++front)
        for (std::size_t i = 0; i < b.rank; ++i) {
            std::vector<int> root = b.roots[front].root;
            ++root[i];
            bool known = std::any_of(b.roots.begin(), b.roots.end(), [&](auto& r) { return r.root == root; });
            if (known) continue;
            Matrix pos = commutator(b.roots[front].pos, raising[i]);
            if (pos.is_zero()) continue;
            RootVector r;
            r.root = root;
            r.height = b.roots[front].height + 1;
            r.pos = pos;
            r.neg = commutator(lowering[i], b.roots[front].neg);
            b.roots.push_back(std::move(r));
        }
    for (auto& r : b.roots) {
        Scalar p = b.form(r.pos, r.neg);
        if (p.is_zero()) fail(ErrorKind::InvalidArgument, "root vector pairs to zero with its partner");
        r.neg = p.inverse() * r.neg;
    }
    b.highest = b.roots.size() - 1;
    if (phi + flip(phi, n) != b.cartan_casimir())
        fail(ErrorKind::InvalidArgument, "phi + phi^t is not the Cartan dual tensor");
    return b;
}

RootVectorBasis slN_basis(int n) {
    if (n < 2) fail(ErrorKind::InvalidArgument, "sl(N) needs N >= 2");
    std::size_t N = n;
    std::vector<Matrix> cartan, up, down;
    Matrix phi(N * N, N * N);
    for (std::size_t a = 0; a < N; ++a) {
        cartan.push_back(Matrix::unit(N, N, a, a));
        phi += tensor(cartan.back(), cartan.back());
    }
    for (std::size_t i = 0; i + 1 < N; ++i) {
        up.push_back(Matrix::unit(N, N, i, i + 1));
        down.push_back(Matrix::unit(N, N, i + 1, i));
    }
    return make_basis(N, cartan, up, down, phi, Scalar(2));
}

RootVectorBasis traceless_slN_basis(int n, const Scalar& scale) {
    if (n < 2) fail(ErrorKind::InvalidArgument, "sl(N) needs N >= 2");
    std::size_t N = n;
    std::vector<Matrix> cartan, up, down;
    for (std::size_t i = 0; i + 1 < N; ++i) {
        cartan.push_back(Matrix::unit(N, N, i, i) - Matrix::unit(N, N, i + 1, i + 1));
        up.push_back(Matrix::unit(N, N, i, i + 1));
        down.push_back(Matrix::unit(N, N, i + 1, i));
    }
    Matrix phi = Scalar(mpq_class(1, 2)) * dual_tensor(cartan, scale);
    return make_basis(N, cartan, up, down, phi, scale);
}

RootVectorBasis with_phi(const RootVectorBasis& b, const Matrix& phi) {
    if (phi + flip(phi, b.n) != b.cartan_casimir())
        fail(ErrorKind::InvalidArgument, "phi + phi^t is not the Cartan dual tensor");
    RootVectorBasis out = b;
    out.phi = phi;
    return out;
}

linsolve::Matrix pairing_matrix(const RootVectorBasis& b) {
    auto xs = b.elements();
    linsolve::Matrix g(xs.size(), std::vector<Scalar>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) g[i][j] = b.form(xs[i], xs[j]);
    return g;
}

linsolve::Matrix casimir_coefficients(const RootVectorBasis& b) {
    auto xs = b.elements();
    std::size_t dim = xs.size(), n = b.n;
    Matrix c = b.casimir();
    // One equation per tensor entry, unknown (a, b) for x_a (x) x_b.
    std::map<std::pair<std::size_t, std::size_t>, linsolve::Row> rows;
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t bb = 0; bb < dim; ++bb)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (xs[a](i, j).is_zero()) continue;
                    for (std::size_t k = 0; k < n; ++k)
                        for (std::size_t l = 0; l < n; ++l) {
                            if (xs[bb](k, l).is_zero()) continue;
                            rows[{i * n + k, j * n + l}].coeffs[a * dim + bb] += xs[a](i, j) * xs[bb](k, l);
                        }
                }
    std::vector<linsolve::Row> list;
    for (std::size_t r = 0; r < n * n; ++r)
        for (std::size_t s = 0; s < n * n; ++s) {
            auto it = rows.find({r, s});
            linsolve::Row row = it == rows.end() ? linsolve::Row{} : it->second;
            row.rhs = c(r, s);
            std::erase_if(row.coeffs, [](auto& kv) { return kv.second.is_zero(); });
            if (!row.coeffs.empty() || !row.rhs.is_zero()) list.push_back(std::move(row));
        }
    auto x = linsolve::solve_unique(list, dim * dim);
    linsolve::Matrix out(dim, std::vector<Scalar>(dim));
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t bb = 0; bb < dim; ++bb) out[a][bb] = x[a * dim + bb];
    return out;
}

std::vector<std::string> basis_failures(const RootVectorBasis& b) {
    std::vector<std::string> out;
    Matrix c = b.casimir();
    auto xs = b.elements();
    for (std::size_t i = 0; i < xs.size(); ++i)
        if (!adjoint_action(xs[i], c).is_zero()) out.push_back("C not ad-invariant under element " + std::to_string(i));
    for (std::size_t i = 0; i < b.cartan.size(); ++i)
        if (!adjoint_action(b.cartan[i], c).is_zero())
            out.push_back("C not invariant under Cartan element " + std::to_string(i));
    for (std::size_t i = 0; i < b.rank; ++i)
        if (!commutator(b.roots[i].pos, b.e_plus()).is_zero())
            out.push_back("simple root vector " + std::to_string(i) + " does not kill E+");
    auto g = pairing_matrix(b);
    auto cc = casimir_coefficients(b);
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            Scalar s;
            for (std::size_t k = 0; k < xs.size(); ++k) s += g[i][k] * cc[k][j];
            if (s != Scalar(i == j ? 1 : 0)) {
                out.push_back("pairing is not the inverse of the Casimir coefficients at (" + std::to_string(i) +
                              ", " + std::to_string(j) + ")");
                return out;
            }
        }
    return out;
}

// ------------------------------------------------------------ r-matrices

Matrix standard_part(const RootVectorBasis& b) {
    Matrix r = b.phi;
    for (auto& root : b.roots) r += tensor(root.neg, root.pos);
    return r;
}

Matrix r_standard_untwisted(const RootVectorBasis& b, const Scalar& x) {
    if (x == Scalar(1)) fail(ErrorKind::PoleAtOne, "x = 1 is a pole of x / (1 - x)");
    return standard_part(b) + (x / (Scalar(1) - x)) * b.casimir();
}

Scalar spectral_ratio(const std::string& num, const std::string& den) { return var(num) / var(den); }

Matrix TwistedLoopSpec::project(const Matrix& x, int j) const {
    if (k == 1) return x;
    Matrix m = mu(x);
    int sign = (j % 2 == 0) ? 1 : -1;
    return Scalar(mpq_class(1, 2)) * (x + Scalar(sign) * m);
}

std::vector<Matrix> traceless_basis(std::size_t n) {
    std::vector<Matrix> out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) out.push_back(Matrix::unit(n, n, i, j));
    for (std::size_t i = 0; i + 1 < n; ++i) out.push_back(Matrix::unit(n, n, i, i) - Matrix::unit(n, n, i + 1, i + 1));
    return out;
}

TwistedLoopSpec make_twisted(int k, std::size_t n, std::function<Matrix(const Matrix&)> mu,
                             std::vector<Matrix> algebra, const Scalar& scale, RootVectorBasis fixed) {
    if (k == 3) fail(ErrorKind::InvalidArgument, "order 3 needs cube roots of unity in the coefficient field");
    if (k != 1 && k != 2) fail(ErrorKind::InvalidArgument, "automorphism order must be 1 or 2");
    TwistedLoopSpec s;
    s.k = k;
    s.n = n;
    s.scale = scale;
    s.mu = std::move(mu);
    s.algebra = std::move(algebra);
    s.fixed = std::move(fixed);
    s.casimir = dual_tensor(s.algebra, scale);
    for (int j = 0; j < k; ++j) s.parts.push_back(apply_leg1([&](const Matrix& x) { return s.project(x, j); }, s.casimir, n));
    return s;
}

TwistedLoopSpec twisted_a22() {
    const std::size_t n = 3;
    Matrix J = Matrix::unit(n, n, 0, 2) - Matrix::unit(n, n, 1, 1) + Matrix::unit(n, n, 2, 0);
    auto mu = [J](const Matrix& x) { return Scalar(-1) * (J * x.transpose() * J); };
    Matrix e = Matrix::unit(n, n, 0, 1) + Matrix::unit(n, n, 1, 2);
    Matrix f = Matrix::unit(n, n, 1, 0) + Matrix::unit(n, n, 2, 1);
    Matrix h = Matrix::unit(n, n, 0, 0) - Matrix::unit(n, n, 2, 2);
    Matrix phi = Scalar(mpq_class(1, 2)) * tensor(h, h);
    RootVectorBasis fixed = make_basis(n, {h}, {e}, {f}, phi, Scalar(2));
    return make_twisted(2, n, mu, traceless_basis(n), Scalar(2), fixed);
}

TwistedLoopSpec untwisted_loop_spec(const RootVectorBasis& b) {
    TwistedLoopSpec s;
    s.k = 1;
    s.n = b.n;
    s.scale = b.scale;
    s.mu = [](const Matrix& x) { return x; };
    s.algebra = b.elements();
    s.fixed = b;
    s.casimir = b.casimir();
    s.parts = {s.casimir};
    return s;
}

std::vector<std::string> twisted_failures(const TwistedLoopSpec& s) {
    std::vector<std::string> out;
    for (std::size_t a = 0; a < s.algebra.size(); ++a) {
        const Matrix& x = s.algebra[a];
        Matrix y = x;
        for (int i = 0; i < s.k; ++i) y = s.mu(y);
        if (y != x) out.push_back("mu^k is not the identity on basis element " + std::to_string(a));
        for (std::size_t b = 0; b < s.algebra.size(); ++b) {
            const Matrix& z = s.algebra[b];
            if (s.mu(commutator(x, z)) != commutator(s.mu(x), s.mu(z)))
                out.push_back("mu is not a Lie automorphism on (" + std::to_string(a) + ", " + std::to_string(b) + ")");
            if (trace(s.mu(x) * s.mu(z)) != trace(x * z))
                out.push_back("mu does not preserve the form on (" + std::to_string(a) + ", " + std::to_string(b) + ")");
        }
    }
    Matrix sum(s.n * s.n, s.n * s.n);
    for (auto& c : s.parts) sum += c;
    if (sum != s.casimir) out.push_back("the parts C_j do not sum to C");
    if (s.fixed.casimir() != s.parts[0]) out.push_back("C_0 is not the Casimir of the fixed subalgebra");
    for (auto& x : s.fixed.elements()) {
        if (s.mu(x) != x) out.push_back("fixed-subalgebra element is not mu-invariant");
        for (std::size_t j = 0; j < s.parts.size(); ++j)
            if (!adjoint_action(x, s.parts[j]).is_zero())
                out.push_back("C_" + std::to_string(j) + " is not invariant under the fixed subalgebra");
    }
    return out;
}

std::vector<Scalar> twisted_coefficients(int k, const Scalar& x) {
    if (k < 1) fail(ErrorKind::InvalidArgument, "order must be positive");
    if ((Scalar(1) - x.pow(k)).is_zero()) fail(ErrorKind::PoleAtRootOfUnity, "x^k = 1");
    std::vector<linsolve::Row> rows;
    std::size_t K = k;
    // f_1 = x (f_0 + 1), f_{j+1} = x f_j, f_0 = x f_{k-1}, indices modulo k.
    for (std::size_t j = 0; j < K; ++j) {
        linsolve::Row r;
        std::size_t next = (j + 1) % K;
        r.coeffs[next] += Scalar(1);
        r.coeffs[j] -= x;
        r.rhs = j == 0 ? x : Scalar(0);
        if (r.coeffs[next].is_zero()) r.coeffs.erase(next);
        rows.push_back(std::move(r));
    }
    return linsolve::solve_unique(rows, K);
}

Matrix r_standard_twisted(const TwistedLoopSpec& s, const Scalar& x) {
    auto f = twisted_coefficients(s.k, x);
    Matrix r = standard_part(s.fixed);
    for (int j = 0; j < s.k; ++j) r += f[j] * s.parts[j];
    return r;
}

// ------------------------------------------------------------ CYBE

Matrix cybe_residual(const Matrix& r, std::size_t n, const std::vector<std::string>& given) {
    std::vector<std::string> names = given.empty() ? std::vector<std::string>{"lambda", "mu", "nu"} : given;
    if (names.size() != 3) fail(ErrorKind::InvalidArgument, "three spectral names are needed");
    std::set<std::string> distinct(names.begin(), names.end());
    if (distinct.size() != 3) fail(ErrorKind::SpectralClash, "spectral names repeat");
    scalars::Var v0 = scalars::intern(names[0]), v1 = scalars::intern(names[1]), v2 = scalars::intern(names[2]);
    for (std::size_t i = 0; i < r.rows(); ++i)
        for (std::size_t j = 0; j < r.cols(); ++j)
            if (r(i, j).depends_on(v2)) fail(ErrorKind::SpectralClash, "r already depends on " + names[2]);
    Matrix one = Matrix::identity(n);
    Matrix p23 = tensor(one, reps::swap_matrix(n, n));
    Matrix r12 = tensor(r, one);
    Matrix r13 = p23 * tensor(r.substitute({{v1, var(names[2])}}), one) * p23;
    Matrix r23 = tensor(one, r.substitute({{v0, var(names[1])}, {v1, var(names[2])}}));
    return commutator(r12, r13 + r23) + commutator(r13, r23);
}

Eigen::MatrixXcd to_complex(const Matrix& m, const std::map<std::string, Complex>& point) {
    Eigen::MatrixXcd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(i, j) = m(i, j).is_zero() ? Complex(0) : scalars::evaluate_scalar(m(i, j), point);
    return out;
}

double cybe_residual_numeric(const std::function<Eigen::MatrixXcd(Complex, Complex)>& r, std::size_t n, Complex a,
                             Complex b, Complex c) {
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd swap = Eigen::MatrixXcd::Zero(n * n, n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) swap(i * n + j, j * n + i) = 1;
    auto kron = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            for (Eigen::Index j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
        return out;
    };
    Eigen::MatrixXcd p23 = kron(one, swap);
    Eigen::MatrixXcd r12 = kron(r(a, b), one), r13 = p23 * kron(r(a, c), one) * p23, r23 = kron(one, r(b, c));
    auto br = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd { return x * y - y * x; };
    Eigen::MatrixXcd res = br(r12, r13 + r23) + br(r13, r23);
    return res.cwiseAbs().maxCoeff();
}

// ------------------------------------------------------------ output

nlohmann::json to_json(const Matrix& t, std::size_t n) {
    nlohmann::json entries = nlohmann::json::array();
    for (auto& term : tensor_terms(t, n))
        entries.push_back({term.i, term.j, term.k, term.l, term.coeff.str()});
    return {{"legs", 2}, {"dim", n}, {"entries", entries}};
}

}  // namespace ybforge::classical
