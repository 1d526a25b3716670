#include "ybforge/classical.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace ybforge::classical {

namespace {

Scalar var(const std::string& name) { return Scalar::variable(name); }

std::pair<std::size_t, std::size_t> support(const Matrix& x) {
    for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j)
            if (!x(i, j).is_zero()) return {i, j};
    fail(ErrorKind::InvalidArgument, "zero root vector");
}

// (sigma (x) 1) T for a Cartan-valued two-leg tensor T, sigma the root of x.
Matrix contract_leg1(const Matrix& t, const Matrix& x, std::size_t n) {
    auto [a, b] = support(x);
    Matrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m(k, k) = t(a * n + k, a * n + k) - t(b * n + k, b * n + k);
    return m;
}

// (1 (x) sigma) T.
Matrix contract_leg2(const Matrix& t, const Matrix& x, std::size_t n) {
    auto [a, b] = support(x);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = t(i * n + a, i * n + a) - t(i * n + b, i * n + b);
    return m;
}

std::size_t simple_count(const BDSetting& s) { return s.simple_pos.size(); }

// tau^m sigma, if each intermediate step stays in Gamma_1.
std::optional<std::size_t> tau_power(const BDTriple& t, std::size_t sigma, int m) {
    std::size_t cur = sigma;
    for (int i = 0; i < m; ++i) {
        auto it = t.tau.find(cur);
        if (it == t.tau.end()) return std::nullopt;
        cur = it->second;
    }
    return cur;
}

Matrix build_word(const BDSetting& s, const std::vector<std::size_t>& word) {
    Matrix x = s.simple_pos[word[0]];
    for (std::size_t i = 1; i < word.size(); ++i) x = commutator(s.simple_pos[word[i]], x);
    return x;
}

Matrix vstack(const std::vector<Matrix>& blocks) {
    std::size_t rows = 0, cols = blocks.empty() ? 0 : blocks.front().cols();
    for (auto& b : blocks) rows += b.rows();
    Matrix out(rows, cols);
    std::size_t r0 = 0;
    for (auto& b : blocks) {
        for (std::size_t i = 0; i < b.rows(); ++i)
            for (std::size_t j = 0; j < cols; ++j) out(r0 + i, j) = b(i, j);
        r0 += b.rows();
    }
    return out;
}

Matrix rename(const Matrix& x, const std::string& from, const std::string& to) {
    if (from.empty() || from == to) return x;
    return x.substitute({{scalars::intern(from), var(to)}});
}

}  // namespace

BDSetting finite_setting(const RootVectorBasis& b) {
    BDSetting s;
    s.basis = b;
    s.affine = false;
    for (std::size_t i = 0; i < b.rank; ++i) {
        s.simple_pos.push_back(b.roots[i].pos);
        s.simple_neg.push_back(b.roots[i].neg);
    }
    return s;
}

BDSetting affine_setting(const RootVectorBasis& b, const std::string& spectral) {
    BDSetting s;
    s.basis = b;
    s.affine = true;
    s.spectral = spectral;
    Scalar l = var(spectral);
    s.simple_pos.push_back(l * b.e_minus());
    s.simple_neg.push_back(l.inverse() * b.e_plus());
    for (std::size_t i = 0; i < b.rank; ++i) {
        s.simple_pos.push_back(b.roots[i].pos);
        s.simple_neg.push_back(b.roots[i].neg);
    }
    return s;
}

linsolve::Matrix simple_gram(const BDSetting& s) {
    std::size_t ns = simple_count(s);
    linsolve::Matrix g(ns, std::vector<Scalar>(ns));
    for (std::size_t a = 0; a < ns; ++a) {
        Matrix h = commutator(s.simple_pos[a], s.simple_neg[a]);
        for (std::size_t b = 0; b < ns; ++b) g[a][b] = root_value(s.simple_pos[b], h);
    }
    return g;
}

bool is_exceptional(const BDSetting& s, const BDTriple& t) {
    std::size_t ns = simple_count(s);
    if (!s.affine || t.gamma1.size() != ns || t.tau.size() != ns) return false;
    // A single cycle through every simple root.
    std::size_t cur = 0;
    for (std::size_t i = 1; i <= ns; ++i) {
        auto it = t.tau.find(cur);
        if (it == t.tau.end()) return false;
        cur = it->second;
        if (cur == 0 && i < ns) return false;
    }
    return cur == 0;
}

void validate_triple(const BDSetting& s, const BDTriple& t) {
    std::size_t ns = simple_count(s);
    std::set<std::size_t> g1(t.gamma1.begin(), t.gamma1.end()), image;
    if (g1.size() != t.gamma1.size()) fail(ErrorKind::InvalidTriple, "Gamma_1 repeats a root");
    if (t.tau.size() != g1.size()) fail(ErrorKind::InvalidTriple, "tau must be defined exactly on Gamma_1");
    for (auto& [a, b] : t.tau) {
        if (!g1.count(a) || a >= ns || b >= ns) fail(ErrorKind::InvalidTriple, "tau maps outside the simple roots");
        if (!image.insert(b).second) fail(ErrorKind::InvalidTriple, "tau is not injective");
    }
    auto g = simple_gram(s);
    for (auto a : t.gamma1)
        for (auto b : t.gamma1)
            if (g[a][b] != g[t.tau.at(a)][t.tau.at(b)])
                fail(ErrorKind::InvalidTriple, "tau does not preserve the pairing");
    if (is_exceptional(s, t)) return;
    for (auto a : t.gamma1) {
        bool leaves = false;
        std::size_t cur = a;
        for (std::size_t m = 0; m <= ns && !leaves; ++m) {
            auto it = t.tau.find(cur);
            if (it == t.tau.end()) leaves = true;
            else cur = it->second;
        }
        if (!leaves) fail(ErrorKind::InvalidTriple, "no power of tau leaves Gamma_1");
    }
}

std::vector<std::string> phi_failures(const BDSetting& s, const BDTriple& t) {
    std::vector<std::string> out;
    std::size_t n = s.basis.n;
    for (auto& [sigma, rho] : t.tau) {
        Matrix lhs = contract_leg1(s.basis.phi, s.simple_pos[sigma], n) + contract_leg2(s.basis.phi, s.simple_pos[rho], n);
        if (!lhs.is_zero())
            out.push_back("phi(" + std::to_string(sigma) + ", .) + phi(., " + std::to_string(rho) + ") != 0");
    }
    return out;
}

Matrix bd_phi(const BDSetting& s, const BDTriple& t) {
    const auto& b = s.basis;
    std::size_t n = b.n, r = b.cartan.size();
    Matrix half = Scalar(mpq_class(1, 2)) * b.cartan_casimir();
    std::vector<Matrix> unknowns;
    for (std::size_t a = 0; a < r; ++a)
        for (std::size_t c = a + 1; c < r; ++c)
            unknowns.push_back(tensor(b.cartan[a], b.cartan[c]) - tensor(b.cartan[c], b.cartan[a]));
    auto condition = [&](const Matrix& phi, std::size_t sigma, std::size_t rho) {
        return contract_leg1(phi, s.simple_pos[sigma], n) + contract_leg2(phi, s.simple_pos[rho], n);
    };
    std::vector<linsolve::Row> rows;
    for (auto& [sigma, rho] : t.tau) {
        Matrix base = condition(half, sigma, rho);
        std::vector<Matrix> parts;
        for (auto& u : unknowns) parts.push_back(condition(u, sigma, rho));
        for (std::size_t k = 0; k < n; ++k) {
            linsolve::Row row;
            for (std::size_t u = 0; u < parts.size(); ++u)
                if (!parts[u](k, k).is_zero()) row.coeffs[u] = parts[u](k, k);
            row.rhs = -base(k, k);
            if (!row.coeffs.empty() || !row.rhs.is_zero()) rows.push_back(std::move(row));
        }
    }
    std::vector<Scalar> x;
    try {
        x = linsolve::solve_particular(rows, unknowns.size());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InconsistentSystem) fail(ErrorKind::NoSolution, "no phi satisfies the triple condition");
        throw;
    }
    Matrix phi = half;
    for (std::size_t u = 0; u < unknowns.size(); ++u)
        if (!x[u].is_zero()) phi += x[u] * unknowns[u];
    return phi;
}

std::vector<BDTriple> enumerate_triples(const BDSetting& s) {
    std::size_t ns = simple_count(s);
    std::vector<BDTriple> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << ns); ++mask) {
        std::vector<std::size_t> g1;
        for (std::size_t i = 0; i < ns; ++i)
            if (mask >> i & 1) g1.push_back(i);
        // All injective maps Gamma_1 -> simple roots.
        std::vector<std::size_t> img(g1.size());
        std::vector<bool> used(ns, false);
        std::function<void(std::size_t)> rec = [&](std::size_t pos) {
            if (pos == g1.size()) {
                BDTriple t;
                t.gamma1 = g1;
                for (std::size_t i = 0; i < g1.size(); ++i) t.tau[g1[i]] = img[i];
                try {
                    validate_triple(s, t);
                    if (is_exceptional(s, t)) return;
                    bd_phi(s, t);
                } catch (const Error& e) {
                    if (e.kind() == ErrorKind::InvalidTriple || e.kind() == ErrorKind::NoSolution) return;
                    throw;
                }
                out.push_back(std::move(t));
                return;
            }
            for (std::size_t v = 0; v < ns; ++v) {
                if (used[v]) continue;
                used[v] = true;
                img[pos] = v;
                rec(pos + 1);
                used[v] = false;
            }
        };
        rec(0);
    }
    return out;
}

std::vector<SubalgebraRoot> subalgebra_roots(const BDSetting& s, const std::vector<std::size_t>& gamma1) {
    std::size_t ns = simple_count(s);
    if (s.affine && gamma1.size() >= ns)
        fail(ErrorKind::ExceptionalCase, "all simple roots generate an infinite-dimensional subalgebra");
    std::vector<SubalgebraRoot> roots;
    for (auto g : gamma1) {
        SubalgebraRoot r;
        r.word = {g};
        r.root.assign(ns, 0);
        r.root[g] = 1;
        r.height = 1;
        r.pos = s.simple_pos[g];
        roots.push_back(std::move(r));
    }
    for (std::size_t front = 0; front < roots.size(); ++front)
        for (auto g : gamma1) {
            std::vector<int> root = roots[front].root;
            ++root[g];
            if (std::any_of(roots.begin(), roots.end(), [&](auto& r) { return r.root == root; })) continue;
            Matrix pos = commutator(s.simple_pos[g], roots[front].pos);
            if (pos.is_zero()) continue;
            SubalgebraRoot r;
            r.word = roots[front].word;
            r.word.push_back(g);
            r.root = root;
            r.height = roots[front].height + 1;
            r.pos = pos;
            roots.push_back(std::move(r));
        }
    return roots;
}

std::optional<Matrix> tau_image(const BDSetting& s, const BDTriple& t, const SubalgebraRoot& r, int m) {
    std::vector<std::size_t> word;
    for (auto letter : r.word) {
        auto image = tau_power(t, letter, m);
        if (!image) return std::nullopt;
        word.push_back(*image);
    }
    return build_word(s, word);
}

Matrix dual_element(const BDSetting& s, const Matrix& x) {
    Matrix y = x.transpose();
    if (s.affine) {
        Scalar l = var(s.spectral);
        y = y.substitute({{scalars::intern(s.spectral), l.inverse()}});
    }
    Scalar p = s.basis.form(x, y);
    if (s.affine) p = p.coefficient_in(scalars::intern(s.spectral), 0);
    if (p.is_zero()) fail(ErrorKind::InvalidArgument, "element has no dual in the opposite root space");
    return p.inverse() * y;
}

Matrix leg_tensor(const BDSetting& s, const Matrix& a, const Matrix& b, const std::string& s1, const std::string& s2) {
    if (!s.affine) return tensor(a, b);
    return tensor(rename(a, s.spectral, s1), rename(b, s.spectral, s2));
}

Matrix setting_standard_r(const BDSetting& s) {
    if (!s.affine) return standard_part(s.basis);
    return r_standard_untwisted(s.basis, spectral_ratio("mu", "lambda"));
}

Matrix x_epsilon_m(const BDSetting& s, const BDTriple& t, int m) {
    std::size_t n = s.basis.n;
    Matrix x(n * n, n * n);
    for (auto& r : subalgebra_roots(s, t.gamma1)) {
        auto image = tau_image(s, t, r, m);
        if (!image) continue;
        x += (Scalar(-1) * t.eps.pow(long(r.height) * m)) * leg_tensor(s, r.pos, dual_element(s, *image));
    }
    return x;
}

Matrix x_epsilon(const BDSetting& s, const BDTriple& t) {
    std::size_t n = s.basis.n;
    Matrix x(n * n, n * n);
    for (int m = 1;; ++m) {
        Matrix xm = x_epsilon_m(s, t, m);
        if (xm.is_zero()) break;
        x += xm;
    }
    return x;
}

Matrix bd_deformed_r(const Matrix& r, const BDSetting& s, const BDTriple& t) {
    validate_triple(s, t);
    if (is_exceptional(s, t)) fail(ErrorKind::ExceptionalCase, "cyclic tau on all simple roots; use the elliptic operations");
    Matrix x = x_epsilon(s, t);
    return r + x - transpose_legs(x, s.basis.n);
}

Matrix x_m_residual(const BDSetting& s, const BDTriple& t, int m, const Matrix& X, int sign) {
    std::size_t n = s.basis.n, ns = simple_count(s);
    Matrix one = Matrix::identity(n);
    Matrix cc = s.basis.cartan_casimir();
    Scalar em = t.eps.pow(m);
    std::vector<Matrix> blocks;
    for (std::size_t rho = 0; rho < ns; ++rho) {
        Matrix p = leg_tensor(s, one, s.simple_pos[rho]);
        Matrix rhs(n * n, n * n);
        Matrix h = contract_leg2(cc, s.simple_pos[rho], n);
        for (auto sigma : t.gamma1)
            if (tau_power(t, sigma, m) == rho) {
                p += em * leg_tensor(s, s.simple_pos[sigma], one);
                rhs += em * leg_tensor(s, s.simple_pos[sigma], h);
            }
        blocks.push_back(commutator(p, X) + Scalar(sign) * rhs);
    }
    return vstack(blocks);
}

Matrix x_m_solver(const BDSetting& s, const BDTriple& t, int m, int sign) {
    validate_triple(s, t);
    std::size_t n = s.basis.n;
    std::vector<Matrix> ansatz;
    for (auto& r : subalgebra_roots(s, t.gamma1)) {
        auto image = tau_image(s, t, r, m);
        if (image) ansatz.push_back(leg_tensor(s, r.pos, dual_element(s, *image)));
    }
    Matrix zero(n * n, n * n);
    if (ansatz.empty()) return zero;
    Matrix base = x_m_residual(s, t, m, zero, sign);
    std::vector<Matrix> parts;
    for (auto& a : ansatz) parts.push_back(x_m_residual(s, t, m, a, sign) - base);
    std::vector<linsolve::Row> rows;
    for (std::size_t i = 0; i < base.rows(); ++i)
        for (std::size_t j = 0; j < base.cols(); ++j) {
            linsolve::Row row;
            for (std::size_t u = 0; u < parts.size(); ++u)
                if (!parts[u](i, j).is_zero()) row.coeffs[u] = parts[u](i, j);
            row.rhs = -base(i, j);
            if (!row.coeffs.empty() || !row.rhs.is_zero()) rows.push_back(std::move(row));
        }
    std::vector<Scalar> c;
    try {
        c = linsolve::solve_unique(rows, ansatz.size());
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::InconsistentSystem || e.kind() == ErrorKind::UnderdeterminedSystem)
            fail(ErrorKind::NoSolution, std::string("X^m relation has no unique solution: ") + e.what());
        throw;
    }
    Matrix x = zero;
    for (std::size_t u = 0; u < ansatz.size(); ++u) x += c[u] * ansatz[u];
    return x;
}

BDSetting esoteric_setting(int n) {
    BDSetting s = affine_setting(traceless_slN_basis(n, Scalar(1)));
    s.basis = with_phi(s.basis, bd_phi(s, esoteric_triple(n)));
    return s;
}

BDTriple esoteric_triple(int n, const Scalar& eps) {
    BDTriple t;
    t.eps = eps;
    for (int i = 1; i < n; ++i) {
        t.gamma1.push_back(i);
        t.tau[i] = i + 1 < n ? i + 1 : 0;
    }
    return t;
}

Matrix esoteric_x_closed_form(int n, int m, int height) {
    std::size_t N = n;
    Matrix x(N * N, N * N);
    Scalar mu_inv = var("mu").inverse();
    auto e = [&](int i, int j, const Scalar& c) { return Matrix::unit(N, N, i - 1, j - 1, c); };
    for (int i = 1; i <= n; ++i) {
        if (i + height > n) continue;
        if (i + m + height <= n)
            x += Scalar(-1) * tensor(e(i, i + height, 1), e(i + m + height, i + m, 1));
        else if (i + m + height == n + 1 && i + m <= n)
            x += Scalar(-1) * tensor(e(i, i + height, 1), e(1, i + m, mu_inv));
    }
    return x;
}

Matrix principal_picture(const Matrix& t, std::size_t n, const std::string& xi) {
    Scalar L = var(xi), M = var("principal_mu");
    long N = n;
    Matrix s = t.substitute({{scalars::intern("lambda"), L.pow(N)}, {scalars::intern("mu"), M.pow(N)}});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    Scalar& c = s(i * n + k, j * n + l);
                    if (c.is_zero()) continue;
                    c = c * L.pow(long(j) - long(i)) * M.pow(long(l) - long(k));
                }
    return s.substitute({{scalars::intern("principal_mu"), Scalar(1)}});
}

}  // namespace ybforge::classical
