#include "ybforge/rmatrix.hpp"

#include <algorithm>
#include <numeric>

#include "ybforge/error.hpp"
#include "ybforge/linsolve.hpp"

namespace ybforge::rmatrix {

using freealg::CartanExp;
using freealg::Mono;
using Key = TensorElement::Key;

namespace {

scalars::Var eps_var() { return scalars::intern(kEpsilon); }

AlgebraElement word_element(const AlgebraPtr& alg, const Word& neg, const Word& pos) {
    return AlgebraElement::monomial(alg, Mono{neg, alg->one(), pos});
}

AlgebraElement cartan(const AlgebraPtr& alg, const CartanExp& k) { return AlgebraElement::cartan(alg, k); }

AlgebraElement gen(const AlgebraPtr& alg, int sign, std::size_t a) { return AlgebraElement::generator(alg, sign, a); }

AlgebraElement f(const AlgebraPtr& alg, int sign, std::size_t a) { return freealg::rescaled_generator(alg, sign, a); }

AlgebraElement f_word(const AlgebraPtr& alg, int sign, const Word& w) {
    AlgebraElement x = AlgebraElement::one(alg);
    for (auto a : w) x = x * f(alg, sign, a);
    return x;
}

TensorElement pair(const AlgebraElement& a, const AlgebraElement& b) { return TensorElement::product({a, b}); }

// Lowest power of eps in a coefficient.
int eps_low(const Scalar& c) {
    auto v = eps_var();
    if (!c.depends_on(v) || c.den().degree_in(v) > 0) return 0;
    auto cs = c.num().coefficients_in(v);
    for (std::size_t i = 0; i < cs.size(); ++i)
        if (!cs[i].is_zero()) return static_cast<int>(i);
    return 0;
}

int eps_high(const Scalar& c) {
    auto v = eps_var();
    if (!c.depends_on(v)) return 0;
    return c.num().degree_in(v);
}

std::vector<Word> words_of_length(std::size_t letters, const std::vector<std::uint8_t>& alphabet) {
    std::vector<Word> out{Word{}};
    for (std::size_t i = 0; i < letters; ++i) {
        std::vector<Word> next;
        for (auto& w : out)
            for (auto a : alphabet) {
                Word x = w;
                x.push_back(a);
                next.push_back(x);
            }
        out = std::move(next);
    }
    return out;
}

std::vector<Word> permutations_of(const Word& w) {
    Word s = w;
    std::sort(s.begin(), s.end());
    std::vector<Word> out;
    do {
        out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

std::vector<std::uint8_t> all_roots(const AlgebraPtr& alg) {
    std::vector<std::uint8_t> r(alg->rank_N());
    std::iota(r.begin(), r.end(), 0);
    return r;
}

// Equations sum_j x_j lhs[j][g] = rhs[g] for every g and every tensor key,
// solved by connected blocks of unknowns.
std::vector<Scalar> solve_tensor_system(const std::vector<std::vector<TensorElement>>& lhs,
                                        const std::vector<TensorElement>& rhs) {
    const std::size_t unknowns = lhs.size();
    std::map<std::pair<std::size_t, Key>, linsolve::Row> rows;
    for (std::size_t j = 0; j < unknowns; ++j)
        for (std::size_t g = 0; g < lhs[j].size(); ++g)
            for (auto& [k, c] : lhs[j][g].terms()) rows[{g, k}].coeffs.emplace(j, c);
    for (std::size_t g = 0; g < rhs.size(); ++g)
        for (auto& [k, c] : rhs[g].terms()) rows[{g, k}].rhs = c;

    std::vector<std::size_t> parent(unknowns);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto& [key, row] : rows) {
        if (row.coeffs.empty()) {
            if (!row.rhs.is_zero()) fail(ErrorKind::InconsistentSystem, "equation without unknowns has a non-zero right side");
            continue;
        }
        std::size_t first = find(row.coeffs.begin()->first);
        for (auto& [j, c] : row.coeffs) parent[find(j)] = first;
    }
    std::map<std::size_t, std::vector<std::size_t>> blocks;
    for (std::size_t j = 0; j < unknowns; ++j) blocks[find(j)].push_back(j);
    std::map<std::size_t, std::vector<linsolve::Row>> block_rows;
    for (auto& [key, row] : rows)
        if (!row.coeffs.empty()) block_rows[find(row.coeffs.begin()->first)].push_back(row);

    std::vector<Scalar> x(unknowns);
    for (auto& [root, members] : blocks) {
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = i;
        std::vector<linsolve::Row> sys;
        for (auto& row : block_rows[root]) {
            linsolve::Row r;
            for (auto& [j, c] : row.coeffs) r.coeffs.emplace(local.at(j), c);
            r.rhs = row.rhs;
            sys.push_back(std::move(r));
        }
        auto sol = linsolve::solve_unique_checked(sys, members.size());
        for (std::size_t i = 0; i < members.size(); ++i) x[members[i]] = sol[i];
    }
    return x;
}

// Legs of a three-leg key with a Cartan factor inserted on one leg.
Mono cartan_mono(const AlgebraPtr&, const CartanExp& k) { return Mono{{}, k, {}}; }

Mono unit(const AlgebraPtr& alg) { return Mono{{}, alg->one(), {}}; }

Mono times(const AlgebraPtr& alg, const Mono& a, const Mono& b, Scalar& coeff) {
    AlgebraElement::Terms out;
    freealg::multiply_into(*alg, a, b, Scalar(1), out);
    if (out.size() != 1) fail(ErrorKind::UnsupportedElement, "Cartan product did not give a single term");
    coeff *= out.begin()->second;
    return out.begin()->first;
}

CartanExp left_inv(const AlgebraPtr& alg, const std::vector<int>& mu) { return alg->left_exp(mu).inverse(); }
CartanExp right_inv(const AlgebraPtr& alg, const std::vector<int>& mu) { return alg->right_exp(mu).inverse(); }

std::vector<int> add(std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

TensorElement window(const TensorElement& r, int degree, int eps_order) {
    TensorElement out(r.algebra(), r.legs());
    auto v = eps_var();
    for (auto& [k, c] : r.terms()) {
        int h1 = freealg::height(k[0]);
        int h3 = freealg::height(k[2]);
        for (int e = eps_low(c); e <= std::min(eps_high(c), eps_order); ++e) {
            if (e - h1 > degree || e + h3 > degree) continue;
            Scalar piece = c.depends_on(v) ? c.coefficient_in(v, e) : c;
            if (piece.is_zero()) continue;
            out.add_term(k, e ? piece * Scalar::variable(kEpsilon).pow(e) : piece);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------- RSeries

TensorElement RSeries::t(int n) const {
    if (n < 1 || n > n_max()) fail(ErrorKind::InvalidArgument, "degree outside the solved range");
    TensorElement r(alg, 2);
    for (auto& [w, c] : tables[static_cast<std::size_t>(n) - 1]) {
        Key k{Mono{w.first, alg->one(), {}}, Mono{{}, alg->one(), w.second}};
        r.add_term(k, c);
    }
    return r;
}

TensorElement RSeries::body(int upto) const {
    TensorElement r = TensorElement::one(alg, 2);
    for (int n = 1; n <= std::min(upto, n_max()); ++n) r += t(n);
    return r;
}

TensorElement t1(const AlgebraPtr& alg) {
    TensorElement r(alg, 2);
    for (std::size_t a = 0; a < alg->rank_N(); ++a) r += pair(gen(alg, -1, a), gen(alg, 1, a));
    return r;
}

RSeries start_series(const AlgebraPtr& alg) {
    RSeries R{alg, {}};
    Table t;
    for (std::uint8_t a = 0; a < alg->rank_N(); ++a) t[{Word{a}, Word{a}}] = Scalar(1);
    R.tables.push_back(std::move(t));
    return R;
}

namespace {

TensorElement recursion_rhs(const RSeries& R, int n, std::size_t gamma) {
    const AlgebraPtr& alg = R.alg;
    TensorElement prev = n == 1 ? TensorElement::one(alg, 2) : R.t(n - 1);
    TensorElement left = pair(gen(alg, -1, gamma), cartan(alg, alg->A(gamma)));
    TensorElement right = pair(gen(alg, -1, gamma), cartan(alg, alg->B(gamma).inverse()));
    return left * prev - prev * right;
}

}  // namespace

RSeries solve_tn(const RSeries& R, int n) {
    if (n < 1) fail(ErrorKind::InvalidArgument, "degree must be positive");
    if (R.n_max() < n - 1) fail(ErrorKind::InvalidArgument, "lower degrees must be solved first");
    const AlgebraPtr& alg = R.alg;
    RSeries out{alg, std::vector<Table>(R.tables.begin(), R.tables.begin() + (n - 1))};
    const std::size_t r = alg->rank_N();
    std::vector<TensorElement> rhs;
    std::vector<TensorElement> probes;
    for (std::size_t g = 0; g < r; ++g) {
        rhs.push_back(recursion_rhs(out, n, g));
        probes.push_back(pair(AlgebraElement::one(alg), gen(alg, -1, g)));
    }
    std::vector<std::pair<Word, Word>> unknowns;
    std::vector<std::vector<TensorElement>> lhs;
    for (auto& neg : words_of_length(static_cast<std::size_t>(n), all_roots(alg)))
        for (auto& pos : permutations_of(neg)) {
            unknowns.push_back({neg, pos});
            TensorElement u = pair(word_element(alg, neg, {}), word_element(alg, {}, pos));
            std::vector<TensorElement> per;
            for (std::size_t g = 0; g < r; ++g) per.push_back(u * probes[g] - probes[g] * u);
            lhs.push_back(std::move(per));
        }
    auto x = solve_tensor_system(lhs, rhs);
    Table t;
    for (std::size_t j = 0; j < unknowns.size(); ++j)
        if (!x[j].is_zero()) t[unknowns[j]] = x[j];
    out.tables.push_back(std::move(t));
    return out;
}

RSeries solve_standard(const AlgebraPtr& alg, int n_max) {
    RSeries R = start_series(alg);
    for (int n = 2; n <= n_max; ++n) R = solve_tn(R, n);
    if (n_max < 1) R.tables.clear();
    return R;
}

TensorElement recursion_residual(const RSeries& R, int n, std::size_t gamma) {
    const AlgebraPtr& alg = R.alg;
    TensorElement probe = pair(AlgebraElement::one(alg), gen(alg, -1, gamma));
    TensorElement tn = R.t(n);
    return tn * probe - probe * tn - recursion_rhs(R, n, gamma);
}

// ----------------------------------------------------------- prefactor, YBE

TensorElement conjugate_prefactor(const TensorElement& x) {
    if (x.legs() != 2) fail(ErrorKind::LegMismatch, "prefactor conjugation needs two legs");
    const AlgebraPtr& alg = x.algebra();
    TensorElement r(alg, 2);
    for (auto& [k, c] : x.terms()) {
        Scalar coeff = c;
        Mono a = times(alg, k[0], cartan_mono(alg, right_inv(alg, freealg::weight(*alg, k[1]))), coeff);
        Mono b = times(alg, cartan_mono(alg, left_inv(alg, freealg::weight(*alg, k[0]))), k[1], coeff);
        r.add_term(Key{a, b}, coeff);
    }
    return r;
}

TensorElement ybe_residual_body(const TensorElement& X, int degree, int eps_order) {
    if (X.legs() != 2) fail(ErrorKind::LegMismatch, "R must have two legs");
    const AlgebraPtr& alg = X.algebra();
    TensorElement X12c(alg, 3), X13c(alg, 3), X23(alg, 3), X23c(alg, 3), X13d(alg, 3), X12(alg, 3);
    for (auto& [k, c] : X.terms()) {
        if (eps_low(c) > eps_order) continue;
        auto mx = freealg::weight(*alg, k[0]);
        auto my = freealg::weight(*alg, k[1]);
        X12c.add_term(Key{k[0], k[1], cartan_mono(alg, left_inv(alg, add(mx, my)))}, c);
        X13c.add_term(Key{k[0], cartan_mono(alg, right_inv(alg, my)), k[1]}, c);
        X23.add_term(Key{unit(alg), k[0], k[1]}, c);
        X23c.add_term(Key{cartan_mono(alg, right_inv(alg, add(mx, my))), k[0], k[1]}, c);
        X13d.add_term(Key{k[0], cartan_mono(alg, left_inv(alg, mx)), k[1]}, c);
        X12.add_term(Key{k[0], k[1], unit(alg)}, c);
    }
    using freealg::height;
    auto ok1 = [&](int h1, int e) { return e <= eps_order && e - h1 <= degree; };
    auto ok3 = [&](int h3, int e) { return e <= eps_order && e + h3 <= degree; };
    TensorElement lhs = freealg::product_if(
        freealg::product_if(X12c, X13c,
                            [&](const Key& a, const Scalar& ca, const Key& b, const Scalar& cb) {
                                return ok1(height(a[0]) + height(b[0]), eps_low(ca) + eps_low(cb));
                            }),
        X23, [&](const Key& a, const Scalar& ca, const Key& b, const Scalar& cb) {
            int e = eps_low(ca) + eps_low(cb);
            return ok1(height(a[0]), e) && ok3(height(a[2]) + height(b[2]), e);
        });
    TensorElement rhs = freealg::product_if(
        freealg::product_if(X23c, X13d,
                            [&](const Key& a, const Scalar& ca, const Key& b, const Scalar& cb) {
                                return ok3(height(a[2]) + height(b[2]), eps_low(ca) + eps_low(cb));
                            }),
        X12, [&](const Key& a, const Scalar& ca, const Key& b, const Scalar& cb) {
            int e = eps_low(ca) + eps_low(cb);
            return ok3(height(a[2]), e) && ok1(height(a[0]) + height(b[0]), e);
        });
    return window(lhs - rhs, degree, eps_order);
}

TensorElement ybe_residual(const RSeries& R, int degree) {
    if (degree > R.n_max()) fail(ErrorKind::InvalidArgument, "R is not solved to the requested degree");
    return ybe_residual_body(R.body(degree), degree, 0);
}

TensorElement intertwining_residual(const RSeries& R, const AlgebraElement& x, int degree) {
    if (degree > R.n_max()) fail(ErrorKind::InvalidArgument, "R is not solved to the requested degree");
    TensorElement X = R.body(degree);
    TensorElement d = freealg::coproduct(x);
    TensorElement r = conjugate_prefactor(d) * X - X * d.flip();
    return r.filter([&](const Key& k) { return 1 - freealg::height(k[0]) <= degree; });
}

// --------------------------------------------------------------- twists

void check_pair(const AlgebraPtr& alg, std::size_t sigma, std::size_t rho) {
    if (sigma >= alg->rank_N() || rho >= alg->rank_N()) fail(ErrorKind::UnknownGenerator, "root index out of range");
    if (!(alg->A(sigma) * alg->B(rho)).is_one())
        fail(ErrorKind::IncompatiblePair, "e^{phi(., rho) + phi(sigma, .)} is not 1 for " + alg->root_name(sigma) + ", " +
                                              alg->root_name(rho));
}

TensorElement first_order_deformation(const RSeries& R, std::size_t sigma, std::size_t rho) {
    const AlgebraPtr& alg = R.alg;
    check_pair(alg, sigma, rho);
    TensorElement X = R.body(R.n_max());
    TensorElement left = pair(f(alg, -1, rho), f(alg, 1, sigma));
    TensorElement right = pair(f(alg, 1, sigma), f(alg, -1, rho));
    return conjugate_prefactor(left) * X - X * right;
}

TensorElement elementary_twist(const AlgebraPtr& alg, std::size_t sigma, std::size_t rho, int order) {
    check_pair(alg, sigma, rho);
    Scalar q = alg->spec().exp_pairing(sigma, rho);
    Scalar eps = Scalar::variable(kEpsilon);
    TensorElement x = pair(f(alg, 1, sigma), f(alg, -1, rho));
    TensorElement power = TensorElement::one(alg, 2);
    TensorElement F = power;
    for (int n = 1; n <= order; ++n) {
        power = power * x;
        F += ((-eps).pow(n) / scalars::q_factorial(q, n)) * power;
    }
    return F;
}

TensorElement eps_truncate(const TensorElement& x, int order) {
    auto v = eps_var();
    return x.map_coefficients([&](const Scalar& c) { return c.depends_on(v) ? c.truncate_in(v, order) : c; });
}

TensorElement eps_coefficient(const TensorElement& x, int k) {
    auto v = eps_var();
    return x.map_coefficients([&](const Scalar& c) {
        if (!c.depends_on(v)) return k == 0 ? c : Scalar();
        return c.coefficient_in(v, k);
    });
}

TensorElement invert(const TensorElement& F, int order) {
    TensorElement one = TensorElement::one(F.algebra(), F.legs());
    if (eps_coefficient(F, 0) != one) fail(ErrorKind::NotInvertible, "constant term of the series is not 1");
    TensorElement g = one - eps_truncate(F, order);
    TensorElement power = one;
    TensorElement inv = one;
    for (int k = 1; k <= order; ++k) {
        power = eps_truncate(power * g, order);
        if (power.is_zero()) break;
        inv += power;
    }
    return inv;
}

TensorElement twisted_coproduct_leg(const TensorElement& t, std::size_t leg, const TensorElement& F, int order) {
    TensorElement d = freealg::coproduct_leg(eps_truncate(t, order), leg);
    TensorElement Ft = F.flip();
    TensorElement inv = invert(Ft, order);
    const std::size_t legs = d.legs();
    TensorElement left = inv.embed({leg, leg + 1}, legs);
    TensorElement right = eps_truncate(Ft, order).embed({leg, leg + 1}, legs);
    return eps_truncate(eps_truncate(left * d, order) * right, order);
}

TensorElement twisted_coproduct(const AlgebraElement& x, const TensorElement& F, int order) {
    TensorElement t(x.algebra(), 1);
    for (auto& [m, c] : x.terms()) t.add_term(Key{m}, c);
    return twisted_coproduct_leg(t, 0, F, order);
}

TensorElement twist_equation_residual(const TensorElement& F, int order, const TensorElement* base) {
    if (F.legs() != 2) fail(ErrorKind::LegMismatch, "a twist has two legs");
    TensorElement G = eps_truncate(F, order);
    auto delta = [&](std::size_t leg) {
        return base ? twisted_coproduct_leg(G, leg, *base, order) : freealg::coproduct_leg(G, leg);
    };
    TensorElement lhs = eps_truncate(delta(1).embed({2, 1, 0}, 3) * G.embed({0, 1}, 3), order);
    TensorElement rhs = eps_truncate(delta(0).embed({0, 2, 1}, 3) * G.embed({2, 0}, 3), order);
    return lhs - rhs;
}

TensorElement apply_twist(const TensorElement& X, const TensorElement& F, int order) {
    TensorElement left = conjugate_prefactor(invert(F.flip(), order));
    return eps_truncate(eps_truncate(left * eps_truncate(X, order), order) * eps_truncate(F, order), order);
}

// ------------------------------------------------------------ twist series

void validate_tau(const AlgebraPtr& alg, const TwistData& data) {
    std::map<std::size_t, std::size_t> image;
    for (auto& [s, r] : data.tau) {
        if (s >= alg->rank_N() || r >= alg->rank_N()) fail(ErrorKind::InvalidTau, "tau refers to an unknown root");
        if (!image.emplace(r, s).second) fail(ErrorKind::InvalidTau, "tau is not injective");
        if (!(alg->A(s) * alg->B(r)).is_one())
            fail(ErrorKind::InvalidTau, "e^{phi(sigma, .) + phi(., tau sigma)} is not 1 for sigma = " + alg->root_name(s));
    }
}

std::optional<std::size_t> tau_power(const TwistData& data, std::size_t sigma, int m) {
    std::size_t s = sigma;
    for (int i = 0; i < m; ++i) {
        auto it = data.tau.find(s);
        if (it == data.tau.end()) return std::nullopt;
        s = it->second;
    }
    return s;
}

namespace {

Word map_word(const TwistData& data, const Word& w, int m) {
    Word out;
    for (auto a : w) out.push_back(static_cast<std::uint8_t>(*tau_power(data, a, m)));
    return out;
}

std::vector<std::uint8_t> domain(const TwistData& data, int m) {
    std::vector<std::uint8_t> d;
    for (auto& [s, r] : data.tau)
        if (tau_power(data, s, m)) d.push_back(static_cast<std::uint8_t>(s));
    return d;
}

TensorElement twist_rhs(const TwistSeries& F, int m, int n, std::size_t s) {
    const AlgebraPtr& alg = F.alg;
    std::size_t r = *tau_power(F.data, s, m);
    TensorElement prev = n == 1 ? TensorElement::one(alg, 2) : F.factor_term(m, n - 1);
    TensorElement left = pair(cartan(alg, alg->A(s).inverse()), f(alg, -1, r));
    TensorElement right = pair(cartan(alg, alg->B(s)), f(alg, -1, r));
    return left * prev - prev * right;
}

}  // namespace

TensorElement TwistSeries::factor_term(int m, int n) const {
    if (n == 0) return TensorElement::one(alg, 2);
    if (m < 1 || m > m_max || n < 1 || n > static_cast<int>(tables[static_cast<std::size_t>(m) - 1].size()))
        fail(ErrorKind::InvalidArgument, "twist factor outside the solved range");
    TensorElement r(alg, 2);
    for (auto& [w, c] : tables[static_cast<std::size_t>(m) - 1][static_cast<std::size_t>(n) - 1])
        r += c * pair(f_word(alg, 1, w.first), f_word(alg, -1, map_word(data, w.second, m)));
    return r;
}

TensorElement TwistSeries::factor(int m, int eps_order) const {
    TensorElement r = TensorElement::one(alg, 2);
    Scalar eps = Scalar::variable(kEpsilon);
    for (int n = 1; n * m <= eps_order && n <= n_max; ++n) r += eps.pow(n * m) * factor_term(m, n);
    return r;
}

TensorElement TwistSeries::twist(int eps_order) const {
    TensorElement r = TensorElement::one(alg, 2);
    for (int m = 1; m <= std::min(m_max, eps_order); ++m) r = eps_truncate(r * factor(m, eps_order), eps_order);
    return r;
}

TwistSeries solve_twist(const AlgebraPtr& alg, const TwistData& data, int n_max, int m_max) {
    validate_tau(alg, data);
    TwistSeries F{alg, data, n_max, m_max, {}};
    for (int m = 1; m <= m_max; ++m) {
        F.tables.emplace_back();
        auto dom = domain(data, m);
        if (dom.empty()) continue;
        for (int n = 1; n <= n_max; ++n) {
            std::vector<TensorElement> rhs, probes;
            for (auto s : dom) {
                rhs.push_back(twist_rhs(F, m, n, s));
                probes.push_back(pair(f(alg, -1, s), AlgebraElement::one(alg)));
            }
            std::vector<std::pair<Word, Word>> unknowns;
            std::vector<std::vector<TensorElement>> lhs;
            for (auto& w : words_of_length(static_cast<std::size_t>(n), dom))
                for (auto& p : permutations_of(w)) {
                    unknowns.push_back({w, p});
                    TensorElement u = pair(f_word(alg, 1, w), f_word(alg, -1, map_word(data, p, m)));
                    std::vector<TensorElement> per;
                    for (auto& pr : probes) per.push_back(u * pr - pr * u);
                    lhs.push_back(std::move(per));
                }
            auto x = solve_tensor_system(lhs, rhs);
            Table t;
            for (std::size_t j = 0; j < unknowns.size(); ++j)
                if (!x[j].is_zero()) t[unknowns[j]] = x[j];
            F.tables.back().push_back(std::move(t));
        }
    }
    return F;
}

TensorElement twist_recursion_residual(const TwistSeries& F, int m, int n, std::size_t sigma) {
    TensorElement probe = pair(f(F.alg, -1, sigma), AlgebraElement::one(F.alg));
    TensorElement x = F.factor_term(m, n);
    return x * probe - probe * x - twist_rhs(F, m, n, sigma);
}

TensorElement twist_cross_residual(const TwistSeries& F, int m, int n, std::size_t sigma) {
    const AlgebraPtr& alg = F.alg;
    auto rho = tau_power(F.data, sigma, m);
    if (!rho) fail(ErrorKind::InvalidTau, "tau^m is not defined on this root");
    TensorElement probe = pair(AlgebraElement::one(alg), f(alg, 1, *rho));
    TensorElement x = F.factor_term(m, n);
    TensorElement prev = F.factor_term(m, n - 1);
    TensorElement upper = pair(f(alg, 1, sigma), cartan(alg, alg->A(*rho).inverse()));
    TensorElement lower = pair(f(alg, 1, sigma), cartan(alg, alg->B(*rho)));
    return probe * x - x * probe - prev * upper + lower * prev;
}

// ------------------------------------------------------------------- json

nlohmann::json table_to_json(const freealg::Algebra& alg, const Table& t) {
    auto labels = [&](const Word& w) {
        nlohmann::json a = nlohmann::json::array();
        for (auto x : w) a.push_back(alg.spec().root_labels[x]);
        return a;
    };
    nlohmann::json out = nlohmann::json::array();
    for (auto& [w, c] : t) out.push_back({{"neg", labels(w.first)}, {"pos", labels(w.second)}, {"coeff", c.str()}});
    return out;
}

nlohmann::json to_json(const RSeries& R) {
    nlohmann::json j;
    j["spec"] = cartan::spec_to_json(R.alg->spec());
    j["n_max"] = R.n_max();
    j["t"] = nlohmann::json::array();
    for (int n = 1; n <= R.n_max(); ++n)
        j["t"].push_back({{"n", n}, {"entries", table_to_json(*R.alg, R.tables[static_cast<std::size_t>(n) - 1])}});
    return j;
}

nlohmann::json to_json(const TwistSeries& F) {
    nlohmann::json j;
    j["spec"] = cartan::spec_to_json(F.alg->spec());
    j["tau"] = nlohmann::json::array();
    for (auto& [s, r] : F.data.tau)
        j["tau"].push_back({F.alg->spec().root_labels[s], F.alg->spec().root_labels[r]});
    j["n_max"] = F.n_max;
    j["m_max"] = F.m_max;
    j["factors"] = nlohmann::json::array();
    for (int m = 1; m <= F.m_max; ++m) {
        const auto& tabs = F.tables[static_cast<std::size_t>(m) - 1];
        for (std::size_t n = 0; n < tabs.size(); ++n) {
            nlohmann::json e = table_to_json(*F.alg, tabs[n]);
            for (auto& x : e) {
                x["f_pos"] = x["neg"];
                x["f_neg_preimage"] = x["pos"];
                x.erase("neg");
                x.erase("pos");
            }
            j["factors"].push_back({{"m", m}, {"n", n + 1}, {"entries", e}});
        }
    }
    return j;
}

}  // namespace ybforge::rmatrix
