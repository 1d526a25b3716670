#include "ybforge/freealg.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace ybforge::freealg {

using scalars::Polynomial;
using scalars::Var;

// ---------------------------------------------------------------- CartanExp

bool CartanExp::is_one() const {
    return std::all_of(e.begin(), e.end(), [](std::int32_t x) { return x == 0; });
}

CartanExp CartanExp::operator*(const CartanExp& o) const {
    CartanExp r = *this;
    for (std::size_t i = 0; i < r.e.size(); ++i) r.e[i] += o.e[i];
    return r;
}

CartanExp CartanExp::inverse() const { return pow(-1); }

CartanExp CartanExp::pow(std::int32_t k) const {
    CartanExp r = *this;
    for (auto& x : r.e) x *= k;
    return r;
}

bool Mono::operator<(const Mono& o) const {
    if (neg.size() + pos.size() != o.neg.size() + o.pos.size()) return neg.size() + pos.size() < o.neg.size() + o.pos.size();
    if (neg != o.neg) return neg < o.neg;
    if (pos != o.pos) return pos < o.pos;
    return k < o.k;
}

// ------------------------------------------------------------ torus lattice

namespace {

using QVec = std::vector<mpq_class>;

struct Flattener {
    std::map<std::pair<std::size_t, long>, std::size_t> index;  // (H index, var or -1)
    std::vector<std::pair<std::size_t, long>> keys;

    void scan(const std::vector<Scalar>& form) {
        for (std::size_t b = 0; b < form.size(); ++b)
            for (auto& t : form[b].num().terms()) {
                long v = t.mono.is_one() ? -1 : static_cast<long>(t.mono.entries()[0].first);
                if (index.emplace(std::make_pair(b, v), keys.size()).second) keys.push_back({b, v});
            }
    }
    QVec flatten(const std::vector<Scalar>& form) const {
        QVec out(keys.size());
        for (std::size_t b = 0; b < form.size(); ++b) {
            const mpz_class& d = form[b].den().leading().coeff;
            for (auto& t : form[b].num().terms()) {
                long v = t.mono.is_one() ? -1 : static_cast<long>(t.mono.entries()[0].first);
                out[index.at({b, v})] = mpq_class(t.coeff, d);
            }
        }
        for (auto& x : out) x.canonicalize();
        return out;
    }
    std::vector<Scalar> unflatten(const QVec& v, std::size_t m) const {
        std::vector<Scalar> form(m);
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (v[i] == 0) continue;
            auto [b, var] = keys[i];
            Scalar term = var < 0 ? Scalar(v[i]) : Scalar(v[i]) * Scalar::monomial(Monomial::variable(static_cast<Var>(var)));
            form[b] += term;
        }
        return form;
    }
};

// Coefficients c with sum c_i basis_i = target, if the target is in the span.
std::optional<QVec> solve_combination(const std::vector<QVec>& basis, const QVec& target) {
    const std::size_t n = basis.size(), d = target.size();
    std::vector<QVec> m(d, QVec(n + 1));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < n; ++c) m[r][c] = basis[c][r];
        m[r][n] = target[r];
    }
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < n && row < d; ++c) {
        std::size_t p = row;
        while (p < d && m[p][c] == 0) ++p;
        if (p == d) continue;
        std::swap(m[p], m[row]);
        mpq_class inv = 1 / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < d; ++r) {
            if (r == row || m[r][c] == 0) continue;
            mpq_class f = m[r][c];
            for (std::size_t k = c; k <= n; ++k) m[r][k] -= f * m[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    for (std::size_t r = row; r < d; ++r)
        if (m[r][n] != 0) return std::nullopt;
    QVec sol(n);
    for (std::size_t i = 0; i < pivots.size(); ++i) sol[pivots[i]] = m[i][n];
    return sol;
}

// Z-basis of the lattice spanned by integer rows, by integer row reduction.
std::vector<std::vector<mpz_class>> integer_row_basis(std::vector<std::vector<mpz_class>> rows) {
    if (rows.empty()) return rows;
    const std::size_t d = rows[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < d && r < rows.size(); ++c) {
        while (true) {
            std::size_t best = rows.size();
            for (std::size_t i = r; i < rows.size(); ++i)
                if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool done = true;
            for (std::size_t i = r + 1; i < rows.size(); ++i) {
                if (rows[i][c] == 0) continue;
                mpz_class f;
                mpz_fdiv_q(f.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
                for (std::size_t k = c; k < d; ++k) rows[i][k] -= f * rows[r][k];
                if (rows[i][c] != 0) done = false;
            }
            if (done) {
                ++r;
                break;
            }
        }
    }
    rows.resize(r);
    return rows;
}

}  // namespace

Algebra::Algebra(CartanSpec spec) : spec_(std::move(spec)) {
    spec_.validate();
    const std::size_t n = spec_.rank_N(), m = spec_.rank_M();
    if (n > 255) fail(ErrorKind::InvalidSpec, "at most 255 roots supported");
    std::vector<std::vector<Scalar>> gens;
    for (std::size_t a = 0; a < n; ++a) gens.push_back(spec_.left_form(a));
    for (std::size_t a = 0; a < n; ++a) gens.push_back(spec_.right_form(a));
    Flattener fl;
    for (auto& g : gens) fl.scan(g);
    std::vector<QVec> flat;
    for (auto& g : gens) flat.push_back(fl.flatten(g));

    std::vector<QVec> basis;
    for (std::size_t i = 0; i < flat.size(); ++i) {
        bool zero = std::all_of(flat[i].begin(), flat[i].end(), [](const mpq_class& x) { return x == 0; });
        if (zero || solve_combination(basis, flat[i])) continue;
        basis.push_back(flat[i]);
        basis_names_.push_back({i < n, i % std::max<std::size_t>(n, 1)});
    }
    std::vector<QVec> coords;
    bool integral = true;
    for (auto& f : flat) {
        auto c = solve_combination(basis, f);
        for (auto& x : *c)
            if (x.get_den() != 1) integral = false;
        coords.push_back(*c);
    }
    if (!integral) {
        named_basis_ = false;
        mpz_class L = 1;
        for (auto& f : flat)
            for (auto& x : f) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), x.get_den().get_mpz_t());
        std::vector<std::vector<mpz_class>> rows;
        for (auto& f : flat) {
            std::vector<mpz_class> row;
            for (auto& x : f) row.push_back(mpz_class(x * L));
            rows.push_back(row);
        }
        basis.clear();
        for (auto& row : integer_row_basis(rows)) {
            QVec v;
            for (auto& x : row) v.push_back(mpq_class(x, L));
            for (auto& x : v) x.canonicalize();
            basis.push_back(v);
        }
        coords.clear();
        for (auto& f : flat) coords.push_back(*solve_combination(basis, f));
    }
    for (auto& b : basis) basis_forms_.push_back(fl.unflatten(b, m));
    auto to_exp = [](const QVec& c) {
        CartanExp k;
        for (auto& x : c) k.e.push_back(static_cast<std::int32_t>(x.get_num().get_si()));
        return k;
    };
    for (std::size_t a = 0; a < n; ++a) {
        A_.push_back(to_exp(coords[a]));
        B_.push_back(to_exp(coords[n + a]));
    }
    kappa_.resize(basis_forms_.size());
    for (std::size_t i = 0; i < basis_forms_.size(); ++i)
        for (std::size_t beta = 0; beta < n; ++beta) {
            Scalar s;
            for (std::size_t b = 0; b < m; ++b) s += basis_forms_[i][b] * spec_.H[b][beta];
            auto mono = cartan::exp_linear(s).as_monomial();
            kappa_[i].push_back(*mono);
        }
}

std::shared_ptr<const Algebra> Algebra::create(CartanSpec spec) { return std::make_shared<const Algebra>(std::move(spec)); }

CartanExp Algebra::one() const {
    CartanExp k;
    k.e.assign(basis_forms_.size(), 0);
    return k;
}

CartanExp Algebra::left_exp(const std::vector<int>& mu) const {
    CartanExp k = one();
    for (std::size_t b = 0; b < mu.size(); ++b)
        if (mu[b]) k = k * A_[b].pow(mu[b]);
    return k;
}

CartanExp Algebra::right_exp(const std::vector<int>& mu) const {
    CartanExp k = one();
    for (std::size_t b = 0; b < mu.size(); ++b)
        if (mu[b]) k = k * B_[b].pow(mu[b]);
    return k;
}

Monomial Algebra::kappa(const CartanExp& k, std::size_t beta) const {
    Monomial m;
    for (std::size_t i = 0; i < k.e.size(); ++i)
        if (k.e[i]) m = m * kappa_[i][beta].pow(k.e[i]);
    return m;
}

Monomial Algebra::kappa_word(const CartanExp& k, const Word& w) const {
    Monomial m;
    if (k.is_one()) return m;
    for (auto beta : w) m = m * kappa(k, beta);
    return m;
}

std::vector<Scalar> Algebra::form(const CartanExp& k) const {
    std::vector<Scalar> f(spec_.rank_M());
    for (std::size_t i = 0; i < k.e.size(); ++i)
        if (k.e[i])
            for (std::size_t b = 0; b < f.size(); ++b) f[b] += Scalar(static_cast<long>(k.e[i])) * basis_forms_[i][b];
    return f;
}

std::string Algebra::root_name(std::size_t alpha) const { return std::to_string(spec_.root_labels.at(alpha)); }

std::string Algebra::render(const CartanExp& k) const {
    std::string s;
    for (std::size_t i = 0; i < k.e.size(); ++i) {
        std::int32_t c = k.e[i];
        if (c == 0) continue;
        std::string name;
        if (named_basis_) {
            auto& bn = basis_names_[i];
            name = bn.left ? "phi(" + root_name(bn.root) + ",.)" : "phi(.," + root_name(bn.root) + ")";
        } else {
            name = "T" + std::to_string(i + 1);
        }
        if (c < 0) {
            s += "-";
        } else if (!s.empty()) {
            s += "+";
        }
        if (std::abs(c) != 1) s += std::to_string(std::abs(c)) + "*";
        s += name;
    }
    return s;
}

CartanExp Algebra::parse_cartan(std::string_view text) const {
    CartanExp k = one();
    std::size_t pos = 0;
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    };
    auto bad = [&](const std::string& why) -> void {
        fail(ErrorKind::ParseError, why + " in Cartan exponent '" + std::string(text) + "'");
    };
    auto integer = [&]() -> long {
        skip();
        std::size_t start = pos;
        if (pos < text.size() && text[pos] == '-') ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos || (pos == start + 1 && text[start] == '-')) bad("expected integer");
        return std::stol(std::string(text.substr(start, pos - start)));
    };
    skip();
    if (pos == text.size() || text == "1") return k;
    bool first = true;
    while (true) {
        skip();
        if (pos == text.size()) break;
        int sign = 1;
        if (text[pos] == '+' || text[pos] == '-') {
            sign = text[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (!first) {
            bad("expected + or -");
        }
        first = false;
        skip();
        long mult = 1;
        if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            mult = integer();
            skip();
            if (pos >= text.size() || text[pos] != '*') bad("expected *");
            ++pos;
            skip();
        }
        CartanExp g;
        if (text.substr(pos, 4) == "phi(") {
            pos += 4;
            skip();
            bool left = true;
            long label;
            if (pos < text.size() && text[pos] == '.') {
                left = false;
                ++pos;
                skip();
                if (pos >= text.size() || text[pos] != ',') bad("expected ,");
                ++pos;
                label = integer();
            } else {
                label = integer();
                skip();
                if (pos >= text.size() || text[pos] != ',') bad("expected ,");
                ++pos;
                skip();
                if (pos >= text.size() || text[pos] != '.') bad("expected .");
                ++pos;
            }
            skip();
            if (pos >= text.size() || text[pos] != ')') bad("expected )");
            ++pos;
            std::size_t alpha = spec_.root_index(static_cast<int>(label));
            g = left ? A_[alpha] : B_[alpha];
        } else if (pos < text.size() && text[pos] == 'T') {
            ++pos;
            long i = integer();
            if (i < 1 || static_cast<std::size_t>(i) > basis_forms_.size()) bad("basis index out of range");
            g = one();
            g.e[static_cast<std::size_t>(i - 1)] = 1;
        } else {
            bad("expected phi(...) or T<i>");
        }
        k = k * g.pow(static_cast<std::int32_t>(sign * mult));
    }
    return k;
}

std::shared_ptr<const std::vector<StraightTerm>> Algebra::straighten(const Word& p, const Word& n) const {
    if (p.empty() || n.empty()) {
        auto v = std::make_shared<std::vector<StraightTerm>>();
        v->push_back({Scalar(1), Mono{n, one(), p}});
        return v;
    }
    auto key = std::make_pair(p, n);
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const std::uint8_t alpha = p.back();
    Word pp(p.begin(), p.end() - 1);
    std::map<Mono, Scalar> acc;
    auto add = [&](const Mono& m, const Scalar& c) {
        auto [it, inserted] = acc.emplace(m, c);
        if (!inserted) it->second += c;
    };
    auto head = straighten(pp, n);
    for (auto& t : *head) {
        Mono m = t.mono;
        m.pos.push_back(alpha);
        add(m, t.coeff);
    }
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (n[i] != alpha) continue;
        Word rest(n.begin(), n.begin() + static_cast<std::ptrdiff_t>(i));
        Word tail(n.begin() + static_cast<std::ptrdiff_t>(i) + 1, n.end());
        rest.insert(rest.end(), tail.begin(), tail.end());
        const CartanExp& a = A_[alpha];
        CartanExp binv = B_[alpha].inverse();
        Scalar ca = Scalar::monomial(kappa_word(a, tail).inverse());
        Scalar cb = -Scalar::monomial(kappa_word(B_[alpha], tail));
        auto sub = straighten(pp, rest);
        for (auto& t : *sub) {
            Mono ma{t.mono.neg, t.mono.k * a, t.mono.pos};
            add(ma, t.coeff * ca * Scalar::monomial(kappa_word(a, t.mono.pos).inverse()));
            Mono mb{t.mono.neg, t.mono.k * binv, t.mono.pos};
            add(mb, t.coeff * cb * Scalar::monomial(kappa_word(binv, t.mono.pos).inverse()));
        }
    }
    auto v = std::make_shared<std::vector<StraightTerm>>();
    for (auto& [m, c] : acc)
        if (!c.is_zero()) v->push_back({c, m});
    std::lock_guard<std::mutex> lock(cache_mutex_);
    cache_.emplace(key, v);
    return v;
}

// --------------------------------------------------------- AlgebraElement

namespace {

void accumulate(AlgebraElement::Terms& out, const Mono& m, const Scalar& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = out.emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) out.erase(it);
    }
}

void check_same(const AlgebraPtr& a, const AlgebraPtr& b) {
    if (a != b) fail(ErrorKind::SpecMismatch, "elements belong to different algebras");
}

std::string mono_str(const Algebra& alg, const Mono& m) {
    std::string s;
    auto join = [&](const std::string& part) {
        if (!s.empty()) s += "*";
        s += part;
    };
    for (auto b : m.neg) join("e[-" + alg.root_name(b) + "]");
    if (!m.k.is_one()) join("K[" + alg.render(m.k) + "]");
    for (auto b : m.pos) join("e[" + alg.root_name(b) + "]");
    return s;
}

std::string term_str(const Scalar& c, const std::string& m) {
    if (m.empty()) return c.str();
    if (c.is_one()) return m;
    if (c == Scalar(-1)) return "-" + m;
    std::string cs = c.num().size() > 1 ? "(" + c.str() + ")" : c.str();
    return cs + "*" + m;
}

std::string join_terms(const std::vector<std::string>& parts) {
    if (parts.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const std::string& p = parts[i];
        if (i == 0) {
            s = p;
        } else if (!p.empty() && p[0] == '-') {
            s += " - " + p.substr(1);
        } else {
            s += " + " + p;
        }
    }
    return s;
}

}  // namespace

AlgebraElement AlgebraElement::scalar(AlgebraPtr alg, const Scalar& c) {
    AlgebraElement x(alg);
    x.add_term(Mono{{}, alg->one(), {}}, c);
    return x;
}

AlgebraElement AlgebraElement::generator(AlgebraPtr alg, int sign, std::size_t alpha) {
    if (alpha >= alg->rank_N()) fail(ErrorKind::UnknownGenerator, "root index out of range");
    Mono m{{}, alg->one(), {}};
    (sign > 0 ? m.pos : m.neg).push_back(static_cast<std::uint8_t>(alpha));
    AlgebraElement x(alg);
    x.add_term(m, Scalar(1));
    return x;
}

AlgebraElement AlgebraElement::cartan(AlgebraPtr alg, const CartanExp& k) {
    AlgebraElement x(alg);
    x.add_term(Mono{{}, k, {}}, Scalar(1));
    return x;
}

AlgebraElement AlgebraElement::monomial(AlgebraPtr alg, const Mono& m, const Scalar& c) {
    AlgebraElement x(std::move(alg));
    x.add_term(m, c);
    return x;
}

void AlgebraElement::add_term(const Mono& m, const Scalar& c) { accumulate(terms_, m, c); }

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
    AlgebraElement r = *this;
    r += o;
    return r;
}

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& o) {
    check_same(alg_, o.alg_);
    for (auto& [m, c] : o.terms_) accumulate(terms_, m, c);
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& o) {
    check_same(alg_, o.alg_);
    for (auto& [m, c] : o.terms_) accumulate(terms_, m, -c);
    return *this;
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
    AlgebraElement r = *this;
    r -= o;
    return r;
}

AlgebraElement AlgebraElement::operator-() const {
    AlgebraElement r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
}

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const { return multiply(*this, o); }

bool AlgebraElement::operator==(const AlgebraElement& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (auto& [m, c] : terms_) {
        if (!(m == it->first) || c != it->second) return false;
        ++it;
    }
    return true;
}

std::string AlgebraElement::str() const {
    std::vector<std::string> parts;
    for (auto& [m, c] : terms_) parts.push_back(term_str(c, mono_str(*alg_, m)));
    return join_terms(parts);
}

AlgebraElement operator*(const Scalar& c, const AlgebraElement& x) {
    AlgebraElement r(x.algebra());
    if (c.is_zero()) return r;
    for (auto& [m, k] : x.terms()) r.add_term(m, c * k);
    return r;
}

void multiply_into(const Algebra& alg, const Mono& a, const Mono& b, const Scalar& c, AlgebraElement::Terms& out) {
    auto st = alg.straighten(a.pos, b.neg);
    for (auto& t : *st) {
        Monomial factor = alg.kappa_word(a.k, t.mono.neg).inverse() * alg.kappa_word(b.k, t.mono.pos).inverse();
        Mono m;
        m.neg = a.neg;
        m.neg.insert(m.neg.end(), t.mono.neg.begin(), t.mono.neg.end());
        m.k = a.k * t.mono.k * b.k;
        m.pos = t.mono.pos;
        m.pos.insert(m.pos.end(), b.pos.begin(), b.pos.end());
        Scalar coeff = factor.is_one() ? c * t.coeff : c * t.coeff * Scalar::monomial(factor);
        accumulate(out, m, coeff);
    }
}

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
    check_same(a.algebra(), b.algebra());
    AlgebraElement::Terms out;
    for (auto& [ma, ca] : a.terms())
        for (auto& [mb, cb] : b.terms()) multiply_into(*a.algebra(), ma, mb, ca * cb, out);
    AlgebraElement r(a.algebra());
    for (auto& [m, c] : out) r.add_term(m, c);
    return r;
}

AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b) { return multiply(a, b) - multiply(b, a); }

AlgebraElement rescaled_generator(const AlgebraPtr& alg, int sign, std::size_t alpha) {
    if (alpha >= alg->rank_N()) fail(ErrorKind::UnknownGenerator, "root index out of range");
    if (sign > 0) return AlgebraElement::cartan(alg, alg->A(alpha).inverse()) * AlgebraElement::generator(alg, 1, alpha);
    return AlgebraElement::generator(alg, -1, alpha) * AlgebraElement::cartan(alg, alg->B(alpha));
}

int height(const Mono& m) { return static_cast<int>(m.pos.size()) - static_cast<int>(m.neg.size()); }

std::vector<int> weight(const Algebra& alg, const Mono& m) {
    std::vector<int> w(alg.rank_N(), 0);
    for (auto b : m.pos) ++w[b];
    for (auto b : m.neg) --w[b];
    return w;
}

AlgebraElement cartan_action(std::size_t a, const AlgebraElement& x) {
    const auto& spec = x.algebra()->spec();
    if (a >= spec.rank_M()) fail(ErrorKind::UnknownGenerator, "Cartan index out of range");
    AlgebraElement r(x.algebra());
    for (auto& [m, c] : x.terms()) {
        auto w = weight(*x.algebra(), m);
        Scalar h;
        for (std::size_t b = 0; b < w.size(); ++b)
            if (w[b]) h += Scalar(static_cast<long>(w[b])) * spec.H[a][b];
        r.add_term(m, c * h);
    }
    return r;
}

// ---------------------------------------------------------- TensorElement

TensorElement TensorElement::one(AlgebraPtr alg, std::size_t legs) {
    TensorElement t(alg, legs);
    Key k(legs, Mono{{}, alg->one(), {}});
    t.add_term(k, Scalar(1));
    return t;
}

TensorElement TensorElement::product(const std::vector<AlgebraElement>& legs) {
    if (legs.empty()) fail(ErrorKind::LegMismatch, "tensor product needs at least one leg");
    for (auto& l : legs) check_same(legs[0].algebra(), l.algebra());
    TensorElement t(legs[0].algebra(), legs.size());
    std::vector<std::pair<Key, Scalar>> acc{{Key{}, Scalar(1)}};
    for (auto& leg : legs) {
        std::vector<std::pair<Key, Scalar>> next;
        for (auto& [k, c] : acc)
            for (auto& [m, d] : leg.terms()) {
                Key kk = k;
                kk.push_back(m);
                next.push_back({kk, c * d});
            }
        acc = std::move(next);
    }
    for (auto& [k, c] : acc) t.add_term(k, c);
    return t;
}

void TensorElement::add_term(const Key& k, const Scalar& c) {
    if (k.size() != legs_) fail(ErrorKind::LegMismatch, "term has wrong number of legs");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(k, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

void check_legs(const TensorElement& a, const TensorElement& b) {
    check_same(a.algebra(), b.algebra());
    if (a.legs() != b.legs()) fail(ErrorKind::LegMismatch, "tensor elements have different leg counts");
}

TensorElement& TensorElement::operator+=(const TensorElement& o) {
    check_legs(*this, o);
    for (auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

TensorElement& TensorElement::operator-=(const TensorElement& o) {
    check_legs(*this, o);
    for (auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

TensorElement TensorElement::operator+(const TensorElement& o) const {
    TensorElement r = *this;
    r += o;
    return r;
}

TensorElement TensorElement::operator-(const TensorElement& o) const {
    TensorElement r = *this;
    r -= o;
    return r;
}

TensorElement TensorElement::operator-() const {
    TensorElement r = *this;
    for (auto& [k, c] : r.terms_) c = -c;
    return r;
}

TensorElement TensorElement::operator*(const TensorElement& o) const { return product_if(*this, o, nullptr); }

TensorElement product_if(const TensorElement& a, const TensorElement& b, const PairFilter& keep) {
    check_legs(a, b);
    const Algebra& alg = *a.algebra();
    const std::size_t legs = a.legs();
    std::map<std::pair<Mono, Mono>, std::vector<std::pair<Mono, Scalar>>> cache;
    auto leg_product = [&](const Mono& x, const Mono& y) -> const std::vector<std::pair<Mono, Scalar>>& {
        auto key = std::make_pair(x, y);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        AlgebraElement::Terms out;
        multiply_into(alg, x, y, Scalar(1), out);
        std::vector<std::pair<Mono, Scalar>> v(out.begin(), out.end());
        return cache.emplace(key, std::move(v)).first->second;
    };
    TensorElement r(a.algebra(), legs);
    std::vector<const std::vector<std::pair<Mono, Scalar>>*> parts(legs);
    for (auto& [ka, ca] : a.terms())
        for (auto& [kb, cb] : b.terms()) {
            if (keep && !keep(ka, ca, kb, cb)) continue;
            bool empty = false;
            for (std::size_t l = 0; l < legs; ++l) {
                parts[l] = &leg_product(ka[l], kb[l]);
                if (parts[l]->empty()) empty = true;
            }
            if (empty) continue;
            Scalar c = ca * cb;
            std::vector<std::size_t> idx(legs, 0);
            while (true) {
                TensorElement::Key k;
                Scalar coeff = c;
                for (std::size_t l = 0; l < legs; ++l) {
                    const auto& pr = (*parts[l])[idx[l]];
                    k.push_back(pr.first);
                    if (!pr.second.is_one()) coeff *= pr.second;
                }
                r.add_term(k, coeff);
                bool done = true;
                for (std::size_t l = legs; l-- > 0;) {
                    if (++idx[l] < parts[l]->size()) {
                        done = false;
                        break;
                    }
                    idx[l] = 0;
                }
                if (done) break;
            }
        }
    return r;
}

bool TensorElement::operator==(const TensorElement& o) const {
    if (legs_ != o.legs_ || terms_.size() != o.terms_.size()) return false;
    auto it = o.terms_.begin();
    for (auto& [k, c] : terms_) {
        if (!(k == it->first) || c != it->second) return false;
        ++it;
    }
    return true;
}

TensorElement TensorElement::embed(const std::vector<std::size_t>& placement, std::size_t total_legs) const {
    if (placement.size() != legs_) fail(ErrorKind::LegMismatch, "placement must list every leg");
    TensorElement r(alg_, total_legs);
    for (auto& [k, c] : terms_) {
        Key out(total_legs, Mono{{}, alg_->one(), {}});
        for (std::size_t j = 0; j < legs_; ++j) {
            if (placement[j] >= total_legs) fail(ErrorKind::LegMismatch, "placement out of range");
            out[placement[j]] = k[j];
        }
        r.add_term(out, c);
    }
    return r;
}

TensorElement TensorElement::flip() const {
    if (legs_ != 2) fail(ErrorKind::LegMismatch, "flip needs two legs");
    return embed({1, 0}, 2);
}

TensorElement TensorElement::map_coefficients(const std::function<Scalar(const Scalar&)>& f) const {
    TensorElement r(alg_, legs_);
    for (auto& [k, c] : terms_) r.add_term(k, f(c));
    return r;
}

TensorElement TensorElement::filter(const std::function<bool(const Key&)>& keep) const {
    TensorElement r(alg_, legs_);
    for (auto& [k, c] : terms_)
        if (keep(k)) r.terms_.emplace(k, c);
    return r;
}

TensorElement TensorElement::apply_leg(std::size_t leg, const std::function<AlgebraElement(const Mono&)>& f) const {
    if (leg >= legs_) fail(ErrorKind::LegMismatch, "leg out of range");
    TensorElement r(alg_, legs_);
    std::map<Mono, AlgebraElement> cache;
    for (auto& [k, c] : terms_) {
        auto it = cache.find(k[leg]);
        if (it == cache.end()) it = cache.emplace(k[leg], f(k[leg])).first;
        for (auto& [m, d] : it->second.terms()) {
            Key kk = k;
            kk[leg] = m;
            r.add_term(kk, c * d);
        }
    }
    return r;
}

std::string TensorElement::str() const {
    std::vector<std::string> parts;
    for (auto& [k, c] : terms_) {
        std::string legs;
        for (std::size_t l = 0; l < k.size(); ++l) {
            if (l) legs += " (x) ";
            std::string m = mono_str(*alg_, k[l]);
            legs += m.empty() ? "1" : m;
        }
        parts.push_back(term_str(c, legs));
    }
    return join_terms(parts);
}

TensorElement operator*(const Scalar& c, const TensorElement& x) {
    return x.map_coefficients([&](const Scalar& k) { return c * k; });
}

// --------------------------------------------------------------- coproduct

namespace {

TensorElement letter_coproduct(const AlgebraPtr& alg, int sign, std::size_t alpha) {
    AlgebraElement one = AlgebraElement::one(alg);
    AlgebraElement e = AlgebraElement::generator(alg, sign, alpha);
    if (sign > 0) {
        return TensorElement::product({one, e}) + TensorElement::product({e, AlgebraElement::cartan(alg, alg->A(alpha))});
    }
    return TensorElement::product({AlgebraElement::cartan(alg, alg->B(alpha).inverse()), e}) + TensorElement::product({e, one});
}

TensorElement mono_coproduct(const AlgebraPtr& alg, const Mono& m) {
    TensorElement r = TensorElement::product({AlgebraElement::cartan(alg, m.k), AlgebraElement::cartan(alg, m.k)});
    TensorElement left = TensorElement::one(alg, 2);
    for (auto b : m.neg) left = left * letter_coproduct(alg, -1, b);
    TensorElement right = TensorElement::one(alg, 2);
    for (auto b : m.pos) right = right * letter_coproduct(alg, 1, b);
    return left * r * right;
}

}  // namespace

TensorElement coproduct(const AlgebraElement& x) {
    const AlgebraPtr& alg = x.algebra();
    TensorElement r(alg, 2);
    for (auto& [m, c] : x.terms()) r += c * mono_coproduct(alg, m);
    return r;
}

TensorElement coproduct_leg(const TensorElement& t, std::size_t leg) {
    if (leg >= t.legs()) fail(ErrorKind::LegMismatch, "leg out of range");
    const AlgebraPtr& alg = t.algebra();
    TensorElement r(alg, t.legs() + 1);
    std::map<Mono, TensorElement> cache;
    for (auto& [k, c] : t.terms()) {
        auto it = cache.find(k[leg]);
        if (it == cache.end()) it = cache.emplace(k[leg], mono_coproduct(alg, k[leg])).first;
        for (auto& [dk, d] : it->second.terms()) {
            TensorElement::Key kk;
            for (std::size_t l = 0; l < k.size(); ++l) {
                if (l == leg) {
                    kk.push_back(dk[0]);
                    kk.push_back(dk[1]);
                } else {
                    kk.push_back(k[l]);
                }
            }
            r.add_term(kk, c * d);
        }
    }
    return r;
}

// ---------------------------------------------------------- skew derivative

SkewDerivative skew_derivative(const AlgebraPtr& alg, const Word& w, std::size_t gamma) {
    SkewDerivative d{AlgebraElement(alg), AlgebraElement(alg)};
    const CartanExp& a = alg->A(gamma);
    const CartanExp& b = alg->B(gamma);
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != gamma) continue;
        Word before(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
        Word after(w.begin() + static_cast<std::ptrdiff_t>(i) + 1, w.end());
        Word rest = before;
        rest.insert(rest.end(), after.begin(), after.end());
        Mono m{{}, alg->one(), rest};
        d.right.add_term(m, Scalar::monomial(alg->kappa_word(a, after)));
        d.left.add_term(m, Scalar::monomial(alg->kappa_word(b, before)));
    }
    return d;
}

AlgebraElement skew_reconstruct(const AlgebraPtr& alg, const SkewDerivative& d, std::size_t gamma) {
    return d.right * AlgebraElement::cartan(alg, alg->A(gamma)) - AlgebraElement::cartan(alg, alg->B(gamma).inverse()) * d.left;
}

AlgebraElement serre_element(const AlgebraPtr& alg, const cartan::SerreData& data) {
    AlgebraElement r(alg);
    for (int m = 0; m <= data.k; ++m) {
        Mono mono{{}, alg->one(), {}};
        for (int i = 0; i < m; ++i) mono.pos.push_back(static_cast<std::uint8_t>(data.alpha));
        mono.pos.push_back(static_cast<std::uint8_t>(data.beta));
        for (int i = m; i < data.k; ++i) mono.pos.push_back(static_cast<std::uint8_t>(data.alpha));
        r.add_term(mono, data.Q[static_cast<std::size_t>(m)]);
    }
    return r;
}

// ------------------------------------------------------------------ parser

namespace {

class ElementParser {
public:
    ElementParser(const AlgebraPtr& alg, std::string_view s) : alg_(alg), s_(s) {}

    AlgebraElement parse() {
        AlgebraElement v = expr();
        skip();
        if (pos_ != s_.size()) error("unexpected trailing input");
        return v;
    }

private:
    [[noreturn]] void error(const std::string& msg) {
        fail(ErrorKind::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::optional<Scalar> as_scalar(const AlgebraElement& x) {
        if (x.is_zero()) return Scalar();
        if (x.terms().size() != 1) return std::nullopt;
        auto& [m, c] = *x.terms().begin();
        if (!m.neg.empty() || !m.pos.empty() || !m.k.is_one()) return std::nullopt;
        return c;
    }
    AlgebraElement expr() {
        AlgebraElement v = term();
        while (true) {
            if (eat('+')) {
                v += term();
            } else if (eat('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }
    AlgebraElement term() {
        AlgebraElement v = unary();
        while (true) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                auto d = as_scalar(unary());
                if (!d) error("division by a non-scalar");
                if (d->is_zero()) fail(ErrorKind::DivisionByZero, "division by zero");
                v = d->inverse() * v;
            } else {
                return v;
            }
        }
    }
    AlgebraElement unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    AlgebraElement power() {
        AlgebraElement b = primary();
        if (!eat('^')) return b;
        bool paren = eat('(');
        bool neg = eat('-');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) error("expected integer exponent");
        long e = std::stol(std::string(s_.substr(start, pos_ - start)));
        if (paren && !eat(')')) error("expected ')'");
        if (neg) {
            auto sc = as_scalar(b);
            if (!sc) error("negative power of a non-scalar");
            return AlgebraElement::scalar(alg_, sc->pow(-e));
        }
        AlgebraElement r = AlgebraElement::one(alg_);
        for (long i = 0; i < e; ++i) r = r * b;
        return r;
    }
    std::string bracket() {
        if (!eat('[')) error("expected '['");
        std::size_t start = pos_;
        int depth = 1;
        while (pos_ < s_.size() && depth > 0) {
            if (s_[pos_] == '[') ++depth;
            if (s_[pos_] == ']') --depth;
            ++pos_;
        }
        if (depth != 0) error("unterminated '['");
        return std::string(s_.substr(start, pos_ - start - 1));
    }
    std::pair<int, std::size_t> signed_root(const std::string& body) {
        std::size_t i = 0;
        while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
        int sign = 1;
        if (i < body.size() && (body[i] == '-' || body[i] == '+')) {
            sign = body[i] == '-' ? -1 : 1;
            ++i;
        }
        std::string digits = body.substr(i);
        if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            error("bad generator index '" + body + "'");
        return {sign, alg_->spec().root_index(std::stoi(digits))};
    }
    AlgebraElement primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            AlgebraElement v = expr();
            if (!eat(')')) error("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return AlgebraElement::scalar(alg_, Scalar(mpz_class(std::string(s_.substr(start, pos_ - start)))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            skip();
            bool generator = pos_ < s_.size() && s_[pos_] == '[' && (name == "e" || name == "f" || name == "K");
            if (!generator) return AlgebraElement::scalar(alg_, Scalar::variable(name));
            std::string body = bracket();
            if (name == "K") return AlgebraElement::cartan(alg_, alg_->parse_cartan(body));
            auto [sign, alpha] = signed_root(body);
            if (name == "e") return AlgebraElement::generator(alg_, sign, alpha);
            return rescaled_generator(alg_, sign, alpha);
        }
        error(std::string("unexpected character '") + c + "'");
    }

    AlgebraPtr alg_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

AlgebraElement parse_element(const AlgebraPtr& alg, std::string_view text) { return ElementParser(alg, text).parse(); }

}  // namespace ybforge::freealg
