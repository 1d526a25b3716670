#include "ybforge/scalars.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cctype>
#include <deque>
#include <mutex>
#include <sstream>

namespace ybforge::scalars {

namespace {

constexpr std::size_t kMaxSymbols = 1u << 16;

struct SymbolTable {
    std::mutex mutex;
    std::deque<std::string> names;
    std::map<std::string, Var, std::less<>> index;
    std::array<std::atomic<std::uint32_t>, kMaxSymbols> rank{};
};

SymbolTable& table() {
    static SymbolTable t;
    return t;
}

}  // namespace

Var intern(std::string_view name) {
    auto& t = table();
    std::lock_guard<std::mutex> lock(t.mutex);
    auto it = t.index.find(name);
    if (it != t.index.end()) return it->second;
    if (t.names.size() >= kMaxSymbols) fail(ErrorKind::InvalidArgument, "symbol table full");
    Var v = static_cast<Var>(t.names.size());
    t.names.emplace_back(name);
    t.index.emplace(std::string(name), v);
    std::uint32_t r = 0;
    for (auto& [n, id] : t.index) t.rank[id].store(r++, std::memory_order_relaxed);
    return v;
}

const std::string& var_name(Var v) {
    auto& t = table();
    std::lock_guard<std::mutex> lock(t.mutex);
    return t.names.at(v);
}

std::uint32_t var_rank(Var v) { return table().rank[v].load(std::memory_order_relaxed); }

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(Var v, std::int32_t exponent) {
    Monomial m;
    if (exponent != 0) {
        m.entries_.push_back({v, exponent});
        m.degree_ = exponent;
    }
    return m;
}

std::int32_t Monomial::exponent(Var v) const {
    for (auto& [w, e] : entries_)
        if (w == v) return e;
    return 0;
}

bool Monomial::nonnegative() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.second > 0; });
}

void Monomial::push(Var v, std::int32_t e) {
    if (e == 0) return;
    entries_.push_back({v, e});
    degree_ += e;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    const auto& x = entries_;
    const auto& y = o.entries_;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && var_rank(x[i].first) < var_rank(y[j].first))) {
            r.push(x[i].first, x[i].second);
            ++i;
        } else if (i == x.size() || var_rank(y[j].first) < var_rank(x[i].first)) {
            r.push(y[j].first, y[j].second);
            ++j;
        } else {
            r.push(x[i].first, x[i].second + y[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::inverse() const { return pow(-1); }

Monomial Monomial::pow(std::int32_t k) const {
    Monomial r;
    for (auto& [v, e] : entries_) r.push(v, e * k);
    return r;
}

bool Monomial::divides(const Monomial& o) const {
    for (auto& [v, e] : entries_)
        if (o.exponent(v) < e) return false;
    return true;
}

Monomial Monomial::quotient(const Monomial& o) const { return *this * o.inverse(); }

Monomial Monomial::gcd(const Monomial& o) const {
    Monomial r;
    for (auto& [v, e] : entries_) {
        std::int32_t f = o.exponent(v);
        std::int32_t m = std::min(e, f);
        if (m > 0) r.push(v, m);
    }
    return r;
}

Monomial Monomial::without(Var v) const {
    Monomial r;
    for (auto& [w, e] : entries_)
        if (w != v) r.push(w, e);
    return r;
}

Monomial Monomial::positive_part() const {
    Monomial r;
    for (auto& [v, e] : entries_)
        if (e > 0) r.push(v, e);
    return r;
}

Monomial Monomial::negative_part() const {
    Monomial r;
    for (auto& [v, e] : entries_)
        if (e < 0) r.push(v, -e);
    return r;
}

std::string Monomial::str() const {
    std::string s;
    for (auto& [v, e] : entries_) {
        if (!s.empty()) s += "*";
        s += var_name(v);
        if (e != 1) s += "^" + (e < 0 ? "(" + std::to_string(e) + ")" : std::to_string(e));
    }
    return s.empty() ? "1" : s;
}

int grlex_compare(const Monomial& a, const Monomial& b) {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_ ? -1 : 1;
    const auto& x = a.entries_;
    const auto& y = b.entries_;
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size()) {
        auto rx = var_rank(x[i].first), ry = var_rank(y[j].first);
        if (rx < ry) return x[i].second > 0 ? 1 : -1;
        if (ry < rx) return y[j].second > 0 ? -1 : 1;
        if (x[i].second != y[j].second) return x[i].second < y[j].second ? -1 : 1;
        ++i;
        ++j;
    }
    if (i < x.size()) return x[i].second > 0 ? 1 : -1;
    if (j < y.size()) return y[j].second > 0 ? -1 : 1;
    return 0;
}

// -------------------------------------------------------------- Polynomial

Polynomial::Polynomial(const mpz_class& c) {
    if (c != 0) terms_.push_back({Monomial(), c});
}

Polynomial Polynomial::monomial(const Monomial& m, const mpz_class& c) {
    Polynomial p;
    if (c != 0) p.terms_.push_back({m, c});
    return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return grlex_compare(a.mono, b.mono) > 0; });
    Polynomial p;
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coeff += t.coeff;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
    return p;
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

bool Polynomial::is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coeff == 1; }

std::int64_t Polynomial::total_degree() const { return terms_.empty() ? -1 : terms_.front().mono.degree(); }

std::int32_t Polynomial::degree_in(Var v) const {
    std::int32_t d = terms_.empty() ? -1 : 0;
    for (auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
}

std::vector<Var> Polynomial::variables() const {
    std::vector<Var> vs;
    for (auto& t : terms_)
        for (auto& [v, e] : t.mono.entries()) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    if (o.terms_.empty()) return *this;
    if (terms_.empty()) return o;
    Polynomial r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = grlex_compare(terms_[i].mono, o.terms_[j].mono);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            mpz_class s = terms_[i].coeff + o.terms_[j].coeff;
            if (s != 0) r.terms_.push_back({terms_[i].mono, s});
            ++i;
            ++j;
        }
    }
    while (i < terms_.size()) r.terms_.push_back(terms_[i++]);
    while (j < o.terms_.size()) r.terms_.push_back(o.terms_[j++]);
    return r;
}

Polynomial Polynomial::operator-() const {
    Polynomial r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::mul_term(const Monomial& m, const mpz_class& c) const {
    Polynomial r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (auto& t : terms_) r.terms_.push_back({t.mono * m, t.coeff * c});
    return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    if (terms_.empty() || o.terms_.empty()) return Polynomial();
    if (o.terms_.size() == 1) return mul_term(o.terms_[0].mono, o.terms_[0].coeff);
    if (terms_.size() == 1) return o.mul_term(terms_[0].mono, terms_[0].coeff);
    std::vector<Term> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (auto& a : terms_)
        for (auto& b : o.terms_) prod.push_back({a.mono * b.mono, a.coeff * b.coeff});
    return from_terms(std::move(prod));
}

bool Polynomial::operator==(const Polynomial& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].mono != o.terms_[i].mono) return false;
    return true;
}

Polynomial Polynomial::pow(unsigned k) const {
    Polynomial result(1), base = *this;
    while (k) {
        if (k & 1u) result = result * base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

mpz_class Polynomial::content() const {
    mpz_class g = 0;
    for (auto& t : terms_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

Polynomial Polynomial::div_int(const mpz_class& c) const {
    if (c == 1) return *this;
    Polynomial r = *this;
    for (auto& t : r.terms_) mpz_divexact(t.coeff.get_mpz_t(), t.coeff.get_mpz_t(), c.get_mpz_t());
    return r;
}

Monomial Polynomial::monomial_content() const {
    if (terms_.empty()) return Monomial();
    Monomial g = terms_[0].mono;
    for (std::size_t i = 1; i < terms_.size() && !g.is_one(); ++i) g = g.gcd(terms_[i].mono);
    return g;
}

Polynomial Polynomial::div_monomial(const Monomial& m) const {
    if (m.is_one()) return *this;
    Polynomial r = *this;
    Monomial inv = m.inverse();
    for (auto& t : r.terms_) t.mono = t.mono * inv;
    return r;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& d) const {
    if (d.is_zero()) fail(ErrorKind::DivisionByZero, "polynomial division by zero");
    if (is_zero()) return Polynomial();
    if (d.terms_.size() == 1) {
        const auto& ld = d.terms_[0];
        Polynomial r;
        r.terms_.reserve(terms_.size());
        Monomial inv = ld.mono.inverse();
        for (auto& t : terms_) {
            if (!ld.mono.divides(t.mono) || !mpz_divisible_p(t.coeff.get_mpz_t(), ld.coeff.get_mpz_t()))
                return std::nullopt;
            mpz_class c;
            mpz_divexact(c.get_mpz_t(), t.coeff.get_mpz_t(), ld.coeff.get_mpz_t());
            r.terms_.push_back({t.mono * inv, c});
        }
        return r;
    }
    if (total_degree() < d.total_degree()) return std::nullopt;
    std::vector<Term> q;
    Polynomial rem = *this;
    const auto& ld = d.terms_[0];
    while (!rem.is_zero()) {
        const auto& lr = rem.terms_[0];
        if (!ld.mono.divides(lr.mono) || !mpz_divisible_p(lr.coeff.get_mpz_t(), ld.coeff.get_mpz_t()))
            return std::nullopt;
        mpz_class c;
        mpz_divexact(c.get_mpz_t(), lr.coeff.get_mpz_t(), ld.coeff.get_mpz_t());
        Monomial m = lr.mono.quotient(ld.mono);
        q.push_back({m, c});
        rem = rem - d.mul_term(m, c);
    }
    return from_terms(std::move(q));
}

std::vector<Polynomial> Polynomial::coefficients_in(Var v) const {
    std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(std::max(0, degree_in(v)) + 1));
    for (auto& t : terms_) buckets[static_cast<std::size_t>(t.mono.exponent(v))].push_back({t.mono.without(v), t.coeff});
    std::vector<Polynomial> out;
    out.reserve(buckets.size());
    for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
    return out;
}

Polynomial Polynomial::from_coefficients(Var v, const std::vector<Polynomial>& cs) {
    std::vector<Term> all;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        Monomial m = Monomial::variable(v, static_cast<std::int32_t>(i));
        for (auto& t : cs[i].terms()) all.push_back({t.mono * m, t.coeff});
    }
    return from_terms(std::move(all));
}

Complex Polynomial::evaluate(const std::map<Var, Complex>& point) const {
    Complex s = 0;
    for (auto& t : terms_) {
        Complex m = t.coeff.get_d();
        for (auto& [v, e] : t.mono.entries()) {
            auto it = point.find(v);
            if (it == point.end()) fail(ErrorKind::MissingAssignment, "no value for " + var_name(v));
            m *= std::pow(it->second, e);
        }
        s += m;
    }
    return s;
}

std::string Polynomial::str() const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (auto& t : terms_) {
        mpz_class c = t.coeff;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first) {
            if (neg) s += "-";
        } else {
            s += neg ? " - " : " + ";
        }
        first = false;
        if (t.mono.is_one()) {
            s += c.get_str();
        } else {
            if (c != 1) s += c.get_str() + "*";
            s += t.mono.str();
        }
    }
    return s;
}

// -------------------------------------------------------------------- gcd

namespace {

using Uni = std::vector<Polynomial>;

void strip(Uni& u) {
    while (!u.empty() && u.back().is_zero()) u.pop_back();
}

int deg(const Uni& u) { return static_cast<int>(u.size()) - 1; }

Polynomial positive_lead(Polynomial p) {
    if (!p.is_zero() && p.leading().coeff < 0) return -p;
    return p;
}

Polynomial exact(const Polynomial& a, const Polynomial& b) {
    auto q = a.divide_exact(b);
    if (!q) fail(ErrorKind::InvalidArgument, "internal: inexact division in gcd");
    return *q;
}

Polynomial gcd_primitive(const Polynomial& a, const Polynomial& b);

Polynomial content_in(const std::vector<Polynomial>& cs) {
    Polynomial g;
    for (auto& c : cs) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? positive_lead(c) : gcd(g, c);
        if (g.is_constant()) return Polynomial(1);
    }
    return g;
}

Uni prem(Uni r, const Uni& w) {
    const int dw = deg(w);
    const Polynomial& lw = w.back();
    int e = deg(r) - dw + 1;
    while (!r.empty() && deg(r) >= dw) {
        Polynomial lr = r.back();
        int s = deg(r) - dw;
        for (auto& c : r) c = c * lw;
        for (int i = 0; i <= dw; ++i) r[static_cast<std::size_t>(i + s)] -= lr * w[static_cast<std::size_t>(i)];
        strip(r);
        --e;
    }
    if (e > 0) {
        Polynomial f = lw.pow(static_cast<unsigned>(e));
        for (auto& c : r) c = c * f;
    }
    return r;
}

Polynomial subresultant_gcd(const Polynomial& p, const Polynomial& q, Var v) {
    Uni u = p.coefficients_in(v), w = q.coefficients_in(v);
    strip(u);
    strip(w);
    if (deg(u) < deg(w)) std::swap(u, w);
    Polynomial g(1), h(1);
    while (true) {
        int delta = deg(u) - deg(w);
        Uni r = prem(u, w);
        if (r.empty()) break;
        if (deg(r) == 0) return Polynomial(1);
        u = w;
        Polynomial divisor = g * h.pow(static_cast<unsigned>(delta));
        w.clear();
        for (auto& c : r) w.push_back(exact(c, divisor));
        g = u.back();
        if (delta == 1) {
            h = g;
        } else if (delta > 1) {
            h = exact(g.pow(static_cast<unsigned>(delta)), h.pow(static_cast<unsigned>(delta - 1)));
        }
    }
    Polynomial c = content_in(w);
    Polynomial gv = Polynomial::from_coefficients(v, w);
    if (!c.is_one()) gv = exact(gv, c);
    gv = gv.div_int(gv.content());
    return positive_lead(gv);
}

Polynomial gcd_primitive(const Polynomial& a, const Polynomial& b) {
    if (a.is_constant() || b.is_constant()) return Polynomial(1);
    if (a == b || a == -b) return positive_lead(a);
    auto va = a.variables(), vb = b.variables();
    std::vector<Var> common;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
    if (common.empty()) return Polynomial(1);
    // Variables occurring in only one argument: the gcd divides every
    // coefficient with respect to such a variable.
    for (Var v : va)
        if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd(content_in(a.coefficients_in(v)), b);
    for (Var v : vb)
        if (!std::binary_search(va.begin(), va.end(), v)) return gcd(a, content_in(b.coefficients_in(v)));
    Var best = common[0];
    std::int32_t best_deg = -1;
    for (Var v : common) {
        std::int32_t d = std::max(a.degree_in(v), b.degree_in(v));
        if (best_deg < 0 || d < best_deg) {
            best = v;
            best_deg = d;
        }
    }
    Polynomial ca = content_in(a.coefficients_in(best));
    Polynomial cb = content_in(b.coefficients_in(best));
    Polynomial c = (ca.is_one() || cb.is_one()) ? Polynomial(1) : gcd(ca, cb);
    Polynomial pa = ca.is_one() ? a : exact(a, ca);
    Polynomial pb = cb.is_one() ? b : exact(b, cb);
    Polynomial g = subresultant_gcd(pa, pb, best);
    return positive_lead(c * g);
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero()) return positive_lead(b);
    if (b.is_zero()) return positive_lead(a);
    mpz_class ca = a.content(), cb = b.content(), c;
    mpz_gcd(c.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
    Monomial ma = a.monomial_content(), mb = b.monomial_content();
    Monomial mg = ma.gcd(mb);
    Polynomial pa = a.div_int(ca).div_monomial(ma);
    Polynomial pb = b.div_int(cb).div_monomial(mb);
    Polynomial g = gcd_primitive(pa, pb);
    return g.mul_term(mg, c);
}

// ------------------------------------------------------------------ Scalar

Scalar::Scalar() : num_(), den_(1) {}
Scalar::Scalar(long v) : num_(mpz_class(v)), den_(1) {}
Scalar::Scalar(const mpz_class& v) : num_(v), den_(1) {}
Scalar::Scalar(const mpq_class& v) {
    mpq_class c = v;
    c.canonicalize();
    num_ = Polynomial(c.get_num());
    den_ = Polynomial(c.get_den());
}

Scalar::Scalar(Polynomial n, Polynomial d, bool canonical_form) : num_(std::move(n)), den_(std::move(d)) {
    (void)canonical_form;
}

Scalar Scalar::variable(std::string_view name) { return Scalar(Polynomial::monomial(Monomial::variable(intern(name))), Polynomial(1), true); }

Scalar Scalar::monomial(const Monomial& laurent, const mpq_class& c) {
    mpq_class k = c;
    k.canonicalize();
    if (k == 0) return Scalar();
    return Scalar(Polynomial::monomial(laurent.positive_part(), k.get_num()),
                  Polynomial::monomial(laurent.negative_part(), k.get_den()), true);
}

Scalar Scalar::fraction(const Polynomial& num, const Polynomial& den) { return canonical(num, den); }

Scalar Scalar::canonical(Polynomial n, Polynomial d) {
    if (d.is_zero()) fail(ErrorKind::DivisionByZero, "zero denominator");
    if (n.is_zero()) return Scalar();
    Polynomial g = gcd(n, d);
    if (!g.is_one()) {
        n = exact(n, g);
        d = exact(d, g);
    }
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return Scalar(std::move(n), std::move(d), true);
}

bool Scalar::is_one() const { return num_.is_one() && den_.is_one(); }

bool Scalar::is_constant() const { return num_.is_constant() && den_.is_constant(); }

std::optional<mpq_class> Scalar::as_rational() const {
    if (!is_constant()) return std::nullopt;
    if (num_.is_zero()) return mpq_class(0);
    mpq_class r(num_.leading().coeff, den_.leading().coeff);
    r.canonicalize();
    return r;
}

std::optional<Monomial> Scalar::as_monomial() const {
    if (num_.size() != 1 || den_.size() != 1) return std::nullopt;
    if (num_.leading().coeff != 1 || den_.leading().coeff != 1) return std::nullopt;
    return num_.leading().mono * den_.leading().mono.inverse();
}

std::vector<Var> Scalar::variables() const {
    auto a = num_.variables(), b = den_.variables();
    std::vector<Var> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool Scalar::depends_on(Var v) const { return num_.degree_in(v) > 0 || den_.degree_in(v) > 0; }

Scalar Scalar::operator+(const Scalar& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        Polynomial n = num_ + o.num_;
        if (den_.is_one()) return Scalar(std::move(n), den_, true);
        return canonical(std::move(n), den_);
    }
    if (den_.is_one()) return Scalar(num_ * o.den_ + o.num_, o.den_, true);
    if (o.den_.is_one()) return Scalar(num_ + o.num_ * den_, den_, true);
    Polynomial g = gcd(den_, o.den_);
    if (g.is_one()) {
        // Cross-multiplied sum of canonical fractions with coprime
        // denominators is already reduced.
        return Scalar(num_ * o.den_ + o.num_ * den_, den_ * o.den_, true);
    }
    Polynomial d1 = exact(den_, g), d2 = exact(o.den_, g);
    Polynomial n = num_ * d2 + o.num_ * d1;
    if (n.is_zero()) return Scalar();
    Polynomial d = d1 * o.den_;
    Polynomial g2 = gcd(n, g);
    if (!g2.is_one()) {
        n = exact(n, g2);
        d = exact(d, g2);
    }
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return Scalar(std::move(n), std::move(d), true);
}

Scalar Scalar::operator-() const { return Scalar(-num_, den_, true); }

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
    if (is_zero() || o.is_zero()) return Scalar();
    if (den_.is_one() && o.den_.is_one()) return Scalar(num_ * o.num_, den_, true);
    Polynomial g1 = gcd(num_, o.den_), g2 = gcd(o.num_, den_);
    Polynomial n1 = g1.is_one() ? num_ : exact(num_, g1);
    Polynomial d2 = g1.is_one() ? o.den_ : exact(o.den_, g1);
    Polynomial n2 = g2.is_one() ? o.num_ : exact(o.num_, g2);
    Polynomial d1 = g2.is_one() ? den_ : exact(den_, g2);
    Polynomial n = n1 * n2, d = d1 * d2;
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return Scalar(std::move(n), std::move(d), true);
}

Scalar Scalar::inverse() const {
    if (is_zero()) fail(ErrorKind::DivisionByZero, "inverse of zero");
    Polynomial n = den_, d = num_;
    if (d.leading().coeff < 0) {
        n = -n;
        d = -d;
    }
    return Scalar(std::move(n), std::move(d), true);
}

Scalar Scalar::operator/(const Scalar& o) const {
    if (o.is_zero()) fail(ErrorKind::DivisionByZero, "division by zero");
    return *this * o.inverse();
}

Scalar Scalar::pow(long k) const {
    if (k == 0) return Scalar(1);
    if (k < 0) return inverse().pow(-k);
    return Scalar(num_.pow(static_cast<unsigned>(k)), den_.pow(static_cast<unsigned>(k)), true);
}

namespace {

Scalar eval_poly(const Polynomial& p, const std::map<Var, Scalar>& values) {
    Scalar s;
    for (auto& t : p.terms()) {
        Scalar m(t.coeff);
        Monomial rest;
        for (auto& [v, e] : t.mono.entries()) {
            auto it = values.find(v);
            if (it == values.end()) {
                rest = rest * Monomial::variable(v, e);
            } else {
                m *= it->second.pow(e);
            }
        }
        s += m * Scalar::monomial(rest);
    }
    return s;
}

}  // namespace

Scalar Scalar::substitute(const std::map<Var, Scalar>& values) const {
    return eval_poly(num_, values) / eval_poly(den_, values);
}

Scalar Scalar::truncate_in(Var v, int order) const {
    if (den_.degree_in(v) > 0) fail(ErrorKind::InvalidArgument, "truncation variable occurs in denominator");
    std::vector<Term> kept;
    for (auto& t : num_.terms())
        if (t.mono.exponent(v) <= order) kept.push_back(t);
    return canonical(Polynomial::from_terms(std::move(kept)), den_);
}

Scalar Scalar::coefficient_in(Var v, int power) const {
    if (den_.degree_in(v) > 0) fail(ErrorKind::InvalidArgument, "coefficient variable occurs in denominator");
    std::vector<Term> kept;
    for (auto& t : num_.terms())
        if (t.mono.exponent(v) == power) kept.push_back({t.mono.without(v), t.coeff});
    return canonical(Polynomial::from_terms(std::move(kept)), den_);
}

Complex Scalar::evaluate(const std::map<Var, Complex>& point) const {
    Complex d = den_.evaluate(point);
    double scale = 0;
    for (auto& t : den_.terms()) {
        double m = std::abs(t.coeff.get_d());
        for (auto& [v, e] : t.mono.entries()) m *= std::pow(std::abs(point.at(v)), e);
        scale += m;
    }
    if (std::abs(d) <= 1e-14 * scale) fail(ErrorKind::PoleAtPoint, "denominator vanishes at the point");
    return num_.evaluate(point) / d;
}

std::string Scalar::str() const {
    if (den_.is_one()) return num_.str();
    std::string n = num_.size() > 1 ? "(" + num_.str() + ")" : num_.str();
    bool bare = den_.size() == 1 && den_.leading().coeff == 1 && den_.leading().mono.entries().size() <= 1;
    bool integer = den_.is_constant();
    std::string d = (bare || integer) ? den_.str() : "(" + den_.str() + ")";
    return n + "/" + d;
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Scalar parse() {
        Scalar v = expr();
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
    Scalar expr() {
        Scalar v = term();
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
    Scalar term() {
        Scalar v = unary();
        while (true) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                Scalar d = unary();
                if (d.is_zero()) fail(ErrorKind::DivisionByZero, "division by zero in '" + std::string(s_) + "'");
                v /= d;
            } else {
                return v;
            }
        }
    }
    Scalar unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    long exponent() {
        bool paren = eat('(');
        bool neg = eat('-');
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) error("expected integer exponent");
        long e = std::stol(std::string(s_.substr(start, pos_ - start)));
        if (paren && !eat(')')) error("expected ')'");
        return neg ? -e : e;
    }
    Scalar power() {
        Scalar b = primary();
        if (eat('^')) {
            long e = exponent();
            if (e < 0 && b.is_zero()) fail(ErrorKind::DivisionByZero, "zero to negative power");
            return b.pow(e);
        }
        return b;
    }
    Scalar primary() {
        skip();
        if (pos_ >= s_.size()) error("unexpected end of input");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            if (!eat(')')) error("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            return Scalar(mpz_class(std::string(s_.substr(start, pos_ - start))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                ++pos_;
            return Scalar::variable(s_.substr(start, pos_ - start));
        }
        error(std::string("unexpected character '") + c + "'");
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Scalar Scalar::parse(std::string_view text) { return Parser(text).parse(); }

Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op) {
    switch (op) {
        case ArithOp::Add: return a + b;
        case ArithOp::Sub: return a - b;
        case ArithOp::Mul: return a * b;
        case ArithOp::Div: return a / b;
    }
    return a;
}

Complex evaluate_scalar(const Scalar& a, const std::map<std::string, Complex>& assignment) {
    std::map<Var, Complex> point;
    for (Var v : a.variables()) {
        auto it = assignment.find(var_name(v));
        if (it == assignment.end()) fail(ErrorKind::MissingAssignment, "no value for " + var_name(v));
        point[v] = it->second;
    }
    return a.evaluate(point);
}

// ---------------------------------------------------------- TruncatedSeries

TruncatedSeries::TruncatedSeries(std::string var, int order, std::vector<Scalar> coeffs)
    : var_(std::move(var)), order_(order), coeffs_(std::move(coeffs)) {
    if (order_ < 0) fail(ErrorKind::InvalidArgument, "negative series order");
    coeffs_.resize(static_cast<std::size_t>(order_) + 1);
}

const Scalar& TruncatedSeries::operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }

void TruncatedSeries::check(const TruncatedSeries& o) const {
    if (var_ != o.var_) fail(ErrorKind::InvalidArgument, "series in different variables");
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    check(o);
    int n = std::min(order_, o.order_);
    std::vector<Scalar> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = (*this)[k] + o[k];
    return TruncatedSeries(var_, n, std::move(c));
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    check(o);
    int n = std::min(order_, o.order_);
    std::vector<Scalar> c(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<std::size_t>(k)] = (*this)[k] - o[k];
    return TruncatedSeries(var_, n, std::move(c));
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    check(o);
    int n = std::min(order_, o.order_);
    std::vector<Scalar> c(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        if ((*this)[i].is_zero()) continue;
        for (int j = 0; i + j <= n; ++j) c[static_cast<std::size_t>(i + j)] += (*this)[i] * o[j];
    }
    return TruncatedSeries(var_, n, std::move(c));
}

Scalar TruncatedSeries::to_scalar() const {
    Scalar x = Scalar::variable(var_), s, p(1);
    for (int k = 0; k <= order_; ++k) {
        s += (*this)[k] * p;
        p *= x;
    }
    return s;
}

bool TruncatedSeries::operator==(const TruncatedSeries& o) const {
    return var_ == o.var_ && order_ == o.order_ && coeffs_ == o.coeffs_;
}

TruncatedSeries series_truncate(const Scalar& a, std::string_view var, int order) {
    if (order < 0) fail(ErrorKind::InvalidArgument, "negative series order");
    Var v = intern(var);
    auto dc = a.den().coefficients_in(v);
    if (dc.empty() || dc[0].is_zero())
        fail(ErrorKind::EssentialSingularity, "denominator vanishes at " + std::string(var) + "=0");
    auto nc = a.num().coefficients_in(v);
    Scalar d0 = Scalar::fraction(dc[0], Polynomial(1));
    std::vector<Scalar> c(static_cast<std::size_t>(order) + 1);
    for (int k = 0; k <= order; ++k) {
        Scalar s = k < static_cast<int>(nc.size()) ? Scalar::fraction(nc[static_cast<std::size_t>(k)], Polynomial(1))
                                                   : Scalar();
        for (int i = 1; i <= k && i < static_cast<int>(dc.size()); ++i)
            if (!dc[static_cast<std::size_t>(i)].is_zero())
                s -= Scalar::fraction(dc[static_cast<std::size_t>(i)], Polynomial(1)) * c[static_cast<std::size_t>(k - i)];
        c[static_cast<std::size_t>(k)] = s / d0;
    }
    return TruncatedSeries(std::string(var), order, std::move(c));
}

// ------------------------------------------------------------ q-numbers

Scalar q_integer(const Scalar& q, int n) {
    if (n < 0) return -q.pow(n) * q_integer(q, -n);
    Scalar s, p(1);
    for (int i = 0; i < n; ++i) {
        s += p;
        p *= q;
    }
    return s;
}

Scalar q_factorial(const Scalar& q, int n) {
    if (n < 0) fail(ErrorKind::InvalidArgument, "negative q-factorial");
    Scalar f(1);
    for (int i = 1; i <= n; ++i) f *= q_integer(q, i);
    return f;
}

Scalar q_binomial(const Scalar& q, int n, int k) {
    if (k < 0 || k > n) return Scalar();
    Scalar r(1);
    for (int i = 0; i < k; ++i) r = r * q_integer(q, n - i) / q_integer(q, i + 1);
    return r;
}

}  // namespace ybforge::scalars
