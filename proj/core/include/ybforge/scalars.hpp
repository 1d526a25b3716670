#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/container/small_vector.hpp>
#include <gmpxx.h>

#include "ybforge/error.hpp"

namespace ybforge::scalars {

using Var = std::uint32_t;
using Complex = std::complex<double>;

// Process-wide symbol table. Interning is append-only; the relative order of
// two names never changes, so monomial comparisons stay stable as it grows.
Var intern(std::string_view name);
const std::string& var_name(Var v);
std::uint32_t var_rank(Var v);

class Monomial {
public:
    using Entry = std::pair<Var, std::int32_t>;
    using Storage = boost::container::small_vector<Entry, 4>;

    Monomial() = default;
    static Monomial variable(Var v, std::int32_t exponent = 1);

    const Storage& entries() const { return entries_; }
    bool is_one() const { return entries_.empty(); }
    std::int64_t degree() const { return degree_; }
    std::int32_t exponent(Var v) const;
    bool nonnegative() const;

    Monomial operator*(const Monomial& o) const;
    Monomial inverse() const;
    Monomial pow(std::int32_t k) const;
    bool divides(const Monomial& o) const;
    // Exponent-wise difference; caller guarantees divisibility when needed.
    Monomial quotient(const Monomial& o) const;
    Monomial gcd(const Monomial& o) const;
    Monomial without(Var v) const;
    Monomial positive_part() const;
    Monomial negative_part() const;

    bool operator==(const Monomial& o) const { return entries_ == o.entries_; }
    bool operator!=(const Monomial& o) const { return !(*this == o); }

    std::string str() const;

private:
    void push(Var v, std::int32_t e);
    Storage entries_;
    std::int64_t degree_ = 0;
    friend int grlex_compare(const Monomial& a, const Monomial& b);
};

// Graded lexicographic order on names; returns -1, 0, 1.
int grlex_compare(const Monomial& a, const Monomial& b);

struct Term {
    Monomial mono;
    mpz_class coeff;
};

// Sparse multivariate polynomial with integer coefficients, terms sorted by
// decreasing grlex order.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(const mpz_class& c);
    static Polynomial monomial(const Monomial& m, const mpz_class& c = 1);

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    const Term& leading() const { return terms_.front(); }
    std::size_t size() const { return terms_.size(); }
    std::int64_t total_degree() const;
    std::int32_t degree_in(Var v) const;
    std::vector<Var> variables() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial mul_term(const Monomial& m, const mpz_class& c) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(unsigned k) const;
    mpz_class content() const;
    Polynomial div_int(const mpz_class& c) const;
    Monomial monomial_content() const;
    Polynomial div_monomial(const Monomial& m) const;
    std::optional<Polynomial> divide_exact(const Polynomial& d) const;

    // Coefficients of v^0, v^1, ... as polynomials free of v.
    std::vector<Polynomial> coefficients_in(Var v) const;
    static Polynomial from_coefficients(Var v, const std::vector<Polynomial>& cs);

    Complex evaluate(const std::map<Var, Complex>& point) const;
    std::string str() const;

    static Polynomial from_terms(std::vector<Term> terms);

private:
    std::vector<Term> terms_;
};

Polynomial gcd(const Polynomial& a, const Polynomial& b);

// Exact rational function N/D in canonical form: gcd(N, D) = 1, the joint
// integer content of N and D is 1, and the grlex-leading coefficient of D is
// positive.
class Scalar {
public:
    Scalar();
    Scalar(long v);
    Scalar(const mpz_class& v);
    Scalar(const mpq_class& v);
    static Scalar variable(std::string_view name);
    static Scalar monomial(const Monomial& laurent, const mpq_class& c = 1);
    static Scalar fraction(const Polynomial& num, const Polynomial& den);
    static Scalar parse(std::string_view text);

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_constant() const;
    bool is_polynomial() const { return den_.is_one(); }
    std::optional<mpq_class> as_rational() const;
    std::optional<Monomial> as_monomial() const;
    std::vector<Var> variables() const;
    bool depends_on(Var v) const;

    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator-() const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }
    bool operator==(const Scalar& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    Scalar pow(long k) const;
    Scalar inverse() const;
    Scalar substitute(const std::map<Var, Scalar>& values) const;
    // Drops all monomials whose exponent in v exceeds order; the denominator
    // must be free of v.
    Scalar truncate_in(Var v, int order) const;
    Scalar coefficient_in(Var v, int power) const;

    Complex evaluate(const std::map<Var, Complex>& point) const;
    std::string str() const;

private:
    Scalar(Polynomial n, Polynomial d, bool canonical);
    static Scalar canonical(Polynomial n, Polynomial d);
    Polynomial num_;
    Polynomial den_;
};

enum class ArithOp { Add, Sub, Mul, Div };
Scalar scalar_arith(const Scalar& a, const Scalar& b, ArithOp op);
Complex evaluate_scalar(const Scalar& a, const std::map<std::string, Complex>& assignment);

class TruncatedSeries {
public:
    TruncatedSeries(std::string var, int order, std::vector<Scalar> coeffs);
    const std::string& variable() const { return var_; }
    int order() const { return order_; }
    const std::vector<Scalar>& coefficients() const { return coeffs_; }
    const Scalar& operator[](int k) const;

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    Scalar to_scalar() const;
    bool operator==(const TruncatedSeries& o) const;

private:
    void check(const TruncatedSeries& o) const;
    std::string var_;
    int order_;
    std::vector<Scalar> coeffs_;
};

TruncatedSeries series_truncate(const Scalar& a, std::string_view var, int order);

Scalar q_integer(const Scalar& q, int n);
Scalar q_factorial(const Scalar& q, int n);
Scalar q_binomial(const Scalar& q, int n, int k);

}  // namespace ybforge::scalars
