#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

#include "ybforge/cartan.hpp"

namespace ybforge::freealg {

using cartan::CartanSpec;
using scalars::Monomial;
using scalars::Scalar;

// Root positions in the CartanSpec, not labels.
using Word = boost::container::small_vector<std::uint8_t, 8>;

// Formal exponential e^L, stored as integer coordinates of L in a lattice
// basis of the group generated by phi(alpha, .) and phi(., alpha).
struct CartanExp {
    boost::container::small_vector<std::int32_t, 8> e;

    bool is_one() const;
    CartanExp operator*(const CartanExp& o) const;
    CartanExp inverse() const;
    CartanExp pow(std::int32_t k) const;
    bool operator==(const CartanExp& o) const { return e == o.e; }
    bool operator!=(const CartanExp& o) const { return e != o.e; }
    bool operator<(const CartanExp& o) const { return e < o.e; }
};

// Normal-ordered monomial: (negative word) * K * (positive word).
struct Mono {
    Word neg;
    CartanExp k;
    Word pos;

    bool operator==(const Mono& o) const { return neg == o.neg && pos == o.pos && k == o.k; }
    bool operator<(const Mono& o) const;
};

struct StraightTerm {
    Scalar coeff;
    Mono mono;
};

class Algebra {
public:
    explicit Algebra(CartanSpec spec);
    static std::shared_ptr<const Algebra> create(CartanSpec spec);

    const CartanSpec& spec() const { return spec_; }
    std::size_t rank_N() const { return spec_.rank_N(); }
    std::size_t torus_rank() const { return basis_forms_.size(); }

    CartanExp one() const;
    // e^{phi(alpha, .)} and e^{phi(., alpha)}.
    const CartanExp& A(std::size_t alpha) const { return A_[alpha]; }
    const CartanExp& B(std::size_t alpha) const { return B_[alpha]; }
    // e^{phi(mu, .)} and e^{phi(., mu)} for an integer weight mu over the roots.
    CartanExp left_exp(const std::vector<int>& mu) const;
    CartanExp right_exp(const std::vector<int>& mu) const;

    // K e_beta K^{-1} = kappa(K, beta) e_beta.
    Monomial kappa(const CartanExp& k, std::size_t beta) const;
    Monomial kappa_word(const CartanExp& k, const Word& w) const;
    // The linear form L of K = e^L, as coefficients on H_a.
    std::vector<Scalar> form(const CartanExp& k) const;

    std::string render(const CartanExp& k) const;
    CartanExp parse_cartan(std::string_view text) const;
    std::string root_name(std::size_t alpha) const;

    // Normal-ordered expansion of (positive word) * (negative word).
    std::shared_ptr<const std::vector<StraightTerm>> straighten(const Word& p, const Word& n) const;

private:
    struct BasisName {
        bool left;
        std::size_t root;
    };
    CartanSpec spec_;
    std::vector<std::vector<Scalar>> basis_forms_;
    std::vector<BasisName> basis_names_;
    bool named_basis_ = true;
    std::vector<CartanExp> A_, B_;
    std::vector<std::vector<Monomial>> kappa_;  // [basis][root]

    mutable std::mutex cache_mutex_;
    mutable std::map<std::pair<Word, Word>, std::shared_ptr<const std::vector<StraightTerm>>> cache_;
};

using AlgebraPtr = std::shared_ptr<const Algebra>;

class AlgebraElement {
public:
    using Terms = std::map<Mono, Scalar>;

    explicit AlgebraElement(AlgebraPtr alg) : alg_(std::move(alg)) {}
    static AlgebraElement scalar(AlgebraPtr alg, const Scalar& c);
    static AlgebraElement one(AlgebraPtr alg) { return scalar(std::move(alg), Scalar(1)); }
    // e_{+alpha} for sign > 0, e_{-alpha} for sign < 0.
    static AlgebraElement generator(AlgebraPtr alg, int sign, std::size_t alpha);
    static AlgebraElement cartan(AlgebraPtr alg, const CartanExp& k);
    static AlgebraElement monomial(AlgebraPtr alg, const Mono& m, const Scalar& c = Scalar(1));

    const AlgebraPtr& algebra() const { return alg_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Mono& m, const Scalar& c);

    AlgebraElement operator+(const AlgebraElement& o) const;
    AlgebraElement operator-(const AlgebraElement& o) const;
    AlgebraElement operator-() const;
    AlgebraElement operator*(const AlgebraElement& o) const;
    AlgebraElement& operator+=(const AlgebraElement& o);
    AlgebraElement& operator-=(const AlgebraElement& o);
    bool operator==(const AlgebraElement& o) const;
    bool operator!=(const AlgebraElement& o) const { return !(*this == o); }

    std::string str() const;

private:
    AlgebraPtr alg_;
    Terms terms_;
};

AlgebraElement operator*(const Scalar& c, const AlgebraElement& x);

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);
AlgebraElement commutator(const AlgebraElement& a, const AlgebraElement& b);
// Product of two monomials accumulated into out with the given coefficient.
void multiply_into(const Algebra& alg, const Mono& a, const Mono& b, const Scalar& c, AlgebraElement::Terms& out);

// f_sigma = e^{-phi(sigma, .)} e_sigma for sign > 0; f_{-rho} = e_{-rho} e^{phi(., rho)}.
AlgebraElement rescaled_generator(const AlgebraPtr& alg, int sign, std::size_t alpha);
// [H_a, x] computed from the weights of the terms of x.
AlgebraElement cartan_action(std::size_t a, const AlgebraElement& x);

// Weight over the roots: positive letters count +1, negative letters -1.
std::vector<int> weight(const Algebra& alg, const Mono& m);
// Number of positive letters minus number of negative letters.
int height(const Mono& m);

class TensorElement {
public:
    using Key = boost::container::small_vector<Mono, 3>;
    using Terms = std::map<Key, Scalar>;

    TensorElement(AlgebraPtr alg, std::size_t legs) : alg_(std::move(alg)), legs_(legs) {}
    static TensorElement one(AlgebraPtr alg, std::size_t legs);
    static TensorElement product(const std::vector<AlgebraElement>& legs);

    const AlgebraPtr& algebra() const { return alg_; }
    std::size_t legs() const { return legs_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    void add_term(const Key& k, const Scalar& c);

    TensorElement operator+(const TensorElement& o) const;
    TensorElement operator-(const TensorElement& o) const;
    TensorElement operator-() const;
    // Leg-wise product.
    TensorElement operator*(const TensorElement& o) const;
    TensorElement& operator+=(const TensorElement& o);
    TensorElement& operator-=(const TensorElement& o);
    bool operator==(const TensorElement& o) const;
    bool operator!=(const TensorElement& o) const { return !(*this == o); }

    // Leg j of this goes to position placement[j] of the result; other legs get 1.
    TensorElement embed(const std::vector<std::size_t>& placement, std::size_t total_legs) const;
    // Reversal of a two-leg tensor.
    TensorElement flip() const;
    TensorElement map_coefficients(const std::function<Scalar(const Scalar&)>& f) const;
    // Keep only terms for which keep(key) holds.
    TensorElement filter(const std::function<bool(const Key&)>& keep) const;
    // Apply a leg-1 linear map (returns an element) to leg `leg` of every term.
    TensorElement apply_leg(std::size_t leg, const std::function<AlgebraElement(const Mono&)>& f) const;

    std::string str() const;

private:
    AlgebraPtr alg_;
    std::size_t legs_;
    Terms terms_;
};

TensorElement operator*(const Scalar& c, const TensorElement& x);

// Leg-wise product restricted to the term pairs accepted by keep.
using PairFilter = std::function<bool(const TensorElement::Key&, const Scalar&, const TensorElement::Key&, const Scalar&)>;
TensorElement product_if(const TensorElement& a, const TensorElement& b, const PairFilter& keep);
void check_legs(const TensorElement& a, const TensorElement& b);

// Delta e_alpha = 1 (x) e_alpha + e_alpha (x) e^{phi(alpha, .)},
// Delta e_{-alpha} = e^{-phi(., alpha)} (x) e_{-alpha} + e_{-alpha} (x) 1,
// Delta K = K (x) K.
TensorElement coproduct(const AlgebraElement& x);
// Apply Delta to leg `leg` of a tensor, producing legs+1 legs (the new legs
// occupy positions leg, leg+1).
TensorElement coproduct_leg(const TensorElement& t, std::size_t leg);

struct SkewDerivative {
    AlgebraElement right;
    AlgebraElement left;
};

// [w, e_{-gamma}] = right * e^{phi(gamma, .)} - e^{-phi(., gamma)} * left.
SkewDerivative skew_derivative(const AlgebraPtr& alg, const Word& w, std::size_t gamma);
AlgebraElement skew_reconstruct(const AlgebraPtr& alg, const SkewDerivative& d, std::size_t gamma);

AlgebraElement serre_element(const AlgebraPtr& alg, const cartan::SerreData& data);

// Grammar: sums of products of scalars, e[l], e[-l], f[l], f[-l], K[...].
AlgebraElement parse_element(const AlgebraPtr& alg, std::string_view text);

}  // namespace ybforge::freealg
