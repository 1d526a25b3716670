#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ybforge/scalars.hpp"

namespace ybforge::cartan {

using scalars::Scalar;
using ScalarMatrix = std::vector<std::vector<Scalar>>;
using IntMatrix = std::vector<std::vector<long>>;

// Linear substitution of an additive symbol, applied to phi and H on load.
struct Relation {
    std::string symbol;
    Scalar value;
};

// Entries of phi and H are linear forms in additive symbols.  The exponential
// of a symbol named log_X is the indeterminate X; any other symbol s
// exponentiates to the indeterminate exp_s.
struct CartanSpec {
    std::vector<std::string> cartan_labels;
    std::vector<int> root_labels;
    ScalarMatrix phi;  // |M| x |M|
    ScalarMatrix H;    // |M| x |N|
    std::vector<Relation> relations;

    std::size_t rank_M() const { return cartan_labels.size(); }
    std::size_t rank_N() const { return root_labels.size(); }

    // phi(alpha, beta) = sum phi^{ab} H_a(alpha) H_b(beta).
    Scalar pairing(std::size_t alpha, std::size_t beta) const;
    // e^{phi(alpha, beta)} as a Laurent monomial.
    Scalar exp_pairing(std::size_t alpha, std::size_t beta) const;
    // Coefficients on H_b of phi(alpha, .) and of phi(., alpha).
    std::vector<Scalar> left_form(std::size_t alpha) const;
    std::vector<Scalar> right_form(std::size_t alpha) const;
    std::size_t root_index(int label) const;

    void validate() const;
};

// e^{L} for a linear form L with integer coefficients and no constant term.
Scalar exp_linear(const Scalar& form);
bool is_linear_form(const Scalar& form);

CartanSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const CartanSpec& spec);

struct GCM {
    IntMatrix A;
    bool symmetrizable = false;
    std::vector<mpq_class> symmetrizer;
};

// A_{aa} = 2 and A_{ab} = (phi(a,b) + phi(b,a)) / phi(a,a); the Serre order
// is k_{ab} = 1 - A_{ab}.
GCM generalized_cartan_matrix(const CartanSpec& spec);

enum class CartanType { FiniteType, AffineType, Other };
const char* type_name(CartanType t);
CartanType classify(const IntMatrix& A);
mpq_class determinant(const IntMatrix& A, const std::vector<std::size_t>& rows);

struct SerreData {
    std::size_t alpha = 0, beta = 0;
    int k = 0;
    Scalar q;
    std::vector<Scalar> Q;
};

// phi(a,b) + phi(b,a) + (k-1) phi(a,a); zero on the exponent-zero branch.
Scalar serre_exponent(const CartanSpec& spec, std::size_t alpha, std::size_t beta, int k);
SerreData serre_coefficients(const CartanSpec& spec, std::size_t alpha, std::size_t beta);

struct AffineExtension {
    CartanSpec base;
    CartanSpec extended;
    Scalar u;
    std::vector<Scalar> extra_root;
    std::size_t c_index = 0, d_index = 0;
};

// The extra root gets label 0 and position 0; c and d are appended to M with
// phi^{cd} = u, phi^{dc} = 1 - u, H_c = 0, H_d(beta) = delta_{beta,0}.
AffineExtension affine_extend(const CartanSpec& spec, const Scalar& u, const std::vector<Scalar>& extra_root);

// Rank-one spec with phi(1,1) = symbol.
CartanSpec sl2_spec(const std::string& symbol = "log_Q");
// M = {1..n}, H_a(alpha_i) = delta_{a,i} - delta_{a,i+1}, phi = symbol * I.
CartanSpec slN_spec(int n, const std::string& symbol = "log_Q");
// M = N u N', phi^{ab} = log_q<a><b> on N, phi^{a a'} = 1, H_a(b) = delta_{ab}.
CartanSpec generic_spec(int rank);
// slN_spec(n) extended by the lowest root.
AffineExtension affine_slN(int n, const Scalar& u = Scalar(mpq_class(1, 2)), const std::string& symbol = "log_Q");
// sl(3) with phi = symbol * (I + E_13 - E_31); the pair (alpha_1, alpha_2)
// satisfies phi(alpha_1, .) + phi(., alpha_2) = 0.
CartanSpec twist_compatible_sl3(const std::string& symbol = "log_Q");

}  // namespace ybforge::cartan
