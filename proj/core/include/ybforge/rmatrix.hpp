#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ybforge/freealg.hpp"

namespace ybforge::rmatrix {

using freealg::AlgebraElement;
using freealg::AlgebraPtr;
using freealg::TensorElement;
using freealg::Word;
using scalars::Scalar;

// Name of the deformation parameter.
inline constexpr const char* kEpsilon = "eps";

// (negative word, positive word) -> coefficient.
using Table = std::map<std::pair<Word, Word>, Scalar>;

// R = K0 (1 + t_1 + t_2 + ...) with K0 = exp(phi^{ab} H_a (x) H_b) kept symbolic.
// Everything below works with the body 1 + t_1 + ... and moves K0 to the left.
struct RSeries {
    AlgebraPtr alg;
    std::vector<Table> tables;  // tables[n - 1] holds t_n

    int n_max() const { return static_cast<int>(tables.size()); }
    TensorElement t(int n) const;
    // 1 + t_1 + ... + t_upto.
    TensorElement body(int upto) const;
};

// Sum over roots of e_{-alpha} (x) e_alpha.
TensorElement t1(const AlgebraPtr& alg);
RSeries start_series(const AlgebraPtr& alg);
// Extends R (complete to degree n - 1) by t_n from
// [t_n, 1 (x) e_{-g}] = (e_{-g} (x) e^{phi(g,.)}) t_{n-1} - t_{n-1} (e_{-g} (x) e^{-phi(.,g)}).
RSeries solve_tn(const RSeries& R, int n);
RSeries solve_standard(const AlgebraPtr& alg, int n_max);
TensorElement recursion_residual(const RSeries& R, int n, std::size_t gamma);

// K0^{-1} x K0 for a two-leg x: X (x) Y -> X e^{-phi(., mu_Y)} (x) e^{-phi(mu_X, .)} Y.
TensorElement conjugate_prefactor(const TensorElement& x);

// R12 R13 R23 - R23 R13 R12 for R = K0 X, with K0 K0 K0 divided out on the left.
// The eps^e part of a term with leg heights (h1, h2, h3) is kept when
// e <= eps_order, e - h1 <= degree and e + h3 <= degree; on that window the
// result only involves terms of X already present when X is complete to
// `degree` letters per leg and eps_order in eps.
TensorElement ybe_residual_body(const TensorElement& X, int degree, int eps_order);
TensorElement ybe_residual(const RSeries& R, int degree);

// Delta(x) R - R Delta'(x) with K0 divided out; terms with 1 - h1 <= degree.
TensorElement intertwining_residual(const RSeries& R, const AlgebraElement& x, int degree);

// Raises IncompatiblePair unless e^{phi(., rho) + phi(sigma, .)} = 1.
void check_pair(const AlgebraPtr& alg, std::size_t sigma, std::size_t rho);
// R_1 = (f_{-rho} (x) f_sigma) R - R (f_sigma (x) f_{-rho}), returned as the body after K0.
TensorElement first_order_deformation(const RSeries& R, std::size_t sigma, std::size_t rho);
// e_q^{-eps f_sigma (x) f_{-rho}} with q = e^{phi(sigma, rho)}, up to eps^order.
TensorElement elementary_twist(const AlgebraPtr& alg, std::size_t sigma, std::size_t rho, int order);

// Drops all parts of coefficients of degree above order in eps.
TensorElement eps_truncate(const TensorElement& x, int order);
// Coefficient of eps^k.
TensorElement eps_coefficient(const TensorElement& x, int k);
// Series inverse; raises NotInvertible unless the eps^0 part is 1.
TensorElement invert(const TensorElement& F, int order);

// ((1 (x) Delta_21) F) F_12 - ((Delta_13 (x) 1) F) F_31 for F = sum a (x) b, where
// (1 (x) Delta_21) F puts b'' in space 1, b' in space 2 and a in space 3, and
// (Delta_13 (x) 1) F puts a' in space 1, b in space 2, a'' in space 3.
// With base given, Delta is replaced by the coproduct twisted by base.
TensorElement twist_equation_residual(const TensorElement& F, int order, const TensorElement* base = nullptr);

// Body of (F^t)^{-1} R F for R = K0 X.
TensorElement apply_twist(const TensorElement& X, const TensorElement& F, int order);
// (F^t)^{-1} Delta(x) F^t.
TensorElement twisted_coproduct(const AlgebraElement& x, const TensorElement& F, int order);
// Twisted coproduct applied to one leg; the new legs occupy leg, leg + 1.
TensorElement twisted_coproduct_leg(const TensorElement& t, std::size_t leg, const TensorElement& F, int order);

// sigma -> tau(sigma) on root positions.
struct TwistData {
    std::map<std::size_t, std::size_t> tau;
};

// Raises InvalidTau when tau is not injective or some pair violates
// e^{phi(sigma, .) + phi(., tau sigma)} = 1.
void validate_tau(const AlgebraPtr& alg, const TwistData& data);
// tau^m(sigma) when defined.
std::optional<std::size_t> tau_power(const TwistData& data, std::size_t sigma, int m);

// F = F^1 F^2 ..., F^m = sum_n eps^{nm} F^m_n, and
// F^m_n = sum c (f_{s_1} ... f_{s_n}) (x) (f_{-tau^m s'_1} ... f_{-tau^m s'_n})
// with (s') a permutation of (s).  tables[m - 1][n - 1] maps (s, s') -> c.
struct TwistSeries {
    AlgebraPtr alg;
    TwistData data;
    int n_max = 0;
    int m_max = 0;
    std::vector<std::vector<Table>> tables;

    TensorElement factor_term(int m, int n) const;
    TensorElement factor(int m, int eps_order) const;
    TensorElement twist(int eps_order) const;
};

// Solves [F^m_n, f_{-s} (x) 1] = (K^s (x) f_{-r}) F^m_{n-1} - F^m_{n-1} (K_s (x) f_{-r}),
// r = tau^m s, with F^m_0 = 1.
TwistSeries solve_twist(const AlgebraPtr& alg, const TwistData& data, int n_max, int m_max);
// Residual of the defining recursion above for a given s.
TensorElement twist_recursion_residual(const TwistSeries& F, int m, int n, std::size_t sigma);
// [1 (x) f_r, F^m_n] - F^m_{n-1} (f_s (x) K^r) + (f_s (x) K_r) F^m_{n-1}.
TensorElement twist_cross_residual(const TwistSeries& F, int m, int n, std::size_t sigma);

nlohmann::json to_json(const RSeries& R);
nlohmann::json to_json(const TwistSeries& F);
nlohmann::json table_to_json(const freealg::Algebra& alg, const Table& t);

}  // namespace ybforge::rmatrix
