#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ybforge/linsolve.hpp"
#include "ybforge/reps.hpp"

namespace ybforge::classical {

using reps::Matrix;
using scalars::Complex;
using scalars::Scalar;

// ------------------------------------------------------------ matrix tools

Matrix commutator(const Matrix& a, const Matrix& b);
Scalar trace(const Matrix& a);
// Two-leg tensors live on C^n (x) C^n; entry (i n + k, j n + l) is the
// coefficient of E_ij (x) E_kl.
Matrix tensor(const Matrix& a, const Matrix& b);
// Exchange of the two legs.
Matrix flip(const Matrix& t, std::size_t n);
// a (x) b -> b (x) a together with the spectral symbols the legs carry.
Matrix transpose_legs(const Matrix& t, std::size_t n, const std::string& s1 = "lambda",
                      const std::string& s2 = "mu");
// [x (x) 1 + 1 (x) x, t].
Matrix adjoint_action(const Matrix& x, const Matrix& t);
// (f (x) 1) t for a linear map f on n x n matrices.
Matrix apply_leg1(const std::function<Matrix(const Matrix&)>& f, const Matrix& t, std::size_t n);
// Entries (i, j, k, l, coefficient) of a two-leg tensor.
struct TensorTerm {
    std::size_t i, j, k, l;
    Scalar coeff;
};
std::vector<TensorTerm> tensor_terms(const Matrix& t, std::size_t n);

// ------------------------------------------------------------ root vectors

struct RootVector {
    std::vector<int> root;  // multiplicities of the simple roots
    int height = 0;
    Matrix pos, neg;        // <pos, neg> = 1
};

// Matrix realization of a simple Lie algebra with invariant form
// <x, y> = tr(xy) / scale, positive root vectors built by brackets of the
// simple ones and negative ones rescaled to be dual.
struct RootVectorBasis {
    std::size_t n = 0;
    Scalar scale = Scalar(1);
    std::vector<Matrix> cartan;
    Matrix phi;                      // two-leg tensor on the Cartan subalgebra
    std::size_t rank = 0;            // roots[0 .. rank) are the simple roots
    std::vector<RootVector> roots;   // positive roots, by height
    std::size_t highest = 0;

    Scalar form(const Matrix& a, const Matrix& b) const;
    const Matrix& e_plus() const { return roots[highest].pos; }
    const Matrix& e_minus() const { return roots[highest].neg; }
    // h_i = [E_i, E_{-i}] over the simple roots; they span the Cartan subalgebra
    // of the simple algebra, which is smaller than span(cartan) for gl(N)-style data.
    std::vector<Matrix> coroots() const;
    // Dual-basis tensor of the declared Cartan elements; equals phi + phi^t.
    Matrix cartan_casimir() const;
    // Casimir of the simple algebra: dual tensor on the coroots plus
    // sum E_{-i} (x) E_i + sum E_i (x) E_{-i}.
    Matrix casimir() const;
    // Coroots, then positive, then negative root vectors: a basis of the simple algebra.
    std::vector<Matrix> elements() const;
};

// Value of the root of a root vector on a diagonal matrix.
Scalar root_value(const Matrix& root_vector, const Matrix& h);

// Raises InvalidArgument when phi + phi^t is not the Cartan dual tensor or a
// negative root vector pairs to zero with its positive partner.
RootVectorBasis make_basis(std::size_t n, std::vector<Matrix> cartan, const std::vector<Matrix>& raising,
                           const std::vector<Matrix>& lowering, const Matrix& phi, const Scalar& scale);
// gl(N)-style Cartan, form tr/2, phi = sum E_aa (x) E_aa: the classical limit of
// the quantum sl(N) data, E_{-alpha} = 2 E_ji. C is the sl(N) Casimir.
RootVectorBasis slN_basis(int n);
// Traceless Cartan E_aa - E_{a+1,a+1}, phi half the Cartan dual tensor.
RootVectorBasis traceless_slN_basis(int n, const Scalar& scale = Scalar(1));
// Same basis with another phi of the same symmetric part.
RootVectorBasis with_phi(const RootVectorBasis& b, const Matrix& phi);

// Violations of ad-invariance of C, of the highest-root property and of the
// pairing normalization; empty when all hold.
std::vector<std::string> basis_failures(const RootVectorBasis& b);
// Gram matrix of elements() under the form.
linsolve::Matrix pairing_matrix(const RootVectorBasis& b);
// c^{ij} with C = sum c^{ij} x_i (x) x_j over elements().
linsolve::Matrix casimir_coefficients(const RootVectorBasis& b);

// ------------------------------------------------------------ r-matrices

// phi + sum E_{-i} (x) E_i.
Matrix standard_part(const RootVectorBasis& b);
// phi + sum E_{-i} (x) E_i + x / (1 - x) C; raises PoleAtOne at x = 1.
Matrix r_standard_untwisted(const RootVectorBasis& b, const Scalar& x);
// The ratio of two spectral symbols.
Scalar spectral_ratio(const std::string& num, const std::string& den);

// Loop algebra twisted by an automorphism mu of order k, L = sum L_j with mu = omega^j on L_j.
struct TwistedLoopSpec {
    int k = 1;
    std::size_t n = 0;
    Scalar scale = Scalar(1);
    std::function<Matrix(const Matrix&)> mu;
    std::vector<Matrix> algebra;  // basis of L
    RootVectorBasis fixed;        // L_0
    Matrix casimir;               // C of L
    std::vector<Matrix> parts;    // C_j = (P_j (x) 1) C

    Matrix project(const Matrix& x, int j) const;
};

// Raises InvalidArgument unless k is 1 or 2 (order 3 needs cube roots of unity
// in the coefficient field).
TwistedLoopSpec make_twisted(int k, std::size_t n, std::function<Matrix(const Matrix&)> mu,
                             std::vector<Matrix> algebra, const Scalar& scale, RootVectorBasis fixed);
// sl(3) with mu(X) = -J X^t J, J = antidiag(1, -1, 1); L_0 = so(3).
TwistedLoopSpec twisted_a22();
// k = 1, mu = identity.
TwistedLoopSpec untwisted_loop_spec(const RootVectorBasis& b);
// Basis of traceless n x n matrices.
std::vector<Matrix> traceless_basis(std::size_t n);
std::vector<std::string> twisted_failures(const TwistedLoopSpec& s);

// Solution of f_1 = x (f_0 + 1), f_{j+1} = x f_j, f_0 = x f_{k-1}.
std::vector<Scalar> twisted_coefficients(int k, const Scalar& x);
// phi + sum E_{-i} (x) E_i - C_0 + (1 / (1 - x^k)) sum x^j C_j over L_0 root vectors;
// raises PoleAtRootOfUnity when x^k = 1.
Matrix r_standard_twisted(const TwistedLoopSpec& s, const Scalar& x);

// YB(r) = [r12, r13 + r23] + [r13, r23] with r = r(names[0], names[1]); the
// pairs carry (names[0], names[1]), (names[0], names[2]), (names[1], names[2]).
// Raises SpectralClash when names repeat or r already depends on names[2].
Matrix cybe_residual(const Matrix& r, std::size_t n, const std::vector<std::string>& names = {});
// Largest entry modulus of the residual for a numerically evaluated r(a, b).
double cybe_residual_numeric(const std::function<Eigen::MatrixXcd(Complex, Complex)>& r, std::size_t n, Complex a,
                             Complex b, Complex c);
Eigen::MatrixXcd to_complex(const Matrix& m, const std::map<std::string, Complex>& point);

// ------------------------------------------------------------ central extension

struct LoopElement {
    std::size_t n = 0;
    std::map<int, Matrix> modes;  // power of lambda -> coefficient
    Scalar c, d;

    static LoopElement mode(int power, const Matrix& x);
    static LoopElement central(std::size_t n, const Scalar& c);
    static LoopElement derivation(std::size_t n, const Scalar& d);
    LoopElement operator+(const LoopElement& o) const;
    LoopElement operator-(const LoopElement& o) const;
    bool operator==(const LoopElement& o) const;
    bool is_zero() const;
};
LoopElement operator*(const Scalar& s, const LoopElement& a);

// [f x, g y] = f g [x, y] + c <x, y> Res(f' g), Res = constant term of lambda f' g;
// [d, f x] = lambda f' x, c central. extended = false drops c and d.
LoopElement loop_bracket(const LoopElement& a, const LoopElement& b, const Scalar& scale, bool extended = true);
// Every mode lambda^p X has X in L_{p mod k}.
bool in_twisted_loop(const LoopElement& a, const TwistedLoopSpec& s);
// Random element with modes in [-degree, degree] drawn from span(basis) with
// small integer coefficients; with twisted given, mode p is projected onto L_{p mod k}.
LoopElement random_loop_element(const std::vector<Matrix>& basis, int degree, std::mt19937& rng,
                                const TwistedLoopSpec* twisted = nullptr);

// Symbolic loop tensors: a unit matrix times a power of the leg's spectral
// parameter, or the central element, or the derivation.
struct LoopAtom {
    enum class Kind : std::uint8_t { Unit, Central, Derivation };
    Kind kind = Kind::Unit;
    int power = 0;
    std::uint8_t i = 0, j = 0;
    auto operator<=>(const LoopAtom&) const = default;
};
using LoopTensor2 = std::map<std::array<LoopAtom, 2>, Scalar>;
using LoopTensor3 = std::map<std::array<LoopAtom, 3>, Scalar>;

// r(x) with the x-free part and x^p C_{p mod k} on lambda_1^p lambda_2^-p for p = 1..terms.
struct LoopR {
    std::size_t n = 0;
    Scalar scale = Scalar(1);
    int terms = 0;
    int k = 1;
    LoopTensor2 t;
};
LoopR loop_expand(const TwistedLoopSpec& s, int terms);
// Adds u c (x) d + (1 - u) d (x) c.
LoopR r_extended(const LoopR& r, const Scalar& u);

enum class Bracket { Plain, Extended, TwistedExtended };
// YB(r) on the window where every leg power has modulus <= r.terms; there the
// result only involves the terms of r present. TwistedExtended requires k > 1.
LoopTensor3 loop_cybe_residual(const LoopR& r, Bracket bracket);
// [r_13, (c (x) d)_23].
LoopTensor3 commutator_with_cd(const LoopR& r);
// c_2 lambda_3 d/dlambda_3 r_13.
LoopTensor3 residue_term(const LoopR& r);
LoopTensor3 operator+(const LoopTensor3& a, const LoopTensor3& b);
LoopTensor3 operator-(const LoopTensor3& a, const LoopTensor3& b);

struct ExtensionReport {
    bool plain_zero = false;      // YB(r) = 0 with the plain bracket
    bool cocycle_matches = false; // extended minus plain YB(r) is c_2 lambda d/dlambda r_13, up to sign
    int cocycle_sign = 0;         // +1 or -1 when cocycle_matches
    bool identity_holds = false;  // YB(r^) = YB(r) + [r_13, (c (x) d)_23]
    bool rhat_zero = false;       // YB(r^) = 0 with the extended bracket
    std::size_t terms_checked = 0;
};
ExtensionReport verify_extension(const LoopR& r, const Scalar& u);

// ------------------------------------------------------------ deformations

// Simple root vectors of the finite algebra or of its loop algebra; in the
// affine case index 0 is e_0 = lambda E_-, e_{-0} = lambda^-1 E_+.
struct BDSetting {
    RootVectorBasis basis;
    bool affine = false;
    std::string spectral = "lambda";
    std::vector<Matrix> simple_pos, simple_neg;
};
BDSetting finite_setting(const RootVectorBasis& b);
BDSetting affine_setting(const RootVectorBasis& b, const std::string& spectral = "lambda");

struct BDTriple {
    std::vector<std::size_t> gamma1;
    std::map<std::size_t, std::size_t> tau;
    Scalar eps = Scalar::variable("eps");
};

// (sigma, sigma') = sigma'([e_sigma, e_-sigma]).
linsolve::Matrix simple_gram(const BDSetting& s);
// Gamma_1 holds all simple roots of the affine algebra and tau is cyclic.
bool is_exceptional(const BDSetting& s, const BDTriple& t);
// Raises InvalidTriple for a non-injective tau, a broken Gram matrix, or a tau
// with no power leaving Gamma_1 outside the exceptional case.
void validate_triple(const BDSetting& s, const BDTriple& t);
// Violations of phi(sigma, .) + phi(., tau sigma) = 0 on the Cartan subalgebra.
std::vector<std::string> phi_failures(const BDSetting& s, const BDTriple& t);
// A phi with the symmetric part of s.basis satisfying the condition above; raises NoSolution.
Matrix bd_phi(const BDSetting& s, const BDTriple& t);
// Valid non-exceptional triples over all subsets and injective maps, eps symbolic.
std::vector<BDTriple> enumerate_triples(const BDSetting& s);

struct SubalgebraRoot {
    std::vector<std::size_t> word;  // left-normed bracket of simple root vectors
    std::vector<int> root;
    int height = 0;
    Matrix pos;
};
std::vector<SubalgebraRoot> subalgebra_roots(const BDSetting& s, const std::vector<std::size_t>& gamma1);
// tau^m applied letterwise, if defined on every letter.
std::optional<Matrix> tau_image(const BDSetting& s, const BDTriple& t, const SubalgebraRoot& r, int m);
// Element y of the opposite root space with <x, y> = 1 under the loop form.
Matrix dual_element(const BDSetting& s, const Matrix& x);
// a (x) b with the setting's spectral symbol renamed to s1 on leg 1 and s2 on leg 2.
Matrix leg_tensor(const BDSetting& s, const Matrix& a, const Matrix& b, const std::string& s1 = "lambda",
                  const std::string& s2 = "mu");
// phi + sum E_{-i} (x) E_i (finite) or the loop r with x = mu / lambda, the
// orientation in which e_0 = lambda E_- is a positive root vector.
Matrix setting_standard_r(const BDSetting& s);

// -sum_i eps^{n m} E_i (x) E_{-tau^m i}, n the height of E_i in Gamma_1.
Matrix x_epsilon_m(const BDSetting& s, const BDTriple& t, int m);
Matrix x_epsilon(const BDSetting& s, const BDTriple& t);
// r + X_eps - X_eps^t; raises ExceptionalCase or InvalidTriple.
Matrix bd_deformed_r(const Matrix& r, const BDSetting& s, const BDTriple& t);

// [1 (x) f_rho + eps^m f_sigma (x) 1, X] + sign eps^m f_sigma (x) (phi + phi^t)(rho)
// over sigma with tau^m sigma = rho.
Matrix x_m_residual(const BDSetting& s, const BDTriple& t, int m, const Matrix& X, int sign = 1);
// The unique X of the form sum c_i E_i (x) E_{-tau^m i} with zero residual for sign;
// raises NoSolution.
Matrix x_m_solver(const BDSetting& s, const BDTriple& t, int m, int sign = 1);

// Affine sl(N) on the traceless basis with form tr: Gamma_1 = {1, ..., N-1}, tau i = i + 1, tau(N-1) = 0.
BDSetting esoteric_setting(int n);
BDTriple esoteric_triple(int n, const Scalar& eps = Scalar::variable("eps"));
// -sum_{i+m+j<=N} e_{i,i+j} (x) e_{i+m+j,i+m} - sum_{i+m+j=N+1} e_{i,i+j} (x) mu^-1 e_{1,i+m}.
Matrix esoteric_x_closed_form(int n, int m, int height);
// e_ij -> lambda^{(j-i)/N} e_ij on both legs, then expressed in xi = (lambda / mu)^{1/N}.
Matrix principal_picture(const Matrix& t, std::size_t n, const std::string& xi = "xi");

// ------------------------------------------------------------ elliptic

enum class Form { Derived, AsPrinted };

// sl(2) on the traceless basis with form tr: r = phi + e21 (x) e12 + x / (1 - x) C, x = mu / lambda.
Matrix elliptic_trig_r();
// X^m = A s3 (x) s3 + B (f1 (x) f-1 + f0 (x) f-0) + C (f1 (x) f-0 + f0 (x) f-1) solving
// the X^m relation for the cyclic tau on affine sl(2).
Matrix elliptic_x_m(const Scalar& eps, int m);
// r + X - X^t with the geometric families summed to n = terms. Derived uses the
// solved X^m; AsPrinted uses the displayed signs and the displayed s3 (x) s3 weight.
Matrix elliptic_r_series(const Scalar& eps, int terms, Form form = Form::Derived);

// Factor F^m of the sl(2) fundamental product in the symmetric frame,
// lambda / mu = exp(2 pi i u). Derived entries come from the recursion for F^m;
// AsPrinted uses a = 1 - eps^{4m-2} for odd m.
Eigen::Matrix4cd elliptic_factor(int m, Complex eps, Complex q, Complex u, Form form = Form::Derived);
// 4 x 4 factor solved from the recursion in the fundamental evaluation rep,
// t standing for eps^m; odd and even m differ.
Matrix solve_elliptic_factor(int parity);
// Standard sl(2) fundamental R in the symmetric frame.
Eigen::Matrix4cd trig_R(Complex q, Complex u);
// (F^t)^{-1} R F with F = F^1 ... F^M; raises EpsilonOutOfDisc for |eps| >= 1, NonConvergent
// when F^t is singular.
Eigen::Matrix4cd elliptic_R_product(Complex eps, Complex q, Complex u, int M, Form form = Form::Derived);

struct Jacobi {
    Complex sn, cn, dn;
};
// Complete elliptic integral K by the arithmetic-geometric mean.
Complex complete_K(Complex k);
// Nome exp(-pi K' / K).
Complex nome_of(Complex k);
// Jacobi functions from theta series in the nome; raises ConvergenceFailure.
Jacobi jacobi_nome(Complex u, Complex nome);
Jacobi jacobi_elliptic(Complex u, Complex k);
// (a + d)/(a - d), (b + c)/(a - d), (b - c)/(a - d).
std::array<Complex, 3> elliptic_ratios(const Eigen::Matrix4cd& R);
// dn, cn, sn ratios at w = K(nome) u shifted by +-rho.
std::array<Complex, 3> jacobi_ratios(Complex u, Complex nome, Complex rho);

struct EllipticFit {
    Complex nome, rho;
    double fit_residual = 0;
    std::vector<double> fit_points, check_points, deviations;
    double max_deviation = 0;
};
// Fits (nome, rho) at fit_points by Gauss-Newton from a grid of starts, then
// reports deviations at check_points; threads caps the parallel checks.
EllipticFit fit_elliptic(Complex eps, Complex q, int M, const std::vector<double>& fit_points,
                         const std::vector<double>& check_points, Form form = Form::Derived, int threads = 1);

// ------------------------------------------------------------ output

// {"legs": 2, "dim": n, "entries": [[i, j, k, l, "coefficient"], ...]}.
nlohmann::json to_json(const Matrix& two_leg, std::size_t n);
nlohmann::json to_json(const LoopTensor3& t);

}  // namespace ybforge::classical
