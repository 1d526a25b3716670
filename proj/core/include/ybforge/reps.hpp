#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ybforge/rmatrix.hpp"

namespace ybforge::reps {

using freealg::AlgebraElement;
using freealg::AlgebraPtr;
using freealg::TensorElement;
using scalars::Complex;
using scalars::Scalar;

// Dense matrix over the rational-function field, row-major.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    static Matrix identity(std::size_t n);
    static Matrix unit(std::size_t rows, std::size_t cols, std::size_t i, std::size_t j, const Scalar& c = Scalar(1));
    static Matrix diagonal(const std::vector<Scalar>& d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator*(const Matrix& o) const;
    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const;
    std::size_t nonzeros() const;
    Matrix transpose() const;
    Matrix map(const std::function<Scalar(const Scalar&)>& f) const;
    Matrix substitute(const std::map<scalars::Var, Scalar>& values) const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Scalar> data_;
};

Matrix operator*(const Scalar& c, const Matrix& m);
// Leg 1 is the leftmost factor.
Matrix kron(const Matrix& a, const Matrix& b);
// Swap of the two factors of C^a (x) C^b.
Matrix swap_matrix(std::size_t a, std::size_t b);

// Basis vectors are weight vectors: H_a acts diagonally with integer
// eigenvalue weights[v][a]. Labels without an image (d) are marked unrepresented.
struct Representation {
    cartan::CartanSpec spec;
    std::size_t dim = 0;
    std::vector<std::vector<long>> weights;
    std::vector<bool> represented;
    std::vector<Matrix> raising;   // e_alpha
    std::vector<Matrix> lowering;  // e_{-alpha}
    // Highest and lowest root vectors of the finite algebra, when known.
    std::optional<Matrix> highest, lowest;
    // Symbol carried by the affine generators, empty if none.
    std::string spectral;
};

// Images of e^L for a formal exponential of the algebra built on rep.spec.
Matrix cartan_image(const freealg::Algebra& alg, const Representation& rep, const freealg::CartanExp& k);
// e^{phi(alpha, .)} - e^{-phi(., alpha)} as a matrix.
Matrix commutator_target(const freealg::Algebra& alg, const Representation& rep, std::size_t alpha);

// N-dimensional rep of slN_spec(N, symbol): e_i -> E_{i,i+1},
// e_{-i} -> s E_{i+1,i} with s fixed by [e_i, e_{-i}] = e^{phi(i,.)} - e^{-phi(.,i)}.
Representation fundamental_slN(int n, const std::string& symbol = "log_Q");
// Adjoins e_0 -> lambda E_-, e_{-0} -> s lambda^{-1} E_+ on the affine extension;
// c acts as zero, d has no image.
Representation evaluation_rep(const Representation& rep, const std::string& spectral = "lambda",
                              const Scalar& u = Scalar(mpq_class(1, 2)));
// Rep with its spectral symbol renamed.
Representation with_spectral(const Representation& rep, const std::string& spectral);

// Residuals of [H_a, e_{+-alpha}] = +-H_a(alpha) e_{+-alpha} and of
// [e_alpha, e_{-beta}] = delta (e^{phi(alpha,.)} - e^{-phi(.,alpha)}); empty when all hold.
std::vector<std::string> relation_failures(const Representation& rep);

Matrix evaluate(const AlgebraElement& x, const Representation& rep);
// Kronecker evaluation; spectral[leg], if given and non-empty, renames the rep's spectral symbol.
Matrix evaluate(const TensorElement& x, const std::vector<const Representation*>& reps,
                const std::vector<std::string>& spectral = {});
// Image of K0 = exp(phi^{ab} H_a (x) H_b).
Matrix prefactor_image(const Representation& r1, const Representation& r2);
// Image of K0 (1 + t_1 + ... + t_degree).
Matrix evaluate_R(const rmatrix::RSeries& R, int degree, const Representation& r1, const Representation& r2,
                  const std::vector<std::string>& spectral = {});
// Same for a K0-stripped body.
Matrix evaluate_body_R(const TensorElement& body, const Representation& r1, const Representation& r2,
                       const std::vector<std::string>& spectral = {});

// R12 R13 R23 - R23 R13 R12 for R(x, y) acting on C^d (x) C^d, with the spectral
// symbols of R being names[0], names[1]; the three legs carry names[0], names[1], names[2].
Matrix matrix_ybe_residual(const Matrix& R, std::size_t d, const std::vector<std::string>& names = {});

// R with D_i R = R D'_i for every pair (D_i, D'_i), normalized by R(0, 0) = 1.
// Raises NoSolution or IntertwinerNotUnique.
Matrix solve_intertwiner(const std::vector<std::pair<Matrix, Matrix>>& pairs, std::size_t dim,
                         const std::vector<std::vector<long>>& weights = {});

struct RepSolution {
    Matrix R;
    // Entry (0, 0) of the unnormalized universal image, K0 on the highest-weight product vector.
    Scalar prefactor_entry;
};

// Intertwiner of Delta and Delta' on r1 (x) r2 over all generators.
RepSolution solve_R_in_rep(const Representation& r1, const Representation& r2,
                           const std::vector<std::string>& spectral = {});

nlohmann::json to_json(const Matrix& m);
// Rows of numerically evaluated entries, "re+imj" when complex.
std::string to_csv(const Matrix& m, const std::map<std::string, Complex>& point);

}  // namespace ybforge::reps
