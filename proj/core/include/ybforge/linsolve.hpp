#pragma once

#include <map>
#include <vector>

#include "ybforge/scalars.hpp"

namespace ybforge::linsolve {

using scalars::Scalar;

struct Row {
    std::map<std::size_t, Scalar> coeffs;
    Scalar rhs;
};

struct Reduced {
    std::vector<Row> pivots;  // pivot rows with a leading unknown
    std::vector<std::size_t> pivot_cols;
    bool consistent = true;
};

// Gaussian elimination over the rational-function field.
Reduced eliminate(std::vector<Row> rows);

// Unique solution of the system; raises InconsistentSystem or
// UnderdeterminedSystem.  Unknowns not mentioned in any row count as free.
std::vector<Scalar> solve_unique(const std::vector<Row>& rows, std::size_t unknowns);

// Same, followed by a solve at a random rational point of the parameters
// compared against the symbolic solution specialized to that point.
std::vector<Scalar> solve_unique_checked(const std::vector<Row>& rows, std::size_t unknowns, unsigned seed = 12345);

// One solution with all free unknowns set to zero; raises InconsistentSystem.
std::vector<Scalar> solve_particular(const std::vector<Row>& rows, std::size_t unknowns);

using Matrix = std::vector<std::vector<Scalar>>;

// Basis of {x : m x = 0}.
std::vector<std::vector<Scalar>> nullspace(const Matrix& m, std::size_t cols);

}  // namespace ybforge::linsolve
