#include "ybforge/linsolve.hpp"

#include <random>
#include <set>

#include "ybforge/error.hpp"

namespace ybforge::linsolve {

namespace {

std::size_t weight_of(const Scalar& s) { return s.num().size() + s.den().size(); }

void axpy(Row& target, const Row& src, const Scalar& factor) {
    for (auto& [c, v] : src.coeffs) {
        auto [it, inserted] = target.coeffs.emplace(c, Scalar());
        it->second -= factor * v;
        if (it->second.is_zero()) target.coeffs.erase(it);
    }
    target.rhs -= factor * src.rhs;
}

std::vector<Scalar> back_substitute(const Reduced& red, std::size_t unknowns) {
    std::vector<Scalar> x(unknowns);
    for (std::size_t i = red.pivots.size(); i-- > 0;) {
        const Row& r = red.pivots[i];
        std::size_t p = red.pivot_cols[i];
        Scalar acc = r.rhs;
        for (auto& [c, v] : r.coeffs)
            if (c != p) acc -= v * x[c];
        x[p] = acc / r.coeffs.at(p);
    }
    return x;
}

}  // namespace

Reduced eliminate(std::vector<Row> rows) {
    Reduced out;
    std::vector<bool> used(rows.size(), false);
    std::set<std::size_t> columns;
    for (auto& r : rows)
        for (auto& [c, v] : r.coeffs) columns.insert(c);
    for (std::size_t col : columns) {
        std::size_t best = rows.size();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            auto it = rows[i].coeffs.find(col);
            if (it == rows[i].coeffs.end()) continue;
            if (best == rows.size() || weight_of(it->second) < weight_of(rows[best].coeffs.at(col))) best = i;
        }
        if (best == rows.size()) continue;
        used[best] = true;
        const Row& piv = rows[best];
        const Scalar& pv = piv.coeffs.at(col);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            auto it = rows[i].coeffs.find(col);
            if (it == rows[i].coeffs.end()) continue;
            Scalar factor = it->second / pv;
            axpy(rows[i], piv, factor);
        }
        out.pivots.push_back(piv);
        out.pivot_cols.push_back(col);
    }
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!used[i] && rows[i].coeffs.empty() && !rows[i].rhs.is_zero()) out.consistent = false;
    return out;
}

std::vector<Scalar> solve_unique(const std::vector<Row>& rows, std::size_t unknowns) {
    Reduced red = eliminate(rows);
    if (!red.consistent) fail(ErrorKind::InconsistentSystem, "linear system has no solution");
    if (red.pivots.size() < unknowns) fail(ErrorKind::UnderdeterminedSystem, "linear system has a non-trivial solution space");
    return back_substitute(red, unknowns);
}

std::vector<Scalar> solve_particular(const std::vector<Row>& rows, std::size_t unknowns) {
    Reduced red = eliminate(rows);
    if (!red.consistent) fail(ErrorKind::InconsistentSystem, "linear system has no solution");
    return back_substitute(red, unknowns);
}

std::vector<Scalar> solve_unique_checked(const std::vector<Row>& rows, std::size_t unknowns, unsigned seed) {
    std::vector<Scalar> x = solve_unique(rows, unknowns);
    std::set<scalars::Var> vars;
    for (auto& r : rows) {
        for (auto& [c, v] : r.coeffs)
            for (auto var : v.variables()) vars.insert(var);
        for (auto var : r.rhs.variables()) vars.insert(var);
    }
    if (vars.empty()) return x;
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-40, 40), den(1, 13);
    for (int attempt = 0; attempt < 5; ++attempt) {
        std::map<scalars::Var, Scalar> point;
        for (auto v : vars) {
            int n = num(rng);
            point[v] = Scalar(mpq_class(n == 0 ? 7 : n, den(rng)));
        }
        std::vector<Row> special;
        std::vector<Scalar> expected;
        try {
            for (auto& r : rows) {
                Row s;
                for (auto& [c, v] : r.coeffs) {
                    Scalar w = v.substitute(point);
                    if (!w.is_zero()) s.coeffs.emplace(c, w);
                }
                s.rhs = r.rhs.substitute(point);
                special.push_back(std::move(s));
            }
            for (auto& v : x) expected.push_back(v.substitute(point));
        } catch (const Error&) {
            continue;
        }
        std::vector<Scalar> y;
        try {
            y = solve_unique(special, unknowns);
        } catch (const Error&) {
            continue;
        }
        if (y != expected) fail(ErrorKind::InconsistentSystem, "symbolic solution disagrees with a specialized solve");
        return x;
    }
    return x;
}

std::vector<std::vector<Scalar>> nullspace(const Matrix& m, std::size_t cols) {
    std::vector<Row> rows;
    for (auto& r : m) {
        Row row;
        for (std::size_t j = 0; j < r.size(); ++j)
            if (!r[j].is_zero()) row.coeffs.emplace(j, r[j]);
        if (!row.coeffs.empty()) rows.push_back(std::move(row));
    }
    Reduced red = eliminate(std::move(rows));
    std::vector<bool> is_pivot(cols, false);
    for (auto c : red.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Scalar>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Scalar> x(cols);
        x[f] = Scalar(1);
        for (std::size_t i = red.pivots.size(); i-- > 0;) {
            const Row& r = red.pivots[i];
            std::size_t p = red.pivot_cols[i];
            Scalar acc;
            for (auto& [c, v] : r.coeffs)
                if (c != p) acc -= v * x[c];
            x[p] = acc / r.coeffs.at(p);
        }
        basis.push_back(std::move(x));
    }
    return basis;
}

}  // namespace ybforge::linsolve
