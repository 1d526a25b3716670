#include <doctest.h>

#include "ybforge/linsolve.hpp"
#include "ybforge/rmatrix.hpp"

using namespace ybforge;
using namespace ybforge::rmatrix;
using freealg::Algebra;
using freealg::rescaled_generator;

namespace {

AlgebraPtr sl2() {
    static AlgebraPtr alg = Algebra::create(cartan::sl2_spec());
    return alg;
}

AlgebraPtr generic2() {
    static AlgebraPtr alg = Algebra::create(cartan::generic_spec(2));
    return alg;
}

AlgebraPtr compatible() {
    static AlgebraPtr alg = Algebra::create(cartan::twist_compatible_sl3());
    return alg;
}

Scalar eps() { return Scalar::variable(kEpsilon); }

TensorElement fpair(const AlgebraPtr& alg, std::size_t sigma, std::size_t rho) {
    return TensorElement::product({rescaled_generator(alg, 1, sigma), rescaled_generator(alg, -1, rho)});
}

Scalar table_value(const Table& t, const Word& neg, const Word& pos) {
    auto it = t.find({neg, pos});
    return it == t.end() ? Scalar() : it->second;
}

}  // namespace

TEST_CASE("linear solver returns the unique solution and reports degenerate systems") {
    using linsolve::Row;
    Scalar q = Scalar::parse("q");
    std::vector<Row> rows{{{{0, Scalar(1)}, {1, q}}, Scalar(1)}, {{{0, q}, {1, Scalar(1)}}, Scalar(0)}};
    auto x = linsolve::solve_unique_checked(rows, 2);
    CHECK(x[0] + q * x[1] == Scalar(1));
    CHECK(q * x[0] + x[1] == Scalar(0));
    CHECK(x[0] == Scalar(1) / (Scalar(1) - q * q));

    std::vector<Row> under{{{{0, Scalar(1)}, {1, Scalar(1)}}, Scalar(1)}};
    CHECK_THROWS_AS(linsolve::solve_unique(under, 2), Error);
    std::vector<Row> bad{{{{0, Scalar(1)}}, Scalar(1)}, {{{0, Scalar(2)}}, Scalar(1)}};
    CHECK_THROWS_AS(linsolve::solve_unique(bad, 1), Error);

    linsolve::Matrix m{{Scalar(1), q}, {q, q * q}};
    auto ns = linsolve::nullspace(m, 2);
    REQUIRE(ns.size() == 1);
    CHECK(ns[0][0] + q * ns[0][1] == Scalar(0));
}

TEST_CASE("first term of R is the sum of e_{-a} (x) e_a") {
    auto R = start_series(generic2());
    CHECK(R.t(1) == t1(generic2()));
    auto again = solve_tn(R, 1);
    CHECK(again.t(1) == t1(generic2()));
}

TEST_CASE("rank one coefficients are q^{n(n-1)/2} / [n]_q!") {
    auto R = solve_standard(sl2(), 4);
    Scalar q = sl2()->spec().exp_pairing(0, 0);
    for (int n = 1; n <= 4; ++n) {
        Word w(static_cast<std::size_t>(n), 0);
        Scalar expected = q.pow(n * (n - 1) / 2) / scalars::q_factorial(q, n);
        CHECK(table_value(R.tables[static_cast<std::size_t>(n) - 1], w, w) == expected);
        CHECK(R.tables[static_cast<std::size_t>(n) - 1].size() == 1);
    }
    CHECK(table_value(R.tables[1], Word{0, 0}, Word{0, 0}) == Scalar::parse("Q/(Q+1)"));
}

TEST_CASE("recursion holds term by term and tables sit on permutations") {
    auto alg = generic2();
    auto R = solve_standard(alg, 3);
    for (int n = 1; n <= 3; ++n)
        for (std::size_t g = 0; g < 2; ++g) CHECK(recursion_residual(R, n, g).is_zero());
    for (auto& t : R.tables)
        for (auto& [w, c] : t) {
            Word a = w.first, b = w.second;
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            CHECK(a == b);
        }
    CHECK(table_value(R.tables[1], Word{0, 1}, Word{1, 0}) == Scalar::parse("-q12/(q12*q21-1)"));
    auto sl3 = Algebra::create(cartan::slN_spec(3));
    auto R3 = solve_standard(sl3, 2);
    CHECK(R3.tables[1].size() == 6);
}

TEST_CASE("sl3 at degree three needs the Serre quotient") {
    auto sl3 = Algebra::create(cartan::slN_spec(3));
    CHECK_THROWS_AS(solve_standard(sl3, 3), Error);
}

TEST_CASE("Yang-Baxter residual of the solved series vanishes") {
    auto R1 = solve_standard(sl2(), 4);
    for (int d = 0; d <= 4; ++d) CHECK(ybe_residual(R1, d).is_zero());
    auto R2 = solve_standard(generic2(), 3);
    for (int d = 0; d <= 3; ++d) CHECK(ybe_residual(R2, d).is_zero());
}

TEST_CASE("perturbed second term breaks the Yang-Baxter relation") {
    auto R = solve_standard(sl2(), 2);
    R.tables[1][{Word{0, 0}, Word{0, 0}}] += Scalar(1);
    CHECK(ybe_residual(R, 1).is_zero());
    CHECK_FALSE(ybe_residual(R, 2).is_zero());
}

TEST_CASE("R intertwines the coproduct with its opposite") {
    auto alg = generic2();
    auto R = solve_standard(alg, 3);
    for (std::size_t a = 0; a < 2; ++a)
        for (int s : {-1, 1}) CHECK(intertwining_residual(R, AlgebraElement::generator(alg, s, a), 3).is_zero());
    CHECK(intertwining_residual(R, AlgebraElement::cartan(alg, alg->A(0)), 3).is_zero());
}

TEST_CASE("prefactor conjugation moves weights across legs") {
    auto alg = sl2();
    auto x = TensorElement::product({AlgebraElement::generator(alg, -1, 0), AlgebraElement::generator(alg, 1, 0)});
    auto y = TensorElement::product({AlgebraElement::generator(alg, -1, 0) * AlgebraElement::cartan(alg, alg->B(0).inverse()),
                                     AlgebraElement::cartan(alg, alg->A(0)) * AlgebraElement::generator(alg, 1, 0)});
    CHECK(conjugate_prefactor(x) == y);
}

TEST_CASE("first-order deformation has the wedge leading term") {
    auto alg = compatible();
    RSeries bare{alg, {}};
    auto r1 = first_order_deformation(bare, 0, 1);
    auto lead = conjugate_prefactor(TensorElement::product({rescaled_generator(alg, -1, 1), rescaled_generator(alg, 1, 0)})) -
                fpair(alg, 0, 1);
    CHECK(r1 == lead);
    CHECK_THROWS_AS(first_order_deformation(bare, 0, 0), Error);
    CHECK_THROWS_AS(elementary_twist(alg, 1, 0, 1), Error);
}

TEST_CASE("elementary twist series") {
    auto alg = compatible();
    Scalar q = alg->spec().exp_pairing(0, 1);
    CHECK(q == Scalar::parse("Q^-2"));
    auto A = fpair(alg, 0, 1);
    auto one = TensorElement::one(alg, 2);
    CHECK(elementary_twist(alg, 0, 1, 1) == one - eps() * A);
    CHECK(elementary_twist(alg, 0, 1, 2) == one - eps() * A + (eps() * eps() / (Scalar(1) + q)) * (A * A));
}

TEST_CASE("series inverse and truncation") {
    auto alg = compatible();
    auto F = elementary_twist(alg, 0, 1, 3);
    auto one = TensorElement::one(alg, 2);
    CHECK(eps_truncate(invert(F, 3) * F, 3) == one);
    CHECK(eps_coefficient(F, 1) == -fpair(alg, 0, 1));
    CHECK_THROWS_AS(invert(Scalar(2) * one, 2), Error);
    CHECK(apply_twist(solve_standard(alg, 2).body(2), one, 2) == solve_standard(alg, 2).body(2));
}

TEST_CASE("twist equation residual") {
    auto alg = compatible();
    auto one = TensorElement::one(alg, 2);
    CHECK(twist_equation_residual(one, 3).is_zero());
    auto first = one - eps() * fpair(alg, 0, 1);
    CHECK(twist_equation_residual(first, 1).is_zero());
    auto wrong = one + eps() * fpair(alg, 0, 1);
    CHECK(twist_equation_residual(wrong, 1).is_zero());
    CHECK_FALSE(twist_equation_residual(wrong, 2).is_zero());
}

TEST_CASE("epsilon-linear part of the twisted R is the first-order deformation") {
    auto alg = compatible();
    auto R = solve_standard(alg, 2);
    auto F = elementary_twist(alg, 0, 1, 1);
    CHECK(eps_coefficient(apply_twist(R.body(2), F, 1), 1) == first_order_deformation(R, 0, 1));
}

TEST_CASE("solved twist recursion, cross relation and head term") {
    auto alg = compatible();
    TwistData data;
    data.tau[0] = 1;
    auto T = solve_twist(alg, data, 3, 1);
    CHECK(T.factor_term(1, 0) == TensorElement::one(alg, 2));
    CHECK(T.factor_term(1, 1) == -fpair(alg, 0, 1));
    for (int n = 1; n <= 3; ++n) {
        CHECK(twist_recursion_residual(T, 1, n, 0).is_zero());
        CHECK(twist_cross_residual(T, 1, n, 0).is_zero());
    }
    // Under the given coproduct the recursion produces the q^{-1}-exponential.
    Scalar qi = alg->spec().exp_pairing(0, 1).inverse();
    for (int n = 1; n <= 3; ++n) {
        Word w(static_cast<std::size_t>(n), 0);
        Scalar sign = n % 2 ? Scalar(-1) : Scalar(1);
        CHECK(table_value(T.tables[0][static_cast<std::size_t>(n) - 1], w, w) == sign / scalars::q_factorial(qi, n));
    }
}

TEST_CASE("solved twist satisfies the twist equation and twists R into a Yang-Baxter solution") {
    auto alg = compatible();
    TwistData data;
    data.tau[0] = 1;
    auto F = solve_twist(alg, data, 3, 1).twist(3);
    CHECK(twist_equation_residual(F, 3).is_zero());
    auto X = apply_twist(solve_standard(alg, 2).body(2), F, 2);
    for (int d = 0; d <= 2; ++d) CHECK(ybe_residual_body(X, d, 2).is_zero());
}

TEST_CASE("twist data validation") {
    auto alg = compatible();
    TwistData bad;
    bad.tau[1] = 0;
    CHECK_THROWS_AS(solve_twist(alg, bad, 1, 1), Error);
    TwistData twice;
    twice.tau[0] = 1;
    twice.tau[2] = 1;
    CHECK_THROWS_AS(validate_tau(alg, twice), Error);
    TwistData ok;
    ok.tau[0] = 1;
    CHECK(tau_power(ok, 0, 1) == 1u);
    CHECK_FALSE(tau_power(ok, 0, 2).has_value());
    CHECK(tau_power(ok, 0, 0) == 0u);
}

TEST_CASE("twisted coproduct is coassociative and reduces to the coproduct for F = 1") {
    auto alg = compatible();
    TwistData data;
    data.tau[0] = 1;
    const int order = 2;
    auto F = solve_twist(alg, data, order, 1).twist(order);
    auto one = TensorElement::one(alg, 2);
    for (std::size_t a = 0; a < alg->rank_N(); ++a)
        for (int s : {-1, 1}) {
            auto x = AlgebraElement::generator(alg, s, a);
            CHECK(twisted_coproduct(x, one, order) == freealg::coproduct(x));
            auto d = twisted_coproduct(x, F, order);
            auto left = twisted_coproduct_leg(d, 0, F, order);
            auto right = twisted_coproduct_leg(d, 1, F, order);
            CHECK(left == right);
        }
}

TEST_CASE("twists compose through the twisted coproduct") {
    auto alg = compatible();
    TwistData data;
    data.tau[0] = 1;
    const int order = 2;
    auto F = solve_twist(alg, data, order, 1).twist(order);
    auto Fi = invert(F, order);
    CHECK(twist_equation_residual(Fi, order, &F).is_zero());
    CHECK(twist_equation_residual(eps_truncate(F * Fi, order), order).is_zero());
    auto wrong = TensorElement::one(alg, 2) + eps() * fpair(alg, 0, 1);
    CHECK(twist_equation_residual(wrong, order, &F).is_zero() == twist_equation_residual(eps_truncate(F * wrong, order), order).is_zero());
}

TEST_CASE("series serialize with root labels") {
    auto R = solve_standard(sl2(), 2);
    auto j = to_json(R);
    CHECK(j["n_max"] == 2);
    CHECK(j["t"][1]["entries"][0]["neg"] == nlohmann::json::array({1, 1}));
    CHECK(j["t"][1]["entries"][0]["coeff"] == "Q/(Q + 1)");
}
