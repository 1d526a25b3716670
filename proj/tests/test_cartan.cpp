#include <doctest.h>

#include <algorithm>
#include <functional>

#include "ybforge/cartan.hpp"

using namespace ybforge;
using namespace ybforge::cartan;
using scalars::Scalar;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("generalized Cartan matrices") {
    CHECK(generalized_cartan_matrix(sl2_spec("t")).A == IntMatrix{{2}});
    auto g3 = generalized_cartan_matrix(slN_spec(3));
    CHECK(g3.A == IntMatrix{{2, -1}, {-1, 2}});
    CHECK(g3.symmetrizable);
    auto a1 = affine_slN(2);
    CHECK(generalized_cartan_matrix(a1.extended).A == IntMatrix{{2, -2}, {-2, 2}});
    CHECK(generalized_cartan_matrix(twist_compatible_sl3()).A == IntMatrix{{2, -1}, {-1, 2}});
    CHECK(kind_of([] { generalized_cartan_matrix(generic_spec(2)); }) == ErrorKind::NonIntegerRatio);
}

TEST_CASE("classification") {
    CHECK(classify({{2, -1}, {-1, 2}}) == CartanType::FiniteType);
    CHECK(classify({{2, -2}, {-2, 2}}) == CartanType::AffineType);
    CHECK(classify({{2, -3}, {-3, 2}}) == CartanType::Other);
    CHECK(classify({{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}}) == CartanType::AffineType);
    CHECK(classify({{2, -1, 0}, {-4, 2, -1}, {0, -1, 2}}) == CartanType::Other);
    CHECK(classify({{2, -1}, {-3, 2}}) == CartanType::FiniteType);
    CHECK(kind_of([] { classify({{2, 1}, {1, 2}}); }) == ErrorKind::MalformedGCM);
    CHECK(kind_of([] { classify({{3}}); }) == ErrorKind::MalformedGCM);
}

TEST_CASE("classification is invariant under permutations of the roots") {
    IntMatrix A{{2, -1, 0, 0}, {-1, 2, -1, 0}, {0, -2, 2, -1}, {0, 0, -1, 2}};
    std::vector<std::size_t> p{0, 1, 2, 3};
    CartanType t = classify(A);
    do {
        IntMatrix B(4, std::vector<long>(4));
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) B[i][j] = A[p[i]][p[j]];
        CHECK(classify(B) == t);
    } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("serre coefficients") {
    auto spec = slN_spec(3);
    auto s = serre_coefficients(spec, 0, 1);
    Scalar x = spec.exp_pairing(0, 1), q = s.q;
    REQUIRE(s.k == 2);
    CHECK(s.Q[0] == Scalar(1));
    CHECK(s.Q[1] == -x * (Scalar(1) + q));
    CHECK(s.Q[2] == x * x * q);
    CHECK(serre_exponent(spec, 0, 1, s.k).is_zero());
    auto a1 = affine_slN(2).extended;
    auto s2 = serre_coefficients(a1, 0, 1);
    CHECK(s2.k == 3);
    CHECK(s2.Q[3] == -a1.exp_pairing(0, 1).pow(3) * s2.q.pow(3));
    CHECK(serre_exponent(a1, 0, 1, 3).is_zero());
    CHECK(kind_of([&] { serre_coefficients(generic_spec(2), 0, 1); }) == ErrorKind::NoIntegerK);
    CHECK(kind_of([&] { serre_coefficients(spec, 0, 0); }) == ErrorKind::NoIntegerK);
    // sl(2) x sl(2): orthogonal roots give k = 1.
    CartanSpec orth = slN_spec(2);
    orth.cartan_labels = {"1", "2", "3", "4"};
    orth.root_labels = {1, 2};
    orth.phi.assign(4, std::vector<Scalar>(4));
    orth.H.assign(4, std::vector<Scalar>(2));
    for (int a = 0; a < 4; ++a) orth.phi[a][a] = Scalar::variable("log_Q");
    orth.H[0][0] = 1;
    orth.H[1][0] = -1;
    orth.H[2][1] = 1;
    orth.H[3][1] = -1;
    auto s1 = serre_coefficients(orth, 0, 1);
    CHECK(s1.k == 1);
    CHECK(s1.Q[1] == -orth.exp_pairing(0, 1));
}

TEST_CASE("q-Pascal recurrence through serre data") {
    Scalar q = Scalar::variable("q");
    for (int k = 2; k <= 6; ++k)
        for (int m = 1; m < k; ++m)
            CHECK(scalars::q_binomial(q, k, m) == q.pow(m) * scalars::q_binomial(q, k - 1, m) + scalars::q_binomial(q, k - 1, m - 1));
}

TEST_CASE("affine extensions") {
    auto a1 = affine_slN(2);
    CHECK(classify(generalized_cartan_matrix(a1.extended).A) == CartanType::AffineType);
    CHECK(a1.extended.root_labels == std::vector<int>{0, 1});
    CHECK(a1.extended.cartan_labels.back() == "d");
    CHECK(a1.extended.phi[a1.c_index][a1.d_index] == Scalar(mpq_class(1, 2)));
    for (std::size_t b = 0; b < a1.extended.rank_N(); ++b) CHECK(a1.extended.H[a1.c_index][b].is_zero());
    auto a2 = affine_slN(3);
    CHECK(generalized_cartan_matrix(a2.extended).A == IntMatrix{{2, -1, -1}, {-1, 2, -1}, {-1, -1, 2}});
    CHECK(kind_of([] { affine_extend(slN_spec(2), Scalar(mpq_class(1, 2)), {Scalar(1), Scalar(-1)}); }) == ErrorKind::NotAffine);
}

TEST_CASE("spec json round trip and relations") {
    auto spec = slN_spec(3);
    auto j = spec_to_json(spec);
    auto back = spec_from_json(j);
    CHECK(back.phi == spec.phi);
    CHECK(back.H == spec.H);
    nlohmann::json r = {{"rank_M", 1}, {"rank_N", 1}, {"phi", {{"2*s"}}}, {"H", {{"1"}}},
                        {"relations", {{{"symbol", "s"}, {"value", "log_Q"}}}}};
    auto s = spec_from_json(r);
    CHECK(s.exp_pairing(0, 0) == Scalar::parse("Q^2"));
    CHECK(kind_of([] { spec_from_json(nlohmann::json{{"rank_M", 1}}); }) == ErrorKind::InvalidSpec);
    CHECK(kind_of([] { exp_linear(Scalar::parse("log_Q/2")); }) == ErrorKind::NonIntegralExponent);
    CHECK(exp_linear(Scalar::parse("t - 2*log_Q")) == Scalar::parse("exp_t/Q^2"));
}

TEST_CASE("twist-compatible sl(3) pair") {
    auto spec = twist_compatible_sl3();
    auto l = spec.left_form(0), r = spec.right_form(1);
    for (std::size_t b = 0; b < 3; ++b) CHECK((l[b] + r[b]).is_zero());
}
