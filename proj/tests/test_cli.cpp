#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace ybforge;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string spec(const char* name) { return std::string(YBFORGE_SPEC_DIR) + "/" + name; }

}  // namespace

TEST_CASE("classify reports the affine type") {
    auto r = run({"classify", "--spec", spec("a1affine.json")});
    REQUIRE(r.code == cli::kSuccess);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["schema"] == "ybforge/1");
    CHECK(j["type"] == "AffineType");
    CHECK(nlohmann::json::parse(run({"classify", "--spec", spec("sl3.json")}).out)["type"] == "FiniteType");
}

TEST_CASE("rmatrix verifies the Yang-Baxter residual") {
    auto r = run({"rmatrix", "--spec", spec("sl2.json"), "--order", "3", "--verify-ybe"});
    REQUIRE(r.code == cli::kSuccess);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["ybe"].size() == 4);
    for (auto& d : j["ybe"]) CHECK(d["zero"] == true);
}

TEST_CASE("rmatrix falls back to the fundamental when the Serre quotient is needed") {
    auto r = run({"rmatrix", "--spec", spec("sl3.json"), "--order", "3", "--verify-ybe"});
    REQUIRE(r.code == cli::kSuccess);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j["fallback"]["method"] == "rep-solve");
    CHECK(j["rep"]["ybe_zero"] == true);
}

TEST_CASE("exit code contract") {
    CHECK(run({"classify", "--spec", "missing.json"}).code == cli::kInputError);
    CHECK(run({"rmatrix", "--spec", spec("sl2.json"), "--order", "0"}).code == cli::kInputError);
    CHECK(run({"frobnicate"}).code == cli::kInputError);
    CHECK(run({"serre", "--spec", spec("sl3.json"), "--format", "csv"}).code == cli::kInputError);
    CHECK(run({"twist", "--spec", spec("sl3_twist.json"), "--tau", "1:7"}).code == cli::kInputError);
    CHECK(run({"elliptic", "--eps", "1.2", "--factors", "3"}).code == cli::kInputError);
    // Synthetic verification failures: a truncated series and a tolerance below round-off.
    CHECK(run({"cybe", "--algebra", "elliptic", "--order", "2"}).code == cli::kVerificationFailure);
    CHECK(run({"elliptic", "--factors", "12", "--check-jacobi", "--tol", "1e-30"}).code == cli::kVerificationFailure);
    CHECK(run({"twist", "--spec", spec("sl3_twist.json"), "--order", "2", "--elementary", "--verify-ybe"}).code ==
          cli::kVerificationFailure);
    CHECK(run({"twist", "--spec", spec("sl3_twist.json"), "--order", "2", "--verify-ybe"}).code == cli::kSuccess);
    CHECK(run({"--help"}).code == cli::kSuccess);
}

TEST_CASE("reports are deterministic") {
    std::vector<std::string> args = {"bd-deform", "--n", "3"};
    CHECK(run(args).out == run(args).out);
    std::vector<std::string> el = {"elliptic", "--factors", "20", "--check-jacobi", "--tol", "1e-6"};
    auto a = run(el);
    CHECK(a.code == cli::kSuccess);
    CHECK(a.out == run(el).out);
}

TEST_CASE("csv output") {
    auto r = run({"rep-solve", "--spec", spec("sl2.json"), "--format", "csv", "--q", "2"});
    REQUIRE(r.code == cli::kSuccess);
    CHECK(r.out.substr(0, 8) == "1,0,0,0\n");
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
}
