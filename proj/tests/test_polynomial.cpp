#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace qradon;
using testsupport::Rng;

namespace {

Polynomial poly(std::vector<long long> ascending) {
  std::vector<BigInt> coeffs;
  for (long long c : ascending) coeffs.emplace_back(c);
  return Polynomial::from_coeffs(std::move(coeffs));
}

}  // namespace

TEST_CASE("polynomial addition") {
  const Polynomial b_plus_1 = poly({1, 1});
  CHECK(b_plus_1 + Polynomial() == b_plus_1);
  CHECK(b_plus_1 + poly({1, -1, 1}) == poly({2, 0, 1}));
  // q_{K_3} + q_{K_1}, added coefficient by coefficient by hand.
  CHECK(poly({1, 2, -1, 1}) + Polynomial(1) == poly({2, 2, -1, 1}));
}

TEST_CASE("polynomial multiplication") {
  const Polynomial b_plus_1 = poly({1, 1});
  CHECK(b_plus_1 * Polynomial(1) == b_plus_1);
  CHECK(b_plus_1 * poly({1, -1, 1}) == poly({1, 0, 0, 1}));  // b^3 + 1
  CHECK(poly({1, -1, 1}) * poly({0, 1}) == poly({0, 1, -1, 1}));
}

TEST_CASE("polynomial evaluation") {
  CHECK(poly({1, 2, -1, 1}).eval(1) == 3);
  CHECK(poly({1, 4, -6, 10, -9, 7, -3, 1}).eval(1) == 5);
  CHECK(Polynomial().eval(7) == 0);
  CHECK_THROWS_AS(poly({1, 1}).eval(-1), InputError);
}

TEST_CASE("canonical text rendering") {
  CHECK(poly({3, -3, 9, -10, 10, -5, 2}).text() == "2b^6 - 5b^5 + 10b^4 - 10b^3 + 9b^2 - 3b + 3");
  CHECK(poly({1, 2, -1, 1}).text() == "b^3 - b^2 + 2b + 1");
  CHECK(poly({1, 1}).text() == "b + 1");
  CHECK(Polynomial().text() == "0");
  CHECK(Polynomial(7).text() == "7");
  CHECK(poly({3, 0, -1}).text() == "-b^2 + 3");
  CHECK(poly({0, -1}).text() == "-b");
}

TEST_CASE("normalization never exposes a zero leading coefficient") {
  CHECK(poly({1, 2, 0, 0}).degree() == 1);
  CHECK((poly({0, 1}) - poly({0, 1})).is_zero());
}

TEST_CASE("ring laws on random triples") {
  Rng rng(1001);
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = testsupport::random_polynomial(rng);
    const Polynomial q = testsupport::random_polynomial(rng);
    const Polynomial r = testsupport::random_polynomial(rng);
    CHECK(p + q == q + p);
    CHECK(p * q == q * p);
    CHECK((p + q) + r == p + (q + r));
    CHECK((p * q) * r == p * (q * r));
    CHECK(p * (q + r) == p * q + p * r);
    if (p.degree() >= 0) CHECK(p.coeff(static_cast<std::size_t>(p.degree())) != 0);
  }
}

TEST_CASE("evaluation is a ring homomorphism") {
  Rng rng(1002);
  for (int i = 0; i < 200; ++i) {
    const Polynomial p = testsupport::random_polynomial(rng);
    const Polynomial q = testsupport::random_polynomial(rng);
    const BigInt b(testsupport::rand_int(rng, 0, 50));
    CHECK((p * q).eval(b) == p.eval(b) * q.eval(b));
    CHECK((p + q).eval(b) == p.eval(b) + q.eval(b));
  }
}

TEST_CASE("polynomial JSON round trip") {
  const Polynomial p = poly({3, -3, 9, -10, 10, -5, 2});
  CHECK(polynomial_from_json(polynomial_to_json(p)) == p);
  CHECK(polynomial_from_json(polynomial_to_json(Polynomial())) == Polynomial());
  // Coefficients outside 64 bits travel as decimal strings.
  Polynomial big = Polynomial::from_coeffs({BigInt("123456789012345678901234567890")});
  CHECK(polynomial_from_json(polynomial_to_json(big)) == big);
}
