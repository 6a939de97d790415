#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "corkforge/common.hpp"
#include "corkforge/sha256.hpp"
#include "corkforge/smith.hpp"

using namespace corkforge;

TEST_CASE("sha256 known vectors", "[core]") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("The quick brown fox jumps over the lazy dog") ==
        "d7a8fbb307d7809469ca9abcb0082e4f8d5651e46d3cdb762d02d0bf37c9e592");
  CHECK(sha256_hex(std::string(1000000, 'a')) ==
        "cdc76e5c9914fb9281a1c7e284d73e67f1809a48a497200e046d39ccc7112cd0");
}

TEST_CASE("checked arithmetic traps", "[core]") {
  CHECK(add_ck(2, 3) == 5);
  CHECK_THROWS_AS(add_ck(INT64_MAX, 1), Error);
  CHECK_THROWS_AS(mul_ck(INT64_MAX / 2, 3), Error);
  CHECK_THROWS_AS(abs_ck(INT64_MIN), Error);
}

static IMat mat(int r, int c, std::vector<i64> v) {
  IMat m(r, c);
  m.a = std::move(v);
  return m;
}

TEST_CASE("smith diagonal, hand-checked", "[core]") {
  CHECK(smith_diagonal(mat(2, 2, {1, 0, 0, 1})) == std::vector<i64>{1, 1});
  CHECK(smith_diagonal(mat(2, 2, {2, 4, 6, 8})) == std::vector<i64>{2, 4});
  CHECK(smith_diagonal(mat(2, 2, {2, 1, 1, 0})) == std::vector<i64>{1, 1});
  CHECK(smith_diagonal(mat(2, 2, {0, 1, 1, 0})) == std::vector<i64>{1, 1});
  CHECK(smith_diagonal(mat(2, 2, {3, 0, 0, 5})) == std::vector<i64>{1, 15});
  CHECK(smith_diagonal(mat(1, 1, {0})) == std::vector<i64>{0});
  CHECK(smith_diagonal(mat(2, 3, {2, 0, 0, 0, 3, 0})) == std::vector<i64>{1, 6});
  CHECK(smith_diagonal(mat(2, 3, {0, 0, 0, 0, 0, 0})) == std::vector<i64>{0, 0});
}

TEST_CASE("cokernel presentations", "[core]") {
  // one generator, relation 2g = 0
  CHECK(cokernel(mat(1, 1, {2})) == AbelianGroup{{2}, 0});
  // surgery matrix of the golden slide example
  CHECK(cokernel(mat(2, 2, {2, 1, 1, 0})).trivial());
  // Z^3 with relations 2a = 0, 3b = 0  ->  Z + Z/6
  auto g = cokernel(mat(2, 3, {2, 0, 0, 0, 3, 0}));
  CHECK(g.rank == 1);
  CHECK(g.torsion == std::vector<i64>{6});
  CHECK(g.str() == "Z + Z/6");
  CHECK(cokernel(mat(2, 3, {0, 0, 0, 0, 0, 0})).str() == "Z^3");
  CHECK(AbelianGroup{}.str() == "0");
}

TEST_CASE("bareiss determinant", "[core]") {
  CHECK(det_bareiss(mat(2, 2, {2, 1, 1, 0})) == -1);
  CHECK(det_bareiss(mat(2, 2, {0, 1, 1, 0})) == -1);
  CHECK(det_bareiss(mat(3, 3, {2, 0, 0, 0, 3, 0, 0, 0, 5})) == 30);
  CHECK(det_bareiss(mat(3, 3, {0, 1, 2, 0, 0, 3, 0, 0, 7})) == 0);
  CHECK(det_bareiss(mat(0, 0, {})) == 1);
  CHECK_THROWS_AS(det_bareiss(mat(1, 2, {1, 2})), Error);
}

TEST_CASE("smith diagonal is a unimodular invariant", "[core]") {
  std::mt19937_64 rng(20260822);
  std::uniform_int_distribution<int> dim(1, 5), entry(-9, 9), pick(0, 99);
  for (int iter = 0; iter < 200; ++iter) {
    int r = dim(rng), c = dim(rng);
    IMat m(r, c);
    for (auto& v : m.a) v = entry(rng);
    auto d0 = smith_diagonal(m);

    // divisibility chain
    for (size_t i = 0; i + 1 < d0.size(); ++i) {
      if (d0[i] == 0) CHECK(d0[i + 1] == 0);
      else CHECK(d0[i + 1] % d0[i] == 0);
    }

    // random unimodular row/col ops must not change it
    IMat w = m;
    for (int k = 0; k < 12; ++k) {
      int op = pick(rng) % 6;
      if (op == 0 && r > 1) {
        int i = pick(rng) % r, j = pick(rng) % r;
        if (i != j) row_axpy(w, i, j, (pick(rng) % 5) - 2);
      } else if (op == 1 && c > 1) {
        int i = pick(rng) % c, j = pick(rng) % c;
        if (i != j) col_axpy(w, i, j, (pick(rng) % 5) - 2);
      } else if (op == 2 && r > 1) {
        swap_rows(w, pick(rng) % r, pick(rng) % r);
      } else if (op == 3 && c > 1) {
        swap_cols(w, pick(rng) % c, pick(rng) % c);
      } else if (op == 4) {
        int i = pick(rng) % r;
        for (int cc = 0; cc < c; ++cc) w.at(i, cc) = -w.at(i, cc);
      } else {
        int j = pick(rng) % c;
        for (int rr = 0; rr < r; ++rr) w.at(rr, j) = -w.at(rr, j);
      }
    }
    CHECK(smith_diagonal(w) == d0);

    // on square full-rank matrices |det| = product of the diagonal
    if (r == c) {
      i64 det = det_bareiss(m);
      if (det != 0) {
        i64 prod = 1;
        for (i64 d : d0) prod = mul_ck(prod, d);
        CHECK(prod == abs_ck(det));
      }
    }
  }
}
