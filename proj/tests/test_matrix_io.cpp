#include <doctest.h>

#include <cstdio>
#include <sstream>

#include "cpfactor/matrix_io.hpp"
#include "cpfactor/rng.hpp"

using namespace cpf;

TEST_CASE("matrix text round trip preserves every bit") {
  Rng rng(17);
  const Mat M = random_gaussian(7, 3, rng);
  std::stringstream s;
  write_matrix(s, M, "round trip");
  const Mat R = read_matrix(s);
  CHECK(R.rows() == 7);
  CHECK(R.cols() == 3);
  CHECK((M - R).norm() == 0.0);
}

TEST_CASE("comments and blank lines are skipped") {
  std::stringstream s("# header\n\n2 2\n# interior\n1 2\n3 4\n");
  const Mat M = read_matrix(s);
  CHECK(M(0, 0) == 1.0);
  CHECK(M(1, 1) == 4.0);
}

TEST_CASE("parse errors carry the offending line number") {
  std::stringstream bad("2 2\n1 2\n3\n");
  try {
    read_matrix(bad, "bad.txt");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("bad.txt") != std::string::npos);
    CHECK(msg.find("3") != std::string::npos);
  }

  std::stringstream garbage("2 2\n1 x\n3 4\n");
  CHECK_THROWS_AS(read_matrix(garbage), ParseError);

  std::stringstream empty("");
  CHECK_THROWS_AS(read_matrix(empty), ParseError);
}

TEST_CASE("file round trip") {
  Rng rng(23);
  const Mat M = random_gaussian(4, 4, rng);
  const std::string path = "io_roundtrip_test.txt";
  write_matrix_file(path, M, "temp fixture");
  const Mat R = read_matrix_file(path);
  CHECK((M - R).norm() == 0.0);
  std::remove(path.c_str());
}

TEST_CASE("missing file reports its path") {
  CHECK_THROWS_AS(read_matrix_file("definitely_not_here.txt"), ParseError);
}
