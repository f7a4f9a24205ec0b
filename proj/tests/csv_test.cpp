#include <doctest.h>

#include <random>
#include <sstream>

#include "fss/csv.hpp"
#include "fss/error.hpp"

using namespace fss;

TEST_CASE("split_line handles quotes and empty fields") {
  auto f = csv::split_line(R"(a,"b,c",,"say ""hi""")");
  REQUIRE(f.size() == 4);
  CHECK(f[0] == "a");
  CHECK(f[1] == "b,c");
  CHECK(f[2].empty());
  CHECK(f[3] == "say \"hi\"");
}

TEST_CASE("write_row quotes only when needed and re-parses identically") {
  std::vector<std::string> fields{"plain", "with,comma", "with\"quote", ""};
  std::ostringstream out;
  csv::write_row(out, fields);
  std::string line = out.str();
  line.pop_back();
  CHECK(csv::split_line(line) == fields);
}

TEST_CASE("parse reports file, line and column for bad cells") {
  auto table = csv::parse("id,value\nx,1.5\ny,abc\n", "demo.csv");
  const auto col = table.column("value");
  CHECK(table.real(table.rows()[0], col) == doctest::Approx(1.5));
  try {
    table.real(table.rows()[1], col);
    FAIL("expected an error");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("demo.csv:3:2 (value)") != std::string::npos);
  }
  CHECK_THROWS_AS(table.column("missing"), InputError);
}

TEST_CASE("parse skips blank lines, strips CR and BOM") {
  auto table = csv::parse("\xEF\xBB\xBFid,v\r\n\r\na,1\r\n", "x.csv");
  CHECK(table.header() == std::vector<std::string>{"id", "v"});
  REQUIRE(table.rows().size() == 1);
  CHECK(table.rows()[0].line == 3);
}

TEST_CASE("format_number round-trips doubles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-300, 300);
  for (int i = 0; i < 2000; ++i) {
    double v = std::ldexp(mantissa(rng), exponent(rng));
    auto text = csv::format_number(v);
    CHECK(std::stod(text) == v);
  }
  CHECK(csv::format_number(0.0) == "0");
  CHECK(csv::format_number(60000.0) == "60000");
  CHECK(csv::format_number(4.5) == "4.5");
}
