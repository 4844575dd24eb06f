#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "tbgeom/expr.hpp"

using namespace tbgeom;

namespace {

double ev(const std::string& s, std::vector<double> x = {0.0, 0.0}) { return eval(parse(s, x.size()), x); }

}  // namespace

TEST(Expr, Precedence) {
  EXPECT_DOUBLE_EQ(ev("1+2*3"), 7.0);
  EXPECT_DOUBLE_EQ(ev("(1+2)*3"), 9.0);
  EXPECT_DOUBLE_EQ(ev("8/4/2"), 1.0);
  EXPECT_DOUBLE_EQ(ev("8-4-2"), 2.0);
  EXPECT_DOUBLE_EQ(ev("2^3^2"), 512.0);  // right associative
  EXPECT_DOUBLE_EQ(ev("-2^2"), -4.0);    // power binds tighter than unary minus
  EXPECT_DOUBLE_EQ(ev("2^-1"), 0.5);
  EXPECT_DOUBLE_EQ(ev("2*-3"), -6.0);
  EXPECT_DOUBLE_EQ(ev("--3"), 3.0);
  EXPECT_DOUBLE_EQ(ev("x1*x2^2", {3.0, 2.0}), 12.0);
}

TEST(Expr, NumbersAndFunctions) {
  EXPECT_DOUBLE_EQ(ev("1.5e2"), 150.0);
  EXPECT_DOUBLE_EQ(ev(".25"), 0.25);
  EXPECT_DOUBLE_EQ(ev("2E-1"), 0.2);
  EXPECT_DOUBLE_EQ(ev("exp(1)"), std::exp(1.0));
  EXPECT_DOUBLE_EQ(ev("log(2)"), std::log(2.0));
  EXPECT_DOUBLE_EQ(ev("sin(x1)+cos(x2)", {0.3, 0.4}), std::sin(0.3) + std::cos(0.4));
  EXPECT_DOUBLE_EQ(ev("sqrt(  x1 )", {2.0, 0.0}), std::sqrt(2.0));
}

TEST(Expr, PrintIsFullyParenthesizedAndRoundTrips) {
  EXPECT_EQ(to_string(parse("1+2*x1", 1)), "(1+(2*x1))");
  EXPECT_EQ(to_string(parse("-x1^2", 1)), "(-(x1^2))");
  EXPECT_EQ(to_string(parse("exp(x1)", 1)), "exp(x1)");
  EXPECT_EQ(to_string(parse("0.1", 1)), "0.10000000000000001");
  const char* cases[] = {"4/(1+x1^2+x2^2)^2", "exp(-0.5*x1)*sin(3*x2)", "2^3^-1", "1+0.5*x1^2",
                         "log(2+cos(x1*x2))/sqrt(1+x1^2)", "--x2", "1e-300*x1"};
  for (const char* c : cases) {
    const Expr a = parse(c, 2);
    const std::string printed = to_string(a);
    const Expr b = parse(printed, 2);
    EXPECT_TRUE(a == b) << c;
    EXPECT_EQ(to_string(b), printed) << c;
    const std::vector<double> x{0.3, -0.7};
    EXPECT_EQ(eval(a, x), eval(b, x)) << c;
  }
}

TEST(Expr, ConstantDetection) {
  EXPECT_TRUE(parse("2*exp(1)", 2).is_constant());
  EXPECT_FALSE(parse("0*x1", 2).is_constant());
}

TEST(Expr, SyntaxErrorsCarryPositions) {
  auto position_of = [](const std::string& s) -> long {
    try {
      parse(s, 2);
    } catch (const SyntaxError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  EXPECT_EQ(position_of(""), 0);
  EXPECT_EQ(position_of("1+"), 2);
  EXPECT_EQ(position_of("(1+2"), 4);
  EXPECT_EQ(position_of("1 2"), 2);
  EXPECT_EQ(position_of("x1^x2"), 2);  // exponent must be constant
  EXPECT_EQ(position_of("sin x1"), 4);
  EXPECT_EQ(position_of("3*#"), 2);
  EXPECT_EQ(position_of("1e999"), 0);
}

TEST(Expr, UnknownSymbols) {
  EXPECT_THROW(parse("x3", 2), UnknownSymbol);
  EXPECT_THROW(parse("x0", 2), UnknownSymbol);
  EXPECT_THROW(parse("tan(x1)", 2), UnknownSymbol);
  EXPECT_THROW(parse("y", 2), UnknownSymbol);
  try {
    parse("1+foo", 2);
    FAIL();
  } catch (const UnknownSymbol& e) {
    EXPECT_EQ(e.position(), 2u);
  }
}

TEST(Expr, DomainErrorsAtEvaluation) {
  EXPECT_THROW(ev("log(x1)", {-1.0, 0.0}), DomainError);
  EXPECT_THROW(ev("1/x1", {0.0, 0.0}), DomainError);
  EXPECT_THROW(ev("sqrt(x1)", {-0.1, 0.0}), DomainError);
  EXPECT_THROW(ev("x1^0.5", {-2.0, 0.0}), DomainError);
  EXPECT_DOUBLE_EQ(ev("x1^3", {-2.0, 0.0}), -8.0);
}
