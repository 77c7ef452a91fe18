#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace henon {

struct ZeroParameter : std::domain_error {
  ZeroParameter() : std::domain_error("evaluation at t=0 with negative-exponent support") {}
};

struct ZeroDivision : std::domain_error {
  ZeroDivision() : std::domain_error("series inversion of the zero polynomial") {}
  explicit ZeroDivision(const std::string& what) : std::domain_error(what) {}
};

struct DegenerateFamily : std::invalid_argument {
  explicit DegenerateFamily(const std::string& what) : std::invalid_argument(what) {}
};

struct InsufficientPrecision : std::runtime_error {
  explicit InsufficientPrecision(const std::string& what) : std::runtime_error(what) {}
};

// A tropical step where the minimum is attained by more than one term: the
// image order is undetermined without the actual coefficients.
struct TropicalTie : std::runtime_error {
  std::vector<int> minimizers;  // candidate indices: 0 = x^d, 1..d = a_i term, d+1 = a*y
  explicit TropicalTie(std::vector<int> mins)
      : std::runtime_error("tropical step: minimum attained by multiple terms"),
        minimizers(std::move(mins)) {}
};

struct InvalidRadius : std::invalid_argument {
  explicit InvalidRadius(const std::string& what) : std::invalid_argument(what) {}
};

struct ParameterTooLarge : std::invalid_argument {
  explicit ParameterTooLarge(const std::string& what) : std::invalid_argument(what) {}
};

struct OrbitEscaped : std::runtime_error {
  int step;
  explicit OrbitEscaped(int n) : std::runtime_error("orbit left the bailout radius"), step(n) {}
};

struct NonFiniteField : std::runtime_error {
  explicit NonFiniteField(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetExceeded : std::invalid_argument {
  explicit BudgetExceeded(const std::string& what) : std::invalid_argument(what) {}
};

struct StructureViolation : std::logic_error {
  explicit StructureViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace henon
