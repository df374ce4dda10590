#include "homoglab/sources.hpp"

#include "homoglab/error.hpp"

namespace homoglab::sources {

ScalarField standard() {
  return [](const Point& x) { return x[1] > 0.0 ? 1.0 + x[0] : (x[1] < 0.0 ? -(1.0 + x[0]) : 0.0); };
}

ScalarField zero() {
  return [](const Point&) { return 0.0; };
}

ScalarField minus_only() {
  return [](const Point& x) { return x[1] < 0.0 ? 1.0 + x[0] : 0.0; };
}

ScalarField plus_only() {
  return [](const Point& x) { return x[1] > 0.0 ? 1.0 + x[0] : 0.0; };
}

ScalarField one() {
  return [](const Point&) { return 1.0; };
}

ScalarField by_name(const std::string& name) {
  if (name == "standard") return standard();
  if (name == "zero") return zero();
  if (name == "minus-only") return minus_only();
  if (name == "plus-only") return plus_only();
  if (name == "one") return one();
  throw InvalidArgument("unknown source '" + name + "'");
}

std::vector<std::string> names() { return {"standard", "zero", "minus-only", "plus-only", "one"}; }

}  // namespace homoglab::sources
