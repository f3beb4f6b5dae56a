#include "plalam/types.hpp"

#include <algorithm>

namespace plalam {

std::string method_name(Method m) {
  switch (m) {
    case Method::plalam: return "plalam";
    case Method::plalam_mean: return "plalam_mean";
    case Method::plalam_notree: return "plalam_notree";
    case Method::plalam_noucb: return "plalam_noucb";
    case Method::cem: return "cem";
    case Method::cmaes: return "cmaes";
    case Method::random_shooting: return "random_shooting";
  }
  throw ConfigError("unknown method enum value");
}

Method parse_method(const std::string& name) {
  if (name == "plalam") return Method::plalam;
  if (name == "plalam_mean") return Method::plalam_mean;
  if (name == "plalam_notree") return Method::plalam_notree;
  if (name == "plalam_noucb") return Method::plalam_noucb;
  if (name == "cem") return Method::cem;
  if (name == "cmaes") return Method::cmaes;
  if (name == "random_shooting") return Method::random_shooting;
  throw ConfigError("unknown method: " + name);
}

std::vector<double> record_best(const std::vector<double>& values) {
  std::vector<double> best;
  best.reserve(values.size());
  double cur = -std::numeric_limits<double>::infinity();
  for (double v : values) {
    cur = std::max(cur, v);
    best.push_back(cur);
  }
  return best;
}

}  // namespace plalam
