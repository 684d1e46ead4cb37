#include "lq/caps.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace lq {

namespace {

std::uint64_t parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  unsigned long long n = 0;
  try {
    n = std::stoull(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw std::invalid_argument("LQ_CAPS: bad value for " + key + ": " + value);
  return n;
}

}  // namespace

Caps Caps::parse(const std::string& overrides, Caps caps) {
  std::istringstream in(overrides);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("LQ_CAPS: expected key=value, got " + item);
    const std::string key = item.substr(0, eq);
    const std::uint64_t n = parse_number(key, item.substr(eq + 1));
    if (key == "max_complexity") {
      caps.max_complexity = static_cast<int>(n);
    } else if (key == "max_m") {
      caps.max_m = static_cast<int>(n);
    } else if (key == "max_types") {
      caps.max_types = n;
    } else if (key == "max_judgments") {
      caps.max_judgments = n;
    } else if (key == "max_ways") {
      caps.max_ways = n;
    } else if (key == "max_materialize") {
      caps.max_materialize = n;
    } else if (key == "step_budget") {
      caps.step_budget = n;
    } else if (key == "max_tree_nodes") {
      caps.max_tree_nodes = n;
    } else {
      throw std::invalid_argument("LQ_CAPS: unknown key " + key);
    }
  }
  return caps;
}

Caps Caps::parse(const std::string& overrides) { return parse(overrides, Caps{}); }

Caps Caps::from_env() {
  const char* env = std::getenv("LQ_CAPS");
  return env ? parse(env) : Caps{};
}

}  // namespace lq
