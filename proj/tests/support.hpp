#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "deckit/parse.hpp"
#include "deckit/theory.hpp"

namespace support {

inline std::string corpus(const std::string& rel) { return std::string(DECKIT_CORPUS_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// corpus/theories/<name>.dth
inline deckit::Theory theory(const std::string& name,
                             std::vector<deckit::TryCatchSpec>* tries = nullptr) {
  return deckit::parse_theory(slurp(corpus("theories/" + name + ".dth")), tries);
}

inline deckit::Term term(const std::string& text, const deckit::Theory& th) {
  return deckit::parse_term(text, deckit::ParseContext{&th, nullptr});
}

inline deckit::Equation equation(const std::string& text, const deckit::Theory& th) {
  return deckit::parse_equation(text, deckit::ParseContext{&th, nullptr});
}

inline deckit::Value atom(const char* name) { return deckit::Value::atom(name); }
inline deckit::Value packet(const char* exc, const char* payload) {
  return deckit::Value::packet(exc, deckit::Value::atom(payload));
}

inline const std::vector<std::string>& theory_names() {
  static const std::vector<std::string> names = {
      "catchall", "comon", "copairs", "demo",   "eq",          "handlers",
      "mon",      "nested", "pairs",  "recovery", "states", "states_plus", "tags"};
  return names;
}

}  // namespace support
