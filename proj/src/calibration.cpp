#include <fstream>
#include <sstream>

#include "mtkit/experiments.hpp"

namespace mtk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Constants load_constants(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open constants file '" + path + "'");
  Constants c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key=value");
    try {
      c[trim(t.substr(0, eq))] = std::stod(trim(t.substr(eq + 1)));
    } catch (const std::exception&) {
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": value is not a number");
    }
  }
  return c;
}

void save_constants(const std::string& path, const Constants& c) {
  std::ostringstream os;
  for (const auto& [k, v] : c) os << k << '=' << fmt17(v) << '\n';
  write_text_file(path, os.str());
}

}  // namespace mtk
