#include "apsl/coeffile.hpp"

#include "apsl/errors.hpp"
#include "apsl/output.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace apsl {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

double parse_real(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw ParseError(line, "expected a decimal number, got '" + std::string(token) + "'");
  return value;
}

int parse_int(std::string_view token, int line) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  return value;
}

struct RawTerm {
  int line;
  double cos_amp;
  double sin_amp;
  std::vector<int> k;
};

struct RawSection {
  std::optional<double> constant;
  std::vector<RawTerm> terms;
};

std::string normalize_minus(std::string_view text) {
  // accept U+2212 MINUS SIGN alongside ASCII '-'
  std::string s(text);
  const std::string minus = "\xE2\x88\x92";
  for (auto pos = s.find(minus); pos != std::string::npos; pos = s.find(minus, pos)) s.replace(pos, minus.size(), "-");
  return s;
}

}  // namespace

CoefficientFile parse_coefficients(std::string_view input) {
  const std::string text = normalize_minus(input);
  std::optional<std::vector<double>> omega;
  std::map<std::string, RawSection> sections;
  std::string current;

  std::istringstream lines(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (name != "base" && name != "r" && name != "q" && name != "w")
        throw ParseError(line_no, "unknown section [" + name + "]");
      if (name == "base" ? omega.has_value() : sections.count(name) > 0)
        throw ParseError(line_no, "duplicate section [" + name + "]");
      current = name;
      if (name != "base") sections[name];
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (current.empty()) throw ParseError(line_no, "entry outside of any section");

    if (current == "base") {
      if (key != "omega") throw ParseError(line_no, "unknown key '" + key + "' in [base]");
      std::vector<double> gens;
      std::size_t start = 0;
      while (true) {
        const auto comma = value.find(',', start);
        gens.push_back(parse_real(value.substr(start, comma == std::string_view::npos ? value.npos : comma - start), line_no));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
      for (double g : gens)
        if (!(g > 0.0)) throw ParseError(line_no, "frequency generators must be strictly positive");
      omega = std::move(gens);
      continue;
    }

    auto& section = sections[current];
    if (key == "const") {
      if (section.constant) throw ParseError(line_no, "duplicate const in [" + current + "]");
      section.constant = parse_real(value, line_no);
    } else if (key == "term") {
      const auto at = value.find('@');
      if (at == std::string_view::npos) throw ParseError(line_no, "term needs 'A B @ k1 ... kd'");
      const auto amps = split_ws(value.substr(0, at));
      const auto ks = split_ws(value.substr(at + 1));
      if (amps.size() != 2) throw ParseError(line_no, "term needs exactly two amplitudes before '@'");
      if (ks.empty()) throw ParseError(line_no, "term needs at least one integer after '@'");
      RawTerm t{line_no, parse_real(amps[0], line_no), parse_real(amps[1], line_no), {}};
      for (auto k : ks) t.k.push_back(parse_int(k, line_no));
      section.terms.push_back(std::move(t));
    } else {
      throw ParseError(line_no, "unknown key '" + key + "' in [" + current + "]");
    }
  }

  if (!omega) throw ParseError(line_no, "missing [base] section with 'omega = ...'");
  FrequencyBase base(Eigen::Map<const Eigen::VectorXd>(omega->data(), static_cast<Eigen::Index>(omega->size())));

  auto build = [&](const std::string& name) {
    const auto it = sections.find(name);
    if (it == sections.end()) return TrigPolynomial(base);
    std::vector<TrigTerm> terms;
    for (const auto& t : it->second.terms) {
      if (static_cast<int>(t.k.size()) != base.dim())
        throw DimensionError("line " + std::to_string(t.line) + ": term has " + std::to_string(t.k.size()) +
                             " integers, base has dimension " + std::to_string(base.dim()));
      IntVector k = Eigen::Map<const IntVector>(t.k.data(), static_cast<Eigen::Index>(t.k.size()));
      if ((k.array() == 0).all()) throw ParseError(t.line, "term k-vector must be nonzero (use const)");
      for (const auto& other : terms)
        if ((other.k.array() == k.array()).all()) throw ParseError(t.line, "duplicate term k-vector");
      terms.push_back({k, t.cos_amp, t.sin_amp});
    }
    return TrigPolynomial(base, it->second.constant.value_or(0.0), std::move(terms));
  };
  auto r = build("r");
  auto q = build("q");
  auto w = build("w");
  return {CoefficientTriple(std::move(r), std::move(q), std::move(w))};
}

std::string render_coefficients(const CoefficientTriple& v) {
  std::ostringstream os;
  os << "[base]\nomega = ";
  const auto& g = v.base().generators();
  for (Eigen::Index j = 0; j < g.size(); ++j) os << (j ? ", " : "") << format_double(g[j]);
  os << "\n";
  auto section = [&](const char* name, const TrigPolynomial& f) {
    os << "[" << name << "]\n";
    if (f.constant() != 0.0 || f.terms().empty()) os << "const = " << format_double(f.constant()) << "\n";
    for (const auto& t : f.terms()) {
      os << "term = " << format_double(t.cos_amp) << " " << format_double(t.sin_amp) << " @";
      for (Eigen::Index j = 0; j < t.k.size(); ++j) os << " " << t.k[j];
      os << "\n";
    }
  };
  section("r", v.r());
  section("q", v.q());
  section("w", v.w());
  return os.str();
}

std::string render_coefficients(const CoefficientFile& file) { return render_coefficients(file.triple); }

CoefficientFile load_coefficients(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open coefficient file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coefficients(buf.str());
}

}  // namespace apsl
