#include "hnflow/config.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hnflow {

namespace {

struct ExprParser {
  const std::string& s;
  size_t pos = 0;
  const FieldPtr& field;

  void skipWs() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skipWs();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skipWs();
    return pos < s.size() ? s[pos] : '\0';
  }

  NFElem parseExpr() {
    NFElem acc = parseTerm();
    while (true) {
      if (eat('+'))
        acc = acc + parseTerm();
      else if (eat('-'))
        acc = acc - parseTerm();
      else
        return acc;
    }
  }

  NFElem parseTerm() {
    NFElem acc = parseFactor();
    while (true) {
      skipWs();
      if (eat('*'))
        acc = acc * parseFactor();
      else
        return acc;
    }
  }

  NFElem parseFactor() {
    bool neg = false;
    while (true) {
      if (eat('-'))
        neg = !neg;
      else if (eat('+'))
        continue;
      else
        break;
    }
    NFElem base = parseAtom();
    skipWs();
    if (eat('^')) {
      skipWs();
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (start == pos) throw ConfigError("scalar literal: exponent expected in '" + s + "'");
      long e = std::stol(s.substr(start, pos - start));
      NFElem p(Rat(1));
      for (long i = 0; i < e; ++i) p = p * base;
      base = p;
    }
    return neg ? -base : base;
  }

  NFElem parseAtom() {
    skipWs();
    if (eat('(')) {
      NFElem inner = parseExpr();
      if (!eat(')')) throw ConfigError("scalar literal: missing ')' in '" + s + "'");
      return inner;
    }
    if (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) {
      size_t start = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      Int num(s.substr(start, pos - start), 10);
      skipWs();
      if (pos < s.size() && s[pos] == '/') {
        // fraction only when followed by digits
        size_t save = pos;
        ++pos;
        skipWs();
        size_t dstart = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (dstart == pos) {
          pos = save;
          return NFElem(Rat(num));
        }
        Int den(s.substr(dstart, pos - dstart), 10);
        return NFElem(Rat(num, den));
      }
      return NFElem(Rat(num));
    }
    // symbol
    if (pos < s.size() &&
        (std::isalpha(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
      size_t start = pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
        ++pos;
      std::string name = s.substr(start, pos - start);
      if (!field) throw ConfigError("scalar literal uses symbol '" + name + "' but no field is declared");
      if (name != field->symbol())
        throw ConfigError("scalar literal symbol '" + name + "' does not match field symbol '" +
                          field->symbol() + "'");
      return NFElem::generator(field);
    }
    throw ConfigError("scalar literal: unexpected character in '" + s + "'");
  }
};

}  // namespace

NFElem parseScalarExpr(const std::string& text, const FieldPtr& field) {
  ExprParser p{text, 0, field};
  NFElem v = p.parseExpr();
  p.skipWs();
  if (p.pos != text.size()) throw ConfigError("scalar literal: trailing input in '" + text + "'");
  return v;
}

Rat parseRatField(const nlohmann::json& j, const std::string& what) {
  if (j.is_number_integer()) return Rat(j.get<long>());
  if (j.is_string()) {
    try {
      return Rat::fromString(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(what + ": " + e.what());
    }
  }
  throw ConfigError(what + ": rational literal expected");
}

Flow parseFlow(const nlohmann::json& weights, const std::string& what) {
  if (!weights.is_array() || weights.empty()) throw ConfigError(what + ": weight list expected");
  std::vector<Rat> w;
  for (const auto& e : weights) w.push_back(parseRatField(e, what));
  return Flow(std::move(w));
}

RunConfig RunConfig::fromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return fromJson(std::move(j));
}

RunConfig RunConfig::fromJson(nlohmann::json j) {
  RunConfig cfg;
  cfg.raw = std::move(j);
  if (!cfg.raw.is_object()) throw ConfigError("config: object expected");
  if (cfg.raw.contains("field")) {
    const auto& f = cfg.raw["field"];
    if (!f.contains("minpoly") || !f.contains("interval"))
      throw ConfigError("field: minpoly and interval required");
    std::vector<Rat> coeffs;
    for (const auto& c : f["minpoly"]) coeffs.push_back(parseRatField(c, "field.minpoly"));
    Rat lo = parseRatField(f["interval"][0], "field.interval");
    Rat hi = parseRatField(f["interval"][1], "field.interval");
    std::string symbol = f.value("symbol", std::string("t"));
    bool trusted = f.value("trusted", false);
    try {
      cfg.field = std::make_shared<NumberField>(std::move(coeffs), RatInterval(lo, hi), symbol,
                                                trusted);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("field: ") + e.what());
    }
  }
  if (cfg.raw.contains("dim")) {
    cfg.dim = cfg.raw["dim"].get<int>();
    if (cfg.dim < 1) throw ConfigError("dim must be >= 1");
  }
  cfg.seed = cfg.raw.value("seed", static_cast<std::uint64_t>(0));
  return cfg;
}

std::string canonicalJson(const nlohmann::json& j) {
  // nlohmann::json object keys are already sorted; dump without extra space
  return j.dump();
}

std::string digestHex(const std::string& payload) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : payload) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace hnflow
