#include "obart/serialize.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace obart {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& tok) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw std::runtime_error("bad numeric token '" + tok + "'");
  return v;
}

std::string escape_token(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (c == '%' || c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  if (out.empty()) out = "%00";  // empty strings survive tokenization
  return out;
}

std::string unescape_token(const std::string& s) {
  auto hexval = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%') {
      if (i + 2 >= s.size()) throw std::runtime_error("bad escape in token");
      const int hi = hexval(s[i + 1]);
      const int lo = hexval(s[i + 2]);
      if (hi < 0 || lo < 0) throw std::runtime_error("bad escape in token");
      const char c = static_cast<char>((hi << 4) | lo);
      if (c != '\0') out.push_back(c);
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

namespace {

void write_tree_line(std::ostream& os, const FrozenTree& t) {
  bool first = true;
  for (const auto& n : t.nodes) {
    if (!first) os << ' ';
    first = false;
    if (n.right < 0) {
      os << "L " << fmt_double(n.mu);
    } else if (const auto* cont = std::get_if<ContinuousRule>(&n.rule)) {
      os << "D " << fmt_double(cont->cut);
      for (double v : cont->phi) os << ' ' << fmt_double(v);
    } else {
      const auto& cat = std::get<CategoricalRule>(n.rule);
      os << "K " << cat.predictor << ' ' << cat.in_left.size();
      for (int code : cat.in_left) os << ' ' << code;
    }
  }
  os << '\n';
}

struct TokenCursor {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  explicit TokenCursor(const std::string& line) {
    std::istringstream ss(line);
    std::string t;
    while (ss >> t) toks.push_back(t);
  }
  const std::string& next(const char* what) {
    if (pos >= toks.size())
      throw std::runtime_error(std::string("truncated tree line, expected ") + what);
    return toks[pos++];
  }
  bool done() const { return pos == toks.size(); }
};

long parse_long(const std::string& tok) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::runtime_error("bad integer token '" + tok + "'");
  return v;
}

int read_node(TokenCursor& cur, int p_cont, FrozenTree& t) {
  const int slot = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  const std::string tag = cur.next("node tag");
  if (tag == "L") {
    t.nodes[slot].right = -1;
    t.nodes[slot].mu = parse_double(cur.next("leaf output"));
    return slot;
  }
  if (tag == "D") {
    ContinuousRule rule;
    rule.cut = parse_double(cur.next("cutpoint"));
    rule.phi.resize(static_cast<std::size_t>(p_cont));
    for (int j = 0; j < p_cont; ++j) rule.phi[j] = parse_double(cur.next("phi entry"));
    t.nodes[slot].rule = std::move(rule);
  } else if (tag == "K") {
    CategoricalRule rule;
    rule.predictor = static_cast<int>(parse_long(cur.next("predictor index")));
    const long m = parse_long(cur.next("subset size"));
    rule.in_left.resize(static_cast<std::size_t>(m));
    for (long i = 0; i < m; ++i)
      rule.in_left[i] = static_cast<int>(parse_long(cur.next("level code")));
    t.nodes[slot].rule = std::move(rule);
  } else {
    throw std::runtime_error("unknown node tag '" + tag + "'");
  }
  read_node(cur, p_cont, t);  // left child lands at slot+1
  t.nodes[slot].right = read_node(cur, p_cont, t);
  return slot;
}

std::string next_line(std::istream& is, const char* what) {
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error(std::string("unexpected end of model text, expected ") + what);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

void write_ensemble(std::ostream& os, const FrozenEnsemble& e) {
  os << "obliquebart v1\n";
  os << "config " << e.config.num_trees << ' ' << e.config.p_cont << ' ' << e.config.p_cat
     << ' ' << (e.config.mode == RuleMode::kOblique ? "oblique" : "axis") << ' '
     << fmt_double(e.config.alpha) << ' ' << fmt_double(e.config.beta) << ' '
     << fmt_double(e.config.tau) << ' ' << fmt_double(e.config.nu) << ' '
     << fmt_double(e.config.lambda) << ' ' << fmt_double(e.config.a_theta) << ' '
     << fmt_double(e.config.b_theta) << ' ' << fmt_double(e.config.prob_categorical)
     << ' ' << fmt_double(e.sigma2) << ' ' << fmt_double(e.theta) << '\n';
  for (const auto& t : e.trees) write_tree_line(os, t);
}

FrozenEnsemble read_ensemble(std::istream& is) {
  if (next_line(is, "header") != "obliquebart v1")
    throw std::runtime_error("bad ensemble header; expected 'obliquebart v1'");
  TokenCursor cfg(next_line(is, "config line"));
  if (cfg.next("config tag") != "config") throw std::runtime_error("missing config line");
  FrozenEnsemble e;
  e.config.num_trees = static_cast<int>(parse_long(cfg.next("M")));
  e.config.p_cont = static_cast<int>(parse_long(cfg.next("p_cont")));
  e.config.p_cat = static_cast<int>(parse_long(cfg.next("p_cat")));
  const std::string mode = cfg.next("mode");
  if (mode == "oblique") {
    e.config.mode = RuleMode::kOblique;
  } else if (mode == "axis") {
    e.config.mode = RuleMode::kAxisAligned;
  } else {
    throw std::runtime_error("unknown mode '" + mode + "'");
  }
  e.config.alpha = parse_double(cfg.next("alpha"));
  e.config.beta = parse_double(cfg.next("beta"));
  e.config.tau = parse_double(cfg.next("tau"));
  e.config.nu = parse_double(cfg.next("nu"));
  e.config.lambda = parse_double(cfg.next("lambda"));
  e.config.a_theta = parse_double(cfg.next("a_theta"));
  e.config.b_theta = parse_double(cfg.next("b_theta"));
  e.config.prob_categorical = parse_double(cfg.next("prob_categorical"));
  e.sigma2 = parse_double(cfg.next("sigma2"));
  e.theta = parse_double(cfg.next("theta"));
  if (!cfg.done()) throw std::runtime_error("trailing tokens on config line");

  e.trees.reserve(static_cast<std::size_t>(e.config.num_trees));
  for (int m = 0; m < e.config.num_trees; ++m) {
    TokenCursor cur(next_line(is, "tree line"));
    FrozenTree t;
    read_node(cur, e.config.p_cont, t);
    if (!cur.done()) throw std::runtime_error("trailing tokens on tree line");
    e.trees.push_back(std::move(t));
  }
  return e;
}

}  // namespace obart
