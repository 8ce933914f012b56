#include "seqrule/dsl.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace seqrule {

std::string format_double(double value) {
  char buf[64];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    if (std::strtod(buf, nullptr) == value) break;
  }
  return buf;
}

namespace {

struct Token {
  std::string text;
  int column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#')
      ++i;
    tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return tokens;
}

class LineParser {
 public:
  LineParser(int line_no, std::vector<Token> tokens)
      : line_(line_no), tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }

  const Token& peek() const {
    if (done()) throw ParseError(line_, end_column(), "unexpected end of line");
    return tokens_[pos_];
  }

  Token next() {
    Token t = peek();
    ++pos_;
    return t;
  }

  void expect(const std::string& word) {
    Token t = next();
    if (t.text != word)
      throw ParseError(line_, t.column, "expected '" + word + "', got '" + t.text + "'");
  }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    throw ParseError(line_, t.column, message);
  }

  int line() const { return line_; }
  int end_column() const {
    return tokens_.empty() ? 1 : tokens_.back().column + static_cast<int>(tokens_.back().text.size());
  }

 private:
  int line_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

int parse_int(LineParser& p, const Token& t, const std::string& what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(t.text, &used);
    if (used != t.text.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    p.fail(t, "expected " + what + ", got '" + t.text + "'");
  }
}

// `cur[3]`, `past[-1,1,4][7]`, `past[*][2]`
Literal parse_literal(LineParser& p, TemporalComponent& temporal, int vocab) {
  Token t = p.next();
  bool negated = false;
  if (t.text == "NOT") {
    negated = true;
    t = p.next();
  }

  const std::string& s = t.text;
  Literal lit;
  lit.polarity = negated ? Polarity::kNegated : Polarity::kPositive;

  auto parse_code = [&](const std::string& body) {
    try {
      std::size_t used = 0;
      int code = std::stoi(body, &used);
      if (used != body.size() || code < 0) throw std::invalid_argument("");
      if (vocab >= 0 && code >= vocab)
        p.fail(t, "code " + std::to_string(code) + " out of vocabulary (VOCAB " +
                      std::to_string(vocab) + ")");
      return code;
    } catch (const ParseError&) {
      throw;
    } catch (const std::exception&) {
      p.fail(t, "expected code index in '" + s + "'");
    }
  };

  if (s.rfind("cur[", 0) == 0 && s.back() == ']') {
    lit.scope = Scope::kCurrent;
    lit.code = parse_code(s.substr(4, s.size() - 5));
    return lit;
  }
  if (s.rfind("past[", 0) == 0 && s.back() == ']') {
    std::size_t mid = s.find("][");
    if (mid == std::string::npos) p.fail(t, "expected past[<tc>][<code>] in '" + s + "'");
    std::string tc_body = s.substr(5, mid - 5);
    std::string code_body = s.substr(mid + 2, s.size() - mid - 3);

    std::stringstream ss(tc_body);
    std::string item;
    bool saw_any = false;
    while (std::getline(ss, item, ',')) {
      saw_any = true;
      if (item == "*") {
        temporal.set_all_past(true);
      } else {
        try {
          std::size_t used = 0;
          int k = std::stoi(item, &used);
          if (used != item.size() || k == 0) throw std::invalid_argument("");
          temporal.add_index(k);
        } catch (const std::exception&) {
          p.fail(t, "bad temporal selector '" + item + "' in '" + s + "'");
        }
      }
    }
    if (!saw_any) p.fail(t, "empty temporal selector in '" + s + "'");
    lit.scope = Scope::kHistory;
    lit.code = parse_code(code_body);
    return lit;
  }
  p.fail(t, "expected literal (cur[...] or past[...][...]), got '" + s + "'");
}

}  // namespace

RuleSet parse_rules(const std::string& text) {
  RuleSet rs;
  bool have_vocab = false;

  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    LineParser p(line_no, tokenize(line));
    if (p.done()) continue;

    Token head = p.next();
    if (head.text == "VOCAB") {
      if (have_vocab) p.fail(head, "duplicate VOCAB declaration");
      Token n = p.next();
      int v = parse_int(p, n, "vocabulary size");
      if (v <= 0) p.fail(n, "vocabulary size must be positive");
      rs.vocab_size = v;
      have_vocab = true;
      if (!p.done()) p.fail(p.peek(), "trailing tokens after VOCAB");
      continue;
    }
    if (head.text != "RULE")
      p.fail(head, "expected VOCAB or RULE, got '" + head.text + "'");
    if (!have_vocab) p.fail(head, "VOCAB must precede all rules");

    Rule rule;
    rule.id = p.next().text;

    Token kw = p.next();
    if (kw.text == "WHEN") {
      while (true) {
        rule.antecedent.push_back(parse_literal(p, rule.temporal, rs.vocab_size));
        Token sep = p.next();
        if (sep.text == "AND") continue;
        if (sep.text == "THEN") break;
        p.fail(sep, "expected AND or THEN, got '" + sep.text + "'");
      }
    } else if (kw.text != "THEN") {
      p.fail(kw, "expected WHEN or THEN, got '" + kw.text + "'");
    }

    Token out = p.next();
    rule.output_code = parse_int(p, out, "output code");
    if (rule.output_code < 0 || rule.output_code >= rs.vocab_size)
      p.fail(out, "output code out of vocabulary");
    p.expect("=");
    Token alpha_tok = p.next();
    char* end = nullptr;
    double alpha = std::strtod(alpha_tok.text.c_str(), &end);
    if (end != alpha_tok.text.c_str() + alpha_tok.text.size())
      p.fail(alpha_tok, "expected alpha value, got '" + alpha_tok.text + "'");
    if (!(alpha >= 0.0 && alpha <= 1.0)) p.fail(alpha_tok, "alpha out of range [0,1]");
    rule.alpha = alpha;
    if (!p.done()) p.fail(p.peek(), "trailing tokens after rule");

    rs.rules.push_back(std::move(rule));
  }

  if (!have_vocab && !rs.rules.empty())
    throw ParseError(1, 1, "missing VOCAB declaration");
  return rs;
}

namespace {

std::string render_temporal(const TemporalComponent& tc) {
  std::string out;
  for (int k : tc.indices()) {
    if (!out.empty()) out += ",";
    out += std::to_string(k);
  }
  if (tc.has_all_past()) {
    if (!out.empty()) out += ",";
    out += "*";
  }
  return out;
}

}  // namespace

std::string serialize_rules(const RuleSet& rs) {
  std::ostringstream os;
  os << "VOCAB " << rs.vocab_size << "\n";
  for (const auto& rule : rs.rules) {
    os << "RULE " << rule.id;
    if (!rule.antecedent.empty()) {
      os << " WHEN";
      bool first = true;
      for (const auto& lit : rule.antecedent) {
        os << (first ? " " : " AND ");
        first = false;
        if (lit.negated()) os << "NOT ";
        if (lit.scope == Scope::kCurrent)
          os << "cur[" << lit.code << "]";
        else
          os << "past[" << render_temporal(rule.temporal) << "][" << lit.code << "]";
      }
    }
    os << " THEN " << rule.output_code << " = " << format_double(rule.alpha) << "\n";
  }
  return os.str();
}

}  // namespace seqrule
